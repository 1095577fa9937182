# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
"""Deterministic discrete-event core.

Simulation time is an integer number of microseconds since the start of a
run. Events are dispatched in the strict total order of ``(fire_at, seq)``,
where ``seq`` is a monotone counter assigned at scheduling time, so a run is
a pure function of its scenario and seed.
"""
import enum
import heapq
import logging
import numbers
from hashlib import sha1

import numpy as np

from .errors import SimulationFault


logger = logging.getLogger(__name__)

MICROS_PER_MS = 1000
MICROS_PER_SECOND = 1000 * MICROS_PER_MS


def ms(value):
    "Convert a duration in milliseconds to simulation time."
    return int(round(value * MICROS_PER_MS))


def seconds(value):
    "Convert a duration in seconds to simulation time."
    return int(round(value * MICROS_PER_SECOND))


class EventKind(enum.Enum):
    """Tags of all events known to the device models."""
    ADVERTISE_START = 'advertise-start'
    TX_START = 'tx-start'
    TX_END = 'tx-end'
    CHANNEL_HOP = 'channel-hop'
    SCAN_WINDOW_START = 'scan-window-start'
    SCAN_WINDOW_END = 'scan-window-end'
    SLEEP_END = 'sleep-end'
    FORWARD_SLOT = 'forward-slot'
    GATEWAY_FREE = 'gateway-free'

    def __str__(self):
        return self.value


class Event(object):
    """A scheduled occurrence addressed to one device.

    :param fire_at:
        The simulation time in microseconds.
    :param seq:
        The tiebreak counter; ``(fire_at, seq)`` is unique per queue.
    :param target:
        The id of the device that handles the event.
    :param kind:
        The :class:`EventKind` tag.
    :param token:
        Optional device-local state token; a device ignores events whose
        token no longer matches its own (superseded events).
    :param payload:
        Optional kind-specific payload, e.g. a transmission.
    """
    __slots__ = ('fire_at', 'seq', 'target', 'kind', 'token', 'payload')

    def __init__(self, fire_at, seq, target, kind, token=None, payload=None):
        self.fire_at = fire_at
        self.seq = seq
        self.target = target
        self.kind = kind
        self.token = token
        self.payload = payload

    @property
    def key(self):
        return (self.fire_at, self.seq)

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return "Event(fire_at={}, seq={}, target='{}', kind='{}')".format(
            self.fire_at, self.seq, self.target, self.kind)

    def describe(self):
        return '' if self.payload is None else str(self.payload)


class EventQueue(object):
    """Priority queue of events ordered by ``(fire_at, seq)``."""

    def __init__(self):
        self._heap = []
        self._seq = 0
        self.clock = 0
        self.num_scheduled = 0
        self.num_dispatched = 0

    def __len__(self):
        return len(self._heap)

    def next_seq(self):
        self._seq += 1
        return self._seq

    def schedule(self, event):
        """Insert an event.

        :raises SimulationFault:
            If the event would fire before the current clock.
        """
        if event.fire_at < self.clock:
            raise SimulationFault(
                "Attempted to schedule {!r} in the past (clock={}).".format(event, self.clock))
        heapq.heappush(self._heap, (event.fire_at, event.seq, event))
        self.num_scheduled += 1
        return self

    def peek_time(self):
        return self._heap[0][0] if self._heap else None

    def pop_next(self):
        "Remove and return the next event, advancing the clock to its time."
        fire_at, _, event = heapq.heappop(self._heap)
        self.clock = fire_at
        self.num_dispatched += 1
        return event

    def advance(self, time):
        if time < self.clock:
            raise SimulationFault("The clock cannot move backwards.")
        self.clock = time


class RngStream(object):
    """Reproducible random stream for one (seed, stream_id) pair.

    Each device draws from its own stream, so adding or removing a device
    does not perturb the draws of any other device.
    """

    def __init__(self, seed, stream_id):
        self.seed = int(seed)
        self.stream_id = str(stream_id)
        digest = sha1(self.stream_id.encode('utf-8')).digest()
        entropy = [self.seed & 0xFFFFFFFFFFFFFFFF, int.from_bytes(digest[:8], 'little')]
        self._generator = np.random.default_rng(np.random.SeedSequence(entropy))

    def __repr__(self):
        return "RngStream(seed={}, stream_id='{}')".format(self.seed, self.stream_id)

    def uniform_draw(self, lo, hi):
        """Draw a value from the closed range ``[lo, hi]``.

        Integer bounds yield integers (both bounds inclusive), otherwise a float
        is returned.

        :raises ValueError:
            If ``lo > hi``.
        """
        if lo > hi:
            raise ValueError("Invalid range [{}, {}].".format(lo, hi))
        if lo == hi:
            return lo
        if isinstance(lo, numbers.Integral) and isinstance(hi, numbers.Integral):
            return int(self._generator.integers(lo, hi, endpoint=True))
        return float(self._generator.uniform(lo, hi))

    def random(self):
        return float(self._generator.random())

    def bernoulli(self, p):
        "Return True with probability p."
        if p >= 1:
            return True
        if p <= 0:
            return False
        return self.random() < p


class Simulation(object):
    """One deterministic simulation run.

    The simulation owns the clock and event queue, the devices, the radio
    medium and the packet ledger. Devices are registered with
    :meth:`add_device` and started lazily on the first call to
    :meth:`run_until`.

    :param seed:
        The seed from which all random streams are derived.
    :param trace:
        Record one line per dispatched event.
    """

    def __init__(self, seed=0, trace=False):
        self.seed = seed
        self.queue = EventQueue()
        self.devices = dict()
        self.medium = None
        self.ledger = None
        self._streams = dict()
        self._started = False
        self._trace = [] if trace else None

    @property
    def now(self):
        return self.queue.clock

    def add_device(self, device):
        if device.id in self.devices:
            raise SimulationFault("Duplicate device id '{}'.".format(device.id))
        self.devices[device.id] = device
        device.attach(self)
        return device

    def rng(self, stream_id):
        "Return the random stream with the given id."
        try:
            return self._streams[stream_id]
        except KeyError:
            stream = self._streams[stream_id] = RngStream(self.seed, stream_id)
            return stream

    def schedule(self, fire_at, target, kind, token=None, payload=None):
        event = Event(fire_at, self.queue.next_seq(), target, kind, token, payload)
        self.queue.schedule(event)
        return event

    def start(self):
        if not self._started:
            self._started = True
            for device in self.devices.values():
                device.start()

    def run_until(self, end):
        """Dispatch all events with ``fire_at <= end`` and advance the clock to end.

        :param end:
            The end time in microseconds.
        :raises ValueError:
            If end is not positive or lies before the current clock.
        """
        if end <= 0 or end < self.now:
            raise ValueError("Invalid end time {} (clock={}).".format(end, self.now))
        self.start()
        queue = self.queue
        while queue and queue.peek_time() <= end:
            self._dispatch(queue.pop_next())
        queue.advance(end)
        logger.debug("Dispatched {} event(s) until t={}us.".format(queue.num_dispatched, end))
        return self

    def _dispatch(self, event):
        if self._trace is not None:
            self._trace.append('{}\t{}\t{}\t{}'.format(
                event.fire_at, event.target, event.kind, event.describe()))
        self.devices[event.target].handle(event)

    @property
    def trace(self):
        return [] if self._trace is None else list(self._trace)

    def dumps_trace(self):
        return ''.join(line + '\n' for line in self.trace)

    def write_trace(self, file):
        file.write(self.dumps_trace())
