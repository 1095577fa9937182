# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
"""The duty-cycled relay.

The relay cycles through three phases::

    LISTEN --(listen time over)--> FORWARD --(echoes sent)--> SLEEP --> LISTEN

With the *immediate* policy, forwarding interleaves with listening: every
counted member packet switches the radio to advertising for exactly one
echo event, after which the relay resumes its scan cycle. With the
*batching* policy, the relay only buffers per-node counts while listening
and sends all echoes after the listen phase. The *listen* policy never
forwards.
"""
import enum
import logging
from collections import deque

from ..engine import EventKind, ms
from ..ledger import Reception
from ..medium import ADVERTISING_CHANNELS, RadioMode
from ..util.misc import roundrobin
from .base import Scanner


logger = logging.getLogger(__name__)

_COUNTER_LIMIT = 255


class Phase(enum.Enum):
    LISTEN = 'listen'
    FORWARD = 'forward'
    SLEEP = 'sleep'

    def __str__(self):
        return self.value


class Relay(Scanner):
    """Relay between the nodes and the gateway.

    :param config:
        A :class:`~blerelay.scenario.RelayConfig`.
    """
    role = 'relay'
    gap_mode = RadioMode.BUSY

    def __init__(self, config, record=False):
        super(Relay, self).__init__(
            config.id, ms(config.scan_interval), ms(config.scan_window), config.hop_latency_us,
            config.airtime_us, config.channel_gap_us, record=record)
        self.config = config
        self.policy = config.policy
        self.listen_time = ms(config.listen_phase)
        self.sleep_time = ms(config.sleep_time)
        self.mode_switch_latency = config.mode_switch_latency_us
        self.phase = None
        self.counts = dict()
        self.forwarded = 0
        self.time_asleep = 0
        self._latest = dict()
        self._queue = deque()
        self._echo_seq = 0
        self._slot = None
        self._last_was_duplicate = False
        self._forward_dwell = None
        self._phase_over = False
        self._sleep_since = None

    def start(self):
        self._begin_listen(0)

    def duty_cycle(self, now=None):
        "The measured fraction of time not spent asleep."
        now = self.sim.now if now is None else now
        if now <= 0:
            return 1.0
        asleep = self.time_asleep
        if self._sleep_since is not None:
            asleep += now - self._sleep_since
        return 1.0 - asleep / now

    def plan_batch(self, counts):
        """Return the origins to echo after a listen phase, in transmission order.

        Every heard origin gets ``nr_repeats`` slots (or at most as many as
        packets were heard, if the policy counts receptions); the slots of
        different origins are interleaved.
        """
        repeats = self.policy.nr_repeats
        slots = []
        for origin, count in counts.items():
            if count <= 0:
                continue
            num = repeats if self.policy.echo_count == 'fixed' else min(count, repeats)
            slots.append([origin] * num)
        return list(roundrobin(*slots))

    def _begin_listen(self, now):
        self.phase = Phase.LISTEN
        self._phase_over = False
        self.counts = dict()
        self._latest = dict()
        self.start_scanning(now, now + self.listen_time)

    def on_receive(self, packet, transmission):
        now = self.sim.now
        reception = self.sim.ledger.record_relay_reception(self.id, packet, now)
        if reception is not Reception.COUNTED:
            return
        if self.policy.kind == 'immediate':
            if self.config.echo_channels == 'all':
                channels = ADVERTISING_CHANNELS
            else:
                channels = (self.channel,)
            self._forward_dwell = self.dwell
            self._queue.append((packet, channels, False))
            self._switch_to_advertising(now)
        elif self.policy.kind == 'batching':
            self.counts[packet.origin] = min(self.counts.get(packet.origin, 0) + 1,
                                             _COUNTER_LIMIT)
            self._latest[packet.origin] = packet

    def _switch_to_advertising(self, now):
        self.busy = True
        self.radio.set(now, RadioMode.BUSY)
        self.sim.schedule(now + self.mode_switch_latency, self.id, EventKind.FORWARD_SLOT)

    def _on_forward_slot(self, event):
        packet, channels, duplicate = self._queue.popleft()
        self._echo_seq += 1
        echo = packet.echo(self.id, self._echo_seq)
        if not duplicate:
            self.forwarded += 1
        self._last_was_duplicate = duplicate
        self.sim.ledger.record_echo_sent(echo, duplicate)
        self._slot = event.fire_at
        self.begin_advertising_event(echo, channels)

    def advertising_event_done(self, now, packet):
        if self.policy.kind == 'immediate':
            if not self._last_was_duplicate and \
                    self.rng.bernoulli(self.config.duplicate_probability):
                self._queue.append((packet, self._tx_channels, True))
            if self._queue:
                self.radio.set(now, RadioMode.BUSY)
                self.sim.schedule(now, self.id, EventKind.FORWARD_SLOT)
                return
        elif self._queue:
            self.radio.set(now, RadioMode.BUSY)
            slot = max(self._slot + ms(self.policy.repeat_interval), now)
            self.sim.schedule(slot, self.id, EventKind.FORWARD_SLOT)
            return
        self._finish_forwarding(now)

    def _finish_forwarding(self, now):
        self.busy = False
        if self.phase is Phase.FORWARD:
            self._sleep_or_listen(now)
            return
        if self.config.one_forward_per_interval and self.dwell == self._forward_dwell:
            self._dwell_done = True
        if self._phase_over:
            self._end_listen(now)
        else:
            self.resume(now)

    def scan_phase_over(self, now):
        self.new_token()
        if self.busy:
            self._phase_over = True
        else:
            self._end_listen(now)

    def _end_listen(self, now):
        self._phase_over = False
        if self.policy.kind == 'batching':
            plan = self.plan_batch(self.counts)
            latest = self._latest
            self.counts = dict()
            self._latest = dict()
            if plan:
                logger.debug("Relay '{}' sends {} echo event(s) at t={}us.".format(
                    self.id, len(plan), now))
                self.phase = Phase.FORWARD
                for origin in plan:
                    self._queue.append((latest[origin], ADVERTISING_CHANNELS, False))
                self._switch_to_advertising(now)
                return
        self._sleep_or_listen(now)

    def _sleep_or_listen(self, now):
        if self.sleep_time > 0:
            self.phase = Phase.SLEEP
            self.radio.set(now, RadioMode.SLEEP)
            self._sleep_since = now
            self.sim.schedule(now + self.sleep_time, self.id, EventKind.SLEEP_END)
        else:
            self._begin_listen(now)

    def _on_sleep_end(self, event):
        now = event.fire_at
        self.time_asleep += now - self._sleep_since
        self._sleep_since = None
        self._begin_listen(now)
