# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
"""Shared radio medium of the three BLE advertising channels.

A transmission occupies one channel for the half-open interval
``[start, end)``. When it ends, the medium decides for every listener
whether the packet was captured or why it was lost, in this order:

1. ``unreachable``: the per-link draw made at transmission start failed;
2. ``asleep``: the listener slept at any point of the interval;
3. ``rx-busy``: the listener was transmitting or otherwise busy;
4. ``not-tuned``: the listener was not listening on the channel for the
   whole interval;
5. ``collision``: another transmission on the same channel that also
   reaches the listener overlapped the interval. Both packets are lost.
"""
import enum
import logging

from .engine import EventKind
from .errors import SimulationFault


logger = logging.getLogger(__name__)

ADVERTISING_CHANNELS = (37, 38, 39)

DEFAULT_AIRTIME_US = 300
DEFAULT_CHANNEL_GAP_US = 400

# Radio history older than this is never needed for a capture decision.
_HISTORY_HORIZON_US = 100000


class Capture(enum.Enum):
    """Outcome of one (transmission, listener) pair."""
    RECEIVED = 'received'
    UNREACHABLE = 'unreachable'
    ASLEEP = 'asleep'
    RX_BUSY = 'rx-busy'
    NOT_TUNED = 'not-tuned'
    COLLISION = 'collision'

    def __str__(self):
        return self.value

    @property
    def is_loss(self):
        return self is not Capture.RECEIVED


LOSS_REASONS = tuple(c for c in Capture if c.is_loss)


class RadioMode(enum.Enum):
    OFF = 'off'
    SLEEP = 'sleep'
    BUSY = 'busy'
    LISTENING = 'listening'
    TRANSMITTING = 'transmitting'

    def __str__(self):
        return self.value


class RadioState(object):
    """Piecewise-constant history of a device's radio.

    Every change is stored as a ``(since, mode, channel)`` segment. Old
    segments are pruned, unless ``record`` is enabled, in which case the full
    history is additionally kept in :attr:`log`.
    """

    def __init__(self, record=False):
        self._history = [(0, RadioMode.OFF, None)]
        self.log = [(0, RadioMode.OFF, None)] if record else None

    @property
    def mode(self):
        return self._history[-1][1]

    @property
    def channel(self):
        return self._history[-1][2]

    @property
    def since(self):
        return self._history[-1][0]

    def set(self, now, mode, channel=None):
        last_since, last_mode, last_channel = self._history[-1]
        if now < last_since:
            raise SimulationFault("Radio state changes must be chronological.")
        if mode is last_mode and channel == last_channel:
            return
        if self.log is not None:
            if self.log[-1][0] == now:
                self.log.pop()
            if not self.log or self.log[-1][1:] != (mode, channel):
                self.log.append((now, mode, channel))
        if now == last_since:
            self._history.pop()
            if self._history and self._history[-1][1:] == (mode, channel):
                return
        self._history.append((now, mode, channel))
        if len(self._history) > 64:
            self._prune(now - _HISTORY_HORIZON_US)

    def _prune(self, before):
        history = self._history
        for i in range(len(history) - 1, -1, -1):
            if history[i][0] <= before:
                del history[:i]
                break

    def states_during(self, start, end):
        """Return the (mode, channel) pairs in effect during ``[start, end)``."""
        states = []
        for since, mode, channel in reversed(self._history):
            if since < end:
                states.append((mode, channel))
            if since <= start:
                break
        return states


class Transmission(object):
    """One packet on one advertising channel."""
    __slots__ = ('packet', 'channel', 'tx_device', 'start', 'end', 'reach')

    def __init__(self, packet, channel, tx_device, start, end):
        if channel not in ADVERTISING_CHANNELS:
            raise ValueError("Invalid advertising channel {}.".format(channel))
        if end <= start:
            raise ValueError("A transmission must have positive airtime.")
        self.packet = packet
        self.channel = channel
        self.tx_device = tx_device
        self.start = start
        self.end = end
        self.reach = frozenset()

    @property
    def airtime(self):
        return self.end - self.start

    def overlaps(self, other):
        return self.start < other.end and other.start < self.end

    def __str__(self):
        return 'ch{} {}'.format(self.channel, self.packet)

    def __repr__(self):
        return "Transmission({}, ch={}, tx='{}', [{}, {}))".format(
            self.packet, self.channel, self.tx_device, self.start, self.end)


class LinkMatrix(object):
    """Per-pair reception probabilities.

    Explicit entries take precedence over the role defaults. A device never
    reaches itself.

    :param roles:
        Mapping of device id to role (``node``, ``noise``, ``relay`` or
        ``gateway``).
    :param role_defaults:
        Mapping of ``(tx_role, rx_role)`` to a probability; missing pairs
        default to 0.
    """

    def __init__(self, roles=None, role_defaults=None):
        self.roles = dict(roles or {})
        self.role_defaults = dict(role_defaults or {})
        self._links = dict()

    def set(self, tx, rx, p):
        if tx == rx:
            raise ValueError("A device cannot link to itself ('{}').".format(tx))
        if not 0 <= p <= 1:
            raise ValueError("Link probability {} is not in [0, 1].".format(p))
        self._links[(tx, rx)] = p

    def reach(self, tx, rx):
        if tx == rx:
            return 0.0
        try:
            return self._links[(tx, rx)]
        except KeyError:
            role_pair = (self.roles.get(tx), self.roles.get(rx))
            return self.role_defaults.get(role_pair, 0.0)


class Medium(object):
    """Delivers transmissions to listening devices and records every decision.

    :param sim:
        The owning :class:`~.engine.Simulation`.
    :param links:
        The :class:`LinkMatrix`.
    :param record:
        Keep every transmission and decision (for inspection in tests).
    """

    def __init__(self, sim, links, record=False):
        self.sim = sim
        self.links = links
        self.listeners = []
        self._on_air = {channel: [] for channel in ADVERTISING_CHANNELS}
        self._max_airtime = 0
        self.transmissions = [] if record else None
        self.decisions = [] if record else None

    def add_listener(self, device):
        self.listeners.append(device)
        if self.sim.ledger is not None:
            self.sim.ledger.add_listener(device.id)

    def begin_transmission(self, transmission):
        """Put a transmission on air and draw its per-listener reach.

        :raises SimulationFault:
            If the transmitting device is already transmitting.
        """
        device = self.sim.devices[transmission.tx_device]
        if device.radio.mode is RadioMode.TRANSMITTING:
            raise SimulationFault("Device '{}' cannot transmit {!r} while transmitting.".format(
                device.id, transmission))
        reach = []
        for listener in self.listeners:
            if listener.id == transmission.tx_device:
                continue
            p = self.links.reach(transmission.tx_device, listener.id)
            if p > 0 and self.sim.rng('link:' + listener.id).bernoulli(p):
                reach.append(listener.id)
        transmission.reach = frozenset(reach)
        device.radio.set(transmission.start, RadioMode.TRANSMITTING, transmission.channel)
        self._on_air[transmission.channel].append(transmission)
        self._max_airtime = max(self._max_airtime, transmission.airtime)
        if self.transmissions is not None:
            self.transmissions.append(transmission)
        self.sim.schedule(
            transmission.end, transmission.tx_device, EventKind.TX_END, payload=transmission)

    def capture_decision(self, listener, transmission):
        "Decide whether listener captured transmission, see module docstring for the order."
        if listener.id not in transmission.reach:
            return Capture.UNREACHABLE
        states = listener.radio.states_during(transmission.start, transmission.end)
        if any(mode is RadioMode.SLEEP for mode, _ in states):
            return Capture.ASLEEP
        if any(mode in (RadioMode.TRANSMITTING, RadioMode.BUSY) for mode, _ in states):
            return Capture.RX_BUSY
        if any(mode is not RadioMode.LISTENING or channel != transmission.channel
               for mode, channel in states):
            return Capture.NOT_TUNED
        for other in self._on_air[transmission.channel]:
            if other is not transmission and listener.id in other.reach \
                    and other.overlaps(transmission):
                return Capture.COLLISION
        return Capture.RECEIVED

    def end_transmission(self, transmission):
        """Decide the transmission for every listener and deliver captured packets."""
        ledger = self.sim.ledger
        for listener in self.listeners:
            if listener.id == transmission.tx_device:
                continue
            capture = self.capture_decision(listener, transmission)
            if ledger is not None:
                ledger.record_decision(listener.id, capture)
            if self.decisions is not None:
                self.decisions.append((transmission, listener.id, capture))
            if capture is Capture.RECEIVED:
                listener.on_receive(transmission.packet, transmission)
        self._expire(transmission.channel, transmission.end)

    def _expire(self, channel, now):
        horizon = now - self._max_airtime
        self._on_air[channel] = [t for t in self._on_air[channel] if t.end > horizon]
