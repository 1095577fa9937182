# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
"""Common device behavior: event dispatch, advertising events and scanning."""
import logging
from dataclasses import dataclass
from typing import Optional

from ..engine import EventKind
from ..errors import SimulationFault
from ..medium import ADVERTISING_CHANNELS, RadioMode, RadioState, Transmission


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdvPacket:
    """Advertising payload.

    Originals are identified by ``(origin, origin_seq)``; echoes carry the
    original's identity plus the relay id and the relay's ``echo_seq``.
    """
    origin: str
    origin_seq: int
    is_echo: bool = False
    relay: Optional[str] = None
    echo_seq: Optional[int] = None

    @property
    def event_key(self):
        "The key under which receptions of one advertising event are deduplicated."
        if self.is_echo:
            return (self.relay, self.echo_seq)
        return (self.origin, self.origin_seq)

    def echo(self, relay, echo_seq):
        return AdvPacket(self.origin, self.origin_seq, True, relay, echo_seq)

    def __str__(self):
        if self.is_echo:
            return '{}#{}<{}#{}'.format(self.origin, self.origin_seq, self.relay, self.echo_seq)
        return '{}#{}'.format(self.origin, self.origin_seq)


class Device(object):
    """Base class of all simulated devices.

    Events are routed to ``_on_<kind>`` handlers. Events carrying a token are
    dropped once the device's token moved on.
    """
    role = None

    def __init__(self, device_id, record=False):
        self.id = device_id
        self.radio = RadioState(record=record)
        self.sim = None
        self.rng = None
        self._token = 0

    def __repr__(self):
        return "{}('{}')".format(type(self).__name__, self.id)

    def attach(self, sim):
        self.sim = sim
        self.rng = sim.rng(self.id)

    def start(self):
        pass

    def new_token(self):
        self._token += 1
        return self._token

    def handle(self, event):
        if event.token is not None and event.token != self._token:
            return
        handler = getattr(self, '_on_' + event.kind.name.lower(), None)
        if handler is None:
            raise SimulationFault("{!r} cannot handle {!r}.".format(self, event))
        handler(event)

    def on_receive(self, packet, transmission):
        raise SimulationFault("{!r} does not receive packets.".format(self))


class Advertiser(Device):
    """A device that sends advertising events, one PDU per channel in turn.

    :param airtime:
        PDU airtime in microseconds.
    :param channel_gap:
        Time between the end of one PDU and the start of the next.
    """
    # Radio mode between the PDUs of one event.
    gap_mode = RadioMode.OFF

    def __init__(self, device_id, airtime, channel_gap, record=False):
        super(Advertiser, self).__init__(device_id, record=record)
        self.airtime = airtime
        self.channel_gap = channel_gap
        self._tx_packet = None
        self._tx_channels = ()
        self._tx_index = 0

    @property
    def advertising(self):
        return self._tx_packet is not None

    def event_duration(self, num_channels=len(ADVERTISING_CHANNELS)):
        return num_channels * self.airtime + (num_channels - 1) * self.channel_gap

    def begin_advertising_event(self, packet, channels=ADVERTISING_CHANNELS):
        if self.advertising:
            raise SimulationFault("{!r} is already advertising {}.".format(self, self._tx_packet))
        self._tx_packet = packet
        self._tx_channels = tuple(channels)
        self._tx_index = 0
        self._transmit(self.sim.now)

    def _transmit(self, now):
        channel = self._tx_channels[self._tx_index]
        self.sim.medium.begin_transmission(
            Transmission(self._tx_packet, channel, self.id, now, now + self.airtime))

    def _on_tx_start(self, event):
        self._transmit(event.fire_at)

    def _on_tx_end(self, event):
        now = event.fire_at
        self.sim.medium.end_transmission(event.payload)
        self._tx_index += 1
        if self._tx_index < len(self._tx_channels):
            self.radio.set(now, self.gap_mode)
            self.sim.schedule(now + self.channel_gap, self.id, EventKind.TX_START)
        else:
            packet = self._tx_packet
            self._tx_packet = None
            self.advertising_event_done(now, packet)

    def advertising_event_done(self, now, packet):
        self.radio.set(now, RadioMode.OFF)


class Scanner(Advertiser):
    """A device that scans the advertising channels in dwells.

    Dwell ``k`` of a scan phase starts at ``phase_start + k * scan_interval``
    on channel ``37, 38, 39`` cyclically, listens from ``dwell_start +
    hop_latency`` until ``dwell_start + scan_window`` and keeps the radio off
    for the rest of the interval. All times are in microseconds.
    """

    def __init__(self, device_id, scan_interval, scan_window, hop_latency,
                 airtime, channel_gap, record=False):
        if not 0 < scan_window <= scan_interval:
            raise ValueError("The scan window must be positive and not exceed the scan interval.")
        super(Scanner, self).__init__(device_id, airtime, channel_gap, record=record)
        self.scan_interval = scan_interval
        self.scan_window = scan_window
        self.hop_latency = min(hop_latency, scan_window)
        self.busy = False
        self.dwell_count = 0
        self._scan_token = None
        self._phase_end = None
        self._dwell = -1
        self._dwell_start = 0
        self._dwell_end = 0
        self._window_end = 0
        self._dwell_done = False

    @property
    def channel(self):
        "The channel of the current dwell."
        return ADVERTISING_CHANNELS[self._dwell % len(ADVERTISING_CHANNELS)]

    @property
    def dwell(self):
        return self._dwell

    def start_scanning(self, now, phase_end=None):
        "Begin a scan phase at dwell 0, ending at phase_end (or never)."
        self._scan_token = self.new_token()
        self._phase_end = phase_end
        self._enter_dwell(now, 0)

    def _enter_dwell(self, now, dwell):
        self._dwell = dwell
        self._dwell_done = False
        self.dwell_count += 1
        self._dwell_start = now
        self._dwell_end = now + self.scan_interval
        if self._phase_end is not None:
            self._dwell_end = min(self._dwell_end, self._phase_end)
        self._window_end = min(now + self.scan_window, self._dwell_end)
        token = self._scan_token
        self.sim.schedule(self._dwell_end, self.id, EventKind.CHANNEL_HOP, token=token)
        if self.hop_latency > 0:
            self.sim.schedule(now + self.hop_latency, self.id, EventKind.SCAN_WINDOW_START,
                              token=token)
        if self._window_end < self._dwell_end:
            self.sim.schedule(self._window_end, self.id, EventKind.SCAN_WINDOW_END, token=token)
        self.resume(now)

    def may_listen(self, now):
        return (self._dwell_start + self.hop_latency <= now < self._window_end
                and not self._dwell_done)

    def resume(self, now):
        "Set the radio according to the position in the scan cycle."
        if self.busy or self.advertising:
            return
        if self.may_listen(now):
            self.radio.set(now, RadioMode.LISTENING, self.channel)
        else:
            self.radio.set(now, RadioMode.OFF)

    def _on_channel_hop(self, event):
        now = event.fire_at
        if self._phase_end is not None and now >= self._phase_end:
            self.scan_phase_over(now)
        else:
            self._enter_dwell(now, self._dwell + 1)

    def _on_scan_window_start(self, event):
        self.resume(event.fire_at)

    def _on_scan_window_end(self, event):
        self.resume(event.fire_at)

    def scan_phase_over(self, now):
        self.new_token()
        self.radio.set(now, RadioMode.OFF)
