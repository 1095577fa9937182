# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
import logging
from collections import Counter

from ..engine import EventKind, ms
from ..medium import DEFAULT_AIRTIME_US, DEFAULT_CHANNEL_GAP_US, RadioMode
from .base import Scanner


logger = logging.getLogger(__name__)


class Gateway(Scanner):
    """Always-on sink scanning the advertising channels.

    After each captured packet the radio is busy for the processing dead
    time and then resumes its scan cycle.

    :param config:
        A :class:`~blerelay.scenario.GatewayConfig`.
    """
    role = 'gateway'

    def __init__(self, config, record=False):
        super(Gateway, self).__init__(
            config.id, ms(config.scan_interval), ms(config.scan_window), config.hop_latency_us,
            DEFAULT_AIRTIME_US, DEFAULT_CHANNEL_GAP_US, record=record)
        self.config = config
        self.dead_time = config.processing_dead_time_us
        self.received = Counter()

    def start(self):
        self.start_scanning(0)

    def on_receive(self, packet, transmission):
        now = self.sim.now
        self.received[self.sim.ledger.record_gateway_reception(self.id, packet, now)] += 1
        if self.dead_time > 0:
            self.busy = True
            self.radio.set(now, RadioMode.BUSY)
            self.sim.schedule(now + self.dead_time, self.id, EventKind.GATEWAY_FREE)

    def _on_gateway_free(self, event):
        self.busy = False
        self.resume(event.fire_at)
