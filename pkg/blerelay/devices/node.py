# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
import logging

from ..engine import EventKind, ms
from .base import AdvPacket, Advertiser


logger = logging.getLogger(__name__)


class Node(Advertiser):
    """A battery-powered beacon advertising on a fixed period.

    Every advertising event sends one PDU on each of the channels 37, 38 and
    39 and carries a fresh ``origin_seq``. The next event starts one period
    (plus the optional random advertising delay) after the current one.
    Noise nodes use the same model with ``member=False``.

    :param config:
        A :class:`~blerelay.scenario.NodeConfig`.
    """

    def __init__(self, config, record=False):
        super(Node, self).__init__(
            config.id, config.airtime_us, config.channel_gap_us, record=record)
        self.config = config
        self.role = 'node' if config.member else 'noise'
        self.period = ms(config.period)
        self.adv_delay_max = ms(config.adv_delay_max) if config.adv_delay else 0
        self.origin_seq = 0
        if self.event_duration() >= self.period:
            raise ValueError("Node '{}' cannot finish an advertising event within its "
                             "period.".format(self.id))

    def start(self):
        if self.config.start_offset is not None:
            first = ms(self.config.start_offset)
        else:
            first = self.rng.uniform_draw(1, self.period - 1)
        self.sim.schedule(first, self.id, EventKind.ADVERTISE_START)

    def _on_advertise_start(self, event):
        now = event.fire_at
        self.origin_seq += 1
        self.sim.ledger.record_sent(self.id)
        self.begin_advertising_event(AdvPacket(self.id, self.origin_seq))
        delay = self.rng.uniform_draw(0, self.adv_delay_max) if self.adv_delay_max else 0
        self.sim.schedule(now + self.period + delay, self.id, EventKind.ADVERTISE_START)
