# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
"""Packet accounting and reception-rate metrics.

All rates count *advertising events*: the three channel PDUs of one event
received within the deduplication horizon count once. Echo events are
keyed by ``(relay, echo_seq)``, so a forced duplicate echo is a separate
event.
"""
import enum
import logging
from collections import Counter
from dataclasses import dataclass, field, asdict
from typing import Optional, Tuple

from .engine import ms
from .medium import LOSS_REASONS


logger = logging.getLogger(__name__)

ACCOUNTING_MODES = ('events', 'unique', 'raw')

DEFAULT_DEDUP_HORIZON_US = ms(20)


class Reception(enum.Enum):
    """Classification of a captured packet by the receiving device."""
    COUNTED = 'counted'
    DUPLICATE = 'duplicate'
    FILTERED = 'filtered'

    def __str__(self):
        return self.value


class GatewayReception(enum.Enum):
    DIRECT = 'direct-from-node'
    ECHO = 'relay-echo'
    NOISE = 'noise-filtered'

    def __str__(self):
        return self.value


def listen_ratio(s_time, r_interval, nr_repeats, nodes):
    """Fraction of a relay cycle spent listening.

    :param s_time:
        The listen time.
    :param r_interval:
        The repeat interval, in the same unit as s_time.
    :param nr_repeats:
        The number of echoes per heard node.
    :param nodes:
        The number of member nodes.
    :raises ValueError:
        If s_time is not positive or any other argument is negative.
    """
    if s_time <= 0:
        raise ValueError("The listen time must be positive, got {}.".format(s_time))
    if r_interval < 0 or nr_repeats < 0 or nodes < 0:
        raise ValueError("Repeat interval, repeats and nodes must be non-negative.")
    return s_time / (s_time + r_interval * nr_repeats * nodes)


def dedup_event(log, key, now, horizon=DEFAULT_DEDUP_HORIZON_US):
    """Classify a reception as counted or duplicate and update the log.

    A key first seen more than ``horizon`` ago counts again.
    """
    first = log.get(key)
    if first is not None and now - first <= horizon:
        return Reception.DUPLICATE
    log[key] = now
    return Reception.COUNTED


@dataclass(frozen=True)
class ListenerTally:
    """Per-listener totals; ``attempts`` equals the sum of all other fields."""
    listener: str
    attempts: int
    counted: int
    duplicates: int
    filtered: int
    losses: Tuple[Tuple[str, int], ...]

    @property
    def lost(self):
        return sum(n for _, n in self.losses)

    def is_conserved(self):
        return self.attempts == self.counted + self.duplicates + self.filtered + self.lost


@dataclass(frozen=True)
class RateReport:
    """The result of one run. Absent rates are None."""
    seed: int
    duration_s: float
    policy: Optional[str]
    scan_interval_ms: Optional[float]
    repeat_interval_ms: Optional[float]
    nr_repeats: Optional[int]
    duty_cycle: Optional[float]
    listen_ratio: Optional[float]
    nodes_to_relay: Optional[float]
    relay_to_gateway: Optional[float]
    nodes_to_gateway: Optional[float]
    member_events_sent: int = 0
    relay_counted: int = 0
    echo_events_sent: int = 0
    gateway_echo_events: int = 0
    gateway_direct_events: int = 0
    listeners: Tuple[ListenerTally, ...] = field(default_factory=tuple)
    name: str = ''

    ROW_COLUMNS = (
        'scan_interval_ms', 'repeat_interval_ms', 'nr_repeats', 'duty_cycle', 'listen_ratio',
        'nodes_to_relay', 'relay_to_gateway', 'nodes_to_gateway', 'seed')

    def as_row(self):
        return {column: getattr(self, column) for column in self.ROW_COLUMNS}

    def as_dict(self):
        return asdict(self)


def _ratio(numerator, denominator):
    return numerator / denominator if denominator else None


class PacketLedger(object):
    """Collects sent, received and lost counts during a run.

    :param members:
        The ids of the member (non-noise) nodes.
    :param mode:
        How gateway receptions are counted: ``events`` deduplicates per
        advertising event, ``unique`` counts each origin event once however it
        arrived, ``raw`` counts every captured PDU.
    :param dedup_horizon:
        The deduplication horizon in microseconds.
    """

    def __init__(self, members, mode='events', dedup_horizon=DEFAULT_DEDUP_HORIZON_US):
        if mode not in ACCOUNTING_MODES:
            raise ValueError("Unknown accounting mode '{}'.".format(mode))
        self.members = frozenset(members)
        self.mode = mode
        self.dedup_horizon = dedup_horizon
        self.sent = Counter()
        self.noise_sent = Counter()
        self.relay_counted = Counter()
        self.echo_sent = 0
        self.echo_duplicates_sent = 0
        self.gateway_echo = 0
        self.gateway_direct = Counter()
        self.gateway_noise = 0
        self._unique = set()
        self._relay_logs = dict()
        self._sink_log = dict()
        self._attempts = Counter()
        self._receptions = dict()
        self._losses = dict()

    def add_listener(self, listener):
        if listener not in self._receptions:
            self._receptions[listener] = Counter()
            self._losses[listener] = Counter()

    def record_sent(self, origin):
        if origin in self.members:
            self.sent[origin] += 1
        else:
            self.noise_sent[origin] += 1

    def record_decision(self, listener, capture):
        self.add_listener(listener)
        self._attempts[listener] += 1
        if capture.is_loss:
            self._losses[listener][capture] += 1

    def _record_reception(self, listener, reception):
        self.add_listener(listener)
        self._receptions[listener][reception] += 1
        return reception

    def record_relay_reception(self, relay, packet, now):
        "Classify a packet captured by a relay."
        if packet.is_echo or packet.origin not in self.members:
            return self._record_reception(relay, Reception.FILTERED)
        log = self._relay_logs.setdefault(relay, dict())
        reception = dedup_event(log, packet.event_key, now, self.dedup_horizon)
        if reception is Reception.COUNTED:
            self.relay_counted[packet.origin] += 1
        return self._record_reception(relay, reception)

    def record_echo_sent(self, packet, duplicate=False):
        self.echo_sent += 1
        if duplicate:
            self.echo_duplicates_sent += 1

    def record_gateway_reception(self, gateway, packet, now):
        """Classify a packet captured by a gateway.

        All gateways share one sink log, so an event counts once per network.
        """
        if packet.origin not in self.members:
            self.gateway_noise += 1
            self._record_reception(gateway, Reception.FILTERED)
            return GatewayReception.NOISE
        if self.mode == 'raw':
            reception = Reception.COUNTED
        else:
            reception = dedup_event(self._sink_log, packet.event_key, now, self.dedup_horizon)
        self._record_reception(gateway, reception)
        if reception is Reception.COUNTED:
            if packet.is_echo:
                self.gateway_echo += 1
            else:
                self.gateway_direct[packet.origin] += 1
            self._unique.add((packet.origin, packet.origin_seq))
        return GatewayReception.ECHO if packet.is_echo else GatewayReception.DIRECT

    def tally(self, listener):
        receptions = self._receptions.get(listener, Counter())
        losses = self._losses.get(listener, Counter())
        return ListenerTally(
            listener=listener,
            attempts=self._attempts[listener],
            counted=receptions[Reception.COUNTED],
            duplicates=receptions[Reception.DUPLICATE],
            filtered=receptions[Reception.FILTERED],
            losses=tuple((str(reason), losses[reason]) for reason in LOSS_REASONS))

    def tallies(self):
        return tuple(self.tally(listener) for listener in self._receptions)

    @property
    def member_events_sent(self):
        return sum(self.sent.values())

    def nodes_to_relay(self):
        return _ratio(sum(self.relay_counted.values()), self.member_events_sent)

    def relay_to_gateway(self):
        return _ratio(self.gateway_echo, self.echo_sent)

    def nodes_to_gateway(self):
        if self.mode == 'unique':
            return _ratio(len(self._unique), self.member_events_sent)
        return _ratio(self.gateway_echo + sum(self.gateway_direct.values()),
                      self.member_events_sent)

    def finalize(self, seed, duration_s, has_relay=True, has_gateway=True, **config):
        """Freeze the ledger into a :class:`RateReport`.

        :param config:
            Configuration values echoed into the report (policy,
            scan_interval_ms, repeat_interval_ms, nr_repeats, duty_cycle,
            listen_ratio, name).
        """
        for tally in self.tallies():
            if not tally.is_conserved():
                logger.warning("Accounting mismatch for '{}': {}".format(tally.listener, tally))
        report = RateReport(
            seed=seed,
            duration_s=duration_s,
            policy=config.get('policy'),
            scan_interval_ms=config.get('scan_interval_ms'),
            repeat_interval_ms=config.get('repeat_interval_ms'),
            nr_repeats=config.get('nr_repeats'),
            duty_cycle=config.get('duty_cycle'),
            listen_ratio=config.get('listen_ratio'),
            nodes_to_relay=self.nodes_to_relay() if has_relay else None,
            relay_to_gateway=self.relay_to_gateway() if has_relay and has_gateway else None,
            nodes_to_gateway=self.nodes_to_gateway() if has_gateway else None,
            member_events_sent=self.member_events_sent,
            relay_counted=sum(self.relay_counted.values()),
            echo_events_sent=self.echo_sent,
            gateway_echo_events=self.gateway_echo,
            gateway_direct_events=sum(self.gateway_direct.values()),
            listeners=self.tallies(),
            name=config.get('name', ''))
        logger.info("Run with seed {} finished: nodes->relay={}, relay->gateway={}, "
                    "nodes->gateway={}.".format(seed, report.nodes_to_relay,
                                                report.relay_to_gateway,
                                                report.nodes_to_gateway))
        return report
