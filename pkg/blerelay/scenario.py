# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
"""Scenario and sweep documents.

Scenarios are JSON documents. Durations are given in milliseconds unless
the key carries a ``_us`` suffix (microseconds); the total run duration is
given in seconds. See ``doc/scenario-format.rst`` for the field reference.

A parsed :class:`Scenario` is immutable; :func:`dump_scenario` emits the
fully explicit document, so that ``parse_scenario(dump_scenario(s)) == s``.
"""
import copy
import itertools
import json
import logging
import os
from dataclasses import dataclass, field, replace
from typing import ClassVar, Optional, Tuple

from .devices import Gateway, Node, Relay
from .engine import Simulation, seconds, ms
from .errors import ScenarioError
from .ledger import ACCOUNTING_MODES, PacketLedger, listen_ratio
from .medium import DEFAULT_AIRTIME_US, DEFAULT_CHANNEL_GAP_US, LinkMatrix, Medium
from .power import PowerModel
from .util.misc import set_dotted
from .validators import (
    Field, parse_fields, expect_list, expect_mapping, join_path, _boolean, _duty,
    _fraction, _identifier, _natural_number, _nonnegative_int, _nonnegative_real,
    _one_of, _optional, _positive_real, _string, _integral)


logger = logging.getLogger(__name__)

DEFAULT_SEEDS_PER_POINT = 3

DUTY_CYCLE = 'duty_cycle'


@dataclass(frozen=True)
class Immediate:
    "Interrupt scanning and echo every counted member packet at once."
    kind: ClassVar[str] = 'immediate'


@dataclass(frozen=True)
class Listen:
    "Receive and count only; never forward."
    kind: ClassVar[str] = 'listen'


@dataclass(frozen=True)
class Batching:
    """Buffer receptions for ``listen_time`` ms, then echo every heard node.

    :param echo_count:
        ``fixed`` sends exactly ``nr_repeats`` echoes per heard node,
        ``received`` sends at most as many echoes as packets were heard.
    """
    listen_time: float = 10000.0
    nr_repeats: int = 5
    repeat_interval: float = 10.0
    echo_count: str = 'fixed'
    kind: ClassVar[str] = 'batching'

    def forwarding_time(self, num_nodes):
        "Nominal forwarding time in ms when all nodes were heard."
        return self.repeat_interval * self.nr_repeats * num_nodes


POLICIES = {cls.kind: cls for cls in (Immediate, Batching, Listen)}


@dataclass(frozen=True)
class NodeConfig:
    id: str
    period: float = 1000.0
    member: bool = True
    airtime_us: int = DEFAULT_AIRTIME_US
    channel_gap_us: int = DEFAULT_CHANNEL_GAP_US
    adv_delay: bool = True
    adv_delay_max: float = 10.0
    start_offset: Optional[float] = None


@dataclass(frozen=True)
class RelayConfig:
    id: str = 'relay'
    scan_interval: float = 50.0
    scan_window: float = 50.0
    scan_time: float = 10000.0
    sleep_time: float = 0.0
    policy: object = Immediate()
    mode_switch_latency_us: int = 150
    duplicate_probability: float = 0.0
    echo_channels: str = 'all'
    one_forward_per_interval: bool = True
    hop_latency_us: int = 150
    airtime_us: int = DEFAULT_AIRTIME_US
    channel_gap_us: int = DEFAULT_CHANNEL_GAP_US

    @property
    def listen_phase(self):
        "Length of one listen phase in ms."
        if self.policy.kind == 'batching':
            return self.policy.listen_time
        return self.scan_time

    def active_time(self, num_nodes):
        "Nominal awake time per cycle in ms."
        if self.policy.kind == 'batching':
            return self.listen_phase + self.policy.forwarding_time(num_nodes)
        return self.listen_phase

    def nominal_duty(self, num_nodes):
        active = self.active_time(num_nodes)
        return active / (active + self.sleep_time)

    def listen_ratio(self, num_nodes):
        if self.policy.kind != 'batching':
            return None
        return listen_ratio(self.policy.listen_time, self.policy.repeat_interval,
                            self.policy.nr_repeats, num_nodes)


@dataclass(frozen=True)
class GatewayConfig:
    id: str = 'gateway'
    scan_interval: float = 50.0
    scan_window: float = 50.0
    processing_dead_time_us: int = 1000
    hop_latency_us: int = 150


@dataclass(frozen=True)
class LinkDefaults:
    """Reception probabilities for device pairs without an explicit link."""
    node_to_relay: float = 1.0
    node_to_gateway: float = 1.0
    relay_to_gateway: float = 1.0
    noise_to_relay: float = 1.0
    noise_to_gateway: float = 1.0

    def role_defaults(self):
        return {
            ('node', 'relay'): self.node_to_relay,
            ('node', 'gateway'): self.node_to_gateway,
            ('relay', 'gateway'): self.relay_to_gateway,
            ('noise', 'relay'): self.noise_to_relay,
            ('noise', 'gateway'): self.noise_to_gateway,
        }


@dataclass(frozen=True)
class Link:
    tx: str
    rx: str
    p: float


@dataclass(frozen=True)
class AccountingConfig:
    mode: str = 'events'
    dedup_horizon: float = 20.0


@dataclass(frozen=True)
class Scenario:
    duration: float
    nodes: Tuple[NodeConfig, ...]
    gateways: Tuple[GatewayConfig, ...]
    relay: Optional[RelayConfig] = None
    noise_nodes: Tuple[NodeConfig, ...] = ()
    seed: int = 0
    name: str = ''
    link_defaults: LinkDefaults = LinkDefaults()
    links: Tuple[Link, ...] = ()
    accounting: AccountingConfig = AccountingConfig()
    power: PowerModel = field(default_factory=PowerModel)

    @property
    def member_ids(self):
        return tuple(node.id for node in self.nodes)

    def roles(self):
        roles = {node.id: 'node' for node in self.nodes}
        roles.update((node.id, 'noise') for node in self.noise_nodes)
        if self.relay is not None:
            roles[self.relay.id] = 'relay'
        roles.update((gateway.id, 'gateway') for gateway in self.gateways)
        return roles

    def link_matrix(self):
        links = LinkMatrix(self.roles(), self.link_defaults.role_defaults())
        for link in self.links:
            links.set(link.tx, link.rx, link.p)
        return links

    def nominal_duty(self):
        return 1.0 if self.relay is None else self.relay.nominal_duty(len(self.nodes))


def sleep_time_for_duty(relay, num_nodes, duty):
    """Return the sleep time in ms at which the relay reaches the given duty cycle.

    :raises ValueError:
        If duty is not in (0, 1].
    """
    if not 0 < duty <= 1:
        raise ValueError("The duty cycle must be in (0, 1], got {}.".format(duty))
    return relay.active_time(num_nodes) * (1 - duty) / duty


# Field tables

_NODE_FIELDS = (
    Field('period', _positive_real, default=NodeConfig.period),
    Field('airtime_us', _natural_number, default=DEFAULT_AIRTIME_US),
    Field('channel_gap_us', _nonnegative_int, default=DEFAULT_CHANNEL_GAP_US),
    Field('adv_delay', _boolean, default=True),
    Field('adv_delay_max', _nonnegative_real, default=NodeConfig.adv_delay_max),
    Field('start_offset', _optional(_nonnegative_real)),
)

_GROUP_FIELDS = (
    Field('count', _natural_number, required=True),
    Field('prefix', _identifier),
)

_POLICY_FIELDS = {
    'immediate': (),
    'listen': (),
    'batching': (
        Field('listen_time', _positive_real, default=Batching.listen_time),
        Field('nr_repeats', _nonnegative_int, default=Batching.nr_repeats),
        Field('repeat_interval', _positive_real, default=Batching.repeat_interval),
        Field('echo_count', _one_of('fixed', 'received'), default=Batching.echo_count),
    ),
}

_RELAY_FIELDS = (
    Field('id', _identifier, default=RelayConfig.id),
    Field('scan_interval', _positive_real, default=RelayConfig.scan_interval),
    Field('scan_window', _optional(_positive_real)),
    Field('scan_time', _positive_real, default=RelayConfig.scan_time),
    Field('sleep_time', _nonnegative_real, default=RelayConfig.sleep_time),
    Field('mode_switch_latency_us', _nonnegative_int,
          default=RelayConfig.mode_switch_latency_us),
    Field('duplicate_probability', _fraction, default=RelayConfig.duplicate_probability),
    Field('echo_channels', _one_of('all', 'current'), default=RelayConfig.echo_channels),
    Field('one_forward_per_interval', _boolean, default=True),
    Field('hop_latency_us', _nonnegative_int, default=RelayConfig.hop_latency_us),
    Field('airtime_us', _natural_number, default=DEFAULT_AIRTIME_US),
    Field('channel_gap_us', _nonnegative_int, default=DEFAULT_CHANNEL_GAP_US),
)

_GATEWAY_FIELDS = (
    Field('id', _identifier, default=GatewayConfig.id),
    Field('scan_interval', _positive_real, default=GatewayConfig.scan_interval),
    Field('scan_window', _optional(_positive_real)),
    Field('processing_dead_time_us', _nonnegative_int,
          default=GatewayConfig.processing_dead_time_us),
    Field('hop_latency_us', _nonnegative_int, default=GatewayConfig.hop_latency_us),
)

_LINK_DEFAULT_FIELDS = tuple(
    Field(name, _fraction, default=getattr(LinkDefaults, name))
    for name in ('node_to_relay', 'node_to_gateway', 'relay_to_gateway',
                 'noise_to_relay', 'noise_to_gateway'))

_LINK_FIELDS = (
    Field('tx', _identifier, required=True),
    Field('rx', _identifier, required=True),
    Field('p', _fraction, required=True),
)

_ACCOUNTING_FIELDS = (
    Field('mode', _one_of(*ACCOUNTING_MODES), default=AccountingConfig.mode),
    Field('dedup_horizon', _nonnegative_real, default=AccountingConfig.dedup_horizon),
)

_POWER_FIELDS = (
    Field('active_current', _positive_real, default=PowerModel.active_current),
    Field('sleep_current', _nonnegative_real, default=PowerModel.sleep_current),
    Field('battery_capacity', _positive_real, default=PowerModel.battery_capacity),
)

_SCENARIO_FIELDS = (
    Field('name', _string, default=''),
    Field('duration', _positive_real, required=True),
    Field('seed', _integral, default=0),
)

_SCENARIO_SECTIONS = (
    'nodes', 'noise_nodes', 'relay', 'gateway', 'gateways', 'link_defaults', 'links',
    'accounting', 'power')


def _parse_node(doc, path, member, node_id=None):
    values = parse_fields(doc, _NODE_FIELDS, path, extra=('id', 'count', 'prefix'))
    if node_id is None:
        if 'id' not in doc:
            raise ScenarioError(join_path(path, 'id'), "Missing required key.")
        node_id = Field('id', _identifier)(doc['id'], join_path(path, 'id'))
    node = NodeConfig(id=node_id, member=member, **values)
    event_duration = 3 * node.airtime_us + 2 * node.channel_gap_us
    if ms(node.period) <= event_duration:
        raise ScenarioError(join_path(path, 'period'),
                            "The period ({} ms) must exceed the duration of one advertising "
                            "event ({} us).".format(node.period, event_duration))
    return node


def _parse_node_list(doc, path, member, default_prefix):
    nodes = []
    for i, entry in enumerate(expect_list(doc, path)):
        entry_path = join_path(path, str(i))
        expect_mapping(entry, entry_path)
        if 'count' in entry:
            if 'id' in entry:
                raise ScenarioError(join_path(entry_path, 'id'),
                                    "A node group cannot have an id; use 'prefix'.")
            group = parse_fields({k: entry[k] for k in ('count', 'prefix') if k in entry},
                                 _GROUP_FIELDS, entry_path)
            prefix = group['prefix'] or default_prefix
            for n in range(1, group['count'] + 1):
                nodes.append(_parse_node(entry, entry_path, member, node_id=prefix + str(n)))
        else:
            if 'prefix' in entry:
                raise ScenarioError(join_path(entry_path, 'prefix'),
                                    "'prefix' requires 'count'.")
            nodes.append(_parse_node(entry, entry_path, member))
    return tuple(nodes)


def _check_window(values, path):
    if values['scan_window'] is None:
        values['scan_window'] = values['scan_interval']
    elif values['scan_window'] > values['scan_interval']:
        raise ScenarioError(join_path(path, 'scan_window'),
                            "scan_window ({}) must not exceed scan_interval ({}).".format(
                                values['scan_window'], values['scan_interval']))
    return values


def _parse_policy(doc, path):
    if isinstance(doc, str):
        doc = {'kind': doc}
    expect_mapping(doc, path)
    if 'kind' not in doc:
        raise ScenarioError(join_path(path, 'kind'), "Missing required key.")
    kind = Field('kind', _one_of(*POLICIES))(doc['kind'], join_path(path, 'kind'))
    values = parse_fields(doc, _POLICY_FIELDS[kind], path, extra=('kind', ))
    return POLICIES[kind](**values)


def _parse_relay(doc, path='relay'):
    values = parse_fields(doc, _RELAY_FIELDS, path, extra=('policy', ))
    _check_window(values, path)
    policy = _parse_policy(doc.get('policy', 'immediate'), join_path(path, 'policy'))
    return RelayConfig(policy=policy, **values)


def _parse_gateway(doc, path):
    return GatewayConfig(**_check_window(parse_fields(doc, _GATEWAY_FIELDS, path), path))


def parse_scenario(doc):
    """Validate a scenario document and return the :class:`Scenario`.

    :param doc:
        The decoded JSON document.
    :raises ScenarioError:
        On any missing, unknown or invalid key; the error names the path of
        the offending field.
    """
    values = parse_fields(doc, _SCENARIO_FIELDS, '', extra=_SCENARIO_SECTIONS)
    if 'nodes' not in doc:
        raise ScenarioError('nodes', "Missing required key.")
    nodes = _parse_node_list(doc['nodes'], 'nodes', True, 'n')
    noise_nodes = _parse_node_list(doc.get('noise_nodes', []), 'noise_nodes', False, 'x')
    relay = None if doc.get('relay') is None else _parse_relay(doc['relay'])

    if 'gateway' in doc and 'gateways' in doc:
        raise ScenarioError('gateway', "Use either 'gateway' or 'gateways', not both.")
    if 'gateway' in doc:
        gateways = (_parse_gateway(doc['gateway'], 'gateway'), )
    else:
        gateways = tuple(_parse_gateway(entry, join_path('gateways', str(i)))
                         for i, entry in enumerate(expect_list(doc.get('gateways', []),
                                                               'gateways')))
    if not gateways:
        raise ScenarioError('gateways', "At least one gateway is required.")

    seen = dict()
    devices = [('nodes', nodes), ('noise_nodes', noise_nodes),
               ('relay', (relay, ) if relay else ()), ('gateways', gateways)]
    for section, configs in devices:
        for i, config in enumerate(configs):
            if config.id in seen:
                raise ScenarioError('{}.{}.id'.format(section, i) if section != 'relay'
                                    else 'relay.id',
                                    "Duplicate device id '{}' (also used in {}).".format(
                                        config.id, seen[config.id]))
            seen[config.id] = section

    link_defaults = LinkDefaults(**parse_fields(
        doc.get('link_defaults', {}), _LINK_DEFAULT_FIELDS, 'link_defaults'))
    links = []
    for i, entry in enumerate(expect_list(doc.get('links', []), 'links')):
        path = join_path('links', str(i))
        link = Link(**parse_fields(entry, _LINK_FIELDS, path))
        for end in ('tx', 'rx'):
            if getattr(link, end) not in seen:
                raise ScenarioError(join_path(path, end),
                                    "Unknown device '{}'.".format(getattr(link, end)))
        if link.tx == link.rx:
            raise ScenarioError(path, "A device cannot link to itself.")
        links.append(link)

    accounting = AccountingConfig(**parse_fields(
        doc.get('accounting', {}), _ACCOUNTING_FIELDS, 'accounting'))
    power_values = parse_fields(doc.get('power', {}), _POWER_FIELDS, 'power')
    try:
        power = PowerModel(**power_values)
    except ValueError as error:
        raise ScenarioError('power', str(error)) from error

    return Scenario(
        duration=values['duration'], seed=values['seed'], name=values['name'],
        nodes=nodes, noise_nodes=noise_nodes, relay=relay, gateways=gateways,
        link_defaults=link_defaults, links=tuple(links), accounting=accounting, power=power)


def _dump_node(node):
    return {
        'id': node.id, 'period': node.period, 'airtime_us': node.airtime_us,
        'channel_gap_us': node.channel_gap_us, 'adv_delay': node.adv_delay,
        'adv_delay_max': node.adv_delay_max, 'start_offset': node.start_offset,
    }


def _dump_policy(policy):
    doc = {'kind': policy.kind}
    if policy.kind == 'batching':
        doc.update(listen_time=policy.listen_time, nr_repeats=policy.nr_repeats,
                   repeat_interval=policy.repeat_interval, echo_count=policy.echo_count)
    return doc


def _dump_relay(relay):
    doc = {f.name: getattr(relay, f.name) for f in _RELAY_FIELDS}
    doc['policy'] = _dump_policy(relay.policy)
    return doc


def dump_scenario(scenario):
    "Return the fully explicit document of a scenario."
    return {
        'name': scenario.name,
        'duration': scenario.duration,
        'seed': scenario.seed,
        'nodes': [_dump_node(node) for node in scenario.nodes],
        'noise_nodes': [_dump_node(node) for node in scenario.noise_nodes],
        'relay': None if scenario.relay is None else _dump_relay(scenario.relay),
        'gateways': [{f.name: getattr(gateway, f.name) for f in _GATEWAY_FIELDS}
                     for gateway in scenario.gateways],
        'link_defaults': {f.name: getattr(scenario.link_defaults, f.name)
                          for f in _LINK_DEFAULT_FIELDS},
        'links': [{'tx': link.tx, 'rx': link.rx, 'p': link.p} for link in scenario.links],
        'accounting': {'mode': scenario.accounting.mode,
                       'dedup_horizon': scenario.accounting.dedup_horizon},
        'power': {f.name: getattr(scenario.power, f.name) for f in _POWER_FIELDS},
    }


def _load_json(path):
    try:
        with open(path) as file:
            return json.load(file)
    except ValueError as error:
        raise ScenarioError(None, "Unable to decode '{}': {}".format(path, error)) from error


def load_scenario(path):
    "Read and parse a scenario file."
    return parse_scenario(_load_json(path))


def build_simulation(scenario, seed=None, trace=False, record=False):
    """Create the devices, medium and ledger of a scenario.

    :param seed:
        Overrides the scenario's seed.
    :param trace:
        Record the event trace.
    :param record:
        Record all transmissions, capture decisions and radio histories.
    """
    seed = scenario.seed if seed is None else seed
    sim = Simulation(seed, trace=trace)
    sim.ledger = PacketLedger(scenario.member_ids, mode=scenario.accounting.mode,
                              dedup_horizon=ms(scenario.accounting.dedup_horizon))
    sim.medium = Medium(sim, scenario.link_matrix(), record=record)
    for config in scenario.nodes + scenario.noise_nodes:
        sim.add_device(Node(config, record=record))
    if scenario.relay is not None:
        sim.medium.add_listener(sim.add_device(Relay(scenario.relay, record=record)))
    for config in scenario.gateways:
        sim.medium.add_listener(sim.add_device(Gateway(config, record=record)))
    logger.debug("Built simulation with {} device(s) and seed {}.".format(
        len(sim.devices), seed))
    return sim


def make_report(sim, scenario):
    "Finalize the ledger of a completed simulation into a RateReport."
    relay = scenario.relay
    config = dict(name=scenario.name)
    if relay is not None:
        device = sim.devices[relay.id]
        config.update(
            policy=relay.policy.kind,
            scan_interval_ms=relay.scan_interval,
            duty_cycle=device.duty_cycle(),
            listen_ratio=relay.listen_ratio(len(scenario.nodes)))
        if relay.policy.kind == 'batching':
            config.update(repeat_interval_ms=relay.policy.repeat_interval,
                          nr_repeats=relay.policy.nr_repeats)
    return sim.ledger.finalize(sim.seed, scenario.duration, has_relay=relay is not None,
                               **config)


def simulate(scenario, seed=None, trace=False, record=False):
    """Build and run a scenario for its full duration.

    :returns:
        The completed :class:`~.engine.Simulation`; its ``report`` attribute
        holds the :class:`~.ledger.RateReport`.
    """
    sim = build_simulation(scenario, seed=seed, trace=trace, record=record)
    sim.run_until(seconds(scenario.duration))
    sim.report = make_report(sim, scenario)
    return sim


def run_scenario(scenario, seed=None):
    "Run a scenario and return its RateReport."
    return simulate(scenario, seed=seed).report


def apply_duty_cycle(scenario, duty):
    """Return a copy of the scenario whose relay sleeps to reach the given duty cycle."""
    if scenario.relay is None:
        raise ScenarioError(DUTY_CYCLE, "A duty cycle requires a relay.")
    sleep_time = sleep_time_for_duty(scenario.relay, len(scenario.nodes), duty)
    return replace(scenario, relay=replace(scenario.relay, sleep_time=sleep_time))


@dataclass(frozen=True)
class SweepSpec:
    """A base scenario document and the parameters swept over it.

    :param base:
        The base scenario document.
    :param parameters:
        Tuple of ``(path, values)`` pairs; path is a dotted document path or
        ``duty_cycle``.
    :param seeds:
        The seeds run at every point.
    :param power:
        Whether battery-life columns are emitted.
    :param baseline_rate:
        If set, an ``effective_rate`` column scales it by the duty cycle.
    """
    base: dict
    parameters: Tuple[Tuple[str, tuple], ...]
    seeds: Tuple[int, ...]
    power: bool = False
    baseline_rate: Optional[float] = None
    name: str = ''

    @property
    def parameter_names(self):
        return tuple(name for name, _ in self.parameters)

    def points(self):
        "Return the parameter assignments of all sweep points in product order."
        names = self.parameter_names
        return [dict(zip(names, values))
                for values in itertools.product(*(values for _, values in self.parameters))]

    def runs(self):
        "Return all ``(point_index, assignment, seed)`` triples."
        return [(index, point, seed)
                for index, point in enumerate(self.points()) for seed in self.seeds]

    def document_for(self, assignment):
        doc = copy.deepcopy(self.base)
        for name, value in assignment.items():
            if name != DUTY_CYCLE:
                set_dotted(doc, name, value)
        return doc

    def scenario_for(self, assignment):
        scenario = parse_scenario(self.document_for(assignment))
        if DUTY_CYCLE in assignment:
            scenario = apply_duty_cycle(scenario, assignment[DUTY_CYCLE])
        return scenario


_SWEEP_FIELDS = (
    Field('name', _string, default=''),
    Field('base', required=True),
    Field('parameters', default=None),
    Field('seeds', default=DEFAULT_SEEDS_PER_POINT),
    Field('power', default=None),
)

_SWEEP_POWER_FIELDS = (
    Field('baseline_rate', _optional(_fraction)),
)


def parse_sweep(doc, base_dir=None, seed=None):
    """Validate a sweep document and return the :class:`SweepSpec`.

    :param doc:
        The decoded JSON document. Its ``base`` is either an inline scenario
        document or the path of a scenario file, relative to base_dir.
    :param seed:
        Overrides the first seed of the base scenario. Only valid when
        ``seeds`` is a count.
    :raises ScenarioError:
        If the document or any sweep point is invalid.
    """
    values = parse_fields(doc, _SWEEP_FIELDS, '')
    base = values['base']
    if isinstance(base, str):
        base = _load_json(os.path.join(base_dir or os.curdir, base))
    base = copy.deepcopy(expect_mapping(base, 'base'))
    base_scenario = parse_scenario(base)
    if seed is not None:
        base['seed'] = seed

    parameters = []
    for name, param_values in expect_mapping(values['parameters'] or {}, 'parameters').items():
        path = join_path('parameters', name)
        param_values = expect_list(param_values, path)
        if not param_values:
            raise ScenarioError(path, "The value list must not be empty.")
        if name == DUTY_CYCLE:
            for i, value in enumerate(param_values):
                Field(DUTY_CYCLE, _duty)(value, join_path(path, str(i)))
            if base_scenario.relay is None:
                raise ScenarioError(path, "A duty cycle sweep requires a relay.")
        parameters.append((name, tuple(param_values)))

    seeds = values['seeds']
    first = base.get('seed', 0)
    if isinstance(seeds, list):
        if seed is not None:
            raise ScenarioError('seeds', "A seed override requires a seed count, not a list.")
        seeds = tuple(Field('seeds', _integral)(s, join_path('seeds', str(i)))
                      for i, s in enumerate(seeds))
        if not seeds:
            raise ScenarioError('seeds', "The seed list must not be empty.")
        if len(set(seeds)) != len(seeds):
            raise ScenarioError('seeds', "Seeds must be unique.")
    else:
        seeds = tuple(first + i for i in range(Field('seeds', _natural_number)(seeds, 'seeds')))

    power = values['power']
    baseline_rate = None
    if power is not None and power is not False:
        if power is not True:
            baseline_rate = parse_fields(power, _SWEEP_POWER_FIELDS, 'power')['baseline_rate']
        power = True
    spec = SweepSpec(base=base, parameters=tuple(parameters), seeds=seeds,
                     power=bool(power), baseline_rate=baseline_rate, name=values['name'])

    # Validate every point up front so that workers never see invalid documents.
    for point in spec.points():
        try:
            spec.scenario_for(point)
        except ScenarioError as error:
            raise ScenarioError(error.path, "{} (at sweep point {})".format(
                error.message, point)) from error
        except (ValueError, KeyError, IndexError, TypeError) as error:
            raise ScenarioError('parameters', "Cannot apply sweep point {}: {}".format(
                point, error)) from error
    return spec


def load_sweep(path, seed=None):
    "Read and parse a sweep file; a relative base path is resolved against its directory."
    return parse_sweep(_load_json(path), base_dir=os.path.dirname(os.path.abspath(path)),
                       seed=seed)
