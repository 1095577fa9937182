# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
import pytest

from blerelay.devices import AdvPacket, Phase, Relay
from blerelay.devices.gateway import Gateway
from blerelay.engine import ms
from blerelay.errors import ScenarioError
from blerelay.ledger import GatewayReception
from blerelay.medium import RadioMode
from blerelay.scenario import (
    Batching, GatewayConfig, RelayConfig, build_simulation, make_report, parse_scenario,
    simulate)

from define_scenarios import fixed_node


def _build(doc, until_ms):
    doc = dict(doc)
    doc.setdefault('duration', 10)
    doc.setdefault('gateway', {})
    scenario = parse_scenario(doc)
    sim = build_simulation(scenario, record=True)
    sim.run_until(ms(until_ms))
    return sim


def _transmissions_of(sim, device_id):
    return [t for t in sim.medium.transmissions if t.tx_device == device_id]


def _losses(tally):
    return dict(tally.losses)


class TestAdvPacket:

    def test_keys(self):
        packet = AdvPacket('n1', 4)
        echo = packet.echo('relay', 9)
        assert packet.event_key == ('n1', 4)
        assert echo.event_key == ('relay', 9)
        assert (echo.origin, echo.origin_seq, echo.is_echo) == ('n1', 4, True)
        assert str(packet) == 'n1#4'
        assert str(echo) == 'n1#4<relay#9'


class TestNode:

    def test_period_and_channels(self):
        sim = _build({'nodes': [fixed_node('n1', 0)]}, 5500)
        assert sim.ledger.sent['n1'] == 6
        pdus = _transmissions_of(sim, 'n1')
        assert [t.channel for t in pdus[:3]] == [37, 38, 39]
        assert [t.start for t in pdus[:3]] == [0, 700, 1400]
        assert [t.start for t in pdus[::3]] == [ms(k * 1000) for k in range(6)]
        assert all(t.airtime == 300 for t in pdus)

    def test_advertising_delay(self):
        node = dict(fixed_node('n1', 0), adv_delay=True, adv_delay_max=10)
        sim = _build({'nodes': [node]}, 10000)
        starts = [t.start for t in _transmissions_of(sim, 'n1')[::3]]
        gaps = [b - a for a, b in zip(starts, starts[1:])]
        assert gaps
        assert all(ms(1000) <= gap <= ms(1010) for gap in gaps)
        assert len(set(gaps)) > 1

    def test_random_start_phase(self):
        doc = {'nodes': [{'id': 'n1', 'period': 1000}]}
        sim = _build(doc, 1000)
        first = _transmissions_of(sim, 'n1')[0].start
        assert 1 <= first <= ms(1000) - 1

    def test_period_must_exceed_event(self):
        with pytest.raises(ScenarioError):
            parse_scenario({'duration': 1, 'nodes': [{'id': 'n1', 'period': 1}],
                            'gateway': {}})


class TestScanner:

    def test_channel_cycle(self):
        doc = {'nodes': [fixed_node('n1', 900)],
               'relay': {'scan_interval': 50, 'policy': 'listen'}}
        sim = _build(doc, 160)
        listening = [(since, channel) for since, mode, channel in sim.devices['relay'].radio.log
                     if mode is RadioMode.LISTENING]
        assert listening == [(150, 37), (50150, 38), (100150, 39), (150150, 37)]

    def test_scan_window(self):
        doc = {'nodes': [fixed_node('n1', 900)],
               'relay': {'scan_interval': 50, 'scan_window': 20, 'policy': 'listen'}}
        sim = _build(doc, 60)
        assert sim.devices['relay'].radio.log == [
            (0, RadioMode.OFF, None), (150, RadioMode.LISTENING, 37),
            (20000, RadioMode.OFF, None), (50150, RadioMode.LISTENING, 38)]

    def test_invalid_window(self):
        with pytest.raises(ValueError):
            Gateway(GatewayConfig(scan_interval=10, scan_window=20))


class TestImmediateRelay:

    @pytest.fixture
    def doc(self):
        return {
            'nodes': [fixed_node('n1', 10)],
            'relay': {'scan_interval': 50, 'policy': 'immediate'},
            'gateway': {'processing_dead_time_us': 0},
            'link_defaults': {'node_to_gateway': 0.0},
        }

    def test_single_echo(self, doc):
        sim = _build(doc, 20)
        relay = sim.devices['relay']
        echoes = _transmissions_of(sim, 'relay')
        assert [t.channel for t in echoes] == [37, 38, 39]
        assert [t.start for t in echoes] == [10450, 11150, 11850]
        assert all(t.packet.is_echo and t.packet.origin == 'n1' for t in echoes)
        assert relay.forwarded == 1
        assert sim.ledger.echo_sent == 1
        assert sim.ledger.gateway_echo == 1
        # One forward per scan interval: idle until the dwell ends.
        assert relay.radio.mode is RadioMode.OFF

    def test_half_duplex_losses(self, doc):
        sim = _build(doc, 20)
        relay_tally = sim.ledger.tally('relay')
        assert relay_tally.attempts == 3
        assert relay_tally.counted == 1
        assert _losses(relay_tally)['rx-busy'] == 2
        gateway_tally = sim.ledger.tally('gateway')
        assert gateway_tally.counted == 1
        assert _losses(gateway_tally)['unreachable'] == 3
        assert _losses(gateway_tally)['not-tuned'] == 2
        assert relay_tally.is_conserved() and gateway_tally.is_conserved()

    def test_resume_listening(self, doc):
        doc['relay']['one_forward_per_interval'] = False
        sim = _build(doc, 20)
        relay = sim.devices['relay']
        assert relay.radio.mode is RadioMode.LISTENING
        assert relay.radio.channel == 37

    def test_current_channel_echo(self, doc):
        doc['relay']['echo_channels'] = 'current'
        sim = _build(doc, 20)
        echoes = _transmissions_of(sim, 'relay')
        assert [(t.channel, t.start) for t in echoes] == [(37, 10450)]

    def test_forced_duplicate(self, doc):
        doc['relay']['duplicate_probability'] = 1.0
        sim = _build(doc, 20)
        relay = sim.devices['relay']
        echoes = _transmissions_of(sim, 'relay')
        assert len(echoes) == 6
        assert echoes[3].start == 12150
        assert echoes[3].packet.echo_seq != echoes[0].packet.echo_seq
        assert relay.forwarded == 1
        assert sim.ledger.echo_sent == 2
        assert sim.ledger.echo_duplicates_sent == 1


class TestBatchingRelay:

    def test_plan_batch(self):
        relay = Relay(RelayConfig(policy=Batching(nr_repeats=3)))
        assert relay.plan_batch({'a': 5, 'b': 1, 'c': 0}) == ['a', 'b', 'a', 'b', 'a', 'b']
        relay = Relay(RelayConfig(policy=Batching(nr_repeats=3, echo_count='received')))
        assert relay.plan_batch({'a': 5, 'b': 1}) == ['a', 'b', 'a', 'a']
        assert relay.plan_batch({}) == []

    def test_forward_after_listen(self):
        doc = {
            'nodes': [fixed_node('n1', 10)],
            'relay': {'scan_interval': 50, 'policy': {
                'kind': 'batching', 'listen_time': 100, 'nr_repeats': 2,
                'repeat_interval': 10}},
        }
        sim = _build(doc, 150)
        relay = sim.devices['relay']
        echoes = _transmissions_of(sim, 'relay')
        assert len(echoes) == 6
        assert [t.start for t in echoes if t.channel == 37] == [100150, 110150]
        assert sim.ledger.echo_sent == 2
        assert relay.phase is Phase.LISTEN
        assert relay.counts == {}

    def test_slots_never_overlap(self):
        doc = {
            'nodes': [fixed_node('n1', 10)],
            'relay': {'scan_interval': 50, 'policy': {
                'kind': 'batching', 'listen_time': 100, 'nr_repeats': 3,
                'repeat_interval': 1}},
        }
        sim = _build(doc, 150)
        starts = [t.start for t in _transmissions_of(sim, 'relay') if t.channel == 37]
        assert starts == [100150, 101850, 103550]


class TestSleep:

    @pytest.fixture
    def sim(self):
        doc = {
            'nodes': [fixed_node('n1', 200, period=400)],
            'relay': {'scan_interval': 50, 'scan_time': 100, 'sleep_time': 300,
                      'policy': 'listen'},
        }
        return _build(doc, 4000)

    def test_duty_cycle(self, sim):
        assert sim.devices['relay'].duty_cycle() == 0.25

    def test_asleep_losses(self, sim):
        tally = sim.ledger.tally('relay')
        assert tally.counted == 0
        assert _losses(tally)['asleep'] == 30

    def test_sleep_segments(self, sim):
        sleeps = [since for since, mode, _ in sim.devices['relay'].radio.log
                  if mode is RadioMode.SLEEP]
        assert sleeps == [ms(100 + 400 * k) for k in range(10)]


class TestGateway:

    def _doc(self, dead_time):
        return {
            'nodes': [fixed_node('n1', 10), fixed_node('n2', 10.5)],
            'relay': None,
            'gateway': {'processing_dead_time_us': dead_time},
        }

    def test_dead_time(self):
        sim = _build(self._doc(1000), 20)
        tally = sim.ledger.tally('gateway')
        assert tally.counted == 1
        assert _losses(tally)['rx-busy'] == 3
        assert _losses(tally)['not-tuned'] == 2
        assert sim.devices['gateway'].received[GatewayReception.DIRECT] == 1

    def test_no_dead_time(self):
        sim = _build(self._doc(0), 20)
        assert dict(sim.ledger.gateway_direct) == {'n1': 1, 'n2': 1}
        assert _losses(sim.ledger.tally('gateway'))['not-tuned'] == 4

    def test_report_without_relay(self):
        doc = self._doc(0)
        scenario = parse_scenario(dict(doc, duration=1))
        sim = build_simulation(scenario)
        sim.run_until(ms(20))
        report = make_report(sim, scenario)
        assert report.nodes_to_relay is None
        assert report.relay_to_gateway is None
        assert report.nodes_to_gateway == 1.0


class TestPermanentListener:

    def test_hears_every_event(self):
        # A relay tuned to one channel for the whole run, with instant hops and no noise.
        scenario = parse_scenario({
            'duration': 600,
            'nodes': [fixed_node('n1', 500)],
            'relay': {'scan_interval': 100000, 'hop_latency_us': 0, 'policy': 'listen'},
            'gateway': {},
        })
        report = simulate(scenario, seed=3).report
        assert report.member_events_sent == 600
        assert report.relay_counted == 600
        assert report.nodes_to_relay == 1.0
        relay = [tally for tally in report.listeners if tally.listener == 'relay'][0]
        assert relay.is_conserved()
        assert not dict(relay.losses).get('collision')
