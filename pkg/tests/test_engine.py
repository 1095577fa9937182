# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
import numpy as np
import pytest

from blerelay.devices import Device
from blerelay.engine import (
    Event, EventKind, EventQueue, RngStream, Simulation, ms, seconds)
from blerelay.errors import SimulationFault
from blerelay.scenario import parse_scenario, simulate

from define_scenarios import minimal_document


class Recorder(Device):

    def __init__(self, device_id):
        super(Recorder, self).__init__(device_id)
        self.seen = []

    def _on_sleep_end(self, event):
        self.seen.append((event.fire_at, event.payload))


class TestTime:

    def test_conversions(self):
        assert ms(1) == 1000
        assert ms(0.15) == 150
        assert seconds(1.5) == 1500000

    def test_event_kind_str(self):
        assert str(EventKind.TX_START) == 'tx-start'
        assert str(EventKind.SCAN_WINDOW_START) == 'scan-window-start'


class TestEventQueue:

    def test_order_by_time_then_seq(self):
        queue = EventQueue()
        events = [Event(10, queue.next_seq(), 'a', EventKind.TX_END),
                  Event(5, queue.next_seq(), 'b', EventKind.TX_END),
                  Event(10, queue.next_seq(), 'c', EventKind.TX_END),
                  Event(5, queue.next_seq(), 'd', EventKind.TX_END)]
        for event in events:
            queue.schedule(event)
        order = [queue.pop_next().target for _ in range(len(events))]
        assert order == ['b', 'd', 'a', 'c']
        assert queue.clock == 10
        assert queue.num_dispatched == 4
        assert len(queue) == 0

    def test_randomized_dispatch_order(self):
        draws = np.random.default_rng(2021).integers(0, 500, size=2000)
        queue = EventQueue()
        for fire_at in draws:
            queue.schedule(Event(int(fire_at), queue.next_seq(), 'a', EventKind.TX_END))
        popped = [queue.pop_next() for _ in range(len(draws))]
        keys = [(event.fire_at, event.seq) for event in popped]
        assert keys == sorted(keys)
        assert len(set(keys)) == len(draws)
        # Ties on fire_at pop in scheduling order.
        assert [event.seq for event in popped] == list(
            np.argsort(draws, kind='stable') + 1)

    def test_schedule_in_past(self):
        queue = EventQueue()
        queue.advance(100)
        with pytest.raises(SimulationFault):
            queue.schedule(Event(99, queue.next_seq(), 'a', EventKind.TX_END))
        queue.schedule(Event(100, queue.next_seq(), 'a', EventKind.TX_END))
        assert queue.peek_time() == 100

    def test_clock_monotone(self):
        queue = EventQueue()
        queue.advance(10)
        with pytest.raises(SimulationFault):
            queue.advance(9)


class TestRngStream:

    def test_reproducible(self):
        a = RngStream(42, 'n1')
        b = RngStream(42, 'n1')
        assert [a.random() for _ in range(10)] == [b.random() for _ in range(10)]

    def test_streams_independent(self):
        a = RngStream(42, 'n1')
        b = RngStream(42, 'n2')
        c = RngStream(43, 'n1')
        draws = [a.random() for _ in range(10)]
        assert draws != [b.random() for _ in range(10)]
        assert draws != [c.random() for _ in range(10)]

    def test_streams_uncorrelated(self):
        # Chi-squared test of independence on a 4x4 contingency table of paired draws.
        a = RngStream(42, 'n1')
        b = RngStream(42, 'n2')
        pairs = np.array([(a.random(), b.random()) for _ in range(10000)])
        bins = np.floor(pairs * 4).astype(int)
        observed = np.zeros((4, 4))
        np.add.at(observed, (bins[:, 0], bins[:, 1]), 1)
        expected = np.outer(observed.sum(axis=1), observed.sum(axis=0)) / observed.sum()
        statistic = ((observed - expected) ** 2 / expected).sum()
        # Critical value for 9 degrees of freedom at p = 0.001.
        assert statistic < 27.88

    def test_uniform_draw(self):
        rng = RngStream(0, 'draw')
        with pytest.raises(ValueError):
            rng.uniform_draw(2, 1)
        assert rng.uniform_draw(7, 7) == 7
        ints = {rng.uniform_draw(0, 1) for _ in range(200)}
        assert ints == {0, 1}
        for _ in range(100):
            value = rng.uniform_draw(0.0, 10.0)
            assert isinstance(value, float)
            assert 0.0 <= value <= 10.0

    def test_bernoulli_extremes(self):
        rng = RngStream(0, 'coin')
        assert not any(rng.bernoulli(0) for _ in range(100))
        assert all(rng.bernoulli(1) for _ in range(100))


class TestSimulation:

    def test_duplicate_device(self):
        sim = Simulation()
        sim.add_device(Recorder('a'))
        with pytest.raises(SimulationFault):
            sim.add_device(Recorder('a'))

    def test_run_until_invalid(self):
        sim = Simulation()
        with pytest.raises(ValueError):
            sim.run_until(0)
        sim.run_until(100)
        with pytest.raises(ValueError):
            sim.run_until(50)

    def test_dispatch_and_clock(self):
        sim = Simulation()
        device = sim.add_device(Recorder('a'))
        sim.schedule(30, 'a', EventKind.SLEEP_END, payload='second')
        sim.schedule(10, 'a', EventKind.SLEEP_END, payload='first')
        sim.schedule(200, 'a', EventKind.SLEEP_END, payload='late')
        sim.run_until(100)
        assert device.seen == [(10, 'first'), (30, 'second')]
        assert sim.now == 100
        sim.run_until(200)
        assert device.seen[-1] == (200, 'late')

    def test_event_count_conservation(self):
        sim = Simulation()
        device = sim.add_device(Recorder('a'))
        draws = np.random.default_rng(7).integers(1, 10000, size=1000)
        for fire_at in draws:
            sim.schedule(int(fire_at), 'a', EventKind.SLEEP_END)
        for end in (2500, 5000, 10000):
            sim.run_until(end)
            queue = sim.queue
            assert queue.num_scheduled == queue.num_dispatched + len(queue)
            assert queue.num_dispatched == int((draws <= end).sum())
        assert len(device.seen) == len(draws)
        assert [t for t, _ in device.seen] == sorted(int(t) for t in draws)

    def test_superseded_events_are_dropped(self):
        sim = Simulation()
        device = sim.add_device(Recorder('a'))
        stale = device.new_token()
        sim.schedule(10, 'a', EventKind.SLEEP_END, token=stale, payload='stale')
        current = device.new_token()
        sim.schedule(20, 'a', EventKind.SLEEP_END, token=current, payload='current')
        sim.schedule(30, 'a', EventKind.SLEEP_END, payload='untokened')
        sim.run_until(100)
        assert [payload for _, payload in device.seen] == ['current', 'untokened']

    def test_missing_handler(self):
        sim = Simulation()
        sim.add_device(Recorder('a'))
        sim.schedule(10, 'a', EventKind.GATEWAY_FREE)
        with pytest.raises(SimulationFault):
            sim.run_until(100)

    def test_streams_cached(self):
        sim = Simulation(seed=3)
        assert sim.rng('x') is sim.rng('x')
        assert sim.rng('x') is not sim.rng('y')


class TestTrace:

    def test_identical_traces(self):
        scenario = parse_scenario(minimal_document(duration=5))
        first = simulate(scenario, seed=7, trace=True).dumps_trace()
        second = simulate(scenario, seed=7, trace=True).dumps_trace()
        assert first
        assert first == second

    def test_seed_changes_trace(self):
        scenario = parse_scenario(minimal_document(duration=5))
        assert simulate(scenario, seed=7, trace=True).dumps_trace() != \
            simulate(scenario, seed=8, trace=True).dumps_trace()

    def test_trace_format(self):
        scenario = parse_scenario(minimal_document(duration=2))
        sim = simulate(scenario, trace=True)
        times = []
        for line in sim.trace:
            fire_at, target, kind, _ = line.split('\t')
            assert target in sim.devices
            assert kind in {str(k) for k in EventKind}
            times.append(int(fire_at))
        assert times == sorted(times)

    def test_no_trace_by_default(self):
        scenario = parse_scenario(minimal_document(duration=1))
        assert simulate(scenario).trace == []
