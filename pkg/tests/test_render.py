# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
import statistics

import pytest

from blerelay.ledger import ListenerTally, RateReport
from blerelay.medium import LOSS_REASONS
from blerelay.power import PowerModel
from blerelay.render import draw_progressbar, emit_summary, format_table


def _report(seed, nodes_to_relay, duty_cycle=1.0):
    losses = tuple((str(reason), 0) for reason in LOSS_REASONS)
    tally = ListenerTally(listener='relay', attempts=7, counted=5, duplicates=1, filtered=1,
                          losses=losses)
    return RateReport(
        seed=seed, duration_s=10.0, policy='immediate', scan_interval_ms=50.0,
        repeat_interval_ms=None, nr_repeats=None, duty_cycle=duty_cycle, listen_ratio=None,
        nodes_to_relay=nodes_to_relay, relay_to_gateway=0.5, nodes_to_gateway=0.25,
        listeners=(tally, ))


class TestEmitSummary:

    def test_single_report(self):
        text = emit_summary([_report(0, 0.75)])
        assert 'Reception rates' in text
        assert '0.7500' in text
        assert '0.2500' in text
        assert 'mean' not in text
        assert 'Relay power' not in text

    def test_aggregate_rows(self):
        values = (0.2, 0.4, 0.9)
        text = emit_summary([_report(seed, value) for seed, value in enumerate(values)])
        lines = text.splitlines()
        mean_line, = [line for line in lines if line.startswith('mean')]
        std_line, = [line for line in lines if line.startswith('std')]
        assert '0.5000' in mean_line
        assert format(statistics.stdev(values), '.4f') in std_line

    def test_capture_outcomes(self):
        text = emit_summary([_report(0, 0.75)])
        header, = [line for line in text.splitlines() if 'listener' in line]
        for reason in LOSS_REASONS:
            assert str(reason) in header
        row, = [line for line in text.splitlines() if line.startswith('0') and 'relay' in line]
        # attempts, five empty loss categories, counted, duplicates, filtered
        assert row.split()[2:] == ['7', '0', '0', '0', '0', '0', '5', '1', '1']

    def test_power(self):
        model = PowerModel(active_current=7.5, battery_capacity=12000)
        text = emit_summary([_report(0, 0.75, duty_cycle=0.2)], power_model=model)
        assert 'Relay power' in text
        assert format(model.battery_life_years(0.2), '.4f') in text
        assert format(model.average_current(0.2), '.4f') in text

    def test_missing_values(self):
        text = emit_summary([_report(0, None)])
        row, = [line for line in text.splitlines()
                if line.startswith('0 ') and 'immediate' in line]
        assert ' - ' in row

    def test_empty(self):
        with pytest.raises(ValueError):
            emit_summary([])

    def test_user_template(self, tmpdir, monkeypatch):
        tmpdir.mkdir('templates').join('custom.jinja').write(
            '{% extends "summary.jinja" %}\n{% block losses %}no losses here\n{% endblock %}\n')
        monkeypatch.chdir(tmpdir)
        text = emit_summary([_report(0, 0.75)], template='custom.jinja')
        assert 'no losses here' in text
        assert 'Capture outcomes' not in text
        assert 'Reception rates' in text


class TestDrawProgressbar:

    def test_none(self):
        assert draw_progressbar(None) == ''

    def test_ratio(self):
        assert '50.0%' in draw_progressbar(0.5)
        assert '100.0%' in draw_progressbar(2.0)
        assert draw_progressbar(0.5).startswith('|')


class TestFormatTable:

    def test_alignment(self):
        rows = [{'a': 1, 'b': 0.5}, {'a': 'mean', 'b': None}]
        assert format_table(rows, ['a', 'b'], float_format='.2f') == (
            '   a     b\n'
            '   1  0.50\n'
            'mean     -\n')
