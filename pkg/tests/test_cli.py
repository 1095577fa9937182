# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
import json

import pytest

from blerelay import __version__
from blerelay.__main__ import main
from blerelay.ledger import RateReport
from blerelay.sweep import ABORT_MARKER

from define_scenarios import bundled_path, small_network, small_sweep


@pytest.fixture
def scenario_file(tmpdir):
    path = tmpdir.join('small.json')
    path.write(json.dumps(small_network(duration=2)))
    return str(path)


@pytest.fixture
def sweep_file(tmpdir):
    path = tmpdir.join('sweep.json')
    doc = small_sweep(seeds=2)
    doc['base']['duration'] = 2
    path.write(json.dumps(doc))
    return str(path)


class TestMain:

    def test_version(self, capsys):
        assert main(['--version']) == 0
        assert __version__ in capsys.readouterr().out

    def test_no_command(self, capsys):
        assert main([]) == 2

    def test_invalid_document(self, tmpdir, capsys):
        path = tmpdir.join('invalid.json')
        path.write(json.dumps({'duration': -1, 'nodes': [], 'gateway': {}}))
        assert main(['run', str(path)]) == 1
        err = capsys.readouterr().err
        assert 'ERROR: Invalid document' in err
        assert '--show-traceback' in err

    def test_missing_file(self, tmpdir, capsys):
        assert main(['run', str(tmpdir.join('missing.json'))]) == 1
        assert 'ERROR' in capsys.readouterr().err

    def test_show_traceback(self, tmpdir, capsys):
        path = tmpdir.join('invalid.json')
        path.write('{')
        assert main(['run', str(path), '--show-traceback']) == 1
        assert 'Traceback' in capsys.readouterr().err


class TestRun:

    def test_summary(self, scenario_file, capsys):
        assert main(['run', scenario_file]) == 0
        out = capsys.readouterr().out
        assert 'Reception rates' in out
        assert 'Capture outcomes' in out

    def test_bundled_minimal(self, capsys):
        assert main(['run', bundled_path('minimal.json')]) == 0
        assert 'Relay power' in capsys.readouterr().out

    def test_csv(self, scenario_file, tmpdir):
        out = tmpdir.join('row.csv')
        assert main(['run', scenario_file, '--format', 'csv', '--out', str(out)]) == 0
        header, row = out.read().splitlines()
        assert header.split(',') == list(RateReport.ROW_COLUMNS)
        assert row.split(',')[-1] == '0'

    def test_seed_override(self, scenario_file, tmpdir):
        out = tmpdir.join('row.csv')
        assert main(['run', scenario_file, '--format', 'csv', '--seed', '7',
                     '--out', str(out)]) == 0
        assert out.read().splitlines()[1].split(',')[-1] == '7'

    def test_trace(self, scenario_file, tmpdir):
        trace = tmpdir.join('trace.tsv')
        out = tmpdir.join('summary.txt')
        assert main(['run', scenario_file, '--trace', str(trace), '--out', str(out)]) == 0
        lines = trace.read().splitlines()
        assert lines
        assert all(len(line.split('\t')) == 4 for line in lines)

    def test_trace_is_deterministic(self, scenario_file, tmpdir):
        traces = []
        for name in ('a.tsv', 'b.tsv'):
            trace = tmpdir.join(name)
            assert main(['run', scenario_file, '--trace', str(trace),
                         '--out', str(tmpdir.join('out.txt'))]) == 0
            traces.append(trace.read())
        assert traces[0] == traces[1]


class TestSweep:

    def test_csv(self, sweep_file, tmpdir):
        out = tmpdir.join('sweep.csv')
        assert main(['sweep', sweep_file, '--out', str(out)]) == 0
        lines = out.read().splitlines()
        assert lines[0].startswith('relay.scan_interval,')
        assert len(lines) == 1 + 2 * (2 + 2)

    def test_table(self, sweep_file, capsys):
        assert main(['sweep', sweep_file, '--format', 'table']) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].split()[0] == 'relay.scan_interval'
        assert len(lines) == 1 + 2 * (2 + 2)

    def test_parallel(self, sweep_file, tmpdir):
        serial, parallel = tmpdir.join('serial.csv'), tmpdir.join('parallel.csv')
        assert main(['sweep', sweep_file, '--out', str(serial)]) == 0
        assert main(['sweep', sweep_file, '-j', '2', '--out', str(parallel)]) == 0
        assert serial.read() == parallel.read()

    def test_invalid_jobs(self, sweep_file, capsys):
        with pytest.raises(SystemExit):
            main(['sweep', sweep_file, '-j', '0'])

    def test_invalid_sweep(self, tmpdir, capsys):
        path = tmpdir.join('sweep.json')
        path.write(json.dumps(dict(small_sweep(), seeds=0)))
        assert main(['sweep', str(path)]) == 1
        assert 'ERROR: Invalid document' in capsys.readouterr().err

    def test_abort_marker(self, sweep_file, tmpdir, monkeypatch, capsys):
        import blerelay.sweep

        def broken(scenario, seed):
            raise RuntimeError("radio exploded")

        monkeypatch.setattr(blerelay.sweep, 'run_scenario', broken)
        out = tmpdir.join('sweep.csv')
        assert main(['sweep', sweep_file, '--out', str(out)]) == 1
        assert out.read().splitlines()[-1].startswith(ABORT_MARKER)
        assert 'ERROR: Sweep aborted' in capsys.readouterr().err
