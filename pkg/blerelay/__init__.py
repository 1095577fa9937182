# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
"""blerelay simulates duty-cycled relays in BLE advertising networks.

Member nodes broadcast advertising events; a relay listens on the
advertising channels, optionally echoes what it heard, and sleeps; one or
more gateways record what reaches them. The package measures per-hop
reception rates and estimates the relay's battery life.
"""
from . import devices
from . import engine
from . import errors
from . import ledger
from . import medium
from . import power
from . import scenario
from . import sweep
from .engine import Simulation
from .ledger import PacketLedger, RateReport, listen_ratio
from .power import PowerModel, effective_rate, extrapolate_rate_for_period
from .render import emit_summary
from .scenario import (
    Scenario, SweepSpec, load_scenario, load_sweep, parse_scenario, parse_sweep,
    run_scenario, simulate)
from .sweep import run_sweep
from .version import __version__


__all__ = [
    '__version__',
    'devices', 'engine', 'errors', 'ledger', 'medium', 'power', 'scenario', 'sweep',
    'Simulation',
    'PacketLedger', 'RateReport', 'listen_ratio',
    'PowerModel', 'effective_rate', 'extrapolate_rate_for_period',
    'emit_summary',
    'Scenario', 'SweepSpec', 'load_scenario', 'load_sweep', 'parse_scenario', 'parse_sweep',
    'run_scenario', 'simulate',
    'run_sweep',
]
