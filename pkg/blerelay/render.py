# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
"""Human-readable summaries of run reports."""
import logging

import jinja2
import numpy as np
from tqdm import tqdm

from .medium import LOSS_REASONS


logger = logging.getLogger(__name__)

SUMMARY_TEMPLATE = 'summary.jinja'

_RATE_COLUMNS = ('nodes_to_relay', 'relay_to_gateway', 'nodes_to_gateway', 'listen_ratio',
                 'duty_cycle')


def draw_progressbar(value, total=1.0, width=20):
    """Visualize a ratio with a bar.

    :param value:
        The current value as a fraction of total; None draws nothing.
    :type value:
        float
    :param total:
        The maximum value that 'value' may obtain.
    :type total:
        float
    :param width:
        The character width of the drawn bar.
    :type width:
        int
    """
    if value is None:
        return ''
    assert total > 0
    bar_format = '|{{bar:{}}}| {{percentage:5.1f}}%'.format(width)
    return tqdm.format_meter(n=min(value, total), total=total, elapsed=0, bar_format=bar_format)


def template_environment(float_format='.4f'):
    "Return the jinja2 environment for summary templates."
    env = jinja2.Environment(
        loader=jinja2.ChoiceLoader([
            jinja2.FileSystemLoader('templates'),
            jinja2.PackageLoader('blerelay', 'templates')]),
        trim_blocks=True)

    def fmt(value):
        if value is None:
            return '-'
        if isinstance(value, (float, np.floating)):
            return format(float(value), float_format)
        return str(value)

    env.filters['fmt'] = fmt
    env.filters['draw_progressbar'] = draw_progressbar
    return env


def _label(report):
    return str(report.seed)


def _aggregate_rows(reports):
    mean = dict(label='mean', policy=reports[0].policy,
                scan_interval_ms=reports[0].scan_interval_ms)
    std = dict(mean, label='std')
    for column in _RATE_COLUMNS:
        values = np.array([getattr(r, column) for r in reports
                           if getattr(r, column) is not None], dtype=float)
        mean[column] = float(np.mean(values)) if len(values) else None
        # Sample standard deviation (N-1 denominator).
        std[column] = float(np.std(values, ddof=1)) if len(values) > 1 else None
    return [mean, std]


def emit_summary(reports, power_model=None, float_format='.4f', template=None):
    """Render per-hop rates, capture outcomes and power estimates as aligned text.

    :param reports:
        One or more :class:`~.ledger.RateReport` instances. If several are
        given, mean and standard deviation rows follow the individual rows.
    :param power_model:
        Optional :class:`~.power.PowerModel`; adds battery-life estimates at
        each report's measured duty cycle.
    :param template:
        The name of a user-provided template, looked up in ``./templates``
        first.
    :raises ValueError:
        If no report is given.
    """
    reports = list(reports)
    if not reports:
        raise ValueError("At least one report is required.")
    rows = [dict(label=_label(r), policy=r.policy, scan_interval_ms=r.scan_interval_ms,
                 **{column: getattr(r, column) for column in _RATE_COLUMNS})
            for r in reports]
    if len(reports) > 1:
        rows.extend(_aggregate_rows(reports))
    listeners = [dict(label=_label(r), tally=tally) for r in reports for tally in r.listeners]

    power = None
    if power_model is not None:
        power_rows = []
        for row in rows:
            duty = row['duty_cycle'] if row['duty_cycle'] is not None else 1.0
            if row['label'] == 'std':
                continue
            power_rows.append(dict(label=row['label'], duty=duty,
                                   current=power_model.average_current(duty),
                                   years=power_model.battery_life_years(duty)))
        power = dict(model=power_model, rows=power_rows)

    env = template_environment(float_format)
    context = dict(rows=rows, listeners=listeners, power=power,
                   reasons=[str(reason) for reason in LOSS_REASONS])
    return env.get_template(template or SUMMARY_TEMPLATE).render(**context)


def format_table(rows, columns, float_format='.4f'):
    """Format CSV-style rows as right-aligned text columns.

    Missing values are shown as ``-``.
    """
    fmt = template_environment(float_format).filters['fmt']
    cells = [list(columns)] + [[fmt(row.get(column)) for column in columns] for row in rows]
    widths = [max(len(line[i]) for line in cells) for i in range(len(columns))]
    return ''.join('  '.join(cell.rjust(width) for cell, width in zip(line, widths)).rstrip()
                   + '\n' for line in cells)
