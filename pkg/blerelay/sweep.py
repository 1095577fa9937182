# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
"""Execution of parameter sweeps and CSV emission.

Every (sweep point, seed) pair is an independent run. Runs are executed
serially or by a process pool; either way the rows are merged in
``(point, seed)`` order, so the CSV output is identical.
"""
import contextlib
import csv
import logging
import sys
from multiprocessing import Pool

import numpy as np
from tqdm import tqdm

from .errors import SweepError
from .ledger import RateReport
from .power import effective_rate
from .scenario import DUTY_CYCLE, run_scenario


logger = logging.getLogger(__name__)

AGGREGATED_COLUMNS = (
    'duty_cycle', 'listen_ratio', 'nodes_to_relay', 'relay_to_gateway', 'nodes_to_gateway',
    'battery_life_years', 'effective_rate')

ABORT_MARKER = '# aborted'


class _PickleError(Exception):
    "Indicates a pickling error while trying to parallelize the execution of runs."
    pass


def sweep_columns(spec):
    "Return the CSV columns of a sweep: parameter columns, then the report columns."
    columns = [name for name in spec.parameter_names if name not in RateReport.ROW_COLUMNS]
    columns.extend(RateReport.ROW_COLUMNS)
    if spec.power:
        columns.append('battery_life_years')
    if spec.baseline_rate is not None:
        columns.append('effective_rate')
    return columns


def run_point(spec, assignment, seed, runner=None):
    """Run one sweep point with one seed and return its CSV row as a dict."""
    runner = run_scenario if runner is None else runner
    scenario = spec.scenario_for(assignment)
    report = runner(scenario, seed)
    row = dict(assignment)
    row.update(report.as_row())
    if DUTY_CYCLE in assignment:
        row[DUTY_CYCLE] = assignment[DUTY_CYCLE]
    duty = row[DUTY_CYCLE] if row.get(DUTY_CYCLE) is not None else scenario.nominal_duty()
    if spec.power:
        row['battery_life_years'] = scenario.power.battery_life_years(duty)
    if spec.baseline_rate is not None:
        row['effective_rate'] = effective_rate(spec.baseline_rate, duty)
    return row


def _execute_serialized_run(loads, s_context, key, assignment, seed):
    """Invoke run_point() on a serialized (spec, runner) pair."""
    spec, runner = loads(s_context)
    return key, run_point(spec, assignment, seed, runner)


def _run_in_parallel(pool, pickle, spec, runner, tasks, progress):
    """Execute runs with the provided process pool.

    The spec and runner are pickled manually before submission, which allows
    retrying with a different pickle module.
    """
    try:
        s_context = pickle.dumps((spec, runner))
        s_tasks = [(pickle.loads, s_context, key, assignment, seed)
                   for key, assignment, seed in tasks]
    except Exception as error:  # Masking all errors since they must be pickling related.
        raise _PickleError(error)

    results = [pool.apply_async(_execute_serialized_run, task) for task in s_tasks]
    for (key, _, _), result in zip(tasks, tqdm(results, file=sys.stderr, disable=not progress)):
        try:
            yield result.get()
        except Exception as error:
            raise SweepError(key, "Run {} failed: {}".format(key, error)) from error


def _run_with_fallback(pool, spec, runner, tasks, progress):
    "Try the pickle module first and fall back to cloudpickle, e.g., for lambda runners."
    try:
        import pickle
        yield from _run_in_parallel(pool, pickle, spec, runner, tasks, progress)
        logger.debug("Used pickle module for serialization.")
    except _PickleError as error:
        logger.warning("Falling back to cloudpickle for serialization: {}".format(error))
        try:
            import cloudpickle
        except ImportError:  # The cloudpickle package is not available.
            logger.error("Unable to parallelize execution due to a pickling error. "
                         "\n\n - Try to install the 'cloudpickle' package, e.g., with "
                         "'pip install cloudpickle'!\n")
            raise error
        try:
            yield from _run_in_parallel(pool, cloudpickle, spec, runner, tasks, progress)
        except _PickleError as error:
            raise RuntimeError("Unable to parallelize execution due to a pickling "
                               "error: {}.".format(error))


def _run_serially(spec, runner, tasks, progress):
    for key, assignment, seed in tqdm(tasks, file=sys.stderr, disable=not progress):
        try:
            yield key, run_point(spec, assignment, seed, runner)
        except Exception as error:
            raise SweepError(key, "Run {} failed: {}".format(key, error)) from error


def _open_workspace(workspace):
    import signac
    return signac.init_project(name='blerelay-sweep', root=workspace)


def _statepoint(spec, assignment, seed):
    # Dotted parameter names are not valid signac keys, hence the pair list.
    return {
        'scenario': spec.document_for(assignment),
        'point': [[name, value] for name, value in assignment.items()],
        'seed': seed,
    }


def aggregate(rows, columns):
    """Return the mean and sample standard deviation rows over a point's seed rows."""
    mean = dict(rows[0])
    std = dict(rows[0])
    mean['seed'], std['seed'] = 'mean', 'std'
    for column in AGGREGATED_COLUMNS:
        if column not in columns:
            continue
        values = np.array([row[column] for row in rows if row.get(column) is not None],
                          dtype=float)
        mean[column] = float(np.mean(values)) if len(values) else None
        std[column] = float(np.std(values, ddof=1)) if len(values) > 1 else None
    return [mean, std]


def run_sweep(spec, jobs=1, progress=False, workspace=None, runner=None):
    """Execute all runs of a sweep and return the CSV rows.

    :param spec:
        The :class:`~.scenario.SweepSpec`.
    :param jobs:
        The number of worker processes; 1 runs serially in this process.
    :param progress:
        Show a progress bar.
    :param workspace:
        Optional directory of a signac workspace in which every run is stored
        as a job. Completed jobs are reused.
    :param runner:
        Callable ``(scenario, seed) -> RateReport``; defaults to
        :func:`~.scenario.run_scenario`.
    :returns:
        One row per (point, seed), each point followed by its mean and std rows.
    :raises SweepError:
        If a run fails. The rows completed so far are stored in the
        exception's ``rows`` attribute.
    """
    columns = sweep_columns(spec)
    runs = spec.runs()
    results = dict()
    project = None if workspace is None else _open_workspace(workspace)

    tasks = []
    for index, assignment, seed in runs:
        key = (index, seed)
        if project is not None:
            job = project.open_job(_statepoint(spec, assignment, seed))
            if job in project and 'row' in job.document:
                logger.info("Reusing stored result of run {} ({}).".format(key, job))
                results[key] = {k: v for k, v in job.document['row']}
                continue
        tasks.append((key, assignment, seed))
    logger.info("Executing {} of {} run(s) with {} job(s).".format(len(tasks), len(runs), jobs))

    assignments = {(index, seed): assignment for index, assignment, seed in runs}

    def store(key, row):
        results[key] = row
        if project is not None:
            job = project.open_job(_statepoint(spec, assignments[key], key[1]))
            job.init()
            job.document['row'] = [[k, v] for k, v in row.items()]

    try:
        if jobs is None or jobs == 1 or len(tasks) <= 1:
            for key, row in _run_serially(spec, runner, tasks, progress):
                store(key, row)
        else:
            with contextlib.closing(Pool(processes=jobs)) as pool:
                try:
                    for key, row in _run_with_fallback(pool, spec, runner, tasks, progress):
                        store(key, row)
                except SweepError:
                    pool.terminate()
                    raise
    except SweepError as error:
        error.rows = [results[(index, seed)] for index, _, seed in runs
                      if (index, seed) in results]
        raise

    rows = []
    for index, _ in enumerate(spec.points()):
        point_rows = [results[(index, seed)] for seed in spec.seeds]
        rows.extend(point_rows)
        rows.extend(aggregate(point_rows, columns))
    return rows


def format_value(value, float_format='.6f'):
    if value is None:
        return ''
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (float, np.floating)):
        return format(float(value), float_format)
    return str(value)


def write_csv(rows, columns, file, float_format='.6f', aborted=None):
    """Write sweep rows as CSV.

    :param aborted:
        If set, a comment line carrying this message is appended.
    """
    writer = csv.writer(file, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(column), float_format) for column in columns])
    if aborted is not None:
        # Not a CSV row; the message may contain separators.
        file.write("{}: {}\n".format(ABORT_MARKER, " ".join(str(aborted).splitlines())))
