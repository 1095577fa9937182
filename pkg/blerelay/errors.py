# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
"""Definitions of Exception classes used in this package."""


class ConfigKeyError(KeyError):
    "Indicates that a config key was not found."
    pass


class ScenarioError(ValueError):
    """Indicates that a scenario or sweep document is invalid.

    :param path:
        Dotted path to the offending field, e.g. ``relay.scan_window``.
    :type path:
        str
    :param message:
        Description of the violated constraint.
    :type message:
        str
    """

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super(ScenarioError, self).__init__("{}: {}".format(path or '<document>', message))


class SimulationFault(RuntimeError):
    "Indicates a violated simulator invariant, i.e., a bug in a device model."
    pass


class SweepError(RuntimeError):
    """Indicates that a run within a sweep failed.

    The key of the failing run is stored in the ``key`` attribute as a
    ``(point_index, seed)`` tuple.
    """

    def __init__(self, key, message):
        self.key = key
        super(SweepError, self).__init__(message)
