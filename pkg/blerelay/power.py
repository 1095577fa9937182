# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
"""Relay power and battery-life estimates.

The relay draws ``active_current`` whenever it is not asleep (listening,
switching or advertising) and ``sleep_current`` otherwise.
"""
import logging
import math
from dataclasses import dataclass


logger = logging.getLogger(__name__)

HOURS_PER_YEAR = 8760


def _check_duty(duty):
    if not 0 <= duty <= 1:
        raise ValueError("The duty cycle must be in [0, 1], got {}.".format(duty))


@dataclass(frozen=True)
class PowerModel:
    """Two-state current model.

    :param active_current:
        Current in mA while awake.
    :param sleep_current:
        Current in mA while asleep.
    :param battery_capacity:
        Battery capacity in mAh.
    """
    active_current: float = 7.5
    sleep_current: float = 0.0
    battery_capacity: float = 12000.0

    def __post_init__(self):
        if self.active_current <= 0 or self.sleep_current < 0:
            raise ValueError("Currents must be non-negative and the active current positive.")
        if self.sleep_current >= self.active_current:
            raise ValueError("The active current must exceed the sleep current.")
        if self.battery_capacity <= 0:
            raise ValueError("The battery capacity must be positive.")

    def average_current(self, duty):
        "Average current in mA at the given duty cycle."
        _check_duty(duty)
        return duty * self.active_current + (1 - duty) * self.sleep_current

    def battery_life_hours(self, duty):
        current = self.average_current(duty)
        if current == 0:
            return math.inf
        return self.battery_capacity / current

    def battery_life_years(self, duty):
        """Battery life in years (of 8760 hours).

        Unbounded (``math.inf``) if the average current is zero.
        """
        return self.battery_life_hours(duty) / HOURS_PER_YEAR


def effective_rate(baseline_rate, duty):
    """Reception rate of a duty-cycled relay.

    Scales the full-duty rate by the fraction of cycles in which the relay is
    awake.
    """
    _check_duty(duty)
    return baseline_rate * duty


def extrapolate_rate_for_period(baseline_rate, period_s, reference_period_s=1.0):
    """Estimate the rate at a longer advertising period.

    The forwarded throughput of a batching relay stays constant while a
    longer period offers proportionally fewer packets, so the forwarded
    fraction grows with the period. The estimate saturates at 1.

    :param baseline_rate:
        The rate measured with reference_period_s.
    :param period_s:
        The advertising period in seconds.
    :raises ValueError:
        If a period is not positive.
    """
    if period_s <= 0 or reference_period_s <= 0:
        raise ValueError("Advertising periods must be positive.")
    return min(1.0, baseline_rate * period_s / reference_period_s)
