# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
import math

import pytest

from blerelay.power import (
    HOURS_PER_YEAR, PowerModel, effective_rate, extrapolate_rate_for_period)


class TestPowerModel:

    def test_battery_life(self, subtests):
        model = PowerModel(active_current=7.5, battery_capacity=12000)
        for duty, years in ((1.0, 0.18), (0.2, 0.9), (0.1, 1.8)):
            with subtests.test(duty=duty):
                assert model.battery_life_years(duty) == pytest.approx(years, rel=0.02)

    def test_average_current(self):
        model = PowerModel(active_current=10.0, sleep_current=0.5)
        assert model.average_current(1.0) == 10.0
        assert model.average_current(0.0) == 0.5
        assert model.average_current(0.5) == pytest.approx(5.25)
        assert model.battery_life_hours(1.0) == 1200.0
        assert model.battery_life_years(1.0) == 1200.0 / HOURS_PER_YEAR

    def test_unbounded_life(self):
        assert math.isinf(PowerModel().battery_life_years(0.0))

    def test_invalid_duty(self, subtests):
        model = PowerModel()
        for duty in (-0.1, 1.1):
            with subtests.test(duty=duty):
                with pytest.raises(ValueError):
                    model.average_current(duty)

    def test_invalid_model(self, subtests):
        for kwargs in (dict(active_current=0), dict(sleep_current=-1),
                       dict(active_current=1, sleep_current=2),
                       dict(active_current=1, sleep_current=1), dict(battery_capacity=0)):
            with subtests.test(**kwargs):
                with pytest.raises(ValueError):
                    PowerModel(**kwargs)

    def test_frozen(self):
        model = PowerModel()
        with pytest.raises(AttributeError):
            model.active_current = 1.0


class TestRates:

    def test_effective_rate(self):
        assert effective_rate(0.35, 0.2) == pytest.approx(0.07, abs=1e-12)
        assert effective_rate(0.35, 1.0) == 0.35
        with pytest.raises(ValueError):
            effective_rate(0.35, 1.5)

    def test_extrapolate(self):
        rate = extrapolate_rate_for_period(0.35, 2.5)
        assert 0.86 <= rate <= 0.88
        assert extrapolate_rate_for_period(0.35, 1.0) == 0.35
        assert extrapolate_rate_for_period(0.5, 10.0) == 1.0

    def test_extrapolate_invalid(self):
        with pytest.raises(ValueError):
            extrapolate_rate_for_period(0.35, 0)
        with pytest.raises(ValueError):
            extrapolate_rate_for_period(0.35, 1.0, reference_period_s=-1)
