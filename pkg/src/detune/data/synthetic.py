"""Seeded synthetic seasonal load series for desk-scale runs.

Demand combines a base level, daily and weekly cycles, a temperature-coupled
component, and Gaussian noise. All periodic components are computed from the
hour-of-day / day-of-week phases, so with the noise turned off the series
repeats bit-exactly every 168 hours.
"""

from __future__ import annotations

import math
from datetime import datetime, timedelta

import numpy as np

from ..errors import ConfigurationError
from .loading import RawRecord
from .pipeline import HORIZON, INPUT_LEN

__all__ = ["synthesize_load"]

_START = datetime(2021, 1, 1, 0, 0)
_HOLIDAYS = {(1, 1), (7, 1), (12, 25)}  # month, day

# Amplitudes keep the series load-like while the ReLU head's zero clip in
# the scaled domain (predictions can never go below the training mean) stays
# a small fraction of demand.
BASE_KW = 15000.0
DAILY_AMP_KW = 1200.0
WEEKLY_AMP_KW = 150.0
WEEKEND_DROP_KW = 450.0
TEMP_COUPLING_KW_PER_C = 30.0
COMFORT_C = 18.0
NOISE_KW = 80.0


def synthesize_load(hours: int, seed: int = 0, noise: float = 1.0) -> list[RawRecord]:
    """Generate `hours` hourly records; `noise` scales every stochastic term."""
    minimum = INPUT_LEN + HORIZON
    if hours < minimum:
        raise ConfigurationError(f"need at least {minimum} hours, got {hours}")
    rng = np.random.default_rng(seed)

    rows = []
    for h in range(hours):
        ts = _START + timedelta(hours=h)
        hod = ts.hour
        dow = ts.weekday()
        holiday = 1 if (ts.month, ts.day) in _HOLIDAYS else 0
        day_type = 2 if holiday else (1 if dow >= 5 else 0)

        temperature = (
            10.0
            + 8.0 * math.sin(2.0 * math.pi * (hod - 9) / 24.0)
            + noise * rng.normal(0.0, 0.8)
        )
        demand = (
            BASE_KW
            + DAILY_AMP_KW * math.sin(2.0 * math.pi * (hod - 10) / 24.0)
            + WEEKLY_AMP_KW * math.sin(2.0 * math.pi * (dow * 24 + hod) / 168.0)
            - (WEEKEND_DROP_KW if dow >= 5 else 0.0)
            + TEMP_COUPLING_KW_PER_C * abs(temperature - COMFORT_C)
            + noise * rng.normal(0.0, NOISE_KW)
        )
        humidity = min(
            100.0,
            max(0.0, 65.0 + 20.0 * math.sin(2.0 * math.pi * (hod - 4) / 24.0) + noise * rng.normal(0.0, 5.0)),
        )
        dew_point = temperature - 4.0 - noise * abs(rng.normal(0.0, 1.0))
        wind = max(0.0, 12.0 + 6.0 * math.sin(2.0 * math.pi * hod / 24.0) + noise * rng.normal(0.0, 3.0))
        precipitation = max(0.0, noise * (rng.normal(0.0, 1.0) - 1.2)) * 3.0
        visibility = max(0.5, 24.0 - 2.0 * precipitation - noise * abs(rng.normal(0.0, 2.0)))

        rows.append(
            dict(
                timestamp=ts,
                ontario_demand=demand,
                daily_peak=0.0,  # filled per day below
                year=ts.year,
                quarter=(ts.month - 1) // 3 + 1,
                month=ts.month,
                week_of_year=ts.isocalendar()[1],
                day_of_year=ts.timetuple().tm_yday,
                hour_of_day=hod,
                day_of_week=dow,
                day_type=day_type,
                state_holiday=holiday,
                temperature=temperature,
                dew_point=dew_point,
                relative_humidity=humidity,
                wind_speed=wind,
                visibility=visibility,
                precipitation=precipitation,
            )
        )

    peaks: dict = {}
    for row in rows:
        day = row["timestamp"].date()
        peaks[day] = max(peaks.get(day, -math.inf), row["ontario_demand"])
    for row in rows:
        row["daily_peak"] = peaks[row["timestamp"].date()]

    return [RawRecord(**row) for row in rows]
