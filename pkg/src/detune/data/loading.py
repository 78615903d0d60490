"""Ingestion of the hourly load/weather CSV.

The documented schema has 19 columns; `date` (YYYY-MM-DD) and `time` (HH:MM)
combine into each record's timestamp:

    date, time, ontario_demand, daily_peak, year, quarter, month,
    week_of_year, day_of_year, hour_of_day, day_of_week, day_type,
    state_holiday, temperature, dew_point, relative_humidity, wind_speed,
    visibility, precipitation

Demand/peak are kW, temperature and dew point degrees C, relative humidity
percent, wind speed km/h, visibility km, precipitation mm. Rows must be in
strictly increasing time order; missing hours are allowed and simply split
the series into contiguous blocks.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from ..errors import DataError, SchemaError

__all__ = ["RawRecord", "COLUMNS", "WEATHER_COLUMNS", "load_csv", "write_csv"]

log = logging.getLogger(__name__)

COLUMNS = (
    "date",
    "time",
    "ontario_demand",
    "daily_peak",
    "year",
    "quarter",
    "month",
    "week_of_year",
    "day_of_year",
    "hour_of_day",
    "day_of_week",
    "day_type",
    "state_holiday",
    "temperature",
    "dew_point",
    "relative_humidity",
    "wind_speed",
    "visibility",
    "precipitation",
)

WEATHER_COLUMNS = (
    "temperature",
    "dew_point",
    "relative_humidity",
    "wind_speed",
    "visibility",
    "precipitation",
)

# Physical plausibility bounds; values outside are treated as missing.
_WEATHER_RANGE = {
    "temperature": (-60.0, 60.0),
    "dew_point": (-60.0, 60.0),
    "relative_humidity": (0.0, 100.0),
    "wind_speed": (0.0, None),
    "visibility": (0.0, None),
    "precipitation": (0.0, None),
}

_DAY_TYPE_LEVELS = {"weekday": 0, "weekend": 1, "holiday": 2}
_MAX_INTERP_GAP = 3  # hours; longer weather holes reject the rows instead


@dataclass(frozen=True)
class RawRecord:
    timestamp: datetime
    ontario_demand: float
    daily_peak: float
    year: int
    quarter: int
    month: int
    week_of_year: int
    day_of_year: int
    hour_of_day: int
    day_of_week: int
    day_type: int
    state_holiday: int
    temperature: float
    dew_point: float
    relative_humidity: float
    wind_speed: float
    visibility: float
    precipitation: float


def _parse_timestamp(date_text: str, time_text: str) -> datetime:
    time_text = time_text.strip()
    fmt = "%H:%M:%S" if time_text.count(":") == 2 else "%H:%M"
    return datetime.strptime(f"{date_text.strip()} {time_text}", f"%Y-%m-%d {fmt}")


def _parse_level(text: str, levels: dict[str, int]) -> int:
    text = text.strip()
    try:
        return int(float(text))
    except ValueError:
        pass
    key = text.lower()
    if key in levels:
        return levels[key]
    raise ValueError(f"cannot interpret {text!r}")


def _parse_flag(text: str) -> int:
    return _parse_level(text, {"false": 0, "true": 1, "no": 0, "yes": 1})


def _parse_weather(text: str, column: str) -> float:
    text = text.strip()
    if not text:
        return math.nan
    try:
        value = float(text)
    except ValueError:
        return math.nan
    lo, hi = _WEATHER_RANGE[column]
    if (lo is not None and value < lo) or (hi is not None and value > hi):
        return math.nan
    return value


def _interpolate_weather(rows: list[dict], rejected: set[int]) -> None:
    """Fill NaN holes of <= _MAX_INTERP_GAP hours linearly; reject longer ones."""
    for column in WEATHER_COLUMNS:
        values = [row[column] for row in rows]
        i = 0
        while i < len(values):
            if not math.isnan(values[i]):
                i += 1
                continue
            j = i
            while j < len(values) and math.isnan(values[j]):
                j += 1
            interior = 0 < i and j < len(values)
            hourly = interior and (
                rows[j]["timestamp"] - rows[i - 1]["timestamp"]
            ).total_seconds() == 3600.0 * (j - i + 1)
            if interior and hourly and j - i <= _MAX_INTERP_GAP:
                left, right = values[i - 1], values[j]
                for k in range(i, j):
                    frac = (k - i + 1) / (j - i + 1)
                    rows[k][column] = left + frac * (right - left)
            else:
                rejected.update(rows[k]["row_number"] for k in range(i, j))
            i = j


def load_csv(path: str | Path) -> list[RawRecord]:
    """Parse and validate the CSV into timestamp-ordered records.

    Rows with unparseable demand (or other non-weather fields) are dropped
    and logged with their row numbers; weather holes up to 3 hours are
    linearly interpolated, longer ones drop the rows. Out-of-order
    timestamps are an error, not silently re-sorted.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"data file not found: {path}")

    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in COLUMNS if c not in header]
        if missing:
            raise SchemaError(f"missing required column(s): {', '.join(missing)}")

        rows: list[dict] = []
        bad_rows: list[int] = []
        for row_number, raw in enumerate(reader, start=2):  # 1 is the header
            try:
                parsed = {
                    "row_number": row_number,
                    "timestamp": _parse_timestamp(raw["date"], raw["time"]),
                    "ontario_demand": float(raw["ontario_demand"]),
                    "daily_peak": float(raw["daily_peak"]),
                    "year": int(float(raw["year"])),
                    "quarter": int(float(raw["quarter"])),
                    "month": int(float(raw["month"])),
                    "week_of_year": int(float(raw["week_of_year"])),
                    "day_of_year": int(float(raw["day_of_year"])),
                    "hour_of_day": int(float(raw["hour_of_day"])),
                    "day_of_week": int(float(raw["day_of_week"])),
                    "day_type": _parse_level(raw["day_type"], _DAY_TYPE_LEVELS),
                    "state_holiday": _parse_flag(raw["state_holiday"]),
                }
            except (ValueError, TypeError):
                bad_rows.append(row_number)
                continue
            for column in WEATHER_COLUMNS:
                parsed[column] = _parse_weather(raw[column], column)
            rows.append(parsed)

    if bad_rows:
        log.warning("rejected %d unparseable row(s): %s", len(bad_rows), bad_rows)

    out_of_order = [
        rows[i]["row_number"]
        for i in range(1, len(rows))
        if rows[i]["timestamp"] <= rows[i - 1]["timestamp"]
    ]
    if out_of_order:
        raise DataError(f"timestamps not strictly increasing at row(s): {out_of_order}")

    rejected: set[int] = set()
    _interpolate_weather(rows, rejected)
    if rejected:
        log.warning(
            "rejected %d row(s) with unrecoverable weather holes: %s",
            len(rejected),
            sorted(rejected),
        )
        rows = [r for r in rows if r["row_number"] not in rejected]

    records = []
    for row in rows:
        row.pop("row_number")
        records.append(RawRecord(**row))
    return records


def write_csv(records: list[RawRecord], path: str | Path) -> Path:
    """Inverse of load_csv, used for fixtures and caching synthetic data."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.timestamp.strftime("%Y-%m-%d"),
                    r.timestamp.strftime("%H:%M"),
                    repr(r.ontario_demand),
                    repr(r.daily_peak),
                    r.year,
                    r.quarter,
                    r.month,
                    r.week_of_year,
                    r.day_of_year,
                    r.hour_of_day,
                    r.day_of_week,
                    r.day_type,
                    r.state_holiday,
                    repr(r.temperature),
                    repr(r.dew_point),
                    repr(r.relative_humidity),
                    repr(r.wind_speed),
                    repr(r.visibility),
                    repr(r.precipitation),
                ]
            )
    return path
