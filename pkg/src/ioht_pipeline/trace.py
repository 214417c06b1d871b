"""Time-series traces, CSV ingestion and seeded synthetic data generators."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

KINDS = ("heart-rate", "body-temperature", "other")
UNITS = ("bpm", "celsius", "dimensionless")

# Numeric codes used by the wire format.
KIND_CODES = {k: i for i, k in enumerate(KINDS)}
UNIT_CODES = {u: i for i, u in enumerate(UNITS)}


class TraceError(ValueError):
    """Raised for malformed trace data (bad CSV rows, broken invariants)."""


@dataclass(frozen=True)
class Sample:
    """One measurement: time offset in whole seconds plus a finite value."""

    t: int
    value: float

    def __post_init__(self) -> None:
        if self.t < 0:
            raise TraceError(f"negative time offset {self.t}")
        if not math.isfinite(self.value):
            raise TraceError(f"non-finite value at t={self.t}")


@dataclass(frozen=True)
class Trace:
    """An immutable physiological time series with strictly increasing times."""

    kind: str
    unit: str
    samples: tuple[Sample, ...]

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise TraceError(f"unknown sensor kind {self.kind!r}")
        if self.unit not in UNITS:
            raise TraceError(f"unknown unit {self.unit!r}")
        for prev, cur in zip(self.samples, self.samples[1:]):
            if cur.t <= prev.t:
                raise TraceError(
                    f"non-increasing timestamps: t={cur.t} after t={prev.t}"
                )

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples], dtype=np.int64)

    @property
    def values(self) -> np.ndarray:
        return np.array([s.value for s in self.samples], dtype=np.float64)


@dataclass(frozen=True)
class PersonRecord:
    """One row of the population dataset used by the statistical queries."""

    id: str
    gender: str
    body_temperature: float
    heart_rate: float
    temperature_unit: str = "celsius"

    def __post_init__(self) -> None:
        if self.heart_rate <= 0:
            raise TraceError(f"heart_rate must be positive, got {self.heart_rate}")
        lo, hi = (30.0, 45.0) if self.temperature_unit == "celsius" else (90.0, 110.0)
        if not lo <= self.body_temperature <= hi:
            raise TraceError(
                f"body_temperature {self.body_temperature} outside [{lo}, {hi}] "
                f"{self.temperature_unit}"
            )


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters for the deterministic synthetic trace generator."""

    kind: str = "heart-rate"
    n: int = 1420
    period: int = 60
    seed: int = 0
    baseline: float = 70.0
    drift_amplitude: float = 0.0
    noise_scale: float = 0.0

    def __post_init__(self) -> None:
        if self.n < 0:
            raise TraceError("n must be >= 0")
        if self.period < 1:
            raise TraceError("period must be >= 1")
        if self.noise_scale < 0:
            raise TraceError("noise_scale must be >= 0")


def _unit_for_kind(kind: str) -> str:
    if kind == "heart-rate":
        return "bpm"
    if kind == "body-temperature":
        return "celsius"
    return "dimensionless"


def load_csv(path: str | Path, kind: str, unit: str) -> Trace:
    """Load a `t,value` CSV (single header line) into a validated Trace."""
    samples: list[Sample] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise TraceError(f"{path}: empty file, expected a header line")
        last_t: int | None = None
        for rownum, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                t = int(row[0])
                value = float(row[1])
            except (ValueError, IndexError) as exc:
                raise TraceError(f"{path}: parse failure at row {rownum}: {exc}") from exc
            if not math.isfinite(value):
                raise TraceError(f"{path}: non-finite value at row {rownum}")
            if last_t is not None and t <= last_t:
                raise TraceError(f"{path}: non-increasing timestamps at row {rownum}")
            last_t = t
            samples.append(Sample(t, value))
    return Trace(kind=kind, unit=unit, samples=tuple(samples))


def save_csv(trace: Trace, path: str | Path) -> None:
    """Write a trace as `t,value` rows; values keep 6 fractional digits."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "value"])
        for s in trace.samples:
            writer.writerow([s.t, f"{s.value:.6f}"])


def generate_trace(spec: SyntheticSpec) -> Trace:
    """Deterministic synthetic trace: baseline + diurnal sine + AR(1) noise.

    The AR(1) coefficient is fixed at 0.9 so consecutive samples are
    correlated, which keeps the variance-rate filter's savings realistic.
    """
    rng = np.random.default_rng(spec.seed)
    samples = []
    ar = 0.0
    for i in range(spec.n):
        t = i * spec.period
        drift = spec.drift_amplitude * math.sin(2.0 * math.pi * t / 86400.0)
        if spec.noise_scale > 0:
            ar = 0.9 * ar + rng.normal(0.0, spec.noise_scale)
        value = spec.baseline + drift + ar
        samples.append(Sample(t, value))
    return Trace(kind=spec.kind, unit=_unit_for_kind(spec.kind), samples=tuple(samples))


HR_MEAN = 73.76  # population heart-rate model, bpm
HR_STD = 7.0
BT_MEAN = 36.8  # celsius
BT_STD = 0.4


def generate_population(n: int, seed: int) -> tuple[PersonRecord, ...]:
    """Deterministic population of n people with plausible HR and BT values."""
    if n < 0:
        raise TraceError("n must be >= 0")
    rng = np.random.default_rng(seed)
    records = []
    for i in range(n):
        hr = float(np.clip(rng.normal(HR_MEAN, HR_STD), 40.0, 140.0))
        bt = float(np.clip(rng.normal(BT_MEAN, BT_STD), 30.0, 45.0))
        gender = "female" if rng.random() < 0.5 else "male"
        records.append(
            PersonRecord(id=f"p{i:04d}", gender=gender, body_temperature=bt, heart_rate=hr)
        )
    return tuple(records)


def load_population_csv(path: str | Path) -> tuple[PersonRecord, ...]:
    """Load `id,gender,body_temperature,heart_rate` rows."""
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for rownum, row in enumerate(reader, start=2):
            try:
                records.append(
                    PersonRecord(
                        id=row["id"],
                        gender=row["gender"],
                        body_temperature=float(row["body_temperature"]),
                        heart_rate=float(row["heart_rate"]),
                    )
                )
            except (KeyError, ValueError) as exc:
                raise TraceError(f"{path}: parse failure at row {rownum}: {exc}") from exc
    return tuple(records)


def save_population_csv(records: Iterable[PersonRecord], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "gender", "body_temperature", "heart_rate"])
        for r in records:
            writer.writerow([r.id, r.gender, f"{r.body_temperature:.6f}", f"{r.heart_rate:.6f}"])
