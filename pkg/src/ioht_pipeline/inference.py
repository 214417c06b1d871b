"""Tier-1 data reduction: variance-rate sample selection, reconstruction of
the receiver-side series, and the savings/efficiency/accuracy metrics."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .trace import Trace

REASON_ANCHOR = "anchor"
REASON_VARIANCE = "variance"
REASON_BEACON = "beacon"
REASON_CODES = {REASON_ANCHOR: 0, REASON_VARIANCE: 1, REASON_BEACON: 2}

RECON_MODES = ("step-hold", "linear")


@dataclass(frozen=True)
class InferenceConfig:
    vr: float = 0.025
    beacon_period: Optional[int] = None
    recon_mode: str = "linear"

    def __post_init__(self) -> None:
        if self.vr < 0:
            raise ValueError("vr must be >= 0")
        if self.beacon_period is not None and self.beacon_period < 1:
            raise ValueError("beacon_period must be >= 1")
        if self.recon_mode not in RECON_MODES:
            raise ValueError(f"unknown recon_mode {self.recon_mode!r}")


@dataclass(frozen=True)
class TransmissionSet:
    """Indices chosen for transmission, each with the reason it was kept."""

    source_len: int
    selected: tuple[tuple[int, str], ...]

    def __post_init__(self) -> None:
        prev = -1
        for idx, reason in self.selected:
            if not 0 <= idx < self.source_len:
                raise ValueError(f"index {idx} outside [0, {self.source_len})")
            if idx <= prev:
                raise ValueError("selected indices must be strictly increasing")
            if reason not in REASON_CODES:
                raise ValueError(f"unknown reason {reason!r}")
            prev = idx

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(idx for idx, _ in self.selected)

    def __len__(self) -> int:
        return len(self.selected)


@dataclass(frozen=True)
class Reconstruction:
    values: tuple[float, ...]


@dataclass(frozen=True)
class InferenceMetrics:
    n: int
    t: int
    sr: float
    er: float
    ar: Optional[float]  # None when the original sum is zero
    s_upper: float
    s_lower: float
    s_diff: float


def select_samples(trace: Trace, config: InferenceConfig) -> TransmissionSet:
    """Apply the variance-rate transmission rule with anchors and beacons.

    An interior sample is kept when it differs from its previous or next
    neighbor by more than |value| * vr (strict inequality; ties dropped).
    First and last samples are always kept so reconstruction never
    extrapolates. Beacons are kept every beacon_period samples. Recorded
    reason precedence: variance > anchor > beacon.
    """
    n = len(trace)
    if n == 0:
        return TransmissionSet(source_len=0, selected=())
    v = trace.values
    reasons: dict[int, str] = {}
    thresh = np.abs(v) * config.vr
    for i in range(1, n - 1):
        if abs(v[i] - v[i + 1]) > thresh[i] or abs(v[i - 1] - v[i]) > thresh[i]:
            reasons[i] = REASON_VARIANCE
    reasons.setdefault(0, REASON_ANCHOR)
    reasons.setdefault(n - 1, REASON_ANCHOR)
    if config.beacon_period is not None:
        for i in range(0, n, config.beacon_period):
            reasons.setdefault(i, REASON_BEACON)
    selected = tuple((i, reasons[i]) for i in sorted(reasons))
    return TransmissionSet(source_len=n, selected=selected)


def reconstruct(trace: Trace, tx: TransmissionSet, mode: str = "linear") -> Reconstruction:
    """Rebuild the full-length series from the transmitted subset."""
    if tx.source_len != len(trace):
        raise ValueError("transmission set length does not match trace")
    if len(trace) == 0:
        return Reconstruction(values=())
    if len(tx) == 0:
        raise ValueError("no anchors: cannot reconstruct from an empty selection")
    if mode not in RECON_MODES:
        raise ValueError(f"unknown recon_mode {mode!r}")

    times = trace.times
    values = trace.values
    idx = np.array(tx.indices, dtype=np.int64)
    if mode == "linear":
        recon = np.interp(times, times[idx], values[idx])
    else:  # step-hold: value of the nearest transmitted sample at or before
        positions = np.searchsorted(idx, np.arange(len(trace)), side="right") - 1
        positions = np.clip(positions, 0, len(idx) - 1)
        recon = values[idx[positions]]
    recon[idx] = values[idx]  # exactness at transmitted points, both modes
    return Reconstruction(values=tuple(float(x) for x in recon))


def gap_areas(trace: Trace, recon: Reconstruction) -> tuple[float, float]:
    """Exact areas where the reconstruction under- and over-shoots.

    The difference d(t) = original - reconstructed is treated as piecewise
    linear between sample times; each segment is integrated exactly,
    splitting at the zero crossing when d changes sign. Returns
    (s_upper, s_lower) in value-units * seconds.
    """
    if len(recon.values) != len(trace):
        raise ValueError("length mismatch between trace and reconstruction")
    if len(trace) < 2:
        raise ValueError("need at least 2 samples to integrate")
    times = trace.times.astype(np.float64)
    d = trace.values - np.array(recon.values)
    s_upper = 0.0
    s_lower = 0.0
    for i in range(len(d) - 1):
        t0, t1 = times[i], times[i + 1]
        d0, d1 = d[i], d[i + 1]
        if d0 * d1 >= 0:
            area = 0.5 * (abs(d0) + abs(d1)) * (t1 - t0)
            if d0 > 0 or d1 > 0:
                s_upper += area
            else:
                s_lower += area
        else:
            tz = t0 + (t1 - t0) * d0 / (d0 - d1)
            first = 0.5 * abs(d0) * (tz - t0)
            second = 0.5 * abs(d1) * (t1 - tz)
            if d0 > 0:
                s_upper += first
                s_lower += second
            else:
                s_lower += first
                s_upper += second
    return float(s_upper), float(s_lower)


def compute_metrics(trace: Trace, tx: TransmissionSet, recon: Reconstruction) -> InferenceMetrics:
    """Savings ratio, efficiency ratio, accuracy ratio and gap areas."""
    n = len(trace)
    t = len(tx)
    if t == 0:
        raise ValueError("efficiency ratio undefined for zero transmitted samples")
    sr = 100.0 * (n - t) / n
    er = (n - t) / t
    orig_sum = float(np.sum(trace.values))
    ar = 100.0 * float(np.sum(recon.values)) / orig_sum if orig_sum != 0 else None
    s_upper, s_lower = gap_areas(trace, recon) if n >= 2 else (0.0, 0.0)
    return InferenceMetrics(
        n=n, t=t, sr=sr, er=er, ar=ar,
        s_upper=s_upper, s_lower=s_lower, s_diff=abs(s_upper - s_lower),
    )


def savings_ratio(n: int, t: int) -> float:
    """SR in percent for n sensed and t transmitted samples."""
    if n <= 0:
        raise ValueError("n must be positive")
    return 100.0 * (n - t) / n


def metrics_report(metrics: InferenceMetrics, config: InferenceConfig) -> dict:
    """Machine-readable report object (full precision)."""
    return {
        "n": metrics.n,
        "t": metrics.t,
        "sr": metrics.sr,
        "er": metrics.er,
        "ar": metrics.ar,
        "s_upper": metrics.s_upper,
        "s_lower": metrics.s_lower,
        "s_diff": metrics.s_diff,
        "vr": config.vr,
        "beacon_period": config.beacon_period,
        "recon_mode": config.recon_mode,
    }


def metrics_report_json(metrics: InferenceMetrics, config: InferenceConfig) -> str:
    return json.dumps(metrics_report(metrics, config), indent=2)
