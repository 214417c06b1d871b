import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ioht_pipeline.trace import (
    PersonRecord,
    Sample,
    SyntheticSpec,
    Trace,
    TraceError,
    generate_population,
    generate_trace,
    load_csv,
    load_population_csv,
    save_csv,
    save_population_csv,
)


def test_load_csv_basic(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("t,value\n0,60.0\n60,61.0\n120,60.5\n")
    trace = load_csv(p, "heart-rate", "bpm")
    assert len(trace) == 3
    assert trace.samples[1] == Sample(60, 61.0)
    assert trace.unit == "bpm"


def test_load_csv_non_increasing(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("t,value\n0,60.0\n0,61.0\n")
    with pytest.raises(TraceError, match="non-increasing timestamps at row 3"):
        load_csv(p, "heart-rate", "bpm")


def test_load_csv_header_only(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("t,value\n")
    assert len(load_csv(p, "heart-rate", "bpm")) == 0


def test_load_csv_bad_value(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("t,value\n0,abc\n")
    with pytest.raises(TraceError, match="row 2"):
        load_csv(p, "heart-rate", "bpm")


def test_sample_rejects_nan():
    with pytest.raises(TraceError):
        Sample(0, float("nan"))


def test_trace_rejects_unsorted():
    with pytest.raises(TraceError):
        Trace("heart-rate", "bpm", (Sample(10, 1.0), Sample(5, 2.0)))


def test_generate_trace_zero_noise_constant():
    spec = SyntheticSpec(kind="heart-rate", n=3, period=60, seed=1,
                         baseline=70.0, drift_amplitude=0.0, noise_scale=0.0)
    trace = generate_trace(spec)
    assert [s.value for s in trace.samples] == [70.0, 70.0, 70.0]
    assert [s.t for s in trace.samples] == [0, 60, 120]


def test_generate_trace_deterministic():
    spec = SyntheticSpec(n=500, seed=42, noise_scale=1.5, drift_amplitude=8.0)
    a = generate_trace(spec)
    b = generate_trace(spec)
    assert a == b


def test_generate_trace_empty():
    assert len(generate_trace(SyntheticSpec(n=0))) == 0


def test_generate_population_stats():
    pop = generate_population(130, seed=5)
    assert len(pop) == 130
    mean_hr = float(np.mean([r.heart_rate for r in pop]))
    assert abs(mean_hr - 73.76) < 2.0
    assert all(40.0 <= r.heart_rate <= 140.0 for r in pop)


def test_generate_population_deterministic_and_empty():
    assert generate_population(0, 1) == ()
    assert generate_population(20, 9) == generate_population(20, 9)


def test_person_record_range_check():
    with pytest.raises(TraceError):
        PersonRecord(id="x", gender="female", body_temperature=80.0, heart_rate=70.0)
    with pytest.raises(TraceError):
        PersonRecord(id="x", gender="male", body_temperature=36.8, heart_rate=0.0)


@settings(max_examples=30, deadline=None)
@given(
    values=st.lists(
        st.floats(min_value=-1e6, max_value=1e6).map(lambda v: round(v, 6)),
        min_size=0, max_size=40,
    )
)
def test_csv_round_trip(tmp_path_factory, values):
    trace = Trace("other", "dimensionless",
                  tuple(Sample(i * 10, v) for i, v in enumerate(values)))
    p = tmp_path_factory.mktemp("rt") / "trace.csv"
    save_csv(trace, p)
    assert load_csv(p, "other", "dimensionless") == trace


def test_population_csv_round_trip(tmp_path):
    pop = generate_population(10, seed=3)
    p = tmp_path / "pop.csv"
    save_population_csv(pop, p)
    loaded = load_population_csv(p)
    assert len(loaded) == 10
    for a, b in zip(pop, loaded):
        assert a.id == b.id and a.gender == b.gender
        assert math.isclose(a.heart_rate, b.heart_rate, abs_tol=1e-6)
        assert math.isclose(a.body_temperature, b.body_temperature, abs_tol=1e-6)
