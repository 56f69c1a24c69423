"""Schedules, samplers, and dataset ingestion."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compx import (
    ConfigurationError,
    Dataset,
    build_schedule,
    default_start_size,
    ingest_dataset,
    rhead,
    sample_head,
    sample_random,
    sample_stratified,
)


def make_dataset(n, categories=None, seed=0):
    rng = np.random.default_rng(seed)
    cols = {"x": rng.random(n).tolist()}
    kinds = {"x": "numeric"}
    if categories:
        cols["group"] = [categories[i % len(categories)] for i in range(n)]
        kinds["group"] = "categorical"
    return Dataset(cols, kinds)


# ---------------------------------------------------------------------------
# default_start_size
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("n,expected", [(32, 5), (53940, 15), (2, 1), (1023, 9), (1024, 10)])
def test_default_start_size(n, expected):
    assert default_start_size(n) == expected


def test_default_start_size_tiny_dataset_warns():
    with pytest.warns(UserWarning):
        assert default_start_size(1) == 1


# ---------------------------------------------------------------------------
# build_schedule
# ---------------------------------------------------------------------------

def test_schedule_doubling_to_53940():
    sched = build_schedule(15, 2, 53940)
    assert list(sched.sizes) == [15, 30, 60, 120, 240, 480, 960, 1920, 3840, 7680, 15360, 30720, 53940]


def test_schedule_power_three():
    sched = build_schedule(3, 3, 768)
    assert list(sched.sizes) == [3, 9, 27, 81, 243, 729, 768]


def test_schedule_small_doubling_with_replicates():
    sched = build_schedule(2, 2, 32, replicates=2)
    assert list(sched.sizes) == [2, 4, 8, 16, 32]
    assert sched.expand() == [2, 2, 4, 4, 8, 8, 16, 16, 32, 32]


def test_schedule_start_above_full_size_rejected():
    with pytest.raises(ConfigurationError):
        build_schedule(100, 2, 50)


def test_schedule_power_factor_must_exceed_one():
    with pytest.raises(ConfigurationError):
        build_schedule(2, 1.0, 100)


def test_schedule_fractional_factor_never_stalls():
    sched = build_schedule(1, 1.3, 40)
    sizes = list(sched.sizes)
    assert sizes[0] == 1 and sizes[-1] == 40
    assert all(a < b for a, b in zip(sizes, sizes[1:]))


@given(
    start=st.integers(min_value=1, max_value=200),
    pf=st.floats(min_value=1.01, max_value=8, allow_nan=False),
    n_full=st.integers(min_value=1, max_value=100_000),
)
@settings(max_examples=150, deadline=None)
def test_schedule_properties(start, pf, n_full):
    if start > n_full:
        start = n_full
    sched = build_schedule(start, pf, n_full)
    sizes = list(sched.sizes)
    assert sizes[-1] == n_full
    assert all(a < b for a, b in zip(sizes, sizes[1:]))
    assert len(sizes) == len(set(sizes))


def test_schedule_length_for_doubling():
    # For power factor 2 the length is ceil(log2(n/s)) + 1, give or take
    # one for the final cap step.
    for start, n_full in [(2, 32), (15, 53940), (48, 8602), (5, 5000)]:
        expected = math.ceil(math.log2(n_full / start)) + 1
        got = len(build_schedule(start, 2, n_full).sizes)
        assert abs(got - expected) <= 1


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------

def test_head_full_dataset_is_identity():
    d = make_dataset(5)
    assert sample_head(d, 5).columns == d.columns


def test_head_takes_prefix_in_order():
    d = Dataset({"v": ["a", "b", "c", "d"]}, {"v": "text"})
    assert sample_head(d, 2).columns["v"] == ["a", "b"]


def test_head_rejects_zero():
    with pytest.raises(ConfigurationError):
        sample_head(make_dataset(4), 0)


def test_head_clamps_oversized_request():
    assert sample_head(make_dataset(4), 99).n_full == 4


def test_random_full_draw_is_permutation():
    d = Dataset({"v": list(range(20))}, {"v": "numeric"})
    out = sample_random(d, 20, seed=3)
    assert sorted(out.columns["v"]) == list(range(20))


def test_random_is_deterministic_under_seed():
    d = make_dataset(50)
    a = sample_random(d, 10, seed=42)
    b = sample_random(d, 10, seed=42)
    assert a.columns == b.columns
    c = sample_random(d, 10, seed=43)
    assert a.columns != c.columns


def test_random_single_draw_frequencies_match_binomial():
    # 10_000 draws of one row from four: each row expected 2500 times with
    # sigma = sqrt(10000 * 0.25 * 0.75) ~ 43.3; require within 4 sigma.
    d = Dataset({"v": [0, 1, 2, 3]}, {"v": "numeric"})
    counts = [0, 0, 0, 0]
    rng = np.random.default_rng(99)
    for _ in range(10_000):
        row = sample_random(d, 1, seed=rng)
        counts[int(row.columns["v"][0])] += 1
    sigma = math.sqrt(10_000 * 0.25 * 0.75)
    for c in counts:
        assert abs(c - 2500) <= 4 * sigma, counts


def test_stratified_keeps_at_least_one_per_category():
    d = make_dataset(12, categories=["A"] * 1)  # all A
    d.columns["group"] = ["A"] * 10 + ["B"] * 2
    out = sample_stratified(d, 0.1, "group", seed=1)
    groups = out.columns["group"]
    assert groups.count("A") == 1
    assert groups.count("B") == 1


def test_stratified_full_fraction_returns_everything():
    d = make_dataset(9, categories=["x", "y", "z"])
    out = sample_stratified(d, 1.0, "group", seed=0)
    assert out.n_full == 9
    assert sorted(out.columns["x"]) == sorted(d.columns["x"])


def test_stratified_binary_classes_both_present_at_tiny_fraction():
    d = make_dataset(768, categories=["pos"])
    d.columns["group"] = ["pos"] * 500 + ["neg"] * 268
    out = sample_stratified(d, 3 / 768, "group", seed=7)
    assert set(out.columns["group"]) == {"pos", "neg"}


def test_stratified_rejects_missing_or_numeric_column():
    d = make_dataset(10, categories=["a", "b"])
    with pytest.raises(ConfigurationError):
        sample_stratified(d, 0.5, "nope")
    with pytest.raises(ConfigurationError):
        sample_stratified(d, 0.5, "x")  # numeric column


def test_stratified_rounding_is_half_up():
    # 5 rows at fraction 0.5 -> round(2.5) = 3 under half-up
    d = Dataset({"g": ["a"] * 5, "x": [1.0] * 5}, {"g": "categorical", "x": "numeric"})
    out = sample_stratified(d, 0.5, "g", seed=0)
    assert out.n_full == 3


@given(
    counts=st.lists(st.integers(min_value=1, max_value=40), min_size=2, max_size=10),
    fraction=st.floats(min_value=0.001, max_value=1.0),
)
@settings(max_examples=100, deadline=None)
def test_stratified_preserves_every_category(counts, fraction):
    labels = []
    for i, c in enumerate(counts):
        labels.extend([f"cat{i}"] * c)
    d = Dataset(
        {"g": labels, "x": [float(i) for i in range(len(labels))]},
        {"g": "categorical", "x": "numeric"},
    )
    out = sample_stratified(d, fraction, "g", seed=5)
    assert set(out.columns["g"]) == set(labels)


# ---------------------------------------------------------------------------
# rhead
# ---------------------------------------------------------------------------

def test_rhead_default_is_seven():
    assert len(rhead(list(range(100)))) == 7


def test_rhead_head_mode_equals_prefix():
    assert rhead([5, 4, 3, 2, 1], k=3) == [5, 4, 3]
    d = Dataset({"v": list(range(10))}, {"v": "numeric"})
    assert rhead(d, k=4).columns["v"] == [0, 1, 2, 3]


def test_rhead_random_reproducible_and_clamped():
    a = rhead(list(range(50)), k=5, is_random=True, seed=11)
    b = rhead(list(range(50)), k=5, is_random=True, seed=11)
    assert a == b
    assert len(rhead([1, 2, 3], k=10)) == 3


# ---------------------------------------------------------------------------
# ingestion
# ---------------------------------------------------------------------------

def test_ingest_csv_types_columns(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("age,diabetes\n31,pos\n44,neg\n27,pos\n")
    d = ingest_dataset(str(p), "csv")
    assert d.kinds == {"age": "numeric", "diabetes": "categorical"}
    assert d.columns["age"] == [31.0, 44.0, 27.0]
    # categorical column is usable as strata
    out = sample_stratified(d, 0.4, "diabetes", seed=0)
    assert set(out.columns["diabetes"]) == {"pos", "neg"}


def test_ingest_csv_header_only_is_an_error(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text("a,b\n")
    with pytest.raises(ConfigurationError):
        ingest_dataset(str(p), "csv")


def test_ingest_csv_ragged_row_names_line(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("a,b\n1,2\n3\n")
    with pytest.raises(ConfigurationError, match="line 3"):
        ingest_dataset(str(p), "csv")


def test_ingest_lines(tmp_path):
    p = tmp_path / "rows.txt"
    p.write_text("alpha\nbeta\ngamma\n")
    d = ingest_dataset(str(p), "lines")
    assert d.n_full == 3
    assert d.kinds == {"line": "text"}


def test_ingest_numeric_lines_become_numeric(tmp_path):
    p = tmp_path / "nums.txt"
    p.write_text("1.5\n2.5\n3.5\n")
    d = ingest_dataset(str(p), "lines")
    assert d.kinds == {"value": "numeric"}
    assert d.numeric_vector() == [1.5, 2.5, 3.5]


def test_ingest_bytes_fixed_records(tmp_path):
    p = tmp_path / "blob.bin"
    p.write_bytes(bytes(range(32)))
    d = ingest_dataset(str(p), "bytes", record_bytes=8)
    assert d.n_full == 4
    with pytest.raises(ConfigurationError):
        ingest_dataset(str(p), "bytes", record_bytes=5)


def test_dataset_write_roundtrip_csv(tmp_path):
    d = Dataset(
        {"a": [1.0, 2.0], "b": ["x", "y"]},
        {"a": "numeric", "b": "categorical"},
        fmt="csv",
    )
    p = tmp_path / "out.csv"
    d.write(str(p))
    back = ingest_dataset(str(p), "csv")
    assert back.columns == d.columns
