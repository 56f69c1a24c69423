"""Measurement probes, single invocations, and the campaign loop."""

import math
import time

import pytest

from compx import (
    CampaignConfig,
    CampaignError,
    ComplexityFamily,
    Dataset,
    InsufficientDataError,
    MemoryProbe,
    ProbeMode,
    TargetSpec,
    constant_alert,
    fit_all,
    measure_once,
    run_campaign,
)
from compx.fitting import MeasurementSeries, Resource, fit_family, significance_test
from compx.paragons import example_noisy_constant, synthetic_target


def vector_dataset(n):
    return Dataset.from_vector([float(i) for i in range(n)])


def in_process(func, **kw):
    return TargetSpec.in_process(func, **kw)


# ---------------------------------------------------------------------------
# measure_once
# ---------------------------------------------------------------------------

def test_sleepy_target_elapsed_within_band():
    # sleep ~ N(0.1, 0.02) clipped; 5 sigma puts elapsed in [0.02, 0.25]
    target = example_noisy_constant(seed=42)
    sample = vector_dataset(8)
    for _ in range(3):
        m = measure_once(target, sample, MemoryProbe(ProbeMode.DISABLED))
        assert 0.02 <= m.elapsed <= 0.25


def test_alloc_probe_matches_analytic_allocation():
    # target allocates exactly 8 * n * ln(n) * u bytes (u fixed at 1050)
    n = 1000
    expected = int(8 * n * math.log(n) * 1050)

    def alloc(sample):
        return bytearray(int(8 * len(sample) * math.log(len(sample)) * 1050))

    m = measure_once(in_process(alloc), vector_dataset(n), MemoryProbe(ProbeMode.ALLOC_TRACKING))
    assert abs(m.mem_delta - expected) <= 0.10 * expected
    assert m.mem_peak >= m.mem_delta


def test_noop_target_is_fast_and_allocation_free():
    m = measure_once(in_process(lambda s: None), vector_dataset(10),
                     MemoryProbe(ProbeMode.ALLOC_TRACKING))
    assert m.elapsed < 1e-3
    assert m.mem_delta < 4096


def test_failing_target_raises_campaign_error_with_size():
    def boom(sample):
        raise RuntimeError("model is empty!")

    with pytest.raises(CampaignError, match="size 10") as info:
        measure_once(in_process(boom), vector_dataset(10), MemoryProbe(ProbeMode.DISABLED))
    assert info.value.size == 10
    assert "model is empty!" in str(info.value)


def test_prepare_runs_outside_the_timed_region():
    def slow_prepare(sample):
        time.sleep(0.05)
        return sample

    m = measure_once(in_process(lambda s: None, prepare=slow_prepare),
                     vector_dataset(5), MemoryProbe(ProbeMode.DISABLED))
    assert m.elapsed < 0.01


def test_rss_probe_reports_nonnegative_delta():
    m = measure_once(in_process(lambda s: bytearray(2_000_000)), vector_dataset(4),
                     MemoryProbe(ProbeMode.RSS_DELTA))
    assert m.mem_delta >= 0
    assert m.mem_peak == m.mem_delta


# ---------------------------------------------------------------------------
# external targets
# ---------------------------------------------------------------------------

def test_external_target_runs_and_reports_child_memory():
    target = TargetSpec.external("wc -c {input}")
    m = measure_once(target, vector_dataset(100), MemoryProbe(ProbeMode.RSS_DELTA))
    assert m.elapsed > 0
    assert m.mem_peak > 0  # child's peak RSS


def test_external_nonzero_exit_is_campaign_error():
    target = TargetSpec.external("false {input}")
    with pytest.raises(CampaignError, match="size 7"):
        measure_once(target, vector_dataset(7), MemoryProbe(ProbeMode.DISABLED))


def test_external_missing_binary_is_campaign_error():
    target = TargetSpec.external("no-such-binary-xyz {input}")
    with pytest.raises(CampaignError):
        measure_once(target, vector_dataset(3), MemoryProbe(ProbeMode.DISABLED))


@pytest.mark.parametrize("template", ["sort", "cat {input} {input}"])
def test_external_placeholder_count_validated(template):
    from compx import ConfigurationError

    with pytest.raises(ConfigurationError):
        TargetSpec.external(template)


# ---------------------------------------------------------------------------
# run_campaign
# ---------------------------------------------------------------------------

def fast_target():
    return in_process(lambda s: None, name="noop")


def test_campaign_replicated_sizes_small_doubling():
    d = vector_dataset(32)
    config = CampaignConfig(start_size=2, replicates=2, max_time_per_step=1.0,
                            probe=ProbeMode.DISABLED)
    out = run_campaign(d, fast_target(), config)
    assert out.sizes_used == [2, 2, 4, 4, 8, 8, 16, 16, 32, 32]
    assert out.memory_series is None
    assert len(out.time_series) == 10


def test_campaign_stops_after_step_exceeding_budget():
    costs = {2: 0.01, 4: 10.0}

    def virtual(sample):
        return costs.get(len(sample), 50.0)

    d = vector_dataset(64)
    config = CampaignConfig(start_size=2, replicates=2, max_time_per_step=1.0,
                            simulate_time=True, probe=ProbeMode.DISABLED)
    with pytest.raises(InsufficientDataError):
        # only two sizes complete, not enough to fit
        run_campaign(d, in_process(lambda s: None, simulate=virtual), config)


def test_campaign_stopping_rule_keeps_completed_prefix():
    def virtual(sample):
        return 0.001 if len(sample) <= 8 else 5.0

    d = vector_dataset(64)
    config = CampaignConfig(start_size=2, replicates=3, max_time_per_step=1.0,
                            simulate_time=True, probe=ProbeMode.DISABLED)
    out = run_campaign(d, in_process(lambda s: None, simulate=virtual), config)
    # sizes 2,4,8 are cheap; 16 completes but blows the budget; 32, 64 never run
    assert sorted(set(out.sizes_used)) == [2, 4, 8, 16]
    assert len(out.time_series) == 4 * 3
    assert out.sizes_used == out.schedule.expand()[: len(out.sizes_used)]


def test_campaign_timeseries_shape_start_48():
    d = vector_dataset(8602)
    config = CampaignConfig(start_size=48, replicates=4, max_time_per_step=30.0,
                            simulate_time=True, probe=ProbeMode.DISABLED)
    out = run_campaign(d, in_process(lambda s: None, simulate=lambda s: 1e-4), config)
    distinct = sorted(set(out.sizes_used))
    assert distinct == [48, 96, 192, 384, 768, 1536, 3072, 6144, 8602]
    assert out.sizes_used.count(8602) == 4
    assert len(out.time_series) == 9 * 4


def test_campaign_warmup_adds_one_untimed_invocation():
    calls = []

    def spy(sample):
        calls.append(len(sample))

    d = vector_dataset(16)
    config = CampaignConfig(start_size=2, replicates=2, max_time_per_step=5.0,
                            probe=ProbeMode.DISABLED)
    out = run_campaign(d, in_process(spy), config)
    assert len(calls) == len(out.time_series) + 1
    assert calls[0] == 2  # warmup at the smallest size


def test_campaign_memory_series_present_unless_probe_off():
    d = vector_dataset(32)
    cheap = in_process(lambda s: bytearray(len(s) * 100))
    with_probe = run_campaign(d, cheap, CampaignConfig(start_size=2, replicates=1,
                                                       probe=ProbeMode.ALLOC_TRACKING))
    assert with_probe.memory_series is not None
    assert len(with_probe.memory_series) == len(with_probe.time_series)
    without = run_campaign(d, cheap, CampaignConfig(start_size=2, replicates=1,
                                                    probe=ProbeMode.DISABLED))
    assert without.memory_series is None


def test_campaign_random_sampling_is_seed_deterministic():
    seen = []

    def record(sample):
        seen.append(tuple(sample.numeric_vector()))

    d = vector_dataset(64)
    config = CampaignConfig(start_size=4, replicates=2, random_sampling=True,
                            seed=77, probe=ProbeMode.DISABLED)
    run_campaign(d, in_process(record), config)
    first = list(seen)
    seen.clear()
    run_campaign(d, in_process(record), config)
    assert seen == first
    # per-replicate draws differ from each other (resampling happened)
    assert first[1] != first[2] or first[3] != first[4]


def test_campaign_sampling_footprint_is_flat():
    # With a no-op target, elapsed must not grow with sample size; the
    # linear fit's slope should be statistically indistinguishable from 0.
    d = vector_dataset(4096)
    config = CampaignConfig(start_size=4, replicates=4, random_sampling=True,
                            seed=5, probe=ProbeMode.DISABLED)
    for attempt in range(2):
        out = run_campaign(d, fast_target(), config)
        model = fit_family(ComplexityFamily.LINEAR, out.time_series)
        p, significant = significance_test(model, out.time_series, alpha=0.005)
        if not significant:
            return
    pytest.fail(f"no-op target showed a size trend twice in a row (p={p})")


def test_campaign_empty_dataset_rejected():
    from compx import ConfigurationError

    with pytest.raises(ConfigurationError):
        run_campaign(Dataset({"v": []}, {"v": "numeric"}), fast_target(), CampaignConfig())


# ---------------------------------------------------------------------------
# constant_alert
# ---------------------------------------------------------------------------

def test_alert_fires_for_constant_best():
    rows = [(s, 5.0) for s in (2, 4, 8, 16)]
    result = fit_all(MeasurementSeries.from_rows(Resource.TIME, rows))
    assert result.best is ComplexityFamily.CONSTANT
    message = constant_alert(result, CampaignConfig())
    assert message is not None and "max-time" in message


def test_alert_silent_for_significant_winner():
    rows = [(s, float(s) ** 2) for s in (2, 4, 8, 16, 32, 64)]
    result = fit_all(MeasurementSeries.from_rows(Resource.TIME, rows))
    assert result.best is ComplexityFamily.QUADRATIC and result.significant
    assert constant_alert(result, CampaignConfig()) is None


def test_alert_fires_for_non_significant_winner():
    import numpy as np

    rng = np.random.default_rng(9)
    rows = [(s, abs(3.0 + 0.001 * s + rng.normal(0, 2.0))) for s in (3, 6, 12, 24, 48)]
    result = fit_all(MeasurementSeries.from_rows(Resource.TIME, rows))
    assert result.best is ComplexityFamily.LINEAR
    assert not result.significant
    message = constant_alert(result, CampaignConfig())
    assert message is not None and "not significant" in message


def test_simulate_mode_records_virtual_cost_without_sleeping():
    target = synthetic_target(
        ComplexityFamily.LINEAR,
        ComplexityFamily.CONSTANT,
        time_base=10.0,  # would sleep 10s per call if real
        seed=0,
        name="virtual",
    )
    d = vector_dataset(32)
    config = CampaignConfig(start_size=2, replicates=1, max_time_per_step=1e9,
                            simulate_time=True, probe=ProbeMode.DISABLED)
    t0 = time.perf_counter()
    out = run_campaign(d, target, config)
    wall = time.perf_counter() - t0
    assert wall < 2.0
    assert all(v >= 10.0 for v in out.time_series.values)
