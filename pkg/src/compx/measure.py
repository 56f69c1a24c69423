"""The measurement campaign: timed target invocations over scheduled sizes.

Samples are drawn (and any per-sample preparation done) outside the timed
region, so sampling has no footprint on the results. Wall time comes from a
monotonic clock around exactly one target invocation; memory comes from the
selected probe bracketing the same region.

The time budget is checked after a size's replicates complete: once a step
exceeds it, no further sizes are attempted, but nothing already measured is
discarded. There is no such cap on memory.
"""

import gc
import os
import shlex
import shutil
import subprocess
import tempfile
import time
import tracemalloc
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Optional

import numpy as np
import psutil

from .errors import CampaignError, ConfigurationError, InsufficientDataError
from .families import ComplexityFamily
from .fitting import BenchmarkResult, MeasurementSeries, Resource
from .sampling import (
    Dataset,
    SizeSchedule,
    build_schedule,
    default_start_size,
    sample_head,
    sample_random,
    sample_stratified,
)


class ProbeMode(Enum):
    ALLOC_TRACKING = "alloc"
    RSS_DELTA = "rss"
    DISABLED = "off"


class TargetKind(Enum):
    BUILTIN = "builtin"
    IN_PROCESS = "in_process"
    EXTERNAL = "external"


@dataclass
class TargetSpec:
    """What to measure: an in-process callable or an external command.

    `func` consumes a sampled dataset (or whatever `prepare` turned it
    into); its return value is discarded after the memory probe has read
    the post-invocation state, so retained allocations are attributable.
    `prepare` runs untimed, for per-sample setup that must not pollute the
    measurement (building an index, extracting a vector).
    `simulate`, when present, lets the target report a virtual cost in
    seconds instead of being timed on the wall clock.
    `command` is a template with exactly one {input} placeholder that
    receives a file holding the sample in the dataset's native format.
    """

    kind: TargetKind
    name: str = ""
    func: Optional[Callable[[Any], Any]] = None
    prepare: Optional[Callable[[Dataset], Any]] = None
    simulate: Optional[Callable[[Any], float]] = None
    command: Optional[str] = None

    @classmethod
    def in_process(cls, func, name=None, prepare=None, simulate=None):
        return cls(
            kind=TargetKind.IN_PROCESS,
            name=name or getattr(func, "__name__", "target"),
            func=func,
            prepare=prepare,
            simulate=simulate,
        )

    @classmethod
    def external(cls, command: str):
        placeholders = command.count("{input}")
        if placeholders != 1:
            raise ConfigurationError(
                f"external command must contain exactly one {{input}} placeholder, got {placeholders}: {command!r}"
            )
        return cls(kind=TargetKind.EXTERNAL, name=command.split()[0], command=command)


@dataclass(frozen=True)
class Measurement:
    """One timed invocation: wall seconds plus the probe's byte readings."""

    size: int
    replicate: int
    elapsed: float
    mem_delta: int = 0
    mem_peak: int = 0


@dataclass
class CampaignConfig:
    """All run parameters; defaults mirror the CLI flag defaults."""

    start_size: Optional[int] = None
    power_factor: float = 2.0
    replicates: int = 4
    max_time_per_step: float = 30.0
    random_sampling: bool = False
    strata: Optional[str] = None
    alpha: float = 0.005
    plot: bool = True
    seed: Optional[int] = None
    probe: ProbeMode = ProbeMode.ALLOC_TRACKING
    simulate_time: bool = False
    warmup: bool = True
    keep_samples: bool = False

    def validate(self):
        if self.power_factor <= 1:
            raise ConfigurationError(f"power factor must be > 1, got {self.power_factor}")
        if self.replicates < 1:
            raise ConfigurationError(f"replicates must be >= 1, got {self.replicates}")
        if self.max_time_per_step <= 0:
            raise ConfigurationError(f"max time per step must be > 0, got {self.max_time_per_step}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigurationError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.start_size is not None and self.start_size < 1:
            raise ConfigurationError(f"start size must be >= 1, got {self.start_size}")


class MemoryProbe:
    """Brackets one invocation and reports (net, peak) bytes for the region.

    ALLOC_TRACKING instruments the Python allocator (tracemalloc): net is
    the retained growth, peak the high-water mark, both relative to the
    reading taken just before the invocation. RSS_DELTA falls back to the
    process resident set, with a double garbage collection before each
    reading so reclaimable garbage does not masquerade as usage.
    """

    def __init__(self, mode=ProbeMode.ALLOC_TRACKING):
        self.mode = ProbeMode(mode)
        self._before = 0
        self._started_tracing = False

    def begin(self):
        if self.mode is ProbeMode.ALLOC_TRACKING:
            if not tracemalloc.is_tracing():
                tracemalloc.start()
                self._started_tracing = True
            self._before = tracemalloc.get_traced_memory()[0]
            tracemalloc.reset_peak()
        elif self.mode is ProbeMode.RSS_DELTA:
            gc.collect()
            gc.collect()
            self._before = psutil.Process().memory_info().rss

    def end(self):
        if self.mode is ProbeMode.ALLOC_TRACKING:
            current, peak = tracemalloc.get_traced_memory()
            if self._started_tracing:
                tracemalloc.stop()
                self._started_tracing = False
            delta = max(0, current - self._before)
            return delta, max(delta, peak - self._before)
        if self.mode is ProbeMode.RSS_DELTA:
            gc.collect()
            gc.collect()
            delta = max(0, psutil.Process().memory_info().rss - self._before)
            return delta, delta
        return 0, 0


def _run_external(target, sample, scratch_dir, size):
    suffix = {"csv": ".csv", "lines": ".txt", "bytes": ".bin"}.get(sample.fmt, ".dat")
    fd, path = tempfile.mkstemp(prefix=f"sample-{size}-", suffix=suffix, dir=scratch_dir)
    os.close(fd)
    try:
        sample.write(path)
        argv = shlex.split(target.command.replace("{input}", path))
        if not argv:
            raise ConfigurationError(f"external command is empty: {target.command!r}")
        t0 = time.perf_counter()
        try:
            proc = subprocess.Popen(argv)
        except OSError as exc:
            raise CampaignError(f"cannot launch {argv[0]!r} at size {size}: {exc}", size=size) from exc
        _, status, rusage = os.wait4(proc.pid, 0)
        elapsed = time.perf_counter() - t0
        proc.returncode = os.waitstatus_to_exitcode(status)
        if proc.returncode != 0:
            raise CampaignError(
                f"external target exited with status {proc.returncode} at size {size}",
                size=size,
            )
        # ru_maxrss is KiB on Linux; it is the child's peak resident set.
        peak = int(rusage.ru_maxrss) * 1024
        return elapsed, peak, peak
    finally:
        if scratch_dir is None and os.path.exists(path):
            os.unlink(path)


def measure_once(target: TargetSpec, sample: Dataset, probe: MemoryProbe,
                 size=None, replicate=1, simulate=False, _scratch=None) -> Measurement:
    """Invoke the target once on an already-materialized sample.

    The sample (and any `prepare` step) is handled before the clock starts.
    The target's return value stays referenced until the probe has taken
    its post reading, then is dropped.
    """
    if size is None:
        size = sample.n_full

    if target.kind is TargetKind.EXTERNAL:
        elapsed, delta, peak = _run_external(target, sample, _scratch, size)
        if probe.mode is ProbeMode.DISABLED:
            delta = peak = 0
        return Measurement(size=size, replicate=replicate, elapsed=elapsed,
                           mem_delta=delta, mem_peak=peak)

    arg = target.prepare(sample) if target.prepare is not None else sample
    use_simulation = simulate and target.simulate is not None

    # Drain fresh garbage outside the region and keep the cyclic collector
    # from pausing inside it; a collection pause scales with the heap and
    # would contaminate the large sizes.
    restore_gc = False
    if not use_simulation and gc.isenabled():
        gc.collect(0)
        gc.disable()
        restore_gc = True
    try:
        probe.begin()
        try:
            if use_simulation:
                result = target.simulate(arg)
                elapsed = float(result)
            else:
                t0 = time.perf_counter()
                result = target.func(arg)
                elapsed = time.perf_counter() - t0
        except Exception as exc:
            probe.end()
            raise CampaignError(
                f"target {target.name!r} failed at size {size}: {exc}", size=size
            ) from exc
        mem_delta, mem_peak = probe.end()
        del result
    finally:
        if restore_gc:
            gc.enable()
    return Measurement(size=size, replicate=replicate, elapsed=elapsed,
                       mem_delta=mem_delta, mem_peak=mem_peak)


@dataclass
class CampaignResult:
    """Everything a campaign measured, plus the schedule bookkeeping."""

    time_series: MeasurementSeries
    memory_series: Optional[MeasurementSeries]
    sizes_used: list
    measurements: list
    schedule: SizeSchedule
    n_full: int
    interrupted: bool = False


def _draw_sample(d, size, config, seed):
    if config.strata is not None:
        return sample_stratified(d, size / d.n_full, config.strata, seed)
    if config.random_sampling:
        return sample_random(d, size, seed)
    return sample_head(d, size)


def resolve_probe_mode(config: CampaignConfig, target: TargetSpec) -> ProbeMode:
    """Allocation tracking cannot see into a child process, so external
    targets degrade to the OS resident-set reading."""
    if config.probe is ProbeMode.ALLOC_TRACKING and target.kind is TargetKind.EXTERNAL:
        return ProbeMode.RSS_DELTA
    return config.probe


def run_campaign(d: Dataset, target: TargetSpec, config: CampaignConfig = None) -> CampaignResult:
    """Run the full measurement loop over the size schedule.

    At each size, `replicates` invocations run on freshly drawn samples
    (head sampling redraws the same rows; randomized modes resample per
    replicate). After a size completes, the step total is checked against
    the time budget. An interrupt finalizes a partial result from the
    completed sizes. Fewer than 3 completed sizes cannot support a fit and
    raises InsufficientDataError.
    """
    config = config or CampaignConfig()
    config.validate()
    if d.n_full < 1:
        raise ConfigurationError("dataset is empty")

    start = config.start_size if config.start_size is not None else default_start_size(d.n_full)
    schedule = build_schedule(start, config.power_factor, d.n_full, config.replicates)
    probe_mode = resolve_probe_mode(config, target)
    probe = MemoryProbe(probe_mode)

    seed_root = np.random.SeedSequence(config.seed)
    step_seeds = seed_root.spawn(len(schedule.sizes) * config.replicates + 1)

    scratch = None
    started_tracing = False
    if target.kind is TargetKind.EXTERNAL:
        scratch = tempfile.mkdtemp(prefix="compx-samples-")
    elif probe_mode is ProbeMode.ALLOC_TRACKING and not tracemalloc.is_tracing():
        tracemalloc.start()
        started_tracing = True

    measurements = []
    completed_sizes = []
    interrupted = False
    try:
        if config.warmup:
            warm = _draw_sample(d, schedule.sizes[0], config, step_seeds[-1])
            measure_once(target, warm, MemoryProbe(ProbeMode.DISABLED),
                         size=schedule.sizes[0], simulate=config.simulate_time, _scratch=scratch)

        try:
            for si, size in enumerate(schedule.sizes):
                step = []
                for rep in range(1, config.replicates + 1):
                    seed = step_seeds[si * config.replicates + (rep - 1)]
                    sample = _draw_sample(d, size, config, seed)
                    m = measure_once(target, sample, probe, size=size, replicate=rep,
                                     simulate=config.simulate_time, _scratch=scratch)
                    step.append(m)
                measurements.extend(step)
                completed_sizes.append(size)
                if sum(m.elapsed for m in step) > config.max_time_per_step:
                    break
        except KeyboardInterrupt:
            # Drop any partially measured size and report what completed.
            measurements = [m for m in measurements if m.size in completed_sizes]
            interrupted = True
    finally:
        if started_tracing:
            tracemalloc.stop()
        if scratch is not None and not config.keep_samples:
            shutil.rmtree(scratch, ignore_errors=True)

    if len(completed_sizes) < 3:
        raise InsufficientDataError(
            f"only {len(completed_sizes)} size(s) completed within the "
            f"{config.max_time_per_step}s step budget; raise --max-time or lower --start-size"
        )

    time_series = MeasurementSeries(
        Resource.TIME,
        tuple(m.size for m in measurements),
        tuple(m.elapsed for m in measurements),
    )
    memory_series = None
    if probe_mode is not ProbeMode.DISABLED:
        memory_series = MeasurementSeries(
            Resource.MEMORY,
            tuple(m.size for m in measurements),
            tuple(m.mem_peak for m in measurements),
        )
    return CampaignResult(
        time_series=time_series,
        memory_series=memory_series,
        sizes_used=[m.size for m in measurements],
        measurements=measurements,
        schedule=schedule,
        n_full=d.n_full,
        interrupted=interrupted,
    )


def constant_alert(result: BenchmarkResult, config: CampaignConfig) -> Optional[str]:
    """Advisory when the outcome may just mean the run was too short.

    A CONSTANT winner, or a winner that fails its significance test, often
    indicates the step budget never let the cost trend emerge.
    """
    hint = (
        "consider raising --max-time, lowering --start-size, or raising --replicates"
    )
    if result.best is ComplexityFamily.CONSTANT:
        return f"best model is CONSTANT, which may mean the time budget is too low to show any tendency; {hint}"
    if not result.significant:
        return (
            f"best model {result.best.name} is not significant at alpha={config.alpha:g}; {hint}"
        )
    return None
