"""Built-in target algorithms with known complexity, plus synthetic targets.

These serve three purposes: ready-made CLI targets (``builtin:<name>``),
ground truth for the accuracy experiments, and controllable noise sources
for exercising the campaign loop without a real workload.
"""

import array
import math
import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .families import ComplexityFamily, transform_scalar
from .measure import TargetKind, TargetSpec
from .sampling import Dataset


# ---------------------------------------------------------------------------
# Algorithms
# ---------------------------------------------------------------------------

def bubble_sort(values, early_exit=True):
    """Ascending bubble sort of a copy of `values`.

    Pass early_exit=False to force the full quadratic pass structure even
    on nearly sorted input (the worst-case benchmarking mode).
    """
    v = list(values)
    n = len(v)
    for end in range(n - 1, 0, -1):
        swapped = False
        for j in range(end):
            if v[j] > v[j + 1]:
                v[j], v[j + 1] = v[j + 1], v[j]
                swapped = True
        if early_exit and not swapped:
            break
    return v


def bubble_sort_stats(values, early_exit=True):
    """Instrumented bubble sort: (sorted copy, comparisons, swaps)."""
    v = list(values)
    n = len(v)
    comparisons = swaps = 0
    for end in range(n - 1, 0, -1):
        swapped = False
        for j in range(end):
            comparisons += 1
            if v[j] > v[j + 1]:
                v[j], v[j + 1] = v[j + 1], v[j]
                swaps += 1
                swapped = True
        if early_exit and not swapped:
            break
    return v, comparisons, swaps


def find_max(values):
    """Maximum via a single scan: exactly len(values) - 1 comparisons."""
    it = iter(values)
    try:
        best = next(it)
    except StopIteration:
        raise ValueError("find_max of an empty sequence") from None
    for x in it:
        if x > best:
            best = x
    return best


def permutations_probe(n):
    """Triple-nested accumulation: exactly n^3 inner iterations, n scratch.

    Accepts a size or a sequence (its length is the size). Returns the
    inner iteration count.
    """
    v = [float(i % 97) * 0.5 for i in range(n)] if isinstance(n, int) else list(n)
    size = len(v)
    acc = [0.0] * size
    count = 0
    for i in range(size):
        vi = v[i]
        for j in range(size):
            w = vi + v[j]
            k = 0
            for x in v:
                acc[k] = w + x
                k += 1
            count += size
    return count


def search_steps(sorted_keys, needle):
    """Binary search step count in a sorted sequence (at most log2(n) + 1)."""
    lo, hi = 0, len(sorted_keys)
    steps = 0
    while lo < hi:
        steps += 1
        mid = (lo + hi) // 2
        if sorted_keys[mid] < needle:
            lo = mid + 1
        else:
            hi = mid
    return steps


def tree_split_probe(n, lookups=1):
    """Lookups in a balanced search structure over n keys; returns total steps.

    Standalone convenience: builds the structure inline. The campaign
    target builds it in the untimed prepare phase instead.
    """
    keys = list(range(n)) if isinstance(n, int) else sorted(n)
    total = 0
    for q in range(lookups):
        total += search_steps(keys, keys[(q * 7919) % len(keys)])
    return total


def _sedgewick_gaps(n):
    # 1, 8, 23, 77, 281, ...: 4^(k+1) + 3*2^k + 1, which bounds the worst
    # case by O(n^(4/3)).
    gaps = [1]
    k = 0
    while True:
        g = 4 ** (k + 1) + 3 * 2**k + 1
        if g >= n:
            break
        gaps.append(g)
        k += 1
    return gaps[::-1]


def shell_sort(values):
    """Ascending shell sort of a copy of `values`, Sedgewick gap sequence."""
    v = list(values)
    n = len(v)
    for gap in _sedgewick_gaps(n):
        for i in range(gap, n):
            tmp = v[i]
            j = i
            while j >= gap and v[j - gap] > tmp:
                v[j] = v[j - gap]
                j -= gap
            v[j] = tmp
    return v


def accuracy(predictions, truth) -> float:
    """Percentage of predicted families equal to the known true family."""
    if not predictions:
        raise ValueError("accuracy of an empty prediction list")
    hits = sum(1 for p in predictions if p == truth)
    return 100.0 * hits / len(predictions)


# ---------------------------------------------------------------------------
# Synthetic targets
# ---------------------------------------------------------------------------

def synthetic_target(
    time_family: ComplexityFamily,
    space_family: ComplexityFamily,
    *,
    time_base: float = 0.0,
    time_unit: float = 0.0,
    time_sd=0.0,
    space_unit: float = 0.0,
    space_jitter=(1.0, 1.1),
    seed=None,
    name="synthetic",
) -> TargetSpec:
    """A target that sleeps per `time_family` and allocates per `space_family`.

    Sleep duration for an n-row sample is drawn from
    Normal(time_base + time_unit * g_time(n), sd(n)) and clamped at 0;
    `time_sd` may be a constant or a function of n. Allocation is
    space_unit * g_space(n) bytes scaled by a uniform draw from
    `space_jitter`. In simulate mode the sleep is skipped and the drawn
    duration is reported as the virtual cost (same random stream, so a
    seeded run replays bit-identically).
    """
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))

    def _duration(n):
        mean = time_base + time_unit * transform_scalar(time_family, n)
        sd = time_sd(n) if callable(time_sd) else float(time_sd)
        if sd > 0:
            return max(0.0, float(rng.normal(mean, sd)))
        return max(0.0, mean)

    def _allocate(n):
        if space_unit <= 0:
            return None
        nbytes = int(space_unit * transform_scalar(space_family, n) * rng.uniform(*space_jitter))
        return bytearray(max(nbytes, 0))

    def _run(sample):
        n = len(sample)
        duration = _duration(n)
        if duration > 0:
            time.sleep(duration)
        return _allocate(n)

    def _simulate(sample):
        n = len(sample)
        duration = _duration(n)
        _allocate(n)
        return duration

    return TargetSpec.in_process(_run, name=name, simulate=_simulate)


def example_noisy_constant(seed=None) -> TargetSpec:
    """Constant-time, n-log-n-memory dummy: sleeps ~N(0.1s, 0.02s) and
    allocates 8 * n * ln(n) * U(1000, 1100) bytes."""
    return synthetic_target(
        ComplexityFamily.CONSTANT,
        ComplexityFamily.NLOGN,
        time_unit=0.1,
        time_sd=0.02,
        space_unit=8.0 * 1000.0,
        space_jitter=(1.0, 1.1),
        seed=seed,
        name="noisy_constant",
    )


def example_noisy_linear(seed=None) -> TargetSpec:
    """Linear-time dummy with heteroscedastic noise: sleep mean
    0.1 + n/500 seconds, sd n/2000, clamped at 0."""
    return synthetic_target(
        ComplexityFamily.LINEAR,
        ComplexityFamily.CONSTANT,
        time_base=0.1,
        time_unit=1.0 / 500.0,
        time_sd=lambda n: n / 2000.0,
        seed=seed,
        name="noisy_linear",
    )


# ---------------------------------------------------------------------------
# Paragon registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParagonTarget:
    """A named algorithm with known true complexity classes.

    `true_time_family` is None when the true class is outside the seven
    candidates (shell sort's N^(4/3)). `make_dataset` generates a synthetic
    numeric dataset of a given size for accuracy experiments; `target` is
    the measurable TargetSpec consuming a sampled dataset.
    """

    name: str
    true_time_family: Optional[ComplexityFamily]
    true_space_family: ComplexityFamily
    make_dataset: Callable[[int, Optional[int]], Dataset]
    target: TargetSpec
    expected_time_families: tuple = ()


def _uniform_dataset(n, seed=None):
    # Compact double buffer: samples stay contiguous, so scans measure the
    # algorithm rather than pointer-chasing overhead.
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    values = array.array("d", rng.random(n).tobytes())
    return Dataset({"value": values}, {"value": "numeric"}, fmt="lines")


def _vector(sample):
    return sample.numeric_vector() if isinstance(sample, Dataset) else list(sample)


def _tree_prepare(sample):
    keys = sorted(_vector(sample))
    n = len(keys)
    stride = max(1, n // 200)
    queries = [keys[(i * stride) % n] for i in range(200)]
    return keys, queries, n


def _tree_run(state):
    keys, queries, n = state
    total = 0
    for q in queries:
        total += search_steps(keys, q)
    # Space-work proxy: the structure's bookkeeping grows as n log n.
    return bytearray(max(16, int(8 * n * max(math.log(n), 1.0))))


def _builtin(name, func, prepare, time_family, space_family, make_dataset, expected=()):
    spec = TargetSpec(
        kind=TargetKind.BUILTIN,
        name=name,
        func=func,
        prepare=prepare,
    )
    return ParagonTarget(
        name=name,
        true_time_family=time_family,
        true_space_family=space_family,
        make_dataset=make_dataset,
        target=spec,
        expected_time_families=expected or ((time_family,) if time_family else ()),
    )


def build_paragon(name: str, seed=None) -> ParagonTarget:
    """Construct a paragon by name; `seed` feeds any stochastic target."""
    fams = ComplexityFamily
    table = {
        "bubble_sort": lambda: _builtin(
            "bubble_sort",
            lambda v: bubble_sort(v, early_exit=False),
            _vector,
            fams.QUADRATIC,
            fams.LINEAR,
            _uniform_dataset,
        ),
        "find_max": lambda: _builtin(
            "find_max", find_max, _vector, fams.LINEAR, fams.CONSTANT, _uniform_dataset
        ),
        "permutations_probe": lambda: _builtin(
            "permutations_probe",
            permutations_probe,
            _vector,
            fams.CUBIC,
            fams.LINEAR,
            _uniform_dataset,
        ),
        "tree_split_probe": lambda: _builtin(
            "tree_split_probe",
            _tree_run,
            _tree_prepare,
            fams.LOG,
            fams.NLOGN,
            _uniform_dataset,
            expected=(fams.LOG, fams.CONSTANT),
        ),
        "shell_sort": lambda: _builtin(
            "shell_sort",
            shell_sort,
            _vector,
            None,
            fams.LINEAR,
            _uniform_dataset,
            expected=(fams.NLOGN, fams.LINEAR),
        ),
        "noisy_constant": lambda: ParagonTarget(
            name="noisy_constant",
            true_time_family=fams.CONSTANT,
            true_space_family=fams.NLOGN,
            make_dataset=_uniform_dataset,
            target=example_noisy_constant(seed),
            expected_time_families=(fams.CONSTANT,),
        ),
        "noisy_linear": lambda: ParagonTarget(
            name="noisy_linear",
            true_time_family=fams.LINEAR,
            true_space_family=fams.CONSTANT,
            make_dataset=_uniform_dataset,
            target=example_noisy_linear(seed),
            expected_time_families=(fams.LINEAR, fams.NLOGN),
        ),
    }
    if name not in table:
        raise KeyError(name)
    return table[name]()


PARAGON_NAMES = (
    "bubble_sort",
    "find_max",
    "permutations_probe",
    "tree_split_probe",
    "shell_sort",
    "noisy_constant",
    "noisy_linear",
)
