"""Datasets, the geometric size schedule, and the per-step samplers.

Sampling is deliberately cheap and runs outside the timed region of a
campaign. Randomized draws use numpy's counter-based Philox generator so a
campaign seed replays exactly.
"""

import csv
import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigurationError


class SamplingMode(Enum):
    HEAD = "head"
    RANDOM = "random"
    STRATIFIED = "stratified"


def _rng(seed):
    """Accept None, int, SeedSequence, or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.Philox(seed))
    if seed is None:
        return np.random.Generator(np.random.Philox())
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass
class Dataset:
    """Column-oriented table of records; the thing a campaign subsamples.

    `kinds` maps each column to one of "numeric", "categorical", "text",
    or "bytes". `fmt` remembers the native serialization ("csv", "lines",
    "bytes") used when a sample is handed to an external command.
    """

    columns: dict
    kinds: dict
    fmt: str = "csv"

    def __post_init__(self):
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ConfigurationError(f"ragged columns: lengths {sorted(lengths)}")

    @property
    def n_full(self) -> int:
        if not self.columns:
            return 0
        return len(next(iter(self.columns.values())))

    def __len__(self):
        return self.n_full

    @property
    def column_names(self):
        return list(self.columns)

    def column(self, name):
        if name not in self.columns:
            raise ConfigurationError(f"no such column: {name!r}")
        return self.columns[name]

    def take(self, indices) -> "Dataset":
        """New dataset with the selected rows, in the given order.

        A contiguous prefix keeps the column's own slice type (a compact
        numeric column stays compact), which keeps head sampling cheap on
        multi-million-row datasets.
        """
        if isinstance(indices, range) and indices.step == 1:
            cols = {name: vals[indices.start : indices.stop] for name, vals in self.columns.items()}
        else:
            idx = list(indices)
            cols = {name: [vals[i] for i in idx] for name, vals in self.columns.items()}
        return Dataset(cols, dict(self.kinds), self.fmt)

    def numeric_vector(self):
        """A per-row numeric view: the first numeric column if present
        (returned as-is, no copy), otherwise stable hash-derived floats so
        any dataset can drive a numeric builtin target."""
        for name, kind in self.kinds.items():
            if kind == "numeric":
                return self.columns[name]
        first = next(iter(self.columns.values()), [])
        return [(hash(repr(v)) % 10_000_019) / 10_000_019.0 for v in first]

    @classmethod
    def from_vector(cls, values, name="value") -> "Dataset":
        return cls({name: [float(v) for v in values]}, {name: "numeric"}, fmt="lines")

    def write(self, path):
        """Serialize in the dataset's native format for external targets."""
        if self.fmt == "csv":
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                names = self.column_names
                writer.writerow(names)
                for row in zip(*(self.columns[n] for n in names)):
                    writer.writerow(row)
        elif self.fmt == "lines":
            col = next(iter(self.columns.values()))
            with open(path, "w") as fh:
                for v in col:
                    fh.write(f"{v}\n")
        elif self.fmt == "bytes":
            col = next(iter(self.columns.values()))
            with open(path, "wb") as fh:
                for record in col:
                    fh.write(record)
        else:
            raise ConfigurationError(f"unknown dataset format {self.fmt!r}")


def _type_column(raw):
    """CSV column typing: numeric when every non-empty cell parses as float,
    categorical otherwise."""
    values = []
    for cell in raw:
        if cell == "":
            return None
        try:
            values.append(float(cell))
        except ValueError:
            return None
    return values


def ingest_csv(path) -> Dataset:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ConfigurationError(f"{path}: empty file") from None
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ConfigurationError(
                    f"{path}: line {lineno}: expected {len(header)} fields, got {len(row)}"
                )
            rows.append(row)
    if not rows:
        raise ConfigurationError(f"{path}: no data rows after the header")

    columns, kinds = {}, {}
    for j, name in enumerate(header):
        raw = [row[j] for row in rows]
        numeric = _type_column(raw)
        if numeric is not None:
            columns[name], kinds[name] = numeric, "numeric"
        else:
            columns[name], kinds[name] = raw, "categorical"
    return Dataset(columns, kinds, fmt="csv")


def ingest_lines(path) -> Dataset:
    with open(path) as fh:
        lines = [line.rstrip("\n") for line in fh]
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ConfigurationError(f"{path}: empty file")
    numeric = _type_column(lines)
    if numeric is not None:
        return Dataset({"value": numeric}, {"value": "numeric"}, fmt="lines")
    return Dataset({"line": lines}, {"line": "text"}, fmt="lines")


def ingest_bytes(path, record_bytes: int) -> Dataset:
    if record_bytes is None or record_bytes < 1:
        raise ConfigurationError("bytes format requires --record-bytes >= 1")
    with open(path, "rb") as fh:
        blob = fh.read()
    if not blob:
        raise ConfigurationError(f"{path}: empty file")
    if len(blob) % record_bytes:
        raise ConfigurationError(
            f"{path}: size {len(blob)} is not a multiple of record size {record_bytes}"
            f" (offset {len(blob) - len(blob) % record_bytes})"
        )
    records = [blob[i : i + record_bytes] for i in range(0, len(blob), record_bytes)]
    return Dataset({"record": records}, {"record": "bytes"}, fmt="bytes")


def ingest_dataset(path, fmt="csv", record_bytes=None) -> Dataset:
    """Load a dataset file under the declared format."""
    if fmt == "csv":
        return ingest_csv(path)
    if fmt == "lines":
        return ingest_lines(path)
    if fmt == "bytes":
        return ingest_bytes(path, record_bytes)
    raise ConfigurationError(f"unknown dataset format {fmt!r}")


# ---------------------------------------------------------------------------
# Size schedule
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SizeSchedule:
    """Strictly increasing sample sizes ending at the full dataset size."""

    sizes: tuple
    replicates: int = 1

    def expand(self):
        """Sizes with replicates unrolled, e.g. [2, 2, 4, 4, 8, 8]."""
        return [s for s in self.sizes for _ in range(self.replicates)]


def default_start_size(n_full: int) -> int:
    """floor(log2(n_full)), floored at 1."""
    if n_full < 2:
        warnings.warn(f"dataset has {n_full} row(s); starting the schedule at 1")
        return 1
    return max(1, int(math.floor(math.log2(n_full))))


def build_schedule(start_size: int, power_factor: float, n_full: int, replicates: int = 1) -> SizeSchedule:
    """Geometric progression of sizes from start_size up to n_full.

    Each step multiplies by power_factor and floors; a fractional factor
    that stalls is forced one row forward. The full size is always the last
    entry.
    """
    if not 1 <= start_size <= n_full:
        raise ConfigurationError(
            f"start size must be in [1, {n_full}], got {start_size}"
        )
    if power_factor <= 1:
        raise ConfigurationError(f"power factor must be > 1, got {power_factor}")
    if replicates < 1:
        raise ConfigurationError(f"replicates must be >= 1, got {replicates}")

    sizes = [start_size]
    current = start_size
    while current < n_full:
        nxt = min(int(math.floor(current * power_factor)), n_full)
        if nxt <= current:
            nxt = current + 1
        sizes.append(nxt)
        current = nxt
    return SizeSchedule(tuple(sizes), replicates)


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------

def sample_head(d: Dataset, k: int) -> Dataset:
    """The first k rows in original order; k above n_full clamps."""
    if k < 1:
        raise ConfigurationError(f"sample size must be >= 1, got {k}")
    return d.take(range(min(k, d.n_full)))


def sample_random(d: Dataset, k: int, seed=None) -> Dataset:
    """k rows drawn uniformly without replacement; deterministic per seed."""
    if k < 1:
        raise ConfigurationError(f"sample size must be >= 1, got {k}")
    k = min(k, d.n_full)
    idx = _rng(seed).choice(d.n_full, size=k, replace=False)
    return d.take(int(i) for i in idx)


def sample_stratified(d: Dataset, fraction: float, strata_column: str, seed=None) -> Dataset:
    """Per category, a random max(1, round(fraction * count)) rows.

    Guarantees every category present in the input appears in the sample,
    so a downstream per-class consumer never sees an empty class.
    """
    if not 0.0 < fraction <= 1.0:
        raise ConfigurationError(f"fraction must be in (0, 1], got {fraction}")
    if strata_column not in d.columns:
        raise ConfigurationError(
            f"strata column {strata_column!r} not found; columns: {d.column_names}"
        )
    if d.kinds.get(strata_column) != "categorical":
        raise ConfigurationError(
            f"strata column {strata_column!r} is {d.kinds.get(strata_column)}, not categorical"
        )

    rng = _rng(seed)
    by_category = {}
    for i, value in enumerate(d.columns[strata_column]):
        by_category.setdefault(value, []).append(i)

    chosen = []
    for value, indices in by_category.items():
        want = max(1, _round_half_up(fraction * len(indices)))
        want = min(want, len(indices))
        picked = rng.choice(len(indices), size=want, replace=False)
        chosen.extend(indices[int(i)] for i in picked)
    return d.take(chosen)


def rhead(d, k: int = 7, is_random: bool = False, seed=None):
    """Quick peek at a dataset or flat sequence: the head, or a random k.

    Mirrors head() with an optional randomized draw; k above the length
    clamps. Datasets come back as datasets, plain sequences as lists.
    """
    if k < 1:
        raise ConfigurationError(f"k must be >= 1, got {k}")
    if isinstance(d, Dataset):
        return sample_random(d, min(k, d.n_full), seed) if is_random else sample_head(d, k)
    items = list(d)
    k = min(k, len(items))
    if not is_random:
        return items[:k]
    idx = _rng(seed).choice(len(items), size=k, replace=False)
    return [items[int(i)] for i in idx]
