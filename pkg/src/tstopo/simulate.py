"""Seeded sampling of Wiener and Cauchy process paths and labeled datasets.

Both processes start at 0 and are sampled on a uniform grid over ``[0, t_max]``
with ``n_steps`` values (so ``n_steps - 1`` increments of length
``dt = t_max / (n_steps - 1)``):

* Wiener: increments are independent ``sqrt(dt) * N(0, 1)`` draws.
* Cauchy: increments over a step of length ``dt`` are Cauchy with location 0
  and scale ``dt``, drawn as ``dt * tan(pi * (U - 1/2))`` with ``U``
  uniform on (0, 1).

Note on the Cauchy scale: some texts describe the process via a subordinator
with scale parameter ``t**2 / 2``; the density ``rho_t(x) = t / (pi * (t**2 +
x**2))`` has scale ``t``, and that density form is what this module implements
(scale linear in the increment length).

Randomness comes from NumPy's PCG64 generator (normal draws use NumPy's
ziggurat method), seeded per series through a splitmix64-based mix of
``(master_seed, label, index)`` so per-series streams are independent and the
whole dataset is a pure function of its arguments.
"""

from __future__ import annotations

import csv
import json
import math
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

WIENER = "Wiener"
CAUCHY = "Cauchy"

_MASK64 = (1 << 64) - 1


def mix_seed(*parts) -> int:
    """Stable 64-bit mix (splitmix64 finalizer chain) of integer/string parts."""
    h = 0x9E3779B97F4A7C15
    for part in parts:
        if isinstance(part, str):
            part = zlib.crc32(part.encode("utf-8"))
        h = (h ^ (int(part) & _MASK64)) & _MASK64
        h = (h * 0xBF58476D1CE4E5B9) & _MASK64
        h ^= h >> 27
        h = (h * 0x94D049BB133111EB) & _MASK64
        h ^= h >> 31
    return h


@dataclass
class TimeSeries:
    """A uniformly sampled real-valued series with an optional class label."""

    values: np.ndarray
    t_max: float
    label: str | None = None
    seed: int | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1 or self.values.shape[0] < 2:
            raise ValueError("a time series needs at least 2 values")
        if not self.t_max > 0:
            raise ValueError("t_max must be positive")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("series values must be finite")

    @property
    def dt(self) -> float:
        return self.t_max / (len(self.values) - 1)

    def __len__(self) -> int:
        return len(self.values)


@dataclass
class LabeledDataset:
    """Ordered collection of labeled series (one class block after another)."""

    series: list[TimeSeries] = field(default_factory=list)

    @property
    def class_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for s in self.series:
            counts[s.label] = counts.get(s.label, 0) + 1
        return counts

    @property
    def labels(self) -> list[str]:
        return [s.label for s in self.series]

    def __len__(self) -> int:
        return len(self.series)

    def save(self, csv_path, manifest_path=None) -> None:
        """Write one CSV row per sample plus a JSON manifest of seeds/shape."""
        csv_path = Path(csv_path)
        with csv_path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["series_id", "label", "t_index", "value"])
            for sid, s in enumerate(self.series):
                for t_index, value in enumerate(s.values):
                    writer.writerow([sid, s.label, t_index, repr(float(value))])
        if manifest_path is None:
            manifest_path = csv_path.with_suffix(".manifest.json")
        manifest = {
            "n_series": len(self.series),
            "class_counts": self.class_counts,
            "n_steps": [len(s) for s in self.series],
            "t_max": [s.t_max for s in self.series],
            "seeds": [s.seed for s in self.series],
        }
        Path(manifest_path).write_text(json.dumps(manifest, indent=2))

    @classmethod
    def load(cls, csv_path, manifest_path=None) -> "LabeledDataset":
        csv_path = Path(csv_path)
        if manifest_path is None:
            manifest_path = csv_path.with_suffix(".manifest.json")
        manifest = json.loads(Path(manifest_path).read_text())
        rows: dict[int, list[float]] = {}
        labels: dict[int, str] = {}
        with csv_path.open() as fh:
            reader = csv.reader(fh)
            next(reader)
            for sid, label, _t_index, value in reader:
                rows.setdefault(int(sid), []).append(float(value))
                labels[int(sid)] = label
        series = [
            TimeSeries(
                np.array(rows[sid]),
                t_max=manifest["t_max"][sid],
                label=labels[sid],
                seed=manifest["seeds"][sid],
            )
            for sid in sorted(rows)
        ]
        return cls(series)


def _check_sampling_args(n_steps: int, t_max: float) -> None:
    if not isinstance(n_steps, (int, np.integer)) or n_steps < 2:
        raise ValueError(f"n_steps must be an integer >= 2, got {n_steps!r}")
    if not t_max > 0:
        raise ValueError(f"t_max must be positive, got {t_max!r}")


def sample_wiener(n_steps: int, t_max: float, seed: int) -> TimeSeries:
    """Sample a standard Wiener path: X_0 = 0, increments sqrt(dt) * N(0,1)."""
    _check_sampling_args(n_steps, t_max)
    rng = np.random.default_rng(seed)
    dt = t_max / (n_steps - 1)
    increments = math.sqrt(dt) * rng.standard_normal(n_steps - 1)
    values = np.concatenate(([0.0], np.cumsum(increments)))
    return TimeSeries(values, t_max=t_max, label=WIENER, seed=seed)


def sample_cauchy(n_steps: int, t_max: float, seed: int) -> TimeSeries:
    """Sample a Cauchy path: X_0 = 0, increments dt * tan(pi * (U - 1/2))."""
    _check_sampling_args(n_steps, t_max)
    rng = np.random.default_rng(seed)
    dt = t_max / (n_steps - 1)
    u = rng.random(n_steps - 1)
    increments = dt * np.tan(np.pi * (u - 0.5))
    values = np.concatenate(([0.0], np.cumsum(increments)))
    return TimeSeries(values, t_max=t_max, label=CAUCHY, seed=seed)


_SAMPLERS = {WIENER: sample_wiener, CAUCHY: sample_cauchy}


def generate_dataset(
    n_per_class: dict[str, int], n_steps: int, t_max: float, master_seed: int
) -> LabeledDataset:
    """Generate a labeled dataset, one class block after another.

    Classes are emitted in sorted label order, each series seeded by
    ``mix_seed(master_seed, label, index)``, so the result is a pure function
    of the arguments.
    """
    _check_sampling_args(n_steps, t_max)
    for label, count in n_per_class.items():
        if label not in _SAMPLERS:
            raise ValueError(f"unknown process label {label!r}")
        if count < 1:
            raise ValueError(f"class count for {label!r} must be >= 1")
    series = []
    for label in sorted(n_per_class):
        sampler = _SAMPLERS[label]
        for index in range(n_per_class[label]):
            series.append(sampler(n_steps, t_max, mix_seed(master_seed, label, index)))
    return LabeledDataset(series)
