"""Wall-clock and operation-count comparison of the two checking strategies.

For each size n the runner builds one correct instance (C really is AB, so
the fingerprint check never exits early and all k iterations run), then times
the deterministic recompute-and-compare against the k-iteration fingerprint
check.  Wall times are the median over repeats; scalar multiplication counts
come from the exact counter, so they are n^3 and 3*k*n^2 regardless of how
noisy the clock is.  Consecutive doubled sizes also get a time ratio, the
empirical growth signal (ideal: 8x for the cubic method, 4x for the
quadratic one).
"""

from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass

from .analysis import InstanceSpec, generate_instance
from .errors import ConfigInvalid
from .matrix import (
    INT64_MAX,
    RingSpec,
    matmul,
    mats_equal,
    reset_scalar_multiplies,
    scalar_multiplies,
)
from .sampling import DiscreteDistribution, stream_seed, uniform_binary
from .verify import Verdict, VerifyConfig, verify


@dataclass(frozen=True)
class BenchRecord:
    """One timed configuration; ``k`` is None for the deterministic method."""

    n: int
    method: str
    k: int | None
    wall_time: float
    scalar_ops: int


def run_bench(
    sizes,
    k: int = 10,
    repeats: int = 5,
    seed: int = 0,
    entry_bound: int = 256,
    dist: DiscreteDistribution | None = None,
) -> tuple[list[BenchRecord], dict[str, dict[str, float]]]:
    """Time both methods at each size; returns records and doubling ratios."""
    sizes = [int(n) for n in sizes]
    if not sizes or sizes != sorted(set(sizes)):
        raise ConfigInvalid("sizes must be a nonempty ascending list of distinct values")
    if any(n < 1 for n in sizes):
        raise ConfigInvalid("sizes must be positive")
    if max(sizes) > 8192:
        raise ConfigInvalid(
            f"size {max(sizes)} is past the point where the cubic baseline "
            "finishes in reasonable time; the limit is 8192"
        )
    if k < 1:
        raise ConfigInvalid(f"need at least one iteration, got {k}")
    if repeats < 1:
        raise ConfigInvalid(f"need at least one repeat, got {repeats}")
    # Catch a hopeless setup before burning time on it: products at the
    # largest size must fit checked 64-bit accumulation.
    if max(sizes) * entry_bound * entry_bound > INT64_MAX:
        raise ConfigInvalid(
            f"entries in [-{entry_bound}, {entry_bound}] overflow 64-bit "
            f"accumulation at n = {max(sizes)}"
        )
    dist = uniform_binary() if dist is None else dist

    records: list[BenchRecord] = []
    for i, n in enumerate(sizes):
        a, b, c = generate_instance(
            InstanceSpec(n, RingSpec.int64(), "equal", stream_seed(seed, i), entry_bound)
        )

        det_times = []
        det_ops = 0
        for _ in range(repeats):
            reset_scalar_multiplies()
            t0 = time.perf_counter()
            ok = mats_equal(matmul(a, b), c)
            det_times.append(time.perf_counter() - t0)
            det_ops = scalar_multiplies()
            assert ok, "equal-mode instance failed its own recompute"
        records.append(
            BenchRecord(n, "deterministic", None, statistics.median(det_times), det_ops)
        )

        cfg = VerifyConfig(k, stream_seed(seed, len(sizes) + i), dist)
        frei_times = []
        frei_ops = 0
        for _ in range(repeats):
            reset_scalar_multiplies()
            t0 = time.perf_counter()
            verdict: Verdict = verify(a, b, c, cfg)
            frei_times.append(time.perf_counter() - t0)
            frei_ops = scalar_multiplies()
            assert verdict.accepted, "correct product was rejected"
        records.append(
            BenchRecord(n, "freivalds", k, statistics.median(frei_times), frei_ops)
        )
    return records, doubling_ratios(records)


def doubling_ratios(records) -> dict[str, dict[str, float]]:
    """Time ratios between records whose sizes differ by exactly 2x."""
    by_key = {(r.method, r.n): r for r in records}
    out: dict[str, dict[str, float]] = {"deterministic": {}, "freivalds": {}}
    for (method, n), rec in sorted(by_key.items()):
        doubled = by_key.get((method, 2 * n))
        if doubled is not None and rec.wall_time > 0:
            out[method][f"{n}->{2 * n}"] = doubled.wall_time / rec.wall_time
    return out


def write_csv(records, path) -> None:
    """Rows of ``n,method,k,wall_ms,scalar_ops``; k is empty when not applicable."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "method", "k", "wall_ms", "scalar_ops"])
        for r in records:
            writer.writerow(
                [
                    r.n,
                    r.method,
                    "" if r.k is None else r.k,
                    f"{r.wall_time * 1e3:.3f}",
                    r.scalar_ops,
                ]
            )
