"""Randomized verification of matrix products.

To check a claimed product C = AB without recomputing AB, draw a random
vector r and compare A(Br) with Cr: three matrix-vector products, Theta(n^2)
per iteration.  If AB = C every iteration agrees, so a reject is always
correct.  If AB != C, consider E = AB - C and any column index j where E is
nonzero: conditioned on all components of r except r_j, the residual Er = 0
forces r_j to one fixed ring element (columns live in an integral domain), so
an iteration wrongly accepts with probability at most the largest point mass
of the component distribution.  Independent iterations multiply, giving the
p_max**k certificate reported on accept.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConfigInvalid, DimensionMismatch, RingMismatch
from .matrix import Matrix, Vector, mat_vec
from .sampling import DiscreteDistribution, p_max, sample_vector, substream


@dataclass(frozen=True)
class VerifyConfig:
    """Number of fingerprint iterations, master seed and component law."""

    iterations: int
    seed: int
    distribution: DiscreteDistribution

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ConfigInvalid(f"need at least one iteration, got {self.iterations}")


@dataclass(frozen=True)
class Verdict:
    """Outcome of a verification run.

    ``error_bound`` is only set on accept; witness fields are only set on
    reject and name the first failing iteration, its random vector, and the
    smallest row index where A(Br) and Cr disagree.
    """

    accepted: bool
    error_bound: Fraction | None = None
    witness: Vector | None = None
    witness_iteration: int | None = None
    mismatch_row: int | None = None


def _check_inputs(a: Matrix, b: Matrix, c: Matrix) -> None:
    for other in (b, c):
        if other.ring != a.ring:
            raise RingMismatch(
                f"inputs use different rings: {a.ring} vs {other.ring}"
            )
    if a.rows != a.cols or b.rows != b.cols or c.rows != c.cols:
        raise DimensionMismatch("inputs must all be square")
    if not a.rows == b.rows == c.rows:
        raise DimensionMismatch(
            f"inputs must share one size, got {a.rows}, {b.rows}, {c.rows}"
        )


def freivalds_iteration(
    a: Matrix, b: Matrix, c: Matrix, r: Vector
) -> tuple[bool, int | None]:
    """One fingerprint comparison: does A(Br) equal Cr?

    Returns ``(True, None)`` on agreement, else ``(False, i)`` with the
    smallest row index i where the two sides differ.  Never forms AB: the
    cost is exactly three matrix-vector products.
    """
    _check_inputs(a, b, c)
    if r.ring != a.ring:
        raise RingMismatch(f"vector ring {r.ring} does not match matrices ({a.ring})")
    if len(r) != a.cols:
        raise DimensionMismatch(f"vector length {len(r)} does not match n = {a.cols}")
    br = mat_vec(b, r)
    abr = mat_vec(a, br)
    cr = mat_vec(c, r)
    mism = abr.data != cr.data
    if mism.any():
        return False, int(np.argmax(mism))
    return True, None


def verify(a: Matrix, b: Matrix, c: Matrix, cfg: VerifyConfig) -> Verdict:
    """Run up to ``cfg.iterations`` fingerprint iterations, stopping at the
    first mismatch.

    Iteration j draws its vector from substream ``(cfg.seed, j)``, so the
    verdict for any prefix of iterations is independent of how many were
    requested.  On accept the verdict carries the p_max**k error bound; a
    reject is unconditionally correct and carries the witness vector.
    """
    _check_inputs(a, b, c)
    cfg.distribution.validate_for_ring(a.ring)
    n = a.rows
    for j in range(cfg.iterations):
        rng = substream(cfg.seed, j)
        r = sample_vector(cfg.distribution, n, rng, a.ring)
        ok, row = freivalds_iteration(a, b, c, r)
        if not ok:
            return Verdict(
                accepted=False,
                witness=r,
                witness_iteration=j,
                mismatch_row=row,
            )
    bound = p_max(cfg.distribution) ** cfg.iterations
    return Verdict(accepted=True, error_bound=bound)
