"""Seeded randomness and finite component distributions.

All random choices in the package flow through one generator, SplitMix64:
state advances by the 64-bit golden-gamma constant and each output is the
avalanche of the new state.  Substream ``j`` of a seed is keyed off output
``j + 1`` of the parent stream, so it depends on ``(seed, j)`` alone; that is
what lets iterations and trials be replayed or reordered without changing
what any one of them draws.

Component distributions carry exact rational masses.  Sampling maps a raw
64-bit word through inverse-CDF cut points scaled to 2**64; flooring the cut
points biases any single mass by less than 2**-60 for the supports used here,
far below anything an empirical rate can resolve, and the exact analysis code
never touches the sampler.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import (
    ConfigInvalid,
    DuplicateSupport,
    InvalidDistribution,
    InvalidProbability,
    InvalidRing,
    SupportTooSmall,
)
from .matrix import INT64_MAX, INT64_MIN, PRIME_FIELD, RingSpec, Vector

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 output function: avalanche one 64-bit word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX_A) & MASK64
    z = ((z ^ (z >> 27)) * _MIX_B) & MASK64
    return z ^ (z >> 31)


def mix64_np(z: np.ndarray) -> np.ndarray:
    """Vectorized ``mix64`` over a uint64 array, bit-identical to the scalar form."""
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX_A)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX_B)
    return z ^ (z >> np.uint64(31))


class SeededRng:
    """SplitMix64 stream; output ``i`` (counting from 1) is ``mix64(seed + i*GOLDEN)``."""

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)


def stream_seed(seed: int, index: int) -> int:
    """Seed of substream ``index``: output ``index + 1`` of the parent stream."""
    if index < 0:
        raise ValueError("substream index must be nonnegative")
    return mix64((seed + (index + 1) * GOLDEN) & MASK64)


def substream(seed: int, index: int) -> SeededRng:
    return SeededRng(stream_seed(seed, index))


def draw_words(rng: SeededRng, count: int) -> np.ndarray:
    """Next ``count`` raw outputs as a uint64 array.

    Advances ``rng`` exactly as ``count`` calls of ``next_u64`` would; a test
    pins the two paths together bit for bit.
    """
    if count < 1:
        raise ValueError("count must be positive")
    steps = np.arange(1, count + 1, dtype=np.uint64)
    words = mix64_np(np.uint64(rng.state) + steps * np.uint64(GOLDEN))
    rng.state = (rng.state + count * GOLDEN) & MASK64
    return words


class DiscreteDistribution:
    """Finite law of one random component: distinct integer support values
    with exact positive rational masses summing to one."""

    __slots__ = ("support", "probs", "_support_arr", "_upper")

    def __init__(self, support, probs) -> None:
        support = tuple(int(v) for v in support)
        probs = tuple(Fraction(q) for q in probs)
        if len(support) < 2:
            raise SupportTooSmall(
                "need at least two support values; a single point cannot separate anything"
            )
        if len(set(support)) != len(support):
            raise DuplicateSupport(f"support values must be distinct: {support}")
        if len(probs) != len(support):
            raise InvalidDistribution("need exactly one mass per support value")
        if any(q <= 0 for q in probs):
            raise InvalidDistribution("all masses must be positive")
        if sum(probs) != 1:
            raise InvalidDistribution(f"masses sum to {sum(probs)}, not 1")
        if any(v < INT64_MIN or v > INT64_MAX for v in support):
            raise InvalidDistribution("support values must fit the signed 64-bit range")
        self.support = support
        self.probs = probs
        self._support_arr = np.array(support, dtype=np.int64)
        self._support_arr.flags.writeable = False
        # Inverse-CDF cut points: value i is chosen when the raw word falls in
        # [floor(F(i-1) * 2**64), floor(F(i) * 2**64)).  The last bucket is
        # implicit, so only len(support) - 1 cuts are stored.
        acc = Fraction(0)
        cuts = []
        for q in probs[:-1]:
            acc += q
            cuts.append((acc.numerator << 64) // acc.denominator)
        self._upper = np.array(cuts, dtype=np.uint64)
        self._upper.flags.writeable = False

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiscreteDistribution):
            return NotImplemented
        return self.support == other.support and self.probs == other.probs

    def __hash__(self) -> int:
        return hash((self.support, self.probs))

    def __repr__(self) -> str:
        pairs = ", ".join(f"{v}: {q}" for v, q in zip(self.support, self.probs))
        return f"DiscreteDistribution({pairs})"

    def validate_for_ring(self, ring: RingSpec) -> None:
        """Raise unless every support value is a valid element of ``ring``."""
        if ring.kind == PRIME_FIELD:
            p = ring.modulus
            bad = [v for v in self.support if not 0 <= v < p]
            if bad:
                raise ConfigInvalid(
                    f"support values {bad} are not reduced elements of {ring}"
                )


def p_max(dist: DiscreteDistribution) -> Fraction:
    """Largest point mass: the certified per-iteration false-accept bound."""
    return max(dist.probs)


def uniform_binary() -> DiscreteDistribution:
    """Fair coin on {0, 1}, the classic fingerprint distribution."""
    return DiscreteDistribution((0, 1), (Fraction(1, 2), Fraction(1, 2)))


def bernoulli(p) -> DiscreteDistribution:
    """P[1] = p, P[0] = 1 - p for rational 0 < p < 1."""
    p = Fraction(p)
    if not 0 < p < 1:
        raise InvalidProbability(f"need 0 < p < 1, got {p}")
    return DiscreteDistribution((0, 1), (1 - p, p))


def uniform_support(values) -> DiscreteDistribution:
    """Uniform law over the given distinct integer values."""
    values = tuple(values)
    if len(values) < 2:
        raise SupportTooSmall("uniform support needs at least two values")
    share = Fraction(1, len(values))
    return DiscreteDistribution(values, (share,) * len(values))


def field_uniform(ring: RingSpec) -> DiscreteDistribution:
    """Uniform law over all of Z_p; only meaningful for prime-field rings."""
    if ring.kind != PRIME_FIELD:
        raise InvalidRing("full-field sampling needs a prime-field ring")
    return uniform_support(range(ring.modulus))


def sample_vector(
    dist: DiscreteDistribution, n: int, rng: SeededRng, ring: RingSpec | None = None
) -> Vector:
    """Draw n i.i.d. components from ``dist`` as a vector over ``ring``."""
    if n < 1:
        raise ValueError("need n >= 1 components")
    ring = RingSpec.int64() if ring is None else ring
    dist.validate_for_ring(ring)
    words = draw_words(rng, n)
    idx = np.searchsorted(dist._upper, words, side="right")
    return Vector._wrap(dist._support_arr[idx], ring)


def parse_dist(text: str, ring: RingSpec) -> DiscreteDistribution:
    """Parse a distribution spec: ``u01``, ``bern:<num>/<den>``,
    ``usup:<v1,v2,...>`` or ``field``."""
    if text == "u01":
        return uniform_binary()
    if text == "field":
        return field_uniform(ring)
    if text.startswith("bern:"):
        body = text[len("bern:"):]
        try:
            q = Fraction(body)
        except (ValueError, ZeroDivisionError):
            raise ConfigInvalid(f"bad probability {body!r} in {text!r}") from None
        return bernoulli(q)
    if text.startswith("usup:"):
        body = text[len("usup:"):]
        try:
            values = tuple(int(tok) for tok in body.split(","))
        except ValueError:
            raise ConfigInvalid(f"bad support list {body!r} in {text!r}") from None
        return uniform_support(values)
    raise ConfigInvalid(
        f"unknown distribution spec {text!r}; expected u01, bern:<num>/<den>, "
        "usup:<v1,v2,...> or field"
    )
