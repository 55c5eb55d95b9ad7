"""False-accept analysis against independent brute-force oracles.

``brute_fap`` in util.py enumerates the full support^n space with plain
Python arithmetic, so every agreement below means the library's reduced,
vectorized enumeration reproduced a value computed by a completely separate
route.  Hand-derived expected values are frozen inline.
"""

import random
from fractions import Fraction

import numpy as np
import pytest

import freicheck.analysis as analysis_mod
from freicheck import (
    BudgetExceeded,
    ConfigInvalid,
    GenerationFailed,
    InstanceActuallyEqual,
    InstanceSpec,
    Matrix,
    RingSpec,
    Vector,
    analyze_instance,
    bernoulli,
    difference_profile,
    empirical_false_accept_rate,
    exact_false_accept_probability,
    field_uniform,
    freivalds_iteration,
    generate_instance,
    identity,
    matmul,
    mats_equal,
    p_max,
    sample_vector,
    substream,
    uniform_binary,
    uniform_support,
    wilson_interval,
)
from util import brute_fap, random_unequal_triple

INT64 = RingSpec.int64()
ZP3 = RingSpec.prime_field(3)
ZP5 = RingSpec.prime_field(5)
U01 = uniform_binary()


def _triple_with_error(e_rows, ring):
    """A = I, B arbitrary, C = B - E, so that AB - C = E exactly."""
    n = len(e_rows)
    rng = random.Random(sum(map(abs, (v for row in e_rows for v in row))) + n)
    if ring.modulus:
        b_rows = [[rng.randrange(ring.modulus) for _ in range(n)] for _ in range(n)]
        c_rows = [
            [(b_rows[i][j] - e_rows[i][j]) % ring.modulus for j in range(n)]
            for i in range(n)
        ]
    else:
        b_rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        c_rows = [[b_rows[i][j] - e_rows[i][j] for j in range(n)] for i in range(n)]
    return identity(n, ring), Matrix(n, n, ring, b_rows), Matrix(n, n, ring, c_rows)


# ---------------------------------------------------------------- frozen exact values


def test_single_nonzero_column_u01_is_one_half():
    # Acceptance needs r_0 * e = 0, and over the integers that means r_0 = 0,
    # which a fair coin hits with probability exactly 1/2.
    a, b, c = _triple_with_error([[3, 0], [1, 0]], INT64)
    assert exact_false_accept_probability(a, b, c, U01) == Fraction(1, 2)


def test_single_nonzero_column_bernoulli_matches_mass_of_zero():
    a, b, c = _triple_with_error([[3, 0], [1, 0]], INT64)
    assert exact_false_accept_probability(a, b, c, bernoulli(Fraction(1, 4))) == Fraction(3, 4)
    assert exact_false_accept_probability(a, b, c, bernoulli(Fraction(9, 10))) == Fraction(1, 10)


def test_two_column_errors_hand_enumerated():
    # E = [[1, 1], [0, 0]] under u01: residual is r_0 + r_1, zero only for
    # (0, 0) among the four equally likely pairs.
    a, b, c = _triple_with_error([[1, 1], [0, 0]], INT64)
    assert exact_false_accept_probability(a, b, c, U01) == Fraction(1, 4)
    # E = [[1, -1], [0, 0]]: residual r_0 - r_1, zero for (0,0) and (1,1).
    a, b, c = _triple_with_error([[1, -1], [0, 0]], INT64)
    assert exact_false_accept_probability(a, b, c, U01) == Fraction(1, 2)
    # Same E under uniform {0,1,2}: zero for (0,0), (1,1), (2,2): 3 of 9.
    assert exact_false_accept_probability(a, b, c, uniform_support((0, 1, 2))) == Fraction(1, 3)
    # E = [[1, 1], [0, 0]] under uniform {0,1,2}: only (0,0) works: 1 of 9.
    a, b, c = _triple_with_error([[1, 1], [0, 0]], INT64)
    assert exact_false_accept_probability(a, b, c, uniform_support((0, 1, 2))) == Fraction(1, 9)


def test_field_single_column_is_one_over_p():
    # Over Z_5 with the full-field distribution, r_0 * e = 0 forces r_0 = 0:
    # probability exactly 1/5.
    a, b, c = _triple_with_error([[2, 0, 0], [0, 0, 0], [4, 0, 0]], ZP5)
    assert exact_false_accept_probability(a, b, c, field_uniform(ZP5)) == Fraction(1, 5)


def test_zp_wraparound_error_still_counts():
    # E = [[2, 1], [1, 2]] over Z_3 with u01: residuals (r0+2r1... transposed)
    # enumerate by hand: r=(0,0) -> (0,0) accept; (1,0) -> (2,1) reject;
    # (0,1) -> (1,2) reject; (1,1) -> (0,0) accept, since 2+1 = 0 mod 3.
    a, b, c = _triple_with_error([[2, 1], [1, 2]], ZP3)
    assert exact_false_accept_probability(a, b, c, U01) == Fraction(1, 2)


def test_bound_holds_with_equality_only_sometimes():
    # A full-rank two-column error under u01 keeps only the all-zero vector:
    # probability 1/4 < 1/2, showing the bound need not be tight.
    a, b, c = _triple_with_error([[1, 0], [0, 1]], INT64)
    assert exact_false_accept_probability(a, b, c, U01) == Fraction(1, 4)


# ---------------------------------------------------------------- oracle agreement


@pytest.mark.parametrize("ring", [INT64, ZP3, ZP5], ids=["int64", "zp3", "zp5"])
def test_exact_fap_matches_full_space_oracle(ring):
    rng = random.Random(101 if ring.modulus is None else ring.modulus)
    dists = [U01, bernoulli(Fraction(1, 3)), uniform_support((0, 1, 2))]
    if ring.modulus:
        dists.append(field_uniform(ring))
    for trial in range(12):
        n = rng.randint(2, 4)
        a, b, c = random_unequal_triple(rng, n, ring)
        for dist in dists:
            expected = brute_fap(a, b, c, dist.support, dist.probs)
            got = exact_false_accept_probability(a, b, c, dist)
            assert got == expected


def test_exact_fap_never_exceeds_p_max():
    rng = random.Random(55)
    for trial in range(20):
        ring = [INT64, ZP5][trial % 2]
        a, b, c = random_unequal_triple(rng, rng.randint(2, 4), ring)
        for dist in (U01, bernoulli(Fraction(1, 5)), uniform_support((0, 1, 2, 3))):
            assert exact_false_accept_probability(a, b, c, dist) <= p_max(dist)


def test_enumeration_chunking_does_not_change_the_answer(monkeypatch):
    rng = random.Random(77)
    a, b, c = random_unequal_triple(rng, 4, INT64)
    dist = uniform_support((0, 1, 2))
    whole = exact_false_accept_probability(a, b, c, dist)
    monkeypatch.setattr(analysis_mod, "_ENUM_CHUNK", 7)
    chunked = exact_false_accept_probability(a, b, c, dist)
    assert whole == chunked


# ---------------------------------------------------------------- preconditions


def test_equal_instance_is_rejected_up_front():
    a, b, _ = random_unequal_triple(random.Random(1), 3, INT64)
    c = matmul(a, b)
    with pytest.raises(InstanceActuallyEqual):
        exact_false_accept_probability(a, b, c, U01)
    with pytest.raises(InstanceActuallyEqual):
        empirical_false_accept_rate(a, b, c, U01, 100)


def test_budget_is_enforced_on_the_full_space():
    # 2^30 raw vectors exceed the default budget even though the reduced
    # enumeration would be tiny; the precondition is on n itself.
    n = 30
    e_rows = [[0] * n for _ in range(n)]
    e_rows[0][0] = 1
    a, b, c = _triple_with_error(e_rows, INT64)
    with pytest.raises(BudgetExceeded) as err:
        exact_false_accept_probability(a, b, c, U01)
    assert "largest enumerable n is 24" in str(err.value)
    # a raised budget lets the same call through
    assert exact_false_accept_probability(a, b, c, U01, budget=1 << 30) == Fraction(1, 2)


def test_trials_must_be_positive():
    a, b, c = random_unequal_triple(random.Random(2), 3, INT64)
    with pytest.raises(ConfigInvalid):
        empirical_false_accept_rate(a, b, c, U01, 0)


# ---------------------------------------------------------------- empirical rates


def test_empirical_trials_match_the_per_iteration_experiment():
    # The batched trial engine must agree decision-for-decision with running
    # the verifier's single iteration on the same substreams.
    rng = random.Random(13)
    for ring in (INT64, ZP5):
        a, b, c = random_unequal_triple(rng, 4, ring)
        trials, seed = 500, 42
        hits = 0
        for t in range(trials):
            r = sample_vector(U01, 4, substream(seed, t), ring)
            ok, _ = freivalds_iteration(a, b, c, r)
            hits += int(ok)
        report = empirical_false_accept_rate(a, b, c, U01, trials, seed)
        assert report.empirical.rate == hits / trials


def test_trial_chunking_does_not_change_the_answer(monkeypatch):
    a, b, c = random_unequal_triple(random.Random(3), 4, INT64)
    whole = empirical_false_accept_rate(a, b, c, U01, 1000, seed=9)
    monkeypatch.setattr(analysis_mod, "_TRIAL_CHUNK", 64)
    chunked = empirical_false_accept_rate(a, b, c, U01, 1000, seed=9)
    assert whole == chunked


def test_empirical_interval_contains_exact_value():
    rng = random.Random(2718)
    for trial in range(6):
        ring = ZP5 if trial % 2 else INT64
        a, b, c = random_unequal_triple(rng, 4, ring)
        dist = [U01, uniform_support((0, 1, 2)), bernoulli(Fraction(1, 4))][trial % 3]
        exact = exact_false_accept_probability(a, b, c, dist)
        report = empirical_false_accept_rate(a, b, c, dist, 30_000, seed=trial)
        lo, hi = report.empirical.ci99
        assert lo <= float(exact) <= hi
        assert report.per_iteration_bound == p_max(dist)


def test_report_carries_the_profile():
    a, b, c = _triple_with_error([[0, 5], [0, 0]], INT64)
    report = empirical_false_accept_rate(a, b, c, U01, 100, seed=0)
    assert report.instance_profile.differing_columns == (1,)
    assert report.instance_profile.differing_entries == 1
    assert report.instance_profile.difference_rank == 1


# ---------------------------------------------------------------- Wilson interval


def test_wilson_interval_known_value():
    # Independently written formula at z = 2.5758293035489004, h=500, t=1000.
    import math

    z = 2.5758293035489004
    phat, t = 0.5, 1000
    denom = 1 + z * z / t
    center = (phat + z * z / (2 * t)) / denom
    half = z * math.sqrt(phat * (1 - phat) / t + z * z / (4 * t * t)) / denom
    lo, hi = wilson_interval(500, 1000)
    assert lo == pytest.approx(center - half, abs=1e-15)
    assert hi == pytest.approx(center + half, abs=1e-15)


def test_wilson_interval_boundaries():
    lo, hi = wilson_interval(0, 50)
    assert lo == 0.0 and 0.0 < hi < 0.25
    lo, hi = wilson_interval(50, 50)
    assert hi == 1.0 and 0.75 < lo < 1.0
    with pytest.raises(ValueError):
        wilson_interval(1, 0)
    with pytest.raises(ValueError):
        wilson_interval(5, 4)


def test_wilson_interval_contains_the_point_estimate():
    for hits, trials in [(0, 10), (3, 10), (250, 1000), (999, 1000), (7, 7)]:
        lo, hi = wilson_interval(hits, trials)
        assert lo <= hits / trials <= hi


# ---------------------------------------------------------------- profiles


def test_profiles_by_construction():
    a, b, c = _triple_with_error([[0, 0, 0], [0, 4, 0], [0, 0, 0]], INT64)
    prof = difference_profile(a, b, c)
    assert prof.differing_columns == (1,)
    assert prof.differing_entries == 1
    assert prof.difference_rank == 1
    assert prof.y_size == 1

    a, b, c = _triple_with_error([[1, 0, 2], [0, 0, 0], [3, 0, 6]], INT64)
    prof = difference_profile(a, b, c)
    assert prof.differing_columns == (0, 2)
    assert prof.differing_entries == 4
    assert prof.difference_rank == 1  # second column is twice the first

    a, b, c = _triple_with_error([[1, 0], [0, 1]], INT64)
    assert difference_profile(a, b, c).difference_rank == 2

    # mod-p rank: [[1, 2], [2, 4]] has rank 1 over Z_5
    a, b, c = _triple_with_error([[1, 2], [2, 4]], ZP5)
    assert difference_profile(a, b, c).difference_rank == 1
    # ... but [[1, 2], [2, 3]] has determinant -1 = 4, rank 2
    a, b, c = _triple_with_error([[1, 2], [2, 3]], ZP5)
    assert difference_profile(a, b, c).difference_rank == 2


def test_equal_products_profile_cleanly():
    a, b, _ = random_unequal_triple(random.Random(4), 3, INT64)
    c = matmul(a, b)
    prof = difference_profile(a, b, c)
    assert prof.differing_columns == ()
    assert prof.differing_entries == 0
    assert prof.difference_rank == 0


def test_rank_is_skipped_beyond_the_size_limit():
    n = 65  # one past the exact-rank cutoff
    a, b, c = generate_instance(InstanceSpec(n, INT64, "single-entry", 8, entry_bound=4))
    prof = difference_profile(a, b, c)
    assert prof.differing_entries == 1
    assert prof.difference_rank is None


# ---------------------------------------------------------------- generation


def test_generation_is_deterministic():
    spec = InstanceSpec(6, ZP5, "rank-one", 99)
    first = generate_instance(spec)
    second = generate_instance(spec)
    for x, y in zip(first, second):
        assert mats_equal(x, y)


def test_generation_modes_meet_their_contracts():
    for seed in range(25):
        for ring in (INT64, ZP5):
            for mode, check in [
                ("equal", lambda p: p.differing_entries == 0),
                ("single-entry", lambda p: p.differing_entries == 1 and p.y_size == 1),
                ("single-column", lambda p: p.y_size == 1),
                ("rank-one", lambda p: p.difference_rank == 1),
                ("dense-random", lambda p: p.y_size >= 1),
            ]:
                n = 2 + seed % 7
                a, b, c = generate_instance(InstanceSpec(n, ring, mode, seed))
                assert check(difference_profile(a, b, c)), (mode, ring, seed)


def test_generation_seed_changes_the_instance():
    a1, _, _ = generate_instance(InstanceSpec(5, INT64, "dense-random", 0))
    a2, _, _ = generate_instance(InstanceSpec(5, INT64, "dense-random", 1))
    assert not mats_equal(a1, a2)


def test_generation_entry_ranges():
    a, b, c = generate_instance(InstanceSpec(8, INT64, "dense-random", 3, entry_bound=5))
    for m in (a, b):
        assert int(m.data.min()) >= -5
        assert int(m.data.max()) <= 5
    az, bz, cz = generate_instance(InstanceSpec(8, ZP5, "dense-random", 3))
    for m in (az, bz, cz):
        assert int(m.data.min()) >= 0
        assert int(m.data.max()) <= 4


def test_instance_spec_validation():
    with pytest.raises(ConfigInvalid):
        InstanceSpec(0, INT64, "equal", 0)
    with pytest.raises(ConfigInvalid):
        InstanceSpec(3, INT64, "zero-out", 0)
    with pytest.raises(ConfigInvalid):
        InstanceSpec(3, INT64, "equal", 0, entry_bound=0)


# ---------------------------------------------------------------- composition


def test_analyze_instance_composes_the_pieces():
    a, b, c = _triple_with_error([[2, 0], [0, 0]], INT64)
    report = analyze_instance(a, b, c, U01, exact=True, trials=5000, seed=5)
    assert report.exact_fap == Fraction(1, 2)
    assert report.per_iteration_bound == Fraction(1, 2)
    assert report.instance_profile.y_size == 1
    lo, hi = report.empirical.ci99
    assert lo <= 0.5 <= hi
    bare = analyze_instance(a, b, c, U01)
    assert bare.exact_fap is None and bare.empirical is None
