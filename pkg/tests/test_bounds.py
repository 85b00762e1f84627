import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import random_complex
from oblix.bounds import (
    IndexSet,
    TailRule,
    bental_teboulle,
    complex_cone_duality,
    enumerate_JA,
    enumeration_cap,
    equi2_check,
    k_constant_from_angles,
    m_I,
    semidefinite_limit_check,
    stewart_oleary,
    truncation_growth,
)
from oblix.exceptions import InvalidInput, NotFullRank, TooLarge
from oblix.linalg import Subspace
from oblix.oblique import DiagonalWeight, weighted_projection

R2 = 1 / math.sqrt(2)
line = Subspace.span(np.array([[1.0], [1.0]]))
seeds = st.integers(0, 2**32 - 1)


def random_subspace(seed, max_dim=7):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(2, max_dim + 1))
    k = int(rng.integers(1, m))
    return Subspace.span(random_complex(rng, m, k)), rng


def test_index_set():
    J = IndexSet(4, (0, 2))
    assert len(J) == 2 and list(J) == [0, 2]
    assert J.complement().indices == (1, 3)
    assert IndexSet.of(4, [2, 0, 2]).indices == (0, 2)
    with pytest.raises(InvalidInput):
        IndexSet(4, (2, 0))
    with pytest.raises(InvalidInput):
        IndexSet(4, (1, 1))
    with pytest.raises(InvalidInput):
        IndexSet(2, (0, 2))
    assert J.subspace().dim == 2
    np.testing.assert_array_equal(J.weight().entries, [1, 0, 1, 0])


def test_enumeration_cap(monkeypatch):
    monkeypatch.delenv("OBLIX_ENUM_CAP", raising=False)
    assert enumeration_cap() == 20
    monkeypatch.setenv("OBLIX_ENUM_CAP", "64")
    assert enumeration_cap() == 6
    monkeypatch.setenv("OBLIX_ENUM_CAP", str(2**30))
    assert enumeration_cap() == 20
    monkeypatch.setenv("OBLIX_ENUM_CAP", "8")
    with pytest.raises(TooLarge):
        stewart_oleary(Subspace.coordinate(4, [0]), samples=0)
    with pytest.raises(TooLarge):
        enumerate_JA(np.ones((4, 1)))
    monkeypatch.setenv("OBLIX_ENUM_CAP", "lots")
    with pytest.raises(InvalidInput):
        enumeration_cap()


def test_cap_default_rejects_large_problems():
    with pytest.raises(TooLarge):
        enumerate_JA(np.ones((21, 1)))


def test_enumerate_examples():
    assert [q.indices for q in enumerate_JA([[1.0], [1.0]])] == [(0,), (1,)]
    assert [q.indices for q in enumerate_JA(np.eye(3))] == [(0, 1, 2)]
    A = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]
    assert [q.indices for q in enumerate_JA(A)] == [(0, 1), (0, 2), (1, 2)]
    assert [q.indices for q in enumerate_JA([[1.0, 0], [0, 1], [0, 0]])] == [(0, 1)]
    with pytest.raises(NotFullRank):
        enumerate_JA([[1.0, 1.0], [1.0, 1.0]])


def test_hull_examples():
    hull = bental_teboulle([[1.0], [1.0]], [1.0, 2.0])
    np.testing.assert_allclose(hull.weights, [1 / 3, 2 / 3], atol=1e-15)
    np.testing.assert_allclose(hull.members[0].projection.matrix, [[1, 0], [1, 0]])
    np.testing.assert_allclose(hull.members[1].projection.matrix, [[0, 1], [0, 1]])
    np.testing.assert_allclose(hull.combination(), np.array([[1, 2], [1, 2]]) / 3, atol=1e-15)
    hull = bental_teboulle(np.eye(3), np.ones(3))
    assert len(hull.members) == 1 and hull.weights[0] == 1.0
    with pytest.raises(InvalidInput):
        bental_teboulle([[1.0], [1.0]], DiagonalWeight.semidefinite([1.0, 0.0]))


@given(seeds)
def test_hull_property(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(2, 7))
    n = int(rng.integers(1, min(m, 4) + 1))
    A = random_complex(rng, m, n)
    d = np.exp(rng.uniform(np.log(1e-4), np.log(1e4), m))
    hull = bental_teboulle(A, d)
    w = hull.weights
    assert np.all(w > 0)
    assert abs(math.fsum(w) - 1) <= 1e-12
    target = weighted_projection(A, d).matrix
    assert np.linalg.norm(target - hull.combination(), 2) <= 1e-8
    ref = oracles.hull_weights(A, d)
    for mb in hull.members:
        assert mb.weight == pytest.approx(ref[mb.index_set.indices], rel=1e-8, abs=1e-300)


def test_hull_weights_survive_wide_ranges():
    rng = np.random.default_rng(3)
    A = random_complex(rng, 14, 7)
    d = np.exp(rng.uniform(np.log(1e-150), np.log(1e150), 14))
    w = bental_teboulle(A, d).weights
    assert np.all(np.isfinite(w)) and abs(math.fsum(w) - 1) <= 1e-12


def test_m_I_examples():
    assert m_I(line, [0]) == pytest.approx(R2, abs=1e-15)
    assert m_I(Subspace.coordinate(2, [0]), [0]) == 1.0
    assert m_I(Subspace.coordinate(2, [0]), [1]) == math.inf
    with pytest.raises(InvalidInput):
        m_I(line, [])


def test_stewart_examples():
    rep = stewart_oleary(line, samples=0)
    assert rep.max_over_Q == pytest.approx(math.sqrt(2), abs=1e-14)
    assert rep.min_mI == pytest.approx(R2, abs=1e-14)
    assert math.isnan(rep.sup_estimate)
    assert stewart_oleary(Subspace.coordinate(3, [1]), samples=0).max_over_Q == pytest.approx(1.0)
    S, _ = random_subspace(11, 5)
    rep = stewart_oleary(S, samples=500, seed=4)
    assert rep.sup_estimate <= rep.max_over_Q + 1e-8
    d = rep.to_dict()
    assert set(d) == {"max_over_Q", "min_mI", "K", "sup_sampled", "samples", "seed", "witness_Q", "witness_I"}


def test_stewart_requires_seed_and_nonzero_subspace():
    with pytest.raises(InvalidInput):
        stewart_oleary(line, samples=10)
    with pytest.raises(InvalidInput):
        stewart_oleary(Subspace.zero(3), samples=0)


def test_stewart_is_reproducible():
    S, _ = random_subspace(5)
    a = stewart_oleary(S, samples=300, seed=9)
    b = stewart_oleary(S, samples=300, seed=9)
    assert a == b


@given(seeds)
def test_stewart_identity_against_oracles(seed):
    S, _ = random_subspace(seed)
    rep = stewart_oleary(S, samples=64, seed=seed)
    assert abs(rep.max_over_Q * rep.min_mI - 1) <= 1e-8
    assert abs(rep.max_over_Q - oracles.max_diagonal_projection_norm(S.basis)) <= 1e-8 * rep.max_over_Q
    assert abs(rep.min_mI - oracles.min_mI_eig(S.basis)) <= 1e-8
    assert rep.sup_estimate <= rep.max_over_Q + 1e-8


@given(seeds)
def test_compatibility_constant_from_angles(seed):
    S, _ = random_subspace(seed, 6)
    K, _ = k_constant_from_angles(S)
    assert abs(K - stewart_oleary(S, samples=0).K_constant) <= 1e-8 * K
    Kc, _ = k_constant_from_angles(S.complement())
    assert abs(K - Kc) <= 1e-8 * K


def test_semidefinite_limit_examples():
    assert semidefinite_limit_check(line, np.ones(2))
    rep = semidefinite_limit_check(line, [1.0, 0.0])
    assert rep and rep.semidefinite_norm == pytest.approx(math.sqrt(2), abs=1e-12)
    assert semidefinite_limit_check(line, np.zeros(2))
    with pytest.raises(InvalidInput):
        semidefinite_limit_check(line, [1.0, -1.0])


@given(seeds)
def test_semidefinite_limit_random(seed):
    S, rng = random_subspace(seed, 5)
    d0 = rng.uniform(0.1, 2.0, S.ambient_dim)
    d0[rng.random(S.ambient_dim) < 0.4] = 0.0
    assert semidefinite_limit_check(S, d0)


def test_duality_examples():
    rep = complex_cone_duality(np.array([[1.0], [0.0]]), 2.0, samples=50, seed=1)
    assert rep.chi_A == pytest.approx(1.0) and rep.chi_Z == pytest.approx(1.0)
    A = random_complex(np.random.default_rng(2), 4, 2)
    rep = complex_cone_duality(A, 1.0, samples=500, seed=3)
    assert rep.max_discrepancy <= 1e-7 and rep.accepted + rep.rejected == 500
    rep = complex_cone_duality(A, 0.0, samples=100, seed=3)
    assert rep.literal_inverse_gap <= 1e-7
    with pytest.raises(InvalidInput):
        complex_cone_duality(A, -1.0, samples=1, seed=1)
    with pytest.raises(InvalidInput):
        complex_cone_duality(A, 1.0, samples=10)
    with pytest.raises(InvalidInput):
        complex_cone_duality(np.eye(2), 1.0, samples=1, seed=1)


@given(seeds, st.sampled_from([0.0, 0.3, 1.0, 4.0]))
def test_duality_per_sample(seed, mu):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(2, 6))
    A = random_complex(rng, m, int(rng.integers(1, m)))
    rep = complex_cone_duality(A, mu, samples=20, seed=seed)
    assert rep.max_discrepancy <= 1e-7


def test_tail_rules():
    np.testing.assert_allclose(TailRule().vector(3), np.array([1, 0.5, 0.25]) / math.sqrt(1.3125))
    np.testing.assert_array_equal(TailRule("e1").vector(4), [1, 0, 0, 0])
    assert TailRule("finite", values=(1, 2, 0)).support == 2
    assert TailRule().support is None
    with pytest.raises(InvalidInput):
        TailRule("geometric", ratio=1.0)
    with pytest.raises(InvalidInput):
        TailRule("finite", values=(0, 0))
    with pytest.raises(InvalidInput):
        TailRule("finite", values=(0, 1)).vector(1)
    assert TailRule.from_dict({"rule": "geometric", "ratio": 0.25}).ratio == 0.25


def test_truncation_examples():
    assert [p.K for p in truncation_growth(TailRule("e1"), range(1, 7))] == [1.0] * 6
    geo = truncation_growth(TailRule(), range(2, 9))
    assert all(b.K > a.K for a, b in zip(geo, geo[1:]))
    for p in geo:
        assert p.K == pytest.approx(oracles.geometric_K(p.m), rel=1e-12)
    fin = truncation_growth(TailRule("finite", values=(3.0, -1.0, 2.0)), range(3, 9))
    assert max(p.K for p in fin) - min(p.K for p in fin) <= 1e-12
    assert fin[0].K == pytest.approx(oracles.finite_K((3, -1, 2), 3), rel=1e-12)
    with pytest.raises(InvalidInput):
        truncation_growth(TailRule(), [0])


def test_equi2_examples():
    rep = equi2_check(Subspace.coordinate(3, [0]))
    assert rep.ok and rep.sup_all == rep.sup_finite == rep.sup_avoiding == 0.0
    rep = equi2_check(line)
    assert rep.ok
    assert rep.sup_avoiding == pytest.approx(R2, abs=1e-14)
    assert rep.K_from_angles == pytest.approx(math.sqrt(2), abs=1e-12)


@given(seeds)
def test_equi2_random(seed):
    S, _ = random_subspace(seed, 6)
    rep = equi2_check(S)
    assert rep.ok
    assert rep.sup_avoiding <= rep.sup_all
    assert rep.worst_lower_slack >= -1e-10 and rep.worst_upper_slack >= -1e-10
