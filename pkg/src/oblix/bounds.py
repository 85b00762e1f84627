"""Diagonal projections, scaled-projection suprema and compatibility constants.

Everything here is exact enumeration over subsets of the coordinate basis,
vectorised with stacked ``numpy.linalg`` calls. Problem size is capped by
:func:`enumeration_cap`.
"""

from __future__ import annotations

import itertools
import logging
import math
import os
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .exceptions import (
    IdentityViolation,
    InvalidInput,
    NotFullRank,
    NumericalUnderflow,
    SingularGram,
    TooLarge,
)
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    as_matrix,
    nullspace,
    numerical_rank,
    operator_norm,
    orthonormal_range,
)
from .oblique import (
    DiagonalWeight,
    ObliqueProjection,
    distinguished_projection,
    ljance_ptak_norm,
    weighted_projection,
)
from .subspace import INTERSECTION_TOL, angle_pair, gamma_sandwich

__all__ = [
    "MAX_ENUM_DIM",
    "enumeration_cap",
    "IndexSet",
    "HullMember",
    "HullDecomposition",
    "BoundReport",
    "LimitReport",
    "DualityReport",
    "GrowthPoint",
    "Equi2Report",
    "TailRule",
    "enumerate_JA",
    "coordinate_projection",
    "bental_teboulle",
    "m_I",
    "stewart_oleary",
    "k_constant_from_angles",
    "sample_positive_weights",
    "sample_cone_weights",
    "semidefinite_limit_check",
    "complex_cone_duality",
    "truncation_growth",
    "equi2_check",
]

log = logging.getLogger(__name__)

MAX_ENUM_DIM = 20
_CHUNK = 4096


def enumeration_cap():
    """Largest ambient dimension allowed for exhaustive subset enumeration.

    ``OBLIX_ENUM_CAP`` gives a maximum number of subsets and can only lower
    the default of ``2**20``.
    """
    raw = os.environ.get("OBLIX_ENUM_CAP")
    if raw is None or raw.strip() == "":
        return MAX_ENUM_DIM
    try:
        subsets = int(raw)
    except ValueError:
        raise InvalidInput(f"OBLIX_ENUM_CAP must be an integer, got {raw!r}") from None
    if subsets < 1:
        raise InvalidInput("OBLIX_ENUM_CAP must be positive")
    return min(MAX_ENUM_DIM, int(math.floor(math.log2(subsets))))


def _check_cap(m):
    cap = enumeration_cap()
    if m > cap:
        raise TooLarge(f"ambient dimension {m} exceeds the enumeration cap {cap}")


@dataclass(frozen=True)
class IndexSet:
    """A sorted subset of ``{0, ..., ambient_dim - 1}``."""

    ambient_dim: int
    indices: tuple

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise InvalidInput(f"indices must be sorted and distinct: {idx}")
        if idx and (idx[0] < 0 or idx[-1] >= self.ambient_dim):
            raise InvalidInput(f"indices {idx} out of range for dimension {self.ambient_dim}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def of(cls, ambient_dim, indices):
        return cls(ambient_dim, tuple(sorted(set(int(i) for i in indices))))

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def complement(self):
        rest = sorted(set(range(self.ambient_dim)) - set(self.indices))
        return IndexSet(self.ambient_dim, tuple(rest))

    def subspace(self, tol=DEFAULT_TOL):
        return Subspace.coordinate(self.ambient_dim, self.indices, tol)

    def weight(self):
        return DiagonalWeight.projection(self.ambient_dim, self.indices)


def _combos(m, size):
    if size == 0:
        return np.zeros((1, 0), dtype=np.intp)
    flat = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(m), size)),
        dtype=np.intp,
    )
    return flat.reshape(-1, size)


def _chunks(combos):
    for start in range(0, combos.shape[0], _CHUNK):
        yield combos[start:start + _CHUNK]


def _row_singular_values(U, combos):
    """Singular values of ``U[combo]`` for every row combination, stacked."""
    for chunk in _chunks(combos):
        yield chunk, np.linalg.svd(U[chunk], compute_uv=False)


def _min_nonzero(s, cutoff):
    masked = np.where(s > cutoff, s, np.inf)
    return masked.min(axis=-1)


def _require_full_column_rank(A, tol):
    m, n = A.shape
    if n == 0 or n > m or numerical_rank(A, tol) < n:
        raise NotFullRank(f"A ({m}x{n}) is not of full column rank")


def enumerate_JA(A, tol=DEFAULT_TOL):
    """Row subsets ``Q`` with ``|Q| = n`` and ``det(A_Q) != 0``.

    The determinant test (``|det A_Q| > rel_rank * prod(sigma(A))``, in log
    space) is cross-checked against position P' of ``R(Q)`` and ``R(A)``,
    which for a coordinate subspace reduces to the smallest singular value of
    the selected rows of an orthonormal basis of ``R(A)``.

    Raises
    ------
    IdentityViolation
        If the two tests disagree on some subset.
    """
    A = as_matrix(A, "A")
    m, n = A.shape
    _check_cap(m)
    _require_full_column_rank(A, tol)
    U = orthonormal_range(A, tol).basis
    log_scale = float(np.sum(np.log(np.linalg.svd(A, compute_uv=False))))
    threshold = np.log(tol.rel_rank) + log_scale
    out = []
    for chunk in _chunks(_combos(m, n)):
        _, logdet = np.linalg.slogdet(A[chunk])
        by_det = logdet > threshold
        by_angle = np.linalg.svd(U[chunk], compute_uv=False)[:, -1] > INTERSECTION_TOL
        bad = np.flatnonzero(by_det != by_angle)
        if bad.size:
            q = tuple(int(i) for i in chunk[bad[0]])
            raise IdentityViolation(
                "bijectivity-vs-position-P'",
                f"determinant and angle tests disagree on rows {q}",
                {"rows": q},
            )
        out.extend(IndexSet(m, tuple(int(i) for i in row)) for row in chunk[by_det])
    return out


def coordinate_projection(A, Q, tol=DEFAULT_TOL):
    """``A (QA)^{-1} Q``: the projection onto ``R(A)`` along ``N(Q)``."""
    A = as_matrix(A, "A")
    m, n = A.shape
    idx = list(Q)
    if len(idx) != n:
        raise InvalidInput(f"|Q| = {len(idx)} differs from rank {n}")
    P = np.zeros((m, m), dtype=np.complex128)
    P[:, idx] = A @ np.linalg.inv(A[idx])
    rest = [i for i in range(m) if i not in set(idx)]
    return ObliqueProjection(
        P, orthonormal_range(A, tol), Subspace.coordinate(m, rest, tol)
    )


@dataclass(frozen=True, eq=False)
class HullMember:
    index_set: IndexSet
    weight: float
    projection: ObliqueProjection


@dataclass(frozen=True, eq=False)
class HullDecomposition:
    """Convex combination of coordinate projections reproducing a scaled projection."""

    members: list

    @property
    def weights(self):
        return np.array([mb.weight for mb in self.members])

    def combination(self):
        return sum(mb.weight * mb.projection.matrix for mb in self.members)


def bental_teboulle(A, D, tol=DEFAULT_TOL):
    """Write ``A (A^* D A)^{-1} A^* D`` as a convex combination of ``A (QA)^{-1} Q``.

    Weights ``det(D_Q) |det A_Q|^2 / sum`` are formed in log space and
    normalised by the largest log weight before exponentiation.

    Raises
    ------
    NumericalUnderflow
        If the normalising sum is not a positive finite number.
    """
    A = as_matrix(A, "A")
    W = D if isinstance(D, DiagonalWeight) else DiagonalWeight.positive_definite(D)
    if W.kind != "positive_definite":
        raise InvalidInput("the hull decomposition needs positive definite weights")
    if W.dim != A.shape[0]:
        raise InvalidInput(f"weight has {W.dim} entries, A has {A.shape[0]} rows")
    members = enumerate_JA(A, tol)
    logd = np.log(W.entries.real)
    rows = np.array([q.indices for q in members], dtype=np.intp)
    _, logdet = np.linalg.slogdet(A[rows])
    logw = logd[rows].sum(axis=1) + 2.0 * logdet
    w = np.exp(logw - logw.max())
    total = math.fsum(w)
    if not np.isfinite(total) or total <= 0.0:
        raise NumericalUnderflow("hull weights do not normalise")
    w = w / total
    return HullDecomposition(
        [
            HullMember(q, float(wq), coordinate_projection(A, q.indices, tol))
            for q, wq in zip(members, w)
        ]
    )


def m_I(S, I, tol=DEFAULT_TOL):
    """Smallest nonzero singular value of the rows ``I`` of the basis of ``S``.

    Returns ``inf`` when those rows vanish.
    """
    idx = list(I)
    if not idx:
        raise InvalidInput("I must be nonempty")
    s = np.linalg.svd(S.basis[idx], compute_uv=False)
    if s.size == 0:
        return math.inf
    return float(_min_nonzero(s, tol.rel_rank))


@dataclass(frozen=True)
class BoundReport:
    """Stewart-O'Leary quantities for one subspace.

    ``sup_estimate`` is ``nan`` when no weights were sampled.
    """

    max_over_Q: float
    min_mI: float
    K_constant: float
    sup_estimate: float
    samples: int
    seed: Optional[int]
    witness_Q: tuple
    witness_I: tuple
    witness_D: Optional[tuple] = field(default=None, repr=False)

    def to_dict(self):
        d = asdict(self)
        d.pop("witness_D")
        d["K"] = d.pop("K_constant")
        d["sup_sampled"] = d.pop("sup_estimate")
        d["witness_Q"] = list(self.witness_Q)
        d["witness_I"] = list(self.witness_I)
        return d


def sample_positive_weights(rng, size, low=1e-6, high=1e6):
    """Independent log-uniform positive weights on ``[low, high]``."""
    return np.exp(rng.uniform(np.log(low), np.log(high), size=size))


def sample_cone_weights(rng, size, mu, low=1e-3, high=1e3):
    """Weights in ``|Im z| <= mu Re z`` with ``Re z`` log-uniform and ``Im z`` uniform."""
    re = np.exp(rng.uniform(np.log(low), np.log(high), size=size))
    im = rng.uniform(-1.0, 1.0, size=size) * mu * re
    return re + 1j * im


def _scaled_projection_norms(U, d):
    """``||P_{D,S}||`` for a stack of positive weight vectors ``d`` (rows)."""
    sq = np.sqrt(d)
    Q, _ = np.linalg.qr(sq[:, :, None] * U[None])
    P = (Q @ Q.conj().transpose(0, 2, 1)) * (sq[:, None, :] / sq[:, :, None])
    return np.linalg.svd(P, compute_uv=False)[:, 0]


def _rng_from(seed, rng, samples):
    if rng is not None:
        return rng
    if samples > 0 and seed is None:
        raise InvalidInput("a seed is required for sampled runs")
    return np.random.default_rng(seed)


def stewart_oleary(S, samples=2000, seed=None, rng=None, tol=None, atol=1e-8):
    """Supremum of ``||P_{D,S}||`` over positive diagonal weights, three ways.

    * ``max_over_Q``: maximum of ``||A (QA)^{-1} Q||`` over diagonal
      projections ``Q`` in position P' with ``S`` (here ``A`` is the
      orthonormal basis of ``S``);
    * ``min_mI``: minimum of :func:`m_I` over every nonempty row subset;
    * ``sup_estimate``: maximum of ``||P_{D,S}||`` over ``samples``
      log-uniform weights on ``[1e-6, 1e6]``.

    Raises
    ------
    IdentityViolation
        If ``max_over_Q * min_mI`` differs from 1 by more than ``atol``, or a
        sampled norm exceeds ``max_over_Q + atol``.
    """
    tol = S.tol if tol is None else tol
    m, k = S.ambient_dim, S.dim
    _check_cap(m)
    if k == 0:
        raise InvalidInput("the zero subspace has no scaled projections")
    U = S.basis

    best_q, witness_q = 0.0, None
    for chunk in _chunks(_combos(m, k)):
        UQ = U[chunk]
        smin = np.linalg.svd(UQ, compute_uv=False)[:, -1]
        ok = smin > INTERSECTION_TOL
        if not np.any(ok):
            continue
        # Explicit A (QA)^{-1} restricted to R(Q); its norm is ||P_{Q,S}||.
        norms = np.linalg.svd(U[None] @ np.linalg.inv(UQ[ok]), compute_uv=False)[:, 0]
        j = int(np.argmax(norms))
        if norms[j] > best_q:
            best_q, witness_q = float(norms[j]), tuple(int(i) for i in chunk[ok][j])
    if witness_q is None:
        raise IdentityViolation("stewart-oleary", "no diagonal projection in position P'")
    # The Ljance-Ptak route must agree on the maximiser.
    lp = ljance_ptak_norm(coordinate_projection(U, witness_q, tol))
    if abs(lp - best_q) > atol * max(1.0, best_q):
        raise IdentityViolation(
            "ljance-ptak", f"||P|| = {best_q!r} but angle formula gives {lp!r}",
            {"Q": witness_q},
        )

    best_i, witness_i = math.inf, None
    for size in range(1, m + 1):
        for chunk, s in _row_singular_values(U, _combos(m, size)):
            vals = _min_nonzero(s, tol.rel_rank)
            j = int(np.argmin(vals))
            if vals[j] < best_i:
                best_i, witness_i = float(vals[j]), tuple(int(i) for i in chunk[j])

    if abs(best_q * best_i - 1.0) > atol:
        raise IdentityViolation(
            "stewart-oleary",
            f"max_Q ||P_Q|| = {best_q!r} but 1/min m_I = {1 / best_i!r}",
            {"witness_Q": witness_q, "witness_I": witness_i},
        )

    rng = _rng_from(seed, rng, samples)
    sup, witness_d = math.nan, None
    if samples > 0:
        sup = 0.0
        for start in range(0, samples, 512):
            d = sample_positive_weights(rng, (min(512, samples - start), m))
            norms = _scaled_projection_norms(U, d)
            j = int(np.argmax(norms))
            if norms[j] > sup:
                sup, witness_d = float(norms[j]), tuple(float(x) for x in d[j])
        if sup > best_q + atol:
            raise IdentityViolation(
                "sampling-below-enumeration",
                f"sampled ||P_D|| = {sup!r} exceeds max_Q = {best_q!r}",
                {"D": witness_d},
            )
    return BoundReport(
        max_over_Q=best_q,
        min_mI=best_i,
        K_constant=best_q,
        sup_estimate=sup,
        samples=int(samples),
        seed=seed,
        witness_Q=witness_q,
        witness_I=witness_i,
        witness_D=witness_d,
    )


def k_constant_from_angles(S):
    """``(1 - sup_J c[S, H_J]^2)^{-1/2}`` over all coordinate subspaces ``H_J``.

    Evaluated as ``1 / min_J s[S, H_J]`` with sines computed directly.
    Returns ``(K, witness J)``.
    """
    m = S.ambient_dim
    _check_cap(m)
    best, witness = 1.0, ()
    for size in range(1, m):
        for J in itertools.combinations(range(m), size):
            s = angle_pair(S, Subspace.coordinate(m, J, S.tol)).friedrichs_sin
            if s < best:
                best, witness = s, J
    return 1.0 / best, witness


@dataclass(frozen=True)
class LimitReport:
    ok: bool
    ks: tuple
    norms: tuple
    semidefinite_norm: float
    stewart_bound: float
    final_gap: float

    def __bool__(self):
        return self.ok


MAX_LIMIT_K = 1e14


def _decades(start=1.0):
    k = start
    while k <= MAX_LIMIT_K:
        yield k
        k *= 10.0


def semidefinite_limit_check(S, D0, ks=None, atol=1e-6, tol=None):
    """Approach a semidefinite weight by ``D0 + I/k`` and compare norms.

    Passes when ``||P_{D0 + I/k, S}||`` ends within ``atol`` of
    ``||P_{D0,S}||`` (block formula) and never exceeds the Stewart bound.
    The gap shrinks like ``C/k`` with ``C`` depending on ``(S, D0)``, so by
    default ``k`` runs through ``1, 10, 100, ...`` until the gap is within
    ``atol`` or ``k`` passes ``MAX_LIMIT_K``. An explicit ``ks`` is used as
    given.
    """
    tol = S.tol if tol is None else tol
    d0 = D0.entries.real if isinstance(D0, DiagonalWeight) else np.asarray(D0, dtype=float)
    if d0.shape != (S.ambient_dim,):
        raise InvalidInput(f"D0 needs {S.ambient_dim} entries")
    if np.any(d0 < 0):
        raise InvalidInput("D0 must be positive semidefinite")
    target = distinguished_projection(DiagonalWeight.semidefinite(d0), S, tol).norm()
    bound = stewart_oleary(S, samples=0, tol=tol).max_over_Q
    used, norms = [], []
    for k in (_decades() if ks is None else ks):
        used.append(float(k))
        norms.append(
            weighted_projection(S.basis, DiagonalWeight.positive_definite(d0 + 1.0 / k), tol).norm()
        )
        if ks is None and abs(norms[-1] - target) <= atol and len(used) >= 4:
            break
    if not norms:
        raise InvalidInput("ks is empty")
    gap = abs(norms[-1] - target)
    ok = gap <= atol and max(norms) <= bound + 1e-8 and target <= bound + 1e-8
    return LimitReport(bool(ok), tuple(used), tuple(norms), target, bound, gap)


@dataclass(frozen=True)
class DualityReport:
    mu: float
    samples: int
    seed: Optional[int]
    accepted: int
    rejected: int
    max_discrepancy: float
    chi_A: float
    chi_Z: float
    literal_inverse_gap: float

    def to_dict(self):
        return asdict(self)


def complex_cone_duality(A, mu, samples=500, seed=None, rng=None, atol=1e-7, tol=DEFAULT_TOL):
    """Compare scaled projections of ``A`` and of a basis ``Z`` of ``R(A)^⊥``.

    Each sampled cone weight ``D`` is paired with ``E = (D^*)^{-1}``:
    ``||A (A^* D A)^{-1} A^* D|| = ||Z (Z^* E Z)^{-1} Z^* E||`` exactly, and
    ``D -> (D^*)^{-1}`` maps the cone onto itself, so the two suprema agree.
    ``literal_inverse_gap`` records the largest per-sample gap obtained with
    ``E = D^{-1}`` instead; it vanishes only for real weights.

    Samples whose Gram matrix is numerically singular are logged and skipped.

    Raises
    ------
    IdentityViolation
        If some accepted sample shows a gap above ``atol``.
    """
    A = as_matrix(A, "A")
    m, n = A.shape
    _require_full_column_rank(A, tol)
    if mu < 0:
        raise InvalidInput("mu must be >= 0")
    if n >= m:
        raise InvalidInput("R(A) must be a proper subspace")
    Z = nullspace(A.conj().T, tol).basis
    rng = _rng_from(seed, rng, samples)
    accepted = rejected = 0
    worst = literal = chi_a = chi_z = 0.0
    for i in range(samples):
        d = sample_cone_weights(rng, m, mu)
        try:
            lhs = weighted_projection(A, DiagonalWeight.mu_cone(d, mu), tol).norm()
            rhs = weighted_projection(Z, DiagonalWeight.mu_cone(1.0 / d.conj(), mu), tol).norm()
            alt = weighted_projection(Z, DiagonalWeight.mu_cone(1.0 / d, mu), tol).norm()
        except SingularGram:
            rejected += 1
            log.info("sample %d rejected: singular Gram matrix", i)
            continue
        accepted += 1
        gap = abs(lhs - rhs)
        if gap > atol:
            raise IdentityViolation(
                "complex-cone-duality",
                f"sample {i}: ||P_A|| = {lhs!r}, ||P_Z|| = {rhs!r}",
                {"D": [[float(z.real), float(z.imag)] for z in d], "mu": mu},
            )
        worst = max(worst, gap)
        literal = max(literal, abs(lhs - alt))
        chi_a, chi_z = max(chi_a, lhs), max(chi_z, rhs)
    return DualityReport(
        float(mu), int(samples), seed, accepted, rejected, worst, chi_a, chi_z, literal
    )


@dataclass(frozen=True)
class TailRule:
    """A vector sequence truncated to its first ``m`` entries.

    ``kind`` is ``"geometric"`` (entries ``ratio**j``), ``"e1"`` (first basis
    vector), or ``"finite"`` (the fixed ``values``, zero afterwards).
    """

    kind: str = "geometric"
    ratio: float = 0.5
    values: tuple = ()

    def __post_init__(self):
        if self.kind not in ("geometric", "e1", "finite"):
            raise InvalidInput(f"unknown rule {self.kind!r}")
        if self.kind == "geometric" and not 0.0 < abs(self.ratio) < 1.0:
            raise InvalidInput("geometric ratio must satisfy 0 < |ratio| < 1")
        if self.kind == "finite":
            vals = tuple(float(v) for v in self.values)
            if not vals or not any(vals):
                raise InvalidInput("finite rule needs at least one nonzero value")
            object.__setattr__(self, "values", vals)

    @property
    def support(self):
        """Length of the support, or ``None`` for an infinite tail."""
        if self.kind == "e1":
            return 1
        if self.kind == "finite":
            return max(i for i, v in enumerate(self.values) if v) + 1
        return None

    def vector(self, m):
        v = np.zeros(m)
        if self.kind == "geometric":
            v[:] = self.ratio ** np.arange(m)
        elif self.kind == "e1":
            v[0] = 1.0
        else:
            vals = self.values[:m]
            v[: len(vals)] = vals
        if not np.any(v):
            raise InvalidInput(f"rule {self.kind!r} truncates to zero at m = {m}")
        return v / np.linalg.norm(v)

    @classmethod
    def from_dict(cls, obj):
        kind = obj.get("rule", obj.get("kind", "geometric"))
        return cls(kind, float(obj.get("ratio", 0.5)), tuple(obj.get("values", ())))


@dataclass(frozen=True)
class GrowthPoint:
    m: int
    K: float
    min_mI: float


def _dims(dims):
    dims = [int(m) for m in dims]
    if not dims or min(dims) < 1:
        raise InvalidInput("dims must be positive integers")
    for m in dims:
        _check_cap(m)
    return dims


def truncation_growth(rule, dims, tol=DEFAULT_TOL):
    """Compatibility constant of ``span{v_m}`` for the truncations ``v_m`` of ``rule``.

    Bounded curves are expected exactly for finitely supported rules.
    """
    if not isinstance(rule, TailRule):
        rule = TailRule.from_dict(rule) if isinstance(rule, dict) else TailRule(rule)
    out = []
    for m in _dims(dims):
        S = Subspace(rule.vector(m)[:, None], tol)
        rep = stewart_oleary(S, samples=0, tol=tol)
        out.append(GrowthPoint(m, rep.K_constant, rep.min_mI))
    return out


@dataclass(frozen=True)
class Equi2Report:
    ok: bool
    sup_all: float
    sup_finite: float
    sup_avoiding: float
    K_from_angles: float
    sandwich_checked: int
    worst_lower_slack: float
    worst_upper_slack: float

    def to_dict(self):
        return asdict(self)


def equi2_check(S, slack=1e-10):
    """Suprema of ``c[S, H_J]`` over all ``J``, finite ``J`` and ``J`` with ``H_J ∩ S = 0``.

    Also checks the γ-sandwich with ``T = I - P_S`` (so ``N(T) = S``) on
    every ``H_J``.
    """
    m = S.ambient_dim
    _check_cap(m)
    T = np.eye(m) - S.projector()
    all_c, avoid_c = [], [0.0]
    lower_slack = upper_slack = math.inf
    checked = 0
    for size in range(0, m + 1):
        for J in itertools.combinations(range(m), size):
            H = Subspace.coordinate(m, J, S.tol)
            pair = angle_pair(S, H)
            all_c.append(pair.friedrichs_cos)
            if pair.intersection_dim == 0:
                avoid_c.append(pair.friedrichs_cos)
            if 0 < S.dim < m:
                sw = gamma_sandwich(T, H, S.tol)
                if not sw.degenerate:
                    checked += 1
                    lower_slack = min(lower_slack, sw.gamma_TP - sw.lower)
                    upper_slack = min(upper_slack, sw.upper - sw.gamma_TP)
    # Every J is finite here, so the first two suprema coincide by construction.
    sup_all = sup_finite = max(all_c)
    sup_avoid = max(avoid_c)
    ok = (
        sup_all == sup_finite
        and sup_avoid <= sup_all
        and lower_slack >= -slack
        and upper_slack >= -slack
    )
    K = 1.0 / math.sqrt(max(0.0, 1.0 - sup_all**2)) if sup_all < 1 else math.inf
    return Equi2Report(
        bool(ok), sup_all, sup_finite, sup_avoid, K, checked, lower_slack, upper_slack
    )
