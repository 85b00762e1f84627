"""Finite frames given by a synthesis matrix.

The frame vectors are the columns of ``T`` (``d x m``); the analysis operator
is ``T^*`` and the frame operator ``T T^*``. Subfamilies are selected by
coordinate subsets ``J`` of the coefficient space, so ``T P_J`` keeps the
columns in ``J`` and zeroes the rest.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass

import numpy as np

from .bounds import IndexSet, TailRule, _check_cap, _combos, _chunks, _dims, stewart_oleary
from .exceptions import IdentityViolation, InvalidInput, NotAFrame
from .linalg import DEFAULT_TOL, Subspace, as_matrix, nullspace, numerical_rank, operator_norm, reduced_min_modulus
from .subspace import gamma_sandwich

__all__ = [
    "FrameSystem",
    "FrameBounds",
    "EquivalenceReport",
    "TailPoint",
    "frame_bounds",
    "subset_bounds",
    "riesz_constant",
    "riesz_compatibility_equivalence",
    "frame_from_nullspace",
    "mercedes_benz",
    "nullspace_tail_experiment",
]


class FrameSystem:
    """A frame for ``C^d`` stored through its ``d x m`` synthesis matrix.

    Raises
    ------
    NotAFrame
        If ``m < d`` or the columns do not span ``C^d``.
    """

    __slots__ = ("synthesis", "tol")

    def __init__(self, synthesis, tol=DEFAULT_TOL):
        T = np.array(as_matrix(synthesis, "synthesis"))
        d, m = T.shape
        if d == 0 or m < d:
            raise NotAFrame(f"{m} vectors cannot span C^{d}")
        if numerical_rank(T, tol) < d:
            raise NotAFrame("frame vectors do not span the space")
        T.setflags(write=False)
        self.synthesis = T
        self.tol = tol

    @property
    def dim(self):
        return self.synthesis.shape[0]

    @property
    def size(self):
        return self.synthesis.shape[1]

    def analysis(self, x):
        """Frame coefficients ``<x, xi_k>`` of the vectors in the columns of ``x``."""
        return self.synthesis.conj().T @ x

    def __repr__(self):
        return f"FrameSystem(dim={self.dim}, size={self.size})"


@dataclass(frozen=True)
class FrameBounds:
    """Optimal frame constants. ``degenerate`` marks an empty subfamily span."""

    lower: float
    upper: float
    degenerate: bool = False


def frame_bounds(F):
    """Optimal bounds ``(gamma(T)^2, ||T||^2)``, cross-checked against ``eig(T T^*)``."""
    T = F.synthesis
    lower = reduced_min_modulus(T, F.tol) ** 2
    upper = operator_norm(T) ** 2
    ev = np.linalg.eigvalsh(T @ T.conj().T)
    if abs(ev[0] - lower) > F.tol.abs_eq * max(1.0, upper) or abs(ev[-1] - upper) > F.tol.abs_eq * max(1.0, upper):
        raise IdentityViolation(
            "frame-operator-extremes",
            f"eigenvalues ({ev[0]!r}, {ev[-1]!r}) vs ({lower!r}, {upper!r})",
        )
    return FrameBounds(lower, upper)


def subset_bounds(F, J):
    """Frame bounds of the columns in ``J`` for their own span.

    A subfamily of zero vectors gets the ``inf`` lower sentinel and is
    flagged degenerate.
    """
    idx = list(J)
    if not idx:
        raise InvalidInput("J must be nonempty")
    T = F.synthesis
    TJ = T[:, idx]
    scale = operator_norm(T)
    gamma = reduced_min_modulus(TJ, F.tol, scale=scale)
    upper = operator_norm(TJ) ** 2
    if math.isinf(gamma):
        return FrameBounds(math.inf, upper, True)
    return FrameBounds(gamma**2, upper)


def riesz_constant(F):
    """Smallest lower bound over all nonempty subfamilies, with a minimising ``J``."""
    T = F.synthesis
    m = F.size
    _check_cap(m)
    cutoff = F.tol.rel_rank * operator_norm(T)
    best, witness = math.inf, None
    for size in range(1, m + 1):
        for chunk in _chunks(_combos(m, size)):
            s = np.linalg.svd(T[:, chunk].transpose(1, 0, 2), compute_uv=False)
            vals = np.where(s > cutoff, s, np.inf).min(axis=-1)
            j = int(np.argmin(vals))
            if vals[j] < best:
                best, witness = float(vals[j]), tuple(int(i) for i in chunk[j])
    if witness is None:
        raise NotAFrame("every subfamily is zero")
    return best**2, IndexSet(m, witness)


@dataclass(frozen=True)
class EquivalenceReport:
    """Sandwich data relating subfamily bounds to angles with ``N(T)``.

    ``riesz_lower`` and ``riesz_upper`` are ``gamma(T)^2 / K^2`` and
    ``||T||^2 / K^2`` with ``K = 1 / min_J s_J``; the Riesz constant lies
    between them.
    """

    ok: bool
    min_gamma: float
    max_cos: float
    K_nullspace: float
    riesz_constant: float
    riesz_lower: float
    riesz_upper: float
    worst_slack: float
    witness_J: tuple

    def to_dict(self):
        d = asdict(self)
        d["witness_J"] = list(self.witness_J)
        return d


def riesz_compatibility_equivalence(F, slack=1e-10):
    """Check ``gamma(T) s_J <= gamma(T P_J) <= ||T|| s_J`` on every nonempty ``J``.

    ``s_J`` is the Friedrichs sine between ``N(T)`` and the coordinate
    subspace ``H_J`` of coefficient space.

    Raises
    ------
    IdentityViolation
        If some ``J`` breaks the sandwich by more than ``slack``.
    """
    T = F.synthesis
    m = F.size
    _check_cap(m)
    min_gamma, max_cos, min_sin = math.inf, 0.0, 1.0
    worst, witness = math.inf, ()
    for size in range(1, m + 1):
        for J in itertools.combinations(range(m), size):
            sw = gamma_sandwich(T, Subspace.coordinate(m, J, F.tol), F.tol)
            min_sin = min(min_sin, sw.sine)
            max_cos = max(max_cos, math.sqrt(max(0.0, 1.0 - sw.sine**2)))
            if sw.degenerate:
                continue
            gap = min(sw.gamma_TP - sw.lower, sw.upper - sw.gamma_TP)
            if gap < worst:
                worst = gap
            if sw.gamma_TP < min_gamma:
                min_gamma, witness = sw.gamma_TP, J
            if gap < -slack:
                raise IdentityViolation(
                    "gamma-sandwich",
                    f"J = {J}: {sw.lower!r} <= {sw.gamma_TP!r} <= {sw.upper!r} fails",
                    {"J": list(J)},
                )
    K = 1.0 / min_sin
    gT, nT = reduced_min_modulus(T, F.tol), operator_norm(T)
    riesz = min_gamma**2
    lo, hi = gT**2 / K**2, nT**2 / K**2
    ok = lo <= riesz * (1 + 1e-10) + slack and riesz <= hi * (1 + 1e-10) + slack
    return EquivalenceReport(bool(ok), min_gamma, max_cos, K, riesz, lo, hi, worst, witness)


def frame_from_nullspace(v, tol=DEFAULT_TOL):
    """Frame whose synthesis ``T`` has orthonormal rows and ``N(T) = span(v)``.

    ``v`` may hold several columns. The rows of ``T`` are the conjugated
    orthonormal basis of ``span(v)^⊥``.
    """
    V = as_matrix(v, "v")
    T = nullspace(V.conj().T, tol).basis.conj().T
    return FrameSystem(T, tol)


def mercedes_benz():
    """Three unit vectors in ``R^2`` at 120 degrees."""
    r = math.sqrt(3.0) / 2.0
    return FrameSystem(np.array([[0.0, -r, r], [1.0, -0.5, -0.5]]))


@dataclass(frozen=True)
class TailPoint:
    m: int
    riesz_constant: float
    max_cos: float
    K: float


def nullspace_tail_experiment(rule, dims, tol=DEFAULT_TOL):
    """Riesz constants of frames whose nullspace is spanned by truncations of ``rule``.

    ``K`` is the compatibility constant of the nullspace from exact
    enumeration; ``max_cos`` its angle form ``(1 - 1/K^2)^{1/2}``.
    """
    if not isinstance(rule, TailRule):
        rule = TailRule.from_dict(rule) if isinstance(rule, dict) else TailRule(rule)
    out = []
    for m in _dims(dims):
        if m < 2:
            raise InvalidInput("a one-dimensional nullspace needs m >= 2")
        v = rule.vector(m)
        F = frame_from_nullspace(v, tol)
        riesz, _ = riesz_constant(F)
        K = stewart_oleary(Subspace(v[:, None], tol), samples=0, tol=tol).K_constant
        max_cos = math.sqrt(max(0.0, 1.0 - 1.0 / K**2))
        out.append(TailPoint(m, riesz, max_cos, K))
    return out
