"""Angles between subspaces, intersections and alternating projections.

Cosines of the principal angles come from the SVD of ``B_M^* B_N`` and are
accurate near 0. Sines come from the SVD of the residual ``(I - P_M) B_N``
and are accurate near 0 as well, which is where intersections are decided.
Projector-product formulas are kept behind ``method="projector"`` as an
independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import AmbientMismatch, InvalidInput
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    as_matrix,
    nullspace,
    operator_norm,
    orthonormal_range,
    reduced_min_modulus,
    svd,
)

__all__ = [
    "INTERSECTION_TOL",
    "AnglePair",
    "orthogonal_projector",
    "principal_cosines",
    "intersect",
    "orthogonal_difference",
    "dixmier_cos",
    "friedrichs_cos",
    "friedrichs_sin",
    "angle_pair",
    "position_pprime",
    "alternating_projection_error",
    "Sandwich",
    "gamma_sandwich",
]

# A principal angle whose sine is at most this counts as zero, i.e. the
# corresponding principal vector lies in the intersection.
INTERSECTION_TOL = 1e-8


@dataclass(frozen=True)
class AnglePair:
    friedrichs_cos: float
    dixmier_cos: float
    friedrichs_sin: float
    intersection_dim: int


def _check_pair(M, N):
    if not isinstance(M, Subspace) or not isinstance(N, Subspace):
        raise InvalidInput("expected Subspace arguments")
    if M.ambient_dim != N.ambient_dim:
        raise AmbientMismatch(
            f"subspaces live in C^{M.ambient_dim} and C^{N.ambient_dim}"
        )


def orthogonal_projector(S):
    """Selfadjoint projection onto ``S``."""
    return S.projector()


def principal_cosines(M, N):
    """Cosines of the principal angles, nonincreasing, ``min(dim M, dim N)`` of them."""
    _check_pair(M, N)
    if M.dim == 0 or N.dim == 0:
        return np.zeros(0)
    C = M.basis.conj().T @ N.basis
    return np.clip(np.linalg.svd(C, compute_uv=False), 0.0, 1.0)


def _principal(M, N):
    """Return (cosines desc, sines asc, intersection basis) for the pair."""
    p = min(M.dim, N.dim)
    n = M.ambient_dim
    if p == 0:
        return np.zeros(0), np.zeros(0), np.zeros((n, 0), dtype=np.complex128)
    # Project the lower-dimensional subspace against the other one.
    small, big = (M, N) if M.dim <= N.dim else (N, M)
    Bs, Bb = small.basis, big.basis
    cos = np.clip(np.linalg.svd(Bb.conj().T @ Bs, compute_uv=False), 0.0, 1.0)
    R = Bs - Bb @ (Bb.conj().T @ Bs)
    _, s, Vh = np.linalg.svd(R, full_matrices=True)
    # R is n x p with p <= n, so there are exactly p singular values.
    sin = np.clip(s[::-1], 0.0, 1.0)
    V = Vh.conj().T[:, ::-1]
    r = int(np.count_nonzero(sin <= INTERSECTION_TOL))
    inter = Bs @ V[:, :r]
    return cos, sin, inter


def intersect(M, N):
    """Orthonormal basis of ``M ∩ N``."""
    _check_pair(M, N)
    _, _, inter = _principal(M, N)
    if inter.shape[1] == 0:
        return Subspace.zero(M.ambient_dim, M.tol)
    return orthonormal_range(inter, M.tol)


def orthogonal_difference(M, sub):
    """``M ⊖ sub`` for a subspace ``sub`` contained in ``M``."""
    _check_pair(M, sub)
    if sub.dim == 0:
        return M
    k = M.dim - sub.dim
    if k <= 0:
        return Subspace.zero(M.ambient_dim, M.tol)
    B = M.basis - sub.basis @ (sub.basis.conj().T @ M.basis)
    # The residual has exactly k nonzero singular values; a relative cutoff
    # would read rounding noise as rank when k is small.
    return Subspace(svd(B).left[:, :k], M.tol)


def angle_pair(M, N):
    """Friedrichs and Dixmier cosines, Friedrichs sine, and ``dim(M ∩ N)``."""
    _check_pair(M, N)
    cos, sin, inter = _principal(M, N)
    r = inter.shape[1]
    p = cos.size
    dixmier = float(cos[0]) if p else 0.0
    if r < p:
        fc, fs = float(cos[r]), float(sin[r])
    else:
        fc, fs = 0.0, 1.0
    return AnglePair(fc, dixmier, fs, r)


def dixmier_cos(M, N, method="svd"):
    """Cosine of the minimal angle, ``||P_M P_N||``."""
    _check_pair(M, N)
    if method == "projector":
        return min(1.0, operator_norm(M.projector() @ N.projector()))
    if method != "svd":
        raise InvalidInput(f"unknown method {method!r}")
    cos = principal_cosines(M, N)
    return float(cos[0]) if cos.size else 0.0


def friedrichs_cos(M, N, method="svd"):
    """Cosine of the Friedrichs angle, ``||P_M P_N (I - P_{M∩N})||``."""
    _check_pair(M, N)
    if method == "projector":
        I = intersect(M, N)
        n = M.ambient_dim
        prod = M.projector() @ N.projector() @ (np.eye(n) - I.projector())
        return min(1.0, operator_norm(prod))
    if method != "svd":
        raise InvalidInput(f"unknown method {method!r}")
    return angle_pair(M, N).friedrichs_cos


def friedrichs_sin(M, N):
    return angle_pair(M, N).friedrichs_sin


def position_pprime(M, N):
    """True when ``M ∩ N^⊥`` and ``M^⊥ ∩ N`` are both trivial."""
    _check_pair(M, N)
    return intersect(M, N.complement()).dim == 0 and intersect(M.complement(), N).dim == 0


def alternating_projection_error(M, N, k):
    """``||(P_M P_N)^k - P_{M∩N}||``; equals ``friedrichs_cos(M, N) ** (2k - 1)``."""
    _check_pair(M, N)
    if int(k) != k or k < 1:
        raise InvalidInput(f"k must be a positive integer, got {k}")
    prod = np.linalg.matrix_power(M.projector() @ N.projector(), int(k))
    return operator_norm(prod - intersect(M, N).projector())


@dataclass(frozen=True)
class Sandwich:
    """Both sides of ``γ(T) s <= γ(T P_S) <= ||T|| s`` with ``s = s[N(T), S]``.

    ``degenerate`` marks ``T P_S = 0``, where ``γ(T P_S)`` is the ``inf``
    sentinel and the inequalities carry no information.
    """

    gamma_T: float
    norm_T: float
    gamma_TP: float
    sine: float
    degenerate: bool

    @property
    def lower(self):
        return self.gamma_T * self.sine

    @property
    def upper(self):
        return self.norm_T * self.sine

    def holds(self, slack=1e-10):
        if self.degenerate:
            return True
        return self.lower <= self.gamma_TP + slack and self.gamma_TP <= self.upper + slack


def gamma_sandwich(T, S, tol=DEFAULT_TOL):
    """Reduced minimum modulus of ``T P_S`` against the angle between ``N(T)`` and ``S``."""
    T = as_matrix(T, "T")
    if T.shape[1] != S.ambient_dim:
        raise AmbientMismatch(f"T acts on C^{T.shape[1]}, S lives in C^{S.ambient_dim}")
    norm_T = operator_norm(T)
    gamma_T = reduced_min_modulus(T, tol)
    gamma_TP = reduced_min_modulus(T @ S.projector(), tol, scale=norm_T)
    sine = friedrichs_sin(nullspace(T, tol), S)
    return Sandwich(gamma_T, norm_T, gamma_TP, sine, bool(np.isinf(gamma_TP)))
