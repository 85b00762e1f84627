"""D-selfadjoint projections onto a subspace.

For a positive semidefinite weight ``D`` and a subspace ``S`` write ``D`` in
the frame ``S ⊕ S^⊥`` as ``[[a, b], [b^*, c]]``. The distinguished
projection is ``[[1, a^† b], [0, 0]]`` in that frame; every other
``D``-selfadjoint projection with range ``S`` differs from it by an operator
``z`` mapping ``S^⊥`` into ``N(D) ∩ S``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import (
    DegenerateAngle,
    Incompatible,
    InvalidInput,
    InvalidParameter,
    InvalidWeight,
    NotFullRank,
    PreconditionFailed,
    SingularGram,
)
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    as_matrix,
    nullspace,
    numerical_rank,
    operator_norm,
    orthonormal_range,
    svd,
)
from .subspace import dixmier_cos, intersect

__all__ = [
    "DiagonalWeight",
    "ObliqueProjection",
    "CompatibilityReport",
    "GRAM_CONDITION_LIMIT",
    "weighted_projection",
    "compatibility",
    "distinguished_projection",
    "projection_family",
    "sample_family_parameter",
    "ljance_ptak_norm",
    "compression_check",
]

GRAM_CONDITION_LIMIT = 1e12

_KINDS = ("positive_definite", "positive_semidefinite", "mu_cone")


@dataclass(frozen=True, eq=False)
class DiagonalWeight:
    """Diagonal entries of a weight matrix together with the class they belong to.

    ``mu_cone`` weights have every nonzero entry ``z`` in the cone
    ``|Im z| <= mu * Re z``.
    """

    entries: np.ndarray
    kind: str = "positive_definite"
    mu: Optional[float] = None

    def __post_init__(self):
        e = np.array(self.entries, dtype=np.complex128).ravel()
        if not np.all(np.isfinite(e)):
            raise InvalidWeight("weight entries must be finite")
        if self.kind not in _KINDS:
            raise InvalidWeight(f"unknown weight kind {self.kind!r}")
        if self.kind == "positive_definite":
            if np.any(e.imag != 0) or np.any(e.real <= 0):
                raise InvalidWeight("positive definite weights must be real and > 0")
        elif self.kind == "positive_semidefinite":
            if np.any(e.imag != 0) or np.any(e.real < 0):
                raise InvalidWeight("semidefinite weights must be real and >= 0")
        else:
            if self.mu is None or self.mu < 0:
                raise InvalidWeight("mu_cone weights need mu >= 0")
            if np.any(e == 0):
                raise InvalidWeight("mu_cone weights exclude 0")
            slack = 1e-12 * np.abs(e)
            if np.any(np.abs(e.imag) > self.mu * e.real + slack):
                raise InvalidWeight(f"entries leave the cone |Im z| <= {self.mu} Re z")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @classmethod
    def positive_definite(cls, entries):
        return cls(np.asarray(entries, dtype=float), "positive_definite")

    @classmethod
    def semidefinite(cls, entries):
        return cls(np.asarray(entries, dtype=float), "positive_semidefinite")

    @classmethod
    def mu_cone(cls, entries, mu):
        return cls(entries, "mu_cone", float(mu))

    @classmethod
    def projection(cls, n, indices):
        """The diagonal projection onto ``span{e_j : j in indices}``."""
        e = np.zeros(n)
        e[list(indices)] = 1.0
        return cls(e, "positive_semidefinite")

    @property
    def dim(self):
        return self.entries.size

    @property
    def matrix(self):
        return np.diag(self.entries)

    @property
    def is_real(self):
        return self.kind != "mu_cone" or self.mu == 0 or not np.any(self.entries.imag)


def _as_weight(D):
    if isinstance(D, DiagonalWeight):
        return D
    e = np.asarray(D)
    if e.ndim == 2:
        raise InvalidWeight("pass diagonal weights as a vector or DiagonalWeight")
    e = e.astype(np.complex128).ravel()
    if np.all(e.imag == 0) and np.all(e.real > 0):
        return DiagonalWeight.positive_definite(e.real)
    if np.all(e.imag == 0) and np.all(e.real >= 0):
        return DiagonalWeight.semidefinite(e.real)
    raise InvalidWeight("complex weights must be given as DiagonalWeight.mu_cone")


def _as_hermitian_psd(D, n, tol):
    """Dense Hermitian positive semidefinite matrix from a weight or matrix."""
    if isinstance(D, DiagonalWeight):
        if D.kind == "mu_cone" and not D.is_real:
            raise InvalidWeight("complex weights are not semidefinite")
        M = np.diag(D.entries.real).astype(np.complex128)
    else:
        arr = np.asarray(D)
        M = np.diag(arr.ravel()).astype(np.complex128) if arr.ndim == 1 else as_matrix(arr, "D")
    if M.shape != (n, n):
        raise InvalidWeight(f"weight has shape {M.shape}, expected {(n, n)}")
    scale = max(1.0, operator_norm(M))
    if np.max(np.abs(M - M.conj().T), initial=0.0) > tol.abs_eq * scale:
        raise InvalidWeight("weight is not Hermitian")
    M = (M + M.conj().T) / 2
    if n and np.linalg.eigvalsh(M)[0] < -tol.abs_eq * scale:
        raise InvalidWeight("weight is not positive semidefinite")
    return M


class ObliqueProjection:
    """An idempotent matrix with its range and nullspace.

    Construction checks ``P^2 = P`` relative to ``max(1, ||P||)^2`` and the
    dimension count ``dim range + dim nullsp = n``.
    """

    __slots__ = ("matrix", "range", "nullsp")

    def __init__(self, matrix, range, nullsp):
        P = as_matrix(matrix, "projection")
        n = P.shape[0]
        if P.shape != (n, n):
            raise InvalidInput("projection matrix must be square")
        if range.ambient_dim != n or nullsp.ambient_dim != n:
            raise InvalidInput("range/nullspace ambient dimension mismatch")
        if range.dim + nullsp.dim != n:
            raise InvalidInput(
                f"dim range ({range.dim}) + dim nullspace ({nullsp.dim}) != {n}"
            )
        scale = max(1.0, float(np.max(np.abs(P), initial=0.0)) * n)
        if np.max(np.abs(P @ P - P), initial=0.0) > range.tol.abs_eq * scale**2:
            raise InvalidInput("matrix is not idempotent")
        P.setflags(write=False)
        self.matrix = P
        self.range = range
        self.nullsp = nullsp

    @classmethod
    def from_matrix(cls, P, tol=DEFAULT_TOL):
        P = as_matrix(P, "projection")
        return cls(P, orthonormal_range(P, tol), nullspace(P, tol))

    @property
    def dim(self):
        return self.matrix.shape[0]

    def norm(self):
        return operator_norm(self.matrix)

    def __repr__(self):
        return f"ObliqueProjection(n={self.dim}, rank={self.range.dim})"


@dataclass(frozen=True, eq=False)
class CompatibilityReport:
    """Outcome of the compatibility test for a pair ``(D, S)``.

    ``reduced_solution`` is the block ``d = a^† b`` (``dim S x dim S^⊥``)
    expressed in ``frame``, the unitary ``[basis_S | basis_S⊥]``.
    """

    compatible: bool
    n_subspace_dim: int
    reduced_solution: np.ndarray
    frame: np.ndarray


def _check_full_column_rank(A, tol):
    if A.shape[1] > A.shape[0] or numerical_rank(A, tol) < A.shape[1]:
        raise NotFullRank(f"A ({A.shape[0]}x{A.shape[1]}) is not of full column rank")


def weighted_projection(A, D, tol=DEFAULT_TOL):
    """The scaled projection ``A (A^* D A)^{-1} A^* D`` onto ``R(A)``.

    Positive definite weights go through the factored form
    ``D^{-1/2} Q Q^* D^{1/2}`` with ``Q`` an orthonormal basis of
    ``R(D^{1/2} A)``, which stays accurate for wide weight ranges. Other
    weights use the Gram matrix, guarded by a condition-number limit.

    Raises
    ------
    NotFullRank
        If ``A`` does not have full column rank.
    SingularGram
        If ``A^* D A`` is numerically singular.
    """
    A = as_matrix(A, "A")
    _check_full_column_rank(A, tol)
    W = _as_weight(D)
    if W.dim != A.shape[0]:
        raise InvalidWeight(f"weight has {W.dim} entries, A has {A.shape[0]} rows")
    d = W.entries
    if W.kind == "positive_definite":
        sq = np.sqrt(d.real)
        Q, _ = np.linalg.qr(sq[:, None] * A)
        P = (Q @ Q.conj().T) * (sq[None, :] / sq[:, None])
    else:
        AD = A.conj().T * d[None, :]
        G = AD @ A
        if np.linalg.cond(G) > GRAM_CONDITION_LIMIT:
            raise SingularGram("A* D A is numerically singular")
        P = A @ np.linalg.solve(G, AD)
    AD = A.conj().T * d[None, :]
    return ObliqueProjection(P, orthonormal_range(A, tol), nullspace(AD, tol))


def _block_frame(S):
    n, k = S.ambient_dim, S.dim
    if k == n:
        return np.array(S.basis)
    # I - P_S has exactly n - k unit singular values.
    perp = svd(np.eye(n) - S.projector()).left[:, : n - k]
    return np.hstack([S.basis, perp])


def _rank_above(M, cutoff):
    if M.size == 0:
        return 0
    return int(np.count_nonzero(np.linalg.svd(M, compute_uv=False) > cutoff))


def _pinv_above(M, cutoff):
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    inv = np.where(s > cutoff, 1.0 / np.where(s > cutoff, s, 1.0), 0.0)
    return (Vh.conj().T * inv) @ U.conj().T


def compatibility(D, S, tol=None):
    """Decide whether ``(D, S)`` is compatible and compute the reduced solution.

    ``D`` may be a :class:`DiagonalWeight`, a vector of diagonal entries or a
    dense Hermitian positive semidefinite matrix. In finite dimension every
    such pair is compatible; the test is still carried out.
    """
    tol = S.tol if tol is None else tol
    n = S.ambient_dim
    Dm = _as_hermitian_psd(D, n, tol)
    U = _block_frame(S)
    k = S.dim
    Db = U.conj().T @ Dm @ U
    a, b = Db[:k, :k], Db[:k, k:]
    cutoff = tol.rel_rank * max(operator_norm(Dm), np.finfo(float).tiny)
    if k == 0 or k == n:
        compatible = True
        d = np.zeros((k, n - k), dtype=np.complex128)
    else:
        compatible = _rank_above(np.hstack([a, b]), cutoff) == _rank_above(a, cutoff)
        d = _pinv_above(a, cutoff) @ b
    n_dim = intersect(nullspace(Dm, tol), S).dim
    return CompatibilityReport(bool(compatible), n_dim, d, U)


def distinguished_projection(D, S, tol=None):
    """The minimal-norm ``D``-selfadjoint projection ``P_{D,S}`` with range ``S``."""
    tol = S.tol if tol is None else tol
    rep = compatibility(D, S, tol)
    if not rep.compatible:
        raise Incompatible("the pair (D, S) is not compatible")
    n, k = S.ambient_dim, S.dim
    blocks = np.zeros((n, n), dtype=np.complex128)
    blocks[:k, :k] = np.eye(k)
    blocks[:k, k:] = rep.reduced_solution
    U = rep.frame
    P = U @ blocks @ U.conj().T
    return ObliqueProjection(P, S, nullspace(P, tol))


def _null_part(D, S, tol):
    Dm = _as_hermitian_psd(D, S.ambient_dim, tol)
    return intersect(nullspace(Dm, tol), S)


def projection_family(D, S, z, tol=None):
    """The member ``P_{D,S} + z`` of the family of ``D``-selfadjoint projections onto ``S``.

    ``z`` is an ``n x n`` matrix which must map ``S^⊥`` into ``N(D) ∩ S`` and
    vanish on ``S``.

    Raises
    ------
    InvalidParameter
        If ``z`` violates that range/domain constraint.
    """
    tol = S.tol if tol is None else tol
    n = S.ambient_dim
    z = as_matrix(z, "z")
    if z.shape != (n, n):
        raise InvalidParameter(f"z has shape {z.shape}, expected {(n, n)}")
    N = _null_part(D, S, tol)
    admissible = N.projector() @ z @ (np.eye(n) - S.projector())
    if np.max(np.abs(z - admissible), initial=0.0) > tol.abs_eq * max(1.0, operator_norm(z)):
        raise InvalidParameter("z must map S-perp into N(D) ∩ S and vanish on S")
    P = distinguished_projection(D, S, tol)
    Q = P.matrix + z
    return ObliqueProjection(Q, S, nullspace(Q, tol))


def sample_family_parameter(D, S, rng, scale=1.0, tol=None):
    """Random admissible ``z`` for :func:`projection_family` (zero when ``N(D) ∩ S = 0``)."""
    tol = S.tol if tol is None else tol
    n = S.ambient_dim
    N = _null_part(D, S, tol)
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (N.projector() @ G @ (np.eye(n) - S.projector()))


def ljance_ptak_norm(P, method="sine"):
    """Norm of an oblique projection predicted from the angle between its range and nullspace.

    Returns ``(1 - c0^2)^{-1/2}`` with ``c0 = ||P_R P_N||``. The default
    computes the sine ``(1 - c0^2)^{1/2}`` directly as the smallest singular
    value of ``B_{N⊥}^* B_R``, avoiding cancellation for large norms;
    ``method="cosine"`` evaluates the formula from the Dixmier cosine.

    Raises
    ------
    DegenerateAngle
        If ``c0 >= 1 - 1e-12``.
    """
    if P.range.dim == 0:
        raise InvalidInput("the zero projection has no Ljance-Ptak norm")
    if method == "cosine":
        c0 = dixmier_cos(P.range, P.nullsp)
        if c0 >= 1.0 - 1e-12:
            raise DegenerateAngle(f"range and nullspace nearly intersect (c0 = {c0!r})")
        return 1.0 / np.sqrt(1.0 - c0 * c0)
    if method != "sine":
        raise InvalidInput(f"unknown method {method!r}")
    perp = P.nullsp.complement()
    if perp.dim != P.range.dim:
        raise InvalidInput("range and nullspace are not complementary")
    s = np.linalg.svd(perp.basis.conj().T @ P.range.basis, compute_uv=False)[-1]
    if s <= np.sqrt(1.0 - (1.0 - 1e-12) ** 2):
        raise DegenerateAngle(f"range and nullspace nearly intersect (sine = {s!r})")
    return 1.0 / float(s)


def compression_check(D, S, T, tol=None):
    """Check that ``P_{D,S}`` equals the compression ``P_{D_1,S}`` padded by zeros.

    ``D_1`` is ``D`` restricted to ``T``; requires ``S ⊆ T`` and ``P_T D = D P_T``.
    """
    tol = S.tol if tol is None else tol
    n = S.ambient_dim
    if T.ambient_dim != n:
        raise PreconditionFailed("S and T live in different spaces")
    if not T.contains(S):
        raise PreconditionFailed("S is not contained in T")
    Dm = _as_hermitian_psd(D, n, tol)
    PT = T.projector()
    if np.max(np.abs(PT @ Dm - Dm @ PT), initial=0.0) > tol.abs_eq * max(1.0, operator_norm(Dm)):
        raise PreconditionFailed("P_T does not commute with D")
    full = distinguished_projection(Dm, S, tol).matrix
    BT = T.basis
    D1 = BT.conj().T @ Dm @ BT
    S1 = Subspace(orthonormal_range(BT.conj().T @ S.basis, tol).basis, tol)
    P1 = distinguished_projection(D1, S1, tol).matrix
    padded = BT @ P1 @ BT.conj().T
    err = float(np.max(np.abs(full - padded), initial=0.0))
    return err <= tol.abs_eq * max(1.0, operator_norm(full))
