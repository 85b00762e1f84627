"""Dense complex linear algebra primitives.

Every routine accepts anything :func:`numpy.asarray` understands and works in
``complex128``. Singular value decompositions follow a fixed phase
convention (the largest-magnitude entry of each left singular vector is real
and positive) so that bases, and everything built from them, are
reproducible run to run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInput

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "SvdResult",
    "Subspace",
    "as_matrix",
    "svd",
    "numerical_rank",
    "pinv",
    "operator_norm",
    "reduced_min_modulus",
    "orthonormal_range",
    "nullspace",
]


@dataclass(frozen=True)
class Tolerance:
    """Numerical tolerances.

    Parameters
    ----------
    rel_rank : float
        Singular values at or below ``rel_rank * sigma_max`` count as zero.
    abs_eq : float
        Absolute tolerance for matrix equality checks.
    """

    rel_rank: float = 1e-10
    abs_eq: float = 1e-8

    def __post_init__(self):
        if not (0.0 < self.rel_rank < 1.0):
            raise InvalidInput(f"rel_rank must lie in (0, 1), got {self.rel_rank}")
        if not self.abs_eq > 0.0:
            raise InvalidInput(f"abs_eq must be positive, got {self.abs_eq}")


DEFAULT_TOL = Tolerance()


def as_matrix(M, name="matrix"):
    """Return ``M`` as a finite 2-D complex array; 1-D input becomes a column."""
    arr = np.asarray(M)
    if arr.dtype == object:
        raise InvalidInput(f"{name}: entries must be numeric")
    arr = arr.astype(np.complex128, copy=False)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise InvalidInput(f"{name}: expected a 2-D array, got {arr.ndim} dimensions")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name}: non-finite entries")
    return arr


def _fix_phases(vectors):
    # Rotate each column so its largest-magnitude entry is real positive.
    if vectors.size == 0:
        return vectors, np.ones(vectors.shape[1], dtype=np.complex128)
    idx = np.argmax(np.abs(vectors), axis=0)
    pivots = vectors[idx, np.arange(vectors.shape[1])]
    mags = np.abs(pivots)
    phases = np.where(mags > 0, pivots / np.where(mags > 0, mags, 1.0), 1.0)
    return vectors * phases.conj()[None, :], phases


@dataclass(frozen=True, eq=False)
class SvdResult:
    """Thin SVD ``M = left @ diag(singular_values) @ right.conj().T``."""

    left: np.ndarray
    singular_values: np.ndarray
    right: np.ndarray

    def reconstruct(self):
        return (self.left * self.singular_values) @ self.right.conj().T


def svd(M):
    """Thin singular value decomposition with a deterministic phase convention.

    Raises
    ------
    InvalidInput
        If ``M`` is empty or has non-finite entries.
    """
    M = as_matrix(M)
    if M.size == 0:
        raise InvalidInput("svd of an empty matrix")
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    V = Vh.conj().T
    U, phases = _fix_phases(U)
    V = V * phases.conj()[None, :]
    return SvdResult(U, s, V)


def _cutoff(s, tol, scale=None):
    top = s[0] if s.size else 0.0
    if scale is not None:
        top = max(top, scale)
    return tol.rel_rank * top


def numerical_rank(M, tol=DEFAULT_TOL):
    """Number of singular values above ``tol.rel_rank * sigma_max``."""
    M = as_matrix(M)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > _cutoff(s, tol)))


def pinv(M, tol=DEFAULT_TOL):
    """Moore-Penrose pseudoinverse with the rank cutoff of ``tol``."""
    M = as_matrix(M)
    if M.size == 0:
        return np.zeros((M.shape[1], M.shape[0]), dtype=np.complex128)
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    keep = s > _cutoff(s, tol) if s[0] > 0 else np.zeros_like(s, dtype=bool)
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return (Vh.conj().T * inv) @ U.conj().T


def operator_norm(M):
    """Spectral norm (largest singular value); 0 for empty or zero input."""
    M = as_matrix(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.svd(M, compute_uv=False)[0])


def reduced_min_modulus(T, tol=DEFAULT_TOL, scale=None):
    """Smallest nonzero singular value of ``T``.

    This is ``inf ||T x||`` over unit ``x`` orthogonal to the nullspace.
    ``T = 0`` has no such ``x`` and returns ``inf``.

    ``scale`` raises the reference used for the zero cutoff above
    ``sigma_max(T)``; pass the norm of a parent operator when ``T`` is a
    column block of it, so that rounding noise in a numerically zero block is
    not mistaken for a tiny singular value.
    """
    T = as_matrix(T)
    if T.size == 0:
        return np.inf
    s = np.linalg.svd(T, compute_uv=False)
    nonzero = s[s > _cutoff(s, tol, scale)]
    if nonzero.size == 0 or s[0] == 0.0:
        return np.inf
    return float(nonzero[-1])


class Subspace:
    """A subspace of ``C^n`` stored through an orthonormal column basis.

    The basis array is read-only. Use :meth:`span` to build a subspace from
    arbitrary spanning vectors.
    """

    __slots__ = ("_basis", "tol")

    def __init__(self, basis, tol=DEFAULT_TOL):
        B = np.array(basis, dtype=np.complex128)
        if B.ndim == 1:
            B = B[:, None]
        if B.ndim != 2:
            raise InvalidInput("subspace basis must be 2-D")
        if not np.all(np.isfinite(B)):
            raise InvalidInput("subspace basis has non-finite entries")
        n, k = B.shape
        if k > n:
            raise InvalidInput(f"{k} basis vectors cannot be orthonormal in C^{n}")
        if k:
            err = np.max(np.abs(B.conj().T @ B - np.eye(k)))
            if err > tol.abs_eq:
                raise InvalidInput(f"basis is not orthonormal (deviation {err:.2e})")
        B.setflags(write=False)
        self._basis = B
        self.tol = tol

    @property
    def basis(self):
        return self._basis

    @property
    def ambient_dim(self):
        return self._basis.shape[0]

    @property
    def dim(self):
        return self._basis.shape[1]

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"

    @classmethod
    def span(cls, vectors, tol=DEFAULT_TOL):
        """Subspace spanned by the columns of ``vectors``."""
        return orthonormal_range(vectors, tol)

    @classmethod
    def zero(cls, n, tol=DEFAULT_TOL):
        return cls(np.zeros((n, 0)), tol)

    @classmethod
    def full(cls, n, tol=DEFAULT_TOL):
        return cls(np.eye(n), tol)

    @classmethod
    def coordinate(cls, n, indices, tol=DEFAULT_TOL):
        """Closed span of the canonical vectors ``e_j`` for ``j`` in ``indices``."""
        idx = sorted(set(int(i) for i in indices))
        if idx and (idx[0] < 0 or idx[-1] >= n):
            raise InvalidInput(f"coordinate indices out of range for C^{n}")
        return cls(np.eye(n)[:, idx], tol)

    def projector(self):
        """Orthogonal projector ``B B^*``."""
        B = self._basis
        return B @ B.conj().T

    def complement(self):
        """Orthogonal complement in the ambient space."""
        n = self.ambient_dim
        if self.dim == 0:
            return Subspace.full(n, self.tol)
        return nullspace(self._basis.conj().T, self.tol)

    def contains(self, other, atol=None):
        """True when every basis vector of ``other`` lies in this subspace."""
        if other.ambient_dim != self.ambient_dim:
            return False
        atol = self.tol.abs_eq if atol is None else atol
        B = other.basis
        residual = B - self._basis @ (self._basis.conj().T @ B)
        return residual.size == 0 or float(np.max(np.abs(residual))) <= atol


def orthonormal_range(M, tol=DEFAULT_TOL):
    """Subspace spanned by the columns of ``M`` (left singular vectors above cutoff)."""
    M = as_matrix(M)
    rows = M.shape[0]
    if M.size == 0 or not np.any(M):
        return Subspace.zero(rows, tol)
    res = svd(M)
    s = res.singular_values
    r = int(np.count_nonzero(s > _cutoff(s, tol)))
    return Subspace(res.left[:, :r], tol)


def nullspace(M, tol=DEFAULT_TOL):
    """Orthonormal basis of ``N(M)``, of dimension ``cols - numerical_rank(M)``."""
    M = as_matrix(M)
    cols = M.shape[1]
    if M.size == 0 or not np.any(M):
        return Subspace.full(cols, tol)
    _, s, Vh = np.linalg.svd(M, full_matrices=True)
    r = int(np.count_nonzero(s > _cutoff(s, tol)))
    null = Vh[r:].conj().T
    null, _ = _fix_phases(null)
    return Subspace(null, tol)
