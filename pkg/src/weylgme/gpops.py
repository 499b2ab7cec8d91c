"""Generalized Pauli (Weyl) operators on a single qudit.

The operator with flat index ``mu = d*i + j`` is

    A_mu = sum_m omega**(i*m) |m><(m + j) mod d|,    omega = exp(2*pi*1j/d),

so ``i`` selects a phase (clock) power and ``j`` a cyclic shift.  ``A_0`` is
the identity and the ``d**2`` operators are orthogonal under the
Hilbert-Schmidt inner product with ``tr(A_mu A_nu^dagger) = d * delta``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import InvalidDimensionError, InvalidIndexError

__all__ = [
    "WeylIndex",
    "WeylOp",
    "primitive_root",
    "weyl_op",
    "weyl_basis",
    "weyl_stack",
    "check_algebra",
]


def _check_dim(d) -> int:
    if isinstance(d, bool) or not isinstance(d, (int, np.integer)) or d < 2:
        raise InvalidDimensionError(f"local dimension must be an integer >= 2, got {d!r}")
    return int(d)


@dataclass(frozen=True)
class WeylIndex:
    """Position ``(i, j)`` of a Weyl operator in a ``d``-dimensional basis."""

    d: int
    i: int
    j: int

    def __post_init__(self):
        _check_dim(self.d)
        if not (0 <= self.i < self.d and 0 <= self.j < self.d):
            raise InvalidIndexError(
                f"Weyl exponents must satisfy 0 <= i, j < {self.d}, got ({self.i}, {self.j})"
            )

    @property
    def mu(self) -> int:
        return self.d * self.i + self.j

    @classmethod
    def from_mu(cls, d: int, mu: int) -> "WeylIndex":
        d = _check_dim(d)
        if not 0 <= mu < d * d:
            raise InvalidIndexError(f"flat index must lie in [0, {d * d - 1}], got {mu}")
        i, j = divmod(mu, d)
        return cls(d, i, j)

    @property
    def is_identity(self) -> bool:
        return self.mu == 0


@dataclass(frozen=True, eq=False)
class WeylOp:
    """A Weyl operator together with its dense matrix (read-only)."""

    index: WeylIndex
    matrix: np.ndarray

    @property
    def d(self) -> int:
        return self.index.d

    @property
    def mu(self) -> int:
        return self.index.mu

    def dagger(self) -> np.ndarray:
        return self.matrix.conj().T

    def __repr__(self):
        return f"WeylOp(d={self.d}, i={self.index.i}, j={self.index.j}, mu={self.mu})"


def primitive_root(d: int) -> complex:
    """Return ``exp(2*pi*1j/d)``."""
    return complex(_phases(_check_dim(d))[1])


def _phases(d: int) -> np.ndarray:
    # omega**k for k = 0..d-1 from the angle directly (no drift from repeated
    # products); components that should vanish, e.g. Im(exp(i*pi)), are
    # snapped to exact zero so qubit operators come out real.
    ph = np.exp(2j * np.pi * np.arange(d) / d)
    re, im = ph.real.copy(), ph.imag.copy()
    re[np.abs(re) < 1e-15] = 0.0
    im[np.abs(im) < 1e-15] = 0.0
    return re + 1j * im


def _weyl_matrix(d: int, i: int, j: int) -> np.ndarray:
    phases = _phases(d)
    mat = np.zeros((d, d), dtype=complex)
    m = np.arange(d)
    mat[m, (m + j) % d] = phases[(i * m) % d]
    return mat


def weyl_op(d: int, i: int, j: int) -> WeylOp:
    """Return the Weyl operator with phase exponent ``i`` and shift ``j``.

    Raises
    ------
    InvalidDimensionError
        If ``d < 2``.
    InvalidIndexError
        If ``i`` or ``j`` is not in ``range(d)``.
    """
    index = WeylIndex(_check_dim(d), i, j)
    mat = _weyl_matrix(index.d, index.i, index.j)
    mat.setflags(write=False)
    return WeylOp(index, mat)


def weyl_basis(d: int) -> list[WeylOp]:
    """All ``d**2`` Weyl operators ordered by flat index; element 0 is the identity."""
    d = _check_dim(d)
    return [weyl_op(d, *divmod(mu, d)) for mu in range(d * d)]


@lru_cache(maxsize=None)
def weyl_stack(d: int) -> np.ndarray:
    """Basis matrices stacked into a read-only array of shape ``(d**2, d, d)``."""
    d = _check_dim(d)
    stack = np.stack([_weyl_matrix(d, *divmod(mu, d)) for mu in range(d * d)])
    stack.setflags(write=False)
    return stack


def check_algebra(d: int, tol: float = 1e-12, basis: Sequence[WeylOp] | None = None) -> bool:
    """Exhaustively verify the product, adjoint and orthogonality relations.

    For all ``(i, j)`` and ``(k, l)`` (exponents reduced mod ``d``)::

        A[i,j] A[k,l]      == omega**(j*k) A[i+k, j+l]
        A[i,j]^dagger      == omega**(i*j) A[-i, -j]
        tr(A[i,j] A[k,l]^dagger) == d * delta_ik * delta_jl

    ``basis`` may be supplied to check an arbitrary list of ``d**2`` matrices
    (indexed by flat ``mu``) instead of the one built by :func:`weyl_basis`.
    """
    d = _check_dim(d)
    mats = [op.matrix for op in (weyl_basis(d) if basis is None else basis)]
    if len(mats) != d * d:
        return False
    phases = _phases(d)

    def A(i, j):
        return mats[d * (i % d) + (j % d)]

    for i in range(d):
        for j in range(d):
            a = A(i, j)
            if np.max(np.abs(a.conj().T - phases[(i * j) % d] * A(-i, -j))) > tol:
                return False
            for k in range(d):
                for l in range(d):
                    b = A(k, l)
                    if np.max(np.abs(a @ b - phases[(j * k) % d] * A(i + k, j + l))) > tol:
                        return False
                    expected = d if (i == k and j == l) else 0.0
                    if abs(np.trace(a @ b.conj().T) - expected) > tol:
                        return False
    return True
