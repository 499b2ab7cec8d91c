"""Correlation tensors in the Weyl operator basis and their matricizations.

A state on ``d_1 x ... x d_n`` expands as

    rho = (1/D) sum_mu t[mu_1, ..., mu_n] A_{mu_1} (x) ... (x) A_{mu_n},
    t[mu] = tr(rho (A_{mu_1})^dagger (x) ... (x) (A_{mu_n})^dagger),

with ``D = d_1 ... d_n``.  Everything here is built from the dense array
``t`` (shape ``(d_1**2, ..., d_n**2)``).

Whenever several parties index one axis of a vector or matrix, the local
indices run over ``1 .. d**2 - 1`` and the last listed party varies fastest.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from string import ascii_letters
from typing import Sequence

import numpy as np

from .errors import InvalidDimensionError, InvalidIndexError
from .gpops import weyl_stack
from .partitions import Bipartition, enumerate_bipartitions
from .states import DensityMatrix, as_dims

__all__ = [
    "CorrelationTensor",
    "FMatrix",
    "Bipartition",
    "extract_tensor",
    "reconstruct",
    "t_vector",
    "s_matrix",
    "f_matrix",
    "enumerate_bipartitions",
]


@dataclass(frozen=True, eq=False)
class CorrelationTensor:
    dims: tuple[int, ...]
    coeffs: np.ndarray

    def __post_init__(self):
        dims = as_dims(self.dims)
        coeffs = np.array(self.coeffs, dtype=complex)
        expected = tuple(d * d for d in dims)
        if coeffs.shape != expected:
            raise InvalidDimensionError(
                f"coefficient array shape {coeffs.shape} does not match dims {dims} (expected {expected})"
            )
        coeffs.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def n(self) -> int:
        return len(self.dims)

    def __getitem__(self, mu) -> complex:
        return complex(self.coeffs[tuple(mu)])


@dataclass(frozen=True, eq=False)
class FMatrix:
    """``[alpha * S0 ; beta * S]`` for one bipartition.

    ``matrix[:top_rows]`` is the ``alpha`` block, whose columns beyond
    ``lead_cols`` are the explicit zero block.
    """

    bipartition: Bipartition
    alpha: float
    beta: float
    matrix: np.ndarray
    top_rows: int
    lead_cols: int

    @property
    def top(self) -> np.ndarray:
        return self.matrix[: self.top_rows]

    @property
    def bottom(self) -> np.ndarray:
        return self.matrix[self.top_rows :]


def _einsum_letters(n: int) -> tuple[str, str, str]:
    if 3 * n > len(ascii_letters):
        raise InvalidDimensionError(f"too many parties for dense contraction: n={n}")
    return ascii_letters[:n], ascii_letters[n : 2 * n], ascii_letters[2 * n : 3 * n]


def extract_tensor(rho: DensityMatrix) -> CorrelationTensor:
    """Correlation tensor ``t[mu] = tr(rho (x)_s A_{mu_s}^dagger)`` of a state."""
    dims = rho.dims
    n = len(dims)
    rows, cols, mus = _einsum_letters(n)
    # tr(rho B) = sum_ab rho[a, b] B[b, a] and (A^dagger)[b, a] = conj(A[a, b])
    operands = [rho.matrix.reshape(dims + dims)]
    subs = [rows + cols]
    for s, d in enumerate(dims):
        operands.append(weyl_stack(d).conj())
        subs.append(mus[s] + rows[s] + cols[s])
    expr = ",".join(subs) + "->" + mus
    return CorrelationTensor(dims, np.einsum(expr, *operands, optimize="greedy"))


def reconstruct(tensor: CorrelationTensor) -> DensityMatrix:
    """Inverse of :func:`extract_tensor`: ``(1/D) sum_mu t[mu] (x)_s A_{mu_s}``."""
    dims = tensor.dims
    n = len(dims)
    rows, cols, mus = _einsum_letters(n)
    operands = [tensor.coeffs]
    subs = [mus]
    for s, d in enumerate(dims):
        operands.append(weyl_stack(d))
        subs.append(mus[s] + rows[s] + cols[s])
    expr = ",".join(subs) + "->" + rows + cols
    D = prod(dims)
    mat = np.einsum(expr, *operands, optimize="greedy").reshape(D, D) / D
    return DensityMatrix(dims, mat)


def _check_parties(n: int, parties: Sequence[int], what: str) -> tuple[int, ...]:
    parties = tuple(int(p) for p in parties)
    if not parties:
        raise InvalidIndexError(f"{what} party list must be nonempty")
    if len(set(parties)) != len(parties):
        raise InvalidIndexError(f"{what} party list {parties} has repeated parties")
    bad = [p for p in parties if not 1 <= p <= n]
    if bad:
        raise InvalidIndexError(f"{what} parties {bad} outside 1..{n}")
    return parties


def _block(tensor: CorrelationTensor, groups: Sequence[tuple[int, ...]]) -> np.ndarray:
    """Slice ``t`` with indices ``1..d**2-1`` at the listed parties and 0 elsewhere.

    Returns an array with one axis per group, each axis flattening its
    parties in listed order (last fastest).
    """
    listed = [p for g in groups for p in g]
    index = [0] * tensor.n
    for p in listed:
        index[p - 1] = slice(1, None)
    sub = tensor.coeffs[tuple(index)]
    # surviving axes are in ascending party order; move them to listed order
    ascending = sorted(listed)
    sub = sub.transpose([ascending.index(p) for p in listed])
    shape = [prod(tensor.dims[p - 1] ** 2 - 1 for p in g) for g in groups]
    return sub.reshape(shape)


def t_vector(tensor: CorrelationTensor, part: Sequence[int]) -> np.ndarray:
    """Vector of coefficients with nonzero local indices on ``part`` and 0 elsewhere.

    Length is ``prod(d_p**2 - 1 for p in part)``.

    Examples
    --------
    >>> from weylgme.states import w_state
    >>> t_vector(extract_tensor(w_state()), [1]).real.round(12)
    array([0.        , 0.33333333, 0.        ])
    """
    part = _check_parties(tensor.n, part, "vector")
    return _block(tensor, [part])


def s_matrix(tensor: CorrelationTensor, left: Sequence[int], right: Sequence[int]) -> np.ndarray:
    """Matricization with rows indexed by ``left`` and columns by ``right``.

    Entry ``(r, c)`` is the coefficient whose local indices at the ``left``
    parties come from ``r``, at the ``right`` parties from ``c``, and which is
    0 at every party in neither list.  For a state that is a product across
    ``left | right`` this equals ``outer(t_vector(left), t_vector(right).conj())``.
    """
    left = _check_parties(tensor.n, left, "left")
    right = _check_parties(tensor.n, right, "right")
    if set(left) & set(right):
        raise InvalidIndexError(f"party lists {left} and {right} overlap")
    return _block(tensor, [left, right])


def f_matrix(tensor: CorrelationTensor, bipartition: Bipartition, alpha: float, beta: float) -> FMatrix:
    """Stack ``alpha * [S^{left|lead}  O]`` on top of ``beta * S^{left|right}``."""
    if bipartition.n != tensor.n:
        raise InvalidIndexError(
            f"bipartition {bipartition} has {bipartition.n} parties but the state has {tensor.n}"
        )
    full = s_matrix(tensor, bipartition.left, bipartition.right)
    lead = s_matrix(tensor, bipartition.left, (bipartition.lead,))
    rows, cols = full.shape
    top = np.zeros((rows, cols), dtype=complex)
    top[:, : lead.shape[1]] = lead
    mat = np.vstack([alpha * top, beta * full])
    mat.setflags(write=False)
    return FMatrix(bipartition, float(alpha), float(beta), mat, rows, lead.shape[1])
