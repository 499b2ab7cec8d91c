"""Density matrices on ``d_1 x ... x d_n`` systems.

Basis ordering is row-major over ``|k_1 ... k_n>`` with ``k_n`` varying
fastest, i.e. the ``numpy.kron`` convention.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import prod
from os import PathLike
from typing import Sequence

import numpy as np

from .errors import (
    InvalidDimensionError,
    InvalidIndexError,
    InvalidStateError,
    UnsupportedError,
)
from .partitions import Bipartition

__all__ = [
    "DensityMatrix",
    "as_dims",
    "maximally_mixed",
    "pure_state",
    "w_state",
    "ghz_state",
    "white_noise_mix",
    "product_state",
    "partial_trace",
    "random_density",
    "validate",
    "is_permutation_invariant",
    "load_density",
    "save_density",
    "to_json",
    "from_json",
]

VALIDATE_TOL = 1e-10
FILE_TOL = 1e-8


def as_dims(dims: Sequence[int]) -> tuple[int, ...]:
    """Normalize a dimension vector, requiring ``n >= 1`` and every ``d_s >= 2``."""
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise InvalidDimensionError("a system needs at least one party")
    if any(d < 2 for d in dims):
        raise InvalidDimensionError(f"local dimensions must be >= 2, got {dims}")
    return dims


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Matrix of shape ``(D, D)`` on parties with local dimensions ``dims``.

    Only shapes are checked on construction; physicality is reported by
    :func:`validate`.
    """

    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims = as_dims(self.dims)
        mat = np.array(self.matrix, dtype=complex)
        D = prod(dims)
        if mat.shape != (D, D):
            raise InvalidDimensionError(
                f"matrix shape {mat.shape} does not match dims {dims} (expected {(D, D)})"
            )
        mat.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", mat)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def __repr__(self):
        return f"DensityMatrix(dims={self.dims})"


def maximally_mixed(dims: Sequence[int]) -> DensityMatrix:
    dims = as_dims(dims)
    D = prod(dims)
    return DensityMatrix(dims, np.eye(D) / D)


def pure_state(psi, dims: Sequence[int]) -> DensityMatrix:
    """Projector onto the normalized vector ``psi``."""
    psi = np.asarray(psi, dtype=complex).ravel()
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise InvalidStateError(["zero state vector"])
    psi = psi / norm
    return DensityMatrix(dims, np.outer(psi, psi.conj()))


def w_state() -> DensityMatrix:
    """``|W> = (|001> + |010> + |100>) / sqrt(3)`` as a projector."""
    psi = np.zeros(8)
    psi[[0b001, 0b010, 0b100]] = 1.0
    return pure_state(psi, (2, 2, 2))


def ghz_state(n: int, d: int = 2) -> DensityMatrix:
    """``(1/sqrt(d)) sum_k |k...k>`` on ``n`` qudits as a projector."""
    if n < 2:
        raise InvalidDimensionError(f"GHZ state needs n >= 2 parties, got {n}")
    if d < 2:
        raise InvalidDimensionError(f"GHZ state needs d >= 2, got {d}")
    D = d**n
    # |k...k> sits at k * (d**(n-1) + ... + d + 1)
    stride = sum(d**p for p in range(n))
    psi = np.zeros(D)
    psi[np.arange(d) * stride] = 1.0
    return pure_state(psi, (d,) * n)


def white_noise_mix(rho: DensityMatrix, x: float) -> DensityMatrix:
    """``x * rho + (1 - x) * I/D`` for a visibility ``0 <= x <= 1``."""
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"visibility x must lie in [0, 1], got {x}")
    mixed = np.eye(rho.total_dim) / rho.total_dim
    return DensityMatrix(rho.dims, x * rho.matrix + (1.0 - x) * mixed)


def _permute_parties(mat: np.ndarray, dims: tuple[int, ...], order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors: output factor ``s`` is input factor ``order[s]``."""
    n = len(dims)
    D = mat.shape[0]
    t = mat.reshape(dims + dims)
    axes = list(order) + [n + p for p in order]
    return t.transpose(axes).reshape(D, D)


def product_state(left: DensityMatrix, right: DensityMatrix, bipartition: Bipartition) -> DensityMatrix:
    """Uncorrelated state with ``left`` on ``bipartition.left`` and ``right`` on ``bipartition.right``.

    ``left.dims`` and ``right.dims`` are listed in the order the parties
    appear in the bipartition; the result is in global party order.
    """
    if left.n != len(bipartition.left) or right.n != len(bipartition.right):
        raise InvalidDimensionError(
            f"factor party counts ({left.n}, {right.n}) do not match bipartition {bipartition}"
        )
    listed = bipartition.left + bipartition.right
    listed_dims = left.dims + right.dims
    joint = np.kron(left.matrix, right.matrix)
    # position of global party p (1-based) inside the listed order
    order = [listed.index(p) for p in range(1, bipartition.n + 1)]
    dims = tuple(listed_dims[k] for k in order)
    return DensityMatrix(dims, _permute_parties(joint, listed_dims, order))


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Reduced state on the parties ``keep`` (1-based), returned in ascending party order."""
    keep = sorted(set(int(p) for p in keep))
    n = rho.n
    if not keep or keep[0] < 1 or keep[-1] > n:
        raise InvalidIndexError(f"parties to keep must be a nonempty subset of 1..{n}, got {keep}")
    dims = rho.dims
    t = rho.matrix.reshape(dims + dims)
    traced = [p - 1 for p in range(1, n + 1) if p not in keep]
    # contract each traced party's row axis with its column axis
    for ax in sorted(traced, reverse=True):
        t = np.trace(t, axis1=ax, axis2=ax + t.ndim // 2)
    kept_dims = tuple(dims[p - 1] for p in keep)
    Dk = prod(kept_dims)
    return DensityMatrix(kept_dims, t.reshape(Dk, Dk))


def random_density(dims: Sequence[int], rank: int, seed: int) -> DensityMatrix:
    """Seeded random state ``G G^dagger / tr(G G^dagger)`` with ``G`` complex Ginibre of shape ``(D, rank)``."""
    dims = as_dims(dims)
    D = prod(dims)
    if not 1 <= rank <= D:
        raise InvalidDimensionError(f"rank must lie in [1, {D}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((D, rank)) + 1j * rng.standard_normal((D, rank))
    mat = g @ g.conj().T
    mat = (mat + mat.conj().T) / 2
    return DensityMatrix(dims, mat / np.real(np.trace(mat)))


def validate(rho: DensityMatrix, tol: float = VALIDATE_TOL) -> list[str]:
    """Return the list of violated density-matrix conditions (empty if valid)."""
    mat = rho.matrix
    violations = []
    herm_err = float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0
    if herm_err > tol:
        violations.append(f"not Hermitian: max |rho - rho^dagger| = {herm_err:.3e}")
    tr = np.trace(mat)
    if abs(tr - 1.0) > tol:
        violations.append(f"trace is {tr.real:.12g}{tr.imag:+.3g}j, expected 1")
    min_eig = float(np.min(np.linalg.eigvalsh((mat + mat.conj().T) / 2)))
    if min_eig < -tol:
        violations.append(f"not positive semidefinite: smallest eigenvalue {min_eig:.3e}")
    return violations


def is_permutation_invariant(rho: DensityMatrix, tol: float = VALIDATE_TOL) -> bool:
    """True iff ``rho`` commutes with every swap of neighbouring parties.

    Adjacent transpositions generate the symmetric group, so this covers
    every qudit permutation.
    """
    dims = rho.dims
    if len(set(dims)) != 1:
        raise UnsupportedError(f"permutation invariance needs equal local dimensions, got {dims}")
    n = rho.n
    for s in range(n - 1):
        order = list(range(n))
        order[s], order[s + 1] = order[s + 1], order[s]
        swapped = _permute_parties(rho.matrix, dims, order)
        if np.max(np.abs(swapped - rho.matrix)) > tol:
            return False
    return True


def to_json(rho: DensityMatrix) -> dict:
    """Serialize to ``{"dims": [...], "matrix": [[[re, im], ...], ...]}``."""
    mat = rho.matrix
    return {
        "dims": list(rho.dims),
        "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in mat],
    }


def from_json(obj: dict, tol: float = FILE_TOL, source: str | None = None) -> DensityMatrix:
    """Inverse of :func:`to_json`; rejects states failing :func:`validate` at ``tol``."""
    try:
        dims = obj["dims"]
        raw = np.asarray(obj["matrix"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidStateError([f"malformed density-matrix document ({exc})"], source) from None
    if raw.ndim != 3 or raw.shape[-1] != 2:
        raise InvalidStateError(
            [f"matrix must be a 2-D array of [re, im] pairs, got shape {raw.shape}"], source
        )
    try:
        rho = DensityMatrix(dims, raw[..., 0] + 1j * raw[..., 1])
    except (InvalidDimensionError, TypeError, ValueError) as exc:
        raise InvalidStateError([str(exc)], source) from None
    violations = validate(rho, tol)
    if violations:
        raise InvalidStateError(violations, source)
    return rho


def save_density(rho: DensityMatrix, path: str | PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(to_json(rho), fh)


def load_density(path: str | PathLike, tol: float = FILE_TOL) -> DensityMatrix:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidStateError([f"cannot read density matrix: {exc}"], str(path)) from None
    return from_json(obj, tol, source=str(path))
