"""Trace-norm separability and GME criteria.

For a bipartition ``l_1..l_{k-1} | l_k..l_n`` a state separable across it
satisfies ``||F||_tr <= W``, with ``F`` from :func:`weylgme.correlation.f_matrix`
and ``W`` from :func:`threshold_w`.  Averaging ``||F||_tr`` over every
bipartition with at most ``n // 2`` parties on the left gives ``T(rho)``; a
state with ``T(rho) > K`` (the largest ``W``) is genuinely multipartite
entangled, and for permutation-invariant states ``T(rho) > J`` (the mean
``W``) already suffices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import prod
from typing import Sequence

import numpy as np

from .correlation import CorrelationTensor, extract_tensor, f_matrix
from .errors import InvalidIndexError, PreconditionError, UnsupportedError
from .partitions import Bipartition, enumerate_bipartitions
from .states import DensityMatrix, as_dims, is_permutation_invariant

__all__ = [
    "CriterionParams",
    "BipartitionRecord",
    "CriterionReport",
    "VERDICT_TOL",
    "trace_norm",
    "full_vector_bound",
    "threshold_w",
    "bipartition_check",
    "aggregate_t",
    "k_threshold",
    "j_threshold",
    "detect",
]

# strict inequalities need this much clearance; ties count as "not detected"
VERDICT_TOL = 1e-12


@dataclass(frozen=True)
class CriterionParams:
    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError(f"alpha and beta must be finite, got ({a}, {b})")
        if a == 0 and b == 0:
            raise ValueError("alpha and beta cannot both be zero")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)


@dataclass(frozen=True)
class BipartitionRecord:
    bipartition: Bipartition
    norm: float
    threshold: float
    excluded: bool

    @property
    def margin(self) -> float:
        """``W - ||F||_tr``; negative when the bipartition is excluded."""
        return self.threshold - self.norm


@dataclass(frozen=True)
class CriterionReport:
    dims: tuple[int, ...]
    params: CriterionParams
    records: tuple[BipartitionRecord, ...]
    T: float
    K: float
    J: float | None = None
    gme_detected: bool = False
    gme_detected_pi: bool | None = None
    excluded: tuple[Bipartition, ...] = field(default=())

    @property
    def min_margin(self) -> float:
        return min(r.margin for r in self.records)

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "alpha": self.params.alpha,
            "beta": self.params.beta,
            "T": self.T,
            "K": self.K,
            "J": self.J,
            "gme_detected": self.gme_detected,
            "gme_detected_pi": self.gme_detected_pi,
            "min_margin": self.min_margin,
            "excluded_bipartitions": [str(b) for b in self.excluded],
            "bipartitions": [
                {
                    "bipartition": str(r.bipartition),
                    "trace_norm": r.norm,
                    "threshold": r.threshold,
                    "margin": r.margin,
                    "excluded": r.excluded,
                }
                for r in self.records
            ],
        }


def _as_params(params) -> CriterionParams:
    if isinstance(params, CriterionParams):
        return params
    return CriterionParams(*params)


def trace_norm(mat) -> float:
    """Sum of the singular values of a (possibly rectangular) complex matrix."""
    mat = np.asarray(mat)
    if mat.size == 0:
        return 0.0
    return float(np.sum(np.linalg.svd(mat, compute_uv=False)))


def full_vector_bound(dims: Sequence[int]) -> float:
    """Upper bound on ``||T^{(1..m)}||`` (all local indices nonzero) for states on ``dims``.

    ``sqrt([D (m - 1 - sum_s d_s**-2) + 1] / (m - 1))`` for ``m >= 2`` parties
    and ``sqrt(d - 1)`` for a single party.
    """
    dims = as_dims(dims)
    m = len(dims)
    if m == 1:
        return math.sqrt(dims[0] - 1)
    D = prod(dims)
    inv_sq = sum(1.0 / d**2 for d in dims)
    return math.sqrt((D * (m - 1 - inv_sq) + 1) / (m - 1))


def _check_bipartition(bipartition: Bipartition, dims: tuple[int, ...]) -> None:
    n = len(dims)
    if n < 3:
        raise UnsupportedError(f"the criteria need at least 3 parties, got n={n}")
    if bipartition.n != n:
        raise InvalidIndexError(f"bipartition {bipartition} does not cover {n} parties")
    if len(bipartition.left) > n // 2:
        raise UnsupportedError(f"left part of {bipartition} is larger than n//2")


def threshold_w(bipartition: Bipartition, dims: Sequence[int], params) -> float:
    """Separability bound ``W`` for ``||F||_tr`` across ``bipartition``.

    With ``L`` the left parties, ``l_k`` the lead right party and ``R`` all
    right parties::

        W = b(L) * (|alpha| sqrt(d_{l_k} - 1) + |beta| b(R))

    where ``b`` is :func:`full_vector_bound` (``sqrt(d - 1)`` for one party).
    """
    dims = as_dims(dims)
    params = _as_params(params)
    _check_bipartition(bipartition, dims)
    left_dims = [dims[p - 1] for p in bipartition.left]
    right_dims = [dims[p - 1] for p in bipartition.right]
    lead = dims[bipartition.lead - 1]
    return full_vector_bound(left_dims) * (
        abs(params.alpha) * math.sqrt(lead - 1) + abs(params.beta) * full_vector_bound(right_dims)
    )


def bipartition_check(tensor: CorrelationTensor, bipartition: Bipartition, params) -> BipartitionRecord:
    """Evaluate ``||F||_tr`` against ``W``; ``excluded`` means provably not separable across the split."""
    params = _as_params(params)
    w = threshold_w(bipartition, tensor.dims, params)
    norm = trace_norm(f_matrix(tensor, bipartition, params.alpha, params.beta).matrix)
    return BipartitionRecord(bipartition, norm, w, norm > w + VERDICT_TOL)


def _records(tensor: CorrelationTensor, params: CriterionParams) -> list[BipartitionRecord]:
    return [bipartition_check(tensor, bp, params) for bp in enumerate_bipartitions(tensor.n)]


def aggregate_t(tensor: CorrelationTensor, params) -> float:
    """Mean of ``||F||_tr`` over :func:`enumerate_bipartitions`.

    The divisor ``sum_{s=1}^{n//2} C(n, s)`` is exactly the number of
    bipartitions enumerated, so this is a plain average.
    """
    params = _as_params(params)
    records = _records(tensor, params)
    return math.fsum(r.norm for r in records) / len(records)


def _thresholds(dims: Sequence[int], params) -> list[float]:
    dims = as_dims(dims)
    params = _as_params(params)
    return [threshold_w(bp, dims, params) for bp in enumerate_bipartitions(len(dims))]


def k_threshold(dims: Sequence[int], params) -> float:
    """Largest ``W`` over all enumerated bipartitions."""
    return max(_thresholds(dims, params))


def j_threshold(dims: Sequence[int], params) -> float:
    """Mean ``W`` over all enumerated bipartitions; only for equal local dimensions."""
    dims = as_dims(dims)
    if len(set(dims)) != 1:
        raise UnsupportedError(f"J is defined for permutation-invariant states; dims {dims} are unequal")
    ws = _thresholds(dims, params)
    return math.fsum(ws) / len(ws)


def detect(rho: DensityMatrix, params=CriterionParams(), use_pi: bool = False) -> CriterionReport:
    """Run every bipartition check and the GME tests on ``rho``.

    With ``use_pi`` the state must be permutation invariant and the
    mean threshold ``J`` is evaluated alongside ``K``.
    """
    params = _as_params(params)
    if rho.n < 3:
        raise UnsupportedError(f"the criteria need at least 3 parties, got n={rho.n}")
    if use_pi and not is_permutation_invariant(rho):
        raise PreconditionError("use_pi requested but the state is not permutation invariant")
    tensor = extract_tensor(rho)
    records = _records(tensor, params)
    T = math.fsum(r.norm for r in records) / len(records)
    K = max(r.threshold for r in records)
    J = j_threshold(rho.dims, params) if use_pi else None
    return CriterionReport(
        dims=rho.dims,
        params=params,
        records=tuple(records),
        T=T,
        K=K,
        J=J,
        gme_detected=T > K + VERDICT_TOL,
        gme_detected_pi=(T > J + VERDICT_TOL) if use_pi else None,
        excluded=tuple(r.bipartition for r in records if r.excluded),
    )
