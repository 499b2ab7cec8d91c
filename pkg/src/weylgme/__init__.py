"""Genuine multipartite entanglement detection from Weyl-basis correlation tensors.

Typical use::

    >>> from weylgme import detect, ghz_state, white_noise_mix
    >>> report = detect(white_noise_mix(ghz_state(4), 0.6), (0.1, 1.2), use_pi=True)
    >>> report.gme_detected_pi
    True
"""

from .correlation import (
    CorrelationTensor,
    FMatrix,
    extract_tensor,
    f_matrix,
    reconstruct,
    s_matrix,
    t_vector,
)
from .criteria import (
    BipartitionRecord,
    CriterionParams,
    CriterionReport,
    aggregate_t,
    bipartition_check,
    detect,
    j_threshold,
    k_threshold,
    threshold_w,
    trace_norm,
)
from .errors import (
    InvalidDimensionError,
    InvalidIndexError,
    InvalidStateError,
    PreconditionError,
    UnsupportedError,
    WeylGMEError,
)
from .gpops import WeylIndex, WeylOp, check_algebra, primitive_root, weyl_basis, weyl_op
from .partitions import Bipartition, enumerate_bipartitions
from .states import (
    DensityMatrix,
    ghz_state,
    is_permutation_invariant,
    load_density,
    maximally_mixed,
    partial_trace,
    product_state,
    random_density,
    save_density,
    validate,
    w_state,
    white_noise_mix,
)

__version__ = "0.1.0"
