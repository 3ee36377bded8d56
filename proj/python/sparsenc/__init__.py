"""Sparse linear encoders via column subset selection."""

import json as _json

from ._sparsenc import (
    InputError,
    NumericalError,
    adaptive_sample,
    adaptive_schedule,
    allones_sanity,
    approx_top_right_singular,
    avg_column_sparsity,
    best_rank_k_in_span,
    boost_best_of,
    combined_sparsity,
    deflate,
    encode,
    encoder_from_columns,
    generate_synthetic,
    information_loss,
    load_matrix,
    materialize_sampling,
    normalized_information_loss,
    optimal_decoder,
    orthonormalize,
    pseudo_inverse,
    qr_thin,
    reconstruct,
    save_matrix,
    select_columns_greedy,
    select_columns_randomized,
    sparse_components_deflation,
    svd,
    symmetric_explained_variance,
    tpower,
    truncate_rank,
    variance_conversion_check,
)
from ._sparsenc import batch_encoder as _batch_encoder
from ._sparsenc import iterative_encoder as _iterative_encoder

__all__ = [
    "InputError",
    "NumericalError",
    "adaptive_sample",
    "adaptive_schedule",
    "allones_sanity",
    "approx_top_right_singular",
    "avg_column_sparsity",
    "batch_encoder",
    "best_rank_k_in_span",
    "boost_best_of",
    "combined_sparsity",
    "deflate",
    "encode",
    "encoder_from_columns",
    "generate_synthetic",
    "information_loss",
    "iterative_encoder",
    "load_matrix",
    "materialize_sampling",
    "normalized_information_loss",
    "optimal_decoder",
    "orthonormalize",
    "pseudo_inverse",
    "qr_thin",
    "reconstruct",
    "save_matrix",
    "select_columns_greedy",
    "select_columns_randomized",
    "sparse_components_deflation",
    "svd",
    "symmetric_explained_variance",
    "tpower",
    "truncate_rank",
    "variance_conversion_check",
]


def batch_encoder(x, k, r, strategy="randomized", seed=0, trials=1):
    """Build a batch encoder; returns (H, G, report dict)."""
    h, g, report = _batch_encoder(x, k, r, strategy, seed, trials)
    return h, g, _json.loads(report)


def iterative_encoder(x, k, schedule, strategy="randomized", seed=0, trials=1):
    """Build an iterative encoder; returns (H, G, report dict)."""
    h, g, report = _iterative_encoder(x, k, schedule, strategy, seed, trials)
    return h, g, _json.loads(report)
