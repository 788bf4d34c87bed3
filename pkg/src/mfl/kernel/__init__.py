"""Batch evaluation: a compiled kernel with a pure-Python fallback."""

from .batch import (
    BatchFailure,
    CompiledEvaluator,
    Evaluator,
    PythonEvaluator,
    Sparse,
    Terms,
    get_evaluator,
    kernel_available,
    kernel_mode,
    labels_equal,
    sparse_mismatch,
    split_sum,
    terms_agree,
    then,
    wrap_sum,
    wrap_terms,
)

__all__ = [
    "BatchFailure", "CompiledEvaluator", "Evaluator", "PythonEvaluator", "Sparse", "Terms",
    "get_evaluator", "kernel_available", "kernel_mode", "labels_equal", "sparse_mismatch",
    "split_sum", "terms_agree", "then", "wrap_sum", "wrap_terms",
]
