"""Cuntz-algebra representations as monomial operators, and the functors between them."""

from .closedform import ClosedFormCase, build_A, classify_case, closed_generator_apply
from .descriptors import parse_descriptor
from .embedding import EmbeddedIndex, apply_embedded, decode_index
from .errors import MFLError
from .exprlang import evaluate, parse
from .functor import (
    FunctorSpec,
    functor_apply,
    functor_extend,
    functor_morphism,
    functor_restrict,
)
from .labels import OMEGA, Pair, label_from_json, label_to_json
from .repcore import (
    INF,
    IntertwinerMap,
    MonomialRep,
    VectorSum,
    check_intertwiner,
    direct_sum,
    make_cycle_rep,
    make_free_infinity_rep,
    make_standard_rep,
    make_zero_rep,
)
from .seriesops import INFINITE_TAIL, NOT_IN_ANY_RANGE, InRange, apply_Q, apply_R, apply_U, strip_classify

__version__ = "0.1.0"

__all__ = [
    "INF", "OMEGA", "Pair", "VectorSum", "MonomialRep", "IntertwinerMap", "MFLError",
    "make_standard_rep", "make_cycle_rep", "make_free_infinity_rep", "make_zero_rep", "direct_sum",
    "check_intertwiner", "label_to_json", "label_from_json",
    "EmbeddedIndex", "decode_index", "apply_embedded",
    "InRange", "INFINITE_TAIL", "NOT_IN_ANY_RANGE", "strip_classify", "apply_Q", "apply_R", "apply_U",
    "FunctorSpec", "functor_apply", "functor_restrict", "functor_extend", "functor_morphism",
    "ClosedFormCase", "classify_case", "build_A", "closed_generator_apply",
    "parse", "evaluate", "parse_descriptor",
]
