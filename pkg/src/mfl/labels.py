"""Basis labels and their JSON encoding.

A label names one orthonormal basis vector.  Three families are used:

* non-negative ``int``            -- ``{"int": x}``
* ``tuple`` of letters >= 1       -- ``{"word": [l1, ...]}``  (``()`` is the vacuum)
* :class:`Pair` ``(branch, inner)`` -- ``{"pair": [branch, <label>]}``
"""

from __future__ import annotations

import json
from operator import itemgetter
from typing import Any, Union

_PAIR_TAG = "pair"

OMEGA: tuple[int, ...] = ()


class Pair(tuple):
    """Label of a direct-sum summand: ``inner`` living in block ``branch``.

    Stored as a tagged 3-tuple so a pair never compares equal to a word.
    """

    __slots__ = ()

    def __new__(cls, branch: int, inner: "Label") -> "Pair":
        return tuple.__new__(cls, (_PAIR_TAG, branch, inner))

    branch = property(itemgetter(1))
    inner = property(itemgetter(2))

    def __repr__(self) -> str:
        return f"Pair({self[1]!r}, {self[2]!r})"

    def __getnewargs__(self):
        return (self[1], self[2])


Label = Union[int, tuple, Pair]


def is_pair(x: Any) -> bool:
    return type(x) is Pair


def is_word(x: Any) -> bool:
    return type(x) is tuple


def is_int(x: Any) -> bool:
    return type(x) is int


def label_to_json(x: Label) -> dict:
    if type(x) is int:
        return {"int": x}
    if type(x) is Pair:
        return {"pair": [x[1], label_to_json(x[2])]}
    if type(x) is tuple:
        return {"word": list(x)}
    raise TypeError(f"not a basis label: {x!r}")


def label_from_json(obj: Any) -> Label:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ValueError(f"label JSON must be a one-key object, got {obj!r}")
    (tag, value), = obj.items()
    if tag == "int":
        if type(value) is not int or value < 0:
            raise ValueError(f"int label must be a non-negative integer, got {value!r}")
        return value
    if tag == "word":
        if not isinstance(value, list) or any(type(a) is not int or a < 1 for a in value):
            raise ValueError(f"word label must be a list of integers >= 1, got {value!r}")
        return tuple(value)
    if tag == "pair":
        if not isinstance(value, list) or len(value) != 2 or type(value[0]) is not int or value[0] < 0:
            raise ValueError(f"pair label must be [branch, label], got {value!r}")
        return Pair(value[0], label_from_json(value[1]))
    raise ValueError(f"unknown label tag {tag!r}")


def label_key(x: Label) -> str:
    """Stable string form, used as a JSON object key."""
    return json.dumps(label_to_json(x), separators=(",", ":"))


def sort_key(x: Label):
    """Total order over mixed label families (deterministic reports)."""
    if type(x) is int:
        return (0, x)
    if type(x) is Pair:
        return (2, x[1], sort_key(x[2]))
    return (1, len(x), x)


def format_label(x: Label) -> str:
    if type(x) is int:
        return f"e{x}"
    if type(x) is Pair:
        return f"({x[1]}|{format_label(x[2])})"
    if not x:
        return "Ω"
    return "w" + ".".join(map(str, x))
