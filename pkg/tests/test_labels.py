from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mfl.labels import OMEGA, Pair, format_label, label_from_json, label_key, label_to_json, sort_key

labels = st.recursive(
    st.integers(min_value=0, max_value=10**12) | st.lists(st.integers(1, 9), max_size=6).map(tuple),
    lambda inner: st.builds(Pair, st.integers(0, 4), inner),
    max_leaves=4,
)


@given(labels)
def test_json_round_trip(x):
    assert label_from_json(label_to_json(x)) == x
    assert label_from_json(json.dumps(label_to_json(x))) == x


@given(st.lists(labels, max_size=8))
def test_sort_key_is_total(xs):
    ordered = sorted(xs, key=sort_key)
    assert sorted(ordered, key=sort_key) == ordered


def test_encodings():
    assert label_to_json(5) == {"int": 5}
    assert label_to_json(OMEGA) == {"word": []}
    assert label_to_json(Pair(1, (2, 3))) == {"pair": [1, {"word": [2, 3]}]}
    assert label_key(7) == '{"int":7}'
    assert format_label(OMEGA) == "Ω"
    assert format_label(Pair(0, 3)) == "(0|e3)"


@pytest.mark.parametrize("bad", [
    {"int": -1}, {"word": [0]}, {"pair": [0]}, {"int": 1, "word": []}, {"vec": 1}, [1], {"int": 1.5},
])
def test_rejects_malformed_json(bad):
    with pytest.raises(ValueError):
        label_from_json(bad)
