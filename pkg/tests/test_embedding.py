from __future__ import annotations

import pytest

from mfl import OMEGA, apply_embedded, decode_index, make_cycle_rep, make_free_infinity_rep, make_standard_rep
from mfl.errors import InvalidIndex, SignatureMismatch


def test_decode_index_examples():
    assert decode_index(3, 5)[2:] == (2, 1)
    assert decode_index(2, 7)[2:] == (6, 1)
    for n in (2, 3, 4, 5):
        for i in range(1, n):
            assert decode_index(n, i)[2:] == (0, i)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_decode_index_is_euclidean(n):
    for j in range(1, 60):
        _, _, k, i = decode_index(n, j)
        assert j == (n - 1) * k + i and 1 <= i <= n - 1


def test_apply_embedded_examples():
    assert apply_embedded(make_standard_rep(2), 2, 0) == (1, 1)
    assert apply_embedded(make_cycle_rep(3, 3, 1), 3, OMEGA) == (1, (3, 1))
    assert apply_embedded(make_cycle_rep(2, 2, 1), 1, OMEGA, adjoint=True) is None


def test_apply_embedded_adjoint_inverts():
    rep = make_cycle_rep(3, 1, -1)
    for x in rep.labels(3):
        for j in range(1, 9):
            ph, y = apply_embedded(rep, j, x)
            back = apply_embedded(rep, j, y, adjoint=True)
            assert back[1] == x and abs(back[0] * ph - 1) < 1e-12


def test_embedding_errors():
    with pytest.raises(InvalidIndex):
        decode_index(3, 0)
    with pytest.raises(InvalidIndex):
        apply_embedded(make_standard_rep(2), 0, 0)
    with pytest.raises(SignatureMismatch):
        apply_embedded(make_free_infinity_rep(), 1, OMEGA)
