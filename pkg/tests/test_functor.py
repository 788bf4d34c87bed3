from __future__ import annotations

import pytest

from mfl import (
    OMEGA,
    FunctorSpec,
    direct_sum,
    functor_apply,
    functor_extend,
    functor_morphism,
    functor_restrict,
    make_cycle_rep,
    make_free_infinity_rep,
    make_standard_rep,
    make_zero_rep,
)
from mfl.errors import NotAMorphism, SignatureMismatch
from mfl.functor import functor_nm
from mfl.repcore import (
    INF,
    IntertwinerMap,
    block_inclusion,
    check_intertwiner,
    cuntz_violation,
    identity_map,
    zero_map,
)

from conftest import base_reps


def same_action(a, b, labels, gens) -> bool:
    for x in labels:
        for i in gens:
            for f in ("apply", "apply_adjoint"):
                p, q = getattr(a, f)(i, x), getattr(b, f)(i, x)
                if (p is None) != (q is None):
                    return False
                if p is not None and (p[1] != q[1] or abs(p[0] - q[0]) > 1e-9):
                    return False
    return True


def test_F32_on_std2_is_s2_squared():
    img = functor_nm(3, make_standard_rep(2))
    assert img.apply(3, 0) == (1, 3)
    std2 = make_standard_rep(2)
    for x in std2.labels(5):
        _, y = std2.apply(2, x)
        assert img.apply(3, x) == std2.apply(2, y)


def test_F32_on_cycle_rep():
    assert functor_nm(3, make_cycle_rep(2, 2, -1)).apply(3, OMEGA) == (-1, OMEGA)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_F_nn_is_identity(n):
    for rep in base_reps(n):
        assert same_action(functor_nm(n, rep), rep, rep.labels(3), range(1, n + 1))


@pytest.mark.parametrize("n,m", [(2, 3), (3, 2), (4, 3), (5, 2), (2, 5)])
def test_images_are_representations(n, m):
    for rep in base_reps(m):
        assert cuntz_violation(functor_nm(n, rep), rep.labels(4)) is None


@pytest.mark.parametrize("n,m,l", [(2, 3, 2), (3, 2, 4), (4, 3, 2), (2, 4, 3)])
def test_composition_law(n, m, l):
    for rep in base_reps(l)[:4]:
        lhs = functor_nm(n, functor_nm(m, rep))
        rhs = functor_nm(n, rep)
        assert same_action(lhs, rhs, rep.labels(3), range(1, n + 1))


def test_restriction_examples():
    r1 = functor_restrict(2, make_cycle_rep(2, 2, 1))
    r2 = functor_restrict(2, make_cycle_rep(2, 2, -1))
    assert r1.apply(1, OMEGA) == (1, (1,))
    assert r1.apply(2, OMEGA) == (1, (2, 1))
    assert same_action(r1, r2, r1.labels(4), range(1, 13))
    assert all(r2.apply_adjoint(j, OMEGA) is None for j in range(1, 9))


def test_restriction_after_F_nm():
    for rep in base_reps(3):
        lhs = functor_restrict(2, functor_nm(2, rep))
        assert same_action(lhs, functor_restrict(3, rep), rep.labels(3), range(1, 13))


def test_extension_examples():
    ext = functor_extend(2, make_free_infinity_rep())
    assert ext.apply(2, OMEGA) == (1, OMEGA)
    assert ext.apply(2, (3,)) == (1, (4,))
    fr = make_free_infinity_rep()
    for n in (2, 3, 4):
        back = functor_restrict(n, functor_extend(n, fr))
        assert same_action(back, fr, fr.labels(3), range(1, 13))


def test_extension_then_F_nm():
    fr = make_free_infinity_rep()
    lhs = functor_nm(3, functor_extend(2, fr))
    assert same_action(lhs, functor_extend(3, fr), fr.labels(3), range(1, 4))


def test_inf_inf_is_identity_and_signature_checks():
    fr = make_free_infinity_rep()
    assert functor_apply(FunctorSpec(INF, INF), fr) is fr
    with pytest.raises(SignatureMismatch):
        functor_apply(FunctorSpec(3, 2), make_standard_rep(3))
    with pytest.raises(SignatureMismatch):
        functor_restrict(3, make_standard_rep(2))


def test_zero_maps_to_zero():
    img = functor_nm(3, make_zero_rep(2))
    assert img.is_zero_rep and img.arity == 3


def test_label_space_is_preserved():
    rep = make_cycle_rep(3, 3, -1)
    img = functor_nm(2, rep)
    assert img.labels(4) == rep.labels(4)


def test_morphisms():
    a, b = make_standard_rep(2), make_cycle_rep(2, 2, 1)
    total = direct_sum([a, b])
    spec = FunctorSpec(3, 2)
    inc = functor_morphism(spec, block_inclusion(total, 0))
    assert check_intertwiner(inc, a.labels(4))
    ident = functor_morphism(spec, identity_map(a))
    assert ident.source.arity == 3 and check_intertwiner(ident, a.labels(4))
    z = functor_morphism(spec, zero_map(a, b))
    assert check_intertwiner(z, a.labels(4))
    shift = IntertwinerMap(a, a, lambda x: (1, x + 1), "shift")
    with pytest.raises(NotAMorphism):
        functor_morphism(spec, shift)
