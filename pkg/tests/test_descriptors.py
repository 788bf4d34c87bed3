from __future__ import annotations

import pytest

from mfl import parse_descriptor
from mfl.errors import DescriptorError

ROUND_TRIP = [
    "std:2", "cyc:3:3:-1", "cyc:2:1:i", "free:inf", "zero:3", "zero:inf",
    "sum(std:2,cyc:2:2:1)", "F[3,2](std:2)", "Finf[3](cyc:3:3:1)", "Fext[2](free:inf)",
    "F[2,3](F[3,4](std:4))", "Finf[2](sum(std:2,F[2,3](cyc:3:1:-1)))",
]


@pytest.mark.parametrize("text", ROUND_TRIP)
def test_descriptor_round_trip(text):
    rep = parse_descriptor(text)
    assert parse_descriptor(rep.descriptor).descriptor == rep.descriptor


def test_nested_descriptor_equals_programmatic():
    from mfl.functor import functor_nm
    from mfl import make_standard_rep
    a = parse_descriptor("F[2,3](F[3,4](std:4))")
    b = functor_nm(2, functor_nm(3, make_standard_rep(4)))
    for x in range(200):
        for i in (1, 2):
            assert a.apply(i, x) == b.apply(i, x)
            assert a.apply_adjoint(i, x) == b.apply_adjoint(i, x)


def test_exp_phase():
    rep = parse_descriptor("cyc:2:2:exp:0.25")
    ph, _ = rep.apply(2, ())
    assert abs(ph - 1j) < 1e-12


@pytest.mark.parametrize("bad", ["", "std", "std:1", "cyc:2:3:1", "cyc:2:2:2", "foo:2", "sum()",
                                 "sum(std:2,std:3)", "F[3,2](std:3)", "F[3](std:2)", "std:2 x"])
def test_bad_descriptors(bad):
    with pytest.raises(DescriptorError):
        parse_descriptor(bad)
