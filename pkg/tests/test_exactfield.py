from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from phimod.errors import FieldTooSmall, InvalidWitness, SchemaError, UncertifiedField, ZeroElement
from phimod.exactfield import (
    FieldSpec,
    fstr,
    nth_root,
    nth_root_with_source,
    parse_rational,
    resultant,
    vp,
    vp_rational,
)

Q5 = FieldSpec.rationals(5)
E3 = FieldSpec.quadratic(3, 3)  # Q(sqrt 3), Eisenstein at 3


def test_rational_formatting_round_trip():
    assert fstr(Fraction(3, 6)) == "1/2"
    assert fstr(Fraction(-4)) == "-4/1"
    assert parse_rational("7/21") == Fraction(1, 3)
    assert parse_rational(5) == 5


def test_certificates():
    assert Q5.certificate == "rational"
    assert E3.certificate == "eisenstein"
    assert FieldSpec.create(2, (1, 1, 1)).certificate == "irreducible-mod-p"
    # x^2 - 2 over p = 7 splits mod 7 and is not Eisenstein
    assert FieldSpec.create(7, (-2, 0, 1)).certificate == "none"
    with pytest.raises(SchemaError):
        FieldSpec.create(5, (-4, 0, 1))  # reducible over Q
    with pytest.raises(SchemaError):
        FieldSpec.create(6, (0, 1))


def test_generator_arithmetic():
    t = E3.gen
    assert t * t == 3
    assert 1 / t == t / 3
    assert (1 + t) * (1 - t) == -2
    assert (t ** -2) == E3(Fraction(1, 3))


def test_valuations_frozen():
    t = E3.gen
    assert vp(t) == Fraction(1, 2)
    assert vp(1 + t) == 0
    assert vp(E3(9) * t) == Fraction(5, 2)
    assert vp(Q5(Fraction(50, 3))) == 2
    assert vp_rational(Fraction(1, 125), 5) == -3


def test_valuation_errors():
    with pytest.raises(ZeroElement):
        vp(Q5.zero)
    F = FieldSpec.create(7, (-2, 0, 1))
    with pytest.raises(UncertifiedField):
        vp(F.gen)


def test_norm_and_resultant():
    t = E3.gen
    assert (2 + t).norm() == 1
    assert (2 + t).trace() == 4
    # Res(x^2 - 3, x - 2) = 2^2 - 3
    assert resultant([-3, 0, 1], [-2, 1]) == 1


def test_roots():
    assert nth_root(E3(3), 2) == E3.gen or nth_root(E3(3), 2) == -E3.gen
    r, src = nth_root_with_source(Q5(Fraction(8, 27)), 3)
    assert r == Q5(Fraction(2, 3)) and src == "rational"
    with pytest.raises(FieldTooSmall) as exc:
        nth_root(Q5(2), 2)
    assert "square" in exc.value.hint or "2-th root" in exc.value.hint
    with pytest.raises(InvalidWitness):
        nth_root(Q5(4), 2, witness=Q5(3))


small = st.fractions(min_value=-20, max_value=20, max_denominator=6)


@settings(max_examples=60, deadline=None)
@given(small, small, small, small)
def test_field_axioms(a0, a1, b0, b1):
    a, b = E3([a0, a1]), E3([b0, b1])
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) * a == a * a + b * a
    if not b.is_zero():
        assert (a / b) * b == a
        assert b * b.inverse() == 1


@settings(max_examples=60, deadline=None)
@given(small, small, small, small)
def test_valuation_is_multiplicative(a0, a1, b0, b1):
    a, b = E3([a0, a1]), E3([b0, b1])
    if a.is_zero() or b.is_zero():
        return
    assert vp(a * b) == vp(a) + vp(b)
    assert (a * b).norm() == a.norm() * b.norm()
