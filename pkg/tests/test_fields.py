from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hhx.fields import GF, QQ, FieldError, field_to_json, parse_field

rationals = st.fractions(
    min_value=-10**6, max_value=10**6, max_denominator=10**4
)


def test_rational_coercion():
    assert QQ(3) == Fraction(3)
    assert QQ("2/4") == Fraction(1, 2)
    assert QQ("-7") == Fraction(-7)
    assert QQ(Fraction(5, 3)) == Fraction(5, 3)


def test_rational_rejects_floats():
    with pytest.raises(FieldError):
        QQ(0.5)


def test_rational_show_roundtrip():
    for s in ["0", "5", "-3", "7/2", "-11/13"]:
        assert QQ.show(QQ(s)) == s
    # canonical form reduces
    assert QQ.show(QQ("4/8")) == "1/2"


@given(rationals)
def test_rational_parse_show(a):
    assert QQ.parse(QQ.show(a)) == a


@given(rationals.filter(lambda a: a != 0))
def test_rational_inverse(a):
    assert a * QQ.inv(a) == 1


def test_gf_validation():
    with pytest.raises(FieldError):
        GF(4)
    with pytest.raises(FieldError):
        GF(1)
    with pytest.raises(FieldError):
        GF(2**31 + 11)
    assert GF(2).char == 2
    assert GF(2147483647).char == 2147483647  # largest admissible prime


def test_gf_cached():
    assert GF(5) is GF(5)


def test_gf_arithmetic():
    F = GF(7)
    assert F(10) == 3
    assert F(-1) == 6
    assert F.inv(3) == 5
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_gf_rational_reduction():
    F = GF(5)
    assert F(Fraction(1, 2)) == 3  # 2 * 3 = 6 = 1 mod 5
    assert F.parse("1/2") == 3
    with pytest.raises(FieldError):
        F(Fraction(1, 5))


@given(st.integers(min_value=1, max_value=10**9))
def test_gf_fermat(n):
    F = GF(1009)
    a = n % 1009
    if a:
        assert pow(a, 1008, 1009) == 1
        assert F.inv(a) * a % 1009 == 1


def test_parse_field_specs():
    assert parse_field("Q") is QQ
    assert parse_field({"Fp": 3}) == GF(3)
    assert parse_field("Fp:11") == GF(11)
    with pytest.raises(FieldError):
        parse_field("R")
    with pytest.raises(FieldError):
        parse_field({"Fp": "three"})


def test_field_json_roundtrip():
    assert field_to_json(QQ) == "Q"
    assert field_to_json(GF(2)) == {"Fp": 2}
    assert parse_field(field_to_json(GF(13))) == GF(13)
