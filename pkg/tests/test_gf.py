import pytest
from hypothesis import given, settings, strategies as st

from dmst.errors import (
    DivisionByZeroError,
    FieldMismatchError,
    FieldTooLargeError,
    NoDefaultModulusError,
    NotPrimeError,
    ReducibleModulusError,
)
from dmst.gf import DEFAULT_MODULI, Field, FieldElement, arith, enumerate_field, field_create, frobenius, gf

SMALL_Q = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64]


def test_prime_field_default():
    F = field_create(2, 1)
    assert (F.p, F.r, F.q) == (2, 1, 2)


def test_f4_from_modulus():
    F = field_create(2, 2, [1, 1, 1])
    u = F.u
    assert u * u == u + 1
    assert F.describe() == "2^2/1,1,1"


def test_reducible_modulus_rejected():
    with pytest.raises(ReducibleModulusError):
        field_create(2, 2, [1, 0, 1])


def test_not_prime_and_missing_default():
    with pytest.raises(NotPrimeError):
        field_create(4, 1)
    with pytest.raises(NoDefaultModulusError):
        field_create(11, 2)


def test_default_table_covers_small_extensions():
    for q in [4, 8, 9, 16, 25, 27, 32, 49, 64]:
        F = gf(q)
        assert (F.p, F.r) in DEFAULT_MODULI


def test_arith_examples():
    F2, F3, F4 = gf(2), gf(3), gf(4)
    assert arith(F2(1), F2(1), "add") == 0
    assert arith(F4.u, F4.u, "mul") == F4.u + 1
    assert arith(F3(2), None, "inv") == 2
    assert arith(F3(2), 3, "pow") == 2


def test_division_by_zero():
    F = gf(5)
    with pytest.raises(DivisionByZeroError):
        arith(F(3), F(0), "div")
    with pytest.raises(ZeroDivisionError):
        F(0).inverse()


def test_cross_field_arithmetic_is_an_error():
    with pytest.raises(FieldMismatchError):
        gf(3)(1) + gf(5)(1)


def test_frobenius_examples():
    F4 = gf(4)
    assert frobenius(F4.u, 1) == F4.u + 1
    assert frobenius(F4.u, 0) == F4.u
    assert frobenius(gf(2)(1), 5) == 1


def test_enumerate_examples():
    elements, zeta = enumerate_field(gf(2))
    assert [e.code for e in elements] == [0, 1] and zeta == 1
    elements, zeta = enumerate_field(gf(3))
    assert [e.code for e in elements] == [0, 1, 2] and zeta == 2
    F4 = gf(4)
    elements, zeta = enumerate_field(F4)
    assert [str(e) for e in elements] == ["0", "1", "u", "u+1"]
    assert zeta == F4.u


def test_enumeration_bound():
    F = Field(2, 17, (1, 0, 0, 1) + (0,) * 13 + (1,))
    with pytest.raises(FieldTooLargeError):
        enumerate_field(F)


@pytest.mark.parametrize("q", SMALL_Q)
def test_fermat_and_inverses(q):
    F = gf(q)
    elements, zeta = enumerate_field(F)
    assert len({e.code for e in elements}) == q
    for a in elements:
        assert a**q == a
        if a.code:
            assert a * a.inverse() == 1
    powers = {(zeta**i).code for i in range(q - 1)}
    assert len(powers) == q - 1


@pytest.mark.parametrize("q", [4, 8, 9, 16])
def test_frobenius_is_an_automorphism(q):
    F = gf(q)
    elements, _ = enumerate_field(F)
    for a in elements:
        for b in elements:
            assert frobenius(a * b, 1) == frobenius(a, 1) * frobenius(b, 1)
            assert frobenius(a + b, 1) == frobenius(a, 1) + frobenius(b, 1)


def test_print_parse_round_trip():
    assert Field.parse("2^2/1,1,1") == gf(4)
    for q in [9, 27, 16]:
        F = gf(q)
        for a in enumerate_field(F)[0]:
            assert F(str(a)) == a


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([7, 9, 25, 27, 32]), st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6))
def test_field_axioms(q, a, b, c):
    F = gf(q)
    x, y, z = (FieldElement(F, v % q) for v in (a, b, c))
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x - x == 0
    assert x + (-x) == 0


def test_big_exponents_do_not_overflow():
    F = gf(7)
    assert F(3) ** (7**40) == F(3)
