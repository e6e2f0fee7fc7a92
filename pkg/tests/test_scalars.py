import cmath
import random
from fractions import Fraction

import pytest

from potalg.scalars import (
    Cyclotomic72,
    DivisionByZero,
    MixedBackends,
    PrimeField,
    Rationals,
    Scalar,
    UnsupportedOrder,
    field_from_name,
    make_root_of_unity,
    named_constant,
    scalar_arith,
)

QQ = Rationals()
CY = Cyclotomic72()
FP = PrimeField(1009)


def test_rationals_basic():
    a = QQ.scalar(Fraction(3, 4))
    b = QQ.scalar(2)
    assert a + b == Fraction(11, 4)
    assert a * b == Fraction(3, 2)
    assert (a / b).value == Fraction(3, 8)
    assert -(a - a) == 0
    assert b.inv() == Fraction(1, 2)


def test_prime_field_frozen_values():
    # Least primitive root mod 1009 is 11 (brute-force search), so the
    # order-8 root is 11^126 = 762 since 1008/8 = 126.
    assert FP.primitive_root() == 11
    assert make_root_of_unity(FP, 8).value == 762
    assert pow(11, 126, 1009) == 762
    # 2 * 505 = 1010 = 1009 + 1
    assert FP.scalar(2).inv().value == 505


def test_prime_field_root_orders_frozen():
    expected = {1: 1, 2: 1008, 3: 374, 4: 469, 8: 762, 9: 922, 72: 200}
    for order, value in expected.items():
        r = make_root_of_unity(FP, order)
        assert r.value == value
        assert (r ** order).value == 1
        assert all((r ** k).value != 1 for k in range(1, order))


def test_cyclotomic_constants():
    theta = named_constant(CY, "theta")
    i = named_constant(CY, "i")
    xi8 = named_constant(CY, "xi8")
    xi9 = named_constant(CY, "xi9")
    one = CY.scalar(1)
    assert theta ** 3 == one and theta != one
    assert theta * theta + theta + 1 == 0
    assert i * i == -one
    assert xi8 ** 4 == -one
    assert xi9 ** 3 == theta
    assert xi8 ** 2 == i


def test_prime_field_constants_consistent():
    theta = named_constant(FP, "theta")
    i = named_constant(FP, "i")
    assert theta.value == 374 and i.value == 469
    assert theta * theta + theta + 1 == 0
    assert i * i == -FP.scalar(1)
    assert named_constant(FP, "xi9") ** 3 == theta
    assert named_constant(FP, "xi8") ** 2 == i


def test_root_of_unity_exact_order():
    for field in (CY, FP):
        for order in (1, 2, 3, 4, 6, 8, 9, 12, 72):
            r = make_root_of_unity(field, order)
            assert (r ** order).value == field.one()
            for k in range(1, order):
                assert (r ** k).value != field.one()
            # deterministic: repeated calls give the identical element
            assert make_root_of_unity(field, order) == r
    assert make_root_of_unity(QQ, 1) == 1
    assert make_root_of_unity(QQ, 2) == -QQ.scalar(1)


def test_unsupported_orders():
    with pytest.raises(UnsupportedOrder):
        make_root_of_unity(QQ, 3)
    with pytest.raises(UnsupportedOrder):
        make_root_of_unity(CY, 5)
    with pytest.raises(UnsupportedOrder):
        make_root_of_unity(FP, 7)


def test_division_errors():
    with pytest.raises(DivisionByZero):
        CY.scalar(0).inv()
    with pytest.raises(DivisionByZero):
        FP.scalar(3) / FP.scalar(0)
    with pytest.raises(DivisionByZero):
        FP.scalar(Fraction(1, 1009))


def test_mixed_backends_rejected():
    with pytest.raises(MixedBackends):
        QQ.scalar(1) + FP.scalar(1)
    with pytest.raises(MixedBackends):
        scalar_arith(CY.scalar(1), PrimeField(1009).scalar(1), "eq")
    # same backend constructed twice is fine
    assert PrimeField(1009).scalar(5) + FP.scalar(4) == 9


def test_scalar_arith_dispatch():
    a, b = FP.scalar(7), FP.scalar(3)
    assert scalar_arith(a, b, "add") == 10
    assert scalar_arith(a, b, "sub") == 4
    assert scalar_arith(a, b, "mul") == 21
    assert scalar_arith(a, b, "div").value == 7 * pow(3, -1, 1009) % 1009
    assert scalar_arith(a, None, "neg").value == 1009 - 7
    assert scalar_arith(a, None, "inv") * a == 1
    assert scalar_arith(a, b, "eq") is False


def _random_raw(field, rng):
    if field is QQ:
        return Fraction(rng.randrange(-20, 21), rng.randrange(1, 9))
    if field is CY:
        c = [Fraction(0)] * 24
        for _ in range(rng.randrange(1, 5)):
            c[rng.randrange(24)] = Fraction(rng.randrange(-9, 10), rng.randrange(1, 4))
        return tuple(c)
    return rng.randrange(field.p)


def test_field_axioms_random():
    rng = random.Random(72)
    for field in (QQ, CY, FP):
        for _ in range(40):
            a = field.scalar(_random_raw(field, rng))
            b = field.scalar(_random_raw(field, rng))
            c = field.scalar(_random_raw(field, rng))
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a + (-a) == 0
            if b:
                assert b * b.inv() == 1
                assert (a / b) * b == a


def _eval_complex(t):
    zeta = cmath.exp(2j * cmath.pi / 72)
    return sum(float(c) * zeta ** k for k, c in enumerate(t))


def test_cyclotomic_numeric_oracle():
    # Independent check of the power-basis arithmetic: evaluate at the
    # complex primitive 72nd root of unity and compare in floating point.
    rng = random.Random(1234)
    for _ in range(60):
        a = _random_raw(CY, rng)
        b = _random_raw(CY, rng)
        prod = CY.mul(a, b)
        assert cmath.isclose(
            _eval_complex(prod), _eval_complex(a) * _eval_complex(b),
            rel_tol=1e-8, abs_tol=1e-8)
        if not CY.is_zero(a):
            ia = CY.inv(a)
            assert cmath.isclose(
                _eval_complex(ia) * _eval_complex(a), 1.0,
                rel_tol=1e-8, abs_tol=1e-8)
            assert CY.mul(ia, a) == CY.one()


def test_prime_field_validation():
    with pytest.raises(ValueError):
        PrimeField(1008)  # not prime
    with pytest.raises(ValueError):
        PrimeField(1013)  # prime but not 1 mod 72
    assert PrimeField(73).p == 73


def test_field_from_name():
    assert field_from_name("q") == QQ
    assert field_from_name("cyclo72") == CY
    assert field_from_name("fp:1009") == FP
    assert field_from_name("fp") == FP
    with pytest.raises(ValueError):
        field_from_name("gf9")


def test_format_simple():
    assert repr(CY.scalar(0)) == "0"
    assert repr(CY.scalar(Fraction(-3, 2))) == "-3/2"
    assert repr(named_constant(CY, "i")) == "i"
    assert repr(named_constant(CY, "xi8")) == "xi8"
    assert repr(named_constant(CY, "xi9")) == "xi9"
    assert repr(FP.scalar(-1)) == "1008"
    assert repr(QQ.scalar(Fraction(7, -2))) == "-7/2"


def test_scalar_hash_and_immutability():
    s = CY.scalar(5)
    assert hash(s) == hash(CY.scalar(5))
    d = {s: "a"}
    assert d[CY.scalar(5)] == "a"
    with pytest.raises(AttributeError):
        s.value = None
