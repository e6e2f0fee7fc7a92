import random
from fractions import Fraction

import pytest

from potalg.freealg import (
    LinearSub,
    NcPoly,
    PolySyntaxError,
    SingularSubstitution,
    UnknownConstant,
    UnknownGenerator,
    apply_substitution,
    cyclic_shift,
    cyclicize,
    is_cyclicly_invariant,
    left_derivative,
    parse_ncpoly,
    print_ncpoly,
    right_derivative,
)
from potalg.scalars import Cyclotomic72, PrimeField, Rationals, named_constant

QQ = Rationals()
CY = Cyclotomic72()
FP = PrimeField(1009)


def P(text, n=3, field=QQ, params=None):
    return parse_ncpoly(text, n, field, params)


def test_cyclic_shift():
    assert cyclic_shift(P("x*y*z")) == P("y*z*x")
    assert cyclic_shift(P("x^2*y + x*y*x")) == P("x*y*x + y*x^2")
    assert cyclic_shift(NcPoly.zero(QQ, 3)).is_zero()
    assert cyclic_shift(P("1 + x")) == P("1 + x")


def test_cyclicize():
    assert cyclicize(P("x^2*y")) == P("x^2*y + x*y*x + y*x^2")
    assert cyclicize(P("x^4")) == P("4*x^4")
    assert len(cyclicize(P("x*y*z - x*z*y")).terms) == 6
    # inhomogeneous input is cyclicized per degree
    assert cyclicize(P("x^2*y + x^4")) == P("x^2*y + x*y*x + y*x^2 + 4*x^4")


def test_derivatives():
    assert left_derivative(P("x^2*y + x*y*x + y*x^2"), 1) == P("x*y + y*x")
    assert right_derivative(P("z^3"), 3) == P("z^2")
    assert left_derivative(P("x^3"), 2).is_zero()
    assert right_derivative(P("x^2*y + x*y*x + y*x^2"), 1) == P("y*x + x*y")


def test_cyclic_invariance():
    assert is_cyclicly_invariant(P("x^2*y + x*y*x + y*x^2"))
    assert not is_cyclicly_invariant(P("x*y - y*x"))
    assert is_cyclicly_invariant(P("x^3"))
    assert is_cyclicly_invariant(cyclicize(P("x*y*z - 2*x*z*y + z^3")))


def test_apply_substitution_flips_family_signs():
    # x -> x, y -> i*y sends the quartic family with parameters (a, b)
    # to the one with parameters (-a, -b)
    i = named_constant(CY, "i")
    zero, one = CY.scalar(0), CY.scalar(1)
    sub = LinearSub(CY, [[one, zero], [zero, i]])
    fam = "x^4 + a*cyc(x^2*y^2) + b*cyc(x*y*x*y) + y^4"
    fab = parse_ncpoly(fam, 2, CY, {"a": 2, "b": 3})
    fneg = parse_ncpoly(fam, 2, CY, {"a": -2, "b": -3})
    assert apply_substitution(fab, sub) == fneg


def test_apply_substitution_basics():
    p = P("x^2*y + 5*z^3 - x")
    ident = LinearSub(QQ, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert apply_substitution(p, ident) == p
    swap = LinearSub(QQ, [[0, 1], [1, 0]])
    assert apply_substitution(P("x^2*y", n=2), swap) == P("y^2*x", n=2)


def test_substitution_round_trip():
    rng = random.Random(20)
    for _ in range(10):
        while True:
            m = [[rng.randrange(-3, 4) for _ in range(3)] for _ in range(3)]
            sub = LinearSub(QQ, m)
            try:
                inv = sub.inverse()
                break
            except SingularSubstitution:
                continue
        p = _random_poly(QQ, rng)
        assert apply_substitution(apply_substitution(p, sub), inv) == p


def test_singular_substitution_rejected():
    sub = LinearSub(QQ, [[1, 1], [1, 1]])
    with pytest.raises(SingularSubstitution):
        apply_substitution(P("x*y", n=2), sub)


def test_parse_examples():
    p = parse_ncpoly("x*y*z + theta*z^3", 3, CY)
    assert len(p.terms) == 2
    assert p.coefficient((3, 3, 3)) == named_constant(CY, "theta")
    assert P("cyc(x^2*y)") == P("x^2*y + x*y*x + y*x^2")
    q = P("(1/3)*x*z^2")
    assert q.coefficient((1, 3, 3)) == Fraction(1, 3)
    assert len(q.terms) == 1


def test_parse_parameters_and_division():
    p = parse_ncpoly("((1-a)/2)*z*y", 3, QQ, {"a": 3})
    assert p == P("-z*y")
    q = parse_ncpoly("a^-2*x + b*y", 3, QQ, {"a": 2, "b": Fraction(1, 3)})
    assert q.coefficient((1,)) == Fraction(1, 4)
    assert q.coefficient((2,)) == Fraction(1, 3)


def test_parse_errors():
    with pytest.raises(PolySyntaxError) as e:
        P("x + * y")
    assert e.value.position == 4
    with pytest.raises(UnknownGenerator):
        parse_ncpoly("z^2", 2, QQ)
    with pytest.raises(UnknownGenerator):
        parse_ncpoly("x4", 3, QQ)
    with pytest.raises(UnknownConstant):
        P("q*x")
    with pytest.raises(PolySyntaxError):
        P("x/y")  # division by a non-scalar
    with pytest.raises(PolySyntaxError):
        P("x^y")
    with pytest.raises(PolySyntaxError):
        P("(x + y")


def test_parse_n_greater_than_three():
    p = parse_ncpoly("x1*x4 - 2*x2*x3", 4, QQ)
    assert p.coefficient((1, 4)) == 1
    assert p.coefficient((2, 3)) == -2
    with pytest.raises(UnknownGenerator):
        parse_ncpoly("x5", 4, QQ)
    with pytest.raises(UnknownGenerator):
        parse_ncpoly("y", 4, QQ)


def _random_poly(field, rng, n=3, max_len=4, nterms=5):
    terms = {}
    for _ in range(rng.randrange(1, nterms + 1)):
        w = tuple(rng.randrange(1, n + 1) for _ in range(rng.randrange(0, max_len + 1)))
        c = rng.randrange(-6, 7)
        if field is CY and rng.random() < 0.3:
            c = named_constant(CY, rng.choice(["theta", "i", "xi8", "xi9"])) * c
        if c:
            terms[w] = field.scalar(c)
    return NcPoly(field, n, terms)


def test_print_parse_round_trip():
    rng = random.Random(21)
    for field in (QQ, CY, FP):
        for _ in range(30):
            p = _random_poly(field, rng)
            text = print_ncpoly(p)
            assert parse_ncpoly(text, 3, field) == p
    assert print_ncpoly(NcPoly.zero(QQ, 3)) == "0"
    assert parse_ncpoly("0", 3, QQ).is_zero()


def test_decomposition_identities():
    # any p with zero constant term decomposes through its one-sided
    # derivatives: p = sum_j x_j (d_j p) = sum_j (d^R_j p) x_j
    rng = random.Random(22)
    for field in (QQ, CY, FP):
        for _ in range(25):
            p = _random_poly(field, rng)
            p = p - NcPoly(field, 3, {(): p.coefficient(())})
            left = NcPoly.zero(field, 3)
            right = NcPoly.zero(field, 3)
            for j in range(1, 4):
                xj = NcPoly.gen(field, 3, j)
                left = left + xj * left_derivative(p, j)
                right = right + right_derivative(p, j) * xj
            assert left == p
            assert right == p


def test_commutator_identity_for_cyclic_polys():
    # sum_j [x_j, d_j F] = 0 whenever F is cyclicly invariant
    rng = random.Random(23)
    for _ in range(25):
        f = cyclicize(_random_poly(QQ, rng))
        acc = NcPoly.zero(QQ, 3)
        for j in range(1, 4):
            xj = NcPoly.gen(QQ, 3, j)
            d = left_derivative(f, j)
            acc = acc + xj * d - d * xj
        assert acc.is_zero()


def test_shift_order():
    rng = random.Random(24)
    for _ in range(20):
        d = rng.randrange(1, 6)
        terms = {tuple(rng.randrange(1, 4) for _ in range(d)): rng.randrange(1, 5)
                 for _ in range(3)}
        p = NcPoly(QQ, 3, terms)
        q = p
        for _ in range(d):
            q = cyclic_shift(q)
        assert q == p


def test_poly_arithmetic_and_queries():
    p = P("x*y - y*x + 2")
    assert p.degrees() == [0, 2]
    assert not p.is_homogeneous()
    assert p.homogeneous_component(2) == P("x*y - y*x")
    assert (p - p).is_zero()
    assert p.degree() == 2
    assert NcPoly.zero(QQ, 3).degree() == -1
    assert (P("x") * P("y")) == P("x*y")
    assert P("x + y") * 2 == P("2*x + 2*y")
    assert (P("x + 1") ** 2) == P("x^2 + 2*x + 1")
