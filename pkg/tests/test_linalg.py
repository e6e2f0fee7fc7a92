import random
from fractions import Fraction

import pytest

from potalg.linalg import (
    SparseMatrix,
    char_poly,
    geometric_multiplicity,
    identity_matrix,
    kernel_basis,
    mat_inv,
    mat_mul,
    rank,
    rref,
    verify_eigenvalues,
)
from potalg.scalars import Cyclotomic72, PrimeField, Rationals, named_constant

QQ = Rationals()
CY = Cyclotomic72()
FP = PrimeField(1009)


def _m(field, rows, ncols):
    return SparseMatrix(field, [{c: field.scalar(v) for c, v in r.items()}
                                for r in rows], ncols)


def test_rref_identity():
    m = _m(QQ, [{0: 1}, {1: 1}, {2: 1}], 3)
    reduced, rk, pivots = rref(m)
    assert rk == 3 and pivots == (0, 1, 2)


def test_rref_duplicate_rows():
    m = _m(QQ, [{0: 1, 1: 2}, {0: 1, 1: 2}], 3)
    _, rk, pivots = rref(m)
    assert rk == 1 and pivots == (0,)


def test_rref_degree2_relation_slice():
    # the three quadratic relations xx+2yz+3zy, yy+2zx+3xz, zz+2xy+3yx
    # written in the 9 degree-2 words (row-major letter pairs)
    rows = [{0: 1, 5: 2, 7: 3}, {4: 1, 6: 2, 2: 3}, {8: 1, 1: 2, 3: 3}]
    for field in (QQ, FP):
        assert rank(_m(field, rows, 9)) == 3


def test_kernel_examples():
    assert len(kernel_basis(_m(QQ, [{}, {}], 2))) == 2
    assert kernel_basis(_m(QQ, [{0: 1}, {1: 1}], 2)) == []
    # left multiplication u -> (xu, yu, zu) on the degree-1 slice of the
    # free algebra on three letters: 9 output coordinates, all independent
    rows = [{l: 1} for g in range(3) for l in range(3)]
    assert kernel_basis(_m(QQ, [{(r % 3): 1} for r in range(9)], 3)) == []
    assert rank(_m(QQ, rows, 3)) == 3


def test_kernel_vectors_annihilate():
    rng = random.Random(5)
    for field in (QQ, CY, FP):
        for _ in range(10):
            ncols = rng.randrange(1, 7)
            rows = [{c: field.scalar(rng.randrange(-4, 5))
                     for c in range(ncols) if rng.random() < 0.5}
                    for _ in range(rng.randrange(0, 7))]
            m = SparseMatrix(field, rows, ncols)
            _, rk, _ = rref(m)
            basis = kernel_basis(m)
            assert rk + len(basis) == ncols
            zero = field.scalar(0)
            for vec in basis:
                for row in m.rows:
                    acc = zero
                    for c, v in row.items():
                        acc = acc + v * vec[c]
                    assert acc == zero


def test_rref_idempotent():
    rng = random.Random(6)
    for field in (QQ, FP):
        for _ in range(10):
            rows = [{c: field.scalar(rng.randrange(-5, 6))
                     for c in range(5) if rng.random() < 0.6}
                    for _ in range(4)]
            reduced, rk, piv = rref(SparseMatrix(field, rows, 5))
            again, rk2, piv2 = rref(reduced)
            assert rk == rk2 and piv == piv2
            assert [dict(r) for r in again.rows] == [dict(r) for r in reduced.rows]


def test_verify_eigenvalues_examples():
    a = named_constant(CY, "xi9")
    one = CY.scalar(1)
    zero = CY.scalar(0)
    m = [[a, zero, zero], [zero, a ** -2, zero], [zero, zero, one]]
    assert verify_eigenvalues(m, [a, a ** -2, one])
    assert verify_eigenvalues(identity_matrix(QQ, 3),
                              [QQ.scalar(1)] * 3)
    # twist of the x^2y + a xyx + a^2 yx^2 + z^3 family at a=2 has
    # eigenvalues a, -a, a^-2 ... here checked as diag(2,-2,1/4)
    two = QQ.scalar(2)
    q = QQ.scalar(Fraction(1, 4))
    zq = QQ.scalar(0)
    m = [[two, zq, zq], [zq, -two, zq], [zq, zq, q]]
    assert verify_eigenvalues(m, [two, -two, q])
    assert not verify_eigenvalues(m, [two, two, q])


def test_verify_eigenvalues_conjugation_invariant():
    rng = random.Random(7)
    for _ in range(10):
        m = [[QQ.scalar(rng.randrange(-3, 4)) for _ in range(3)]
             for _ in range(3)]
        cp = char_poly(m)
        while True:
            p = [[QQ.scalar(rng.randrange(-3, 4)) for _ in range(3)]
                 for _ in range(3)]
            try:
                pinv = mat_inv(p)
                break
            except ValueError:
                continue
        conj = mat_mul(mat_mul(p, m), pinv)
        assert char_poly(conj) == cp


def test_geometric_multiplicity():
    one, zero = QQ.scalar(1), QQ.scalar(0)
    jordan = [[one, one], [zero, one]]
    assert geometric_multiplicity(jordan, 1) == 1
    assert geometric_multiplicity(identity_matrix(QQ, 2), 1) == 2
    assert geometric_multiplicity(jordan, 5) == 0


def test_mat_inv_round_trip():
    rng = random.Random(8)
    for field in (QQ, FP):
        for _ in range(5):
            while True:
                m = [[field.scalar(rng.randrange(-4, 5)) for _ in range(3)]
                     for _ in range(3)]
                try:
                    inv = mat_inv(m)
                    break
                except ValueError:
                    continue
            assert mat_mul(m, inv) == identity_matrix(field, 3)


def test_prime_and_generic_paths_agree():
    # over F_p both the dense echelon kernel and the generic sparse
    # elimination must give the identical canonical reduced form
    rng = random.Random(9)
    for _ in range(20):
        ncols = rng.randrange(1, 9)
        rows = [{c: rng.randrange(1009) for c in range(ncols)
                 if rng.random() < 0.5} for _ in range(rng.randrange(0, 9))]
        m = _m(FP, rows, ncols)
        from potalg.linalg import _rref_generic, _rref_prime
        a = [(p, {k: v.value for k, v in r.items()}) for p, r in _rref_prime(m)]
        b = [(p, {k: v.value for k, v in r.items()}) for p, r in _rref_generic(m)]
        assert a == b
