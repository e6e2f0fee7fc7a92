"""Twist detection and the linear apparatus around (twisted) potentials.

A homogeneous F is a *twisted potential* when the spans of its left and
right derivatives coincide; it is *non-degenerate* when the n left
derivatives are linearly independent, and in that case there is a unique
matrix M -- the twist -- with

    (right-derivative vector) = M . (left-derivative vector),

row by row: deltaR_j F = sum_m M[j][m] delta_m F.  Potentials (cyclicly
invariant F) are exactly the twisted potentials with M = identity.  Under a
linear substitution S (column j = image of generator j) the twist transforms
by conjugation: twist(F after S) = S twist(F) S^-1.

Degenerate F have no well-defined twist; they are reported through
relation_rank < n with twist_matrix absent.
"""

from dataclasses import dataclass
from itertools import product
from typing import Optional

from .freealg import NcPoly, left_derivative, right_derivative
from .linalg import SparseMatrix, kernel_basis, mat_inv, rank, rref


class NotHomogeneous(ValueError):
    pass


@dataclass
class TwistReport:
    is_twisted: bool
    twist_matrix: Optional[list]  # n x n Scalars, present iff nondegenerate & twisted
    is_potential: bool
    nondegenerate: bool
    relation_rank: int
    proper: Optional[bool] = None  # filled in by properness_check when dims are known


def left_derivatives(F):
    return [left_derivative(F, j) for j in range(1, F.n + 1)]


def right_derivatives(F):
    return [right_derivative(F, j) for j in range(1, F.n + 1)]


def _span_rank(field, polys, words, col):
    rows = [{col[w]: c for w, c in p.terms.items()} for p in polys]
    return rank(SparseMatrix(field, rows, len(words)))


def _solve_twist_row(field, lefts, target, words, col):
    """Coefficients m_1..m_n with sum_m m_m * lefts[m] = target.

    The lefts are linearly independent here, so the reduced system has a
    pivot in every unknown column and the solution is unique.
    """
    n = len(lefts)
    rows = []
    for w in words:
        row = {}
        for m, p in enumerate(lefts):
            c = p.terms.get(w)
            if c:
                row[m] = c
        t = target.terms.get(w)
        if t:
            row[n] = t
        if row:
            rows.append(row)
    reduced, rk, pivots = rref(SparseMatrix(field, rows, n + 1))
    if n in pivots:
        raise ArithmeticError("twist system inconsistent despite equal spans")
    zero = field.scalar(0)
    out = [zero] * n
    for pivot, row in zip(pivots, reduced.rows):
        out[pivot] = row.get(n, zero)
    return out


def twist_detect(F):
    """Classify a homogeneous F: twisted? potential? degenerate? which M?"""
    if not F.is_homogeneous():
        raise NotHomogeneous(f"mixed degrees {F.degrees()}")
    n, field = F.n, F.field
    lefts = left_derivatives(F)
    rights = right_derivatives(F)
    words = sorted({w for p in lefts + rights for w in p.terms})
    col = {w: i for i, w in enumerate(words)}
    rank_left = _span_rank(field, lefts, words, col)
    rank_right = _span_rank(field, rights, words, col)
    rank_both = _span_rank(field, lefts + rights, words, col)
    is_twisted = rank_left == rank_right == rank_both
    nondegenerate = rank_left == n
    is_potential = lefts == rights
    twist = None
    if is_twisted and nondegenerate:
        twist = [_solve_twist_row(field, lefts, rights[j], words, col)
                 for j in range(n)]
    return TwistReport(is_twisted=is_twisted, twist_matrix=twist,
                       is_potential=is_potential, nondegenerate=nondegenerate,
                       relation_rank=rank_left)


def twisted_space(n, k, M):
    """Basis of the homogeneous degree-k twisted potentials with twist M.

    Enumerates all n^k word coefficients and row-reduces the linear system
    c[v+(j,)] = sum_m M[j][m] * c[(m,)+v]  over words v of degree k-1.
    The empty list is a perfectly good answer: for most M the space is 0.
    """
    field = M[0][0].field
    try:
        mat_inv(M)
    except ValueError:
        raise ValueError("twist matrix must be invertible") from None
    words = list(product(range(1, n + 1), repeat=k))
    idx = {w: i for i, w in enumerate(words)}
    one = field.scalar(1)
    rows = []
    for j in range(n):
        for v in product(range(1, n + 1), repeat=k - 1):
            row = {}

            def add(i, c):
                row[i] = row[i] + c if i in row else c

            add(idx[v + (j + 1,)], one)
            for m in range(n):
                if M[j][m]:
                    add(idx[(m + 1,) + v], -M[j][m])
            row = {i: c for i, c in row.items() if c}
            if row:
                rows.append(row)
    basis = kernel_basis(SparseMatrix(field, rows, len(words)))
    return [NcPoly(field, n, {words[i]: c for i, c in enumerate(vec) if c})
            for vec in basis]


def properness_check(F, dims):
    """(nondegenerate, proper) from the graded dimensions of A_F.

    dims[d] must hold dim A_d at least up to d = deg F.  A degree-k twisted
    potential is non-degenerate iff dim A_(k-1) = n^(k-1) - n and proper iff
    dim A_k = n^k - 2 n^2 + 1.
    """
    n, k = F.n, F.degree()
    nondegenerate = dims[k - 1] == n ** (k - 1) - n
    proper = dims[k] == n ** k - 2 * n * n + 1
    return nondegenerate, proper


def syzygy_identity_check(F):
    """sum_j x_j (delta_j F) == sum_j (deltaR_j F) x_j, identically."""
    left = NcPoly.zero(F.field, F.n)
    right = NcPoly.zero(F.field, F.n)
    for j in range(1, F.n + 1):
        xj = NcPoly.gen(F.field, F.n, j)
        left = left + xj * left_derivative(F, j)
        right = right + right_derivative(F, j) * xj
    return left == right
