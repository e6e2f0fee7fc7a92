"""Exact sparse linear algebra over the scalar backends.

Row reduction and kernels follow the textbook algorithm with exact field
division; no fraction-free tricks are needed at the scales this package
works at.  Matrices over a ``PrimeField`` are routed through the dense F_p
echelon kernel -- the compiled extension when it built, otherwise the
packed-bignum fallback -- because those are the hot runs (brute-force graded
dimensions, homology slices).  Both paths produce the same canonical reduced
row echelon form, so results never depend on which kernel is active.
"""

from .scalars import PrimeField, Scalar

try:
    from ._fpkernel import FpEchelon
    COMPILED_KERNEL = True
except ImportError:
    from ._fpkernel_py import FpEchelon
    COMPILED_KERNEL = False


class SparseMatrix:
    """Rows are dicts mapping column index to a nonzero Scalar."""

    __slots__ = ("field", "rows", "ncols")

    def __init__(self, field, rows, ncols):
        self.field = field
        self.ncols = ncols
        clean = []
        for r in rows:
            row = {}
            for c, v in r.items():
                if not 0 <= c < ncols:
                    raise IndexError(f"column {c} out of range 0..{ncols - 1}")
                v = field.scalar(v)
                if v:
                    row[c] = v
            clean.append(row)
        self.rows = clean

    def nrows(self):
        return len(self.rows)

    def __repr__(self):
        return f"SparseMatrix({len(self.rows)}x{self.ncols} over {self.field})"


def _rref_generic(m):
    """Incremental echelon + back substitution; returns (pairs, ...).

    pairs is a list of (pivot, row-dict) with pivots strictly increasing,
    rows monic at their pivot and fully reduced against each other.
    """
    zero = m.field.scalar(0)
    pairs = []  # (pivot, dict) sorted by pivot
    for row in m.rows:
        work = dict(row)
        for pivot, stored in pairs:
            c = work.get(pivot)
            if c:
                for k, v in stored.items():
                    nv = work.get(k, zero) - c * v
                    if nv:
                        work[k] = nv
                    elif k in work:
                        del work[k]
        if not work:
            continue
        pivot = min(work)
        inv = work[pivot].inv()
        work = {k: v * inv for k, v in work.items()}
        pairs.append((pivot, work))
        pairs.sort(key=lambda pr: pr[0])
    # back substitution to the canonical reduced form
    for i in range(len(pairs)):
        pi, src = pairs[i]
        for r in range(i):
            dst = pairs[r][1]
            c = dst.get(pi)
            if c:
                for k, v in src.items():
                    nv = dst.get(k, zero) - c * v
                    if nv:
                        dst[k] = nv
                    elif k in dst:
                        del dst[k]
    return pairs


def _rref_prime(m):
    ech = FpEchelon(m.field.p, m.ncols)
    for row in m.rows:
        dense = [0] * m.ncols
        for c, v in row.items():
            dense[c] = v.value
        ech.add_row(dense)
    pairs = []
    for pivot, dense in ech.get_rows():
        row = {j: Scalar(m.field, v) for j, v in enumerate(dense) if v}
        pairs.append((pivot, row))
    return pairs


def rref(m):
    """Reduced row echelon form: (reduced SparseMatrix, rank, pivot columns).

    The reduced form is canonical for the row space, so the output does not
    depend on the input row order or on which F_p kernel is active.
    """
    if isinstance(m.field, PrimeField) and m.ncols:
        pairs = _rref_prime(m)
    else:
        pairs = _rref_generic(m)
    reduced = SparseMatrix(m.field, [row for _, row in pairs], m.ncols)
    return reduced, len(pairs), tuple(p for p, _ in pairs)


def rank(m):
    return rref(m)[1]


def kernel_basis(m):
    """Basis of the right null space as dense Scalar vectors.

    One vector per non-pivot column, in column order: the vector with a 1
    in that free column and the pivot coordinates solved from the reduced
    rows.  dim kernel = ncols - rank.
    """
    reduced, _, pivots = rref(m)
    zero, one = m.field.scalar(0), m.field.scalar(1)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.ncols):
        if f in pivot_set:
            continue
        vec = [zero] * m.ncols
        vec[f] = one
        for p, row in zip(pivots, reduced.rows):
            c = row.get(f)
            if c:
                vec[p] = -c
        basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# Small dense helpers (matrices as lists of lists of Scalars).
# ---------------------------------------------------------------------------

def identity_matrix(field, n):
    zero, one = field.scalar(0), field.scalar(1)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, m, k = len(a), len(b[0]), len(b)
    return [[sum((a[i][t] * b[t][j] for t in range(k)),
                 start=a[0][0] * 0) for j in range(m)] for i in range(n)]


def mat_vec(a, v):
    return [sum((a[i][t] * v[t] for t in range(len(v))), start=v[0] * 0)
            for i in range(len(a))]


def transpose(a):
    return [list(col) for col in zip(*a)]


def mat_inv(a):
    """Dense inverse via an augmented reduction; raises ValueError if singular."""
    n = len(a)
    field = a[0][0].field
    rows = []
    for i in range(n):
        row = {j: a[i][j] for j in range(n) if a[i][j]}
        row[n + i] = field.scalar(1)
        rows.append(row)
    reduced, rk, pivots = rref(SparseMatrix(field, rows, 2 * n))
    if rk != n or pivots != tuple(range(n)):
        raise ValueError("matrix is singular")
    zero = field.scalar(0)
    return [[reduced.rows[i].get(n + j, zero) for j in range(n)]
            for i in range(n)]


# ---------------------------------------------------------------------------
# Eigenvalue verification without root finding.
# ---------------------------------------------------------------------------

def _pmul(a, b, zero):
    if not a or not b:
        return []
    out = [zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj
    return out


def _padd(a, b, zero):
    out = [zero] * max(len(a), len(b))
    for i, v in enumerate(a):
        out[i] = out[i] + v
    for i, v in enumerate(b):
        out[i] = out[i] + v
    return out


def _det_poly(mat, zero):
    n = len(mat)
    if n == 1:
        return mat[0][0]
    total = []
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = _pmul(mat[0][j], _det_poly(minor, zero), zero)
        if j % 2:
            term = [-c for c in term]
        total = _padd(total, term, zero)
    return total


def char_poly(m):
    """Coefficients of det(lambda*I - M), constant term first."""
    field = m[0][0].field
    zero, one = field.scalar(0), field.scalar(1)
    n = len(m)
    entries = [[[-m[i][j], one] if i == j else
                ([-m[i][j]] if m[i][j] else [])
                for j in range(n)] for i in range(n)]
    poly = _det_poly(entries, zero)
    out = list(poly) + [zero] * (n + 1 - len(poly))
    return out


def verify_eigenvalues(m, claimed):
    """True iff charpoly(M) equals the product of (lambda - c) exactly.

    Works over any backend; intended for the small (<= 4x4) twist matrices.
    This checks the eigenvalue multiset without any root finding; geometric
    multiplicities are a separate rank question, see geometric_multiplicity.
    """
    n = len(m)
    if len(claimed) != n:
        raise ValueError(f"{n}x{n} matrix needs exactly {n} claimed eigenvalues")
    field = m[0][0].field
    zero, one = field.scalar(0), field.scalar(1)
    target = [one]
    for c in claimed:
        target = _pmul(target, [-field.scalar(c), one], zero)
    return char_poly(m) == target


def geometric_multiplicity(m, lam):
    """dim ker(M - lam*I) = n - rank(M - lam*I)."""
    field = m[0][0].field
    n = len(m)
    lam = field.scalar(lam)
    rows = []
    for i in range(n):
        row = {}
        for j in range(n):
            v = m[i][j] - lam if i == j else m[i][j]
            if v:
                row[j] = v
        rows.append(row)
    return n - rank(SparseMatrix(field, rows, n))
