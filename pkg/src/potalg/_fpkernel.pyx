# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Dense incremental row echelon over F_p (compiled kernel).

This is the hot loop of the brute-force graded-dimension counts: thousands
of rows of length up to a few thousand, reduced one at a time.  The class
keeps rows monic at their pivot with pivots strictly increasing; a new row
is reduced against the stored ones and either inserted (rank grows, returns
True) or discarded as dependent (returns False).

A pure-python twin with the identical interface lives in ``_fpkernel_py``;
``potalg.linalg`` picks whichever is importable.
"""

from array import array
from bisect import bisect_left


cdef class FpEchelon:
    cdef public long long p
    cdef public Py_ssize_t ncols
    cdef list _rows      # array('q') rows, monic at pivot, zero left of pivot
    cdef list _pivots    # strictly increasing ints, aligned with _rows

    def __init__(self, p, ncols):
        if p < 2 or ncols < 0:
            raise ValueError("need a prime modulus and a nonnegative width")
        self.p = p
        self.ncols = ncols
        self._rows = []
        self._pivots = []

    @property
    def rank(self):
        return len(self._pivots)

    @property
    def pivots(self):
        return list(self._pivots)

    def add_row(self, row):
        """Reduce ``row`` against the stored basis; keep it if independent."""
        cdef long long p = self.p
        cdef Py_ssize_t n = self.ncols
        if len(row) != n:
            raise ValueError(f"row of length {len(row)}, expected {n}")
        work_arr = array('q', [x % p for x in row])
        cdef long long[::1] work = work_arr
        cdef long long[::1] stored
        cdef Py_ssize_t i, j, pi, m = len(self._pivots)
        cdef long long c, k
        for i in range(m):
            pi = self._pivots[i]
            c = work[pi]
            if c:
                stored = self._rows[i]
                k = p - c
                for j in range(pi, n):
                    work[j] = (work[j] + k * stored[j]) % p
        cdef Py_ssize_t pivot = -1
        for j in range(n):
            if work[j]:
                pivot = j
                break
        if pivot < 0:
            return False
        cdef long long inv = pow(work[pivot], p - 2, p)
        for j in range(pivot, n):
            work[j] = work[j] * inv % p
        idx = bisect_left(self._pivots, pivot)
        self._pivots.insert(idx, pivot)
        self._rows.insert(idx, work_arr)
        return True

    def get_rows(self):
        """Fully reduced (RREF) copies: list of (pivot, row-as-list)."""
        p = self.p
        pivots = list(self._pivots)
        rows = [list(r) for r in self._rows]
        for i in range(len(pivots)):
            pi = pivots[i]
            for r in range(i):
                c = rows[r][pi]
                if c:
                    src = rows[i]
                    dst = rows[r]
                    for j in range(pi, self.ncols):
                        dst[j] = (dst[j] - c * src[j]) % p
        return list(zip(pivots, rows))
