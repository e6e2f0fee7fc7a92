"""Pure-python twin of the compiled F_p echelon kernel.

Same interface and same outputs as ``_fpkernel.FpEchelon``.  Rows are packed
into single big integers, 64 bits per entry, so that the elimination step
``work += (p - c) * stored_row`` is one bignum multiply-add running at C
speed inside the interpreter.  Entries are kept as *unreduced* residues:
each elimination adds less than p^2 to a limb and there are at most ncols
eliminations per row, so limbs stay below 2^63 for any modulus up to ~2^25
and never overflow into their neighbour.  Stored basis rows are repacked
with limbs fully reduced mod p, monic at the pivot and bit-zero to its left,
which is what keeps earlier pivot columns untouched during elimination.
"""

from bisect import bisect_left

_M64 = (1 << 64) - 1


class FpEchelon:
    __slots__ = ("p", "ncols", "_rows", "_pivots")

    def __init__(self, p, ncols):
        if p < 2 or ncols < 0:
            raise ValueError("need a prime modulus and a nonnegative width")
        if p.bit_length() > 25:
            raise ValueError("modulus too large for the packed-row fallback")
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

    def _unpack(self, acc):
        data = acc.to_bytes(8 * self.ncols, "little")
        p = self.p
        return [int.from_bytes(data[8 * j:8 * j + 8], "little") % p
                for j in range(self.ncols)]

    def add_row(self, row):
        p = self.p
        n = self.ncols
        if len(row) != n:
            raise ValueError(f"row of length {len(row)}, expected {n}")
        acc = int.from_bytes(
            b"".join((x % p).to_bytes(8, "little") for x in row), "little")
        for pi, packed in zip(self._pivots, self._rows):
            c = ((acc >> (pi << 6)) & _M64) % p
            if c:
                acc += (p - c) * packed
        if acc == 0:
            return False
        limbs = self._unpack(acc)
        pivot = next((j for j, v in enumerate(limbs) if v), -1)
        if pivot < 0:
            return False
        inv = pow(limbs[pivot], -1, p)
        for j in range(pivot, n):
            limbs[j] = limbs[j] * inv % p
        repacked = int.from_bytes(
            b"".join(v.to_bytes(8, "little") for v in limbs), "little")
        idx = bisect_left(self._pivots, pivot)
        self._pivots.insert(idx, pivot)
        self._rows.insert(idx, repacked)
        return True

    def get_rows(self):
        """Fully reduced (RREF) copies: list of (pivot, row-as-list)."""
        p = self.p
        pivots = list(self._pivots)
        rows = [self._unpack(r) for r in self._rows]
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
