"""Rational generating functions and sampling of generic Hilbert series.

A RationalSeries is a quotient of integer polynomials in t with den(0) = 1,
stored gcd-reduced, expanded exactly through the denominator recurrence.
fit_rational reverses taylor: it recovers the minimal rational function
behind a coefficient run, which is how computed dimension tables are turned
back into closed forms.
"""

import random
import re
from dataclasses import dataclass
from fractions import Fraction

from .freealg import NcPoly, cyclicize, left_derivative
from .grobner import MonomialOrder, buchberger_truncated, graded_dims
from .scalars import PrimeField

__all__ = [
    "GenericSampleReport",
    "RationalSeries",
    "fit_rational",
    "format_series",
    "generic_sample_series",
    "gv_representable",
    "parse_series",
    "taylor",
]


def _trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def _pmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _pdivmod(a, b):
    """Polynomial division over Fraction; b must be nonzero."""
    a = [Fraction(x) for x in a]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] / lead
        if c:
            q[i] = c
            for j, y in enumerate(b):
                a[i + j] -= c * y
    return q, _trim(a)


def _pgcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return a


class RationalSeries:
    """num/den with integer coefficient tuples indexed by power of t."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=(1,)):
        num = _trim(Fraction(c) for c in num)
        den = _trim(Fraction(c) for c in den)
        if not den or not den[0]:
            raise ValueError("denominator must be invertible at t = 0")
        if num:
            g = _pgcd(num, den)
            if len(g) > 1:
                num = _pdivmod(num, g)[0]
                den = _pdivmod(den, g)[0]
        scale = den[0]
        num = [c / scale for c in _trim(num)]
        den = [c / scale for c in _trim(den)]
        if any(c.denominator != 1 for c in num + den):
            raise ValueError("series does not reduce to integer polynomials")
        self.num = tuple(int(c) for c in num)
        self.den = tuple(int(c) for c in den)

    def __eq__(self, other):
        return (isinstance(other, RationalSeries)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return format_series(self)


def taylor(rs, up_to):
    """Exact Taylor coefficients c_0..c_up_to of num/den at t = 0."""
    c = []
    for m in range(up_to + 1):
        v = rs.num[m] if m < len(rs.num) else 0
        for j in range(1, min(m, len(rs.den) - 1) + 1):
            v -= rs.den[j] * c[m - j]
        c.append(v)
    return c


def _fmt_poly(p):
    if not p:
        return "0"
    parts = []
    for e, c in enumerate(p):
        if not c:
            continue
        if e == 0:
            body = str(abs(c))
        else:
            mag = "" if abs(c) == 1 else str(abs(c))
            body = mag + ("t" if e == 1 else f"t^{e}")
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("-" if c < 0 else "+") + body)
    return "".join(parts)


def format_series(rs):
    num = _fmt_poly(rs.num)
    if rs.den == (1,):
        return num
    den = _fmt_poly(rs.den)
    if len(rs.num) > 1 or rs.num == ():
        num = f"({num})"
    return f"{num}/({den})"


_TERM = re.compile(r"([+-]?)(\d+)?(?:\*?(t)(?:\^(\d+))?)?")


def _parse_poly(text):
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    text = text.replace(" ", "")
    coeffs = {}
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (not m.group(2) and not m.group(3)):
            raise ValueError(f"cannot read polynomial at ...{text[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = int(m.group(2)) if m.group(2) else 1
        if m.group(3) is None:
            exp = 0
        else:
            exp = int(m.group(4)) if m.group(4) else 1
        coeffs[exp] = coeffs.get(exp, 0) + sign * coeff
        pos = m.end()
    out = [0] * (max(coeffs) + 1 if coeffs else 0)
    for e, c in coeffs.items():
        out[e] = c
    return out


def parse_series(text):
    """Read "num/den" (or a bare polynomial) with integer terms in t."""
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            return RationalSeries(_parse_poly(text[:i]),
                                  _parse_poly(text[i + 1:]))
    return RationalSeries(_parse_poly(text))


def _solve(rows, rhs):
    """One exact solution of rows * x = rhs over Fraction, or None."""
    if not rows:
        return []
    ncols = len(rows[0])
    aug = [row + [b] for row, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(ncols):
        hit = next((i for i in range(r, len(aug)) if aug[i][c]), None)
        if hit is None:
            continue
        aug[r], aug[hit] = aug[hit], aug[r]
        lead = aug[r][c]
        aug[r] = [v / lead for v in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == len(aug):
            break
    for i in range(r, len(aug)):
        if aug[i][ncols]:
            return None  # inconsistent
    x = [Fraction(0)] * ncols
    for row, c in zip(aug, pivots):
        x[c] = row[ncols]
    return x


def fit_rational(coeffs, max_den_degree):
    """Minimal rational function reproducing every given coefficient.

    Tries denominator degrees d = 0, 1, .. in order, allowing numerator
    degree d + 1 (every Hilbert series handled here fits that profile),
    solving the tail recurrence exactly and re-expanding to verify.  Returns
    None when nothing within the bound fits.
    """
    coeffs = [int(c) for c in coeffs]
    if len(coeffs) < 2 * max_den_degree + 2:
        raise ValueError(
            f"need at least {2 * max_den_degree + 2} coefficients to fit "
            f"denominators of degree {max_den_degree}")
    for d in range(max_den_degree + 1):
        e = d + 1
        rows = [[Fraction(coeffs[m - j]) if m - j >= 0 else Fraction(0)
                 for j in range(1, d + 1)]
                for m in range(e + 1, len(coeffs))]
        rhs = [Fraction(-coeffs[m]) for m in range(e + 1, len(coeffs))]
        sol = _solve(rows, rhs)
        if sol is None:
            continue
        den = [Fraction(1)] + sol
        num = [sum((den[j] * coeffs[m - j]
                    for j in range(1, min(m, d) + 1)), Fraction(coeffs[m]))
               for m in range(e + 1)]
        if any(v.denominator != 1 for v in den + num):
            continue
        rs = RationalSeries([int(v) for v in num], [int(v) for v in den])
        if taylor(rs, len(coeffs) - 1) == coeffs:
            return rs
    return None


# ---------------------------------------------------------------------------
# Generic sampling of potentials.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GenericSampleReport:
    n: int
    k: int
    trials: int
    seed: object
    minima: tuple
    target: tuple  # Taylor of (1 - n t + n t^{k-1} - t^k)^(-1)
    matches_target: bool


def _cyclic_classes(n, k):
    """One representative word per cyclic class of length-k words."""
    seen = set()
    reps = []

    def words(m):
        if m == 0:
            yield ()
            return
        for w in words(m - 1):
            for g in range(1, n + 1):
                yield w + (g,)

    for w in words(k):
        canon = min(w[i:] + w[:i] for i in range(k))
        if canon not in seen:
            seen.add(canon)
            reps.append(canon)
    return reps


def _commin_target(n, k, up_to):
    c = [1]
    for m in range(1, up_to + 1):
        v = n * c[m - 1]
        if m - k + 1 >= 0:
            v -= n * c[m - k + 1]
        if m - k >= 0:
            v += c[m - k]
        c.append(v)
    return c


def generic_sample_series(n, k, trials, up_to, spec, seed=0):
    """Coordinatewise minimal dims over random potentials in P_{n,k}.

    Coefficients are drawn uniformly per cyclic class in the given prime
    field; the minimum over enough trials exposes the generic Hilbert
    series.  The report also records whether the minimum agrees with the
    series an exact algebra would have (it provably cannot dip below it).
    """
    if not isinstance(spec, PrimeField):
        raise ValueError("generic sampling needs a prime field")
    if trials < 1:
        raise ValueError("at least one trial is required")
    rng = random.Random(seed)
    reps = _cyclic_classes(n, k)
    order = MonomialOrder(n)
    minima = None
    for _ in range(trials):
        terms = {}
        for w in reps:
            c = rng.randrange(spec.p)
            if c:
                terms[w] = spec.scalar(c)
        F = cyclicize(NcPoly(spec, n, terms))
        rels = [r for r in (left_derivative(F, j) for j in range(1, n + 1))
                if r]
        gb = buchberger_truncated(rels, order, up_to, field=spec)
        dims = graded_dims(gb, up_to)
        minima = dims if minima is None else \
            [min(a, b) for a, b in zip(minima, dims)]
    target = _commin_target(n, k, up_to)
    return GenericSampleReport(n=n, k=k, trials=trials, seed=seed,
                               minima=tuple(minima), target=tuple(target),
                               matches_target=list(minima) == target)


def gv_representable(m):
    """Whether m = sum_{j=2}^{l} j^2 * n_j for some l with every n_j >= 1.

    The multiplicity of each square from 4 up to l^2 must be positive, so a
    candidate l forces the baseline 4 + 9 + .. + l^2 and the remainder must
    then be a nonnegative combination of the same squares.
    """
    if m < 1:
        raise ValueError("defined for positive integers")
    base = 0
    l = 2
    while True:
        base += l * l
        if base > m:
            return False
        rest = m - base
        reachable = [True] + [False] * rest
        for j in range(2, l + 1):
            step = j * j
            for v in range(step, rest + 1):
                if reachable[v - step]:
                    reachable[v] = True
        if reachable[rest]:
            return True
        l += 1
