"""Exact scalar arithmetic over three interchangeable field backends.

Everything downstream (noncommutative polynomials, Groebner bases, homology
slices) is linear algebra over a field that must contain roots of unity of
multiplicative orders 8 and 9 -- hence also ``theta = xi9^3`` of order 3 and
``i = xi8^2`` of order 4.  Three backends provide this:

* ``Rationals()``     -- arbitrary-precision rationals (orders 1 and 2 only),
* ``Cyclotomic72()``  -- the cyclotomic field Q(zeta_72), degree 24 over Q,
* ``PrimeField(p)``   -- F_p with p prime, p = 1 (mod 72), default p = 1009.

A field object owns the arithmetic and operates on *raw* values:
``fractions.Fraction`` for the rationals, a 24-tuple of Fractions (power
basis ``zeta^0 .. zeta^23``) for the cyclotomic field, and ints in ``[0, p)``
for the prime field.  User-facing code works with the immutable ``Scalar``
wrapper, which pairs a raw value with its field and supports the usual
operators.  Mixing scalars from different fields raises ``MixedBackends``.

There is deliberately no algebraic closure: an operation that would need a
root outside the backend raises ``UnsupportedOrder`` instead of extending
the field.
"""

from __future__ import annotations

from fractions import Fraction


class UnsupportedOrder(ValueError):
    """The backend has no element of the requested multiplicative order."""


class DivisionByZero(ZeroDivisionError):
    """Exact division or inversion of zero."""


class MixedBackends(TypeError):
    """Two scalars from different field backends met in one operation."""


# ---------------------------------------------------------------------------
# Polynomial helpers for the cyclotomic backend (dense Fraction lists).
# ---------------------------------------------------------------------------

_ZERO = Fraction(0)
_ONE = Fraction(1)

# Phi_72(x) = x^24 - x^12 + 1, as a coefficient list.
_PHI72 = [_ZERO] * 25
_PHI72[0] = _ONE
_PHI72[12] = -_ONE
_PHI72[24] = _ONE


def _reduce_mod_phi72(coeffs):
    """Reduce a coefficient list modulo x^24 - x^12 + 1.

    Uses the rewriting rule x^k = x^(k-12) - x^(k-24) for k >= 24, applied
    from the top degree down so cascades land on not-yet-visited positions.
    Returns a canonical 24-tuple.
    """
    c = list(coeffs)
    for k in range(len(c) - 1, 23, -1):
        v = c[k]
        if v:
            c[k - 12] += v
            c[k - 24] -= v
    c = c[:24]
    if len(c) < 24:
        c.extend([_ZERO] * (24 - len(c)))
    return tuple(Fraction(x) for x in c)


def _poly_trim(p):
    while p and not p[-1]:
        p.pop()
    return p


def _poly_divmod(num, den):
    """Quotient and remainder of dense Fraction polynomials (den nonzero)."""
    num = list(num)
    dd = len(den) - 1
    lead = den[dd]
    quot = [_ZERO] * max(0, len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c:
            q = c / lead
            quot[k - dd] = q
            for j in range(dd + 1):
                num[k - dd + j] -= q * den[j]
    return _poly_trim(quot), _poly_trim(num)


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return _poly_trim(out)


def _poly_sub(a, b):
    out = [_ZERO] * max(len(a), len(b))
    for i, ai in enumerate(a):
        out[i] += ai
    for i, bi in enumerate(b):
        out[i] -= bi
    return _poly_trim(out)


# ---------------------------------------------------------------------------
# Primality and primitive roots for the prime-field backend.
# ---------------------------------------------------------------------------

def _is_prime(n):
    """Deterministic Miller-Rabin, exact for every n below 3.3 * 10^24."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _least_primitive_root(p):
    qs = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise ArithmeticError(f"no primitive root found mod {p}")


# ---------------------------------------------------------------------------
# Field backends.  All arithmetic methods take and return raw values.
# ---------------------------------------------------------------------------

class Field:
    """Common interface: exact arithmetic on raw backend values."""

    kind = None  # overridden

    def scalar(self, x):
        """Lift an int, Fraction, raw value or Scalar into a wrapped Scalar."""
        if isinstance(x, Scalar):
            if x.field != self:
                raise MixedBackends(f"scalar from {x.field} used in {self}")
            return x
        if isinstance(x, int):
            return Scalar(self, self.from_int(x))
        if isinstance(x, Fraction):
            return Scalar(self, self.from_fraction(x))
        return Scalar(self, x)

    # subclasses provide: zero, one, from_int, from_fraction, add, sub, mul,
    # neg, inv, div, is_zero, root_of_unity, format

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, k):
        if k < 0:
            return self.power(self.inv(a), -k)
        result = self.one()
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def constant(self, name):
        """Raw value of a named constant: theta, i, xi8 or xi9."""
        orders = {"theta": 3, "i": 4, "xi8": 8, "xi9": 9}
        if name not in orders:
            raise KeyError(name)
        return self.root_of_unity(orders[name])

    def __ne__(self, other):
        return not self.__eq__(other)


class Rationals(Field):
    kind = "Rationals"

    def zero(self):
        return _ZERO

    def one(self):
        return _ONE

    def from_int(self, k):
        return Fraction(k)

    def from_fraction(self, fr):
        return Fraction(fr)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if not a:
            raise DivisionByZero("inverse of 0")
        return 1 / a

    def is_zero(self, a):
        return not a

    def root_of_unity(self, order):
        if order == 1:
            return _ONE
        if order == 2:
            return -_ONE
        raise UnsupportedOrder(
            f"the rationals contain no root of unity of order {order}")

    def format(self, a):
        return str(a)

    def __repr__(self):
        return "Rationals()"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Rationals")


class Cyclotomic72(Field):
    """Q(zeta_72) as residues modulo Phi_72(x) = x^24 - x^12 + 1.

    Raw values are 24-tuples of Fractions in the power basis
    zeta^0, ..., zeta^23; this is canonical since Phi_72 is irreducible
    over Q of degree phi(72) = 24.
    """

    kind = "Cyclotomic72"

    _ZERO_T = tuple([_ZERO] * 24)
    _ONE_T = tuple([_ONE] + [_ZERO] * 23)

    def zero(self):
        return self._ZERO_T

    def one(self):
        return self._ONE_T

    def from_int(self, k):
        return (Fraction(k),) + self._ZERO_T[1:]

    def from_fraction(self, fr):
        return (Fraction(fr),) + self._ZERO_T[1:]

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        out = [_ZERO] * 47
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] += ai * bj
        return _reduce_mod_phi72(out)

    def inv(self, a):
        if self.is_zero(a):
            raise DivisionByZero("inverse of 0")
        # Extended Euclid in Q[x] against Phi_72; the gcd is a nonzero
        # constant because Phi_72 is irreducible.
        r0, s0 = _poly_trim(list(a)), [_ONE]
        r1, s1 = list(_PHI72), []
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        g = r0[0]  # constant polynomial
        u = [c / g for c in s0]
        return _reduce_mod_phi72(u)

    def is_zero(self, a):
        return all(not x for x in a)

    def root_of_unity(self, order):
        if order < 1 or 72 % order:
            raise UnsupportedOrder(f"order {order} does not divide 72")
        k = 72 // order
        mono = [_ZERO] * (k + 1)
        mono[k] = _ONE
        return _reduce_mod_phi72(mono)

    def format(self, a):
        """Render in the scalar literal syntax, e.g. ``1/2*xi8^3*xi9 - 2``.

        zeta^k is written as xi8^(k mod 8) * xi9^(-k mod 9), which equals
        zeta^k because 9*(k mod 8) + 8*(-k mod 9) = k (mod 72).
        """
        pieces = []
        for k in range(24):
            c = a[k]
            if not c:
                continue
            if k == 0:
                pieces.append(str(c))
                continue
            if k == 18:
                mono = "i"
            else:
                e8, e9 = k % 8, (-k) % 9
                parts = []
                if e8:
                    parts.append("xi8" if e8 == 1 else f"xi8^{e8}")
                if e9:
                    parts.append("xi9" if e9 == 1 else f"xi9^{e9}")
                mono = "*".join(parts)
            if c == 1:
                pieces.append(mono)
            elif c == -1:
                pieces.append("-" + mono)
            else:
                pieces.append(f"{c}*{mono}")
        if not pieces:
            return "0"
        out = pieces[0]
        for s in pieces[1:]:
            out += " - " + s[1:] if s.startswith("-") else " + " + s
        return out

    def __repr__(self):
        return "Cyclotomic72()"

    def __eq__(self, other):
        return isinstance(other, Cyclotomic72)

    def __hash__(self):
        return hash("Cyclotomic72")


class PrimeField(Field):
    """F_p for a prime p = 1 (mod 72); raw values are ints in [0, p)."""

    kind = "PrimeField"

    def __init__(self, p=1009):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p % 72 != 1:
            raise ValueError(f"{p} is not congruent to 1 mod 72")
        self.p = p
        self._g = None  # least primitive root, found on first use

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, k):
        return k % self.p

    def from_fraction(self, fr):
        den = fr.denominator % self.p
        if den == 0:
            raise DivisionByZero(f"denominator of {fr} vanishes mod {self.p}")
        return fr.numerator * pow(den, -1, self.p) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise DivisionByZero("inverse of 0")
        return pow(a, -1, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def primitive_root(self):
        if self._g is None:
            self._g = _least_primitive_root(self.p)
        return self._g

    def root_of_unity(self, order):
        if order < 1 or 72 % order:
            raise UnsupportedOrder(f"order {order} does not divide 72")
        return pow(self.primitive_root(), (self.p - 1) // order, self.p)

    def format(self, a):
        return str(a % self.p)

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))


def field_from_name(text):
    """Parse a backend name: ``q``, ``cyclo72`` or ``fp:<prime>``."""
    if text == "q":
        return Rationals()
    if text == "cyclo72":
        return Cyclotomic72()
    if text.startswith("fp:"):
        return PrimeField(int(text[3:]))
    if text == "fp":
        return PrimeField()
    raise ValueError(f"unknown field {text!r} (expected q, cyclo72 or fp:<prime>)")


# ---------------------------------------------------------------------------
# The Scalar wrapper.
# ---------------------------------------------------------------------------

class Scalar:
    """An immutable field element: a raw backend value tagged with its field."""

    __slots__ = ("field", "value")

    def __init__(self, field, value):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, *a):
        raise AttributeError("Scalar is immutable")

    def _rhs(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise MixedBackends(
                    f"cannot combine scalars over {self.field} and {other.field}")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        if isinstance(other, Fraction):
            return self.field.from_fraction(other)
        return NotImplemented

    def __add__(self, other):
        v = self._rhs(other)
        if v is NotImplemented:
            return NotImplemented
        return Scalar(self.field, self.field.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._rhs(other)
        if v is NotImplemented:
            return NotImplemented
        return Scalar(self.field, self.field.sub(self.value, v))

    def __rsub__(self, other):
        v = self._rhs(other)
        if v is NotImplemented:
            return NotImplemented
        return Scalar(self.field, self.field.sub(v, self.value))

    def __mul__(self, other):
        v = self._rhs(other)
        if v is NotImplemented:
            return NotImplemented
        return Scalar(self.field, self.field.mul(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._rhs(other)
        if v is NotImplemented:
            return NotImplemented
        if self.field.is_zero(v):
            raise DivisionByZero("division by zero")
        return Scalar(self.field, self.field.div(self.value, v))

    def __rtruediv__(self, other):
        v = self._rhs(other)
        if v is NotImplemented:
            return NotImplemented
        return Scalar(self.field, self.field.div(v, self.inv().value))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return Scalar(self.field, self.field.power(self.value, k))

    def inv(self):
        return Scalar(self.field, self.field.inv(self.value))

    def is_zero(self):
        return self.field.is_zero(self.value)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise MixedBackends(
                    f"cannot compare scalars over {self.field} and {other.field}")
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == self._rhs(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __repr__(self):
        return self.field.format(self.value)


def make_root_of_unity(field, order):
    """Deterministic root of unity of exact multiplicative order ``order``.

    For Cyclotomic72 this is zeta^(72/order); for PrimeField(p) it is
    g^((p-1)/order) with g the least primitive root mod p.  The rationals
    support only orders 1 and 2.
    """
    return Scalar(field, field.root_of_unity(order))


def named_constant(field, name):
    """theta, i, xi8 or xi9 as a Scalar over ``field``."""
    return Scalar(field, field.constant(name))


def scalar_arith(a, b, op):
    """Binary/unary exact arithmetic dispatch on wrapped scalars.

    ``op`` is one of add, sub, mul, div, inv, neg, eq; ``b`` is ignored for
    the unary ops and may be None.
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "inv":
        return a.inv()
    if op == "neg":
        return -a
    if op == "eq":
        return a == b
    raise ValueError(f"unknown op {op!r}")
