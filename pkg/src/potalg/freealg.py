"""Words and graded noncommutative polynomials over n free generators.

A *word* is a tuple of generator indices in 1..n (the empty tuple is the
unit monomial).  ``NcPoly`` is a sparse linear combination of words with
nonzero ``Scalar`` coefficients, tagged with its field and generator count.
On top of that live the cyclic machinery (the shift ``C`` with
``C(x_j u) = u x_j``, the cyclicization ``u -> u + Cu + ... + C^(d-1)u``) and
the one-sided derivatives: the left derivative with respect to x_j strips a
leading x_j (monomials not starting with x_j die), the right derivative
strips a trailing one.  A polynomial is cyclicly invariant exactly when its
left and right derivatives agree for every generator.

Generators are rendered x, y, z for n <= 3 and x1..xn otherwise, and
polynomials have a parseable ASCII form, e.g. ``cyc(x^2*y) - 1/2*z^3``.
The parser also accepts named parameters so that families like
``x*y*z + a*x*z*y`` can be instantiated at sample values.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .linalg import mat_inv
from .scalars import Scalar


class PolySyntaxError(ValueError):
    """Malformed polynomial text; carries the 0-based offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownGenerator(PolySyntaxError):
    pass


class UnknownConstant(PolySyntaxError):
    pass


class SingularSubstitution(ValueError):
    pass


def gen_names(n):
    return ["x", "y", "z"][:n] if n <= 3 else [f"x{i}" for i in range(1, n + 1)]


class NcPoly:
    """Immutable sparse noncommutative polynomial."""

    __slots__ = ("field", "n", "terms")

    def __init__(self, field, n, terms=None):
        clean = {}
        for w, c in (terms or {}).items():
            w = tuple(w)
            for letter in w:
                if not 1 <= letter <= n:
                    raise ValueError(f"letter {letter} outside 1..{n}")
            c = field.scalar(c)
            if c:
                clean[w] = c
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("NcPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, field, n):
        return cls(field, n, {})

    @classmethod
    def one(cls, field, n):
        return cls(field, n, {(): field.scalar(1)})

    @classmethod
    def gen(cls, field, n, j):
        if not 1 <= j <= n:
            raise ValueError(f"generator index {j} outside 1..{n}")
        return cls(field, n, {(j,): field.scalar(1)})

    # -- queries -----------------------------------------------------------

    def items(self):
        """Terms in the deterministic (lexicographic on words) order."""
        return sorted(self.terms.items())

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, word):
        return self.terms.get(tuple(word), self.field.scalar(0))

    def degrees(self):
        return sorted({len(w) for w in self.terms})

    def degree(self):
        """Largest degree present; -1 for the zero polynomial."""
        return max((len(w) for w in self.terms), default=-1)

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def homogeneous_component(self, d):
        return NcPoly(self.field, self.n,
                      {w: c for w, c in self.terms.items() if len(w) == d})

    # -- arithmetic --------------------------------------------------------

    def _check_compatible(self, other):
        if self.field != other.field or self.n != other.n:
            raise ValueError("polynomials over different algebras")

    def __add__(self, other):
        if not isinstance(other, NcPoly):
            return NotImplemented
        self._check_compatible(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms[w] + c if w in terms else c
        return NcPoly(self.field, self.n, terms)

    def __sub__(self, other):
        if not isinstance(other, NcPoly):
            return NotImplemented
        self._check_compatible(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms[w] - c if w in terms else -c
        return NcPoly(self.field, self.n, terms)

    def __neg__(self):
        return NcPoly(self.field, self.n,
                      {w: -c for w, c in self.terms.items()})

    def scale(self, c):
        c = self.field.scalar(c)
        return NcPoly(self.field, self.n,
                      {w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        if not isinstance(other, NcPoly):
            return NotImplemented
        self._check_compatible(other)
        terms = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                c = c1 * c2
                terms[w] = terms[w] + c if w in terms else c
        return NcPoly(self.field, self.n, terms)

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = NcPoly.one(self.field, self.n)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, NcPoly):
            return NotImplemented
        return (self.field == other.field and self.n == other.n
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.field, self.n, frozenset(self.terms.items())))

    def __repr__(self):
        return print_ncpoly(self)


# ---------------------------------------------------------------------------
# Cyclic maps and derivatives.
# ---------------------------------------------------------------------------

def cyclic_shift(p):
    """The linear map C with C(1) = 1 and C(x_j u) = u x_j."""
    terms = {}
    for w, c in p.terms.items():
        sw = w[1:] + w[:1]
        terms[sw] = terms[sw] + c if sw in terms else c
    return NcPoly(p.field, p.n, terms)


def cyclicize(p):
    """u -> u + Cu + C^2 u + ... + C^(d-1) u on each degree-d term."""
    terms = {}
    for w, c in p.terms.items():
        d = max(len(w), 1)  # a constant contributes itself once
        for i in range(d):
            sw = w[i:] + w[:i]
            terms[sw] = terms[sw] + c if sw in terms else c
    return NcPoly(p.field, p.n, terms)


def left_derivative(p, j):
    """Strip a leading x_j; monomials not starting with x_j map to 0."""
    return NcPoly(p.field, p.n,
                  {w[1:]: c for w, c in p.terms.items() if w and w[0] == j})


def right_derivative(p, j):
    """Strip a trailing x_j; monomials not ending with x_j map to 0."""
    return NcPoly(p.field, p.n,
                  {w[:-1]: c for w, c in p.terms.items() if w and w[-1] == j})


def is_cyclicly_invariant(p):
    return all(left_derivative(p, j) == right_derivative(p, j)
               for j in range(1, p.n + 1))


# ---------------------------------------------------------------------------
# Linear substitutions.
# ---------------------------------------------------------------------------

class LinearSub:
    """An n x n scalar matrix; column j is the image of generator j."""

    __slots__ = ("field", "n", "matrix", "_inverse")

    def __init__(self, field, matrix):
        n = len(matrix)
        if any(len(row) != n for row in matrix):
            raise ValueError("substitution matrix must be square")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "n", n)
        object.__setattr__(
            self, "matrix",
            [[field.scalar(v) for v in row] for row in matrix])
        object.__setattr__(self, "_inverse", None)

    def __setattr__(self, *a):
        raise AttributeError("LinearSub is immutable")

    def inverse(self):
        if self._inverse is None:
            try:
                inv = mat_inv(self.matrix)
            except ValueError:
                raise SingularSubstitution(
                    "substitution matrix is not invertible") from None
            object.__setattr__(self, "_inverse", LinearSub(self.field, inv))
        return self._inverse

    def image(self, j):
        """Image of generator j as a linear polynomial."""
        return NcPoly(self.field, self.n,
                      {(i + 1,): self.matrix[i][j - 1] for i in range(self.n)
                       if self.matrix[i][j - 1]})

    def __eq__(self, other):
        return (isinstance(other, LinearSub) and self.field == other.field
                and self.matrix == other.matrix)

    def __repr__(self):
        return f"LinearSub({self.matrix})"


def apply_substitution(p, sub):
    """Replace each generator by its image and expand.

    Raises SingularSubstitution for a non-invertible matrix: the package
    only ever uses substitutions as changes of coordinates.
    """
    sub.inverse()  # existence check
    images = [sub.image(j) for j in range(1, p.n + 1)]
    out = NcPoly.zero(p.field, p.n)
    for w, c in p.terms.items():
        prod = NcPoly(p.field, p.n, {(): c})
        for letter in w:
            prod = prod * images[letter - 1]
        out = out + prod
    return out


# ---------------------------------------------------------------------------
# Text format.
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
                    r"|(?P<int>\d+)"
                    r"|(?P<sym>[-+*/^()]))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolySyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, n, field, params):
        self.tokens = _tokenize(text)
        self.i = 0
        self.n = n
        self.field = field
        self.params = params or {}
        self.names = gen_names(n)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, sym):
        kind, value, pos = self.take()
        if kind != "sym" or value != sym:
            raise PolySyntaxError(f"expected {sym!r}, found {value!r}", pos)

    def parse(self):
        p = self.poly()
        kind, value, pos = self.peek()
        if kind != "end":
            raise PolySyntaxError(f"unexpected {value!r}", pos)
        return p

    def poly(self):
        sign = 1
        kind, value, _ = self.peek()
        if kind == "sym" and value in "+-":
            self.take()
            sign = -1 if value == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while True:
            kind, value, _ = self.peek()
            if kind == "sym" and value in "+-":
                self.take()
                t = self.term()
                acc = acc - t if value == "-" else acc + t
            else:
                return acc

    def term(self):
        acc = self.factor()
        while True:
            kind, value, pos = self.peek()
            if kind == "sym" and value == "*":
                self.take()
                acc = acc * self.factor()
            elif kind == "sym" and value == "/":
                self.take()
                divisor = self.factor()
                acc = acc * self._scalar_inverse(divisor, pos)
            else:
                return acc

    def _scalar_inverse(self, p, pos):
        if p.degree() > 0:
            raise PolySyntaxError("can only divide by a scalar", pos)
        if p.is_zero():
            raise PolySyntaxError("division by zero", pos)
        inv = p.coefficient(()).inv()
        return NcPoly(self.field, self.n, {(): inv})

    def factor(self):
        base = self.atom()
        kind, value, pos = self.peek()
        if kind == "sym" and value == "^":
            self.take()
            kind, value, pos = self.take()
            negative = False
            if kind == "sym" and value == "-":
                negative = True
                kind, value, pos = self.take()
            if kind != "int":
                raise PolySyntaxError("expected an integer exponent", pos)
            k = int(value)
            if negative:
                return self._scalar_inverse(base, pos) ** k
            return base ** k
        return base

    def atom(self):
        kind, value, pos = self.take()
        if kind == "int":
            return NcPoly(self.field, self.n, {(): int(value)})
        if kind == "sym" and value == "(":
            p = self.poly()
            self.expect(")")
            return p
        if kind == "name":
            if value == "cyc":
                self.expect("(")
                p = self.poly()
                self.expect(")")
                return cyclicize(p)
            if value in self.names:
                return NcPoly.gen(self.field, self.n,
                                  self.names.index(value) + 1)
            if value in ("x", "y", "z") or re.fullmatch(r"x\d+", value):
                raise UnknownGenerator(
                    f"{value!r} is not a generator of the {self.n}-generator algebra", pos)
            if value in ("theta", "i", "xi8", "xi9"):
                return NcPoly(self.field, self.n,
                              {(): self.field.constant(value)})
            if value in self.params:
                return NcPoly(self.field, self.n,
                              {(): self.field.scalar(self.params[value])})
            raise UnknownConstant(f"unknown name {value!r}", pos)
        raise PolySyntaxError(f"unexpected {value!r}", pos)


def parse_ncpoly(text, n, field, params=None):
    """Parse the ASCII polynomial grammar over ``field``.

    Grammar: a sum of terms; a term is a '*'-separated product of factors
    with '/' allowed by scalar-valued factors; a factor is a generator,
    a parenthesized polynomial, ``cyc(...)``, an integer, or a named
    constant/parameter, optionally raised to an integer power (negative
    powers for scalar-valued factors only).
    """
    return _Parser(text, n, field, params).parse()


def _word_str(word, names):
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        parts.append(names[word[i] - 1] + (f"^{j - i}" if j - i > 1 else ""))
        i = j
    return "*".join(parts)


def print_ncpoly(p):
    """Deterministic text form; parse_ncpoly inverts it exactly."""
    if not p.terms:
        return "0"
    names = gen_names(p.n)
    pieces = []
    for word, c in p.items():
        coeff = p.field.format(c.value)
        if " " in coeff:
            coeff = f"({coeff})"
        if not word:
            pieces.append(coeff)
        elif coeff == "1":
            pieces.append(_word_str(word, names))
        elif coeff == "-1":
            pieces.append("-" + _word_str(word, names))
        else:
            pieces.append(f"{coeff}*{_word_str(word, names)}")
    out = pieces[0]
    for s in pieces[1:]:
        out += " - " + s[1:] if s.startswith("-") else " + " + s
    return out
