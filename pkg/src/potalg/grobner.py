"""Degree-truncated noncommutative Groebner bases over the scalar backends.

Everything here works with the left-to-right degree-lexicographic order
(longer words are bigger; equal lengths compare letter by letter through a
generator precedence).  The central operation is a truncated Buchberger
completion; on top of it sit normal-word counting (graded dimensions of the
quotient algebra), the filtered dimension sequence d_k of the quotient by
all words of degree k+1, an independent brute-force dimension oracle that
uses nothing but row reduction, right-annihilator detection, and the
quadratic-Groebner-basis test behind PBW checks.

Two distinct completion modes share one engine:

* plain truncation (``max_degree``): overlap ambiguities above the bound are
  simply not processed.  For homogeneous ideals the resulting normal forms
  are exact up to the bound; ``complete`` records whether any ambiguity was
  skipped at all, in which case the basis is the whole reduced basis.

* quotient-by-degree mode (``cap``, used for d_k): all arithmetic happens in
  the algebra truncated at degree ``cap`` -- terms beyond the cap vanish.
  Besides overlap ambiguities (only those of degree <= cap matter), the
  completion must process the *boundary products* a*g*b whose leading word
  a*lw(g)*b dies over the cap while lower terms survive; these are exactly
  the inclusion ambiguities between g and the degree-(cap+1) monomial
  relations, so processing them makes normal forms in the truncated algebra
  canonical and d_k an exact count of normal words.
"""

from dataclasses import dataclass
from heapq import heapify, heappop, heappush
from itertools import product

from .freealg import NcPoly
from .linalg import FpEchelon, SparseMatrix, rref
from .scalars import PrimeField


class TruncationExceeded(ValueError):
    """The requested degree is not certified by this truncated basis."""


class TooLarge(ValueError):
    """Word enumeration would be infeasible at this size."""


class NotQuadratic(ValueError):
    pass


class MonomialOrder:
    """Deglex with a generator precedence (tuple, most significant first)."""

    __slots__ = ("n", "precedence", "_rank")

    def __init__(self, n, precedence=None):
        if precedence is None:
            precedence = tuple(range(1, n + 1))
        precedence = tuple(precedence)
        if sorted(precedence) != list(range(1, n + 1)):
            raise ValueError(f"{precedence} is not a permutation of 1..{n}")
        self.n = n
        self.precedence = precedence
        self._rank = {g: i for i, g in enumerate(precedence)}

    def key(self, w):
        """Sort key: bigger monomial = bigger key."""
        rank = self._rank
        return (len(w), tuple(-rank[l] for l in w))

    def rank_tuple(self, w):
        rank = self._rank
        return tuple(rank[l] for l in w)

    def greatest(self, words):
        return max(words, key=self.key)

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder) and self.n == other.n
                and self.precedence == other.precedence)

    def __hash__(self):
        return hash((self.n, self.precedence))

    def __repr__(self):
        from .freealg import gen_names
        names = gen_names(self.n)
        return ">".join(names[g - 1] for g in self.precedence)


def default_truncation(n):
    """Degree bound at which all the catalog computations close comfortably."""
    if n <= 2:
        return 10
    if n == 3:
        return 8
    return 6


def proper_overlaps(u, v):
    """Overlap lengths t with suffix(u, t) == prefix(v, t), 0 < t < min."""
    return [t for t in range(1, min(len(u), len(v)))
            if u[-t:] == v[:t]]


@dataclass
class GrobnerBasis:
    order: MonomialOrder
    elements: list  # reduced monic NcPolys, sorted by leading word
    truncation_degree: int
    complete: bool
    field: object = None
    n: int = 0

    def leading_words(self):
        return [self.order.greatest(e.terms) for e in self.elements]


# ---------------------------------------------------------------------------
# The completion engine.
# ---------------------------------------------------------------------------

class _Engine:
    def __init__(self, field, order, max_degree, cap=None):
        self.field = field
        self.order = order
        self.max_degree = max_degree
        self.cap = cap
        self.elements = {}   # idx -> [lead, terms-dict, is_monomial]
        self.active = set()
        self.by_length = {}  # lead length -> {lead word: idx}
        self.heap = []
        self.counter = 0

    # -- reduction ---------------------------------------------------------

    def _find_divisor(self, w):
        lw = len(w)
        for L in sorted(self.by_length):
            if L > lw:
                break
            table = self.by_length[L]
            for pos in range(lw - L + 1):
                idx = table.get(w[pos:pos + L])
                if idx is not None:
                    return idx, pos, L
        return None

    def reduce_full(self, terms):
        """Fully reduce a word->Scalar dict; mutates and returns it."""
        order = self.order
        work = [(-len(w), order.rank_tuple(w), w) for w in terms]
        heapify(work)
        while work:
            _, _, w = heappop(work)
            c = terms.get(w)
            if c is None:
                continue
            hit = self._find_divisor(w)
            if hit is None:
                continue
            idx, pos, L = hit
            g = self.elements[idx]
            a, b = w[:pos], w[pos + L:]
            del terms[w]
            for t, ct in g[1].items():
                if t == g[0]:
                    continue
                w2 = a + t + b
                nv = terms.get(w2)
                nv = -c * ct if nv is None else nv - c * ct
                if nv:
                    if w2 not in terms:
                        heappush(work, (-len(w2), order.rank_tuple(w2), w2))
                    terms[w2] = nv
                elif w2 in terms:
                    del terms[w2]
        return terms

    # -- insertion and scheduling -------------------------------------------

    def add_reduced(self, terms):
        """Reduce and insert, cascading re-insertion of displaced elements."""
        worklist = [terms]
        while worklist:
            t = self.reduce_full(worklist.pop(0))
            if not t:
                continue
            lead = self.order.greatest(t)
            inv = t[lead].inv()
            if not (inv == 1):
                t = {w: c * inv for w, c in t.items()}
            L = len(lead)
            doomed = []
            for jdx in self.active:
                w = self.elements[jdx][0]
                if len(w) >= L and any(w[p:p + L] == lead
                                       for p in range(len(w) - L + 1)):
                    doomed.append(jdx)
            for jdx in sorted(doomed):
                el = self.elements[jdx]
                self.active.discard(jdx)
                del self.by_length[len(el[0])][el[0]]
                worklist.append(el[1])
            idx = self.counter
            self.counter += 1
            self.elements[idx] = [lead, t, len(t) == 1]
            self.active.add(idx)
            self.by_length.setdefault(L, {})[lead] = idx
            self._push_overlaps(idx)
            if self.cap is not None:
                self._push_boundary(idx)

    def _push_overlaps(self, idx):
        limit = self.cap if self.cap is not None else self.max_degree
        el = self.elements[idx]
        for jdx in sorted(self.active):
            other = self.elements[jdx]
            if el[2] and other[2]:
                continue  # two monomials: S-polynomial is identically zero
            for i, j in ((idx, jdx), (jdx, idx)) if jdx != idx else ((idx, idx),):
                u, v = self.elements[i][0], self.elements[j][0]
                for t in proper_overlaps(u, v):
                    deg = len(u) + len(v) - t
                    if deg <= limit:
                        w = u + v[t:]
                        heappush(self.heap,
                                 (deg, 0, i, j, (self.order.rank_tuple(w), t)))

    def _push_boundary(self, idx):
        lead, terms, _ = self.elements[idx]
        L = len(lead)
        mindeg = min(len(w) for w in terms)
        lo = max(0, self.cap + 1 - L)
        hi = self.cap - mindeg
        gens = range(1, self.order.n + 1)
        for s in range(lo, hi + 1):
            for la in range(s + 1):
                for a in product(gens, repeat=la):
                    for b in product(gens, repeat=s - la):
                        heappush(self.heap, (L + s, 1, idx, la, (a, b)))

    def _spoly(self, i, j, t):
        gi, gj = self.elements[i], self.elements[j]
        u, v = gi[0], gj[0]
        suffix, prefix = v[t:], u[:len(u) - t]
        cap = self.cap
        terms = {}
        for w, c in gi[1].items():
            w2 = w + suffix
            if cap is not None and len(w2) > cap:
                continue
            nv = terms.get(w2)
            nv = c if nv is None else nv + c
            if nv:
                terms[w2] = nv
            elif w2 in terms:
                del terms[w2]
        for w, c in gj[1].items():
            w2 = prefix + w
            if cap is not None and len(w2) > cap:
                continue
            nv = terms.get(w2)
            nv = -c if nv is None else nv - c
            if nv:
                terms[w2] = nv
            elif w2 in terms:
                del terms[w2]
        return terms

    def _boundary_product(self, idx, a, b):
        lead, terms, _ = self.elements[idx]
        cap = self.cap
        out = {}
        for w, c in terms.items():
            if w == lead:
                continue  # the lead lands over the cap by construction
            w2 = a + w + b
            if len(w2) > cap:
                continue
            nv = out.get(w2)
            nv = c if nv is None else nv + c
            if nv:
                out[w2] = nv
            elif w2 in out:
                del out[w2]
        return out

    # -- main loop -----------------------------------------------------------

    def seed(self, relations):
        for r in relations:
            if r:
                if self.cap is not None:
                    t = {w: c for w, c in r.terms.items() if len(w) <= self.cap}
                else:
                    t = dict(r.terms)
                self.add_reduced(t)

    def run(self):
        while self.heap:
            deg, kind, x, y, z = heappop(self.heap)
            if kind == 0:
                if x in self.active and y in self.active:
                    _, t = z
                    s = self._spoly(x, y, t)
                    if s:
                        self.add_reduced(s)
            else:
                if x in self.active:
                    a, b = z
                    c = self._boundary_product(x, a, b)
                    if c:
                        self.add_reduced(c)

    def unresolved_above_bound(self):
        """Any overlap among the final basis beyond max_degree?"""
        idxs = sorted(self.active)
        for i in idxs:
            for j in idxs:
                ei, ej = self.elements[i], self.elements[j]
                if ei[2] and ej[2]:
                    continue
                u, v = ei[0], ej[0]
                for t in proper_overlaps(u, v):
                    if len(u) + len(v) - t > self.max_degree:
                        return True
        return False

    def finished_elements(self):
        """Tail-reduce and return the reduced basis, sorted by leading word."""
        out = []
        for idx in sorted(self.active, key=lambda i: self.order.key(self.elements[i][0])):
            lead, terms, _ = self.elements[idx]
            tail = {w: c for w, c in terms.items() if w != lead}
            tail = self.reduce_full(tail)
            tail[lead] = self.field.scalar(1)
            out.append(tail)
        return out

    def normal_word_list(self, up_to):
        """Words of each degree <= up_to avoiding all leading words.

        A word is normal iff its parent is normal and no leading word is a
        suffix, so one BFS level per degree suffices.
        """
        lead_lengths = sorted(self.by_length)
        if lead_lengths and lead_lengths[0] == 0:
            # the basis contains a unit: zero algebra
            return [[] for _ in range(up_to + 1)]
        levels = [[()]]
        for m in range(1, up_to + 1):
            nxt = []
            for w in levels[-1]:
                for g in range(1, self.order.n + 1):
                    child = w + (g,)
                    ok = True
                    for L in lead_lengths:
                        if L > m:
                            break
                        if child[m - L:] in self.by_length[L]:
                            ok = False
                            break
                    if ok:
                        nxt.append(child)
            levels.append(nxt)
        return levels

    def normal_word_counts(self, up_to):
        return [len(level) for level in self.normal_word_list(up_to)]


def buchberger_truncated(relations, order, max_degree, field=None):
    """Reduced Groebner basis, exhaustive for ambiguities up to max_degree.

    ``complete`` is True when no ambiguity among the final basis exceeds the
    bound, i.e. the returned basis is the full reduced Groebner basis.
    """
    relations = [r for r in relations if r]
    if field is None:
        if not relations:
            raise ValueError("field is required when no relations are given")
        field = relations[0].field
    eng = _Engine(field, order, max_degree)
    eng.seed(relations)
    eng.run()
    complete = not eng.unresolved_above_bound()
    elements = [NcPoly(field, order.n, t) for t in eng.finished_elements()]
    return GrobnerBasis(order=order, elements=elements,
                        truncation_degree=max_degree, complete=complete,
                        field=field, n=order.n)


# ---------------------------------------------------------------------------
# Normal forms and graded dimensions from a finished basis.
# ---------------------------------------------------------------------------

def _engine_from_basis(gb):
    eng = _Engine(gb.field, gb.order, gb.truncation_degree)
    for e in gb.elements:
        lead = gb.order.greatest(e.terms)
        idx = eng.counter
        eng.counter += 1
        eng.elements[idx] = [lead, dict(e.terms), len(e.terms) == 1]
        eng.active.add(idx)
        eng.by_length.setdefault(len(lead), {})[lead] = idx
    return eng


class Reducer:
    """Reusable normal-form computer for a fixed basis (amortizes setup)."""

    def __init__(self, gb):
        self.gb = gb
        self._eng = _engine_from_basis(gb)

    def __call__(self, p):
        if p.degree() > self.gb.truncation_degree and not self.gb.complete:
            raise TruncationExceeded(
                f"degree {p.degree()} beyond certified degree "
                f"{self.gb.truncation_degree}")
        return NcPoly(self.gb.field, self.gb.n,
                      self._eng.reduce_full(dict(p.terms)))


def normal_form(gb, p):
    """Canonical representative of p modulo the ideal (valid up to truncation)."""
    return Reducer(gb)(p)


def normal_words(gb, up_to):
    """Normal words per degree 0..up_to; a vector-space basis of the quotient
    in each degree when the ideal is homogeneous."""
    if up_to > gb.truncation_degree and not gb.complete:
        raise TruncationExceeded(
            f"normal words to degree {up_to} are not certified by a basis "
            f"truncated at {gb.truncation_degree}")
    return _engine_from_basis(gb).normal_word_list(up_to)


def graded_dims(gb, up_to):
    """dim A_m for m = 0..up_to by counting normal words (homogeneous case)."""
    for e in gb.elements:
        if not e.is_homogeneous():
            raise ValueError("graded dimensions need homogeneous relations")
    if up_to > gb.truncation_degree and not gb.complete:
        raise TruncationExceeded(
            f"dimensions to degree {up_to} are not certified by a basis "
            f"truncated at {gb.truncation_degree}")
    eng = _engine_from_basis(gb)
    return eng.normal_word_counts(up_to)


def pseries_dims(relations, order, up_to, field=None):
    """d_k = dim of the quotient by the relations plus all words of degree k+1.

    For homogeneous relations these are partial sums of the graded
    dimensions.  In general each d_k comes from a completion run in the
    degree-capped algebra, which handles inhomogeneous relations (including
    degree drops) exactly.
    """
    relations = [r for r in relations if r]
    if field is None:
        if not relations:
            raise ValueError("field is required when no relations are given")
        field = relations[0].field
    if all(r.is_homogeneous() for r in relations):
        gb = buchberger_truncated(relations, order, up_to, field=field)
        dims = graded_dims(gb, up_to)
        out = []
        acc = 0
        for d in dims:
            acc += d
            out.append(acc)
        return out
    out = []
    for k in range(up_to + 1):
        eng = _Engine(field, order, max_degree=k, cap=k)
        eng.seed(relations)
        eng.run()
        out.append(sum(eng.normal_word_counts(k)))
    return out


# ---------------------------------------------------------------------------
# Brute-force graded dimensions: pure row reduction, no Groebner machinery.
# ---------------------------------------------------------------------------

_BRUTE_LIMIT = 3200


def _word_index(w, n):
    idx = 0
    for l in w:
        idx = idx * n + (l - 1)
    return idx


def brute_force_dims(relations, up_to, n=None, field=None):
    """dim A_m = n^m - rank{u r v : deg(urv) = m} for m = 0..up_to.

    Implements the degree-by-degree span recurrence I_m = V.I_(m-1) + Z_m,
    Z_m = Z_(m-1).V + R_m directly on coefficient vectors.
    """
    relations = [r for r in relations if r]
    if relations:
        n = relations[0].n
        field = relations[0].field
        for r in relations:
            if not r.is_homogeneous():
                raise ValueError("brute-force dimensions need homogeneous relations")
    if n is None or field is None:
        raise ValueError("n and field are required when no relations are given")
    if n ** up_to > _BRUTE_LIMIT:
        raise TooLarge(f"{n}^{up_to} words exceed the enumeration guard")
    by_degree = {}
    for r in relations:
        by_degree.setdefault(r.degree(), []).append(r)
    if isinstance(field, PrimeField):
        return _brute_prime(by_degree, up_to, n, field)
    return _brute_generic(by_degree, up_to, n, field)


def _brute_prime(by_degree, up_to, n, field):
    p = field.p
    dims = [1]
    irows, zrows = [], []
    for m in range(1, up_to + 1):
        size = n ** m
        prev = size // n
        zech = FpEchelon(p, size)
        for v in zrows:
            for g in range(n):
                row = [0] * size
                for i, val in enumerate(v):
                    if val:
                        row[i * n + g] = val
                zech.add_row(row)
        for r in by_degree.get(m, ()):
            row = [0] * size
            for w, c in r.terms.items():
                row[_word_index(w, n)] = c.value
            zech.add_row(row)
        zrows = [row for _, row in zech.get_rows()]
        iech = FpEchelon(p, size)
        for v in irows:
            for g in range(n):
                row = [0] * size
                row[g * prev:(g + 1) * prev] = v
                iech.add_row(row)
        for z in zrows:
            iech.add_row(z)
        irows = [row for _, row in iech.get_rows()]
        dims.append(size - iech.rank)
    return dims


def _brute_generic(by_degree, up_to, n, field):
    dims = [1]
    irows, zrows = [], []
    for m in range(1, up_to + 1):
        size = n ** m
        prev = size // n
        zcand = []
        for v in zrows:
            for g in range(n):
                zcand.append({i * n + g: c for i, c in v.items()})
        for r in by_degree.get(m, ()):
            zcand.append({_word_index(w, n): c for w, c in r.terms.items()})
        zred, _, _ = rref(SparseMatrix(field, zcand, size))
        zrows = [dict(row) for row in zred.rows]
        icand = []
        for v in irows:
            for g in range(n):
                icand.append({g * prev + i: c for i, c in v.items()})
        icand.extend(dict(z) for z in zrows)
        ired, rank_i, _ = rref(SparseMatrix(field, icand, size))
        irows = [dict(row) for row in ired.rows]
        dims.append(size - rank_i)
    return dims


# ---------------------------------------------------------------------------
# Right annihilators.
# ---------------------------------------------------------------------------

def right_annihilator_free(gb, up_to):
    """True iff no nonzero u of degree <= up_to has x_g u = 0 for all g.

    Fast path: if some generator begins no leading word, left multiplication
    by it maps normal words to normal words injectively, so no annihilators
    exist in any degree.  Otherwise each graded slice of u -> (x_1 u, ...,
    x_n u) is rank-checked on normal-word bases.
    """
    for e in gb.elements:
        if not e.is_homogeneous():
            raise ValueError("annihilator check needs homogeneous relations")
    if up_to + 1 > gb.truncation_degree and not gb.complete:
        raise TruncationExceeded(
            f"need normal forms at degree {up_to + 1}, basis truncated at "
            f"{gb.truncation_degree}")
    n = gb.n
    leads = gb.leading_words()
    starting = {w[0] for w in leads if w}
    if len(starting) < n:
        return True
    eng = _engine_from_basis(gb)
    lead_lengths = sorted(eng.by_length)
    frontier = [()]
    for m in range(up_to + 1):
        nxt = []
        for w in frontier:
            for g in range(1, n + 1):
                child = w + (g,)
                ok = True
                for L in lead_lengths:
                    if L > m + 1:
                        break
                    if child[m + 1 - L:] in eng.by_length[L]:
                        ok = False
                        break
                if ok:
                    nxt.append(child)
        col = {w: i for i, w in enumerate(nxt)}
        rows = []
        for v in frontier:
            row = {}
            for g in range(1, n + 1):
                nf = eng.reduce_full({(g,) + v: gb.field.scalar(1)})
                for w, c in nf.items():
                    row[(g - 1) * len(nxt) + col[w]] = c
            rows.append(row)
        if frontier:
            _, rk, _ = rref(SparseMatrix(gb.field, rows, max(1, n * len(nxt))))
            if rk < len(frontier):
                return False
        frontier = nxt
    return True


# ---------------------------------------------------------------------------
# Quadratic Groebner bases (the order-specific half of PBW).
# ---------------------------------------------------------------------------

def pbw_with_order(relations, order, field=None):
    """(all degree-3 ambiguities resolve, leading words of the relation span).

    The relation span is first put in reduced form with pairwise distinct
    leading words; the boolean says whether those quadratic elements are
    already a Groebner basis, i.e. whether every overlap of two leading
    words rewrites to zero.
    """
    relations = [r for r in relations if r]
    for r in relations:
        if not (r.is_homogeneous() and r.degree() == 2):
            raise NotQuadratic("pbw_with_order needs homogeneous quadratic relations")
    if not relations:
        return True, frozenset()
    gb = buchberger_truncated(relations, order, 3, field=field)
    quadratic = [e for e in gb.elements if e.degree() == 2]
    is_quadratic_gb = len(quadratic) == len(gb.elements)
    leading = frozenset(order.greatest(e.terms) for e in quadratic)
    return is_quadratic_gb, leading


def gb_to_text(gb):
    """One element per line below a header recording order and truncation."""
    from .freealg import print_ncpoly
    lines = [f"# order: {gb.order!r}  truncation: {gb.truncation_degree}  "
             f"complete: {str(gb.complete).lower()}"]
    lines.extend(print_ncpoly(e) for e in gb.elements)
    return "\n".join(lines)
