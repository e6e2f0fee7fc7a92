"""Curated catalog of potential and twisted-potential algebras.

The data file ``data/catalog.txt`` records, for each algebra, the potential,
the defining relations, parameter samples, the claimed Hilbert series and
structural flags, and -- where known -- the twist eigenvalues, a complete
Groebner basis and parameter isomorphisms.  ``load_catalog`` parses the file
and cross-checks every entry's internal consistency; ``verify_entry``
recomputes each claim over a chosen scalar field and reports the outcome
check by check, never by raising.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .freealg import (LinearSub, NcPoly, apply_substitution, gen_names,
                      parse_ncpoly)
from .grobner import (MonomialOrder, buchberger_truncated, default_truncation,
                      graded_dims, pbw_with_order)
from .homology import (build_complex_slices, exactness_by_criterion,
                       koszul_duality_probe, target_dims)
from .linalg import SparseMatrix, rank, verify_eigenvalues
from .potential import left_derivatives, twist_detect
from .scalars import DivisionByZero, PrimeField, Rationals, UnsupportedOrder
from .series import parse_series, taylor

_FLAGS = ("Y", "N", "n/a")
_PROPERNESS = ("proper", "nonproper-nondegenerate", "degenerate")
_FIELD_KEYS = ("n", "degree", "potential", "relations", "params", "samples",
               "exceptions", "series", "koszul", "pbw", "exact", "properness",
               "eigenvalues", "gb_order", "gb", "gb_leads", "pbw_witness")
_REQUIRED = ("n", "degree", "potential", "relations", "series", "koszul",
             "pbw", "exact", "properness")

CHECK_NAMES = ("relations", "series", "twist", "properness", "exactness",
               "duality", "pbw", "gb", "iso")


class SchemaError(ValueError):
    """A malformed or internally inconsistent catalog entry."""

    def __init__(self, label, message):
        super().__init__(f"[{label}] {message}")
        self.label = label


@dataclass(frozen=True)
class Isomorphism:
    """Generator substitution + parameter action preserving the family."""

    images: tuple   # linear-form template per generator, in generator order
    actions: tuple  # (param name, expression template) pairs


@dataclass(frozen=True)
class CatalogEntry:
    label: str
    n: int
    degree: int
    potential: str
    relations: tuple
    params: tuple
    samples: tuple      # dicts param -> Fraction
    exceptions: tuple   # groups of scalar expression templates
    series: str
    koszul: str
    pbw: str
    exact: str
    properness: str
    eigenvalues: tuple  # expression per generator, or None
    gb_order: tuple     # generator names, most significant first, or None
    gb: tuple           # complete reduced basis templates, or None
    gb_leads: tuple     # leading words only, or None
    isos: tuple
    pbw_witness: tuple  # generator images exhibiting a quadratic basis, or None

    def parameter_sets(self):
        return self.samples if self.params else ({},)

    def admissible(self, values):
        """No exception group vanishes entirely at these parameter values."""
        q = Rationals()
        for group in self.exceptions:
            if all(_scalar_value(g, self.n, q, values) == q.scalar(0)
                   for g in group):
                return False
        return True

    def potential_at(self, field, values):
        return parse_ncpoly(self.potential, self.n, field, params=values)

    def relations_at(self, field, values):
        return [parse_ncpoly(r, self.n, field, params=values)
                for r in self.relations]

    def order(self):
        names = gen_names(self.n)
        if self.gb_order is None:
            return MonomialOrder(self.n)
        return MonomialOrder(self.n,
                             [names.index(g) + 1 for g in self.gb_order])


def _scalar_value(text, n, field, values):
    p = parse_ncpoly(text, n, field, params=values)
    if any(w != () for w in p.terms):
        raise ValueError(f"{text!r} is not a scalar expression")
    return p.coefficient(())


def _split(text, sep=";"):
    return tuple(part.strip() for part in text.split(sep) if part.strip())


def _parse_samples(label, text, params):
    out = []
    for group in text.split("|"):
        values = {}
        for assign in group.split(","):
            if "=" not in assign:
                raise SchemaError(label, f"malformed sample {assign!r}")
            name, _, val = assign.partition("=")
            name = name.strip()
            if name in values:
                raise SchemaError(label, f"sample assigns {name!r} twice")
            try:
                values[name] = Fraction(val.strip())
            except ValueError:
                raise SchemaError(label,
                                  f"non-rational sample value {val!r}") from None
        if set(values) != set(params):
            raise SchemaError(label,
                              f"sample {values} does not assign exactly {params}")
        out.append(values)
    return tuple(out)


def _parse_iso(label, text, params):
    if text.count("=>") != 1:
        raise SchemaError(label, "an iso needs exactly one '=>'")
    left, _, right = text.partition("=>")
    images = _split(left)
    if any("->" not in img for img in images):
        raise SchemaError(label, "each iso image needs a '->'")
    images = tuple(img.partition("->")[2].strip() for img in images)
    actions = []
    for act in _split(right, ","):
        name, arrow, expr = act.partition("->")
        if not arrow:
            raise SchemaError(label, f"malformed iso action {act!r}")
        name = name.strip()
        if name not in params:
            raise SchemaError(label, f"iso action maps unknown parameter {name!r}")
        actions.append((name, expr.strip()))
    return Isomorphism(images=images, actions=tuple(actions))


def _spans_equal(field, a, b):
    words = sorted({w for p in a + b for w in p.terms})
    col = {w: i for i, w in enumerate(words)}

    def rk(polys):
        rows = [{col[w]: c for w, c in p.terms.items()} for p in polys]
        return rank(SparseMatrix(field, rows, len(words)))

    return rk(a) == rk(b) == rk(a + b)


def _build_entry(label, fields, isos):
    for key in _REQUIRED:
        if key not in fields:
            raise SchemaError(label, f"missing required field {key!r}")
    for key in fields:
        if key not in _FIELD_KEYS:
            raise SchemaError(label, f"unknown field {key!r}")
    try:
        n = int(fields["n"])
        degree = int(fields["degree"])
    except ValueError:
        raise SchemaError(label, "n and degree must be integers") from None
    if not 2 <= n <= 4:
        raise SchemaError(label, f"n={n} is out of the supported range 2..4")
    if degree < 2:
        raise SchemaError(label, f"degree={degree} is too small")
    relations = () if fields["relations"] == "none" \
        else _split(fields["relations"])
    params = _split(fields.get("params", ""), ",")
    samples = _parse_samples(label, fields["samples"], params) \
        if "samples" in fields else ()
    if params and len(samples) < 2:
        raise SchemaError(label, "parametrized entries need two samples")
    if samples and not params:
        raise SchemaError(label, "samples given without params")
    exceptions = tuple(_split(group, ",")
                       for group in fields.get("exceptions", "").split("|")
                       if group.strip())
    for flag_key in ("koszul", "pbw"):
        if fields[flag_key] not in _FLAGS:
            raise SchemaError(label, f"{flag_key} must be one of {_FLAGS}")
    if fields["exact"] not in ("Y", "N"):
        raise SchemaError(label, "exact must be Y or N")
    if fields["properness"] not in _PROPERNESS:
        raise SchemaError(label, f"properness must be one of {_PROPERNESS}")
    eigenvalues = _split(fields["eigenvalues"], ",") \
        if "eigenvalues" in fields else None
    if eigenvalues is not None and len(eigenvalues) != n:
        raise SchemaError(label, f"expected {n} eigenvalues")
    gb_order = None
    if "gb_order" in fields:
        gb_order = _split(fields["gb_order"], ">")
        if sorted(gb_order) != sorted(gen_names(n)):
            raise SchemaError(label, f"gb_order {gb_order} is not a "
                              f"permutation of the {n} generators")
    gb = _split(fields["gb"]) if "gb" in fields else None
    gb_leads = _split(fields["gb_leads"]) if "gb_leads" in fields else None
    if (gb or gb_leads) and gb_order is None:
        raise SchemaError(label, "a recorded basis needs gb_order")
    if gb and gb_leads:
        raise SchemaError(label, "give gb or gb_leads, not both")
    pbw_witness = None
    if "pbw_witness" in fields:
        if fields["pbw"] != "Y":
            raise SchemaError(label, "pbw_witness only makes sense with pbw = Y")
        images = _split(fields["pbw_witness"])
        if len(images) != n or any("->" not in img for img in images):
            raise SchemaError(label,
                              f"pbw_witness needs {n} images of the form g -> expr")
        pbw_witness = tuple(img.partition("->")[2].strip() for img in images)
    entry = CatalogEntry(
        label=label, n=n, degree=degree, potential=fields["potential"],
        relations=relations, params=params, samples=samples,
        exceptions=exceptions, series=fields["series"],
        koszul=fields["koszul"], pbw=fields["pbw"], exact=fields["exact"],
        properness=fields["properness"], eigenvalues=eigenvalues,
        gb_order=gb_order, gb=gb, gb_leads=gb_leads,
        isos=tuple(_parse_iso(label, text, params) for text in isos),
        pbw_witness=pbw_witness)
    _cross_check(entry)
    return entry


def _cross_check(entry):
    """Internal consistency: everything parses, samples are admissible, the
    relations really span the cyclic derivatives of the potential."""
    label = entry.label
    try:
        parse_series(entry.series)
    except ValueError as e:
        raise SchemaError(label, f"bad series: {e}") from None
    field = PrimeField(1009)  # supports every named constant
    for values in entry.parameter_sets():
        if not entry.admissible(values):
            raise SchemaError(label, f"sample {values} hits an exception")
        try:
            F = entry.potential_at(field, values)
            rels = entry.relations_at(field, values)
        except ValueError as e:
            raise SchemaError(label, f"unparseable template: {e}") from None
        if F:
            if not F.is_homogeneous() or F.degree() != entry.degree:
                raise SchemaError(label, "potential degree disagrees with "
                                  "the declared degree")
        elif entry.relations:
            raise SchemaError(label, "zero potential cannot have relations")
        for r in rels:
            if not r or not r.is_homogeneous() or r.degree() != entry.degree - 1:
                raise SchemaError(label, "each relation must be homogeneous "
                                  f"of degree {entry.degree - 1}")
        lefts = [p for p in left_derivatives(F) if p] if F else []
        if not _spans_equal(field, lefts, rels):
            raise SchemaError(label, f"at {values} the relations do not span "
                              "the cyclic derivatives of the potential")
        if entry.eigenvalues:
            for expr in entry.eigenvalues:
                _scalar_value(expr, entry.n, field, values)
        for g in entry.gb or ():
            parse_ncpoly(g, entry.n, field, params=values)
        for w in entry.gb_leads or ():
            p = parse_ncpoly(w, entry.n, field)
            if len(p.terms) != 1:
                raise SchemaError(label, f"gb lead {w!r} is not a monomial")
        for img in entry.pbw_witness or ():
            p = parse_ncpoly(img, entry.n, field, params=values)
            if not p or p.degrees() != [1]:
                raise SchemaError(label, f"pbw witness image {img!r} is "
                                  "not linear")
        for iso in entry.isos:
            if len(iso.images) != entry.n:
                raise SchemaError(label, "iso needs one image per generator")
            for img in iso.images:
                p = parse_ncpoly(img, entry.n, field, params=values)
                if not p or p.degrees() != [1]:
                    raise SchemaError(label, f"iso image {img!r} is not linear")
            for _, expr in iso.actions:
                _scalar_value(expr, entry.n, field, values)


def load_catalog(path=None):
    """Parse the catalog file into an ordered label -> CatalogEntry dict."""
    if path is None:
        text = resources.files("potalg").joinpath("data/catalog.txt") \
            .read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    entries = {}
    label, fields, isos = None, {}, []

    def flush():
        if label is None:
            if fields or isos:
                raise SchemaError("?", "fields before the first [label]")
            return
        if label in entries:
            raise SchemaError(label, "duplicate label")
        entries[label] = _build_entry(label, fields, isos)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise SchemaError(line, f"malformed header at line {lineno}")
            flush()
            label, fields, isos = line[1:-1].strip(), {}, []
            continue
        key, eq, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not eq or not key or not value:
            raise SchemaError(label or "?",
                              f"expected 'key = value' at line {lineno}")
        if key == "iso":
            isos.append(value)
        elif key in fields:
            raise SchemaError(label or "?", f"duplicate field {key!r}")
        else:
            fields[key] = value
    flush()
    return entries


# ---------------------------------------------------------------------------
# Verification of the recorded claims over a chosen field.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "n/a"
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    label: str
    field: object
    degrees_checked: int
    checks: tuple
    runtime: float

    @property
    def passed(self):
        return all(c.status != "fail" for c in self.checks)

    def _status(self, name):
        for c in self.checks:
            if c.name == name:
                return c.status
        raise KeyError(name)

    @property
    def series_match(self):
        return self._status("series")

    @property
    def flags_match(self):
        worst = [self._status(k) for k in ("exactness", "duality", "pbw")]
        if "fail" in worst:
            return "fail"
        return "pass" if "pass" in worst else "n/a"

    @property
    def twist_match(self):
        return self._status("twist")

    @property
    def properness_match(self):
        return self._status("properness")

    @property
    def gb_match(self):
        return self._status("gb")

    @property
    def iso_match(self):
        return self._status("iso")


def format_report(report):
    verdict = "PASS" if report.passed else "FAIL"
    parts = [f"{c.name}={c.status}" for c in report.checks]
    return (f"{report.label}: {verdict} over {report.field!r} up to degree "
            f"{report.degrees_checked} ({report.runtime:.2f}s) "
            + " ".join(parts))


def format_report_machine(report):
    """One stable, greppable line per check."""
    lines = []
    for c in report.checks:
        detail = f" {c.detail}" if c.detail else ""
        lines.append(f"check\t{report.label}\t{c.name}\t{c.status}{detail}")
    lines.append(f"entry\t{report.label}\t"
                 f"{'PASS' if report.passed else 'FAIL'}\t"
                 f"degree={report.degrees_checked}")
    return "\n".join(lines)


def _na(name, why):
    return CheckResult(name, "n/a", why)


def _outcome(name, ok, detail=""):
    return CheckResult(name, "pass" if ok else "fail", detail)


def _check_relations(entry, field, contexts):
    for values, F, rels in contexts:
        lefts = [p for p in left_derivatives(F) if p] if F else []
        live = [r for r in rels if r]
        if not _spans_equal(field, lefts, live):
            return _outcome("relations", False, f"span mismatch at {values}")
        words = sorted({w for p in live for w in p.terms})
        col = {w: i for i, w in enumerate(words)}
        rows = [{col[w]: c for w, c in p.terms.items()} for p in live]
        if rank(SparseMatrix(field, rows, len(words))) != len(live):
            return _outcome("relations", False,
                            f"relations dependent at {values}")
    return _outcome("relations", True)


def _check_series(entry, eff, expected, dims_by_sample):
    for values, dims in dims_by_sample:
        if dims != expected:
            return _outcome("series", False,
                            f"dims {dims} != claimed {expected} at {values}")
    return _outcome("series", True)


def _check_twist(entry, field, contexts):
    claims = []
    for values, F, _ in contexts:
        if not F:
            return _na("twist", "zero potential has no twist")
        rep = twist_detect(F)
        if not rep.is_twisted:
            return _outcome("twist", False,
                            f"left/right derivative spans differ at {values}")
        nondeg_claim = entry.properness != "degenerate"
        if rep.nondegenerate != nondeg_claim:
            return _outcome("twist", False,
                            f"nondegeneracy {rep.nondegenerate} contradicts "
                            f"properness={entry.properness}")
        if entry.eigenvalues:
            if rep.twist_matrix is None:
                return _outcome("twist", False,
                                "eigenvalues claimed for a degenerate entry")
            claimed = [_scalar_value(e, entry.n, field, values)
                       for e in entry.eigenvalues]
            if not verify_eigenvalues(rep.twist_matrix, claimed):
                return _outcome("twist", False,
                                f"eigenvalue multiset differs at {values}")
            claims.append(values)
    detail = "" if claims else "eigenvalue multiset unclaimed"
    return _outcome("twist", True, detail)


def _check_properness(entry, dims_by_sample):
    n, k = entry.n, entry.degree
    want = {"proper": (True, True),
            "nonproper-nondegenerate": (True, False)}.get(entry.properness)
    for values, dims in dims_by_sample:
        nondeg = dims[k - 1] == n ** (k - 1) - n
        proper = dims[k] == n ** k - 2 * n * n + 1
        if want is None:  # degenerate: only nondegeneracy can be refuted
            ok = not nondeg
        else:
            ok = (nondeg, proper) == want
        if not ok:
            return _outcome("properness", False,
                            f"dims give nondegenerate={nondeg} "
                            f"proper={proper} at {values}")
    return _outcome("properness", True)


def _check_exactness(entry, field, eff, contexts, deep_gbs):
    for (values, F, rels), gb in zip(contexts, deep_gbs):
        crit = exactness_by_criterion(F, gb, eff, degree=entry.degree)
        try:
            slices = build_complex_slices(F, gb, eff, degree=entry.degree)
        except ValueError as e:
            return _outcome("exactness", False,
                            f"complex does not close at {values}: {e}")
        bad = [s.degree for s in slices if not s.exact_here]
        if entry.exact == "Y":
            if not crit:
                return _outcome("exactness", False,
                                f"series/annihilator criterion fails at {values}")
            if bad:
                return _outcome("exactness", False,
                                f"complex not exact in degrees {bad} at {values}")
        else:
            mismatch = graded_dims(gb, eff) != target_dims(entry.n,
                                                           entry.degree, eff)
            if crit or not (mismatch or bad):
                return _outcome("exactness", False,
                                f"no exactness failure found at {values}")
    if entry.exact == "Y":
        return _outcome("exactness", True)
    return _outcome("exactness", True, f"failure witnessed: "
                    + ("series mismatch" if mismatch else f"slices {bad}"))


def _check_duality(entry, field, eff, contexts):
    if entry.koszul == "n/a":
        return _na("duality", "relations are not quadratic")
    for values, F, rels in contexts:
        holds, fail_at = koszul_duality_probe(rels, entry.n, eff, field=field)
        if entry.koszul == "Y" and not holds:
            return _outcome("duality", False,
                            f"duality product deviates at degree {fail_at} "
                            f"at {values}")
        if entry.koszul == "N" and holds:
            return _outcome("duality", False,
                            f"no duality failure up to degree {eff} at {values}")
    return _outcome("duality", True)


def _check_pbw(entry, field, contexts):
    if entry.pbw == "n/a":
        return _na("pbw", "relations are not quadratic")
    from itertools import permutations
    for values, F, rels in contexts:
        candidates = [rels]
        if entry.pbw_witness:
            # The property allows changing degree-1 generators first; the
            # witness records a substitution under which a quadratic basis
            # appears.
            try:
                cols = [parse_ncpoly(img, entry.n, field, params=values)
                        for img in entry.pbw_witness]
            except UnsupportedOrder as e:
                return _na("pbw", f"witness needs a constant this field "
                           f"lacks: {e}")
            matrix = [[cols[j].coefficient((i + 1,))
                       for j in range(entry.n)] for i in range(entry.n)]
            sub = LinearSub(field, matrix)
            candidates.append([apply_substitution(r, sub) for r in rels])
        found = None
        for cand in candidates:
            for prec in permutations(range(1, entry.n + 1)):
                ok, _ = pbw_with_order(cand, MonomialOrder(entry.n, prec),
                                       field=field)
                if ok:
                    found = prec
                    break
            if found:
                break
        if entry.pbw == "Y" and found is None:
            return _outcome("pbw", False,
                            f"no precedence gives a quadratic basis at {values}")
        if entry.pbw == "N" and found is not None:
            return _outcome("pbw", False,
                            f"precedence {found} gives a quadratic basis "
                            f"at {values}")
    return _outcome("pbw", True)


def _monic(p, order, field):
    lead = order.greatest(p.terms)
    return p.scale(field.scalar(1) / p.terms[lead])


def _check_gb(entry, field, contexts, gbs):
    if not entry.gb and not entry.gb_leads:
        return _na("gb", "no basis recorded")
    order = entry.order()
    for (values, F, rels), gb in zip(contexts, gbs):
        if not gb.complete:
            return _outcome("gb", False,
                            f"recomputed basis not complete at {values}")
        if entry.gb:
            got = {_monic(e, order, field) for e in gb.elements}
            want = {_monic(parse_ncpoly(g, entry.n, field, params=values),
                           order, field) for g in entry.gb}
            if got != want:
                return _outcome("gb", False, f"basis differs at {values}")
        else:
            got = {order.greatest(e.terms) for e in gb.elements}
            want = {next(iter(parse_ncpoly(w, entry.n, field).terms))
                    for w in entry.gb_leads}
            if got != want:
                return _outcome("gb", False,
                                f"leading words differ at {values}")
    return _outcome("gb", True)


def _check_iso(entry, field, contexts):
    if not entry.isos:
        return _na("iso", "no isomorphisms recorded")
    for values, F, rels in contexts:
        for iso in entry.isos:
            try:
                cols = [parse_ncpoly(img, entry.n, field, params=values)
                        for img in iso.images]
                matrix = [[cols[j].coefficient((i + 1,))
                           for j in range(entry.n)] for i in range(entry.n)]
                mapped = dict(values)
                for name, expr in iso.actions:
                    mapped[name] = _scalar_value(expr, entry.n, field, values)
                moved = apply_substitution(F, LinearSub(field, matrix))
                target = entry.potential_at(field, mapped)
            except UnsupportedOrder as e:
                return _na("iso", f"needs a constant this field lacks: {e}")
            except DivisionByZero:
                return _outcome("iso", False,
                                f"action undefined at {values}")
            if not target or not moved:
                return _outcome("iso", False,
                                f"substitution killed the potential at {values}")
            w = next(iter(target.terms))
            lam = moved.coefficient(w) / target.terms[w]
            if not lam or moved != target.scale(lam):
                return _outcome("iso", False,
                                f"not a scalar multiple at {values}")
    return _outcome("iso", True)


def verify_entry(entry, field, degree=None):
    """Recompute every recorded claim over ``field``.

    Failures land in the report, not in exceptions; claims a field cannot
    express (missing roots of unity) come back as n/a.
    """
    start = time.perf_counter()
    eff = default_truncation(entry.n)
    if degree is not None:
        eff = min(degree, eff)

    def report(checks):
        return VerificationReport(label=entry.label, field=field,
                                  degrees_checked=eff, checks=tuple(checks),
                                  runtime=time.perf_counter() - start)

    try:
        contexts = [(values, entry.potential_at(field, values),
                     entry.relations_at(field, values))
                    for values in entry.parameter_sets()]
    except UnsupportedOrder as e:
        why = f"field lacks a needed constant: {e}"
        return report([_na(name, why) for name in CHECK_NAMES])

    order = entry.order()
    deep_gbs = [buchberger_truncated(rels, order, eff + 1, field=field)
                for _, _, rels in contexts]
    dims_by_sample = [(values, graded_dims(gb, eff))
                      for (values, _, _), gb in zip(contexts, deep_gbs)]
    expected = taylor(parse_series(entry.series), eff)

    checks = [
        _check_relations(entry, field, contexts),
        _check_series(entry, eff, expected, dims_by_sample),
        _check_twist(entry, field, contexts),
        _check_properness(entry, dims_by_sample),
        _check_exactness(entry, field, eff, contexts, deep_gbs),
        _check_duality(entry, field, eff, contexts),
        _check_pbw(entry, field, contexts),
        _check_gb(entry, field, contexts, deep_gbs),
        _check_iso(entry, field, contexts),
    ]
    return report(checks)


def verify_all(entries, field, degree=None, labels=None):
    """Verify entries in deterministic label order; returns the reports."""
    picked = sorted(entries) if labels is None else list(labels)
    out = []
    for label in picked:
        if label not in entries:
            raise KeyError(f"unknown label {label!r}")
        out.append(verify_entry(entries[label], field, degree=degree))
    return out
