"""Replaying the polynomial-method arguments on concrete witnessed sets.

Restrictions of f to embedded conics, the top-coefficient identities, recovery
of a single missing value on a conic, and :func:`run_trace`, which solves for a
vanishing polynomial and checks every deduction the argument relies on
against the actual numbers instead of assuming the theorem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Mapping, Sequence

from .conics import ELLIPSE, HYPERBOLA, PARABOLA, Conic, ConicError
from .constructions import DIRECTION, DIRECTION_B, DIRECTION_C, POINT, WitnessedSet, all_vectors, nonzero_vectors
from .poly import DEGREE_BUDGET, INFINITE, LaurentPoly, MultiPoly, UniPoly, horner_substitute, indices_of_weight
from .vanishing import min_feasible_degree, vanishing_polynomial_with_multiplicity

KAKEYA = "kakeya"
NIKODYM = "nikodym"


class RecoveryError(ValueError):
    pass


class TraceError(ValueError):
    pass


@dataclass(frozen=True)
class Restriction:
    source: MultiPoly
    conic: Conic
    result: UniPoly
    shift: int
    laurent_low: int = 0
    laurent_high: int = 0


def _substitute(f: MultiPoly, coords: Sequence[LaurentPoly], field) -> LaurentPoly:
    out = horner_substitute(f.terms, coords, lambda c: LaurentPoly(field, 0, [c]))
    return out if out is not None else LaurentPoly(field, 0, [])


def _check_dims(f: MultiPoly, *vecs: Sequence[int]) -> None:
    for v in vecs:
        if len(v) != f.n:
            raise ValueError(f"vector of length {len(v)} for a polynomial in {f.n} variables")


def restrict_parabola(f: MultiPoly, a, b, c) -> UniPoly:
    """F(t) = f(a + t b + t^2 c)."""
    _check_dims(f, a, b, c)
    K = f.field
    coords = [LaurentPoly(K, 0, [ai, bi, ci]) for ai, bi, ci in zip(a, b, c)]
    return _substitute(f, coords, K).to_unipoly(0)


def _laurent_hyperbola(f: MultiPoly, a, b, c) -> LaurentPoly:
    K = f.field
    coords = [LaurentPoly(K, -1, [ci, ai, bi]) for ai, bi, ci in zip(a, b, c)]
    return _substitute(f, coords, K)


def restrict_hyperbola(f: MultiPoly, a, b, c, shift: int | None = None) -> UniPoly:
    """F(t) = t^shift f(a + t b + c/t); shift defaults to deg f."""
    _check_dims(f, a, b, c)
    shift = max(f.degree, 0) if shift is None else shift
    return _laurent_hyperbola(f, a, b, c).to_unipoly(shift)


def _laurent_ellipse(f: MultiPoly, C: Conic) -> LaurentPoly:
    E = C.ellipse.ext
    lx, ly = C.ellipse.laurent_x(), C.ellipse.laurent_y()
    coords = []
    for ai, bi, ci in zip(C.a, C.b, C.c):
        lo = E.add(E.mul(bi, lx.coeff(-1)), E.mul(ci, ly.coeff(-1)))
        hi = E.add(E.mul(bi, lx.coeff(1)), E.mul(ci, ly.coeff(1)))
        coords.append(LaurentPoly(E, -1, [lo, ai, hi]))
    return _substitute(f, coords, E)


def restrict_ellipse(f: MultiPoly, C: Conic, shift: int | None = None) -> UniPoly:
    """F(t) = t^shift f(a + x(t) b + y(t) c) over F_{q^2}; shift defaults to deg f."""
    if C.kind != ELLIPSE:
        raise ConicError(f"expected an ellipse, got a {C.kind}")
    _check_dims(f, C.a)
    shift = max(f.degree, 0) if shift is None else shift
    return _laurent_ellipse(f, C).to_unipoly(shift)


def restrict(f: MultiPoly, C: Conic, shift: int | None = None) -> Restriction:
    if C.kind == PARABOLA:
        res = restrict_parabola(f, C.a, C.b, C.c)
        return Restriction(f, C, res, 0, 0, max(res.degree, 0))
    shift = max(f.degree, 0) if shift is None else shift
    lp = _laurent_hyperbola(f, C.a, C.b, C.c) if C.kind == HYPERBOLA else _laurent_ellipse(f, C)
    return Restriction(f, C, lp.to_unipoly(shift), shift, lp.low, lp.high)


def direction_coefficient(f: MultiPoly, C: Conic) -> int:
    """Top coefficient t^(2d) of the parabola restriction, or the constant term of
    the shifted hyperbola restriction; both equal f_d(c)."""
    if C.kind == ELLIPSE:
        raise ConicError("an ellipse has no direction")
    if f.is_zero():
        raise ValueError("the zero polynomial has no top-degree part")
    d = f.degree
    if C.kind == PARABOLA:
        return restrict_parabola(f, C.a, C.b, C.c).coeff(2 * d)
    return restrict_hyperbola(f, C.a, C.b, C.c, d).coeff(0)


def recover_missing_value(values: Mapping[int, int], C: Conic, D: int, t0: int | None = None) -> int:
    """Value at the withheld parameter of a degree <= D polynomial known on the rest of C.

    ``values`` maps conic parameters to f(point); for hyperbolae and ellipses
    the shifted values t^D f are interpolated, then the shift is undone.
    """
    params = list(C.parameters())
    pset = set(params)
    bad = [t for t in values if t not in pset]
    if bad:
        raise RecoveryError(f"{len(bad)} keys are not parameters of the conic")
    if t0 is None:
        missing = [t for t in params if t not in values]
        if len(missing) != 1:
            raise RecoveryError(f"expected exactly one withheld parameter, found {len(missing)}")
        t0 = missing[0]
    elif t0 not in pset:
        raise RecoveryError("t0 is not a parameter of the conic")
    K = C.param_field()
    shift = 0 if C.kind == PARABOLA else D
    pairs = [(t, K.mul(K.pow(t, shift), v)) for t, v in values.items() if t != t0]
    if len(pairs) <= 2 * D:
        raise RecoveryError(f"{len(pairs)} known values cannot pin down a polynomial of degree {2 * D}")
    interp = UniPoly.interpolate(K, pairs)
    if interp.degree > 2 * D:
        raise RecoveryError(f"not a degree-{D} restriction: interpolant has degree {interp.degree}")
    value = K.div(interp.evaluate(t0), K.pow(t0, shift))
    if C.kind == ELLIPSE and not K.is_base(value):
        raise RecoveryError("recovered value is not in F_q")
    return value


# -- traces


@dataclass
class TraceReport:
    mode: str
    q: int
    n: int
    size: int
    degree: int | None
    degree_bound: int
    threshold: Fraction
    status: str
    message: str
    multiplicity: dict | None = None
    polynomial: MultiPoly | None = None
    records: list[dict] = dc_field(default_factory=list)
    covered: int = 0
    required: int = 0
    contradiction: bool = False
    bounds: dict = dc_field(default_factory=dict)


def nikodym_multiplicity(q: int, l: int) -> int:
    return math.floor((Fraction(3) + Fraction(4, q - 2)) * l)


def _enc(F, v) -> list:
    return [F.encode(x) for x in v]


def _zero_count(res: UniPoly, params) -> int:
    return sum(1 for t in params if res.evaluate(t) == 0)


def _mult_sum(res: UniPoly, params) -> int | object:
    if res.is_zero():
        return INFINITE
    return sum(res.multiplicity_at(t) for t in params)


def _orient(conic: Conic, d) -> Conic | None:
    """Return the witness written with direction d as c, or None if impossible."""
    if conic.kind == PARABOLA:
        return conic if conic.c == d else None
    if conic.kind == HYPERBOLA:
        if conic.c == d:
            return conic
        if conic.b == d:
            return conic.swapped()
    return None


def _known_params(conic: Conic, S: frozenset, skip=None) -> tuple[list, int]:
    known, outside = [], 0
    for pt, t in conic.parameter_map().items():
        if pt == skip:
            continue
        if pt in S:
            known.append(t)
        else:
            outside += 1
    return known, outside


def _nikodym_record(f: MultiPoly, S, x, conic: Conic, l: int | None, m: int | None) -> dict:
    F = f.field
    pmap = conic.parameter_map()
    rec = {"witness": _enc(F, x), "kind": conic.kind}
    if x not in pmap:
        rec.update(deduction="f(x)=0", established=False, verified=f.evaluate(x) == 0, note="x not on conic")
        return rec
    t_x = pmap[x]
    known, outside = _known_params(conic, S, skip=x)
    d = f.degree
    rec["known_points"] = len(known)
    rec["outside_points"] = outside
    if l is None:
        res = restrict(f, conic).result
        zeros = _zero_count(res, known)
        rec.update(
            deduction="f(x)=0",
            zeros=zeros,
            degree_bound=2 * d,
            restriction_degree=res.degree,
            established=zeros > 2 * d,
            verified=f.evaluate(x) == 0,
        )
        if rec["established"] and res.evaluate(t_x) != 0:  # pragma: no cover
            raise AssertionError("restriction with too many zeros is nonzero")
        return rec
    steps = []
    for w in range(l):
        for i in indices_of_weight(f.n, w):
            h = f.hasse_derivative(i)
            if h.is_zero():
                steps.append({"index": list(i), "established": True, "trivial": True})
                continue
            dh = h.degree
            res = restrict(h, conic).result
            msum = _mult_sum(res, known)
            stated = len(known) * (m - w) > 2 * (d - w)
            steps.append(
                {
                    "index": list(i),
                    "multiplicity_sum": "inf" if msum is INFINITE else msum,
                    "degree_bound": 2 * dh,
                    "stated_inequality": stated,
                    "established": msum > 2 * dh,
                    "value_zero": h.evaluate(x) == 0,
                }
            )
    rec.update(
        deduction=f"Mult(f,x)>={l}",
        steps=steps,
        established=all(s["established"] for s in steps),
        verified=f.multiplicity_at(x) >= l,
    )
    return rec


def _kakeya_record(f: MultiPoly, S, c, conic: Conic, l: int | None) -> dict:
    F = f.field
    rec = {"witness": _enc(F, c), "kind": conic.kind}
    oriented = _orient(conic, c)
    d = f.degree
    top = f.leading_form()
    if oriented is None:
        reason = "ellipse carries no direction" if conic.kind == ELLIPSE else "direction does not match witness"
        rec.update(deduction="f_d(c)=0", established=False, verified=top.evaluate(c) == 0, note=reason)
        return rec
    known, outside = _known_params(oriented, S)
    rec["known_points"] = len(known)
    rec["outside_points"] = outside
    if l is None:
        res = restrict(f, oriented, d).result
        zeros = _zero_count(res, known)
        coeff = res.coeff(2 * d) if oriented.kind == PARABOLA else res.coeff(0)
        rec.update(
            deduction="f_d(c)=0",
            zeros=zeros,
            degree_bound=2 * d,
            direction_coefficient=F.encode(coeff),
            identity_holds=coeff == top.evaluate(c),
            established=zeros > 2 * d,
            verified=top.evaluate(c) == 0,
        )
        return rec
    steps = []
    for w in range(l):
        D = d - w
        for i in indices_of_weight(f.n, w):
            h = f.hasse_derivative(i)
            if D < 0 or h.is_zero():
                steps.append({"index": list(i), "established": True, "trivial": True})
                continue
            res = restrict(h, oriented, D).result
            msum = _mult_sum(res, known)
            coeff = res.coeff(2 * D) if oriented.kind == PARABOLA else res.coeff(0)
            steps.append(
                {
                    "index": list(i),
                    "multiplicity_sum": "inf" if msum is INFINITE else msum,
                    "degree_bound": 2 * D,
                    "established": msum > 2 * D,
                    "coefficient_matches": coeff == top.hasse_at(i, c),
                }
            )
    rec.update(
        deduction=f"Mult(f_d,c)>={l}",
        steps=steps,
        established=all(s["established"] for s in steps),
        verified=top.multiplicity_at(c) >= l,
    )
    return rec


def run_trace(
    W: WitnessedSet,
    mode: str,
    multiplicity: bool = False,
    l: int = 2,
    m: int | None = None,
) -> TraceReport:
    """Solve for f and replay each witness step of the Kakeya / Nikodym argument.

    Plain mode takes the smallest degree allowed by the dimension count and
    needs d <= (q-3)/2. Multiplicity mode uses m = 3l (Kakeya) or
    floor((3 + 4/(q-2)) l) (Nikodym) and needs d < lq. Over the threshold the
    report says so and no polynomial is solved for.
    """
    if mode not in (KAKEYA, NIKODYM):
        raise TraceError(f"unknown mode {mode!r}")
    F, n, S = W.field, W.n, W.points
    q = F.q
    roles = (DIRECTION, DIRECTION_B, DIRECTION_C) if mode == KAKEYA else (POINT,)
    witnesses = W.by_role(*roles)
    if not witnesses:
        raise TraceError(f"the set carries no {mode} witnesses")

    if multiplicity:
        if l < 1:
            raise TraceError("l must be positive")
        if m is None:
            m = 3 * l if mode == KAKEYA else nikodym_multiplicity(q, l)
        if m < 1:
            raise TraceError("m must be positive")
        threshold = Fraction(l * q - 1)
        mult_info = {"l": l, "m": m}
    else:
        m, threshold, mult_info = 1, Fraction(q - 3, 2), None
        l = None
    d = min_feasible_degree(len(S), n, m)
    required = q**n - 1 if mode == KAKEYA else q**n
    report = TraceReport(
        mode=mode,
        q=q,
        n=n,
        size=len(S),
        degree=None,
        degree_bound=d,
        threshold=threshold,
        status="ok",
        message="",
        multiplicity=mult_info,
        required=required,
        bounds={"plain_degree_bound": n * len(S) ** (1 / n) if S else 0.0},
    )
    if d > threshold or d > DEGREE_BUDGET:
        bound = "(q-3)/2" if not multiplicity else "lq-1"
        report.status = "over-threshold"
        report.message = (
            f"degree budget exceeds {bound} threshold ({d} > {threshold}) for |S|={len(S)}: "
            "no contradiction derivable"
        )
        return report

    f = vanishing_polynomial_with_multiplicity(F, sorted(S), d, m, n)
    report.polynomial = f
    report.degree = f.degree
    covered = set()
    for key in sorted(witnesses):
        rec = None
        for conic in witnesses[key]:
            if mode == NIKODYM:
                rec = _nikodym_record(f, S, key, conic, l, m)
            else:
                rec = _kakeya_record(f, S, key, conic, l)
            if rec["established"]:
                break
        report.records.append(rec)
        if rec["established"]:
            covered.add(key)
        if rec["established"] and not rec["verified"]:  # pragma: no cover
            raise AssertionError(f"deduction established but false at {key}")
    report.covered = len(covered)

    full = (
        covered.issuperset(nonzero_vectors(F, n)) if mode == KAKEYA else covered.issuperset(all_vectors(F, n))
    )
    df = f.degree
    if not full:
        report.status = "partial"
        report.message = f"witnesses establish {len(covered)} of {required} required deductions; no contradiction claimed"
        return report
    if not multiplicity:
        # f (Nikodym) or f_d (Kakeya; f_d(0) = 0 as it is homogeneous) vanishes on F_q^n with degree < q
        report.contradiction = df < q and (mode == NIKODYM or df >= 1)
    else:
        origin = (0,) * n
        origin_ok = mode == NIKODYM or f.leading_form().multiplicity_at(origin) >= l
        report.contradiction = origin_ok and l * q > df
    report.message = (
        "deductions force a nonzero polynomial to vanish identically: contradiction"
        if report.contradiction
        else "all deductions established but the final vanishing step does not apply"
    )
    return report
