"""Explicit conical Kakeya constructions, witness verifiers and lower-bound formulas."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

from .conics import (
    ELLIPSE,
    HYPERBOLA,
    PARABOLA,
    Conic,
    ConicError,
    ellipse_parametrization,
    independent,
)
from .field import FieldCtx, find_nonsquare

Point = tuple[int, ...]

DIRECTION = "direction"
POINT = "point"
DIRECTION_B = "direction-b"
DIRECTION_C = "direction-c"
ROLES = (DIRECTION, POINT, DIRECTION_B, DIRECTION_C)


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Witness:
    key: Point
    role: str
    conic: Conic


@dataclass
class WitnessedSet:
    field: FieldCtx
    n: int
    points: frozenset
    witnesses: list[Witness]
    provenance: str = ""
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.points = frozenset(tuple(p) for p in self.points)
        for w in self.witnesses:
            if w.role not in ROLES:
                raise ValueError(f"unknown witness role {w.role!r}")
            if len(w.key) != self.n or w.conic.n != self.n:
                raise ValueError("witness dimension does not match the set")

    def __len__(self) -> int:
        return len(self.points)

    def by_role(self, *roles: str) -> dict[Point, list[Conic]]:
        out: dict[Point, list[Conic]] = {}
        for w in self.witnesses:
            if w.role in roles:
                out.setdefault(w.key, []).append(w.conic)
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WitnessedSet)
            and self.field == other.field
            and self.n == other.n
            and self.points == other.points
            and self.witnesses == other.witnesses
            and self.provenance == other.provenance
            and self.meta == other.meta
        )


@dataclass
class Verdict:
    kind: str
    accepted: bool
    checked: int
    failures: list[str] = dc_field(default_factory=list)
    found: list[str] = dc_field(default_factory=list)  # exhaustive-mode discoveries

    def summary(self) -> str:
        state = "accepted" if self.accepted else "rejected"
        text = f"{self.kind}: {state} ({self.checked} checked, {len(self.failures)} failures)"
        if self.failures:
            text += "; first: " + self.failures[0]
        return text


def all_vectors(F: FieldCtx, n: int) -> Iterable[Point]:
    return itertools.product(F.elements(), repeat=n)


def nonzero_vectors(F: FieldCtx, n: int) -> Iterable[Point]:
    return (v for v in all_vectors(F, n) if any(v))


def unit_vector(n: int, j: int) -> Point:
    return tuple(1 if i == j else 0 for i in range(n))


def canonical_partner(F: FieldCtx, c: Sequence[int], limit: int | None = None) -> Point:
    """First standard basis vector e_j (j < limit) independent of c."""
    n = len(c)
    for j in range(n if limit is None else limit):
        e = unit_vector(n, j)
        if independent(F, e, c):
            return e
    raise ConicError(f"no standard basis vector independent of {c}")


# -- lower bounds


@dataclass(frozen=True)
class BoundSheet:
    q: int
    n: int
    thm1: Fraction
    kakeya_mult: Fraction
    nikodym_mult: Fraction

    @property
    def kakeya_mult_ge_thm1(self) -> bool:
        return self.kakeya_mult >= self.thm1

    @property
    def nikodym_mult_ge_thm1(self) -> bool:
        return self.nikodym_mult >= self.thm1


def lower_bounds(q: int, n: int) -> BoundSheet:
    if q % 2 == 0 or q < 5:
        raise ValueError(f"q={q}: need odd q >= 5")
    if n < 2:
        raise ValueError(f"n={n}: need n >= 2")
    thm1 = Fraction(q - 1, 2 * n) ** n
    kakeya = Fraction(q, 3) ** n
    nikodym = (Fraction(3) + Fraction(4, q - 2)) ** (-n) * Fraction(q) ** n
    return BoundSheet(q, n, thm1, kakeya, nikodym)


def parabolic_upper(q: int, n: int) -> Fraction:
    return q * Fraction(q + 1, 2) ** (n - 2) * (q - 1) + Fraction(q) ** (n - 1)


def degree2_base_upper(q: int, n: int) -> Fraction:
    return Fraction(q + 2, 3) ** (n + 1)


# -- constructions


def build_parabolic_kakeya(F: FieldCtx, n: int) -> WitnessedSet:
    """Squares-based parabolic Kakeya set in F_q^n, n >= 3, with one parabola per direction."""
    if n < 3:
        raise ValueError("the parabolic construction needs n >= 3")
    pts = set()
    for alpha in all_vectors(F, n):
        last = alpha[-1]
        if last == 0:
            pts.add(alpha)
            continue
        sq = F.mul(last, last)
        if all(F.is_square(F.add(alpha[i], sq)) for i in range(1, n - 1)):
            pts.add(alpha)
    witnesses = []
    e1 = unit_vector(n, 0)
    zero = (0,) * n
    for c in nonzero_vectors(F, n):
        cn = c[-1]
        if cn:
            inv4 = F.inv(F.mul(F.from_int(4), F.mul(cn, cn)))  # (2 c_n)^-2
            a = tuple(F.mul(F.mul(c[i], c[i]), inv4) if 0 < i < n - 1 else 0 for i in range(n))
            conic = Conic(F, PARABOLA, a, e1, c)
        else:
            conic = Conic(F, PARABOLA, zero, canonical_partner(F, c, n - 1), c)
        witnesses.append(Witness(c, DIRECTION, conic))
    return WitnessedSet(F, n, pts, witnesses, "parabolic-kakeya")


def _dependent_on_square(F: FieldCtx, c: Sequence[int]) -> bool:
    sq = [F.mul(x, x) for x in c]
    return not independent(F, c, sq)


def build_degree2_kakeya(F: FieldCtx, n: int) -> WitnessedSet:
    """The cubic-difference set {((c_i/3 + t)^3 - t^3)_i}, q = 1 mod 3, patched by parabolae.

    Directions c with (c_i) and (c_i^2) dependent get a parabola
    a = 0, b = first independent basis vector; the extra points are
    reported as ``meta['patch_size']``.
    """
    if F.q % 3 != 1:
        raise ValueError(f"q={F.q}: the degree-2 construction needs q = 1 mod 3")
    if n < 2:
        raise ValueError("n must be at least 2")
    inv3 = F.inv(F.from_int(3))
    inv27 = F.inv(F.from_int(27))
    base = set()
    witnesses = []
    patched = []
    for c in all_vectors(F, n):
        a = tuple(F.mul(F.mul(F.mul(x, x), x), inv27) for x in c)
        b = tuple(F.mul(F.mul(x, x), inv3) for x in c)
        for t in F.elements():
            tt = F.mul(t, t)
            base.add(tuple(F.add(F.add(ai, F.mul(t, bi)), F.mul(tt, ci)) for ai, bi, ci in zip(a, b, c)))
        if not any(c):
            continue
        if _dependent_on_square(F, c):
            patched.append(c)
        else:
            witnesses.append(Witness(c, DIRECTION, Conic(F, PARABOLA, a, b, c)))
    pts = set(base)
    for c in patched:
        conic = Conic(F, PARABOLA, (0,) * n, canonical_partner(F, c), c)
        pts.update(conic.points())
        witnesses.append(Witness(c, DIRECTION, conic))
    meta = {
        "base_size": len(base),
        "patch_size": len(pts) - len(base),
        "patched_directions": len(patched),
        "patch": "parabola a=0, b=first independent basis vector",
    }
    return WitnessedSet(F, n, pts, witnesses, "degree2-kakeya", meta)


def build_ellipse_pseudo_kakeya(F: FieldCtx) -> WitnessedSet:
    """The single ellipse y^2 = g x^2 + 1 in F_q^2 (q = 3 mod 4, q >= 19) with an
    ellipse of form (E) for every direction, once as c and once as b."""
    q = F.q
    if q % 4 != 3:
        raise ValueError(f"q={q}: need q = 3 mod 4")
    if q < 19:
        raise ValueError(f"q={q}: need q >= 19")
    g = find_nonsquare(F)
    r = F.sqrt(F.neg(g))
    r_inv = F.inv(r)
    minus_one = F.neg(1)
    pts = set(ellipse_parametrization(F, g, 1).plane_points())
    witnesses = []
    for d in nonzero_vectors(F, 2):
        for role, (c1, c2) in (
            (DIRECTION_C, (F.mul(d[0], r), d[1])),
            (DIRECTION_B, (d[1], F.neg(F.mul(d[0], r)))),
        ):
            b_vec = (F.neg(F.mul(c2, r_inv)), c1)
            c_vec = (F.mul(c1, r_inv), c2)
            k = F.inv(F.add(F.mul(c1, c1), F.mul(c2, c2)))
            param = ellipse_parametrization(F, minus_one, k)
            witnesses.append(Witness(d, role, Conic(F, ELLIPSE, (0, 0), b_vec, c_vec, param)))
    return WitnessedSet(F, 2, pts, witnesses, "ellipse-family", {"g": g, "r": r})


# -- verification


def _fmt(F: FieldCtx, v: Sequence[int]) -> str:
    return "(" + ",".join(F.format(x) for x in v) + ")"


def _missing(conic: Conic, points: frozenset, skip: Point | None = None) -> Point | None:
    for pt in conic.points():
        if pt != skip and pt not in points:
            return pt
    return None


def _kakeya_witness_problem(W: WitnessedSet, d: Point, conic: Conic) -> str | None:
    F = W.field
    if conic.kind == ELLIPSE:
        return f"direction {_fmt(F, d)}: ellipse witness carries no direction"
    if conic.kind == PARABOLA and conic.c != d:
        return f"direction {_fmt(F, d)}: parabola has direction {_fmt(F, conic.c)}"
    if conic.kind == HYPERBOLA and d not in (conic.b, conic.c):
        return f"direction {_fmt(F, d)}: hyperbola directions are {_fmt(F, conic.b)}, {_fmt(F, conic.c)}"
    miss = _missing(conic, W.points)
    if miss is not None:
        return f"direction {_fmt(F, d)}: conic point {_fmt(F, miss)} not in set"
    return None


def _search_budget(F: FieldCtx, n: int, budget: int | None) -> int:
    return F.q**n * F.q**2 if budget is None else budget


def _search_kakeya(W: WitnessedSet, d: Point, budget: int) -> Conic | None:
    F, n, S = W.field, W.n, W.points
    used = 0
    for b in all_vectors(F, n):
        if not independent(F, b, d):
            continue
        for a in all_vectors(F, n):
            used += 1
            if used > budget:
                raise BudgetExceeded(f"exhaustive search for {_fmt(F, d)} exceeded {budget} candidates")
            for kind in (PARABOLA, HYPERBOLA):
                conic = Conic(F, kind, a, b, d)
                if all(pt in S for pt in _iter_points(conic)):
                    return conic
    return None


def _iter_points(conic: Conic):
    for t in conic.parameters():
        yield conic.point_at(t)


def verify_conical_kakeya(W: WitnessedSet, exhaustive: bool = False, budget: int | None = None) -> Verdict:
    """Every nonzero direction needs a parabola (c = d) or hyperbola (d in {b, c}) inside the set."""
    F, n = W.field, W.n
    by_key = W.by_role(DIRECTION, DIRECTION_B, DIRECTION_C)
    failures, found = [], []
    checked = 0
    for d in nonzero_vectors(F, n):
        checked += 1
        problems = []
        ok = False
        for conic in by_key.get(d, []):
            problem = _kakeya_witness_problem(W, d, conic)
            if problem is None:
                ok = True
                break
            problems.append(problem)
        if ok:
            continue
        if exhaustive:
            conic = _search_kakeya(W, d, _search_budget(F, n, budget))
            if conic is not None:
                found.append(f"direction {_fmt(F, d)}: {conic.kind} a={_fmt(F, conic.a)} b={_fmt(F, conic.b)}")
                continue
            problems.append(f"direction {_fmt(F, d)}: exhaustive search found no conic")
        failures.extend(problems or [f"direction {_fmt(F, d)}: no witness"])
    return Verdict("kakeya", not failures, checked, failures, found)


def nikodym_witness_ok(conic: Conic, x: Point, points: frozenset) -> str | None:
    pts = conic.points()
    if x not in pts:
        return "point is not on its witness conic"
    miss = _missing(conic, points, skip=x)
    if miss is not None:
        return f"conic point {_fmt(conic.field, miss)} not in set"
    return None


def find_nikodym_witness(F: FieldCtx, points: frozenset, x: Point, budget: int | None = None) -> Conic | None:
    """Search parabolae, hyperbolae and ellipses (k = 1) through x with all other points in the set."""
    n = len(x)
    budget = _search_budget(F, n, budget)
    g = find_nonsquare(F)
    ell = ellipse_parametrization(F, g, 1)
    used = 0
    for b in all_vectors(F, n):
        for c in all_vectors(F, n):
            if not independent(F, b, c):
                continue
            used += 1
            if used > budget:
                raise BudgetExceeded(f"exhaustive search for {_fmt(F, x)} exceeded {budget} candidates")
            # place x at t = 0 (parabola), t = 1 (hyperbola, ellipse: (x(1), y(1)) = (u, v))
            anchors = (
                (PARABOLA, x, None),
                (HYPERBOLA, tuple(F.sub(F.sub(xi, bi), ci) for xi, bi, ci in zip(x, b, c)), None),
                (
                    ELLIPSE,
                    tuple(F.sub(F.sub(xi, F.mul(ell.u, bi)), F.mul(ell.v, ci)) for xi, bi, ci in zip(x, b, c)),
                    ell,
                ),
            )
            for kind, a, param in anchors:
                conic = Conic(F, kind, a, b, c, param)
                if nikodym_witness_ok(conic, x, points) is None:
                    return conic
    return None


def verify_conical_nikodym(W: WitnessedSet, exhaustive: bool = False, budget: int | None = None) -> Verdict:
    """Every x in F_q^n needs a conic through x whose other points all lie in the set."""
    F, n = W.field, W.n
    by_key = W.by_role(POINT)
    failures, found = [], []
    checked = 0
    for x in all_vectors(F, n):
        checked += 1
        problems = []
        ok = False
        for conic in by_key.get(x, []):
            problem = nikodym_witness_ok(conic, x, W.points)
            if problem is None:
                ok = True
                break
            problems.append(f"point {_fmt(F, x)}: {problem}")
        if ok:
            continue
        if exhaustive:
            conic = find_nikodym_witness(F, W.points, x, budget)
            if conic is not None:
                found.append(f"point {_fmt(F, x)}: {conic.kind} b={_fmt(F, conic.b)} c={_fmt(F, conic.c)}")
                continue
            problems.append(f"point {_fmt(F, x)}: exhaustive search found no conic")
        failures.extend(problems or [f"point {_fmt(F, x)}: no witness"])
    return Verdict("nikodym", not failures, checked, failures, found)


def verify_elliptic_coverage(
    W: WitnessedSet, roles: Sequence[str] = (DIRECTION_C, DIRECTION_B)
) -> Verdict:
    """Every nonzero direction is the b (resp. c) vector of an ellipse of form (E) inside the set."""
    F, n = W.field, W.n
    failures = []
    checked = 0
    for role in roles:
        attr = "c" if role == DIRECTION_C else "b"
        by_key = W.by_role(role)
        for d in nonzero_vectors(F, n):
            checked += 1
            problems = []
            ok = False
            for conic in by_key.get(d, []):
                if conic.kind != ELLIPSE:
                    problems.append(f"{role} {_fmt(F, d)}: witness is a {conic.kind}")
                elif getattr(conic, attr) != d:
                    problems.append(f"{role} {_fmt(F, d)}: witness {attr} is {_fmt(F, getattr(conic, attr))}")
                else:
                    miss = _missing(conic, W.points)
                    if miss is None:
                        ok = True
                        break
                    problems.append(f"{role} {_fmt(F, d)}: conic point {_fmt(F, miss)} not in set")
            if not ok:
                failures.extend(problems or [f"{role} {_fmt(F, d)}: no witness"])
    return Verdict("elliptic-coverage", not failures, checked, failures)
