"""Plane conics over F_q: classification into normal forms, the norm-one
ellipse parametrisation, and conics embedded in F_q^n."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .field import ExtFieldCtx, FieldCtx, find_nonsquare, norm_one_subgroup, quadratic_extension
from .poly import LaurentPoly, MultiPoly

Point = tuple[int, ...]

PARABOLA = "parabola"
HYPERBOLA = "hyperbola"
ELLIPSE = "ellipse"
KINDS = (PARABOLA, HYPERBOLA, ELLIPSE)


class ConicError(ValueError):
    pass


# -- vectors over F_q


def vec_add(F, u: Sequence[int], v: Sequence[int]) -> Point:
    return tuple(F.add(a, b) for a, b in zip(u, v))


def vec_scale(F, c: int, u: Sequence[int]) -> Point:
    return tuple(F.mul(c, a) for a in u)


def independent(F, b: Sequence[int], c: Sequence[int]) -> bool:
    """True iff the 2 x n matrix with rows b, c has rank 2."""
    n = len(b)
    for i in range(n):
        for j in range(i + 1, n):
            if F.sub(F.mul(b[i], c[j]), F.mul(b[j], c[i])):
                return True
    return False


# -- plane conics and classification


@dataclass(frozen=True)
class AffineMap:
    """P -> M P + w on F_q^2 with M invertible."""

    field: FieldCtx
    m: tuple[tuple[int, int], tuple[int, int]]
    w: tuple[int, int]

    @classmethod
    def identity(cls, F) -> "AffineMap":
        return cls(F, ((1, 0), (0, 1)), (0, 0))

    def __call__(self, pt: Sequence[int]) -> tuple[int, int]:
        F, (r0, r1) = self.field, self.m
        x, y = pt
        return (
            F.add(F.add(F.mul(r0[0], x), F.mul(r0[1], y)), self.w[0]),
            F.add(F.add(F.mul(r1[0], x), F.mul(r1[1], y)), self.w[1]),
        )

    def det(self) -> int:
        F, (r0, r1) = self.field, self.m
        return F.sub(F.mul(r0[0], r1[1]), F.mul(r0[1], r1[0]))

    def then_inner(self, inner: "AffineMap") -> "AffineMap":
        """self(inner(P))."""
        F = self.field
        A, B = self.m, inner.m
        m = tuple(
            tuple(F.add(F.mul(A[i][0], B[0][j]), F.mul(A[i][1], B[1][j])) for j in range(2)) for i in range(2)
        )
        lin = AffineMap(F, self.m, (0, 0))(inner.w)
        return AffineMap(F, m, (F.add(lin[0], self.w[0]), F.add(lin[1], self.w[1])))

    def inverse(self) -> "AffineMap":
        F = self.field
        di = F.inv(self.det())
        (a, b), (c, d) = self.m
        m = ((F.mul(d, di), F.neg(F.mul(b, di))), (F.neg(F.mul(c, di)), F.mul(a, di)))
        lin = AffineMap(F, m, (0, 0))(self.w)
        return AffineMap(F, m, (F.neg(lin[0]), F.neg(lin[1])))

    def substitute(self, Q: MultiPoly) -> MultiPoly:
        """Q(self(X, Y)) as a polynomial in X, Y."""
        F, (r0, r1) = self.field, self.m
        X = MultiPoly.linear(F, r0, self.w[0])
        Y = MultiPoly.linear(F, r1, self.w[1])
        return Q.compose([X, Y])


@dataclass(frozen=True)
class Conic2D:
    """Q(X, Y) = A X^2 + B XY + C Y^2 + D X + E Y + F."""

    field: FieldCtx
    A: int
    B: int
    C: int
    D: int = 0
    E: int = 0
    F: int = 0

    def __post_init__(self):
        if not (self.A or self.B or self.C):
            raise ConicError("A, B, C all zero: degree < 2")

    @classmethod
    def from_poly(cls, Q: MultiPoly) -> "Conic2D":
        c = Q.coeff
        return cls(Q.field, c((2, 0)), c((1, 1)), c((0, 2)), c((1, 0)), c((0, 1)), c((0, 0)))

    def poly(self) -> MultiPoly:
        terms = {(2, 0): self.A, (1, 1): self.B, (0, 2): self.C, (1, 0): self.D, (0, 1): self.E, (0, 0): self.F}
        return MultiPoly(self.field, 2, terms)

    def discriminant(self) -> int:
        Fd = self.field
        return Fd.sub(Fd.mul(self.B, self.B), Fd.mul(4 % Fd.p, Fd.mul(self.A, self.C)))

    def det3(self) -> int:
        """Determinant of the symmetric matrix [[2A,B,D],[B,2C,E],[D,E,2F]]."""
        K = self.field
        two = K.from_int(2)
        a, b, d = K.mul(two, self.A), self.B, self.D
        c, e, f = K.mul(two, self.C), self.E, K.mul(two, self.F)
        t1 = K.mul(a, K.sub(K.mul(c, f), K.mul(e, e)))
        t2 = K.mul(b, K.sub(K.mul(b, f), K.mul(e, d)))
        t3 = K.mul(d, K.sub(K.mul(b, e), K.mul(c, d)))
        return K.add(K.sub(t1, t2), t3)

    def zero_set(self) -> list[tuple[int, int]]:
        Q = self.poly()
        K = self.field
        return [(x, y) for x in K.elements() for y in K.elements() if not Q.evaluate((x, y))]


@dataclass(frozen=True)
class Classification:
    kind: str  # parabola | hyperbola | ellipse | degenerate
    subkind: str | None = None  # degenerate: intersecting-lines | point | parallel-lines | double-line | empty
    normal_form: Conic2D | None = None
    to_normal: AffineMap | None = None  # maps the zero set of Q onto that of the normal form
    from_normal: AffineMap | None = None
    m: int | None = None  # parabola Y = m X^2
    k: int | None = None  # ellipse Y^2 = g X^2 + k
    g: int | None = None


def _zero_set_structure(Q: Conic2D) -> str:
    """Exhaustive shape of the zero set; used to cross-check the algebra."""
    K = Q.field
    q = K.q
    pts = Q.zero_set()
    if not pts:
        return "empty"
    if len(pts) == 1:
        return "point"
    if len(pts) == 2:
        return HYPERBOLA  # q = 3
    (x0, y0), (x1, y1) = pts[0], pts[1]
    dx, dy = K.sub(x1, x0), K.sub(y1, y0)
    collinear = all(not K.sub(K.mul(dx, K.sub(y, y0)), K.mul(dy, K.sub(x, x0))) for x, y in pts)
    if collinear:
        return "double-line"
    return {2 * q - 1: "intersecting-lines", 2 * q: "parallel-lines", q: PARABOLA, q - 1: HYPERBOLA, q + 1: ELLIPSE}[
        len(pts)
    ]


def _normal_as_is(Q: Conic2D, kind: str, g: int):
    """(normal form, extras) when Q is already a multiple of its normal form, else None."""
    K = Q.field
    one = 1
    if kind == HYPERBOLA and not (Q.A or Q.C or Q.D or Q.E) and Q.F == K.neg(Q.B):
        return Conic2D(K, 0, one, 0, 0, 0, K.neg(one)), {}
    if kind == PARABOLA and not (Q.B or Q.C or Q.D or Q.F):
        m = K.neg(K.div(Q.A, Q.E))
        if m in (one, g):
            return Conic2D(K, K.neg(m), 0, 0, 0, one, 0), {"m": m}
    if kind == ELLIPSE and not (Q.B or Q.D or Q.E) and Q.A == K.neg(K.mul(g, Q.C)):
        kk = K.neg(K.div(Q.F, Q.C))
        return Conic2D(K, K.neg(g), 0, one, 0, 0, K.neg(kk)), {"k": kk}
    return None


def classify_conic2d(Q: Conic2D) -> Classification:
    """Kind of Q and an affine substitution onto the normal form.

    Normal forms: hyperbola XY = 1, parabola Y = m X^2 with m in {1, g},
    ellipse Y^2 = g X^2 + k, where g is the canonical non-square.
    """
    K = Q.field
    g = find_nonsquare(K)
    disc = Q.discriminant()
    structure = _zero_set_structure(Q)
    if not Q.det3():
        if disc == 0:
            expected = {"parallel-lines", "double-line", "empty"}
        elif K.is_square(disc):
            expected = {"intersecting-lines"}
        else:
            expected = {"point"}
        if structure not in expected:
            raise AssertionError(f"degenerate conic: algebra says {expected}, zero set says {structure}")
        return Classification("degenerate", subkind=structure)

    kind = PARABOLA if disc == 0 else (HYPERBOLA if K.is_square(disc) else ELLIPSE)
    if structure != kind:
        raise AssertionError(f"discriminant says {kind}, zero set says {structure}")

    already = _normal_as_is(Q, kind, g)
    if already is not None:
        normal, extra = already
        ident = AffineMap.identity(K)
        return Classification(kind, normal_form=normal, to_normal=ident, from_normal=ident, g=g, **extra)

    P = Q.poly()
    psi = AffineMap.identity(K)

    def step(sigma: AffineMap) -> None:
        nonlocal P, psi
        P = sigma.substitute(P)
        psi = psi.then_inner(sigma)

    c = lambda e: P.coeff(e)  # noqa: E731
    one, zero = 1, 0
    # diagonalise the quadratic part
    if not c((2, 0)) and not c((0, 2)):
        step(AffineMap(K, ((one, one), (one, K.neg(one))), (zero, zero)))
    if not c((2, 0)):
        step(AffineMap(K, ((zero, one), (one, zero)), (zero, zero)))
    if c((1, 1)):
        shear = K.neg(K.div(c((1, 1)), K.mul(K.from_int(2), c((2, 0)))))
        step(AffineMap(K, ((one, shear), (zero, one)), (zero, zero)))
    alpha, beta = c((2, 0)), c((0, 2))
    two = K.from_int(2)
    tx = K.neg(K.div(c((1, 0)), K.mul(two, alpha)))
    ty = K.neg(K.div(c((0, 1)), K.mul(two, beta))) if beta else zero
    step(AffineMap(K, ((one, zero), (zero, one)), (tx, ty)))

    if kind == PARABOLA:
        e, f0 = c((0, 1)), c((0, 0))
        step(AffineMap(K, ((one, zero), (zero, one)), (zero, K.neg(K.div(f0, e)))))
        mu = K.neg(K.div(alpha, e))
        m = one if K.is_square(mu) else g
        h = K.sqrt(K.div(mu, m))
        step(AffineMap(K, ((K.inv(h), zero), (zero, one)), (zero, zero)))
        normal = Conic2D(K, K.neg(m), 0, 0, 0, one, 0)
        lam = e
        extra = {"m": m}
    else:
        big_k = K.neg(c((0, 0)))
        if kind == HYPERBOLA:
            s = K.sqrt(K.neg(K.div(beta, alpha)))
            ka = K.div(big_k, alpha)
            half = K.inv(two)
            # X - sY = U, X + sY = (K/alpha) V
            step(
                AffineMap(
                    K,
                    ((half, K.mul(half, ka)), (K.neg(K.div(half, s)), K.div(K.mul(half, ka), s))),
                    (zero, zero),
                )
            )
            normal = Conic2D(K, 0, one, 0, 0, 0, K.neg(one))
            lam = big_k
            extra = {}
        else:
            ratio = K.neg(K.div(alpha, beta))
            h = K.sqrt(K.div(ratio, g))
            step(AffineMap(K, ((K.inv(h), zero), (zero, one)), (zero, zero)))
            kk = K.div(big_k, beta)
            normal = Conic2D(K, K.neg(g), 0, one, 0, 0, K.neg(kk))
            lam = beta
            extra = {"k": kk}
    if P != normal.poly().scale(lam):
        raise AssertionError("normal-form certificate failed")
    return Classification(kind, normal_form=normal, to_normal=psi.inverse(), from_normal=psi, g=g, **extra)


# -- ellipse parametrisation


@dataclass(frozen=True)
class EllipseParam:
    """(x(t), y(t)) on y^2 = g x^2 + k for t in the norm-one subgroup of F_{q^2}."""

    field: FieldCtx
    g: int
    k: int
    u: int
    v: int

    @property
    def ext(self) -> ExtFieldCtx:
        return quadratic_extension(self.field, self.g)

    def _half(self) -> int:
        return self.field.inv(self.field.from_int(2))

    def s(self, t: int) -> int:
        E = self.ext
        return E.mul(E.mul(self._half(), E.z), E.sub(t, E.inv(t)))

    def r(self, t: int) -> int:
        E = self.ext
        return E.mul(self._half(), E.add(t, E.inv(t)))

    def x(self, t: int) -> int:
        E = self.ext
        return E.add(E.mul(E.mul(self.field.inv(self.g), self.v), self.s(t)), E.mul(self.u, self.r(t)))

    def y(self, t: int) -> int:
        E = self.ext
        return E.add(E.mul(self.u, self.s(t)), E.mul(self.v, self.r(t)))

    def parameters(self) -> tuple[int, ...]:
        return norm_one_subgroup(self.ext)

    def laurent_x(self) -> LaurentPoly:
        """x(t) as a Laurent polynomial over F_{q^2}, support in {-1, 1}."""
        E, K = self.ext, self.field
        h = self._half()
        vz = E.mul(E.mul(K.inv(self.g), self.v), E.z)
        return LaurentPoly(E, -1, [E.mul(h, E.sub(self.u, vz)), 0, E.mul(h, E.add(self.u, vz))])

    def laurent_y(self) -> LaurentPoly:
        E = self.ext
        h = self._half()
        uz = E.mul(self.u, E.z)
        return LaurentPoly(E, -1, [E.mul(h, E.sub(self.v, uz)), 0, E.mul(h, E.add(self.v, uz))])

    def plane_points(self) -> tuple[tuple[int, int], ...]:
        return _plane_points(self)


@functools.lru_cache(maxsize=None)
def _plane_points(param: EllipseParam) -> tuple[tuple[int, int], ...]:
    E = param.ext
    out = []
    for t in param.parameters():
        x, y = param.x(t), param.y(t)
        if not (E.is_base(x) and E.is_base(y)):
            raise AssertionError("ellipse point left F_q")
        out.append((x, y))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def ellipse_parametrization(F: FieldCtx, g: int, k: int) -> EllipseParam:
    """Parametrise y^2 = g x^2 + k using the first u (canonical order) with g u^2 + k square."""
    quadratic_extension(F, g)  # validates g
    if k == 0:
        raise ConicError("k must be nonzero")
    for u in F.elements():
        v = F.sqrt(F.add(F.mul(g, F.mul(u, u)), k))
        if v is not None:
            return EllipseParam(F, g, k, u, v)
    raise AssertionError("no point on the ellipse")  # pragma: no cover


def ellipse_from_solution(F: FieldCtx, g: int, k: int, u: int, v: int) -> EllipseParam:
    quadratic_extension(F, g)
    if k == 0 or F.mul(v, v) != F.add(F.mul(g, F.mul(u, u)), k):
        raise ConicError("(u, v) does not solve v^2 = g u^2 + k with k nonzero")
    return EllipseParam(F, g, k, u, v)


# -- embedded conics


@dataclass(frozen=True)
class Conic:
    """An embedded conic a + X(t) b + Y(t) c in F_q^n.

    Parabola: (X, Y) = (t, t^2), t in F_q. Hyperbola: (t, 1/t), t in F_q^*.
    Ellipse: (x(t), y(t)) from ``ellipse``, t in the norm-one subgroup.
    """

    field: FieldCtx
    kind: str
    a: Point
    b: Point
    c: Point
    ellipse: EllipseParam | None = dc_field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        object.__setattr__(self, "b", tuple(self.b))
        object.__setattr__(self, "c", tuple(self.c))
        if self.kind not in KINDS:
            raise ConicError(f"unknown conic kind {self.kind!r}")
        if not (len(self.a) == len(self.b) == len(self.c)) or len(self.a) < 2:
            raise ConicError("a, b, c must have a common length n >= 2")
        if (self.kind == ELLIPSE) != (self.ellipse is not None):
            raise ConicError("exactly the ellipse kind carries an ellipse parametrisation")
        if not independent(self.field, self.b, self.c):
            raise ConicError("b and c are linearly dependent: the embedding can have fewer points")

    @property
    def n(self) -> int:
        return len(self.a)

    def param_field(self):
        return self.ellipse.ext if self.kind == ELLIPSE else self.field

    def parameters(self) -> Sequence[int]:
        if self.kind == PARABOLA:
            return self.field.elements()
        if self.kind == HYPERBOLA:
            return self.field.units()
        return self.ellipse.parameters()

    def plane_coords(self, t: int) -> tuple[int, int]:
        F = self.field
        if self.kind == PARABOLA:
            return t, F.mul(t, t)
        if self.kind == HYPERBOLA:
            return t, F.inv(t)
        return self.ellipse.x(t), self.ellipse.y(t)

    def point_at(self, t: int) -> Point:
        F = self.field
        x, y = self.plane_coords(t)
        return tuple(F.add(F.add(ai, F.mul(x, bi)), F.mul(y, ci)) for ai, bi, ci in zip(self.a, self.b, self.c))

    def points(self) -> list[Point]:
        return list(_conic_points(self))

    def parameter_map(self) -> dict[Point, int]:
        return {pt: t for t, pt in zip(self.parameters(), _conic_points(self))}

    def directions(self) -> list[Point]:
        if self.kind == HYPERBOLA:
            return [self.b, self.c]
        if self.kind == PARABOLA:
            return [self.c]
        return []

    def swapped(self) -> "Conic":
        """The same hyperbola relabelled by t -> 1/t (b and c exchanged)."""
        if self.kind != HYPERBOLA:
            raise ConicError("only a hyperbola can be relabelled by t -> 1/t")
        return Conic(self.field, HYPERBOLA, self.a, self.c, self.b)


@functools.lru_cache(maxsize=4096)
def _conic_points(C: Conic) -> tuple[Point, ...]:
    F = C.field
    if C.kind == ELLIPSE:
        plane = C.ellipse.plane_points()
    else:
        plane = [C.plane_coords(t) for t in C.parameters()]
    pts = tuple(
        tuple(F.add(F.add(ai, F.mul(x, bi)), F.mul(y, ci)) for ai, bi, ci in zip(C.a, C.b, C.c)) for x, y in plane
    )
    if len(set(pts)) != len(pts):
        raise AssertionError("embedded conic has repeated points")
    return pts


def conic_points(C: Conic) -> list[Point]:
    return C.points()


def conic_directions(C: Conic) -> list[Point]:
    return C.directions()


def standard_ellipse(F: FieldCtx, n: int, k: int = 1, g: int | None = None) -> Conic:
    """The ellipse y^2 = g x^2 + k embedded with a = 0, b = e_1, c = e_2."""
    g = find_nonsquare(F) if g is None else g
    e = [[0] * n for _ in range(2)]
    e[0][0] = e[1][1] = 1
    return Conic(F, ELLIPSE, (0,) * n, tuple(e[0]), tuple(e[1]), ellipse_parametrization(F, g, k))
