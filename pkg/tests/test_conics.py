import random

import pytest

from fqconics.conics import (
    ELLIPSE,
    HYPERBOLA,
    PARABOLA,
    Conic,
    Conic2D,
    ConicError,
    classify_conic2d,
    conic_directions,
    conic_points,
    ellipse_from_solution,
    ellipse_parametrization,
    standard_ellipse,
)
from fqconics.field import field_for_order, find_nonsquare, make_field
from oracles import brute_ellipse, embed, random_independent_pair, random_point, ref


def _zero_set(F, Q):
    R = ref(F)
    out = []
    for x in range(F.q):
        for y in range(F.q):
            terms = [
                R.mul(Q.A, R.mul(x, x)),
                R.mul(Q.B, R.mul(x, y)),
                R.mul(Q.C, R.mul(y, y)),
                R.mul(Q.D, x),
                R.mul(Q.E, y),
                Q.F,
            ]
            v = 0
            for t in terms:
                v = R.add(v, t)
            if v == 0:
                out.append((x, y))
    return out


def test_classify_examples():
    F = make_field(7)
    g = find_nonsquare(F)
    hyp = classify_conic2d(Conic2D(F, 0, 1, 0, 0, 0, 6))
    assert hyp.kind == HYPERBOLA
    assert hyp.to_normal((2, 4)) == (2, 4)  # identity substitution
    assert classify_conic2d(Conic2D(F, 6, 0, 0, 0, 1, 0)).kind == PARABOLA
    deg = classify_conic2d(Conic2D(F, 1, 0, 6, 0, 0, 0))
    assert deg.kind == "degenerate" and deg.subkind == "intersecting-lines"
    ell = classify_conic2d(Conic2D(F, F.neg(g), 0, 1, 0, 0, F.neg(2)))
    assert ell.kind == ELLIPSE and ell.k == 2


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11])
def test_classification_certificate(q):
    F = field_for_order(q)
    rng = random.Random(q)
    counts = {PARABOLA: q, HYPERBOLA: q - 1, ELLIPSE: q + 1}
    seen = set()
    for _ in range(150):
        coeffs = [rng.randrange(q) for _ in range(6)]
        if not any(coeffs[:3]):
            continue
        Q = Conic2D(F, *coeffs)
        cl = classify_conic2d(Q)
        zs = _zero_set(F, Q)
        seen.add(cl.kind)
        if cl.kind == "degenerate":
            assert len(zs) not in (q - 1, q + 1) or q == 3
            continue
        assert len(zs) == counts[cl.kind]
        image = sorted(cl.to_normal(p) for p in zs)
        assert image == sorted(_zero_set(F, cl.normal_form))
        assert [cl.from_normal(cl.to_normal(p)) for p in zs] == zs
    assert {PARABOLA, HYPERBOLA, ELLIPSE} <= seen


def test_ellipse_over_f3():
    F = make_field(3)
    E = ellipse_parametrization(F, 2, 1)
    assert sorted(E.plane_points()) == [(0, 1), (0, 2), (1, 0), (2, 0)]
    C = standard_ellipse(F, 2)
    assert sorted(conic_points(C)) == [(0, 1), (0, 2), (1, 0), (2, 0)]


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
def test_ellipse_matches_brute_force(q):
    F = field_for_order(q)
    g = find_nonsquare(F)
    for k in F.units():
        E = ellipse_parametrization(F, g, k)
        pts = E.plane_points()
        assert len(set(pts)) == q + 1
        assert sorted(pts) == brute_ellipse(F, g, k)


def test_ellipse_laurent_forms_agree():
    F = make_field(7)
    E = ellipse_parametrization(F, find_nonsquare(F), 3)
    lx, ly = E.laurent_x(), E.laurent_y()
    for t in E.parameters():
        assert lx.evaluate(t) == E.ext.lift(E.x(t))
        assert ly.evaluate(t) == E.ext.lift(E.y(t))


def test_ellipse_inputs_validated():
    F = make_field(7)
    with pytest.raises(ConicError):
        ellipse_parametrization(F, 3, 0)
    with pytest.raises(ConicError):
        ellipse_from_solution(F, 3, 1, 1, 1)


def test_conic_points_examples():
    F5, F7 = make_field(5), make_field(7)
    par = Conic(F5, PARABOLA, (0, 0), (1, 0), (0, 1))
    assert sorted(conic_points(par)) == sorted((t, t * t % 5) for t in range(5))
    hyp = Conic(F7, HYPERBOLA, (0, 0), (1, 0), (0, 1))
    assert len(conic_points(hyp)) == 6
    assert all(x * y % 7 == 1 for x, y in conic_points(hyp))


def test_directions():
    F = make_field(5)
    assert conic_directions(Conic(F, PARABOLA, (0, 0), (1, 0), (1, 2))) == [(1, 2)]
    assert conic_directions(Conic(F, HYPERBOLA, (0, 0), (1, 0), (0, 1))) == [(1, 0), (0, 1)]
    assert conic_directions(standard_ellipse(F, 2)) == []


def test_dependent_b_c_rejected():
    F = make_field(5)
    with pytest.raises(ConicError, match="dependent"):
        Conic(F, PARABOLA, (0, 0, 0), (1, 2, 3), (2, 4, 1))
    with pytest.raises(ConicError):
        Conic(F, ELLIPSE, (0, 0), (1, 0), (0, 1))


@pytest.mark.parametrize("q", [5, 7, 9, 11, 13])
def test_embedding_counts_and_membership(q):
    F = field_for_order(q)
    g = find_nonsquare(F)
    rng = random.Random(q * 7)
    for _ in range(30):
        n = rng.randint(2, 4)
        a = random_point(F, n, rng)
        b, c = random_independent_pair(F, n, rng)
        E = ellipse_parametrization(F, g, rng.randrange(1, q))
        for kind, plane in (
            (PARABOLA, [(t, ref(F).mul(t, t)) for t in range(q)]),
            (HYPERBOLA, [(t, ref(F).inv(t)) for t in range(1, q)]),
            (ELLIPSE, brute_ellipse(F, E.g, E.k)),
        ):
            C = Conic(F, kind, a, b, c, E if kind == ELLIPSE else None)
            assert sorted(C.points()) == sorted(embed(F, a, b, c, x, y) for x, y in plane)


def test_swapped_hyperbola_same_points():
    F = make_field(11)
    C = Conic(F, HYPERBOLA, (1, 2, 3), (1, 0, 4), (0, 1, 5))
    assert sorted(C.points()) == sorted(C.swapped().points())
    with pytest.raises(ConicError):
        Conic(F, PARABOLA, (0, 0), (1, 0), (0, 1)).swapped()
