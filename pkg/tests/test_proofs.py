import random

import pytest

from fqconics.conics import ELLIPSE, HYPERBOLA, PARABOLA, Conic, ConicError, ellipse_parametrization, standard_ellipse
from fqconics.constructions import DIRECTION, POINT, Witness, WitnessedSet, all_vectors, build_parabolic_kakeya, find_nikodym_witness
from fqconics.field import field_for_order, find_nonsquare, make_field
from fqconics.poly import MultiPoly
from fqconics.proofs import (
    KAKEYA,
    NIKODYM,
    RecoveryError,
    TraceError,
    direction_coefficient,
    nikodym_multiplicity,
    recover_missing_value,
    restrict,
    restrict_ellipse,
    restrict_hyperbola,
    restrict_parabola,
    run_trace,
)
from oracles import embed, naive_evaluate, random_independent_pair, random_point, random_poly, ref


def P(F, n, terms):
    return MultiPoly(F, n, terms)


E1, E2, O = (1, 0), (0, 1), (0, 0)


def test_parabola_examples():
    F = make_field(7)
    f = P(F, 2, {(0, 1): 1, (2, 0): 6})  # x2 - x1^2
    assert restrict_parabola(f, O, E1, E2).is_zero()
    g = P(F, 2, {(0, 2): 1})
    r = restrict_parabola(g, O, (0, 0), E2)
    assert r.degree == 4 and r.coeff(4) == 1


def test_hyperbola_examples():
    F = make_field(7)
    f = P(F, 2, {(1, 1): 1, (0, 0): 6})
    assert restrict_hyperbola(f, O, E1, E2).is_zero()
    g = P(F, 2, {(1, 0): 1})
    r = restrict_hyperbola(g, O, E1, E2)
    assert r.coeff(2) == 1 and r.degree == 2
    assert r.coeff(0) == 0


def test_ellipse_examples():
    F = make_field(7)
    g = find_nonsquare(F)
    for k in (1, 3):
        C = standard_ellipse(F, 2, k)
        f = P(F, 2, {(0, 2): 1, (2, 0): F.neg(g), (0, 0): F.neg(k)})
        res = restrict_ellipse(f, C)
        assert all(res(t) == 0 for t in C.parameters())
    one = P(F, 2, {(0, 0): 1})
    r = restrict_ellipse(one, standard_ellipse(F, 2))
    assert r.degree == 0 and r.coeff(0) == 1
    with pytest.raises(ConicError):
        restrict_ellipse(one, Conic(F, PARABOLA, O, E1, E2))


@pytest.mark.parametrize("q", [7, 9, 11])
def test_restrictions_agree_with_evaluation(q):
    F = field_for_order(q)
    R = ref(F)
    g = find_nonsquare(F)
    rng = random.Random(q)
    for _ in range(20):
        n = rng.randint(2, 3)
        f = random_poly(F, n, rng.randint(0, 5), rng)
        a = random_point(F, n, rng)
        b, c = random_independent_pair(F, n, rng)
        d = max(f.degree, 0)
        rp = restrict_parabola(f, a, b, c)
        rh = restrict_hyperbola(f, a, b, c)
        assert rp.degree <= 2 * d and rh.degree <= 2 * d
        for t in range(q):
            assert rp(t) == naive_evaluate(f, embed(F, a, b, c, t, R.mul(t, t)))
        for t in range(1, q):
            want = R.mul(R.pow(t, d), naive_evaluate(f, embed(F, a, b, c, t, R.inv(t))))
            assert rh(t) == want
        C = Conic(F, ELLIPSE, a, b, c, ellipse_parametrization(F, g, rng.randrange(1, q)))
        res = restrict(f, C)
        E = C.ellipse.ext
        assert res.result.degree <= 2 * d
        assert -d <= res.laurent_low and res.laurent_high <= d or f.is_zero()
        for t in C.parameters():
            x, y = C.plane_coords(t)
            want = E.mul(E.pow(t, d), E.lift(naive_evaluate(f, embed(F, a, b, c, x, y))))
            assert res.result(t) == want


def test_direction_coefficient_examples():
    F = make_field(7)
    assert direction_coefficient(P(F, 2, {(0, 2): 1}), Conic(F, PARABOLA, O, E1, E2)) == 1
    assert direction_coefficient(P(F, 2, {(1, 1): 1}), Conic(F, HYPERBOLA, O, E1, E2)) == 0
    with pytest.raises(ConicError, match="no direction"):
        direction_coefficient(P(F, 2, {(1, 1): 1}), standard_ellipse(F, 2))


def test_recovery_examples():
    F = make_field(11)
    C = Conic(F, PARABOLA, (3, 4), E1, (2, 5))
    zero = {t: 0 for t in range(1, 11)}
    assert recover_missing_value(zero, C, 4) == 0
    with pytest.raises(RecoveryError, match="cannot pin down"):
        recover_missing_value({t: 0 for t in range(1, 5)}, C, 4, t0=0)
    noisy = dict(zero)
    noisy[5] = 1
    with pytest.raises(RecoveryError, match="not a degree-4 restriction"):
        recover_missing_value(noisy, C, 4)


@pytest.mark.parametrize("kind", [PARABOLA, HYPERBOLA, ELLIPSE])
def test_recovery_random(kind):
    q = 11
    F = make_field(q)
    g = find_nonsquare(F)
    rng = random.Random(len(kind) * 31)
    D = (q - 3) // 2
    for _ in range(25):
        f = random_poly(F, 2, rng.randint(0, D), rng)
        a = random_point(F, 2, rng)
        b, c = random_independent_pair(F, 2, rng)
        C = Conic(F, kind, a, b, c, ellipse_parametrization(F, g, 1) if kind == ELLIPSE else None)
        pm = C.parameter_map()
        K = C.param_field()
        items = list(pm.items())
        withheld, t0 = items[rng.randrange(len(items))]
        lift = K.lift if kind == ELLIPSE else (lambda v: v)
        values = {t: lift(naive_evaluate(f, pt)) for pt, t in items if t != t0}
        got = recover_missing_value(values, C, D)
        assert got == lift(naive_evaluate(f, withheld))


def test_nikodym_trace_single_parabola():
    F = make_field(13)
    C = Conic(F, PARABOLA, (1, 2), E1, E2)
    pts = C.points()
    x = pts[0]
    W = WitnessedSet(F, 2, frozenset(pts[1:]), [Witness(x, POINT, C)], "single")
    R = run_trace(W, NIKODYM)
    assert R.status == "partial" and not R.contradiction
    rec = R.records[0]
    assert rec["zeros"] == 12 and rec["established"]
    assert R.polynomial.evaluate(x) == 0


def test_multiplicity_trace_records_hasse_steps():
    F = make_field(13)
    C = Conic(F, PARABOLA, (1, 2), E1, E2)
    pts = C.points()
    W = WitnessedSet(F, 2, frozenset(pts[1:]), [Witness(pts[0], POINT, C)], "single")
    R = run_trace(W, NIKODYM, multiplicity=True)
    assert R.multiplicity == {"l": 2, "m": nikodym_multiplicity(13, 2)} == {"l": 2, "m": 6}
    rec = R.records[0]
    assert len(rec["steps"]) == 3
    assert rec["established"] and rec["verified"]
    assert R.polynomial.multiplicity_at(pts[0]) >= 2


def test_full_space_trace_reports_infeasible_budget():
    F = make_field(7)
    S = frozenset(all_vectors(F, 2))
    ws = [Witness(v, POINT, find_nikodym_witness(F, S, v)) for v in sorted(S)]
    R = run_trace(WitnessedSet(F, 2, S, ws, "full"), NIKODYM)
    assert R.status == "over-threshold" and not R.contradiction and R.polynomial is None


def test_construction_trace_over_threshold():
    W = build_parabolic_kakeya(make_field(5), 3)
    R = run_trace(W, KAKEYA)
    assert R.status == "over-threshold"
    assert "exceeds (q-3)/2 threshold" in R.message and "no contradiction derivable" in R.message
    assert not R.contradiction


def test_trace_errors():
    F = make_field(7)
    W = WitnessedSet(F, 2, frozenset(), [], "empty")
    with pytest.raises(TraceError, match="no kakeya witnesses"):
        run_trace(W, KAKEYA)
    with pytest.raises(TraceError):
        run_trace(W, "lines")


def test_small_kakeya_like_set_gets_partial_coverage():
    # one parabola inside a small set: a single direction is deduced, no contradiction
    F = make_field(13)
    C = Conic(F, PARABOLA, (0, 0), E1, (1, 1))
    W = WitnessedSet(F, 2, frozenset(C.points()), [Witness((1, 1), DIRECTION, C)], "one")
    R = run_trace(W, KAKEYA)
    rec = R.records[0]
    assert rec["established"] and rec["identity_holds"] and rec["verified"]
    assert R.status == "partial" and R.covered == 1
