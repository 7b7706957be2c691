import math
from fractions import Fraction

import numpy as np
import pytest

from ranspace.config import Configuration, PNorm, affine, hausdorff, union
from ranspace.meb import SolverOptions
from ranspace.strata import (
    BOTTOM, TIP, ConePoint, FinitePoset, Left, Mid, PosetError, Right, SphereConfig,
    StratumLabel, chart_distance, chart_forward, chart_inverse, cone_distance,
    cone_of_join_to_product, cone_poset, enumerate_posets, is_order_isomorphism, join_poset,
    local_chart_inverse, local_conical_chart, omega_truncation, poset_iso_cone_join,
    product_poset, product_to_cone_of_join,
)

from conftest import random_configuration

EMPTY = FinitePoset([], [])
POINT = FinitePoset(["*"], [("*", "*")])


def test_stratum_label_order():
    zero, one, three = StratumLabel(0), StratumLabel(1), StratumLabel(3)
    assert zero <= zero and one <= three and not three <= one
    assert not zero <= one and not one <= zero
    assert one < three and not zero < one
    P = omega_truncation(4)
    assert len(P) == 5


def test_poset_validation():
    with pytest.raises(PosetError, match="reflexive"):
        FinitePoset([1, 2], [(1, 1)])
    with pytest.raises(PosetError, match="antisymmetric"):
        FinitePoset([1, 2], [(1, 1), (2, 2), (1, 2), (2, 1)])
    with pytest.raises(PosetError, match="transitive"):
        FinitePoset([1, 2, 3], [(1, 1), (2, 2), (3, 3), (1, 2), (2, 3)])


def test_cone_poset_examples():
    assert cone_poset(EMPTY).elements == (BOTTOM,)
    anti = FinitePoset("ab", [("a", "a"), ("b", "b")])
    C = cone_poset(anti)
    assert C.le(BOTTOM, "a") and C.le(BOTTOM, "b") and not C.le("a", "b")
    chain = FinitePoset([1, 2], [(1, 1), (2, 2), (1, 2)])
    C = cone_poset(chain)
    assert len(C) == 3 and C.le(BOTTOM, 1) and C.le(1, 2) and C.le(BOTTOM, 2)


def test_join_poset_examples():
    anti2 = FinitePoset("ab", [("a", "a"), ("b", "b")])
    J = join_poset(EMPTY, anti2)
    iso = {("R", q): q for q in anti2}
    assert is_order_isomorphism(iso, J, anti2)
    J = join_poset(POINT, POINT)
    l, m, r = ("L", "*"), ("M", "*", "*"), ("R", "*")
    assert len(J) == 3 and J.le(l, m) and J.le(r, m) and not J.le(l, r) and not J.le(r, l)
    assert len(join_poset(POINT, anti2)) == 5


def test_iso_examples():
    for P, Q in [(EMPTY, EMPTY), (POINT, POINT)]:
        f = poset_iso_cone_join(P, Q)
        assert is_order_isomorphism(f, product_poset(cone_poset(P), cone_poset(Q)),
                                    cone_poset(join_poset(P, Q)))
    f = poset_iso_cone_join(POINT, POINT)
    A = product_poset(cone_poset(POINT), cone_poset(POINT))
    assert len(A) == 4


def test_iso_detects_a_wrong_map():
    f = poset_iso_cone_join(POINT, POINT)
    f[("*", BOTTOM)], f[(BOTTOM, "*")] = f[(BOTTOM, "*")], f[("*", BOTTOM)]
    chain = FinitePoset([0, 1], [(0, 0), (1, 1), (0, 1)])
    g = poset_iso_cone_join(chain, POINT)
    g[(0, BOTTOM)], g[(1, BOTTOM)] = g[(1, BOTTOM)], g[(0, BOTTOM)]
    assert not is_order_isomorphism(
        g, product_poset(cone_poset(chain), cone_poset(POINT)),
        cone_poset(join_poset(chain, POINT)))


def test_enumerate_posets_counts():
    # number of unlabeled posets on n points: 1, 1, 2, 5, 16
    assert [len(enumerate_posets(n)) for n in range(5)] == [1, 1, 2, 5, 16]


def test_cone_join_examples():
    assert cone_of_join_to_product(TIP) == (TIP, TIP)
    a, b = cone_of_join_to_product(ConePoint(2.0, Mid("x", 0.25, "y")))
    assert a == ConePoint(0.5, "x") and b == ConePoint(1.5, "y")
    assert cone_of_join_to_product(ConePoint(3, Left("x"))) == (ConePoint(3, "x"), TIP)
    assert cone_of_join_to_product(ConePoint(3, Right("y"))) == (TIP, ConePoint(3, "y"))


def test_cone_join_roundtrip_exact():
    rng = np.random.default_rng(2)
    for _ in range(300):
        lam = Fraction(int(rng.integers(1, 1000)), int(rng.integers(1, 1000)))
        t = Fraction(int(rng.integers(1, 99)), 100)
        for c in (TIP, ConePoint(lam, Left(1)), ConePoint(lam, Right(2)),
                  ConePoint(lam, Mid(1, t, 2))):
            assert product_to_cone_of_join(*cone_of_join_to_product(c)) == c
        a, b = ConePoint(lam, "x"), ConePoint(t, "y")
        assert cone_of_join_to_product(product_to_cone_of_join(a, b)) == (a, b)


def test_invalid_cone_and_join_points():
    with pytest.raises(ValueError):
        ConePoint(0, "x")
    with pytest.raises(ValueError):
        Mid("x", 1, "y")


def test_cone_distance():
    d = lambda x, y: abs(x - y)
    assert cone_distance(TIP, ConePoint(0.7, 5.0), d) == 0.7
    assert cone_distance(ConePoint(1.0, 0.0), ConePoint(1.5, 0.2), d) == 0.5
    assert cone_distance(TIP, TIP, d) == 0


def test_chart_examples():
    c = chart_forward(Configuration([[0.25, -1.0]]), PNorm(3))
    assert c.center == (0.25, -1.0) and c.cone is TIP and c.stratum is BOTTOM
    c = chart_forward(Configuration([[-1.0], [1.0]]), PNorm(2))
    assert c.center == pytest.approx((0.0,), abs=1e-15) and c.cone.scale == pytest.approx(1)
    assert hausdorff(c.cone.base.config, Configuration([[-1.0], [1.0]])) <= 1e-12
    c = chart_forward(Configuration([[0.0], [4.0]]), PNorm(2))
    assert c.center == pytest.approx((2.0,)) and c.cone.scale == pytest.approx(2.0)
    assert c.cone.base.config == Configuration([[-1.0], [1.0]])
    assert c.stratum == StratumLabel(2)
    assert chart_inverse((2.0,), c.cone) == Configuration([[0.0], [4.0]])
    assert chart_inverse((1.0, 2.0), TIP) == Configuration([[1.0, 2.0]])
    with pytest.raises(ValueError):
        chart_forward(Configuration([]))


def test_sphere_config_invariants(rng):
    for p in (1.5, 2, 3):
        S = random_configuration(rng, 2, 5)
        base = chart_forward(S, PNorm(p)).cone.base
        assert base.check()
    with pytest.raises(ValueError):
        SphereConfig(Configuration([[0.0]]), PNorm(2))


def test_chart_roundtrip(rng):
    opts = SolverOptions(restarts=2)
    for p in (1.5, 2, 3):
        for _ in range(20):
            S = random_configuration(rng, rng.integers(1, 4), rng.integers(1, 7))
            fwd = chart_forward(S, PNorm(p), opts)
            back = chart_inverse(fwd.center, fwd.cone)
            assert hausdorff(S, back, PNorm(p)) <= 1e-9
            again = chart_forward(back, PNorm(p), opts)
            assert chart_distance(fwd, again, PNorm(p)) <= 1e-9


def test_chart_continuity_at_tip(rng):
    S = random_configuration(rng, 2, 4)
    v = np.array([0.3, -0.2])
    scales = []
    for lam in (1.0, 1e-2, 1e-4, 1e-6):
        c = chart_forward(affine(lam, v, S), PNorm(1.5))
        scales.append(c.cone.scale)
        assert np.linalg.norm(np.asarray(c.center) - v) <= 2 * lam
    assert all(a > b for a, b in zip(scales, scales[1:])) and scales[-1] < 1e-5


def test_local_chart_examples():
    anchor = Configuration([[0.0], [10.0]])
    blocks = local_conical_chart(anchor, anchor, PNorm(2))
    assert all(b.chart.cone is TIP and b.chart.center == b.anchor for b in blocks)
    T = Configuration([[-1.0], [1.0], [10.0]])
    b0, b1 = local_conical_chart(anchor, T, PNorm(2))
    assert b0.block == Configuration([[-1.0], [1.0]])
    assert b0.chart.center == pytest.approx((0.0,), abs=1e-12)
    assert b0.chart.cone.scale == pytest.approx(1.0)
    assert b1.chart == chart_forward(Configuration([[10.0]]))
    assert sum(len(b.block) for b in (b0, b1)) == len(T)
    assert hausdorff(local_chart_inverse([b0, b1]), T) <= 1e-12


def test_local_chart_precondition():
    anchor = Configuration([[0.0], [10.0]])
    with pytest.raises(ValueError, match="separation"):
        local_conical_chart(anchor, Configuration([[0.0], [5.0], [10.0]]))
    with pytest.raises(ValueError):
        local_conical_chart(anchor, Configuration([[0.0]]))
    with pytest.raises(ValueError):
        local_conical_chart(Configuration([]), anchor)
