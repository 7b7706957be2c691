import math

import numpy as np
import pytest

from ranspace.config import Configuration, union
from ranspace.covers import (
    basis_membership, classify_sequence, exists_map, minimal_open_membership,
    shrinking_cluster_sequence, weiss_cover_falsify,
)
from ranspace.regions import BasisOpen, Box, ComponentLabeling, OpenRegion

UNIT = OpenRegion.interval(0, 1)


def line(*xs):
    return Configuration([[x] for x in xs], dim=1)


def test_basis_membership_examples():
    assert basis_membership(line(3.0), BasisOpen([]))
    assert not basis_membership(Configuration([]), BasisOpen([UNIT]))
    assert basis_membership(line(0.5, 2), BasisOpen([UNIT]))
    assert not basis_membership(line(2), BasisOpen([UNIT, OpenRegion.interval(1, 3)]))
    with pytest.raises(ValueError):
        basis_membership(Configuration([[0.5, 0.5]]), BasisOpen([UNIT]))


def test_minimal_membership_examples():
    assert minimal_open_membership(Configuration([]), UNIT)
    assert minimal_open_membership(line(0.5), UNIT)
    assert not minimal_open_membership(line(0.5, 2), UNIT)
    # open: endpoints are excluded
    assert not minimal_open_membership(line(0.0), UNIT)


def test_minimal_membership_of_union(rng):
    U = OpenRegion((Box((0,), (1,)), Box((2,), (3,))))
    for _ in range(200):
        S = line(*rng.uniform(-1, 4, rng.integers(0, 4)))
        T = line(*rng.uniform(-1, 4, rng.integers(0, 4)))
        assert minimal_open_membership(union(S, T), U) == (
            minimal_open_membership(S, U) and minimal_open_membership(T, U))


def test_basis_membership_monotone(rng):
    for _ in range(200):
        a, b = sorted(rng.uniform(-2, 2, 2))
        small = OpenRegion.interval(a, b + 1e-3)
        big = OpenRegion.interval(a - rng.uniform(0, 1), b + 1e-3 + rng.uniform(0, 1))
        S = line(*rng.uniform(-3, 3, rng.integers(1, 5)))
        if basis_membership(S, BasisOpen([small])):
            assert basis_membership(S, BasisOpen([big]))


def test_contains_region():
    assert UNIT.contains_region(OpenRegion.interval(0.2, 0.6))
    assert UNIT.contains_region(UNIT)
    assert not UNIT.contains_region(OpenRegion.interval(0.5, 1.5))
    # two overlapping boxes cover a box straddling their seam
    L = OpenRegion((Box((0, 0), (2, 1)), Box((1, 0), (3, 1))))
    assert L.contains_region(OpenRegion.box((0.5, 0.2), (2.5, 0.8)))
    # abutting boxes miss the shared face
    gap = OpenRegion((Box((0,), (1,)), Box((1,), (2,))))
    assert not gap.contains_region(OpenRegion.interval(0.5, 1.5))
    plane = OpenRegion.box((-math.inf, -math.inf), (math.inf, math.inf))
    assert plane.contains_region(L) and not L.contains_region(plane)


def test_weiss_family_of_V_finds_nothing():
    V = OpenRegion.box((0, 0), (1, 1))
    report = weiss_cover_falsify(V, [V], 5, samples=500)
    assert not report.found and str(report) == "none-found after 500 samples"


def test_weiss_counterexample_is_verified():
    family = [OpenRegion.interval(0, 0.6), OpenRegion.interval(0.4, 1)]
    report = weiss_cover_falsify(UNIT, family, 2, samples=2000, seed=1)
    assert report.found and len(report.counterexample) == 2
    S = report.counterexample
    assert all(UNIT.contains(s) for s in S)
    assert not any(minimal_open_membership(S, U) for U in family)
    assert str(report).startswith("counterexample")
    # at cardinality one the family is an ordinary cover
    assert not weiss_cover_falsify(UNIT, family, 1, samples=2000).found


def test_weiss_preconditions():
    with pytest.raises(ValueError, match="not contained"):
        weiss_cover_falsify(UNIT, [OpenRegion.interval(0.5, 2)], 2)
    with pytest.raises(ValueError):
        weiss_cover_falsify(UNIT, [UNIT], 0)


def test_weiss_is_deterministic():
    family = [OpenRegion.interval(0, 0.6), OpenRegion.interval(0.4, 1)]
    a = weiss_cover_falsify(UNIT, family, 3, samples=1000, seed=5)
    b = weiss_cover_falsify(UNIT, family, 3, samples=1000, seed=5)
    assert a == b


def halves():
    return ComponentLabeling([("neg", OpenRegion.interval(-math.inf, 0)),
                              ("pos", OpenRegion.interval(0, math.inf))])


def test_exists_examples():
    lab = halves()
    assert exists_map(Configuration([]), lab) == frozenset()
    assert exists_map(line(1, 2), lab) == {"pos"}
    assert exists_map(line(-1, 1), lab) == {"neg", "pos"}
    with pytest.raises(ValueError, match="outside"):
        exists_map(line(0), lab)


def test_labeling_rejects_overlap():
    with pytest.raises(ValueError):
        ComponentLabeling([("a", UNIT), ("b", OpenRegion.interval(0.5, 2))])


def test_exists_is_a_homomorphism(rng):
    lab = ComponentLabeling([(k, OpenRegion.interval(k, k + 1)) for k in range(4)])
    draw = lambda: line(*(rng.integers(0, 4, rng.integers(0, 4)) + rng.uniform(0.01, 0.99)))
    for _ in range(300):
        S, T = draw(), draw()
        assert exists_map(union(S, T), lab) == exists_map(S, lab) | exists_map(T, lab)


def test_classify_constant_sequence():
    rep = classify_sequence([line(0, 1)] * 10)
    assert rep.cardinality_bounded and rep.metric_cauchy_estimate == 0
    assert rep.verdict == "metric-convergent"


def test_classify_shrinking_cluster():
    seq = shrinking_cluster_sequence(0.0, 40)
    assert [len(S) for S in seq[:3]] == [2, 3, 4]
    # every point of S_n lies within 1/n of x
    for n, S in enumerate(seq, start=1):
        assert max(abs(s[0]) for s in S) <= 1 / n + 1e-15
    rep = classify_sequence(seq)
    assert not rep.cardinality_bounded and rep.cauchy_like
    assert rep.verdict == "metric-convergent, colimit-divergent"


def test_classify_non_cauchy():
    seq = [line(float(i % 2)) for i in range(20)]
    rep = classify_sequence(seq)
    assert not rep.cauchy_like and rep.verdict == "not Cauchy-like"
    with pytest.raises(ValueError):
        classify_sequence([])
