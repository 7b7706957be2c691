import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ranspace.config import Configuration, hausdorff
from ranspace.expmonoid import (
    I2, NATURALS, RMAX, Z2, AlmostNullMap, CommutativeMonoid, MonoidLawError, builtin_base,
    exp_merge, exp_pushforward, exp_split, free_extension, from_subset, image,
    monoid_product, random_almost_null, to_subset,
)

FOLD = {("x", 0): "x", ("x", 1): "x"}


def test_example_fold_I2_keeps_point():
    phi = AlmostNullMap(I2, {("x", 0): 1, ("x", 1): 1})
    assert exp_pushforward(FOLD, phi) == AlmostNullMap(I2, {"x": 1})


def test_example_fold_Z2_cancels():
    phi = AlmostNullMap(Z2, {("x", 0): 1, ("x", 1): 1})
    psi = exp_pushforward(FOLD, phi)
    assert psi["x"] == 0 and len(psi) == 0


def test_pushforward_identity_and_missing_image():
    phi = AlmostNullMap(NATURALS, {"a": 2, "b": 5})
    assert exp_pushforward({"a": "a", "b": "b"}, phi) == phi
    with pytest.raises(KeyError):
        exp_pushforward({"a": "a"}, phi)


def test_unit_values_are_not_stored():
    phi = AlmostNullMap(NATURALS, {"a": 0, "b": 3})
    assert phi.support == {"b"}
    assert phi == AlmostNullMap(NATURALS, {"b": 3})


def test_monoid_product_examples():
    for A in (NATURALS, Z2, I2, RMAX):
        assert monoid_product(A, []) == A.unit
    assert monoid_product(NATURALS, [2, 3, 5]) == 10
    assert monoid_product(I2, [1, 1, 1]) == 1


def test_free_extension_examples():
    assert free_extension(RMAX, lambda x: x, []) == -math.inf
    assert free_extension(RMAX, lambda x: x, [2.0]) == 2.0
    assert free_extension(RMAX, lambda x: x, [1.0, 3.5, 2.0]) == 3.5
    with pytest.raises(ValueError, match="not idempotent"):
        free_extension(NATURALS, lambda x: x, [1])


def test_split_merge_examples():
    phi = AlmostNullMap(NATURALS, {"a": 2, "b": 3})
    left, right = exp_split(phi, {"a"}, {"b"})
    assert left == AlmostNullMap(NATURALS, {"a": 2})
    assert right == AlmostNullMap(NATURALS, {"b": 3})
    assert exp_merge(left, right) == phi
    only_left = AlmostNullMap(NATURALS, {"a": 2})
    assert exp_split(only_left, {"a"}, {"b"}) == (only_left, AlmostNullMap(NATURALS))
    with pytest.raises(ValueError, match="overlapping"):
        exp_merge(phi, left)


def test_split_is_a_homomorphism():
    rng = random.Random(3)
    X, Y = ["a", "b", "c"], ["d", "e"]
    for _ in range(100):
        f = random_almost_null(NATURALS, X + Y, rng, range(1, 4))
        g = random_almost_null(NATURALS, X + Y, rng, range(1, 4))
        fl, fr = exp_split(f, X, Y)
        gl, gr = exp_split(g, X, Y)
        assert exp_split(f.compose(g), X, Y) == (fl.compose(gl), fr.compose(gr))


def test_law_checks_reject_bad_monoids():
    with pytest.raises(MonoidLawError):
        CommutativeMonoid("sub", lambda a, b: a - b, 0, samples=(1, 2))
    with pytest.raises(MonoidLawError):
        CommutativeMonoid("fake-idem", lambda a, b: a + b, 0, idempotent=True, samples=(1,))
    with pytest.raises(ValueError):
        builtin_base("Q")
    assert builtin_base("Rmax") is RMAX


def _random_map(rng, X, Y):
    return {x: rng.choice(Y) for x in X}


@pytest.mark.parametrize("base, values", [(NATURALS, range(1, 5)), (Z2, [1]), (I2, [1])])
def test_functoriality(base, values):
    rng = random.Random(7)
    X, Y, Z = list(range(6)), list("abcd"), ["u", "v"]
    for _ in range(200):
        f, g = _random_map(rng, X, Y), _random_map(rng, Y, Z)
        phi = random_almost_null(base, X, rng, values)
        gf = {x: g[f[x]] for x in X}
        assert exp_pushforward(gf, phi) == exp_pushforward(g, exp_pushforward(f, phi))


def test_I2_pushforward_is_image_of_subsets():
    rng = random.Random(11)
    X, Y = list(range(8)), list(range(4))
    for _ in range(200):
        f = _random_map(rng, X, Y)
        S = {x for x in X if rng.random() < 0.5}
        assert to_subset(exp_pushforward(f, from_subset(S))) == image(f, S)


@settings(max_examples=200, deadline=None)
@given(st.sets(st.integers(0, 20)), st.sets(st.integers(0, 20)))
def test_free_extension_homomorphism(S, T):
    psi = lambda x: (x * 37 % 11) / 3.0
    assert free_extension(RMAX, psi, S | T) == RMAX.op(free_extension(RMAX, psi, S),
                                                        free_extension(RMAX, psi, T))


real = st.floats(-1e6, 1e6, allow_nan=False)


@settings(max_examples=300, deadline=None)
@given(st.sets(real, min_size=1, max_size=8), st.sets(real, min_size=1, max_size=8))
def test_product_map_is_metric(S, T):
    prod = lambda U: free_extension(RMAX, lambda x: x, U)
    D = hausdorff(Configuration([[s] for s in S]), Configuration([[t] for t in T]))
    assert RMAX.metric(prod(S), prod(T)) <= D
