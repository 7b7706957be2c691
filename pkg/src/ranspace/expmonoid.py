"""Exponentials of base a commutative monoid, on finite sets.

An element of ``Exp_A(X)`` is an almost null map ``X -> A``; over a finite
``X`` that is just a map with finite support, stored without unit values.
Pushing forward along ``f: X -> Y`` sums each fibre in ``A``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from functools import reduce
from types import MappingProxyType
from typing import Any, Callable, Hashable, Iterable, Mapping, Optional


class MonoidLawError(ValueError):
    """A sampled monoid law check failed."""


@dataclass(frozen=True)
class CommutativeMonoid:
    """A commutative monoid given by a binary operation and a unit.

    Laws cannot be decided in general, so ``check_laws`` evaluates them on
    sampled elements; the constructor runs it when ``samples`` is given.
    The operation (and metric, if any) must be pure.
    """

    name: str
    op: Callable[[Any, Any], Any]
    unit: Any
    idempotent: bool = False
    metric: Optional[Callable[[Any, Any], float]] = None
    samples: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        if self.samples:
            self.check_laws(self.samples)

    def check_laws(self, elements: Iterable) -> None:
        els = list(elements) + [self.unit]
        op = self.op
        for a in els:
            if op(a, self.unit) != a or op(self.unit, a) != a:
                raise MonoidLawError(f"{self.name}: unit law fails at {a!r}")
            if self.idempotent and op(a, a) != a:
                raise MonoidLawError(f"{self.name}: not idempotent at {a!r}")
        for a, b in itertools.product(els, repeat=2):
            if op(a, b) != op(b, a):
                raise MonoidLawError(f"{self.name}: not commutative at {a!r}, {b!r}")
        for a, b, c in itertools.product(els, repeat=3):
            if op(op(a, b), c) != op(a, op(b, c)):
                raise MonoidLawError(f"{self.name}: not associative at {a!r}, {b!r}, {c!r}")
        if self.metric is not None:
            d = self.metric
            for a, b in itertools.product(els, repeat=2):
                if d(a, b) != d(b, a) or (d(a, b) == 0) != (a == b) or d(a, b) < 0:
                    raise MonoidLawError(f"{self.name}: metric axiom fails at {a!r}, {b!r}")
            for a, b, c in itertools.product(els, repeat=3):
                if d(a, c) > d(a, b) + d(b, c) + 1e-12:
                    raise MonoidLawError(f"{self.name}: triangle inequality fails")

    def __repr__(self):
        return f"CommutativeMonoid({self.name!r})"


def _rmax_metric(a: float, b: float) -> float:
    if a == b:
        return 0.0
    return abs(a - b)


NATURALS = CommutativeMonoid("N", lambda a, b: a + b, 0, samples=(1, 2, 7))
Z2 = CommutativeMonoid("Z2", lambda a, b: (a + b) % 2, 0, samples=(1,))
I2 = CommutativeMonoid("I2", lambda a, b: a | b, 0, idempotent=True, samples=(1,))
RMAX = CommutativeMonoid("Rmax", max, -math.inf, idempotent=True, metric=_rmax_metric,
                         samples=(-2.5, 0.0, 1.0, 3.5))

BUILTIN_BASES = {m.name: m for m in (NATURALS, Z2, I2, RMAX)}


def builtin_base(name: str) -> CommutativeMonoid:
    try:
        return BUILTIN_BASES[name]
    except KeyError:
        raise ValueError(f"unknown base {name!r}; choose from {sorted(BUILTIN_BASES)}") from None


class AlmostNullMap:
    """A finitely supported map from a set into a commutative monoid.

    Entries equal to the unit are dropped, so two maps are equal exactly when
    their stored supports agree.
    """

    __slots__ = ("base", "_values")

    def __init__(self, base: CommutativeMonoid, values: Mapping[Hashable, Any] = ()):
        vals = {x: a for x, a in dict(values).items() if a != base.unit}
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "_values", MappingProxyType(vals))

    def __setattr__(self, name, value):
        raise AttributeError("AlmostNullMap is immutable")

    @property
    def support(self) -> frozenset:
        return frozenset(self._values)

    def __getitem__(self, x):
        return self._values.get(x, self.base.unit)

    def items(self):
        return self._values.items()

    def __len__(self):
        return len(self._values)

    def __eq__(self, other):
        if not isinstance(other, AlmostNullMap):
            return NotImplemented
        return self.base == other.base and dict(self._values) == dict(other._values)

    def __hash__(self):
        return hash((self.base.name, frozenset(self._values.items())))

    def __repr__(self):
        return f"AlmostNullMap({self.base.name}, {dict(self._values)!r})"

    def compose(self, other: "AlmostNullMap") -> "AlmostNullMap":
        """Pointwise monoid product."""
        if other.base != self.base:
            raise ValueError("maps over different bases")
        op = self.base.op
        keys = self.support | other.support
        return AlmostNullMap(self.base, {x: op(self[x], other[x]) for x in keys})


def monoid_product(A: CommutativeMonoid, elements: Iterable) -> Any:
    """Fold of the monoid operation over a finite multiset; unit if empty."""
    return reduce(A.op, elements, A.unit)


def exp_pushforward(f: Mapping[Hashable, Hashable], phi: AlmostNullMap) -> AlmostNullMap:
    """Image of ``phi`` under ``Exp_A(f)``: ``psi(y)`` is the product of
    ``phi`` over the fibre ``f^{-1}(y)``."""
    fibres: dict = {}
    for x, a in phi.items():
        if x not in f:
            raise KeyError(f"support element {x!r} has no image under f")
        fibres.setdefault(f[x], []).append(a)
    return AlmostNullMap(phi.base, {y: monoid_product(phi.base, vals)
                                    for y, vals in fibres.items()})


def free_extension(A: CommutativeMonoid, psi: Callable[[Any], Any], S: Iterable) -> Any:
    """Extension of ``psi: X -> A`` to finite subsets of X.

    Only defined for idempotent ``A``: a subset forgets multiplicities.
    """
    if not A.idempotent:
        raise ValueError(f"{A.name} is not idempotent; the extension to subsets is not defined")
    return monoid_product(A, (psi(s) for s in set(S)))


def exp_split(phi: AlmostNullMap, left: Iterable, right: Iterable
              ) -> tuple[AlmostNullMap, AlmostNullMap]:
    """Restrict ``phi`` over ``left ⊔ right`` to each summand."""
    left, right = frozenset(left), frozenset(right)
    if left & right:
        raise ValueError("summands are not disjoint")
    stray = phi.support - left - right
    if stray:
        raise ValueError(f"support elements outside both summands: {sorted(map(repr, stray))}")
    return (AlmostNullMap(phi.base, {x: a for x, a in phi.items() if x in left}),
            AlmostNullMap(phi.base, {x: a for x, a in phi.items() if x in right}))


def exp_merge(a: AlmostNullMap, b: AlmostNullMap) -> AlmostNullMap:
    """Inverse of ``exp_split``; the supports must be disjoint."""
    if a.base != b.base:
        raise ValueError("maps over different bases")
    overlap = a.support & b.support
    if overlap:
        raise ValueError(f"overlapping supports {sorted(map(repr, overlap))}")
    return AlmostNullMap(a.base, {**dict(a.items()), **dict(b.items())})


def from_subset(S: Iterable, base: CommutativeMonoid = I2) -> AlmostNullMap:
    """The indicator of a finite subset, as an element of ``Exp_{I2}``."""
    return AlmostNullMap(base, {x: 1 for x in S})


def to_subset(phi: AlmostNullMap) -> frozenset:
    if phi.base != I2:
        raise ValueError("only maps over I2 correspond to subsets")
    return phi.support


def image(f: Mapping[Hashable, Hashable], S: Iterable) -> frozenset:
    """``Exp(f)`` on subsets: ``S -> f(S)``."""
    return frozenset(f[s] for s in S)


def random_almost_null(base: CommutativeMonoid, X, rng: random.Random,
                       values: Iterable, density: float = 0.5) -> AlmostNullMap:
    values = list(values)
    return AlmostNullMap(base, {x: rng.choice(values) for x in X if rng.random() < density})
