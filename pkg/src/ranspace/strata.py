"""Stratification posets, cone and join coordinates, and conical charts.

Configurations are stratified by cardinality over ``omega_*``: the label 0
is isolated and the positive labels form a chain.  Near a configuration
with at least two points, the space of configurations looks like
``V x C(S_M(V))``, where ``S_M(V)`` holds the configurations whose
restricted enclosing ball is the unit ball at the origin.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Optional, Union

import numpy as np

from .config import Configuration, PNorm, affine, hausdorff, separation, union
from .meb import SolverOptions, solve_restricted_meb


@dataclass(frozen=True, order=False)
class StratumLabel:
    """An element of ``omega_* = {0} ⊔ {1 < 2 < ...}``."""

    value: int

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("stratum labels are nonnegative")

    def __le__(self, other: "StratumLabel") -> bool:
        return self.value == other.value or 0 < self.value <= other.value

    def __lt__(self, other: "StratumLabel") -> bool:
        return self != other and self <= other

    def __int__(self):
        return self.value


class _Bottom:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "BOTTOM"

    def __reduce__(self):
        return (_Bottom, ())


BOTTOM = _Bottom()


class PosetError(ValueError):
    pass


class FinitePoset:
    """A finite poset stored as its full (reflexive) order relation."""

    def __init__(self, elements: Iterable[Hashable], leq: Iterable[tuple]):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise PosetError("repeated elements")
        self.leq = frozenset(leq)
        self.check()

    @classmethod
    def generated(cls, elements: Iterable[Hashable], relations: Iterable[tuple]) -> "FinitePoset":
        """Reflexive-transitive closure of ``relations``."""
        elements = tuple(elements)
        index = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        R = np.eye(n, dtype=bool)
        for a, b in relations:
            R[index[a], index[b]] = True
        for k in range(n):
            R |= R[:, k:k + 1] & R[k:k + 1, :]
        pairs = [(elements[i], elements[j]) for i, j in zip(*np.nonzero(R))]
        return cls(elements, pairs)

    def check(self) -> None:
        els = set(self.elements)
        for a, b in self.leq:
            if a not in els or b not in els:
                raise PosetError(f"relation ({a!r}, {b!r}) mentions unknown elements")
        for a in self.elements:
            if (a, a) not in self.leq:
                raise PosetError(f"not reflexive at {a!r}")
        for a, b in self.leq:
            if a != b and (b, a) in self.leq:
                raise PosetError(f"not antisymmetric at {a!r}, {b!r}")
        succ: dict = {}
        for a, b in self.leq:
            succ.setdefault(a, set()).add(b)
        for a, b in self.leq:
            for c in succ.get(b, ()):
                if (a, c) not in self.leq:
                    raise PosetError(f"not transitive at {a!r} <= {b!r} <= {c!r}")

    def le(self, a, b) -> bool:
        return (a, b) in self.leq

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        strict = sorted((repr(a), repr(b)) for a, b in self.leq if a != b)
        return f"FinitePoset({list(self.elements)!r}, <: {strict})"


def omega_truncation(n: int) -> FinitePoset:
    """``omega_{<= n}`` as a finite poset of StratumLabels."""
    labels = [StratumLabel(i) for i in range(n + 1)]
    return FinitePoset(labels, [(a, b) for a in labels for b in labels if a <= b])


def cone_poset(P: FinitePoset) -> FinitePoset:
    """``P`` with a new bottom element ``BOTTOM``."""
    if BOTTOM in P.elements:
        raise PosetError("poset already contains BOTTOM")
    return FinitePoset((BOTTOM,) + P.elements,
                       set(P.leq) | {(BOTTOM, x) for x in (BOTTOM,) + P.elements})


def join_poset(P: FinitePoset, Q: FinitePoset) -> FinitePoset:
    """``P ⋈ Q``: elements ``("L", p)``, ``("M", p, q)``, ``("R", q)``.

    The middle summand carries the product order and ``p, q < (p, q)``.
    """
    left = [("L", p) for p in P]
    right = [("R", q) for q in Q]
    mid = [("M", p, q) for p in P for q in Q]
    rel = [(("L", a), ("L", b)) for a, b in P.leq]
    rel += [(("R", a), ("R", b)) for a, b in Q.leq]
    rel += [(("M", a, c), ("M", b, d)) for a, b in P.leq for c, d in Q.leq]
    rel += [(("L", p), ("M", p, q)) for p in P for q in Q]
    rel += [(("R", q), ("M", p, q)) for p in P for q in Q]
    return FinitePoset.generated(left + mid + right, rel)


def product_poset(P: FinitePoset, Q: FinitePoset) -> FinitePoset:
    elements = [(p, q) for p in P for q in Q]
    return FinitePoset(elements, [((a, c), (b, d)) for a, b in P.leq for c, d in Q.leq])


def poset_iso_cone_join(P: FinitePoset, Q: FinitePoset) -> dict:
    """The canonical bijection ``P^♮ x Q^♮ -> (P ⋈ Q)^♮``."""
    iso = {(BOTTOM, BOTTOM): BOTTOM}
    iso.update({(p, BOTTOM): ("L", p) for p in P})
    iso.update({(BOTTOM, q): ("R", q) for q in Q})
    iso.update({(p, q): ("M", p, q) for p in P for q in Q})
    return iso


def is_order_isomorphism(f: dict, A: FinitePoset, B: FinitePoset) -> bool:
    """Exhaustive check that ``f`` is a bijection ``A -> B`` with
    ``a <= a'`` iff ``f(a) <= f(a')``."""
    if set(f) != set(A.elements) or sorted(map(repr, f.values())) != sorted(map(repr, B.elements)):
        return False
    if len(set(f.values())) != len(f):
        return False
    return all(A.le(a, b) == B.le(f[a], f[b]) for a in A for b in A)


def enumerate_posets(n: int) -> list[FinitePoset]:
    """All posets on ``{0, ..., n-1}`` up to isomorphism."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    seen = set()
    out = []
    perms = list(itertools.permutations(range(n)))
    for mask in range(1 << len(pairs)):
        strict = {pairs[k] for k in range(len(pairs)) if mask >> k & 1}
        if any((b, a) in strict for a, b in strict):
            continue
        if any((a, c) not in strict for a, b in strict for b2, c in strict if b == b2):
            continue
        canon = min(tuple(sorted((perm[a], perm[b]) for a, b in strict)) for perm in perms)
        if canon in seen:
            continue
        seen.add(canon)
        out.append(FinitePoset(range(n), set(canon) | {(i, i) for i in range(n)}))
    return out


# ------------------------------------------------------------ cones and joins

class _Tip:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "TIP"

    def __reduce__(self):
        return (_Tip, ())


TIP = _Tip()


@dataclass(frozen=True)
class ConePoint:
    """A point ``(scale, base)`` of the open cone away from the tip."""

    scale: Any
    base: Any

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError(f"cone scale must be positive, got {self.scale}")


Cone = Union[_Tip, ConePoint]


@dataclass(frozen=True)
class Left:
    x: Any


@dataclass(frozen=True)
class Mid:
    x: Any
    t: Any
    y: Any

    def __post_init__(self):
        if not 0 < self.t < 1:
            raise ValueError(f"join parameter must lie in (0, 1), got {self.t}")


@dataclass(frozen=True)
class Right:
    y: Any


JoinPoint = Union[Left, Mid, Right]


def cone_of_join_to_product(c: Cone) -> tuple[Cone, Cone]:
    """``C(X ⋈ Y) -> C(X) x C(Y)``: ``(lam, (x, t, y)) -> ((lam t, x), (lam (1 - t), y))``."""
    if c is TIP:
        return TIP, TIP
    lam, j = c.scale, c.base
    if isinstance(j, Left):
        return ConePoint(lam, j.x), TIP
    if isinstance(j, Right):
        return TIP, ConePoint(lam, j.y)
    if isinstance(j, Mid):
        return ConePoint(lam * j.t, j.x), ConePoint(lam * (1 - j.t), j.y)
    raise TypeError(f"not a join point: {j!r}")


def product_to_cone_of_join(a: Cone, b: Cone) -> Cone:
    if a is TIP and b is TIP:
        return TIP
    if b is TIP:
        return ConePoint(a.scale, Left(a.base))
    if a is TIP:
        return ConePoint(b.scale, Right(b.base))
    lam = a.scale + b.scale
    return ConePoint(lam, Mid(a.base, a.scale / lam, b.base))


def cone_stratum(c: Cone, base_stratum: Callable[[Any], Hashable]):
    return BOTTOM if c is TIP else base_stratum(c.base)


def join_stratum(j: JoinPoint, left_stratum: Callable, right_stratum: Callable):
    if isinstance(j, Left):
        return ("L", left_stratum(j.x))
    if isinstance(j, Right):
        return ("R", right_stratum(j.y))
    return ("M", left_stratum(j.x), right_stratum(j.y))


def cone_distance(a: Cone, b: Cone, base_distance: Callable[[Any, Any], float]) -> float:
    """Metric on the cone: the tip is at distance ``scale`` from ``(scale, x)``
    and ``d((l, x), (m, y)) = max(|l - m|, d(x, y))``."""
    if a is TIP and b is TIP:
        return 0.0
    if a is TIP:
        return float(b.scale)
    if b is TIP:
        return float(a.scale)
    return max(abs(float(a.scale) - float(b.scale)), float(base_distance(a.base, b.base)))


# -------------------------------------------------------------------- charts

@dataclass(frozen=True)
class SphereConfig:
    """A configuration whose restricted enclosing ball is the unit ball at 0."""

    config: Configuration
    norm: PNorm

    def __post_init__(self):
        if len(self.config) < 2:
            raise ValueError("a normalized configuration has at least two points")

    def check(self, tol: float = 1e-6, opts: Optional[SolverOptions] = None) -> bool:
        ball = solve_restricted_meb(self.config, self.norm, opts)
        return self.norm(ball.center) <= tol and abs(ball.radius - 1.0) <= tol


@dataclass(frozen=True)
class Chart:
    center: tuple[float, ...]
    cone: Cone

    @property
    def stratum(self):
        """``BOTTOM`` for a single point, else the cardinality."""
        return cone_stratum(self.cone, lambda s: StratumLabel(len(s.config)))


def chart_forward(S: Configuration, norm: PNorm = PNorm(),
                  opts: Optional[SolverOptions] = None) -> Chart:
    """``S -> (c_S, (r_S, (S - c_S) / r_S))``; a single point maps to the tip."""
    if S.is_empty:
        raise ValueError("the empty configuration has no conical chart")
    if len(S) == 1:
        return Chart(S.points[0], TIP)
    ball = solve_restricted_meb(S, norm, opts)
    if ball.radius < 1e-12:
        raise ValueError(f"enclosing radius {ball.radius:.3g} too small for {len(S)} points")
    c = np.asarray(ball.center)
    base = Configuration((S.array - c) / ball.radius)
    return Chart(ball.center, ConePoint(ball.radius, SphereConfig(base, norm)))


def chart_inverse(center, cone: Cone) -> Configuration:
    """``(v, tip) -> {v}`` and ``(v, (lam, S)) -> lam S + v``."""
    if cone is TIP:
        return Configuration([center])
    base = cone.base.config if isinstance(cone.base, SphereConfig) else cone.base
    return affine(cone.scale, center, base)


def chart_distance(a: Chart, b: Chart, norm: PNorm = PNorm()) -> float:
    """Max of the center distance and the cone distance (bases compared by D)."""
    dv = norm(np.subtract(a.center, b.center))
    return max(dv, cone_distance(a.cone, b.cone,
                                 lambda x, y: hausdorff(x.config, y.config, norm)))


@dataclass(frozen=True)
class LocalBlock:
    anchor: tuple[float, ...]
    block: Configuration
    chart: Chart


def local_conical_chart(anchor: Configuration, T: Configuration, norm: PNorm = PNorm(),
                        opts: Optional[SolverOptions] = None) -> list[LocalBlock]:
    """Split ``T`` near ``anchor`` into one block per anchor point and chart
    each block.

    Requires ``D(T, anchor) < separation(anchor) / 2``; then every point of
    ``T`` is within that radius of exactly one anchor point and every block
    is nonempty.
    """
    if anchor.is_empty:
        raise ValueError("anchor configuration must be nonempty")
    half = separation(anchor, norm) / 2
    dist = hausdorff(T, anchor, norm)
    if not dist < half:
        raise ValueError(f"D(T, anchor) = {dist:.6g} is not below half the anchor separation "
                         f"{half:.6g}")
    A = anchor.array
    blocks: dict[int, list] = {i: [] for i in range(len(A))}
    for t in T:
        dists = norm.norms(np.asarray(t) - A)
        i = int(np.argmin(dists))
        if not dists[i] < half:
            raise ValueError(f"point {t} is not within {half:.6g} of any anchor point")
        blocks[i].append(t)
    out = []
    for i, s in enumerate(anchor):
        if not blocks[i]:
            raise ValueError(f"anchor point {s} receives an empty block")
        block = Configuration(blocks[i])
        out.append(LocalBlock(s, block, chart_forward(block, norm, opts)))
    return out


def local_chart_inverse(blocks: Iterable[LocalBlock]) -> Configuration:
    out = Configuration([])
    for b in blocks:
        out = union(out, chart_inverse(b.chart.center, b.chart.cone))
    return out
