"""Finite configurations of points in R^d and the metric exponential distance.

A configuration is an immutable finite set of points stored in canonical
form: lexicographically sorted, without exact duplicates.  Distances on
configurations take values in ``[0, inf]``; ``math.inf`` plays the role of
the extended value and obeys ``max(inf, x) == inf``, ``inf + x == inf`` and
``min(inf, x) == x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .regions import ComponentLabeling

INF = math.inf


class DimensionError(ValueError):
    """Raised when points or configurations of different dimensions meet."""


@dataclass(frozen=True)
class PNorm:
    """The p-norm on R^d for ``1 <= p <= inf``."""

    p: float = 2.0

    def __post_init__(self):
        p = float(self.p)
        if math.isnan(p) or p < 1:
            raise ValueError(f"p-norm exponent must lie in [1, inf], got {self.p}")
        object.__setattr__(self, "p", p)

    @property
    def rotund(self) -> bool:
        """True iff the closed unit ball is strictly convex."""
        return 1.0 < self.p < INF

    def norms(self, x) -> np.ndarray:
        """Row-wise norms of an array whose last axis holds coordinates."""
        a = np.abs(np.asarray(x, dtype=float))
        if a.shape[-1] == 0:
            return np.zeros(a.shape[:-1])
        m = a.max(axis=-1)
        if self.p == INF:
            return m
        if self.p == 1.0:
            return a.sum(axis=-1)
        # factor out the largest coordinate so large p cannot overflow
        safe = np.where(m > 0, m, 1.0)
        scaled = a / safe[..., None]
        out = safe * np.sum(scaled ** self.p, axis=-1) ** (1.0 / self.p)
        return np.where(m > 0, out, 0.0)

    def __call__(self, x) -> float:
        return float(self.norms(np.asarray(x, dtype=float)))

    def __str__(self):
        return "inf" if self.p == INF else f"{self.p:g}"


def _as_point(x) -> tuple[float, ...]:
    pt = tuple(float(c) for c in np.ravel(np.asarray(x, dtype=float)))
    if not all(math.isfinite(c) for c in pt):
        raise ValueError(f"point has non-finite coordinates: {pt}")
    return pt


class Configuration:
    """A finite subset of R^d.

    ``Configuration([])`` is the empty configuration; its dimension is left
    unset unless given explicitly, and it is compatible with every dimension.
    """

    __slots__ = ("points", "dim", "_array")

    def __init__(self, points: Iterable = (), dim: Optional[int] = None):
        pts = sorted({_as_point(p) for p in points})
        dims = {len(p) for p in pts}
        if len(dims) > 1:
            raise DimensionError(f"points of mixed dimensions {sorted(dims)}")
        if pts:
            d = dims.pop()
            if dim is not None and dim != d:
                raise DimensionError(f"declared dim {dim} but points have dim {d}")
            dim = d
        object.__setattr__(self, "points", tuple(pts))
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "_array", None)

    def __setattr__(self, name, value):
        raise AttributeError("Configuration is immutable")

    @property
    def array(self) -> np.ndarray:
        """Points as an ``(n, d)`` float array (read-only)."""
        if self._array is None:
            arr = np.array(self.points, dtype=float).reshape(len(self.points), self.dim or 0)
            arr.setflags(write=False)
            object.__setattr__(self, "_array", arr)
        return self._array

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, point):
        return _as_point(point) in set(self.points)

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        return f"Configuration({[list(p) for p in self.points]!r})"

    @property
    def is_empty(self) -> bool:
        return not self.points


def _common_dim(*configs: Configuration) -> Optional[int]:
    dims = {c.dim for c in configs if c.dim is not None}
    if len(dims) > 1:
        raise DimensionError(f"configurations of dimensions {sorted(dims)}")
    return dims.pop() if dims else None


def point_distance(a, b, norm: PNorm = PNorm()) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionError(f"points of shapes {a.shape} and {b.shape}")
    return norm(a - b)


def distance_matrix(S: Configuration, T: Configuration, norm: PNorm = PNorm(),
                    labeling: Optional[ComponentLabeling] = None) -> np.ndarray:
    """Pairwise distances ``d(s, t)``; points in different labelled regions
    are at distance ``inf``."""
    _common_dim(S, T)
    A, B = S.array, T.array
    if not len(S) or not len(T):
        return np.zeros((len(S), len(T)))
    dm = norm.norms(A[:, None, :] - B[None, :, :])
    if labeling is not None:
        la = [_label_or_raise(labeling, s) for s in S]
        lb = [_label_or_raise(labeling, t) for t in T]
        same = np.array([[x == y for y in lb] for x in la])
        dm = np.where(same, dm, INF)
    return dm


def _label_or_raise(labeling: ComponentLabeling, point):
    label = labeling.label_of(point)
    if label is None:
        raise ValueError(f"point {point} lies outside every labelled region")
    return label


def hausdorff(S: Configuration, T: Configuration, norm: PNorm = PNorm(),
              labeling: Optional[ComponentLabeling] = None) -> float:
    """Metric exponential distance ``D(S, T)``.

    ``inf`` if exactly one side is empty, ``0`` if both are.  With a
    ``labeling``, points of distinct regions are infinitely far apart (the
    coproduct metric).
    """
    _common_dim(S, T)
    if S.is_empty and T.is_empty:
        return 0.0
    if S.is_empty or T.is_empty:
        return INF
    dm = distance_matrix(S, T, norm, labeling)
    return float(max(dm.min(axis=1).max(), dm.min(axis=0).max()))


def union(S: Configuration, T: Configuration) -> Configuration:
    dim = _common_dim(S, T)
    return Configuration(S.points + T.points, dim=dim)


def affine(lam: float, v, S: Configuration) -> Configuration:
    """``{lam * s + v : s in S}`` for ``lam >= 0``."""
    if lam < 0:
        raise ValueError("scale must be nonnegative")
    v = np.asarray(_as_point(v))
    if S.dim is not None and len(v) != S.dim:
        raise DimensionError(f"translation of dim {len(v)} on configuration of dim {S.dim}")
    if S.is_empty:
        return Configuration([], dim=len(v))
    return Configuration(lam * S.array + v)


def separation(S: Configuration, norm: PNorm = PNorm()) -> float:
    """Smallest distance between two distinct points, ``inf`` if none."""
    if len(S) < 2:
        return INF
    dm = distance_matrix(S, S, norm)
    np.fill_diagonal(dm, INF)
    return float(dm.min())


def stratum(S: Configuration):
    """Cardinality of ``S`` as a label of the stratification poset."""
    from .strata import StratumLabel
    return StratumLabel(len(S))


def split_by_components(S: Configuration, labeling: ComponentLabeling
                        ) -> list[tuple[object, Configuration]]:
    """Partition ``S`` by the labelled regions it meets, in labeling order."""
    parts: dict = {}
    for s in S:
        parts.setdefault(_label_or_raise(labeling, s), []).append(s)
    return [(label, Configuration(parts[label], dim=S.dim))
            for label in labeling.labels if label in parts]


def diameter(S: Configuration, norm: PNorm = PNorm()) -> float:
    if len(S) < 2:
        return 0.0
    return float(distance_matrix(S, S, norm).max())


def as_configuration(points: Sequence, dim: Optional[int] = None) -> Configuration:
    if isinstance(points, Configuration):
        return points
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1 and dim is None:
        arr = arr.reshape(-1, 1)
    return Configuration(arr.reshape(len(arr), -1) if arr.size else [], dim=dim)
