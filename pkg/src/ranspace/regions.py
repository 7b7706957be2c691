"""Open regions of R^d built from finitely many open axis-aligned boxes."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np


@dataclass(frozen=True)
class Box:
    """Open box ``prod_k (lo[k], hi[k])``; bounds may be infinite."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(x) for x in self.lo)
        hi = tuple(float(x) for x in self.hi)
        if len(lo) != len(hi):
            raise ValueError("box bounds have different lengths")
        for a, b in zip(lo, hi):
            if math.isnan(a) or math.isnan(b) or not a < b:
                raise ValueError(f"empty box side ({a}, {b})")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return len(self.lo)

    def contains(self, point) -> bool:
        return all(a < x < b for a, x, b in zip(self.lo, point, self.hi))

    def intersects(self, other: "Box") -> bool:
        return all(max(a, c) < min(b, d)
                   for a, b, c, d in zip(self.lo, self.hi, other.lo, other.hi))


@dataclass(frozen=True)
class OpenRegion:
    """Finite union of open boxes of a common dimension."""

    boxes: tuple[Box, ...]

    def __post_init__(self):
        boxes = tuple(self.boxes)
        if not boxes:
            raise ValueError("a region needs at least one box")
        dims = {b.dim for b in boxes}
        if len(dims) != 1:
            raise ValueError("boxes of a region must share one dimension")
        object.__setattr__(self, "boxes", boxes)

    @classmethod
    def box(cls, lo, hi) -> "OpenRegion":
        return cls((Box(tuple(lo), tuple(hi)),))

    @classmethod
    def interval(cls, a: float, b: float) -> "OpenRegion":
        return cls.box((a,), (b,))

    @property
    def dim(self) -> int:
        return self.boxes[0].dim

    def contains(self, point) -> bool:
        return any(b.contains(point) for b in self.boxes)

    def intersects(self, other: "OpenRegion") -> bool:
        return any(a.intersects(b) for a in self.boxes for b in other.boxes)

    def contains_region(self, other: "OpenRegion") -> bool:
        """Exact test of ``other ⊂ self``.

        Coordinate compression: in each dimension the bounds of all boxes cut
        the line into open cells and cut points; membership in every box is
        constant on each product of cells/cut points, so one representative
        per product decides the inclusion.
        """
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        for box in other.boxes:
            axes = []
            for k in range(self.dim):
                cuts = {box.lo[k], box.hi[k]}
                for b in self.boxes:
                    cuts.update((b.lo[k], b.hi[k]))
                cuts = sorted(c for c in cuts if box.lo[k] <= c <= box.hi[k])
                axes.append(_representatives(cuts))
            for rep in itertools.product(*axes):
                if not self.contains(rep):
                    return False
        return True

    def sample(self, rng: np.random.Generator, spread: float = 10.0) -> tuple[float, ...]:
        """Draw one point of the region (uniform on finite box sides)."""
        box = self.boxes[rng.integers(len(self.boxes))]
        coords = []
        for a, b in zip(box.lo, box.hi):
            if math.isfinite(a) and math.isfinite(b):
                x = rng.uniform(a, b)
                # uniform() may return the closed endpoint
                if not a < x < b:
                    x = 0.5 * (a + b)
            elif math.isfinite(a):
                x = a + rng.exponential(spread) + 1e-12 * (1 + abs(a))
            elif math.isfinite(b):
                x = b - rng.exponential(spread) - 1e-12 * (1 + abs(b))
            else:
                x = rng.normal(0.0, spread)
            coords.append(float(x))
        return tuple(coords)


def _representatives(cuts: Sequence[float]) -> list[float]:
    reps = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if math.isinf(a) and math.isinf(b):
            reps.append(0.0)
        elif math.isinf(a):
            reps.append(b - 1.0)
        elif math.isinf(b):
            reps.append(a + 1.0)
        else:
            reps.append(0.5 * (a + b))
    reps.extend(c for c in cuts[1:-1] if math.isfinite(c))
    return reps


@dataclass(frozen=True)
class BasisOpen:
    """The basic open ``[U_i]_{i in I}`` of the metric topology."""

    regions: tuple[OpenRegion, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "regions", tuple(self.regions))


class ComponentLabeling:
    """Pairwise disjoint labelled regions standing for connected components."""

    def __init__(self, items: Sequence[tuple[Hashable, OpenRegion]]):
        items = tuple((label, region) for label, region in items)
        labels = [label for label, _ in items]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate labels")
        if len({r.dim for _, r in items}) > 1:
            raise ValueError("regions of a labeling must share one dimension")
        for (la, ra), (lb, rb) in itertools.combinations(items, 2):
            if ra.intersects(rb):
                raise ValueError(f"regions {la!r} and {lb!r} overlap")
        self.items = items

    @property
    def labels(self) -> tuple:
        return tuple(label for label, _ in self.items)

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def label_of(self, point):
        """Label of the region containing ``point``, or None."""
        for label, region in self.items:
            if region.contains(point):
                return label
        return None
