"""Open sets of the exponential topologies, Weiss covers and the ∃ map."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .config import Configuration, PNorm, hausdorff
from .regions import BasisOpen, ComponentLabeling, OpenRegion


def basis_membership(S: Configuration, B: BasisOpen) -> bool:
    """``S`` belongs to ``[U_i]`` iff it meets every ``U_i``."""
    _check_dims(S, B.regions)
    return all(any(U.contains(s) for s in S) for U in B.regions)


def minimal_open_membership(S: Configuration, U: OpenRegion) -> bool:
    """``S`` belongs to ``Exp(U)`` iff ``S ⊂ U``; always true for the empty set."""
    _check_dims(S, [U])
    return all(U.contains(s) for s in S)


def _check_dims(S: Configuration, regions: Sequence[OpenRegion]) -> None:
    if S.dim is None:
        return
    for U in regions:
        if U.dim != S.dim:
            raise ValueError(f"region of dim {U.dim} against configuration of dim {S.dim}")


@dataclass(frozen=True)
class CoverReport:
    counterexample: Optional[Configuration]
    samples: int

    @property
    def found(self) -> bool:
        return self.counterexample is not None

    def __str__(self):
        if self.found:
            return f"counterexample {[list(p) for p in self.counterexample]}"
        return f"none-found after {self.samples} samples"


def weiss_cover_falsify(V: OpenRegion, family: Sequence[OpenRegion], max_cardinality: int,
                        samples: int = 10_000, seed: int = 0) -> CoverReport:
    """Search for a finite ``S ⊂ V``, ``|S| <= n``, contained in no member of
    ``family``.

    A falsifier only: finding nothing is not a proof that ``family`` is a
    Weiss cover.  Every returned counterexample has been re-checked exactly.
    """
    for U in family:
        if U.dim != V.dim:
            raise ValueError("family member of the wrong dimension")
        if not V.contains_region(U):
            raise ValueError(f"family member {U} is not contained in V")
    if max_cardinality < 1:
        raise ValueError("max_cardinality must be at least 1")
    rng = np.random.default_rng(seed)
    for k in range(1, samples + 1):
        size = int(rng.integers(1, max_cardinality + 1))
        S = Configuration([V.sample(rng) for _ in range(size)])
        if not any(minimal_open_membership(S, U) for U in family):
            assert all(V.contains(s) for s in S)
            return CoverReport(S, k)
    return CoverReport(None, samples)


def exists_map(S: Configuration, labeling: ComponentLabeling) -> frozenset:
    """The labels of the regions that ``S`` meets."""
    hit = set()
    for s in S:
        label = labeling.label_of(s)
        if label is None:
            raise ValueError(f"point {s} lies outside every labelled region")
        hit.add(label)
    return frozenset(hit)


@dataclass(frozen=True)
class SequenceReport:
    cardinality_bounded: bool
    max_cardinality: int
    metric_cauchy_estimate: float
    cauchy_like: bool

    @property
    def metric_convergent_colimit_divergent(self) -> bool:
        return self.cauchy_like and not self.cardinality_bounded

    @property
    def verdict(self) -> str:
        if self.metric_convergent_colimit_divergent:
            return "metric-convergent, colimit-divergent"
        if self.cauchy_like:
            return "metric-convergent"
        return "not Cauchy-like"


def classify_sequence(seq: Sequence[Configuration], norm: PNorm = PNorm(),
                      ratio: float = 0.25) -> SequenceReport:
    """Heuristic diagnostics for a finite sample of a sequence.

    Cardinalities count as bounded when the second half never exceeds the
    largest cardinality of the first half.  The Cauchy estimate is
    ``sup_{m, n >= k} D(S_m, S_n)`` with ``k = ceil(len / 2)``; the sample is
    Cauchy-like when that tail supremum is zero or at most ``ratio`` times
    the supremum over the whole sample.
    """
    if not seq:
        raise ValueError("empty sequence")
    n = len(seq)
    k = math.ceil(n / 2)
    sizes = [len(S) for S in seq]
    head_max = max(sizes[:k]) if k else 0
    bounded = max(sizes[k:], default=0) <= head_max
    tail = seq[k - 1:] if n > 1 else seq
    tail_sup = max((hausdorff(a, b, norm) for i, a in enumerate(tail) for b in tail[i + 1:]),
                   default=0.0)
    full_sup = max((hausdorff(a, b, norm) for i, a in enumerate(seq) for b in seq[i + 1:]),
                   default=0.0)
    cauchy = tail_sup == 0 or (math.isfinite(tail_sup) and tail_sup <= ratio * full_sup)
    return SequenceReport(bounded, max(sizes), tail_sup, cauchy)


def shrinking_cluster_sequence(x: float = 0.0, length: int = 40) -> list[Configuration]:
    """``S_n = {x} ∪ {n equally spaced points within 1/n of x}`` on the line."""
    seq = []
    for n in range(1, length + 1):
        pts = [x] + [x + (i + 1) / (n * n) for i in range(n)]
        seq.append(Configuration([[p] for p in pts]))
    return seq
