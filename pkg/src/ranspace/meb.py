"""Restricted minimal enclosing balls under rotund p-norms.

The restricted ball of a finite ``S`` is the smallest ball containing ``S``
whose center lies in ``Conv(S)``.  For ``1 < p < inf`` it exists and is
unique; ``solve_restricted_meb`` computes it by minimizing
``lam -> max_s ||P lam - s||_p`` over the probability simplex (projected
subgradient descent from several starts), then polishing each start with
SQP on the epigraph problem written in coordinates of the affine hull.

Two independent oracles are provided: Welzl's algorithm for ``p = 2`` and
exhaustive search over a barycentric grid for any ``p``.
"""

from __future__ import annotations

import logging
import math
import statistics
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize, nnls
from scipy.spatial import ConvexHull, QhullError

from .config import Configuration, PNorm, diameter

log = logging.getLogger(__name__)


class NonRotundNormError(ValueError):
    """The norm's unit ball is not strictly convex, so the ball may not be unique."""


@dataclass(frozen=True)
class SolverOptions:
    max_iterations: int = 100_000
    tolerance: float = 1e-10
    restarts: int = 5
    seed: int = 0
    # subgradient descent only supplies starting points for the SQP polish
    warm_start_iterations: int = 300
    window: int = 100
    polish_iterations: int = 500

    def __post_init__(self):
        for name in ("max_iterations", "restarts", "warm_start_iterations",
                     "window", "polish_iterations"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")


@dataclass(frozen=True)
class EnclosingBall:
    center: tuple[float, ...]
    radius: float
    norm: PNorm
    weights: np.ndarray = field(repr=False, compare=False, default=None)
    residual: float = 0.0
    iterations: int = 0
    restarts_agree: bool = True
    restart_spread: float = 0.0

    def to_dict(self) -> dict:
        return {"center": list(self.center), "radius": self.radius, "p": self.norm.p,
                "iterations": self.iterations, "restarts_agree": self.restarts_agree}


def _require_points(S: Configuration) -> np.ndarray:
    if S.is_empty:
        raise ValueError("the enclosing ball of the empty configuration is undefined")
    return S.array


def _require_rotund(norm: PNorm) -> None:
    if not norm.rotund:
        raise NonRotundNormError(
            f"p = {norm} gives a unit ball that is not strictly convex; "
            "the restricted minimal enclosing ball need not be unique (need 1 < p < inf)")


def objective(v, S: Configuration, norm: PNorm = PNorm()) -> float:
    """``max_{s in S} ||v - s||_p``."""
    X = _require_points(S)
    v = np.asarray(v, dtype=float)
    if v.shape != (X.shape[1],):
        raise ValueError(f"center of shape {v.shape} for points of dim {X.shape[1]}")
    return float(norm.norms(v - X).max())


def project_simplex(y) -> np.ndarray:
    """Euclidean projection onto ``{x >= 0, sum x = 1}`` (sort and threshold)."""
    y = np.asarray(y, dtype=float)
    u = np.sort(y)[::-1]
    css = np.cumsum(u) - 1.0
    ind = np.arange(1, len(y) + 1)
    rho = np.nonzero(u - css / ind > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(y - theta, 0.0)


def barycentric_weights(center, X: np.ndarray) -> tuple[np.ndarray, float]:
    """Nonnegative weights ``w`` with ``sum w = 1`` best reproducing ``center``
    from the rows of ``X``, and the reconstruction residual."""
    X = np.asarray(X, dtype=float)
    c = np.asarray(center, dtype=float)
    shift = X.mean(axis=0)
    scale = max(float(np.abs(X - shift).max()), 1e-300)
    A = np.vstack([((X - shift) / scale).T, np.ones(len(X))])
    b = np.concatenate([(c - shift) / scale, [1.0]])
    w, _ = nnls(A, b)
    if w.sum() > 0:
        w = w / w.sum()
    resid = float(np.abs(A @ w - b).max()) * max(scale, 1.0)
    return w, resid


def _norm_gradient(x: np.ndarray, p: float) -> np.ndarray:
    """Gradient of ``||x||_p`` at ``x != 0``."""
    a = np.abs(x)
    m = a.max()
    if m == 0:
        return np.zeros_like(x)
    r = a / m
    nrm = np.sum(r ** p) ** (1.0 / p)
    return np.sign(x) * (r / nrm) ** (p - 1.0)


class _Problem:
    """Normalized data shared by all starts of one solve."""

    def __init__(self, X: np.ndarray, p: float):
        self.p = p
        self.shift = X.mean(axis=0)
        self.scale = float(np.abs(X - self.shift).max())
        self.X = (X - self.shift) / self.scale
        self.diam = float(PNorm(p).norms(self.X[:, None, :] - self.X[None, :, :]).max())
        # orthonormal basis of the affine hull
        origin = self.X[0]
        Y = self.X - origin
        _, sv, vt = np.linalg.svd(Y, full_matrices=False)
        rank = int(np.sum(sv > 1e-10 * max(sv.max(initial=0.0), 1.0)))
        self.origin = origin
        self.basis = vt[:rank].T
        self.U = Y @ self.basis
        self._hull(rank)

    def _hull(self, rank: int) -> None:
        if rank == 0:
            self.A = np.zeros((0, 0))
            self.b = np.zeros(0)
        elif rank == 1:
            u = self.U[:, 0]
            self.A = np.array([[1.0], [-1.0]])
            self.b = np.array([-u.max(), u.min()])
        else:
            try:
                eq = ConvexHull(self.U).equations
            except QhullError:
                # numerically flat: drop the weakest direction
                self.basis = self.basis[:, :rank - 1]
                self.U = (self.X - self.origin) @ self.basis
                return self._hull(rank - 1)
            self.A = eq[:, :-1]
            self.b = eq[:, -1]

    def center(self, u: np.ndarray) -> np.ndarray:
        return self.origin + self.basis @ u

    def reduce(self, v: np.ndarray) -> np.ndarray:
        return self.basis.T @ (v - self.origin)

    def powered(self, v: np.ndarray) -> np.ndarray:
        return np.sum(np.abs(v - self.X) ** self.p, axis=1)

    def to_original(self, v: np.ndarray) -> np.ndarray:
        return self.shift + self.scale * v


def _subgradient(prob: _Problem, lam: np.ndarray, opts: SolverOptions) -> tuple[np.ndarray, int]:
    X, p = prob.X, prob.p
    norm = PNorm(p)
    c = prob.diam
    best_lam, best = lam, math.inf
    checkpoint = math.inf
    budget = min(opts.max_iterations, opts.warm_start_iterations)
    k = 0
    for k in range(1, budget + 1):
        v = X.T @ lam
        dists = norm.norms(v - X)
        a = int(np.argmax(dists))
        if dists[a] < best:
            best, best_lam = float(dists[a]), lam
        g = X @ _norm_gradient(v - X[a], p)
        gn = np.linalg.norm(g)
        if gn == 0:
            break
        lam = project_simplex(lam - (c / math.sqrt(k)) * g / gn)
        if k % opts.window == 0:
            if checkpoint - best < opts.tolerance:
                break
            checkpoint = best
    return best_lam, k


def _polish(prob: _Problem, v0: np.ndarray, opts: SolverOptions) -> tuple[np.ndarray, int]:
    k = prob.basis.shape[1]
    if k == 0:
        return prob.origin.copy(), 0
    p = prob.p
    B = prob.basis

    def cons_val(x):
        v = prob.center(x[:k])
        return np.concatenate([x[k] - prob.powered(v), -(prob.A @ x[:k] + prob.b)])

    def cons_jac(x):
        v = prob.center(x[:k])
        diff = v - prob.X
        dg = p * np.sign(diff) * np.abs(diff) ** (p - 1.0)
        top = np.hstack([-(dg @ B), np.ones((len(prob.X), 1))])
        bottom = np.hstack([-prob.A, np.zeros((len(prob.A), 1))])
        return np.vstack([top, bottom])

    u0 = prob.reduce(v0)
    x0 = np.concatenate([u0, [prob.powered(prob.center(u0)).max()]])
    res = minimize(lambda x: x[k], x0, jac=lambda x: np.eye(k + 1)[k], method="SLSQP",
                   constraints=[{"type": "ineq", "fun": cons_val, "jac": cons_jac}],
                   options={"maxiter": opts.polish_iterations, "ftol": 1e-16})
    u = res.x[:k]
    # SLSQP may end marginally outside the hull; pull back along the facets
    viol = prob.A @ u + prob.b
    if viol.size and viol.max() > 0:
        w, _ = barycentric_weights(prob.center(u), prob.X)
        u = prob.reduce(prob.X.T @ w)
    refined = _kkt_refine(prob, u)
    if refined is not None:
        u = refined
    return prob.center(u), int(res.nit)


def _kkt_refine(prob: _Problem, u: np.ndarray, max_steps: int = 30) -> Optional[np.ndarray]:
    """Newton's method on the optimality system of the active constraints.

    The epigraph objective only determines the center to about the square
    root of machine precision; solving the stationarity equations recovers
    full precision.  Returns None when the active set guess fails to produce
    a certified optimum.
    """
    p, B, k = prob.p, prob.basis, prob.basis.shape[1]
    g = prob.powered(prob.center(u))
    T = g.max()
    I = np.nonzero(g >= T * (1 - 1e-6))[0]
    J = np.nonzero(prob.A @ u + prob.b >= -1e-7)[0]
    nI, nJ = len(I), len(J)
    XI, AJ = prob.X[I], prob.A[J]
    # initial multipliers: least squares on stationarity
    G = _grad_powered(prob.center(u), XI, p) @ B
    M = np.vstack([np.hstack([G.T, AJ.T]), np.concatenate([np.ones(nI), np.zeros(nJ)])])
    rhs = np.concatenate([np.zeros(k), [1.0]])
    mult = np.linalg.lstsq(M, rhs, rcond=None)[0]
    x = np.concatenate([u, [T], mult])
    if not np.all(np.isfinite(mult)):
        return None
    for _ in range(max_steps):
        F, Jac = _kkt_system(prob, x, I, J)
        # curvature blows up where a coordinate of v - s vanishes and p < 2
        if not (np.all(np.isfinite(F)) and np.all(np.isfinite(Jac))):
            return None
        step = np.linalg.lstsq(Jac, -F, rcond=None)[0]
        x = x + step
        if np.abs(step).max() < 1e-15 * (1 + np.abs(x).max()):
            break
    F, _ = _kkt_system(prob, x, I, J)
    u_new, T_new = x[:k], x[k]
    mu, nu = x[k + 1:k + 1 + nI], x[k + 1 + nI:]
    if not np.all(np.isfinite(x)) or np.abs(F).max() > 1e-11:
        return None
    if mu.size and mu.min() < -1e-9 or nu.size and nu.min() < -1e-9:
        return None
    g_new = prob.powered(prob.center(u_new))
    if g_new.max() > T_new * (1 + 1e-12) + 1e-15:
        return None
    if prob.A.size and (prob.A @ u_new + prob.b).max() > 1e-12:
        return None
    if g_new.max() > T * (1 + 1e-9):
        return None
    return u_new


def _grad_powered(v: np.ndarray, X: np.ndarray, p: float) -> np.ndarray:
    diff = v - X
    return p * np.sign(diff) * np.abs(diff) ** (p - 1.0)


def _kkt_system(prob: _Problem, x: np.ndarray, I: np.ndarray, J: np.ndarray):
    p, B, k = prob.p, prob.basis, prob.basis.shape[1]
    nI, nJ = len(I), len(J)
    u, T = x[:k], x[k]
    mu, nu = x[k + 1:k + 1 + nI], x[k + 1 + nI:]
    v = prob.center(u)
    diff = v - prob.X[I]
    G = (p * np.sign(diff) * np.abs(diff) ** (p - 1.0)) @ B
    with np.errstate(divide="ignore"):
        curv = p * (p - 1.0) * np.abs(diff) ** (p - 2.0)
    AJ = prob.A[J]
    F = np.concatenate([G.T @ mu + AJ.T @ nu,
                        [mu.sum() - 1.0],
                        np.sum(np.abs(diff) ** p, axis=1) - T,
                        AJ @ u + prob.b[J]])
    n = k + 1 + nI + nJ
    Jac = np.zeros((n, n))
    Jac[:k, :k] = B.T @ ((curv * mu[:, None]).sum(axis=0)[:, None] * B)
    Jac[:k, k + 1:k + 1 + nI] = G.T
    Jac[:k, k + 1 + nI:] = AJ.T
    Jac[k, k + 1:k + 1 + nI] = 1.0
    Jac[k + 1:k + 1 + nI, :k] = G
    Jac[k + 1:k + 1 + nI, k] = -1.0
    Jac[k + 1 + nI:, :k] = AJ
    return F, Jac


def _starts(n: int, opts: SolverOptions) -> list[np.ndarray]:
    rng = np.random.default_rng(opts.seed)
    starts = [np.full(n, 1.0 / n)]
    vertices = rng.permutation(n)[:min(4, opts.restarts - 1)] if n > 1 else []
    for i in sorted(vertices):
        e = np.zeros(n)
        e[i] = 1.0
        starts.append(e)
    return starts[:opts.restarts]


def solve_restricted_meb(S: Configuration, norm: PNorm = PNorm(),
                         opts: Optional[SolverOptions] = None) -> EnclosingBall:
    """Restricted minimal enclosing ball of ``S`` under a rotund p-norm.

    Raises ``ValueError`` on an empty configuration and
    ``NonRotundNormError`` for ``p`` equal to 1 or infinity.
    """
    opts = opts or SolverOptions()
    X = _require_points(S)
    _require_rotund(norm)
    n = len(X)
    if n == 1:
        return EnclosingBall(S.points[0], 0.0, norm, np.ones(1))
    prob = _Problem(X, norm.p)
    results = []
    for lam0 in _starts(n, opts):
        lam, it_sg = _subgradient(prob, lam0, opts)
        v, it_sqp = _polish(prob, prob.X.T @ lam, opts)
        results.append((float(prob.powered(v).max()), v, it_sg + it_sqp))
    centers = np.array([prob.to_original(v) for _, v, _ in results])
    spread = float(np.max(norm.norms(centers[:, None, :] - centers[None, :, :])))
    best = min(range(len(results)), key=lambda i: results[i][0])
    center = centers[best]
    w, resid = barycentric_weights(center, X)
    if resid > 1e-12:
        center = w @ X
        w, resid = barycentric_weights(center, X)
    if spread > 1e-5:
        log.warning("restart centers disagree by %.3g", spread)
    return EnclosingBall(tuple(float(c) for c in center), objective(center, S, norm), norm,
                         w, resid, results[best][2], spread <= 1e-5, spread)


# ---------------------------------------------------------------- Welzl oracle

def _circumball(R: list[np.ndarray]) -> tuple[np.ndarray, float]:
    if len(R) == 1:
        return R[0], 0.0
    r0 = R[0]
    A = np.array([r - r0 for r in R[1:]])
    rhs = 0.5 * np.sum(A * A, axis=1)
    alpha = np.linalg.lstsq(A @ A.T, rhs, rcond=None)[0]
    c = r0 + A.T @ alpha
    return c, float(max(np.linalg.norm(r - c) for r in R))


def _welzl(P: list[np.ndarray], R: list[np.ndarray], d: int):
    if not P or len(R) == d + 1:
        return _circumball(R) if R else None
    p = P[-1]
    ball = _welzl(P[:-1], R, d)
    if ball is not None:
        c, r = ball
        if np.linalg.norm(p - c) <= r * (1 + 1e-12) + 1e-14:
            return ball
    return _welzl(P[:-1], R + [p], d)


def welzl_euclidean(S: Configuration, norm: PNorm = PNorm(2.0), seed: int = 0) -> EnclosingBall:
    """Exact Euclidean minimum enclosing ball by Welzl's recursion."""
    X = _require_points(S)
    if norm.p != 2.0:
        raise ValueError(f"Welzl's algorithm needs the Euclidean norm, got p = {norm}")
    shift = X.mean(axis=0)
    scale = max(float(np.abs(X - shift).max()), 1e-300)
    Y = (X - shift) / scale
    order = np.random.default_rng(seed).permutation(len(Y))
    c, _ = _welzl([Y[i] for i in order], [], Y.shape[1])
    center = shift + scale * c
    w, resid = barycentric_weights(center, X)
    return EnclosingBall(tuple(float(x) for x in center), objective(center, S, norm), norm,
                         w, resid)


# ----------------------------------------------------------------- grid oracle

@dataclass(frozen=True)
class GridResult:
    ball: EnclosingBall
    resolution: int
    grid_points: int
    mesh: float
    lower_bound: float


def grid_size(n: int, m: int) -> int:
    return math.comb(m + n - 1, n - 1)


def grid_oracle(S: Configuration, norm: PNorm = PNorm(), m: int = 60,
                max_points: int = 200_000_000) -> GridResult:
    """Best center among barycentric weights that are multiples of ``1/m``.

    The returned radius bounds the restricted radius from above.  ``mesh`` is
    the largest displacement of the center between adjacent grid weights
    (``diam(S) / m``) and ``lower_bound = radius - diam(S) * mesh``.
    """
    from ._grid import search_grid

    X = _require_points(S)
    if m <= 0:
        raise ValueError("grid resolution must be positive")
    n = len(X)
    size = grid_size(n, m)
    if size > max_points:
        raise ValueError(f"barycentric grid of {size} points exceeds the cap of {max_points}")
    diam = diameter(S, norm)
    if n == 1:
        ball = EnclosingBall(S.points[0], 0.0, norm, np.ones(1))
        return GridResult(ball, m, 1, 0.0, 0.0)
    shift = X.mean(axis=0)
    scale = float(np.abs(X - shift).max())
    counts = search_grid((X - shift) / scale, m, norm.p)
    w = counts / m
    center = w @ X
    ball = EnclosingBall(tuple(float(c) for c in center), objective(center, S, norm), norm,
                         w, barycentric_weights(center, X)[1])
    mesh = diam / m
    return GridResult(ball, m, size, mesh, ball.radius - diam * mesh)


# ------------------------------------------------------------ continuity probe

@dataclass(frozen=True)
class ProbeRow:
    delta: float
    radius_deviations: tuple[float, ...]
    center_deviations: tuple[float, ...]

    @property
    def median_radius_deviation(self) -> float:
        return statistics.median(self.radius_deviations)

    @property
    def median_center_deviation(self) -> float:
        return statistics.median(self.center_deviations)


@dataclass(frozen=True)
class ProbeReport:
    base: EnclosingBall
    rows: tuple[ProbeRow, ...]

    @property
    def monotone(self) -> bool:
        """Medians never increase as delta shrinks along the given sequence."""
        r = [row.median_radius_deviation for row in self.rows]
        c = [row.median_center_deviation for row in self.rows]
        return all(a >= b for a, b in zip(r, r[1:])) and all(a >= b for a, b in zip(c, c[1:]))


def random_in_ball(rng: np.random.Generator, d: int, radius: float, norm: PNorm) -> np.ndarray:
    """A random vector of p-norm at most ``radius``."""
    if radius == 0:
        return np.zeros(d)
    g = rng.standard_normal(d)
    while not np.any(g):
        g = rng.standard_normal(d)
    return g / norm(g) * radius * rng.uniform() ** (1.0 / d)


def continuity_probe(S: Configuration, norm: PNorm, deltas: Sequence[float], trials: int = 20,
                     seed: int = 0, opts: Optional[SolverOptions] = None) -> ProbeReport:
    """Perturb every point of ``S`` by at most ``delta`` and record how far
    the restricted center and radius move."""
    opts = opts or SolverOptions(restarts=1)
    base = solve_restricted_meb(S, norm, opts)
    rng = np.random.default_rng(seed)
    X = S.array
    rows = []
    for delta in deltas:
        if delta < 0:
            raise ValueError("perturbation sizes must be nonnegative")
        dr, dc = [], []
        for _ in range(trials):
            noise = np.array([random_in_ball(rng, X.shape[1], delta, norm) for _ in X])
            ball = solve_restricted_meb(Configuration(X + noise), norm, opts)
            dr.append(abs(ball.radius - base.radius))
            dc.append(norm(np.subtract(ball.center, base.center)))
        rows.append(ProbeRow(float(delta), tuple(dr), tuple(dc)))
    return ProbeReport(base, tuple(rows))
