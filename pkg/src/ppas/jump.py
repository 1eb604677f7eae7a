"""Jumping loci of ``h^0`` over the dual torus.

A twist ``c`` (raw coordinate) enters ``|2l|`` as ``z -> Theta_s(z + c/2)``
and ``|l|`` as ``z -> theta(z + c)``.  The jump locus is where the evaluation
matrix drops below its generic rank.  It is located through the relative
singular value

    s(c) = sigma_r(M) / sigma_1(M),   r = generic rank  (r >= 2)
    s(c) = sigma_1(M) / sqrt(rows)                     (r == 1)

on row-normalised matrices, by a coarse grid over the four lattice
coordinates followed by Gauss-Newton on a null-vector formulation of the
rank drop.  Reported coordinates go through a :class:`Calibration`.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linsys import (
    ConditionSystem,
    CoincidentLines,
    TwistParam,
    h0,
    line_intersection,
    numerical_rank,
)
from .newton import NonConvergent, gauss_newton
from .schemes import ZeroScheme
from .surface import SurfaceConfig, TorusPoint, embed, torus_distance
from .theta import ZERO_CHAR, theta_tensors

log = logging.getLogger(__name__)

ACCEPT_S = 1e-8
SEED_S = 0.1
PROBE_RADIUS = 1e-3
PROBE_MOVE = 1e-4
TRACE_STEP = 0.03
MIN_SAMPLES = 32
WITNESS_TOL = 1e-6
CLUSTER_RADIUS = 1e-3


class CalibrationInconsistent(RuntimeError):
    pass


class BudgetExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class Calibration:
    """Affine map ``dual = sign * c + offset`` from raw twists to dual points."""

    sign: int = 1
    offset: TorusPoint = TorusPoint.zero()

    def to_dual(self, c: TorusPoint) -> TorusPoint:
        return c * self.sign + self.offset

    def from_dual(self, x: TorusPoint) -> TorusPoint:
        return (x - self.offset) * self.sign

    def to_json(self) -> dict:
        return {"sign": self.sign, "offset": self.offset.to_json()}


IDENTITY = Calibration()


@dataclass
class JumpLocus:
    kind: str  # empty | finite | curve | curve_plus_points
    points: list = field(default_factory=list)  # (TorusPoint, height)
    curve_samples: list = field(default_factory=list)
    curve_witness: TorusPoint | None = None
    witnesses: list = field(default_factory=list)  # one entry (or None) per traced component
    generic_h0: int = 0

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "generic_h0": self.generic_h0,
            "points": [{"point": p.to_json(), "height": h} for p, h in self.points],
            "curve_samples": [p.to_json() for p in self.curve_samples],
            "curve_witness": None if self.curve_witness is None else self.curve_witness.to_json(),
            "witnesses": [None if w is None else w.to_json() for w in self.witnesses],
        }


# ---------------------------------------------------------------------------
# the relative singular value


class JumpProblem:
    """Evaluation matrices of ``X`` as a function of the raw twist ``c`` in C^2."""

    def __init__(self, X: ZeroScheme, level: int, cfg: SurfaceConfig, truncation: int | None = None):
        self.X = X
        self.level = level
        self.cfg = cfg
        self.system = ConditionSystem(X, cfg.tau, truncation or cfg.truncation_radius, level)
        self.k = self.system.k
        self.ncols = self.system.nbasis
        rng = cfg.rng(201, level)
        ranks = []
        for v in rng.random((8, 4)):
            c = embed(TorusPoint.from_vector(v), cfg.tau)
            ranks.append(numerical_rank(self.normalized(c[None])[0], cfg.rank_tol)[0])
        self.generic_rank = max(ranks)
        self.generic_h0 = self.ncols - self.generic_rank

    def normalized(self, cs) -> np.ndarray:
        return self.system.normalized(self.system.shift(np.asarray(cs, dtype=complex)))

    def s_values(self, cs) -> np.ndarray:
        mats = self.normalized(cs)
        sv = np.linalg.svd(mats, compute_uv=False)
        r = self.generic_rank
        if r == 0:
            return np.ones(len(mats))
        if r == 1:
            return sv[:, 0] / np.sqrt(self.k)
        return sv[:, r - 1] / sv[:, 0]

    def s(self, c) -> float:
        return float(self.s_values(np.asarray(c)[None])[0])

    # null-vector system ------------------------------------------------------

    @property
    def transposed(self) -> bool:
        return self.k < self.ncols

    def _n_matrices(self, c, weights):
        M, dM, _ = self.system.evaluate(self.system.shift(c), deriv=True)
        half = 0.5 if self.level == 2 else 1.0
        M = weights[:, None] * M
        dM = half * weights[None, :, None] * dM
        if self.transposed:
            return M.T, np.transpose(dM, (0, 2, 1))
        return M, dM

    def start(self, c):
        """Initial unknown vector and residual closure at a seed ``c``."""
        c = np.asarray(c, dtype=complex)
        _, _, w = self.system.evaluate(self.system.shift(c))
        N, _ = self._n_matrices(c, w)
        target = self.generic_rank - 1
        m = N.shape[1] - target
        _, _, vh = np.linalg.svd(N)
        G = vh[-m:].conj().T  # ncols x m
        x0 = np.concatenate([c, G.reshape(-1)])
        return x0, self._residual(w, G, N.shape, m)

    def _residual(self, w, G, shape, m):
        rows, cols = shape
        eye = np.eye(m)
        Gh = G.conj().T

        def fun(x):
            c = x[:2]
            B = x[2:].reshape(cols, m)
            N, dN = self._n_matrices(c, w)
            F = np.concatenate([(N @ B).reshape(-1), (Gh @ B - eye).reshape(-1)])
            J = np.zeros((rows * m + m * m, 2 + cols * m), dtype=complex)
            for a in range(2):
                J[: rows * m, a] = (dN[a] @ B).reshape(-1)
            J[: rows * m, 2:] = np.kron(N, np.eye(m))
            J[rows * m:, 2:] = np.kron(Gh, eye)
            return F, J

        return fun

    def refine(self, c0, max_iter: int = 40):
        """Gauss-Newton from ``c0``; returns (c, x, fun) or None."""
        if self.generic_rank == 0:
            return None
        x0, fun = self.start(c0)
        res = gauss_newton(fun, x0, tol=1e-13, max_iter=max_iter)
        c = res.x[:2]
        if not np.all(np.isfinite(c)) or self.s(c) >= ACCEPT_S:
            return None
        return c, res.x, fun


# ---------------------------------------------------------------------------
# search


def _grid_points(cfg: SurfaceConfig, res: int) -> tuple[np.ndarray, np.ndarray]:
    g = np.arange(res) / res
    lat = np.array(list(itertools.product(g, repeat=4)))
    cs = lat[:, :2] + lat[:, 2:] @ cfg.tau.matrix.T
    return lat, cs


def grid_seeds(problem: JumpProblem, res: int = 12, best: int = 16, max_seeds: int = 64) -> list[np.ndarray]:
    """Periodic local minima of ``s`` on the grid plus the overall best points."""
    _, cs = _grid_points(problem.cfg, res)
    s = np.empty(len(cs))
    for lo in range(0, len(cs), 4096):
        s[lo: lo + 4096] = problem.s_values(cs[lo: lo + 4096])
    grid = np.log(np.maximum(s, 1e-300)).reshape((res,) * 4)
    is_min = np.ones_like(grid, dtype=bool)
    for ax in range(4):
        for d in (-1, 1):
            is_min &= grid <= np.roll(grid, d, axis=ax)
    flat = is_min.reshape(-1)
    idx = [i for i in np.argsort(s) if flat[i] and s[i] < SEED_S]
    extra = [i for i in np.argsort(s)[:best] if i not in set(idx)]
    chosen = (idx + extra)[:max_seeds]
    return [cs[i] for i in chosen]


def _is_curve_point(problem: JumpProblem, c: np.ndarray, x: np.ndarray, fun, rng: np.random.Generator) -> bool:
    """Local dimension of the rank-drop set at a solved point.

    More unknowns than equations forces a curve; a Jacobian of full column
    rank forces an isolated point.  Otherwise antipodal probes decide: on a
    curve, Newton from a nearby point lands on the curve away from ``c``.
    ``fun`` must be the residual that ``x`` solves (its weights and
    normalisation are fixed at the seed).
    """
    _, J = fun(x)
    if J.shape[0] < J.shape[1]:
        return True
    sv = np.linalg.svd(J, compute_uv=False)
    if sv[-1] > 1e-6 * sv[0]:
        return False
    for _ in range(3):
        d = rng.normal(size=2) + 1j * rng.normal(size=2)
        d /= np.linalg.norm(d)
        for sgn in (1, -1):
            out = problem.refine(c + sgn * PROBE_RADIUS * d)
            if out is not None and np.linalg.norm(out[0] - c) > PROBE_MOVE:
                return True
    return False


def theta_residual(z: np.ndarray, cfg: SurfaceConfig) -> float:
    """``|theta(z)|`` on the reduced scale (split-off log factor removed)."""
    _, (t0,) = theta_tensors(ZERO_CHAR, np.asarray(z, dtype=complex), cfg.tau, 0, cfg.truncation_radius)
    return float(abs(t0))


def _trace(problem: JumpProblem, x: np.ndarray, n_samples: int, step: float, max_steps: int) -> list[np.ndarray]:
    """Predictor-corrector along the complex curve through ``x`` (a solved unknown vector)."""
    samples = [x[:2].copy()]
    prev = None
    h = step
    steps = 0
    while len(samples) < n_samples:
        steps += 1
        if steps > max_steps:
            raise BudgetExhausted(f"curve tracing stalled after {len(samples)} samples")
        x0, fun = problem.start(x[:2])
        # keep the current null vector rather than the seed's
        x_cur = np.concatenate([x[:2], x0[2:]])
        _, J = fun(x_cur)
        v = np.linalg.svd(J)[2][-1].conj()
        nc = np.linalg.norm(v[:2])
        if nc < 1e-12:
            raise BudgetExhausted("curve tangent degenerate")
        v = v / nc
        if prev is not None:
            ov = np.vdot(prev, v[:2])
            if abs(ov) > 0:
                v = v * np.conj(ov) / abs(ov)
        res = gauss_newton(fun, x_cur + h * v, tol=1e-13, max_iter=30)
        c = res.x[:2]
        if np.all(np.isfinite(c)) and problem.s(c) < ACCEPT_S and np.linalg.norm(c - x[:2]) > 0.2 * h:
            prev = v[:2]
            x = res.x
            samples.append(c.copy())
            h = min(step, 1.5 * h)
        else:
            h *= 0.5
            if h < step / 64:
                raise BudgetExhausted("curve tracing step collapsed")
    return samples


def _find_witness(samples_dual: list[TorusPoint], cfg: SurfaceConfig) -> TorusPoint | None:
    a = samples_dual[0]
    b = max(samples_dual, key=lambda q: torus_distance(a, q, cfg.tau))
    try:
        cands = line_intersection(a, b, cfg)
    except (CoincidentLines, NonConvergent):
        return None
    for sol in cands:
        beta = embed(sol.point, cfg.tau)
        if all(theta_residual(embed(q, cfg.tau) - beta, cfg) < WITNESS_TOL for q in samples_dual):
            return sol.point
    return None


def _on_witness(pt: TorusPoint, beta: TorusPoint, cfg: SurfaceConfig) -> bool:
    return theta_residual(embed(pt, cfg.tau) - embed(beta, cfg.tau), cfg) < 1e-6


def jump_locus(
    X: ZeroScheme,
    i: int,
    cfg: SurfaceConfig,
    cal: Calibration = IDENTITY,
    mode: str = "discover",
    candidates: Sequence[TorusPoint] = (),
    grid_res: int = 12,
    n_samples: int = MIN_SAMPLES,
    max_components: int = 4,
) -> JumpLocus:
    """The jump locus of ``h^0(L^i P_c I_X)`` in calibrated dual coordinates."""
    if i not in (1, 2):
        raise ValueError("i must be 1 or 2")
    if mode not in ("discover", "confirm"):
        raise ValueError("mode must be 'discover' or 'confirm'")
    problem = JumpProblem(X, i, cfg)
    if mode == "discover":
        seeds = grid_seeds(problem, grid_res)
    else:
        seeds = [embed(cal.from_dual(p), cfg.tau) for p in candidates]
    rng = cfg.rng(202)

    # refined rank drops, clustered: degenerate roots converge only linearly and
    # leave several near-copies, so keep the best of each cluster
    hits: list[tuple[np.ndarray, np.ndarray, object, float]] = []
    for c0 in seeds:
        out = problem.refine(c0)
        if out is None:
            continue
        c, x, fun = out
        s = problem.s(c)
        pt = TorusPoint.from_complex(c, cfg.tau)
        near = [k for k, h in enumerate(hits) if torus_distance(pt, TorusPoint.from_complex(h[0], cfg.tau), cfg.tau) < CLUSTER_RADIUS]
        if near:
            k = near[0]
            if s < hits[k][3]:
                hits[k] = (c, x, fun, s)
            continue
        hits.append((c, x, fun, s))

    points: list[tuple[TorusPoint, int]] = []
    components: list[tuple[TorusPoint | None, list[TorusPoint]]] = []
    for c, x, fun, _ in hits:
        dual = cal.to_dual(TorusPoint.from_complex(c, cfg.tau))
        if any(w is not None and _on_witness(dual, w, cfg) for w, _ in components):
            continue
        if not _is_curve_point(problem, c, x, fun, rng):
            height = h0(X, TwistParam(TorusPoint.from_complex(c, cfg.tau)), cfg, i) - problem.generic_h0
            if height >= 1 and not any(torus_distance(dual, p, cfg.tau) < cfg.point_tol for p, _ in points):
                points.append((dual, height))
            continue
        if any(w is None for w, _ in components):
            continue  # a component without a theta witness absorbs the rest
        if len(components) >= max_components:
            raise BudgetExhausted("too many curve components")
        raw = _trace(problem, x, n_samples, TRACE_STEP, max_steps=20 * n_samples)
        samples = []
        big = SurfaceConfig(cfg.tau, 2 * cfg.truncation_radius, cfg.point_tol, cfg.rank_tol, cfg.seed)
        for cs in raw:
            tp = TorusPoint.from_complex(cs, cfg.tau)
            if h0(X, TwistParam(tp), big, i) <= problem.generic_h0:
                raise BudgetExhausted("traced sample failed rank-drop confirmation")
            samples.append(cal.to_dual(tp))
        components.append((_find_witness(samples, cfg), samples))

    # isolated points that happen to sit on a traced theta translate are curve points
    points = [(p, h) for p, h in points if not any(w is not None and _on_witness(p, w, cfg) for w, _ in components)]
    points.sort(key=lambda ph: ph[0].raw)
    curve_samples = [q for _, ss in components for q in ss]
    witnesses = [w for w, _ in components]
    if components:
        kind = "curve_plus_points" if points else "curve"
    else:
        kind = "finite" if points else "empty"
    return JumpLocus(
        kind=kind,
        points=points,
        curve_samples=curve_samples,
        curve_witness=next((w for w in witnesses if w is not None), None),
        witnesses=witnesses,
        generic_h0=problem.generic_h0,
    )


def smin(X: ZeroScheme, dual_point: TorusPoint, cfg: SurfaceConfig, cal: Calibration = IDENTITY, i: int = 2) -> float:
    """Relative smallest singular value ``s`` at a dual point."""
    problem = JumpProblem(X, i, cfg)
    return problem.s(embed(cal.from_dual(dual_point), cfg.tau))


def grid_slice(
    X: ZeroScheme,
    cfg: SurfaceConfig,
    cal: Calibration = IDENTITY,
    i: int = 2,
    c3: float = 0.0,
    c4: float = 0.0,
    res: int = 64,
) -> np.ndarray:
    """``log10 s`` over dual points with lattice coordinates ``(c1, c2, c3, c4)``.

    Returns an array of rows ``(c1, c2, log10_s)`` with ``c1, c2`` on a
    ``res x res`` grid of [0, 1)^2.
    """
    if not (1 <= res <= 512):
        raise ValueError("resolution must lie in [1, 512]")
    problem = JumpProblem(X, i, cfg)
    g = np.arange(res) / res
    rows, cs = [], []
    for a, b in itertools.product(g, g):
        raw = cal.from_dual(TorusPoint.from_vector([a, b, c3, c4]))
        rows.append((a, b))
        cs.append(embed(raw, cfg.tau))
    cs = np.array(cs)
    s = np.concatenate([problem.s_values(cs[lo: lo + 4096]) for lo in range(0, len(cs), 4096)])
    return np.column_stack([np.array(rows), np.log10(np.maximum(s, 1e-300))])


# ---------------------------------------------------------------------------
# calibration


def calibrate(cfg: SurfaceConfig, n_samples: int = 3) -> Calibration:
    """Fix the raw-to-dual map from the single jump of random reduced pairs.

    For a reduced pair ``{p, q}`` the unique jump must be reported at
    ``-(p + q)``.  Both signs are tried; the offset must agree across all
    samples.
    """
    rng = cfg.rng(203)
    pairs = []
    for _ in range(n_samples):
        p, q = TorusPoint.random(rng), TorusPoint.random(rng)
        loc = jump_locus(ZeroScheme.reduced([p, q]), 2, cfg, IDENTITY)
        if len(loc.points) != 1 or loc.curve_samples:
            raise CalibrationInconsistent(f"expected one jump for a reduced pair, found {loc.kind} {loc.points}")
        pairs.append((loc.points[0][0], -(p + q)))
    for sign in (1, -1):
        offsets = [target - c * sign for c, target in pairs]
        if all(torus_distance(o, offsets[0], cfg.tau) < max(cfg.point_tol, 1e-5) for o in offsets):
            off = offsets[0]
            # snap an essentially-zero offset to exact zero
            if torus_distance(off, TorusPoint.zero(), cfg.tau) < max(cfg.point_tol, 1e-5):
                off = TorusPoint.zero()
            return Calibration(sign, off)
    raise CalibrationInconsistent("jump positions of the calibration pairs disagree")
