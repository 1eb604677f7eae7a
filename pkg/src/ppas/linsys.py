"""Evaluation matrices, h^0 counts and incidence solvers for |l| and |2l|.

Twisted systems are realised by translation.  A twist ``c`` of ``|2l|`` has
sections ``z -> Theta_s(z + c/2)`` (``c/2`` taken on the stored
representative of ``c``; the 16 possible halves differ by 2-torsion and give
the same span).  A twist ``c`` of ``|l|`` has the single section
``z -> theta(z + c)``, and the "line" ``D_u`` is the zero set of
``z -> theta(z - u)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .newton import NonConvergent, gauss_newton, jacobian_condition
from .schemes import Condition, ZeroScheme, conditions
from .surface import SurfaceConfig, TorusPoint, embed, torus_distance, two_torsion
from .theta import ZERO_CHAR, basis_L2_tensors, theta_tensors

AMBIGUITY_FACTOR = 10.0
MULTIPLICITY_TOL = 1e-4
RESIDUAL_TOL = 1e-9  # on the residual norm, i.e. 1e-18 squared


class RankAmbiguous(RuntimeError):
    pass


class CoincidentLines(ValueError):
    pass


@dataclass(frozen=True)
class TwistParam:
    c: TorusPoint

    def shift(self, tau, level: int = 2) -> np.ndarray:
        z = embed(self.c, tau)
        return z / 2 if level == 2 else z


@dataclass(frozen=True)
class SectionL2:
    """``z -> sum_s lam[s] Theta_s(z + c/2)``, defined up to scale."""

    lam: tuple
    twist: TwistParam = TwistParam(TorusPoint.zero())

    def __post_init__(self):
        lam = tuple(complex(x) for x in np.asarray(self.lam, dtype=complex).reshape(4))
        if not any(lam):
            raise ValueError("section coefficients must not all vanish")
        object.__setattr__(self, "lam", lam)


@dataclass(frozen=True)
class SingularityReport:
    point: TorusPoint
    type: str  # node | tacnode | higher
    hessian_condition: float


class Solution(NamedTuple):
    point: TorusPoint
    multiplicity: int


# ---------------------------------------------------------------------------
# evaluation of condition functionals


def basis_tensors(level: int, zs, tau, order: int, truncation: int):
    """Tensors of the basis of H^0(L^level) with a leading basis axis."""
    if level == 2:
        return basis_L2_tensors(zs, tau, order, truncation)
    lf, tens = theta_tensors(ZERO_CHAR, zs, tau, order, truncation)
    return lf[None], [t[None] for t in tens]


class ConditionSystem:
    """The conditions of a scheme against the twisted basis of ``|level * l|``."""

    def __init__(self, X: ZeroScheme | Sequence[Condition], tau, truncation: int = 8, level: int = 2):
        conds = conditions(X) if isinstance(X, ZeroScheme) else list(X)
        if not conds:
            raise ValueError("empty scheme")
        self.tau = tau
        self.truncation = truncation
        self.level = level
        self.nbasis = 4 if level == 2 else 1
        pts, self.block_of = [], []
        for cond in conds:
            for b, p in enumerate(pts):
                if p[0] == cond.point:
                    break
            else:
                b = len(pts)
                pts.append((cond.point, embed(cond.point, tau)))
            self.block_of.append(b)
        self.functionals = [c.functional for c in conds]
        self.z = np.array([p[1] for p in pts]).reshape(-1, 2)
        self.order = max(f.order for f in self.functionals)
        self.k = len(conds)

    def shift(self, c: complex | np.ndarray) -> np.ndarray:
        c = np.asarray(c, dtype=complex)
        return c / 2 if self.level == 2 else c

    def evaluate(self, shift, deriv: bool = False):
        """Full matrix ``M[j, s]`` at one shift, with ``dM/dshift`` and row weights."""
        zs = self.z + np.asarray(shift, dtype=complex)[None, :]
        lf, tens = basis_tensors(self.level, zs, self.tau, self.order + int(deriv), self.truncation)
        M = np.empty((self.k, self.nbasis), dtype=complex)
        dM = np.empty((2, self.k, self.nbasis), dtype=complex) if deriv else None
        w = np.empty(self.k)
        for j, (f, b) in enumerate(zip(self.functionals, self.block_of)):
            tb = [t[:, b] for t in tens]
            e = np.exp(lf[:, b])
            M[j] = e * f.apply(tb)
            w[j] = np.exp(-lf[0, b].real)
            if deriv:
                for ax in range(2):
                    dM[ax, j] = e * f.derivative(ax).apply(tb)
        return M, dM, w

    def normalized(self, shifts) -> np.ndarray:
        """Rows rescaled by ``|exp(log_factor)|`` for a batch of shifts, shape (S, k, F)."""
        shifts = np.asarray(shifts, dtype=complex).reshape(-1, 2)
        zs = self.z[None, :, :] + shifts[:, None, :]
        lf, tens = basis_tensors(self.level, zs, self.tau, self.order, self.truncation)
        out = np.empty((shifts.shape[0], self.k, self.nbasis), dtype=complex)
        for j, (f, b) in enumerate(zip(self.functionals, self.block_of)):
            tb = [t[:, :, b] for t in tens]
            e = np.exp(lf[:, :, b] - lf[0:1, :, b].real)
            out[:, j, :] = (e * f.apply(tb)).T
        return out


def singular_values(Mt: np.ndarray) -> np.ndarray:
    return np.linalg.svd(Mt, compute_uv=False)


def rank_threshold(sv: np.ndarray, rank_tol: float) -> np.ndarray:
    # rows are on the reduced scale, so 1 is the natural absolute floor
    top = sv[..., 0] if sv.shape[-1] else np.zeros(sv.shape[:-1])
    return rank_tol * np.maximum(top, 1.0)


def numerical_rank(Mt: np.ndarray, rank_tol: float) -> tuple[int, bool]:
    """Rank and an ambiguity flag (a singular value within 10x of the threshold)."""
    sv = singular_values(Mt)
    thr = rank_threshold(sv, rank_tol)
    rank = int(np.sum(sv > thr))
    ambiguous = bool(np.any((sv > thr / AMBIGUITY_FACTOR) & (sv < thr * AMBIGUITY_FACTOR)))
    return rank, ambiguous


def eval_matrix(X: ZeroScheme, twist: TwistParam, cfg: SurfaceConfig, level: int = 2) -> np.ndarray:
    """Condition functionals (rows) applied to the twisted basis (columns)."""
    if X.length == 0:
        raise ValueError("empty scheme")
    system = ConditionSystem(X, cfg.tau, cfg.truncation_radius, level)
    M, _, _ = system.evaluate(twist.shift(cfg.tau, level))
    return M


def h0(X: ZeroScheme, twist: TwistParam, cfg: SurfaceConfig, level: int = 2) -> int:
    """Dimension of the space of twisted sections vanishing on ``X``."""
    if X.length > 8:
        raise ValueError("|X| <= 8 required")
    for trunc in (cfg.truncation_radius, 2 * cfg.truncation_radius):
        system = ConditionSystem(X, cfg.tau, trunc, level)
        Mt = system.normalized(twist.shift(cfg.tau, level))[0]
        rank, ambiguous = numerical_rank(Mt, cfg.rank_tol)
        if not ambiguous:
            return system.nbasis - rank
    raise RankAmbiguous(f"singular values of the evaluation matrix straddle the threshold for {X!r}")


# ---------------------------------------------------------------------------
# multistart root finding in C^2


def _theta_jet(zs, tau, order, truncation):
    lf, tens = theta_tensors(ZERO_CHAR, np.asarray(zs, dtype=complex), tau, order, truncation)
    return lf, tens


def _random_starts(cfg: SurfaceConfig, n: int, stream: int) -> list[np.ndarray]:
    rng = cfg.rng(stream)
    return [embed(TorusPoint.from_vector(v), cfg.tau) for v in rng.random((n, 4))]


def solve_multistart(
    make_fun: Callable[[np.ndarray], Callable],
    starts: Sequence[np.ndarray],
    cfg: SurfaceConfig,
    max_iter: int = 60,
) -> list[Solution]:
    """Run Gauss-Newton from every start, polish, deduplicate on the torus."""
    found: list[tuple[TorusPoint, int]] = []
    ambiguous = []
    for x0 in starts:
        fun = make_fun(x0)
        res = gauss_newton(fun, x0, tol=RESIDUAL_TOL, max_iter=max_iter)
        if not res.converged:
            if res.residual < 1e-5:
                ambiguous.append(res.x)
            continue
        pol = gauss_newton(fun, res.x, tol=1e-16, max_iter=60)
        x = pol.x if pol.residual <= res.residual else res.x
        _, J = fun(x)
        mult = 2 if jacobian_condition(J) < MULTIPLICITY_TOL else 1
        pt = TorusPoint.from_complex(x, cfg.tau)
        radius = cfg.point_tol if mult == 1 else max(cfg.point_tol, 1e-4)
        for i, (q, m) in enumerate(found):
            if torus_distance(pt, q, cfg.tau) < radius:
                found[i] = (q, max(m, mult))
                break
        else:
            found.append((pt, mult))
    for x in ambiguous:
        fun = make_fun(x)
        res = gauss_newton(fun, x, tol=RESIDUAL_TOL, max_iter=300)
        if res.converged:
            continue
        pt = TorusPoint.from_complex(res.x, cfg.tau)
        if res.residual < 1e-7 and not any(torus_distance(pt, q, cfg.tau) < 1e-3 for q, _ in found):
            raise NonConvergent(f"residual plateau at {res.residual:.2e} near {pt!r}")
    found.sort(key=lambda s: s[0].raw)
    return [Solution(p, m) for p, m in found]


def lines_through(X: ZeroScheme, cfg: SurfaceConfig, n_starts: int = 64) -> list[Solution]:
    """All ``u`` with ``X`` contained in ``D_u``.

    For ``|X| = 1`` the answer is a curve and the returned points are just
    the distinct samples the multistart happened to land on.
    """
    conds = conditions(X)
    zs = np.array([embed(c.point, cfg.tau) for c in conds])
    order = max(c.functional.order for c in conds) + 1

    def make(u0):
        lf0, _ = _theta_jet(zs - u0, cfg.tau, 0, cfg.truncation_radius)
        lw = -lf0.real

        def fun(u):
            lf, tens = _theta_jet(zs - u, cfg.tau, order, cfg.truncation_radius)
            F = np.empty(len(conds), dtype=complex)
            J = np.empty((len(conds), 2), dtype=complex)
            for j, c in enumerate(conds):
                tj = [t[j] for t in tens]
                s = np.exp(lw[j] + lf[j])
                F[j] = s * c.functional.apply(tj)
                J[j] = [-s * c.functional.derivative(ax).apply(tj) for ax in range(2)]
            return F, J

        return fun

    return solve_multistart(make, _random_starts(cfg, n_starts, 101), cfg)


def random_point_on_line(u: TorusPoint, cfg: SurfaceConfig, rng: np.random.Generator, avoid_torsion: bool = True) -> TorusPoint:
    """A point of ``D_u`` obtained by Newton projection of a random point."""
    zu = embed(u, cfg.tau)
    for _ in range(100):
        z0 = embed(TorusPoint.random(rng), cfg.tau)
        lf0, _ = _theta_jet(z0 - zu, cfg.tau, 0, cfg.truncation_radius)
        lw = -lf0.real

        def fun(z):
            lf, (t0, t1) = _theta_jet(z - zu, cfg.tau, 1, cfg.truncation_radius)
            s = np.exp(lw + lf)
            return np.array([s * t0]), (s * t1)[None, :]

        res = gauss_newton(fun, z0, tol=1e-13, max_iter=60)
        if not res.converged:
            continue
        pt = TorusPoint.from_complex(res.x, cfg.tau)
        if avoid_torsion and min(torus_distance(pt - u, e, cfg.tau) for e in two_torsion()) < 1e-2:
            continue
        return pt
    raise NonConvergent("could not project onto the line")


def line_intersection(u: TorusPoint, v: TorusPoint, cfg: SurfaceConfig, n_starts: int = 64) -> list[Solution]:
    """Points of ``D_u`` meeting ``D_v``; two counted with multiplicity."""
    if torus_distance(u, v, cfg.tau) < cfg.point_tol:
        raise CoincidentLines("u and v coincide")
    shifts = np.array([embed(u, cfg.tau), embed(v, cfg.tau)])

    def make(z0):
        lf0, _ = _theta_jet(z0[None, :] - shifts, cfg.tau, 0, cfg.truncation_radius)
        lw = -lf0.real

        def fun(z):
            lf, (t0, t1) = _theta_jet(z[None, :] - shifts, cfg.tau, 1, cfg.truncation_radius)
            s = np.exp(lw + lf)
            return s * t0, s[:, None] * t1

        return fun

    return solve_multistart(make, _random_starts(cfg, n_starts, 102), cfg)


def gauss_map_fiber(p: TorusPoint, t, cfg: SurfaceConfig, n_starts: int = 64) -> list[Solution]:
    """All ``u`` on ``D_p`` whose line ``D_u`` has tangent direction ``t`` at ``p``."""
    t = np.asarray(t, dtype=complex)
    t = t / np.linalg.norm(t)
    zp = embed(p, cfg.tau)

    def make(u0):
        lf0, _ = _theta_jet(zp - u0, cfg.tau, 0, cfg.truncation_radius)
        lw = -lf0.real

        def fun(u):
            lf, (t0, t1, t2) = _theta_jet(zp - u, cfg.tau, 2, cfg.truncation_radius)
            s = np.exp(lw + lf)
            F = s * np.array([t0, t1 @ t])
            J = -s * np.array([t1, t2 @ t])
            return F, J

        return fun

    return solve_multistart(make, _random_starts(cfg, n_starts, 103), cfg)


def _ramification_fun(w0, cfg):
    lf0, _ = _theta_jet(w0, cfg.tau, 0, cfg.truncation_radius)
    lw = -lf0.real

    def fun(w):
        lf, (t0, t1, t2, t3) = _theta_jet(w, cfg.tau, 3, cfg.truncation_radius)
        s = np.exp(lw + lf)
        a, b = t1
        tan = np.array([-b, a])
        g = tan @ t2 @ tan
        # d/dw_k of tan^T H tan with tan = (-d2 theta, d1 theta)
        dtan = np.array([-t2[1], t2[0]])  # dtan[i, k]
        dg = 2 * np.einsum("i,ij,jk->k", tan, t2, dtan) + np.einsum("i,j,ijk->k", tan, tan, t3)
        # g is cubic in the tensors, so it scales by s**3
        return np.array([s * t0, s**3 * g]), np.array([s * t1, s**3 * dg])

    return fun


def gauss_branch_points(p: TorusPoint, cfg: SurfaceConfig, n_sweep: int = 720) -> list[TorusPoint]:
    """Ramification points of the Gauss map ``u -> P(T_p D_u)`` on ``D_p``.

    The sweep samples ``n_sweep`` quasi-uniform directions on P^1 (Fibonacci
    points on the Riemann sphere), follows the fibre over each, and uses the
    fibre points whose two preimages nearly coincide as seeds for a Newton
    solve of {theta = 0, second fundamental form = 0}.
    """
    zp = embed(p, cfg.tau)
    dirs = _sphere_directions(n_sweep)
    seeds = []
    prev = None
    for t in dirs:
        sols = _fibre_continuation(zp, t, cfg, prev)
        prev = sols
        if len(sols) == 2:
            # the two preimages merge at a branch value; seed from their midpoint
            d = TorusPoint.from_complex(sols[1], cfg.tau) - TorusPoint.from_complex(sols[0], cfg.tau)
            step = _shortest(d, cfg)
            seeds.append((float(np.linalg.norm(step)), sols[0] + step / 2))
        elif len(sols) == 1:
            seeds.append((0.0, sols[0]))
    seeds.sort(key=lambda s: s[0])
    # smallest gaps first, but spread out so one branch point cannot hog the budget
    chosen: list[np.ndarray] = []
    for _, u in seeds:
        if len(chosen) >= 36:
            break
        if all(np.linalg.norm(u - c) > 0.05 for c in chosen):
            chosen.append(u)
    found: list[TorusPoint] = []
    for u in chosen:
        w0 = zp - u
        res = gauss_newton(_ramification_fun(w0, cfg), w0, tol=RESIDUAL_TOL, max_iter=80)
        if not res.converged:
            continue
        pt = TorusPoint.from_complex(zp - res.x, cfg.tau)
        if not any(torus_distance(pt, q, cfg.tau) < 1e-5 for q in found):
            found.append(pt)
    found.sort(key=lambda q: q.raw)
    return found


def _shortest(d: TorusPoint, cfg: SurfaceConfig) -> np.ndarray:
    """The shortest lift of a torus point to C^2."""
    v = d.vector
    best = None
    for shift in itertools.product((-1.0, 0.0), repeat=4):
        c = v + np.array(shift)
        z = c[:2] + cfg.tau.matrix @ c[2:]
        if best is None or np.linalg.norm(z) < np.linalg.norm(best):
            best = z
    return best


def _sphere_directions(n: int) -> list[np.ndarray]:
    i = np.arange(n) + 0.5
    phi = np.arccos(1 - 2 * i / n)
    theta = np.pi * (1 + 5**0.5) * i
    # greedy nearest-neighbour tour so consecutive fibres are close
    xyz = np.stack([np.sin(phi) * np.cos(theta), np.sin(phi) * np.sin(theta), np.cos(phi)], axis=1)
    order, left = [0], set(range(1, n))
    while left:
        rest = np.fromiter(left, dtype=int)
        nxt = int(rest[np.argmax(xyz[rest] @ xyz[order[-1]])])
        order.append(nxt)
        left.remove(nxt)
    out = []
    for ph, th in zip(phi[order], theta[order]):
        # stereographic coordinate of the sphere point, as a direction (1, zeta) or (0, 1)
        if ph < 1e-12:
            out.append(np.array([0, 1], dtype=complex))
            continue
        zeta = np.exp(1j * th) / np.tan(ph / 2)
        v = np.array([1.0, zeta]) if abs(zeta) <= 1 else np.array([1 / zeta, 1.0])
        out.append(v / np.linalg.norm(v))
    return out


def _fibre_continuation(zp, t, cfg, prev):
    """Fibre of the Gauss map over ``t``, seeded from the previous fibre when possible."""

    def make(u0):
        lf0, _ = _theta_jet(zp - u0, cfg.tau, 0, cfg.truncation_radius)
        lw = -lf0.real

        def fun(u):
            lf, (t0, t1, t2) = _theta_jet(zp - u, cfg.tau, 2, cfg.truncation_radius)
            s = np.exp(lw + lf)
            return s * np.array([t0, t1 @ t]), -s * np.array([t1, t2 @ t])

        return fun

    starts = list(prev) if prev else []
    starts += [zp - x for x in _random_starts(cfg, 8, 104)] if len(starts) < 2 else []
    sols: list[np.ndarray] = []
    for x0 in starts:
        res = gauss_newton(make(x0), x0, tol=RESIDUAL_TOL, max_iter=40)
        if not res.converged:
            continue
        pt = TorusPoint.from_complex(res.x, cfg.tau)
        if not any(torus_distance(pt, TorusPoint.from_complex(s, cfg.tau), cfg.tau) < 1e-7 for s in sols):
            sols.append(embed(pt, cfg.tau))
        if len(sols) == 2:
            break
    if len(sols) < 2 and prev:
        return _fibre_continuation(zp, t, cfg, None)
    return sols


# ---------------------------------------------------------------------------
# sections of |2l| and their singularities


def kummer_section(x: TorusPoint, cfg: SurfaceConfig) -> SectionL2:
    """The section ``theta(z - x) theta(z + x)`` cutting out ``D_x + D_{-x}``.

    Its coefficients follow from the second-order addition formula
    ``theta(z + x) theta(z - x) = sum_s Theta_s(z) Theta_s(x)``.
    """
    lf, (t0,) = basis_L2_tensors(embed(x, cfg.tau), cfg.tau, 0, cfg.truncation_radius)
    lam = np.exp(lf - lf[0].real) * t0
    return SectionL2(tuple(lam))


def section_tensors(s: SectionL2, zs, cfg: SurfaceConfig, order: int):
    """Derivative tensors of the section on the reduced scale, leading axis = points."""
    zs = np.asarray(zs, dtype=complex).reshape(-1, 2) + s.twist.shift(cfg.tau)[None, :]
    lf, tens = basis_L2_tensors(zs, cfg.tau, order, cfg.truncation_radius)
    lam = np.asarray(s.lam) / np.linalg.norm(s.lam)
    e = np.exp(lf - lf[0:1].real)
    out = []
    for t in tens:
        extra = (1,) * (t.ndim - 2)
        out.append(np.sum((lam[:, None] * e).reshape(4, -1, *extra) * t, axis=0))
    return out


def _project_to_zero_set(s: SectionL2, zs: np.ndarray, cfg: SurfaceConfig, steps: int = 15) -> np.ndarray:
    z = zs.copy()
    for _ in range(steps):
        v, g = section_tensors(s, z, cfg, 1)
        n2 = np.sum(np.abs(g) ** 2, axis=1)
        z = z - (v / np.maximum(n2, 1e-300))[:, None] * np.conj(g)
    return z


def singular_points(s: SectionL2, cfg: SurfaceConfig, n_seeds: int = 48 * 48, n_refine: int = 96) -> list[SingularityReport]:
    """Singular points of the divisor of ``s`` with node/tacnode classification.

    The zero set is sampled by projecting seeds onto it; the samples with the
    smallest gradient start Gauss-Newton solves of ``s = ds = 0``.
    """
    rng = cfg.rng(105)
    seeds = np.array([embed(TorusPoint.from_vector(v), cfg.tau) for v in rng.random((n_seeds, 4))])
    z = _project_to_zero_set(s, seeds, cfg)
    v, g = section_tensors(s, z, cfg, 1)
    gn = np.linalg.norm(g, axis=1)
    on_curve = np.abs(v) < 1e-6 * np.maximum(gn, 1e-3)
    idx = np.argsort(np.where(on_curve, gn, np.inf))[:n_refine]

    found: list[tuple[TorusPoint, np.ndarray]] = []
    for i in idx:
        if not np.isfinite(gn[i]) or not on_curve[i]:
            continue
        fun = _singular_fun(s, cfg)
        res = gauss_newton(fun, z[i], tol=1e-11, max_iter=200)
        if not res.converged:
            continue
        rough = TorusPoint.from_complex(res.x, cfg.tau)
        if any(torus_distance(rough, q, cfg.tau) < 1e-3 for q, _ in found):
            continue
        # degenerate roots converge linearly; keep going while it helps
        x = gauss_newton(fun, res.x, tol=0.0, max_iter=200).x
        _, J = fun(x)
        radius = cfg.point_tol if jacobian_condition(J) > MULTIPLICITY_TOL else 1e-3
        pt = TorusPoint.from_complex(x, cfg.tau)
        if not any(torus_distance(pt, q, cfg.tau) < radius for q, _ in found):
            found.append((pt, x))
    reports = [classify_singularity(s, pt, cfg) for pt, _ in found]
    reports.sort(key=lambda r: r.point.raw)
    return reports


def _singular_fun(s: SectionL2, cfg: SurfaceConfig):
    def fun(z):
        v, g, h = section_tensors(s, z, cfg, 2)
        return np.concatenate([v, g[0]]), np.vstack([g, h[0]])

    return fun


def _centred(pt: TorusPoint, tau) -> np.ndarray:
    v = pt.vector
    v = v - (v >= 0.5)
    return v[:2] + tau.matrix @ v[2:]


def classify_singularity(s: SectionL2, pt: TorusPoint, cfg: SurfaceConfig) -> SingularityReport:
    # the representative nearest the origin keeps the quasi-periodic factor tame
    z = _centred(pt, cfg.tau)
    _, g, h, t3, t4 = (x[0] for x in section_tensors(s, z, cfg, 4))
    sv, vecs = np.linalg.svd(h)[1:]
    cond = float(sv[1] / sv[0]) if sv[0] > 0 else 0.0
    if cond >= MULTIPLICITY_TOL:
        return SingularityReport(pt, "node", cond)
    if sv[0] == 0:
        return SingularityReport(pt, "higher", cond)
    # kernel direction k and a complementary direction l with k^T H l = 0
    kvec = np.conj(vecs[1])
    lvec = np.conj(vecs[0])
    a = lvec @ h @ lvec
    cubic = np.einsum("ijk,i,j,k->", t3, kvec, kvec, kvec)
    b = np.einsum("ijk,i,j,k->", t3, kvec, kvec, lvec)
    c = np.einsum("ijkl,i,j,k,l->", t4, kvec, kvec, kvec, kvec)
    # cubic, a and the quartic all scale by u(0) when s is multiplied by a unit u,
    # so compare them to each other rather than to tensor norms
    if abs(cubic) > 1e-3 * abs(a):
        return SingularityReport(pt, "higher", cond)  # a cusp
    quartic = c - 3 * b * b / a
    if abs(quartic) > 1e-3 * abs(a):
        return SingularityReport(pt, "tacnode", cond)
    return SingularityReport(pt, "higher", cond)
