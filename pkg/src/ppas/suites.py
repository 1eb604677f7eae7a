"""Registered verification suites.

Each suite runs ``trials`` seeded trials and returns a :class:`SuiteReport`.
Trial ``t`` of suite ``name`` draws its random data from the generator seeded
with ``[cfg.seed, suite_index, t]``, which is recorded in the diagnostics.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import ledger
from .jump import (
    BudgetExhausted,
    Calibration,
    JumpProblem,
    jump_locus,
    theta_residual,
)
from .linsys import (
    RankAmbiguous,
    SectionL2,
    TwistParam,
    gauss_branch_points,
    gauss_map_fiber,
    h0,
    kummer_section,
    line_intersection,
    lines_through,
    random_point_on_line,
    section_tensors,
    singular_points,
)
from .newton import NonConvergent
from .schemes import ZeroScheme
from .surface import SurfaceConfig, TorusPoint, embed, torus_distance, two_torsion
from .theta import (
    ZERO_CHAR,
    Characteristic,
    basis_L2,
    basis_L2_tensors,
    theta_jet,
    theta_value,
)

POINT_TOL = 1e-5
NUMERICAL_ERRORS = (NonConvergent, BudgetExhausted, RankAmbiguous)


class UnknownSuite(KeyError):
    pass


@dataclass
class SuiteReport:
    suite: str
    trials: int
    passes: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.passes == self.trials

    def to_json(self) -> dict:
        return {"suite": self.suite, "trials": self.trials, "passes": self.passes, "failures": self.failures}


def _sum(points) -> TorusPoint:
    total = TorusPoint.zero()
    for p in points:
        total = total + p
    return total


def _near(a: TorusPoint, b: TorusPoint, cfg: SurfaceConfig, tol: float = POINT_TOL) -> bool:
    return torus_distance(a, b, cfg.tau) < tol


def _matches(found, expected, cfg, tol=POINT_TOL) -> bool:
    """Same size and every expected point found (and vice versa)."""
    return len(found) == len(expected) and all(any(_near(f, e, cfg, tol) for f in found) for e in expected) and all(
        any(_near(f, e, cfg, tol) for e in expected) for f in found
    )


def _fmt(p: TorusPoint) -> list:
    return [round(x, 9) for x in p.to_json()]


# each trial returns a list of failure strings (empty on success) plus diagnostics


def _s2_point(cfg, cal, rng):
    p = TorusPoint.random(rng)
    X = ZeroScheme.reduced([p])
    bad = [h for v in rng.random((200, 4)) if (h := h0(X, TwistParam(TorusPoint.from_vector(v)), cfg)) != 3]
    loc = jump_locus(X, 2, cfg, cal)
    errs = []
    if bad:
        errs.append(f"h0 != 3 at {len(bad)} twists")
    if loc.kind != "empty":
        errs.append(f"locus kind {loc.kind}")
    return errs, {"kind": loc.kind}


def _s2_pair(cfg, cal, rng):
    p, q = TorusPoint.random(rng), TorusPoint.random(rng)
    loc = jump_locus(ZeroScheme.reduced([p, q]), 2, cfg, cal)
    found = [pt for pt, _ in loc.points]
    errs = []
    if loc.kind != "finite" or not _matches(found, [-(p + q)], cfg):
        errs.append("jump point is not -(p+q)")
    dist = [torus_distance(f, -(p + q), cfg.tau) for f in found]
    return errs, {"kind": loc.kind, "points": [_fmt(f) for f in found], "distance": dist}


def _line_duality(cfg, cal, rng):
    errs = []
    p, q = TorusPoint.random(rng), TorusPoint.random(rng)
    Q = ZeroScheme.reduced([p, q])
    lines = lines_through(Q, cfg)
    if sum(s.multiplicity for s in lines) != 2:
        errs.append(f"lines_through multiplicity {sum(s.multiplicity for s in lines)}")
    s1 = jump_locus(Q, 1, cfg, cal)
    if s1.kind != "finite" or not _matches([pt for pt, _ in s1.points], [-s.point for s in lines], cfg):
        errs.append("S_1(Q) differs from minus the lines through Q")
    # p - q in 2 D_L: the two lines coincide
    l_pt = random_point_on_line(TorusPoint.zero(), cfg, rng)
    Q2 = ZeroScheme.reduced([p, p + 2 * l_pt])
    lines2 = lines_through(Q2, cfg)
    if len(lines2) != 1 or lines2[0].multiplicity != 2 or not _near(lines2[0].point, p + l_pt, cfg):
        errs.append(f"constructed pair: expected one double line, got {lines2}")
    s1b = jump_locus(Q2, 1, cfg, cal)
    if not _matches([pt for pt, _ in s1b.points], [-(p + l_pt)], cfg):
        errs.append("constructed pair: S_1 is not the single point -(p+l)")
    return errs, {"lines": len(lines), "s1": len(s1.points)}


def _s2_triple(cfg, cal, rng):
    Y = [TorusPoint.random(rng) for _ in range(3)]
    p, q, y = Y
    loc = jump_locus(ZeroScheme.reduced(Y), 2, cfg, cal)
    found = [pt for pt, _ in loc.points]
    errs = []
    if loc.kind != "finite" or not _matches(found, [-(p + q), -(q + y), -(y + p)], cfg):
        errs.append(f"locus {loc.kind} with {len(found)} points is not the three pair sums")
    elif not _near(_sum(found), -(2 * _sum(Y)), cfg):
        errs.append("sum of the locus differs from -2 sum Y")
    return errs, {"kind": loc.kind, "points": [_fmt(f) for f in found]}


def _collinear_points(cfg, rng, v, n):
    return [random_point_on_line(v, cfg, rng) for _ in range(n)]


def _s2_collinear_triple(cfg, cal, rng):
    v = TorusPoint.random(rng)
    Y = _collinear_points(cfg, rng, v, 3)
    beta = v - _sum(Y)
    loc = jump_locus(ZeroScheme.reduced(Y), 2, cfg, cal)
    errs = []
    if loc.kind != "curve":
        errs.append(f"locus kind {loc.kind}")
    if len(loc.curve_samples) < 32:
        errs.append(f"only {len(loc.curve_samples)} samples")
    res = [theta_residual(embed(c, cfg.tau) - embed(beta, cfg.tau), cfg) for c in loc.curve_samples]
    if res and max(res) >= 1e-6:
        errs.append(f"witness residual {max(res):.2e}")
    if loc.curve_witness is None or not _near(loc.curve_witness, beta, cfg):
        errs.append("witness differs from v - sum Y")
    return errs, {"kind": loc.kind, "samples": len(loc.curve_samples), "max_residual": max(res) if res else None}


def _pair_sums_of_triples(Z):
    out = []
    for sub in itertools.combinations(Z, 3):
        out += [-(a + b) for a, b in itertools.combinations(sub, 2)]
    return out


def _s2_length4(cfg, cal, rng):
    errs, diag = [], {}
    # (a) collinear Z -> {2v - sigma}
    v = TorusPoint.random(rng)
    Zc = _collinear_points(cfg, rng, v, 4)
    loc = jump_locus(ZeroScheme.reduced(Zc), 2, cfg, cal)
    if loc.kind != "finite" or not _matches([pt for pt, _ in loc.points], [2 * v - _sum(Zc)], cfg):
        errs.append(f"(a) collinear Z: {loc.kind} {len(loc.points)} points, expected 2v - sigma")
    diag["a"] = loc.kind
    # (b) generic Z -> curve through the twelve pair sums
    Z = [TorusPoint.random(rng) for _ in range(4)]
    loc = jump_locus(ZeroScheme.reduced(Z), 2, cfg, cal)
    problem = JumpProblem(ZeroScheme.reduced(Z), 2, cfg)
    s_vals = [problem.s(embed(cal.from_dual(c), cfg.tau)) for c in _pair_sums_of_triples(Z)]
    if loc.kind != "curve":
        errs.append(f"(b) generic Z: locus kind {loc.kind}")
    if max(s_vals) >= 1e-6:
        errs.append(f"(b) a predicted point has s = {max(s_vals):.2e}")
    diag["b"] = {"kind": loc.kind, "max_s": max(s_vals)}
    # (c) Z containing a collinear triple -> a theta-translate component D_{v - sum Y}
    Y = _collinear_points(cfg, rng, v, 3)
    z = TorusPoint.random(rng)
    loc = jump_locus(ZeroScheme.reduced(Y + [z]), 2, cfg, cal)
    beta = v - _sum(Y)
    if not any(w is not None and _near(w, beta, cfg) for w in loc.witnesses):
        errs.append("(c) no traced component D_{v - sum Y}")
    diag["c"] = {"kind": loc.kind, "witnesses": [None if w is None else _fmt(w) for w in loc.witnesses]}
    return errs, diag


def _s2_length4_kummer(cfg, cal, rng):
    v = TorusPoint.random(rng)
    Y = _collinear_points(cfg, rng, v, 3)
    Z = Y + [TorusPoint.random(rng)]
    loc = jump_locus(ZeroScheme.reduced(Z), 2, cfg, cal)
    problem = JumpProblem(ZeroScheme.reduced(Z), 2, cfg)
    s_vals = [problem.s(embed(cal.from_dual(c), cfg.tau)) for c in _pair_sums_of_triples(Z)]
    errs = []
    if loc.kind not in ("curve", "curve_plus_points"):
        errs.append(f"locus kind {loc.kind}")
    if max(s_vals) >= 1e-6:
        errs.append(f"a pair sum has s = {max(s_vals):.2e}")
    return errs, {"kind": loc.kind, "max_s": max(s_vals)}


def _s2_length5_generic(cfg, cal, rng):
    W = [TorusPoint.random(rng) for _ in range(5)]
    loc = jump_locus(ZeroScheme.reduced(W), 2, cfg, cal)
    errs = []
    if loc.kind != "finite" or len(loc.points) != 5:
        errs.append(f"locus {loc.kind} with {len(loc.points)} points, expected 5")
    return errs, {"kind": loc.kind, "points": [_fmt(p) for p, _ in loc.points]}


def _s2_length5(cfg, cal, rng):
    errs, diag = _s2_length5_generic(cfg, cal, rng)
    errs = [f"(a) {e}" for e in errs]
    v = TorusPoint.random(rng)
    Z = _collinear_points(cfg, rng, v, 4)
    loc = jump_locus(ZeroScheme.reduced(Z + [TorusPoint.random(rng)]), 2, cfg, cal)
    if loc.kind not in ("curve", "curve_plus_points"):
        errs.append(f"(b) W containing a collinear Z: locus kind {loc.kind}")
    diag = {"a": diag, "b": loc.kind}
    e3, d3 = _collinear_empty(cfg, cal, rng, sizes=(5,))
    errs += [f"(c) {e}" for e in e3]
    diag["c"] = d3
    return errs, diag


def _collinear_empty(cfg, cal, rng, sizes=(5, 6)):
    errs, diag = [], {}
    for n in sizes:
        u = TorusPoint.random(rng)
        X = _collinear_points(cfg, rng, u, n)
        loc = jump_locus(ZeroScheme.reduced(X), 2, cfg, cal)
        if loc.kind != "empty":
            errs.append(f"collinear length {n}: locus kind {loc.kind}")
        diag[n] = loc.kind
    return errs, diag


def _s2_length_bounds(cfg, cal, rng):
    errs, diag = [], {}
    v = TorusPoint.random(rng)
    cases = []
    for n, bound in ((6, 3), (7, 2)):
        cases.append((f"random-{n}", [TorusPoint.random(rng) for _ in range(n)], bound))
        Z = _collinear_points(cfg, rng, v, 4)
        cases.append((f"collinear-Z-{n}", Z + [TorusPoint.random(rng) for _ in range(n - 4)], bound))
    for name, X, bound in cases:
        loc = jump_locus(ZeroScheme.reduced(X), 2, cfg, cal)
        length = sum(h for _, h in loc.points)
        if loc.kind not in ("empty", "finite") or length > bound:
            errs.append(f"{name}: {loc.kind} of length {length} (bound {bound})")
        diag[name] = [loc.kind, length]
    return errs, diag


def _section_through(e: TorusPoint, cfg: SurfaceConfig, rng) -> SectionL2:
    lf, (v,) = basis_L2_tensors(embed(e, cfg.tau), cfg.tau, 0, cfg.truncation_radius)
    v = np.exp(lf - lf[0].real) * v
    r = rng.normal(size=4) + 1j * rng.normal(size=4)
    return SectionL2(tuple(r - (r @ v) / np.vdot(v, v) * v.conj()))


def _singular_divisors(cfg, cal, rng):
    errs, diag = [], {}
    x = TorusPoint.random(rng)
    reps = singular_points(kummer_section(x, cfg), cfg)
    inter = [s.point for s in line_intersection(x, -x, cfg)]
    if [r.type for r in reps] != ["node", "node"] or not _matches([r.point for r in reps], inter, cfg):
        errs.append(f"(a) Kummer: {[r.type for r in reps]}")
    diag["a"] = [r.type for r in reps]
    l_pt = random_point_on_line(TorusPoint.zero(), cfg, rng)
    reps = singular_points(kummer_section(l_pt, cfg), cfg)
    if [r.type for r in reps] != ["tacnode"]:
        errs.append(f"(b) D_l + D_-l: {[r.type for r in reps]}")
    diag["b"] = [r.type for r in reps]
    e = two_torsion()[int(rng.integers(16))]
    s = _section_through(e, cfg, rng)
    _, grad = section_tensors(s, embed(e, cfg.tau), cfg, 1)
    gnorm = float(np.linalg.norm(grad))
    reps = singular_points(s, cfg)
    at_e = [r for r in reps if _near(r.point, e, cfg)]
    if gnorm >= 1e-8:
        errs.append(f"(c) gradient {gnorm:.2e} at the 2-torsion point")
    if len(at_e) != 1 or at_e[0].type != "node":
        errs.append(f"(c) classification at e: {[r.type for r in at_e]}")
    diag["c"] = {"gradient": gnorm, "types": [r.type for r in reps]}
    return errs, diag


def _gauss_map(cfg, cal, rng, n_directions: int = 1):
    errs = []
    p = TorusPoint.random(rng)
    sizes = []
    for _ in range(n_directions):
        t = rng.normal(size=2) + 1j * rng.normal(size=2)
        fib = gauss_map_fiber(p, t, cfg)
        sizes.append([s.multiplicity for s in fib])
        if [s.multiplicity for s in fib] != [1, 1]:
            errs.append(f"fibre multiplicities {[s.multiplicity for s in fib]}")
    return errs, {"fibres": sizes}


def _gauss_branch(cfg, rng):
    p = TorusPoint.random(rng)
    branch = gauss_branch_points(p, cfg, n_sweep=720)
    errs = [] if len(branch) == 6 else [f"{len(branch)} branch points"]
    return errs, {"branch_points": [_fmt(b) for b in branch]}


def _theta_sanity(cfg, cal, rng):
    errs = []
    tau = cfg.tau
    zs = [embed(TorusPoint.random(rng), tau) + 0.0 for _ in range(20)]
    for z in zs[:5]:
        if np.max(np.abs(basis_L2(-z, tau) - basis_L2(z, tau))) > 1e-10 * max(1.0, np.max(np.abs(basis_L2(z, tau)))):
            errs.append("basis not even")
            break
    m, n = rng.integers(-2, 3, size=2), rng.integers(-2, 3, size=2)
    z = zs[0]
    lhs = theta_value(ZERO_CHAR, z + m + tau.matrix @ n, tau)
    rhs = np.exp(-1j * np.pi * n @ tau.matrix @ n - 2j * np.pi * n @ z) * theta_value(ZERO_CHAR, z, tau)
    if abs(lhs - rhs) > 1e-10 * abs(rhs):
        errs.append("quasi-periodicity")
    A = np.array([basis_L2(z, tau) for z in zs])
    b = np.array([theta_value(ZERO_CHAR, z, tau) ** 2 for z in zs])
    coef = np.linalg.lstsq(A, b, rcond=None)[0]
    fit = float(np.linalg.norm(A @ coef - b) / np.linalg.norm(b))
    if fit >= 1e-8:
        errs.append(f"addition-span residual {fit:.2e}")
    on = [e for e in two_torsion() if abs(theta_value(ZERO_CHAR, embed(e, tau), tau)) < 1e-10]
    if len(on) != 6:
        errs.append(f"{len(on)} two-torsion points on D_L")
    # absolute error near the origin, where |theta| is O(1); far out the
    # rounding error of the difference quotient grows with |theta| / h
    z = rng.uniform(-0.5, 0.5, 2) + 1j * rng.uniform(-0.3, 0.3, 2)
    _, g, _ = theta_jet(ZERO_CHAR, z, tau)
    h = 1e-5
    fd = np.array([(theta_value(ZERO_CHAR, z + h * d, tau) - theta_value(ZERO_CHAR, z - h * d, tau)) / (2 * h) for d in np.eye(2)])
    fd_err = float(np.max(np.abs(fd - g)))
    if fd_err >= 1e-7:
        errs.append(f"finite-difference gradient error {fd_err:.2e}")
    odd = Characteristic((0.5, 0.5), (0.5, 0.0))
    if abs(theta_value(odd, np.zeros(2), tau)) > 1e-12:
        errs.append("odd characteristic does not vanish at 0")
    return errs, {"fit": fit, "fd_error": fd_err, "torsion_on_theta": len(on)}


def _ledger_balance(cfg, cal, rng):
    errs = []
    for row in ledger.table_rows():
        if not ledger.balance_check(row, row.n, row.i):
            errs.append(f"row {row.key} (n={row.n}) does not balance")
    for v, w in ledger.PHI_EXAMPLES:
        if ledger.phi_ch(v) != w:
            errs.append(f"phi_ch{v.as_tuple()} != {w.as_tuple()}")
    for i in (1, 2):
        for n in range(9):
            if ledger.twisted_ideal(i, n).chi != i * i - n:
                errs.append(f"chi formula fails at i={i}, n={n}")
    return errs, {"rows": len(ledger.table_rows())}


@dataclass(frozen=True)
class Suite:
    name: str
    trial: Callable
    default_trials: int
    summary: str


SUITES: dict[str, Suite] = {
    s.name: s
    for s in (
        Suite("s2-point", _s2_point, 20, "single points never jump"),
        Suite("s2-pair", _s2_pair, 20, "a reduced pair jumps exactly at -(p+q)"),
        Suite("line-duality", _line_duality, 20, "two lines through a pair; S_1 = -lines; double line when p-q in 2D_L"),
        Suite("s2-triple", _s2_triple, 20, "non-collinear triples jump at the three pair sums"),
        Suite("s2-collinear-triple", _s2_collinear_triple, 10, "collinear triples jump along D_{v - sum Y}"),
        Suite("s2-length4", _s2_length4, 10, "length 4: collinear point, generic curve, Kummer component"),
        Suite("s2-length5", _s2_length5, 5, "length 5: five points, curve with collinear Z, empty when collinear"),
        Suite("s2-length-bounds", _s2_length_bounds, 5, "length 6 and 7: at most 3 and 2 jump points"),
        Suite("singular-divisors", _singular_divisors, 10, "Kummer nodes, tacnodes, nodes at 2-torsion"),
        Suite("gauss-map", _gauss_map, 20, "Gauss map has degree 2 and six branch points"),
        Suite("theta-sanity", _theta_sanity, 5, "evenness, periodicity, addition span, odd 2-torsion, gradients"),
        Suite("ledger-balance", _ledger_balance, 1, "Chern balance of every tabulated row"),
        Suite("s2-length4-kummer", _s2_length4_kummer, 5, "Z with a collinear triple: curve through all pair sums"),
        Suite("s2-length5-generic", _s2_length5_generic, 5, "generic W jumps at exactly five points"),
        Suite("s2-collinear-empty", _collinear_empty, 5, "collinear schemes of length 5 and 6 never jump"),
    )
}

ACCEPTANCE = [
    "s2-point", "s2-pair", "line-duality", "s2-triple", "s2-collinear-triple", "s2-length4",
    "s2-length5", "s2-length-bounds", "singular-divisors", "gauss-map", "theta-sanity", "ledger-balance",
]


def verify_suite(name: str, cfg: SurfaceConfig, cal: Calibration, trials: int | None = None) -> SuiteReport:
    if name not in SUITES:
        raise UnknownSuite(name)
    suite = SUITES[name]
    n = suite.default_trials if trials is None else int(trials)
    if n < 1:
        raise ValueError("trials must be >= 1")
    index = list(SUITES).index(name)
    report = SuiteReport(name, n)
    start = time.perf_counter()
    for t in range(n):
        seed = [int(cfg.seed), index, t]
        rng = np.random.default_rng(seed)
        try:
            errs, diag = suite.trial(cfg, cal, rng)
        except NUMERICAL_ERRORS as exc:
            errs, diag = [f"{type(exc).__name__}: {exc}"], {}
        if errs:
            report.failures.append({"trial": t, "seed": seed, "errors": errs, "diagnostics": diag})
        else:
            report.passes += 1
    if name == "gauss-map":
        # the branch sweep is one global check on top of the per-direction trials
        rng = np.random.default_rng([int(cfg.seed), index, n])
        try:
            errs, diag = _gauss_branch(cfg, rng)
        except NUMERICAL_ERRORS as exc:
            errs, diag = [f"{type(exc).__name__}: {exc}"], {}
        report.trials += 1
        if errs:
            report.failures.append({"trial": "branch-sweep", "seed": [int(cfg.seed), index, n], "errors": errs, "diagnostics": diag})
        else:
            report.passes += 1
    report.seconds = time.perf_counter() - start
    return report
