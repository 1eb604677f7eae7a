"""Principally polarized abelian surface C^2 / (Z^2 + tau Z^2) and its points.

Points are kept in real lattice coordinates ``z = p + tau q``.  The four real
coordinates are stored as fixed-point integers modulo ``2**60`` so that
addition, negation and integer multiplication are exact; the complex
embedding is only formed when a theta series has to be evaluated.
"""
from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

_BITS = 60
_SCALE = 1 << _BITS
_MASK = _SCALE - 1


class ConfigError(ValueError):
    """Invalid period matrix or surface configuration."""


@dataclass(frozen=True)
class PeriodMatrix:
    """Symmetric 2x2 period matrix with positive definite imaginary part."""

    t11: complex
    t12: complex
    t22: complex

    def __post_init__(self):
        im = np.array([[self.t11.imag, self.t12.imag], [self.t12.imag, self.t22.imag]])
        if not (im[0, 0] > 0 and np.linalg.det(im) > 0):
            raise ConfigError("Im(tau) must be positive definite")

    @classmethod
    def from_array(cls, tau) -> "PeriodMatrix":
        tau = np.asarray(tau, dtype=complex)
        if tau.shape != (2, 2):
            raise ConfigError(f"tau must be 2x2, got shape {tau.shape}")
        if tau[0, 1] != tau[1, 0]:
            raise ConfigError("tau must be symmetric")
        return cls(complex(tau[0, 0]), complex(tau[0, 1]), complex(tau[1, 1]))

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.t11, self.t12], [self.t12, self.t22]], dtype=complex)

    @property
    def imag_minors(self) -> tuple[float, float]:
        im = self.matrix.imag
        return float(im[0, 0]), float(np.linalg.det(im))

    @property
    def min_imag_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix.imag)[0])

    @property
    def looks_reducible(self) -> bool:
        """Warning flag: a diagonal tau is a product of elliptic curves.

        Irreducibility of the theta divisor is assumed, never certified; this
        only catches the obvious product case.
        """
        return abs(self.t12) < 1e-8

    def to_json(self) -> list:
        m = self.matrix
        return [[[m[i, j].real, m[i, j].imag] for j in range(2)] for i in range(2)]

    @classmethod
    def from_json(cls, data) -> "PeriodMatrix":
        try:
            arr = np.array([[complex(e[0], e[1]) for e in row] for row in data])
        except (TypeError, IndexError, ValueError) as exc:
            raise ConfigError(f"malformed tau: {data!r}") from exc
        return cls.from_array(arr)


DEFAULT_TAU = PeriodMatrix(1j, 0.3 + 0.2j, 1.2j)


def _to_fixed(x: float) -> int:
    return int(round(float(x) * _SCALE)) & _MASK


@dataclass(frozen=True)
class TorusPoint:
    """Point ``p + tau q`` of the torus with ``p, q`` reduced into [0, 1)."""

    raw: tuple[int, int, int, int]

    @classmethod
    def from_coords(cls, p: Sequence[float], q: Sequence[float] = (0.0, 0.0)) -> "TorusPoint":
        return cls(tuple(_to_fixed(x) for x in (*p, *q)))

    @classmethod
    def from_vector(cls, v: Sequence[float]) -> "TorusPoint":
        return cls.from_coords(v[:2], v[2:])

    @classmethod
    def zero(cls) -> "TorusPoint":
        return cls((0, 0, 0, 0))

    @classmethod
    def from_complex(cls, z, tau: PeriodMatrix) -> "TorusPoint":
        z = np.asarray(z, dtype=complex)
        t = tau.matrix
        q = np.linalg.solve(t.imag, z.imag)
        p = z.real - t.real @ q
        return cls.from_coords(p, q)

    @classmethod
    def random(cls, rng: np.random.Generator) -> "TorusPoint":
        return cls.from_vector(rng.random(4))

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.raw, dtype=float) / _SCALE

    @property
    def p(self) -> np.ndarray:
        return self.vector[:2]

    @property
    def q(self) -> np.ndarray:
        return self.vector[2:]

    def __add__(self, other: "TorusPoint") -> "TorusPoint":
        return TorusPoint(tuple((a + b) & _MASK for a, b in zip(self.raw, other.raw)))

    def __neg__(self) -> "TorusPoint":
        return TorusPoint(tuple((-a) & _MASK for a in self.raw))

    def __sub__(self, other: "TorusPoint") -> "TorusPoint":
        return self + (-other)

    def __mul__(self, k: int) -> "TorusPoint":
        if not isinstance(k, (int, np.integer)):
            return NotImplemented
        return TorusPoint(tuple((int(k) * a) & _MASK for a in self.raw))

    __rmul__ = __mul__

    def embed(self, tau: PeriodMatrix) -> np.ndarray:
        return embed(self, tau)

    def to_json(self) -> list[float]:
        return [float(x) for x in self.vector]

    def __repr__(self) -> str:
        v = self.vector
        return f"TorusPoint(p=({v[0]:.6f}, {v[1]:.6f}), q=({v[2]:.6f}, {v[3]:.6f}))"


def embed(pt: TorusPoint, tau: PeriodMatrix) -> np.ndarray:
    """Complex coordinates ``p + tau q`` of a torus point."""
    return pt.p + tau.matrix @ pt.q


_SHIFTS = np.array(list(itertools.product((-1.0, 0.0, 1.0), repeat=4)))


def torus_distance(a: TorusPoint, b: TorusPoint, tau: PeriodMatrix) -> float:
    """Euclidean distance in C^2 between ``a`` and the nearest lattice translate of ``b``."""
    d = (a - b).vector
    # the reduced difference lies in [0,1)^4, so all 3^4 neighbours are enough
    cand = d[None, :] + _SHIFTS
    z = cand[:, :2] + cand[:, 2:] @ tau.matrix.T
    return float(np.min(np.linalg.norm(z, axis=1)))


def two_torsion(tau: PeriodMatrix | None = None) -> list[TorusPoint]:
    """The sixteen points of order dividing 2, ordered lexicographically in (q, p)."""
    out = []
    for q1, q2, p1, p2 in itertools.product((0.0, 0.5), repeat=4):
        out.append(TorusPoint.from_coords((p1, p2), (q1, q2)))
    return out


@dataclass(frozen=True)
class SurfaceConfig:
    tau: PeriodMatrix = DEFAULT_TAU
    truncation_radius: int = 8
    point_tol: float = 1e-6
    rank_tol: float = 1e-6
    seed: int = 20240917

    def __post_init__(self):
        if int(self.truncation_radius) < 3:
            raise ConfigError("truncation_radius must be >= 3")
        for name in ("point_tol", "rank_tol"):
            v = getattr(self, name)
            if not (0 < v <= 1e-3):
                raise ConfigError(f"{name} must lie in (0, 1e-3], got {v}")
        if not (0 <= int(self.seed) < 2**64):
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.tau.looks_reducible:
            warnings.warn("tau is diagonal: the surface is a product and D_L is reducible")

    def rng(self, *stream: int) -> np.random.Generator:
        return np.random.default_rng([int(self.seed), *stream])

    def to_json(self) -> dict:
        return {
            "tau": self.tau.to_json(),
            "truncation_radius": int(self.truncation_radius),
            "point_tol": float(self.point_tol),
            "rank_tol": float(self.rank_tol),
            "seed": int(self.seed),
        }

    @classmethod
    def from_json(cls, data: dict) -> "SurfaceConfig":
        if not isinstance(data, dict) or "tau" not in data:
            raise ConfigError("config must be an object with a 'tau' entry")
        kwargs = {k: data[k] for k in ("truncation_radius", "point_tol", "rank_tol", "seed") if k in data}
        return cls(tau=PeriodMatrix.from_json(data["tau"]), **kwargs)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "SurfaceConfig":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        return cls.from_json(data)


def points_to_array(points: Iterable[TorusPoint], tau: PeriodMatrix) -> np.ndarray:
    return np.array([embed(pt, tau) for pt in points], dtype=complex).reshape(-1, 2)
