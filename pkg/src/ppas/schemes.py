"""Zero-dimensional subschemes of the torus as lists of jets.

Each jet contributes linear condition functionals on germs of holomorphic
functions.  A functional is a linear combination of mixed directional
derivatives ``D_{v1} ... D_{vr} f(p)`` and is evaluated against the derivative
tensors of whatever section is being tested, so nothing here depends on how
sections are represented.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence, Union

import numpy as np

from .surface import PeriodMatrix, TorusPoint, embed

MAX_LENGTH = 8


class InvalidScheme(ValueError):
    pass


class UnsupportedJet(TypeError):
    pass


def _unit(v) -> tuple[complex, complex]:
    v = np.asarray(v, dtype=complex).reshape(2)
    n = np.linalg.norm(v)
    if n == 0:
        raise InvalidScheme("direction vector must be nonzero")
    if abs(n - 1.0) > 4 * np.finfo(float).eps:  # keep unit input bit-exact so JSON round-trips
        v = v / n
    return tuple(complex(x) for x in v)


@dataclass(frozen=True)
class Functional:
    """``sum coef * D_{dirs} f(point)`` over ``terms = ((coef, dirs), ...)``."""

    terms: tuple

    @property
    def order(self) -> int:
        return max(len(d) for _, d in self.terms)

    def apply(self, tensors: Sequence[np.ndarray]) -> np.ndarray:
        """Evaluate on derivative tensors ``tensors[r]`` of shape (..., 2, ..., 2)."""
        out = 0
        for coef, dirs in self.terms:
            t = tensors[len(dirs)]
            for v in dirs:
                t = t @ np.asarray(v)
            out = out + coef * t
        return out

    def derivative(self, axis: int) -> "Functional":
        """The functional ``f -> self(d f / d z_axis)``."""
        e = (1.0 + 0j, 0j) if axis == 0 else (0j, 1.0 + 0j)
        return Functional(tuple((c, d + (e,)) for c, d in self.terms))


EVAL = Functional(((1.0, ()),))


def _d(*vs) -> Functional:
    return Functional(((1.0, tuple(vs)),))


@dataclass(frozen=True)
class Reduced:
    point: TorusPoint
    length = 1

    def functionals(self):
        return [EVAL]


@dataclass(frozen=True)
class Double:
    """The length-2 scheme ``{p, t}`` with tangent direction ``t``."""

    point: TorusPoint
    t: tuple
    length = 2

    def __post_init__(self):
        object.__setattr__(self, "t", _unit(self.t))

    def functionals(self):
        return [EVAL, _d(self.t)]


@dataclass(frozen=True)
class CurvilinearTriple:
    """Type c: the 2-jet of the arc ``s -> p + s t + s^2 n``."""

    point: TorusPoint
    t: tuple
    n: tuple = (0j, 0j)
    length = 3

    def __post_init__(self):
        object.__setattr__(self, "t", _unit(self.t))
        object.__setattr__(self, "n", tuple(complex(x) for x in np.asarray(self.n, dtype=complex).reshape(2)))

    def functionals(self):
        second = Functional(((1.0, (self.t, self.t)), (2.0, (self.n,))))
        return [EVAL, _d(self.t), second]


@dataclass(frozen=True)
class Yd:
    """Type d: ``C[eps, eta]/(eps - eta^2, eps eta)`` with eta along ``t_eta``."""

    point: TorusPoint
    t_eta: tuple
    t_eps: tuple
    length = 3

    def __post_init__(self):
        object.__setattr__(self, "t_eta", _unit(self.t_eta))
        object.__setattr__(self, "t_eps", _unit(self.t_eps))
        if abs(np.linalg.det(np.array([self.t_eta, self.t_eps]))) < 1e-9:
            raise InvalidScheme("Yd directions must be linearly independent")

    def functionals(self):
        mixed = Functional(((1.0, (self.t_eps,)), (0.5, (self.t_eta, self.t_eta))))
        return [EVAL, _d(self.t_eta), mixed]


@dataclass(frozen=True)
class Ye:
    """Type e: the full first-order neighbourhood ``C[eps, eta]/m^2``."""

    point: TorusPoint
    length = 3

    def functionals(self):
        return [EVAL, _d((1.0, 0.0)), _d((0.0, 1.0))]


Jet = Union[Reduced, Double, CurvilinearTriple, Yd, Ye]
_KINDS = {Reduced: "reduced", Double: "double", CurvilinearTriple: "curvilinear", Yd: "yd", Ye: "ye"}


class Condition(NamedTuple):
    point: TorusPoint
    functional: Functional


def _same_support(a: TorusPoint, b: TorusPoint) -> bool:
    d = (a - b).vector
    return bool(np.all(np.minimum(d, 1.0 - d) < 1e-12))


@dataclass(frozen=True)
class ZeroScheme:
    jets: tuple

    def __post_init__(self):
        jets = tuple(self.jets)
        object.__setattr__(self, "jets", jets)
        for j in jets:
            if type(j) not in _KINDS:
                raise UnsupportedJet(f"unsupported jet {j!r}")
        for a, b in itertools.combinations(jets, 2):
            if _same_support(a.point, b.point):
                raise InvalidScheme("two jets share a support point; merge them into one jet")
        if self.length > MAX_LENGTH:
            raise InvalidScheme(f"length {self.length} exceeds {MAX_LENGTH}")

    @classmethod
    def reduced(cls, points: Sequence[TorusPoint]) -> "ZeroScheme":
        return cls(tuple(Reduced(p) for p in points))

    @property
    def length(self) -> int:
        return sum(j.length for j in self.jets)

    def __len__(self) -> int:
        return self.length

    @property
    def points(self) -> list[TorusPoint]:
        return [j.point for j in self.jets]

    @property
    def is_reduced(self) -> bool:
        return all(isinstance(j, Reduced) for j in self.jets)

    def translate(self, a: TorusPoint) -> "ZeroScheme":
        from dataclasses import replace

        return ZeroScheme(tuple(replace(j, point=j.point + a) for j in self.jets))

    def to_json(self) -> list:
        return [_jet_to_json(j) for j in self.jets]

    @classmethod
    def from_json(cls, data) -> "ZeroScheme":
        if not isinstance(data, list):
            raise InvalidScheme("scheme must be a JSON list of jets")
        return cls(tuple(_jet_from_json(d) for d in data))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "ZeroScheme":
        try:
            return cls.from_json(json.loads(Path(path).read_text()))
        except json.JSONDecodeError as exc:
            raise InvalidScheme(f"{path}: {exc}") from exc


def _vec_json(v) -> list:
    return [[complex(x).real, complex(x).imag] for x in v]


def _vec_parse(d) -> tuple:
    try:
        return tuple(complex(x[0], x[1]) for x in d)
    except (TypeError, IndexError, ValueError) as exc:
        raise InvalidScheme(f"malformed complex vector {d!r}") from exc


def _jet_to_json(j) -> dict:
    out = {"kind": _KINDS[type(j)], "p": j.point.to_json()}
    if isinstance(j, Double):
        out["t"] = _vec_json(j.t)
    elif isinstance(j, CurvilinearTriple):
        out["t"] = _vec_json(j.t)
        out["n"] = _vec_json(j.n)
    elif isinstance(j, Yd):
        out["t_eta"] = _vec_json(j.t_eta)
        out["t_eps"] = _vec_json(j.t_eps)
    return out


def _jet_from_json(d) -> Jet:
    if not isinstance(d, dict) or "kind" not in d or "p" not in d:
        raise InvalidScheme(f"malformed jet {d!r}")
    p = d["p"]
    if not (isinstance(p, list) and len(p) == 4):
        raise InvalidScheme("jet point 'p' must be 4 reals")
    pt = TorusPoint.from_vector([float(x) for x in p])
    kind = d["kind"]
    try:
        if kind == "reduced":
            return Reduced(pt)
        if kind == "double":
            return Double(pt, _vec_parse(d["t"]))
        if kind == "curvilinear":
            return CurvilinearTriple(pt, _vec_parse(d["t"]), _vec_parse(d.get("n", [[0, 0], [0, 0]])))
        if kind == "yd":
            return Yd(pt, _vec_parse(d["t_eta"]), _vec_parse(d["t_eps"]))
        if kind == "ye":
            return Ye(pt)
    except KeyError as exc:
        raise InvalidScheme(f"jet of kind {kind!r} is missing {exc}") from exc
    raise UnsupportedJet(f"unknown jet kind {kind!r}")


def conditions(X: ZeroScheme) -> list[Condition]:
    """One condition functional per unit of length, jet by jet."""
    out = []
    for j in X.jets:
        if type(j) not in _KINDS:
            raise UnsupportedJet(f"unsupported jet {j!r}")
        out.extend(Condition(j.point, f) for f in j.functionals())
    return out


def condition_order(X: ZeroScheme) -> int:
    return max(c.functional.order for c in conditions(X))


class Colength1(NamedTuple):
    schemes: list
    one_parameter_family: bool


def colength_one_subschemes(X: ZeroScheme) -> Colength1:
    """Canonical length ``|X| - 1`` subschemes.

    A ``Ye`` jet contains a whole pencil of length-2 subschemes; only the two
    coordinate directions are listed and the family flag is raised.
    """
    if X.length < 2:
        raise InvalidScheme("need |X| >= 2")
    out, family = [], False
    for i, j in enumerate(X.jets):
        rest = X.jets[:i] + X.jets[i + 1:]
        if isinstance(j, Reduced):
            subs = [()]
        elif isinstance(j, Double):
            subs = [(Reduced(j.point),)]
        elif isinstance(j, CurvilinearTriple):
            subs = [(Double(j.point, j.t),)]
        elif isinstance(j, Yd):
            subs = [(Double(j.point, j.t_eta),)]
        elif isinstance(j, Ye):
            subs = [(Double(j.point, (1, 0)),), (Double(j.point, (0, 1)),)]
            family = True
        else:
            raise UnsupportedJet(repr(j))
        out.extend(ZeroScheme(rest[:i] + s + rest[i:]) for s in subs)
    return Colength1(out, family)


def scheme_sum(X: ZeroScheme) -> TorusPoint:
    """Sum of the support points counted with the length of their jets."""
    total = TorusPoint.zero()
    for j in X.jets:
        total = total + j.point * j.length
    return total


def embedded_points(X: ZeroScheme, tau: PeriodMatrix) -> np.ndarray:
    return np.array([embed(c.point, tau) for c in conditions(X)]).reshape(-1, 2)
