"""Riemann theta functions with half-integer characteristics in genus 2.

Convention::

    theta[a, b](z, tau) = sum_n exp(pi i (n+a)^T tau (n+a) + 2 pi i (n+a)^T (z+b))

Before summing, ``z`` is moved into the fundamental cell, ``z = z' + tau k + m``,
and the quasi-periodicity factor is returned separately as ``log_factor``.
Derivatives are taken term by term; because the log factor is linear in ``z``
its gradient ``-2 pi i k`` is simply folded into each term's frequency vector,
so every derivative tensor refers to the *full* function.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .surface import PeriodMatrix

TWO_PI_I = 2j * np.pi
TAIL_RTOL = 1e-12


class TruncationInsufficient(RuntimeError):
    """The Gaussian tail bound exceeds ``1e-12`` of the leading term."""


@dataclass(frozen=True)
class Characteristic:
    a: tuple[float, float] = (0.0, 0.0)
    b: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        for x in (*self.a, *self.b):
            if x not in (0.0, 0.5):
                raise ValueError(f"characteristic entries must be 0 or 1/2, got {x}")

    @property
    def parity(self) -> int:
        """+1 for even characteristics, -1 for odd ones."""
        return -1 if round(4 * float(np.dot(self.a, self.b))) % 2 else 1

    @classmethod
    def all(cls) -> list["Characteristic"]:
        half = (0.0, 0.5)
        return [cls((a1, a2), (b1, b2)) for a1, a2, b1, b2 in itertools.product(half, repeat=4)]


ZERO_CHAR = Characteristic()


@dataclass(frozen=True)
class ThetaValue:
    log_factor: complex
    reduced_value: complex

    @property
    def value(self) -> complex:
        return complex(np.exp(self.log_factor) * self.reduced_value)


def _tail_exponent(lam: float, n: int, order: int) -> float:
    j = np.arange(n + 1, n + 80, dtype=float)
    terms = np.log(8 * j) + order * np.log(2 * np.pi * (j + 2)) - np.pi * lam * (j - 1) ** 2
    return float(np.logaddexp.reduce(terms))


def theta_tensors(ch: Characteristic, z, tau, order: int = 0, truncation: int = 8):
    """Reduced derivative tensors of ``theta[ch](z, tau)`` up to ``order``.

    ``z`` has shape (..., 2).  Returns ``(log_factor, tensors)`` where
    ``tensors[r]`` has shape (..., 2, ..., 2) with ``r`` trailing axes and the
    r-th derivative tensor of the full function is ``exp(log_factor) * tensors[r]``.
    ``tau`` may be a PeriodMatrix or a raw 2x2 array.
    """
    if truncation < 3:
        raise ValueError("truncation must be >= 3")
    t = tau.matrix if isinstance(tau, PeriodMatrix) else np.asarray(tau, dtype=complex)
    z = np.asarray(z, dtype=complex)
    shape = z.shape[:-1]
    z = z.reshape(-1, 2)
    a = np.asarray(ch.a)
    b = np.asarray(ch.b)
    im = t.imag

    u1, u2, q, im_inv, tail = _series_data(t.tobytes(), ch, truncation, order)
    y = z.imag @ im_inv.T
    k = np.round(y)
    z1 = z - k @ t.T
    m = np.round(z1.real)
    zr = z1 - m
    log_factor = (
        TWO_PI_I * (m @ a)
        - 1j * np.pi * np.einsum("bi,ij,bj->b", k, t, k)
        - TWO_PI_I * np.einsum("bi,bi->b", k, zr + b)
    )
    _check_tail(zr, a, im, im_inv, tail, truncation)

    e1 = np.exp(TWO_PI_I * zr[:, 0:1] * u1[None, :])
    e2 = np.exp(TWO_PI_I * zr[:, 1:2] * u2[None, :])

    # moments S[i, j] = sum w (u1 - k1)^i (u2 - k2)^j
    d1 = u1[None, :] - k[:, 0:1]
    d2 = u2[None, :] - k[:, 1:2]
    moments = {}
    p = e1
    for i in range(order + 1):
        pq = p @ q
        s = e2
        for j in range(order + 1 - i):
            moments[i, j] = np.einsum("bj,bj->b", pq, s)
            s = s * d2
        p = p * d1

    tensors = [moments[0, 0].reshape(shape)]
    for rr in range(1, order + 1):
        ten = np.empty((z.shape[0],) + (2,) * rr, dtype=complex)
        scale = TWO_PI_I**rr
        for idx in itertools.product((0, 1), repeat=rr):
            n2 = sum(idx)
            ten[(slice(None),) + idx] = scale * moments[rr - n2, n2]
        tensors.append(ten.reshape(*shape, *([2] * rr)))
    return log_factor.reshape(shape), tensors


@functools.lru_cache(maxsize=256)
def _series_data(tau_bytes: bytes, ch: Characteristic, truncation: int, order: int):
    t = np.frombuffer(tau_bytes, dtype=complex).reshape(2, 2)
    a, b = np.asarray(ch.a), np.asarray(ch.b)
    # exp(2 pi i (n+a).(z+b)) factorises over the two coordinates; the cross
    # term of the quadratic form goes into a small (2N+1)^2 weight matrix
    r = np.arange(-truncation, truncation + 1, dtype=float)
    u1, u2 = r + a[0], r + a[1]
    quad = t[0, 0] * u1[:, None] ** 2 + 2 * t[0, 1] * u1[:, None] * u2[None, :] + t[1, 1] * u2[None, :] ** 2
    q = np.exp(1j * np.pi * quad + TWO_PI_I * (u1[:, None] * b[0] + u2[None, :] * b[1]))
    im_inv = np.linalg.inv(t.imag)
    tail = _tail_exponent(float(np.linalg.eigvalsh(t.imag)[0]), truncation, order)
    for arr in (u1, u2, q, im_inv):
        arr.setflags(write=False)
    return u1, u2, q, im_inv, tail


def _check_tail(zr, a, im, im_inv, tail, truncation):
    yr = zr.imag @ im_inv.T
    # leading term: the lattice vector nearest to -(a + y')
    base = np.round(-(a[None, :] + yr))
    lead = np.full(len(yr), -np.inf)
    for off in itertools.product((-1, 0, 1), repeat=2):
        v = base + np.array(off) + a[None, :] + yr
        lead = np.maximum(lead, -np.pi * np.einsum("bi,ij,bj->b", v, im, v))
    excess = np.max(tail - lead)
    if excess > np.log(TAIL_RTOL):
        raise TruncationInsufficient(
            f"truncation {truncation} too small: tail/leading ~ {np.exp(excess):.2e}"
        )


def theta(ch: Characteristic, z, tau, truncation: int = 8) -> ThetaValue:
    lf, (t0,) = theta_tensors(ch, np.asarray(z, dtype=complex), tau, 0, truncation)
    return ThetaValue(complex(lf), complex(t0))


def theta_value(ch: Characteristic, z, tau, truncation: int = 8) -> np.ndarray:
    """Full values of theta at an array of points of shape (..., 2)."""
    lf, (t0,) = theta_tensors(ch, z, tau, 0, truncation)
    return np.exp(lf) * t0


def theta_jet(ch: Characteristic, z, tau, truncation: int = 8):
    """Value, gradient and Hessian of the full function at a single point."""
    lf, (t0, t1, t2) = theta_tensors(ch, np.asarray(z, dtype=complex), tau, 2, truncation)
    s = np.exp(lf)
    return complex(s * t0), s * t1, s * t2


def directional(ch: Characteristic, z, tau, directions, truncation: int = 8) -> complex:
    """Mixed directional derivative ``D_{v1} ... D_{vr} theta(z)``."""
    directions = [np.asarray(v, dtype=complex) for v in directions]
    lf, tens = theta_tensors(ch, np.asarray(z, dtype=complex), tau, len(directions), truncation)
    out = tens[len(directions)]
    for v in directions:
        out = out @ v
    return complex(np.exp(lf) * out)


BASIS_ORDER = ((0, 0), (0, 1), (1, 0), (1, 1))
BASIS_CHARS = tuple(Characteristic((s1 / 2, s2 / 2), (0.0, 0.0)) for s1, s2 in BASIS_ORDER)


def basis_L2_tensors(z, tau, order: int = 0, truncation: int = 8):
    """Derivative tensors of ``Theta_s(z) = theta[s/2, 0](2z, 2tau)`` for the four ``s``.

    Returns ``(log_factor, tensors)`` with leading axis of length 4 (basis
    index in the order 00, 01, 10, 11).
    """
    t = tau.matrix if isinstance(tau, PeriodMatrix) else np.asarray(tau, dtype=complex)
    z = np.asarray(z, dtype=complex)
    lfs, tens = [], [[] for _ in range(order + 1)]
    for ch in BASIS_CHARS:
        lf, ts = theta_tensors(ch, 2 * z, 2 * t, order, truncation)
        lfs.append(lf)
        for r, tr in enumerate(ts):
            tens[r].append(tr * 2.0**r)
    return np.stack(lfs), [np.stack(tr) for tr in tens]


def basis_L2(z, tau, truncation: int = 8) -> np.ndarray:
    """The four basis sections of L^2 evaluated at ``z``."""
    lf, (t0,) = basis_L2_tensors(z, tau, 0, truncation)
    return np.exp(lf) * t0
