"""Square-wavepacket spatial moments and the transverse acceleration profile.

A square packet has uniform probability density 1/width^3 over a cube.
Moments < x^a y^b z^c / r^n > are evaluated with tensor-product
Gauss-Legendre quadrature whose order is escalated until two consecutive
orders agree to a relative tolerance; the integrand is smooth on the cube
(the origin is excluded by construction) so convergence is spectral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .deflection import MomentKey, contract_force, required_tuples_for
from .errors import NumericalError, ValidationError

_GL_ORDERS = (6, 10, 14, 20, 28, 40, 56)


@dataclass(frozen=True)
class WavePacket:
    """Cube of uniform |psi|^2: center (natural-unit lengths) and edge width."""

    center: tuple[float, float, float]
    width: float

    def __post_init__(self):
        if self.width <= 0:
            raise ValidationError("packet width must be positive")
        if not all(math.isfinite(c) for c in self.center):
            raise ValidationError("packet center must be finite")
        # The closed ball around the cube must exclude the point dipole.
        if np.linalg.norm(self.center) <= math.sqrt(3.0) * self.width / 2.0:
            raise ValidationError("singular support: packet cube touches the origin")


@lru_cache(maxsize=None)
def _leggauss(order: int):
    return np.polynomial.legendre.leggauss(order)


def _evaluate(
    packet: WavePacket, tuples: Sequence[MomentKey], order: int
) -> dict[MomentKey, tuple[float, float]]:
    """Per tuple: (moment, L1 moment).  The L1 value sets the convergence
    scale so that moments that vanish by symmetry are not compared against
    their own rounding noise."""
    nodes, wts = _leggauss(order)
    half = 0.5 * packet.width
    cx, cy, cz = packet.center
    X, Y, Z = np.meshgrid(
        cx + half * nodes, cy + half * nodes, cz + half * nodes, indexing="ij"
    )
    # Weights normalized so that moment(0,0,0,0) == 1 exactly.
    W = np.einsum("i,j,k->ijk", wts, wts, wts) / 8.0
    R = np.sqrt(X * X + Y * Y + Z * Z)
    out = {}
    for a, b, c, n in tuples:
        integrand = X**a * Y**b * Z**c
        if n:
            integrand = integrand / R**n
        out[(a, b, c, n)] = (
            float(np.sum(W * integrand)),
            float(np.sum(np.abs(W * integrand))),
        )
    return out


def moments(
    packet: WavePacket,
    tuples: Iterable[MomentKey],
    rel_tol: float = 1e-10,
) -> dict[MomentKey, float]:
    """Evaluate a batch of moments on shared quadrature nodes, adaptively.

    The Gauss-Legendre order is raised until every requested moment's
    relative change between consecutive orders drops below ``rel_tol``.
    """
    tuples = sorted(set(tuples))
    for a, b, c, n in tuples:
        if min(a, b, c, n) < 0:
            raise ValidationError(f"moment exponents must be non-negative, got {(a, b, c, n)}")
    if not tuples:
        return {}
    prev = _evaluate(packet, tuples, _GL_ORDERS[0])
    for order in _GL_ORDERS[1:]:
        cur = _evaluate(packet, tuples, order)
        converged = all(
            abs(cur[k][0] - prev[k][0]) <= rel_tol * max(cur[k][1], 1e-300)
            for k in tuples
        )
        if converged:
            return {k: v[0] for k, v in cur.items()}
        prev = cur
    raise NumericalError(
        f"moment quadrature failed to converge to {rel_tol} by order {_GL_ORDERS[-1]}"
    )


def moment(packet: WavePacket, a: int, b: int, c: int, n: int, rel_tol: float = 1e-10) -> float:
    """Single moment < x^a y^b z^c / r^n > over the packet."""
    return moments(packet, [(a, b, c, n)], rel_tol=rel_tol)[(a, b, c, n)]


@dataclass(frozen=True)
class AccelerationProfile:
    """Sampled a_z(y) along a transverse sweep at fixed x, z and packet width."""

    y: np.ndarray
    a_z: np.ndarray
    x: float
    z: float
    width: float

    def __post_init__(self):
        if len(self.y) != len(self.a_z):
            raise ValidationError("profile arrays must have equal length")
        if len(self.y) >= 2 and not np.all(np.diff(self.y) > 0):
            raise ValidationError("profile y samples must be strictly increasing")


def acceleration_profile(
    spin: np.ndarray,
    z: float,
    x: float = 0.0,
    y_range: tuple[float, float] = (-0.5, 0.5),
    n_samples: int = 201,
    width: float = 1e-3,
    coupling_sign: int = 1,
) -> AccelerationProfile:
    """Sweep the packet center along y and contract the force at each sample.

    Works for any spin input (pure state or density matrix); the moment
    set is derived once from the state's nonzero correlators.
    """
    if n_samples < 2:
        raise ValidationError("need at least two profile samples")
    if y_range[1] <= y_range[0]:
        raise ValidationError("y_range must be increasing")
    tuples = required_tuples_for(spin)
    ys = np.linspace(y_range[0], y_range[1], n_samples)
    a_values = np.empty_like(ys)
    for k, y in enumerate(ys):
        packet = WavePacket(center=(x, float(y), z), width=width)
        m = moments(packet, tuples)
        a_values[k] = contract_force(spin, m, coupling_sign=coupling_sign).a_z
    return AccelerationProfile(y=ys, a_z=a_values, x=x, z=z, width=width)


def _negative_runs(a: np.ndarray) -> list[tuple[int, int]]:
    runs = []
    start = None
    for i, v in enumerate(a):
        if v < 0 and start is None:
            start = i
        elif v >= 0 and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(a) - 1))
    return runs


def region_average(profile: AccelerationProfile) -> float:
    """Trapezoidal mean of a_z over the contiguous negative-sign interval.

    With several negative runs the longest one is used (ties: first).
    """
    runs = _negative_runs(profile.a_z)
    if not runs:
        raise ValidationError("no negative-acceleration samples in profile")
    start, stop = max(runs, key=lambda r: r[1] - r[0])
    if start == stop:
        return float(profile.a_z[start])
    ys = profile.y[start : stop + 1]
    az = profile.a_z[start : stop + 1]
    return float(np.trapezoid(az, ys) / (ys[-1] - ys[0]))


def zero_crossings(profile: AccelerationProfile) -> list[float]:
    """Linear-interpolated roots between adjacent sign-changing samples."""
    ys, az = profile.y, profile.a_z
    crossings = []
    for i in range(len(ys) - 1):
        a0, a1 = az[i], az[i + 1]
        if a0 == 0.0:
            crossings.append(float(ys[i]))
        elif a0 * a1 < 0:
            crossings.append(float(ys[i] - a0 * (ys[i + 1] - ys[i]) / (a1 - a0)))
    if len(ys) >= 1 and az[-1] == 0.0:
        crossings.append(float(ys[-1]))
    return crossings


def profile_csv(profile: AccelerationProfile) -> str:
    """CSV rendering with 12 significant digits: header `y,a_z`, one row per sample."""
    lines = ["y,a_z"]
    for y, a in zip(profile.y, profile.a_z):
        lines.append(f"{y:.12g},{a:.12g}")
    return "\n".join(lines) + "\n"
