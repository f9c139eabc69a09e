"""Direct Schrodinger evolution of the 4-component wavefunction on a 3-D grid.

This is the brute-force cross-check for the perturbative deflection: the
initial packet is evolved under the full Hamiltonian

    i dPsi/ds = [ -(kappa/2) Lap + V(r) ] Psi,
    V(r) = coupling(r) / kappa + Zeeman,   kappa = hbar tau / (m l^2),

where positions are in l, times in tau, and coupling(r) is the natural-unit
dipole-dipole operator of :mod:`spinloop.fields` (whose expectation gradient
is the acceleration in l/tau^2).  A quadratic fit of <z>(t) then recovers
the initial acceleration with no perturbative input.

Discretization: 2nd-order finite-difference Laplacian with Dirichlet walls
and classical RK4 time stepping.  The momentum stencil conjugate to this
Laplacian is the plain central difference, which is what
:func:`expect_momentum_z` measures, so the fitted velocity matches
kappa * <p_z> exactly up to fit error.

The square packet is represented on the grid with cosine-smoothed edges a
few cells wide: a sharp discontinuity is not representable on a grid and
its aliased spectral tail would swamp the sub-1e-10 displacement signals
measured here.  All perturbative comparisons use the moments of the
as-initialized discrete density (same packet on both sides).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .deflection import MomentKey
from .errors import NumericalError, ValidationError
from .packets import WavePacket
from .spins import SPIN_PAIR, embed, spin_dot, spin_generator

_SPIN_DOT = spin_dot()
_SZ_P = embed(spin_generator("z"), "particle")
_SZ_L = embed(spin_generator("z"), "loop")

# RK4 is stable for |lambda| dt <= 2*sqrt(2) on the imaginary axis; specs
# are rejected beyond 2.0 and defaults run far below that so that the
# amplification error stays under the norm budget.
RK4_STABILITY_LIMIT = 2.0
DEFAULT_THETA = 0.15
STEP_NORM_DRIFT_LIMIT = 1e-6


@dataclass(frozen=True)
class GridSpec:
    """Geometry and stepping of the evolution grid."""

    points_per_axis: int
    box_center: tuple[float, float, float]
    box_half_width: float
    dt: float
    steps: int
    kinetic_scale: float

    def __post_init__(self):
        if self.points_per_axis < 8:
            raise ValidationError("grid needs at least 8 points per axis")
        if self.box_half_width <= 0:
            raise ValidationError("box half width must be positive")
        if self.kinetic_scale <= 0:
            raise ValidationError("kinetic scale must be positive")
        if self.steps < 1:
            raise ValidationError("steps must be >= 1")
        if self.min_radius() <= 0:
            raise ValidationError("grid box must exclude the dipole at the origin")
        if self.dt <= 0:
            raise ValidationError("dt must be positive")
        bound = spectral_radius_bound(self)
        if self.dt * bound > RK4_STABILITY_LIMIT:
            raise ValidationError(
                f"dt {self.dt} exceeds the RK4 stability bound {RK4_STABILITY_LIMIT / bound:.3e}"
            )

    @property
    def dx(self) -> float:
        return 2.0 * self.box_half_width / (self.points_per_axis - 1)

    def min_radius(self) -> float:
        return float(np.linalg.norm(self.box_center) - math.sqrt(3.0) * self.box_half_width)

    def axes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        base = np.linspace(-self.box_half_width, self.box_half_width, self.points_per_axis)
        return (base + self.box_center[0], base + self.box_center[1], base + self.box_center[2])

    def meshes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        ax, ay, az = self.axes()
        return np.meshgrid(ax, ay, az, indexing="ij")


@dataclass(frozen=True)
class GridHamiltonian:
    """Which Hamiltonian terms act on the grid, in dimensionless strengths.

    ``zeeman_particle`` and ``zeeman_loop`` are alpha*B0*tau and
    beta*B0*tau respectively; the coupling term is divided by the kinetic
    scale as required by the tau-based time variable.  ``coupling_scale``
    multiplies the dipole coupling (1.0 = the natural-unit strength) so
    that sensitivity checks can strengthen or weaken the interaction.
    """

    include_kinetic: bool = True
    include_interaction: bool = True
    coupling_sign: int = 1
    coupling_scale: float = 1.0
    zeeman_particle: float = 0.0
    zeeman_loop: float = 0.0


def interaction_bound(spec: GridSpec) -> float:
    """Upper bound on the dimensionless coupling norm over the box."""
    r_min = spec.min_radius()
    return (3.0 / 2.0) / (4.0 * np.pi * r_min**3) / spec.kinetic_scale


def spectral_radius_bound(spec: GridSpec, ham: GridHamiltonian | None = None) -> float:
    """Conservative spectral-radius estimate of the discrete Hamiltonian."""
    kinetic = spec.kinetic_scale / 2.0 * 12.0 / spec.dx**2
    potential = interaction_bound(spec)
    if ham is not None:
        if not ham.include_kinetic:
            kinetic = 0.0
        potential = potential * abs(ham.coupling_scale) if ham.include_interaction else 0.0
        potential += 0.5 * (abs(ham.zeeman_particle) + abs(ham.zeeman_loop))
    return kinetic + potential


def stable_dt(spec_like: GridSpec, theta: float = DEFAULT_THETA) -> float:
    """Time step with |lambda| dt = theta against the spectral-radius bound."""
    return theta / spectral_radius_bound(spec_like)


@dataclass
class GridState:
    """4-component amplitudes on the grid; treated as immutable once built."""

    amplitudes: np.ndarray  # shape (n, n, n, 4), complex

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def density(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=-1)

    def spin_marginal(self) -> np.ndarray:
        """Reduced 4x4 spin density matrix (trace over position)."""
        flat = self.amplitudes.reshape(-1, 4)
        return flat.T @ flat.conj()


def _edge_profile(coords: np.ndarray, center: float, width: float, ramp: float) -> np.ndarray:
    """1-D density profile: flat top with half-cosine ramps of width ``ramp``."""
    d = np.abs(coords - center) - width / 2.0
    out = np.zeros_like(coords)
    out[d <= -ramp] = 1.0
    mask = np.abs(d) < ramp
    out[mask] = 0.5 * (1.0 - np.sin(0.5 * np.pi * d[mask] / ramp))
    return out


def initialize(
    packet: WavePacket,
    spin: np.ndarray,
    spec: GridSpec,
    momentum_z: float = 0.0,
    edge_ramp_cells: float = 3.0,
) -> GridState:
    """Square-packet profile (edge-smoothed) times a spin vector, grid-normalized.

    ``momentum_z`` applies a plane-wave factor exp(i k z) so that runs with
    a nonzero initial velocity can exercise the velocity and higher-order
    checks.  The packet (including ramps) must sit at least 2 cells inside
    the box.
    """
    spin = np.asarray(spin, dtype=complex)
    if spin.shape != (4,):
        raise ValidationError("grid initialization needs a pure 4-component spin state")
    if edge_ramp_cells <= 0:
        raise ValidationError("edge_ramp_cells must be positive")
    ramp = edge_ramp_cells * spec.dx
    extent = packet.width / 2.0 + ramp
    margin = 2.0 * spec.dx
    for i in range(3):
        if abs(packet.center[i] - spec.box_center[i]) + extent > spec.box_half_width - margin:
            raise ValidationError("packet outside box (needs >= 2 cells of margin)")
    ax, ay, az = spec.axes()
    prof = (
        _edge_profile(ax, packet.center[0], packet.width, ramp)[:, None, None]
        * _edge_profile(ay, packet.center[1], packet.width, ramp)[None, :, None]
        * _edge_profile(az, packet.center[2], packet.width, ramp)[None, None, :]
    )
    amp = np.sqrt(prof).astype(complex)
    if momentum_z != 0.0:
        amp = amp * np.exp(1j * momentum_z * az)[None, None, :]
    psi = amp[..., None] * spin[None, None, None, :]
    total = np.sqrt(np.sum(np.abs(psi) ** 2))
    if total == 0.0:
        raise ValidationError("packet has no support on the grid")
    return GridState(amplitudes=psi / total)


class GridOperator:
    """Precomputed action of the discrete Hamiltonian on a grid state."""

    def __init__(self, spec: GridSpec, ham: GridHamiltonian):
        self.spec = spec
        self.ham = ham
        self.kappa = spec.kinetic_scale if ham.include_kinetic else 0.0
        self.dx = spec.dx
        self.potential = self._build_potential()

    def _build_potential(self) -> np.ndarray | None:
        ham = self.ham
        spec = self.spec
        V = None
        if ham.include_interaction:
            X, Y, Z = spec.meshes()
            R2 = X * X + Y * Y + Z * Z
            R = np.sqrt(R2)
            rv = (X, Y, Z)
            V = np.zeros(X.shape + (4, 4), dtype=complex)
            for i in range(3):
                for j in range(3):
                    V += (rv[i] * rv[j])[..., None, None] * SPIN_PAIR[i][j][None, None, None]
            V *= (3.0 / R2)[..., None, None]
            V -= _SPIN_DOT[None, None, None]
            V *= (-ham.coupling_sign * ham.coupling_scale / (4.0 * np.pi * R**3))[
                ..., None, None
            ]
            V /= spec.kinetic_scale
        zee = -(ham.zeeman_particle * _SZ_P + ham.zeeman_loop * _SZ_L)
        if np.any(zee):
            if V is None:
                n = spec.points_per_axis
                V = np.broadcast_to(zee, (n, n, n, 4, 4)).copy()
            else:
                V += zee[None, None, None]
        return V

    def _laplacian(self, u: np.ndarray) -> np.ndarray:
        out = np.zeros_like(u)
        out[1:-1] += u[2:] + u[:-2]
        out[:, 1:-1] += u[:, 2:] + u[:, :-2]
        out[:, :, 1:-1] += u[:, :, 2:] + u[:, :, :-2]
        out -= 6.0 * u
        return out / self.dx**2

    def apply(self, psi: np.ndarray) -> np.ndarray:
        out = None
        if self.kappa:
            out = (-self.kappa / 2.0) * self._laplacian(psi)
        if self.potential is not None:
            pot = np.einsum("xyzab,xyzb->xyza", self.potential, psi)
            out = pot if out is None else out + pot
        if out is None:
            out = np.zeros_like(psi)
        return out


def evolve(state: GridState, spec: GridSpec, operator: GridOperator) -> GridState:
    """One RK4 step of size ``spec.dt``; errors out on a norm jump."""
    psi = state.amplitudes
    dt = spec.dt
    H = operator.apply
    k1 = -1j * H(psi)
    k2 = -1j * H(psi + 0.5 * dt * k1)
    k3 = -1j * H(psi + 0.5 * dt * k2)
    k4 = -1j * H(psi + dt * k3)
    new = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    before = float(np.sum(np.abs(psi) ** 2))
    after = float(np.sum(np.abs(new) ** 2))
    if abs(after - before) > STEP_NORM_DRIFT_LIMIT * max(before, 1e-300):
        raise NumericalError(f"unstable step: norm drifted by {after - before:.3e} in one step")
    return GridState(amplitudes=new)


@dataclass(frozen=True)
class TimeSeries:
    """Recorded expectation trajectory: time, <z> and total norm."""

    t: np.ndarray
    z_expect: np.ndarray
    norm: np.ndarray

    def max_norm_drift(self) -> float:
        return float(np.max(np.abs(self.norm - 1.0)))


def run(state: GridState, spec: GridSpec, operator: GridOperator) -> tuple[GridState, TimeSeries]:
    """Evolve ``spec.steps`` steps recording <z> and the norm at every step."""
    _, _, Z = spec.meshes()
    ts = [0.0]
    zs = [float(np.sum(state.density() * Z))]
    norms = [state.norm() ** 2]
    for k in range(spec.steps):
        state = evolve(state, spec, operator)
        ts.append((k + 1) * spec.dt)
        zs.append(float(np.sum(state.density() * Z)))
        norms.append(state.norm() ** 2)
    series = TimeSeries(t=np.array(ts), z_expect=np.array(zs), norm=np.array(norms))
    return state, series


def expect_position(state: GridState, spec: GridSpec) -> np.ndarray:
    dens = state.density()
    dens = dens / dens.sum()
    X, Y, Z = spec.meshes()
    return np.array([np.sum(dens * X), np.sum(dens * Y), np.sum(dens * Z)])


def expect_momentum_z(state: GridState, spec: GridSpec) -> float:
    """<p_z> with the central-difference stencil conjugate to the Laplacian."""
    psi = state.amplitudes
    d = np.zeros_like(psi)
    d[:, :, 1:-1] = (psi[:, :, 2:] - psi[:, :, :-2]) / (2.0 * spec.dx)
    val = np.sum(np.conj(psi) * (-1j) * d)
    return float(val.real) / state.norm() ** 2


def moments_from_state(
    state: GridState, spec: GridSpec, tuples: Iterable[MomentKey]
) -> dict[MomentKey, float]:
    """Spatial moments of the as-discretized density, for apples-to-apples
    comparison against the perturbative contraction."""
    dens = state.density()
    dens = dens / dens.sum()
    X, Y, Z = spec.meshes()
    R = np.sqrt(X * X + Y * Y + Z * Z)
    out = {}
    for a, b, c, n in set(tuples):
        f = dens * X**a * Y**b * Z**c
        if n:
            f = f / R**n
        out[(a, b, c, n)] = float(np.sum(f))
    return out


@dataclass(frozen=True)
class QuadraticFit:
    """Least-squares z(t) ~ z0 + v0 t + (a/2) t^2 with 2-sigma coefficient scales."""

    z0: float
    v0: float
    a: float
    residual_rms: float
    sigma_v0: float
    sigma_a: float


def fit_acceleration(t: np.ndarray, z: np.ndarray) -> QuadraticFit:
    """Quadratic least-squares fit of an expectation trajectory.

    Fitted in the scaled variable s = t / max(t) so the normal equations
    stay well conditioned for arbitrarily short windows.
    """
    t = np.asarray(t, dtype=float)
    z = np.asarray(z, dtype=float)
    if t.ndim != 1 or t.shape != z.shape:
        raise ValidationError("fit needs matching 1-D t and z arrays")
    if len(t) < 4:
        raise ValidationError("fit needs at least 4 samples")
    if not np.all(np.diff(t) > 0):
        raise ValidationError("fit needs strictly increasing times")
    scale = float(t[-1]) if t[-1] > 0 else 1.0
    s = t / scale
    A = np.vstack([np.ones_like(s), s, s * s]).T
    gram = A.T @ A
    if np.linalg.cond(gram) > 1e12:
        raise ValidationError("degenerate fit: time samples are ill-conditioned")
    coef, *_ = np.linalg.lstsq(A, z, rcond=None)
    resid = z - A @ coef
    rms = float(np.sqrt(np.mean(resid**2)))
    cov = np.linalg.inv(gram)
    return QuadraticFit(
        z0=float(coef[0]),
        v0=float(coef[1] / scale),
        a=float(2.0 * coef[2] / scale**2),
        residual_rms=rms,
        sigma_v0=float(2.0 * rms * np.sqrt(cov[1, 1]) / scale),
        sigma_a=float(4.0 * rms * np.sqrt(cov[2, 2]) / scale**2),
    )


def remainder_residuals(series: TimeSeries, windows: Sequence[float]) -> list[float]:
    """RMS residual of a windowed quadratic fit, per window end time."""
    out = []
    for T in windows:
        mask = series.t <= T * (1.0 + 1e-12)
        if mask.sum() < 8:
            raise ValidationError(f"window {T} holds fewer than 8 samples")
        fit = fit_acceleration(series.t[mask], series.z_expect[mask])
        out.append(fit.residual_rms)
    return out


def remainder_scaling(
    series: TimeSeries,
    windows: Sequence[float],
    length_scale: float | None = None,
) -> float:
    """Log-log slope of the beyond-quadratic residual versus window length.

    The residual left after the best quadratic fit grows like the cube of
    the window when the leading correction is a t^3 term.  If even the
    largest window's residual sits below 10x the norm-conservation error
    (scaled by ``length_scale``, default max |<z>|), the measurement is
    noise and an error is raised.
    """
    windows = sorted(windows)
    if len(windows) < 2:
        raise ValidationError("remainder scaling needs at least two windows")
    residuals = remainder_residuals(series, windows)
    if length_scale is None:
        length_scale = float(np.max(np.abs(series.z_expect)))
    floor = 10.0 * series.max_norm_drift() * length_scale
    if max(residuals) < floor:
        raise NumericalError(
            f"below resolution: residual {max(residuals):.3e} under noise floor {floor:.3e}"
        )
    slope = np.polyfit(np.log(np.asarray(windows)), np.log(np.asarray(residuals)), 1)[0]
    return float(slope)


def canonical_commutator_residual(
    g_coeffs: Sequence[float],
    points: int = 64,
    half_width: float = 1.0,
) -> float:
    """L2 residual of [g(z), p_z] - i g'(z) applied to a smooth test packet.

    1-D check with the same central-difference momentum stencil the
    evolution uses; g is a polynomial (coefficients low to high, degree
    <= 3).  The residual is O(dx^2) for smooth packets and vanishes for
    constant g.
    """
    g_coeffs = list(g_coeffs)
    if len(g_coeffs) > 4:
        raise ValidationError("polynomial degree must be <= 3")
    z = np.linspace(-half_width, half_width, points)
    dx = z[1] - z[0]
    phi = np.exp(-(z**2) / (2.0 * (half_width / 6.0) ** 2)).astype(complex)
    phi /= np.linalg.norm(phi)
    g = np.polynomial.polynomial.polyval(z, g_coeffs)
    dg = np.polynomial.polynomial.polyval(z, np.polynomial.polynomial.polyder(g_coeffs))

    # [g, p] phi in the algebraically rearranged (exactly cancelling) form
    # i [ (g_{n+1} - g_n) phi_{n+1} + (g_n - g_{n-1}) phi_{n-1} ] / (2 dx):
    # a constant g yields an exact zero, not rounding residue.
    comm = np.zeros_like(phi)
    comm[1:-1] = 1j * ((g[2:] - g[1:-1]) * phi[2:] + (g[1:-1] - g[:-2]) * phi[:-2]) / (2.0 * dx)
    residual = comm - 1j * dg * phi
    residual[0] = residual[-1] = 0.0  # stencil undefined on the walls
    return float(np.linalg.norm(residual))


def series_csv(series: TimeSeries) -> str:
    """CSV rendering with 12 significant digits: `t,z_expect,norm`."""
    lines = ["t,z_expect,norm"]
    for t, z, n in zip(series.t, series.z_expect, series.norm):
        lines.append(f"{t:.12g},{z:.12g},{n:.12g}")
    return "\n".join(lines) + "\n"
