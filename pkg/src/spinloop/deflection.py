"""Closed-form deflection expectations from spin correlators and spatial moments.

The time-squared coefficient of the propagator expansion factorizes into
spin correlators C_ij = <S_i_p S_j_l> times spatial moments of the packet
density.  Writing M[a,b,c,n] = < x^a y^b z^c / r^n >, the z-acceleration
in natural units is

    a_z = sign * (3 / 4 pi) * sum_ij C_ij * ( d_iz M[e_j; 5] + d_jz M[e_i; 5]
                                              - 5 M[e_i + e_j + e_z; 7]
                                              + d_ij M[e_z; 5] )

For a parallel-spin configuration only C_zz = 1/4 survives and the sum
collapses to the closed form (3/16 pi) (3 M[0,0,1,5] - 5 M[0,0,3,7]).
Correlators beyond C_zz (present for coherent superpositions) are kept
and reported separately from the C_zz part, never dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import ValidationError
from .spins import SPIN_PAIR, density_of
from .units import PhysicalParams

MomentKey = tuple[int, int, int, int]

# Exponent tuples: _LINEAR[j] = r_j / r^5, _QUADRATIC[i][j] = r_i r_j z / r^7.
_E = np.eye(3, dtype=int)
_LINEAR: list[MomentKey] = [tuple(_E[j]) + (5,) for j in range(3)]
_QUADRATIC: list[list[MomentKey]] = [
    [tuple(_E[i] + _E[j] + _E[2]) + (7,) for j in range(3)] for i in range(3)
]

PARALLEL_TUPLES: tuple[MomentKey, ...] = ((0, 0, 1, 5), (0, 0, 3, 7))


def spin_correlators(state: np.ndarray, tol: float = 1e-14) -> np.ndarray:
    """3x3 matrix C_ij = <S_i_p S_j_l> for a pure state or density matrix.

    Each S_i_p S_j_l is Hermitian (the slots commute), so C is real; tiny
    imaginary residue below ``tol`` is discarded.
    """
    rho = density_of(state)
    C = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            val = complex(np.trace(rho @ SPIN_PAIR[i][j]))
            if abs(val.imag) > 1e-10:
                raise ValidationError("spin correlator came out complex; state is invalid")
            C[i, j] = val.real
    C[np.abs(C) < tol] = 0.0
    return C


def required_moment_tuples(C: np.ndarray) -> list[MomentKey]:
    """Moment keys needed to contract the force against correlators C."""
    needed: set[MomentKey] = set()
    for i in range(3):
        for j in range(3):
            if C[i, j] == 0.0:
                continue
            needed.add(_QUADRATIC[i][j])
            if i == 2:
                needed.add(_LINEAR[j])
            if j == 2:
                needed.add(_LINEAR[i])
            if i == j:
                needed.add(_LINEAR[2])
    return sorted(needed)


def required_tuples_for(state: np.ndarray) -> list[MomentKey]:
    return required_moment_tuples(spin_correlators(state))


@dataclass(frozen=True)
class ForceExpectation:
    """Spin-contracted force expectation in natural units (l / tau^2).

    ``decomposition`` holds the four bracket terms evaluated with the
    C_zz correlator alone (the parallel/antiparallel closed-form content);
    ``extra_terms`` is the total contribution of every other correlator.
    a_z equals sum(decomposition.values()) + extra_terms.
    """

    a_z: float
    decomposition: dict[str, float]
    extra_terms: float


def _lookup(moments: Mapping[MomentKey, float], keys: list[MomentKey]) -> None:
    missing = [k for k in keys if k not in moments]
    if missing:
        raise ValidationError(f"missing moment tuples: {missing}")


def contract_force(
    state: np.ndarray,
    moments: Mapping[MomentKey, float],
    params: PhysicalParams | None = None,
    coupling_sign: int | None = None,
) -> ForceExpectation:
    """Contract the force bracket against a spin state and packet moments.

    ``moments`` must contain every tuple required by the state's nonzero
    correlators (see :func:`required_moment_tuples`).  The sign of the
    coupling comes from ``params`` when given, else ``coupling_sign``,
    else +1.
    """
    if coupling_sign is None:
        coupling_sign = params.coupling_sign if params is not None else 1
    C = spin_correlators(state)
    _lookup(moments, required_moment_tuples(C))

    pref = coupling_sign * 3.0 / (4.0 * np.pi)
    czz = C[2, 2]
    m_z5 = moments.get((0, 0, 1, 5), 0.0)
    m_z37 = moments.get((0, 0, 3, 7), 0.0)
    decomposition = {
        "sz_particle_radial_loop": pref * czz * m_z5,
        "radial_particle_sz_loop": pref * czz * m_z5,
        "double_radial_projection": pref * czz * (-5.0) * m_z37,
        "spin_dot_z": pref * czz * m_z5,
    }

    extra = 0.0
    for i in range(3):
        for j in range(3):
            cij = C[i, j]
            if cij == 0.0 or (i == 2 and j == 2):
                continue
            term = -5.0 * moments[_QUADRATIC[i][j]]
            if i == 2:
                term += moments[_LINEAR[j]]
            if j == 2:
                term += moments[_LINEAR[i]]
            if i == j:
                term += m_z5
            extra += pref * cij * term

    a_z = sum(decomposition.values()) + extra
    return ForceExpectation(a_z=a_z, decomposition=decomposition, extra_terms=extra)


def parallel_closed_form(
    moments: Mapping[MomentKey, float],
    params: PhysicalParams | None = None,
    coupling_sign: int | None = None,
) -> float:
    """Closed form sign * (3/16 pi) (-5 M[0,0,3,7] + 3 M[0,0,1,5]), contact term omitted."""
    if coupling_sign is None:
        coupling_sign = params.coupling_sign if params is not None else 1
    _lookup(moments, list(PARALLEL_TUPLES))
    m_z5 = moments[(0, 0, 1, 5)]
    m_z37 = moments[(0, 0, 3, 7)]
    return coupling_sign * 3.0 / (16.0 * np.pi) * (-5.0 * m_z37 + 3.0 * m_z5)


def antiparallel_closed_form(
    moments: Mapping[MomentKey, float],
    params: PhysicalParams | None = None,
    coupling_sign: int | None = None,
) -> float:
    """Exactly the negative of the parallel closed form."""
    return -parallel_closed_form(moments, params=params, coupling_sign=coupling_sign)


def classical_dipole_force(m1: float, m2: float, z: float, mu0: float) -> float:
    """On-axis force (newtons) between aligned point dipoles a distance z apart.

    F_z = -3 mu0 m1 m2 / (2 pi z^4) for z > 0; attraction for aligned
    moments.  The sign flips with either moment or with the side of the
    axis.
    """
    if z == 0.0:
        raise ValidationError("classical dipole force diverges at z = 0")
    return -3.0 * mu0 * m1 * m2 * z / (2.0 * np.pi * abs(z) ** 5)
