"""Wavepacket moments and the transverse acceleration profile."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinloop import packets, spins
from spinloop.deflection import PARALLEL_TUPLES
from spinloop.errors import ValidationError

# ---------------------------------------------------------------------------
# Independent oracle: midpoint Riemann sum over the cube.  The value below
# was produced by this very function at cells=100 (10^6 cells) for the
# reference packet, then frozen.
# ---------------------------------------------------------------------------


def riemann_moment(center, width, a, b, c, n, cells=100):
    e = (np.arange(cells) + 0.5) / cells - 0.5
    X = center[0] + width * e
    Y = center[1] + width * e
    Z = center[2] + width * e
    XX, YY, ZZ = np.meshgrid(X, Y, Z, indexing="ij")
    R = np.sqrt(XX**2 + YY**2 + ZZ**2)
    return float(np.mean(XX**a * YY**b * ZZ**c / R**n))


RIEMANN_M0015 = 39.062601714902385  # riemann_moment((0,0,0.4), 1e-3, 0,0,1,5, cells=100)
POINT_M0015 = 0.4 / 0.4**5  # = 39.0625, the width -> 0 limit


class TestWavePacket:
    def test_rejects_zero_width(self):
        with pytest.raises(ValidationError):
            packets.WavePacket(center=(0, 0, 0.4), width=0.0)

    def test_rejects_origin_in_cube(self):
        with pytest.raises(ValidationError, match="singular support"):
            packets.WavePacket(center=(0, 0, 0.01), width=0.1)

    def test_accepts_reference_packet(self):
        packets.WavePacket(center=(0, 0, 0.4), width=1e-3)


class TestMoment:
    def test_matches_riemann_oracle(self):
        pk = packets.WavePacket(center=(0, 0, 0.4), width=1e-3)
        val = packets.moment(pk, 0, 0, 1, 5)
        # oracle self-check at a coarser resolution, then the frozen value
        assert riemann_moment((0, 0, 0.4), 1e-3, 0, 0, 1, 5, cells=50) == pytest.approx(
            RIEMANN_M0015, rel=1e-8
        )
        assert val == pytest.approx(RIEMANN_M0015, rel=5e-9)

    def test_point_dipole_limit(self):
        # finite width shifts the moment by ~2.6e-6 relative; the point
        # value is recovered only as width -> 0
        pk = packets.WavePacket(center=(0, 0, 0.4), width=1e-3)
        assert packets.moment(pk, 0, 0, 1, 5) == pytest.approx(POINT_M0015, rel=5e-6)
        tiny = packets.WavePacket(center=(0, 0, 0.4), width=1e-5)
        assert packets.moment(tiny, 0, 0, 1, 5) == pytest.approx(POINT_M0015, rel=1e-9)

    def test_normalization_exact(self):
        pk = packets.WavePacket(center=(0, 0, 0.4), width=1e-3)
        assert packets.moment(pk, 0, 0, 0, 0) == pytest.approx(1.0, abs=1e-14)

    def test_odd_moment_vanishes(self):
        pk = packets.WavePacket(center=(0, 0.2, 0.4), width=1e-3)
        assert abs(packets.moment(pk, 1, 0, 0, 5)) < 1e-12

    def test_width_convergence_second_order(self):
        # |m(w) - m(0)| should shrink ~w^2: widths 1e-3 and 1e-4 differ by 1e2
        m3 = packets.moment(packets.WavePacket((0, 0, 0.4), 1e-3), 0, 0, 1, 5)
        m4 = packets.moment(packets.WavePacket((0, 0, 0.4), 1e-4), 0, 0, 1, 5)
        ratio = abs(m3 - POINT_M0015) / abs(m4 - POINT_M0015)
        assert ratio == pytest.approx(100.0, rel=0.05)

    def test_quadrature_stability_under_refinement(self):
        pk = packets.WavePacket(center=(0, 0.1, 0.4), width=1e-3)
        a = packets.moment(pk, 0, 0, 3, 7, rel_tol=1e-10)
        b = packets.moment(pk, 0, 0, 3, 7, rel_tol=1e-13)
        assert a == pytest.approx(b, rel=1e-10)

    def test_positive_moment_above_plane(self):
        pk = packets.WavePacket(center=(0.3, -0.2, 0.25), width=1e-2)
        assert packets.moment(pk, 0, 0, 1, 5) > 0

    def test_rejects_negative_exponent(self):
        pk = packets.WavePacket(center=(0, 0, 0.4), width=1e-3)
        with pytest.raises(ValidationError):
            packets.moment(pk, -1, 0, 0, 5)

    @given(st.floats(0.15, 0.6), st.floats(1e-4, 1e-2))
    @settings(max_examples=30, deadline=None)
    def test_odd_symmetry_property(self, z, width):
        pk = packets.WavePacket(center=(0.0, 0.0, z), width=width)
        assert abs(packets.moment(pk, 1, 0, 0, 5)) < 1e-12
        assert abs(packets.moment(pk, 0, 1, 2, 7)) < 1e-12


REFERENCE_PEAK = -4.662742473395371  # (3/16pi)(1/0.4^4)(3-5), point-packet value
REFERENCE_CROSSING = 0.4 * np.sqrt(2.0 / 3.0)  # root of 3 - 5 z^2 / r^2


@pytest.fixture(scope="module")
def fig_profile():
    return packets.acceleration_profile(
        spins.parallel_mixture(), z=0.4, x=0.0, y_range=(-0.5, 0.5),
        n_samples=201, width=1e-3,
    )


class TestAccelerationProfile:

    def test_peak_at_center(self, fig_profile):
        idx = np.argmin(np.abs(fig_profile.y))
        assert fig_profile.y[idx] == pytest.approx(0.0, abs=1e-12)
        assert fig_profile.a_z[idx] == pytest.approx(REFERENCE_PEAK, rel=1e-6)

    def test_zero_crossings(self, fig_profile):
        crossings = packets.zero_crossings(fig_profile)
        assert len(crossings) == 2
        assert crossings[0] == pytest.approx(-REFERENCE_CROSSING, abs=5e-3)
        assert crossings[1] == pytest.approx(REFERENCE_CROSSING, abs=5e-3)

    def test_negative_region_average(self, fig_profile):
        avg = packets.region_average(fig_profile)
        assert avg == pytest.approx(-2.22, rel=0.10)
        # frozen regression value from this implementation
        assert avg == pytest.approx(-2.2260495245836793, rel=1e-9)

    def test_antiparallel_is_mirror(self, fig_profile):
        anti = packets.acceleration_profile(
            spins.antiparallel_mixture(), z=0.4, x=0.0, y_range=(-0.5, 0.5),
            n_samples=201, width=1e-3,
        )
        scale = np.max(np.abs(fig_profile.a_z))
        assert np.max(np.abs(anti.a_z + fig_profile.a_z)) < 1e-10 * scale

    def test_profile_symmetric_in_y(self, fig_profile):
        assert np.allclose(fig_profile.a_z, fig_profile.a_z[::-1], rtol=1e-10)

    def test_pure_up_up_matches_mixture(self, fig_profile):
        pure = packets.acceleration_profile(
            spins.basis_state("up", "up"), z=0.4, x=0.0, y_range=(-0.1, 0.1),
            n_samples=5, width=1e-3,
        )
        ref = packets.acceleration_profile(
            spins.parallel_mixture(), z=0.4, x=0.0, y_range=(-0.1, 0.1),
            n_samples=5, width=1e-3,
        )
        assert np.allclose(pure.a_z, ref.a_z, rtol=1e-12)


class TestRegionAverage:
    def test_constant_profile(self):
        prof = packets.AccelerationProfile(
            y=np.linspace(0, 1, 11), a_z=np.full(11, -3.0), x=0.0, z=0.4, width=1e-3
        )
        assert packets.region_average(prof) == pytest.approx(-3.0, abs=1e-15)

    def test_filter_restricts_to_negative_lobe(self):
        y = np.linspace(-1, 1, 21)
        prof = packets.AccelerationProfile(y=y, a_z=np.sin(np.pi * y), x=0.0, z=0.4, width=1e-3)
        avg = packets.region_average(prof)
        assert avg < 0  # only the negative lobe enters

    def test_all_positive_raises(self):
        prof = packets.AccelerationProfile(
            y=np.linspace(0, 1, 5), a_z=np.ones(5), x=0.0, z=0.4, width=1e-3
        )
        with pytest.raises(ValidationError):
            packets.region_average(prof)


class TestZeroCrossings:
    def test_linear_profile(self):
        prof = packets.AccelerationProfile(
            y=np.linspace(-1, 1, 21), a_z=np.linspace(-1, 1, 21), x=0.0, z=0.4, width=1e-3
        )
        crossings = packets.zero_crossings(prof)
        assert len(crossings) == 1
        assert crossings[0] == pytest.approx(0.0, abs=1e-12)

    def test_all_negative_empty(self):
        prof = packets.AccelerationProfile(
            y=np.linspace(0, 1, 5), a_z=-np.ones(5), x=0.0, z=0.4, width=1e-3
        )
        assert packets.zero_crossings(prof) == []


class TestPathEquivalence:
    def test_closed_form_equals_operator_route(self):
        """The moment contraction must match integrating the pointwise
        force operator over the packet (two independent code paths)."""
        from spinloop import fields
        from spinloop.deflection import parallel_closed_form

        pk = packets.WavePacket(center=(0.0, 0.12, 0.4), width=2e-3)
        m = packets.moments(pk, list(PARALLEL_TUPLES))
        closed = parallel_closed_form(m)

        # operator route: Gauss-Legendre sum of <uu|F(r)|uu> over the cube
        nodes, wts = np.polynomial.legendre.leggauss(12)
        uu = spins.basis_state("up", "up")
        F = fields.force_operator()
        total = 0.0
        for i, xi in enumerate(nodes):
            for j, yj in enumerate(nodes):
                for k, zk in enumerate(nodes):
                    x = pk.center[0] + 0.5 * pk.width * xi
                    y = pk.center[1] + 0.5 * pk.width * yj
                    z = pk.center[2] + 0.5 * pk.width * zk
                    w = wts[i] * wts[j] * wts[k] / 8.0
                    total += w * spins.expectation(F.at(x, y, z), uu)
        assert closed == pytest.approx(total, rel=1e-10)


def test_profile_csv_format():
    prof = packets.AccelerationProfile(
        y=np.array([0.0, 0.5]), a_z=np.array([-1.23456789012345, 2.0]),
        x=0.0, z=0.4, width=1e-3,
    )
    text = packets.profile_csv(prof)
    lines = text.strip().split("\n")
    assert lines[0] == "y,a_z"
    assert lines[1] == "0,-1.23456789012"
    assert lines[2] == "0.5,2"
