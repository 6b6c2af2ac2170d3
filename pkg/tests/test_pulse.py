import numpy as np
import pytest

from liedlab.pulse import LaserPulse, field_integrals, INTENSITY_AU, OMEGA_NM_AU


def desk_pulse(theta=0.0, n_cycles=3):
    return LaserPulse.from_experiment(wavelength_nm=800.0, intensity_Wcm2=1e14,
                                      n_cycles=n_cycles, theta=theta)


class TestConstruction:
    def test_lab_parameter_conversion(self):
        p = desk_pulse()
        assert p.E0 == pytest.approx(np.sqrt(1e14 / INTENSITY_AU), rel=1e-14)
        assert p.omega == pytest.approx(OMEGA_NM_AU / 800.0, rel=1e-14)
        assert p.duration == pytest.approx(2 * np.pi * 3 / p.omega, rel=1e-14)

    def test_duplicate_parameters_rejected(self):
        with pytest.raises(ValueError):
            LaserPulse.from_experiment(wavelength_nm=800, omega=0.05,
                                       intensity_Wcm2=1e14)

    def test_2100nm_scales(self):
        p = LaserPulse.from_experiment(wavelength_nm=2100.0, intensity_Wcm2=1e14)
        assert p.E0 == pytest.approx(0.05338, abs=1e-5)
        assert p.omega == pytest.approx(0.02170, abs=1e-5)
        assert p.quiver_radius == pytest.approx(113.4, abs=0.5)


class TestFieldComponents:
    def test_perpendicular_alignment_has_no_y_field(self):
        p = desk_pulse(theta=0.0)
        t = np.linspace(0, p.duration, 400)
        e_y, e_z = p.field_at(t)
        assert np.max(np.abs(e_y)) == 0.0
        assert np.max(np.abs(e_z)) > 0.0

    def test_parallel_alignment_has_no_z_field(self):
        p = desk_pulse(theta=np.pi / 2)
        t = np.linspace(0, p.duration, 400)
        e_y, e_z = p.field_at(t)
        assert np.max(np.abs(e_z)) < 1e-12 * p.E0
        assert np.max(np.abs(e_y)) > 0.0

    def test_peak_field_is_E0_at_envelope_max(self):
        # cosine carrier referenced to the envelope peak
        p = LaserPulse.from_experiment(wavelength_nm=800.0, intensity_Wcm2=1e14,
                                       n_cycles=3, cep=0.0)
        assert p.field_scalar(0.5 * p.duration) == pytest.approx(p.E0, rel=1e-12)

    def test_zero_outside_support(self):
        p = desk_pulse()
        assert p.field_scalar(-1.0) == 0.0
        assert p.field_scalar(p.duration + 1.0) == 0.0


class TestFieldIntegrals:
    def test_constant_envelope_closed_forms(self):
        E0 = 0.07
        p = LaserPulse(omega=0.5, E0=E0, n_cycles=2, envelope="const")
        T = p.duration
        fi = field_integrals(p, dt=T / 4096)
        t = fi.t
        assert np.allclose(fi.F, E0 * t, rtol=0, atol=1e-12 * E0 * T)
        assert np.allclose(fi.G, E0 * t ** 2 / 2, rtol=0, atol=1e-10 * E0 * T ** 2)
        assert fi.eta[-1] == pytest.approx(E0 ** 2 * T ** 4 / 8, rel=1e-9)

    def test_zero_area_for_integer_cycle_sin2(self):
        for n_cycles in (1, 2, 3, 4):
            p = desk_pulse(n_cycles=n_cycles)
            fi = field_integrals(p)
            assert abs(fi.F[-1]) < 1e-10 * p.E0 * p.duration

    def test_cosine_carrier_zero_area_needs_two_cycles(self):
        # cep=0 single-cycle sin^2 pulses are *not* zero-area (F = E0 T / 4)
        one = LaserPulse.from_experiment(wavelength_nm=800.0, intensity_Wcm2=1e14,
                                         n_cycles=1, cep=0.0)
        fi = field_integrals(one)
        assert fi.F[-1] == pytest.approx(one.E0 * one.duration / 4, rel=1e-9)
        for n_cycles in (2, 3):
            p = LaserPulse.from_experiment(wavelength_nm=800.0,
                                           intensity_Wcm2=1e14,
                                           n_cycles=n_cycles, cep=0.0)
            fi = field_integrals(p)
            assert abs(fi.F[-1]) < 1e-10 * p.E0 * p.duration

    def test_time_weighted_area_nonzero(self):
        fi = field_integrals(desk_pulse())
        assert abs(fi.G[-1]) > 1e-6

    def test_refinement_convergence(self):
        p = desk_pulse()
        T = p.duration
        probe = 3.0 / 8.0  # dyadic fraction: an exact sample on every grid
        vals = []
        for n in (512, 1024, 2048):
            fi = field_integrals(p, dt=T / n)
            vals.append(fi.F[int(probe * n)])
        err1 = abs(vals[0] - vals[2])
        err2 = abs(vals[1] - vals[2])
        assert err2 < err1 / 4.0  # order >= 2 (Simpson is ~4)
        fi_a = field_integrals(p, dt=T / 4096)
        fi_b = field_integrals(p, dt=T / 8192)
        scale = np.max(np.abs(fi_b.F))
        assert abs(fi_a.F[-1] - fi_b.F[-1]) < 1e-10 * scale

    def test_derivative_consistency(self):
        p = desk_pulse()
        fi = field_integrals(p, dt=p.duration / 8192)
        dF = np.gradient(fi.F, fi.t)
        interior = slice(10, -10)
        assert np.max(np.abs(dF[interior] - fi.E[interior])) < 5e-6 * p.E0
        dG = np.gradient(fi.G, fi.t)
        assert np.max(np.abs(dG[interior] - (fi.t * fi.E)[interior])) \
            < 5e-6 * p.E0 * p.duration

    def test_eta_derivative_is_F_times_G(self):
        p = desk_pulse()
        fi = field_integrals(p, dt=p.duration / 8192)
        d_eta = np.gradient(fi.eta, fi.t)
        interior = slice(10, -10)
        scale = np.max(np.abs(fi.F * fi.G))
        assert np.max(np.abs(d_eta[interior] - (fi.F * fi.G)[interior])) < 1e-5 * scale

    def test_linearity_in_E0(self):
        p1 = desk_pulse()
        p2 = LaserPulse(p1.omega, 2 * p1.E0, p1.n_cycles, p1.envelope, p1.cep)
        f1, f2 = field_integrals(p1), field_integrals(p2)
        assert np.allclose(f2.F, 2 * f1.F, atol=1e-14)
        assert np.allclose(f2.G, 2 * f1.G, atol=1e-13)
        assert np.allclose(f2.eta, 4 * f1.eta, atol=1e-12)

    def test_integrals_vanish_at_t0(self):
        fi = field_integrals(desk_pulse())
        assert fi.F[0] == 0.0 and fi.G[0] == 0.0 and fi.eta[0] == 0.0

    def test_bad_dt_rejected(self):
        p = desk_pulse()
        with pytest.raises(ValueError):
            field_integrals(p, dt=p.duration / 1000.5)
