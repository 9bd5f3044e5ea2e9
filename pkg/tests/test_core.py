import math

import pytest
from scipy.integrate import dblquad

from chargedrop.core import (
    CODATA,
    WATER,
    DropletSpec,
    Liquid,
    PhysicalConstants,
    Scales,
    ball_energy_conductor,
    ball_energy_uniform,
    debye_radius,
    ion_density_for_debye_radius,
    rayleigh_charge,
    thermal_energy,
)
from chargedrop.errors import DomainError


class TestRayleighCharge:
    def test_water_benchmark_value(self):
        # hand evaluation: 8*pi*sqrt(8.8541878128e-12 * 0.073 * (1e-5)^3)
        expected = 8.0 * math.pi * math.sqrt(8.8541878128e-12 * 0.073 * 1e-15)
        assert rayleigh_charge(10e-6, 0.073) == pytest.approx(expected, rel=1e-14)
        assert rayleigh_charge(10e-6, 0.073) == pytest.approx(6.3896e-13, rel=1e-4)

    def test_doubling_radius_scales_by_2_sqrt2(self):
        base = rayleigh_charge(10e-6, 0.073)
        assert rayleigh_charge(20e-6, 0.073) == pytest.approx(2.0 * math.sqrt(2.0) * base,
                                                              rel=1e-14)

    def test_methanol_benchmark_value(self):
        expected = 8.0 * math.pi * math.sqrt(8.8541878128e-12 * 0.023 * 1e-21)
        assert rayleigh_charge(100e-9, 0.023) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("R0,R1,s0,s1", [(1e-6, 2e-6, 0.05, 0.05),
                                             (1e-6, 1e-6, 0.05, 0.09)])
    def test_monotone_in_both_arguments(self, R0, R1, s0, s1):
        assert rayleigh_charge(R1, s1) >= rayleigh_charge(R0, s0)

    def test_rejects_nonpositive_inputs(self):
        with pytest.raises(DomainError):
            rayleigh_charge(0.0, 0.073)
        with pytest.raises(DomainError):
            rayleigh_charge(1e-6, -1.0)


class TestDebyeRadius:
    def test_hundred_millimolar_water(self):
        liq = Liquid(sigma=0.073, epsilon_r=80.0, temperature=293.0,
                     ion_density_n0=6.02e25)
        assert debye_radius(liq) == pytest.approx(9.6288e-10, rel=1e-4)

    def test_quadrupling_density_halves_radius(self):
        liq = Liquid(sigma=0.073, ion_density_n0=6.02e25)
        liq4 = Liquid(sigma=0.073, ion_density_n0=4 * 6.02e25)
        assert debye_radius(liq4) == pytest.approx(debye_radius(liq) / 2.0, rel=1e-14)

    def test_epsilon_scaling(self):
        liq80 = Liquid(sigma=0.073, epsilon_r=80.0)
        liq1 = Liquid(sigma=0.073, epsilon_r=1.0)
        assert debye_radius(liq1) == pytest.approx(debye_radius(liq80) / math.sqrt(80.0),
                                                   rel=1e-14)

    def test_inverse_helper_round_trips(self):
        n0 = ion_density_for_debye_radius(1e-9, epsilon_r=80.0, temperature=293.0)
        liq = Liquid(sigma=0.073, epsilon_r=80.0, temperature=293.0, ion_density_n0=n0)
        assert debye_radius(liq) == pytest.approx(1e-9, rel=1e-12)


class TestBallEnergies:
    def test_half_rayleigh_is_six_pi(self, water_spec):
        sigma_R2 = WATER.sigma * water_spec.radius_R**2
        assert ball_energy_conductor(water_spec) / sigma_R2 == pytest.approx(
            6.0 * math.pi, rel=1e-12)

    def test_uncharged_ball_is_pure_surface(self):
        spec = DropletSpec(10e-6, WATER, 0.0)
        surface = 4.0 * math.pi * WATER.sigma * (10e-6) ** 2
        assert ball_energy_conductor(spec) == pytest.approx(surface, rel=1e-14)
        assert ball_energy_uniform(spec) == pytest.approx(surface, rel=1e-14)

    def test_at_rayleigh_limit_coulomb_is_twice_surface(self):
        spec = DropletSpec.from_charge_fraction(10e-6, WATER, 1.0)
        surface = 4.0 * math.pi * WATER.sigma * (10e-6) ** 2
        coulomb = ball_energy_conductor(spec) - surface
        assert coulomb == pytest.approx(2.0 * surface, rel=1e-12)

    def test_uniform_to_conductor_coulomb_ratio_is_six_fifths(self, water_spec):
        surface = 4.0 * math.pi * WATER.sigma * water_spec.radius_R**2
        c_cond = ball_energy_conductor(water_spec) - surface
        c_unif = ball_energy_uniform(water_spec) - surface
        assert c_unif / c_cond == pytest.approx(1.2, rel=1e-12)

    def test_uniform_coulomb_term_against_quadrature(self, water_spec):
        # independent oracle: the double Coulomb integral over the ball reduces
        # to 16 pi^2 Int Int s^2 t^2 / max(s,t) ds dt for shells
        val, err = dblquad(lambda t, s: s**2 * t**2 / max(s, t), 0.0, 1.0,
                           0.0, 1.0, epsabs=1e-10)
        R, Q = water_spec.radius_R, water_spec.charge_Q
        rho = Q / (4.0 / 3.0 * math.pi * R**3)
        oracle = 0.5 * rho**2 * 16.0 * math.pi**2 * val * R**5 / (4.0 * math.pi * CODATA.eps0)
        coulomb = ball_energy_uniform(water_spec) - 4.0 * math.pi * WATER.sigma * R**2
        assert coulomb == pytest.approx(oracle, rel=1e-3)

    def test_uniform_exceeds_conductor_for_charged_drops(self):
        for frac in (0.1, 0.5, 1.0, 2.0):
            spec = DropletSpec.from_charge_fraction(3e-6, WATER, frac)
            assert ball_energy_uniform(spec) > ball_energy_conductor(spec)

    def test_operations_are_pure(self, water_spec):
        assert ball_energy_conductor(water_spec) == ball_energy_conductor(water_spec)
        assert rayleigh_charge(1e-6, 0.05) == rayleigh_charge(1e-6, 0.05)


class TestScales:
    def test_round_trip_identity(self, water_spec):
        scales = Scales.from_spec(water_spec)
        for x in (1e-9, 3.7e-6, 12.0):
            assert scales.length_si(scales.length(x)) == pytest.approx(x, rel=1e-14)
            assert scales.energy_si(scales.energy(x)) == pytest.approx(x, rel=1e-14)
            assert scales.charge_si(scales.charge(x)) == pytest.approx(x, rel=1e-14)

    def test_units_are_the_natural_ones(self, water_spec):
        scales = Scales.from_spec(water_spec)
        assert scales.length_unit == water_spec.radius_R
        assert scales.energy_unit == pytest.approx(
            WATER.sigma * water_spec.radius_R**2, rel=1e-14)
        assert scales.charge_unit == pytest.approx(water_spec.rayleigh_limit, rel=1e-14)


class TestConstantsInjection:
    def test_round_number_constants(self):
        consts = PhysicalConstants(eps0=1.0, kB=1.0, e_charge=1.0)
        assert rayleigh_charge(1.0, 1.0, consts) == pytest.approx(8.0 * math.pi)
        liq = Liquid(sigma=1.0, epsilon_r=1.0, temperature=2.0, ion_density_n0=1.0)
        assert debye_radius(liq, consts) == pytest.approx(1.0)
        assert thermal_energy(2.0, consts) == pytest.approx(2.0)

    def test_invalid_parameters_rejected(self):
        with pytest.raises(DomainError):
            PhysicalConstants(eps0=0.0)
        with pytest.raises(DomainError):
            Liquid(sigma=0.073, epsilon_r=0.5)
        with pytest.raises(DomainError):
            Liquid(sigma=0.073, temperature=-1.0)
        with pytest.raises(DomainError):
            DropletSpec(-1e-6, WATER, 0.0)
        with pytest.raises(DomainError):
            DropletSpec(1e-6, WATER, -1e-15)


def test_volume_is_derived(water_spec):
    assert water_spec.volume == pytest.approx(
        4.0 / 3.0 * math.pi * water_spec.radius_R**3, rel=1e-14)


def test_charge_fraction_round_trip():
    spec = DropletSpec.from_charge_fraction(4e-6, WATER, 0.37)
    assert spec.charge_fraction == pytest.approx(0.37, rel=1e-12)
    assert spec.with_charge_fraction(0.5).charge_fraction == pytest.approx(0.5, rel=1e-12)
