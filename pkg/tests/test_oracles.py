import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import spherical_jn

from oracle_values import ARG_GAMMA_1_PLUS_I, ARG_GAMMA_2_PLUS_I, SQUARE_WELL_DELTAS
from scatterbound.bounds import xi_linf_numerical
from scatterbound.oracles import (coulomb_sigma, delta_1d_transmission, free_partial_wave,
                                  line_scattering_state, numerov_phase_shift,
                                  oracle_partial_waves, piecewise_linear_scattering,
                                  radial_solutions, square_well_delta0)
from scatterbound.potentials import RadialPotential, square_well


@pytest.mark.parametrize("ell", range(5))
def test_free_phase_shift_vanishes(ell):
    res = numerov_phase_shift(RadialPotential("zero"), ell, 1.3, 1.0)
    assert abs(res.delta) < 1e-10


def test_square_well_phase_shifts(well_oracle):
    for res, ref in zip(well_oracle, SQUARE_WELL_DELTAS):
        assert res.delta == pytest.approx(ref, abs=1e-8)
    assert square_well_delta0(-1.0, 1.0, 1.0, 1.0) == pytest.approx(SQUARE_WELL_DELTAS[0],
                                                                    abs=1e-14)


@given(st.floats(-2.0, 2.0), st.floats(0.2, 2.0), st.floats(0.3, 2.5))
def test_closed_form_s_wave(depth, radius, k):
    res = numerov_phase_shift(square_well(depth, radius), 0, k, 1.0)
    exact = square_well_delta0(depth, radius, k, 1.0)
    diff = (res.delta - exact + math.pi / 2) % math.pi - math.pi / 2
    assert abs(diff) < 1e-8


def test_amplitude_convention(well_oracle):
    res = well_oracle[0]
    assert res.f == pytest.approx((np.exp(2j * res.delta) - 1) / 2j, abs=1e-15)


def test_self_convergence_estimate(well):
    coarse = numerov_phase_shift(well, 1, 1.0, 1.0, h=4e-3)
    fine = numerov_phase_shift(well, 1, 1.0, 1.0, h=2e-3)
    assert abs(fine.delta - coarse.delta) <= coarse.convergence


def test_wronskian_is_constant(well):
    # discrete Numerov Casoratian a_n a_{n+1} (u_n w_{n+1} - u_{n+1} w_n) / h inside the well
    ell, k, mass = 2, 1.0, 1.0
    r, ur, _, uo, _ = radial_solutions(well, ell, k, mass)
    h = r[1] - r[0]
    idx = np.nonzero((r > 0.05) & (r < 0.99))[0]
    q = 2 * mass * (-1.0 - k * k / (2 * mass)) + ell * (ell + 1) / r[idx] ** 2
    a = 1 - h * h * q / 12
    cas = a[:-1] * a[1:] * (ur[idx[:-1]] * uo[idx[1:]] - ur[idx[1:]] * uo[idx[:-1]]) / h
    assert np.max(np.abs(cas - cas[-1])) < 1e-10 * abs(cas[-1])


def test_resonance_amplifies_the_state():
    # first s-wave zero-energy resonance of a unit well sits at depth -pi^2 / 8
    maxima = [xi_linf_numerical(square_well(d, 1.0), 0, 0.1, 1.0).details["radial_max"]
              for d in (-0.8, -1.0, -1.1, -1.2)]
    assert all(b > a for a, b in zip(maxima[:-1], maxima[1:]))
    assert maxima[-1] > 3 * maxima[0]


def test_coulomb_tail_rejected():
    p = RadialPotential("coulomb-plus-short-range", depth=-1.0, radius=1.0, alpha=0.5)
    with pytest.raises(ValueError, match="short-range"):
        numerov_phase_shift(p, 0, 1.0, 1.0)


def test_partial_wave_list_terminates():
    res = oracle_partial_waves(square_well(-1.0, 1.0), 1.0, 1.0)
    assert 5 < len(res) < 30
    assert (2 * res[-1].ell + 1) * abs(res[-1].f) < 1e-14


# -- one dimension ---------------------------------------------------------------


def test_delta_transmission_free():
    assert delta_1d_transmission(0.0, 1.0, 1.0) == (1.0, 0.0)


@given(st.floats(-5, 5), st.floats(0.05, 5), st.floats(0.1, 5))
def test_delta_transmission_unitary(alpha, k, mass):
    t, r = delta_1d_transmission(alpha, k, mass)
    assert abs(t) ** 2 + abs(r) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_shifted_barrier_has_same_transmission():
    # a narrow tall barrier of fixed area stands in for the delta potential
    width, area, k = 1e-3, 0.7, 1.2

    def barrier(centre):
        return lambda x: np.where(np.abs(x - centre) < width / 2, area / width, 0.0)

    s0 = line_scattering_state(barrier(0.0), (-width / 2, width / 2), -1.0, 1.0, k, 1.0, h=1e-5)
    s1 = line_scattering_state(barrier(1.0), (1 - width / 2, 1 + width / 2), 0.0, 2.0, k, 1.0,
                               h=1e-5)
    assert abs(s0.transmission) ** 2 == pytest.approx(abs(s1.transmission) ** 2, rel=1e-8)
    t, _ = delta_1d_transmission(area, k, 1.0)
    assert abs(s0.transmission) ** 2 == pytest.approx(abs(t) ** 2, rel=1e-3)


def test_piecewise_linear_oracle_against_numerov():
    nodes, values = (-2.0, 0.0, 1.0, 3.0), (0.0, 0.6, 0.6, 0.0)
    exact = piecewise_linear_scattering(nodes, values, 1.0, 1.0)

    def pot(x):
        return np.interp(x, nodes, values, left=0.0, right=0.0)

    num = line_scattering_state(pot, nodes[1:-1], -2.0, 3.0, math.sqrt(2.0), 1.0, h=2.5e-4)
    assert exact.transmission == pytest.approx(num.transmission, abs=5e-9)
    assert abs(exact.transmission) ** 2 + abs(exact.reflection) ** 2 == pytest.approx(1.0)


# -- Coulomb phase -------------------------------------------------------------------


def test_coulomb_sigma_zero_charge():
    assert all(coulomb_sigma(ell, 0.0) == 0.0 for ell in range(10))


def test_coulomb_sigma_reference_values():
    assert coulomb_sigma(0, 1.0) == pytest.approx(ARG_GAMMA_1_PLUS_I, abs=1e-10)
    assert coulomb_sigma(1, 1.0) == pytest.approx(ARG_GAMMA_2_PLUS_I, abs=1e-10)


@given(st.integers(0, 5), st.floats(-5, 5))
def test_coulomb_sigma_recurrence(ell, eta):
    step = coulomb_sigma(ell + 1, eta) - coulomb_sigma(ell, eta)
    diff = (step - math.atan(eta / (ell + 1)) + math.pi) % (2 * math.pi) - math.pi
    assert abs(diff) < 1e-10


# -- spherical Bessel ---------------------------------------------------------------------


def test_free_partial_wave_examples():
    assert free_partial_wave(0, 1.0, 1e-9) == pytest.approx(1.0, abs=1e-15)
    assert abs(free_partial_wave(0, 1.0, math.pi)) < 1e-15


def test_spherical_bessel_bounded_and_accurate():
    x = np.linspace(0.0, 60.0, 6001)
    for ell in range(11):
        vals = free_partial_wave(ell, 1.0, x)
        assert np.max(np.abs(vals)) <= 1.0
        assert np.allclose(vals, spherical_jn(ell, x), atol=1e-12)
