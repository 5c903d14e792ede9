import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracle_values import PLATEAU_BACKWARD, PLATEAU_FORWARD
from scatterbound.pathology import (NonConservingState, TriangleState, expectation_tuning,
                                    inverse_square_exponents, l2_instability_scan,
                                    line_violation_norms, nonconservation_demo, triangle,
                                    vslow_demo)


def test_triangle_ramp():
    assert triangle([-1.0, 0.0, 0.25, 1.0, 3.0]).tolist() == [0.0, 0.0, 0.25, 1.0, 1.0]


# -- ramped plane wave -------------------------------------------------------------


def test_equal_amplitudes_carry_no_current_jump():
    rows = l2_instability_scan(0.7, 0.7, 1.0, 1.0, [20, 40])
    # only finite-difference noise remains
    assert all(abs(r.flux_jump) < 1e-14 and r.l1 < 1e-7 for r in rows)


def test_l2_scaling_and_flux():
    rows = l2_instability_scan(0.0, 1.0, 1.0, 1.0, [100, 200, 400])
    for a, b in zip(rows[:-1], rows[1:]):
        assert b.l2sq / a.l2sq == pytest.approx(0.5, abs=0.02)
    for r in rows:
        assert r.flux_jump == pytest.approx(1.0, abs=1e-10)
    ratio = [r.l1 / r.l2sq for r in rows]
    assert ratio[0] < ratio[1] < ratio[2]


def test_triangle_norms_match_closed_form():
    n, k, m = 150.0, 1.3, 0.9
    state = TriangleState(n, 0.2, 1.1, k, m)
    norms = state.norms()
    jump = 0.9
    assert norms.l2sq_interior == pytest.approx(jump**2 * k**2 / (m**2 * n), rel=1e-8)
    assert norms.l1_interior == pytest.approx(jump * k / m, rel=1e-8)
    # each end: |Delta T'| |A_> - A_<| / 2M
    assert norms.kinks == pytest.approx((jump / (2 * m * n),) * 2, rel=1e-6)
    assert state.flux_jump() == pytest.approx(k * (1.1**2 - 0.2**2) / m, abs=1e-12)


def test_scan_preconditions():
    with pytest.raises(ValueError):
        l2_instability_scan(0, 1, 1.0, 1.0, [200, 100])
    with pytest.raises(ValueError):
        l2_instability_scan(0, 1, 0.01, 1.0, [100, 200])


def test_line_norms_of_exact_state_vanish():
    norms = line_violation_norms(lambda x: np.exp(2j * np.asarray(x)), [0.0, 3.0], 2.0, 1.0)
    assert norms.l1 < 1e-6


# -- energy-expectation tuning ----------------------------------------------------------


def test_tuning_finds_a_root():
    res = expectation_tuning(1.0, 2.0, 1.0, 100.0)
    assert 0.1 < res.alpha < 10.0
    assert abs(res.residual) < 1e-10
    assert res.flux_jump == pytest.approx(3.0)


def test_symmetric_tuning_is_trivial():
    res = expectation_tuning(1.5, 1.5, 1.0, 100.0)
    assert res.residual == 0.0 and res.flux_jump == 0.0


def test_kinks_make_the_expectation_sign_definite():
    with pytest.raises(ValueError, match="sign change"):
        expectation_tuning(1.0, 2.0, 1.0, 100.0, include_kinks=True)


@settings(max_examples=5)
@given(st.floats(0.5, 3.0))
def test_tuned_root_for_zero_left_amplitude(a_greater):
    # with A_< = 0 the interior expectation vanishes where tan(2kL) = 2kL, L = n / alpha
    res = expectation_tuning(0.0, a_greater, 1.0, 100.0)
    y = 2.0 * 100.0 / res.alpha
    assert math.tan(y) == pytest.approx(y, rel=1e-6)


# -- nonconservation --------------------------------------------------------------------------


def test_nonconservation_examples():
    l1, current = nonconservation_demo(0.1, 10.0, 1.0, 1.0)
    assert current == pytest.approx(1.0, abs=1e-12)
    l1_double, _ = nonconservation_demo(0.2, 10.0, 1.0, 1.0)
    assert l1 / l1_double == pytest.approx(0.5, rel=1e-2)
    l1_other, _ = nonconservation_demo(0.1, 1.0, 1.0, 1.0)
    assert l1_other == pytest.approx(l1, rel=1e-2)


@pytest.mark.parametrize("eps", [1e-1, 1e-3, 1e-6])
def test_vanishing_violation_with_fixed_current(eps):
    l1, current = nonconservation_demo(eps, 1.0 / eps, 1.0, 1.0)
    assert current == pytest.approx(1.0, rel=1e-12)
    assert l1 < 2 * eps


def test_nonconservation_l1_closed_form():
    eps, k, m = 0.01, 1.3, 0.7
    state = NonConservingState(eps, 2.0, k, m)
    norms = state.norms()
    interior = eps * k / m * (1 - math.cos(k)) / k
    kinks = (eps / (2 * m), eps * abs(math.cos(k)) / (2 * m))
    assert norms.l1_interior == pytest.approx(interior, rel=1e-8)
    assert norms.kinks == pytest.approx(kinks, rel=1e-6)


# -- slow plateau -----------------------------------------------------------------------------


def test_slow_plateau_reference_point():
    res = vslow_demo(1e4, 1e-4, 1.0, 1.0)
    assert res.l1_predicted == pytest.approx(math.sqrt(2) * 0.1, rel=1e-14)
    assert res.l1_measured == pytest.approx(res.l1_predicted, rel=0.03)
    assert res.amplitude_predicted == pytest.approx(10.0, rel=1e-14)
    assert res.amplitude_measured == pytest.approx(PLATEAU_FORWARD, rel=1e-8)
    assert res.backward_amplitude == pytest.approx(PLATEAU_BACKWARD, rel=1e-8)
    assert res.amplitude_measured == pytest.approx(res.amplitude_predicted, rel=0.05)


def test_kink_contributions_scale_inversely_with_width():
    one = vslow_demo(1e4, 1e-4)
    two = vslow_demo(2e4, 1e-4)
    assert two.l1_kinks / one.l1_kinks == pytest.approx(0.5, rel=0.05)


def test_slow_plateau_preconditions():
    with pytest.raises(ValueError):
        vslow_demo(100.0, 1e-4)
    with pytest.raises(ValueError):
        vslow_demo(1e4, 2.0)


# -- inverse square ----------------------------------------------------------------------------


def test_inverse_square_examples():
    r = inverse_square_exponents(0.0, 1.0)
    assert (r.beta_minus, r.beta_plus, r.pathological) == (0.0, 1.0, False)
    r = inverse_square_exponents(1.0, 1.0)
    assert (r.beta_minus, r.beta_plus, r.pathological) == (-1.0, 2.0, False)
    r = inverse_square_exponents(-1.0, 1.0)
    assert r.pathological and r.beta_minus.imag != 0 and r.beta_plus == r.beta_minus.conjugate()


@given(st.floats(-5, 5), st.floats(0.1, 5))
def test_inverse_square_roots_and_flag(alpha2, mass):
    r = inverse_square_exponents(alpha2, mass)
    assert r.pathological == (1 + 8 * mass * alpha2 < 0)
    for beta in (r.beta_minus, r.beta_plus):
        assert abs(beta * beta - beta - 2 * mass * alpha2) <= 1e-9 * (1 + abs(alpha2 * mass))


def test_flag_boundary_is_sharp():
    assert not inverse_square_exponents(-1.0 / 8.0, 1.0).pathological
    assert inverse_square_exponents(np.nextafter(-1.0 / 8.0, -1.0), 1.0).pathological
