import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracle_values import GAUSSIAN_TAIL_RADIUS
from scatterbound.potentials import (KINDS, RadialPotential, RampPlateauPotential,
                                     bound_parameters, evaluate, ramp_plateau_radial,
                                     square_well)


def test_square_well_inside_and_outside():
    p = square_well(-1.0, 1.0)
    assert evaluate(p, 0.5) == -1.0
    assert evaluate(p, 2.0) == 0.0


def test_ramp_plateau_on_shifted_coordinate():
    p = ramp_plateau_radial(1.0, 0.1)
    # x = r - a = 0.5 lies on the plateau
    assert evaluate(p, 1.5) == pytest.approx(0.9, abs=1e-15)
    line = RampPlateauPotential(1.0, 0.1)
    assert line(np.array([0.5]))[0] == pytest.approx(0.9, abs=1e-15)
    assert line(np.array([-0.5]))[0] == pytest.approx(0.45)
    assert line(np.array([1.5]))[0] == pytest.approx(0.45)
    assert line(np.array([-2.0, 3.0])).tolist() == [0.0, 0.0]


def test_bound_parameters_examples():
    assert bound_parameters(square_well(-2.0, 1.5)) == (2.0, 1.5)
    assert bound_parameters(RadialPotential("zero")) == (0.0, 0.0)
    v0, r0 = bound_parameters(RadialPotential("gaussian", depth=1.0, radius=1.0), 1e-12)
    assert v0 == 1.0
    assert r0 == pytest.approx(GAUSSIAN_TAIL_RADIUS, rel=1e-12)


def test_coulomb_tail_has_no_range():
    p = RadialPotential("coulomb-plus-short-range", depth=-1.0, radius=1.0, alpha=1.0)
    assert p.tail == "coulomb"
    with pytest.raises(ValueError):
        bound_parameters(p)
    with pytest.raises(ValueError):
        evaluate(p, 0.0)


def test_declared_sup_bound_is_checked():
    square_well(-1.0, 1.0)
    RadialPotential("square-well", depth=-1.0, radius=1.0, sup_bound=1.0)
    with pytest.raises(ValueError):
        RadialPotential("square-well", depth=-1.0, radius=1.0, sup_bound=0.5)


def test_invalid_records_rejected():
    with pytest.raises(ValueError):
        RadialPotential("harmonic")
    with pytest.raises(ValueError):
        RadialPotential.from_record({"kind": "zero", "colour": 1})
    with pytest.raises(ValueError):
        RadialPotential("gaussian", depth=1.0, radius=0.0)
    with pytest.raises(ValueError):
        evaluate(square_well(-1, 1), -0.1)


def test_record_round_trip():
    p = RadialPotential("inverse-square-cutoff", alpha2=0.3, cutoff=0.1, radius=2.0)
    assert RadialPotential.from_record(p.to_record()) == p


compact_potentials = st.one_of(
    st.builds(square_well, st.floats(-3, 3), st.floats(0.05, 3)),
    st.builds(lambda a, e, h: ramp_plateau_radial(a, e, h), st.floats(0.1, 3), st.floats(0.01, 0.5),
              st.floats(-2, 2).filter(lambda h: abs(h) > 1e-3)),
    st.builds(lambda a2, c, r: RadialPotential("inverse-square-cutoff", alpha2=a2, cutoff=c, radius=r),
              st.floats(-1, 1), st.floats(0.05, 0.5), st.floats(0.6, 3)),
)


@given(compact_potentials, st.floats(0.0, 1.0))
def test_compact_support_is_exact(p, frac):
    v0, r0 = bound_parameters(p)
    r = np.linspace(r0, r0 + 10.0, 50)
    assert np.all(evaluate(p, r) == 0.0)
    inside = np.linspace(1e-6, r0 * (1 - 1e-9), 400)
    vals = evaluate(p, inside)
    assert np.all(np.isreal(vals))
    assert np.max(np.abs(vals)) <= v0 * (1 + 1e-12)


@given(st.sampled_from([k for k in KINDS if k != "coulomb-plus-short-range"]))
def test_every_kind_evaluates_real(kind):
    params = {"zero": {}, "square-well": dict(depth=-1.0, radius=1.0),
              "gaussian": dict(depth=-1.0, radius=1.0), "exponential": dict(depth=0.5, radius=0.7),
              "ramp-plateau": dict(radius=1.0, eps=0.1),
              "inverse-square-cutoff": dict(alpha2=0.2, cutoff=0.1, radius=1.0)}[kind]
    p = RadialPotential(kind, **params)
    vals = evaluate(p, np.linspace(0.0, 5.0, 101))
    assert vals.dtype == float and np.all(np.isfinite(vals))
    assert isinstance(evaluate(p, 0.3), float)


def test_exponential_range_matches_envelope():
    p = RadialPotential("exponential", depth=0.5, radius=0.7)
    _, r0 = bound_parameters(p, 1e-12)
    assert 0.5 * math.exp(-r0 / 0.7) == pytest.approx(1e-12, rel=1e-9)


def test_ramp_plateau_vanishes_exactly_at_its_outer_edge():
    # 3a - a rounds just below 2a for this width
    p = ramp_plateau_radial(1.1496156259743555, 0.5, 1.0)
    assert evaluate(p, np.array([3.0 * 1.1496156259743555]))[0] == 0.0
