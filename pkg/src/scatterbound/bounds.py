"""Error bounds from the L1 norm of the Schrodinger violation.

Each bound has the shape ``constant * ||xi||_inf * L1`` where ``xi`` is an
exact eigenstate used as a test function.  The sup-norm of that eigenstate
is the hard part; two rigorous estimators (a 1D transfer-matrix bound and a
weak-coupling Lippmann-Schwinger bound) and a numerical one are provided.
Every bound records where its sup-norm came from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import integrate

from .oracles import PhaseShiftResult, oracle_partial_waves, oracle_state
from .potentials import RadialPotential, bound_parameters

RIGOROUS = "rigorous-formula"
NUMERICAL = "numerically-estimated-xi"
THEOREMS = ("phase-shift", "cross-section", "pointwise", "free")
SAFETY_FACTOR = 1.05


class BoundUnavailable(ValueError):
    """A rigorous estimate does not apply to the given inputs."""


@dataclass(frozen=True)
class XiEstimate:
    """Sup-norm estimate of an exact eigenstate.

    Attributes
    ----------
    value : float
        The number fed into the bound formulas.
    source : str
        ``"transfer-1d"``, ``"gamma-star"``, ``"free"`` or ``"numerical"``.
    details : dict
        Diagnostics (raw maxima, safety factor, ...).
    """

    value: float
    source: str
    details: dict = field(default_factory=dict)

    @property
    def rigor(self) -> str:
        return RIGOROUS if self.source in ("transfer-1d", "gamma-star", "free") else NUMERICAL

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class StabilityBound:
    """A bound value together with the sup-norm estimate it relied on."""

    value: float
    theorem: str
    xi_inf: float
    rigor: str
    inputs: dict
    interval: Optional[tuple] = None

    def __post_init__(self):
        if self.theorem not in THEOREMS:
            raise ValueError(f"unknown theorem tag {self.theorem!r}")
        if not self.value >= 0:
            raise ValueError("bound must be non-negative")
        if self.rigor not in (RIGOROUS, NUMERICAL):
            raise ValueError(f"unknown rigor flag {self.rigor!r}")

    def to_record(self) -> dict:
        rec = {"theorem": self.theorem, "value": self.value, "xi_inf": self.xi_inf,
               "rigor": self.rigor, "inputs": dict(self.inputs)}
        if self.interval is not None:
            rec["interval"] = list(self.interval)
        return rec


def _nonneg(**kw):
    for name, val in kw.items():
        if not val >= 0:
            raise ValueError(f"{name} must be non-negative")


# --------------------------------------------------------------------------
# bound formulas


def phase_shift_error_bound(mass: float, ell: int, xi_inf: float, l1: float) -> float:
    """Bound on ``|f_l - f~_l|``: ``M / (2 pi (2l+1)) * xi_inf * L1``."""
    _nonneg(mass=mass, ell=ell, xi_inf=xi_inf, l1=l1)
    return mass / (2.0 * math.pi * (2 * ell + 1)) * xi_inf * l1


def sqrt_cross_section_radius(mass: float, big_xi: float, l1: float) -> float:
    """``C = M Xi L1 / sqrt(pi)`` with ``|sqrt(sigma) - sqrt(sigma~)| <= C``.

    The amplitude error in direction ``n`` is the overlap of the violation
    with the time-reversed scattering state, scaled by ``M / 2 pi``; its
    ``L2`` norm over the sphere is then at most ``sqrt(4 pi)`` times that
    bound.  A radius half this size is violated by the zero ansatz on the
    unit square well.
    """
    _nonneg(mass=mass, big_xi=big_xi, l1=l1)
    return mass * big_xi * l1 / math.sqrt(math.pi)


def cross_section_interval(mass: float, big_xi: float, l1: float,
                           sigma: float) -> tuple[float, float]:
    """Interval guaranteed to contain the exact total cross section.

    Squares the interval ``[sqrt(sigma~) - C, sqrt(sigma~) + C]`` after
    clipping its lower end at zero.
    """
    _nonneg(sigma=sigma)
    c = sqrt_cross_section_radius(mass, big_xi, l1)
    if c == 0.0:
        return (sigma, sigma)
    root = math.sqrt(sigma)
    return (max(0.0, root - c) ** 2, (root + c) ** 2)


def pointwise_f_bound(mass: float, psi_inf: float, l1: float) -> float:
    """Bound on ``|f~ - f|`` in the back-scattering direction of the test state."""
    _nonneg(mass=mass, psi_inf=psi_inf, l1=l1)
    return mass * psi_inf / math.pi * l1


def free_scattering_bound(mass: float, l1: float) -> float:
    """Bound on ``|f|`` for an approximate eigenstate of the free Hamiltonian."""
    return pointwise_f_bound(mass, 1.0, l1)


# --------------------------------------------------------------------------
# rigorous sup-norm estimates


def xi_linf_transfer_1d(v0: float, energy: float, mass: float, length: float, k: float) -> float:
    """Transfer-matrix bound ``sqrt(1 + k^2) exp(L max(2M(V0 + E), 1))``.

    Bounds ``(|psi|^2 + |psi'|^2)^(1/2)`` for a 1D eigenstate whose right
    tail is ``A e^{ikx}`` with ``|A| <= 1`` (equally the radial ``u`` with
    unit asymptotic amplitude) across a support of length ``L``.
    """
    if energy <= 0:
        raise ValueError("energy must be positive")
    _nonneg(v0=v0, length=length)
    return math.sqrt(1.0 + k * k) * math.exp(length * max(2.0 * mass * (v0 + energy), 1.0))


def xi_from_transfer(p: RadialPotential, k: float, mass: float,
                     tol_tail: float = 1e-12) -> XiEstimate:
    """Rigorous s-wave sup-norm from the transfer bound.

    Since ``u(0) = 0``, ``|u(r) / (kr)| <= sup |u'| / k`` and the transfer
    bound controls ``u'`` as well as ``u``.

    Raises
    ------
    BoundUnavailable
        For an exponential or Coulomb tail (no compact support).
    """
    if p.tail != "compact":
        raise BoundUnavailable("transfer bound needs a compactly supported potential")
    v0, r0 = bound_parameters(p, tol_tail)
    energy = k * k / (2.0 * mass)
    t = xi_linf_transfer_1d(v0, energy, mass, r0, k)
    return XiEstimate(value=t / k, source="transfer-1d", details={"u_bound": t, "ell": 0})


def _gamma_profile(p: RadialPotential, mass: float, r: np.ndarray) -> np.ndarray:
    """``(M / 2 pi) int d^3r' |V(r')| / |r - r'|`` at each radius ``r``.

    The angular integral of the Coulomb kernel gives ``4 pi / max(r, r')``,
    so the profile is ``2M [ (1/r) int_0^r s^2 |V| ds + int_r^inf s |V| ds ]``.
    """
    outer = p.outer_radius()
    if outer <= 0:
        return np.zeros_like(r)
    pts = [b for b in p.breakpoints() if 0 < b < outer]

    def piece(fun, lo, hi):
        if hi <= lo:
            return 0.0
        inner = [b for b in pts if lo < b < hi]
        val, _ = integrate.quad(fun, lo, hi, points=inner or None, limit=400,
                                epsabs=1e-14, epsrel=1e-12)
        return val

    def absv(s):
        return abs(float(p.evaluate(s)))

    out = np.empty_like(r)
    for i, ri in enumerate(r):
        near = piece(lambda s: s * s * absv(s), 0.0, min(ri, outer))
        far = piece(lambda s: s * absv(s), min(ri, outer), outer)
        out[i] = 2.0 * mass * ((near / ri if ri > 0 else 0.0) + far)
    return out


def gamma_star(p: RadialPotential, k: float, mass: float, n_radii: int = 64) -> float:
    """Weak-coupling constant ``max_r int |G_0(r, r') V(r')| d^3r'``.

    The kernel modulus ``(M / 2 pi) / |r - r'|`` does not depend on ``k``;
    the maximum is taken over a radial grid that includes the origin.

    Raises
    ------
    BoundUnavailable
        For a Coulomb tail (the integral diverges).
    """
    if p.is_coulomb:
        raise BoundUnavailable("gamma_star diverges for a Coulomb tail")
    outer = p.outer_radius()
    r = np.concatenate([[0.0], np.linspace(0.0, max(outer, 1e-12), n_radii)[1:],
                        list(p.breakpoints())])
    return float(np.max(_gamma_profile(p, mass, np.unique(r))))


def amplitude_bound_from_gamma(gamma: float) -> float:
    """``1 / (1 - gamma*)``, valid only when ``gamma* < 1``."""
    if gamma < 0:
        raise ValueError("gamma* must be non-negative")
    if gamma >= 1.0:
        raise BoundUnavailable("bound unavailable: gamma* >= 1")
    return 1.0 / (1.0 - gamma)


lipinski_bound = amplitude_bound_from_gamma


def xi_from_gamma(p: RadialPotential, k: float, mass: float,
                  ell: Optional[int] = None) -> XiEstimate:
    """Rigorous sup-norm from ``gamma*``.

    With ``ell=None`` this bounds the full scattering state; otherwise the
    partial-wave eigenstate ``(2l+1) P_l R_l``, using ``|R_l| <= max |psi|``.
    """
    g = gamma_star(p, k, mass)
    amp = amplitude_bound_from_gamma(g)
    factor = 1 if ell is None else 2 * ell + 1
    return XiEstimate(value=factor * amp, source="gamma-star",
                      details={"gamma_star": g, "amplitude": amp, "ell": ell})


def free_xi() -> XiEstimate:
    """Sup-norm of free scattering states (exactly one)."""
    return XiEstimate(value=1.0, source="free")


# --------------------------------------------------------------------------
# numerical sup-norm estimates


def _radial_samples(res: PhaseShiftResult, extent: float) -> np.ndarray:
    inner = res._r[res._r > 0]
    outer = np.linspace(res.matching_radius, extent, 4096)
    return np.concatenate([inner, outer])


def xi_linf_numerical(p: RadialPotential, ell: int, k: float, mass: float,
                      safety: float = SAFETY_FACTOR,
                      result: Optional[PhaseShiftResult] = None) -> XiEstimate:
    """Numerical sup-norm of the partial-wave eigenstate ``(2l+1) P_l R_l``.

    ``R_l`` is the oracle radial factor of the full state normalised to a
    unit incident plane wave, so its maximum is one for ``V = 0, l = 0``.
    The returned value is ``safety * (2l+1) * max |R_l|``; the details also
    carry the raw maximum and ``max |u_l|`` for the reduced radial function
    with unit asymptotic amplitude.
    """
    if result is None:
        result = oracle_partial_waves(p, k, mass, lmax=ell)[ell]
    extent = result.matching_radius + (ell + 20.0) / k
    r = _radial_samples(result, extent)
    radial_max = float(np.max(np.abs(result.partial_wave(r))))
    if ell == 0:
        radial_max = max(radial_max, float(abs(result.partial_wave(np.array([0.0]))[0])))
    u_max = float(np.max(np.abs(result.radial(r)[0])))
    return XiEstimate(value=safety * (2 * ell + 1) * radial_max, source="numerical",
                      details={"radial_max": radial_max, "u_max": u_max, "safety": safety,
                               "ell": ell, "oracle_convergence": result.convergence})


def xi_state_numerical(p: RadialPotential, k: float, mass: float,
                       safety: float = SAFETY_FACTOR,
                       results: Optional[Sequence[PhaseShiftResult]] = None,
                       n_radii: int = 1200, n_angles: int = 181) -> XiEstimate:
    """Numerical sup-norm of the full scattering state (one incident direction).

    For a central potential every incident direction is a rotation of this
    one, so the single-direction supremum is the supremum over directions.
    """
    if results is None:
        results = oracle_partial_waves(p, k, mass)
    extent = max(p.outer_radius(), 1e-3) + 6.0 * math.pi / k
    r = np.linspace(0.0, extent, n_radii)[1:]
    cos = np.cos(np.linspace(0.0, math.pi, n_angles))
    psi = oracle_state(list(results), r[:, None], cos[None, :])
    sup = float(np.max(np.abs(psi)))
    return XiEstimate(value=safety * sup, source="numerical",
                      details={"state_max": sup, "safety": safety,
                               "lmax": len(results) - 1})


# --------------------------------------------------------------------------
# bound records


def phase_shift_stability(mass: float, ell: int, k: float, l1: float,
                          xi: XiEstimate) -> StabilityBound:
    value = phase_shift_error_bound(mass, ell, xi.value, l1)
    return StabilityBound(value=value, theorem="phase-shift", xi_inf=xi.value, rigor=xi.rigor,
                          inputs={"mass": mass, "ell": ell, "k": k, "l1": l1})


def cross_section_stability(mass: float, k: float, l1: float, sigma: float,
                            xi: XiEstimate) -> StabilityBound:
    c = sqrt_cross_section_radius(mass, xi.value, l1)
    lo, hi = cross_section_interval(mass, xi.value, l1, sigma)
    return StabilityBound(value=c, theorem="cross-section", xi_inf=xi.value, rigor=xi.rigor,
                          inputs={"mass": mass, "k": k, "l1": l1, "sigma": sigma},
                          interval=(lo, hi))


def pointwise_stability(mass: float, k: float, l1: float, xi: XiEstimate) -> StabilityBound:
    value = pointwise_f_bound(mass, xi.value, l1)
    return StabilityBound(value=value, theorem="pointwise", xi_inf=xi.value, rigor=xi.rigor,
                          inputs={"mass": mass, "k": k, "l1": l1})


def free_stability(mass: float, k: float, l1: float) -> StabilityBound:
    return StabilityBound(value=free_scattering_bound(mass, l1), theorem="free", xi_inf=1.0,
                          rigor=RIGOROUS, inputs={"mass": mass, "k": k, "l1": l1})
