"""Independent reference solutions.

Radial phase shifts come from a fixed-step Numerov integration with
Richardson extrapolation over ``h`` and ``h/2``.  Nodes are placed so that
potential breakpoints fall on grid points, and the Numerov step at such a
node carries an explicit correction for the jump in ``u'''`` which would
otherwise degrade the global error to second order.

The closed-form one-dimensional oracles (delta barrier, piecewise-linear
profiles through Airy functions) and the Coulomb phase live here too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.special import airy

from ._special import (legendre_table, log_gamma, riccati_hankel,
                       spherical_jn_table, spherical_yn_table)
from .potentials import RadialPotential

DEFAULT_STEP = 2e-3


# --------------------------------------------------------------------------
# Numerov core


def _numerov_run(q_left, q_right, dq_jump, h, u0, u1, w0=None):
    """March ``u'' = Q u`` forward over a uniform grid.

    ``q_left``/``q_right`` are the one-sided limits of ``Q`` at each node and
    ``dq_jump`` the jump of ``Q'``; both limits coincide away from
    breakpoints.  ``w0`` overrides ``(1 - h^2 Q_0 / 12) u_0`` at the first
    node (needed when ``Q_0 u_0`` is a finite limit of ``inf * 0``).

    The recurrence is carried in summed form, ``D_n = w_{n+1} - w_n`` with
    ``w = (1 - h^2 Q / 12) u``, and both running sums are compensated, which
    keeps round-off growth linear in the number of steps.
    """
    n_nodes = len(q_left)
    qL = list(map(float, q_left))
    qR = list(map(float, q_right))
    dJ = list(map(float, dq_jump))
    c = h * h / 12.0
    h2 = h * h
    c3 = h**3 / 12.0
    u = [0j] * n_nodes
    u[0] = u0
    u[1] = u1
    w_bar_prev = w0 if w0 is not None else u0 * (1.0 - c * 0.5 * (qL[0] + qR[0]))
    if w0 is not None:
        corr_prev = 0.0
    else:
        corr_prev = c * (0.5 * (qL[0] + qR[0]) - qR[0]) * u0
    w = (1.0 - c * qL[1]) * u1          # left-limit w at node 1
    d = w - w_bar_prev                  # D_0
    d_err = 0.0
    w_err = 0.0
    for n in range(1, n_nodes - 1):
        un = u[n]
        q_bar = 0.5 * (qL[n] + qR[n])
        inc = h2 * q_bar * un + c * (qL[n] - q_bar) * un - corr_prev
        jump = qR[n] - qL[n]
        if jump != 0.0 or dJ[n] != 0.0:
            if n >= 2:
                du = (3.0 * un - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * h)
            else:
                du = (un - u[n - 1]) / h
            inc += c3 * (jump * du + dJ[n] * un)
        # compensated D_n = D_{n-1} + inc
        y = inc - d_err
        t = d + y
        d_err = (t - d) - y
        d = t
        # w_bar_n = w_left_n + c (qL - q_bar) u_n, then w_left_{n+1} = w_bar_n + D_n
        w_bar = w + c * (qL[n] - q_bar) * un
        y = d - w_err
        t = w_bar + y
        w_err = (t - w_bar) - y
        w = t
        u[n + 1] = w / (1.0 - c * qL[n + 1])
        corr_prev = c * (q_bar - qR[n]) * un
    return np.array(u)


def _numerov_derivative(u, q_left, q_right, h):
    """Fourth-order nodal derivative ``u'`` of a Numerov solution."""
    u = np.asarray(u)
    n = len(u)
    du = np.empty_like(u)
    # (Q u) seen from the right of node i-1 and from the left of node i+1
    with np.errstate(invalid="ignore"):
        qu_r = q_right * u
        qu_l = q_left * u
    du[1:-1] = (u[2:] - u[:-2] - h * h / 6.0 * (qu_l[2:] - qu_r[:-2])) / (2.0 * h)
    # one-sided fourth order stencils at the ends and at breakpoints
    du[-1] = (25 * u[-1] - 48 * u[-2] + 36 * u[-3] - 16 * u[-4] + 3 * u[-5]) / (12 * h)
    du[0] = (-25 * u[0] + 48 * u[1] - 36 * u[2] + 16 * u[3] - 3 * u[4]) / (12 * h)
    if not np.isfinite(du[1]):
        # Q is infinite at the radial origin
        du[1] = (-3 * u[0] - 10 * u[1] + 18 * u[2] - 6 * u[3] + u[4]) / (12 * h)
    for i in np.nonzero(q_left != q_right)[0]:
        if 4 <= i:
            du[i] = (25 * u[i] - 48 * u[i - 1] + 36 * u[i - 2] - 16 * u[i - 3] + 3 * u[i - 4]) / (12 * h)
        elif i + 4 < n:
            du[i] = (-25 * u[i] + 48 * u[i + 1] - 36 * u[i + 2] + 16 * u[i + 3] - 3 * u[i + 4]) / (12 * h)
    return du


def _aligned_step(h_max: float, breakpoints) -> float:
    """Largest step <= h_max that puts every breakpoint on a node if possible."""
    pts = [b for b in breakpoints if b > 0]
    if not pts:
        return h_max
    b_max = max(pts)
    n0 = math.ceil(b_max / h_max - 1e-12)
    for n in range(n0, 64 * n0 + 1):
        h = b_max / n
        if all(abs(b / h - round(b / h)) < 1e-9 for b in pts):
            return h
    return b_max / n0


def _potential_profile(p: RadialPotential, r: np.ndarray, mass: float, energy: float,
                       ell: int, h: float):
    """One-sided ``Q`` limits and ``Q'`` jumps on the nodes ``r``."""
    q = 2.0 * mass * (p.evaluate(r) - energy)
    with np.errstate(divide="ignore"):
        q = q + np.where(r > 0, ell * (ell + 1) / np.where(r > 0, r, 1.0) ** 2, np.inf)
    q_left = q.copy()
    q_right = q.copy()
    dq_jump = np.zeros_like(q)
    eta = 1e-7 * h
    for b in p.breakpoints():
        i = int(round(b / h))
        if i <= 0 or i >= len(r) or abs(r[i] - b) > 1e-9 * max(b, 1.0):
            continue
        vm1, vm2 = p.evaluate(b - eta), p.evaluate(b - 2 * eta)
        vp1, vp2 = p.evaluate(b + eta), p.evaluate(b + 2 * eta)
        cent = ell * (ell + 1) / b**2
        q_left[i] = 2.0 * mass * (vm1 - energy) + cent
        q_right[i] = 2.0 * mass * (vp1 - energy) + cent
        dq_jump[i] = 2.0 * mass * ((vp2 - vp1) - (vm1 - vm2)) / eta
    return q_left, q_right, dq_jump


def _riccati_bessel(ell: int, x):
    """``x j_l(x)`` and ``x y_l(x)``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return x * spherical_jn_table(ell, x)[ell], x * spherical_yn_table(ell, x)[ell]


def _wrap_half_pi(d: float) -> float:
    """Reduce an angle to ``(-pi/2, pi/2]``."""
    d = math.remainder(d, math.pi)
    return math.pi / 2 if d == -math.pi / 2 else d


def _regular_run(p, ell, k, mass, h, r_end):
    n = int(math.ceil(r_end / h - 1e-9)) + 1
    r = h * np.arange(n)
    energy = k * k / (2.0 * mass)
    q_left, q_right, dq_jump = _potential_profile(p, r, mass, energy, ell, h)
    v0 = p.evaluate(0.0) if p.kind != "inverse-square-cutoff" or p.cutoff > 0 else 0.0
    c = 2.0 * mass * (v0 - energy) / (4 * ell + 6)
    u1 = h ** (ell + 1) * (1.0 + c * h * h)
    # (1 - h^2 Q/12) u at the origin; Q u -> 2 there when ell = 1
    w0 = -h * h / 12.0 * 2.0 if ell == 1 else 0.0
    u = _numerov_run(q_left, q_right, dq_jump, h, 0.0, u1, w0=w0).real
    return r, u, q_left, q_right


def _match(ell, k, r, u, i1, i2):
    jh, yh = _riccati_bessel(ell, k * np.array([r[i1], r[i2]]))
    a, b = np.linalg.solve(np.array([[jh[0], yh[0]], [jh[1], yh[1]]]), np.array([u[i1], u[i2]]))
    # fold the sign into (a, b) first so tiny phases survive the reduction mod pi
    sign = -1.0 if a < 0 else 1.0
    delta = _wrap_half_pi(math.atan2(-sign * b, sign * a))
    # signed amplitude so that u = amp * (cos d j - sin d y) after wrapping
    return delta, a * math.cos(delta) - b * math.sin(delta), (a, b)


@dataclass(frozen=True)
class PhaseShiftResult:
    """Oracle phase shift for one partial wave.

    Attributes
    ----------
    ell, k, mass : int, float, float
    delta : float
        Phase shift in ``(-pi/2, pi/2]``.
    f : complex
        ``(exp(2 i delta) - 1) / (2 i k)``.
    matching_radius : float
        Inner matching radius, beyond the potential's support.
    step : float
        Coarse Numerov step ``h`` (the extrapolation also used ``h/2``).
    convergence : float
        ``|delta(h/2) - delta(h)|`` plus a round-off floor; bounds the
        error of the extrapolated value.
    """

    ell: int
    k: float
    mass: float
    delta: float
    f: complex
    matching_radius: float
    step: float
    convergence: float
    _r: np.ndarray = field(repr=False, compare=False, default=None)
    _u: np.ndarray = field(repr=False, compare=False, default=None)
    _du: np.ndarray = field(repr=False, compare=False, default=None)

    @cached_property
    def _spline(self):
        return CubicHermiteSpline(self._r, self._u, self._du)

    @property
    def s_matrix(self) -> complex:
        return complex(np.exp(2j * self.delta))

    def radial(self, r):
        """Regular solution normalised to ``sin(kr - l pi/2 + delta)`` and its derivative."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        u = np.empty_like(r)
        du = np.empty_like(r)
        inside = r <= self.matching_radius
        if np.any(inside):
            spline = self._spline
            u[inside] = spline(r[inside])
            du[inside] = spline(r[inside], 1)
        out = ~inside
        if np.any(out):
            x = self.k * r[out]
            jh, yh = _riccati_bessel(self.ell, x)
            # derivatives through the recurrences x j_l' = x j_{l-1} - l j_l
            if self.ell == 0:
                djh, dyh = np.cos(x), np.sin(x)
            else:
                jm, ym = _riccati_bessel(self.ell - 1, x)
                djh = jm - self.ell * jh / x
                dyh = ym - self.ell * yh / x
            cd, sd = math.cos(self.delta), math.sin(self.delta)
            u[out] = cd * jh - sd * yh
            du[out] = self.k * (cd * djh - sd * dyh)
        return u, du

    def partial_wave(self, r):
        """Radial factor ``R_l = i^l e^{i delta} u / (k r)`` of the full state."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        u, du = self.radial(r)
        phase = 1j**self.ell * np.exp(1j * self.delta) / self.k
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.where(r > 0, u / np.where(r > 0, r, 1.0), du if self.ell == 0 else 0.0)
        return phase * val

    def to_record(self) -> dict:
        return {
            "ell": self.ell,
            "k": self.k,
            "mass": self.mass,
            "delta": self.delta,
            "f_re": self.f.real,
            "f_im": self.f.imag,
            "matching_radius": self.matching_radius,
            "step": self.step,
            "convergence": self.convergence,
        }


def _support_radius(p: RadialPotential) -> float:
    if p.is_coulomb:
        raise ValueError("oracle requires short-range potential")
    return p.outer_radius()


def numerov_phase_shift(p: RadialPotential, ell: int, k: float, mass: float,
                        h: float | None = None, match_radius: float | None = None) -> PhaseShiftResult:
    """Phase shift of partial wave ``ell`` by Numerov integration.

    Parameters
    ----------
    p : RadialPotential
        Short-range potential.
    ell : int
    k, mass : float
    h : float, optional
        Coarse step; defaults to the smaller of ``2e-3`` and ``0.02 / k_local``.
    match_radius : float, optional
        Inner matching radius; defaults to the support edge.

    Raises
    ------
    ValueError
        For Coulomb tails, ``k h >= 0.5``, or a matching radius inside the
        potential's support.
    """
    support = _support_radius(p)
    if match_radius is not None and match_radius < support:
        raise ValueError("matching radius lies inside the potential support")
    energy = k * k / (2.0 * mass)
    v_max = bound_sup(p)
    k_local = math.sqrt(k * k + 2.0 * mass * v_max)
    if h is None:
        h = min(DEFAULT_STEP, 0.02 / k_local)
    if k * h >= 0.5:
        raise ValueError("step too coarse: k h must be below 0.5")
    h = _aligned_step(h, p.breakpoints())
    r1 = max(support, match_radius or 0.0, 4 * h)
    r2 = r1 + max(math.pi / (2.0 * k), 8 * h)
    deltas = []
    for step in (h, h / 2.0):
        r, u, ql, qr = _regular_run(p, ell, k, mass, step, r2 + 2 * step)
        i1 = int(math.ceil(r1 / step - 1e-9))
        i2 = int(math.ceil(r2 / step - 1e-9))
        delta, amp, _ = _match(ell, k, r, u, i1, i2)
        deltas.append(delta)
    coarse, fine = deltas
    diff = _wrap_half_pi(fine - coarse)
    delta = _wrap_half_pi(fine + diff / 15.0)
    conv = abs(diff) + 1e-12
    f = np.exp(1j * delta) * math.sin(delta) / k
    # renormalise the fine run to the extrapolated phase
    _, _, (a, b) = _match(ell, k, r, u, i1, i2)
    u_norm = u / (a * math.cos(delta) - b * math.sin(delta))
    du_norm = _numerov_derivative(u_norm, ql, qr, h / 2.0)
    keep = slice(0, i1 + 1)
    return PhaseShiftResult(ell=ell, k=float(k), mass=float(mass), delta=float(delta),
                            f=complex(f), matching_radius=float(r[i1]), step=float(h),
                            convergence=float(conv), _r=r[keep], _u=u_norm[keep],
                            _du=du_norm[keep])


def bound_sup(p: RadialPotential) -> float:
    """Largest |V| for step selection (dense sampling for analytic kinds)."""
    if p.kind == "zero":
        return 0.0
    r = np.linspace(0.0, max(p.outer_radius(), 1e-6), 2001)
    return float(np.max(np.abs(p.evaluate(r))))


def radial_solutions(p: RadialPotential, ell: int, k: float, mass: float,
                     h: float | None = None, r_max: float | None = None):
    """Regular and outgoing radial solutions on one uniform grid.

    The regular one is normalised like :func:`numerov_phase_shift`; the
    outgoing one equals the Riccati-Hankel function ``h_l(kr)`` beyond the
    support and is integrated inwards.

    Returns
    -------
    r, u_reg, du_reg, u_out, du_out : ndarray
    """
    res = numerov_phase_shift(p, ell, k, mass, h=h)
    step = res.step / 2.0
    support = _support_radius(p)
    r_end = max(r_max or 0.0, support + math.pi / k) + 2 * step
    n = int(math.ceil(r_end / step)) + 1
    r = step * np.arange(n)
    energy = k * k / (2.0 * mass)
    ql, qr, dj = _potential_profile(p, r, mass, energy, ell, step)
    u_reg, du_reg = res.radial(r)
    hk, dhk = riccati_hankel(ell, k * r[-2:])
    # inward march on the reversed grid; left and right limits swap
    rev = _numerov_run(qr[::-1], ql[::-1], dj[::-1], step, hk[1], hk[0])
    u_out = rev[::-1]
    with np.errstate(all="ignore"):
        du_out = _numerov_derivative(u_out, ql, qr, step)
    return r, u_reg, du_reg, u_out, du_out


def oracle_partial_waves(p: RadialPotential, k: float, mass: float, lmax: int | None = None,
                         tol: float = 1e-14, h: float | None = None) -> list[PhaseShiftResult]:
    """Phase-shift results for ``l = 0, 1, ...``.

    With ``lmax=None`` partial waves are added until ``(2l+1)|f_l|`` drops
    below ``tol`` for two consecutive ``l``.
    """
    out = []
    ell = 0
    quiet = 0
    while True:
        res = numerov_phase_shift(p, ell, k, mass, h=h)
        out.append(res)
        if lmax is not None:
            if ell >= lmax:
                break
        else:
            quiet = quiet + 1 if (2 * ell + 1) * abs(res.f) < tol else 0
            if quiet >= 2 or ell >= 60:
                break
        ell += 1
    return out


def oracle_state(results: list[PhaseShiftResult], r, cos_theta):
    """Full scattering state ``e^{ikz} + sum (2l+1) P_l (R_l - i^l j_l)``."""
    r = np.asarray(r, dtype=float)
    u = np.asarray(cos_theta, dtype=float)
    r_b, u_b = np.broadcast_arrays(r, u)
    k = results[0].k
    lmax = len(results) - 1
    leg = legendre_table(lmax, u_b.ravel())
    jl = spherical_jn_table(lmax, k * r_b.ravel())
    psi = np.exp(1j * k * r_b.ravel() * u_b.ravel())
    for res in results:
        ell = res.ell
        scat = res.partial_wave(r_b.ravel()) - 1j**ell * jl[ell]
        psi = psi + (2 * ell + 1) * leg[ell] * scat
    return psi.reshape(r_b.shape)


def free_partial_wave(ell: int, k: float, r):
    """Spherical Bessel ``j_l(kr)`` by downward recurrence."""
    scalar = np.ndim(r) == 0
    out = spherical_jn_table(ell, k * np.atleast_1d(np.asarray(r, dtype=float)))[ell]
    return float(out[0]) if scalar else out


def square_well_delta0(depth: float, radius: float, k: float, mass: float) -> float:
    """Closed-form s-wave phase shift of a square well of signed depth.

    Barriers above the energy use the evanescent interior solution.
    """
    kp2 = 2.0 * mass * (k * k / (2.0 * mass) - depth)
    if kp2 > 0:
        kp = math.sqrt(kp2)
        ratio = k / kp * math.tan(kp * radius)
    elif kp2 < 0:
        kappa = math.sqrt(-kp2)
        ratio = k / kappa * math.tanh(kappa * radius)
    else:
        ratio = k * radius
    return _wrap_half_pi(-k * radius + math.atan(ratio))


# --------------------------------------------------------------------------
# Coulomb phase


def coulomb_sigma(ell: int, eta: float) -> float:
    """Coulomb phase ``arg Gamma(l + 1 + i eta)``, continuous in ``eta``."""
    if eta == 0.0:
        return 0.0
    return log_gamma(complex(ell + 1, eta)).imag


# --------------------------------------------------------------------------
# one-dimensional oracles


def delta_1d_transmission(alpha: float, k: float, mass: float) -> tuple[complex, complex]:
    """Transmission and reflection amplitudes of ``V = alpha delta(x - x0)``.

    The position ``x0`` only changes the phase of ``r``, not ``|t|``.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    t = 1.0 / (1.0 + 1j * mass * alpha / k)
    return t, t - 1.0


@dataclass(frozen=True)
class LineScattering:
    """Left-incident scattering state on the line, unit incident amplitude."""

    x: np.ndarray
    psi: np.ndarray
    transmission: complex
    reflection: complex


def line_scattering_state(potential, breakpoints, x_left: float, x_right: float,
                          k: float, mass: float, h: float = 1e-3) -> LineScattering:
    """Numerov transmission state for a potential supported in ``[x_left, x_right]``.

    The march starts at ``x_right`` from the pure transmitted wave and runs
    leftwards; the incident amplitude is read off at ``x_left``.
    """
    length = x_right - x_left
    n = int(math.ceil(length / h))
    h = length / n
    x = x_left + h * np.arange(n + 1)
    energy = k * k / (2.0 * mass)
    q = 2.0 * mass * (np.asarray(potential(x), dtype=float) - energy)
    ql, qr, dj = q.copy(), q.copy(), np.zeros_like(q)
    eta = 1e-7 * h
    for b in breakpoints:
        i = int(round((b - x_left) / h))
        if 0 < i < n and abs(x[i] - b) < 1e-9 * max(1.0, abs(b)):
            vm1, vm2 = potential(np.array([b - eta, b - 2 * eta]))
            vp1, vp2 = potential(np.array([b + eta, b + 2 * eta]))
            ql[i] = 2.0 * mass * (vm1 - energy)
            qr[i] = 2.0 * mass * (vp1 - energy)
            dj[i] = 2.0 * mass * ((vp2 - vp1) - (vm1 - vm2)) / eta
    start = np.exp(1j * k * x[-2:])
    psi = _numerov_run(qr[::-1], ql[::-1], dj[::-1], h, start[1], start[0])[::-1]
    dpsi = _numerov_derivative(psi, ql, qr, h)
    # psi = A e^{ikx} + B e^{-ikx} on the left edge, where V = 0
    a_in = (dpsi[0] + 1j * k * psi[0]) / (2j * k) * np.exp(-1j * k * x[0])
    b_out = (1j * k * psi[0] - dpsi[0]) / (2j * k) * np.exp(1j * k * x[0])
    return LineScattering(x=x, psi=psi / a_in, transmission=complex(1.0 / a_in),
                          reflection=complex(b_out / a_in))


def _linear_basis(x, energy, mass, value, slope, x0):
    """Fundamental solutions of ``-psi''/2M + V psi = E psi`` for ``V = value + slope (x - x0)``.

    Returns a 2x2 matrix ``[[f1, f2], [f1', f2']]`` at ``x``.
    """
    if slope == 0.0:
        q = np.sqrt(complex(2.0 * mass * (energy - value)))
        if q == 0:
            return np.array([[1.0, x - x0], [0.0, 1.0]], dtype=complex)
        ep = np.exp(1j * q * (x - x0))
        em = np.exp(-1j * q * (x - x0))
        return np.array([[ep, em], [1j * q * ep, -1j * q * em]])
    beta = np.cbrt(2.0 * mass * slope)
    z = beta * (x - x0 - (energy - value) / slope)
    ai, aip, bi, bip = airy(z)
    return np.array([[ai, bi], [beta * aip, beta * bip]], dtype=complex)


@dataclass(frozen=True)
class PiecewiseLinearScattering:
    """Exact transmission state for a piecewise-linear line potential.

    ``coefficients[i]`` multiplies the fundamental pair of segment ``i``
    (plane waves on flat segments, Airy functions on sloped ones).
    """

    nodes: tuple
    values: tuple
    energy: float
    mass: float
    coefficients: tuple
    transmission: complex
    reflection: complex

    def segment_basis(self, i, x):
        x0, x1 = self.nodes[i], self.nodes[i + 1]
        v0, v1 = self.values[i], self.values[i + 1]
        return _linear_basis(x, self.energy, self.mass, v0, (v1 - v0) / (x1 - x0), x0)

    def __call__(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty(x.shape, dtype=complex)
        k = math.sqrt(2.0 * self.mass * self.energy)
        left = x < self.nodes[0]
        right = x >= self.nodes[-1]
        out[left] = np.exp(1j * k * x[left]) + self.reflection * np.exp(-1j * k * x[left])
        out[right] = self.transmission * np.exp(1j * k * x[right])
        for i in range(len(self.nodes) - 1):
            m = (x >= self.nodes[i]) & (x < self.nodes[i + 1])
            if np.any(m):
                basis = self.segment_basis(i, x[m])
                out[m] = self.coefficients[i][0] * basis[0, 0] + self.coefficients[i][1] * basis[0, 1]
        return out


def piecewise_linear_scattering(nodes, values, energy: float, mass: float) -> PiecewiseLinearScattering:
    """Exact left-incident state for a continuous piecewise-linear potential.

    ``values`` are the potential at ``nodes``; the potential vanishes
    outside ``[nodes[0], nodes[-1]]`` and the end values must be zero.
    """
    nodes = tuple(float(x) for x in nodes)
    values = tuple(float(v) for v in values)
    k = math.sqrt(2.0 * mass * energy)
    # state vector (psi, psi') just right of the last node
    xr = nodes[-1]
    state = np.array([np.exp(1j * k * xr), 1j * k * np.exp(1j * k * xr)])
    coefs = [None] * (len(nodes) - 1)
    for i in range(len(nodes) - 2, -1, -1):
        x0, x1 = nodes[i], nodes[i + 1]
        slope = (values[i + 1] - values[i]) / (x1 - x0)
        b1 = _linear_basis(x1, energy, mass, values[i], slope, x0)
        c = np.linalg.solve(b1, state)
        coefs[i] = (complex(c[0]), complex(c[1]))
        state = _linear_basis(x0, energy, mass, values[i], slope, x0) @ c
    xl = nodes[0]
    a_in = (state[1] + 1j * k * state[0]) / (2j * k) * np.exp(-1j * k * xl)
    b_out = (1j * k * state[0] - state[1]) / (2j * k) * np.exp(1j * k * xl)
    coefs = tuple((c0 / a_in, c1 / a_in) for c0, c1 in coefs)
    return PiecewiseLinearScattering(nodes=nodes, values=values, energy=energy, mass=mass,
                                     coefficients=coefs, transmission=complex(1.0 / a_in),
                                     reflection=complex(b_out / a_in))
