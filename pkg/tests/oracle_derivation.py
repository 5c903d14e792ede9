"""Independent derivations of the frozen reference values.

Everything here uses mpmath at 40 digits or a general-purpose ODE solver
and none of the package's own numerics.  Running the module prints the
values that ``oracle_values.py`` freezes.
"""

from __future__ import annotations

import math

import mpmath as mp
import numpy as np
from scipy.integrate import solve_ivp

mp.mp.dps = 40


def square_well_phase(ell: int, depth: float, radius: float, k: float, mass: float) -> float:
    """Phase shift of a square well by matching spherical Bessel functions at ``R``."""
    k, radius = mp.mpf(k), mp.mpf(radius)
    kin = mp.sqrt(k**2 - 2 * mass * mp.mpf(depth))

    def j(n, x):
        return mp.sqrt(mp.pi / (2 * x)) * mp.besselj(n + mp.mpf(1) / 2, x)

    def y(n, x):
        return mp.sqrt(mp.pi / (2 * x)) * mp.bessely(n + mp.mpf(1) / 2, x)

    def d(f, n, x):
        return mp.diff(lambda t: f(n, t), x)

    # log-derivative matching of the interior regular solution
    beta = kin * d(j, ell, kin * radius) / j(ell, kin * radius)
    x = k * radius
    num = k * d(j, ell, x) - beta * j(ell, x)
    den = k * d(y, ell, x) - beta * y(ell, x)
    return float(mp.atan(num / den))


def arg_gamma(ell: int, eta: float) -> float:
    """``arg Gamma(l + 1 + i eta)`` from the principal log-gamma branch."""
    return float(mp.im(mp.loggamma(mp.mpc(ell + 1, eta))))


def gaussian_tail_radius(radius: float, strength: float, tol: float) -> float:
    """Radius where ``strength exp(-r^2 / 2 R^2)`` crosses ``tol``."""
    f = lambda r: strength * mp.exp(-r**2 / (2 * mp.mpf(radius) ** 2)) - tol
    return float(mp.findroot(f, 7.0 * radius))


def cross_section_two_waves() -> float:
    """``2 pi int |1 + 3u|^2 du`` by 2D quadrature (f_0 = f_1 = 1)."""
    return float(mp.quad(lambda phi: mp.quad(lambda u: (1 + 3 * u) ** 2, [-1, 1]), [0, 2 * mp.pi]))


def plateau_forward_amplitude(a: float, eps: float, energy: float = 1.0, mass: float = 1.0):
    """Forward/backward plateau coefficients by direct ODE integration.

    Integrates ``psi'' = 2M (V - E) psi`` from the right (pure outgoing
    wave) to the left, normalises to a unit incident wave and returns
    ``(|forward|, |backward|)`` of ``psi = F e^{iqx} + B e^{-iqx}`` on the
    plateau ``(0, a)``.
    """
    top = energy - eps
    k = math.sqrt(2 * mass * energy)

    def pot(x):
        if -a < x < 0:
            return top * (x + a) / a
        if 0 <= x <= a:
            return top
        if a < x < 2 * a:
            return top * (2 * a - x) / a
        return 0.0

    def rhs(x, y):
        return [y[1], 2 * mass * (pot(x) - energy) * y[0]]

    x_right = 2 * a
    y0 = np.array([np.exp(1j * k * x_right), 1j * k * np.exp(1j * k * x_right)])
    opts = dict(rtol=1e-11, atol=1e-13, method="DOP853", max_step=0.5)
    # plateau probe
    seg = solve_ivp(rhs, (x_right, a), y0, **opts)
    ya = seg.y[:, -1]
    seg = solve_ivp(rhs, (a, a / 2), ya, **opts)
    ym = seg.y[:, -1]
    seg = solve_ivp(rhs, (a / 2, 0.0), ym, **opts)
    seg = solve_ivp(rhs, (0.0, -a), seg.y[:, -1], **opts)
    yl = seg.y[:, -1]
    a_in = (yl[1] + 1j * k * yl[0]) / (2j * k) * np.exp(1j * k * a)
    q = math.sqrt(2 * mass * eps)
    xm = a / 2
    fwd = (ym[1] + 1j * q * ym[0]) / (2j * q) * np.exp(-1j * q * xm)
    bwd = (1j * q * ym[0] - ym[1]) / (2j * q) * np.exp(1j * q * xm)
    return abs(fwd / a_in), abs(bwd / a_in)


if __name__ == "__main__":  # pragma: no cover
    print("SQUARE_WELL_DELTAS =", [square_well_phase(l, -1.0, 1.0, 1.0, 1.0) for l in range(9)])
    print("ARG_GAMMA_1_PLUS_I =", arg_gamma(0, 1.0))
    print("ARG_GAMMA_2_PLUS_I =", arg_gamma(1, 1.0))
    print("GAUSSIAN_TAIL_RADIUS =", gaussian_tail_radius(1.0, 1.0, 1e-12))
    print("SIGMA_F0_F1 =", cross_section_two_waves())
    print("PLATEAU_AMPLITUDES =", plateau_forward_amplitude(1e4, 1e-4))
