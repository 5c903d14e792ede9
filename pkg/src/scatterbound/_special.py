"""Special functions shared by the oracle and the wavefield layers.

Everything here is vectorised over the argument and kept free of scipy so
that the oracles stay independent of the library routines they are tested
against.
"""

import cmath
import math

import numpy as np

# Lanczos coefficients for g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def log_gamma(z: complex) -> complex:
    """Complex log-gamma by the Lanczos approximation.

    For ``Re z >= 0.5`` the result is the branch that is continuous in
    ``Im z`` and real on the positive axis; smaller real parts go through
    the reflection formula.

    Parameters
    ----------
    z : complex
        Argument, not a non-positive integer.

    Returns
    -------
    complex
        ``log Gamma(z)``.
    """
    z = complex(z)
    if z.real < 0.5:
        # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return cmath.log(math.pi / cmath.sin(math.pi * z)) - log_gamma(1.0 - z)
    z -= 1.0
    series = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        series += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(series)


def legendre_table(lmax: int, u) -> np.ndarray:
    """Legendre polynomials ``P_0 .. P_lmax`` by upward recurrence.

    Returns an array of shape ``(lmax + 1,) + np.shape(u)``.
    """
    u = np.asarray(u, dtype=float)
    out = np.empty((lmax + 1,) + u.shape)
    out[0] = 1.0
    if lmax >= 1:
        out[1] = u
    for ell in range(1, lmax):
        out[ell + 1] = ((2 * ell + 1) * u * out[ell] - ell * out[ell - 1]) / (ell + 1)
    return out


def _double_factorial_odd(ell: int) -> float:
    return float(np.prod(np.arange(1, 2 * ell + 2, 2, dtype=float)))


def spherical_jn_table(lmax: int, x) -> np.ndarray:
    """Spherical Bessel ``j_0 .. j_lmax`` by Miller's downward recurrence.

    Small arguments use the two-term power series; elsewhere the downward
    sequence is normalised against whichever of ``j_0`` and ``j_1`` is
    larger in magnitude.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros((lmax + 1,) + x.shape)
    small = x < 1e-3
    if np.any(small):
        xs = x[small]
        for ell in range(lmax + 1):
            out[ell, small] = (xs**ell / _double_factorial_odd(ell)
                               * (1.0 - xs * xs / (2.0 * (2 * ell + 3))))
    big = ~small
    if np.any(big):
        xb = x[big]
        start = lmax + 20 + int(np.max(xb))
        j_next = np.zeros_like(xb)
        j_cur = np.full_like(xb, 1e-30)
        seq = np.zeros((lmax + 2,) + xb.shape)
        for ell in range(start, 0, -1):
            j_prev = (2 * ell + 1) / xb * j_cur - j_next
            j_next, j_cur = j_cur, j_prev
            # rescale to dodge overflow far above the turning point
            scale = np.maximum(np.abs(j_cur), 1.0)
            big_mask = scale > 1e250
            if np.any(big_mask):
                j_cur = np.where(big_mask, j_cur / scale, j_cur)
                j_next = np.where(big_mask, j_next / scale, j_next)
                seq = np.where(big_mask, seq / scale, seq)
            if ell - 1 <= lmax + 1:
                seq[ell - 1] = j_cur
        j0 = np.sin(xb) / xb
        j1 = np.sin(xb) / xb**2 - np.cos(xb) / xb
        use_j0 = np.abs(j0) >= np.abs(j1)
        norm = np.where(use_j0, j0 / seq[0], j1 / seq[1])
        out[:, big] = seq[: lmax + 1] * norm
    return out


def spherical_yn_table(lmax: int, x) -> np.ndarray:
    """Spherical Neumann ``y_0 .. y_lmax`` by upward recurrence (stable)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((lmax + 1,) + x.shape)
    out[0] = -np.cos(x) / x
    if lmax >= 1:
        out[1] = -np.cos(x) / x**2 - np.sin(x) / x
    for ell in range(1, lmax):
        out[ell + 1] = (2 * ell + 1) / x * out[ell] - out[ell - 1]
    return out


def riccati_hankel(ell: int, x):
    """Outgoing Riccati-Hankel function and its derivative.

    ``h(x) = e^{ix} sum_m (ell+m)! / (m! (ell-m)!) (i / 2x)^m``, which equals
    ``i^{ell+1} x h_ell^{(1)}(x)`` and tends to ``e^{ix}`` at large ``x``.

    Returns
    -------
    (h, dh) : tuple of complex ndarray
    """
    x = np.asarray(x, dtype=float)
    phase = np.exp(1j * x)
    total = np.zeros(x.shape, dtype=complex)
    dtotal = np.zeros(x.shape, dtype=complex)
    for m in range(ell + 1):
        coef = (math.factorial(ell + m) / (math.factorial(m) * math.factorial(ell - m))
                * (0.5j) ** m)
        xm = x ** (-m) if m else np.ones_like(x)
        total += coef * xm
        dtotal += coef * (1j * xm - (m * x ** (-m - 1) if m else 0.0))
    return phase * total, phase * dtotal
