"""Scattering ansatze as incident + bulk + outgoing pieces.

The approximate state is

    psi(r, u) = e^{i k r u} + sum_l (2l+1) P_l(u) [B_l(r) + f_l w_l(r) h_l(kr)] / r

where ``u = cos(theta)``, ``B_l`` is a quintic Hermite function on a radial
grid (nodal values, slopes and curvatures), ``h_l`` is the outgoing Riccati-Hankel
function and ``w_l(r) = (1 - exp(-r^2/w^2))^{l+1}`` is a window that
removes the ``r^{-l}`` singularity of ``h_l`` at the origin.  For ``l = 0``
the outgoing piece is exactly ``f_0 w(r) e^{ikr} / r``.

The curvature is continuous except at designated break nodes (potential
discontinuities), where separate left and right limits are carried because
the exact radial function has a jump in its second derivative there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from ._special import legendre_table, riccati_hankel, spherical_jn_table
from .oracles import coulomb_sigma, oracle_partial_waves

RECORD_FORMAT = "scatterbound-ansatz"
RECORD_VERSION = 1


# --------------------------------------------------------------------------
# radial grids


def radial_grid(n_nodes: int, r_outer: float, breakpoints: Sequence[float] = (),
                stretch: float = 4.0) -> np.ndarray:
    """Geometric grid on ``[0, r_outer]`` with breakpoints snapped to nodes.

    Parameters
    ----------
    n_nodes : int
        Number of nodes including both ends (at least 4).
    r_outer : float
        Outer radius.
    breakpoints : sequence of float
        Radii that must be grid nodes (potential discontinuities).
    stretch : float
        Ratio of the last cell width to the first.
    """
    if n_nodes < 4:
        raise ValueError("need at least 4 grid nodes")
    n_cells = n_nodes - 1
    ratio = stretch ** (1.0 / max(n_cells - 1, 1))
    widths = ratio ** np.arange(n_cells)
    grid = np.concatenate([[0.0], np.cumsum(widths)])
    grid *= r_outer / grid[-1]
    grid[-1] = r_outer
    taken = {0, n_nodes - 1}
    for b in sorted(b for b in breakpoints if 0.0 < b < r_outer):
        order = np.argsort(np.abs(grid - b))
        for i in order:
            if int(i) not in taken:
                taken.add(int(i))
                grid[i] = b
                break
    grid = np.sort(grid)
    if np.any(np.diff(grid) <= 0):
        raise ValueError("breakpoints too dense for the requested grid")
    return grid


def break_nodes(grid: np.ndarray, breakpoints: Sequence[float]) -> tuple:
    """Indices of interior nodes that coincide with breakpoints."""
    out = []
    for b in breakpoints:
        i = int(np.argmin(np.abs(grid - b)))
        if 0 < i < grid.size - 1 and abs(grid[i] - b) <= 1e-12 * max(1.0, b):
            out.append(i)
    return tuple(sorted(set(out)))


def refine_grid(grid: np.ndarray) -> np.ndarray:
    """Insert cell midpoints (``N`` nodes become ``2N - 1``)."""
    mids = 0.5 * (grid[1:] + grid[:-1])
    out = np.empty(2 * len(grid) - 1)
    out[0::2] = grid
    out[1::2] = mids
    return out


# quintic Hermite basis on t in [0, 1]: rows are (u_0, m_0, c_0, u_1, m_1, c_1),
# columns the coefficients of t^0 .. t^5
_QUINTIC = np.array([
    [1.0, 0.0, 0.0, -10.0, 15.0, -6.0],
    [0.0, 1.0, 0.0, -6.0, 8.0, -3.0],
    [0.0, 0.0, 0.5, -1.5, 1.5, -0.5],
    [0.0, 0.0, 0.0, 10.0, -15.0, 6.0],
    [0.0, 0.0, 0.0, -4.0, 7.0, -3.0],
    [0.0, 0.0, 0.0, 0.5, -1.0, 0.5],
])
_QUINTIC_D1 = np.array([np.polynomial.polynomial.polyder(c) for c in _QUINTIC])
_QUINTIC_D2 = np.array([np.polynomial.polynomial.polyder(c, 2) for c in _QUINTIC])


def hermite_weights(grid: np.ndarray, r: np.ndarray):
    """Quintic Hermite basis weights at ``r``.

    Returns
    -------
    cell : ndarray of int
        Cell index ``i`` with ``grid[i] <= r <= grid[i+1]``.
    value, first, second : ndarray, shape (6, n)
        Weights of ``(u_i, m_i, c_i, u_{i+1}, m_{i+1}, c_{i+1})`` for the
        function and its first and second derivatives; ``c_i`` is the right
        limit of the curvature at node ``i`` and ``c_{i+1}`` the left limit
        at node ``i+1``.
    """
    r = np.asarray(r, dtype=float)
    cell = np.clip(np.searchsorted(grid, r, side="right") - 1, 0, len(grid) - 2)
    h = grid[cell + 1] - grid[cell]
    t = (r - grid[cell]) / h
    tp = t[None, :] ** np.arange(6)[:, None]
    scale = np.array([1.0, 1.0, 1.0, 1.0, 1.0, 1.0])[:, None] * np.ones_like(h)[None, :]
    # dof scaling: slopes carry h, curvatures h^2
    scale[1] = scale[4] = h
    scale[2] = scale[5] = h * h
    value = (_QUINTIC @ tp) * scale
    first = (_QUINTIC_D1 @ tp[:5]) * scale / h
    second = (_QUINTIC_D2 @ tp[:4]) * scale / (h * h)
    return cell, value, first, second


# --------------------------------------------------------------------------
# window and outgoing radial pieces


def window(ell: int, r, width: float):
    """Window ``(1 - exp(-r^2/w^2))^{l+1}`` and its first two derivatives."""
    r = np.asarray(r, dtype=float)
    x = (r / width) ** 2
    s = -np.expm1(-x)
    e = np.exp(-x)
    ds = 2.0 * r / width**2 * e
    d2s = (2.0 / width**2 - 4.0 * r * r / width**4) * e
    p = ell + 1
    if p == 1:
        return s, ds, d2s
    return s**p, p * s ** (p - 1) * ds, p * (p - 1) * s ** (p - 2) * ds * ds + p * s ** (p - 1) * d2s


def outgoing_radial(ell: int, k: float, width: float, r):
    """Windowed outgoing function ``w_l(r) h_l(kr)`` with its derivative.

    Also returns ``w'' h + 2 k w' h'``, which is what the radial kinetic
    operator leaves behind since ``h_l`` solves the free equation.
    """
    r = np.asarray(r, dtype=float)
    w0, w1, w2 = window(ell, r, width)
    with np.errstate(divide="ignore", invalid="ignore"):
        hk, dhk = riccati_hankel(ell, k * np.where(r > 0, r, 1.0))
    val = np.where(r > 0, w0 * hk, 0.0)
    der = np.where(r > 0, w1 * hk + k * w0 * dhk, 0.0)
    rem = np.where(r > 0, w2 * hk + 2.0 * k * w1 * dhk, 0.0)
    return val, der, rem


# --------------------------------------------------------------------------
# ansatz


def _frozen(x, dtype):
    arr = np.array(x, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ScatteringAnsatz:
    """Immutable snapshot of an approximate scattering state.

    Attributes
    ----------
    k, mass, energy : float
        Incident momentum, mass and ``k^2 / 2M`` (checked for exact equality).
    grid : ndarray, shape (N,)
        Radial nodes, ``grid[0] = 0`` and ``grid[-1] = R_grid``.
    bulk, bulk_slope, bulk_curv : ndarray, shape (lmax + 1, N)
        Nodal values, slopes and (right-limit) curvatures of ``B_l``.
    bulk_curv_left : ndarray, shape (lmax + 1, N)
        Left-limit curvatures; equal to ``bulk_curv`` except at break nodes.
    breaks : tuple of int
        Interior node indices where the curvature may jump.
    amplitudes : ndarray, shape (lmax + 1,)
        Outgoing amplitudes ``f_l``.
    width : float
        Window width ``w``.
    eta : float
        Sommerfeld parameter (0 for short-range problems).
    """

    k: float
    mass: float
    energy: float
    grid: np.ndarray
    bulk: np.ndarray
    bulk_slope: np.ndarray
    bulk_curv: np.ndarray
    bulk_curv_left: np.ndarray
    amplitudes: np.ndarray
    width: float
    breaks: tuple = ()
    eta: float = 0.0

    def __post_init__(self):
        if self.k <= 0 or self.mass <= 0:
            raise ValueError("k and mass must be positive")
        if self.energy != self.k * self.k / (2.0 * self.mass):
            raise ValueError("energy must equal k^2 / 2M exactly")
        grid = _frozen(self.grid, float)
        bulk = _frozen(self.bulk, complex)
        slope = _frozen(self.bulk_slope, complex)
        curv = _frozen(self.bulk_curv, complex)
        curv_left = _frozen(self.bulk_curv_left, complex)
        amps = _frozen(self.amplitudes, complex)
        breaks = tuple(sorted(int(i) for i in self.breaks))
        if grid.ndim != 1 or grid[0] != 0.0 or np.any(np.diff(grid) <= 0):
            raise ValueError("grid must start at 0 and increase strictly")
        shape = (amps.size, grid.size)
        if any(x.shape != shape for x in (bulk, slope, curv, curv_left)):
            raise ValueError("bulk arrays must have shape (lmax + 1, n_nodes)")
        if any(not 0 < i < grid.size - 1 for i in breaks):
            raise ValueError("break nodes must be interior")
        if (np.any(bulk[:, 0] != 0) or np.any(bulk[:, -1] != 0) or np.any(slope[:, -1] != 0)
                or np.any(curv[:, -1] != 0) or np.any(curv_left[:, -1] != 0)):
            raise ValueError("bulk must vanish at the outer radius together with its derivatives")
        if np.any(slope[1:, 0] != 0) or np.any(curv[2:, 0] != 0):
            raise ValueError("bulk must behave as r^(l+1) at the origin")
        tied = np.ones(grid.size, bool)
        tied[list(breaks)] = False
        if np.any(curv_left[:, tied] != curv[:, tied]):
            raise ValueError("curvature limits may differ only at break nodes")
        if self.width <= 0:
            raise ValueError("window width must be positive")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "bulk", bulk)
        object.__setattr__(self, "bulk_slope", slope)
        object.__setattr__(self, "bulk_curv", curv)
        object.__setattr__(self, "bulk_curv_left", curv_left)
        object.__setattr__(self, "breaks", breaks)
        object.__setattr__(self, "amplitudes", amps)

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls, k: float, mass: float, lmax: int = 8, grid: Optional[np.ndarray] = None,
             r_outer: Optional[float] = None, n_nodes: int = 256,
             breakpoints: Sequence[float] = (), width: Optional[float] = None,
             eta: float = 0.0) -> "ScatteringAnsatz":
        """Plane-wave-only ansatz (zero bulk, zero outgoing amplitudes)."""
        if grid is None:
            if r_outer is None:
                raise ValueError("give either grid or r_outer")
            grid = radial_grid(n_nodes, r_outer, breakpoints)
        grid = np.asarray(grid, dtype=float)
        shape = (lmax + 1, grid.size)
        zeros = np.zeros(shape, complex)
        return cls(k=float(k), mass=float(mass), energy=k * k / (2.0 * mass), grid=grid,
                   bulk=zeros, bulk_slope=zeros, bulk_curv=zeros, bulk_curv_left=zeros,
                   amplitudes=np.zeros(lmax + 1, complex),
                   width=float(1.0 / k if width is None else width),
                   breaks=break_nodes(grid, breakpoints), eta=float(eta))

    def replace(self, **changes) -> "ScatteringAnsatz":
        return replace(self, **changes)

    # -- properties --------------------------------------------------------

    @property
    def lmax(self) -> int:
        return self.amplitudes.size - 1

    @property
    def r_grid(self) -> float:
        return float(self.grid[-1])

    @property
    def is_coulomb(self) -> bool:
        return self.eta != 0.0

    def asymptotic_form(self) -> "AsymptoticForm":
        return AsymptoticForm(amplitudes=self.amplitudes, eta=self.eta)

    def compatible(self, other: "ScatteringAnsatz") -> bool:
        return (self.k == other.k and self.mass == other.mass and self.width == other.width
                and self.eta == other.eta and self.grid.shape == other.grid.shape
                and np.array_equal(self.grid, other.grid) and self.lmax == other.lmax
                and self.breaks == other.breaks)

    def __add__(self, other: "ScatteringAnsatz") -> "ScatteringAnsatz":
        """Sum of the bulk and outgoing parts (the incident wave is shared)."""
        if not self.compatible(other):
            raise ValueError("ansatze must share grid, k, M, w and eta")
        return self.replace(bulk=self.bulk + other.bulk,
                            bulk_slope=self.bulk_slope + other.bulk_slope,
                            bulk_curv=self.bulk_curv + other.bulk_curv,
                            bulk_curv_left=self.bulk_curv_left + other.bulk_curv_left,
                            amplitudes=self.amplitudes + other.amplitudes)

    # -- evaluation --------------------------------------------------------

    def bulk_radial(self, r, derivatives: int = 0):
        """``B_l(r)`` (and derivatives) for all ``l``, zero beyond ``R_grid``.

        Returns a list ``[B, B', B'']`` truncated to ``derivatives + 1``
        entries, each of shape ``(lmax + 1, n)``.
        """
        r = np.atleast_1d(np.asarray(r, dtype=float))
        cell, w0, w1, w2 = hermite_weights(self.grid, r)
        inside = (r <= self.r_grid)[None, :]
        dofs = (self.bulk[:, cell], self.bulk_slope[:, cell], self.bulk_curv[:, cell],
                self.bulk[:, cell + 1], self.bulk_slope[:, cell + 1],
                self.bulk_curv_left[:, cell + 1])
        out = []
        for w in (w0, w1, w2)[: derivatives + 1]:
            val = sum(w[j][None, :] * dofs[j] for j in range(6))
            out.append(np.where(inside, val, 0.0))
        return out


def assemble(a: ScatteringAnsatz, r, cos_theta, incident: bool = True,
             derivative: bool = False):
    """Evaluate the ansatz at ``(r, cos_theta)``.

    Parameters
    ----------
    a : ScatteringAnsatz
    r, cos_theta : array_like
        Broadcastable coordinates, ``r >= 0`` and ``|cos_theta| <= 1``.
    incident : bool
        Include the incident plane wave.
    derivative : bool
        Also return the radial derivative ``d psi / dr``.

    Returns
    -------
    psi or (psi, dpsi_dr) : complex ndarray
    """
    r = np.asarray(r, dtype=float)
    u = np.asarray(cos_theta, dtype=float)
    if np.any(r < 0) or np.any(np.abs(u) > 1):
        raise ValueError("need r >= 0 and |cos_theta| <= 1")
    r_b, u_b = np.broadcast_arrays(r, u)
    shape = r_b.shape
    rr, uu = r_b.ravel(), u_b.ravel()
    k, eta = a.k, a.eta
    coulomb = eta != 0.0
    if coulomb and np.any(np.abs(uu - 1.0) == 0.0) and incident:
        raise ValueError("Coulomb incident wave is singular on the forward axis")

    # radial factors per partial wave: (B + f w h) / r and its r-derivative
    bulk = a.bulk_radial(rr, derivatives=1 if derivative else 0)
    radial = np.empty((a.lmax + 1, rr.size), complex)
    dradial = np.empty_like(radial) if derivative else None
    pos = rr > 0
    safe = np.where(pos, rr, 1.0)
    if coulomb:
        out_phase = np.exp(-1j * eta * np.log(2.0 * k * safe))
    for ell in range(a.lmax + 1):
        ov, od, _ = outgoing_radial(ell, k, a.width, rr)
        f = a.amplitudes[ell]
        if coulomb:
            ov_c = ov * out_phase
            od = (od - 1j * eta / safe * ov) * out_phase
            ov = ov_c
        num = bulk[0][ell] + f * ov
        radial[ell] = np.where(pos, num / safe, 0.0)
        if derivative:
            dnum = bulk[1][ell] + f * od
            dradial[ell] = np.where(pos, dnum / safe - num / safe**2, 0.0)
    # r -> 0 limit of B_0 / r is B_0'(0); the outgoing piece vanishes there
    if np.any(~pos):
        radial[0, ~pos] = a.bulk_slope[0, 0]
    leg = legendre_table(a.lmax, uu) * (2 * np.arange(a.lmax + 1) + 1)[:, None]
    psi = np.sum(leg * radial, axis=0)
    dpsi = np.sum(leg * dradial, axis=0) if derivative else None
    if incident:
        phase = k * rr * uu
        if coulomb:
            with np.errstate(divide="ignore"):
                phase = phase + eta * np.log(k * rr * (1.0 - uu))
        inc = np.exp(1j * phase)
        psi = psi + inc
        if derivative:
            dphase = k * uu + (eta / safe if coulomb else 0.0)
            dpsi = dpsi + 1j * dphase * inc
    if derivative:
        return psi.reshape(shape), dpsi.reshape(shape)
    return psi.reshape(shape)


def coulomb_radial_phase(ell: int, k: float, eta: float, r: float) -> float:
    """Asymptotic Coulomb phase ``kr - eta log(2kr) - l pi/2 + sigma_l(eta)``."""
    if r <= 0 or k <= 0:
        raise ValueError("need r > 0 and k > 0")
    x = k * r
    if eta == 0.0:
        return x - ell * math.pi / 2
    return x - eta * math.log(2.0 * x) - ell * math.pi / 2 + coulomb_sigma(ell, eta)


# --------------------------------------------------------------------------
# asymptotic amplitudes


@dataclass(frozen=True, eq=False)
class AsymptoticForm:
    """Partial-wave amplitudes of the outgoing wave."""

    amplitudes: np.ndarray
    eta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _frozen(self.amplitudes, complex))

    @property
    def lmax(self) -> int:
        return self.amplitudes.size - 1

    @property
    def sigma(self) -> np.ndarray:
        """Coulomb phases ``arg Gamma(l + 1 + i eta)`` for each ``l``."""
        return np.array([coulomb_sigma(ell, self.eta) for ell in range(self.lmax + 1)])


def extract_f(form: AsymptoticForm, cos_theta):
    """Scattering amplitude ``sum (2l+1) f_l P_l(cos_theta)``."""
    u = np.asarray(cos_theta, dtype=float)
    if np.any(np.abs(u) > 1):
        raise ValueError("|cos_theta| must not exceed 1")
    leg = legendre_table(form.lmax, u)
    weights = (2 * np.arange(form.lmax + 1) + 1) * form.amplitudes
    return np.tensordot(weights, leg, axes=(0, 0))


def cross_section(form: AsymptoticForm) -> float:
    """Total cross section ``4 pi sum (2l+1) |f_l|^2``; infinite for Coulomb."""
    if form.eta != 0.0:
        raise ValueError("Coulomb scattering has no finite total cross section")
    ells = np.arange(form.lmax + 1)
    return float(4.0 * math.pi * np.sum((2 * ells + 1) * np.abs(form.amplitudes) ** 2))


# --------------------------------------------------------------------------
# parameter packing for the optimizer


def free_slope_start(ell: int) -> int:
    return 0 if ell == 0 else 1


def free_curv_start(ell: int) -> int:
    return 0 if ell <= 1 else 1


def _block_sizes(n: int, ell: int, n_breaks: int) -> tuple[int, int, int, int]:
    return (n - 2, n - 1 - free_slope_start(ell), n - 1 - free_curv_start(ell), n_breaks)


def parameter_layout(a: ScatteringAnsatz) -> list[tuple[int, int]]:
    """``(start, stop)`` of each partial wave's block in the packed vector.

    A block holds the interior values, the free slopes, the free (right)
    curvatures, the left curvatures at break nodes and finally ``f_l``.
    """
    n = a.grid.size
    out = []
    pos = 0
    for ell in range(a.lmax + 1):
        size = sum(_block_sizes(n, ell, len(a.breaks))) + 1
        out.append((pos, pos + size))
        pos += size
    return out


def pack_parameters(a: ScatteringAnsatz) -> np.ndarray:
    """Complex parameter vector of the free degrees of freedom."""
    parts = []
    br = list(a.breaks)
    for ell in range(a.lmax + 1):
        parts.append(a.bulk[ell, 1:-1])
        parts.append(a.bulk_slope[ell, free_slope_start(ell):-1])
        parts.append(a.bulk_curv[ell, free_curv_start(ell):-1])
        parts.append(a.bulk_curv_left[ell, br])
        parts.append(a.amplitudes[ell: ell + 1])
    return np.concatenate(parts)


def unpack_parameters(a: ScatteringAnsatz, theta: np.ndarray) -> ScatteringAnsatz:
    """New snapshot with the free degrees of freedom taken from ``theta``."""
    n = a.grid.size
    shape = a.bulk.shape
    bulk = np.zeros(shape, complex)
    slope = np.zeros(shape, complex)
    curv = np.zeros(shape, complex)
    amps = np.zeros(a.lmax + 1, complex)
    br = list(a.breaks)
    curv_left_breaks = []
    for ell, (lo, hi) in enumerate(parameter_layout(a)):
        blk = theta[lo:hi]
        nv, ns, nc, nb = _block_sizes(n, ell, len(br))
        bulk[ell, 1:-1] = blk[:nv]
        slope[ell, free_slope_start(ell):-1] = blk[nv:nv + ns]
        curv[ell, free_curv_start(ell):-1] = blk[nv + ns:nv + ns + nc]
        curv_left_breaks.append(blk[nv + ns + nc:nv + ns + nc + nb])
        amps[ell] = blk[-1]
    curv_left = curv.copy()
    for ell, vals in enumerate(curv_left_breaks):
        curv_left[ell, br] = vals
    return a.replace(bulk=bulk, bulk_slope=slope, bulk_curv=curv, bulk_curv_left=curv_left,
                     amplitudes=amps)


# --------------------------------------------------------------------------
# oracle resampling


def resample_oracle(p, k: float, mass: float, lmax: int = 8, grid: Optional[np.ndarray] = None,
                    n_nodes: int = 256, r_outer: Optional[float] = None,
                    width: Optional[float] = None, results=None) -> ScatteringAnsatz:
    """Ansatz whose bulk and amplitudes interpolate the Numerov oracle state.

    The bulk nodal data are ``r (R_l - i^l j_l) - f_l w_l h_l`` and its first
    two derivatives, with ``R_l`` the oracle partial wave; second
    derivatives come from the radial equation itself, with one-sided
    potential limits at break nodes.
    """
    if grid is None:
        if r_outer is None:
            r_outer = p.outer_radius() + 10.0 / k
        grid = radial_grid(n_nodes, r_outer, p.breakpoints())
    grid = np.asarray(grid, dtype=float)
    breaks = break_nodes(grid, p.breakpoints())
    width = 1.0 / k if width is None else float(width)
    if results is None:
        results = oracle_partial_waves(p, k, mass, lmax=lmax)
    energy = k * k / (2.0 * mass)
    shape = (lmax + 1, grid.size)
    bulk = np.zeros(shape, complex)
    slope = np.zeros(shape, complex)
    curv = np.zeros(shape, complex)
    curv_left = np.zeros(shape, complex)
    amps = np.zeros(lmax + 1, complex)
    r = grid[1:-1]
    x = k * r
    v_right = p.evaluate(r)
    v_left = v_right.copy()
    for i in breaks:
        b = grid[i]
        v_left[i - 1] = p.evaluate(b * (1.0 - 1e-13))
        v_right[i - 1] = p.evaluate(b * (1.0 + 1e-13))
    jl = spherical_jn_table(lmax + 1, x)
    for ell in range(lmax + 1):
        res = results[ell]
        u, du = res.radial(r)
        cent = ell * (ell + 1) / r**2
        ph = 1j**ell * np.exp(1j * res.delta) / k
        # r (R_l - i^l j_l) = ph u - i^l x j_l / k
        rj = x * jl[ell] / k
        drj = np.cos(x) if ell == 0 else x * jl[ell - 1] - ell * jl[ell]
        d2rj = (cent - k * k) * rj
        ov, od, rem = outgoing_radial(ell, k, width, r)
        w0 = window(ell, r, width)[0]
        hk = riccati_hankel(ell, x)[0]
        d2ov = rem + w0 * (cent - k * k) * hk
        amps[ell] = res.f
        bulk[ell, 1:-1] = ph * u - 1j**ell * rj - res.f * ov
        slope[ell, 1:-1] = ph * du - 1j**ell * drj - res.f * od
        base = -(1j**ell) * d2rj - res.f * d2ov
        curv[ell, 1:-1] = ph * (2 * mass * (v_right - energy) + cent) * u + base
        curv_left[ell, 1:-1] = ph * (2 * mass * (v_left - energy) + cent) * u + base
        if ell == 0:
            du0 = res.radial(np.array([0.0]))[1][0]
            slope[0, 0] = ph * du0 - 1.0
            # (w e^{ikr})'' -> 2 / w^2 at the origin; u''(0) = 0
            curv[0, 0] = -res.f * 2.0 / width**2
        elif ell == 1:
            # u = c r^2 + O(r^4): extrapolate c from two small radii
            rs = np.array([1e-3, 2e-3])
            us = res.radial(rs)[0] / rs**2
            c2 = (4.0 * us[0] - us[1]) / 3.0
            curv[1, 0] = ph * 2.0 * c2 - 1j * 2.0 * k / 3.0
        curv_left[ell, 0] = curv[ell, 0]
    return ScatteringAnsatz(k=float(k), mass=float(mass), energy=energy, grid=grid, bulk=bulk,
                            bulk_slope=slope, bulk_curv=curv, bulk_curv_left=curv_left,
                            amplitudes=amps, width=width, breaks=breaks)


# --------------------------------------------------------------------------
# serialisation


def _pairs(z) -> list:
    z = np.asarray(z, dtype=complex)
    return [[float(v.real), float(v.imag)] for v in z.ravel()]


def _from_pairs(pairs, shape) -> np.ndarray:
    arr = np.array([complex(re, im) for re, im in pairs], dtype=complex)
    return arr.reshape(shape)


def ansatz_to_record(a: ScatteringAnsatz) -> dict:
    """Versioned JSON-ready record; floats round-trip exactly via repr."""
    return {
        "format": RECORD_FORMAT,
        "version": RECORD_VERSION,
        "k": a.k,
        "mass": a.mass,
        "width": a.width,
        "eta": a.eta,
        "lmax": a.lmax,
        "grid": [float(x) for x in a.grid],
        "bulk": _pairs(a.bulk),
        "bulk_slope": _pairs(a.bulk_slope),
        "bulk_curv": _pairs(a.bulk_curv),
        "bulk_curv_left": _pairs(a.bulk_curv_left),
        "breaks": list(a.breaks),
        "amplitudes": _pairs(a.amplitudes),
    }


def ansatz_from_record(rec: dict) -> ScatteringAnsatz:
    if rec.get("format") != RECORD_FORMAT:
        raise ValueError("not an ansatz record")
    if rec.get("version") != RECORD_VERSION:
        raise ValueError(f"unsupported ansatz record version {rec.get('version')}")
    grid = np.array(rec["grid"], dtype=float)
    shape = (rec["lmax"] + 1, grid.size)
    k, mass = float(rec["k"]), float(rec["mass"])
    return ScatteringAnsatz(k=k, mass=mass, energy=k * k / (2.0 * mass), grid=grid,
                            bulk=_from_pairs(rec["bulk"], shape),
                            bulk_slope=_from_pairs(rec["bulk_slope"], shape),
                            bulk_curv=_from_pairs(rec["bulk_curv"], shape),
                            bulk_curv_left=_from_pairs(rec["bulk_curv_left"], shape),
                            amplitudes=_from_pairs(rec["amplitudes"], (rec["lmax"] + 1,)),
                            width=float(rec["width"]), breaks=tuple(rec["breaks"]),
                            eta=float(rec["eta"]))
