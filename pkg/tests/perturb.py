"""Random perturbations of an oracle ansatz with exactly known amplitude shifts."""

import numpy as np

from scatterbound.oracles import radial_solutions
from scatterbound.wavefield import outgoing_radial, window


def _smooth_step(r, centre, width):
    """C^2 step from 0 to 1 over ``[centre - width, centre + width]`` and derivatives."""
    t = np.clip((r - centre + width) / (2.0 * width), 0.0, 1.0)
    s = t**3 * (10.0 - 15.0 * t + 6.0 * t * t)
    ds = 30.0 * t * t * (1.0 - t) ** 2 / (2.0 * width)
    d2s = 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t) / (2.0 * width) ** 2
    return s, ds, d2s


def perturb(p, base, rng, delta_scale=0.05, bump_scale=0.0):
    """Shift ``f~_0`` by a random ``delta`` through an outgoing-wave switch-on.

    The added s-wave bulk is ``delta (s u_out - w h_0)`` with ``s`` a smooth
    step at a random radius, so the perturbation is an exact eigenstate
    away from the step.  Optional compact bumps leave ``f~`` unchanged.

    Returns
    -------
    (ScatteringAnsatz, complex)
        New ansatz and the amplitude shift ``delta``.
    """
    grid = base.grid
    k, mass = base.k, base.mass
    delta = delta_scale * (rng.normal() + 1j * rng.normal())
    centre = rng.uniform(0.2, 3.0)
    width = rng.uniform(0.2, 0.9) * centre
    s, ds, d2s = _smooth_step(grid, centre, width)
    # dense inward solution, then exact derivatives from the ODE
    r_dense, _, _, u_out, du_out = radial_solutions(p, 0, k, mass, r_max=grid[-1])
    u = np.interp(grid, r_dense, u_out.real) + 1j * np.interp(grid, r_dense, u_out.imag)
    du = np.interp(grid, r_dense, du_out.real) + 1j * np.interp(grid, r_dense, du_out.imag)
    energy = k * k / (2 * mass)
    v_right = p.evaluate(grid)
    v_left = v_right.copy()
    for i in base.breaks:
        v_left[i] = p.evaluate(grid[i] * (1 - 1e-13))
        v_right[i] = p.evaluate(grid[i] * (1 + 1e-13))
    ov, od, rem = outgoing_radial(0, k, base.width, grid)
    w0 = window(0, grid, base.width)[0]
    d2ov = rem - w0 * k * k * np.exp(1j * k * grid)
    bulk = base.bulk.copy()
    slope = base.bulk_slope.copy()
    curv = base.bulk_curv.copy()
    curv_left = base.bulk_curv_left.copy()
    bulk[0] += delta * (s * u - ov)
    slope[0] += delta * (ds * u + s * du - od)
    d2u_r = 2 * mass * (v_right - energy) * u
    d2u_l = 2 * mass * (v_left - energy) * u
    curv[0] += delta * (d2s * u + 2 * ds * du + s * d2u_r - d2ov)
    curv_left[0] += delta * (d2s * u + 2 * ds * du + s * d2u_l - d2ov)
    for arr in (bulk, slope, curv, curv_left):
        arr[0, -1] = 0.0
    bulk[0, 0] = 0.0
    if bump_scale > 0:
        for ell in range(min(3, base.lmax + 1)):
            c = rng.uniform(0.3, 3.0)
            wd = rng.uniform(0.2, 0.6)
            amp = bump_scale * (rng.normal() + 1j * rng.normal())
            x = (grid - c) / wd
            g = np.exp(-x * x)
            bulk[ell, 1:-1] += (amp * g)[1:-1]
            slope[ell, 1:-1] += (amp * g * (-2 * x / wd))[1:-1]
            bump_c = amp * g * (4 * x * x - 2) / wd**2
            curv[ell, 1:-1] += bump_c[1:-1]
            curv_left[ell, 1:-1] += bump_c[1:-1]
    amps = base.amplitudes.copy()
    amps[0] += delta
    return base.replace(bulk=bulk, bulk_slope=slope, bulk_curv=curv,
                        bulk_curv_left=curv_left, amplitudes=amps), delta
