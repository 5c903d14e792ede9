"""Schrodinger violation ``(E - H) psi`` of an ansatz, its norms and the flux.

The violation is linear in the ansatz parameters, so it is represented by a
:class:`ViolationOperator`: a fixed incident-wave part ``-V e^{ikru}`` plus,
for every partial wave, a sparse radial matrix acting on that wave's
parameter block.  Reported norms and the optimizer's loss are evaluated
through the same operator.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np
from scipy import sparse

from ._special import legendre_table
from .potentials import RadialPotential
from .wavefield import (ScatteringAnsatz, assemble, free_curv_start, free_slope_start,
                        hermite_weights,
                        outgoing_radial, pack_parameters, parameter_layout)

DEFAULT_NODES_PER_PANEL = 4
DEFAULT_ANGULAR_NODES = 32


# --------------------------------------------------------------------------
# quadrature mesh


@dataclass(frozen=True, eq=False)
class QuadratureMesh:
    """Tensor Gauss-Legendre mesh in ``(r, cos theta)``.

    Radial panels follow the spline cells (the violation is smooth inside
    each cell and may jump across nodes); each panel carries ``q`` nodes.
    """

    edges: np.ndarray
    q: int
    n_ang: int

    def __post_init__(self):
        xg, wg = np.polynomial.legendre.leggauss(self.q)
        lo, hi = self.edges[:-1], self.edges[1:]
        half = 0.5 * (hi - lo)
        r = (0.5 * (hi + lo))[:, None] + half[:, None] * xg[None, :]
        wr = half[:, None] * wg[None, :]
        u, wu = np.polynomial.legendre.leggauss(self.n_ang)
        object.__setattr__(self, "r", r.ravel())
        object.__setattr__(self, "wr", wr.ravel())
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "wu", wu)
        object.__setattr__(self, "weights",
                           2.0 * math.pi * (self.r**2 * self.wr)[:, None] * wu[None, :])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.r.size, self.u.size)

    def refined(self) -> "QuadratureMesh":
        """Panels split in two and twice the angular nodes."""
        mids = 0.5 * (self.edges[1:] + self.edges[:-1])
        edges = np.empty(2 * self.edges.size - 1)
        edges[0::2] = self.edges
        edges[1::2] = mids
        return QuadratureMesh(edges, self.q, 2 * self.n_ang)


def build_mesh(a: ScatteringAnsatz, p: Optional[RadialPotential] = None,
               q: int = DEFAULT_NODES_PER_PANEL, n_ang: int = DEFAULT_ANGULAR_NODES) -> QuadratureMesh:
    """Mesh on ``[0, R_grid]`` with panels at grid nodes and breakpoints."""
    edges = set(float(x) for x in a.grid)
    if p is not None:
        edges.update(b for b in p.breakpoints() if 0.0 < b < a.r_grid)
    return QuadratureMesh(np.array(sorted(edges)), q, n_ang)


def ball_mesh(radius: float, n_panels: int = 64, q: int = DEFAULT_NODES_PER_PANEL,
              n_ang: int = DEFAULT_ANGULAR_NODES) -> QuadratureMesh:
    """Uniform-panel mesh on ``[0, radius]``."""
    return QuadratureMesh(np.linspace(0.0, radius, n_panels + 1), q, n_ang)


# --------------------------------------------------------------------------
# fields and norms


@dataclass(frozen=True, eq=False)
class MultiComponentField:
    """Complex components on one mesh, shape ``(n_comp, n_r, n_u)``.

    ``evaluator`` (optional) recomputes the components on another mesh and
    enables the mesh-halving error estimate of the norms.
    """

    values: np.ndarray
    mesh: QuadratureMesh
    evaluator: Optional[Callable[[QuadratureMesh], np.ndarray]] = None

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.ndim == 2:
            vals = vals[None]
        if vals.shape[1:] != self.mesh.shape:
            raise ValueError("all components must live on the field's mesh")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, func, mesh: QuadratureMesh, n_comp: int = 1) -> "MultiComponentField":
        """Sample ``func(r, u)`` (returning ``(n_comp, n_r, n_u)`` or ``(n_r, n_u)``)."""
        def evaluator(m):
            out = np.asarray(func(m.r[:, None], m.u[None, :]), dtype=complex)
            out = np.broadcast_to(out, out.shape[:-2] + m.shape) if out.ndim >= 2 else \
                np.broadcast_to(out, m.shape)
            return out.reshape((-1,) + m.shape)
        return cls(evaluator(mesh), mesh, evaluator)

    @property
    def n_components(self) -> int:
        return self.values.shape[0]

    def sup(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0


@dataclass(frozen=True)
class NormEstimate:
    """Quadrature value with the mesh-halving difference as error bar."""

    value: float
    error: float

    def __float__(self):
        return self.value

    @property
    def upper(self) -> float:
        return self.value + self.error


def _integrate(values: np.ndarray, mesh: QuadratureMesh) -> float:
    return float(np.sum(values * mesh.weights))


def _norm(field: MultiComponentField, density) -> NormEstimate:
    coarse = _integrate(np.sum(density(field.values), axis=0), field.mesh)
    if field.evaluator is None:
        return NormEstimate(coarse, float("nan"))
    fine_mesh = field.mesh.refined()
    fine = _integrate(np.sum(density(field.evaluator(fine_mesh)), axis=0), fine_mesh)
    return NormEstimate(fine, abs(fine - coarse))


def l1_norm(field: MultiComponentField) -> NormEstimate:
    """``2 pi int int sum_i |f_i| r^2 dr du`` with a Richardson error bar."""
    return _norm(field, np.abs)


def l2sq(field: MultiComponentField) -> NormEstimate:
    """Squared L2 norm ``int sum_i |f_i|^2`` (no square root)."""
    return _norm(field, lambda v: np.abs(v) ** 2)


def holder_pair(f: MultiComponentField, g: MultiComponentField) -> tuple[float, float]:
    """``(int sum |f_i|, |int sum f_i g_i|)`` on the mesh of ``f``.

    Raises
    ------
    ValueError
        If ``max |g_i| > 1 + 1e-12`` or the meshes differ.
    """
    if f.mesh is not g.mesh and not (np.array_equal(f.mesh.r, g.mesh.r)
                                     and np.array_equal(f.mesh.u, g.mesh.u)):
        raise ValueError("fields must share a mesh")
    if f.n_components != g.n_components:
        raise ValueError("component counts differ")
    if g.sup() > 1.0 + 1e-12:
        raise ValueError("holder partner must satisfy |g| <= 1")
    lhs = _integrate(np.sum(np.abs(f.values), axis=0), f.mesh)
    rhs = abs(np.sum(np.sum(f.values * g.values, axis=0) * f.mesh.weights))
    return lhs, float(rhs)


# --------------------------------------------------------------------------
# the violation operator


class ViolationOperator:
    """Linear map from packed ansatz parameters to the violation on a mesh.

    Parameters
    ----------
    p : RadialPotential
    template : ScatteringAnsatz
        Supplies ``k``, ``M``, grid, ``lmax`` and window; its parameter
        values are irrelevant.
    mesh : QuadratureMesh, optional
        Defaults to :func:`build_mesh`.
    """

    def __init__(self, p: RadialPotential, template: ScatteringAnsatz,
                 mesh: Optional[QuadratureMesh] = None):
        if template.is_coulomb or p.is_coulomb:
            raise ValueError("violation of Coulomb ansatze is not supported")
        if template.r_grid < p.outer_radius():
            raise ValueError("ansatz grid does not cover the potential support")
        if template.r_grid / template.width < 6.0:
            raise ValueError("window too wide for the grid: outgoing remainder not negligible")
        self.potential = p
        self.template = template
        self.mesh = build_mesh(template, p) if mesh is None else mesh
        if self.mesh.edges[-1] > template.r_grid * (1 + 1e-12):
            raise ValueError("mesh extends beyond the ansatz grid")
        r, u = self.mesh.r, self.mesh.u
        k, mass = template.k, template.mass
        self.v = p.evaluate(r)
        self.base = -self.v[:, None] * np.exp(1j * k * r[:, None] * u[None, :])
        lmax = template.lmax
        self.leg = legendre_table(lmax, u) * (2 * np.arange(lmax + 1) + 1)[:, None]
        self.layout = parameter_layout(template)
        self.blocks = [self._radial_block(ell) for ell in range(lmax + 1)]
        self.n_params = self.layout[-1][1]

    def _radial_block(self, ell: int) -> sparse.csr_matrix:
        a = self.template
        grid, r = a.grid, self.mesh.r
        n = grid.size
        k, mass = a.k, a.mass
        cell, w0, _, w2 = hermite_weights(grid, r)
        pot = k * k / (2 * mass) - ell * (ell + 1) / (2 * mass * r * r) - self.v
        coef = (w2 / (2 * mass) + pot[None, :] * w0) / r[None, :]
        s0, c0 = free_slope_start(ell), free_curv_start(ell)
        nv, ns, nc = n - 2, n - 1 - s0, n - 1 - c0
        # column of each node's dof inside the wave's block (-1: clamped)
        col_value = np.full(n, -1)
        col_value[1:-1] = np.arange(nv)
        col_slope = np.full(n, -1)
        col_slope[s0:-1] = nv + np.arange(ns)
        col_curv = np.full(n, -1)
        col_curv[c0:-1] = nv + ns + np.arange(nc)
        col_curv_left = col_curv.copy()
        for j, i in enumerate(a.breaks):
            col_curv_left[i] = nv + ns + nc + j
        rows, cols, vals = [], [], []
        lookup = [(col_value, cell), (col_slope, cell), (col_curv, cell),
                  (col_value, cell + 1), (col_slope, cell + 1), (col_curv_left, cell + 1)]
        for j, (table, nd) in enumerate(lookup):
            col = table[nd]
            ok = col >= 0
            rows.append(np.nonzero(ok)[0])
            cols.append(col[ok])
            vals.append(coef[j][ok])
        ov, _, rem = outgoing_radial(ell, k, a.width, r)
        amp = (rem / (2 * mass) - self.v * ov) / r
        nz = np.nonzero(amp != 0)[0]
        size = self.layout[ell][1] - self.layout[ell][0]
        rows.append(nz)
        cols.append(np.full(nz.size, size - 1))
        vals.append(amp[nz])
        mat = sparse.csr_matrix((np.concatenate(vals).astype(complex),
                                 (np.concatenate(rows), np.concatenate(cols))),
                                shape=(r.size, size))
        mat.sum_duplicates()
        return mat

    def radial_residuals(self, theta: np.ndarray) -> np.ndarray:
        """Per-wave radial residual ``g_l(r)``, shape ``(lmax + 1, n_r)``."""
        return np.array([blk @ theta[lo:hi] for blk, (lo, hi) in zip(self.blocks, self.layout)])

    def field(self, theta: np.ndarray) -> np.ndarray:
        """Violation on the mesh, shape ``(n_r, n_u)``."""
        return self.base + self.radial_residuals(theta).T @ self.leg

    def direction_field(self, d: np.ndarray) -> np.ndarray:
        """Linear part only (no incident term), for line searches."""
        return self.radial_residuals(d).T @ self.leg

    def __call__(self, a: ScatteringAnsatz) -> np.ndarray:
        if not a.compatible(self.template):
            raise ValueError("ansatz does not match the operator's template")
        return self.field(pack_parameters(a))


# --------------------------------------------------------------------------
# public operations


def violation_field(p: RadialPotential, a: ScatteringAnsatz,
                    mesh: Optional[QuadratureMesh] = None) -> MultiComponentField:
    """``(E + laplacian / 2M - V) psi`` on the quadrature mesh (one component).

    Raises
    ------
    ValueError
        If the grid does not cover the potential support, for Coulomb
        ansatze, or for a mesh reaching beyond the grid.
    """
    op = ViolationOperator(p, a, mesh)
    theta = pack_parameters(a)

    def evaluator(m):
        return ViolationOperator(p, a, m).field(theta)[None]

    return MultiComponentField(op.field(theta)[None], op.mesh, evaluator)


def probability_flux(a: ScatteringAnsatz, r, cos_theta, incident: bool = True):
    """Radial current ``Im(psi* d_r psi) / M``."""
    psi, dpsi = assemble(a, r, cos_theta, incident=incident, derivative=True)
    return np.imag(np.conj(psi) * dpsi) / a.mass


def _angular_nodes(a: ScatteringAnsatz, radius: float) -> int:
    return max(64, int(2 * a.k * radius) + 32)


def flux_through_sphere(a: ScatteringAnsatz, radius: float, incident: bool = True,
                        n_ang: Optional[int] = None) -> float:
    """Net outward probability flux ``2 pi R^2 int j_r(R, u) du``."""
    if radius > a.r_grid * (1 + 1e-12):
        raise ValueError("sphere lies outside the ansatz grid")
    n_ang = n_ang or _angular_nodes(a, radius)
    u, wu = np.polynomial.legendre.leggauss(n_ang)
    j = probability_flux(a, np.full_like(u, radius), u, incident=incident)
    return float(2.0 * math.pi * radius**2 * np.sum(wu * j))


def _flux_parts(a: ScatteringAnsatz, radius: float, n_ang: int):
    u, wu = np.polynomial.legendre.leggauss(n_ang)
    j = probability_flux(a, np.full_like(u, radius), u)
    scale = 2.0 * math.pi * radius**2
    out = scale * float(np.sum(wu * np.maximum(j, 0.0)))
    inn = scale * float(np.sum(wu * np.maximum(-j, 0.0)))
    return inn, out


@dataclass(frozen=True)
class ViolationReport:
    """Norms of the violation and the flux balance at ``R_grid``."""

    l1: float
    l1_error: float
    l2sq: float
    l2sq_error: float
    flux_in: float
    flux_in_error: float
    flux_out: float
    flux_out_error: float
    flux_net: float
    flux_net_error: float
    radius: float

    @property
    def l1_upper(self) -> float:
        """L1 plus its error bar, the value fed into the bounds."""
        return self.l1 + self.l1_error

    def to_record(self) -> dict:
        return asdict(self)


def violation_report(p: RadialPotential, a: ScatteringAnsatz,
                     mesh: Optional[QuadratureMesh] = None) -> ViolationReport:
    field = violation_field(p, a, mesh)
    l1 = l1_norm(field)
    l2 = l2sq(field)
    radius = a.r_grid
    n_ang = _angular_nodes(a, radius)
    fin_c, fout_c = _flux_parts(a, radius, n_ang)
    fin, fout = _flux_parts(a, radius, 2 * n_ang)
    return ViolationReport(
        l1=l1.value, l1_error=l1.error, l2sq=l2.value, l2sq_error=l2.error,
        flux_in=fin, flux_in_error=abs(fin - fin_c),
        flux_out=fout, flux_out_error=abs(fout - fout_c),
        flux_net=fout - fin, flux_net_error=abs((fout - fin) - (fout_c - fin_c)),
        radius=radius)
