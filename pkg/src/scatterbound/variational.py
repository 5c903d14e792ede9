"""Minimisation of the L1 Schrodinger violation over the ansatz parameters.

The violation is affine in the packed parameters ``theta`` (bulk nodal data
and outgoing amplitudes; the incident wave is never varied), so the loss
``sum_mesh W sqrt(|F|^2 + delta^2)`` is convex.  Search directions come from
the iteratively reweighted least-squares model of the L1 norm, which turns
the raw finite-difference gradient into a well-scaled step; step lengths
come from Armijo backtracking.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
from scipy import sparse
from scipy.sparse import linalg as splinalg

from .potentials import RadialPotential
from .violation import (QuadratureMesh, ViolationOperator, ViolationReport, build_mesh,
                        violation_report)
from .wavefield import ScatteringAnsatz, pack_parameters, unpack_parameters

ARMIJO_C = 1e-4
MAX_HALVINGS = 40
IRLS_FLOOR = 0.1
MIN_IRLS_FLOOR = 1e-6


@dataclass(frozen=True)
class OptimizerConfig:
    """Optimizer settings.

    Attributes
    ----------
    max_iterations : int
    step_tol : float
        Stop when the accepted step's norm falls below this.
    loss_tol : float
        Stop when an accepted step lowers the loss by less than this
        fraction of the current loss.
    h_fd : float
        Relative central finite-difference step of the gradient (each
        term's step is this fraction of the local violation magnitude).
    delta : float
        Smoothing of ``|F|``; reported norms always use zero.
    seed : int
        Recorded for reproducibility (the optimizer itself is deterministic).
    target_loss : float
        Optional early stop once the smoothed loss drops below this.
    """

    max_iterations: int = 200
    step_tol: float = 1e-10
    loss_tol: float = 1e-9
    h_fd: float = 1e-6
    delta: float = 1e-12
    seed: int = 0
    target_loss: float = 0.0

    def __post_init__(self):
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be non-negative")
        for name in ("step_tol", "loss_tol", "h_fd", "delta"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.target_loss < 0:
            raise ValueError("target_loss must be non-negative")


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    loss: float
    step: float
    accepted: bool


@dataclass(frozen=True)
class OptimizationTrace:
    """History and outcome of one optimisation run."""

    records: tuple
    ansatz: ScatteringAnsatz
    report: ViolationReport
    reason: str
    line_search_failed: bool = False

    @property
    def accepted_losses(self) -> list[float]:
        return [rec.loss for rec in self.records if rec.accepted]

    @property
    def final_loss(self) -> float:
        return self.accepted_losses[-1]

    def csv_rows(self) -> list[str]:
        rows = ["iter,loss,step,accepted"]
        rows += [f"{r.iteration},{r.loss:.17g},{r.step:.17g},{int(r.accepted)}"
                 for r in self.records]
        return rows

    def to_record(self) -> dict:
        return {"reason": self.reason, "line_search_failed": self.line_search_failed,
                "iterations": len(self.records) - 1, "final_loss": self.final_loss,
                "report": self.report.to_record(),
                "trace": [asdict(r) for r in self.records]}


def default_mesh(p: RadialPotential, a: ScatteringAnsatz) -> QuadratureMesh:
    """The mesh whose plain integral is the reported L1 value."""
    return build_mesh(a, p).refined()


class _Objective:
    """Smoothed L1 loss of the affine violation ``F = base + G theta``."""

    def __init__(self, op: ViolationOperator, delta: float):
        self.op = op
        self.delta = delta
        self.w = op.mesh.weights
        # COO view of each block for the localised finite differences
        self.coo = [blk.tocoo() for blk in op.blocks]

    def phi(self, f):
        if self.delta == 0:
            return np.abs(f)
        return np.sqrt(f.real**2 + f.imag**2 + self.delta**2)

    def value(self, field_values) -> float:
        return float(np.sum(self.w * self.phi(field_values)))

    def gradient(self, theta, field_values, h: float) -> np.ndarray:
        """Central differences, one parameter direction at a time.

        Moving ``theta_j`` changes ``F`` only on the mesh rows where column
        ``j`` of its block is non-zero, so every difference quotient is a
        short sum over those rows.  Each term's step is ``h`` relative to
        the local field, ``h phi(F) / |dF/dtheta_j|``: near-zeros of the
        violation are where ``|F|`` bends, and a fixed step would straddle
        them.
        """
        grad = np.zeros(theta.size, complex)
        for ell, (lo, hi) in enumerate(self.op.layout):
            c = self.coo[ell]
            rows, cols = c.row, c.col
            base_f = field_values[rows]
            w = self.w[rows]
            shift = c.data[:, None] * self.op.leg[ell][None, :]
            size = np.abs(shift)
            safe = np.where(size > 0, size, 1.0)
            eps = np.where(size > 0, h * self.phi(base_f) / safe, 0.0)
            for unit in (1.0, 1j):
                dv = eps * unit * shift
                quot = np.where(eps > 0, (self.phi(base_f + dv) - self.phi(base_f - dv))
                                / np.where(eps > 0, 2.0 * eps, 1.0), 0.0)
                col_sum = np.bincount(cols, weights=np.sum(w * quot, axis=1), minlength=hi - lo)
                grad[lo:hi] += unit * col_sum
        return grad

    def metric(self, field_values, floor_factor: float = IRLS_FLOOR) -> sparse.csc_matrix:
        """``G^H Omega G`` with IRLS weights ``Omega = W / max(phi(F), floor)``."""
        mag = self.phi(field_values)
        # points where F vanishes would otherwise get unbounded weight and
        # stay frozen; the floor tracks the mean violation density
        mean = float(np.sum(self.w * mag) / np.sum(self.w))
        floor = max(self.delta, floor_factor * mean, 1e-300)
        omega = self.w / np.maximum(mag, floor)
        leg = self.op.leg
        n = self.op.n_params
        lay = self.op.layout
        rows_all, cols_all, vals_all = [], [], []
        lmax = leg.shape[0] - 1
        for l1 in range(lmax + 1):
            for l2 in range(l1, lmax + 1):
                radial_w = omega @ (leg[l1] * leg[l2])
                blk = (self.op.blocks[l1].conj().T @ sparse.diags(radial_w)
                       @ self.op.blocks[l2]).tocoo()
                rows_all.append(blk.row + lay[l1][0])
                cols_all.append(blk.col + lay[l2][0])
                vals_all.append(blk.data)
                if l2 != l1:
                    rows_all.append(blk.col + lay[l2][0])
                    cols_all.append(blk.row + lay[l1][0])
                    vals_all.append(blk.data.conj())
        mat = sparse.csc_matrix((np.concatenate(vals_all),
                                 (np.concatenate(rows_all), np.concatenate(cols_all))),
                                shape=(n, n))
        return mat


def loss(p: RadialPotential, a: ScatteringAnsatz, delta: float = 0.0,
         mesh: Optional[QuadratureMesh] = None) -> float:
    """Smoothed L1 norm of the violation on the reporting mesh.

    With ``delta = 0`` this equals the reported L1 value.
    """
    if delta < 0:
        raise ValueError("delta must be non-negative")
    op = ViolationOperator(p, a, default_mesh(p, a) if mesh is None else mesh)
    return _Objective(op, delta).value(op.field(pack_parameters(a)))


def finite_difference_gradient(p: RadialPotential, a: ScatteringAnsatz, h: float,
                               delta: float = 1e-12,
                               mesh: Optional[QuadratureMesh] = None) -> np.ndarray:
    """Gradient ``dL/dRe theta + i dL/dIm theta`` by central differences."""
    op = ViolationOperator(p, a, default_mesh(p, a) if mesh is None else mesh)
    obj = _Objective(op, delta)
    theta = pack_parameters(a)
    return obj.gradient(theta, op.field(theta), h)


def _solve_direction(metric, grad) -> np.ndarray:
    diag = metric.diagonal().real
    # relative regularisation: diagonal entries span many decades
    tiny = 1e-300 if not diag.size else max(float(np.max(diag)) * 1e-30, 1e-300)
    reg = sparse.diags(1e-10 * diag + tiny)
    try:
        d = splinalg.spsolve((metric + reg).tocsc(), -grad)
    except RuntimeError:
        d = -grad / np.where(diag > 0, diag, 1.0)
    if not np.all(np.isfinite(d)):
        d = -grad / np.where(diag > 0, diag, 1.0)
    return np.asarray(d)


def _line_search(obj, op, fvals, current, grad, direction, it, records):
    """Armijo backtracking; returns ``(accepted, step, loss, field)``."""
    slope = float(np.real(np.vdot(grad, direction)))
    if not slope < 0:
        return False, 0.0, current, fvals
    dfield = op.direction_field(direction)
    norm = float(np.linalg.norm(direction))
    step = 1.0
    for _ in range(MAX_HALVINGS + 1):
        trial_f = fvals + step * dfield
        trial = obj.value(trial_f)
        if trial < current and trial <= current + ARMIJO_C * step * slope:
            return True, step, trial, trial_f
        records.append(IterationRecord(it, trial, step * norm, False))
        step *= 0.5
    return False, 0.0, current, fvals


def optimize(p: RadialPotential, a0: ScatteringAnsatz,
             cfg: OptimizerConfig = OptimizerConfig(),
             mesh: Optional[QuadratureMesh] = None,
             callback=None) -> OptimizationTrace:
    """Minimise the smoothed L1 violation starting from ``a0``.

    Parameters
    ----------
    p : RadialPotential
    a0 : ScatteringAnsatz
        Starting point; its incident wave and discretisation are kept.
    cfg : OptimizerConfig
    mesh : QuadratureMesh, optional
        Defaults to the coarse mesh of :func:`build_mesh`; the final report
        integrates on its refinement, so the reported L1 and its error bar
        are not fitted to the quadrature nodes the optimizer saw.
    callback : callable, optional
        ``callback(iteration, ansatz, loss) -> bool``; returning True stops.

    Raises
    ------
    ValueError
        If the loss at ``a0`` is not finite.
    """
    op = ViolationOperator(p, a0, build_mesh(a0, p) if mesh is None else mesh)
    obj = _Objective(op, cfg.delta)
    theta = pack_parameters(a0)
    fvals = op.field(theta)
    current = obj.value(fvals)
    if not math.isfinite(current):
        raise ValueError("loss is not finite at the starting ansatz")
    records = [IterationRecord(0, current, 0.0, True)]
    reason = "max-iterations"
    failed = False
    floor_factor = IRLS_FLOOR
    for it in range(1, cfg.max_iterations + 1):
        if current <= cfg.target_loss:
            reason = "target-loss"
            break
        grad = obj.gradient(theta, fvals, cfg.h_fd)
        if not np.any(grad):
            # exact eigenstate: the loss sits on its smoothing floor
            reason = "stationary"
            break
        # IRLS directions with a shrinking floor, then plain steepest descent
        accepted = False
        while not accepted:
            if floor_factor is None:
                direction = -grad
            else:
                direction = _solve_direction(obj.metric(fvals, floor_factor), grad)
            accepted, step, trial, trial_f = _line_search(obj, op, fvals, current, grad,
                                                          direction, it, records)
            if accepted:
                break
            if floor_factor is None:
                break
            floor_factor = floor_factor * 0.1 if floor_factor > MIN_IRLS_FLOOR else None
        if not accepted:
            failed = True
            reason = "line-search-failure"
            break
        step_norm = step * float(np.linalg.norm(direction))
        theta = theta + step * direction
        fvals = trial_f
        previous, current = current, trial
        records.append(IterationRecord(it, current, step_norm, True))
        if callback is not None and callback(it, unpack_parameters(a0, theta), current):
            reason = "callback"
            break
        if step_norm < cfg.step_tol:
            reason = "step-tolerance"
            break
        if previous - current <= cfg.loss_tol * previous:
            reason = "loss-tolerance"
            break
    final = unpack_parameters(a0, theta)
    return OptimizationTrace(records=tuple(records), ansatz=final,
                             report=violation_report(p, final), reason=reason,
                             line_search_failed=failed)
