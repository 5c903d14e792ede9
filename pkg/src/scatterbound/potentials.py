"""Catalog of central potentials and the metadata the bound calculators need.

A potential is an immutable value object.  ``evaluate`` returns ``V(r)``
and ``bound_parameters`` returns the pair ``(V0, R0)`` with ``|V| <= V0``
everywhere and ``|V(r)| <= tol_tail`` beyond ``R0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

KINDS = (
    "square-well",
    "gaussian",
    "exponential",
    "ramp-plateau",
    "inverse-square-cutoff",
    "coulomb-plus-short-range",
    "zero",
)

DEFAULT_TAIL_TOL = 1e-12


@dataclass(frozen=True)
class RampPlateauPotential:
    """Line potential rising from 0 to a plateau and falling back.

    The profile is a linear ramp on ``(-a, 0)``, the plateau on ``(0, a)``
    and a linear descent on ``(a, 2a)``; it vanishes outside ``[-a, 2a]``.

    Parameters
    ----------
    a : float
        Ramp half-width.
    eps : float
        Gap between the scattering energy and the plateau.
    height : float, optional
        Plateau value, ``1 - eps`` by default (the unit-energy case).
    """

    a: float
    eps: float
    height: Optional[float] = None

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("ramp half-width must be positive")

    @property
    def plateau(self) -> float:
        return 1.0 - self.eps if self.height is None else float(self.height)

    @property
    def support(self) -> tuple[float, float]:
        return (-self.a, 2.0 * self.a)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return (-self.a, 0.0, self.a, 2.0 * self.a)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        a, top = self.a, self.plateau
        out = np.zeros_like(x)
        up = (x > -a) & (x < 0.0)
        flat = (x >= 0.0) & (x <= a)
        down = (x > a) & (x < 2.0 * a)
        out[up] = top * (x[up] + a) / a
        out[flat] = top
        out[down] = top * (2.0 * a - x[down]) / a
        return out


@dataclass(frozen=True)
class RadialPotential:
    """Central potential descriptor.

    Parameters
    ----------
    kind : str
        One of ``KINDS``.
    depth : float
        Signed value inside the well (square well, Coulomb core), the
        strength prefactor (gaussian, exponential), or the plateau height
        override for the ramp-plateau kind.
    radius : float
        Well radius, gaussian or exponential range, ramp half-width, or the
        outer edge of the inverse-square region.
    alpha : float
        Coulomb strength, ``V = alpha / r`` outside the core.
    alpha2 : float
        Inverse-square strength, ``V = alpha2 / r^2``.
    cutoff : float
        Core radius below which the inverse-square term is held constant.
    eps : float
        Plateau gap of the ramp-plateau kind.
    sup_bound : float, optional
        Declared ``V0``; checked on a dense grid at construction.
    """

    kind: str
    depth: float = 0.0
    radius: float = 0.0
    alpha: float = 0.0
    alpha2: float = 0.0
    cutoff: float = 1e-3
    eps: float = 0.0
    sup_bound: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.kind in ("gaussian", "exponential", "ramp-plateau") and self.radius <= 0:
            raise ValueError(f"{self.kind} needs a positive range")
        if self.kind == "square-well" and self.radius < 0:
            raise ValueError("square-well radius must be non-negative")
        if self.kind == "inverse-square-cutoff" and (self.cutoff < 0 or self.radius <= 0):
            raise ValueError("inverse-square-cutoff needs cutoff >= 0 and radius > 0")
        if self.sup_bound is not None:
            r = np.linspace(0.0, self.outer_radius() * 1.5 + 1.0, 4001)[1:]
            if np.any(np.abs(self.evaluate(r)) > self.sup_bound):
                raise ValueError("declared sup-bound is violated")

    @property
    def tail(self) -> str:
        if self.kind in ("gaussian", "exponential"):
            return "exponential"
        if self.kind == "coulomb-plus-short-range" and self.alpha != 0.0:
            return "coulomb"
        return "compact"

    @property
    def is_coulomb(self) -> bool:
        return self.tail == "coulomb"

    def evaluate(self, r):
        """Potential at radius ``r`` (scalar or array)."""
        return evaluate(self, r)

    __call__ = evaluate

    def outer_radius(self, tol_tail: float = DEFAULT_TAIL_TOL) -> float:
        """Radius beyond which the short-range part is treated as zero."""
        if self.kind == "zero":
            return 0.0
        if self.kind == "coulomb-plus-short-range":
            return self.radius
        return bound_parameters(self, tol_tail)[1]

    def breakpoints(self) -> tuple[float, ...]:
        """Radii where the potential or its derivative jumps."""
        if self.kind in ("square-well", "coulomb-plus-short-range"):
            return (self.radius,) if self.radius > 0 else ()
        if self.kind == "ramp-plateau":
            a = self.radius
            return (a, 2.0 * a, 3.0 * a)
        if self.kind == "inverse-square-cutoff":
            return tuple(x for x in (self.cutoff, self.radius) if x > 0)
        return ()

    def to_record(self) -> dict:
        rec = {"kind": self.kind}
        defaults = RadialPotential(kind="zero")
        for f in fields(self):
            if f.name == "kind":
                continue
            val = getattr(self, f.name)
            if val != getattr(defaults, f.name):
                rec[f.name] = val
        return rec

    @classmethod
    def from_record(cls, record: dict) -> "RadialPotential":
        known = {f.name for f in fields(cls)}
        extra = set(record) - known
        if extra:
            raise ValueError(f"unknown potential keys: {sorted(extra)}")
        return cls(**record)


def square_well(depth: float, radius: float) -> RadialPotential:
    return RadialPotential("square-well", depth=depth, radius=radius)


def ramp_plateau_radial(a: float, eps: float, height: Optional[float] = None) -> RadialPotential:
    """Radial version of the ramp-plateau profile on ``x = r - a``."""
    return RadialPotential("ramp-plateau", radius=a, eps=eps,
                           depth=0.0 if height is None else height)


def _ramp_line(p: RadialPotential) -> RampPlateauPotential:
    return RampPlateauPotential(p.radius, p.eps, p.depth if p.depth != 0.0 else None)


def evaluate(p: RadialPotential, r):
    """Evaluate ``V(r)``.

    Parameters
    ----------
    p : RadialPotential
    r : float or array_like
        Radius, ``r >= 0``.

    Returns
    -------
    float or ndarray
        Real potential values, same shape as ``r``.

    Raises
    ------
    ValueError
        For ``r = 0`` where the kind is singular at the origin.
    """
    scalar = np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r < 0):
        raise ValueError("radius must be non-negative")
    kind = p.kind
    if kind == "zero":
        out = np.zeros_like(r)
    elif kind == "square-well":
        out = np.where(r < p.radius, p.depth, 0.0)
    elif kind == "gaussian":
        out = p.depth * np.exp(-0.5 * (r / p.radius) ** 2)
    elif kind == "exponential":
        out = p.depth * np.exp(-r / p.radius)
    elif kind == "ramp-plateau":
        # the shift r - a can round below 2a at r = 3a; clip on r itself
        out = np.where(r < 3.0 * p.radius, _ramp_line(p)(r - p.radius), 0.0)
    elif kind == "inverse-square-cutoff":
        if p.cutoff == 0.0 and np.any(r == 0.0):
            raise ValueError("inverse-square potential without a core is singular at r = 0")
        with np.errstate(divide="ignore"):
            core = p.alpha2 / np.maximum(r, p.cutoff) ** 2
        out = np.where(r < p.radius, core, 0.0)
    elif kind == "coulomb-plus-short-range":
        if p.alpha != 0.0 and np.any(r == 0.0):
            raise ValueError("Coulomb potential is singular at r = 0")
        with np.errstate(divide="ignore"):
            coul = p.alpha / np.where(r > 0, r, 1.0)
        out = np.where(r < p.radius, p.depth, 0.0) + np.where(r > 0, coul, 0.0)
    else:  # pragma: no cover - guarded in __post_init__
        raise ValueError(kind)
    return float(out[0]) if scalar else out


def bound_parameters(p: RadialPotential, tol_tail: float = DEFAULT_TAIL_TOL) -> tuple[float, float]:
    """Sup-bound and effective range ``(V0, R0)``.

    For exponential tails ``R0`` is where the envelope drops to
    ``tol_tail``; compact kinds return their exact support.

    Raises
    ------
    ValueError
        For a Coulomb tail, which has no finite range.
    """
    if p.is_coulomb:
        raise ValueError("bound parameters unavailable for a Coulomb tail")
    kind = p.kind
    strength = abs(p.depth)
    if kind == "zero" or (kind != "inverse-square-cutoff" and kind != "ramp-plateau" and strength == 0.0):
        return 0.0, 0.0
    if kind in ("square-well", "coulomb-plus-short-range"):
        return strength, float(p.radius)
    if kind == "gaussian":
        if strength <= tol_tail:
            return strength, 0.0
        return strength, p.radius * math.sqrt(2.0 * math.log(strength / tol_tail))
    if kind == "exponential":
        if strength <= tol_tail:
            return strength, 0.0
        return strength, p.radius * math.log(strength / tol_tail)
    if kind == "ramp-plateau":
        return abs(_ramp_line(p).plateau), 3.0 * p.radius
    if kind == "inverse-square-cutoff":
        if p.cutoff == 0.0:
            raise ValueError("inverse-square potential without a core is unbounded")
        return abs(p.alpha2) / p.cutoff**2, float(p.radius)
    raise ValueError(kind)  # pragma: no cover
