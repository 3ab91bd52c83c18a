"""Degeneracy planes, their forward images, and the two inverse branches.

The one-step Jacobian determinant is 2x, so the map folds space along
{x = 0}.  Every forward image of that plane is again an axis-aligned
plane, cycling through the z, y, x axes while the offset walks the
forward orbit of the critical value 0 -- so planes are stored as
(axis, offset) pairs, never as point clouds.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

from .core import Params, Point3, h1d, h1d_n

TIE_TOL = 1e-12     # boundary tolerance for zone / side classification
K_MAX_DEFAULT = 8


@dataclass(frozen=True)
class AxisPlane:
    axis: str       # "x" | "y" | "z"
    offset: float
    index: int      # k >= -1

    def side_of(self, p: Point3) -> float:
        """Signed distance of p from the plane (coordinate minus offset)."""
        return getattr(p, self.axis) - self.offset


@dataclass(frozen=True)
class Preimage:
    point: Point3
    region: str     # "R1" | "R2" | "on_PC_minus1"


@dataclass(frozen=True)
class PlaneSideStats:
    plane: AxisPlane
    frac_neg: float
    frac_on: float
    frac_pos: float
    d_min: float
    d_max: float


_IMAGE_AXIS = {"x": "z", "z": "y", "y": "x"}


def critical_plane(k: int, params: Params) -> AxisPlane:
    """The k-th forward image of the degeneracy plane {x = 0}.

    k = -1 is the plane itself; images cycle z -> y -> x in axis while the
    offset advances one scalar-map step every three images.
    """
    if k < -1:
        raise ValueError("plane index must be >= -1")
    if k == -1:
        return AxisPlane(axis="x", offset=0.0, index=-1)
    m, r = divmod(k, 3)
    offset = h1d_n(0.0, params, m + 1)
    axis = ("z", "y", "x")[r]
    return AxisPlane(axis=axis, offset=offset, index=k)


def plane_image(plane: AxisPlane, params: Params) -> AxisPlane:
    """Forward image of an axis plane under one map step.

    {x=c} maps onto {z=c^2+b}; {z=c} onto {y=c}; {y=c} onto {x=c}.
    """
    if plane.axis == "x":
        return AxisPlane(axis="z", offset=h1d(plane.offset, params),
                         index=plane.index + 1)
    return AxisPlane(axis=_IMAGE_AXIS[plane.axis], offset=plane.offset,
                     index=plane.index + 1)


def zone_of(p: Point3, params: Params, tie_tol: float = TIE_TOL) -> str:
    """"Z2" if z - b > 0 (two preimages), "Z0" if < 0, "on_PC0" at the fold."""
    d = p.z - params.b
    if abs(d) <= tie_tol:
        return "on_PC0"
    return "Z2" if d > 0.0 else "Z0"


def region_of(p: Point3, tie_tol: float = TIE_TOL) -> str:
    if abs(p.x) <= tie_tol:
        return "on_PC_minus1"
    return "R1" if p.x > 0.0 else "R2"


def preimages(p: Point3, params: Params, tie_tol: float = TIE_TOL) -> list:
    """The rank-one preimages of p: two in Z2 (one per half-space), one
    merged preimage on the fold plane, none in Z0."""
    d = p.z - params.b
    if abs(d) <= tie_tol:
        q = Point3(0.0, p.x, p.y)
        return [Preimage(point=q, region=region_of(q, tie_tol))]
    if d < 0.0:
        return []
    r = sqrt(d)
    q1 = Point3(r, p.x, p.y)
    q2 = Point3(-r, p.x, p.y)
    return [Preimage(point=q1, region="R1"), Preimage(point=q2, region="R2")]


def attractor_bounds_report(orbit_points, params: Params,
                            k_max: int = K_MAX_DEFAULT,
                            tie_tol: float = TIE_TOL) -> list:
    """Per-plane side statistics of an orbit against the planes up to k_max:
    the empirical evidence for how the planes sandwich an attractor."""
    pts = list(orbit_points)
    if not pts:
        raise ValueError("need a non-empty orbit")
    out = []
    for k in range(-1, k_max + 1):
        plane = critical_plane(k, params)
        ds = [plane.side_of(p) for p in pts]
        neg = sum(1 for d in ds if d < -tie_tol)
        on = sum(1 for d in ds if abs(d) <= tie_tol)
        out.append(PlaneSideStats(plane=plane,
                                  frac_neg=neg / len(ds),
                                  frac_on=on / len(ds),
                                  frac_pos=(len(ds) - neg - on) / len(ds),
                                  d_min=min(ds), d_max=max(ds)))
    return out
