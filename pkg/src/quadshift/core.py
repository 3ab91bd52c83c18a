"""The map itself: a cyclic coordinate shift with a quadratic kick.

One step sends (x, y, z) to (y, z, x^2 + b).  Three steps act on each
coordinate independently through the same scalar return map x -> x^2 + b,
so a 3D orbit is just three interleaved scalar orbits.  Every other
module in the package leans on that.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import Diverged, Overflow

# |coord| beyond this grows monotonically under x -> x^2 + b for the
# parameter range we care about (b >= -2); 4 leaves margin.
ESCAPE_RADIUS = 4.0

# A 3x3 Jacobian; row-major numpy array, entries finite.
Mat3 = np.ndarray


@dataclass(frozen=True)
class Params:
    b: float

    def __post_init__(self):
        if not math.isfinite(self.b):
            raise ValueError("parameter b must be finite")


@dataclass(frozen=True)
class Point3:
    x: float
    y: float
    z: float

    def __iter__(self):
        yield self.x
        yield self.y
        yield self.z

    def max_abs(self) -> float:
        return max(abs(self.x), abs(self.y), abs(self.z))

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)


def as_point(seq) -> Point3:
    x, y, z = seq
    return Point3(float(x), float(y), float(z))


def h1d(x: float, params: Params) -> float:
    """The scalar return map: x -> x^2 + b.  All three coordinates obey it."""
    return x * x + params.b


def h1d_n(x: float, params: Params, n: int) -> float:
    b = params.b
    for _ in range(n):
        x = x * x + b
    return x


def apply_T(p: Point3, params: Params) -> Point3:
    z = p.x * p.x + params.b
    if not math.isfinite(z):
        raise Overflow(f"quadratic kick overflowed at x={p.x!r}")
    return Point3(p.y, p.z, z)


def apply_T_n(p: Point3, params: Params, n: int, fast: bool = False) -> Point3:
    """n-fold composition of apply_T.

    fast=True takes the decoupled shortcut: floor(n/3) scalar iterations per
    coordinate, then 0-2 single steps.  Plain composition is the default;
    the shortcut is cross-checked against it in the tests.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if fast:
        k, r = divmod(n, 3)
        p = Point3(h1d_n(p.x, params, k), h1d_n(p.y, params, k), h1d_n(p.z, params, k))
        for _ in range(r):
            p = apply_T(p, params)
        return p
    for _ in range(n):
        p = apply_T(p, params)
    return p


def jacobian_T(p: Point3) -> Mat3:
    """One-step Jacobian: constant rows except the 2x entry.  det = 2x."""
    return np.array([
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [2.0 * p.x, 0.0, 0.0],
    ])


def orbit(p0: Point3, params: Params, n: int, transient: int = 0,
          escape_radius: float = ESCAPE_RADIUS) -> list[Point3]:
    """Iterate `transient` steps unrecorded, then record n consecutive states.

    Raises Diverged with the absolute step index as soon as a state leaves
    the escape ball, so callers can tell transient blowup from late escape.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    p = p0
    for k in range(transient):
        if p.max_abs() > escape_radius:
            raise Diverged(k, p)
        p = apply_T(p, params)
    out = []
    for k in range(n):
        if p.max_abs() > escape_radius:
            raise Diverged(transient + k, p)
        out.append(p)
        p = apply_T(p, params)
    return out
