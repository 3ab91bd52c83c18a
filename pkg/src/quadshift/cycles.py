"""Periodic orbits: scalar cycles, their conjugates, and loom lifts to 3D.

A cycle of the scalar map x -> x^2 + b can be placed into the 3D map in
several ways: one orbit per scalar cycle when the period is not a multiple
of 3 ("homogeneous" lifts), a family of period-3n orbits built from one
period-n cycle, and mixed orbits woven from two or three coexisting scalar
cycles.  The seed index rules are fiddly, so every generated seed is
validated by direct iteration and never trusted on its own.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from math import gcd, lcm, sqrt

import numpy as np

from .core import Params, Point3, apply_T, h1d, h1d_n, jacobian_T
from .errors import (CountMismatch, LiftValidationFailed, NoRealFixedPoints,
                     PeriodDivisibleBy3)

log = logging.getLogger(__name__)

STABILITY_TOL = 1e-9    # |lambda| this close to 1 -> nonhyperbolic
CLOSURE_TOL = 1e-10     # orbit must return to its seed this tightly
DEDUP_DECIMALS = 9      # orbits equal iff sorted points match at this rounding
DEGENERATE_TOL = 1e-7   # distinct cycles closer than this get flagged, not merged


@dataclass(frozen=True)
class Cycle1D:
    """A minimal-period orbit of the scalar map, smallest point first.

    points follow orbit order (each maps to the next, last wraps to first).
    The multiplier is the product of 2*x over the points, accumulated in
    sorted order so that cycles sharing a point multiset get bit-identical
    multipliers.
    """
    b: float
    period: int
    points: tuple
    multiplier: float
    degenerate: bool = False


@dataclass(frozen=True)
class ConjugateTriple:
    """The three orbit-aligned scalar cycles sitting under one 3D cycle.

    Y and Z are images of X under the scalar map, i.e. X's orbit rotated by
    one position -- *not* re-sorted smallest-first.  The pointwise alignment
    (y_i is the image of x_i) is what the lift seed rules index into.
    """
    X: Cycle1D
    Y: Cycle1D
    Z: Cycle1D


@dataclass(frozen=True)
class Provenance:
    kind: str                 # "homogeneous" | "homogeneous_3n" | "mixed_pair" | "mixed_triple"
    sources: tuple            # labels of the scalar cycles used
    seed: Point3              # the seed point the orbit was grown from


@dataclass(frozen=True)
class Cycle3D:
    b: float
    period: int
    points: tuple             # orbit order, lexicographically smallest first
    eigenvalues: tuple        # three reals, descending
    stability: str            # "stable" | "unstable" | "nonhyperbolic"
    provenance: Provenance


def cycle1d_label(c: Cycle1D) -> str:
    return f"n{c.period}@{min(c.points):.12g}"


def _sorted_multiplier(points) -> float:
    m = 1.0
    for x in sorted(points):
        m *= 2.0 * x
    return m


def cycle1d_from_orbit(b, points, degenerate=False) -> Cycle1D:
    return Cycle1D(b=b, period=len(points), points=tuple(points),
                   multiplier=_sorted_multiplier(points), degenerate=degenerate)


def _rotate_min_first(orb):
    i0 = min(range(len(orb)), key=lambda i: orb[i])
    return tuple(orb[i0:]) + tuple(orb[:i0])


def _proper_divisors(n):
    return [d for d in range(1, n) if n % d == 0]


def _newton_1d(x, params, n, iters=60, res_tol=5e-14):
    # Newton on H^n(x) - x with the analytic derivative (product of 2*v_i).
    b = params.b
    for _ in range(iters):
        v = x
        d = 1.0
        for _ in range(n):
            d = 2.0 * v * d
            v = v * v + b
        fv = v - x
        dfv = d - 1.0
        if dfv == 0.0:
            break
        step = fv / dfv
        x -= step
        if abs(fv) < res_tol and abs(step) < 1e-13:
            break
    return x


def _residual_1d(x, params, n):
    return h1d_n(x, params, n) - x


def _refine_tangent(x, params, n, rounds=40):
    # Newton on (H^n)'(x) - 1 = 0.  Near a double root the residual itself
    # is noise-floor quadratic, so plain Newton leaves ~1e-8 scatter and the
    # same tangent orbit survives dedup several times; the derivative
    # condition crosses zero transversally and pins the point to full
    # precision.
    b = params.b
    for _ in range(rounds):
        v, dvx, dxx = x, 1.0, 0.0
        for _ in range(n):
            dxx = 2.0 * (dvx * dvx + v * dxx)
            dvx = 2.0 * v * dvx
            v = v * v + b
        g = dvx - 1.0
        if dxx == 0.0:
            break
        step = g / dxx
        x -= step
        if abs(step) < 1e-15:
            break
    return x


def find_cycles_1d(params: Params, n: int, interval=(-2.5, 2.5),
                   grid_points: int = 20001) -> list:
    """All minimal-period-n orbits of the scalar map inside the interval.

    Sign changes of H^n(x) - x on a uniform grid are bisected then polished
    by Newton; local minima of |H^n(x) - x| below 1e-3 seed extra Newton
    runs so tangent roots at folds are not silently missed.  Roots whose
    minimal period properly divides n are discarded; orbits are deduplicated
    on sorted points and near-coincident cycles get a degenerate flag.
    """
    if n < 1:
        raise ValueError("period must be >= 1")
    lo, hi = interval
    if not lo < hi:
        raise ValueError("interval must satisfy lo < hi")
    b = params.b
    xs = np.linspace(lo, hi, grid_points)
    y = xs.copy()
    for _ in range(n):
        y = y * y + b
    f = y - xs

    roots = []
    sgn = np.sign(f)
    flips = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
    for i in flips:
        a, c = xs[i], xs[i + 1]
        fa = f[i]
        for _ in range(40):
            mid = 0.5 * (a + c)
            fm = _residual_1d(mid, params, n)
            if fa * fm <= 0:
                c = mid
            else:
                a, fa = mid, fm
        roots.append(_newton_1d(0.5 * (a + c), params, n))
    # exact-zero grid hits
    for i in np.nonzero(sgn == 0)[0]:
        roots.append(float(xs[i]))
    # tangency candidates: interior local minima of |f| with no sign change
    af = np.abs(f)
    for i in range(1, grid_points - 1):
        if af[i] < 1e-3 and af[i] <= af[i - 1] and af[i] <= af[i + 1] \
                and sgn[i - 1] == sgn[i] == sgn[i + 1]:
            x = _newton_1d(xs[i], params, n, iters=100)
            if abs(_residual_1d(x, params, n)) < 1e-10:
                x2 = _refine_tangent(x, params, n)
                if abs(x2 - x) <= 1e-4 and \
                        abs(_residual_1d(x2, params, n)) < 1e-10:
                    x = x2
                roots.append(x)

    # keep converged, in-range, minimal-period roots
    kept = []
    for x in roots:
        if not (lo - 1e-9 <= x <= hi + 1e-9):
            continue
        if abs(_residual_1d(x, params, n)) > 1e-10:
            continue
        if any(abs(h1d_n(x, params, d) - x) < 1e-8 for d in _proper_divisors(n)):
            continue
        kept.append(x)

    # group roots into orbits, dedup on sorted points
    orbits = []
    keys = []
    for x in kept:
        orb = [x]
        for _ in range(n - 1):
            orb.append(h1d(orb[-1], params))
        key = tuple(sorted(orb))
        if any(max(abs(a - c) for a, c in zip(key, k)) < 1e-9 for k in keys):
            continue
        keys.append(key)
        orbits.append(_rotate_min_first(orb))

    orbits.sort(key=lambda o: o[0])
    degenerate = [False] * len(orbits)
    for i in range(len(orbits)):
        for j in range(i + 1, len(orbits)):
            if max(abs(a - c) for a, c in zip(sorted(orbits[i]), sorted(orbits[j]))) < DEGENERATE_TOL:
                degenerate[i] = degenerate[j] = True
    return [cycle1d_from_orbit(b, orb, deg) for orb, deg in zip(orbits, degenerate)]


def conjugate_of(X: Cycle1D) -> ConjugateTriple:
    """Orbit-aligned images of X: y_i = z_i = image of x_i (rotate by one)."""
    n = X.period
    shifted = tuple(X.points[(i + 1) % n] for i in range(n))
    Y = cycle1d_from_orbit(X.b, shifted, X.degenerate)
    Z = cycle1d_from_orbit(X.b, shifted, X.degenerate)
    return ConjugateTriple(X=X, Y=Y, Z=Z)


# ---------------------------------------------------------------------------
# stability


def stability_block_length(period: int) -> int:
    # smallest step count on which the Jacobian product is exactly diagonal
    return period if period % 3 == 0 else 3 * period


def classify_stability(points, b, tol: float = STABILITY_TOL):
    """Eigenvalue triple and stability tag of a 3D cycle.

    The Jacobian product is taken over the cycle's period when that is a
    multiple of 3 and over 3x the period otherwise -- the smallest block on
    which the product is exactly diagonal, hence real eigenvalues.
    """
    pts = list(points)
    L = stability_block_length(len(pts))
    M = np.eye(3)
    for k in range(L):
        M = jacobian_T(pts[k % len(pts)]) @ M
    eig = np.linalg.eigvals(M)
    eig = tuple(sorted((float(v.real) for v in eig), reverse=True))
    mags = [abs(v) for v in eig]
    if any(abs(m - 1.0) <= tol for m in mags):
        tag = "nonhyperbolic"
    elif all(m < 1.0 for m in mags):
        tag = "stable"
    else:
        tag = "unstable"
    return eig, tag


def _pt_gap(p: Point3, q: Point3) -> float:
    return max(abs(p.x - q.x), abs(p.y - q.y), abs(p.z - q.z))


def _min_period_3d(seed: Point3, params: Params, nmax: int, tol=1e-9):
    q = seed
    for k in range(1, nmax + 1):
        q = apply_T(q, params)
        if _pt_gap(q, seed) < tol:
            return k
    return None


def _orbit_3d(seed: Point3, params: Params, n: int):
    out = [seed]
    p = seed
    for _ in range(n - 1):
        p = apply_T(p, params)
        out.append(p)
    return out


def _canonical_rotation_3d(pts):
    key = lambda p: (p.x, p.y, p.z)
    i0 = min(range(len(pts)), key=lambda i: key(pts[i]))
    return tuple(pts[i0:]) + tuple(pts[:i0])


def cycle3d_key(pts):
    return tuple(sorted((round(p.x, DEDUP_DECIMALS), round(p.y, DEDUP_DECIMALS),
                         round(p.z, DEDUP_DECIMALS)) for p in pts))


def _build_cycle3d(seed: Point3, params: Params, period: int, kind: str,
                   sources) -> Cycle3D:
    pts = _orbit_3d(seed, params, period)
    wrap = apply_T(pts[-1], params)
    if _pt_gap(wrap, seed) > CLOSURE_TOL:
        raise LiftValidationFailed(
            f"seed {tuple(seed)} does not close after {period} steps "
            f"(gap {_pt_gap(wrap, seed):.3g})")
    for d in _proper_divisors(period):
        if _pt_gap(pts[d], seed) < 1e-9:
            raise LiftValidationFailed(
                f"seed {tuple(seed)} has period {d}, not the stated {period}")
    pts = _canonical_rotation_3d(pts)
    eig, tag = classify_stability(pts, params.b)
    prov = Provenance(kind=kind, sources=tuple(sources), seed=seed)
    return Cycle3D(b=params.b, period=period, points=pts, eigenvalues=eig,
                   stability=tag, provenance=prov)


# ---------------------------------------------------------------------------
# fixed points


def fixed_point_cycles_1d(params: Params):
    """The two scalar fixed points 1/2 +- (1/2)sqrt(1-4b) as period-1 cycles."""
    disc = 1.0 - 4.0 * params.b
    if disc < 0.0:
        raise NoRealFixedPoints(f"no real fixed points for b={params.b} > 1/4")
    r = sqrt(disc)
    xp = 0.5 + 0.5 * r
    xm = 0.5 - 0.5 * r
    return cycle1d_from_orbit(params.b, (xp,)), cycle1d_from_orbit(params.b, (xm,))


def fixed_points_T(params: Params):
    """Both fixed points of the 3D map, larger first, with stability."""
    cp, cm = fixed_point_cycles_1d(params)
    out = []
    for c in (cp, cm):
        x = c.points[0]
        seed = Point3(x, x, x)
        eig, tag = classify_stability((seed,), params.b)
        prov = Provenance(kind="homogeneous", sources=(cycle1d_label(c),), seed=seed)
        out.append(Cycle3D(b=params.b, period=1, points=(seed,),
                           eigenvalues=eig, stability=tag, provenance=prov))
    return tuple(out)


# ---------------------------------------------------------------------------
# lifts


def lift_homogeneous(X: Cycle1D, params: Params = None) -> Cycle3D:
    """The single 3D cycle of period n riding one scalar n-cycle (3 must not
    divide n).  The seed has the smallest point first and conjugate-cycle
    points in the slots the index rule dictates."""
    if params is None:
        params = Params(X.b)
    n = X.period
    if n % 3 == 0:
        raise PeriodDivisibleBy3(f"period {n} is divisible by 3; use the 3n lift")
    tri = conjugate_of(X)
    Xp, Yp, Zp = tri.X.points, tri.Y.points, tri.Z.points
    if n % 3 == 1:
        s = (n - 1) // 3
        seed = Point3(Xp[0], Yp[(2 * s) % n], Zp[s % n])
    else:
        s = (n - 2) // 3
        seed = Point3(Xp[0], Yp[s % n], Zp[(2 * s + 1) % n])
    return _build_cycle3d(seed, params, n, "homogeneous", (cycle1d_label(X),))


def lift_homogeneous_3n(X: Cycle1D, params: Params = None) -> list:
    """All distinct homogeneous period-3n cycles built on one scalar n-cycle.

    Two seed families indexed by (h, j); the ranges use the floor readings.
    Seeds whose iterated orbit does not have minimal period exactly 3n are
    dropped with a diagnostic rather than trusted.
    """
    if params is None:
        params = Params(X.b)
    n = X.period
    if n < 2:
        raise ValueError("the 3n lift needs a source cycle of period >= 2")
    tri = conjugate_of(X)
    Xp, Yp, Zp = tri.X.points, tri.Y.points, tri.Z.points
    seeds = []
    for h in range(1, n // 3 + 1):
        for j in range(h, n - 2 * h + 1):
            seeds.append(Point3(Xp[0], Yp[j - 1], Zp[j + h - 1]))
    for h in range(1, (n + 1) // 3 + 1):
        for j in range(2 * h - 1, n - h + 1):
            seeds.append(Point3(Xp[0], Yp[j - 1], Zp[j - h]))
    out, keys = [], set()
    src = (cycle1d_label(X),)
    for sd in seeds:
        per = _min_period_3d(sd, params, 3 * n)
        if per != 3 * n:
            log.warning("3n lift: seed %s has period %s, not %d; dropped",
                        tuple(sd), per, 3 * n)
            continue
        c = _build_cycle3d(sd, params, 3 * n, "homogeneous_3n", src)
        k = cycle3d_key(c.points)
        if k not in keys:
            keys.add(k)
            out.append(c)
    return out


def _check_coexisting(cycles):
    bs = {c.b for c in cycles}
    if len(bs) != 1:
        raise ValueError(f"cycles live at different parameters: {sorted(bs)}")
    keys = [tuple(sorted(c.points)) for c in cycles]
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            if cycles[i].period == cycles[j].period and \
                    max(abs(a - c) for a, c in zip(keys[i], keys[j])) < 1e-9:
                raise ValueError("source cycles must be distinct")


def lift_mixed_pair(A: Cycle1D, B: Cycle1D, params: Params = None) -> list:
    """All mixed cycles woven from two coexisting scalar cycles.

    With n = A.period, m = B.period, s = lcm(n, m), the result has period 3s
    and the deduplicated count must equal (n+m)*n*m/s; anything else means
    the seed indexing broke and raises CountMismatch.  The bound d on the
    first seed index is taken as gcd(n, m).
    """
    _check_coexisting((A, B))
    if params is None:
        params = Params(A.b)
    n, m = A.period, B.period
    d = gcd(n, m)
    s = lcm(n, m)
    Za = conjugate_of(A).Z.points
    Bb = conjugate_of(B).Y.points
    Cb = conjugate_of(B).Z.points
    seeds = []
    for j in range(1, d + 1):
        for l in range(1, n + 1):
            seeds.append(Point3(A.points[0], Bb[j - 1], Za[l - 1]))
        for l in range(1, m + 1):
            seeds.append(Point3(A.points[0], Bb[j - 1], Cb[l - 1]))
    src = (cycle1d_label(A), cycle1d_label(B))
    out, keys = [], set()
    for sd in seeds:
        per = _min_period_3d(sd, params, 3 * s)
        if per != 3 * s:
            log.warning("pair lift: seed %s has period %s, not %d; dropped",
                        tuple(sd), per, 3 * s)
            continue
        c = _build_cycle3d(sd, params, 3 * s, "mixed_pair", src)
        k = cycle3d_key(c.points)
        if k not in keys:
            keys.add(k)
            out.append(c)
    expected = (n + m) * n * m // s
    if len(out) != expected:
        raise CountMismatch(len(out), expected, f"pair periods {n},{m}")
    return out


def lift_mixed_triple(A: Cycle1D, B: Cycle1D, C: Cycle1D,
                      params: Params = None) -> list:
    """All mixed cycles woven from three pairwise-distinct coexisting scalar
    cycles; period 3*lcm(n, m, p), count 2*n*m*p/lcm(n, m, p)."""
    _check_coexisting((A, B, C))
    if params is None:
        params = Params(A.b)
    n, m, p = A.period, B.period, C.period
    S = lcm(n, m, p)
    d = gcd(n, m)
    lmax = p * lcm(n, m) // S
    Bb = conjugate_of(B).Y.points
    Cb = conjugate_of(B).Z.points
    Bc = conjugate_of(C).Y.points
    Gc = conjugate_of(C).Z.points
    seeds = []
    for j in range(1, d + 1):
        for l in range(1, lmax + 1):
            seeds.append(Point3(A.points[0], Bb[j - 1], Gc[l - 1]))
            seeds.append(Point3(A.points[0], Bc[l - 1], Cb[j - 1]))
    src = (cycle1d_label(A), cycle1d_label(B), cycle1d_label(C))
    out, keys = [], set()
    for sd in seeds:
        per = _min_period_3d(sd, params, 3 * S)
        if per != 3 * S:
            log.warning("triple lift: seed %s has period %s, not %d; dropped",
                        tuple(sd), per, 3 * S)
            continue
        c = _build_cycle3d(sd, params, 3 * S, "mixed_triple", src)
        k = cycle3d_key(c.points)
        if k not in keys:
            keys.add(k)
            out.append(c)
    expected = 2 * n * m * p // S
    if len(out) != expected:
        raise CountMismatch(len(out), expected, f"triple periods {n},{m},{p}")
    return out


# ---------------------------------------------------------------------------
# census


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def census(params: Params, period: int, interval=(-2.5, 2.5)) -> list:
    """Every distinct 3D cycle of the given minimal period, assembled from
    scalar cycles through the lift machinery and deduplicated.

    Periods not divisible by 3 are purely homogeneous (one cycle per scalar
    cycle of that period).  Periods 3s draw on scalar cycles of every period
    dividing s: homogeneous 3n lifts from the period-s cycles, mixed pairs
    and triples from every coexisting combination whose lcm is s.
    """
    if period % 3 != 0:
        return [lift_homogeneous(X, params)
                for X in find_cycles_1d(params, period, interval)]
    s = period // 3
    pool = []
    for dd in _divisors(s):
        pool.extend(find_cycles_1d(params, dd, interval))
    out, keys = [], set()

    def _absorb(cycles):
        for c in cycles:
            k = cycle3d_key(c.points)
            if k not in keys:
                keys.add(k)
                out.append(c)

    if s >= 2:
        for X in pool:
            if X.period == s:
                _absorb(lift_homogeneous_3n(X, params))
    for i in range(len(pool)):
        for j in range(i + 1, len(pool)):
            if lcm(pool[i].period, pool[j].period) == s:
                _absorb(lift_mixed_pair(pool[i], pool[j], params))
    for i in range(len(pool)):
        for j in range(i + 1, len(pool)):
            for k2 in range(j + 1, len(pool)):
                if lcm(pool[i].period, pool[j].period, pool[k2].period) == s:
                    _absorb(lift_mixed_triple(pool[i], pool[j], pool[k2], params))
    out.sort(key=lambda c: tuple(c.points[0]))
    return out
