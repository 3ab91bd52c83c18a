"""Attractor catalogs and basin classification over 2D slices.

A catalog is built once from seed orbits: short-period limit sets are
detected exactly by recurrence, everything else bounded is sampled into a
point-cloud signature.  Grid cells are then iterated in bulk (plain numpy
arrays, escaped cells keep iterating harmlessly toward inf) and their
post-transient tails matched against the signatures by sup-distance
nearest neighbors.  A cell's label is the best-matching attractor below
the match tolerance, the divergence label on escape, or undecided --
undecided cells get one retry with a larger budget before that sticks.

The same batch engine classifies single points, so a slice cell and a
lone query at the same coordinates always agree.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .core import ESCAPE_RADIUS, Params, Point3
from .errors import PaletteMissingLabel

DIVERGENT = -1
UNDECIDED = -2

_SWEPT = {"z": ("x", "y"), "y": ("x", "z"), "x": ("y", "z")}


@dataclass(frozen=True)
class BasinOptions:
    max_iter: int = 5000
    transient: int = 1000
    escape_radius: float = ESCAPE_RADIUS
    signature_samples: int = 512
    match_tol: float = 0.05        # sup-distance from tail to signature
    merge_tol: float = 0.3         # symmetric Hausdorff estimate for catalog dedup
    cycle_tol: float = 1e-8
    cycle_search: int = 64         # recurrence horizon for exact cycle detection
    tail_samples: int = 16
    retry_factor: int = 4


@dataclass(frozen=True)
class Attractor:
    id: int
    kind: str               # "fixed_point" | "cycle" | "chaotic"
    period: int | None
    signature: np.ndarray   # (m, 3), treated as read-only
    b: float


@dataclass(frozen=True)
class SliceSpec:
    """A 2D slice: one axis pinned, the other two swept over cell centers."""
    fixed_axis: str = "z"
    fixed_value: float = 0.5
    u_range: tuple = (-2.5, 2.5)
    v_range: tuple = (-2.5, 2.5)
    nu: int = 200
    nv: int = 200

    def axes(self):
        return _SWEPT[self.fixed_axis]

    def u_centers(self):
        lo, hi = self.u_range
        return lo + (np.arange(self.nu) + 0.5) * (hi - lo) / self.nu

    def v_centers(self):
        lo, hi = self.v_range
        return lo + (np.arange(self.nv) + 0.5) * (hi - lo) / self.nv

    def cell_point(self, i, j) -> Point3:
        coords = {self.fixed_axis: self.fixed_value}
        ua, va = self.axes()
        coords[ua] = float(self.u_centers()[i])
        coords[va] = float(self.v_centers()[j])
        return Point3(coords["x"], coords["y"], coords["z"])


@dataclass(frozen=True)
class BasinGrid:
    b: float
    spec: SliceSpec
    labels: np.ndarray      # (nv, nu) ints; row j sweeps v, column i sweeps u
    attractors: tuple
    options: BasinOptions


def default_seeds() -> tuple:
    """One generic start, one with two coordinates bit-identical, one fully
    synchronized.  Exact coordinate ties persist forever (the coordinate
    streams are copies), so these reach genuinely different limit sets when
    lower-dimensional attractors coexist."""
    return (Point3(0.1, -0.55, 0.3),
            Point3(0.37, 0.37, -0.2),
            Point3(-0.4, -0.4, -0.4))


# ---------------------------------------------------------------------------
# batch orbit engine


def _evolve(X, Y, Z, b, n_steps, tail_n, R):
    """Advance a batch of states n_steps; record the last tail_n states.

    Returns (escaped mask, tails (N, tail_n, 3)).  Escaped states keep
    iterating toward inf -- cheap, NaN-free, and keeps the arrays dense.
    """
    N = X.size
    escaped = np.zeros(N, dtype=bool)
    tail_n = min(tail_n, n_steps)
    tails = np.zeros((N, tail_n, 3))
    rec0 = n_steps - tail_n
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(n_steps):
            X, Y, Z = Y, Z, X * X + b
            escaped |= (np.abs(X) > R) | (np.abs(Y) > R) | (np.abs(Z) > R)
            if k >= rec0:
                i = k - rec0
                tails[:, i, 0] = X
                tails[:, i, 1] = Y
                tails[:, i, 2] = Z
    return escaped, tails


def _match_tails(tails, bounded, attractors, match_tol):
    """Best-match labels for bounded cells; UNDECIDED where nothing fits."""
    N = tails.shape[0]
    labels = np.full(N, UNDECIDED, dtype=int)
    idx = np.nonzero(bounded)[0]
    if idx.size == 0 or not attractors:
        return labels
    flat = tails[idx].reshape(-1, 3)
    dists = np.empty((len(attractors), idx.size))
    for a_i, att in enumerate(attractors):
        tree = cKDTree(att.signature)
        d, _ = tree.query(flat, k=1, p=np.inf)
        dists[a_i] = d.reshape(idx.size, -1).max(axis=1)
    best = np.argmin(dists, axis=0)
    best_d = dists[best, np.arange(idx.size)]
    ok = best_d < match_tol
    ids = np.array([a.id for a in attractors], dtype=int)
    labels[idx[ok]] = ids[best[ok]]
    return labels


def _classify_batch(X0, Y0, Z0, b, attractors, options: BasinOptions):
    n_steps = options.transient + options.max_iter
    escaped, tails = _evolve(X0.copy(), Y0.copy(), Z0.copy(), b, n_steps,
                             options.tail_samples, options.escape_radius)
    labels = _match_tails(tails, ~escaped, attractors, options.match_tol)
    labels[escaped] = DIVERGENT
    retry = np.nonzero(labels == UNDECIDED)[0]
    if retry.size:
        n_long = options.transient + options.retry_factor * options.max_iter
        esc2, tails2 = _evolve(X0[retry].copy(), Y0[retry].copy(),
                               Z0[retry].copy(), b, n_long,
                               options.tail_samples, options.escape_radius)
        sub = _match_tails(tails2, ~esc2, attractors, options.match_tol)
        sub[esc2] = DIVERGENT
        labels[retry] = sub
    return labels


# ---------------------------------------------------------------------------
# catalog


def _limit_set_of(seed: Point3, params: Params, options: BasinOptions):
    """(kind, period, signature) of the seed's limit set, or None on escape."""
    b = params.b
    R = options.escape_radius
    x, y, z = seed.x, seed.y, seed.z
    for _ in range(options.transient):
        if abs(x) > R or abs(y) > R or abs(z) > R:
            return None
        x, y, z = y, z, x * x + b
    probe = [(x, y, z)]
    for _ in range(options.cycle_search):
        if abs(x) > R or abs(y) > R or abs(z) > R:
            return None
        x, y, z = y, z, x * x + b
        probe.append((x, y, z))
    p0 = probe[0]
    for k in range(1, options.cycle_search + 1):
        if max(abs(probe[k][0] - p0[0]), abs(probe[k][1] - p0[1]),
               abs(probe[k][2] - p0[2])) < options.cycle_tol:
            pts = probe[:k]
            kind = "fixed_point" if k == 1 else "cycle"
            return kind, k, np.array(pts)
    sig = probe[: options.cycle_search]
    while len(sig) < options.signature_samples:
        if abs(x) > R or abs(y) > R or abs(z) > R:
            return None
        x, y, z = y, z, x * x + b
        sig.append((x, y, z))
    return "chaotic", None, np.array(sig[: options.signature_samples])


def _hausdorff_sup(A, B):
    da = cKDTree(B).query(A, k=1, p=np.inf)[0].max()
    db = cKDTree(A).query(B, k=1, p=np.inf)[0].max()
    return max(da, db)


def build_catalog(params: Params, seeds=None,
                  options: BasinOptions = BasinOptions()) -> list:
    """Deduplicated attractor list from seed orbits; divergent seeds drop out."""
    if seeds is None:
        seeds = default_seeds()
    if not seeds:
        raise ValueError("need at least one seed")
    found = []
    for seed in seeds:
        res = _limit_set_of(seed, params, options)
        if res is None:
            continue
        kind, period, sig = res
        dup = False
        for okind, operiod, osig in found:
            if kind in ("fixed_point", "cycle") and okind in ("fixed_point", "cycle"):
                if period == operiod and _cycles_equal(sig, osig):
                    dup = True
                    break
            elif kind == "chaotic" and okind == "chaotic":
                if _hausdorff_sup(sig, osig) < options.merge_tol:
                    dup = True
                    break
        if not dup:
            found.append((kind, period, sig))
    return [Attractor(id=i, kind=k, period=per, signature=sig, b=params.b)
            for i, (k, per, sig) in enumerate(found)]


def _cycles_equal(sig_a, sig_b, tol=1e-6):
    # distinct orbits are disjoint point sets, so set distance is the right
    # test; sorting coordinates is not (one-ulp noise reshuffles the order)
    if len(sig_a) != len(sig_b):
        return False
    return _hausdorff_sup(np.asarray(sig_a), np.asarray(sig_b)) < tol


# ---------------------------------------------------------------------------
# classification


def classify_point(p0: Point3, params: Params, catalog,
                   options: BasinOptions = BasinOptions()) -> int:
    """Label of a single start; runs the identical batch engine on a batch
    of one, so it always agrees with a grid cell at the same coordinates."""
    X = np.array([p0.x])
    Y = np.array([p0.y])
    Z = np.array([p0.z])
    return int(_classify_batch(X, Y, Z, params.b, tuple(catalog), options)[0])


def basin_slice(params: Params, spec: SliceSpec, catalog,
                options: BasinOptions = BasinOptions(),
                threads: int = 1) -> BasinGrid:
    """Classify every cell center of the slice.  Output is independent of
    the thread count: rows are chunked, each chunk is pure, and the label
    matrix is assembled in canonical order."""
    if spec.nu < 2 or spec.nv < 2:
        raise ValueError("resolution must be >= 2 per swept axis")
    U = spec.u_centers()
    V = spec.v_centers()
    uu, vv = np.meshgrid(U, V)          # shape (nv, nu)
    coords = {spec.fixed_axis: np.full(uu.size, spec.fixed_value)}
    ua, va = spec.axes()
    coords[ua] = uu.ravel()
    coords[va] = vv.ravel()
    X0, Y0, Z0 = coords["x"], coords["y"], coords["z"]
    catalog = tuple(catalog)

    if threads <= 1:
        flat = _classify_batch(X0, Y0, Z0, params.b, catalog, options)
    else:
        bounds = np.linspace(0, uu.size, threads + 1, dtype=int)
        chunks = [(X0[a:c], Y0[a:c], Z0[a:c])
                  for a, c in zip(bounds[:-1], bounds[1:])]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(
                lambda ch: _classify_batch(ch[0], ch[1], ch[2], params.b,
                                           catalog, options), chunks))
        flat = np.concatenate(parts)
    return BasinGrid(b=params.b, spec=spec, labels=flat.reshape(spec.nv, spec.nu),
                     attractors=catalog, options=options)


# ---------------------------------------------------------------------------
# rendering

_COLOR_TABLE = (
    (230, 80, 60), (70, 130, 220), (90, 190, 90), (240, 200, 70),
    (170, 90, 200), (80, 200, 200), (240, 140, 60), (150, 150, 150),
    (200, 120, 160), (120, 170, 80),
)


def default_palette(grid: BasinGrid) -> dict:
    pal = {DIVERGENT: (0, 0, 0), UNDECIDED: (40, 40, 40)}
    for lab in sorted(set(int(v) for v in np.unique(grid.labels)) |
                      {a.id for a in grid.attractors}):
        if lab >= 0:
            pal[lab] = _COLOR_TABLE[lab % len(_COLOR_TABLE)]
    return pal


def render_grid(grid: BasinGrid, palette=None) -> bytes:
    """Binary PPM (P6), one pixel per cell, top row = largest swept v."""
    if palette is None:
        palette = default_palette(grid)
    nv, nu = grid.labels.shape
    img = np.zeros((nv, nu, 3), dtype=np.uint8)
    for lab in np.unique(grid.labels):
        key = int(lab)
        if key not in palette:
            raise PaletteMissingLabel(key)
        img[grid.labels == lab] = palette[key]
    img = img[::-1]     # v increases upward in the picture
    return b"P6\n%d %d\n255\n" % (nu, nv) + img.tobytes()
