"""Orbit samples of the named attractors, one CSV each.

Covers the parameter stations of the attractor story: a fixed point at
b = -0.4, the order-6 cycle at b = -0.8, a 3-cycle lift at b = -1.76,
broad chaos at b = -1.864, and the boundary case b = -2 sampled from
three nearby starts that all land on the same third-order chaotic set.

Usage: python3 scripts/attractor_gallery.py [--n 4000] [--out-dir out]
"""
import argparse
import pathlib

from quadshift import Diverged, Params, Point3, orbit
from quadshift.serialize import orbit_csv, save_text

STATIONS = [
    ("fixed_point_b-0.40", -0.4, Point3(0.0, -0.5, 0.0)),
    ("order6_b-0.80", -0.8, Point3(0.0, -0.5, 0.0)),
    ("threecycle_b-1.76", -1.76, Point3(0.0, -0.5, 0.5)),
    ("chaos_b-1.864", -1.864, Point3(0.0, -0.5, 0.5)),
    ("chaos_b-2.00_s1", -2.0, Point3(-0.5, 0.0, 0.0)),
    ("chaos_b-2.00_s2", -2.0, Point3(-0.5, -0.01, 0.0)),
    ("chaos_b-2.00_s3", -2.0, Point3(-0.5, -0.5, 0.0)),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=4000,
                    help="post-transient samples per orbit")
    ap.add_argument("--transient", type=int, default=1000)
    ap.add_argument("--out-dir", default="out")
    args = ap.parse_args()

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    for name, b, p0 in STATIONS:
        try:
            pts = orbit(p0, Params(b), args.n, transient=args.transient)
        except Diverged as exc:
            print(f"  {name}: diverged ({exc})")
            continue
        path = out / f"orbit_{name}.csv"
        save_text(path, orbit_csv(pts))
        xs = [p.x for p in pts]
        print(f"wrote {path}  (x in [{min(xs):+.4f}, {max(xs):+.4f}])")


if __name__ == "__main__":
    main()
