"""Check numerically that p carries T0 onto T1: side correspondence,
monotonicity, orientation and an argument-principle count on a grid of
targets."""

import argparse

import numpy as np

from quasiperiods import geom
from quasiperiods.errors import AmbiguousWinding, CapTooLow
from quasiperiods.pmap import eval_p, eval_p_prime


def p(z):
    return eval_p(z).value


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--cutoff", type=float, default=12.0)
    ap.add_argument("--grid", type=int, default=9, help="targets per axis")
    args = ap.parse_args()

    rep = geom.verify_boundary_map(p, geom.T0, geom.T1, args.samples, args.cutoff, fprime=eval_p_prime)
    print("side distance  ", " ".join(f"{d:.2e}" for d in rep.side_distance))
    print("on arc         ", rep.on_arc)
    print("monotone       ", rep.monotone)
    print("injective      ", rep.injective, f"(min separation {rep.min_image_separation:.2e})")
    print("orientation    ", rep.orientation_ok, f"(windings {rep.winding_source}, {rep.winding_image})")
    print("passed         ", rep.passed)

    # count solutions of p = w for w on a grid around T1
    counts = {}
    for x in np.linspace(-0.45, 0.95, args.grid):
        for y in np.linspace(-2.0, 2.0, args.grid):
            w = complex(x, y)
            try:
                n = geom.argument_principle_count(p, geom.T0, w, args.samples, args.cutoff)
            except (AmbiguousWinding, CapTooLow):
                n = None
            counts[n] = counts.get(n, 0) + 1
    print("counts on grid ", dict(sorted(counts.items(), key=lambda kv: str(kv[0]))))


if __name__ == "__main__":
    main()
