"""Write an SVG of the reflected copies of T0 up to a given word depth, and
optionally the images of a few of them under p as sampled polylines."""

import argparse

from quasiperiods import geom
from quasiperiods.cli import PX, VIEW_X, VIEW_Y, render_svg
from quasiperiods.group import tessellate
from quasiperiods.pmap import eval_p


def image_polyline(g, samples, cutoff):
    tri = geom.transform_triangle(g, geom.T0)
    pts = []
    for z in geom.sample_boundary(tri, samples, cutoff).closed():
        w = eval_p(z)
        if w.at_infinity or not (VIEW_X[0] - 1 < w.value.real < VIEW_X[1] + 1):
            continue
        y = min(max(w.value.imag, -1.0), VIEW_Y[1] + 1)
        pts.append(f"{(w.value.real - VIEW_X[0]) * PX:.2f},{(VIEW_Y[1] - y) * PX:.2f}")
    return " ".join(pts)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--out", default="tessellation.svg")
    ap.add_argument("--images", type=int, default=0, help="also draw p of the first N triangles")
    ap.add_argument("--samples", type=int, default=60)
    args = ap.parse_args()

    elems = tessellate(args.depth)
    svg = render_svg(elems)
    if args.images:
        lines = [f'<polyline points="{image_polyline(g, args.samples, 6.0)}" fill="none" '
                 f'stroke="crimson" stroke-width="1"/>' for g in elems[:args.images]]
        svg = svg.replace("</svg>", "\n".join(lines) + "\n</svg>")
    with open(args.out, "w") as fh:
        fh.write(svg)
    print(f"{len(elems)} triangles -> {args.out}")


if __name__ == "__main__":
    main()
