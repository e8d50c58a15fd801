"""Locate the zero of E2 on the imaginary axis and show what happens to the
quasi-periods of the lattice spanned by (i s*, 1) there."""

import argparse
import math

from quasiperiods.lattice import lattice_new, quasi_periods_modular
from quasiperiods.pmap import ZeroBracket, eval_p, find_e2_zero_on_axis
from quasiperiods.qforms import eval_E2


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lo", type=float, default=0.5)
    ap.add_argument("--hi", type=float, default=1.0)
    ap.add_argument("--tol", type=float, default=1e-12)
    args = ap.parse_args()

    z = find_e2_zero_on_axis(ZeroBracket(args.lo, args.hi), tol=args.tol)
    s = z.value.imag
    print(f"s*          = {s:.16f}")
    print(f"|E2(i s*)|  = {abs(eval_E2(z.value).value):.3e}")
    qp = quasi_periods_modular(lattice_new(z.value, 1))
    print(f"|eta2|      = {abs(qp.eta2):.3e}")
    print(f"eta1 + 2pi i = {abs(qp.eta1 + 2j * math.pi):.3e}")
    for ds in (1e-2, 1e-4, 1e-6):
        v = eval_p(1j * (s + ds))
        print(f"|p(i(s*+{ds:g}))| = {abs(v.value):.3e}")


if __name__ == "__main__":
    main()
