"""Weierstrass quasi-periods, the ratio map ``p = eta1/eta2`` and the
modular-form machinery used to evaluate and check it."""

from .core import INF, RHO, TauPoint, chordal
from .lattice import Lattice, QuasiPeriods, ZetaParams, lattice_new, quasi_periods_direct, quasi_periods_modular
from .pmap import eval_p, eval_p_prime, find_e2_zero_on_axis, invert_p
from .qforms import DEFAULT_PARAMS, FormValue, SeriesParams, eval_Delta, eval_E2, eval_E4, eval_E6, eval_J

__all__ = [
    "INF", "RHO", "TauPoint", "chordal",
    "Lattice", "QuasiPeriods", "ZetaParams", "lattice_new", "quasi_periods_direct", "quasi_periods_modular",
    "eval_p", "eval_p_prime", "find_e2_zero_on_axis", "invert_p",
    "DEFAULT_PARAMS", "FormValue", "SeriesParams", "eval_Delta", "eval_E2", "eval_E4", "eval_E6", "eval_J",
]
