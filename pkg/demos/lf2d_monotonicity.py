"""When does implicit Lax-Friedrichs stay monotone?

One implicit step of u_t + (v u)_x + (v u)_y = 0 with dx = dy = dt = 0.1,
starting from the indicator of the unit square.  The scheme is monotone iff
the flux Lipschitz constant |v| does not exceed dx / dt = 1.  A monotone
step keeps the data inside [0, 1]; beyond the limit it under- and overshoots,
more strongly the further v exceeds it.
"""

from implicit_monotone import check_flux_monotonicity
from implicit_monotone.experiments import run_lf2d_demo

print(f"{'v':>5} {'min':>10} {'max':>10} {'flux check':>12}")
for v in (0.5, 1.0, 1.2, 1.5, 2.0):
    res = run_lf2d_demo(v=v)
    g = res.scheme.numerical_flux()
    rep = check_flux_monotonicity(g, axis=0, sample_box=(0.0, 1.0), n_samples=2000)
    verdict = "monotone" if rep.pass_ else f"{len(rep.condition19_violations)} viol."
    print(f"{v:5.2f} {res.summary['min']:10.5f} {res.summary['max']:10.5f} {verdict:>12}")
