"""
Why the step is halved
======================

Where the map overshoots, the iterates can settle on a 2-cycle around the
zero. Halving h whenever two consecutive steps change sign removes the
cycle. Zero 400 is such a case: with h fixed at 1 the iteration never
converges, with halving it takes a few dozen steps.
"""

from zetaifs import NonConvergenceError, PrecisionConfig, bundled_reference_table
from zetaifs.dynamics import initial_state, run_iteration

zeros = bundled_reference_table().as_floats()
cfg = PrecisionConfig(max_iterations=2000)
n = 400

state = run_iteration(initial_state(n, zeros, relax=True), cfg)
print("halving on : %d iterations, h=%g, y=%.10f" % (state.m, state.h, float(state.t_current)))

trace = []
try:
    state = run_iteration(initial_state(n, zeros, relax=False), cfg, trace)
    print("halving off: %d iterations" % state.m)
except NonConvergenceError as exc:
    last = [float(s.t_current) for s in trace[-4:]]
    print("halving off: no convergence after %d iterations" % exc.iterations)
    print("last iterates:", ", ".join("%.6f" % v for v in last))
