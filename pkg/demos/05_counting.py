"""
Counting zeros and the exact equation
=====================================

theta(t) + pi S(t) steps by pi across every simple zero and passes
(n - 3/2) pi exactly at y_n. Dropping S gives the smooth count
(t / 2pi) log(t / 2pi e) + 7/8, and solving it for n - 11/8 places each
zero to within a fraction of a gap.
"""

from zetaifs import asymptotic_solve, bundled_reference_table, count_zeros_N0, exact_residual_bracket
from zetaifs.transcendental import local_gap

table = bundled_reference_table()
zeros = table.as_floats()

for t in (50, 100, 200, 1000):
    print("t=%4d  N0=%.3f  zeros below t: %d" % (t, float(count_zeros_N0(t)), table.count_below(t)))

for n in (1, 2, 50, 100):
    br = exact_residual_bracket(n, zeros[n - 1], 1e-4 * local_gap(zeros, n))
    print("n=%3d  F(y-eps)=%.4f  target=%.4f  F(y+eps)=%.4f" % (n, float(br.lower), float(br.target), float(br.upper)))

for n in (10, 100, 1000):
    print("n=%4d  smooth estimate %.4f  actual %.4f" % (n, float(asymptotic_solve(n)), zeros[n - 1]))
