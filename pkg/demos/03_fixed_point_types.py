"""
Which zeros attract the n-th map
================================

For the n-th map the zeros y_n, y_(n+2), ... are attractive and
y_(n+1), y_(n+3), ... repelling. The earlier zeros y_k (k < n) sit in the
product of tanh factors. The map is not fixed there: it steps by exactly
(-1)^n, and its numerical slope across them is not 1 (about 1.1 below).

For comparison the Newton map t - Z/Z' has multiplier 0 at a simple zero,
so 1 / (1 - lambda) recovers multiplicity 1.
"""

from zetaifs import bundled_reference_table, classify_fixed_point, multiplicity, newton_multiplier

zeros = bundled_reference_table().as_floats()[:20]

n = 5
for j in range(1, 12):
    fp = classify_fixed_point(n, zeros[j - 1], zeros)
    print("map %d at y_%-2d  lambda=% .6f  %s" % (n, j, float(fp.multiplier), fp.kind.value))

for j in (1, 2, 10):
    y = zeros[j - 1]
    print("y_%d: Newton multiplier %.1e, multiplicity %.9f" % (j, float(newton_multiplier(y)), float(multiplicity(y))))
