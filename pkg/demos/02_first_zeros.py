"""
The first zeros as fixed points
===============================

Zero n is the limit of t -> t + h (-1)^n tanh(Z / (Omega prod_k tanh(t - y_k))),
started halfway between the two previous zeros. Each zero feeds the product
for the next one, so they are computed in order.
"""

from zetaifs import bundled_reference_table, compare, compute_zeros

reference = bundled_reference_table()

records = []
for rec in compute_zeros(15):
    records.append(rec)
    err = abs(float(rec.y) - float(reference.value(rec.n)))
    print("n=%2d  y=%.12f  iterations=%3d  h=%-6g multiplier=% .3f  error=%.1e"
          % (rec.n, float(rec.y), rec.iterations, rec.final_h, float(rec.multiplier), err))

report = compare(records, reference)
print("max error against the bundled table: %.2e" % report.max_error)
print("mean iterations: %.1f" % report.mean_iterations)
