"""
Hardy's Z on the critical line
==============================

Z(t) = exp(i theta(t)) zeta(1/2 + i t) is real for real t. Two zeta
backends are available: an accelerated alternating series (accurate to the
working precision, cost grows with t) and the Riemann-Siegel formula
(about 1e-12 near t = 20, close to double precision above t = 50).
"""

import numpy as np

from zetaifs import PrecisionConfig, ZetaBackend, hardy_z, omega_bound, s_arg, theta_asymptotic, theta_exact

alt = PrecisionConfig(zeta_backend=ZetaBackend.ALTERNATING_SERIES)
rs = PrecisionConfig(zeta_backend=ZetaBackend.RIEMANN_SIEGEL)

# Both backends on a few heights; the difference shrinks quickly with t
for t in (10.0, 20.0, 50.0, 150.0):
    a, b = hardy_z(t, alt), hardy_z(t, rs)
    print("t=%6.1f  Z=% .15f  |alt - rs| = %.1e" % (t, float(a), float(abs(a - b))))

# Sign changes of Z on a coarse grid locate the first zeros
ts = np.linspace(10, 40, 301)
zs = np.array([float(hardy_z(t)) for t in ts])
crossings = ts[:-1][np.sign(zs[:-1]) != np.sign(zs[1:])]
print("sign changes near", np.round(crossings, 1))

# theta against its Stirling form; the gap decays like 1/(48 t)
for t in (20, 100, 500):
    print("t=%d  theta - theta~ = %.2e   1/(48 t) = %.2e" % (t, float(theta_exact(t) - theta_asymptotic(t)), 1 / (48 * t)))

# S(t) is the normalised argument of zeta, Omega(t) the step normaliser
for t in (10, 30, 100):
    print("t=%d  S=% .4f  Omega=%.4f" % (t, float(s_arg(t)), float(omega_bound(t))))
