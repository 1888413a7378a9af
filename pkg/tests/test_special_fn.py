import concurrent.futures
import math

import mpmath
import pytest
import scipy.optimize
import scipy.special

from zetaifs.config import PrecisionConfig, ZetaBackend
from zetaifs.errors import BackendRangeError, DomainError, IndeterminateError, PoleError
from zetaifs.special_fn import (
    hardy_z,
    ln_gamma,
    omega_bound,
    s_arg,
    theta_asymptotic,
    theta_exact,
    z_derivative,
    zeta_critical,
)

ALT = PrecisionConfig(zeta_backend=ZetaBackend.ALTERNATING_SERIES)
RS = PrecisionConfig(zeta_backend=ZetaBackend.RIEMANN_SIEGEL)
ZETA_HALF = -1.4603545088095868  # zeta(1/2), checked against mpmath below
Y1 = mpmath.mpf("14.134725141734693790457251983562")


# ln_gamma


def test_ln_gamma_trivial_values():
    assert ln_gamma(1) == 0
    with mpmath.workdps(40):
        ref = mpmath.log(mpmath.sqrt(mpmath.pi))
    assert abs(ln_gamma(0.5) - ref) < 1e-28


def test_ln_gamma_matches_scipy():
    z = complex(0.25, 7)
    ours = complex(ln_gamma(z))
    ref = complex(scipy.special.loggamma(z))
    assert abs(ours - ref) < 1e-13


@pytest.mark.parametrize("z", [0, -1, -2, -7])
def test_ln_gamma_poles(z):
    with pytest.raises(PoleError):
        ln_gamma(z)


def test_ln_gamma_branch_cut_continuous_from_above():
    above = complex(scipy.special.loggamma(complex(-0.5, 1e-14)))
    assert abs(complex(ln_gamma(-0.5)) - above) < 1e-12


# theta


def test_theta_zero():
    assert theta_exact(0) == 0


@pytest.mark.parametrize("t", [1.5, Y1, 50, 333.3, 1400])
def test_theta_matches_independent_siegeltheta(t):
    with mpmath.workdps(40):
        ref = mpmath.siegeltheta(t)
    assert abs(theta_exact(t) - ref) < 1e-25


def test_theta_at_first_zero_is_not_minus_half_pi():
    # theta(y_1) = -1.7287; the exact equation holds for theta + pi S, with
    # S(y_1) the midpoint of its jump, not for theta alone
    assert abs(theta_exact(Y1) - mpmath.mpf("-1.72867024667583783")) < 1e-15


def test_theta_exact_vs_asymptotic_at_100():
    assert abs(theta_exact(100) - theta_asymptotic(100)) < 0.01


def test_theta_asymptotic_values():
    with mpmath.workdps(40):
        pi = +mpmath.pi
        two_pi_e = 2 * pi * mpmath.e
        at_two_pi_e = theta_asymptotic(two_pi_e)
        at_two_pi = theta_asymptotic(2 * pi)
        assert abs(at_two_pi_e + pi / 8) < 1e-28
        assert abs(at_two_pi - (-pi - pi / 8)) < 1e-28
    assert abs(theta_asymptotic(50) - theta_exact(50)) < 0.005


@pytest.mark.parametrize("t", [0, -3])
def test_theta_asymptotic_domain(t):
    with pytest.raises(DomainError):
        theta_asymptotic(t)


# zeta on the critical line


def test_zeta_half():
    with mpmath.workdps(40):
        ref = mpmath.zeta(0.5)
    for cfg in (ALT, PrecisionConfig()):
        val = zeta_critical(0, cfg)
        assert abs(val - ref) < 1e-28
    assert abs(float(ref) - ZETA_HALF) < 1e-15


@pytest.mark.parametrize("t", [0.5, 7, 14.5, 33.3, 99.9, 150, 199.5])
def test_alternating_series_matches_mpmath(t):
    with mpmath.workdps(40):
        ref = mpmath.zeta(mpmath.mpc(0.5, t))
    assert abs(zeta_critical(t, ALT) - ref) < 1e-27


@pytest.mark.parametrize(
    "t, tol", [(10, 1e-9), (20, 2e-12), (30, 1e-13), (60, 1e-15), (200, 1e-16), (500, 1e-16), (1000, 1e-16), (1419.5, 1e-16)]
)
def test_riemann_siegel_matches_mpmath(t, tol):
    # the remainder series is truncated, so accuracy improves quickly with t
    with mpmath.workdps(40):
        ref = mpmath.siegelz(t)
    assert abs(hardy_z(t, RS) - ref) < tol


def test_riemann_siegel_zeta_matches_mpmath():
    with mpmath.workdps(40):
        ref = mpmath.zeta(mpmath.mpc(0.5, 500))
    assert abs(zeta_critical(500, RS) - ref) < 1e-12


def test_zeta_vanishes_at_first_zero():
    assert abs(zeta_critical(Y1)) < 1e-9


def test_backends_agree_at_30():
    assert abs(zeta_critical(30, ALT) - zeta_critical(30, RS)) < 1e-9


def test_riemann_siegel_range():
    with pytest.raises(BackendRangeError):
        zeta_critical(5, RS)
    with pytest.raises(BackendRangeError):
        hardy_z(6, RS)


def test_negative_t_is_conjugate():
    with mpmath.workdps(40):
        ref = mpmath.conj(zeta_critical(12.5))
    assert abs(zeta_critical(-12.5) - ref) < 1e-28


# Z


def test_z_at_first_zero():
    assert abs(hardy_z(Y1)) < 1e-9


def test_z_sign_between_first_two_zeros():
    # Z > 0 on (y_1, y_2); a scan finds no sign change there
    grid = [14.2 + i * (20.9 - 14.2) / 200 for i in range(201)]
    signs = {mpmath.sign(mpmath.siegelz(t)) for t in grid}
    assert signs == {1}
    assert hardy_z(18) > 0
    with mpmath.workdps(40):
        ref = mpmath.siegelz(18)
    assert abs(hardy_z(18) - ref) < 1e-20


def test_z_at_zero_is_zeta_half():
    assert abs(hardy_z(0) - ZETA_HALF) < 1e-15


# S


def test_s_at_zero_height():
    assert s_arg(0) == 1


def test_s_at_10_matches_oracle():
    with mpmath.workdps(40):
        z = mpmath.zeta(mpmath.mpc(0.5, 10))
        ref = mpmath.atan2(z.imag, z.real) / mpmath.pi
    val = s_arg(10)
    assert -1 < val <= 1
    assert abs(val - ref) < 1e-25


def test_s_undefined_at_zero():
    with pytest.raises(IndeterminateError):
        s_arg(Y1)


# Omega


def test_omega_values():
    assert omega_bound(mpmath.e) == 1
    with mpmath.workdps(40):
        e = +mpmath.e
        ee = mpmath.exp(e)
        ref = mpmath.exp(mpmath.mpf(3) / 4 * mpmath.sqrt(e))
        val = omega_bound(ee)
        assert abs(val - ref) < 1e-25
    assert abs(float(val) - 3.4437) < 1e-4
    assert omega_bound(2) == 1


@pytest.mark.parametrize("t", [0, -1])
def test_omega_domain(t):
    with pytest.raises(DomainError):
        omega_bound(t)


def test_omega_growth_bound_on_grid():
    """Running max of |Z| exceeds Omega(t) from t = 45.59 on (scan to t = 120)."""
    step = 0.02
    running = 0.0
    t = 0.0
    with mpmath.workdps(20):
        while t <= 120:
            running = max(running, abs(float(mpmath.siegelz(t))))
            if t >= 45.59:
                assert running > float(omega_bound(t)), t
            t += step


# derivatives


def test_first_derivative_at_y1():
    d = z_derivative(Y1, 1)
    assert abs(d) > 0.5
    with mpmath.workdps(40):
        ref = mpmath.siegelz(Y1, derivative=1)
    assert abs(d - ref) < 1e-10


def test_second_derivative_matches_oracle():
    with mpmath.workdps(40):
        ref = mpmath.siegelz(15, derivative=2)
    assert abs(z_derivative(15, 2) - ref) < 1e-8


def test_first_derivative_matches_richardson():
    # Richardson-extrapolated central differences of the independent Z
    f = lambda u: mpmath.siegelz(u)
    t = mpmath.mpf(23.5)
    with mpmath.workdps(40):
        d = lambda h: (f(t + h) - f(t - h)) / (2 * h)
        rich = (4 * d(mpmath.mpf("1e-4")) - d(mpmath.mpf("2e-4"))) / 3
    assert abs(z_derivative(t, 1) - rich) < 1e-9


def test_first_derivative_vanishes_at_extremum():
    res = scipy.optimize.minimize_scalar(
        lambda u: -abs(float(mpmath.siegelz(u))), bounds=(15, 20.5), method="bounded", options={"xatol": 1e-10}
    )
    assert abs(z_derivative(res.x, 1)) < 1e-6


def test_derivative_order_validation():
    with pytest.raises(ValueError):
        z_derivative(20, 3)


# concurrency


def test_thread_safety_with_mixed_precisions():
    ts = [15.0 + 0.37 * i for i in range(24)]
    cfgs = [PrecisionConfig(working_digits=d) for d in (20, 30, 45)]
    serial = {(i, d.working_digits): hardy_z(t, d) for i, t in enumerate(ts) for d in cfgs}
    jobs = [(i, t, d) for i, t in enumerate(ts) for d in cfgs]
    with concurrent.futures.ThreadPoolExecutor(max_workers=6) as pool:
        results = list(pool.map(lambda j: ((j[0], j[2].working_digits), hardy_z(j[1], j[2])), jobs))
    for key, val in results:
        assert val == serial[key]
    assert math.isclose(float(serial[(0, 20)]), float(serial[(0, 45)]), rel_tol=1e-15)
