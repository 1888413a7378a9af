"""Special functions on the critical line.

All functions return mpmath numbers from a thread-private context at
``cfg.working_digits`` (see ``config.mp_context``), so they can be called
from several threads at once.
"""

from __future__ import annotations

import math
from functools import lru_cache

import gmpy2

from . import _rs_terms
from .config import AUTO_SPLIT_HEIGHT, DEFAULT_CONFIG, PrecisionConfig, ZetaBackend, ctx_for, mp_context
from .errors import BackendRangeError, ConsistencyError, DomainError, IndeterminateError, PoleError

__all__ = [
    "ln_gamma",
    "theta_exact",
    "theta_asymptotic",
    "zeta_critical",
    "hardy_z",
    "s_arg",
    "omega_bound",
    "z_derivative",
]


def ln_gamma(z, cfg: PrecisionConfig | None = None):
    """Principal branch of log Gamma(z).

    On the negative real axis the imaginary part is taken by continuity
    from above, which is mpmath's convention as well.
    """
    ctx = ctx_for(cfg)
    z = ctx.convert(z)
    if ctx.im(z) == 0 and ctx.re(z) <= 0 and ctx.isint(ctx.re(z)):
        raise PoleError("log-gamma has a pole at z = %s" % ctx.nstr(ctx.re(z), 15))
    return ctx.loggamma(z)


def theta_exact(t, cfg: PrecisionConfig | None = None):
    """Riemann-Siegel theta from the two conjugate log-gamma terms."""
    cfg = cfg or DEFAULT_CONFIG
    ctx = ctx_for(cfg)
    t = ctx.convert(t)
    quarter = ctx.mpf(1) / 4
    a = ln_gamma(ctx.mpc(quarter, t / 2), cfg)
    b = ln_gamma(ctx.mpc(quarter, -t / 2), cfg)
    val = ctx.mpc(0, -0.5) * (a - b) - t * ctx.log(ctx.pi) / 2
    if abs(ctx.im(val)) >= cfg.tol_residual:
        raise ConsistencyError("theta(%s) has imaginary part %s" % (t, ctx.im(val)))
    return ctx.re(val)


def theta_asymptotic(t, cfg: PrecisionConfig | None = None):
    """Leading Stirling form (t/2) log(t / 2 pi e) - pi/8."""
    ctx = ctx_for(cfg)
    t = ctx.convert(t)
    if t <= 0:
        raise DomainError("theta_asymptotic needs t > 0, got %s" % t)
    return t / 2 * ctx.log(t / (2 * ctx.pi * ctx.e)) - ctx.pi / 8


# ---------------------------------------------------------------- zeta backends


@lru_cache(maxsize=32)
def _borwein_weights(n: int):
    """Integer weights d_0..d_n for the accelerated alternating series.

    d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    """
    d = []
    acc = 0
    for i in range(n + 1):
        num = n * math.factorial(n + i - 1) * 4 ** i
        den = math.factorial(n - i) * math.factorial(2 * i)
        acc += num // den
        d.append(acc)
    return tuple(d)


def _alternating_terms(t: float, digits: int) -> int:
    # Error of the n-term sum on Re s = 1/2 is below
    # 3 (1 + 2|t|) e^{pi |t| / 2} / ((3 + sqrt 8)^n |1 - 2^{1-s}|), |1 - 2^{1-s}| >= sqrt2 - 1
    t = abs(t)
    log_budget = digits * math.log(10) + math.pi * t / 2 + math.log(3 * (1 + 2 * t) / (math.sqrt(2) - 1))
    return max(4, math.ceil(log_budget / math.log(3 + math.sqrt(8))))


@lru_cache(maxsize=64)
def _alternating_table(n: int, bits: int):
    """Signed, normalised weights (-1)^k (d_n - d_k) / (d_n sqrt(k+1)) and log(k+1)."""
    d = _borwein_weights(n)
    weights = []
    logs = []
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        dn = gmpy2.mpfr(d[n])
        for k in range(n):
            w = gmpy2.mpfr(d[n] - d[k]) / dn / gmpy2.sqrt(k + 1)
            weights.append(-w if k % 2 else w)
            logs.append(gmpy2.log(k + 1))
    return tuple(weights), tuple(logs)


def _zeta_alternating(t, cfg: PrecisionConfig):
    ctx = ctx_for(cfg)
    t = ctx.convert(t)
    if t < 0:
        return ctx.conj(_zeta_alternating(-t, cfg))
    target = cfg.working_digits + 5
    n = _alternating_terms(float(t), target)
    digits = target + int(math.log10(n)) + 5
    bits = int(digits * 3.33) + 8
    weights, logs = _alternating_table(n, bits)
    # the inner loop runs on MPFR numbers directly; mpmath's pure-Python
    # cos/sin would cost ~50x more per term
    man, exp = ctx.mpf(t).man_exp
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        gt = gmpy2.mul_2exp(gmpy2.mpfr(man), exp)
        re_sum = gmpy2.mpfr(0)
        im_sum = gmpy2.mpfr(0)
        for w, lk in zip(weights, logs):
            s, c = gmpy2.sin_cos(gt * lk)
            re_sum += w * c
            im_sum -= w * s
    # re_sum + i im_sum = sum_k (-1)^k (d_n - d_k) (k+1)^-s / d_n = eta(s) + truncation error
    wctx = mp_context(digits)
    eta = wctx.mpc(_from_mpfr(wctx, re_sum), _from_mpfr(wctx, im_sum))
    s = wctx.mpc(0.5, t)
    val = eta / (1 - wctx.power(2, 1 - s))
    return ctx.convert(val)


def _from_mpfr(ctx, x):
    man, exp = x.as_mantissa_exp()
    return ctx.ldexp(ctx.mpf(int(man)), int(exp))


def _z_riemann_siegel(t, cfg: PrecisionConfig):
    ctx = ctx_for(cfg)
    t = abs(ctx.convert(t))
    if t < 2 * ctx.pi:
        raise BackendRangeError("Riemann-Siegel backend needs |t| >= 2 pi, got %s" % ctx.nstr(t, 10))
    tau = ctx.sqrt(t / (2 * ctx.pi))
    n_main = int(ctx.floor(tau))
    p = tau - n_main
    th = theta_exact(t, cfg)
    main = 2 * ctx.fsum(ctx.cos(th - t * ctx.log(k)) / ctx.sqrt(k) for k in range(1, n_main + 1))
    corr = _rs_terms.remainder(float(p - 0.5), float(1 / tau))
    sign = 1 if n_main % 2 == 1 else -1
    return main + sign * ctx.convert(corr) / ctx.sqrt(tau)


def _resolve_backend(t, cfg: PrecisionConfig) -> ZetaBackend:
    backend = cfg.zeta_backend
    if backend is ZetaBackend.AUTO:
        return ZetaBackend.ALTERNATING_SERIES if abs(t) <= AUTO_SPLIT_HEIGHT else ZetaBackend.RIEMANN_SIEGEL
    return backend


def zeta_critical(t, cfg: PrecisionConfig | None = None):
    """zeta(1/2 + i t)."""
    cfg = cfg or DEFAULT_CONFIG
    ctx = ctx_for(cfg)
    t = ctx.convert(t)
    if _resolve_backend(t, cfg) is ZetaBackend.ALTERNATING_SERIES:
        return _zeta_alternating(t, cfg)
    z = _z_riemann_siegel(t, cfg)
    th = theta_exact(t, cfg)
    return z * ctx.expjpi(-th / ctx.pi)


def hardy_z(t, cfg: PrecisionConfig | None = None):
    """Hardy's Z(t) = e^{i theta(t)} zeta(1/2 + i t), real for real t."""
    cfg = cfg or DEFAULT_CONFIG
    ctx = ctx_for(cfg)
    t = ctx.convert(t)
    if _resolve_backend(t, cfg) is ZetaBackend.RIEMANN_SIEGEL:
        # the formula produces the real value directly
        return _z_riemann_siegel(t, cfg)
    val = ctx.expjpi(theta_exact(t, cfg) / ctx.pi) * _zeta_alternating(t, cfg)
    if abs(ctx.im(val)) >= cfg.tol_residual:
        raise ConsistencyError("Z(%s) has imaginary part %s" % (ctx.nstr(t, 15), ctx.nstr(ctx.im(val), 5)))
    return ctx.re(val)


def s_arg(t, cfg: PrecisionConfig | None = None):
    """S(t) = arg zeta(1/2 + i t) / pi, principal branch, in (-1, 1]."""
    cfg = cfg or DEFAULT_CONFIG
    ctx = ctx_for(cfg)
    z = zeta_critical(t, cfg)
    if abs(z) < cfg.tol_residual:
        raise IndeterminateError("S(t) is undefined at a zero of zeta (t = %s)" % ctx.nstr(ctx.convert(t), 15))
    return ctx.arg(z) / ctx.pi


def omega_bound(t, cfg: PrecisionConfig | None = None):
    """exp(3/4 sqrt(log t / log log t)) for t > e, and 1 for 0 < t <= e.

    Note the formula blows up as t -> e from above (log log t -> 0) and has
    its minimum at t = e^e; it is increasing only from there on.
    """
    ctx = ctx_for(cfg)
    t = ctx.convert(t)
    if t <= 0:
        raise DomainError("omega_bound needs t > 0, got %s" % t)
    if t <= ctx.e:
        return ctx.one
    lt = ctx.log(t)
    return ctx.exp(ctx.mpf(3) / 4 * ctx.sqrt(lt / ctx.log(lt)))


def z_derivative(t, order: int, cfg: PrecisionConfig | None = None):
    """Central-difference derivative of Z, order 1 or 2, step cfg.derivative_step."""
    cfg = cfg or DEFAULT_CONFIG
    ctx = ctx_for(cfg)
    t = ctx.convert(t)
    h = ctx.convert(cfg.derivative_step)
    if order == 1:
        return (hardy_z(t + h, cfg) - hardy_z(t - h, cfg)) / (2 * h)
    if order == 2:
        return (hardy_z(t + h, cfg) - 2 * hardy_z(t, cfg) + hardy_z(t - h, cfg)) / (h * h)
    raise ValueError("order must be 1 or 2, got %r" % (order,))
