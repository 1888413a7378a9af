"""Exact and asymptotic equations for the n-th zero and the smooth zero count."""

from __future__ import annotations

from dataclasses import dataclass

from .config import DEFAULT_CONFIG, PrecisionConfig, ctx_for
from .errors import BracketViolationError, DomainError
from .special_fn import s_arg, theta_asymptotic, theta_exact

__all__ = [
    "ExactEqBracket",
    "exact_eq_values",
    "exact_residual_bracket",
    "asymptotic_solve",
    "count_zeros_N0",
    "n_shift_check",
    "smooth_count",
]


@dataclass(frozen=True)
class ExactEqBracket:
    """F = theta + pi S on either side of a zero, and the value it must straddle."""

    n: int
    lower: object
    upper: object
    target: object
    epsilon: float

    @property
    def ok(self) -> bool:
        return self.lower <= self.target <= self.upper


def _f_value(t, cfg):
    ctx = ctx_for(cfg)
    return theta_exact(t, cfg) + ctx.pi * s_arg(t, cfg)


def exact_eq_values(n: int, y, epsilon: float, cfg: PrecisionConfig | None = None) -> ExactEqBracket:
    """Evaluate the bracket without judging it."""
    cfg = cfg or DEFAULT_CONFIG
    ctx = ctx_for(cfg)
    y = ctx.convert(y)
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    target = (n - ctx.mpf(3) / 2) * ctx.pi
    return ExactEqBracket(n, _f_value(y - epsilon, cfg), _f_value(y + epsilon, cfg), target, epsilon)


def exact_residual_bracket(n: int, y, epsilon: float, cfg: PrecisionConfig | None = None) -> ExactEqBracket:
    """Check that (n - 3/2) pi lies in [F(y - eps), F(y + eps)].

    S jumps by one at a simple zero, so F steps from (n-2) pi to (n-1) pi
    across y_n and the target sits halfway. A failure means y is not the
    n-th zero (or eps reaches another zero).
    """
    br = exact_eq_values(n, y, epsilon, cfg)
    if not br.ok:
        ctx = ctx_for(cfg)
        raise BracketViolationError(
            "target (n-3/2)pi = %s not in [%s, %s] for n=%d at y=%s"
            % (ctx.nstr(br.target, 10), ctx.nstr(br.lower, 10), ctx.nstr(br.upper, 10), n, ctx.nstr(ctx.convert(y), 15))
        )
    return br


def smooth_count(t, cfg: PrecisionConfig | None = None):
    """(t / 2pi) log(t / 2pi e), the smooth part shared by the counting formulas."""
    ctx = ctx_for(cfg)
    t = ctx.convert(t)
    return t / (2 * ctx.pi) * ctx.log(t / (2 * ctx.pi * ctx.e))


def asymptotic_solve(n: int, cfg: PrecisionConfig | None = None):
    """Root of (t / 2pi) log(t / 2pi e) = n - 11/8 with S dropped.

    The left side increases from -1 at t = 2pi, so the root is unique and a
    plain bisection on [2pi, upper] finds it.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    cfg = cfg or DEFAULT_CONFIG
    ctx = ctx_for(cfg)
    rhs = n - ctx.mpf(11) / 8
    lo = 2 * ctx.pi
    hi = lo * 2
    while smooth_count(hi, cfg) < rhs:
        hi *= 2
    tol = ctx.mpf(10) ** (-(cfg.working_digits - 5))
    while hi - lo > tol * hi:
        mid = (lo + hi) / 2
        if smooth_count(mid, cfg) < rhs:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def count_zeros_N0(t, cfg: PrecisionConfig | None = None):
    """(t / 2pi) log(t / 2pi e) + 7/8 + S(t); rounds to the number of zeros in (0, t)."""
    cfg = cfg or DEFAULT_CONFIG
    ctx = ctx_for(cfg)
    t = ctx.convert(t)
    if t <= 2 * ctx.pi:
        raise DomainError("count_zeros_N0 needs t > 2 pi, got %s" % ctx.nstr(t, 10))
    # s_arg raises IndeterminateError at a zero
    return smooth_count(t, cfg) + ctx.mpf(7) / 8 + s_arg(t, cfg)


def n_shift_check(t, cfg: PrecisionConfig | None = None, zeros=None):
    """Index formula after the n -> n - 2 shift: theta~/pi + 1/8 - 5/8 + S + 2.

    This equals count_zeros_N0(t) + 1/2 identically. At a zero y_n (taking
    S halfway through its jump) it equals n; between y_k and y_(k+1) it
    sits just below k + 1/2.

    If ``zeros`` (ascending ordinates) is given, also check the value lies
    within 0.75 of the index of the first zero above t.
    """
    cfg = cfg or DEFAULT_CONFIG
    ctx = ctx_for(cfg)
    t = ctx.convert(t)
    val = theta_asymptotic(t, cfg) / ctx.pi + ctx.mpf(1) / 8 - ctx.mpf(5) / 8 + s_arg(t, cfg) + 2
    if zeros is not None:
        above = [k for k, y in enumerate(zeros, start=1) if y > t]
        if not above:
            raise DomainError("no zero above t = %s in the supplied list" % ctx.nstr(t, 10))
        k = above[0]
        if abs(val - k) > 0.75:
            raise BracketViolationError("shifted index %s is not within 0.75 of %d" % (ctx.nstr(val, 8), k))
    return val


def local_gap(zeros, n: int) -> float:
    """Distance from y_n to its nearest known neighbour (1-based n)."""
    y = zeros[n - 1]
    gaps = []
    if n >= 2:
        gaps.append(y - zeros[n - 2])
    if n < len(zeros):
        gaps.append(zeros[n] - y)
    return float(min(gaps)) if gaps else 1.0
