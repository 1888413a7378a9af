"""Iteration maps whose fixed points are the zeros of Z, and their diagnostics.

For the n-th map

    Y(t) = t + h (-1)^n tanh( Z(t) / (Omega(t) prod_{k<n} tanh(t - y_k)) )

every zero of Z is a fixed point. The product pushes the iterate away from
the zeros already found, so starting at s_n the iteration settles on y_n.
The relaxation h starts at 1 and halves whenever two successive steps point
in opposite directions.
"""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass, field, replace

from .config import DEFAULT_CONFIG, PrecisionConfig, ctx_for
from .errors import (
    BracketNotFoundError,
    DomainError,
    IndeterminateError,
    MisconvergenceError,
    MissingPrerequisiteError,
    NonConvergenceError,
    ZetaIFSError,
)
from .special_fn import hardy_z, omega_bound, z_derivative
from .transcendental import exact_eq_values

__all__ = [
    "FixedPointKind",
    "FixedPointClass",
    "IterationState",
    "ZeroRecord",
    "BidirectionalLimits",
    "displacement",
    "map_value",
    "iterate_step",
    "h_update",
    "starting_point",
    "initial_state",
    "run_iteration",
    "find_zero",
    "compute_zeros",
    "classify_fixed_point",
    "map_multiplier",
    "newton_multiplier",
    "multiplicity",
    "lipschitz_bracket",
    "lipschitz_estimate",
    "bidirectional_limits",
]


class FixedPointKind(str, enum.Enum):
    ATTRACTIVE = "attractive"
    REPELLING = "repelling"
    INDIFFERENT = "indifferent"
    SUPERATTRACTIVE = "superattractive"


@dataclass(frozen=True)
class FixedPointClass:
    multiplier: object
    kind: FixedPointKind


@dataclass(frozen=True)
class IterationState:
    n: int
    m: int
    t_current: object
    h: float = 1.0
    delta_prev: object = None
    delta_prev2: object = None
    known_zeros: tuple = ()
    relax: bool = True
    direction: int = 1  # +1 runs Y+, -1 runs Y- (step with the opposite sign)

    def __post_init__(self):
        if not 0 < self.h <= 1:
            raise ValueError("h must lie in (0, 1], got %r" % (self.h,))
        if self.m < 0:
            raise ValueError("m must be nonnegative")
        if self.direction not in (1, -1):
            raise ValueError("direction must be +1 or -1")
        zs = tuple(self.known_zeros)
        if any(b <= a for a, b in zip(zs, zs[1:])):
            raise ValueError("known_zeros must be strictly increasing")
        object.__setattr__(self, "known_zeros", zs)


@dataclass(frozen=True)
class ZeroRecord:
    n: int
    y: object
    iterations: int
    final_h: float
    z_residual: object
    exact_eq_bracket: tuple = (None, None)
    multiplier: object = None
    classification: FixedPointKind | None = None
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def bracket_ok(self) -> bool | None:
        lo, hi = self.exact_eq_bracket
        if lo is None or hi is None:
            return None
        target = (self.n - 1.5) * math.pi
        return float(lo) <= target <= float(hi)


@dataclass(frozen=True)
class BidirectionalLimits:
    plus: object
    minus: object
    plus_error: ZetaIFSError | None = None
    minus_error: ZetaIFSError | None = None

    @property
    def z(self):
        """min of the limits that exist (None if neither branch converged)."""
        vals = [v for v in (self.plus, self.minus) if v is not None]
        return min(vals) if vals else None

    def as_pair(self):
        return self.plus, self.minus


# ------------------------------------------------------------------ the map


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def _product_tanh(t, zeros, ctx):
    """prod tanh(t - y_k), or None if t hits some y_k exactly.

    Factors with |t - y_k| beyond ``cut`` equal +-1 to working precision and
    are not evaluated; with ~1000 known zeros this is the difference between
    a few dozen tanh calls and a thousand.
    """
    cut = (ctx.dps + 5) * math.log(10) / 2 + 1
    tf = float(t)
    lo = bisect.bisect_left(zeros, tf - cut)
    hi = bisect.bisect_right(zeros, tf + cut)
    prod = ctx.one
    for y in zeros[lo:hi]:
        d = t - y
        if d == 0:
            return None
        prod *= ctx.tanh(d)
    if (len(zeros) - hi) % 2:
        prod = -prod
    return prod


def displacement(n: int, t, known_zeros, cfg: PrecisionConfig | None = None):
    """Unrelaxed step (-1)^n tanh(Z / (Omega prod tanh(t - y_k))), k < n.

    At t equal to some y_k the argument of tanh is infinite and the step is
    taken as (-1)^n, the limiting value used for the indifferent fixed points.
    """
    cfg = cfg or DEFAULT_CONFIG
    ctx = ctx_for(cfg)
    t = ctx.convert(t)
    zeros = tuple(known_zeros[: n - 1])
    prod = _product_tanh(t, zeros, ctx)
    if prod is None:
        return ctx.mpf(_sign(n))
    arg = hardy_z(t, cfg) / (abs(omega_bound(t, cfg)) * prod)
    return _sign(n) * ctx.tanh(arg)


def map_value(n: int, t, known_zeros, cfg: PrecisionConfig | None = None, h: float = 1.0):
    """Y_{n,1}(t) with a fixed relaxation h."""
    ctx = ctx_for(cfg)
    t = ctx.convert(t)
    return t + h * displacement(n, t, known_zeros, cfg)


def h_update(delta_prev2, delta_prev, h: float) -> float:
    """Halve h when the last two steps have opposite signs."""
    if not 0 < h <= 1:
        raise ValueError("h must lie in (0, 1]")
    if delta_prev2 is None or delta_prev is None:
        return h
    if delta_prev2 == 0 or delta_prev == 0:
        return h
    if (delta_prev2 > 0) != (delta_prev > 0):
        return h / 2
    return h


def iterate_step(state: IterationState, cfg: PrecisionConfig | None = None) -> IterationState:
    cfg = cfg or DEFAULT_CONFIG
    ctx = ctx_for(cfg)
    t = ctx.convert(state.t_current)
    if t <= ctx.e:
        raise DomainError("iterate left the domain t > e (t = %s)" % ctx.nstr(t, 12))
    m = state.m + 1
    h = state.h
    if state.relax and m > 2:
        h = h_update(state.delta_prev2, state.delta_prev, h)
    step = state.direction * h * displacement(state.n, t, state.known_zeros, cfg)
    return replace(state, m=m, t_current=t + step, h=h, delta_prev=step, delta_prev2=state.delta_prev)


def starting_point(n: int, known_zeros) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return 14.0
    if n == 2:
        return 21.0
    if len(known_zeros) < n - 1:
        raise MissingPrerequisiteError("s_%d needs y_%d and y_%d; only %d zeros known" % (n, n - 2, n - 1, len(known_zeros)))
    return (known_zeros[n - 2] + known_zeros[n - 3]) / 2


def _prior_zeros(n: int, known_zeros) -> tuple:
    if len(known_zeros) < n - 1:
        raise MissingPrerequisiteError("zero %d needs y_1..y_%d; only %d known" % (n, n - 1, len(known_zeros)))
    return tuple(known_zeros[: n - 1])


def initial_state(n: int, known_zeros, t0=None, relax: bool = True, direction: int = 1) -> IterationState:
    prior = _prior_zeros(n, known_zeros)
    if t0 is None:
        t0 = starting_point(n, known_zeros)
    return IterationState(n=n, m=0, t_current=t0, known_zeros=prior, relax=relax, direction=direction)


def run_iteration(state: IterationState, cfg: PrecisionConfig | None = None, trace=None) -> IterationState:
    """Iterate until the unrelaxed step |dY| / h drops below tol_fixed_point.

    The stop test divides by h so that a heavily relaxed iteration is not
    mistaken for a converged one: what has to be small is the step the map
    itself proposes.
    """
    cfg = cfg or DEFAULT_CONFIG
    while True:
        state = iterate_step(state, cfg)
        if trace is not None:
            trace.append(state)
        if abs(state.delta_prev) < cfg.tol_fixed_point * state.h:
            return state
        if state.m >= cfg.max_iterations:
            raise NonConvergenceError(
                "n=%d: no convergence after %d iterations (t=%s, h=%g)"
                % (state.n, state.m, float(state.t_current), state.h),
                n=state.n,
                iterations=state.m,
                t_last=state.t_current,
            )


def _check_first_zero_above(n: int, y, prior, cfg: PrecisionConfig, scan_step: float):
    """Reject y unless it is the first sign change of Z above y_{n-1}."""
    ctx = ctx_for(cfg)
    lower = prior[-1] if prior else 0.0
    if not y > lower:
        raise MisconvergenceError("n=%d: y=%s does not exceed y_%d=%s" % (n, float(y), n - 1, float(lower)), n=n, t_last=y)
    span = float(y - lower)
    delta = min(1e-4, span / 10)
    expected = _sign(n)  # sign of Z on (y_{n-1}, y_n)
    count = max(2, math.ceil(span / scan_step))
    a = ctx.convert(lower) + delta
    b = ctx.convert(y) - delta
    for i in range(count + 1):
        u = a + (b - a) * i / count
        z = hardy_z(u, cfg)
        if z * expected < 0:
            raise MisconvergenceError(
                "n=%d: Z changes sign at t~%s, between y_%d and the converged y=%s" % (n, float(u), n - 1, float(y)),
                n=n,
                t_last=y,
            )


def find_zero(
    n: int,
    known_zeros,
    cfg: PrecisionConfig | None = None,
    relax: bool = True,
    scan_step: float = 0.05,
    diagnostics: bool = True,
) -> ZeroRecord:
    """Run the n-th map from s_n and return the verified zero."""
    cfg = cfg or DEFAULT_CONFIG
    ctx = ctx_for(cfg)
    state = initial_state(n, known_zeros, relax=relax)
    prior = state.known_zeros
    final = run_iteration(state, cfg)
    y = final.t_current
    residual = abs(hardy_z(y, cfg))
    if residual >= cfg.tol_residual:
        raise MisconvergenceError("n=%d: |Z(y)| = %s at y=%s" % (n, ctx.nstr(residual, 3), float(y)), n=n, t_last=y)
    _check_first_zero_above(n, y, prior, cfg, scan_step)
    bracket = (None, None)
    lam = None
    kind = None
    if diagnostics:
        gap = float(y - prior[-1]) if prior else 1.0
        br = exact_eq_values(n, y, 1e-4 * gap, cfg)
        bracket = (br.lower, br.upper)
        fp = classify_fixed_point(n, y, prior, cfg)
        lam, kind = fp.multiplier, fp.kind
    return ZeroRecord(
        n=n,
        y=y,
        iterations=final.m,
        final_h=final.h,
        z_residual=residual,
        exact_eq_bracket=bracket,
        multiplier=lam,
        classification=kind,
    )


def compute_zeros(n_end: int, known_zeros=(), cfg: PrecisionConfig | None = None, **kwargs):
    """Yield ZeroRecords for n = len(known_zeros)+1 .. n_end, in order."""
    zeros = list(known_zeros)
    for n in range(len(zeros) + 1, n_end + 1):
        rec = find_zero(n, zeros, cfg, **kwargs)
        zeros.append(rec.y)
        yield rec


# ------------------------------------------------------------ fixed points


def map_multiplier(n: int, t, known_zeros, cfg: PrecisionConfig | None = None):
    """d/dt Y_{n,1}(t) with h = 1, by central differences."""
    cfg = cfg or DEFAULT_CONFIG
    ctx = ctx_for(cfg)
    t = ctx.convert(t)
    d = ctx.convert(cfg.derivative_step)
    up = displacement(n, t + d, known_zeros, cfg)
    down = displacement(n, t - d, known_zeros, cfg)
    return 1 + (up - down) / (2 * d)


def classify_fixed_point(n: int, t, known_zeros, cfg: PrecisionConfig | None = None) -> FixedPointClass:
    cfg = cfg or DEFAULT_CONFIG
    ctx = ctx_for(cfg)
    if ctx.convert(t) <= ctx.e:
        raise DomainError("classify_fixed_point needs t > e")
    lam = map_multiplier(n, t, known_zeros, cfg)
    tol = cfg.tol_residual
    a = abs(lam)
    if a < tol:
        kind = FixedPointKind.SUPERATTRACTIVE
    elif abs(a - 1) <= tol:
        kind = FixedPointKind.INDIFFERENT
    elif a < 1:
        kind = FixedPointKind.ATTRACTIVE
    else:
        kind = FixedPointKind.REPELLING
    return FixedPointClass(lam, kind)


def newton_multiplier(t, cfg: PrecisionConfig | None = None):
    """Derivative of the Newton map t - Z/Z', i.e. Z Z'' / Z'^2."""
    cfg = cfg or DEFAULT_CONFIG
    ctx = ctx_for(cfg)
    d1 = z_derivative(t, 1, cfg)
    if abs(d1) < cfg.tol_residual:
        raise IndeterminateError("Z'(t) vanishes at t = %s" % ctx.nstr(ctx.convert(t), 15))
    return hardy_z(t, cfg) * z_derivative(t, 2, cfg) / (d1 * d1)


def multiplicity(t, cfg: PrecisionConfig | None = None):
    cfg = cfg or DEFAULT_CONFIG
    lam = newton_multiplier(t, cfg)
    if abs(1 - lam) < cfg.tol_residual:
        raise IndeterminateError("Newton multiplier equals 1; multiplicity undefined")
    return 1 / (1 - lam)


# --------------------------------------------------------- Lipschitz probe


def _refine(pred, good, bad, tol: float):
    """Bisect between a point where pred holds and one where it fails."""
    while abs(bad - good) > tol:
        mid = (good + bad) / 2
        if pred(mid):
            good = mid
        else:
            bad = mid
    return good


def lipschitz_bracket(n: int, known_zeros, cfg: PrecisionConfig | None = None, resolution: float = 1e-3):
    """End points (a, b) used by lipschitz_estimate.

    a = max{t in [0, y_n] : Y_{n+1,1}(t) >= t} and b = min{t >= y_n :
    Y_{n+1,1}(t) <= t}, found by scanning with step ``resolution`` times the
    local zero gap and refining by bisection to 1e-9. The search stays
    inside [y_{n-1}, y_{n+2}] (or y_n + 4 gaps when y_{n+2} is unknown).
    """
    cfg = cfg or DEFAULT_CONFIG
    ctx = ctx_for(cfg)
    if len(known_zeros) < n:
        raise MissingPrerequisiteError("lipschitz_estimate(%d) needs y_1..y_%d" % (n, n))
    zs = list(known_zeros)
    yn = ctx.convert(zs[n - 1])
    gap_lo = float(yn - zs[n - 2]) if n >= 2 else float(yn)
    gap_hi = float(zs[n] - yn) if len(zs) > n else gap_lo
    lower = ctx.convert(zs[n - 2]) if n >= 2 else ctx.mpf(1)
    upper = ctx.convert(zs[n + 1]) if len(zs) > n + 1 else yn + 4 * gap_hi
    prior = zs[:n]

    def step(u):
        return displacement(n + 1, u, prior, cfg)

    tol = 1e-9
    # a: walk down from y_n until Y(t) >= t holds
    da = resolution * gap_lo
    a = None
    prev = None
    u = yn
    while u >= lower:
        if step(u) >= 0:
            a = u if prev is None else _refine(lambda v: step(v) >= 0, u, prev, tol)
            break
        prev = u
        u = u - da
    if a is None:
        raise BracketNotFoundError("no t in [y_%d, y_%d] with Y_%d(t) >= t" % (n - 1, n, n + 1))
    # b: walk up from y_n until Y(t) <= t holds
    db = resolution * gap_hi
    b = None
    prev = None
    u = yn
    while u <= upper:
        if step(u) <= 0:
            b = u if prev is None else _refine(lambda v: step(v) <= 0, u, prev, tol)
            break
        prev = u
        u = u + db
    if b is None:
        raise BracketNotFoundError("no t in [y_%d, y_%d] with Y_%d(t) <= t" % (n, n + 2, n + 1))
    return a, b


def lipschitz_estimate(n: int, epsilon: float, known_zeros, cfg: PrecisionConfig | None = None, resolution: float = 1e-3):
    """c_n(eps) = (Z(a + eps) - Z(b - eps)) / (2 eps + a - b), a and b from lipschitz_bracket."""
    cfg = cfg or DEFAULT_CONFIG
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    a, b = lipschitz_bracket(n, known_zeros, cfg, resolution)
    return (hardy_z(a + epsilon, cfg) - hardy_z(b - epsilon, cfg)) / (2 * epsilon + a - b)


def bidirectional_limits(n: int, t, known_zeros, cfg: PrecisionConfig | None = None) -> BidirectionalLimits:
    """Limits of Y+ (the usual map) and Y- (step negated) started from t."""
    cfg = cfg or DEFAULT_CONFIG
    out = {}
    for name, direction in (("plus", 1), ("minus", -1)):
        state = initial_state(n, known_zeros, t0=t, direction=direction)
        try:
            out[name] = run_iteration(state, cfg).t_current
            out[name + "_error"] = None
        except (NonConvergenceError, DomainError) as exc:
            out[name] = None
            out[name + "_error"] = exc
    return BidirectionalLimits(**out)
