"""Precision settings and per-thread mpmath contexts."""

from __future__ import annotations

import enum
import os
import threading
from dataclasses import dataclass, replace

import mpmath

DIGITS_ENV_VAR = "ZETAIFS_DIGITS"


class ZetaBackend(str, enum.Enum):
    # AUTO picks ALTERNATING_SERIES up to AUTO_SPLIT_HEIGHT and RIEMANN_SIEGEL above
    AUTO = "auto"
    ALTERNATING_SERIES = "alternating"
    RIEMANN_SIEGEL = "riemann-siegel"


AUTO_SPLIT_HEIGHT = 200
MIN_DIGITS = 15


@dataclass(frozen=True)
class PrecisionConfig:
    working_digits: int = 30
    tol_fixed_point: float = 1e-12
    tol_residual: float = 1e-9
    max_iterations: int = 10_000
    zeta_backend: ZetaBackend = ZetaBackend.AUTO
    derivative_step: float = 1e-6

    def __post_init__(self):
        # below double precision the tolerances and the float64 remainder
        # terms of the Riemann-Siegel backend stop making sense
        if self.working_digits < MIN_DIGITS:
            raise ValueError("working_digits must be at least %d" % MIN_DIGITS)
        if not self.tol_fixed_point > 0:
            raise ValueError("tol_fixed_point must be positive")
        if not self.tol_residual > 0:
            raise ValueError("tol_residual must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not self.derivative_step > 0:
            raise ValueError("derivative_step must be positive")
        object.__setattr__(self, "zeta_backend", ZetaBackend(self.zeta_backend))

    def with_backend(self, backend) -> "PrecisionConfig":
        return replace(self, zeta_backend=ZetaBackend(backend))

    @classmethod
    def from_env(cls, **overrides) -> "PrecisionConfig":
        """Default config, with working_digits taken from $ZETAIFS_DIGITS if set."""
        raw = os.environ.get(DIGITS_ENV_VAR)
        if raw and "working_digits" not in overrides:
            try:
                overrides["working_digits"] = int(raw)
            except ValueError:
                raise ValueError("%s must be an integer, got %r" % (DIGITS_ENV_VAR, raw))
        return cls(**overrides)


DEFAULT_CONFIG = PrecisionConfig()

_local = threading.local()


def mp_context(digits: int) -> mpmath.MPContext:
    """Private mpmath context for the calling thread at the given precision.

    The global ``mpmath.mp`` object is shared process-wide, so changing its
    precision from one thread would leak into another. Each thread gets its
    own context per precision instead.
    """
    cache = getattr(_local, "contexts", None)
    if cache is None:
        cache = _local.contexts = {}
    ctx = cache.get(digits)
    if ctx is None:
        ctx = mpmath.MPContext()
        ctx.dps = digits
        cache[digits] = ctx
    return ctx


def ctx_for(cfg: PrecisionConfig | None) -> mpmath.MPContext:
    return mp_context((cfg or DEFAULT_CONFIG).working_digits)
