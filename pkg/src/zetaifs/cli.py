"""Command-line front end.

Exit codes: 0 ok, 1 usage, 2 convergence failure, 3 verification failure, 4 I/O.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import math
import sys
from dataclasses import dataclass, field

from .config import DIGITS_ENV_VAR, PrecisionConfig, ZetaBackend, ctx_for
from .dynamics import (
    FixedPointKind,
    classify_fixed_point,
    displacement,
    find_zero,
    lipschitz_bracket,
    map_multiplier,
    multiplicity,
)
from .errors import (
    DomainError,
    IndeterminateError,
    MisconvergenceError,
    MissingPrerequisiteError,
    NonConvergenceError,
    TableParseError,
    ZetaIFSError,
)
from .reference_data import ZeroStore, bundled_reference_table, compare, load_reference_table, write_report_csv
from .special_fn import hardy_z, omega_bound, s_arg, theta_asymptotic, theta_exact
from .transcendental import count_zeros_N0, exact_eq_values, local_gap, n_shift_check

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONVERGENCE = 2
EXIT_VERIFY = 3
EXIT_IO = 4

COMMANDS = ("zeros", "verify", "classify", "residuals", "lipschitz", "eval")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    n_start: int = 1
    n_end: int = 1
    precision: PrecisionConfig = field(default_factory=PrecisionConfig)
    store: str | None = None
    reference: str | None = None
    output: str | None = None
    emit_format: str = "csv"
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError("unknown command %r" % self.command)
        if self.n_start < 1 or self.n_end < 1:
            raise UsageError("zero indices start at 1")
        if self.n_start > self.n_end:
            raise UsageError("--n-start (%d) exceeds --n-end (%d)" % (self.n_start, self.n_end))
        if self.emit_format not in ("csv", "json"):
            raise UsageError("--format must be csv or json")


# ------------------------------------------------------------------ helpers


def _num(v):
    if v is None:
        return None
    if isinstance(v, (bool, int, str)):
        return v
    f = float(v)
    return f if math.isfinite(f) else None


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


@contextlib.contextmanager
def _open_output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _emit_rows(rows, header, rc: RunConfig, extra=None):
    with _open_output(rc.output) as fh:
        if rc.emit_format == "json":
            doc = {"rows": [{k: _num(r.get(k)) if not isinstance(r.get(k), str) else r.get(k) for k in header} for r in rows]}
            if extra:
                doc.update(extra)
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        else:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for r in rows:
                w.writerow([_cell(_num(r.get(k)) if not isinstance(r.get(k), str) else r.get(k)) for k in header])


def _store(rc: RunConfig) -> ZeroStore:
    if not rc.store:
        raise UsageError("--store is required for %s" % rc.command)
    store = ZeroStore(rc.store, digits=rc.precision.working_digits)
    if rc.options.pop("n_end_from_store", False):
        if not store.exists():
            raise FileNotFoundError("zero store %s does not exist" % store.path)
        # lipschitz needs one zero beyond n_end
        have = len(store.load()) - (1 if rc.command == "lipschitz" else 0)
        rc.n_end = max(rc.n_start, have)
    return store


def _log(msg):
    print(msg, file=sys.stderr, flush=True)


# ----------------------------------------------------------------- commands


def cmd_zeros(rc: RunConfig) -> int:
    """Compute zeros n_start..n_end, appending them to the store.

    Zeros already in the store are kept, so re-running with a larger
    --n-end picks up where the last run stopped.
    """
    store = _store(rc)
    records = store.load()
    have = len(records)
    if rc.n_start > have + 1:
        raise MissingPrerequisiteError(
            "zero %d needs y_1..y_%d but the store %s holds %d" % (rc.n_start, rc.n_start - 1, store.path, have)
        )
    zeros = [r.y for r in records]
    relax = not rc.options.get("no_relax", False)
    quiet = rc.options.get("quiet", False)
    for n in range(have + 1, rc.n_end + 1):
        rec = find_zero(n, zeros, rc.precision, relax=relax)
        store.append(rec)
        zeros.append(rec.y)
        if not quiet:
            _log("n=%d y=%s iterations=%d h=%g |Z|=%.1e" % (n, ctx_for(rc.precision).nstr(rec.y, 15), rec.iterations, rec.final_h, float(rec.z_residual)))
    if have >= rc.n_end and not quiet:
        _log("store already holds %d zeros; nothing to do" % have)
    return EXIT_OK


def _reference(rc: RunConfig):
    if rc.reference:
        return load_reference_table(rc.reference)
    return bundled_reference_table()


def cmd_verify(rc: RunConfig) -> int:
    store = _store(rc)
    if not store.exists():
        raise FileNotFoundError("zero store %s does not exist" % store.path)
    ref = _reference(rc)
    recs = [r for r in store.load() if rc.n_start <= r.n <= rc.n_end]
    report = compare(recs, ref, rc.precision.tol_fixed_point)
    with _open_output(rc.output) as fh:
        if rc.emit_format == "json":
            json.dump(report.to_dict(), fh, indent=1)
            fh.write("\n")
        else:
            write_report_csv(report, fh)
    for note in report.notes:
        _log(note)
    _log(
        "compared %d zeros: max error %s, %d failures"
        % (len(report.per_zero), "n/a" if report.max_error is None else "%.3e" % report.max_error, len(report.failures))
    )
    return EXIT_OK if report.ok else EXIT_VERIFY


def expected_kind(n: int, j: int) -> FixedPointKind:
    """Fixed-point type of y_j for the n-th map predicted by the parity rule."""
    if j < n:
        return FixedPointKind.INDIFFERENT
    return FixedPointKind.ATTRACTIVE if (j - n) % 2 == 0 else FixedPointKind.REPELLING


def classification_ok(n: int, j: int, lam, indifference_tol: float) -> bool:
    a = abs(float(lam))
    exp = expected_kind(n, j)
    if exp is FixedPointKind.INDIFFERENT:
        return abs(a - 1) < indifference_tol
    if exp is FixedPointKind.ATTRACTIVE:
        return a < 1
    return a > 1


def cmd_classify(rc: RunConfig) -> int:
    store = _store(rc)
    j_start = rc.options.get("j_start") or 1
    j_end = rc.options.get("j_end") or rc.n_end
    tol = rc.options.get("indifference_tol", 1e-3)
    rows = []
    if j_start <= j_end:
        zeros = [r.y for r in store.require(max(j_end, rc.n_end))]
        for n in range(rc.n_start, rc.n_end + 1):
            for j in range(j_start, j_end + 1):
                fp = classify_fixed_point(n, zeros[j - 1], zeros, rc.precision)
                ok = classification_ok(n, j, fp.multiplier, tol)
                rows.append(
                    {
                        "n": n,
                        "j": j,
                        "y_j": zeros[j - 1],
                        "multiplier": fp.multiplier,
                        "class": fp.kind.value,
                        "expected": expected_kind(n, j).value,
                        "ok": ok,
                    }
                )
    _emit_rows(rows, ["n", "j", "y_j", "multiplier", "class", "expected", "ok"], rc)
    bad = [r for r in rows if not r["ok"]]
    if bad:
        _log("%d of %d (n, j) pairs break the parity/indifference rule" % (len(bad), len(rows)))
    return EXIT_VERIFY if bad else EXIT_OK


def cmd_residuals(rc: RunConfig) -> int:
    """Exact-equation bracket, |Z|, multiplicity and counting checks per zero."""
    cfg = rc.precision
    recs = _store(rc).require(rc.n_end)
    zeros = [r.y for r in recs]
    rows = []
    failed = 0
    for n in range(rc.n_start, rc.n_end + 1):
        y = zeros[n - 1]
        br = exact_eq_values(n, y, 1e-4 * local_gap(zeros, n), cfg)
        mult = multiplicity(y, cfg)
        row = {
            "n": n,
            "y": y,
            "z_residual": abs(hardy_z(y, cfg)),
            "f_lower": br.lower,
            "f_upper": br.upper,
            "target": br.target,
            "bracket_ok": br.ok,
            "multiplicity": mult,
            "simple": abs(float(mult) - 1) <= 1e-6,
        }
        if n < len(zeros):
            mid = (y + zeros[n]) / 2
            n0 = count_zeros_N0(mid, cfg)
            row["N0_mid"] = n0
            row["count_ok"] = round(float(n0)) == n
            row["n_shift_mid"] = n_shift_check(mid, cfg)
        ok = row["bracket_ok"] and row["simple"] and row.get("count_ok", True) and row["z_residual"] < cfg.tol_residual
        row["ok"] = bool(ok)
        failed += not ok
        rows.append(row)
    header = ["n", "y", "z_residual", "f_lower", "f_upper", "target", "bracket_ok", "multiplicity", "simple", "N0_mid", "count_ok", "n_shift_mid", "ok"]
    _emit_rows(rows, header, rc)
    if failed:
        _log("%d of %d zeros failed a residual check" % (failed, len(rows)))
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_lipschitz(rc: RunConfig) -> int:
    """c_n(eps) for each n. Values outside (0, 1) are logged, not fatal, unless --strict."""
    cfg = rc.precision
    eps = rc.options.get("epsilon", 1e-3)
    zeros = [r.y for r in _store(rc).require(rc.n_end + 1)]
    rows = []
    outside = []
    for n in range(rc.n_start, rc.n_end + 1):
        a, b = lipschitz_bracket(n, zeros, cfg)
        c = (hardy_z(a + eps, cfg) - hardy_z(b - eps, cfg)) / (2 * eps + a - b)
        inside = 0 < c < 1
        if not inside:
            outside.append(n)
        rows.append({"n": n, "epsilon": eps, "a": a, "b": b, "c": c, "in_unit_interval": inside})
    _emit_rows(rows, ["n", "epsilon", "a", "b", "c", "in_unit_interval"], rc)
    if outside:
        _log("c_n(%g) outside (0, 1) for n = %s" % (eps, ", ".join(map(str, outside))))
    return EXIT_VERIFY if outside and rc.options.get("strict") else EXIT_OK


def _safe(fn, *args):
    try:
        return fn(*args)
    except (DomainError, IndeterminateError):
        return None


def eval_point(t, cfg: PrecisionConfig) -> dict:
    ctx = ctx_for(cfg)
    t = ctx.convert(t)
    return {
        "t": t,
        "Z": hardy_z(t, cfg),
        "theta": theta_exact(t, cfg),
        "theta_tilde": _safe(theta_asymptotic, t, cfg),
        "S": _safe(s_arg, t, cfg),
        "Omega": _safe(omega_bound, t, cfg),
        "N0": _safe(count_zeros_N0, t, cfg),
    }


POINT_COLUMNS = ["t", "Z", "theta", "theta_tilde", "S", "Omega", "N0"]
FIGURE_COLUMNS = [
    "ee_theta_n1",
    "ee_theta_n2",
    "ee_theta_tilde_n1",
    "ee_theta_tilde_n2",
    "tanh_n1",
    "tanh_n2",
    "tanh_n3",
    "tanh_n4",
    "multiplier_n1",
    "multiplier_n3",
]


def _parse_grid(spec: str):
    try:
        a, b, step = (float(x) for x in spec.split(":"))
    except ValueError:
        raise UsageError("--grid expects a:b:step, got %r" % spec)
    if not step > 0 or b < a:
        raise UsageError("--grid needs a <= b and step > 0")
    count = int(math.floor((b - a) / step + 1e-9))
    return [a + i * step for i in range(count + 1)]


def figure_row(t, zeros, cfg: PrecisionConfig) -> dict:
    """Grid values behind the three figures: exact-equation residual curves,
    the tanh terms of the first four maps, multipliers of Y_1 and Y_3."""
    ctx = ctx_for(cfg)
    row = eval_point(t, cfg)
    s = row["S"]
    for n in (1, 2):
        target = (n - ctx.mpf(3) / 2) * ctx.pi
        row["ee_theta_n%d" % n] = None if s is None else row["theta"] + ctx.pi * s - target
        row["ee_theta_tilde_n%d" % n] = None if s is None or row["theta_tilde"] is None else row["theta_tilde"] + ctx.pi * s - target
    for n in (1, 2, 3, 4):
        # drop the (-1)^n factor: the figure shows the term before the sign
        d = _safe(displacement, n, t, zeros, cfg)
        row["tanh_n%d" % n] = None if d is None else (-d if n % 2 else d)
    for n in (1, 3):
        row["multiplier_n%d" % n] = _safe(map_multiplier, n, t, zeros, cfg)
    return row


def cmd_eval(rc: RunConfig) -> int:
    cfg = rc.precision
    grid = rc.options.get("grid")
    if grid is None:
        t = rc.options.get("t")
        if t is None:
            raise UsageError("eval needs --t or --grid")
        row = eval_point(t, cfg)
        if rc.emit_format == "json":
            _emit_rows([row], POINT_COLUMNS, rc)
        else:
            with _open_output(rc.output) as fh:
                for k in POINT_COLUMNS:
                    fh.write("%s=%s\n" % (k, _cell(_num(row[k]))))
        return EXIT_OK
    ts = _parse_grid(grid)
    if rc.store:
        zeros = [r.y for r in _store(rc).require(3)]
    else:
        zeros = []
        for n in (1, 2, 3):
            zeros.append(find_zero(n, zeros, cfg, diagnostics=False).y)
    rows = [figure_row(t, zeros, cfg) for t in ts]
    _emit_rows(rows, POINT_COLUMNS + FIGURE_COLUMNS, rc)
    return EXIT_OK


HANDLERS = {
    "zeros": cmd_zeros,
    "verify": cmd_verify,
    "classify": cmd_classify,
    "residuals": cmd_residuals,
    "lipschitz": cmd_lipschitz,
    "eval": cmd_eval,
}


# ------------------------------------------------------------------ parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("precision")
    g.add_argument("--digits", type=int, help="working decimal digits (default $%s or 30)" % DIGITS_ENV_VAR)
    g.add_argument("--tol-fixed-point", type=float)
    g.add_argument("--tol-residual", type=float)
    g.add_argument("--max-iterations", type=int)
    g.add_argument("--backend", choices=[b.value for b in ZetaBackend])
    g.add_argument("--derivative-step", type=float)
    io_ = common.add_argument_group("files")
    io_.add_argument("--store", help="JSON-lines zero store")
    io_.add_argument("--output", "-o", help="output file (default stdout)")
    io_.add_argument("--format", dest="emit_format", choices=["csv", "json"], default="csv")

    rng = _Parser(add_help=False)
    rng.add_argument("--n-start", type=int, default=1)
    rng.add_argument("--n-end", type=int)

    p = _Parser(prog="zetaifs", description="Zeros of Hardy's Z function by fixed-point iteration.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    z = sub.add_parser("zeros", parents=[common, rng], help="compute zeros and append them to the store")
    z.add_argument("--no-relax", action="store_true", help="keep h = 1 (disable halving)")
    z.add_argument("--quiet", action="store_true")

    v = sub.add_parser("verify", parents=[common, rng], help="compare the store against a reference table")
    v.add_argument("--reference", help="zero table (default: bundled 1000-zero table)")

    c = sub.add_parser("classify", parents=[common, rng], help="multipliers of map n at zero j")
    c.add_argument("--j-start", type=int)
    c.add_argument("--j-end", type=int)
    c.add_argument("--indifference-tol", type=float, default=1e-3)

    sub.add_parser("residuals", parents=[common, rng], help="exact-equation and counting checks")

    lp = sub.add_parser("lipschitz", parents=[common, rng], help="c_n(eps) probe")
    lp.add_argument("--epsilon", type=float, default=1e-3)
    lp.add_argument("--strict", action="store_true", help="exit 3 if any c_n falls outside (0, 1)")

    e = sub.add_parser("eval", parents=[common], help="special-function values at a point or on a grid")
    grp = e.add_mutually_exclusive_group(required=True)
    grp.add_argument("--t", type=float)
    grp.add_argument("--grid", help="a:b:step, emits figure data as CSV")
    return p


def run_config_from_args(ns: argparse.Namespace) -> RunConfig:
    overrides = {}
    for name in ("tol_fixed_point", "tol_residual", "max_iterations", "derivative_step"):
        val = getattr(ns, name, None)
        if val is not None:
            overrides[name] = val
    if getattr(ns, "digits", None) is not None:
        overrides["working_digits"] = ns.digits
    if getattr(ns, "backend", None):
        overrides["zeta_backend"] = ns.backend
    try:
        precision = PrecisionConfig.from_env(**overrides)
    except ValueError as exc:
        raise UsageError(str(exc))
    n_start = getattr(ns, "n_start", 1) or 1
    n_end = getattr(ns, "n_end", None)
    options = {k: v for k, v in vars(ns).items() if k in ("no_relax", "quiet", "j_start", "j_end", "indifference_tol", "epsilon", "strict", "t", "grid")}
    if n_end is None:
        if ns.command == "zeros":
            raise UsageError("zeros needs --n-end")
        # other commands default to everything in the store
        options["n_end_from_store"] = True
        n_end = n_start
    return RunConfig(
        command=ns.command,
        n_start=n_start,
        n_end=n_end,
        precision=precision,
        store=ns.store,
        reference=getattr(ns, "reference", None),
        output=ns.output,
        emit_format=ns.emit_format,
        options=options,
    )


def main(argv=None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        rc = run_config_from_args(ns)
        return HANDLERS[rc.command](rc)
    except UsageError as exc:
        _log("usage error: %s" % exc)
        return EXIT_USAGE
    except MissingPrerequisiteError as exc:
        _log("missing prerequisite: %s" % exc)
        return EXIT_USAGE
    except (NonConvergenceError, MisconvergenceError) as exc:
        _log("convergence failure: %s" % exc)
        return EXIT_CONVERGENCE
    except (OSError, TableParseError) as exc:
        _log("I/O error: %s" % exc)
        return EXIT_IO
    except ZetaIFSError as exc:
        _log("error: %s" % exc)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
