"""Reference zero tables, the computed-zero store and comparison reports."""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from importlib import resources

import mpmath

from .dynamics import FixedPointKind, ZeroRecord
from .errors import MissingPrerequisiteError, TableOrderError, TableParseError

__all__ = [
    "ReferenceTable",
    "ReportRow",
    "DiagnosticsReport",
    "ZeroStore",
    "parse_reference_table",
    "serialize_reference_table",
    "load_reference_table",
    "bundled_reference_table",
    "compare",
    "write_report_csv",
    "REPORT_HEADER",
]

REPORT_HEADER = ["n", "y_computed", "y_reference", "abs_error", "iterations", "final_h", "multiplier", "bracket_ok"]

BUNDLED_TABLE = "zeros_1000.txt"


@dataclass(frozen=True)
class ReferenceTable:
    zeros: tuple  # Decimal ordinates, ascending
    source: str = "<unknown>"
    digits: int = 0
    first_index: int = 1

    def __len__(self):
        return len(self.zeros)

    def value(self, n: int):
        """Ordinate of zero number n, or None if the table does not cover it."""
        i = n - self.first_index
        if 0 <= i < len(self.zeros):
            return self.zeros[i]
        return None

    def as_floats(self) -> list:
        return [float(z) for z in self.zeros]

    def count_below(self, t) -> int:
        """Number of tabulated ordinates below t (meaningful when first_index == 1)."""
        t = Decimal(str(t))
        return sum(1 for z in self.zeros if z < t)


def _decimals(token: str) -> int:
    mantissa = token.lower().split("e")[0]
    return len(mantissa.split(".")[1]) if "." in mantissa else 0


def parse_reference_table(text, source: str | None = None) -> ReferenceTable:
    """Parse a plain-text zero table.

    One ordinate per line, optionally preceded by its index. Blank lines and
    lines starting with '#' are skipped; '# source: ...' and '# digits: N'
    comment lines set the metadata. ``digits`` defaults to the smallest
    number of decimals seen, i.e. the precision every entry can vouch for.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    elif hasattr(text, "read"):
        text = text.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")
    zeros = []
    first_index = None
    prev_index = None
    digits = None
    meta_digits = None
    meta_source = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            key, sep, val = body.partition(":")
            if sep and key.strip().lower() == "source":
                meta_source = val.strip()
            elif sep and key.strip().lower() == "digits":
                try:
                    meta_digits = int(val)
                except ValueError:
                    raise TableParseError("bad digits value %r" % val.strip(), lineno)
            continue
        tokens = line.split()
        if len(tokens) == 1:
            idx, tok = None, tokens[0]
        elif len(tokens) == 2:
            try:
                idx = int(tokens[0])
            except ValueError:
                raise TableParseError("index %r is not an integer" % tokens[0], lineno)
            tok = tokens[1]
        else:
            raise TableParseError("expected 'value' or 'index value', got %r" % line, lineno)
        try:
            val = Decimal(tok)
        except InvalidOperation:
            raise TableParseError("not a number: %r" % tok, lineno)
        if not val.is_finite():
            raise TableParseError("not a finite number: %r" % tok, lineno)
        if idx is not None:
            if prev_index is not None and idx != prev_index + 1:
                raise TableParseError("index %d does not follow %d" % (idx, prev_index), lineno)
            if first_index is None and not zeros:
                first_index = idx
            prev_index = idx
        elif prev_index is not None:
            prev_index += 1
        if zeros and not val > zeros[-1]:
            raise TableOrderError("%s is not larger than the previous entry %s" % (val, zeros[-1]), lineno)
        zeros.append(val)
        d = _decimals(tok)
        digits = d if digits is None else min(digits, d)
    return ReferenceTable(
        zeros=tuple(zeros),
        source=source or meta_source or "<unknown>",
        digits=meta_digits if meta_digits is not None else (digits or 0),
        first_index=first_index or 1,
    )


def serialize_reference_table(table: ReferenceTable) -> str:
    out = io.StringIO()
    out.write("# source: %s\n" % table.source)
    out.write("# digits: %d\n" % table.digits)
    q = Decimal(1).scaleb(-table.digits)
    for i, z in enumerate(table.zeros):
        out.write("%d %s\n" % (table.first_index + i, z.quantize(q)))
    return out.getvalue()


def load_reference_table(path) -> ReferenceTable:
    with open(path, "rb") as fh:
        return parse_reference_table(fh.read(), source=None)


def bundled_reference_table() -> ReferenceTable:
    """The first 1000 ordinates shipped with the package (see the file header)."""
    data = resources.files("zetaifs").joinpath("data", BUNDLED_TABLE).read_bytes()
    return parse_reference_table(data)


# ---------------------------------------------------------------- reports


@dataclass(frozen=True)
class ReportRow:
    n: int
    y_computed: object
    y_reference: object
    abs_error: float | None
    iterations: int | None
    final_h: float | None
    multiplier: float | None
    bracket_ok: bool | None
    tolerance: float | None = None
    failed: bool = False


@dataclass
class DiagnosticsReport:
    per_zero: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    max_error: float | None = None
    mean_iterations: float | None = None
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "per_zero": [
                {k: _jsonable(getattr(r, k)) for k in REPORT_HEADER + ["tolerance", "failed"]} for r in self.per_zero
            ],
            "notes": list(self.notes),
            "max_error": self.max_error,
            "mean_iterations": self.mean_iterations,
            "failures": list(self.failures),
        }


def _jsonable(v):
    if v is None or isinstance(v, (bool, int, float, str)):
        return v
    return _fmt(v)


def compare(computed, reference: ReferenceTable, tol_fixed_point: float = 1e-12) -> DiagnosticsReport:
    """Pair computed zeros with the table by index and measure the errors.

    The tolerance for zero n is the coarser of the table's resolution (half
    a unit in its last digit) and the accuracy the iteration guarantees,
    tol_fixed_point / (1 - |lambda|) for a map with multiplier lambda at
    the zero. A row fails when its error exceeds ten times that tolerance.
    """
    report = DiagnosticsReport()
    ref_tol = 0.5 * 10.0 ** (-reference.digits) if reference.digits else 0.5
    errors = []
    iterations = []
    seen = set()
    for rec in computed:
        seen.add(rec.n)
        ref = reference.value(rec.n)
        if ref is None:
            report.notes.append("n=%d: no reference entry" % rec.n)
            continue
        err = float(abs(mpmath.mpf(str(ref)) - mpmath.mpf(rec.y)))
        lam = abs(float(rec.multiplier)) if rec.multiplier is not None else 0.0
        comp_tol = tol_fixed_point / (1 - lam) if lam < 1 else tol_fixed_point
        tol = max(ref_tol, comp_tol)
        failed = not err <= 10 * tol
        report.per_zero.append(
            ReportRow(
                n=rec.n,
                y_computed=rec.y,
                y_reference=ref,
                abs_error=err,
                iterations=rec.iterations,
                final_h=rec.final_h,
                multiplier=None if rec.multiplier is None else float(rec.multiplier),
                bracket_ok=rec.bracket_ok,
                tolerance=tol,
                failed=failed,
            )
        )
        errors.append(err)
        if rec.iterations is not None:
            iterations.append(rec.iterations)
        if failed:
            report.failures.append(rec.n)
    missing = [reference.first_index + i for i in range(len(reference)) if reference.first_index + i not in seen]
    if missing and computed:
        report.notes.append(
            "%d reference entries without a computed zero (n=%d..%d)" % (len(missing), missing[0], missing[-1])
        )
    report.max_error = max(errors) if errors else None
    report.mean_iterations = sum(iterations) / len(iterations) if iterations else None
    return report


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, Decimal):
        return str(v)
    if hasattr(v, "_mpf_"):
        return mpmath.nstr(v, 20, strip_zeros=False)
    return str(v)


def write_report_csv(report: DiagnosticsReport, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(REPORT_HEADER)
    for r in report.per_zero:
        w.writerow([_fmt(getattr(r, k)) for k in REPORT_HEADER])


# ---------------------------------------------------------- zero store


def _record_to_json(rec: ZeroRecord, digits: int = 30) -> str:
    lo, hi = rec.exact_eq_bracket
    d = {
        "n": rec.n,
        "y": mpmath.nstr(mpmath.mpf(rec.y), digits, strip_zeros=False),
        "iterations": rec.iterations,
        "final_h": rec.final_h,
        "residual": float(rec.z_residual) if rec.z_residual is not None else None,
        "multiplier": float(rec.multiplier) if rec.multiplier is not None else None,
        "classification": rec.classification.value if rec.classification is not None else None,
        "bracket": [None if lo is None else float(lo), None if hi is None else float(hi)],
    }
    return json.dumps(d)


def _record_from_json(line: str, digits: int = 30) -> ZeroRecord:
    d = json.loads(line)
    with mpmath.workdps(digits):
        y = mpmath.mpf(d["y"])
    cls = d.get("classification")
    bracket = d.get("bracket") or [None, None]
    return ZeroRecord(
        n=int(d["n"]),
        y=y,
        iterations=d.get("iterations"),
        final_h=d.get("final_h"),
        z_residual=d.get("residual"),
        exact_eq_bracket=tuple(bracket),
        multiplier=d.get("multiplier"),
        classification=FixedPointKind(cls) if cls else None,
    )


class ZeroStore:
    """Append-only JSON-lines file of computed zeros, one record per line.

    Records must run n = 1, 2, 3, ... without gaps because each zero is
    computed from all the earlier ones.
    """

    def __init__(self, path, digits: int = 30):
        self.path = os.fspath(path)
        self.digits = digits

    def exists(self) -> bool:
        return os.path.exists(self.path)

    def load(self) -> list:
        if not self.exists():
            return []
        records = []
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    rec = _record_from_json(line, self.digits)
                except (ValueError, KeyError, TypeError) as exc:
                    raise TableParseError("bad zero-store record: %s" % exc, lineno)
                if rec.n != len(records) + 1:
                    raise TableParseError("expected n=%d, found n=%d" % (len(records) + 1, rec.n), lineno)
                records.append(rec)
        return records

    def zeros(self) -> list:
        return [r.y for r in self.load()]

    def require(self, n_before: int) -> list:
        """Records for y_1..y_{n_before}, or MissingPrerequisiteError."""
        recs = self.load()
        if len(recs) < n_before:
            raise MissingPrerequisiteError(
                "store %s holds %d zeros; %d are needed" % (self.path, len(recs), n_before)
            )
        return recs[:n_before]

    def append(self, rec: ZeroRecord) -> None:
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(_record_to_json(rec, self.digits) + "\n")

    def truncate(self, n_keep: int) -> None:
        """Drop records with n > n_keep."""
        recs = self.load()[:n_keep]
        tmp = self.path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            for r in recs:
                fh.write(_record_to_json(r, self.digits) + "\n")
        os.replace(tmp, self.path)

