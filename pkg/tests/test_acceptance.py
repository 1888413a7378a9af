"""Acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line (also repeated in the terminal
summary). The zero store is built once through the CLI: 100 zeros timed on
their own, then extended to 1000 for the checks that run over every
computed zero.
"""

import random
import time

import pytest

from conftest import ACCEPTANCE_LINES
from zetaifs.cli import EXIT_OK, classification_ok, main
from zetaifs.config import PrecisionConfig
from zetaifs.dynamics import initial_state, lipschitz_estimate, map_multiplier, map_value, multiplicity, run_iteration
from zetaifs.errors import NonConvergenceError
from zetaifs.reference_data import ZeroStore, compare
from zetaifs.special_fn import theta_asymptotic, theta_exact
from zetaifs.transcendental import count_zeros_N0, exact_eq_values, local_gap

pytestmark = pytest.mark.slow

N_SMALL = 100
N_LARGE = 1000


def report(number, title, ok, detail):
    line = "criterion %2d %-26s %s  %s" % (number, title, "PASS" if ok else "FAIL", detail)
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.fixture(scope="module")
def run(tmp_path_factory):
    path = tmp_path_factory.mktemp("acceptance") / "zeros.jsonl"
    t0 = time.perf_counter()
    assert main(["zeros", "--n-end", str(N_SMALL), "--store", str(path), "--quiet"]) == EXIT_OK
    t_small = time.perf_counter() - t0
    assert main(["zeros", "--n-end", str(N_LARGE), "--store", str(path), "--quiet"]) == EXIT_OK
    t_large = time.perf_counter() - t0
    records = ZeroStore(path).load()
    return {"records": records, "zeros": [r.y for r in records], "t_small": t_small, "t_large": t_large}


def test_c01_zero_accuracy(run, reference):
    rep = compare(run["records"][:N_SMALL], reference)
    ok = len(rep.per_zero) == N_SMALL and rep.max_error < 1e-6 and run["t_small"] < 300
    report(1, "zero accuracy", ok, "max |y - ref| = %.2e over n <= %d, %.0f s (limit 1e-6, 300 s)" % (rep.max_error, N_SMALL, run["t_small"]))
    assert ok


def test_c02_fixed_point_identity(run):
    zeros = run["zeros"]
    worst = max(abs(map_value(n, zeros[n - 1], zeros) - zeros[n - 1]) for n in range(1, len(zeros) + 1))
    ok = worst < 1e-10
    report(2, "fixed-point identity", ok, "max |Y(y_n) - y_n| = %.2e over n <= %d (limit 1e-10)" % (worst, len(zeros)))
    assert ok


def test_c03_parity_classification(run):
    zeros = run["zeros"]
    parity_total = parity_bad = 0
    indiff_total = indiff_bad = 0
    worst_indiff = 0.0
    for n in range(1, 21):
        for j in range(1, n + 7):
            lam = map_multiplier(n, zeros[j - 1], zeros)
            good = classification_ok(n, j, lam, 1e-3)
            if j < n:
                indiff_total += 1
                indiff_bad += not good
                worst_indiff = max(worst_indiff, abs(abs(float(lam)) - 1))
            else:
                parity_total += 1
                parity_bad += not good
    ok = parity_bad == 0 and indiff_bad == 0
    report(
        3,
        "parity classification",
        ok,
        "parity %d/%d hold; indifference ||lambda|-1| < 1e-3 at y_k, k < n: %d/%d hold (worst %.3f)"
        % (parity_total - parity_bad, parity_total, indiff_total - indiff_bad, indiff_total, worst_indiff),
    )
    assert ok


def test_c04_exact_equation_bracket(run):
    zeros = run["zeros"]
    bad = []
    for n in range(1, N_SMALL + 1):
        br = exact_eq_values(n, zeros[n - 1], 1e-4 * local_gap(zeros, n))
        if not br.ok:
            bad.append(n)
    ok = not bad
    report(4, "exact-equation bracket", ok, "%d/%d brackets contain (n - 3/2) pi%s" % (N_SMALL - len(bad), N_SMALL, "" if ok else ", failing n = %s" % bad))
    assert ok


def test_c05_counting(reference):
    rows = []
    for t in (50, 100, 200):
        rows.append((t, round(float(count_zeros_N0(t))), reference.count_below(t)))
    ok = all(a == b for _, a, b in rows) and rows[0][2] == 10 and rows[1][2] == 29
    report(5, "counting agreement", ok, ", ".join("round N0(%d) = %d vs %d" % r for r in rows))
    assert ok


def test_c06_asymptotic_theta():
    rng = random.Random(20240601)
    ts = [rng.uniform(20, 500) for _ in range(50)]
    ratios = [abs(theta_exact(t) - theta_asymptotic(t)) * t for t in ts]
    ok = max(ratios) < 0.2
    report(6, "asymptotic theta error", ok, "max t |theta - theta~| = %.4f over 50 t in [20, 500] (limit 0.2)" % max(ratios))
    assert ok


def test_c07_simplicity(run):
    worst = max(abs(multiplicity(y) - 1) for y in run["zeros"])
    ok = worst < 1e-6
    report(7, "simplicity", ok, "max |multiplicity - 1| = %.2e over %d zeros (limit 1e-6)" % (worst, len(run["zeros"])))
    assert ok


def test_c08_contraction(run):
    zeros = run["zeros"]
    rng = random.Random(8)
    pairs = violations = 0
    worst = (0.0, None)
    n_values = range(2, 102)
    for n in n_values:
        # the two zero-free pieces around y_n, with 0.1 cut off at each zero
        pieces = [(zeros[n - 2] + 0.1, zeros[n - 1] - 0.1), (zeros[n - 1] + 0.1, zeros[n] - 0.1)]
        pieces = [(a, b) for a, b in pieces if b > a]
        for i in range(100):
            a, b = pieces[i % len(pieces)]
            t = a + (b - a) * rng.random()
            s = a + (b - a) * rng.random()
            ratio = abs(map_value(n, t, zeros) - map_value(n, s, zeros)) / abs(t - s)
            pairs += 1
            if not ratio < 1:
                violations += 1
            if ratio > worst[0]:
                worst = (float(ratio), (n, float(t), float(s)))
    ok = violations == 0
    report(
        8,
        "contraction",
        ok,
        "%d/%d pairs contract; worst ratio %.3f at n=%d (t=%.3f, s=%.3f)" % (pairs - violations, pairs, worst[0], *worst[1]),
    )
    assert ok


def test_c09_lipschitz_probe(run):
    zeros = run["zeros"]
    outside = []
    for n in range(1, 51):
        c = lipschitz_estimate(n, 1e-3, zeros)
        if not 0 < c < 1:
            outside.append((n, float(c)))
    inside = 50 - len(outside)
    shown = ", ".join("n=%d: %.3g" % o for o in outside[:6])
    report(9, "Lipschitz probe (report)", True, "%d/50 values of c_n(1e-3) in (0, 1); outside: %s%s" % (inside, shown, " ..." if len(outside) > 6 else ""))


def test_c10_termination(run):
    records = run["records"]
    longest = max(records, key=lambda r: r.iterations)
    relaxed_ok = longest.iterations <= 10000
    zeros = run["zeros"]
    cfg = PrecisionConfig(max_iterations=10000)
    # the zeros where halving actually kicked in, most-halved first
    candidates = sorted((r for r in records if r.final_h < 1), key=lambda r: r.final_h)[:3]
    shown = []
    demonstrated = False
    for rec in candidates:
        trace = []
        try:
            run_iteration(initial_state(rec.n, zeros, relax=False), cfg, trace)
            m = len(trace)
            stuck = False
        except NonConvergenceError:
            m = len(trace)
            stuck = True
        tail = [s.delta_prev for s in trace[-50:]]
        alternating = all((a > 0) != (b > 0) for a, b in zip(tail, tail[1:]))
        longer = m > rec.iterations and alternating
        demonstrated |= longer
        shown.append("n=%d %d vs %d%s%s" % (rec.n, m, rec.iterations, " (no convergence)" if stuck else "", ", 2-cycle" if stuck and alternating else ""))
    ok = relaxed_ok and demonstrated
    report(
        10,
        "termination",
        ok,
        "relaxed max %d iterations (n=%d); h = 1 vs relaxed: %s" % (longest.iterations, longest.n, "; ".join(shown)),
    )
    assert ok
