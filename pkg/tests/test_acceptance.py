"""Acceptance suite: one test per criterion, each printing a verdict line.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion
lines; each criterion also asserts, so a plain pytest run gates on them.
"""

import json
import math
import time

import pytest

from baskakov_stancu import (
    OperatorParams,
    TruncationPolicy,
    abs_shift,
    apply,
    audit_lemma,
    bound_thm31,
    bound_thm41,
    default_window,
    exp_decay,
    mihesan_remark_bound,
    polynomial,
    voronovskaya,
)
from baskakov_stancu.cli import main

ONE = polynomial([1.0])
T = polynomial([0.0, 1.0])
T2 = polynomial([0.0, 0.0, 1.0])

GRID_N = (5, 10, 50, 200)
GRID_A = (0.0, 1.0, 3.0)
GRID_SHIFTS = ((0.0, 0.0), (1.0, 2.0), (2.0, 2.0))
GRID_X = (0.0, 0.5, 1.0, 2.0, 5.0)


def verdict(number, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {number} {name}: {status}{suffix}")
    assert ok, f"criterion {number} {name}{suffix}"


def test_criterion_1_normalization():
    policy = TruncationPolicy(mass_epsilon=1e-12, k_max=10 ** 6)
    start = time.perf_counter()
    worst = 1.0
    for n in GRID_N:
        for a in GRID_A:
            for x in GRID_X:
                result = apply(OperatorParams(n, a), ONE, x, policy)
                worst = min(worst, result.mass_covered)
                assert not result.truncation_flag
    elapsed = time.perf_counter() - start
    ok = worst >= 1.0 - 1e-12 and elapsed < 5.0
    verdict(1, "normalization", ok,
            f"worst mass {worst:.17g}, {elapsed:.2f}s")


def test_criterion_2_moment_oracle_equivalence():
    from baskakov_stancu import (
        central_moment_closed,
        central_moment_oracle,
        raw_moment_closed,
        raw_moment_oracle,
    )

    start = time.perf_counter()
    worst = 0.0
    for n in GRID_N:
        for a in GRID_A:
            for alpha, beta in GRID_SHIFTS:
                params = OperatorParams(n, a, alpha, beta)
                for x in GRID_X:
                    for j in (0, 1, 2):
                        closed = raw_moment_closed(params, j, x)
                        oracle = raw_moment_oracle(params, j, x)
                        worst = max(worst,
                                    abs(closed - oracle) / (1 + abs(oracle)))
                    for order in (0, 1, 2):
                        closed = central_moment_closed(params, order, x)
                        oracle = central_moment_oracle(params, order, x)
                        worst = max(worst,
                                    abs(closed - oracle) / (1 + abs(oracle)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 10.0
    verdict(2, "moment oracle equivalence", ok,
            f"worst rel diff {worst:.3e}, {elapsed:.2f}s")


def test_criterion_3_audit_report(tmp_path):
    out = tmp_path / "audit.json"
    code = main(["audit", "--grid", "default", "--out", str(out)])
    doc = json.loads(out.read_text())
    by_id = {}
    for report in doc["reports"]:
        by_id.setdefault(report["lemma_id"], []).append(report)

    # literal fourth-moment transcription flagged where the damage bites
    typeset = by_id["2.1.t4"]
    flagged = any(r["verdict"] == "discrepancy" for r in typeset
                  if r["params"]["a"] > 0)
    # repaired reading matches everywhere
    corrected = by_id["2.1.t4.corrected"]
    corrected_ok = all(
        r["verdict"] == "match" and r["rel_diff"] <= 1e-8 for r in corrected
    )
    # the (n + beta) reading of entry (v) is audited and carries a verdict
    entry_v = by_id["2.2.v"]
    v_recorded = len(entry_v) > 0 and all(
        r["verdict"] in ("match", "discrepancy") for r in entry_v
    )
    ok = flagged and corrected_ok and v_recorded and code in (0, 3)
    v_verdicts = sorted({r["verdict"] for r in entry_v})
    verdict(3, "audit report", ok,
            f"t4 flagged={flagged}, corrected ok={corrected_ok}, "
            f"2.2.v verdicts={v_verdicts}, exit={code}")


def test_criterion_4_scaled_limits():
    ladder = [2 ** j for j in range(4, 15)]
    ok = True
    details = []
    for a, alpha, beta in ((0.0, 0.0, 0.0), (1.0, 1.0, 2.0)):
        family = OperatorParams(16, a, alpha, beta)
        for x in (0.5, 1.0, 2.0):
            for lemma_id in ("2.4.psi1", "2.4.psi2"):
                report = audit_lemma(lemma_id, family, x, ladder=ladder)
                gap = abs(report.oracle_value - report.printed_value)
                ok &= gap <= 1e-2 * max(1.0, abs(report.printed_value))
            psi4 = audit_lemma("2.4.psi4", family, x, ladder=ladder)
            details.append(
                f"psi4[a={a},alpha={alpha},beta={beta},x={x}]={psi4.verdict}"
            )
    verdict(4, "scaled central-moment limits", ok, "; ".join(details[:3]) + "; ...")


def test_criterion_5_first_order_bound():
    ok_holds = True
    for n in GRID_N:
        for a in GRID_A:
            for alpha, beta in GRID_SHIFTS:
                params = OperatorParams(n, a, alpha, beta)
                for x in GRID_X:
                    for f in (T, abs_shift(1.0)):
                        report = bound_thm31(params, f, x)
                        ok_holds &= report.holds

    ok_remark = True
    for n in GRID_N:
        params = OperatorParams(n)
        for x in GRID_X:
            if x == 0.0:
                continue  # both bounds are omega-free multiples of zero gamma
            window = default_window(params, x)
            rhs = bound_thm31(params, T, x, window).rhs
            other = mihesan_remark_bound(n, 0.0, T, x, window)
            ok_remark &= abs(rhs - other) <= 1e-10 * abs(other)
    verdict(5, "first-order bound", ok_holds and ok_remark,
            f"holds={ok_holds}, unshifted reduction={ok_remark}")


def test_criterion_6_voronovskaya():
    ladder = [2 ** j for j in range(4, 15)]
    passthrough = voronovskaya(1.0, 1.0, 2.0, T2, 1.0, n_ladder=[10, 100])
    at10, at100 = passthrough.scaled_errors
    ok_points = (abs(at10 - 0.607639) <= 1e-5
                 and abs(at100 - 0.949150) <= 1e-5)
    report = voronovskaya(1.0, 1.0, 2.0, T2, 1.0, n_ladder=ladder)
    ok_limit = abs(report.extrapolated - 1.0) <= 1e-2

    ok_exact = True
    for x in (0.5, 1.0, 2.0):
        classical = voronovskaya(0.0, 0.0, 0.0, T2, x, n_ladder=ladder)
        for value in classical.scaled_errors:
            ok_exact &= abs(value - x * (1 + x)) <= 1e-10 * x * (1 + x)
    verdict(6, "voronovskaya", ok_points and ok_limit and ok_exact,
            f"ladder points ok={ok_points}, limit={report.extrapolated:.6f}, "
            f"classical exact={ok_exact}")


def test_criterion_7_weighted_second_order_ratios():
    points = bound_thm41(OperatorParams(16), T2, 1.0, 0.0,
                         n_ladder=[2 ** j for j in range(4, 15)])
    ok_half = all(abs(p.ratio - 0.5) <= 1e-6 * 0.5 for p in points)

    ok_bounded = True
    spreads = []
    for lam in (0.0, 0.5, 1.0):
        pts = bound_thm41(OperatorParams(16), exp_decay(1.0), 1.0, lam,
                          n_ladder=[2 ** j for j in range(4, 13)])
        ratios = [p.ratio for p in pts]
        ok_bounded &= all(math.isfinite(r) for r in ratios)
        last3 = ratios[-3:]
        spread = (max(last3) - min(last3)) / max(last3)
        spreads.append(spread)
        ok_bounded &= spread < 0.20
    verdict(7, "weighted second-order ratios", ok_half and ok_bounded,
            f"half-ratio ok={ok_half}, spreads={['%.3f' % s for s in spreads]}")


def test_criterion_8_cli_determinism(tmp_path, capsys):
    def run_twice(argv_fn, outputs):
        first = {}
        for tag in ("one", "two"):
            code = main(argv_fn(tag))
            assert code in (0, 3)
            for name in outputs:
                path = tmp_path / name.format(tag=tag)
                if tag == "one":
                    first[name] = path.read_bytes()
                else:
                    if first[name] != path.read_bytes():
                        return False
        return True

    ok = True
    ok &= run_twice(
        lambda tag: ["converge", "--a", "1", "--alpha", "1", "--beta", "2",
                     "--x", "1", "--fn", "poly:0,0,1", "--n-ladder", "16,64",
                     "--out", str(tmp_path / f"conv_{tag}.csv")],
        ["conv_{tag}.csv"],
    )
    ok &= run_twice(
        lambda tag: ["audit", "--grid", "quick",
                     "--out", str(tmp_path / f"audit_{tag}.json")],
        ["audit_{tag}.json"],
    )
    ok &= run_twice(
        lambda tag: ["plotdata", "--in", str(tmp_path / "conv_one.csv"),
                     "--series", "n_times_error",
                     "--out", str(tmp_path / f"plot_{tag}")],
        ["plot_{tag}_n_times_error.dat", "plot_{tag}_n_times_error.png"],
    )
    # two audit runs must agree with each other byte for byte as well
    ok &= (tmp_path / "audit_one.json").read_bytes() == (
        tmp_path / "audit_two.json"
    ).read_bytes()

    capsys.readouterr()  # drain output accumulated by the runs above
    main(["eval", "--n", "10", "--a", "1", "--alpha", "1", "--beta", "2",
          "--x", "1", "--fn", "poly:0,1"])
    out1 = capsys.readouterr().out
    main(["eval", "--n", "10", "--a", "1", "--alpha", "1", "--beta", "2",
          "--x", "1", "--fn", "poly:0,1"])
    out2 = capsys.readouterr().out
    ok &= out1 == out2
    verdict(8, "CLI determinism", ok)
