"""Acceptance suite: every criterion at its stated tolerance, one printed
pass/fail line per criterion (run with -s to see them on success)."""

import json
import math
import random
import time

import numpy as np

from mulmetric.banach import ContractionCertificate, solve_fixed_point
from mulmetric.common import (
    ContractiveModulus,
    FiniteDomain,
    FourMapSystem,
    brute_force_common_fixed_points,
    check_contractive_condition,
    check_range_inclusion,
    check_weak_commutative,
    check_weakly_compatible,
    reduce_multiplicative_system,
    solve_common_fixed_point,
)
from mulmetric.core import (
    DistanceTable,
    Flavor,
    check_metric_axioms,
    check_multiplicative_axioms,
    exp_abs_metric,
)
from mulmetric.duality import SequenceSample, cauchy_equivalence_check, exp_transform, log_transform
from mulmetric.enumeration import survey_systems

from strategies import random_closed_table, random_maps
from test_cli import run_cli

SEED = 20260809
SCALENE = DistanceTable.from_rows([[0, 1, 2], [1, 0, 2.5], [2, 2.5, 0]], Flavor.ADDITIVE)


def criterion(num: int, name: str, violations: list, detail: str = ""):
    status = "PASS" if not violations else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[acceptance {num}] {name}: {status}{suffix}")
    assert not violations, f"criterion {num} ({name}): {violations[:3]}"


def seeded_tables(count: int, min_n: int = 2, max_n: int = 8) -> list:
    rng = random.Random(SEED)
    return [random_closed_table(rng, rng.randint(min_n, max_n)) for _ in range(count)]


def inflate_triangle(rng: random.Random, table: DistanceTable):
    """Break one triangle by lifting a random off-diagonal entry above every
    two-leg detour; returns the mutated table."""
    n = table.n
    i = rng.randrange(n)
    j = rng.choice([v for v in range(n) if v != i])
    detour = min(table.entries[i][k] + table.entries[k][j] for k in range(n) if k not in (i, j))
    rows = [list(r) for r in table.entries]
    rows[i][j] = rows[j][i] = detour + 1.0 + rng.uniform(0.0, 2.0)
    return DistanceTable.from_rows(rows, Flavor.ADDITIVE, labels=table.labels)


def test_criterion_1_duality_round_trip():
    start = time.perf_counter()
    tables = seeded_tables(100)
    violations = []
    for t_idx, table in enumerate(tables):
        image = exp_transform(table)
        if not check_multiplicative_axioms(image).overall:
            violations.append(("mult-axioms", t_idx))
            continue
        back = log_transform(image)
        for i in range(table.n):
            for j in range(table.n):
                if abs(back.entries[i][j] - table.entries[i][j]) > 1e-12:
                    violations.append(("round-trip", t_idx, i, j))
    elapsed = time.perf_counter() - start
    if elapsed >= 1.0:
        violations.append(("runtime", elapsed))
    criterion(1, "duality round-trip", violations,
              f"100 tables, {elapsed * 1000:.0f} ms")


def test_criterion_2_axiom_transfer_and_witnesses():
    tables = seeded_tables(100)
    violations = []
    for t_idx, table in enumerate(tables):
        if not check_metric_axioms(log_transform(exp_transform(table))).overall:
            violations.append(("transfer", t_idx))
    rng = random.Random(SEED + 1)
    mutated = [inflate_triangle(rng, t) for t in seeded_tables(100, min_n=3)]
    for t_idx, table in enumerate(mutated):
        add_verdict = check_metric_axioms(table).verdict("triangle")
        mult_verdict = check_multiplicative_axioms(exp_transform(table)).verdict(
            "multiplicative-triangle"
        )
        if add_verdict.passed or mult_verdict.passed:
            violations.append(("should-fail", t_idx))
        elif add_verdict.witness != mult_verdict.witness:
            violations.append(("witness", t_idx, add_verdict.witness, mult_verdict.witness))
    criterion(2, "axiom transfer + shared witnesses", violations,
              "100 transfers, 100 mutations")


def test_criterion_3_banach_demo():
    start = time.perf_counter()
    cert = ContractionCertificate(0.5)
    res = solve_fixed_point(lambda x: x / 2 + 1, exp_abs_metric(), 0.0, cert,
                            tol_additive=1e-9, max_iter=100)
    violations = []
    if abs(res.point - 2.0) > 1e-9:
        violations.append(("point", res.point))
    if res.iterations > 35:
        violations.append(("iterations", res.iterations))
    tr = res.trace
    p01 = math.exp(abs(tr.iterates[0] - tr.iterates[1]))
    for k, x_k in enumerate(tr.iterates):
        true_err = abs(x_k - 2.0)  # closed form: x* = 2
        if true_err > tr.apriori_bounds[k] + 1e-9:
            violations.append(("apriori", k))
        if true_err > tr.aposteriori_bounds[k] + 1e-9:
            violations.append(("aposteriori", k))
        if math.exp(true_err) > p01 ** (0.5**k / 0.5) * (1 + 1e-6):
            violations.append(("multiplicative-bound", k))
    elapsed = time.perf_counter() - start
    if elapsed >= 0.1:
        violations.append(("runtime", elapsed))
    criterion(3, "Banach demo with certified bounds", violations,
              f"{res.iterations} iterations, {elapsed * 1000:.1f} ms")


def test_criterion_4_cauchy_equivalence():
    metric = exp_abs_metric()
    cert = ContractionCertificate(0.5)
    sequences = [
        tuple(solve_fixed_point(lambda x: x / 2 + 1, metric, x0, cert,
                                tol_additive=1e-9, max_iter=100).trace.iterates)
        for x0 in (0.0, -10.0, 3.7, 100.0)
    ]
    sequences.append((0.0, 1.0, 0.0, 1.0, 0.0))  # oscillating
    sequences.append((0.5,) * 6)                 # constant
    violations = []
    checked = 0
    for s_idx, points in enumerate(sequences):
        seq = SequenceSample(points, metric)
        for eps in (1.01, 1.5, 2.0, math.e):
            for start in range(len(points)):
                checked += 1
                if not cauchy_equivalence_check(seq, eps, start):
                    violations.append((s_idx, eps, start))
    criterion(4, "Cauchy-tail equivalence", violations,
              f"{checked} predicate pairs, 0 disagreements required")


def test_criterion_5_common_fixed_point_oracle_equivalence():
    start = time.perf_counter()
    survey = survey_systems(SCALENE)
    violations = []

    # the vectorized screen must agree with the per-system predicates
    rng = random.Random(SEED + 2)
    for _ in range(300):
        idx = tuple(rng.randrange(27) for _ in range(4))
        sysm = survey.system(idx)
        for lam in (0.25, 0.5, 0.75):
            fast = bool(survey.hypotheses_ok[idx]
                        and survey.lambda_needed_halved[idx] <= lam)
            slow = (
                check_range_inclusion(sysm).passed
                and check_weakly_compatible(sysm, ("S", "A")).passed
                and check_weakly_compatible(sysm, ("T", "B")).passed
                and check_contractive_condition(
                    sysm, ContractiveModulus.linear(lam), halved=True).passed
            )
            if fast != slow:
                violations.append(("screen-disagreement", idx, lam))

    counts = {}
    for lam in (0.25, 0.5, 0.75):
        survivors = survey.passing_halved(lam)
        counts[lam] = len(survivors)
        for idx in survivors:
            sysm = survey.system(idx)
            oracle = brute_force_common_fixed_points(sysm)
            if len(oracle) != 1:
                violations.append(("oracle-cardinality", tuple(idx), lam, oracle))
                continue
            res = solve_common_fixed_point(sysm, ContractiveModulus.linear(lam))
            if not res.success or res.point != oracle[0]:
                violations.append(("solver-mismatch", tuple(idx), lam, res.point, oracle))
    elapsed = time.perf_counter() - start
    if elapsed >= 60.0:
        violations.append(("runtime", elapsed))
    criterion(5, "common-fixed-point oracle equivalence", violations,
              f"531441 systems screened, survivors {counts}, {elapsed:.1f} s")


def test_criterion_6_weak_commutative_implies_weakly_compatible():
    rng = random.Random(SEED + 3)
    violations = []
    commutative = 0
    for _ in range(500):
        n = rng.randint(2, 5)
        table = random_closed_table(rng, n, lo=0.1, hi=8.0)
        s, a = random_maps(rng, n, 2)
        ident = tuple(range(n))
        sysm = FourMapSystem(domain=FiniteDomain(table.labels),
                             A=a, B=ident, S=s, T=ident, metric=table)
        if check_weak_commutative(sysm, ("S", "A")).passed:
            commutative += 1
            if not check_weakly_compatible(sysm, ("S", "A")).passed:
                violations.append((s, a, table.entries))
    criterion(6, "weak commutative implies weakly compatible", violations,
              f"500 pairs, {commutative} commutative, 0 violations required")


def test_criterion_7_reduction_bridge():
    mult_table = exp_transform(SCALENE)
    survey = survey_systems(mult_table)
    violations = []
    counts = {}
    for lam in (0.1, 0.25, 0.4):
        # exhaustive vectorized statement over all 531,441 systems
        unhalved_ok = survey.lambda_needed_unhalved <= lam
        halved_ok = survey.lambda_needed_halved <= 2 * lam
        bad = int(np.count_nonzero(unhalved_ok & ~halved_ok))
        if bad:
            violations.append(("vectorized", lam, bad))
        survivors = survey.passing_unhalved(lam)
        counts[lam] = len(survivors)
        for idx in survivors:
            sysm = survey.system(idx)
            if not check_contractive_condition(
                sysm, ContractiveModulus.linear(lam), halved=False
            ).passed:
                violations.append(("unhalved-screen", tuple(idx), lam))
                continue
            red = reduce_multiplicative_system(sysm, lam)
            if red.modulus.lam != 2 * lam:
                violations.append(("bridge-factor", lam, red.modulus.lam))
            if not check_contractive_condition(red.system, red.modulus, halved=True).passed:
                violations.append(("halved-after-reduction", tuple(idx), lam))
    criterion(7, "factor-2 reduction bridge", violations,
              f"condition-(1) survivors {counts}")


def test_criterion_8_cli_contract():
    violations = []

    def expect(code, *argv):
        proc = run_cli(*argv)
        if proc.returncode != code:
            violations.append((argv, proc.returncode, code))
            return None
        try:
            return json.loads(proc.stdout)
        except json.JSONDecodeError:
            violations.append((argv, "stdout is not JSON"))
            return None

    expect(0, "check", "mult2.csv", "--flavor", "mult")
    expect(1, "check", "mult2_bad.csv", "--flavor", "mult")
    expect(2, "check", "ragged.csv", "--flavor", "mult")
    expect(0, "transform", "mult2.csv", "--dir", "log")
    expect(1, "transform", "mult2_bad.csv", "--dir", "log")
    solve = expect(0, "solve", "--map", "affine:0.5,1", "--x0", "0", "--lambda", "0.5")
    if solve and abs(solve["point"] - 2.0) > 1e-9:
        violations.append(("solve-point", solve["point"]))
    expect(3, "solve", "--map", "affine:0.5,1", "--x0", "0", "--lambda", "0.5",
           "--max-iter", "1")
    expect(2, "solve", "--map", "affine:0.5,1", "--x0", "0", "--lambda", "1.5")
    expect(0, "common", "finite_system.json", "--lambda", "0.5")
    expect(1, "common", "range_violation_system.json", "--lambda", "0.5")
    expect(2, "common", "bad_schema_system.json", "--lambda", "0.5")
    expect(0, "estimate-lambda", "--map", "affine:0.5,0", "--probes", "8", "--seed", "7")

    seeded = ("solve", "--map", "affine:0.5,1", "--x0", "0",
              "--estimate", "--probes", "8", "--seed", "11")
    if run_cli(*seeded).stdout != run_cli(*seeded).stdout:
        violations.append(("determinism", seeded))
    criterion(8, "CLI exit codes, JSON schema, determinism", violations)
