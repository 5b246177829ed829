"""Acceptance suite: one test per criterion, each logging a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the verdict lines are
repeated in the "acceptance criteria" section of the terminal summary.
"""
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from scipy import stats

from jacobi_stable_lab.cli import load_config
from jacobi_stable_lab.convergence_lab import lemma_tail_scaling_check, run_experiment
from jacobi_stable_lab.fourier_jacobi import TargetFunction, coefficients, partial_sum
from jacobi_stable_lab.jacobi_core import JacobiParams, gauss_jacobi_rule, orthonormal_table
from jacobi_stable_lab.methods import parse_method
from jacobi_stable_lab.summation import (
    GeneralizedNorlundWeights,
    NorlundWeights,
    build_cesaro,
    build_identity,
    build_riesz,
    build_rogosinski,
    cesaro_triangular,
    check_theta_conditions,
    generalized_norlund_means,
    norlund_means,
    silverman_toeplitz_check,
    triangular_means,
)
from jacobi_stable_lab.stable_process import sample_increment_matrix, sample_sas, uniform_grid

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
EXPONENTS = (-0.5, 0.0, 0.5, 1.0)


def test_c01_orthonormality(acceptance_log):
    start = time.perf_counter()
    worst = 0.0
    for g in EXPONENTS:
        for d in EXPONENTS:
            params = JacobiParams(g, d)
            rule = gauss_jacobi_rule(64, params)
            table = orthonormal_table(20, params, rule.nodes)
            gram = table.T @ (rule.weights[:, None] * table)
            worst = max(worst, float(np.max(np.abs(gram - np.eye(21)))))
    elapsed = time.perf_counter() - start
    acceptance_log(1, "orthonormality", worst <= 1e-8 and elapsed < 5.0, f"max |<p_m,p_n> - delta| = {worst:.2e}, {elapsed:.2f} s")


def test_c02_reproduction(acceptance_log):
    rng = np.random.default_rng(2)
    y = np.linspace(-1, 1, 101)
    worst_fit = worst_tail = 0.0
    for g in EXPONENTS:
        for d in EXPONENTS:
            params = JacobiParams(g, d)
            for degree in range(13):
                poly = rng.normal(size=degree + 1)
                f = TargetFunction(lambda t, c=poly: np.polynomial.polynomial.polyval(t, c), "poly")
                coeffs = coefficients(f, degree + 6, params)
                worst_tail = max(worst_tail, float(np.max(np.abs(coeffs.values[degree + 1 :]))))
                for n in range(degree + 1, degree + 7):
                    worst_fit = max(worst_fit, float(np.max(np.abs(partial_sum(coeffs, n, y) - f(y)))))
    ok = worst_fit <= 1e-8 and worst_tail < 1e-9
    acceptance_log(2, "reproduction", ok, f"max fit error {worst_fit:.2e}, max tail coefficient {worst_tail:.2e}")


def test_c03_method_collapse(acceptance_log):
    rng = np.random.default_rng(3)
    c = rng.normal(size=200)
    s = np.cumsum(c)
    cesaro = s.cumsum() / np.arange(1, 201)
    gaps = {
        "norlund p=1": np.max(np.abs(norlund_means(NorlundWeights(np.ones(200)), s) - cesaro)),
        "gennorlund q=r=1": np.max(np.abs(generalized_norlund_means(GeneralizedNorlundWeights(np.ones(200), np.ones(200)), s) - cesaro)),
        "triangular 1/(n+1)": np.max(np.abs(triangular_means(cesaro_triangular(), s) - cesaro)),
        "riesz(1,1) vs cesaro(1)": max(np.max(np.abs(build_riesz(1, 1).row(n) - build_cesaro(1).row(n))) for n in range(1, 201)),
        "theta cesaro(1) vs C1 means": np.max(np.abs(parse_method("cesaro:phi=1").apply(c, range(1, 201)) - cesaro)),
    }
    worst = max(float(v) for v in gaps.values())
    acceptance_log(3, "method collapse", worst <= 1e-10, f"max gap {worst:.2e} over {len(gaps)} pairs")


def test_c04_condition_checker(acceptance_log):
    ces = check_theta_conditions(build_cesaro(1))
    ident = check_theta_conditions(build_identity())
    rog = check_theta_conditions(build_rogosinski())
    st = silverman_toeplitz_check(cesaro_triangular())
    checks = {
        "cesaro A": ces.verdict("A") is True,
        "cesaro B": ces.verdict("B") is True,
        "identity T2 fails": ident.verdict("T2") is False,
        "identity T2 witness n": ident["T2"].witness == {n: float(n) for n in ident["T2"].witness},
        "rogosinski T1-T3": [rog.verdict(t) for t in ("T1", "T2", "T3")] == [True, True, True],
        "C1 regular": all(st.verdict(k) is True for k in ("row_sums_to_one", "bounded_abs_row_sums", "columns_to_zero")),
        "C1 M-witness 1": st["bounded_abs_row_sums"].witness["M"] == 1.0,
    }
    failed = [k for k, v in checks.items() if not v]
    acceptance_log(4, "condition checker", not failed, "all verdicts exact" if not failed else f"failed: {failed}")


def test_c05_sampler(acceptance_log):
    start = time.perf_counter()
    rng = np.random.default_rng(5)
    var2 = float(np.var(sample_sas(2.0, 1.0, rng, size=100_000)))
    tail1 = float(np.mean(np.abs(sample_sas(1.0, 1.0, rng, size=100_000)) > 1.0))
    n = 20_000
    critical = 1.63 * math.sqrt(2.0 / n)
    ks = {}
    for alpha in (1.0, 1.5, 2.0):
        pair = sample_sas(alpha, 1.0, rng, size=n) + sample_sas(alpha, 1.0, rng, size=n)
        single = 2.0 ** (1.0 / alpha) * sample_sas(alpha, 1.0, rng, size=n)
        ks[alpha] = float(stats.ks_2samp(pair, single).statistic)
    elapsed = time.perf_counter() - start
    ok = abs(var2 - 2.0) <= 0.05 and abs(tail1 - 0.5) <= 0.01 and all(v < critical for v in ks.values()) and elapsed < 30
    ks_text = ", ".join(f"a={a:g}: {v:.4f}" for a, v in ks.items())
    acceptance_log(5, "sampler distribution", ok, f"var={var2:.4f}, P(|C|>1)={tail1:.4f}, KS {ks_text} (crit {critical:.4f}), {elapsed:.1f} s")


def test_c06_gaussian_isometry(acceptance_log):
    G, M = 512, 20_000
    values = sample_increment_matrix(2.0, G, 6, M) @ uniform_grid(G)[:-1]
    var = float(np.var(values))
    rel = abs(var / (4.0 / 3.0) - 1.0)
    acceptance_log(6, "gaussian isometry", rel <= 0.05, f"var = {var:.4f} vs 4/3, rel. error {rel:.3f}")


def test_c07_theta_cesaro_run(acceptance_log):
    config = load_config(CONFIGS / "cesaro_gaussian.cfg")
    assert (config.target, config.method, config.alpha, config.paths, config.epsilon) == ("abs", "cesaro:phi=1", 2.0, 2000, 0.1)
    assert tuple(config.n_schedule) == (8, 16, 32, 64)
    start = time.perf_counter()
    report = run_experiment(config)
    elapsed = time.perf_counter() - start
    ok = report.gate.passed and report.nonincreasing_up_to_overlap() and report.p_hat[-1] <= 0.05 and elapsed < 180
    p = ", ".join(f"{v:.4f}" for v in report.p_hat)
    acceptance_log(7, "Cesaro sup-mode run", ok, f"P_hat = [{p}], gate {report.gate.passed}, {elapsed:.1f} s")


def test_c08_norlund_point_run(acceptance_log):
    config = load_config(CONFIGS / "norlund_cauchy.cfg")
    assert (config.gamma, config.delta, config.alpha, config.epsilon, config.mode, config.A) == (0.25, 0.5, 1.0, 0.5, "point", 1.0)
    weights = NorlundWeights(1.0 / np.arange(1.0, 66.0))
    report = run_experiment(config)
    ok = report.gate.passed and weights.is_nonnegative_nonincreasing() and report.nonincreasing_up_to_overlap()
    p = ", ".join(f"{v:.4f}" for v in report.p_hat)
    acceptance_log(8, "Noerlund point-mode run", ok, f"P_hat = [{p}], gate {report.gate.passed}")


@pytest.mark.parametrize("alpha", [2.0, 1.0])
def test_c09_tail_scaling(acceptance_log, alpha):
    eps = [0.5, 1.0, 2.0, 4.0, 8.0]
    M = 10_000
    rep = lemma_tail_scaling_check(1.0, alpha, eps, M=M, seed=9)
    ratio = rep["scaling"].witness["last/first"]
    empirical = rep["empirical_tail"].witness
    exact = rep["closed_form_tail"].witness
    # oracle agreement within 4 binomial standard errors
    oracle_ok = all(abs(empirical[e] - exact[e]) <= 4 * math.sqrt(exact[e] * (1 - exact[e]) / M) + 1e-4 for e in eps)
    ok = rep.verdict("scaling") is True and oracle_ok
    acceptance_log(9, f"tail scaling alpha={alpha:g}", ok, f"last/first = {ratio:.3f} (limit 1.2), oracle agreement {oracle_ok}")


def test_c10_replay(acceptance_log):
    same = {}
    for name in ("cesaro_gaussian.cfg", "norlund_cauchy.cfg"):
        config = load_config(CONFIGS / name)
        same[name] = run_experiment(config).to_csv().encode() == run_experiment(config).to_csv().encode()
    acceptance_log(10, "replay determinism", all(same.values()), ", ".join(f"{k}: {'identical' if v else 'differs'}" for k, v in same.items()))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
