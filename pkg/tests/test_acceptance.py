"""Acceptance suite: one test and one printed pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as they
print. Expected values were hand-derived or computed with the independent
oracles in oracles.py before the implementation existed; tolerances are fixed
here and nowhere else.
"""

import time

import numpy as np
import pytest
from scipy.stats import kendalltau

from confmetrics import (
    ChanceModel,
    ConfusionMatrix,
    EvalConfig,
    GtiError,
    MeanKind,
    WeightMatrix,
    agreement,
    binary_counts,
    chi_square,
    collapse_one_vs_rest,
    combine,
    cramers_v,
    evaluate_all,
    f_measure,
    fit_gti,
    gk_lambda,
    icsi,
    jaccard,
    kulczynski,
    mutual_information,
    npv,
    osr,
    phi,
    ppv,
    rank_values,
    theil_u,
    tnr,
    tpr,
)
from confmetrics.cli import main
from oracles import M1, M2, expand_to_pairs, gti_expected, gti_sample


def _criterion(num: int, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"criterion {num:02d}: {status}{suffix}")
    assert ok, f"criterion {num} failed {suffix}"


def _sweep_matrix(rng: np.random.Generator) -> ConfusionMatrix:
    k = int(rng.integers(2, 9))
    n = int(np.round(10 ** rng.uniform(1, 6)))
    probs = rng.dirichlet(np.ones(k * k))
    cells = rng.multinomial(n, probs).reshape(k, k).astype(float)
    return ConfusionMatrix(tuple(f"c{i}" for i in range(k)), cells)


@pytest.fixture(scope="module")
def sweep_results():
    """One pass over 10,000 seeded random integral matrices for criteria 2, 3, 8."""
    rng = np.random.default_rng(20_260_810)
    identity_checks = chain_checks = collapse_checks = 0
    identity_bad = chain_bad = collapse_bad = 0
    for _ in range(10_000):
        m = _sweep_matrix(rng)
        for i in range(m.k):
            f = f_measure(m, i)
            j = jaccard(m, i)
            s = icsi(m, i)
            kz = kulczynski(m, i)
            h = combine(m, i, MeanKind.HARMONIC)
            if f.defined and j.defined:
                identity_checks += 1
                if abs(j.value - f.value / (2 - f.value)) > 1e-12:
                    identity_bad += 1
            if s.defined and kz.defined:
                identity_checks += 1
                if abs(s.value - (2 * kz.value - 1)) > 1e-12:
                    identity_bad += 1
            if h.defined and f.defined:
                identity_checks += 1
                if abs(h.value - f.value) > 1e-12:
                    identity_bad += 1
            values = [combine(m, i, kind) for kind in MeanKind]
            defined = [v.value for v in values if v.defined]
            for lo, hi in zip(defined, defined[1:]):
                chain_checks += 1
                if lo > hi + 1e-12:
                    chain_bad += 1
            c = binary_counts(m, i)
            collapse_checks += 1
            if abs(osr(collapse_one_vs_rest(m, i)).value - (c.tp + c.tn) / m.n) > 1e-12:
                collapse_bad += 1
    return {
        "identity_checks": identity_checks,
        "identity_bad": identity_bad,
        "chain_checks": chain_checks,
        "chain_bad": chain_bad,
        "collapse_checks": collapse_checks,
        "collapse_bad": collapse_bad,
    }


def test_criterion_01_hand_oracle_values():
    checks = [
        abs(osr(M1).value - 0.85) <= 1e-9,
        abs(tpr(M1, 0).value - 8 / 9) <= 1e-9,
        abs(ppv(M1, 0).value - 0.8) <= 1e-9,
        abs(tnr(M1, 0).value - 9 / 11) <= 1e-9,
        abs(npv(M1, 0).value - 0.9) <= 1e-9,
        abs(f_measure(M1, 0).value - 16 / 19) <= 1e-9,
        abs(jaccard(M1, 0).value - 8 / 11) <= 1e-9,
        abs(icsi(M1, 0).value - (0.8 + 8 / 9 - 1)) <= 1e-9,
        abs(agreement(M1, ChanceModel.cohen()).value - 0.70) <= 1e-9,
        abs(osr(M2).value - 0.86) <= 1e-9,
        abs(agreement(M2, ChanceModel.maxwell()).value - 0.79) <= 1e-9,
    ]
    _criterion(1, all(checks), f"{sum(checks)}/{len(checks)} values match to 1e-9")


def test_criterion_02_functional_identities(sweep_results):
    ok = sweep_results["identity_bad"] == 0 and sweep_results["identity_checks"] > 0
    _criterion(
        2, ok,
        f"{sweep_results['identity_checks']} identity checks, "
        f"{sweep_results['identity_bad']} violations",
    )


def test_criterion_03_pointwise_mean_chain(sweep_results):
    ok = sweep_results["chain_bad"] == 0 and sweep_results["chain_checks"] > 0
    _criterion(
        3, ok,
        f"{sweep_results['chain_checks']} chain comparisons, "
        f"{sweep_results['chain_bad']} violations",
    )


def test_criterion_04_ranking_equivalences():
    rng = np.random.default_rng(4_004)
    ids = [f"clf{i}" for i in range(5)]
    violations = 0
    ensembles = 1_000
    for _ in range(ensembles):
        k = int(rng.integers(2, 6))
        n = int(rng.integers(50, 2_001))
        priors = np.arange(1, k + 1, dtype=float)
        priors /= priors.sum()
        scott = ChanceModel.scott(tuple(priors))
        maxwell = ChanceModel.maxwell()
        matrices = []
        while len(matrices) < 5:
            probs = rng.dirichlet(np.ones(k * k))
            cells = rng.multinomial(n, probs).reshape(k, k).astype(float)
            m = ConfusionMatrix(tuple(f"c{i}" for i in range(k)), cells)
            if tpr(m, 0).defined and ppv(m, 0).defined:
                matrices.append(m)
        vectors = {
            "f": [f_measure(m, 0).value for m in matrices],
            "jaccard": [jaccard(m, 0).value for m in matrices],
            "icsi": [icsi(m, 0).value for m in matrices],
            "kulczynski": [kulczynski(m, 0).value for m in matrices],
            "osr": [osr(m).value for m in matrices],
            "re_maxwell": [agreement(m, maxwell).value for m in matrices],
            "pi_scott": [agreement(m, scott).value for m in matrices],
        }
        for a, b in (
            ("f", "jaccard"),
            ("icsi", "kulczynski"),
            ("re_maxwell", "osr"),
            ("pi_scott", "osr"),
        ):
            sa = rank_values(ids, vectors[a]).structure
            sb = rank_values(ids, vectors[b]).structure
            tau = float(kendalltau(vectors[a], vectors[b])[0])
            if sa != sb or not tau >= 1.0 - 1e-9:
                violations += 1
    _criterion(4, violations == 0, f"{ensembles} ensembles x 4 pairs, {violations} violations")


def test_criterion_05_probe_finds_divergence_witness(capsys):
    code = main([
        "probe", "--measures", "combine_harmonic,combine_arithmetic",
        "--seed", "7", "--k", "2", "--n", "100", "--budget", "10000",
    ])
    out = capsys.readouterr().out
    ok = code == 0 and "witness yes" in out
    with capsys.disabled():
        _criterion(5, ok, "harmonic vs arithmetic witness within 10^4 budget")


def test_criterion_06_association_paradox():
    anti = ConfusionMatrix(("A", "B"), [[0, 10], [10, 0]])
    checks = [
        abs(cramers_v(anti).value - 1.0) <= 1e-9,
        abs(phi(anti).value - 1.0) <= 1e-9,
        osr(anti).value == 0.0,
        abs(icsi(anti, 0).value - (-1.0)) <= 1e-9,
        abs(icsi(anti, 1).value - (-1.0)) <= 1e-9,
    ]
    for r, c, n in [
        ((0.3, 0.7), (0.45, 0.55), 200),
        ((0.2, 0.3, 0.5), (0.5, 0.25, 0.25), 80),
        ((0.1, 0.2, 0.3, 0.4), (0.25, 0.25, 0.25, 0.25), 1_000),
    ]:
        m = ConfusionMatrix(tuple(f"c{i}" for i in range(len(r))), n * np.outer(r, c))
        checks.append(chi_square(m) <= 1e-9)
        checks.append(mutual_information(m) <= 1e-9)
        checks.append(cramers_v(m).value <= 1e-9)
    _criterion(6, all(checks), f"{sum(checks)}/{len(checks)} paradox checks")


def test_criterion_07_gti_constraints_and_recovery():
    start = time.monotonic()
    checks = []
    try:
        fit_gti(ConfusionMatrix(("A", "B"), [[3, 1], [2, 4]]))
        checks.append(False)
    except GtiError as exc:
        checks.append("three classes" in str(exc))
    try:
        fit_gti(ConfusionMatrix(("A", "B", "C"), np.diag([3.0, 4.0, 5.0])))
        checks.append(False)
    except GtiError as exc:
        checks.append("perfect" in str(exc))

    q = np.array([0.3, 0.3, 0.2, 0.2])
    a = np.array([0.4, 0.3, 0.2, 0.1])
    rng = np.random.default_rng(7_007)
    for theta in (0.3, 0.6, 0.9):
        expected = gti_expected(theta, q, a, 100_000)
        for _ in range(20):
            fit = fit_gti(gti_sample(rng, expected))
            checks.append(fit.converged and fit.iterations < 10_000)
            checks.append(abs(fit.theta_overall - theta) <= 0.02)
            checks.append(all(abs(t - theta) <= 0.03 for t in fit.theta_class))
    elapsed = time.monotonic() - start
    checks.append(elapsed < 10.0)
    _criterion(
        7, all(checks),
        f"{sum(checks)}/{len(checks)} checks, {elapsed:.2f}s for 60 replicates",
    )


def test_criterion_08_one_vs_rest_and_identity_weights(sweep_results):
    collapse_ok = (
        sweep_results["collapse_bad"] == 0 and sweep_results["collapse_checks"] > 0
    )
    plain = evaluate_all(M2)
    weighted = evaluate_all(
        M2, EvalConfig(weights=WeightMatrix(M2.labels, np.ones((3, 3))))
    )
    weights_ok = (
        plain.overall == weighted.overall
        and plain.per_class == weighted.per_class
        and plain.errors == weighted.errors
    )
    _criterion(
        8, collapse_ok and weights_ok,
        f"{sweep_results['collapse_checks']} collapse checks, "
        f"{sweep_results['collapse_bad']} violations; identity weights inert: {weights_ok}",
    )


def test_criterion_09_cli_byte_determinism(tmp_path, capsys):
    matrix_path = tmp_path / "m1.cm"
    matrix_path.write_text("2 A B\n40 10\n5 45\n", encoding="utf-8")
    pairs = sorted(expand_to_pairs(M1))
    labels_path = tmp_path / "m1.csv"
    labels_path.write_text(
        "true,estimated\n" + "\n".join(f"{t},{e}" for t, e in pairs) + "\n",
        encoding="utf-8",
    )
    outputs = []
    for argv in (
        ["eval", "--matrix", str(matrix_path)],
        ["eval", "--matrix", str(matrix_path)],
        ["eval", "--labels", str(labels_path)],
    ):
        code = main(argv)
        outputs.append((code, capsys.readouterr().out))
    codes_ok = all(code == 0 for code, _ in outputs)
    repeat_ok = outputs[0][1] == outputs[1][1]
    ingest_ok = outputs[0][1] == outputs[2][1]
    with capsys.disabled():
        _criterion(
            9, codes_ok and repeat_ok and ingest_ok,
            f"repeat identical: {repeat_ok}, matrix vs labels identical: {ingest_ok}",
        )


def test_criterion_10_scale_invariance():
    rng = np.random.default_rng(10_010)
    rate_measures = (tpr, tnr, ppv, npv, f_measure, jaccard, icsi, kulczynski)
    models = (ChanceModel.cohen(), ChanceModel.scott(), ChanceModel.maxwell())
    checks = failures = 0
    for _ in range(5):
        k = 4
        cells = (rng.multinomial(2_000, rng.dirichlet(np.ones(k * k))).reshape(k, k) + 1).astype(float)
        m = ConfusionMatrix(tuple(f"c{i}" for i in range(k)), cells)
        base_fit = fit_gti(m)
        for c in (2.0, 10.0, 0.5):
            scaled = ConfusionMatrix(m.labels, m.cells * c)

            def same(x, y):
                nonlocal checks, failures
                checks += 1
                if abs(x - y) > 1e-9:
                    failures += 1

            same(osr(scaled).value, osr(m).value)
            for i in range(k):
                for measure in rate_measures:
                    same(measure(scaled, i).value, measure(m, i).value)
            for model in models:
                same(agreement(scaled, model).value, agreement(m, model).value)
            same(cramers_v(scaled).value, cramers_v(m).value)
            same(mutual_information(scaled), mutual_information(m))
            for direction in ("predicted_from_true", "true_from_predicted"):
                same(theil_u(scaled, direction).value, theil_u(m, direction).value)
                same(gk_lambda(scaled, direction).value, gk_lambda(m, direction).value)
            scaled_fit = fit_gti(scaled)
            same(scaled_fit.theta_overall, base_fit.theta_overall)
            for s, b in zip(scaled_fit.theta_class, base_fit.theta_class):
                same(s, b)
    _criterion(10, failures == 0, f"{checks} comparisons, {failures} drifted past 1e-9")
