"""Acceptance criteria, one test each, every test printing a single verdict line.

Tolerances are pinned here and never loosened.  Checks are tuples
``(name, computed, target, tolerance, passed)``.
"""

import numpy as np
import pytest

from auxest import (DesignConstants, Population, PopulationSummary, SimulationConfig, SynthesisTarget,
                    build_table, exact_moments_enumeration, min_mse_mean, run_simulation,
                    summarize, synthesize_population)
from auxest import mean_estimators as me
from auxest import variance_estimators as ve
from auxest.cli import main
from auxest.theory import theory, theory_mean, theory_variance

from conftest import ACCEPTANCE_LINES


def close_rel(name, value, target, rel):
    return (name, value, target, f"{rel:.3g} rel", abs(value - target) <= rel * abs(target))


def close_abs(name, value, target, tol):
    return (name, value, target, f"±{tol:g}", abs(value - target) <= tol)


def at_most(name, value, limit):
    return (name, value, f"<= {limit:g}", "-", value <= limit)


def rows(table_id):
    return {(r.population, r.row): r for r in build_table(table_id)}


def verdict(record, number, title, checks):
    ok, failed = record(number, title, checks)
    assert ok, f"criterion {number} failed: {failed}"


def test_criterion_01_attribute_family_table(record_criterion):
    t = rows("ch1-5.1")
    printed = dict(ybar=100.0, t_NG=11.61, t1=7.36, t2=236.55, t3=227.69, t4=208.09, t5=185.42, t6=230.72,
                   t7=185.27, t8=230.77, t9=152.37, t10=237.81)
    checks = [close_rel(k, t[("I", k)].computed, v, 0.02) for k, v in printed.items()]
    checks += [close_abs("t_NG anchor", t[("I", "t_NG")].computed, 11.6, 0.1),
               close_abs("t1 anchor", t[("I", "t1")].computed, 7.4, 0.1)]
    verdict(record_criterion, 1, "ch1-5.1 PRE reproduction", checks)


def test_criterion_02_exponential_attribute_tables(record_criterion):
    single, double = rows("ch2-5.1"), rows("ch2-9.1")
    checks = [
        close_rel("(t5)opt I", single[("I", "(t5)opt")].computed, 241.98, 0.005),
        close_rel("(t5)opt II", single[("II", "(t5)opt")].computed, 117.61, 0.005),
        close_abs("t1 II", single[("II", "t1")].computed, 1.59, 0.05),
        close_rel("t6 pop 1", double[("1", "t6")].computed, 40.59, 0.005),
        close_rel("(t8)opt pop 1", double[("1", "(t8)opt")].computed, 112.32, 0.005),
    ]
    verdict(record_criterion, 2, "ch2-5.1 and ch2-9.1 PREs", checks)


def test_criterion_03_almost_unbiased_weights_and_pres(record_criterion):
    w, p = rows("ch4-5.1"), rows("ch4-5.2")
    checks = []
    for pop, target in (("I", (-2.2065, 2.4985, 0.7079)), ("II", (-20.93, 8.62, 13.30))):
        for lab, v in zip(("h0", "h1", "h2"), target):
            checks.append(close_abs(f"{lab} {pop}", w[(pop, lab)].computed, v, 0.01))
    checks += [
        close_rel("t1 I", p[("I", "t1")].computed, 272.75, 0.005),
        close_rel("t_h opt I", p[("I", "t_h (optimum)")].computed, 468.97, 0.005),
        close_rel("t_h opt II", p[("II", "t_h (optimum)")].computed, 198.04, 0.005),
    ]
    verdict(record_criterion, 3, "ch4-5.1 weights and ch4-5.2 PREs", checks)


def test_criterion_04_variance_classes(record_criterion):
    w, p = rows("ch5-4.1"), rows("ch5-4.2")
    printed = {"I": ((1.3942, -0.4858, 0.0916), (4.8811, -6.0647, 2.1837)),
               "II": ((1.1154, -0.1261, 0.0109), (5.5933, -7.2910, 2.6978))}
    checks = []
    for pop, (ratio, product) in printed.items():
        for labels, values in ((("w1", "w2", "w3"), ratio), (("k1", "k2", "k3"), product)):
            for lab, v in zip(labels, values):
                checks.append(close_abs(f"{lab} {pop}", w[(pop, lab)].computed, v, 0.001))
    opt = p[("I", "t_r (optimum)")]
    checks += [
        close_rel("t1 I", p[("I", "t1")].computed, 223.14, 0.005),
        close_rel("t2 I", p[("I", "t2")].computed, 235.19, 0.01),
        close_abs("optimum I computed", opt.computed, 340.6, 0.5),
        ("optimum I flagged", float(opt.status == "KNOWN-DISCREPANCY"), "KNOWN-DISCREPANCY", "-",
         opt.status == "KNOWN-DISCREPANCY"),
    ]
    verdict(record_criterion, 4, "ch5-4.1 weights and ch5-4.2 PREs", checks)


def test_criterion_05_general_family_back_solve(record_criterion):
    t = rows("ch6-4.2")
    checks = [
        close_rel("t1 (back-solve input)", t[("KC2004", "t1")].computed, 201.6564, 1e-9),
        close_abs("min MSE PRE", t[("KC2004", "min MSE(t)")].computed, 214.39, 0.1),
    ]
    verdict(record_criterion, 5, "ch6-4.2 min-MSE from back-solved C", checks)


def test_criterion_06_irreproducibility_register(record_criterion, capsys):
    ch3, ch4 = rows("ch3-6.1"), rows("ch4-5.4")
    pairs = [
        ("ch3 t1", ch3[("Murthy", "t1")], 366.96, 292.0),
        ("ch3 optimum", ch3[("Murthy", "t_o* (optimum)")], 877.54, 605.0),
        ("ch4-5.4 t1d", ch4[("III", "t1d")], 128.07, 178.0),
        ("ch4-5.4 optimum", ch4[("III", "t_w (optimum)")], 138.71, 226.0),
    ]
    checks = []
    for name, row, printed, approx in pairs:
        checks.append(close_rel(f"{name} computed", row.computed, approx, 0.02))
        checks.append((f"{name} printed kept", row.printed, printed, "exact", row.printed == printed))
    others = [r for r in list(ch3.values()) + list(ch4.values()) if r.row != "ybar"]
    flagged = sum(r.status == "KNOWN-DISCREPANCY" for r in others)
    checks.append(("rows flagged", flagged, len(others), "all", flagged == len(others)))
    for table_id in ("ch3-6.1", "ch4-5.4"):
        capsys.readouterr()
        code = main(["theory", "--table", table_id])
        text = capsys.readouterr().out
        shown = code == 0 and "KNOWN-DISCREPANCY" in text and "MISMATCH" not in text
        checks.append((f"{table_id} rendered with marker", float(shown), "marker", "-", shown))
    verdict(record_criterion, 6, "irreproducible tables reported, never passed", checks)


def test_criterion_07_algebraic_identities(record_criterion):
    rng = np.random.default_rng(20240607)
    worst = dict(weights=0.0, weights_2p=0.0, ratio_class=0.0, product_class=0.0)
    i = np.array([1.0, 2.0, 3.0])
    for _ in range(100):
        K, Cx, f1 = rng.uniform(-3, 3), rng.uniform(0.05, 2), rng.uniform(1e-4, 0.5)
        h0, h1, h2 = me.almost_unbiased_weights(K)
        b1, b2 = f1 * Cx ** 2 / 2 * (0.5 - K), f1 * Cx ** 2 / 2 * (0.5 + K)
        scale = abs(h0) + abs(h1) + abs(h2)
        res = max(abs(h0 + h1 + h2 - 1), abs(h1 - h2 - 2 * K)) / scale
        res = max(res, abs(h1 * b1 + h2 * b2) / (abs(h1 * b1) + abs(h2 * b2)))
        worst["weights"] = max(worst["weights"], res)
        w0, w1, w2 = me.almost_unbiased_weights_2p(K)
        scale = abs(w0) + abs(w1) + abs(w2)
        worst["weights_2p"] = max(worst["weights_2p"], abs(w0 + w1 + w2 - 1) / scale,
                                  abs(w1 - w2 - 2 * K) / scale, abs(w1 + w2 - 8 * K * K) / scale)
        theta, C = rng.uniform(0.1, 1.0), rng.uniform(-2, 2)
        for key, fn, sign, third in (("ratio_class", ve.ratio_class_weights, 1, i * (i + 1)),
                                     ("product_class", ve.product_class_weights, -1, i * (i - 1))):
            w = np.array(fn(theta, C))
            A = np.vstack([np.ones(3), i, third])
            rhs = np.array([1.0, sign * C / theta, 2 * C * C / theta ** 2])
            worst[key] = max(worst[key], float(np.max(np.abs(A @ w - rhs) / (np.abs(A) @ np.abs(w)))))
    checks = [at_most(f"{k} residual", v, 1e-10) for k, v in worst.items()]

    step = 1e-3
    attr = PopulationSummary.from_scalars(Ybar=3.36, P=0.1236, rho_pb=0.766, Cy=0.604, Cp=2.19)
    d = DesignConstants(89, 20)
    d2 = DesignConstants(89, 20, 45)
    a0 = me.optimum_alpha_attr(attr)
    m = lambda a: theory_mean(me.ExpCombinedAttr(a), attr, d).mse
    checks.append(at_most("combined attr slope", abs(m(a0 + step) - m(a0 - step)) / (2 * step) / m(a0), 1e-6))
    aux = PopulationSummary.from_scalars(Xbar=283.875, Ybar=5182.638, Cy=0.3520, Cx=0.9430, rho=0.9136)
    da = DesignConstants(80, 20)
    theta = me.theta_exp_family(1.0, 0.943, aux.Xbar)
    ax = me.optimum_alpha_exp(aux, theta)
    m = lambda a: theory_mean(me.ExpMixedAux(1.0, 0.943, a), aux, da).mse
    checks.append(at_most("mixed exp slope", abs(m(ax + step) - m(ax - step)) / (2 * step) / m(ax), 1e-6))
    var = PopulationSummary.from_scalars(Sy2=1.0, Sx2=1654.44, beta2x=38.8898, beta2y=25.8969, h=26.8142)
    dv = DesignConstants(10_000, 100)
    tg = ve.theta_general_family(1.0, 38.8898, var.Sx2)
    av = ve.optimum_alpha_var(var.C, tg)
    m = lambda a: theory_variance(ve.GeneralFamily(1.0, 38.8898, a), var, dv).mse
    checks.append(at_most("general family slope", abs(m(av + step) - m(av - step)) / (2 * step) / m(av), 1e-6))

    two = PopulationSummary.from_scalars(Ybar=1.0, Xbar=1.0, Cy=0.3542, Cx=0.9484, rho=0.9150,
                                         P=0.2, Cp=2.0, rho_pb=0.6)
    d3 = DesignConstants(80, 8, 20)
    bounds = [
        ("combined attr", theory_mean(me.ExpCombinedAttr(a0), attr, d).mse, min_mse_mean(attr, d)),
        ("combined attr 2P", theory_mean(me.ExpCombinedAttr2P(a0), attr, d2).mse,
         min_mse_mean(attr, d2, "two_phase")),
        ("almost unbiased", theory_mean(me.AlmostUnbiasedExp(*me.almost_unbiased_weights(two.K)), two, d3).mse,
         min_mse_mean(two, d3)),
        ("almost unbiased 2P",
         theory_mean(me.AlmostUnbiasedExp2P(*me.almost_unbiased_weights_2p(two.K)), two, d3).mse,
         min_mse_mean(two, d3, "two_phase", via="rho")),
    ]
    for name, got, bound in bounds:
        checks.append(at_most(f"{name} vs bound", abs(got - bound) / bound, 1e-12))
    verdict(record_criterion, 7, "weight systems, stationarity, optimum equals bound", checks)


def test_criterion_08_oracle(record_criterion, small_pop):
    rep = exact_moments_enumeration(small_pop, 4, [me.MeanPerUnit(), ve.SampleVariance()])
    ybar, s2 = rep.result("ybar"), rep.result("s2")
    prop = Population(np.array([1.0, 2.0, 3.0, 4.0]), np.array([2.0, 4.0, 6.0, 8.0]))
    ratio = exact_moments_enumeration(prop, 2, [me.ClassicalRatioAux()]).result("classical_ratio")
    checks = [
        at_most("ybar |bias|/Ybar", abs(ybar.bias) / ybar.truth, 1e-12),
        at_most("s2 |bias|/S2", abs(s2.bias) / s2.truth, 1e-12),
        at_most("ratio |bias| proportional", abs(ratio.bias), 1e-12),
        at_most("ratio MSE proportional", ratio.mse, 1e-24),
    ]
    verdict(record_criterion, 8, "exact enumeration oracle (N=12, n=4)", checks)


@pytest.fixture(scope="module")
def mc_population():
    return synthesize_population(SynthesisTarget(N=5000, Ybar=50.0, Cy=0.6, Cx=1.0, rho=0.9), seed=7)


def test_criterion_09_monte_carlo_vs_theory(record_criterion, mc_population):
    s = summarize(mc_population)
    theta = ve.theta_general_family(1.0, 0.0, s.Sx2)
    specs = [me.ExpRatioAux(1.0, 0.0), me.ClassicalRatioAux(),
             ve.GeneralFamily(1.0, 0.0, ve.optimum_alpha_var(s.C, theta))]
    cfg = SimulationConfig(100_000, 2024, DesignConstants(5000, 50), specs, workers=8, block=5000)
    rep = run_simulation(mc_population, cfg)
    checks = [close_rel(f"{r.label} MSE", r.mse, r.theory_mse, 0.10) for r in rep.results]

    biased = synthesize_population(SynthesisTarget(N=5000, Ybar=50.0, Cy=0.6, Cx=1.0, rho=0.1), seed=7)
    sb = summarize(biased)
    d = DesignConstants(5000, 10)
    t1 = me.AlmostUnbiasedExp(0.0, 1.0, 0.0)
    th = me.AlmostUnbiasedExp(*me.almost_unbiased_weights(sb.K))
    first_order = theory(t1, sb, d).bias / sb.Ybar
    brep = run_simulation(biased, SimulationConfig(100_000, 2025, d, [t1, th], workers=8, block=5000))
    b1, bh = (abs(r.bias) for r in brep.results)
    checks += [
        ("t1 first-order |bias|/Ybar", abs(first_order), "> 0.01", "-", abs(first_order) > 0.01),
        at_most("|bias t_h| / |bias t1|", bh / b1, 0.3),
    ]
    try:
        verdict(record_criterion, 9, "simulation vs first-order theory (N=5000, n=50, 1e5 draws)", checks)
    finally:
        _lognormal_diagnostic()


def _lognormal_diagnostic():
    """Same check on a right-skewed auxiliary; informational only."""
    pop = synthesize_population(SynthesisTarget(N=5000, Ybar=50.0, Cy=0.6, Cx=1.0, rho=0.9,
                                                x_distribution="lognormal"), seed=7)
    s = summarize(pop)
    theta = ve.theta_general_family(1.0, 0.0, s.Sx2)
    specs = [me.ExpRatioAux(1.0, 0.0), me.ClassicalRatioAux(),
             ve.GeneralFamily(1.0, 0.0, ve.optimum_alpha_var(s.C, theta))]
    rep = run_simulation(pop, SimulationConfig(100_000, 2024, DesignConstants(5000, 50), specs,
                                               workers=8, block=5000))
    gaps = "; ".join(f"{r.label} rel gap {r.delta_mse:+.3f}" for r in rep.results)
    line = f"info (criterion 9, lognormal x, beta2x={s.beta2x:.3g}): {gaps}"
    ACCEPTANCE_LINES.append(line)
    print("\n" + line)


def test_criterion_10_determinism(record_criterion, synthetic_pop):
    specs = [me.ClassicalRatioAux(), me.NaikGuptaRatio(), me.ExpCombinedAttr(0.4), ve.IsakiRatio(),
             ve.UpadhyayaSingh()]
    outputs = {}
    for workers in (1, 8):
        cfg = SimulationConfig(50_000, 99, DesignConstants(2000, 15), specs, workers=workers, block=1000)
        rep = run_simulation(synthetic_pop, cfg)
        outputs[workers] = (rep.to_json().encode(), rep.to_csv().encode())
    same_json = outputs[1][0] == outputs[8][0]
    same_csv = outputs[1][1] == outputs[8][1]
    checks = [("JSON bytes equal", float(same_json), "identical", "-", same_json),
              ("CSV bytes equal", float(same_csv), "identical", "-", same_csv)]
    verdict(record_criterion, 10, "report bytes for 1 vs 8 threads", checks)
