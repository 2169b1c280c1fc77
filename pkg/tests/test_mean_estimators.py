import math

import numpy as np
import pytest

from auxest import PopulationSummary, estimate_mean
from auxest import mean_estimators as me
from auxest.errors import (ConfigError, MissingKnownParam, MissingStatistic, MissingSummaryField,
                           SingularTheta, UndefinedEstimate, ZeroDenominator)
from auxest.sampling import SampleStats, TwoPhaseStats
from auxest.specs import KnownParams


def stats(**kw):
    kw.setdefault("n", 10)
    return SampleStats(**kw)


def test_naik_gupta_ratio_identity():
    assert estimate_mean(me.NaikGuptaRatio(), stats(ybar=7.0, p=0.3), KnownParams(P=0.3)) == pytest.approx(7.0)


def test_naik_gupta_forms():
    st, k = stats(ybar=6.0, p=0.2), KnownParams(P=0.3)
    assert estimate_mean(me.NaikGuptaRatio(), st, k) == pytest.approx(9.0)
    assert estimate_mean(me.NaikGuptaProduct(), st, k) == pytest.approx(4.0)


def test_exp_ratio_attr_hand_value():
    v = estimate_mean(me.ExpRatioAttr(), stats(ybar=10.0, p=0.1), KnownParams(P=0.2))
    assert v == pytest.approx(10 * math.exp(0.1 / 0.3))
    assert v == pytest.approx(13.9561, abs=1e-4)


def test_exp_combined_reductions():
    st, k = stats(ybar=4.2, p=0.35), KnownParams(P=0.25)
    combined = lambda a: estimate_mean(me.ExpCombinedAttr(a), st, k)
    assert combined(1.0) == estimate_mean(me.ExpRatioAttr(), st, k)
    assert combined(0.0) == estimate_mean(me.ExpProductAttr(), st, k)


def test_almost_unbiased_reductions():
    st, k = stats(ybar=5.0, xbar=11.0), KnownParams(Xbar=10.0)
    assert estimate_mean(me.AlmostUnbiasedExp(1, 0, 0), st, k) == pytest.approx(5.0)
    assert (estimate_mean(me.AlmostUnbiasedExp(0, 1, 0), st, k)
            == pytest.approx(estimate_mean(me.ExpRatioAux(1, 0), st, k)))
    assert (estimate_mean(me.AlmostUnbiasedExp(0, 0, 1), st, k)
            == pytest.approx(5.0 * math.exp((11 - 10) / 21)))


def test_attr_diff_ratio_reductions():
    st = stats(ybar=3.0, p=0.4, bphi=2.5)
    k = KnownParams(P=0.3, Bphi=1.0)
    no_slope = estimate_mean(me.AttrDiffRatio(1, 0, "none"), st, k)
    assert no_slope == estimate_mean(me.NaikGuptaRatio(), st, k)
    sample = estimate_mean(me.AttrDiffRatio(1, 0), st, k)
    assert sample == pytest.approx((3.0 + 2.5 * (0.3 - 0.4)) * 0.3 / 0.4)
    pop = estimate_mean(me.AttrDiffRatio(2, 1, "population"), st, k)
    assert pop == pytest.approx((3.0 + 1.0 * (0.3 - 0.4)) * 1.6 / 1.8)


def test_mixed_aux_reduces_to_bahl_tuteja():
    st, k = stats(ybar=5.0, xbar=9.0), KnownParams(Xbar=10.0)
    assert (estimate_mean(me.ExpMixedAux(1, 3.65, 1.0), st, k)
            == pytest.approx(estimate_mean(me.ExpRatioAux(1, 0), st, k)))
    assert (estimate_mean(me.ExpMixedAux(1, 3.65, 0.0), st, k)
            == pytest.approx(estimate_mean(me.ExpRatioAux(1, 3.65), st, k)))


def test_classical_aux_estimators():
    st, k = stats(ybar=5.0, xbar=8.0), KnownParams(Xbar=10.0)
    assert estimate_mean(me.ClassicalRatioAux(), st, k) == pytest.approx(6.25)
    assert estimate_mean(me.ClassicalProductAux(), st, k) == pytest.approx(4.0)


def test_two_phase_forms():
    st = TwoPhaseStats(n=5, ybar=4.0, p=0.2, xbar=9.0, n_prime=20, p_prime=0.3, xbar_prime=10.0)
    k = KnownParams()
    assert estimate_mean(me.ClassicalRatio2P(), st, k) == pytest.approx(6.0)
    assert estimate_mean(me.ClassicalProduct2P(), st, k) == pytest.approx(4.0 * 0.2 / 0.3)
    assert estimate_mean(me.ExpRatioAttr2P(), st, k) == pytest.approx(4.0 * math.exp(0.1 / 0.5))
    assert estimate_mean(me.ExpProductAttr2P(), st, k) == pytest.approx(4.0 * math.exp(-0.1 / 0.5))
    assert estimate_mean(me.ExpRatioAux2P(), st, k) == pytest.approx(4.0 * math.exp(1 / 19))
    assert estimate_mean(me.ExpProductAux2P(), st, k) == pytest.approx(4.0 * math.exp(-1 / 19))
    assert (estimate_mean(me.ExpCombinedAttr2P(1.0), st, k)
            == pytest.approx(estimate_mean(me.ExpRatioAttr2P(), st, k)))
    assert estimate_mean(me.AlmostUnbiasedExp2P(1, 0, 0), st, k) == pytest.approx(4.0)


def test_undefined_draws():
    k = KnownParams(P=0.2, Xbar=10.0)
    with pytest.raises(UndefinedEstimate):
        estimate_mean(me.NaikGuptaRatio(), stats(ybar=1.0, p=0.0), k)
    with pytest.raises(UndefinedEstimate):
        estimate_mean(me.ExpRatioAux(1.0, -12.0), stats(ybar=1.0, xbar=13.0), k)
    with pytest.raises(UndefinedEstimate):
        estimate_mean(me.ExpRatioAttr(), stats(ybar=1.0, p=-0.2), KnownParams(P=0.2))


def test_negative_shift_of_one_sign_is_defined():
    v = estimate_mean(me.ExpRatioAux(1.0, -20.0), stats(ybar=2.0, xbar=12.0), KnownParams(Xbar=10.0))
    assert v == pytest.approx(2.0 * math.exp((-10 + 8) / (-18)))


def test_missing_inputs():
    with pytest.raises(MissingKnownParam):
        estimate_mean(me.NaikGuptaRatio(), stats(ybar=1.0, p=0.1), KnownParams())
    with pytest.raises(MissingStatistic):
        estimate_mean(me.ExpRatioAux(), stats(ybar=1.0), KnownParams(Xbar=1.0))


def test_spec_validation():
    with pytest.raises(ConfigError):
        me.AttrDiffRatio(0.0, 1.0)
    with pytest.raises(ConfigError):
        me.ExpRatioAux(0.0, 1.0)
    with pytest.raises(ConfigError):
        me.AlmostUnbiasedExp(0.5, 0.5, 0.5)
    with pytest.raises(ConfigError):
        me.AlmostUnbiasedExp2P(0.2, 0.2, 0.2)


def test_scale_equivariance():
    k = KnownParams(P=0.3, Xbar=10.0, Bphi=2.0)
    base = dict(p=0.25, xbar=9.0)
    for spec in [me.NaikGuptaRatio(), me.AttrDiffRatio(1, 2), me.ExpCombinedAttr(0.3),
                 me.ExpMixedAux(1, 2, 0.4), me.AlmostUnbiasedExp(0.2, 0.5, 0.3)]:
        a = estimate_mean(spec, stats(ybar=3.0, bphi=1.5, **base), k)
        b = estimate_mean(spec, stats(ybar=6.0, bphi=3.0, **base), KnownParams(P=0.3, Xbar=10.0, Bphi=4.0))
        assert b == pytest.approx(2 * a, rel=1e-12)


def test_optimum_alpha_attr():
    assert me.optimum_alpha_attr(0.0) == 0.5
    assert me.optimum_alpha_attr(-0.5) == 0.0
    s = PopulationSummary.from_scalars(rho_pb=0.766, Cy=0.604, Cp=2.19012)
    assert s.Kp == pytest.approx(0.21125, abs=1e-5)
    assert me.optimum_alpha_attr(s) == pytest.approx(0.71125, abs=1e-5)
    with pytest.raises(MissingSummaryField):
        me.optimum_alpha_attr(PopulationSummary())


def test_theta_and_optimum_alpha_exp():
    assert me.theta_exp_family(1.0, 0.0, 283.875) == 0.5
    theta2 = me.theta_exp_family(1.0, 3.65, 283.875)
    assert theta2 == pytest.approx(0.49365, abs=1e-5)
    assert me.theta_exp_family(1e-12, 1.0, 283.875) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(ZeroDenominator):
        me.theta_exp_family(1.0, -2.0, 2.0)
    murthy = PopulationSummary.from_scalars(Xbar=283.875, Ybar=5182.638, Cy=0.3520, Cx=0.9430, rho=0.9136)
    assert me.optimum_alpha_exp(murthy, theta2) == pytest.approx(-24.03, abs=0.05)
    assert me.optimum_alpha_exp(0.3, 0.3) == 0.0
    with pytest.raises(SingularTheta):
        me.optimum_alpha_exp(0.3, 0.5)


def test_almost_unbiased_weights():
    assert me.almost_unbiased_weights(0.0) == (1.0, 0.0, 0.0)
    K1 = 0.887 * 1.4177 / 1.4045
    assert me.almost_unbiased_weights(K1) == pytest.approx((-2.2066, 2.4986, 0.7080), abs=1e-4)
    h = me.almost_unbiased_weights(-2.34167)
    assert h == pytest.approx((1 - 4 * 2.34167 ** 2, -2.34167 + 2 * 2.34167 ** 2,
                               2.34167 + 2 * 2.34167 ** 2), rel=1e-15)
    assert h == pytest.approx((-20.93, 8.62, 13.30), abs=0.01)


def test_almost_unbiased_weights_2p():
    assert me.almost_unbiased_weights_2p(0.0) == (1.0, 0.0, 0.0)
    w0, w1, w2 = me.almost_unbiased_weights_2p(0.34176)
    assert (w1, w2) == pytest.approx((0.8090, 0.1254), abs=1e-4)
    assert w0 == pytest.approx(0.0656, abs=1e-4)
    assert w0 + w1 + w2 == 1.0


def test_bias_annihilating_weights_match_first_order_solution():
    for K in (-1.3, 0.0, 0.2, 0.9):
        b1, b2 = 0.5 - K, 0.5 + K
        assert me.bias_annihilating_weights(K, b1, b2) == pytest.approx(me.almost_unbiased_weights(K),
                                                                        abs=1e-12)
    with pytest.raises(ZeroDenominator):
        me.bias_annihilating_weights(0.2, 1.0, -1.0)


def test_attr_ratio_constants(ch1_summary):
    assert me.attr_ratio_constant(1, ch1_summary) == pytest.approx(27.184, abs=1e-3)
    assert me.attr_ratio_constant(2, ch1_summary) == pytest.approx(3.36 / 6.35541, rel=1e-6)
    assert me.attr_ratio_constant(2, ch1_summary) < me.attr_ratio_constant(1, ch1_summary)
    with pytest.raises(ConfigError):
        me.attr_ratio_constant(11, ch1_summary)


def test_member_constructors(ch1_summary):
    m = me.attr_member(5, ch1_summary)
    assert (m.m1, m.m2, m.member) == (6.23181, 2.19, 5)
    k = KnownParams(Xbar=100.0, Cx=0.5, beta2x=3.0, rho=0.8)
    e = me.exp_aux_member(9, k)
    assert (e.a, e.b) == (3.0, 0.8)
    mixed = me.exp_mixed_member(2, 0.3, k)
    assert (mixed.a, mixed.b, mixed.alpha) == (1.0, 3.0, 0.3)


def test_batch_evaluation_flags_only_bad_draws():
    from auxest.specs import evaluate_batch
    st = SampleStats(n=5, ybar=np.array([1.0, 2.0, 3.0]), p=np.array([0.2, 0.0, 0.4]))
    values, ok, reasons = evaluate_batch(me.NaikGuptaRatio(), st, KnownParams(P=0.2))
    assert list(ok) == [True, False, True]
    assert math.isnan(values[1]) and values[0] == pytest.approx(1.0)
    assert reasons
