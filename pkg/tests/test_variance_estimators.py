import pytest

from auxest import estimate_variance
from auxest import variance_estimators as ve
from auxest.errors import ConfigError, MissingKnownParam, UndefinedEstimate, ZeroDenominator, ZeroTheta
from auxest.sampling import SampleStats
from auxest.specs import KnownParams

K = KnownParams(Sx2=3.0, beta2x=1.0, Cx=0.4)


def st(sy2=4.0, sx2=2.0):
    return SampleStats(n=10, ybar=1.0, sy2=sy2, sx2=sx2)


def test_isaki_identity():
    assert estimate_variance(ve.IsakiRatio(), st(sx2=3.0), K) == pytest.approx(4.0)


def test_upadhyaya_singh_hand_value():
    assert estimate_variance(ve.UpadhyayaSingh(), st(), K) == pytest.approx(16 / 3)


@pytest.mark.parametrize("a,b", [(1.0, 0.0), (2.0, 5.0), (-1.5, -6.0), (0.5, -3.0)])
def test_general_family_alpha_zero_is_s2(a, b):
    assert estimate_variance(ve.GeneralFamily(a, b, 0.0), st(), K) == pytest.approx(4.0)


def test_general_family_rejects_nonpositive_known_denominator():
    with pytest.raises(UndefinedEstimate):
        estimate_variance(ve.GeneralFamily(-1.5, 0.3, 0.0), st(), K)


def test_general_family_members():
    assert (estimate_variance(ve.GeneralFamily(1.0, 0.0, 1.0), st(), K)
            == pytest.approx(estimate_variance(ve.IsakiRatio(), st(), K)))
    assert (estimate_variance(ve.var_member(6, K), st(), K)
            == pytest.approx(estimate_variance(ve.UpadhyayaSingh(), st(), K)))
    assert estimate_variance(ve.var_member(2, K), st(), K) == pytest.approx(4.0 * (3 - 0.4) / (2 - 0.4))
    assert isinstance(ve.var_member(0, K), ve.SampleVariance)


def test_kadilar_cingi_member_resolves_from_known():
    k = KnownParams(Sx2=30.0, beta2x=2.5, Cx=0.4)
    s = st(sx2=25.0)
    for i in (2, 3, 4, 5):
        spec = ve.KadilarCingiMember(i)
        assert estimate_variance(spec, s, k) == pytest.approx(estimate_variance(ve.var_member(i, k), s, k))
    with pytest.raises(ConfigError):
        ve.KadilarCingiMember(6)


def test_ratio_class_unit_weight_is_upadhyaya_singh():
    assert (estimate_variance(ve.RatioTypeClass(1, 0, 0), st(), K)
            == pytest.approx(estimate_variance(ve.UpadhyayaSingh(), st(), K)))
    u = 4 / 3
    assert estimate_variance(ve.RatioTypeClass(0.5, 0.25, 0.25), st(), K) == pytest.approx(
        4 * (0.5 * u + 0.25 * u ** 2 + 0.25 * u ** 3))
    assert estimate_variance(ve.ProductTypeClass(0.5, 0.25, 0.25), st(), K) == pytest.approx(
        4 * (0.5 / u + 0.25 / u ** 2 + 0.25 / u ** 3))


def test_scale_law():
    specs = [ve.IsakiRatio(), ve.UpadhyayaSingh(), ve.GeneralFamily(2, 1, 0.7),
             ve.RatioTypeClass(1.2, -0.5, 0.3), ve.ProductTypeClass(3, -3, 1)]
    for spec in specs:
        assert estimate_variance(spec, st(sy2=8.0 * 9), K) == pytest.approx(
            9 * estimate_variance(spec, st(sy2=8.0), K), rel=1e-14)


def test_undefined_and_missing():
    with pytest.raises(UndefinedEstimate):
        estimate_variance(ve.IsakiRatio(), st(sx2=0.0), K)
    with pytest.raises(UndefinedEstimate):
        estimate_variance(ve.GeneralFamily(1.0, 2.5, 1.0), st(sx2=2.0), K)
    with pytest.raises(MissingKnownParam):
        estimate_variance(ve.UpadhyayaSingh(), st(), KnownParams(Sx2=1.0))
    with pytest.raises(ConfigError):
        ve.RatioTypeClass(0.5, 0.5, 0.5)
    with pytest.raises(ConfigError):
        ve.GeneralFamily(0.0, 1.0)


def _ch5(Sx2, beta2x, h):
    return ve.theta_upadhyaya_singh(Sx2, beta2x), (h - 1) / (beta2x - 1)


def test_ratio_class_weights_published_populations():
    theta, C = _ch5(1654.44, 38.8898, 26.8142)
    assert theta.theta == pytest.approx(0.97703, abs=1e-5)
    assert C == pytest.approx(0.68130, abs=1e-5)
    assert ve.ratio_class_weights(theta, C) == pytest.approx((1.3943, -0.4859, 0.0916), abs=1e-4)
    assert ve.product_class_weights(theta, C) == pytest.approx((4.8809, -6.0645, 2.1836), abs=2e-4)
    theta, C = _ch5(11838.85, 8.05448, 7.31399)
    assert ve.ratio_class_weights(theta, C) == pytest.approx((1.1153, -0.1261, 0.0109), abs=1e-4)
    assert ve.product_class_weights(theta, C) == pytest.approx((5.5934, -7.2911, 2.6977), abs=2e-4)


def test_weight_special_cases():
    assert ve.ratio_class_weights(0.8, 0.8) == pytest.approx((1, 0, 0), abs=1e-15)
    assert ve.product_class_weights(0.8, 0.0) == pytest.approx((3, -3, 1))
    with pytest.raises(ZeroTheta):
        ve.ratio_class_weights(0.0, 1.0)
    with pytest.raises(ZeroTheta):
        ve.product_class_weights(0.0, 1.0)


def test_optimum_alpha_var():
    assert ve.optimum_alpha_var(0.0, 0.7) == 0.0
    assert ve.optimum_alpha_var(0.7, 0.7) == 1.0
    theta = ve.theta_general_family(1.0, 0.0, 491.89 ** 2)
    assert theta.flavor == "general"
    assert ve.optimum_alpha_var(1.3072, theta) == pytest.approx(1.3072)
    with pytest.raises(ZeroTheta):
        ve.optimum_alpha_var(1.0, 0.0)


def test_theta_flavors():
    t = ve.theta_upadhyaya_singh(10.0, 2.0)
    assert t.flavor == "us" and 0 < t.theta < 1 and float(t) == pytest.approx(10 / 12)
    assert ve.theta_general_family(2.0, 1.0, 3.0).theta == pytest.approx(6 / 5)
    with pytest.raises(ZeroDenominator):
        ve.theta_general_family(1.0, 3.0, 3.0)
    with pytest.raises(ZeroDenominator):
        ve.theta_upadhyaya_singh(2.0, -2.0)
