"""First-order bias and MSE of every estimator, optimum bounds, PRE and efficiency conditions.

The formulas come from Taylor linearization in the relative errors
``e0 = ybar/Ybar - 1``, ``e1 = xbar/Xbar - 1`` (or ``p/P - 1``) and their
first-phase analogues, keeping terms up to order ``1/n``.  Mean-estimator
formulas use ``f1 = 1/n - 1/N`` and, for two-phase designs, ``f3 = 1/n - 1/n'``.
Variance-estimator formulas use ``design.variance_factor``: ``1/n`` by default,
or ``f1`` when ``ignore_fpc`` is false.

``bias_form`` selects between two first-order biases for the exponential
families.  ``"printed"`` (the default) is the published convention, which
drops the ``z^2/(1 + z)`` part of the expansion of the exponent's
denominator and so reports ``Ca^2 / 8`` style coefficients.  ``"expanded"``
carries that term and gives e.g. ``f (3/8 Ca^2 - rho Cy Ca / 2)`` for the
Bahl-Tuteja ratio estimator; this is what Monte Carlo runs converge to.  For
estimators with a single unambiguous expansion both forms agree.  Where the
published convention gives no bias at all the printed form leaves it unset.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from . import mean_estimators as me
from . import variance_estimators as ve
from .errors import (
    ConfigError,
    InfeasibleMoments,
    PhaseMismatch,
    ZeroDenominator,
    ZeroMse,
)
from .population import DesignConstants, PopulationSummary

__all__ = [
    "TheoryMoments",
    "EfficiencyReport",
    "theory_mean",
    "theory_variance",
    "theory",
    "min_mse_mean",
    "min_mse_variance",
    "pre",
    "efficiency_conditions",
    "variance_theta",
    "BIAS_FORMS",
]

APPROX_ORDER = "O(1/n)"
BIAS_FORMS = ("printed", "expanded")


@dataclass(frozen=True)
class TheoryMoments:
    """First-order bias and MSE in the units of the estimand; ``bias`` may be unset."""

    bias: Optional[float]
    mse: float
    approx_order: str = APPROX_ORDER


@dataclass(frozen=True)
class EfficiencyReport:
    """One comparison predicate: it holds when ``left >= right``."""

    predicate: str
    left: float
    right: float
    holds: bool


def pre(mse_reference: float, mse_candidate: float) -> float:
    """Percent relative efficiency ``100 * reference / candidate``."""
    if not mse_candidate > 0:
        raise ZeroMse(f"candidate MSE must be positive, got {mse_candidate!r}")
    return 100.0 * mse_reference / mse_candidate


def _check_form(bias_form):
    if bias_form not in BIAS_FORMS:
        raise ConfigError(f"bias_form must be one of {BIAS_FORMS}, not {bias_form!r}")


def _f3(design: DesignConstants, spec) -> float:
    if not design.two_phase:
        raise PhaseMismatch(f"{spec.label} needs a two-phase design (n' unset)")
    return design.f3


# exponential building blocks ------------------------------------------------
#
# Ca is the CV of the auxiliary (x or phi), r = rho Cy Ca.  ``fa`` is f1 for
# known population constants and f3 when the first phase stands in for them.

def _exp_mix_mse(Ybar, Cy, Ca, r, f1, fa, alpha):
    """MSE of ``ybar [alpha e^{-z} + (1 - alpha) e^{z}]`` with ``z`` the half relative error."""
    g = alpha - 0.5
    return Ybar ** 2 * (f1 * Cy ** 2 + fa * (g * g * Ca ** 2 - 2.0 * g * r))


def _exp_mix_bias_expanded(Ybar, Ca, r, fa, alpha):
    return fa * Ybar * ((0.5 * alpha - 0.125) * Ca ** 2 + (0.5 - alpha) * r)


def _attr_terms(s: PopulationSummary):
    Ybar, Cy, Cp, rho_pb = s.require("Ybar", "Cy", "Cp", "rho_pb")
    return Ybar, Cy, Cp, rho_pb * Cy * Cp


def _aux_terms(s: PopulationSummary):
    Ybar, Cy, Cx, rho = s.require("Ybar", "Cy", "Cx", "rho")
    return Ybar, Cy, Cx, rho * Cy * Cx


# mean estimators -------------------------------------------------------------

def _mpu(spec, s, d, form):
    Ybar, Cy = s.require("Ybar", "Cy")
    return TheoryMoments(0.0, d.f1 * Ybar ** 2 * Cy ** 2)


def _ng_ratio(spec, s, d, form):
    Ybar, Cy, Cp, r = _attr_terms(s)
    bias = d.f1 * Ybar * (Cp ** 2 - r) if form == "expanded" else None
    return TheoryMoments(bias, d.f1 * Ybar ** 2 * (Cy ** 2 + Cp ** 2 - 2.0 * r))


def _ng_product(spec, s, d, form):
    Ybar, Cy, Cp, r = _attr_terms(s)
    bias = d.f1 * Ybar * r if form == "expanded" else None
    return TheoryMoments(bias, d.f1 * Ybar ** 2 * (Cy ** 2 + Cp ** 2 + 2.0 * r))


def _attr_diff_ratio(spec, s, d, form):
    Ybar, P, Sy2, Sphi2, Syphi = s.require("Ybar", "P", "Sy2", "Sphi2", "Syphi")
    den = spec.m1 * P + spec.m2
    if den == 0:
        raise ZeroDenominator("m1 P + m2 = 0")
    R = Ybar * spec.m1 / den
    if spec.slope == "none":
        mse = d.f1 * (Sy2 + R * R * Sphi2 - 2.0 * R * Syphi)
        r = R / Ybar
        bias = d.f1 * (-r * Syphi + Ybar * r * r * Sphi2)
    else:
        rho_pb = s.require("rho_pb")
        mse = d.f1 * (R * R * Sphi2 + Sy2 * (1.0 - rho_pb ** 2))
        # with an estimated slope the bias picks up third-moment terms
        bias = d.f1 * R * R * Sphi2 / Ybar if spec.slope == "population" else None
    return TheoryMoments(bias if form == "expanded" else None, mse)


def _exp_ratio_attr(spec, s, d, form):
    Ybar, Cy, Cp, r = _attr_terms(s)
    if form == "expanded":
        bias = _exp_mix_bias_expanded(Ybar, Cp, r, d.f1, 1.0)
    else:
        bias = d.f1 * Ybar * (Cp ** 2 / 8.0 - r / 2.0)
    return TheoryMoments(bias, d.f1 * Ybar ** 2 * (Cy ** 2 + Cp ** 2 / 4.0 - r))


def _exp_product_attr(spec, s, d, form):
    Ybar, Cy, Cp, r = _attr_terms(s)
    if form == "expanded":
        bias = _exp_mix_bias_expanded(Ybar, Cp, r, d.f1, 0.0)
    else:
        bias = d.f1 * Ybar * (Cp ** 2 / 8.0 + r / 2.0)
    return TheoryMoments(bias, d.f1 * Ybar ** 2 * (Cy ** 2 + Cp ** 2 / 4.0 + r))


def _exp_combined_attr(spec, s, d, form):
    Ybar, Cy, Cp, r = _attr_terms(s)
    a = spec.alpha
    if form == "expanded":
        bias = _exp_mix_bias_expanded(Ybar, Cp, r, d.f1, a)
    else:
        bias = d.f1 * Ybar * (Cp ** 2 / 8.0 + r * (0.5 - a))
    return TheoryMoments(bias, _exp_mix_mse(Ybar, Cy, Cp, r, d.f1, d.f1, a))


def _theta_aux(s, a, b):
    return me.theta_exp_family(a, b, s.require("Xbar"))


def _exp_aux_parts(s, d, theta, form):
    Ybar, Cy, Cx, r = _aux_terms(s)
    c2 = 1.5 if form == "expanded" else 1.0
    bias = d.f1 * Ybar * (c2 * theta ** 2 * Cx ** 2 - theta * r)
    mse = d.f1 * Ybar ** 2 * (Cy ** 2 + theta ** 2 * Cx ** 2 - 2.0 * theta * r)
    return bias, mse


def _exp_ratio_aux(spec, s, d, form):
    bias, mse = _exp_aux_parts(s, d, _theta_aux(s, spec.a, spec.b), form)
    return TheoryMoments(bias, mse)


def _exp_mixed_aux(spec, s, d, form):
    Ybar, Cy, Cx, r = _aux_terms(s)
    theta = _theta_aux(s, spec.a, spec.b)
    a = spec.alpha
    g = a / 2.0 + theta - a * theta
    mse = d.f1 * Ybar ** 2 * (Cy ** 2 + Cx ** 2 * g * g - 2.0 * r * g)
    b1, _ = _exp_aux_parts(s, d, 0.5, form)
    bi, _ = _exp_aux_parts(s, d, theta, form)
    return TheoryMoments(a * b1 + (1.0 - a) * bi, mse)


def _classical_ratio(spec, s, d, form):
    Ybar, Cy, Cx, r = _aux_terms(s)
    return TheoryMoments(d.f1 * Ybar * (Cx ** 2 - r), d.f1 * Ybar ** 2 * (Cy ** 2 + Cx ** 2 - 2.0 * r))


def _classical_product(spec, s, d, form):
    Ybar, Cy, Cx, r = _aux_terms(s)
    return TheoryMoments(d.f1 * Ybar * r, d.f1 * Ybar ** 2 * (Cy ** 2 + Cx ** 2 + 2.0 * r))


def _almost_unbiased(spec, s, d, form):
    Ybar, Cy, Cx, r = _aux_terms(s)
    K = s.require("K")
    h = spec.h1 - spec.h2
    mse = d.f1 * Ybar ** 2 * (Cy ** 2 + Cx ** 2 * h * (h / 4.0 - K))
    if form == "expanded":
        b1 = d.f1 * Ybar * (0.375 * Cx ** 2 - r / 2.0)
        b2 = d.f1 * Ybar * (-0.125 * Cx ** 2 + r / 2.0)
    else:
        b1 = d.f1 * Ybar * Cx ** 2 / 2.0 * (0.5 - K)
        b2 = d.f1 * Ybar * Cx ** 2 / 2.0 * (0.5 + K)
    return TheoryMoments(spec.h1 * b1 + spec.h2 * b2, mse)


def _exp_ratio_attr_2p(spec, s, d, form):
    f3 = _f3(d, spec)
    Ybar, Cy, Cp, r = _attr_terms(s)
    if form == "expanded":
        bias = _exp_mix_bias_expanded(Ybar, Cp, r, f3, 1.0)
    else:
        bias = f3 * Ybar * (Cp ** 2 / 4.0 - r / 2.0)
    return TheoryMoments(bias, _exp_mix_mse(Ybar, Cy, Cp, r, d.f1, f3, 1.0))


def _exp_product_attr_2p(spec, s, d, form):
    f3 = _f3(d, spec)
    Ybar, Cy, Cp, r = _attr_terms(s)
    if form == "expanded":
        bias = _exp_mix_bias_expanded(Ybar, Cp, r, f3, 0.0)
    else:
        bias = f3 * Ybar * (Cp ** 2 / 4.0 + r / 2.0)
    return TheoryMoments(bias, _exp_mix_mse(Ybar, Cy, Cp, r, d.f1, f3, 0.0))


def _exp_combined_attr_2p(spec, s, d, form):
    f3 = _f3(d, spec)
    Ybar, Cy, Cp, r = _attr_terms(s)
    a = spec.alpha1
    if form == "expanded":
        bias = _exp_mix_bias_expanded(Ybar, Cp, r, f3, a)
    else:
        bias = f3 * Ybar * (Cp ** 2 / 8.0 - r * (a - 0.5))
    return TheoryMoments(bias, _exp_mix_mse(Ybar, Cy, Cp, r, d.f1, f3, a))


def _ratio_attr_2p(spec, s, d, form):
    f3 = _f3(d, spec)
    Ybar, Cy, Cp, r = _attr_terms(s)
    bias = f3 * Ybar * (Cp ** 2 - r) if form == "expanded" else None
    return TheoryMoments(bias, Ybar ** 2 * (d.f1 * Cy ** 2 + f3 * (Cp ** 2 - 2.0 * r)))


def _product_attr_2p(spec, s, d, form):
    f3 = _f3(d, spec)
    Ybar, Cy, Cp, r = _attr_terms(s)
    bias = f3 * Ybar * r if form == "expanded" else None
    return TheoryMoments(bias, Ybar ** 2 * (d.f1 * Cy ** 2 + f3 * (Cp ** 2 + 2.0 * r)))


def _exp_ratio_aux_2p(spec, s, d, form):
    f3 = _f3(d, spec)
    Ybar, Cy, Cx, r = _aux_terms(s)
    c2 = 0.375 if form == "expanded" else 0.125
    return TheoryMoments(f3 * Ybar * (c2 * Cx ** 2 - r / 2.0),
                         _exp_mix_mse(Ybar, Cy, Cx, r, d.f1, f3, 1.0))


def _exp_product_aux_2p(spec, s, d, form):
    f3 = _f3(d, spec)
    Ybar, Cy, Cx, r = _aux_terms(s)
    c2 = -0.125 if form == "expanded" else 0.125
    return TheoryMoments(f3 * Ybar * (c2 * Cx ** 2 + r / 2.0),
                         _exp_mix_mse(Ybar, Cy, Cx, r, d.f1, f3, 0.0))


def _almost_unbiased_2p(spec, s, d, form):
    f3 = _f3(d, spec)
    Ybar, Cy, Cx, r = _aux_terms(s)
    K = s.require("K")
    w = spec.w1 - spec.w2
    mse = Ybar ** 2 * (d.f1 * Cy ** 2 + f3 * Cx ** 2 * w * (w / 4.0 - K))
    c1, c2 = (0.375, -0.125) if form == "expanded" else (0.125, 0.125)
    bias = f3 * Ybar * ((spec.w1 * c1 + spec.w2 * c2) * Cx ** 2 - w / 2.0 * r)
    return TheoryMoments(bias, mse)


_MEAN_RULES: dict[type, Callable] = {
    me.MeanPerUnit: _mpu,
    me.NaikGuptaRatio: _ng_ratio,
    me.NaikGuptaProduct: _ng_product,
    me.AttrDiffRatio: _attr_diff_ratio,
    me.ExpRatioAttr: _exp_ratio_attr,
    me.ExpProductAttr: _exp_product_attr,
    me.ExpCombinedAttr: _exp_combined_attr,
    me.ExpRatioAux: _exp_ratio_aux,
    me.ExpMixedAux: _exp_mixed_aux,
    me.ClassicalRatioAux: _classical_ratio,
    me.ClassicalProductAux: _classical_product,
    me.AlmostUnbiasedExp: _almost_unbiased,
    me.ExpRatioAttr2P: _exp_ratio_attr_2p,
    me.ExpProductAttr2P: _exp_product_attr_2p,
    me.ExpCombinedAttr2P: _exp_combined_attr_2p,
    me.ClassicalRatio2P: _ratio_attr_2p,
    me.ClassicalProduct2P: _product_attr_2p,
    me.ExpRatioAux2P: _exp_ratio_aux_2p,
    me.ExpProductAux2P: _exp_product_aux_2p,
    me.AlmostUnbiasedExp2P: _almost_unbiased_2p,
}


def theory_mean(spec, summary: PopulationSummary, design: DesignConstants,
                bias_form: str = "printed") -> TheoryMoments:
    """First-order bias and MSE of a mean estimator.

    Raises
    ------
    MissingSummaryField
        A parameter the formula references is unset.
    PhaseMismatch
        A two-phase estimator with a single-phase design.
    """
    _check_form(bias_form)
    rule = _MEAN_RULES.get(type(spec))
    if rule is None:
        raise ConfigError(f"no mean theory for {spec!r}")
    return rule(spec, summary, design, bias_form)


# variance estimators ----------------------------------------------------------

def _var_terms(s: PopulationSummary):
    Sy2, b2y, b2x, h = s.require("Sy2", "beta2y", "beta2x", "h")
    if b2x == 1.0:
        raise InfeasibleMoments("beta2x = 1: C undefined")
    return Sy2, b2y, b2x, (h - 1.0) / (b2x - 1.0)


def variance_theta(spec, summary: PopulationSummary) -> float:
    """``theta`` of the ratio factor of a variance estimator at ``alpha = 1``."""
    if isinstance(spec, ve.SampleVariance):
        return 0.0
    if isinstance(spec, ve.IsakiRatio):
        return 1.0
    if isinstance(spec, (ve.UpadhyayaSingh, ve.RatioTypeClass, ve.ProductTypeClass)):
        return ve.theta_upadhyaya_singh(*summary.require("Sx2", "beta2x")).theta
    if isinstance(spec, ve.KadilarCingiMember):
        spec = spec.resolve(summary)
    if isinstance(spec, ve.GeneralFamily):
        return ve.theta_general_family(spec.a, spec.b, summary.require("Sx2")).theta
    raise ConfigError(f"no theta for {spec!r}")


def _general(L, Sy2, b2y, b2x, C, at):
    """Bias and MSE with effective ratio weight ``at = alpha * theta``."""
    bias = L * Sy2 * (b2x - 1.0) * at * (at - C)
    mse = L * Sy2 ** 2 * ((b2y - 1.0) + at * (b2x - 1.0) * (at - 2.0 * C))
    return bias, mse


def theory_variance(spec, summary: PopulationSummary, design: DesignConstants,
                    bias_form: str = "printed") -> TheoryMoments:
    """First-order bias and MSE of a variance estimator.

    ``bias_form`` is accepted for symmetry with :func:`theory_mean`; the
    variance families have a single expansion.
    """
    _check_form(bias_form)
    L = design.variance_factor
    if isinstance(spec, ve.SampleVariance):
        Sy2, b2y = summary.require("Sy2", "beta2y")
        return TheoryMoments(0.0, L * Sy2 ** 2 * (b2y - 1.0))
    Sy2, b2y, b2x, C = _var_terms(summary)
    theta = variance_theta(spec, summary)
    if isinstance(spec, ve.RatioTypeClass):
        w = (spec.w1, spec.w2, spec.w3)
        R1 = sum(i * wi for i, wi in zip((1, 2, 3), w))
        bias = L * Sy2 / 2.0 * (b2x - 1.0) * sum(
            i * wi * theta * (theta * (i + 1) - 2.0 * C) for i, wi in zip((1, 2, 3), w))
        mse = L * Sy2 ** 2 * ((b2y - 1.0) + R1 * theta * (b2x - 1.0) * (theta * R1 - 2.0 * C))
        return TheoryMoments(bias, mse)
    if isinstance(spec, ve.ProductTypeClass):
        k = (spec.k1, spec.k2, spec.k3)
        R2 = sum(i * ki for i, ki in zip((1, 2, 3), k))
        bias = L * Sy2 / 2.0 * (b2x - 1.0) * sum(
            i * ki * theta * (theta * (i - 1) + 2.0 * C) for i, ki in zip((1, 2, 3), k))
        mse = L * Sy2 ** 2 * ((b2y - 1.0) + R2 * theta * (b2x - 1.0) * (theta * R2 + 2.0 * C))
        return TheoryMoments(bias, mse)
    alpha = spec.alpha if isinstance(spec, ve.GeneralFamily) else 1.0
    bias, mse = _general(L, Sy2, b2y, b2x, C, alpha * theta)
    return TheoryMoments(bias, mse)


def theory(spec, summary: PopulationSummary, design: DesignConstants,
           bias_form: str = "printed") -> TheoryMoments:
    """Dispatch on ``spec.kind``."""
    if spec.kind == "variance":
        return theory_variance(spec, summary, design, bias_form)
    return theory_mean(spec, summary, design, bias_form)


# optimum bounds ----------------------------------------------------------------

def _correlation(summary, via):
    if via is None:
        via = "rho" if summary.rho is not None else "rho_pb"
    if via not in ("rho", "rho_pb"):
        raise ConfigError(f"correlation must be rho or rho_pb, not {via!r}")
    return summary.require(via)


def min_mse_mean(summary: PopulationSummary, design: DesignConstants,
                 mode: str = "single", via: Optional[str] = None) -> float:
    """Regression bound ``f1 Ybar^2 Cy^2 (1 - rho^2)`` or its two-phase form.

    ``via`` names the correlation (``"rho"`` or ``"rho_pb"``); by default
    ``rho`` when set, else ``rho_pb``.
    """
    Ybar, Cy = summary.require("Ybar", "Cy")
    r = _correlation(summary, via)
    if mode == "single":
        return design.f1 * Ybar ** 2 * Cy ** 2 * (1.0 - r * r)
    if mode == "two_phase":
        if not design.two_phase:
            raise PhaseMismatch("two-phase bound needs n'")
        return Ybar ** 2 * Cy ** 2 * (design.f1 - design.f3 * r * r)
    raise ConfigError(f"mode must be single or two_phase, not {mode!r}")


def min_mse_variance(summary: PopulationSummary, design: DesignConstants) -> float:
    """``L Sy^4 (beta2y - 1)(1 - rho1^2)``, ``rho1`` the correlation of the squared deviations."""
    Sy2, b2y, b2x, h = summary.require("Sy2", "beta2y", "beta2x", "h")
    den = (b2x - 1.0) * (b2y - 1.0)
    if not den > 0:
        raise InfeasibleMoments("kurtoses must exceed 1")
    rho1_sq = (h - 1.0) ** 2 / den
    if rho1_sq > 1.0 + 1e-12:
        raise InfeasibleMoments(f"rho1^2 = {rho1_sq:.6g} exceeds 1")
    return design.variance_factor * Sy2 ** 2 * (b2y - 1.0) * (1.0 - rho1_sq)


# efficiency conditions -----------------------------------------------------------

def _report(name, left, right):
    return EfficiencyReport(name, float(left), float(right), bool(left >= right))


def _attr_family_conditions(s, members):
    rho_pb, Sy2, Sphi2, Bphi = s.require("rho_pb", "Sy2", "Sphi2", "Bphi")
    R1 = me.attr_ratio_constant(1, s)
    out = []
    for i in members:
        Ri = me.attr_ratio_constant(i, s)
        out.append(_report(f"attr_member[{i}] beats ybar", rho_pb ** 2, Sphi2 / Sy2 * Ri ** 2))
        out.append(_report(f"attr_member[{i}] beats ng_ratio", rho_pb ** 2,
                           Sphi2 / Sy2 * (Ri ** 2 - R1 ** 2 + 2.0 * R1 * Bphi)))
    return out


def _exp_attr_conditions(s, scale, prefix):
    Ybar, Cy, Cp, rho_pb = s.require("Ybar", "Cy", "Cp", "rho_pb")
    k = scale * Ybar ** 2
    d = rho_pb * Cy
    rows = [
        ("ybar", d * d),
        ("ratio", (Cp - d) ** 2),
        ("product", (Cp + d) ** 2),
        ("exp_ratio", (Cp / 2.0 - d) ** 2),
        ("exp_product", (Cp / 2.0 + d) ** 2),
    ]
    return [_report(f"{prefix} optimum beats {name}", k * v, 0.0) for name, v in rows]


def _exp_aux_conditions(s, scale, members):
    K, Ybar, Cy, Cx, rho = s.require("K", "Ybar", "Cy", "Cx", "rho")
    out = []
    for i in members:
        theta = _theta_aux(s, *me._member_constants(me.EXP_AUX_MEMBERS, i, s))
        out.append(_report(f"exp_aux_member[{i}] beats ybar", K, theta / 2.0))
        out.append(_report(f"exp_mixed_member[{i}] optimum beats exp_aux_member[{i}]",
                           scale * Ybar ** 2 * (theta * Cx - rho * Cy) ** 2, 0.0))
    return out


def _general_variance_conditions(s, L, members):
    Sy2, b2y, b2x, C = _var_terms(s)
    k = L * Sy2 ** 2 * (b2x - 1.0)
    out = [_report("general_family optimum beats s2", k * C * C, 0.0)]
    for i in members:
        theta = variance_theta(ve.var_member(i, s), s)
        out.append(_report(f"general_family optimum beats var_member[{i}]",
                           k * (theta - C) ** 2, 0.0))
    return out


EFFICIENCY_CONTEXTS = ("attr_family", "exp_attr", "exp_attr_2p", "exp_aux", "general_variance")


def efficiency_conditions(summary: PopulationSummary, context: str,
                          design: Optional[DesignConstants] = None,
                          members=None) -> list[EfficiencyReport]:
    """Evaluate the comparison predicates of one estimator family.

    Parameters
    ----------
    context
        ``"attr_family"``: each attribute-family member against ``ybar`` and
        against the Naik-Gupta ratio estimator.  ``"exp_attr"`` and
        ``"exp_attr_2p"``: MSE excess of the five competitors over the
        optimum combined exponential estimator.  ``"exp_aux"``: each
        exponential member against ``ybar`` (``K >= theta/2``) and the excess
        of that member over its optimal mixture.  ``"general_variance"``: the
        excess of ``s2`` and members ``t1 .. t6`` over the optimum general
        family.
    design
        Supplies the scale factor (``f1``, ``f3`` or the variance factor) of
        the difference expressions; without it the factor is 1, which
        leaves every verdict unchanged.
    members
        Member indices to report (defaults: all).
    """
    if context == "attr_family":
        return _attr_family_conditions(summary, members or range(1, 11))
    if context == "exp_attr":
        return _exp_attr_conditions(summary, design.f1 if design else 1.0, "exp_combined_attr")
    if context == "exp_attr_2p":
        if design is not None and not design.two_phase:
            raise PhaseMismatch("two-phase comparisons need n'")
        return _exp_attr_conditions(summary, design.f3 if design else 1.0, "exp_combined_attr_2p")
    if context == "exp_aux":
        return _exp_aux_conditions(summary, design.f1 if design else 1.0, members or range(2, 11))
    if context == "general_variance":
        L = design.variance_factor if design else 1.0
        return _general_variance_conditions(summary, L, members or range(1, 7))
    raise ConfigError(f"unknown efficiency context {context!r}; one of {EFFICIENCY_CONTEXTS}")
