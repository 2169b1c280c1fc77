"""Estimators of the population mean that borrow strength from ``x`` or ``phi``.

Single-phase designs know ``Xbar`` (or ``P``) exactly.  Two-phase designs
replace it with the first-phase ``xbar_prime`` (or ``p_prime``).

The families:

* attribute ratio / product estimators ``ybar P/p`` and ``ybar p/P``;
* the difference-cum-ratio family
  ``(ybar + b_phi (P - p)) (m1 P + m2) / (m1 p + m2)``;
* exponential ratio / product estimators and their linear combinations,
  for the attribute (``exp((P - p)/(P + p))``) and the auxiliary variable
  (``exp(((a Xbar + b) - (a xbar + b)) / ((a Xbar + b) + (a xbar + b)))``);
* "almost unbiased" members of the linear variety
  ``h0 ybar + h1 t_ratio + h2 t_product`` with ``h0 + h1 + h2 = 1``.

The mixture ``ExpMixedAux`` is ``alpha t_1 + (1 - alpha) t_i`` where ``t_1``
is the ``(a, b) = (1, 0)`` member.  Only this reading produces the MSE
coefficient ``alpha/2 + theta_i - alpha theta_i`` of the family.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar, Union

import numpy as np

from .errors import ConfigError, SingularTheta, ZeroDenominator
from .population import PopulationSummary
from .specs import EstimatorSpec, Evaluation, KnownParams, evaluate_scalar

__all__ = [
    "MeanPerUnit",
    "NaikGuptaRatio",
    "NaikGuptaProduct",
    "AttrDiffRatio",
    "ExpRatioAttr",
    "ExpProductAttr",
    "ExpCombinedAttr",
    "ExpRatioAux",
    "ExpMixedAux",
    "ClassicalRatioAux",
    "ClassicalProductAux",
    "AlmostUnbiasedExp",
    "ExpRatioAttr2P",
    "ExpProductAttr2P",
    "ExpCombinedAttr2P",
    "ClassicalRatio2P",
    "ClassicalProduct2P",
    "ExpRatioAux2P",
    "ExpProductAux2P",
    "AlmostUnbiasedExp2P",
    "ATTR_MEMBERS",
    "EXP_AUX_MEMBERS",
    "estimate_mean",
    "optimum_alpha_attr",
    "optimum_alpha_exp",
    "theta_exp_family",
    "almost_unbiased_weights",
    "almost_unbiased_weights_2p",
    "bias_annihilating_weights",
    "attr_ratio_constant",
    "attr_member",
    "exp_aux_member",
    "exp_mixed_member",
]

_WEIGHT_SUM_TOL = 1e-9


class MeanSpec(EstimatorSpec):
    kind: ClassVar[str] = "mean"


def _ratio_form(ev: Evaluation, known, sample, reason):
    """exp((K - s) / (K + s)) with the sum guarded."""
    return np.exp((known - sample) / ev.denominator(known + sample, reason, positive=True))


@dataclass(frozen=True)
class MeanPerUnit(MeanSpec):
    tag: ClassVar[str] = "ybar"

    def _compute(self, ev):
        return ev.stat("ybar")


@dataclass(frozen=True)
class NaikGuptaRatio(MeanSpec):
    """``ybar P / p``."""

    tag: ClassVar[str] = "ng_ratio"
    columns: ClassVar[tuple] = ("phi",)

    def _compute(self, ev):
        p = ev.denominator(ev.stat("p"), "p = 0 in sample")
        return ev.stat("ybar") * ev.param("P") / p


@dataclass(frozen=True)
class NaikGuptaProduct(MeanSpec):
    """``ybar p / P``."""

    tag: ClassVar[str] = "ng_product"
    columns: ClassVar[tuple] = ("phi",)

    def _compute(self, ev):
        return ev.stat("ybar") * ev.stat("p") / ev.param("P")


@dataclass(frozen=True)
class AttrDiffRatio(MeanSpec):
    """``(ybar + b (P - p)) (m1 P + m2) / (m1 p + m2)``.

    ``slope`` picks ``b``: ``"sample"`` uses ``b_phi = s_yphi / s_phi^2``,
    ``"population"`` the known ``B_phi`` (for oracle experiments), and
    ``"none"`` sets ``b = 0`` which gives back ``ybar P / p`` at ``m2 = 0``.
    """

    m1: float = 1.0
    m2: float = 0.0
    slope: str = "sample"
    member: Union[int, None] = None
    tag: ClassVar[str] = "attr_diff_ratio"
    columns: ClassVar[tuple] = ("phi",)

    def __post_init__(self):
        if self.m1 == 0:
            raise ConfigError("m1 must be nonzero")
        if self.slope not in ("sample", "population", "none"):
            raise ConfigError(f"slope must be sample, population or none, not {self.slope!r}")

    def _compute(self, ev):
        P = ev.param("P")
        p = ev.stat("p")
        if self.slope == "sample":
            b = ev.stat("bphi")
            b = np.where(ev.guard(~np.isfinite(b), "s_phi^2 = 0 in sample, b_phi undefined"), 0.0, b)
        elif self.slope == "population":
            b = ev.param("Bphi")
        else:
            b = 0.0
        den = ev.denominator(self.m1 * p + self.m2, "m1 p + m2 = 0")
        return (ev.stat("ybar") + b * (P - p)) * (self.m1 * P + self.m2) / den


@dataclass(frozen=True)
class ExpRatioAttr(MeanSpec):
    """``ybar exp((P - p) / (P + p))``."""

    tag: ClassVar[str] = "exp_ratio_attr"
    columns: ClassVar[tuple] = ("phi",)

    def _compute(self, ev):
        return ev.stat("ybar") * _ratio_form(ev, ev.param("P"), ev.stat("p"), "P + p = 0")


@dataclass(frozen=True)
class ExpProductAttr(MeanSpec):
    """``ybar exp((p - P) / (p + P))``."""

    tag: ClassVar[str] = "exp_product_attr"
    columns: ClassVar[tuple] = ("phi",)

    def _compute(self, ev):
        return ev.stat("ybar") * _ratio_form(ev, ev.stat("p"), ev.param("P"), "P + p = 0")


@dataclass(frozen=True)
class ExpCombinedAttr(MeanSpec):
    """``alpha`` times the exponential ratio plus ``1 - alpha`` times the product form."""

    alpha: float = 0.5
    tag: ClassVar[str] = "exp_combined_attr"
    columns: ClassVar[tuple] = ("phi",)

    def _compute(self, ev):
        r = _ratio_form(ev, ev.param("P"), ev.stat("p"), "P + p = 0")
        return ev.stat("ybar") * (self.alpha * r + (1.0 - self.alpha) / r)


def _aux_form(ev: Evaluation, a: float, b: float, known, sample):
    u = a * known + b
    v = a * sample + b
    same_sign = ((u > 0) & (v > 0)) | ((u < 0) & (v < 0))
    bad = ev.guard(~same_sign, "a Xbar + b and a xbar + b not of one strict sign")
    den = np.where(bad, 1.0, u + v)
    return np.exp((u - v) / den)


@dataclass(frozen=True)
class ExpRatioAux(MeanSpec):
    """Exponential ratio estimator on the transformed auxiliary ``a x + b``."""

    a: float = 1.0
    b: float = 0.0
    member: Union[int, None] = None
    tag: ClassVar[str] = "exp_ratio_aux"
    columns: ClassVar[tuple] = ("x",)

    def __post_init__(self):
        if self.a == 0:
            raise ConfigError("a must be nonzero")

    def _compute(self, ev):
        return ev.stat("ybar") * _aux_form(ev, self.a, self.b, ev.param("Xbar"), ev.stat("xbar"))


@dataclass(frozen=True)
class ExpMixedAux(MeanSpec):
    """``alpha t_1 + (1 - alpha) t_(a,b)`` with ``t_1`` the Bahl-Tuteja member."""

    a: float = 1.0
    b: float = 0.0
    alpha: float = 1.0
    member: Union[int, None] = None
    tag: ClassVar[str] = "exp_mixed_aux"
    columns: ClassVar[tuple] = ("x",)

    def __post_init__(self):
        if self.a == 0:
            raise ConfigError("a must be nonzero")

    def _compute(self, ev):
        X, x = ev.param("Xbar"), ev.stat("xbar")
        t1 = _aux_form(ev, 1.0, 0.0, X, x)
        ti = _aux_form(ev, self.a, self.b, X, x)
        return ev.stat("ybar") * (self.alpha * t1 + (1.0 - self.alpha) * ti)


@dataclass(frozen=True)
class ClassicalRatioAux(MeanSpec):
    """``ybar Xbar / xbar``."""

    tag: ClassVar[str] = "classical_ratio"
    columns: ClassVar[tuple] = ("x",)

    def _compute(self, ev):
        return ev.stat("ybar") * ev.param("Xbar") / ev.denominator(ev.stat("xbar"), "xbar = 0")


@dataclass(frozen=True)
class ClassicalProductAux(MeanSpec):
    """``ybar xbar / Xbar``."""

    tag: ClassVar[str] = "classical_product"
    columns: ClassVar[tuple] = ("x",)

    def _compute(self, ev):
        return ev.stat("ybar") * ev.stat("xbar") / ev.param("Xbar")


def _check_weights(ws, name):
    if abs(sum(ws) - 1.0) > _WEIGHT_SUM_TOL:
        raise ConfigError(f"{name} weights must sum to 1 (got {sum(ws)!r})")


@dataclass(frozen=True)
class AlmostUnbiasedExp(MeanSpec):
    """``h0 ybar + h1 ybar e^{(X-x)/(X+x)} + h2 ybar e^{(x-X)/(x+X)}``."""

    h0: float = 1.0
    h1: float = 0.0
    h2: float = 0.0
    tag: ClassVar[str] = "almost_unbiased_exp"
    columns: ClassVar[tuple] = ("x",)

    def __post_init__(self):
        _check_weights((self.h0, self.h1, self.h2), "h")

    def _compute(self, ev):
        r = _ratio_form(ev, ev.param("Xbar"), ev.stat("xbar"), "Xbar + xbar <= 0")
        return ev.stat("ybar") * (self.h0 + self.h1 * r + self.h2 / r)


# two-phase variants -------------------------------------------------------


class TwoPhaseMeanSpec(MeanSpec):
    two_phase: ClassVar[bool] = True


@dataclass(frozen=True)
class ExpRatioAttr2P(TwoPhaseMeanSpec):
    """``ybar exp((p' - p) / (p' + p))``."""

    tag: ClassVar[str] = "exp_ratio_attr_2p"
    columns: ClassVar[tuple] = ("phi",)

    def _compute(self, ev):
        return ev.stat("ybar") * _ratio_form(ev, ev.stat("p_prime"), ev.stat("p"), "p' + p = 0")


@dataclass(frozen=True)
class ExpProductAttr2P(TwoPhaseMeanSpec):
    tag: ClassVar[str] = "exp_product_attr_2p"
    columns: ClassVar[tuple] = ("phi",)

    def _compute(self, ev):
        return ev.stat("ybar") * _ratio_form(ev, ev.stat("p"), ev.stat("p_prime"), "p' + p = 0")


@dataclass(frozen=True)
class ExpCombinedAttr2P(TwoPhaseMeanSpec):
    alpha1: float = 0.5
    tag: ClassVar[str] = "exp_combined_attr_2p"
    columns: ClassVar[tuple] = ("phi",)

    def _compute(self, ev):
        r = _ratio_form(ev, ev.stat("p_prime"), ev.stat("p"), "p' + p = 0")
        return ev.stat("ybar") * (self.alpha1 * r + (1.0 - self.alpha1) / r)


@dataclass(frozen=True)
class ClassicalRatio2P(TwoPhaseMeanSpec):
    """``ybar p' / p``."""

    tag: ClassVar[str] = "ratio_attr_2p"
    columns: ClassVar[tuple] = ("phi",)

    def _compute(self, ev):
        return ev.stat("ybar") * ev.stat("p_prime") / ev.denominator(ev.stat("p"), "p = 0 in sample")


@dataclass(frozen=True)
class ClassicalProduct2P(TwoPhaseMeanSpec):
    """``ybar p / p'``."""

    tag: ClassVar[str] = "product_attr_2p"
    columns: ClassVar[tuple] = ("phi",)

    def _compute(self, ev):
        return ev.stat("ybar") * ev.stat("p") / ev.denominator(ev.stat("p_prime"), "p' = 0")


@dataclass(frozen=True)
class ExpRatioAux2P(TwoPhaseMeanSpec):
    """``ybar exp((x' - x) / (x' + x))``."""

    tag: ClassVar[str] = "exp_ratio_aux_2p"
    columns: ClassVar[tuple] = ("x",)

    def _compute(self, ev):
        return ev.stat("ybar") * _ratio_form(ev, ev.stat("xbar_prime"), ev.stat("xbar"), "x' + x <= 0")


@dataclass(frozen=True)
class ExpProductAux2P(TwoPhaseMeanSpec):
    tag: ClassVar[str] = "exp_product_aux_2p"
    columns: ClassVar[tuple] = ("x",)

    def _compute(self, ev):
        return ev.stat("ybar") * _ratio_form(ev, ev.stat("xbar"), ev.stat("xbar_prime"), "x' + x <= 0")


@dataclass(frozen=True)
class AlmostUnbiasedExp2P(TwoPhaseMeanSpec):
    w0: float = 1.0
    w1: float = 0.0
    w2: float = 0.0
    tag: ClassVar[str] = "almost_unbiased_exp_2p"
    columns: ClassVar[tuple] = ("x",)

    def __post_init__(self):
        _check_weights((self.w0, self.w1, self.w2), "w")

    def _compute(self, ev):
        r = _ratio_form(ev, ev.stat("xbar_prime"), ev.stat("xbar"), "x' + x <= 0")
        return ev.stat("ybar") * (self.w0 + self.w1 * r + self.w2 / r)


# --------------------------------------------------------------------------


def estimate_mean(spec: MeanSpec, stats, known: KnownParams) -> float:
    """Value of the estimator on one sample.

    Raises
    ------
    UndefinedEstimate
        Zero proportion, zero or sign-changing denominators.
    MissingKnownParam, MissingStatistic
        The spec needs a constant or statistic that is not set.
    """
    if spec.kind != "mean":
        raise ConfigError(f"{spec.label} is not a mean estimator")
    return evaluate_scalar(spec, stats, known)


def _field(summary, name):
    if isinstance(summary, (int, float)):
        return float(summary)
    return summary.require(name)


def optimum_alpha_attr(summary: Union[PopulationSummary, float]) -> float:
    """``(2 Kp + 1) / 2``; the same constant serves the two-phase class.

    ``summary`` may be a :class:`PopulationSummary` or ``Kp`` itself.
    """
    return (2.0 * _field(summary, "Kp") + 1.0) / 2.0


def optimum_alpha_exp(summary: Union[PopulationSummary, float], theta: float) -> float:
    """``2 (K - theta) / (1 - 2 theta)`` for the mixed exponential estimator."""
    K = _field(summary, "K")
    if 1.0 - 2.0 * theta == 0.0:
        raise SingularTheta("theta = 1/2 (b = 0 member): the mixture degenerates")
    return 2.0 * (K - theta) / (1.0 - 2.0 * theta)


def theta_exp_family(a: float, b: float, Xbar: float) -> float:
    """``a Xbar / (2 (a Xbar + b))``."""
    den = a * Xbar + b
    if den == 0:
        raise ZeroDenominator("a Xbar + b = 0")
    return a * Xbar / (2.0 * den)


def almost_unbiased_weights(K: float) -> tuple[float, float, float]:
    """``(1 - 4K^2, K + 2K^2, -K + 2K^2)``."""
    return 1.0 - 4.0 * K * K, K + 2.0 * K * K, -K + 2.0 * K * K


def almost_unbiased_weights_2p(K: float) -> tuple[float, float, float]:
    """``(1 - 8K^2, K + 4K^2, -K + 4K^2)``."""
    return 1.0 - 8.0 * K * K, K + 4.0 * K * K, -K + 4.0 * K * K


def bias_annihilating_weights(K: float, bias_ratio: float, bias_product: float):
    """Weights ``(h0, h1, h2)`` with ``sum = 1``, ``h1 - h2 = 2K`` and zero combined bias.

    ``bias_ratio`` and ``bias_product`` are the biases of the ratio and
    product components (any common scale).  With the first-order biases
    ``Cx^2/2 (1/2 -/+ K)`` this reproduces :func:`almost_unbiased_weights`.
    """
    s = bias_ratio + bias_product
    if s == 0:
        raise ZeroDenominator("component biases cancel; weights not identified")
    h1 = 2.0 * K * bias_product / s
    h2 = -2.0 * K * bias_ratio / s
    return 1.0 - h1 - h2, h1, h2


# members ------------------------------------------------------------------

# (m1, m2) per member; strings name KnownParams fields.
ATTR_MEMBERS = {
    1: (1.0, 0.0),
    2: (1.0, "beta2phi"),
    3: (1.0, "Cp"),
    4: (1.0, "rho_pb"),
    5: ("beta2phi", "Cp"),
    6: ("Cp", "beta2phi"),
    7: ("Cp", "rho_pb"),
    8: ("rho_pb", "Cp"),
    9: ("beta2phi", "rho_pb"),
    10: ("rho_pb", "beta2phi"),
}

# (a, b) per member of the exponential family on x.
EXP_AUX_MEMBERS = {
    1: (1.0, 0.0),
    2: (1.0, "beta2x"),
    3: (1.0, "Cx"),
    4: (1.0, "rho"),
    5: ("beta2x", "Cx"),
    6: ("Cx", "beta2x"),
    7: ("Cx", "rho"),
    8: ("rho", "Cx"),
    9: ("beta2x", "rho"),
    10: ("rho", "beta2x"),
}


def _resolve(value, source) -> float:
    if isinstance(value, str):
        if isinstance(source, PopulationSummary):
            return float(source.require(value))
        return source.get(value)
    return float(value)


def _member_constants(table, i, source):
    if i not in table:
        raise ConfigError(f"member index {i} not in 1..{max(table)}")
    c1, c2 = table[i]
    return _resolve(c1, source), _resolve(c2, source)


def attr_member(i: int, known: Union[KnownParams, PopulationSummary], slope: str = "sample") -> AttrDiffRatio:
    m1, m2 = _member_constants(ATTR_MEMBERS, i, known)
    return AttrDiffRatio(m1, m2, slope, member=i)


def exp_aux_member(i: int, known: Union[KnownParams, PopulationSummary]) -> ExpRatioAux:
    a, b = _member_constants(EXP_AUX_MEMBERS, i, known)
    return ExpRatioAux(a, b, member=i)


def exp_mixed_member(i: int, alpha: float, known: Union[KnownParams, PopulationSummary]) -> ExpMixedAux:
    a, b = _member_constants(EXP_AUX_MEMBERS, i, known)
    return ExpMixedAux(a, b, alpha, member=i)


def attr_ratio_constant(i: int, summary: PopulationSummary) -> float:
    """``R_i = Ybar m1 / (m1 P + m2)`` for the attribute family member ``i``."""
    m1, m2 = _member_constants(ATTR_MEMBERS, i, summary)
    Ybar, P = summary.require("Ybar", "P")
    den = m1 * P + m2
    if den == 0:
        raise ZeroDenominator(f"m1 P + m2 = 0 for member {i}")
    return Ybar * m1 / den
