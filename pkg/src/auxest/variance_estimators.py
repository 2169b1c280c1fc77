"""Estimators of the population variance ``S_y^2`` using a known ``S_x^2``.

All estimators are ``s_y^2`` times a factor that depends only on ``s_x^2`` and
known constants, so they scale with ``c^2`` when ``y`` is multiplied by ``c``.

* ``GeneralFamily(a, b, alpha)``::

      s_y^2 (a Sx2 - b) / (alpha (a sx2 - b) + (1 - alpha)(a Sx2 - b))

  with members ``t1`` (Isaki, ``(1, 0)``), ``t2`` ``(1, Cx)``, ``t3``
  ``(1, beta2x)``, ``t4`` ``(beta2x, Cx)``, ``t5`` ``(Cx, beta2x)`` and ``t6``
  ``(1, -beta2x)`` (Upadhyaya-Singh), all at ``alpha = 1``.
* ``RatioTypeClass(w1, w2, w3)``: ``sum_i w_i s_y^2 u^i`` with
  ``u = (Sx2 + beta2x) / (sx2 + beta2x)``.
* ``ProductTypeClass(k1, k2, k3)``: the same with ``1/u``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar, Union


from .errors import ConfigError, ZeroDenominator, ZeroTheta
from .population import PopulationSummary
from .specs import EstimatorSpec, Evaluation, KnownParams, evaluate_scalar

__all__ = [
    "SampleVariance",
    "IsakiRatio",
    "UpadhyayaSingh",
    "KadilarCingiMember",
    "GeneralFamily",
    "RatioTypeClass",
    "ProductTypeClass",
    "ThetaVar",
    "VAR_MEMBERS",
    "estimate_variance",
    "theta_upadhyaya_singh",
    "theta_general_family",
    "ratio_class_weights",
    "product_class_weights",
    "optimum_alpha_var",
    "var_member",
    "member_constants",
]

_WEIGHT_SUM_TOL = 1e-9


class VarianceSpec(EstimatorSpec):
    kind: ClassVar[str] = "variance"
    columns: ClassVar[tuple] = ("x",)


def _us_factor(ev: Evaluation):
    """``(Sx2 + beta2x) / (sx2 + beta2x)``."""
    b2 = ev.param("beta2x")
    den = ev.denominator(ev.stat("sx2") + b2, "sx2 + beta2x = 0")
    return (ev.param("Sx2") + b2) / den


@dataclass(frozen=True)
class SampleVariance(VarianceSpec):
    tag: ClassVar[str] = "s2"
    columns: ClassVar[tuple] = ()

    def _compute(self, ev):
        return ev.stat("sy2")


@dataclass(frozen=True)
class IsakiRatio(VarianceSpec):
    """``s_y^2 Sx2 / sx2``."""

    tag: ClassVar[str] = "isaki"

    def _compute(self, ev):
        return ev.stat("sy2") * ev.param("Sx2") / ev.denominator(ev.stat("sx2"), "sx2 = 0")


@dataclass(frozen=True)
class UpadhyayaSingh(VarianceSpec):
    """``s_y^2 (Sx2 + beta2x) / (sx2 + beta2x)``."""

    tag: ClassVar[str] = "upadhyaya_singh"

    def _compute(self, ev):
        return ev.stat("sy2") * _us_factor(ev)


@dataclass(frozen=True)
class GeneralFamily(VarianceSpec):
    a: float = 1.0
    b: float = 0.0
    alpha: float = 1.0
    member: Union[int, None] = None
    tag: ClassVar[str] = "general_family"

    def __post_init__(self):
        if self.a == 0:
            raise ConfigError("a must be nonzero")

    def _compute(self, ev):
        known = self.a * ev.param("Sx2") - self.b
        den = self.alpha * (self.a * ev.stat("sx2") - self.b) + (1.0 - self.alpha) * known
        den = ev.denominator(den, "general-family denominator not positive", positive=True)
        return ev.stat("sy2") * known / den


# (a, b) per member; strings name KnownParams fields, "-beta2x" its negation.
VAR_MEMBERS = {
    1: (1.0, 0.0),
    2: (1.0, "Cx"),
    3: (1.0, "beta2x"),
    4: ("beta2x", "Cx"),
    5: ("Cx", "beta2x"),
    6: (1.0, "-beta2x"),
}


def _resolve(value, source) -> float:
    if not isinstance(value, str):
        return float(value)
    sign = -1.0 if value.startswith("-") else 1.0
    name = value.lstrip("-")
    if isinstance(source, PopulationSummary):
        return sign * float(source.require(name))
    return sign * source.get(name)


def member_constants(i: int, source: Union[KnownParams, PopulationSummary]) -> tuple[float, float]:
    """``(a, b)`` of general-family member ``t_i``."""
    if i not in VAR_MEMBERS:
        raise ConfigError(f"variance member index {i} not in 1..6")
    a, b = VAR_MEMBERS[i]
    return _resolve(a, source), _resolve(b, source)


@dataclass(frozen=True)
class KadilarCingiMember(VarianceSpec):
    """Member ``t2 .. t5`` of the general family at ``alpha = 1``.

    The constants are looked up from the known parameters when evaluated.
    """

    member: int = 2
    tag: ClassVar[str] = "var_member"

    def __post_init__(self):
        if self.member not in (2, 3, 4, 5):
            raise ConfigError(f"member must be one of 2..5, not {self.member}")

    def resolve(self, source) -> GeneralFamily:
        a, b = member_constants(self.member, source)
        return GeneralFamily(a, b, 1.0, member=self.member)

    def _compute(self, ev):
        return self.resolve(ev.known)._compute(ev)


def _check_weights(ws, name):
    if abs(sum(ws) - 1.0) > _WEIGHT_SUM_TOL:
        raise ConfigError(f"{name} weights must sum to 1 (got {sum(ws)!r})")


@dataclass(frozen=True)
class RatioTypeClass(VarianceSpec):
    w1: float = 1.0
    w2: float = 0.0
    w3: float = 0.0
    tag: ClassVar[str] = "ratio_class"

    def __post_init__(self):
        _check_weights((self.w1, self.w2, self.w3), "w")

    def _compute(self, ev):
        u = _us_factor(ev)
        return ev.stat("sy2") * u * (self.w1 + u * (self.w2 + u * self.w3))


@dataclass(frozen=True)
class ProductTypeClass(VarianceSpec):
    k1: float = 1.0
    k2: float = 0.0
    k3: float = 0.0
    tag: ClassVar[str] = "product_class"

    def __post_init__(self):
        _check_weights((self.k1, self.k2, self.k3), "k")

    def _compute(self, ev):
        u = _us_factor(ev)
        u = 1.0 / ev.denominator(u, "Sx2 + beta2x = 0")
        return ev.stat("sy2") * u * (self.k1 + u * (self.k2 + u * self.k3))


def estimate_variance(spec: VarianceSpec, stats, known: KnownParams) -> float:
    """Value of the variance estimator on one sample.

    Raises
    ------
    UndefinedEstimate
        A denominator vanishes (or is not positive for the general family).
    MissingKnownParam
        ``Sx2``, ``Cx`` or ``beta2x`` needed but unset.
    """
    if spec.kind != "variance":
        raise ConfigError(f"{spec.label} is not a variance estimator")
    return evaluate_scalar(spec, stats, known)


@dataclass(frozen=True)
class ThetaVar:
    """A ``theta`` constant tagged with the family it belongs to.

    ``flavor`` is ``"us"`` for ``Sx2 / (Sx2 + beta2x)`` or ``"general"`` for
    ``a Sx2 / (a Sx2 - b)``.
    """

    theta: float
    flavor: str = "us"

    def __float__(self):
        return float(self.theta)


def theta_upadhyaya_singh(Sx2: float, beta2x: float) -> ThetaVar:
    den = Sx2 + beta2x
    if den == 0:
        raise ZeroDenominator("Sx2 + beta2x = 0")
    return ThetaVar(Sx2 / den, "us")


def theta_general_family(a: float, b: float, Sx2: float) -> ThetaVar:
    den = a * Sx2 - b
    if den == 0:
        raise ZeroDenominator("a Sx2 - b = 0")
    return ThetaVar(a * Sx2 / den, "general")


def _theta_value(theta) -> float:
    t = float(theta)
    if t == 0.0:
        raise ZeroTheta("theta = 0")
    return t


def ratio_class_weights(theta: Union[ThetaVar, float], C: float) -> tuple[float, float, float]:
    """Unique ``(w1, w2, w3)`` with unit sum, ``sum i w_i = C/theta`` and zero first-order bias."""
    t = _theta_value(theta)
    t2 = t * t
    return (
        (3 * t2 - 3 * t * C + C * C) / t2,
        (-3 * t2 + 5 * t * C - 2 * C * C) / t2,
        (t2 - 2 * t * C + C * C) / t2,
    )


def product_class_weights(theta: Union[ThetaVar, float], C: float) -> tuple[float, float, float]:
    """Unique ``(k1, k2, k3)`` with unit sum, ``sum i k_i = -C/theta`` and zero first-order bias."""
    t = _theta_value(theta)
    t2 = t * t
    return (
        (3 * t2 + 2 * t * C + C * C) / t2,
        -(3 * t2 + 3 * t * C + 2 * C * C) / t2,
        (t2 + t * C + C * C) / t2,
    )


def optimum_alpha_var(C: float, theta: Union[ThetaVar, float]) -> float:
    """``C / theta``: the MSE-minimizing ``alpha`` of the general family."""
    return C / _theta_value(theta)


def var_member(i: int, known: Union[KnownParams, PopulationSummary], alpha: float = 1.0):
    """Member ``t0 .. t6`` as a spec; ``t0`` is ``s_y^2``."""
    if i == 0:
        return SampleVariance()
    a, b = member_constants(i, known)
    return GeneralFamily(a, b, alpha, member=i)
