"""Parse estimator names used in configuration files and on the command line.

Grammar::

    list   := item (("," | ";") item)*        separators at parenthesis depth 0
    item   := name [ "(" arg ("," arg)* ")" ]
    arg    := key "=" value
    value  := number | symbol | "opt" | word

A ``symbol`` is any :class:`~auxest.population.PopulationSummary` field
(``Cp``, ``beta2x``, ``rho`` ...), optionally negated (``-beta2x``), and is
looked up in the summary.  ``opt`` asks for the optimum constant of the
family, again computed from the summary.  Weight triples default to their
bias-annihilating optimum when omitted.
"""

from __future__ import annotations

import re
from typing import Callable, Optional

from . import mean_estimators as me
from . import variance_estimators as ve
from .errors import ConfigError, UnknownEstimator
from .population import PopulationSummary
from .specs import EstimatorSpec

__all__ = ["parse_estimator", "parse_estimator_list", "ESTIMATOR_NAMES", "split_list"]

_ITEM = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*$", re.S)


def split_list(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ConfigError(f"unbalanced parenthesis in {text!r}")
        if ch in ",;\n" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ConfigError(f"unbalanced parenthesis in {text!r}")
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


class _Args:
    def __init__(self, name: str, raw: dict, summary: Optional[PopulationSummary]):
        self.name, self.raw, self.summary = name, dict(raw), summary
        self.used: set[str] = set()

    def has(self, key):
        return key in self.raw

    def is_opt(self, key):
        return self.raw.get(key, "").lower() == "opt"

    def word(self, key, default):
        self.used.add(key)
        return self.raw.get(key, default)

    def need_summary(self, why):
        if self.summary is None:
            raise ConfigError(f"{self.name}: {why} needs population parameters")
        return self.summary

    def num(self, key, default=None):
        self.used.add(key)
        if key not in self.raw:
            if default is None:
                raise ConfigError(f"{self.name}: missing argument {key!r}")
            return default
        text = self.raw[key]
        try:
            return float(text)
        except ValueError:
            pass
        sign, sym = (-1.0, text[1:]) if text.startswith("-") else (1.0, text)
        if sym not in PopulationSummary.field_names():
            raise ConfigError(f"{self.name}: {key}={text!r} is neither a number nor a parameter name")
        return sign * float(self.need_summary(f"symbol {sym!r}").require(sym))

    def int(self, key):
        v = self.num(key)
        if v != int(v):
            raise ConfigError(f"{self.name}: {key} must be an integer")
        return int(v)

    def done(self):
        extra = set(self.raw) - self.used
        if extra:
            raise ConfigError(f"{self.name}: unexpected arguments {sorted(extra)}")


def _alpha(args: _Args, key: str, optimum: Callable[[], float], default=None):
    """Numeric constant, or the optimum when given as ``opt`` or omitted without a default."""
    if args.is_opt(key) or (default is None and not args.has(key)):
        args.used.add(key)
        return optimum()
    return args.num(key, default)


def _triple(args: _Args, keys, optimum: Callable[[], tuple]):
    if args.has("weights"):
        if not args.is_opt("weights"):
            raise ConfigError(f"{args.name}: weights accepts only 'opt'")
        args.used.add("weights")
        return optimum()
    if not any(args.has(k) for k in keys):
        return optimum()
    return tuple(args.num(k, 0.0) for k in keys)


def _s(args):
    return args.need_summary("the optimum")


def _mixed(args, a, b, member=None):
    def opt():
        s = _s(args)
        return me.optimum_alpha_exp(s, me.theta_exp_family(a, b, s.require("Xbar")))
    return me.ExpMixedAux(a, b, _alpha(args, "alpha", opt), member=member)


def _member_pair(args, table, i):
    if i not in table:
        raise ConfigError(f"{args.name}: member index {i} out of range")
    return me._member_constants(table, i, args.need_summary("a member constant"))


def _general(args, a, b, member=None):
    def opt():
        s = _s(args)
        return ve.optimum_alpha_var(s.require("C"), ve.theta_general_family(a, b, s.require("Sx2")))
    return ve.GeneralFamily(a, b, _alpha(args, "alpha", opt, 1.0), member=member)


def _us_theta(args):
    s = _s(args)
    return ve.theta_upadhyaya_singh(*s.require("Sx2", "beta2x")), s.require("C")


_BUILDERS: dict[str, Callable[[_Args], EstimatorSpec]] = {
    "ybar": lambda a: me.MeanPerUnit(),
    "ng_ratio": lambda a: me.NaikGuptaRatio(),
    "ng_product": lambda a: me.NaikGuptaProduct(),
    "attr_diff_ratio": lambda a: me.AttrDiffRatio(a.num("m1", 1.0), a.num("m2", 0.0),
                                                  a.word("slope", "sample")),
    "attr_member": lambda a: me.AttrDiffRatio(*_member_pair(a, me.ATTR_MEMBERS, a.int("i")),
                                              a.word("slope", "sample"), member=a.int("i")),
    "exp_ratio_attr": lambda a: me.ExpRatioAttr(),
    "exp_product_attr": lambda a: me.ExpProductAttr(),
    "exp_combined_attr": lambda a: me.ExpCombinedAttr(
        _alpha(a, "alpha", lambda: me.optimum_alpha_attr(_s(a)))),
    "exp_ratio_aux": lambda a: me.ExpRatioAux(a.num("a", 1.0), a.num("b", 0.0)),
    "exp_aux_member": lambda a: me.ExpRatioAux(*_member_pair(a, me.EXP_AUX_MEMBERS, a.int("i")),
                                               member=a.int("i")),
    "exp_mixed_aux": lambda a: _mixed(a, a.num("a", 1.0), a.num("b", 0.0)),
    "exp_mixed_member": lambda a: _mixed(a, *_member_pair(a, me.EXP_AUX_MEMBERS, a.int("i")),
                                         member=a.int("i")),
    "classical_ratio": lambda a: me.ClassicalRatioAux(),
    "classical_product": lambda a: me.ClassicalProductAux(),
    "almost_unbiased_exp": lambda a: me.AlmostUnbiasedExp(*_triple(
        a, ("h0", "h1", "h2"), lambda: me.almost_unbiased_weights(_s(a).require("K")))),
    "exp_ratio_attr_2p": lambda a: me.ExpRatioAttr2P(),
    "exp_product_attr_2p": lambda a: me.ExpProductAttr2P(),
    "exp_combined_attr_2p": lambda a: me.ExpCombinedAttr2P(
        _alpha(a, "alpha1", lambda: me.optimum_alpha_attr(_s(a)))),
    "ratio_attr_2p": lambda a: me.ClassicalRatio2P(),
    "product_attr_2p": lambda a: me.ClassicalProduct2P(),
    "exp_ratio_aux_2p": lambda a: me.ExpRatioAux2P(),
    "exp_product_aux_2p": lambda a: me.ExpProductAux2P(),
    "almost_unbiased_exp_2p": lambda a: me.AlmostUnbiasedExp2P(*_triple(
        a, ("w0", "w1", "w2"), lambda: me.almost_unbiased_weights_2p(_s(a).require("K")))),
    "s2": lambda a: ve.SampleVariance(),
    "isaki": lambda a: ve.IsakiRatio(),
    "upadhyaya_singh": lambda a: ve.UpadhyayaSingh(),
    "kadilar_cingi": lambda a: ve.KadilarCingiMember(a.int("i")),
    "var_member": lambda a: _var_member(a),
    "general_family": lambda a: _general(a, a.num("a", 1.0), a.num("b", 0.0)),
    "ratio_class": lambda a: ve.RatioTypeClass(*_triple(
        a, ("w1", "w2", "w3"), lambda: ve.ratio_class_weights(*_us_theta(a)))),
    "product_class": lambda a: ve.ProductTypeClass(*_triple(
        a, ("k1", "k2", "k3"), lambda: ve.product_class_weights(*_us_theta(a)))),
}

ESTIMATOR_NAMES = tuple(sorted(_BUILDERS))


def _var_member(args):
    i = args.int("i")
    if i == 0:
        return ve.SampleVariance()
    if i not in ve.VAR_MEMBERS:
        raise ConfigError(f"var_member index {i} not in 0..6")
    a, b = ve.member_constants(i, args.need_summary("member constants"))
    return _general(args, a, b, member=i)


def _parse_args(name: str, body: Optional[str]) -> dict:
    if body is None or not body.strip():
        return {}
    out = {}
    for part in split_list(body.replace(";", ",")):
        if "=" not in part:
            raise ConfigError(f"{name}: argument {part!r} is not key=value")
        k, v = (t.strip() for t in part.split("=", 1))
        if k in out:
            raise ConfigError(f"{name}: argument {k!r} given twice")
        out[k] = v
    return out


def parse_estimator(text: str, summary: Optional[PopulationSummary] = None) -> EstimatorSpec:
    """Build a spec from ``name(key=value, ...)``.

    Raises
    ------
    UnknownEstimator
        The name is not recognised.
    ConfigError
        Bad arguments, or parameters needed but no summary given.
    """
    m = _ITEM.match(text)
    if not m:
        raise ConfigError(f"cannot parse estimator {text!r}")
    name, body = m.group(1), m.group(2)
    if name not in _BUILDERS:
        raise UnknownEstimator(f"unknown estimator {name!r}; known: {', '.join(ESTIMATOR_NAMES)}")
    args = _Args(name, _parse_args(name, body), summary)
    spec = _BUILDERS[name](args)
    args.done()
    return spec


def parse_estimator_list(text: str, summary: Optional[PopulationSummary] = None) -> list[EstimatorSpec]:
    return [parse_estimator(item, summary) for item in split_list(text)]
