"""Shared machinery for estimator specifications.

An estimator spec is a small frozen dataclass naming one estimator family and
its constants.  Its ``_compute`` method evaluates the estimator on batches of
sample statistics with numpy, so the same code serves a single sample, a Monte
Carlo block and a full enumeration.  Draws on which an estimator is undefined
(zero proportion, non-positive denominators) come back as NaN together with the
reason, and the scalar entry points turn that into
:class:`~auxest.errors.UndefinedEstimate`.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import ClassVar, Optional

import numpy as np

from .errors import MissingKnownParam, MissingStatistic, UndefinedEstimate
from .population import PopulationSummary

__all__ = ["KnownParams", "EstimatorSpec", "Evaluation", "evaluate_batch"]


@dataclass(frozen=True)
class KnownParams:
    """Population constants an estimator is allowed to use."""

    Xbar: Optional[float] = None
    P: Optional[float] = None
    Cp: Optional[float] = None
    Cx: Optional[float] = None
    beta2x: Optional[float] = None
    beta2phi: Optional[float] = None
    rho: Optional[float] = None
    rho_pb: Optional[float] = None
    Bphi: Optional[float] = None
    Sx2: Optional[float] = None

    @classmethod
    def from_summary(cls, summary: PopulationSummary) -> "KnownParams":
        return cls(**{f.name: getattr(summary, f.name) for f in fields(cls)})

    def get(self, name: str) -> float:
        value = getattr(self, name)
        if value is None:
            raise MissingKnownParam(f"known parameter {name!r} is not set")
        return float(value)


class Evaluation:
    """Accumulates undefined-draw masks while an estimator is computed."""

    def __init__(self, stats, known: KnownParams):
        self.stats = stats
        self.known = known
        self.bad = None
        self.reasons: list[str] = []

    def stat(self, name: str) -> np.ndarray:
        value = getattr(self.stats, name, None)
        if value is None:
            if name == "bphi" and getattr(self.stats, "sphi2", None) is not None:
                return np.full(np.shape(self.stats.sphi2), np.nan)
            raise MissingStatistic(f"sample statistic {name!r} is not available")
        return np.asarray(value, dtype=float)

    def param(self, name: str) -> float:
        return self.known.get(name)

    def guard(self, bad, reason: str) -> np.ndarray:
        bad = np.asarray(bad, dtype=bool)
        if bad.any():
            self.reasons.append(reason)
            self.bad = bad if self.bad is None else (self.bad | bad)
        return bad

    def denominator(self, den, reason: str, positive: bool = False) -> np.ndarray:
        """``den`` with flagged entries replaced by 1 so later arithmetic stays finite."""
        den = np.asarray(den, dtype=float)
        bad = self.guard(~(den > 0) if positive else ~(den != 0), reason)
        return np.where(bad, 1.0, den)


class EstimatorSpec:
    """Base class for mean and variance estimator specifications."""

    tag: ClassVar[str] = ""
    kind: ClassVar[str] = "mean"
    two_phase: ClassVar[bool] = False
    columns: ClassVar[tuple] = ()

    def _compute(self, ev: Evaluation) -> np.ndarray:
        raise NotImplementedError

    @property
    def label(self) -> str:
        parts = []
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "member" or value is None:
                continue
            parts.append(f"{f.name}={value:.10g}" if isinstance(value, float) else f"{f.name}={value}")
        member = getattr(self, "member", None)
        head = f"{self.tag}[{member}]" if member else self.tag
        return f"{head}({', '.join(parts)})" if parts else head

    def __str__(self) -> str:
        return self.label


def evaluate_batch(spec: EstimatorSpec, stats, known: KnownParams):
    """Evaluate ``spec`` on (batched) statistics.

    Returns ``(values, ok, reasons)``: values with NaN where undefined, the
    boolean mask of defined draws, and the reasons recorded for undefined ones.
    """
    ev = Evaluation(stats, known)
    with np.errstate(all="ignore"):
        values = np.atleast_1d(np.asarray(spec._compute(ev), dtype=float))
    ok = np.isfinite(values)
    if ev.bad is not None:
        ok &= ~np.broadcast_to(ev.bad, ok.shape)
    if not ok.all() and not ev.reasons:
        ev.reasons.append("non-finite value")
    values = np.where(ok, values, np.nan)
    return values, ok, ev.reasons


def evaluate_scalar(spec: EstimatorSpec, stats, known: KnownParams) -> float:
    values, ok, reasons = evaluate_batch(spec, stats, known)
    if values.size != 1:
        raise ValueError("scalar evaluation got batched statistics")
    if not ok[0]:
        raise UndefinedEstimate(f"{spec.label}: {reasons[0] if reasons else 'undefined'}")
    return float(values[0])
