"""Monte Carlo and exact-enumeration moments of estimators, and their comparison with theory.

Replication ``r`` draws its sample from the stream
``replication_stream(seed, r)``.  Replications are processed in fixed-size
blocks which may run on several threads; every block writes into its own
slot, and the moments are accumulated with :func:`math.fsum` over arrays in
replication order.  A report is therefore the same, byte for byte, whatever
the thread count.

Reference values (``Ybar`` for mean estimators, ``S_y^2`` for variance
estimators) are recomputed from the population on every run.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import (
    AllDrawsUndefined,
    AuxEstError,
    ConfigError,
    IncompatibleSpec,
    SpecMismatch,
    UndefinedDrawsAborted,
)
from .mean_estimators import MeanPerUnit
from .population import DesignConstants, Population, summarize
from .sampling import (
    DEFAULT_ENUMERATION_CAP,
    batch_sample_stats,
    batch_two_phase_stats,
    draw_index_block,
    enumerate_index_blocks,
)
from .specs import EstimatorSpec, KnownParams, evaluate_batch
from .theory import TheoryMoments, theory
from .variance_estimators import SampleVariance

__all__ = [
    "SimulationConfig",
    "EstimatorResult",
    "SimulationReport",
    "OracleRow",
    "OracleReport",
    "Tolerance",
    "Verdict",
    "run_simulation",
    "exact_moments_enumeration",
    "compare_theory_empirical",
    "POLICIES",
]

POLICIES = ("skip", "abort")
DEFAULT_BLOCK = 2000


@dataclass(frozen=True)
class SimulationConfig:
    """What to simulate.

    ``workers`` and ``block`` only affect speed, never the report.
    """

    replications: int
    seed: int
    design: DesignConstants
    estimators: Sequence[EstimatorSpec]
    policy: str = "skip"
    bias_form: str = "printed"
    workers: int = 1
    block: int = DEFAULT_BLOCK

    def __post_init__(self):
        if self.replications < 1:
            raise ConfigError("replications must be at least 1")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")
        if self.policy not in POLICIES:
            raise ConfigError(f"policy must be one of {POLICIES}, not {self.policy!r}")
        if self.workers < 1 or self.block < 1:
            raise ConfigError("workers and block must be positive")
        if not self.estimators:
            raise ConfigError("no estimators given")


@dataclass(frozen=True)
class EstimatorResult:
    """Empirical moments of one estimator; ``None`` marks a value that is undefined."""

    label: str
    kind: str
    truth: float
    mean: float
    bias: float
    mse: float
    se_bias: Optional[float]
    se_mse: Optional[float]
    pre: Optional[float]
    theory_bias: Optional[float]
    theory_mse: Optional[float]
    delta_bias: Optional[float]
    delta_mse: Optional[float]
    defined: int
    undefined: int
    undefined_reasons: tuple = ()


def _rel(emp, ref):
    if emp is None or ref is None or ref == 0:
        return None
    return (emp - ref) / abs(ref)


_CSV_COLUMNS = [f for f in EstimatorResult.__dataclass_fields__ if f != "undefined_reasons"] + [
    "undefined_reasons"]


def _csv_value(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, tuple):
        return "; ".join(v)
    return str(v)


@dataclass(frozen=True)
class SimulationReport:
    seed: int
    replications: int
    fingerprint: str
    N: int
    n: int
    n_prime: Optional[int]
    policy: str
    bias_form: str
    results: tuple

    def result(self, label: str) -> EstimatorResult:
        for r in self.results:
            if r.label == label:
                return r
        raise KeyError(label)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["results"] = [asdict(r) for r in self.results]
        for r in d["results"]:
            r["undefined_reasons"] = list(r["undefined_reasons"])
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(_CSV_COLUMNS)
        for r in self.results:
            w.writerow([_csv_value(getattr(r, c)) for c in _CSV_COLUMNS])
        return buf.getvalue()


def _check_compat(pop: Population, design: DesignConstants, spec: EstimatorSpec) -> None:
    for col in spec.columns:
        if getattr(pop, col) is None:
            raise IncompatibleSpec(f"{spec.label} needs column {col!r}, absent from the population")
    if spec.two_phase and not design.two_phase:
        raise IncompatibleSpec(f"{spec.label} is a two-phase estimator but n' is unset")
    if spec.kind == "variance" and design.n < 2:
        raise IncompatibleSpec("variance estimators need n >= 2")


def _truth(pop: Population, kind: str) -> float:
    y = pop.y
    if kind == "variance":
        d = y - math.fsum(y) / y.size
        return math.fsum(d * d) / (y.size - 1)
    return math.fsum(y) / y.size


class _Accum:
    """Values of one estimator over all draws, in draw order."""

    def __init__(self):
        self.parts: list[np.ndarray] = []
        self.reasons: list[str] = []

    def add(self, values, reasons):
        self.parts.append(values)
        for r in reasons:
            if r not in self.reasons:
                self.reasons.append(r)

    def values(self) -> np.ndarray:
        return np.concatenate(self.parts) if self.parts else np.empty(0)


def _moments(v: np.ndarray, truth: float):
    ok = v[np.isfinite(v)]
    m = ok.size
    if m == 0:
        return None
    mean = math.fsum(ok) / m
    sq = (ok - truth) ** 2
    mse = math.fsum(sq) / m
    se_bias = se_mse = None
    if m >= 2:
        dv = ok - mean
        se_bias = math.sqrt(math.fsum(dv * dv) / (m - 1) / m)
        ds = sq - mse
        se_mse = math.sqrt(math.fsum(ds * ds) / (m - 1) / m)
    return dict(mean=mean, bias=mean - truth, mse=mse, se_bias=se_bias, se_mse=se_mse,
                defined=m, undefined=int(v.size - m))


def _evaluate_specs(pop, specs, known, stats):
    return [evaluate_batch(s, stats, known) for s in specs]


def _with_baselines(specs):
    kinds = {s.kind for s in specs}
    base = {"mean": MeanPerUnit(), "variance": SampleVariance()}
    return list(specs) + [base[k] for k in sorted(kinds)]


def _theory_or_none(spec, summary, design, bias_form) -> Optional[TheoryMoments]:
    try:
        return theory(spec, summary, design, bias_form)
    except AuxEstError:
        return None


def _assemble(pop, specs, n_user, accums, design, bias_form, policy):
    truths = {k: _truth(pop, k) for k in ("mean", "variance")}
    moments = [_moments(acc.values(), truths[s.kind]) for s, acc in zip(specs, accums)]
    base_mse = {}
    for s, m in zip(specs[n_user:], moments[n_user:]):
        base_mse[s.kind] = m["mse"] if m else None
    counts = {s.label: int(acc.values().size - (m["defined"] if m else 0))
              for s, acc, m in zip(specs[:n_user], accums[:n_user], moments[:n_user])}
    bad = {k: v for k, v in counts.items() if v}
    if policy == "abort" and bad:
        raise UndefinedDrawsAborted(bad)
    for s, m in zip(specs[:n_user], moments[:n_user]):
        if m is None:
            raise AllDrawsUndefined(f"{s.label}: every draw was undefined")
    try:
        summary = summarize(pop)
    except AuxEstError:
        summary = None
    rows = []
    for s, acc, m in zip(specs[:n_user], accums[:n_user], moments[:n_user]):
        th = _theory_or_none(s, summary, design, bias_form) if summary is not None else None
        ref = base_mse.get(s.kind)
        pre = 100.0 * ref / m["mse"] if ref is not None and m["mse"] > 0 else None
        tb = th.bias if th else None
        tm = th.mse if th else None
        rows.append(EstimatorResult(
            label=s.label, kind=s.kind, truth=truths[s.kind], mean=m["mean"], bias=m["bias"],
            mse=m["mse"], se_bias=m["se_bias"], se_mse=m["se_mse"], pre=pre,
            theory_bias=tb, theory_mse=tm, delta_bias=_rel(m["bias"], tb),
            delta_mse=_rel(m["mse"], tm), defined=m["defined"], undefined=m["undefined"],
            undefined_reasons=tuple(acc.reasons)))
    return tuple(rows)


def run_simulation(pop: Population, config: SimulationConfig) -> SimulationReport:
    """Draw ``config.replications`` samples and summarize every estimator.

    Under policy ``"skip"`` undefined draws are left out of that estimator's
    moments and counted; under ``"abort"`` any undefined draw raises
    :class:`~auxest.errors.UndefinedDrawsAborted` with the counts.  Empirical
    PRE is ``100 * MSE(baseline) / MSE(estimator)``, the baseline being
    ``ybar`` or ``s_y^2`` on all draws.

    Raises
    ------
    IncompatibleSpec
        An estimator needs a column the population lacks, or a second phase.
    AllDrawsUndefined
        An estimator is undefined on every draw.
    """
    design = config.design
    if design.N != pop.N:
        raise IncompatibleSpec(f"design N={design.N} but population has N={pop.N}")
    user = list(config.estimators)
    for s in user:
        _check_compat(pop, design, s)
    specs = _with_baselines(user)
    known = KnownParams.from_summary(summarize(pop))
    R = config.replications
    edges = list(range(0, R, config.block)) + [R]
    blocks = list(zip(edges[:-1], edges[1:]))

    def run_block(bounds):
        start, stop = bounds
        if design.two_phase:
            first, second = draw_index_block(pop.N, design.n, config.seed, start, stop, design.n_prime)
            stats = batch_two_phase_stats(pop, first, second)
        else:
            idx = draw_index_block(pop.N, design.n, config.seed, start, stop)
            stats = batch_sample_stats(pop, idx)
        return _evaluate_specs(pop, specs, known, stats)

    if config.workers == 1 or len(blocks) == 1:
        outputs = [run_block(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as ex:
            outputs = list(ex.map(run_block, blocks))
    accums = [_Accum() for _ in specs]
    for out in outputs:
        for acc, (values, _ok, reasons) in zip(accums, out):
            acc.add(values, reasons)
    rows = _assemble(pop, specs, len(user), accums, design, config.bias_form, config.policy)
    return SimulationReport(
        seed=config.seed, replications=R, fingerprint=pop.fingerprint(), N=pop.N, n=design.n,
        n_prime=design.n_prime, policy=config.policy, bias_form=config.bias_form, results=rows)


# exact enumeration ----------------------------------------------------------------

@dataclass(frozen=True)
class OracleRow:
    label: str
    kind: str
    truth: float
    expectation: float
    bias: float
    mse: float
    defined: int
    undefined: int


@dataclass(frozen=True)
class OracleReport:
    N: int
    n: int
    sample_space_size: int
    fingerprint: str
    results: tuple

    def result(self, label: str) -> OracleRow:
        for r in self.results:
            if r.label == label:
                return r
        raise KeyError(label)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["results"] = [asdict(r) for r in self.results]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        cols = list(OracleRow.__dataclass_fields__)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in self.results:
            w.writerow([_csv_value(getattr(r, c)) for c in cols])
        return buf.getvalue()


def exact_moments_enumeration(pop: Population, n: int, specs: Sequence[EstimatorSpec],
                              cap: int = DEFAULT_ENUMERATION_CAP, policy: str = "skip") -> OracleReport:
    """Exact design expectation, bias and MSE over all ``C(N, n)`` samples.

    Each subset carries weight ``1 / C(N, n)``.  Under ``"skip"`` an estimator
    undefined on some subsets is averaged over the subsets where it is
    defined, and the number left out is reported.

    Raises
    ------
    EnumerationTooLarge
        ``C(N, n)`` exceeds ``cap``.
    """
    if policy not in POLICIES:
        raise ConfigError(f"policy must be one of {POLICIES}")
    design = DesignConstants(pop.N, n) if n >= 2 else None
    specs = list(specs)
    for s in specs:
        if s.two_phase:
            raise IncompatibleSpec(f"{s.label}: enumeration covers single-phase designs only")
        for col in s.columns:
            if getattr(pop, col) is None:
                raise IncompatibleSpec(f"{s.label} needs column {col!r}")
        if s.kind == "variance" and design is None:
            raise IncompatibleSpec("variance estimators need n >= 2")
    known = KnownParams.from_summary(summarize(pop))
    accums = [_Accum() for _ in specs]
    size = 0
    for idx in enumerate_index_blocks(pop.N, n, cap=cap):
        size += idx.shape[0]
        stats = batch_sample_stats(pop, idx)
        for acc, (values, _ok, reasons) in zip(accums, _evaluate_specs(pop, specs, known, stats)):
            acc.add(values, reasons)
    rows = []
    for s, acc in zip(specs, accums):
        truth = _truth(pop, s.kind)
        m = _moments(acc.values(), truth)
        if m is None:
            raise AllDrawsUndefined(f"{s.label}: undefined on every sample")
        if policy == "abort" and m["undefined"]:
            raise UndefinedDrawsAborted({s.label: m["undefined"]})
        rows.append(OracleRow(s.label, s.kind, truth, m["mean"], m["bias"], m["mse"],
                              m["defined"], m["undefined"]))
    return OracleReport(pop.N, n, size, pop.fingerprint(), tuple(rows))


# comparison ------------------------------------------------------------------------

@dataclass(frozen=True)
class Tolerance:
    """Accept ``|empirical - theory| <= max(abs, rel * |theory|)``; unset bounds are ignored.

    With both bounds unset for a quantity it is not compared.
    """

    mse_rel: Optional[float] = 0.10
    mse_abs: Optional[float] = None
    bias_rel: Optional[float] = None
    bias_abs: Optional[float] = None


@dataclass(frozen=True)
class Verdict:
    label: str
    quantity: str
    empirical: float
    theory: Optional[float]
    abs_delta: Optional[float]
    rel_delta: Optional[float]
    allowed: Optional[float]
    standard_error: Optional[float]
    passed: Optional[bool]


def _verdict(label, quantity, emp, th, se, rel, ab):
    if th is None:
        return Verdict(label, quantity, emp, None, None, None, None, se, None)
    allowed = max(ab or 0.0, (rel or 0.0) * abs(th))
    d = abs(emp - th)
    rel_delta = _rel(emp, th)
    return Verdict(label, quantity, emp, th, d, rel_delta, allowed, se, bool(d <= allowed))


def compare_theory_empirical(report: Union[SimulationReport, OracleReport],
                             theory_moments: Union[Sequence[TheoryMoments], dict],
                             tolerances: Tolerance = Tolerance()) -> list[Verdict]:
    """Theory-vs-empirical verdict table.

    ``theory_moments`` is aligned with ``report.results`` (a sequence) or
    keyed by estimator label (a dict).  The Monte Carlo standard error is
    carried along (``None`` for oracle reports).

    Raises
    ------
    SpecMismatch
        The theory list does not match the report's estimators.
    """
    results = report.results
    if isinstance(theory_moments, dict):
        missing = [r.label for r in results if r.label not in theory_moments]
        extra = set(theory_moments) - {r.label for r in results}
        if missing or extra:
            raise SpecMismatch(f"theory/report labels differ: missing {missing}, extra {sorted(extra)}")
        tms = [theory_moments[r.label] for r in results]
    else:
        tms = list(theory_moments)
        if len(tms) != len(results):
            raise SpecMismatch(f"{len(tms)} theory entries for {len(results)} estimators")
    out = []
    for r, tm in zip(results, tms):
        se_m = getattr(r, "se_mse", None)
        se_b = getattr(r, "se_bias", None)
        if tolerances.mse_rel is not None or tolerances.mse_abs is not None:
            out.append(_verdict(r.label, "mse", r.mse, tm.mse if tm else None, se_m,
                                tolerances.mse_rel, tolerances.mse_abs))
        if tolerances.bias_rel is not None or tolerances.bias_abs is not None:
            out.append(_verdict(r.label, "bias", r.bias, tm.bias if tm else None, se_b,
                                tolerances.bias_rel, tolerances.bias_abs))
    return out
