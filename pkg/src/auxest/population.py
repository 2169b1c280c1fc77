"""Finite populations and their population-level parameters.

A :class:`Population` carries the study variable ``y`` and, optionally, a
continuous auxiliary ``x`` and a binary attribute ``phi``.  :func:`summarize`
turns it into a :class:`PopulationSummary` holding every symbol the first-order
theory consumes.  Two divisors are in play and they are never mixed: the mean
squares ``S^2`` use ``N - 1`` while the central moments ``mu_rs`` (and hence the
kurtoses and ``h``) use ``N``.

Fields that cannot be computed (no auxiliary column, zero variance, zero mean
for a coefficient of variation) are ``None`` rather than NaN.  Theory code asks
for what it needs through :meth:`PopulationSummary.require`, which raises
:class:`~auxest.errors.MissingSummaryField` instead of letting NaN propagate.

Synthetic populations
---------------------
:func:`synthesize_population` builds controlled populations for Monte Carlo
work.  The auxiliary ``x`` comes from standardized draws ``z1`` (normal, or a
generalized normal when a kurtosis target is given).  The study variable is the
blend ``rho * z1 + sqrt(1 - rho**2) * z2`` where ``z2`` is independent noise
that has been orthogonalized against ``z1`` over the finite population, so the
realized correlation equals the target up to rounding.  Both variables are
then rescaled affinely to the requested means and coefficients of variation.
The attribute is produced by marking the ``round(N * P)`` units with the
largest value of a latent ``c * y_std + sqrt(1 - c**2) * z3``; ``c`` is tuned by
bisection until the point-biserial correlation is within 0.01 of its target.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np
from scipy import optimize, special, stats

from .errors import (
    AttributeNotBinary,
    EmptyPopulation,
    MissingAuxiliary,
    MissingSummaryField,
    ParseError,
    PhaseOrderViolation,
    PopulationShapeError,
    SampleTooLarge,
    UnattainableTarget,
)

__all__ = [
    "Population",
    "PopulationSummary",
    "DesignConstants",
    "SynthesisTarget",
    "summarize",
    "central_moment_rs",
    "load_population_csv",
    "write_population_csv",
    "synthesize_population",
]


def _frozen_array(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Population:
    """Finite population of ``N`` units.

    Parameters
    ----------
    y : array_like
        Study variable, length ``N >= 2``.
    x : array_like, optional
        Continuous auxiliary variable.
    phi : array_like, optional
        Auxiliary attribute, entries exactly 0 or 1.
    """

    y: np.ndarray
    x: Optional[np.ndarray] = None
    phi: Optional[np.ndarray] = None

    def __post_init__(self):
        y = _frozen_array(self.y)
        if y.ndim != 1 or y.size == 0:
            raise EmptyPopulation("population has no units")
        if y.size < 2:
            raise EmptyPopulation("population needs at least two units")
        if not np.all(np.isfinite(y)):
            raise PopulationShapeError("y contains non-finite values")
        object.__setattr__(self, "y", y)
        if self.x is not None:
            x = _frozen_array(self.x)
            if x.shape != y.shape:
                raise PopulationShapeError(f"x has length {x.size}, y has {y.size}")
            if not np.all(np.isfinite(x)):
                raise PopulationShapeError("x contains non-finite values")
            object.__setattr__(self, "x", x)
        if self.phi is not None:
            phi = np.asarray(self.phi, dtype=float)
            if phi.shape != y.shape:
                raise PopulationShapeError(f"phi has length {phi.size}, y has {y.size}")
            bad = np.flatnonzero((phi != 0) & (phi != 1))
            if bad.size:
                raise AttributeNotBinary(int(bad[0]) + 1, float(phi[bad[0]]))
            object.__setattr__(self, "phi", _frozen_array(phi))

    @property
    def N(self) -> int:
        return int(self.y.size)

    def column(self, name: str) -> np.ndarray:
        value = getattr(self, name)
        if value is None:
            raise MissingAuxiliary(f"population has no {name!r} column")
        return value

    def scaled(self, c: float) -> "Population":
        """Population with ``y`` multiplied by ``c``."""
        return Population(self.y * c, self.x, self.phi)

    def fingerprint(self) -> str:
        import hashlib

        h = hashlib.sha256()
        for name in ("y", "x", "phi"):
            arr = getattr(self, name)
            h.update(name.encode())
            if arr is not None:
                h.update(np.ascontiguousarray(arr, dtype="<f8").tobytes())
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class PopulationSummary:
    """Population-level symbols consumed by the theory formulas.

    ``None`` marks a field that is unset: its inputs are absent or degenerate.
    Names follow the usual notation (``Cy`` is C_y, ``rho_pb`` the point
    biserial correlation, ``beta2x`` the kurtosis of x, ``Kp = rho_pb Cy/Cp``).
    """

    N: Optional[int] = None
    Ybar: Optional[float] = None
    Xbar: Optional[float] = None
    P: Optional[float] = None
    Sy2: Optional[float] = None
    Sx2: Optional[float] = None
    Sphi2: Optional[float] = None
    Syx: Optional[float] = None
    Syphi: Optional[float] = None
    Cy: Optional[float] = None
    Cx: Optional[float] = None
    Cp: Optional[float] = None
    rho: Optional[float] = None
    rho_pb: Optional[float] = None
    beta2y: Optional[float] = None
    beta2x: Optional[float] = None
    beta2phi: Optional[float] = None
    h: Optional[float] = None
    C: Optional[float] = None
    K: Optional[float] = None
    Kp: Optional[float] = None
    Bphi: Optional[float] = None

    def require(self, *names: str) -> tuple:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise MissingSummaryField(f"summary fields unset: {', '.join(missing)}")
        values = tuple(getattr(self, n) for n in names)
        return values[0] if len(values) == 1 else values

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    @classmethod
    def from_scalars(cls, **scalars) -> "PopulationSummary":
        """Build a summary from published scalars, deriving what they imply.

        Empirical studies usually print a handful of parameters (``Ybar``,
        ``Cy``, ``rho`` ...).  Derivable fields are filled in repeatedly until
        nothing changes: mean squares from CVs and means (or the reverse),
        covariances from correlations, ``K``/``Kp`` from correlations and
        CVs, and ``C`` from ``h`` and ``beta2x`` (or ``h`` from ``C``).
        """
        unknown = set(scalars) - set(cls.field_names())
        if unknown:
            raise MissingSummaryField(f"unknown summary fields: {sorted(unknown)}")
        v = {k: (None if val is None else float(val)) for k, val in scalars.items()}
        if v.get("N") is not None:
            v["N"] = int(v["N"])

        def has(*ks):
            return all(v.get(k) is not None for k in ks)

        def setif(key, fn):
            if v.get(key) is None:
                try:
                    v[key] = fn()
                except ZeroDivisionError:
                    pass
                else:
                    return True
            return False

        rules = [
            ("Sy2", ("Cy", "Ybar"), lambda: (v["Cy"] * v["Ybar"]) ** 2),
            ("Sx2", ("Cx", "Xbar"), lambda: (v["Cx"] * v["Xbar"]) ** 2),
            ("Sphi2", ("Cp", "P"), lambda: (v["Cp"] * v["P"]) ** 2),
            ("Cy", ("Sy2", "Ybar"), lambda: math.sqrt(v["Sy2"]) / v["Ybar"]),
            ("Cx", ("Sx2", "Xbar"), lambda: math.sqrt(v["Sx2"]) / v["Xbar"]),
            ("Cp", ("Sphi2", "P"), lambda: math.sqrt(v["Sphi2"]) / v["P"]),
            ("Syx", ("rho", "Sy2", "Sx2"), lambda: v["rho"] * math.sqrt(v["Sy2"] * v["Sx2"])),
            ("Syphi", ("rho_pb", "Sy2", "Sphi2"),
             lambda: v["rho_pb"] * math.sqrt(v["Sy2"] * v["Sphi2"])),
            ("Bphi", ("Syphi", "Sphi2"), lambda: v["Syphi"] / v["Sphi2"]),
            ("K", ("rho", "Cy", "Cx"), lambda: v["rho"] * v["Cy"] / v["Cx"]),
            ("Kp", ("rho_pb", "Cy", "Cp"), lambda: v["rho_pb"] * v["Cy"] / v["Cp"]),
            ("C", ("h", "beta2x"), lambda: (v["h"] - 1.0) / (v["beta2x"] - 1.0)),
            ("h", ("C", "beta2x"), lambda: 1.0 + v["C"] * (v["beta2x"] - 1.0)),
        ]
        changed = True
        while changed:
            changed = False
            for key, deps, fn in rules:
                if has(*deps) and setif(key, fn):
                    changed = True
        return cls(**v)


@dataclass(frozen=True)
class DesignConstants:
    """Sample sizes and the finite-population factors derived from them.

    ``ignore_fpc`` selects the factor used by the variance-estimator theory:
    ``lam = 1/n`` when true (the published convention for variance
    estimation), ``f1 = 1/n - 1/N`` otherwise.  Formulas for mean estimators
    always use ``f1``, ``f2`` and ``f3``.
    """

    N: int
    n: int
    n_prime: Optional[int] = None
    ignore_fpc: bool = True

    def __post_init__(self):
        N, n, n1 = self.N, self.n, self.n_prime
        if n < 2:
            raise SampleTooLarge(f"sample size n={n} must be at least 2")
        if n > N:
            raise SampleTooLarge(f"sample size n={n} exceeds N={N}")
        if n1 is not None:
            if n1 > N:
                raise SampleTooLarge(f"first-phase size n'={n1} exceeds N={N}")
            if not n < n1:
                raise PhaseOrderViolation(f"second-phase n={n} must be below n'={n1}")

    @property
    def two_phase(self) -> bool:
        return self.n_prime is not None

    @property
    def f1(self) -> float:
        return 1.0 / self.n - 1.0 / self.N

    @property
    def f2(self) -> Optional[float]:
        return None if self.n_prime is None else 1.0 / self.n_prime - 1.0 / self.N

    @property
    def f3(self) -> Optional[float]:
        return None if self.n_prime is None else 1.0 / self.n - 1.0 / self.n_prime

    @property
    def lam(self) -> float:
        return 1.0 / self.n

    @property
    def variance_factor(self) -> float:
        return self.lam if self.ignore_fpc else self.f1


def central_moment_rs(pop: Population, r: int, s: int) -> float:
    """``mu_rs = (1/N) sum (y_i - Ybar)^r (x_i - Xbar)^s`` (divisor N)."""
    if r < 0 or s < 0:
        raise ValueError("moment orders must be nonnegative")
    dy = pop.y - pop.y.mean()
    term = dy ** r
    if s > 0:
        x = pop.column("x")
        term = term * (x - x.mean()) ** s
    return float(np.mean(term))


def _moment(a: np.ndarray, b: np.ndarray, r: int, s: int) -> float:
    return float(np.mean((a - a.mean()) ** r * (b - b.mean()) ** s))


def _ratio(num, den):
    if num is None or den is None or den == 0:
        return None
    return num / den


def summarize(pop: Population) -> PopulationSummary:
    """Compute every population-level parameter the theory formulas use."""
    N = pop.N
    if N < 2:
        raise EmptyPopulation("population needs at least two units")
    y = pop.y
    Ybar = float(y.mean())
    Sy2 = float(np.var(y, ddof=1))
    Sy = math.sqrt(Sy2)
    mu20 = _moment(y, y, 1, 1)
    beta2y = _ratio(_moment(y, y, 2, 2), mu20 ** 2)
    Cy = _ratio(Sy, Ybar)
    out = dict(N=N, Ybar=Ybar, Sy2=Sy2, Cy=Cy, beta2y=beta2y)

    if pop.x is not None:
        x = pop.x
        Xbar = float(x.mean())
        Sx2 = float(np.var(x, ddof=1))
        Syx = float(np.sum((y - Ybar) * (x - Xbar)) / (N - 1))
        mu02 = _moment(x, x, 1, 1)
        beta2x = _ratio(_moment(x, x, 2, 2), mu02 ** 2)
        h = _ratio(_moment(y, x, 2, 2), mu20 * mu02)
        rho = _ratio(Syx, Sy * math.sqrt(Sx2))
        Cx = _ratio(math.sqrt(Sx2), Xbar)
        C = None
        if h is not None and beta2x is not None and beta2x != 1:
            C = (h - 1.0) / (beta2x - 1.0)
        K = None if rho is None or Cy is None else _ratio(rho * Cy, Cx)
        out.update(Xbar=Xbar, Sx2=Sx2, Syx=Syx, Cx=Cx, rho=rho,
                   beta2x=beta2x, h=h, C=C, K=K)

    if pop.phi is not None:
        phi = pop.phi
        P = float(phi.mean())
        Sphi2 = float(np.var(phi, ddof=1))
        Syphi = float(np.sum((y - Ybar) * (phi - P)) / (N - 1))
        muphi2 = _moment(phi, phi, 1, 1)
        beta2phi = _ratio(_moment(phi, phi, 2, 2), muphi2 ** 2)
        rho_pb = _ratio(Syphi, Sy * math.sqrt(Sphi2))
        Cp = _ratio(math.sqrt(Sphi2), P)
        Kp = None if rho_pb is None or Cy is None else _ratio(rho_pb * Cy, Cp)
        out.update(P=P, Sphi2=Sphi2, Syphi=Syphi, Cp=Cp, rho_pb=rho_pb,
                   beta2phi=beta2phi, Kp=Kp, Bphi=_ratio(Syphi, Sphi2))
    return PopulationSummary(**out)


# --------------------------------------------------------------------------
# CSV input/output


def load_population_csv(path, y: str = "y", x: Optional[str] = None,
                        phi: Optional[str] = None) -> Population:
    """Read a population from a headed, comma-separated file.

    Columns are selected by name.  When ``x`` or ``phi`` is not given, columns
    literally named ``x`` and ``phi`` are picked up if the header has them.
    Row numbers in errors count data rows from 1.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise EmptyPopulation(f"{path} is empty") from None
        index = {name: i for i, name in enumerate(header)}

        def locate(name, default):
            if name is None:
                return index.get(default), default
            if name not in index:
                raise ParseError(0, name, "column not in header")
            return index[name], name

        iy, ny = locate(y, "y")
        if iy is None:
            raise ParseError(0, ny, "column not in header")
        ix, nx = locate(x, "x")
        ip, nphi = locate(phi, "phi")

        ys, xs, ps = [], [], []
        for row_no, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue

            def number(i, name):
                try:
                    return float(row[i])
                except (IndexError, ValueError):
                    raise ParseError(row_no, name, row[i] if i < len(row) else None) from None

            ys.append(number(iy, ny))
            if ix is not None:
                xs.append(number(ix, nx))
            if ip is not None:
                raw = row[ip].strip() if ip < len(row) else ""
                if raw not in ("0", "1"):
                    raise AttributeNotBinary(row_no, raw)
                ps.append(float(raw))
    if not ys:
        raise EmptyPopulation(f"{path} has no data rows")
    return Population(np.array(ys), np.array(xs) if ix is not None else None,
                      np.array(ps) if ip is not None else None)


def write_population_csv(pop: Population, path) -> None:
    """Write ``pop`` so that :func:`load_population_csv` reads it back exactly."""
    cols = [("y", pop.y)] + [(n, getattr(pop, n)) for n in ("x", "phi")
                              if getattr(pop, n) is not None]
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([c for c, _ in cols])
        for i in range(pop.N):
            w.writerow([str(int(a[i])) if c == "phi" else repr(float(a[i])) for c, a in cols])


# --------------------------------------------------------------------------
# synthesis


@dataclass(frozen=True)
class SynthesisTarget:
    """Targets for :func:`synthesize_population`.

    Give ``Cx`` (with optional ``rho``, ``Xbar`` and ``beta2x``) for a
    continuous auxiliary, and ``P`` or ``Cp`` (with optional ``rho_pb``) for
    an attribute.  Either or both may be present.

    ``x_distribution`` shapes the auxiliary: ``"normal"`` (symmetric, or
    generalized normal when ``beta2x`` is set) or ``"lognormal"``, which keeps
    ``x`` positive and right-skewed as survey auxiliaries usually are.  A
    symmetric ``x`` with ``Cx`` near 1 takes negative values on a sizeable
    share of units.
    """

    N: int
    Ybar: float
    Cy: float
    Cx: Optional[float] = None
    rho: Optional[float] = None
    Xbar: float = 100.0
    beta2x: Optional[float] = None
    P: Optional[float] = None
    Cp: Optional[float] = None
    rho_pb: Optional[float] = None
    x_distribution: str = "normal"


def _standardize(z: np.ndarray) -> np.ndarray:
    z = z - z.mean()
    return z / z.std(ddof=1)


def _orthogonal_noise(rng, basis: list[np.ndarray], N: int) -> np.ndarray:
    z = rng.standard_normal(N)
    z = z - z.mean()
    for b in basis:
        z = z - (z @ b) / (b @ b) * b
    return z / z.std(ddof=1)


def _gennorm_shape(beta2: float) -> float:
    def kurt(log_shape):
        s = math.exp(log_shape)
        return math.exp(special.gammaln(5 / s) + special.gammaln(1 / s)
                        - 2 * special.gammaln(3 / s)) - beta2

    return math.exp(optimize.brentq(kurt, math.log(0.15), math.log(200.0)))


def _point_biserial(y: np.ndarray, phi: np.ndarray) -> float:
    return float(np.corrcoef(y, phi)[0, 1])


def synthesize_population(target: SynthesisTarget, seed: int) -> Population:
    """Generate a population whose summary matches ``target``.

    Deterministic for a given ``seed``.  Means and CVs are hit to rounding
    error (the attribute CV within 0.5 %), correlations within 0.01.
    """
    t = target
    N = int(t.N)
    if N < 10:
        raise UnattainableTarget("synthesis needs N >= 10")
    if t.Cy < 0 or (t.Cx is not None and t.Cx < 0):
        raise UnattainableTarget("coefficients of variation must be nonnegative")
    if t.rho is not None:
        if t.Cx is None:
            raise UnattainableTarget("rho target requires a Cx target")
        if not abs(t.rho) < 1:
            raise UnattainableTarget(f"correlation target {t.rho} outside (-1, 1)")
    if t.rho_pb is not None and not abs(t.rho_pb) < 1:
        raise UnattainableTarget(f"point biserial target {t.rho_pb} outside (-1, 1)")
    if t.x_distribution not in ("normal", "lognormal"):
        raise UnattainableTarget(f"x_distribution must be normal or lognormal, not {t.x_distribution!r}")
    if t.x_distribution == "lognormal" and t.beta2x is not None:
        raise UnattainableTarget("a lognormal auxiliary has its kurtosis fixed by Cx; drop beta2x")
    if t.beta2x is not None and not t.beta2x > 1.8:
        raise UnattainableTarget("kurtosis targets below 1.8 are not supported")

    rng = np.random.default_rng(seed)
    z1 = None
    x = None
    if t.Cx is not None:
        if t.x_distribution == "lognormal":
            raw = rng.lognormal(0.0, math.sqrt(math.log1p(t.Cx ** 2)), N)
        elif t.beta2x is None:
            raw = rng.standard_normal(N)
        else:
            raw = stats.gennorm.rvs(_gennorm_shape(t.beta2x), size=N, random_state=rng)
        z1 = _standardize(raw)
        x = t.Xbar * (1.0 + t.Cx * z1)
    if t.rho is not None:
        z2 = _orthogonal_noise(rng, [z1], N)
        ystd = t.rho * z1 + math.sqrt(1.0 - t.rho ** 2) * z2
    else:
        ystd = _standardize(rng.standard_normal(N))
    y = t.Ybar * (1.0 + t.Cy * ystd)

    phi = None
    if t.P is not None or t.Cp is not None:
        if t.P is not None and t.Cp is not None:
            raise UnattainableTarget("give P or Cp, not both")
        P = t.P if t.P is not None else N / (N + t.Cp ** 2 * (N - 1))
        A = int(round(N * P))
        if not 1 <= A <= N - 1:
            raise UnattainableTarget(f"attribute count {A} leaves no variation")
        z3 = _orthogonal_noise(rng, [ystd], N)

        def attribute(c):
            latent = c * ystd + math.sqrt(max(0.0, 1.0 - c * c)) * z3
            out = np.zeros(N)
            out[np.argsort(-latent, kind="stable")[:A]] = 1.0
            return out

        if t.rho_pb is None:
            phi = attribute(0.0)
        else:
            lo, hi = -1.0, 1.0
            r_lo, r_hi = _point_biserial(y, attribute(lo)), _point_biserial(y, attribute(hi))
            if not r_lo - 0.01 <= t.rho_pb <= r_hi + 0.01:
                raise UnattainableTarget(
                    f"rho_pb={t.rho_pb} unreachable with P={A / N:.4g}; "
                    f"attainable range [{r_lo:.3f}, {r_hi:.3f}]")
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if _point_biserial(y, attribute(mid)) < t.rho_pb:
                    lo = mid
                else:
                    hi = mid
            best = min((lo, hi), key=lambda c: abs(_point_biserial(y, attribute(c)) - t.rho_pb))
            phi = attribute(best)
            if abs(_point_biserial(y, phi) - t.rho_pb) > 0.01:
                raise UnattainableTarget(f"could not reach rho_pb={t.rho_pb} within 0.01")
        if t.Cp is not None:
            achieved = math.sqrt(np.var(phi, ddof=1)) / phi.mean()
            if abs(achieved / t.Cp - 1.0) > 0.005:
                raise UnattainableTarget(
                    f"Cp={t.Cp} not reachable within 0.5% at N={N} (got {achieved:.5g})")
    return Population(y, x, phi)
