"""SRSWOR and two-phase sample selection, sample statistics, and enumeration.

Randomness is counter based: replication ``r`` under master seed ``s`` always
uses the Philox stream with key ``s`` and counter ``r`` in its top word (see
:func:`replication_stream`).  A replication's draw therefore does not depend on
which other replications ran before it, or on which thread ran it.

Statistics come in two shapes.  :func:`compute_sample_stats` returns scalars
for one sample.  :func:`batch_sample_stats` takes an ``(R, n)`` index matrix
and returns the same fields as length-``R`` arrays, which is what the Monte
Carlo harness and the enumeration oracle feed to the estimators.  In the batch
form an unset ``bphi`` (``s_phi^2 == 0``) is NaN; in the scalar form it is
``None``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Union

import numpy as np

from .errors import DegenerateSample, EnumerationTooLarge, PhaseOrderViolation, SampleTooLarge
from .population import Population

__all__ = [
    "Sample",
    "TwoPhaseSample",
    "SampleStats",
    "TwoPhaseStats",
    "DEFAULT_ENUMERATION_CAP",
    "replication_stream",
    "draw_srswor",
    "draw_two_phase",
    "draw_index_block",
    "compute_sample_stats",
    "compute_two_phase_stats",
    "batch_sample_stats",
    "batch_two_phase_stats",
    "enumerate_samples",
    "enumerate_index_blocks",
]

DEFAULT_ENUMERATION_CAP = 10 ** 6

Num = Union[float, np.ndarray]


def replication_stream(seed: int, replication: int) -> np.random.Generator:
    """Independent generator for one replication under a master seed."""
    if seed < 0 or replication < 0:
        raise ValueError("seed and replication index must be nonnegative")
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, replication]))


@dataclass(frozen=True, eq=False)
class Sample:
    indices: np.ndarray

    @property
    def n(self) -> int:
        return int(self.indices.size)


@dataclass(frozen=True, eq=False)
class TwoPhaseSample:
    first: np.ndarray
    second: np.ndarray

    @property
    def n_prime(self) -> int:
        return int(self.first.size)

    @property
    def n(self) -> int:
        return int(self.second.size)


def _check_size(N: int, n: int) -> None:
    if n < 1 or n > N:
        raise SampleTooLarge(f"sample size {n} not in [1, {N}]")


def draw_srswor(pop: Union[Population, int], n: int, stream: np.random.Generator) -> Sample:
    """Simple random sample without replacement of size ``n``."""
    N = pop if isinstance(pop, int) else pop.N
    _check_size(N, n)
    idx = np.sort(stream.choice(N, size=n, replace=False))
    return Sample(idx)


def draw_two_phase(pop: Union[Population, int], n_prime: int, n: int,
                   stream: np.random.Generator) -> TwoPhaseSample:
    """First phase SRSWOR of size ``n_prime``; second phase SRSWOR of ``n`` within it."""
    N = pop if isinstance(pop, int) else pop.N
    _check_size(N, n_prime)
    if not n < n_prime:
        raise PhaseOrderViolation(f"second-phase n={n} must be below n'={n_prime}")
    first = stream.choice(N, size=n_prime, replace=False)
    second = first[stream.choice(n_prime, size=n, replace=False)]
    return TwoPhaseSample(np.sort(first), np.sort(second))


def draw_index_block(N: int, n: int, seed: int, start: int, stop: int,
                     n_prime: Optional[int] = None):
    """Index matrices for replications ``start .. stop - 1``.

    Returns an ``(R, n)`` array, or a ``(first, second)`` pair of ``(R, n')``
    and ``(R, n)`` arrays for two-phase designs.
    """
    R = stop - start
    if n_prime is None:
        out = np.empty((R, n), dtype=np.intp)
        for k in range(R):
            out[k] = replication_stream(seed, start + k).choice(N, size=n, replace=False)
        return out
    first = np.empty((R, n_prime), dtype=np.intp)
    second = np.empty((R, n), dtype=np.intp)
    for k in range(R):
        g = replication_stream(seed, start + k)
        f = g.choice(N, size=n_prime, replace=False)
        first[k] = f
        second[k] = f[g.choice(n_prime, size=n, replace=False)]
    return first, second


@dataclass(frozen=True)
class SampleStats:
    """Sample statistics (variances with divisor ``n - 1``).

    Attributes are floats for a single sample or arrays for a batch.  Columns
    the population lacks are ``None``.
    """

    n: int
    ybar: Num
    sy2: Optional[Num] = None
    xbar: Optional[Num] = None
    sx2: Optional[Num] = None
    syx: Optional[Num] = None
    p: Optional[Num] = None
    sphi2: Optional[Num] = None
    syphi: Optional[Num] = None
    bphi: Optional[Num] = None


@dataclass(frozen=True)
class TwoPhaseStats(SampleStats):
    """Second-phase statistics plus the first-phase mean and proportion."""

    n_prime: Optional[int] = None
    xbar_prime: Optional[Num] = None
    p_prime: Optional[Num] = None


def _block_stats(pop: Population, idx: np.ndarray) -> dict:
    idx = np.atleast_2d(idx)
    n = idx.shape[1]
    Y = pop.y[idx]
    ybar = Y.mean(axis=1)
    dy = Y - ybar[:, None]
    out = dict(n=n, ybar=ybar)
    if n >= 2:
        out["sy2"] = (dy * dy).sum(axis=1) / (n - 1)
    if pop.x is not None:
        X = pop.x[idx]
        xbar = X.mean(axis=1)
        out["xbar"] = xbar
        if n >= 2:
            dx = X - xbar[:, None]
            out["sx2"] = (dx * dx).sum(axis=1) / (n - 1)
            out["syx"] = (dy * dx).sum(axis=1) / (n - 1)
    if pop.phi is not None:
        F = pop.phi[idx]
        p = F.mean(axis=1)
        out["p"] = p
        if n >= 2:
            dp = F - p[:, None]
            sphi2 = (dp * dp).sum(axis=1) / (n - 1)
            syphi = (dy * dp).sum(axis=1) / (n - 1)
            with np.errstate(divide="ignore", invalid="ignore"):
                bphi = np.where(sphi2 > 0, syphi / np.where(sphi2 > 0, sphi2, 1.0), np.nan)
            out.update(sphi2=sphi2, syphi=syphi, bphi=bphi)
    return out


def batch_sample_stats(pop: Population, idx: np.ndarray) -> SampleStats:
    """Vectorized statistics for an ``(R, n)`` matrix of sample indices."""
    return SampleStats(**_block_stats(pop, idx))


def batch_two_phase_stats(pop: Population, first: np.ndarray, second: np.ndarray) -> TwoPhaseStats:
    first = np.atleast_2d(first)
    out = _block_stats(pop, second)
    out["n_prime"] = first.shape[1]
    if pop.x is not None:
        out["xbar_prime"] = pop.x[first].mean(axis=1)
    if pop.phi is not None:
        out["p_prime"] = pop.phi[first].mean(axis=1)
    return TwoPhaseStats(**out)


def _scalarize(block: dict, strict: bool) -> dict:
    out = {}
    for key, value in block.items():
        if isinstance(value, np.ndarray):
            value = float(value[0])
            if math.isnan(value):
                value = None
        out[key] = value
    if strict and "sphi2" in out and out["sphi2"] == 0:
        raise DegenerateSample("s_phi^2 = 0: attribute constant in sample, b_phi undefined")
    return out


def compute_sample_stats(pop: Population, sample: Sample, strict: bool = False) -> SampleStats:
    """Statistics over the sampled units.

    With ``strict=True`` a sample in which the attribute is constant raises
    :class:`~auxest.errors.DegenerateSample`; otherwise ``bphi`` is left unset.
    """
    return SampleStats(**_scalarize(_block_stats(pop, sample.indices[None, :]), strict))


def compute_two_phase_stats(pop: Population, tps: TwoPhaseSample, strict: bool = False) -> TwoPhaseStats:
    block = _block_stats(pop, tps.second[None, :])
    block["n_prime"] = tps.n_prime
    if pop.x is not None:
        block["xbar_prime"] = float(pop.x[tps.first].mean())
    if pop.phi is not None:
        block["p_prime"] = float(pop.phi[tps.first].mean())
    return TwoPhaseStats(**_scalarize(block, strict))


def enumerate_samples(N: int, n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[tuple]:
    """Every size-``n`` subset of ``range(N)``, once each, in lexicographic order."""
    _check_size(N, n)
    size = math.comb(N, n)
    if size > cap:
        raise EnumerationTooLarge(size, cap)
    return itertools.combinations(range(N), n)


def enumerate_index_blocks(N: int, n: int, block: int = 50_000,
                           cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[np.ndarray]:
    """:func:`enumerate_samples` grouped into ``(k, n)`` index arrays."""
    it = enumerate_samples(N, n, cap)
    while True:
        chunk = list(itertools.islice(it, block))
        if not chunk:
            return
        yield np.array(chunk, dtype=np.intp).reshape(len(chunk), n)
