"""Grid sampling of a piecewise constant signal.

Two independent routes to the per-region sample counts are provided:

* :func:`count_direct` literally places sample points and counts them
  region by region with exact comparisons (the slow, obviously correct
  route);
* :func:`cumulative_count` evaluates the closed-form count of samples
  over any consecutive run of regions as a function of the offset in the
  run's first region.

:func:`enumerate_atlas` combines the closed form with the threshold
structure of the offset axis to list every achievable count pattern
together with the sub-interval of offsets that produces it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .signal_core import (
    Fraction as _F,
    GenericityViolation,
    RationalLike,
    SignalSpec,
    as_rational,
)


class SamplingPattern(NamedTuple):
    """Per-region sample counts (eta_1 ... eta_m) for one grid placement."""

    eta: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.eta)


@dataclass(frozen=True)
class AtlasCell:
    """One offset sub-interval [delta_lo, delta_hi) and its count pattern."""

    delta_lo: Fraction
    delta_hi: Fraction
    pattern: SamplingPattern


@dataclass(frozen=True)
class PatternAtlas:
    """All achievable count patterns, keyed by the offset of the first sample.

    The cells partition [0, 1) (units of the grid interval) and consecutive
    cells carry distinct patterns; a signal with m regions always has
    exactly m + 1 cells.
    """

    cells: tuple[AtlasCell, ...]

    @property
    def patterns(self) -> tuple[SamplingPattern, ...]:
        return tuple(c.pattern for c in self.cells)

    @property
    def m(self) -> int:
        return self.cells[0].pattern.m


def _check_delta(delta: Fraction) -> Fraction:
    if not (0 <= delta < 1):
        raise ValueError(f"grid offset must lie in [0, 1), got {delta}")
    return delta


def count_direct(spec: SignalSpec, delta1: RationalLike) -> SamplingPattern:
    """Count samples per region by placing the grid and comparing exactly.

    Sample points sit at delta1 + k (k = 0, 1, 2, ...) in units of the grid
    interval; a sample belongs to region i when it falls in
    [P_{i-1}, P_i) for the region's half-open span.  This is the reference
    oracle the closed-form counting is checked against.
    """
    delta1 = _check_delta(as_rational(delta1))
    points = spec.breakpoints
    counts = [0] * spec.m
    region = 0
    k = 0
    while True:
        sample = delta1 + k
        if sample >= points[-1]:
            break
        while sample >= points[region + 1]:
            region += 1
        counts[region] += 1
        k += 1
    return SamplingPattern(tuple(counts))


def kappa_d(spec: SignalSpec, i: int, span: int) -> tuple[int, int]:
    """Integer carry and nominal count for regions i .. i+span (1-based).

    kappa is the integer part of the summed fractional parts; d is the
    summed integer parts minus kappa.  The cumulative sample count over
    the run is always d or d - 1.
    """
    if i < 1 or span < 0 or i + span > spec.m:
        raise IndexError(f"region run i={i}, K={span} outside 1..{spec.m}")
    f_sum = spec.f_prefix[i + span] - spec.f_prefix[i - 1]
    kappa = math.floor(f_sum)
    d = spec.n_prefix[i + span] - spec.n_prefix[i - 1] - kappa
    return kappa, d


def cumulative_count(spec: SignalSpec, i: int, span: int, delta_i: RationalLike) -> int:
    """Closed-form cumulative sample count over regions i .. i+span.

    ``delta_i`` is the offset of the first sample inside region i.  The
    count is d while the offset stays below the threshold
    1 + kappa - sum(f), and drops by one at and beyond it (ties take the
    lower branch, matching the half-open placement rule).
    """
    delta_i = _check_delta(as_rational(delta_i))
    kappa, d = kappa_d(spec, i, span)
    threshold = 1 + kappa - (spec.f_prefix[i + span] - spec.f_prefix[i - 1])
    return d if delta_i < threshold else d - 1


def delta_chain(spec: SignalSpec, delta1: RationalLike) -> list[Fraction]:
    """Offsets of the first sample in every region, given the first offset.

    Each region hands the next one the offset (delta_i + f_i) mod 1: the
    fractional parts accumulate while the integer parts drop out.
    """
    delta = _check_delta(as_rational(delta1))
    offsets = [delta]
    for fi in spec.f[:-1]:
        offsets.append((offsets[-1] + fi) % 1)
    return offsets


def enumerate_atlas(spec: SignalSpec) -> PatternAtlas:
    """Every achievable count pattern with its offset sub-interval.

    The cumulative count over regions 1..k drops by one exactly when the
    first offset reaches the threshold 1 + kappa(1, k-1) - sum(f_1..f_k).
    Sorting the m thresholds partitions [0, 1) into m + 1 cells, each
    carrying the pattern obtained by differencing the cumulative counts.
    Thresholds are guaranteed distinct and interior for a validated
    signal; a collision is reported defensively.
    """
    m = spec.m
    prefix_f = spec.f_prefix
    thresholds = []
    nominal = []  # nominal cumulative counts over regions 1..k
    for k in range(1, m + 1):
        kappa = math.floor(prefix_f[k])
        thresholds.append(1 + kappa - prefix_f[k])
        nominal.append(spec.n_prefix[k] - kappa)
    if len(set(thresholds)) != m:
        raise GenericityViolation(1, m - 1, prefix_f[m])
    for theta in thresholds:
        if not (0 < theta < 1):
            raise GenericityViolation(1, m - 1, prefix_f[m])

    edges = [_F(0)] + sorted(thresholds) + [_F(1)]
    cells = []
    for lo, hi in zip(edges, edges[1:]):
        cumulative = [0]
        for k in range(1, m + 1):
            dropped = thresholds[k - 1] <= lo
            cumulative.append(nominal[k - 1] - (1 if dropped else 0))
        eta = tuple(cumulative[k] - cumulative[k - 1] for k in range(1, m + 1))
        cells.append(AtlasCell(delta_lo=lo, delta_hi=hi, pattern=SamplingPattern(eta)))
    assert len({c.pattern for c in cells}) == m + 1, "atlas cells must carry distinct patterns"
    return PatternAtlas(cells=tuple(cells))
