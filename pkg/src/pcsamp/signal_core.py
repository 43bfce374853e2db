"""Exact-rational model of spatially limited piecewise constant signals.

All positions and lengths are kept in units of the sampling interval, so
every quantity is a `fractions.Fraction` and every comparison is exact.
The physical interval only matters when results are rendered back to
scenario units, which is the command-line layer's job.

Conventions used throughout the package:

* a signal has m regions; region i (1-based) has amplitude ``g_i``,
  length ``n_i - f_i`` with integer ``n_i >= 2`` and ``0 < f_i < 1``;
* region membership is half open, ``left <= t < right``, and the signal
  is zero outside its support;
* discontinuities are indexed 0..m; index l may be chosen as the
  reference and translated to position zero.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Optional, Sequence, Union

Rational = Fraction

RationalLike = Union[int, str, Fraction]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction, or exact string ("p/q" or decimal) to Fraction.

    Floats are rejected outright: a binary float has already lost exactness
    and would silently poison every downstream comparison.
    """
    if isinstance(value, bool):
        raise TypeError(f"cannot interpret {value!r} as an exact rational")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"refusing inexact value {value!r}; pass int, Fraction or 'p/q' string")


class SpecViolation(ValueError):
    """Base class for signal description problems."""


class AmplitudeViolation(SpecViolation):
    """Zero end amplitude or equal adjacent amplitudes."""


class RegionViolation(SpecViolation):
    """Region integer part below two, or fractional part outside (0, 1)."""


class GenericityViolation(SpecViolation):
    """A consecutive run of fractional parts sums to an integer.

    Such a sum would put a pattern-change threshold on a grid point and
    make sample counts ambiguous, so these signals are rejected.
    """

    def __init__(self, i: int, span: int, total: Fraction):
        self.i = i
        self.K = span
        self.total = total
        super().__init__(
            f"(i={i},K={span}): fractional parts f[{i}..{i + span}] sum to the integer {total}"
        )


class Region(NamedTuple):
    g: Fraction
    n: int
    f: Fraction


@dataclass(frozen=True)
class SignalSpec:
    """Exact description of one piecewise constant signal.

    ``regions`` is ordered left to right; ``T`` is the physical sampling
    interval kept only for reporting (internally everything is in units
    of T).
    """

    regions: tuple[Region, ...]
    T: Fraction = Fraction(1)

    @classmethod
    def from_columns(
        cls,
        g: Sequence[RationalLike],
        n: Sequence[int],
        f: Sequence[RationalLike],
        T: RationalLike = 1,
    ) -> "SignalSpec":
        if not (len(g) == len(n) == len(f)):
            raise SpecViolation("g, n, f must have equal lengths")
        regions = tuple(
            Region(as_rational(gi), int(ni), as_rational(fi)) for gi, ni, fi in zip(g, n, f)
        )
        return cls(regions=regions, T=as_rational(T))

    @property
    def m(self) -> int:
        return len(self.regions)

    @cached_property
    def g(self) -> tuple[Fraction, ...]:
        return tuple(r.g for r in self.regions)

    @cached_property
    def n(self) -> tuple[int, ...]:
        return tuple(r.n for r in self.regions)

    @cached_property
    def f(self) -> tuple[Fraction, ...]:
        return tuple(r.f for r in self.regions)

    @cached_property
    def lengths(self) -> tuple[Fraction, ...]:
        """Region lengths in units of T: n_i - f_i."""
        return tuple(Fraction(r.n) - r.f for r in self.regions)

    @cached_property
    def f_prefix(self) -> tuple[Fraction, ...]:
        """Prefix sums of the fractional parts: f_1 + ... + f_k for k = 0..m."""
        pts = [Fraction(0)]
        for fi in self.f:
            pts.append(pts[-1] + fi)
        return tuple(pts)

    @cached_property
    def n_prefix(self) -> tuple[int, ...]:
        """Prefix sums of the integer parts for k = 0..m."""
        pts = [0]
        for ni in self.n:
            pts.append(pts[-1] + ni)
        return tuple(pts)

    @cached_property
    def breakpoints(self) -> tuple[Fraction, ...]:
        """Discontinuity positions 0 = P_0 < P_1 < ... < P_m in units of T."""
        pts = [Fraction(0)]
        for length in self.lengths:
            pts.append(pts[-1] + length)
        return tuple(pts)


def find_genericity_violation(fractions: Sequence[Fraction]) -> Optional[tuple[int, int, Fraction]]:
    """Scan all consecutive runs of fractional parts for an integer sum.

    Returns (i, K, total) for the first offending run f[i..i+K] (1-based i),
    or None when every run sums to a non-integer.  O(m^2) via prefix sums.
    """
    prefix = [Fraction(0)]
    for fi in fractions:
        prefix.append(prefix[-1] + fi)
    m = len(fractions)
    for i in range(1, m + 1):
        for j in range(i, m + 1):
            total = prefix[j] - prefix[i - 1]
            if total.denominator == 1:
                return i, j - i, total
    return None


def validate_spec(spec: SignalSpec) -> SignalSpec:
    """Check every invariant of a signal description and return it unchanged.

    Raises AmplitudeViolation, RegionViolation, or GenericityViolation with
    the offending indices named.
    """
    if spec.m < 1:
        raise RegionViolation("at least one region is required")
    g, n, f = spec.g, spec.n, spec.f
    if spec.T <= 0:
        raise RegionViolation(f"sampling interval T must be positive, got {spec.T}")
    if g[0] == 0:
        raise AmplitudeViolation("g_1 must be nonzero")
    if g[-1] == 0:
        raise AmplitudeViolation(f"g_{spec.m} must be nonzero")
    for i in range(spec.m - 1):
        if g[i] == g[i + 1]:
            raise AmplitudeViolation(f"adjacent amplitudes g_{i + 1} and g_{i + 2} are equal ({g[i]})")
    for i, (ni, fi) in enumerate(zip(n, f), start=1):
        if ni < 2:
            raise RegionViolation(f"n_{i} must be at least 2, got {ni}")
        if not (0 < fi < 1):
            raise RegionViolation(f"f_{i} must lie strictly inside (0, 1), got {fi}")
    hit = find_genericity_violation(f)
    if hit is not None:
        raise GenericityViolation(*hit)
    return spec


@dataclass(frozen=True)
class Translation:
    """Discontinuity positions after pinning discontinuity l to zero.

    D[i] is the position of discontinuity i in units of T; D[l] == 0 and
    the gaps D[i] - D[i-1] are exactly the region lengths.
    """

    l: int
    D: tuple[Fraction, ...]


def translate(spec: SignalSpec, l: int) -> Translation:
    """Positions of all discontinuities with discontinuity ``l`` at zero."""
    if not (0 <= l <= spec.m):
        raise IndexError(f"reference index {l} outside 0..{spec.m}")
    points = spec.breakpoints
    offset = points[l]
    return Translation(l=l, D=tuple(p - offset for p in points))


@dataclass(frozen=True)
class PiecewiseFunction:
    """Piecewise constant function with sorted rational breakpoints.

    Value is ``values[i]`` on ``breakpoints[i] <= t < breakpoints[i+1]``
    and zero outside the first/last breakpoint.  Adjacent equal values are
    permitted (estimates produce them); true signals never do.
    """

    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "breakpoints", tuple(as_rational(b) for b in self.breakpoints))
        object.__setattr__(self, "values", tuple(as_rational(v) for v in self.values))
        if len(self.values) != len(self.breakpoints) - 1:
            raise ValueError("need exactly one value per interval between breakpoints")
        for a, b in zip(self.breakpoints, self.breakpoints[1:]):
            if not a < b:
                raise ValueError(f"breakpoints must strictly increase; saw {a} then {b}")

    def evaluate(self, t: RationalLike) -> Fraction:
        t = as_rational(t)
        j = bisect_right(self.breakpoints, t) - 1
        if 0 <= j < len(self.values):
            return self.values[j]
        return Fraction(0)

    __call__ = evaluate

    @property
    def support(self) -> tuple[Fraction, Fraction]:
        return self.breakpoints[0], self.breakpoints[-1]

    def with_value(self, lo: RationalLike, hi: RationalLike, value: RationalLike) -> "PiecewiseFunction":
        """A copy of this function forced to ``value`` on [lo, hi)."""
        lo, hi, value = as_rational(lo), as_rational(hi), as_rational(value)
        if not lo < hi:
            raise ValueError("need lo < hi")
        pts = sorted(set(self.breakpoints) | {lo, hi})
        vals = []
        for a, b in zip(pts, pts[1:]):
            mid = (a + b) / 2
            vals.append(value if lo <= mid < hi else self.evaluate(mid))
        # drop leading/trailing zero cells so support stays tight
        while vals and vals[0] == 0:
            pts.pop(0)
            vals.pop(0)
        while vals and vals[-1] == 0:
            pts.pop()
            vals.pop()
        if not vals:
            raise ValueError("override produced an identically zero function")
        return PiecewiseFunction(tuple(pts), tuple(vals))


def evaluate(fn: PiecewiseFunction, t: RationalLike) -> Fraction:
    """Value of ``fn`` at ``t`` under the half-open interval convention."""
    return fn.evaluate(t)


def truth_function(spec: SignalSpec, l: int) -> PiecewiseFunction:
    """The signal translated so that discontinuity ``l`` sits at zero.

    Breakpoints are the translated discontinuity positions, the values are
    the region amplitudes, and everything outside the support is zero.
    """
    tr = translate(spec, l)
    return PiecewiseFunction(breakpoints=tr.D, values=spec.g)
