"""Symmetric open supports: intervals, component layouts and sample grids."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

#: absolute tolerance when matching endpoints across components
ENDPOINT_TOL = 1e-12

#: marker returned by :meth:`SupportSpec.locate` for points off the support
OUTSIDE = np.iinfo(np.int64).min


class SpecError(ValueError):
    """Invalid support layout or construction input."""


@dataclass(frozen=True)
class Interval:
    """Open interval ``(lo, hi)``; either end may be infinite."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise SpecError("interval endpoints must not be NaN")
        if not lo < hi:
            raise SpecError(f"empty interval ({lo}, {hi})")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    @property
    def midpoint(self) -> float:
        if not self.bounded:
            raise SpecError(f"unbounded interval {self} has no midpoint")
        return 0.5 * (self.lo + self.hi)

    def mirror(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def contains(self, x):
        x = np.asarray(x, dtype=np.float64)
        return (x > self.lo) & (x < self.hi)

    def __str__(self):
        return f"({self.lo:g}, {self.hi:g})"


@dataclass(frozen=True)
class PeriodicRule:
    """Positive components ``E_j = (j*period - width/2, j*period + width/2)``, j >= 1."""

    period: float
    width: float

    def __post_init__(self):
        if not (self.width > 0 and self.period > self.width):
            raise SpecError("periodic rule needs 0 < width < period")

    def component(self, j: int) -> Interval:
        c = j * self.period
        return Interval(c - 0.5 * self.width, c + 0.5 * self.width)


@dataclass(frozen=True)
class SupportSpec:
    """Symmetric open set ``E = (-b0, b0) ∪ ⋃ ±E_j``.

    ``positives`` lists ``E_1, ..., E_{k-1}`` in increasing order; the last one
    may be unbounded. Alternatively ``generator`` produces infinitely many
    positive components and ``positives`` must be empty.
    """

    center: Interval
    positives: tuple = ()
    generator: PeriodicRule | None = None

    def __post_init__(self):
        object.__setattr__(self, "positives", tuple(self.positives))
        c = self.center
        if not (c.lo < 0 < c.hi) or abs(c.lo + c.hi) > ENDPOINT_TOL:
            raise SpecError(f"center component {c} is not symmetric about 0")
        prev = c.hi
        for j, iv in enumerate(self.positives, start=1):
            if not iv.lo > prev:
                raise SpecError(f"component {iv} overlaps or touches its predecessor")
            if not math.isfinite(iv.hi) and j != len(self.positives):
                raise SpecError(f"only the last positive component may be unbounded, got {iv}")
            prev = iv.hi
        if self.generator is not None:
            if self.positives:
                raise SpecError("a generator spec takes no explicit positive components")
            if not self.generator.component(1).lo > c.hi:
                raise SpecError("first generated component overlaps the center")

    # -- shape ----------------------------------------------------------------

    @property
    def b0(self) -> float:
        return self.center.hi

    @property
    def finite(self) -> bool:
        return self.generator is None

    @property
    def k(self) -> int | None:
        """Number of components on ``[0, inf)``; ``None`` for generator specs."""
        return len(self.positives) + 1 if self.finite else None

    @property
    def component_count(self) -> float:
        return 2 * self.k - 1 if self.finite else math.inf

    @property
    def unbounded(self) -> bool:
        return bool(self.positives) and not self.positives[-1].bounded

    def positive(self, j: int) -> Interval:
        """Component ``E_j`` for ``j >= 1``."""
        if j < 1:
            raise IndexError(j)
        if self.generator is not None:
            return self.generator.component(j)
        return self.positives[j - 1]

    def component(self, j: int) -> Interval:
        """Signed component ``E_j``; ``E_{-j} = -E_j``."""
        if j == 0:
            return self.center
        iv = self.positive(abs(j))
        return iv if j > 0 else iv.mirror()

    def components(self, max_index: int | None = None) -> list:
        """All components ordered left to right (generator specs up to ``max_index``)."""
        top = self.k - 1 if self.finite else max_index
        if top is None:
            raise SpecError("generator spec needs max_index")
        return [self.component(j) for j in range(-top, top + 1)]

    # -- evaluation helpers ---------------------------------------------------

    def locate(self, x):
        """Signed component index of each x, or :data:`OUTSIDE`."""
        x = np.asarray(x, dtype=np.float64)
        out = np.full(x.shape, OUTSIDE, dtype=np.int64)
        ax = np.abs(x)
        out[ax < self.b0] = 0
        sign = np.where(x < 0, -1, 1)
        if self.generator is not None:
            g = self.generator
            j = np.rint(ax / g.period)
            inside = (j >= 1) & (np.abs(ax - j * g.period) < 0.5 * g.width)
            out[inside] = (sign * j.astype(np.int64))[inside]
            return out
        for j, iv in enumerate(self.positives, start=1):
            m = iv.contains(ax)
            out[m] = sign[m] * j
        return out

    def contains(self, x):
        return self.locate(x) != OUTSIDE

    def extent(self, max_index: int = 8, tail_span: float | None = None) -> float:
        """Right end of the finite window used for sampling."""
        if self.generator is not None:
            return self.positive(max_index).hi
        if not self.positives:
            return self.b0
        last = self.positives[-1]
        if last.bounded:
            return last.hi
        span = tail_span if tail_span is not None else 32.0 * sigma_of(self)
        return last.lo + span


def _pairs(intervals: Iterable) -> list:
    out = []
    for iv in intervals:
        out.append(iv if isinstance(iv, Interval) else Interval(*iv))
    return out


def build_support_spec(intervals: Sequence) -> SupportSpec:
    """Validate a full list of components and return the symmetric layout."""
    ivs = sorted(_pairs(intervals), key=lambda iv: iv.lo)
    if not ivs:
        raise SpecError("no intervals given")
    for a, b in zip(ivs, ivs[1:]):
        if not a.hi < b.lo:
            raise SpecError(f"intervals {a} and {b} overlap or touch")
    centers = [iv for iv in ivs if iv.lo < 0 < iv.hi]
    if not centers:
        raise SpecError("0 is not covered by any interval")
    center = centers[0]
    if abs(center.lo + center.hi) > ENDPOINT_TOL:
        raise SpecError(f"center interval {center} is not symmetric")
    pos = [iv for iv in ivs if iv.lo >= 0 and iv is not center]
    neg = [iv for iv in ivs if iv.hi <= 0 and iv is not center]
    for iv in pos:
        if not any(_same(iv.mirror(), other) for other in neg):
            raise SpecError(f"interval {iv} has no mirror {iv.mirror()}: set is not symmetric")
    for iv in neg:
        if not any(_same(iv.mirror(), other) for other in pos):
            raise SpecError(f"interval {iv} has no mirror {iv.mirror()}: set is not symmetric")
    return SupportSpec(center=center, positives=tuple(pos))


def _same(a: Interval, b: Interval) -> bool:
    def close(u, v):
        if math.isinf(u) or math.isinf(v):
            return u == v
        return abs(u - v) <= ENDPOINT_TOL
    return close(a.lo, b.lo) and close(a.hi, b.hi)


def sigma_of(spec: SupportSpec) -> float:
    """Half of the smallest component length (unbounded components excluded)."""
    lengths = [2.0 * spec.b0]
    if spec.generator is not None:
        lengths.append(spec.generator.width)
    else:
        lengths.extend(iv.length for iv in spec.positives if iv.bounded)
    sigma = 0.5 * min(lengths)
    if not sigma > 0:
        raise SpecError("degenerate spec: zero-length component")
    return sigma


def sample_grid(spec: SupportSpec, per_unit: int = 64, max_index: int = 8,
                tail_span: float | None = None, offset: float = 1e-9) -> np.ndarray:
    """Uniform grid over the symmetric window plus points just inside/outside every endpoint."""
    X = spec.extent(max_index=max_index, tail_span=tail_span)
    num = int(math.ceil(2 * X * per_unit)) + 1
    pts = [np.linspace(-X, X, num)]
    ends = []
    for iv in spec.components(max_index=max_index if not spec.finite else None):
        for e in (iv.lo, iv.hi):
            if math.isfinite(e) and abs(e) <= X:
                ends.extend((e - offset, e + offset))
    pts.append(np.asarray(ends, dtype=np.float64))
    grid = np.unique(np.concatenate(pts))
    return grid[np.abs(grid) <= X]
