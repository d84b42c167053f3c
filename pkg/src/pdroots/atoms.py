"""Truncated-power atoms and locally finite sums of their translates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import count
from typing import Iterator

import numpy as np

from . import _kernels
from .support import SpecError


@dataclass(frozen=True)
class Atom:
    """``x -> max(1 - |x / half_width|, 0) ** alpha``."""

    alpha: float = 1.0
    half_width: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "half_width", float(self.half_width))
        if not self.half_width > 0:
            raise SpecError("atom half-width must be positive")
        if not self.alpha > 0:
            raise SpecError("atom exponent must be positive")

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        d = np.maximum(1.0 - np.abs(x) / self.half_width, 0.0)
        return d if self.alpha == 1.0 else d ** self.alpha

    @property
    def positive_definite(self) -> bool:
        return self.alpha >= 1.0


@dataclass(frozen=True)
class GeometricTail:
    """Weights ``ratio * (1 - ratio)**(r-1)`` at shifts ``base + r*spacing``, r >= 1.

    The weights sum to one.
    """

    base: float
    spacing: float
    ratio: float = 0.5

    def __post_init__(self):
        if not 0 < self.ratio < 1:
            raise SpecError("tail ratio must lie in (0, 1)")
        if not self.spacing > 0:
            raise SpecError("tail spacing must be positive")

    def weight(self, r: int) -> float:
        return self.ratio * (1.0 - self.ratio) ** (r - 1)

    def shift(self, r: int) -> float:
        return self.base + r * self.spacing

    def terms(self) -> Iterator:
        """Lazy ``(weight, shift)`` pairs for r = 1, 2, ..."""
        for r in count(1):
            yield self.weight(r), self.shift(r)


def tail_knots(a: float, sigma: float, ratio: float = 0.5) -> Iterator:
    """Lazy ``(weight, shift)`` pairs filling ``(a, inf)`` with spacing ``sigma``."""
    return GeometricTail(a, sigma, ratio).terms()


@dataclass(frozen=True)
class TranslateSum:
    """``sum_s c_s * atom(x - tau_s)``, optionally plus a geometric tail.

    Terms are kept sorted by shift. Evaluation only touches the terms whose
    shifted support contains the evaluation point.
    """

    atom: Atom
    terms: tuple = ()
    tail: GeometricTail | None = None

    def __post_init__(self):
        terms = tuple(sorted(((float(c), float(s)) for c, s in self.terms), key=lambda cs: cs[1]))
        for c, s in terms:
            if not c > 0 or not math.isfinite(s):
                raise SpecError(f"invalid translate term ({c}, {s})")
        object.__setattr__(self, "terms", terms)

    @cached_property
    def _arrays(self):
        if not self.terms:
            return np.empty(0), np.empty(0)
        c, s = zip(*self.terms)
        return np.asarray(s, dtype=np.float64), np.asarray(c, dtype=np.float64)

    @property
    def shifts(self) -> np.ndarray:
        return self._arrays[0]

    @property
    def coefs(self) -> np.ndarray:
        return self._arrays[1]

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        h, a = self.atom.half_width, self.atom.alpha
        out = _kernels.translate_sum(x, self.shifts, self.coefs, h, a)
        if self.tail is not None:
            t = self.tail
            out = out + _kernels.geometric_tail(x, t.base, t.spacing, t.ratio, 1.0 - t.ratio, h, a)
        return out

    def active_terms(self, x: float) -> list:
        """The ``(coefficient, shift)`` pairs that contribute at the point x."""
        h = self.atom.half_width
        active = [(c, s) for c, s in self.terms if abs(x - s) < h]
        if self.tail is not None:
            t = self.tail
            r_lo = max(1, math.ceil((x - t.base - h) / t.spacing))
            r_hi = math.floor((x - t.base + h) / t.spacing)
            active += [(t.weight(r), t.shift(r)) for r in range(r_lo, r_hi + 1)
                       if abs(x - t.shift(r)) < h]
        return active

    @property
    def hull(self) -> tuple:
        """Closed hull ``[lo, hi]`` of the support (``hi`` may be inf)."""
        h = self.atom.half_width
        los, his = [], []
        if self.terms:
            los.append(self.terms[0][1] - h)
            his.append(self.terms[-1][1] + h)
        if self.tail is not None:
            los.append(self.tail.shift(1) - h)
            his.append(math.inf)
        if not los:
            raise SpecError("translate sum has no terms")
        return min(los), max(his)

    def fills(self, lo: float, hi: float, tol: float = 1e-12) -> bool:
        """True when the sum is strictly positive exactly on ``(lo, hi)``."""
        if not self.terms and self.tail is None:
            return False
        h = self.atom.half_width
        a, b = self.hull
        if abs(a - lo) > tol:
            return False
        if math.isinf(hi) != math.isinf(b) or (math.isfinite(hi) and abs(b - hi) > tol):
            return False
        knots = list(self.shifts)
        if self.tail is not None:
            if self.tail.spacing >= 2 * h:
                return False
            knots.append(self.tail.shift(1))
        return all(v - u < 2 * h for u, v in zip(knots, knots[1:]))

    def mirrored(self) -> "TranslateSum":
        if self.tail is not None:
            raise SpecError("cannot mirror a sum with a tail")
        return TranslateSum(self.atom, tuple((c, -s) for c, s in self.terms))

    def shifted(self, delta: float) -> "TranslateSum":
        if self.tail is not None:
            raise SpecError("cannot shift a sum with a tail")
        return TranslateSum(self.atom, tuple((c, s + delta) for c, s in self.terms))

    @property
    def symmetric(self) -> bool:
        if self.tail is not None:
            return False
        mine = sorted(self.terms, key=lambda cs: (cs[1], cs[0]))
        other = sorted(((c, -s) for c, s in self.terms), key=lambda cs: (cs[1], cs[0]))
        return all(abs(c1 - c2) <= 1e-12 * max(1.0, c1) and abs(s1 - s2) <= 1e-12
                   for (c1, s1), (c2, s2) in zip(mine, other))


def eval_translate_sum(u: TranslateSum, x):
    return u(x)
