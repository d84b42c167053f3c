"""Functions given component by component: a modulus shape and an exact phase.

On the center ``E_0`` the value is ``center(x) ** power`` (real, nonnegative).
On ``E_j`` (j >= 1) it is ``(scale_j * shape_j(x)) ** power * exp(2πi phase_j)``
and on the mirror ``E_{-j}`` the complex conjugate of the value at ``-x``.
Phases are exact fractions of a full turn, so roots compare exactly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .atoms import TranslateSum
from .support import OUTSIDE, SpecError, SupportSpec


def as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        if not v.is_integer():
            raise SpecError(f"exact rational expected, got float {v!r}")
        return Fraction(int(v))
    return Fraction(v)


_EXACT_UNITS = {
    Fraction(0): 1 + 0j,
    Fraction(1, 4): 1j,
    Fraction(1, 2): -1 + 0j,
    Fraction(3, 4): -1j,
}


def unit_phase(turns: Fraction) -> complex:
    """``exp(2πi * turns)``, exact at quarter turns."""
    turns = turns % 1
    if turns in _EXACT_UNITS:
        return _EXACT_UNITS[turns]
    return cmath.exp(2j * math.pi * float(turns))


@dataclass(frozen=True)
class Branch:
    """One positive component: ``scale * shape`` with argument ``2π * phase``."""

    scale: float
    shape: TranslateSum
    phase: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "scale", float(self.scale))
        object.__setattr__(self, "phase", as_fraction(self.phase) % 1)
        if not self.scale > 0:
            raise SpecError("branch scale must be positive")


@dataclass(frozen=True)
class PeriodicBranches:
    """Branch family for a periodic generator spec.

    ``E_j = E_1 + (j-1)*period`` carries ``shape`` shifted by ``(j-1)*period``,
    scale ``lead_scale * scale_ratio**(j-1)`` and a finitely supported phase.
    """

    shape: TranslateSum
    period: float
    lead_scale: float
    scale_ratio: float
    phases: tuple = ()

    def __post_init__(self):
        clean = {}
        for j, p in self.phases:
            j = int(j)
            if j < 1:
                raise SpecError("periodic phases are indexed from 1")
            p = as_fraction(p) % 1
            if p:
                clean[j] = p
        object.__setattr__(self, "phases", tuple(sorted(clean.items())))
        if not (self.lead_scale > 0 and 0 < self.scale_ratio < 1):
            raise SpecError("periodic scales need lead > 0 and ratio in (0, 1)")

    def scale(self, j: int) -> float:
        return self.lead_scale * self.scale_ratio ** (j - 1)

    def phase(self, j: int) -> Fraction:
        return dict(self.phases).get(j, Fraction(0))

    @property
    def max_phase_index(self) -> int:
        return self.phases[-1][0] if self.phases else 0

    def __getitem__(self, j: int) -> Branch:
        return Branch(self.scale(j), self.shape.shifted((j - 1) * self.period), self.phase(j))


def _pow(v, power: Fraction):
    if power.denominator == 1:
        return v ** int(power)
    return v ** float(power)


@dataclass(frozen=True)
class BranchFunction:
    """A Hermitian function in branch form on a symmetric support."""

    spec: SupportSpec
    center: TranslateSum
    branches: tuple | PeriodicBranches = ()
    power: Fraction = field(default=Fraction(1))

    def __post_init__(self):
        object.__setattr__(self, "power", as_fraction(self.power))
        if not self.power > 0:
            raise SpecError("power must be positive")
        if not self.center.symmetric:
            raise SpecError("center branch must be an even translate sum")
        if not self.center.fills(-self.spec.b0, self.spec.b0):
            raise SpecError(f"center branch does not fill {self.spec.center}")
        if self.spec.finite:
            if isinstance(self.branches, PeriodicBranches):
                raise SpecError("periodic branches need a generator spec")
            object.__setattr__(self, "branches", tuple(self.branches))
            if len(self.branches) != self.spec.k - 1:
                raise SpecError(f"expected {self.spec.k - 1} branches, got {len(self.branches)}")
            for j, br in enumerate(self.branches, start=1):
                iv = self.spec.positive(j)
                if not br.shape.fills(iv.lo, iv.hi):
                    raise SpecError(f"branch {j} does not fill component {iv}")
        else:
            if not isinstance(self.branches, PeriodicBranches):
                raise SpecError("generator spec needs periodic branches")
            if abs(self.branches.period - self.spec.generator.period) > 1e-12:
                raise SpecError("branch period differs from the generator period")
            iv = self.spec.positive(1)
            if not self.branches.shape.fills(iv.lo, iv.hi):
                raise SpecError(f"periodic shape does not fill {iv}")

    # -- structure ------------------------------------------------------------

    @property
    def k(self) -> int | None:
        return self.spec.k

    @property
    def periodic(self) -> bool:
        return isinstance(self.branches, PeriodicBranches)

    def branch(self, j: int) -> Branch:
        if j < 1:
            raise IndexError(j)
        return self.branches[j] if self.periodic else self.branches[j - 1]

    @property
    def atoms(self) -> set:
        found = {self.center.atom}
        if self.periodic:
            found.add(self.branches.shape.atom)
        else:
            found.update(br.shape.atom for br in self.branches)
        return found

    @property
    def max_phase_index(self) -> int:
        """Largest branch index with a nonzero phase."""
        if self.periodic:
            return self.branches.max_phase_index
        nz = [j for j, br in enumerate(self.branches, start=1) if br.phase]
        return max(nz, default=0)

    def with_phases(self, phases, power=None) -> "BranchFunction":
        """Copy with new branch phases (sequence for finite, ``{j: turns}`` for periodic)."""
        power = self.power if power is None else power
        if self.periodic:
            items = phases.items() if isinstance(phases, dict) else enumerate(phases, start=1)
            return replace(self, branches=replace(self.branches, phases=tuple(items)), power=power)
        if len(phases) != len(self.branches):
            raise SpecError("phase count does not match branch count")
        brs = tuple(replace(br, phase=p) for br, p in zip(self.branches, phases))
        return replace(self, branches=brs, power=power)

    # -- evaluation -----------------------------------------------------------

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        out = np.zeros(x.shape, dtype=np.complex128)
        idx = self.spec.locate(x)
        on_center = idx == 0
        if on_center.any():
            out[on_center] = _pow(self.center(np.abs(x[on_center])), self.power)
        if self.periodic:
            self._eval_periodic(x, idx, out)
        else:
            for j, br in enumerate(self.branches, start=1):
                for sign in (1, -1):
                    m = idx == sign * j
                    if not m.any():
                        continue
                    mod = _pow(br.scale * br.shape(sign * x[m]), self.power)
                    z = unit_phase(br.phase)
                    out[m] = mod * (z if sign > 0 else z.conjugate())
        return out

    def _eval_periodic(self, x, idx, out):
        pb = self.branches
        off = (idx != OUTSIDE) & (idx != 0)
        if not off.any():
            return
        j = idx[off]
        aj = np.abs(j)
        sign = np.sign(j)
        local = sign * x[off] - (aj - 1) * pb.period
        scale = pb.lead_scale * np.power(pb.scale_ratio, (aj - 1).astype(np.float64))
        vals = _pow(scale * pb.shape(local), self.power).astype(np.complex128)
        for jj, turns in pb.phases:
            z = unit_phase(turns)
            vals[j == jj] *= z
            vals[j == -jj] *= z.conjugate()
        out[off] = vals

    def value_at_zero(self) -> float:
        return float(self(np.zeros(1))[0].real)


def eval_branch(f: BranchFunction, x):
    return f(x)


@dataclass(frozen=True)
class PhaseProfile:
    """Continuous argument of a function sampled on one component."""

    index: int
    xs: np.ndarray = field(repr=False)
    phases: np.ndarray = field(repr=False)

    def __call__(self, x):
        return np.interp(x, self.xs, self.phases)

    @property
    def continuous(self) -> bool:
        return bool(np.all(np.abs(np.diff(self.phases)) < math.pi))

    def __eq__(self, other):
        return (isinstance(other, PhaseProfile) and self.index == other.index
                and np.array_equal(self.xs, other.xs) and np.array_equal(self.phases, other.phases))

    __hash__ = None
