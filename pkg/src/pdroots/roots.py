"""Enumerating the positive definite n-th roots of a branch-form function.

Every n-th root of an f with ``2k-1`` support components is pinned down by one
integer ``p_j`` in ``Z_n`` per positive component: on ``E_j`` its argument is
``(arg f + 2π p_j) / n``, on the center the root is the positive real n-th
root, and the negative components mirror by conjugation. Candidates are
generated exhaustively, filtered for positive definiteness, and checked
against ``g^n = f``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Iterator

import numpy as np

from .branch import BranchFunction, PhaseProfile
from .spectrum import PsdVerdict, bochner_check, gram_psd_oracle, spectrum_of
from .support import SpecError, SupportSpec, sample_grid

VERIFY_TOL = 1e-12
DISTINCT_TOL = 1e-9


class CapExceeded(RuntimeError):
    """The candidate space is larger than the caller allowed."""

    def __init__(self, needed: int, cap: int):
        super().__init__(f"{needed} candidates exceed cap={cap}; rerun with cap >= {needed}")
        self.needed = needed
        self.cap = cap


class DecompositionError(ValueError):
    """Samples cannot be split into modulus and continuous phase per component."""


# -- phase vectors -------------------------------------------------------------

@dataclass(frozen=True, order=True)
class PhaseVector:
    """``(p_1, ..., p_{k-1})`` in ``Z_n``; ``p_0 = 0`` and ``p_{-j} = -p_j`` are implied."""

    n: int
    entries: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(p) for p in self.entries))
        if self.n < 2:
            raise SpecError("phase vectors need n >= 2")
        if any(not 0 <= p < self.n for p in self.entries):
            raise SpecError(f"entries {self.entries} out of range for n={self.n}")

    @classmethod
    def finitely_supported(cls, n: int, entries) -> "PhaseVector":
        e = list(entries)
        while e and e[-1] == 0:
            e.pop()
        return cls(n, tuple(e))

    def __getitem__(self, j: int) -> int:
        """``p_j`` for signed j (out-of-range positive indices read as 0)."""
        if j == 0:
            return 0
        p = self.entries[abs(j) - 1] if abs(j) <= len(self.entries) else 0
        return p if j > 0 else (-p) % self.n

    def negated(self) -> "PhaseVector":
        return replace(self, entries=tuple((-p) % self.n for p in self.entries))

    @property
    def support_max(self) -> int:
        nz = [j for j, p in enumerate(self.entries, start=1) if p]
        return max(nz, default=0)


def graded_phase_vectors(n: int) -> Iterator:
    """Finitely supported vectors ordered by largest nonzero index, then lexicographically."""
    yield PhaseVector(n, ())
    for top in itertools.count(1):
        for head in itertools.product(range(n), repeat=top - 1):
            for last in range(1, n):
                yield PhaseVector(n, head + (last,))


# -- black-box samples ---------------------------------------------------------

@dataclass(frozen=True)
class SampledFunction:
    """Raw samples of a function on a grid, with its support layout."""

    spec: SupportSpec
    xs: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=np.float64)
        vals = np.asarray(self.values, dtype=np.complex128)
        if xs.ndim != 1 or xs.shape != vals.shape:
            raise ValueError("xs and values must be 1-D arrays of equal length")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("xs must be strictly increasing")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class SampledBranch:
    xs: np.ndarray = field(repr=False)
    modulus: np.ndarray = field(repr=False)
    profile: PhaseProfile = field(repr=False)

    def __call__(self, x):
        mod = np.interp(x, self.xs, self.modulus, left=0.0, right=0.0)
        return mod * np.exp(1j * self.profile(x))


@dataclass(frozen=True)
class SampledBranchFunction:
    """Per-component modulus and phase samples; negative components mirror the positive ones."""

    spec: SupportSpec
    parts: tuple = field(repr=False)

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        out = np.zeros(x.shape, dtype=np.complex128)
        idx = self.spec.locate(x)
        for j, part in enumerate(self.parts):
            m = idx == j
            if m.any():
                out[m] = part(x[m])
            if j:
                m = idx == -j
                if m.any():
                    out[m] = np.conj(part(-x[m]))
        return out

    def value_at_zero(self) -> float:
        return float(self(np.zeros(1))[0].real)

    @property
    def sample_points(self) -> np.ndarray:
        pts = np.concatenate([p.xs for p in self.parts])
        return np.unique(np.concatenate([pts, -pts]))


def phase_extract(xs, values, j: int, floor: float | None = None, window: int = 1) -> PhaseProfile:
    """Continuous argument of samples on one component.

    Samples whose modulus is at or below ``floor`` (default ``1e-9`` times the
    largest modulus) carry no phase information; interior runs of more than
    ``window`` such samples cannot be bridged.
    """
    xs = np.asarray(xs, dtype=np.float64)
    vals = np.asarray(values, dtype=np.complex128)
    mod = np.abs(vals)
    if floor is None:
        floor = 1e-9 * float(mod.max(initial=0.0))
    good = np.flatnonzero(mod > floor)
    if good.size == 0:
        raise DecompositionError(f"component {j}: no sample above the modulus floor")
    gaps = np.diff(good) - 1
    if gaps.size and gaps.max() > window:
        at = xs[good[np.argmax(gaps)]]
        raise DecompositionError(f"component {j}: {gaps.max()} low-modulus samples after x={at:g}")
    raw = np.unwrap(np.angle(vals[good]))
    ref_i = int(np.argmin(np.abs(xs[good]))) if j == 0 else 0
    turns = np.round(raw[ref_i] / (2 * math.pi))
    raw = raw - 2 * math.pi * turns
    if raw[ref_i] <= -math.pi:
        raw = raw + 2 * math.pi
    phases = np.interp(np.arange(xs.size), good, raw)
    return PhaseProfile(j, xs, phases)


def decompose(sf: SampledFunction, floor_rel: float = 1e-9) -> SampledBranchFunction:
    """Split black-box samples into per-component modulus and phase."""
    spec = sf.spec
    if not spec.finite:
        raise DecompositionError("sampled decomposition needs a finite component list")
    f0 = float(np.abs(np.interp(0.0, sf.xs, sf.values.real)))
    floor = floor_rel * max(f0, float(np.abs(sf.values).max(initial=0.0)))
    parts = []
    for j in range(spec.k):
        m = spec.component(j).contains(sf.xs)
        if np.count_nonzero(m) < 2:
            raise DecompositionError(f"component {j} has fewer than two samples")
        xs = sf.xs[m]
        prof = phase_extract(xs, sf.values[m], j, floor)
        parts.append(SampledBranch(xs, np.abs(sf.values[m]), prof))
    return SampledBranchFunction(spec, tuple(parts))


# -- candidates and verification ----------------------------------------------

def root_candidate(f, pv: PhaseVector):
    """The n-th root of f selected by ``pv`` (n = ``pv.n``)."""
    n = pv.n
    if isinstance(f, SampledBranchFunction):
        if len(pv.entries) != f.spec.k - 1:
            raise SpecError(f"phase vector needs {f.spec.k - 1} entries, got {len(pv.entries)}")
        parts = []
        for j, part in enumerate(f.parts):
            phases = (part.profile.phases + 2 * math.pi * pv[j]) / n
            parts.append(SampledBranch(part.xs, part.modulus ** (1.0 / n),
                                       PhaseProfile(j, part.xs, phases)))
        return SampledBranchFunction(f.spec, tuple(parts))
    if not isinstance(f, BranchFunction):
        raise DecompositionError("f has no branch decomposition; run decompose() first")
    power = f.power / n
    if f.periodic:
        top = max(len(pv.entries), f.max_phase_index)
        phases = {j: (f.branches.phase(j) + pv[j]) / n for j in range(1, top + 1)}
        return f.with_phases(phases, power=power)
    if len(pv.entries) != f.spec.k - 1:
        raise SpecError(f"phase vector needs {f.spec.k - 1} entries, got {len(pv.entries)}")
    phases = [(br.phase + p) / n for br, p in zip(f.branches, pv.entries)]
    return f.with_phases(phases, power=power)


def _window(g) -> float:
    if isinstance(g, SampledBranchFunction):
        return float(np.abs(g.sample_points).max())
    top = g.max_phase_index + 4 if g.periodic else 8
    return g.spec.extent(max_index=top)


def has_closed_spectrum(g) -> bool:
    return (isinstance(g, BranchFunction) and g.power == 1 and len(g.atoms) == 1
            and next(iter(g.atoms)).alpha >= 1.0)


def pd_verdict(g, rng: np.random.Generator | None = None, gram_points: int = 200,
               grid_step: float | None = None, t_max: float | None = None) -> PsdVerdict:
    """Spectrum check when a closed form exists, otherwise one random Gram matrix."""
    if has_closed_spectrum(g):
        return bochner_check(spectrum_of(g), grid_step, t_max)
    rng = rng if rng is not None else np.random.default_rng(0)
    half = 0.5 * _window(g)
    return gram_psd_oracle(g, rng.uniform(-half, half, gram_points))


def verification_grid(g, f) -> np.ndarray:
    grids = []
    for h in (g, f):
        if isinstance(h, SampledBranchFunction):
            grids.append(h.sample_points)
    if grids:
        return np.unique(np.concatenate(grids))
    top = max(g.max_phase_index, f.max_phase_index) + 4
    return np.union1d(sample_grid(g.spec, max_index=top), sample_grid(f.spec, max_index=top))


def root_residual(g, f, n: int, grid=None) -> float:
    """``max |g^n - f|`` over the verification grid."""
    x = verification_grid(g, f) if grid is None else np.asarray(grid, dtype=np.float64)
    return float(np.max(np.abs(np.power(g(x), n) - f(x)), initial=0.0))


def verify_root(g, f, n: int, tol: float = VERIFY_TOL, verdict: PsdVerdict | None = None,
                grid=None) -> bool:
    """``g^n = f`` on the grid (relative to ``max(1, f(0))``) and g positive definite."""
    scale = max(1.0, f.value_at_zero())
    if root_residual(g, f, n, grid) > tol * scale:
        return False
    verdict = pd_verdict(g) if verdict is None else verdict
    return verdict.passed


# -- root sets -----------------------------------------------------------------

@dataclass(frozen=True)
class RootEntry:
    pv: PhaseVector | None
    g: object = field(repr=False)
    verdict: PsdVerdict


@dataclass(frozen=True)
class Rejection:
    pv: PhaseVector
    verdict: PsdVerdict
    residual: float


@dataclass(frozen=True)
class UnboundedEvidence:
    """A verified finite prefix of an infinite root family."""

    prefix: int


@dataclass(frozen=True)
class RootSet:
    n: int
    k: int | None
    roots: tuple = ()
    rejected: tuple = ()
    unbounded: bool = False

    @property
    def bound(self) -> int | None:
        return None if self.k is None else self.n ** (self.k - 1)

    @property
    def cardinality(self):
        c = distinct_count(self)
        return UnboundedEvidence(c) if self.unbounded else c


def enumerate_roots(f, n: int, cap: int = 4096, *, seed: int = 0, tol: float = VERIFY_TOL,
                    grid_step: float | None = None, t_max: float | None = None,
                    gram_points: int = 200) -> RootSet:
    """All verified positive definite n-th roots of f (a graded prefix for generator specs)."""
    if isinstance(f, SampledFunction):
        raise DecompositionError("black-box samples need decompose() before enumeration")
    if not isinstance(f, (BranchFunction, SampledBranchFunction)):
        raise DecompositionError(f"cannot enumerate roots of {type(f).__name__}")
    if int(n) != n or n < 2:
        raise SpecError("n must be an integer >= 2")
    n = int(n)
    rng = np.random.default_rng(seed)
    if f.spec.finite:
        k = f.spec.k
        needed = n ** (k - 1)
        if needed > cap:
            raise CapExceeded(needed, cap)
        vectors = (PhaseVector(n, e) for e in itertools.product(range(n), repeat=k - 1))
    else:
        k = None
        vectors = itertools.islice(graded_phase_vectors(n), cap)
    scale = max(1.0, f.value_at_zero())
    roots, rejected = [], []
    for pv in vectors:
        g = root_candidate(f, pv)
        verdict = pd_verdict(g, rng, gram_points, grid_step, t_max)
        res = root_residual(g, f, n)
        if verdict.passed and res <= tol * scale:
            roots.append(RootEntry(pv, g, verdict))
        else:
            rejected.append(Rejection(pv, verdict, res))
    return RootSet(n, k, tuple(roots), tuple(rejected), unbounded=not f.spec.finite)


def distinct_count(rs: RootSet, threshold: float = DISTINCT_TOL) -> int:
    """Number of pairwise-distinct roots (exact on phase vectors, else sup-norm)."""
    if not rs.roots:
        return 0
    if all(e.pv is not None for e in rs.roots):
        return len({e.pv for e in rs.roots})
    g0 = rs.roots[0].g
    x = verification_grid(g0, g0)
    reps = []
    for e in rs.roots:
        v = e.g(x)
        if all(np.max(np.abs(v - r)) > threshold for r in reps):
            reps.append(v)
    return len(reps)
