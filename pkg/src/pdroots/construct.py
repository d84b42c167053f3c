"""Building n-divisible positive definite functions with a prescribed support."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .atoms import Atom, GeometricTail, TranslateSum
from .branch import Branch, BranchFunction, PeriodicBranches
from .support import Interval, PeriodicRule, SpecError, SupportSpec, build_support_spec, sigma_of

_SLACK = 1e-9


@dataclass(frozen=True)
class ConstructionParams:
    """Knobs of the generator construction.

    ``center_weights`` are the weights of the nonzero center knots (the
    θ₀ = 0 weight is chosen by :func:`choose_omega0`); ``None`` means all
    ones, a single value is broadcast. ``alphas`` is a list of branch scales,
    ``"halving"`` for ``1 / (2^j m(j) |E_j|)``, or ``None`` for the default
    (``2^-j`` on finite specs, ``"halving"`` on generator specs).
    """

    alpha: float = 1.0
    knot_margin: float = 0.9
    center_weights: tuple | None = None
    alphas: tuple | str | None = None
    tail_ratio: float = 0.5
    omega0_margin: float = 1.1

    def __post_init__(self):
        if not 0 < self.knot_margin < 1:
            raise SpecError("knot_margin must lie in (0, 1)")
        if not 0 < self.tail_ratio < 1:
            raise SpecError("tail_ratio must lie in (0, 1)")
        if not self.omega0_margin > 1:
            raise SpecError("omega0_margin must exceed 1")
        if self.alpha < 1:
            raise SpecError("atom exponent must be >= 1 for a positive definite atom")
        if self.center_weights is not None:
            object.__setattr__(self, "center_weights", tuple(float(w) for w in self.center_weights))
            if any(not w > 0 for w in self.center_weights):
                raise SpecError("center weights must be positive")
        if isinstance(self.alphas, str):
            if self.alphas != "halving":
                raise SpecError(f"unknown alpha rule {self.alphas!r}")
        elif self.alphas is not None:
            object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
            if any(not a > 0 for a in self.alphas):
                raise SpecError("branch scales must be positive")


def _uniform(start: float, stop: float, max_step: float) -> list:
    span = stop - start
    if span <= _SLACK:
        return [0.5 * (start + stop)]
    gaps = max(1, math.ceil(span / max_step - _SLACK))
    pts = [start + span * i / gaps for i in range(gaps + 1)]
    pts[-1] = stop
    return pts


def knots_for_interval(iv: Interval, sigma: float, margin: float = 0.9) -> list:
    """Uniform knots from ``a+σ`` to ``b-σ`` with spacing at most ``margin·2σ``."""
    if not iv.bounded:
        raise SpecError(f"{iv} is unbounded; use tail_knots")
    if iv.length < 2 * sigma - _SLACK:
        raise SpecError(f"{iv} is shorter than 2σ = {2 * sigma:g}")
    return _uniform(iv.lo + sigma, iv.hi - sigma, margin * 2 * sigma)


def center_knots(b0: float, sigma: float, margin: float = 0.9) -> list:
    """Knots ``0 = θ₀ > θ₁ > ... > θ_l = -b0+σ`` with gaps below 2σ."""
    if b0 < sigma - _SLACK:
        raise SpecError(f"center half-width {b0:g} is smaller than σ = {sigma:g}")
    pts = _uniform(0.0, b0 - sigma, margin * 2 * sigma)
    if len(pts) == 1:
        return [0.0]
    return [-p for p in pts]


def omega0_bound(center_weights, alphas, counts, tail_alpha: float = 0.0,
                 margin: float = 1.1) -> float:
    """``margin · (Σω_i + Σ α_j m(j) + tail_alpha)``."""
    total = sum(center_weights) + sum(a * m for a, m in zip(alphas, counts)) + tail_alpha
    return margin * total


@dataclass(frozen=True)
class _Layout:
    sigma: float
    atom: Atom
    thetas: list
    weights: list
    knots: list          # per finite branch; None marks an unbounded tail
    alphas: list


def _center_weights(params: ConstructionParams, count: int) -> list:
    cw = params.center_weights
    if cw is None:
        return [1.0] * count
    if len(cw) == 1:
        return [cw[0]] * count
    if len(cw) != count:
        raise SpecError(f"expected {count} center weights, got {len(cw)}")
    return list(cw)


def _halving_scale(j: int, m: int, length: float) -> float:
    return 1.0 / (2.0 ** j * m * length)


def _layout(spec: SupportSpec, params: ConstructionParams) -> _Layout:
    sigma = sigma_of(spec)
    atom = Atom(params.alpha, sigma)
    thetas = center_knots(spec.b0, sigma, params.knot_margin)
    weights = _center_weights(params, len(thetas) - 1)
    if spec.generator is not None:
        if params.alphas not in (None, "halving"):
            raise SpecError("generator specs only support the halving scale rule")
        knots = [knots_for_interval(spec.positive(1), sigma, params.knot_margin)]
        m, w = len(knots[0]), spec.generator.width
        return _Layout(sigma, atom, thetas, weights, knots, [_halving_scale(1, m, w)])
    knots = []
    for iv in spec.positives:
        knots.append(knots_for_interval(iv, sigma, params.knot_margin) if iv.bounded else None)
    if params.alphas is None:
        alphas = [2.0 ** -j for j in range(1, len(knots) + 1)]
    elif params.alphas == "halving":
        if spec.unbounded:
            raise SpecError("halving scales need bounded components")
        alphas = [_halving_scale(j, len(kn), iv.length)
                  for j, (kn, iv) in enumerate(zip(knots, spec.positives), start=1)]
    else:
        if len(params.alphas) != len(knots):
            raise SpecError(f"expected {len(knots)} branch scales, got {len(params.alphas)}")
        alphas = list(params.alphas)
    return _Layout(sigma, atom, thetas, weights, knots, alphas)


def choose_omega0(params: ConstructionParams, spec: SupportSpec) -> float:
    """Center weight making every root spectrum's bracket strictly dominant.

    With nothing to dominate (a lone center atom) the weight is 1.
    """
    lay = _layout(spec, params)
    if spec.generator is not None:
        return params.omega0_margin * (sum(lay.weights) + 1.0 / (2.0 * lay.sigma))
    counts = [len(kn) if kn is not None else 0 for kn in lay.knots]
    tail_alpha = lay.alphas[-1] if spec.unbounded else 0.0
    w = omega0_bound(lay.weights, lay.alphas, counts, tail_alpha, params.omega0_margin)
    return w if w > 0 else 1.0


def _center_sum(atom: Atom, omega0: float, thetas, weights) -> TranslateSum:
    terms = [(2.0 * omega0, 0.0)]
    for th, w in zip(thetas[1:], weights):
        terms += [(w, th), (w, -th)]
    return TranslateSum(atom, tuple(terms))


def build_generator(spec: SupportSpec, params: ConstructionParams | None = None) -> BranchFunction:
    """Real positive definite ``u`` with essential support exactly ``spec``."""
    params = params or ConstructionParams()
    lay = _layout(spec, params)
    center = _center_sum(lay.atom, choose_omega0(params, spec), lay.thetas, lay.weights)
    if spec.generator is not None:
        shape = TranslateSum(lay.atom, tuple((1.0, t) for t in lay.knots[0]))
        pb = PeriodicBranches(shape, spec.generator.period, lay.alphas[0], 0.5)
        return BranchFunction(spec, center, pb)
    branches = []
    for iv, kn, a in zip(spec.positives, lay.knots, lay.alphas):
        if kn is None:
            shape = TranslateSum(lay.atom, (), GeometricTail(iv.lo, lay.sigma, params.tail_ratio))
        else:
            shape = TranslateSum(lay.atom, tuple((1.0, t) for t in kn))
        branches.append(Branch(a, shape))
    return BranchFunction(spec, center, tuple(branches))


def construct_f(spec: SupportSpec, n: int, params: ConstructionParams | None = None) -> BranchFunction:
    """``f = u^n`` stored branch-wise; u is one of its n-th roots."""
    if int(n) != n or n < 2:
        raise SpecError(f"n must be an integer >= 2, got {n}")
    u = build_generator(spec, params)
    return replace(u, power=Fraction(int(n)))


# -- the two worked examples -----------------------------------------------------

F1_INTERVALS = [(-15.0, -10.0), (-2 * math.pi, -math.pi), (-1.0, 1.0),
                      (math.pi, 2 * math.pi), (10.0, 15.0)]
F1_KNOTS = ((math.pi + 1.0, 2 * math.pi - 1.0), (11.0, 12.0, 13.0, 14.0))
F1_SCALES = (1.0 / 8.0, 1.0 / 16.0)


def f1_spec() -> SupportSpec:
    return build_support_spec(F1_INTERVALS)


def f2_spec(a: float = 16.0) -> SupportSpec:
    if not a > 15:
        raise SpecError("the f2 layout needs a > 15")
    return build_support_spec(F1_INTERVALS + [(-math.inf, -a), (a, math.inf)])


def _example_branches(atom: Atom, a: float | None):
    brs = [Branch(sc, TranslateSum(atom, tuple((1.0, t) for t in kn)))
           for sc, kn in zip(F1_SCALES, F1_KNOTS)]
    if a is not None:
        brs.append(Branch(0.25, TranslateSum(atom, (), GeometricTail(a, 1.0, 0.5))))
    return tuple(brs)


def example_f1(n: int) -> BranchFunction:
    """The bounded-support example: ``Λ_n + 2^{-3n}[...] + 2^{-4n}[...]``."""
    if n < 2:
        raise SpecError("n must be >= 2")
    atom = Atom(1.0, 1.0)
    return BranchFunction(f1_spec(), TranslateSum(atom, ((1.0, 0.0),)),
                          _example_branches(atom, None), Fraction(n))


def example_f2(n: int, a: float = 16.0) -> BranchFunction:
    """``example_f1`` plus scale-1/4 geometric tails on ``(a, inf)`` and its mirror."""
    if n < 2:
        raise SpecError("n must be >= 2")
    atom = Atom(1.0, 1.0)
    return BranchFunction(f2_spec(a), TranslateSum(atom, ((1.0, 0.0),)),
                          _example_branches(atom, a), Fraction(n))


def example_generator(a: float | None = None, omega0: float = 1.0) -> BranchFunction:
    """Example generator written with a θ₀ = 0 center weight ``omega0``.

    ``omega0 = 1`` gives the bracket ``1 + (1/8)(...) + (1/16)(...)`` (plus
    ``(1/4)·tail`` when ``a`` is given). ``omega0 = 1/2`` is the generator whose
    n-th power is ``example_f1`` / ``example_f2``.
    """
    atom = Atom(1.0, 1.0)
    spec = f1_spec() if a is None else f2_spec(a)
    return BranchFunction(spec, TranslateSum(atom, ((2.0 * omega0, 0.0),)), _example_branches(atom, a))


def periodic_spec(period: float = 4.0, width: float = 2.0) -> SupportSpec:
    """Infinitely many components ``(j·period ± width/2)``, j ∈ ℤ."""
    return SupportSpec(Interval(-0.5 * width, 0.5 * width), (), PeriodicRule(period, width))
