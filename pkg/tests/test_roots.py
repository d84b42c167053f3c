import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pdroots import (CapExceeded, DecompositionError, PhaseVector, SampledFunction, SpecError,
                     build_generator, build_support_spec, construct_f, decompose, distinct_count,
                     enumerate_roots, example_f1, graded_phase_vectors, pd_verdict, periodic_spec,
                     phase_extract, root_candidate, root_residual, verify_root)
from pdroots.roots import RootEntry, RootSet, UnboundedEvidence

from conftest import random_spec


def test_phase_vector_indexing():
    pv = PhaseVector(5, (1, 3))
    assert pv[0] == 0 and pv[1] == 1 and pv[2] == 3 and pv[7] == 0
    assert pv[-1] == 4 and pv[-2] == 2
    assert pv.negated() == PhaseVector(5, (4, 2))
    assert PhaseVector.finitely_supported(3, (1, 0, 2, 0, 0)).entries == (1, 0, 2)
    for bad in ((5,), (-1,)):
        with pytest.raises(SpecError):
            PhaseVector(5, bad)


def test_graded_order():
    first = [pv.entries for pv in itertools.islice(graded_phase_vectors(2), 8)]
    assert first == [(), (1,), (0, 1), (1, 1), (0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)]
    pvs = list(itertools.islice(graded_phase_vectors(3), 500))
    assert len(set(pvs)) == 500
    assert [p.support_max for p in pvs] == sorted(p.support_max for p in pvs)


@pytest.mark.parametrize("k, n", [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3), (4, 2)])
def test_constructions_are_exact(rng, k, n):
    f = construct_f(random_spec(rng, k), n)
    rs = enumerate_roots(f, n)
    assert rs.bound == n ** (k - 1)
    assert distinct_count(rs) == n ** (k - 1) and not rs.rejected
    assert all(e.verdict.path == "analytic" for e in rs.roots)


def test_unbounded_spec_exact(rng):
    f = construct_f(random_spec(rng, 3, unbounded=True), 3)
    rs = enumerate_roots(f, 3)
    assert distinct_count(rs) == 9 == rs.bound


def test_cap():
    f = construct_f(build_support_spec([(-1, 1), (3, 5), (-5, -3), (7, 9), (-9, -7)]), 2)
    with pytest.raises(CapExceeded, match="cap >= 4"):
        enumerate_roots(f, 2, cap=3)
    assert len(enumerate_roots(f, 2, cap=4).roots) == 4


def test_root_count_upper_bound_on_f1():
    for n in (2, 3):
        rs = enumerate_roots(example_f1(n), n)
        assert distinct_count(rs) <= n ** 2


def test_principal_root_idempotent(rng):
    for k in (1, 2, 3):
        spec = random_spec(rng, k)
        f = construct_f(spec, 3)
        assert root_candidate(f, PhaseVector(3, (0,) * (k - 1))) == build_generator(spec)
    spec = periodic_spec()
    assert root_candidate(construct_f(spec, 2), PhaseVector(2, ())) == build_generator(spec)


def test_perturbed_phase_is_rejected(f1_layout):
    f = construct_f(f1_layout, 2)
    g = root_candidate(f, PhaseVector(2, (1, 0)))
    assert verify_root(g, f, 2)
    bad = g.with_phases([g.branches[0].phase + Fraction(1, 100), g.branches[1].phase])
    assert root_residual(bad, f, 2) > 1e-3
    assert not verify_root(bad, f, 2)


def test_wrong_power_is_rejected(f1_layout):
    f = construct_f(f1_layout, 2)
    g = root_candidate(f, PhaseVector(2, (0, 0)))
    assert not verify_root(g, f, 3)


def test_conjugation_closure(f1_layout):
    n = 3
    f = construct_f(f1_layout, n)
    rs = enumerate_roots(f, n)
    found = {e.pv for e in rs.roots}
    for e in rs.roots:
        assert e.pv.negated() in found
    x = np.linspace(-16, 16, 3201)
    for e in rs.roots:
        partner = root_candidate(f, e.pv.negated())
        np.testing.assert_allclose(np.conj(e.g(x)), partner(x), rtol=0, atol=1e-15)
        np.testing.assert_array_equal(e.g(-x), np.conj(e.g(x)))


def test_distinct_vectors_give_distinct_roots(f1_layout):
    f = construct_f(f1_layout, 3)
    x = np.linspace(-15, 15, 3001)
    roots = {pv: root_candidate(f, PhaseVector(3, pv))(x) for pv in itertools.product(range(3), repeat=2)}
    for a, b in itertools.combinations(roots, 2):
        assert np.max(np.abs(roots[a] - roots[b])) > 1e-6


def test_distinct_count_dedups():
    f = construct_f(build_support_spec([(-1, 1), (3, 5), (-5, -3)]), 2)
    rs = enumerate_roots(f, 2)
    dup = RootSet(2, 2, rs.roots + rs.roots[:1])
    assert distinct_count(dup) == 2
    anon = RootSet(2, 2, tuple(RootEntry(None, e.g, e.verdict) for e in dup.roots))
    assert distinct_count(anon) == 2


def test_periodic_prefix():
    f = construct_f(periodic_spec(4.0, 2.0), 2)
    rs = enumerate_roots(f, 2, cap=100)
    assert rs.unbounded and rs.bound is None
    assert rs.cardinality == UnboundedEvidence(100)
    assert distinct_count(rs) == 100


def test_phase_extract_constant():
    xs = np.linspace(3, 5, 50)
    vals = np.exp(2j * math.pi / 3) * np.sin(0.98 * np.pi * (xs - 3) / 2 + 0.01)
    prof = phase_extract(xs, vals, 1)
    np.testing.assert_allclose(prof.phases, 2 * math.pi / 3, atol=1e-12)
    assert prof.continuous


def test_phase_extract_unwraps_ramp():
    xs = np.linspace(0, 1, 400)
    prof = phase_extract(xs, np.exp(1j * 10 * xs), 2)
    np.testing.assert_allclose(prof.phases, 10 * xs, atol=1e-12)


def test_phase_extract_center_reference():
    xs = np.linspace(-1, 1, 101)
    prof = phase_extract(xs, np.exp(1j * (xs + 2 * math.pi)), 0)
    np.testing.assert_allclose(prof.phases, xs, atol=1e-12)


def test_phase_extract_refuses_long_zero_run():
    xs = np.linspace(0, 1, 100)
    vals = np.ones(100, dtype=complex)
    vals[40:45] = 0
    with pytest.raises(DecompositionError, match="low-modulus"):
        phase_extract(xs, vals, 1)
    vals[41:45] = 1
    phase_extract(xs, vals, 1)


def _sampled(f, spec):
    xs = [np.linspace(-15, 15, 30 * 64 + 1)]
    for iv in spec.components():
        xs.append(np.linspace(iv.lo, iv.hi, 257)[1:-1])
    x = np.unique(np.concatenate(xs + [np.arange(-15, 16, 0.5)]))
    return SampledFunction(spec, x, f(x))


def test_black_box_roots(f1_layout):
    n = 2
    f = construct_f(f1_layout, n)
    sbf = decompose(_sampled(f, f1_layout))
    x = sbf.sample_points
    np.testing.assert_allclose(sbf(x), f(x), atol=1e-15)
    rs = enumerate_roots(sbf, n)
    assert distinct_count(rs) == 4
    assert all(e.verdict.path == "eigen" for e in rs.roots)
    exact = {pv: root_candidate(f, pv) for pv in (e.pv for e in rs.roots)}
    for e in rs.roots:
        np.testing.assert_allclose(e.g(x), exact[e.pv](x), atol=1e-12)


def test_black_box_with_phases(f1_layout):
    f = construct_f(f1_layout, 3).with_phases([Fraction(1, 5), Fraction(2, 7)])
    exact = enumerate_roots(f, 3)
    sbf = decompose(_sampled(f, f1_layout))
    prof = sbf.parts[1].profile
    np.testing.assert_allclose(prof.phases, 2 * math.pi / 5, atol=1e-12)
    rs = enumerate_roots(sbf, 3)
    assert distinct_count(rs) == distinct_count(exact) == 9
    x = sbf.sample_points
    for a, b in zip(exact.roots, rs.roots):
        assert a.pv == b.pv
        np.testing.assert_allclose(b.g(x), a.g(x), atol=1e-12)


def test_black_box_requires_decomposition(f1_layout):
    f = construct_f(f1_layout, 2)
    with pytest.raises(DecompositionError):
        enumerate_roots(_sampled(f, f1_layout), 2)
    with pytest.raises(DecompositionError):
        root_candidate(lambda x: x, PhaseVector(2, ()))


def test_pd_verdict_gram_fallback_for_mixed_power(f1_layout):
    f = construct_f(f1_layout, 2)
    v = pd_verdict(f, np.random.default_rng(0))
    assert v.path == "eigen"


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 3), st.integers(2, 4))
def test_upper_bound_property(seed, k, n):
    f = construct_f(random_spec(np.random.default_rng(seed), k), n)
    rs = enumerate_roots(f, n)
    assert distinct_count(rs) <= n ** (k - 1)
    for e in rs.roots:
        assert root_residual(e.g, f, n) <= 1e-12 * f.value_at_zero()
