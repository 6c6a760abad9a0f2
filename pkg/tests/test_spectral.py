"""Spectral sequence pages checked against independent computations.

The oracles use sympy on the raw matrices: E_0 is the weight multiplicity, E_1 is the
homology of each graded piece, and for r past the weight span the pages add up to the
ordinary cohomology of the underlying complex.
"""

import random

import pytest
import sympy
from hypothesis import given, strategies as st

from fss.fcomplex import boundary_rep, cycle_rep, identity, phi, sphere, staircase, zero_complex, zero_morphism
from fss.linalg import GF, Q, rank
from fss.randgen import random_complex, random_morphism
from fss.spectral import (FlagNotExhaustive, Window, auto_window, cone_criterion_cross_check, decalage,
                          decalage_with_basis, induced_page_map, is_r_acyclic, is_r_quasi_iso, page,
                          page_differential, page_entry, r_boundaries, r_cycles, shift)

seeds = st.integers(0, 10 ** 6)


def sym(m):
    return sympy.Matrix(m.shape[0], m.shape[1], [sympy.Rational(int(x.numerator), int(x.denominator)) for x in m.flat])


def sym_rank(m):
    if m.shape[0] == 0 or m.shape[1] == 0:
        return 0
    return sym(m).rank()


def graded_homology(A, p, n):
    cols = [j for j, w in enumerate(A.weights(n)) if w == p]
    out = [i for i, w in enumerate(A.weights(n + 1)) if w == p]
    inn = [j for j, w in enumerate(A.weights(n - 1)) if w == p]
    r_out = sym_rank(A.d(n)[out][:, cols]) if out and cols else 0
    r_in = sym_rank(A.d(n - 1)[cols][:, inn]) if inn and cols else 0
    return len(cols) - r_out - r_in


def total_homology(A, n):
    return A.rank(n) - sym_rank(A.d(n)) - sym_rank(A.d(n - 1))


def weight_span(A):
    ws = [w for n in A.degrees for w in A.weights(n)]
    return max(ws) - min(ws) if ws else 0


# --- oracles on random complexes ---------------------------------------------------------

@given(seeds)
def test_e0_is_weight_multiplicity(seed):
    A = random_complex(random.Random(seed))
    for p, n in auto_window(A, r=0):
        assert page_entry(A, 0, p, n).dim == A.weights(n).count(p)


@given(seeds)
def test_e1_is_graded_homology(seed):
    A = random_complex(random.Random(seed))
    for p, n in auto_window(A, r=1):
        assert page_entry(A, 1, p, n).dim == graded_homology(A, p, n)


@given(seeds)
def test_late_page_sums_to_cohomology(seed):
    A = random_complex(random.Random(seed))
    r = weight_span(A) + 1
    pg = page(A, r, auto_window(A, r=r))
    for n in A.degrees:
        assert sum(pg.dim(p, n) for p in range(pg.window.pmin, pg.window.pmax + 1)) == total_homology(A, n)


@given(seeds, st.integers(0, 3))
def test_boundaries_inside_cycles_and_dd_zero(seed, r):
    A = random_complex(random.Random(seed))
    for p, n in auto_window(A, r=r):
        assert r_boundaries(A, r, p, n) <= r_cycles(A, r, p, n)
        d1 = page_differential(A, r, p, n)
        d2 = page_differential(A, r, p - r, n + 1)
        if d1.size and d2.size:
            assert not any(x != 0 for x in d2.dot(d1).flat)


def rk(m):
    return rank(m) if m.size else 0


def test_prime_field_pages_match_homology_count():
    F = GF(5)
    rng = random.Random(9)
    for _ in range(10):
        A = random_complex(rng, field=F)
        r = weight_span(A) + 1
        pg = page(A, r)
        for n in A.degrees:
            total = sum(pg.dim(p, n) for p in range(pg.window.pmin, pg.window.pmax + 1))
            assert total == A.rank(n) - rk(A.d(n)) - rk(A.d(n - 1))


# --- hand examples ---------------------------------------------------------------------

def test_sphere_pages():
    S = sphere(Q, 2, 1)
    for r in range(4):
        assert page(S, r).nonzero() == {(2, 1): 1}


@pytest.mark.parametrize("r", [0, 1, 2, 3])
def test_cycle_object_pages(r):
    Z = cycle_rep(Q, r, 1, 0)
    for k in range(r + 1):
        assert page(Z, k).nonzero() == {(1, 0): 1, (1 - r, 1): 1}
    assert page(Z, r + 1).is_zero()
    m = page_differential(Z, r, 1, 0)
    assert m.shape == (1, 1) and m[0, 0] != 0


@pytest.mark.parametrize("r", [1, 2, 3])
def test_boundary_object_pages(r):
    B = boundary_rep(Q, r, 0, 0)
    for k in range(r):
        assert sum(page(B, k).nonzero().values()) == 4
    assert page(B, r).is_zero()


def test_phi_weak_equivalence_level():
    # Z_{r+1} -> B_{r+1} is an (r+1)-weak equivalence but not an r-weak equivalence
    for r in (0, 1, 2):
        f = phi(Q, r + 1, 0, 0)
        assert is_r_quasi_iso(f, r + 1)
        assert not is_r_quasi_iso(f, r)


def test_staircase_pages_before_and_at_r():
    r, N = 2, 6
    stc = staircase(Q, r, N)
    W = auto_window(stc.obj, r=r + 1).restrict_p(stc.safe_min_p)
    for k in range(r):
        for p, n in W:
            m = page_differential(stc.obj, k, p, n)
            assert not any(x != 0 for x in m.flat)
    for p in (-3, -2, -1):
        m = page_differential(stc.obj, r, p, 0)
        assert m.shape == (1, 1) and m[0, 0] != 0
    assert is_r_quasi_iso(stc.pi, r, W)


# --- weak equivalences and the cone criterion ----------------------------------------------

def test_cone_criterion_identity_of_cycle_object():
    a, b = cone_criterion_cross_check(identity(cycle_rep(Q, 2, 0, 0)), 1)
    assert bool(a) and bool(b)


def test_cone_criterion_zero_into_unit():
    a, b = cone_criterion_cross_check(zero_morphism(zero_complex(Q), sphere(Q, 0, 0)), 0)
    assert not a and not b
    assert a.witnesses and b.witnesses


@given(seeds, st.integers(0, 2))
def test_cone_criterion_random(seed, r):
    f = random_morphism(random.Random(seed), max_rank=4)
    cone_criterion_cross_check(f, r)


def test_witness_reports_display_bidegree():
    v = is_r_acyclic(sphere(Q, 3, -1), 0)
    assert v.witnesses == [{"p": 3, "n": -1, "display": [3, 2], "dim": 1}]


def test_induced_map_on_identity_is_identity():
    A = random_complex(random.Random(5))
    pm = induced_page_map(identity(A), 1)
    assert pm.failures() == []


def test_window_parse_and_errors():
    assert Window.parse("p=-2..3,n=0..1") == Window(-2, 3, 0, 1)
    with pytest.raises(ValueError, match="window must look like"):
        Window.parse("p=1")
    with pytest.raises(ValueError, match="empty"):
        Window.parse("p=3..1,n=0..0")


# --- shift and decalage --------------------------------------------------------------------

def test_shift_example():
    Z = cycle_rep(Q, 1, 0, 0)
    S = shift(Z, 1)
    assert S.weights(0) == (0,) and S.weights(1) == (-2,)
    # a d_1 becomes a d_2
    assert page(S, 2).nonzero() == {(0, 0): 1, (-2, 1): 1}
    assert page(S, 3).is_zero()


def test_dec_of_shift_example():
    Z = cycle_rep(Q, 1, 0, 0)
    D = decalage(shift(Z, 1), 1)
    assert {n: D.weights(n) for n in D.degrees} == {n: Z.weights(n) for n in Z.degrees}


@given(seeds, st.integers(0, 2))
def test_dec_shift_pages_match(seed, r):
    A = random_complex(random.Random(seed))
    D = decalage(shift(A, r), r)
    for k in range(3):
        W = auto_window(A, D, r=k)
        assert page(D, k, W).nonzero() == page(A, k, W).nonzero()


def test_decalage_comparison_is_filtered():
    A = random_complex(random.Random(11))
    D, cmp = decalage_with_basis(A, 1)
    assert D.is_valid() and cmp.is_valid()


def test_negative_r_rejected():
    with pytest.raises(ValueError):
        shift(sphere(Q, 0, 0), -1)
    with pytest.raises(ValueError):
        decalage(sphere(Q, 0, 0), -1)
    assert issubclass(FlagNotExhaustive, RuntimeError)


@given(seeds, st.integers(1, 2), st.integers(0, 2))
def test_shift_reindexes_pages(seed, l, r):
    # E_{r+l}^{p - l n}(S^l A)^n has the dimension of E_r^p(A)^n
    A = random_complex(random.Random(seed))
    SA = shift(A, l)
    for p, n in auto_window(A, r=r).pad(2, 0):
        assert page_entry(SA, r + l, p - l * n, n).dim == page_entry(A, r, p, n).dim
