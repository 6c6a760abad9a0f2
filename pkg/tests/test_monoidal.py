import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from fss.fcomplex import cycle_rep, direct_sum, identity, sphere
from fss.linalg import GF, Q
from fss.monoidal import (adjunction_check, curry, find_filtered_isomorphism, find_morphism_isomorphism,
                          fold_map, hom_space, internal_hom, muro_factorization, phi_box_zero_to_cycle,
                          search_filtered_isomorphism, tensor, tensor_decomposition_check, tensor_morphisms,
                          uncurry, unit_axiom_check)
from fss.randgen import random_complex, random_hom
from fss.spectral import auto_window, is_r_quasi_iso, r_cycles

seeds = st.integers(0, 10 ** 6)


def brute_hom_dim(A, B):
    """Dimension of filtered chain maps A -> B by solving the linear conditions in sympy."""
    vars_ = {}
    for n in A.degrees:
        for i, wb in enumerate(B.weights(n)):
            for j, wa in enumerate(A.weights(n)):
                if wb <= wa:
                    vars_[(n, i, j)] = sympy.Symbol("x_%d_%d_%d" % (n + 50, i, j))
    if not vars_:
        return 0

    def f(n):
        return sympy.Matrix(B.rank(n), A.rank(n), lambda i, j: vars_.get((n, i, j), 0))

    def d(X, n):
        m = X.d(n)
        return sympy.Matrix(X.rank(n + 1), X.rank(n),
                            lambda i, j: sympy.Rational(int(m[i, j].numerator), int(m[i, j].denominator)))

    eqs = []
    for n in sorted(set(A.degrees) | set(B.degrees)):
        lhs = f(n + 1) * d(A, n) if A.rank(n) and B.rank(n + 1) else None
        rhs = d(B, n) * f(n) if A.rank(n) and B.rank(n + 1) else None
        if lhs is not None:
            eqs.extend(list(lhs - rhs))
    syms = list(vars_.values())
    if not eqs:
        return len(syms)
    M = sympy.Matrix([[sympy.diff(e, s) for s in syms] for e in eqs])
    return len(syms) - M.rank()


@settings(max_examples=15)
@given(seeds)
def test_hom_space_dimension_against_brute_force(seed):
    rng = random.Random(seed)
    A, B = random_complex(rng, max_rank=3), random_complex(rng, max_rank=3)
    assert len(hom_space(A, B)) == brute_hom_dim(A, B)


@given(seeds)
def test_hom_space_elements_are_filtered_chain_maps(seed):
    rng = random.Random(seed)
    A, B = random_complex(rng, max_rank=3), random_complex(rng, max_rank=3)
    for f in hom_space(A, B):
        assert f.validate().ok


def test_hom_space_is_degree_zero_filtered_cycles_of_internal_hom():
    rng = random.Random(21)
    for _ in range(6):
        A, B = random_complex(rng, max_rank=3), random_complex(rng, max_rank=3)
        H = internal_hom(A, B)
        assert H.is_valid()
        # r large enough that "d x in F_{-r}" means d x = 0
        assert len(hom_space(A, B)) == r_cycles(H, 40, 0, 0).dim


# --- tensor -------------------------------------------------------------------------------

def test_tensor_of_cycle_objects_squares_to_zero():
    T = tensor(cycle_rep(Q, 1, 0, 0), cycle_rep(Q, 1, 0, 0))
    assert T.validate().ok
    assert {n: sorted(T.weights(n)) for n in T.degrees} == {0: [0], 1: [-1, -1], 2: [-2]}


@given(seeds)
def test_tensor_validates(seed):
    rng = random.Random(seed)
    assert tensor(random_complex(rng, max_rank=3), random_complex(rng, max_rank=3)).is_valid()


@pytest.mark.parametrize("p,n,q,m", [(0, 0, 0, 0), (2, -1, -3, 2), (-1, 1, 1, -1)])
def test_sphere_tensor(p, n, q, m):
    assert find_filtered_isomorphism(tensor(sphere(Q, p, n), sphere(Q, q, m)), sphere(Q, p + q, n + m)) is not None


def test_unit_is_strict():
    A = random_complex(random.Random(1))
    assert tensor(sphere(Q, 0, 0), A) == A


def test_symmetry_and_associativity():
    rng = random.Random(2)
    A, B, C = (random_complex(rng, max_rank=2) for _ in range(3))
    assert find_filtered_isomorphism(tensor(A, B), tensor(B, A)) is not None
    assert find_filtered_isomorphism(tensor(tensor(A, B), C), tensor(A, tensor(B, C))) is not None


def test_tensor_morphisms_functorial():
    rng = random.Random(3)
    A, B, C = (random_complex(rng, max_rank=2) for _ in range(3))
    f, g = random_hom(rng, A, B), random_hom(rng, B, C)
    h = identity(A)
    assert tensor_morphisms(g @ f, h) == tensor_morphisms(g, h) @ tensor_morphisms(f, h)
    assert tensor_morphisms(identity(A), identity(B)) == identity(tensor(A, B))


@pytest.mark.parametrize("s,t", [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)])
def test_cycle_tensor_decomposition(s, t):
    assert tensor_decomposition_check(s, t, 1, 0, -1, 1)


def test_cycle_tensor_decomposition_over_prime_field():
    assert tensor_decomposition_check(1, 2, 0, 0, 0, 0, field=GF(3))


def test_prime_field_tensor_with_wide_blocks():
    F = GF(3)
    A = direct_sum(cycle_rep(F, 1, 0, 0), cycle_rep(F, 0, 0, 0)).obj
    T = tensor(A, A)
    assert T.validate().ok
    assert sorted(T.weights(1)) == [-1, -1, -1, -1, 0, 0, 0, 0]


def test_tensor_decomposition_rejects_bad_order():
    with pytest.raises(ValueError):
        tensor_decomposition_check(2, 1, 0, 0, 0, 0)


# --- isomorphism search ---------------------------------------------------------------------

def test_iso_search_statuses():
    assert search_filtered_isomorphism(cycle_rep(Q, 0, 0, 0), cycle_rep(Q, 1, 0, 0)).status == "weights-differ"
    # same weights, different homology
    split = direct_sum(sphere(Q, 0, 0), sphere(Q, 0, 1)).obj
    assert search_filtered_isomorphism(cycle_rep(Q, 0, 0, 0), split).status == "inconclusive-negative"


def test_iso_certificate_checks():
    A = random_complex(random.Random(4))
    B = random_complex(random.Random(4), scrambled=False)
    cert = find_filtered_isomorphism(A, B)
    assert cert is not None and cert.check()


def test_morphism_iso():
    rng = random.Random(5)
    A = random_complex(rng, max_rank=3)
    f = identity(A)
    B = random_complex(random.Random(5), max_rank=3, scrambled=False)
    cert = find_morphism_isomorphism(f, identity(B))
    assert cert is not None and cert.check(f, identity(B))


# --- adjunction -------------------------------------------------------------------------

def test_adjunction_small():
    rng = random.Random(6)
    for _ in range(3):
        A, B, C = (random_complex(rng, max_rank=2) for _ in range(3))
        v = adjunction_check(A, B, C)
        assert v, v.witnesses


def test_curry_roundtrip():
    rng = random.Random(7)
    A, B = random_complex(rng, max_rank=2), random_complex(rng, max_rank=2)
    C = random_complex(rng, max_rank=3)
    f = random_hom(rng, tensor(A, B), C)
    assert uncurry(curry(f, A, B), A, C) == f


# --- pushout-products and the unit -------------------------------------------------------------

@pytest.mark.parametrize("r,s", [(1, 0), (1, 1), (2, 1), (2, 2)])
def test_phi_box_zero_to_cycle(r, s):
    pp, expected = phi_box_zero_to_cycle(Q, r, 0, 0, s, 1, -1)
    assert find_morphism_isomorphism(pp, expected) is not None


@pytest.mark.parametrize("r", [1, 2])
def test_unit_axiom(r):
    rng = random.Random(10 + r)
    for A in [sphere(Q, 0, 0), cycle_rep(Q, r, 0, 0), random_complex(rng, max_rank=3)]:
        v = unit_axiom_check(A, r, 2 * r + 5)
        assert v, v.witnesses


def test_unit_axiom_window_guard():
    from fss.spectral import Window
    with pytest.raises(ValueError):
        unit_axiom_check(sphere(Q, 0, 0), 1, 5, window=Window(-20, 0, 0, 0))


def test_muro_factorization():
    for r in (1, 2):
        N = r + 4
        mf = muro_factorization(Q, r, N)
        assert mf.D.is_valid() and mf.j.is_valid() and mf.q.is_valid()
        assert mf.q @ mf.j == fold_map(Q, r, N)
        W = auto_window(mf.D, r=r + 1).restrict_p(mf.staircase.safe_min_p)
        assert is_r_quasi_iso(mf.q, r, W)


def test_muro_needs_room():
    with pytest.raises(ValueError):
        muro_factorization(Q, 2, 4)


def test_seed_from_environment(monkeypatch):
    from fss.monoidal import DEFAULT_SEED, iso_seed
    monkeypatch.delenv("FSS_SEED", raising=False)
    assert iso_seed() == DEFAULT_SEED
    monkeypatch.setenv("FSS_SEED", "77")
    assert iso_seed() == 77
    A = random_complex(random.Random(4))
    B = random_complex(random.Random(4), scrambled=False)
    assert find_filtered_isomorphism(A, B).check()
