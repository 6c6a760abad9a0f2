import random

import pytest
from hypothesis import given, settings, strategies as st

from fss.fcomplex import (boundary_rep, cycle_rep, direct_sum, identity, phi, sphere,
                          staircase, zero_complex, zero_morphism)
from fss.linalg import Q
from fss.modelcat import (GeneratorId, LiftingProblem, SSpec, cellular_chain_check, cofibrant_conditions,
                          dec_shift_equivalence_check, generating_map, is_E_surjective, is_k_suppressive,
                          is_r_suppressive_inclusion, is_S_fibration, is_Z_surjective, monoid_axiom_spot_check,
                          page_zero_check, phi_box_phi_check, rlp_against_map, rlp_I, rlp_J, solve_lifting,
                          subclass_cofibration_check, unit_lift_pattern)
from fss.randgen import random_complex, random_morphism
from fss.spectral import auto_window, is_r_quasi_iso

seeds = st.integers(0, 10 ** 6)


def test_sspec_validation():
    assert SSpec(2, [0, 2]).S == frozenset({0, 2})
    with pytest.raises(ValueError, match="contain"):
        SSpec(2, [0, 1])
    with pytest.raises(ValueError, match="lie in"):
        SSpec(1, [1, 3])
    with pytest.raises(ValueError):
        SSpec(-1, [-1])


def test_generator_ids():
    assert str(GeneratorId("phi", 2, 0, 1)) == "phi_2(0,1)"
    assert generating_map(Q, GeneratorId("zero_to_Z", 1, 0, 0)).source.is_zero()
    with pytest.raises(ValueError):
        GeneratorId("phi", 0, 0, 0)
    with pytest.raises(ValueError):
        GeneratorId("cell", 1, 0, 0)


# --- fibrations and lifting ---------------------------------------------------------------

def test_fibration_examples():
    spec = SSpec(1, {1})
    assert is_S_fibration(identity(cycle_rep(Q, 1, 0, 0)), spec)
    assert is_S_fibration(zero_morphism(cycle_rep(Q, 1, 0, 0), zero_complex(Q)), spec)
    v = is_S_fibration(zero_morphism(zero_complex(Q), cycle_rep(Q, 1, 0, 0)), spec)
    assert not v and {(w["p"], w["n"]) for w in v.witnesses} >= {(0, 0)}


def test_surjectivity_predicates():
    f = zero_morphism(zero_complex(Q), sphere(Q, 0, 0))
    assert not is_E_surjective(f, 1) and not is_Z_surjective(f, 1)
    assert is_E_surjective(identity(sphere(Q, 0, 0)), 1)


@settings(max_examples=10)
@given(seeds)
def test_rlp_against_J_matches_fibration(seed):
    f = random_morphism(random.Random(seed), max_rank=3)
    spec = SSpec(1, {0, 1})
    assert bool(rlp_J(f, spec)) == bool(is_S_fibration(f, spec))


def test_staircase_projection_is_trivial_fibration_on_safe_window():
    r, N = 1, 6
    stc = staircase(Q, r, N)
    W = auto_window(stc.obj, r=r + 1).restrict_p(stc.safe_min_p)
    assert is_S_fibration(stc.pi, SSpec(r, {r}), W)
    assert is_r_quasi_iso(stc.pi, r, W)


def test_lift_exists():
    # 0 -> R_(0)^0 against the identity always lifts
    U = sphere(Q, 0, 0)
    z = zero_complex(Q)
    lp = LiftingProblem(zero_morphism(z, U), identity(U), zero_morphism(z, U), identity(U))
    assert solve_lifting(lp) == identity(U)


def test_lift_impossible():
    # phi_1: Z_1 -> B_1 kills E_1, so id of Z_1 cannot extend along it
    i = phi(Q, 1, 0, 0)
    Z = i.source
    p = zero_morphism(Z, zero_complex(Q))
    lp = LiftingProblem(i, p, identity(Z), zero_morphism(i.target, zero_complex(Q)))
    assert solve_lifting(lp) is None
    ok, info = rlp_against_map(p, i)
    assert not ok and info["squares"] > info["lifted"]


def test_lifting_square_must_commute():
    U = sphere(Q, 0, 0)
    lp = LiftingProblem(identity(U), identity(U), identity(U), zero_morphism(U, U))
    with pytest.raises(ValueError):
        solve_lifting(lp)


@pytest.mark.parametrize("r,N", [(1, 4), (1, 7), (2, 6)])
def test_unit_lift_alternates(r, N):
    v = unit_lift_pattern(Q, r, N)
    assert v
    coeffs = [Q.parse(c) for c in v.detail["coefficients"]]
    assert len(coeffs) == N + 1
    assert all(abs(c) == 1 for c in coeffs)
    assert all(coeffs[k] == -coeffs[k + 1] for k in range(N))


def test_rlp_I_of_identity():
    assert rlp_I(identity(cycle_rep(Q, 1, 0, 0)), SSpec(1, {1}))


# --- suppressiveness ---------------------------------------------------------------------

def test_k_suppressive():
    Z = cycle_rep(Q, 2, 0, 0)
    assert is_k_suppressive(Z, 2)
    v = is_k_suppressive(Z, 3)
    assert not v and v.witnesses[0]["drop"] == 2


@pytest.mark.parametrize("r", [0, 1, 2])
def test_phi_is_suppressive_inclusion_at_r_only(r):
    f = phi(Q, r + 1, 0, 0)
    v = is_r_suppressive_inclusion(f, r)
    assert v and v.detail["min_twist_drop"] == r
    assert not is_r_suppressive_inclusion(f, r + 1)


def test_split_inclusion_is_suppressive():
    A, C = cycle_rep(Q, 1, 0, 0), boundary_rep(Q, 2, 1, 0)
    i = direct_sum(A, C).inj[0]
    v = is_r_suppressive_inclusion(i, 5)
    assert v and v.detail["min_twist_drop"] is None


def test_non_injective_map_is_not_an_inclusion():
    v = is_r_suppressive_inclusion(zero_morphism(sphere(Q, 0, 0), sphere(Q, 0, 0)), 0)
    assert not v


def test_phi_box_phi():
    v = phi_box_phi_check(Q, 1, 0, 0, 1, -1)
    assert v, v.witnesses
    assert v.detail["min_twist_drop"] == 1


# --- cofibrancy diagnostics -------------------------------------------------------------------

def test_cycle_object_is_subclass_cofibrant():
    v = cofibrant_conditions(cycle_rep(Q, 2, 0, 0), SSpec(1, {1}))
    assert v.result == "subclass-cofibrant" and v


def test_unit_fails_cone_lifting():
    v = cofibrant_conditions(sphere(Q, 0, 0), SSpec(1, {1}))
    assert not v
    assert v.detail["3-r-suppressive"]["result"]
    assert not v.detail["4-cone-lifting"]["result"]


def test_staircase_passes_away_from_cut():
    stc = staircase(Q, 1, 6)
    v = cofibrant_conditions(stc.obj, SSpec(1, {1}), safe_min=stc.safe_min_p)
    assert v, v.witnesses


def test_subclass_cofibration():
    spec = SSpec(1, {1})
    Z = cycle_rep(Q, 2, 0, 0)
    assert subclass_cofibration_check(zero_morphism(zero_complex(Q), Z), spec)
    v = subclass_cofibration_check(zero_morphism(zero_complex(Q), sphere(Q, 0, 0)), spec)
    assert not v and "cokernel" in v.witnesses[0]


def test_page_zero():
    stc = staircase(Q, 2, 6)
    W = auto_window(stc.obj, r=2).restrict_p(stc.safe_min_p)
    assert page_zero_check(stc.obj, SSpec(2, {2}), W)
    v = page_zero_check(cycle_rep(Q, 1, 0, 0), SSpec(2, {0, 2}))
    assert not v and v.witnesses[0]["k"] == 1


@settings(max_examples=10)
@given(seeds, st.integers(0, 2), st.integers(0, 2))
def test_dec_shift_equivalence(seed, k, l):
    A = random_complex(random.Random(seed), max_rank=4)
    assert dec_shift_equivalence_check(A, k, l)


# --- monoid axiom --------------------------------------------------------------------------

@pytest.mark.parametrize("s,r", [(0, 0), (0, 1), (1, 1), (2, 2)])
def test_monoid_axiom_spot(s, r):
    A = random_complex(random.Random(s + 10 * r), max_rank=3, atoms=2, pr=(-2, 2), nr=(0, 1))
    v = monoid_axiom_spot_check(s, 0, 0, A, r)
    assert v, v.witnesses


def test_monoid_axiom_guard():
    with pytest.raises(ValueError):
        monoid_axiom_spot_check(2, 0, 0, sphere(Q, 0, 0), 1)


def test_cellular_chain():
    A = cycle_rep(Q, 1, 0, 0)
    cells = [(0, 0, 0, sphere(Q, 1, 0)), (1, 1, -1, cycle_rep(Q, 0, 0, 0))]
    assert cellular_chain_check(A, cells, 1)
