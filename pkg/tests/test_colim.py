import random

import pytest
from hypothesis import given, strategies as st

from fss import colim
from fss.fcomplex import FilteredMorphism, cycle_rep, direct_sum, identity, phi, sphere, zero_complex, zero_morphism
from fss.linalg import Q
from fss.modelcat import pushout_closed_form_check
from fss.monoidal import find_filtered_isomorphism
from fss.randgen import random_complex, random_hom, random_morphism
from fss.verify import random_attaching_map

seeds = st.integers(0, 10 ** 6)


def weight_profile(A):
    return {n: sorted(A.weights(n)) for n in A.degrees}


def test_cokernel_uses_image_filtration():
    # R_(1) -> R_(0) + R_(1) along (1, 1): the quotient class has weight 0
    X = direct_sum(sphere(Q, 0, 0), sphere(Q, 1, 0)).obj
    f = FilteredMorphism(sphere(Q, 1, 0), X, {0: Q.matrix([[1], [1]])}, check=True)
    q = colim.cokernel(f)
    assert weight_profile(q.obj) == {0: [0]}
    assert q.proj.is_valid()


def test_cokernel_of_identity_is_zero():
    A = random_complex(random.Random(2))
    assert colim.cokernel(identity(A)).obj.is_zero()


@given(seeds)
def test_pushout_square_commutes(seed):
    rng = random.Random(seed)
    A = random_complex(rng, max_rank=4)
    f = random_hom(rng, A, random_complex(rng, max_rank=4))
    g = random_hom(rng, A, random_complex(rng, max_rank=4))
    po = colim.pushout(f, g)
    assert po.obj.is_valid()
    assert po.leg_b.is_valid() and po.leg_c.is_valid()
    assert po.leg_b @ f == po.leg_c @ g


@given(seeds)
def test_pushout_universal_property(seed):
    rng = random.Random(seed)
    A = random_complex(rng, max_rank=3)
    B = random_complex(rng, max_rank=3)
    f = random_hom(rng, A, B)
    g = identity(A)
    # cocone (u, u f) into an arbitrary T through B
    T = random_complex(rng, max_rank=3)
    u = random_hom(rng, B, T)
    po = colim.pushout(f, g)
    h = po.induced(u, u @ f)
    assert h.is_valid()
    assert h @ po.leg_b == u and h @ po.leg_c == u @ f


def test_induced_rejects_non_cocone():
    Z = sphere(Q, 0, 0)
    po = colim.pushout(identity(Z), identity(Z))
    with pytest.raises(ValueError):
        po.induced(identity(Z), zero_morphism(Z, Z))


def test_pushout_along_zero_is_coproduct():
    rng = random.Random(4)
    for _ in range(5):
        B, C = random_complex(rng, max_rank=3), random_complex(rng, max_rank=3)
        Z0 = zero_complex(Q)
        po = colim.pushout(zero_morphism(Z0, B), zero_morphism(Z0, C))
        assert find_filtered_isomorphism(po.obj, colim.coproduct(B, C).obj) is not None


def test_pushout_needs_shared_source():
    with pytest.raises(ValueError):
        colim.pushout(identity(sphere(Q, 0, 0)), identity(sphere(Q, 1, 0)))


@pytest.mark.parametrize("r", [0, 1, 2])
def test_attaching_generating_map_matches_closed_form(r):
    rng = random.Random(50 + r)
    done = 0
    while done < 4:
        A = random_complex(rng, max_rank=4)
        got = random_attaching_map(rng, A, r)
        if got is None:
            continue
        att, p, n = got
        assert pushout_closed_form_check(A, att, r, p, n)
        done += 1


def test_pushout_along_phi_from_zero_map():
    gen = phi(Q, 2, 0, 0)
    A = sphere(Q, 5, 3)
    po = colim.pushout(zero_morphism(gen.source, A), gen)
    # A plus the cokernel of phi: gamma in degree -1 of weight 1, alpha in degree 0 of weight -1
    assert weight_profile(po.obj) == {-1: [1], 0: [-1], 3: [5]}
    assert po.obj.is_valid()


# --- limits -----------------------------------------------------------------------------------

@given(seeds)
def test_kernel_two_ways(seed):
    f = random_morphism(random.Random(seed), max_rank=4)
    k1 = colim.kernel_complex(f)
    k2 = colim.kernel_via_pullback(f)
    assert k1.obj.is_valid() and k1.incl.is_valid()
    assert (f @ k1.incl).is_zero()
    assert find_filtered_isomorphism(k1.obj, k2.obj) is not None


def test_product_is_direct_sum():
    rng = random.Random(8)
    A, B = random_complex(rng, max_rank=3), random_complex(rng, max_rank=3)
    assert find_filtered_isomorphism(colim.product(A, B).obj, direct_sum(A, B).obj) is not None


def test_pullback_square_commutes():
    rng = random.Random(9)
    for _ in range(5):
        D = random_complex(rng, max_rank=3)
        f = random_hom(rng, random_complex(rng, max_rank=3), D)
        g = random_hom(rng, random_complex(rng, max_rank=3), D)
        pb = colim.pullback(f, g)
        assert f @ pb.proj_b == g @ pb.proj_c


def test_kernel_of_cycle_projection():
    # Z_1(0,0) -> R_(0)^0 onto the bottom generator; the kernel is the top generator
    Z = cycle_rep(Q, 1, 0, 0)
    f = FilteredMorphism(Z, sphere(Q, 0, 0), {0: Q.matrix([[1]])}, check=True)
    k = colim.kernel_complex(f)
    assert weight_profile(k.obj) == {1: [-1]}
    # the other projection is not a chain map
    g = FilteredMorphism(Z, sphere(Q, -1, 1), {1: Q.matrix([[1]])})
    assert "chain map law fails" in " ".join(g.validate().problems)
