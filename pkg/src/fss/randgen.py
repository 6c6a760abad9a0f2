"""Seeded random complexes and morphisms for property tests and the verification suite.

Complexes are direct sums of atoms (spheres, cycle and boundary objects) hidden
behind a random filtered change of basis, so differentials are generally dense.
"""

from __future__ import annotations

import random

import numpy as np

from .fcomplex import (FilteredComplex, FilteredMorphism, boundary_rep, cone, cycle_rep, direct_sum,
                       identity, phi, rebase, sphere, staircase, zero_complex, zero_morphism)
from .linalg import Field, Q, inverse


def random_atom(rng: random.Random, field: Field, pr=(-3, 3), nr=(-1, 1), max_r: int = 3) -> FilteredComplex:
    p = rng.randint(*pr)
    n = rng.randint(*nr)
    kind = rng.choice(["sphere", "sphere", "cycle", "cycle", "cycle", "boundary"])
    if kind == "sphere":
        return sphere(field, p, n)
    if kind == "cycle":
        return cycle_rep(field, rng.randint(0, max_r), p, n)
    return boundary_rep(field, rng.randint(1, max_r), p, n)


def filtered_basis_change(rng: random.Random, weights, field: Field, density: float = 0.5) -> np.ndarray:
    """A random invertible matrix P whose entries only lower weight (P[i,j] != 0 => w_i <= w_j),
    and whose inverse has the same property."""
    k = len(weights)
    while True:
        P = field.zeros(k, k)
        for i in range(k):
            for j in range(k):
                if i == j:
                    P[i, j] = field.random_nonzero(rng)
                elif weights[i] <= weights[j] and rng.random() < density:
                    P[i, j] = field.random_element(rng)
        if k == 0 or inverse(P) is not None:
            return P


def scramble(A: FilteredComplex, rng: random.Random, density: float = 0.5) -> FilteredComplex:
    """A filtered-isomorphic copy of A in a random weight-compatible basis."""
    bases = {n: filtered_basis_change(rng, A.weights(n), A.field, density) for n in A.degrees}
    B, _ = rebase(A, bases, {n: A.weights(n) for n in A.degrees})
    return B


def random_complex(rng: random.Random, field: Field = Q, max_rank: int = 6, atoms: int | None = None,
                   pr=(-3, 3), nr=(-1, 1), max_r: int = 3, scrambled: bool = True) -> FilteredComplex:
    """Random valid complex with at most ``max_rank`` generators per degree."""
    if atoms is None:
        atoms = rng.randint(1, 4)
    parts = []
    ranks: dict[int, int] = {}
    for _ in range(atoms * 3):
        if len(parts) >= atoms:
            break
        a = random_atom(rng, field, pr, nr, max_r)
        if any(ranks.get(n, 0) + a.rank(n) > max_rank for n in a.degrees):
            continue
        for n in a.degrees:
            ranks[n] = ranks.get(n, 0) + a.rank(n)
        parts.append(a)
    if not parts:
        return sphere(field, 0, 0)
    A = direct_sum(*parts).obj if len(parts) > 1 else parts[0]
    return scramble(A, rng) if scrambled else A


def random_hom(rng: random.Random, A: FilteredComplex, B: FilteredComplex) -> FilteredMorphism:
    """A random element of the space of filtered chain maps A -> B."""
    from .monoidal import hom_space

    basis = hom_space(A, B)
    f = zero_morphism(A, B)
    for g in basis:
        c = A.field.random_element(rng)
        if c != 0:
            f = f + g.scale(c)
    return f


def random_morphism(rng: random.Random, field: Field = Q, max_rank: int = 5) -> FilteredMorphism:
    """A random morphism drawn from a mix of shapes: generic maps between random complexes,
    projections and inclusions of summands, identities, zero maps, phi and the staircase
    projection."""
    kind = rng.choice(["generic", "generic", "generic", "projection", "inclusion",
                       "identity", "zero", "phi", "staircase", "cone-projection"])
    if kind == "generic":
        A = random_complex(rng, field, max_rank)
        B = random_complex(rng, field, max_rank)
        return random_hom(rng, A, B)
    if kind in ("projection", "inclusion"):
        A = random_complex(rng, field, max_rank // 2 + 1, atoms=rng.randint(1, 2))
        C = random_complex(rng, field, max_rank // 2 + 1, atoms=rng.randint(1, 2))
        ds = direct_sum(A, C)
        return ds.proj[0] if kind == "projection" else ds.inj[0]
    if kind == "identity":
        return identity(random_complex(rng, field, max_rank))
    if kind == "zero":
        A = random_complex(rng, field, max_rank)
        if rng.random() < 0.5:
            return zero_morphism(zero_complex(field), A)
        return zero_morphism(A, random_complex(rng, field, max_rank))
    if kind == "phi":
        return phi(field, rng.randint(1, 3), rng.randint(-2, 2), rng.randint(-1, 1))
    if kind == "staircase":
        return staircase(field, rng.randint(1, 2), rng.randint(2, 4)).pi
    A = random_complex(rng, field, 3, atoms=1)
    c = cone(identity(A), rng.randint(0, 2))
    return c.proj


def random_cocycle_map(rng: random.Random, A: FilteredComplex, s: int, p: int, n: int) -> FilteredMorphism:
    """A random filtered map Z_s(p,n) -> A (an element of Z_s^{p,p+n}(A))."""
    return random_hom(rng, cycle_rep(A.field, s, p, n), A)
