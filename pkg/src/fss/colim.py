"""Finite limits and colimits of filtered complexes.

Colimits are formed on underlying complexes and then given the image
filtration (F_p of the quotient is the image of F_p); limits are formed
degreewise and weightwise (F_p of a subcomplex is the intersection with F_p).
Both results are re-based with ``flag_quotient`` so the output is again a based
complex.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .fcomplex import FilteredComplex, FilteredMorphism, direct_sum, identity, zero_complex, zero_morphism
from .linalg import Subspace, flag_quotient, hstack, inverse, kernel, matmul, solve_many
from .spectral import _cols_upto


class Quotient(NamedTuple):
    obj: FilteredComplex
    proj: FilteredMorphism        # X -> X/K
    section: dict                 # n -> matrix X/K -> X (linear, not a chain map)


def quotient(X: FilteredComplex, K: dict[int, Subspace]) -> Quotient:
    """X/K for a subcomplex K (one subspace per degree) with the image filtration."""
    F = X.field
    z = F.zero
    pis, secs, bases, weights = {}, {}, {}, {}
    for n in X.degrees:
        dim = X.rank(n)
        sub = K.get(n)
        if sub is not None and sub.dim:
            rows, piv = sub.canonical_rows()
        else:
            rows, piv = [], []
        pivset = set(piv)
        free = [c for c in range(dim) if c not in pivset]
        pi = F.zeros(len(free), dim)
        pos = {c: k for k, c in enumerate(free)}
        for c in free:
            pi[pos[c], c] = F.one
        for i, c in enumerate(piv):
            for f_ in free:
                x = rows[i][f_]
                if x != 0:
                    pi[pos[f_], c] = -x
        sec = F.zeros(dim, len(free))
        for k, c in enumerate(free):
            sec[c, k] = F.one
        if not free:
            continue
        flag = []
        ws = sorted(set(X.weights(n)))
        for w in ws:
            cols = _cols_upto(X, n, w)
            flag.append((w, Subspace(len(free), pi[:, cols])))
        P, wq = flag_quotient(len(free), flag, F)
        Pinv = inverse(P)
        pis[n] = matmul(Pinv, pi, z)
        secs[n] = matmul(sec, P, z)
        bases[n], weights[n] = P, wq
    diffs = {}
    for n in pis:
        if n + 1 in pis and n in X.nonzero_diffs():
            diffs[n] = matmul(pis[n + 1], matmul(X.d(n), secs[n], z), z)
    Qc = FilteredComplex(F, weights, diffs)
    return Quotient(Qc, FilteredMorphism(X, Qc, pis), secs)


class Sub(NamedTuple):
    obj: FilteredComplex
    incl: FilteredMorphism       # K -> X


def subcomplex(X: FilteredComplex, K: dict[int, Subspace]) -> Sub:
    """A d-closed family of subspaces as a filtered complex with F_p K = K cap F_p X."""
    F = X.field
    z = F.zero
    vecs, weights = {}, {}
    for n, sub in K.items():
        if sub.dim == 0:
            continue
        M = sub.basis
        flag = []
        for w in sorted(set(X.weights(n))):
            high = [i for i, x in enumerate(X.weights(n)) if x > w]
            if high:
                flag.append((w, kernel(M[high, :], F)))
            else:
                flag.append((w, Subspace.full(F, sub.dim)))
        P, wk = flag_quotient(sub.dim, flag, F)
        vecs[n] = matmul(M, P, z)
        weights[n] = wk
    diffs = {}
    for n, V in vecs.items():
        if n + 1 not in vecs or n not in X.nonzero_diffs():
            continue
        img = matmul(X.d(n), V, z)
        coords = solve_many(vecs[n + 1], img)
        if coords is None:
            raise ValueError("family of subspaces is not closed under d in degree %d" % n)
        diffs[n] = coords
    for n, V in vecs.items():
        if n + 1 not in vecs and n in X.nonzero_diffs():
            if any(x != 0 for x in matmul(X.d(n), V, z).flat):
                raise ValueError("family of subspaces is not closed under d in degree %d" % n)
    Kc = FilteredComplex(F, weights, diffs)
    return Sub(Kc, FilteredMorphism(Kc, X, vecs))


# --- pushouts ---------------------------------------------------------------

class PushoutResult:
    """P = (B + C)/im(f, -g) with legs B -> P and C -> P."""

    def __init__(self, f: FilteredMorphism, g: FilteredMorphism):
        if f.source != g.source:
            raise ValueError("pushout needs a span with a shared source")
        self.f, self.g = f, g
        F = f.field
        B, C = f.target, g.target
        ds = direct_sum(B, C)
        self.sum = ds
        K = {}
        for n in ds.obj.degrees:
            if f.source.rank(n) == 0:
                continue
            stacked = np.concatenate([f[n], -g[n]], axis=0) if ds.obj.rank(n) else None
            K[n] = Subspace(ds.obj.rank(n), stacked)
        q = quotient(ds.obj, K)
        self.quot = q
        self.obj = q.obj
        self.leg_b = q.proj @ ds.inj[0]
        self.leg_c = q.proj @ ds.inj[1]
        self.field = F

    @property
    def legs(self):
        return self.leg_b, self.leg_c

    def induced(self, u: FilteredMorphism, v: FilteredMorphism) -> FilteredMorphism:
        """The unique h: P -> T with h leg_b = u and h leg_c = v (needs u f = v g)."""
        if (u @ self.f) != (v @ self.g):
            raise ValueError("maps do not form a cocone: u f != v g")
        T = u.target
        z = self.field.zero
        maps = {}
        for n in self.obj.degrees:
            uv = hstack([u[n], v[n]], T.rank(n))
            maps[n] = matmul(uv, self.quot.section[n], z)
        return FilteredMorphism(self.obj, T, maps)


def pushout(f: FilteredMorphism, g: FilteredMorphism) -> PushoutResult:
    return PushoutResult(f, g)


class Coproduct(NamedTuple):
    obj: FilteredComplex
    inj: tuple


def coproduct(A: FilteredComplex, B: FilteredComplex) -> Coproduct:
    ds = direct_sum(A, B)
    return Coproduct(ds.obj, ds.inj)


def cokernel(f: FilteredMorphism) -> Quotient:
    K = {n: Subspace(f.target.rank(n), f[n]) for n in f.target.degrees if f.source.rank(n)}
    return quotient(f.target, K)


# --- limits -------------------------------------------------------------------

class PullbackResult(NamedTuple):
    obj: FilteredComplex
    proj_b: FilteredMorphism
    proj_c: FilteredMorphism


def pullback(f: FilteredMorphism, g: FilteredMorphism) -> PullbackResult:
    """B x_D C for a cospan f: B -> D, g: C -> D."""
    if f.target != g.target:
        raise ValueError("pullback needs a cospan with a shared target")
    F = f.field
    ds = direct_sum(f.source, g.source)
    K = {}
    for n in ds.obj.degrees:
        if f.target.rank(n):
            M = hstack([f[n], -g[n]], f.target.rank(n))
            K[n] = kernel(M, F)
        else:
            K[n] = Subspace.full(F, ds.obj.rank(n))
    s = subcomplex(ds.obj, K)
    return PullbackResult(s.obj, ds.proj[0] @ s.incl, ds.proj[1] @ s.incl)


def kernel_complex(f: FilteredMorphism) -> Sub:
    """ker f as a subcomplex of the source."""
    F = f.field
    K = {}
    for n in f.source.degrees:
        if f.target.rank(n):
            K[n] = kernel(f[n], F)
        else:
            K[n] = Subspace.full(F, f.source.rank(n))
    return subcomplex(f.source, K)


def kernel_via_pullback(f: FilteredMorphism) -> PullbackResult:
    zero = zero_complex(f.field)
    return pullback(f, zero_morphism(zero, f.target))


def product(A: FilteredComplex, B: FilteredComplex) -> PullbackResult:
    zero = zero_complex(A.field)
    return pullback(zero_morphism(A, zero), zero_morphism(B, zero))


__all__ = ["quotient", "subcomplex", "pushout", "PushoutResult", "coproduct", "cokernel",
           "pullback", "kernel_complex", "kernel_via_pullback", "product", "identity"]
