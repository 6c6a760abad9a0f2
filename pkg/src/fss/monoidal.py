"""Tensor product, internal hom, filtered morphism spaces and related checks."""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import colim
from .fcomplex import (FilteredComplex, FilteredMorphism, Staircase, cycle_rep, direct_sum,
                       direct_sum_morphisms, identity, phi, sphere, staircase, suspend,
                       twisted_sum, zero_complex, zero_morphism)
from .linalg import Field, SparseSystem, inverse, matmul, preimage, rank
from .spectral import (Window, auto_window, filtration_piece, is_r_quasi_iso, r_boundaries,
                       r_cycles)
from .verdict import Verdict

DEFAULT_SEED = 20240611
ISO_RETRIES = 8


def iso_seed() -> int:
    env = os.environ.get("FSS_SEED")
    return int(env) if env else DEFAULT_SEED


def _kron(a: np.ndarray, b: np.ndarray, field: Field) -> np.ndarray:
    ra, ca = a.shape
    rb, cb = b.shape
    out = field.zeros(ra * rb, ca * cb)
    for (i, j), x in np.ndenumerate(a):
        if x != 0:
            out[i * rb:(i + 1) * rb, j * cb:(j + 1) * cb] = x * b
    return out


# --- tensor product ---------------------------------------------------------

def tensor_blocks(A: FilteredComplex, B: FilteredComplex, n: int) -> list[tuple[int, int, int]]:
    """(n_A, offset, size) of the A^{n_A} (x) B^{n - n_A} blocks of degree n."""
    out, off = [], 0
    for a in A.degrees:
        b = n - a
        size = A.rank(a) * B.rank(b)
        if size:
            out.append((a, off, size))
            off += size
    return out


def tensor_basis(A: FilteredComplex, B: FilteredComplex, n: int) -> list[tuple[int, int, int]]:
    """Basis labels (n_A, i, j) of (A (x) B)^n in lexicographic order."""
    return [(a, i, j) for a, _, _ in tensor_blocks(A, B, n)
            for i in range(A.rank(a)) for j in range(B.rank(n - a))]


def _tensor_degrees(A, B):
    return sorted({a + b for a in A.degrees for b in B.degrees})


def tensor(A: FilteredComplex, B: FilteredComplex) -> FilteredComplex:
    """A (x) B with additive weights and d(a (x) b) = da (x) b + (-1)^|a| a (x) db."""
    if A.field != B.field:
        raise ValueError("tensor factors live over different fields")
    F = A.field
    degs = _tensor_degrees(A, B)
    weights = {}
    for n in degs:
        weights[n] = tuple(A.weights(a)[i] + B.weights(n - a)[j] for a, i, j in tensor_basis(A, B, n))
    diffs = {}
    for n in degs:
        src = tensor_blocks(A, B, n)
        tgt = {a: (off, size) for a, off, size in tensor_blocks(A, B, n + 1)}
        rows = sum(s for _, s in tgt.values())
        cols = sum(s for _, _, s in src)
        if not rows or not cols:
            continue
        d = F.zeros(rows, cols)
        nonzero = False
        for a, off, size in src:
            b = n - a
            if a + 1 in tgt and a in A.nonzero_diffs():
                toff, tsize = tgt[a + 1]
                d[toff:toff + tsize, off:off + size] = _kron(A.d(a), F.eye(B.rank(b)), F)
                nonzero = True
            if a in tgt and b in B.nonzero_diffs():
                toff, tsize = tgt[a]
                blk = _kron(F.eye(A.rank(a)), B.d(b), F)
                d[toff:toff + tsize, off:off + size] = blk if a % 2 == 0 else -blk
                nonzero = True
        if nonzero:
            diffs[n] = d
    return FilteredComplex(F, weights, diffs)


def tensor_morphisms(f: FilteredMorphism, g: FilteredMorphism) -> FilteredMorphism:
    """f (x) g; both maps have degree 0 so no Koszul sign appears."""
    F = f.field
    S, T = tensor(f.source, g.source), tensor(f.target, g.target)
    maps = {}
    for n in S.degrees:
        if not T.rank(n):
            continue
        m = F.zeros(T.rank(n), S.rank(n))
        tgt = {a: (off, size) for a, off, size in tensor_blocks(f.target, g.target, n)}
        for a, off, size in tensor_blocks(f.source, g.source, n):
            if a in tgt:
                toff, tsize = tgt[a]
                m[toff:toff + tsize, off:off + size] = _kron(f[a], g[n - a], F)
        maps[n] = m
    return FilteredMorphism(S, T, maps)


# --- internal hom ---------------------------------------------------------------

def hom_basis(A: FilteredComplex, B: FilteredComplex, n: int) -> list[tuple[int, int, int]]:
    """Labels (m, i, j) of elementary maps a_j (degree m) -> b_i (degree m + n)."""
    return [(m, i, j) for m in A.degrees for i in range(B.rank(m + n)) for j in range(A.rank(m))]


def _hom_degrees(A, B):
    return sorted({b - a for a in A.degrees for b in B.degrees})


def internal_hom(A: FilteredComplex, B: FilteredComplex) -> FilteredComplex:
    """Hom(A, B) with d(f)_m = d^B f_m - (-1)^n f_{m+1} d^A_m for f of degree n."""
    F = A.field
    degs = _hom_degrees(A, B)
    labels = {n: hom_basis(A, B, n) for n in degs}
    index = {n: {lab: k for k, lab in enumerate(labs)} for n, labs in labels.items()}
    weights = {n: tuple(B.weights(m + n)[i] - A.weights(m)[j] for m, i, j in labs)
               for n, labs in labels.items()}
    diffs = {}
    for n in degs:
        if n + 1 not in index:
            continue
        tgt = index[n + 1]
        d = F.zeros(len(tgt), len(labels[n]))
        sign = -1 if n % 2 == 0 else 1       # -(-1)^n
        for col, (m, i, j) in enumerate(labels[n]):
            dB = B.d(m + n)
            for k in range(B.rank(m + n + 1)):
                x = dB[k, i]
                if x != 0:
                    d[tgt[(m, k, j)], col] += x
            dA = A.d(m - 1)
            for l in range(A.rank(m - 1)):
                x = dA[j, l]
                if x != 0:
                    d[tgt[(m - 1, i, l)], col] += sign * x
        diffs[n] = d
    return FilteredComplex(F, weights, diffs)


# --- spaces of filtered chain maps ------------------------------------------------

class HomVars:
    """Unknown entries of a filtration-preserving degree-0 map A -> B."""

    def __init__(self, A: FilteredComplex, B: FilteredComplex, offset: int = 0):
        self.A, self.B = A, B
        self.index: dict[tuple[int, int, int], int] = {}
        k = offset
        for n in A.degrees:
            wb = B.weights(n)
            for i, w_i in enumerate(wb):
                for j, w_j in enumerate(A.weights(n)):
                    if w_i <= w_j:
                        self.index[(n, i, j)] = k
                        k += 1
        self.offset = offset
        self.end = k

    def __len__(self):
        return self.end - self.offset

    def chain_rows(self) -> list[dict]:
        """Rows of d^B f_n - f_{n+1} d^A_n = 0."""
        A, B = self.A, self.B
        rows = []
        for n in sorted(set(A.degrees) | {x - 1 for x in A.degrees}):
            dA, dB = A.d(n), B.d(n)
            for k in range(B.rank(n + 1)):
                for j in range(A.rank(n)):
                    row = {}
                    for i in range(B.rank(n)):
                        x = dB[k, i]
                        v = self.index.get((n, i, j))
                        if x != 0 and v is not None:
                            row[v] = row.get(v, 0) + x
                    for l in range(A.rank(n + 1)):
                        x = dA[l, j]
                        v = self.index.get((n + 1, k, l))
                        if x != 0 and v is not None:
                            row[v] = row.get(v, 0) - x
                    row = {c: x for c, x in row.items() if x != 0}
                    if row:
                        rows.append(row)
        return rows

    def to_morphism(self, vec: dict) -> FilteredMorphism:
        F = self.A.field
        maps = {}
        for (n, i, j), v in self.index.items():
            x = vec.get(v)
            if x is not None and x != 0:
                if n not in maps:
                    maps[n] = F.zeros(self.B.rank(n), self.A.rank(n))
                maps[n][i, j] = x
        return FilteredMorphism(self.A, self.B, maps)

    def from_morphism(self, f: FilteredMorphism) -> dict:
        out = {}
        for n, m in f.nonzero_maps().items():
            for (i, j), x in np.ndenumerate(m):
                if x != 0:
                    v = self.index.get((n, i, j))
                    if v is None:
                        raise ValueError("morphism is not filtration-preserving at f_%d (%d, %d)"
                                         % (n, i, j))
                    out[v] = x
        return out


def hom_space(A: FilteredComplex, B: FilteredComplex) -> list[FilteredMorphism]:
    """Basis of the space of filtration-preserving chain maps A -> B."""
    hv = HomVars(A, B)
    sysm = SparseSystem(len(hv), A.field)
    for row in hv.chain_rows():
        sysm.add(row)
    return [hv.to_morphism(v) for v in sysm.kernel_vectors()]


def morphism_vector(f: FilteredMorphism) -> list:
    """Flattened entries of f in a fixed order (for rank computations)."""
    out = []
    for n in f.degrees:
        out.extend(f[n].flatten().tolist())
    return out


def span_rank(maps: list[FilteredMorphism]) -> int:
    if not maps:
        return 0
    M = np.array([morphism_vector(f) for f in maps], dtype=object)
    return rank(M) if M.size else 0


# --- filtered isomorphisms --------------------------------------------------------

@dataclass
class IsoCertificate:
    forward: FilteredMorphism
    inverse: FilteredMorphism

    def check(self) -> bool:
        f, g = self.forward, self.inverse
        return (f.is_valid() and g.is_valid()
                and g @ f == identity(f.source) and f @ g == identity(f.target))


def is_filtered_iso(f: FilteredMorphism) -> bool:
    """Invertible with filtration-preserving inverse: every weight block is invertible."""
    A, B = f.source, f.target
    for n in set(A.degrees) | set(B.degrees):
        if sorted(A.weights(n)) != sorted(B.weights(n)):
            return False
        m = f[n]
        for w in set(A.weights(n)):
            rows = [i for i, x in enumerate(B.weights(n)) if x == w]
            cols = [j for j, x in enumerate(A.weights(n)) if x == w]
            if rank(m[np.ix_(rows, cols)]) != len(rows):
                return False
    return True


def invert_morphism(f: FilteredMorphism) -> FilteredMorphism | None:
    maps = {}
    for n in f.degrees:
        if f.source.rank(n) != f.target.rank(n):
            return None
        if f.source.rank(n) == 0:
            continue
        inv = inverse(f[n])
        if inv is None:
            return None
        maps[n] = inv
    g = FilteredMorphism(f.target, f.source, maps)
    return g if g.is_valid() else None


def weight_multisets_match(A: FilteredComplex, B: FilteredComplex) -> bool:
    degs = set(A.degrees) | set(B.degrees)
    return all(A.weight_multiset(n) == B.weight_multiset(n) for n in degs)


def _random_combination(basis: list, rng: random.Random, field: Field):
    coeffs = [field(rng.randint(-97, 97)) for _ in basis]
    return coeffs


def _combine(basis: list[FilteredMorphism], coeffs, A, B) -> FilteredMorphism:
    maps = {}
    for f, c in zip(basis, coeffs):
        if c == 0:
            continue
        for n, m in f.nonzero_maps().items():
            if n in maps:
                maps[n] = maps[n] + m * c
            else:
                maps[n] = m * c
    return FilteredMorphism(A, B, maps)


class IsoSearch(NamedTuple):
    certificate: IsoCertificate | None
    status: str        # "found", "weights-differ", "inconclusive-negative"


def search_filtered_isomorphism(A: FilteredComplex, B: FilteredComplex,
                                seed: int | None = None) -> IsoSearch:
    if A.field != B.field:
        raise ValueError("complexes over different fields")
    if not weight_multisets_match(A, B):
        return IsoSearch(None, "weights-differ")
    if A == B:
        return IsoSearch(IsoCertificate(identity(A), identity(A)), "found")
    basis = hom_space(A, B)
    rng = random.Random(iso_seed() if seed is None else seed)
    for _ in range(ISO_RETRIES):
        f = _combine(basis, _random_combination(basis, rng, A.field), A, B)
        if is_filtered_iso(f):
            g = invert_morphism(f)
            if g is not None:
                cert = IsoCertificate(f, g)
                if cert.check():
                    return IsoSearch(cert, "found")
    return IsoSearch(None, "inconclusive-negative")


def find_filtered_isomorphism(A: FilteredComplex, B: FilteredComplex,
                              seed: int | None = None) -> IsoCertificate | None:
    """A filtered isomorphism A -> B with its inverse, or None."""
    return search_filtered_isomorphism(A, B, seed).certificate


@dataclass
class MorphismIsoCertificate:
    """alpha: A -> A', beta: B -> B' filtered isomorphisms with beta f = g alpha."""
    alpha: IsoCertificate
    beta: IsoCertificate

    def check(self, f: FilteredMorphism, g: FilteredMorphism) -> bool:
        return (self.alpha.check() and self.beta.check()
                and self.beta.forward @ f == g @ self.alpha.forward)


def find_morphism_isomorphism(f: FilteredMorphism, g: FilteredMorphism,
                              seed: int | None = None) -> MorphismIsoCertificate | None:
    """Isomorphism of arrows f: A -> B and g: A' -> B' in the arrow category."""
    A, B, A2, B2 = f.source, f.target, g.source, g.target
    if not (weight_multisets_match(A, A2) and weight_multisets_match(B, B2)):
        return None
    F = f.field
    ha = HomVars(A, A2)
    hb = HomVars(B, B2, offset=ha.end)
    sysm = SparseSystem(hb.end, F)
    for row in ha.chain_rows() + hb.chain_rows():
        sysm.add(row)
    # beta f - g alpha = 0, entry (n; k, j) with k in B2^n, j in A^n
    for n in A.degrees:
        fn, gn = f[n], g[n]
        for k in range(B2.rank(n)):
            for j in range(A.rank(n)):
                row = {}
                for i in range(B.rank(n)):
                    x = fn[i, j]
                    v = hb.index.get((n, k, i))
                    if x != 0 and v is not None:
                        row[v] = row.get(v, 0) + x
                for l in range(A2.rank(n)):
                    x = gn[k, l]
                    v = ha.index.get((n, l, j))
                    if x != 0 and v is not None:
                        row[v] = row.get(v, 0) - x
                row = {c: x for c, x in row.items() if x != 0}
                if row:
                    sysm.add(row)
    basis = sysm.kernel_vectors()
    rng = random.Random(iso_seed() if seed is None else seed)
    for _ in range(ISO_RETRIES):
        coeffs = [F(rng.randint(-97, 97)) for _ in basis]
        vec: dict = {}
        for b, c in zip(basis, coeffs):
            for k, x in b.items():
                vec[k] = vec.get(k, F.zero) + c * x
        alpha, beta = ha.to_morphism(vec), hb.to_morphism(vec)
        if is_filtered_iso(alpha) and is_filtered_iso(beta):
            ai, bi = invert_morphism(alpha), invert_morphism(beta)
            if ai is None or bi is None:
                continue
            cert = MorphismIsoCertificate(IsoCertificate(alpha, ai), IsoCertificate(beta, bi))
            if cert.check(f, g):
                return cert
    return None


# --- adjunction -----------------------------------------------------------------

def curry(phi_: FilteredMorphism, A: FilteredComplex, B: FilteredComplex) -> FilteredMorphism:
    """phi: A (x) B -> C  to  B -> Hom(A, C), psi(b)(a) = (-1)^{|a||b|} phi(a (x) b)."""
    F = phi_.field
    C = phi_.target
    H = internal_hom(A, C)
    maps = {}
    for k in B.degrees:
        labels = hom_basis(A, C, k)
        if not labels:
            continue
        m = F.zeros(len(labels), B.rank(k))
        for row, (mdeg, i, l) in enumerate(labels):
            tot = mdeg + k
            tb = {lab: idx for idx, lab in enumerate(tensor_basis(A, B, tot))}
            sign = -1 if (mdeg * k) % 2 else 1
            ph = phi_[tot]
            for j in range(B.rank(k)):
                x = ph[i, tb[(mdeg, l, j)]]
                if x != 0:
                    m[row, j] = sign * x
        maps[k] = m
    return FilteredMorphism(B, H, maps)


def uncurry(psi: FilteredMorphism, A: FilteredComplex, C: FilteredComplex) -> FilteredMorphism:
    F = psi.field
    B = psi.source
    T = tensor(A, B)
    maps = {}
    for n in T.degrees:
        if not C.rank(n):
            continue
        m = F.zeros(C.rank(n), T.rank(n))
        for col, (a, l, j) in enumerate(tensor_basis(A, B, n)):
            k = n - a
            labels = {lab: idx for idx, lab in enumerate(hom_basis(A, C, k))}
            ps = psi[k]
            sign = -1 if (a * k) % 2 else 1
            for i in range(C.rank(n)):
                x = ps[labels[(a, i, l)], j]
                if x != 0:
                    m[i, col] = sign * x
        maps[n] = m
    return FilteredMorphism(T, C, maps)


def adjunction_check(A: FilteredComplex, B: FilteredComplex, C: FilteredComplex) -> Verdict:
    """Currying is a linear bijection Hom(A (x) B, C) -> Hom(B, Hom(A, C))."""
    left = hom_space(tensor(A, B), C)
    right = hom_space(B, internal_hom(A, C))
    problems = []
    curried = []
    for f in left:
        g = curry(f, A, B)
        if not g.is_valid():
            problems.append("curried map is not a filtered chain map")
        if uncurry(g, A, C) != f:
            problems.append("uncurry(curry(f)) != f")
        curried.append(g)
    if len(left) != len(right):
        problems.append("dimensions differ: %d vs %d" % (len(left), len(right)))
    if span_rank(curried) != len(left):
        problems.append("currying is not injective")
    if span_rank(curried + right) != len(right):
        problems.append("curried maps leave the target space")
    return Verdict("adjunction", not problems, problems,
                   detail={"dim_left": len(left), "dim_right": len(right)})


# --- pushout-product -------------------------------------------------------------

class PushoutProduct(NamedTuple):
    map: FilteredMorphism
    pushout: colim.PushoutResult


def pushout_product(f: FilteredMorphism, g: FilteredMorphism) -> PushoutProduct:
    """f [] g: A (x) D  u_{A (x) C}  B (x) C  ->  B (x) D for f: A -> B, g: C -> D."""
    A, B, C, D = f.source, f.target, g.source, g.target
    po = colim.pushout(tensor_morphisms(identity(A), g), tensor_morphisms(f, identity(C)))
    h = po.induced(tensor_morphisms(f, identity(D)), tensor_morphisms(identity(B), g))
    return PushoutProduct(h, po)


def _zr(F, r, p, n):
    return cycle_rep(F, r, p, n)


def tensor_decomposition_check(s: int, t: int, p: int, n: int, q: int, m: int,
                               field: Field | None = None) -> Verdict:
    """Z_t(q,m) (x) Z_s(p,n) against Z_s(p+q, n+m) + Z_s(p+q-t, n+m+1)."""
    from .linalg import Q as _Q
    F = field or _Q
    if not 0 <= s <= t:
        raise ValueError("need 0 <= s <= t")
    lhs = tensor(_zr(F, t, q, m), _zr(F, s, p, n))
    rhs = direct_sum(_zr(F, s, p + q, n + m), _zr(F, s, p + q - t, n + m + 1)).obj
    res = search_filtered_isomorphism(lhs, rhs)
    return Verdict("tensor-decomposition", res.certificate is not None or res.status,
                   [] if res.certificate else [res.status],
                   detail={"s": s, "t": t, "p": p, "n": n, "q": q, "m": m})


def phi_box_zero_to_cycle(field: Field, r: int, p: int, n: int, s: int, q: int, m: int):
    """(phi_{r+1}(p,n) [] (0 -> Z_s(q,m)), expected four-summand morphism)."""
    f = phi(field, r + 1, p, n)
    Zs = cycle_rep(field, s, q, m)
    g = zero_morphism(zero_complex(field), Zs)
    pp = pushout_product(f, g).map
    z = zero_complex(field)
    parts = []
    for (pp_, nn) in [(p + q + r, n + m - 1), (p + q - 1, n + m)]:
        parts.append(zero_morphism(z, cycle_rep(field, s, pp_, nn)))
    for (pp_, nn) in [(p + q - r - 1, n + m + 1), (p + q, n + m)]:
        parts.append(identity(cycle_rep(field, s, pp_, nn)))
    return pp, direct_sum_morphisms(*parts)


# --- unit axiom -----------------------------------------------------------------------

def unit_map(A: FilteredComplex, r: int, N: int) -> tuple[FilteredMorphism, Staircase]:
    """Q (x) A -> R_(0)^0 (x) A = A (the unit isomorphism is the identity matrix)."""
    st = staircase(A.field, r, N)
    pa = tensor_morphisms(st.pi, identity(A))
    unit_t = pa.target
    # R_(0)^0 (x) A has the same basis order and weights as A
    assert all(unit_t.weights(n) == A.weights(n) for n in A.degrees)
    lam = FilteredMorphism(unit_t, A, {n: A.field.eye(A.rank(n)) for n in A.degrees})
    return lam @ pa, st


def unit_safe_window(A: FilteredComplex, r: int, N: int) -> Window:
    w = auto_window(A, r=r + 1)
    lo = (A.weight_range() or (0, 0))[0] - N + r + 2
    return Window(max(w.pmin, lo), w.pmax, w.nmin, w.nmax)


def _coefficient_extractor(Qc, A, n, qdeg, qidx) -> np.ndarray:
    """Matrix extracting the A-coefficient of 1^{qdeg}_{qidx} from (Q (x) A)^n."""
    F = A.field
    labels = tensor_basis(Qc, A, n)
    out = F.zeros(A.rank(n - qdeg), len(labels))
    for col, (a, i, j) in enumerate(labels):
        if a == qdeg and i == qidx:
            out[j, col] = F.one
    return out


def staircase_cycle_characterization(A: FilteredComplex, r: int, N: int, p: int, n: int):
    """(Z_{r+1}^p(Q (x) A)^n, the subspace cut out by the coefficient conditions)
    and the analogous pair for B_{r+1}.

    The conditions on q = sum_k 1_(-k) (x) a_k + sum_j 1^1_(-j-r-1) (x) a'_j are:
    a_0 in Z_{r+1}^p(A); a_k in B_{r+1}^{p+k}(A) and a_k - d a'_{k-1} in F_{p+k-1}
    for k >= 1 (boundaries: a_0 in B_{r+1}^p(A) instead).
    """
    st = staircase(A.field, r, N)
    Qc = st.obj
    T = tensor(Qc, A)
    F = A.field
    dim = T.rank(n)
    base = filtration_piece(T, p, n)
    conds_common = []
    for k in range(1, N + 1):
        Ek = _coefficient_extractor(Qc, A, n, 0, k)
        conds_common.append((Ek, r_boundaries(A, r + 1, p + k, n)))
        Epk = _coefficient_extractor(Qc, A, n, 1, k - 1)
        comb = Ek - matmul(A.d(n - 1), Epk, F.zero) if Epk.size else Ek
        conds_common.append((comb, filtration_piece(A, p + k - 1, n)))
    E0 = _coefficient_extractor(Qc, A, n, 0, 0)

    def cut(first_space):
        S = base
        for M, W in [(E0, first_space)] + conds_common:
            if M.shape[0] == 0:
                continue
            S = S.intersect(preimage(M, W, F)) if S.dim else S
        return S

    Zc = cut(r_cycles(A, r + 1, p, n))
    Bc = cut(r_boundaries(A, r + 1, p, n))
    return (r_cycles(T, r + 1, p, n), Zc), (r_boundaries(T, r + 1, p, n), Bc), dim


def unit_axiom_check(A: FilteredComplex, r: int, N: int, window: Window | None = None,
                     characterization_checks: bool = True) -> Verdict:
    """Q (x) A -> A is an r-weq on the safe window, plus the cycle/boundary characterizations."""
    f, st = unit_map(A, r, N)
    safe = unit_safe_window(A, r, N)
    if window is None:
        window = safe
    elif window.pmin < safe.pmin:
        raise ValueError("window reaches below the staircase safe region p >= %d" % safe.pmin)
    weq = is_r_quasi_iso(f, r, window)
    wit = list(weq.witnesses)
    char_fail = []
    if characterization_checks:
        for p, n in window:
            (zt, zc), (bt, bc), _ = staircase_cycle_characterization(A, r, N, p, n)
            if zt != zc:
                char_fail.append({"p": p, "n": n, "characterization": "cycles"})
            if bt != bc:
                char_fail.append({"p": p, "n": n, "characterization": "boundaries"})
    ok = bool(weq) and not char_fail
    return Verdict("unit-axiom", ok, wit + char_fail,
                   detail={"r": r, "N": N, "window": window.to_json(), "weq": bool(weq),
                           "characterization_mismatches": len(char_fail)})


# --- cofibrant replacement factorization --------------------------------------------------

class MuroFactorization(NamedTuple):
    j: FilteredMorphism
    q: FilteredMorphism
    D: FilteredComplex
    staircase: object


def muro_factorization(field: Field, r: int, N: int) -> MuroFactorization:
    """Q + R_(0)^0 --j--> D --q--> R_(0)^0 with D = (Q + R_(0)^0) (+)_tau Sigma^r Q.

    The twist is tau = (id, -rho) where rho: Sigma^r Q -> R_(0)^0 is the
    projection onto the top generator; the minus sign makes q a chain map.
    """
    if N < r + 3:
        raise ValueError("need N >= r + 3")
    st = staircase(field, r, N)
    Qc = st.obj
    unit = sphere(field, 0, 0)
    base = direct_sum(Qc, unit)
    X = base.obj
    SQ = suspend(Qc, r)
    # tau_{-1}: (Sigma^r Q)^{-1} = Q^0 -> X^0 = Q^0 + R ; tau_0: Q^1 -> X^1 = Q^1
    t_m1 = field.zeros(X.rank(0), SQ.rank(-1))
    for i in range(N + 1):
        t_m1[i, i] = field.one
    t_m1[N + 1, 0] = -field.one
    t_0 = field.eye(SQ.rank(0))
    ts = twisted_sum(X, SQ, {-1: t_m1, 0: t_0})
    D = ts.obj
    qm = field.zeros(1, D.rank(0))
    qm[0, 0] = field.one
    qm[0, N + 1] = field.one
    q = FilteredMorphism(D, unit, {0: qm})
    return MuroFactorization(ts.incl, q, D, st)


def fold_map(field: Field, r: int, N: int) -> FilteredMorphism:
    """(pi, id): Q + R_(0)^0 -> R_(0)^0."""
    st = staircase(field, r, N)
    base = direct_sum(st.obj, sphere(field, 0, 0))
    m = field.zeros(1, base.obj.rank(0))
    m[0, 0] = field.one
    m[0, N + 1] = field.one
    return FilteredMorphism(base.obj, sphere(field, 0, 0), {0: m})
