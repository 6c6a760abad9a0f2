"""Based filtered cochain complexes and filtration-preserving chain maps.

A complex carries, per cohomological degree n, a list of integer weights (one
per basis vector) and a differential ``d_n`` of shape rank(n+1) x rank(n).  The
filtration is the weight flag: F_p A^n is spanned by the basis vectors of
degree n and weight <= p.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .linalg import Field, Q, is_zero, matmul


class InvalidComplex(ValueError):
    """Raised when a constructed object violates a defining invariant."""

    def __init__(self, report: "ValidationReport"):
        super().__init__("; ".join(report.problems))
        self.report = report


class TwistBreaksFiltration(ValueError):
    pass


class TwistNotAnticommuting(ValueError):
    pass


@dataclass
class ValidationReport:
    problems: list[str] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self):
        return self.ok

    def add(self, msg: str):
        self.problems.append(msg)

    def raise_if_invalid(self):
        if self.problems:
            raise InvalidComplex(self)


def _freeze(m: np.ndarray) -> np.ndarray:
    m.flags.writeable = False
    return m


class FilteredComplex:
    """Finitely supported based filtered cochain complex (immutable)."""

    def __init__(self, field: Field, weights: Mapping[int, Sequence[int]], diffs: Mapping[int, np.ndarray] | None = None,
                 check: bool = False):
        self.field = field
        self._w: dict[int, tuple[int, ...]] = {}
        for n, ws in weights.items():
            ws = tuple(int(x) for x in ws)
            if ws:
                self._w[int(n)] = ws
        self._d: dict[int, np.ndarray] = {}
        for n, m in (diffs or {}).items():
            n = int(n)
            rows, cols = self.rank(n + 1), self.rank(n)
            m = np.array(m, dtype=object)
            if m.size == 0 and rows * cols == 0:
                continue
            if m.shape != (rows, cols):
                raise ValueError("d_%d has shape %r, expected %r" % (n, m.shape, (rows, cols)))
            if not is_zero(m):
                self._d[n] = _freeze(m)
        self._cache: dict = {}
        if check:
            self.validate().raise_if_invalid()

    # --- shape ------------------------------------------------------------

    def rank(self, n: int) -> int:
        return len(self._w.get(n, ()))

    def weights(self, n: int) -> tuple[int, ...]:
        return self._w.get(n, ())

    @property
    def degrees(self) -> list[int]:
        return sorted(self._w)

    @property
    def window(self) -> tuple[int, int]:
        if not self._w:
            return (0, 0)
        return (min(self._w), max(self._w))

    @property
    def total_rank(self) -> int:
        return sum(len(w) for w in self._w.values())

    def is_zero(self) -> bool:
        return not self._w

    def weight_range(self) -> tuple[int, int] | None:
        allw = [x for ws in self._w.values() for x in ws]
        if not allw:
            return None
        return min(allw), max(allw)

    def d(self, n: int) -> np.ndarray:
        m = self._d.get(n)
        if m is None:
            return self.field.zeros(self.rank(n + 1), self.rank(n))
        return m

    def nonzero_diffs(self) -> dict[int, np.ndarray]:
        return dict(self._d)

    def weight_multiset(self, n: int) -> tuple[int, ...]:
        return tuple(sorted(self.weights(n)))

    # --- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, FilteredComplex):
            return NotImplemented
        if self.field != other.field or self._w != other._w:
            return False
        if set(self._d) != set(other._d):
            return False
        return all(np.array_equal(self._d[n], other._d[n]) for n in self._d)

    def __hash__(self):
        return hash((self.field, tuple(sorted(self._w.items()))))

    def __repr__(self):
        prof = ", ".join("%d:%s" % (n, list(self._w[n])) for n in self.degrees)
        return "FilteredComplex(%s, {%s})" % (self.field, prof)

    # --- invariants ---------------------------------------------------------

    def validate(self) -> ValidationReport:
        rep = ValidationReport()
        for n, ws in self._w.items():
            for x in ws:
                if not isinstance(x, int):
                    rep.add("degree %d: non-integer weight %r" % (n, x))
        for n, m in self._d.items():
            wr, wc = self.weights(n + 1), self.weights(n)
            for (i, j), x in np.ndenumerate(m):
                if x != 0 and wr[i] > wc[j]:
                    rep.add("d_%d entry (%d, %d) raises weight %d -> %d" % (n, i, j, wc[j], wr[i]))
        for n in self._d:
            if n + 1 in self._d:
                sq = matmul(self._d[n + 1], self._d[n], self.field.zero)
                for (i, j), x in np.ndenumerate(sq):
                    if x != 0:
                        rep.add("d_%d d_%d nonzero at (%d, %d)" % (n + 1, n, i, j))
        return rep

    def is_valid(self) -> bool:
        return self.validate().ok

    def with_window_cache(self, key, fn):
        """Memoize a pure derived quantity on this (immutable) complex."""
        try:
            return self._cache[key]
        except KeyError:
            val = self._cache[key] = fn()
            return val



class FilteredMorphism:
    """Degree-0 filtration-preserving chain map given by one matrix per degree."""

    def __init__(self, source: FilteredComplex, target: FilteredComplex,
                 maps: Mapping[int, np.ndarray] | None = None, check: bool = False):
        if source.field != target.field:
            raise ValueError("source and target live over different fields")
        self.source = source
        self.target = target
        self.field = source.field
        self._f: dict[int, np.ndarray] = {}
        for n, m in (maps or {}).items():
            n = int(n)
            rows, cols = target.rank(n), source.rank(n)
            m = np.array(m, dtype=object)
            if rows * cols == 0:
                continue
            if m.shape != (rows, cols):
                raise ValueError("f_%d has shape %r, expected %r" % (n, m.shape, (rows, cols)))
            if not is_zero(m):
                self._f[n] = _freeze(m)
        if check:
            self.validate().raise_if_invalid()

    def __getitem__(self, n: int) -> np.ndarray:
        m = self._f.get(n)
        if m is None:
            return self.field.zeros(self.target.rank(n), self.source.rank(n))
        return m

    def component(self, n: int) -> np.ndarray:
        return self[n]

    @property
    def degrees(self) -> list[int]:
        return sorted(set(self.source.degrees) | set(self.target.degrees))

    def nonzero_maps(self) -> dict[int, np.ndarray]:
        return dict(self._f)

    def __eq__(self, other):
        if not isinstance(other, FilteredMorphism):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        if set(self._f) != set(other._f):
            return False
        return all(np.array_equal(self._f[n], other._f[n]) for n in self._f)

    def __hash__(self):
        return hash((self.source, self.target))

    def __repr__(self):
        return "FilteredMorphism(%r -> %r)" % (self.source, self.target)

    def __matmul__(self, other: "FilteredMorphism") -> "FilteredMorphism":
        """Composite ``self o other``."""
        if other.target != self.source:
            raise ValueError("composite of non-composable morphisms")
        z = self.field.zero
        maps = {n: matmul(self[n], other[n], z) for n in set(self._f) & set(other._f)}
        return FilteredMorphism(other.source, self.target, maps)

    def __add__(self, other: "FilteredMorphism") -> "FilteredMorphism":
        if self.source != other.source or self.target != other.target:
            raise ValueError("sum of morphisms with different endpoints")
        return FilteredMorphism(self.source, self.target,
                                {n: self[n] + other[n] for n in set(self._f) | set(other._f)})

    def __neg__(self):
        return FilteredMorphism(self.source, self.target, {n: -m for n, m in self._f.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "FilteredMorphism":
        c = self.field(c)
        return FilteredMorphism(self.source, self.target, {n: m * c for n, m in self._f.items()})

    def is_zero(self) -> bool:
        return not self._f

    def validate(self) -> ValidationReport:
        rep = ValidationReport()
        A, B = self.source, self.target
        for n, m in self._f.items():
            wr, wc = B.weights(n), A.weights(n)
            for (i, j), x in np.ndenumerate(m):
                if x != 0 and wr[i] > wc[j]:
                    rep.add("f_%d entry (%d, %d) raises weight %d -> %d" % (n, i, j, wc[j], wr[i]))
        z = self.field.zero
        for n in sorted(set(A.degrees) | set(B.degrees)):
            lhs = matmul(B.d(n), self[n], z)
            rhs = matmul(self[n + 1], A.d(n), z)
            bad = [(i, j) for (i, j), x in np.ndenumerate(lhs - rhs) if x != 0] if lhs.size else []
            if bad:
                rep.add("chain map law fails in degree %d at %s" % (n, bad[:4]))
        return rep

    def is_valid(self) -> bool:
        return self.validate().ok


def validate(A: FilteredComplex) -> ValidationReport:
    return A.validate()


def validate_morphism(f: FilteredMorphism) -> ValidationReport:
    return f.validate()


# --- basic morphisms -------------------------------------------------------

def identity(A: FilteredComplex) -> FilteredMorphism:
    return FilteredMorphism(A, A, {n: A.field.eye(A.rank(n)) for n in A.degrees})


def zero_morphism(A: FilteredComplex, B: FilteredComplex) -> FilteredMorphism:
    return FilteredMorphism(A, B, {})


def zero_complex(field: Field = Q) -> FilteredComplex:
    return FilteredComplex(field, {})


# --- atoms -----------------------------------------------------------------

def sphere(field: Field, p: int, n: int) -> FilteredComplex:
    """R_(p)^n: one generator of weight p in degree n."""
    return FilteredComplex(field, {n: (p,)})


def cycle_rep(field: Field, r: int, p: int, n: int) -> FilteredComplex:
    """Z_r(p,n): x in degree n of weight p with dx = y of weight p - r."""
    if r < 0:
        raise ValueError("r must be >= 0")
    return FilteredComplex(field, {n: (p,), n + 1: (p - r,)},
                           {n: field.matrix([[1]])})


def boundary_rep(field: Field, r: int, p: int, n: int) -> FilteredComplex:
    """B_r(p,n) = Z_{r-1}(p+r-1, n-1) + Z_{r-1}(p-1, n) glued as one complex.

    Degree n-1: weight p+r-1; degree n: weights (p, p-1); degree n+1: weight p-r.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    return FilteredComplex(
        field,
        {n - 1: (p + r - 1,), n: (p, p - 1), n + 1: (p - r,)},
        {n - 1: field.matrix([[1], [0]]), n: field.matrix([[0, 1]])},
    )


def phi(field: Field, r: int, p: int, n: int) -> FilteredMorphism:
    """phi_r: Z_r(p,n) -> B_r(p,n), diagonal in degree n and identity in degree n+1."""
    src = cycle_rep(field, r, p, n)
    tgt = boundary_rep(field, r, p, n)
    return FilteredMorphism(src, tgt, {n: field.matrix([[1], [1]]), n + 1: field.matrix([[1]])})


# --- suspensions -----------------------------------------------------------

def suspend(A: FilteredComplex, r: int, direction: str = "sigma") -> FilteredComplex:
    """Sigma^r (degree n = A^{n+1}, weights + r, d negated) or its inverse Omega^r."""
    if direction in ("sigma", "S", "Σ"):
        dn, dw = -1, r
    elif direction in ("omega", "O", "Ω"):
        dn, dw = 1, -r
    else:
        raise ValueError("direction must be 'sigma' or 'omega'")
    weights = {n + dn: tuple(w + dw for w in ws) for n, ws in A._w.items()}
    diffs = {n + dn: -m for n, m in A._d.items()}
    return FilteredComplex(A.field, weights, diffs)


def suspend_morphism(f: FilteredMorphism, r: int, direction: str = "sigma") -> FilteredMorphism:
    dn = -1 if direction in ("sigma", "S", "Σ") else 1
    return FilteredMorphism(suspend(f.source, r, direction), suspend(f.target, r, direction),
                            {n + dn: m for n, m in f._f.items()})


# --- sums, cones, twists ------------------------------------------------------

def _block(rows: list[list[np.ndarray]], field: Field) -> np.ndarray:
    nr = [blk[0].shape[0] for blk in rows]
    nc = [b.shape[1] for b in rows[0]]
    out = field.zeros(sum(nr), sum(nc))
    r0 = 0
    for i, row in enumerate(rows):
        c0 = 0
        for j, b in enumerate(row):
            if b.size:
                out[r0:r0 + nr[i], c0:c0 + nc[j]] = b
            c0 += nc[j]
        r0 += nr[i]
    return out


class DirectSum(NamedTuple):
    obj: FilteredComplex
    inj: tuple[FilteredMorphism, ...]
    proj: tuple[FilteredMorphism, ...]


def direct_sum(*parts: FilteredComplex) -> DirectSum:
    """Direct sum with summands in order (left summand first in every degree)."""
    if not parts:
        raise ValueError("direct_sum needs at least one summand")
    F = parts[0].field
    degs = sorted(set().union(*[set(P.degrees) for P in parts]))
    weights = {n: sum((P.weights(n) for P in parts), ()) for n in degs}
    diffs = {}
    for n in degs:
        if any(n in P._d for P in parts):
            diffs[n] = _blockdiag([P.d(n) for P in parts], F)
    S = FilteredComplex(F, weights, diffs)
    inj, proj = [], []
    for k, P in enumerate(parts):
        im, pm = {}, {}
        for n in P.degrees:
            off = sum(Q_.rank(n) for Q_ in parts[:k])
            e = F.zeros(S.rank(n), P.rank(n))
            for i in range(P.rank(n)):
                e[off + i, i] = F.one
            im[n] = e
            pm[n] = e.T.copy()
        inj.append(FilteredMorphism(P, S, im))
        proj.append(FilteredMorphism(S, P, pm))
    return DirectSum(S, tuple(inj), tuple(proj))


def _blockdiag(blocks: list[np.ndarray], field: Field) -> np.ndarray:
    out = field.zeros(sum(b.shape[0] for b in blocks), sum(b.shape[1] for b in blocks))
    r0 = c0 = 0
    for b in blocks:
        if b.size:
            out[r0:r0 + b.shape[0], c0:c0 + b.shape[1]] = b
        r0 += b.shape[0]
        c0 += b.shape[1]
    return out


def direct_sum_morphisms(*fs: FilteredMorphism) -> FilteredMorphism:
    F = fs[0].field
    src = direct_sum(*[f.source for f in fs]).obj
    tgt = direct_sum(*[f.target for f in fs]).obj
    degs = set().union(*[set(f.degrees) for f in fs])
    return FilteredMorphism(src, tgt, {n: _blockdiag([f[n] for f in fs], F) for n in degs})


class Cone(NamedTuple):
    obj: FilteredComplex
    incl: FilteredMorphism   # B -> C_r(f)
    proj: FilteredMorphism   # C_r(f) -> Sigma^r A


def cone(f: FilteredMorphism, r: int) -> Cone:
    """r-cone of f: A -> B; degree n is Sigma^r A^n + B^n, d(a, b) = (-da, fa + db)."""
    A, B, F = f.source, f.target, f.field
    SA = suspend(A, r)
    degs = sorted(set(SA.degrees) | set(B.degrees))
    weights = {n: SA.weights(n) + B.weights(n) for n in degs}
    diffs = {}
    for n in degs:
        diffs[n] = _block([[SA.d(n), F.zeros(SA.rank(n + 1), B.rank(n))],
                           [f[n + 1], B.d(n)]], F)
    C = FilteredComplex(F, weights, diffs)
    incl, proj = {}, {}
    for n in degs:
        a, b = SA.rank(n), B.rank(n)
        incl[n] = _block([[F.zeros(a, b)], [F.eye(b)]], F)
        proj[n] = _block([[F.eye(a), F.zeros(a, b)]], F)
    return Cone(C, FilteredMorphism(B, C, incl), FilteredMorphism(C, SA, proj))


def cone_object(A: FilteredComplex, r: int) -> FilteredComplex:
    """C_r(A) := C_r(id_A)."""
    return cone(identity(A), r).obj


class TwistedSum(NamedTuple):
    obj: FilteredComplex
    incl: FilteredMorphism   # A -> A (+)_tau C
    proj: FilteredMorphism   # A (+)_tau C -> C


def check_twist(A: FilteredComplex, C: FilteredComplex, tau: Mapping[int, np.ndarray]):
    F = A.field
    for n, t in tau.items():
        wr, wc = A.weights(n + 1), C.weights(n)
        for (i, j), x in np.ndenumerate(t):
            if x != 0 and wr[i] > wc[j]:
                raise TwistBreaksFiltration(
                    "tau_%d entry (%d, %d) raises weight %d -> %d" % (n, i, j, wc[j], wr[i]))
    z = F.zero
    degs = set(A.degrees) | set(C.degrees) | {n - 1 for n in A.degrees}
    for n in degs:
        t_n = tau.get(n, F.zeros(A.rank(n + 1), C.rank(n)))
        t_n1 = tau.get(n + 1, F.zeros(A.rank(n + 2), C.rank(n + 1)))
        s = matmul(A.d(n + 1), t_n, z) + matmul(t_n1, C.d(n), z)
        if s.size and not is_zero(s):
            raise TwistNotAnticommuting("d tau + tau d is nonzero in degree %d" % n)


def twisted_sum(A: FilteredComplex, C: FilteredComplex,
                tau: Mapping[int, np.ndarray]) -> TwistedSum:
    """A (+)_tau C with d = [[d^A, tau], [0, d^C]] and tau_n: C^n -> A^{n+1}."""
    F = A.field
    tau = {int(n): np.asarray(t, dtype=object) for n, t in tau.items()}
    for n, t in tau.items():
        if t.shape != (A.rank(n + 1), C.rank(n)):
            raise ValueError("tau_%d has shape %r, expected %r"
                             % (n, t.shape, (A.rank(n + 1), C.rank(n))))
    check_twist(A, C, tau)
    degs = sorted(set(A.degrees) | set(C.degrees))
    weights = {n: A.weights(n) + C.weights(n) for n in degs}
    diffs = {}
    for n in degs:
        t = tau.get(n, F.zeros(A.rank(n + 1), C.rank(n)))
        diffs[n] = _block([[A.d(n), t], [F.zeros(C.rank(n + 1), A.rank(n)), C.d(n)]], F)
    T = FilteredComplex(F, weights, diffs)
    incl, proj = {}, {}
    for n in degs:
        a, c = A.rank(n), C.rank(n)
        incl[n] = _block([[F.eye(a)], [F.zeros(c, a)]], F)
        proj[n] = _block([[F.zeros(c, a), F.eye(c)]], F)
    return TwistedSum(T, FilteredMorphism(A, T, incl), FilteredMorphism(T, C, proj))


# --- the truncated staircase ---------------------------------------------------

class Staircase(NamedTuple):
    obj: FilteredComplex
    pi: FilteredMorphism
    r: int
    N: int

    @property
    def safe_min_p(self) -> int:
        """Smallest filtration degree at which the truncation is invisible."""
        return -self.N + self.r + 2


def staircase(field: Field, r: int, N: int) -> Staircase:
    """Truncated staircase Q with N+1 generators in degree 0 and N in degree 1.

    Degree 0 has weights 0, -1, ..., -N and degree 1 has weights -r-1, ..., -r-N.
    The weight-0 generator maps to the first degree-1 generator; the generator of
    weight -i (1 <= i < N) maps to the sum of the generators of weights -i-r and
    -i-r-1; the last one maps only to weight -N-r.
    """
    if N < 1:
        raise ValueError("truncation depth N must be >= 1")
    if r < 0:
        raise ValueError("r must be >= 0")
    d = field.zeros(N, N + 1)
    d[0, 0] = field.one
    for i in range(1, N + 1):
        d[i - 1, i] = field.one
        if i < N:
            d[i, i] = field.one
    Qc = FilteredComplex(field, {0: tuple(-i for i in range(N + 1)),
                                 1: tuple(-r - j for j in range(1, N + 1))}, {0: d})
    unit = sphere(field, 0, 0)
    p = field.zeros(1, N + 1)
    p[0, 0] = field.one
    return Staircase(Qc, FilteredMorphism(Qc, unit, {0: p}), r, N)


# --- re-basing ----------------------------------------------------------------

def rebase(A: FilteredComplex, bases: Mapping[int, np.ndarray],
           weights: Mapping[int, Sequence[int]]) -> tuple[FilteredComplex, FilteredMorphism]:
    """Same complex in a new basis P_n (columns) with given weights.

    Returns the new complex and the comparison map (new basis -> old basis).
    The differential becomes P_{n+1}^{-1} d_n P_n.
    """
    from .linalg import inverse

    F = A.field
    inv = {}
    for n, P in bases.items():
        inv[n] = P if _is_identity(P) else inverse(P)
        if inv[n] is None:
            raise ValueError("basis change in degree %d is singular" % n)
    diffs = {}
    z = F.zero
    for n in A._d:
        P = bases[n]
        Pi = inv[n + 1]
        dn = A.d(n)
        if not _is_identity(P):
            dn = matmul(dn, P, z)
        if not _is_identity(bases[n + 1]):
            dn = matmul(Pi, dn, z)
        diffs[n] = dn
    B = FilteredComplex(F, weights, diffs)
    return B, FilteredMorphism(B, A, dict(bases))


def _is_identity(P: np.ndarray) -> bool:
    if P.shape[0] != P.shape[1]:
        return False
    for (i, j), x in np.ndenumerate(P):
        if x != (1 if i == j else 0):
            return False
    return True
