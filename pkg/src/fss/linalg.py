"""Exact linear algebra over Q and prime fields.

Matrices are numpy object arrays holding exact scalars (``gmpy2.mpq`` for the
rationals, :class:`ModP` for prime fields).  Every routine is a pure function of
its inputs; row reduction always picks the first nonzero entry of a column as
the pivot, so results are reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from gmpy2 import mpq


class FlagNotIncreasing(ValueError):
    pass


class ModP:
    """Element of the prime field GF(p), stored as its canonical representative."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = int(v) % p
        self.p = p

    def _lift(self, other):
        if isinstance(other, ModP):
            return other.v
        return int(other) % self.p

    def __add__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        return ModP(self.v + self._lift(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        return ModP(self.v - self._lift(other), self.p)

    def __rsub__(self, other):
        return ModP(self._lift(other) - self.v, self.p)

    def __mul__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        return ModP(self.v * self._lift(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __pos__(self):
        return self

    def inverse(self) -> "ModP":
        if self.v == 0:
            raise ZeroDivisionError("inverse of 0 in GF(%d)" % self.p)
        return ModP(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = other if isinstance(other, ModP) else ModP(other, self.p)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return ModP(other, self.p) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, ModP):
            return self.v == other.v and self.p == other.p
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return "ModP(%d, %d)" % (self.v, self.p)

    def __str__(self):
        return str(self.v)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Field:
    """Coefficient field: ``Field("Q")`` or ``Field("GF", p)``."""

    kind: str = "Q"
    characteristic: int | None = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.characteristic is not None:
                raise ValueError("the rationals carry no characteristic")
        elif self.kind == "GF":
            if self.characteristic is None or not _is_prime(self.characteristic):
                raise ValueError("prime field needs a prime characteristic, got %r"
                                 % (self.characteristic,))
        else:
            raise ValueError("unknown field kind %r" % (self.kind,))

    @classmethod
    def rationals(cls) -> "Field":
        return cls("Q")

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls("GF", p)

    def __call__(self, x):
        if self.kind == "Q":
            if isinstance(x, ModP):
                raise TypeError("cannot coerce a GF(p) element into Q")
            return mpq(x)
        if isinstance(x, ModP):
            if x.p != self.characteristic:
                raise TypeError("characteristic mismatch")
            return x
        if isinstance(x, int):
            return ModP(x, self.characteristic)
        q = mpq(x)
        return ModP(int(q.numerator), self.characteristic) / ModP(int(q.denominator), self.characteristic)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __str__(self):
        return "Q" if self.kind == "Q" else "GF(%d)" % self.characteristic

    # text format

    def parse(self, s) -> object:
        if isinstance(s, int):
            return self(s)
        s = str(s).strip()
        if self.kind == "Q":
            return mpq(s)
        v = int(s)
        if not 0 <= v < self.characteristic:
            raise ValueError("GF(%d) element %r is not a canonical representative"
                             % (self.characteristic, s))
        return ModP(v, self.characteristic)

    def format(self, x) -> str:
        return str(self(x))

    def to_json(self) -> dict:
        if self.kind == "Q":
            return {"kind": "rationals"}
        return {"kind": "prime", "characteristic": self.characteristic}

    @classmethod
    def from_json(cls, data: dict) -> "Field":
        kind = data.get("kind")
        if kind in ("rationals", "Q"):
            return cls("Q")
        if kind in ("prime", "GF"):
            return cls("GF", int(data["characteristic"]))
        raise ValueError("unknown field description %r" % (data,))

    # matrices

    def matrix(self, rows, shape: tuple[int, int] | None = None) -> np.ndarray:
        """Object-array matrix with every entry coerced into this field."""
        if isinstance(rows, np.ndarray):
            arr = rows
        else:
            rows = list(rows)
            if shape is not None and not rows:
                return self.zeros(*shape)
            arr = np.array(rows, dtype=object)
        if arr.ndim == 1 and shape is not None:
            arr = arr.reshape(shape)
        if shape is not None and arr.shape != shape:
            raise ValueError("expected shape %r, got %r" % (shape, arr.shape))
        out = np.empty(arr.shape, dtype=object)
        for idx, x in np.ndenumerate(arr):
            out[idx] = self(x)
        return out

    def vector(self, xs) -> np.ndarray:
        xs = list(xs)
        out = np.empty(len(xs), dtype=object)
        for i, x in enumerate(xs):
            out[i] = self(x)
        return out

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        out = np.empty((rows, cols), dtype=object)
        out.fill(self.zero)
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = self.one
        return out

    def random_element(self, rng: random.Random, bound: int = 3):
        return self(rng.randint(-bound, bound))

    def random_nonzero(self, rng: random.Random, bound: int = 3):
        while True:
            x = self.random_element(rng, bound)
            if x != 0:
                return x


Q = Field.rationals()


def GF(p: int) -> Field:
    return Field.prime(p)


def field_of(m: np.ndarray) -> Field | None:
    """Best-effort recovery of the field from matrix entries."""
    for x in m.flat:
        if isinstance(x, ModP):
            return Field.prime(x.p)
    return None


# --- row reduction -------------------------------------------------------

def _rref_rows(rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form of ``rows`` (mutated copy) and pivot columns."""
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = 1 / prow[c]
        if inv != 1:
            prow = rows[r] = [x * inv for x in prow]
        for i in range(nrows):
            if i != r:
                row = rows[i]
                f = row[c]
                if f != 0:
                    rows[i] = [a - f * b for a, b in zip(row, prow)]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rref(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Nonzero rows of the reduced row echelon form, and pivot columns."""
    rows, piv = _rref_rows(m.tolist(), m.shape[1])
    out = np.empty((len(rows), m.shape[1]), dtype=object)
    for i, row in enumerate(rows):
        out[i, :] = row
    return out, piv


def rank(m: np.ndarray) -> int:
    if m.size == 0:
        return 0
    return len(_rref_rows(m.tolist(), m.shape[1])[1])


def _zero_like(m: np.ndarray, field: Field | None):
    if field is not None:
        return field.zero
    for x in m.flat:
        return x * 0
    return mpq(0)


def kernel(m: np.ndarray, field: Field | None = None) -> "Subspace":
    """Basis of {v : m v = 0}, one vector per free column of the rref."""
    nrows, ncols = m.shape
    zero = _zero_like(m, field)
    one = zero + 1
    if nrows == 0 or m.size == 0:
        basis = np.empty((ncols, ncols), dtype=object)
        basis.fill(zero)
        for i in range(ncols):
            basis[i, i] = one
        return Subspace(ncols, basis, _trusted=True)
    rows, piv = _rref_rows(m.tolist(), ncols)
    pivset = set(piv)
    free = [c for c in range(ncols) if c not in pivset]
    basis = np.empty((ncols, len(free)), dtype=object)
    basis.fill(zero)
    for k, f in enumerate(free):
        basis[f, k] = one
        for i, pc in enumerate(piv):
            x = rows[i][f]
            if x != 0:
                basis[pc, k] = -x
    return Subspace(ncols, basis, _trusted=True)


def column_pivots(m: np.ndarray) -> list[int]:
    if m.size == 0:
        return []
    return _rref_rows(m.tolist(), m.shape[1])[1]


def solve(m: np.ndarray, target: Sequence) -> np.ndarray | None:
    """Particular solution of m x = target (free variables set to 0), or None."""
    nrows, ncols = m.shape
    target = list(target)
    if len(target) != nrows:
        raise ValueError("target length %d != rows %d" % (len(target), nrows))
    zero = _zero_like(m, None) if m.size else (target[0] * 0 if target else mpq(0))
    if nrows == 0:
        x = np.empty(ncols, dtype=object)
        x.fill(zero)
        return x
    aug = [list(row) + [t] for row, t in zip(m.tolist(), target)]
    rows, piv = _rref_rows(aug, ncols + 1)
    if piv and piv[-1] == ncols:
        return None
    x = np.empty(ncols, dtype=object)
    x.fill(zero)
    for i, pc in enumerate(piv):
        x[pc] = rows[i][ncols]
    return x


def solve_many(m: np.ndarray, targets: np.ndarray) -> np.ndarray | None:
    """Solve m X = targets column by column in one elimination; None if any fails."""
    nrows, ncols = m.shape
    k = targets.shape[1]
    zero = _zero_like(m, None) if m.size else _zero_like(targets, None)
    if k == 0:
        out = np.empty((ncols, 0), dtype=object)
        return out
    if nrows == 0:
        out = np.empty((ncols, k), dtype=object)
        out.fill(zero)
        return out
    aug = [list(row) + list(t) for row, t in zip(m.tolist(), targets.tolist())]
    rows, piv = _rref_rows(aug, ncols + k)
    if any(pc >= ncols for pc in piv):
        return None
    out = np.empty((ncols, k), dtype=object)
    out.fill(zero)
    for i, pc in enumerate(piv):
        out[pc, :] = rows[i][ncols:]
    return out


def inverse(m: np.ndarray) -> np.ndarray | None:
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    if n == 0:
        return np.empty((0, 0), dtype=object)
    zero = _zero_like(m, None)
    ident = np.empty((n, n), dtype=object)
    ident.fill(zero)
    for i in range(n):
        ident[i, i] = zero + 1
    return solve_many(m, ident) if rank(m) == n else None


def matmul(a: np.ndarray, b: np.ndarray, zero=None) -> np.ndarray:
    """Product that keeps exact zeros even when an inner dimension is 0."""
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        out = np.empty((a.shape[0], b.shape[1]), dtype=object)
        out.fill(zero if zero is not None else mpq(0))
        return out
    return a.dot(b)


def hstack(blocks: Sequence[np.ndarray], rows: int) -> np.ndarray:
    blocks = [b for b in blocks if b.shape[1] > 0]
    if not blocks:
        return np.empty((rows, 0), dtype=object)
    return np.concatenate(blocks, axis=1)


def is_zero(m: np.ndarray) -> bool:
    return all(x == 0 for x in m.flat)


# --- subspaces -----------------------------------------------------------

class Subspace:
    """Subspace of an ambient coordinate space, held as independent basis columns."""

    __slots__ = ("ambient", "basis")

    def __init__(self, ambient: int, basis: np.ndarray | None = None, _trusted: bool = False):
        self.ambient = ambient
        if basis is None:
            basis = np.empty((ambient, 0), dtype=object)
        if basis.ndim != 2 or basis.shape[0] != ambient:
            raise ValueError("basis shape %r incompatible with ambient %d"
                             % (basis.shape, ambient))
        if not _trusted and basis.shape[1]:
            piv = column_pivots(basis)
            basis = basis[:, piv]
        self.basis = basis

    @classmethod
    def span(cls, ambient: int, vectors: np.ndarray) -> "Subspace":
        return cls(ambient, vectors)

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient)

    @classmethod
    def coordinate(cls, field: Field, ambient: int, idx: Iterable[int]) -> "Subspace":
        idx = list(idx)
        basis = field.zeros(ambient, len(idx))
        for k, i in enumerate(idx):
            basis[i, k] = field.one
        return cls(ambient, basis, _trusted=True)

    @classmethod
    def full(cls, field: Field, ambient: int) -> "Subspace":
        return cls.coordinate(field, ambient, range(ambient))

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def __repr__(self):
        return "Subspace(ambient=%d, dim=%d)" % (self.ambient, self.dim)

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=object).reshape(-1)
        if all(x == 0 for x in v):
            return True
        if self.dim == 0:
            return False
        return solve(self.basis, v) is not None

    def __le__(self, other: "Subspace") -> bool:
        if self.ambient != other.ambient:
            raise ValueError("ambient mismatch")
        if self.dim == 0:
            return True
        if self.dim > other.dim:
            return False
        return rank(hstack([other.basis, self.basis], self.ambient)) == other.dim

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.dim == other.dim and self <= other

    def __hash__(self):
        raise TypeError("Subspace is unhashable")

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient:
            raise ValueError("ambient mismatch")
        return Subspace(self.ambient, hstack([self.basis, other.basis], self.ambient))

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.dim == 0 or other.dim == 0:
            return Subspace(self.ambient)
        stacked = hstack([self.basis, -other.basis], self.ambient)
        k = kernel(stacked)
        vecs = self.basis.dot(k.basis[: self.dim, :]) if k.dim else k.basis[: self.ambient, :0]
        return Subspace(self.ambient, vecs)

    def image(self, m: np.ndarray) -> "Subspace":
        if self.dim == 0:
            return Subspace(m.shape[0])
        return Subspace(m.shape[0], matmul(m, self.basis))

    def coordinates(self, v) -> np.ndarray | None:
        return solve(self.basis, list(v))

    def canonical_rows(self) -> tuple[list[list], list[int]]:
        """Reduced echelon basis (as rows) — independent of the stored basis."""
        if self.dim == 0:
            return [], []
        return _rref_rows(self.basis.T.tolist(), self.ambient)


def preimage(m: np.ndarray, w: Subspace, field: Field | None = None) -> Subspace:
    """{v : m v in w}."""
    ncols = m.shape[1]
    if w.dim == w.ambient:
        return kernel(np.empty((0, ncols), dtype=object), field)
    # annihilator of w: rows y with y . w = 0
    ann = kernel(w.basis.T, field) if w.dim else kernel(np.empty((0, w.ambient), dtype=object), field)
    return kernel(matmul(ann.basis.T, m, _zero_like(m, field)), field)


def quotient_representatives(z: Subspace, b: Subspace) -> np.ndarray:
    """Columns of z's basis that are independent modulo b (assumes b <= z)."""
    stacked = hstack([b.basis, z.basis], z.ambient)
    if stacked.shape[1] == 0:
        return z.basis
    piv = column_pivots(stacked)
    picked = [c - b.dim for c in piv if c >= b.dim]
    return z.basis[:, picked]


def flag_quotient(ambient_dim: int, flag: Sequence[tuple[int, Subspace]],
                  field: Field | None = None) -> tuple[np.ndarray, list[int]]:
    """Basis adapted to an increasing flag, with minimal integer weights.

    ``flag`` lists (weight, subspace) pairs in increasing weight order; the last
    member must be the whole ambient space.  The returned basis (columns) is
    sorted by pivot coordinate, and the vectors of weight <= p span the flag
    member at p.  Coordinate flags come back as the standard basis.
    """
    flag = sorted(flag, key=lambda t: t[0])
    prev: Subspace | None = None
    for w, sub in flag:
        if sub.ambient != ambient_dim:
            raise ValueError("flag member at weight %d has ambient %d" % (w, sub.ambient))
        if prev is not None and not prev <= sub:
            raise FlagNotIncreasing("flag member at weight %d is not contained in the next" % w)
        prev = sub
    if ambient_dim and (prev is None or prev.dim != ambient_dim):
        raise FlagNotIncreasing("last flag member must be the whole ambient space")

    chosen: list[tuple[int, list, int]] = []  # (pivot, vector, weight)
    for w, sub in flag:
        rows, _ = sub.canonical_rows()
        for row in rows:
            v = list(row)
            chosen.sort(key=lambda t: t[0])
            for piv, vec, _w in chosen:
                f = v[piv]
                if f != 0:
                    pv = vec[piv]
                    v = [a - (f / pv) * b for a, b in zip(v, vec)]
            lead = next((i for i, x in enumerate(v) if x != 0), None)
            if lead is not None:
                chosen.append((lead, v, w))
        if len(chosen) == ambient_dim:
            break
    chosen.sort(key=lambda t: t[0])
    basis = np.empty((ambient_dim, len(chosen)), dtype=object)
    for k, (_, vec, _) in enumerate(chosen):
        basis[:, k] = vec
    if field is not None and basis.size:
        basis = field.matrix(basis)
    return basis, [w for _, _, w in chosen]


# --- sparse systems --------------------------------------------------------

class SparseSystem:
    """Homogeneous or affine linear system with rows given as {column: coefficient}.

    Rows are eliminated incrementally; pivot rows are kept sparse, which is what
    makes hom-space computations on tensor products tractable.
    """

    def __init__(self, ncols: int, field: Field):
        self.ncols = ncols
        self.field = field
        self._piv: dict[int, tuple[dict, object]] = {}   # col -> (row, rhs)
        self._order: list[int] = []
        self._idx: dict[int, int] = {}
        self.inconsistent = False

    def add(self, row: dict, rhs=None):
        z = self.field.zero
        r = {c: v for c, v in row.items() if v != 0}
        b = z if rhs is None else rhs
        while r:
            hit = None
            for c in r:
                k = self._idx.get(c)
                if k is not None and (hit is None or k < self._idx[hit]):
                    hit = c
            if hit is None:
                break
            prow, pb = self._piv[hit]
            f = r[hit]
            for c, v in prow.items():
                nv = r.get(c, z) - f * v
                if nv != 0:
                    r[c] = nv
                else:
                    r.pop(c, None)
            b = b - f * pb
        if not r:
            if b != 0:
                self.inconsistent = True
            return
        lead = min(r)
        inv = 1 / r[lead]
        if inv != 1:
            r = {c: v * inv for c, v in r.items()}
            b = b * inv
        self._piv[lead] = (r, b)
        self._idx[lead] = len(self._order)
        self._order.append(lead)

    @property
    def rank(self) -> int:
        return len(self._piv)

    def _back_substitute(self, x: dict) -> dict:
        for lead in reversed(self._order):
            row, b = self._piv[lead]
            s = b
            for c, v in row.items():
                if c != lead:
                    xv = x.get(c)
                    if xv is not None and xv != 0:
                        s = s - v * xv
            if s != 0:
                x[lead] = s
            else:
                x.pop(lead, None)
        return x

    def free_columns(self) -> list[int]:
        return [c for c in range(self.ncols) if c not in self._piv]

    def kernel_vectors(self) -> list[dict]:
        """Basis of the homogeneous solution space (right-hand sides ignored)."""
        saved = {k: (row, self.field.zero) for k, (row, _) in self._piv.items()}
        orig, self._piv = self._piv, saved
        try:
            out = []
            for f in self.free_columns():
                out.append(self._back_substitute({f: self.field.one}))
            return out
        finally:
            self._piv = orig

    def particular(self) -> dict | None:
        if self.inconsistent:
            return None
        return self._back_substitute({})


def dense_to_rows(m: np.ndarray) -> list[dict]:
    out = []
    for row in m.tolist():
        out.append({c: v for c, v in enumerate(row) if v != 0})
    return out
