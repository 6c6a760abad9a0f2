"""The spectral sequence of a filtered complex.

Bidegrees are stored as (p, n): filtration degree p, cohomological degree n.
Reports display them as (p, p+n).  For every r:

    Z_r^p(n) = F_p A^n  intersected with  d^{-1} F_{p-r} A^{n+1}
    B_0^p(n) = F_{p-1} A^n
    B_r^p(n) = d Z_{r-1}^{p+r-1}(n-1) + Z_{r-1}^{p-1}(n)      (r >= 1)
    E_r^p(n) = Z_r^p(n) / B_r^p(n),   d_r: E_r^p(n) -> E_r^{p-r}(n+1)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .fcomplex import FilteredComplex, FilteredMorphism, cone, rebase
from .linalg import (Subspace, flag_quotient, hstack, kernel, matmul, quotient_representatives,
                     rank, solve_many)
from .verdict import Verdict


@dataclass(frozen=True)
class Window:
    """Finite rectangle of bidegrees, inclusive on both ends."""

    pmin: int
    pmax: int
    nmin: int
    nmax: int

    def __iter__(self) -> Iterator[tuple[int, int]]:
        for n in range(self.nmin, self.nmax + 1):
            for p in range(self.pmin, self.pmax + 1):
                yield p, n

    def __contains__(self, pn) -> bool:
        p, n = pn
        return self.pmin <= p <= self.pmax and self.nmin <= n <= self.nmax

    def pad(self, dp: int, dn: int) -> "Window":
        return Window(self.pmin - dp, self.pmax + dp, self.nmin - dn, self.nmax + dn)

    def restrict_p(self, pmin: int) -> "Window":
        return Window(max(self.pmin, pmin), self.pmax, self.nmin, self.nmax)

    def to_json(self) -> dict:
        return {"p": [self.pmin, self.pmax], "n": [self.nmin, self.nmax]}

    def __str__(self):
        return "p=%d..%d,n=%d..%d" % (self.pmin, self.pmax, self.nmin, self.nmax)

    @classmethod
    def parse(cls, text: str) -> "Window":
        """Parse ``p=a..b,n=c..d``."""
        try:
            parts = dict(item.split("=", 1) for item in text.replace(" ", "").split(","))
            pa, pb = (int(x) for x in parts["p"].split(".."))
            na, nb = (int(x) for x in parts["n"].split(".."))
        except (KeyError, ValueError) as exc:
            raise ValueError("window must look like p=a..b,n=c..d, got %r" % text) from exc
        if pa > pb or na > nb:
            raise ValueError("empty window %r" % text)
        return cls(pa, pb, na, nb)


def support_window(*complexes: FilteredComplex) -> Window | None:
    ws, ns = [], []
    for A in complexes:
        for n in A.degrees:
            ns.append(n)
            ws.extend(A.weights(n))
    if not ns:
        return None
    return Window(min(ws), max(ws), min(ns), max(ns))


def auto_window(*complexes: FilteredComplex, r: int = 0) -> Window:
    """Joint support padded by r+1 in p and by 1 in n.

    Outside this rectangle every page of every listed complex vanishes: below
    the smallest weight nothing is filtered in, and at p >= max weight + r the
    r-cycles and r-boundaries agree.
    """
    w = support_window(*complexes)
    if w is None:
        return Window(0, 0, 0, 0)
    return w.pad(r + 1, 1)


# --- cycles and boundaries ------------------------------------------------------

def _cols_upto(A: FilteredComplex, n: int, p: int) -> list[int]:
    return [j for j, w in enumerate(A.weights(n)) if w <= p]


def filtration_piece(A: FilteredComplex, p: int, n: int) -> Subspace:
    return Subspace.coordinate(A.field, A.rank(n), _cols_upto(A, n, p))


def r_cycles(A: FilteredComplex, r: int, p: int, n: int) -> Subspace:
    """Z_r^p(n): vectors of weight <= p whose differential has weight <= p - r."""
    if r < 0:
        raise ValueError("r must be >= 0")
    key = ("Z", r, p, n)

    def compute():
        cols = _cols_upto(A, n, p)
        dim = A.rank(n)
        if not cols:
            return Subspace(dim, A.field.zeros(dim, 0), _trusted=True)
        rows = [i for i, w in enumerate(A.weights(n + 1)) if w > p - r]
        d = A.d(n)
        if rows and n in A._d:
            sub = d[np.ix_(rows, cols)]
        else:
            sub = A.field.zeros(0, len(cols))
        k = kernel(sub, A.field)
        basis = A.field.zeros(dim, k.dim)
        if k.dim:
            basis[cols, :] = k.basis
        return Subspace(dim, basis, _trusted=True)

    return A.with_window_cache(key, compute)


def r_boundaries(A: FilteredComplex, r: int, p: int, n: int) -> Subspace:
    """B_r^p(n); the image term d Z_{r-1}^{p+r-1}(n-1) lands in degree n."""
    if r < 0:
        raise ValueError("r must be >= 0")
    key = ("B", r, p, n)

    def compute():
        if r == 0:
            return filtration_piece(A, p - 1, n)
        z_prev = r_cycles(A, r - 1, p + r - 1, n - 1)
        low = r_cycles(A, r - 1, p - 1, n)
        if z_prev.dim and (n - 1) in A._d:
            img = matmul(A.d(n - 1), z_prev.basis, A.field.zero)
            return Subspace(A.rank(n), hstack([low.basis, img], A.rank(n)))
        return low

    return A.with_window_cache(key, compute)


# --- pages ------------------------------------------------------------------------

class PageEntry:
    """E_r^p(n) with chosen representatives in A^n."""

    __slots__ = ("p", "n", "Z", "B", "reps", "_solver")

    def __init__(self, p, n, Z: Subspace, B: Subspace, reps: np.ndarray):
        self.p, self.n, self.Z, self.B, self.reps = p, n, Z, B, reps
        self._solver = None

    @property
    def dim(self) -> int:
        return self.reps.shape[1]

    def classes(self, vectors: np.ndarray) -> np.ndarray:
        """Coordinates of Z_r vectors (columns) modulo B_r in the chosen representatives.

        Raises ValueError if some vector is not an r-cycle here.
        """
        k = vectors.shape[1]
        if k == 0:
            return np.empty((self.dim, 0), dtype=object)
        M = hstack([self.reps, self.B.basis], self.Z.ambient)
        if M.shape[1] == 0:
            if any(x != 0 for x in vectors.flat):
                raise ValueError("vector outside Z_r at (%d, %d)" % (self.p, self.n))
            return np.empty((0, k), dtype=object)
        sol = solve_many(M, vectors)
        if sol is None:
            raise ValueError("vector outside Z_r at (%d, %d)" % (self.p, self.n))
        return sol[: self.dim, :]


def page_entry(A: FilteredComplex, r: int, p: int, n: int) -> PageEntry:
    def compute():
        Z = r_cycles(A, r, p, n)
        if Z.dim == 0:
            return PageEntry(p, n, Z, Z, Z.basis)
        B = r_boundaries(A, r, p, n)
        return PageEntry(p, n, Z, B, quotient_representatives(Z, B))

    return A.with_window_cache(("E", r, p, n), compute)


def page_differential(A: FilteredComplex, r: int, p: int, n: int) -> np.ndarray:
    """Matrix of d_r: E_r^p(n) -> E_r^{p-r}(n+1) in the chosen representatives."""
    def compute():
        src = page_entry(A, r, p, n)
        tgt = page_entry(A, r, p - r, n + 1)
        F = A.field
        if src.dim == 0 or tgt.dim == 0:
            return F.zeros(tgt.dim, src.dim)
        img = matmul(A.d(n), src.reps, F.zero)
        return F.matrix(tgt.classes(img))

    return A.with_window_cache(("dE", r, p, n), compute)


@dataclass
class SpectralPage:
    complex: FilteredComplex
    r: int
    window: Window

    def entry(self, p: int, n: int) -> PageEntry:
        return page_entry(self.complex, self.r, p, n)

    def dim(self, p: int, n: int) -> int:
        return self.entry(p, n).dim

    def d(self, p: int, n: int) -> np.ndarray:
        return page_differential(self.complex, self.r, p, n)

    def d_rank(self, p: int, n: int) -> int:
        m = self.d(p, n)
        return rank(m) if m.size else 0

    def dims(self) -> dict[tuple[int, int], int]:
        return {(p, n): self.dim(p, n) for p, n in self.window}

    def nonzero(self) -> dict[tuple[int, int], int]:
        return {k: v for k, v in self.dims().items() if v}

    def is_zero(self) -> bool:
        return not self.nonzero()

    def to_json(self) -> dict:
        entries = []
        for p, n in self.window:
            entries.append({"p": p, "n": n, "dim": self.dim(p, n), "d_r_rank": self.d_rank(p, n)})
        return {"r": self.r, "window": self.window.to_json(), "entries": entries}

    def render(self) -> str:
        """Text grid: rows are cohomological degrees n (top = largest), columns are p."""
        w = self.window
        ps = list(range(w.pmin, w.pmax + 1))
        width = max(3, max(len(str(p)) for p in ps) + 1)
        lines = ["E_%d  (rows n, columns p; '.' = 0)" % self.r]
        lines.append("n\\p".rjust(5) + "".join(str(p).rjust(width) for p in ps))
        for n in range(w.nmax, w.nmin - 1, -1):
            cells = []
            for p in ps:
                k = self.dim(p, n)
                cells.append(("." if k == 0 else str(k)).rjust(width))
            lines.append(str(n).rjust(5) + "".join(cells))
        return "\n".join(lines)


def page(A: FilteredComplex, r: int, window: Window | None = None) -> SpectralPage:
    if window is None:
        window = auto_window(A, r=r)
    return SpectralPage(A, r, window)


def homology_dim(A: FilteredComplex, r: int, p: int, n: int) -> int:
    """dim H of (E_r, d_r) at (p, n), from the page-r data only."""
    dim = page_entry(A, r, p, n).dim
    out = page_differential(A, r, p, n)
    inc = page_differential(A, r, p + r, n - 1)
    rk_out = rank(out) if out.size else 0
    rk_in = rank(inc) if inc.size else 0
    return dim - rk_out - rk_in


# --- induced maps -----------------------------------------------------------------

@dataclass
class PageMap:
    f: FilteredMorphism
    r: int
    window: Window

    def matrix(self, p: int, n: int) -> np.ndarray:
        return induced_entry_map(self.f, self.r, p, n)

    def failures(self) -> list[dict]:
        """Bidegrees where the map is not an isomorphism."""
        bad = []
        for p, n in self.window:
            m = self.matrix(p, n)
            rows, cols = m.shape
            rk = rank(m) if m.size else 0
            if not (rows == cols == rk):
                bad.append({"p": p, "n": n, "source_dim": cols, "target_dim": rows, "rank": rk})
        return bad

    def surjectivity_failures(self) -> list[dict]:
        bad = []
        for p, n in self.window:
            m = self.matrix(p, n)
            rows, cols = m.shape
            rk = rank(m) if m.size else 0
            if rk != rows:
                bad.append({"p": p, "n": n, "target_dim": rows, "rank": rk})
        return bad


def induced_entry_map(f: FilteredMorphism, r: int, p: int, n: int) -> np.ndarray:
    src = page_entry(f.source, r, p, n)
    tgt = page_entry(f.target, r, p, n)
    F = f.field
    if src.dim == 0 or tgt.dim == 0:
        return F.zeros(tgt.dim, src.dim)
    img = matmul(f[n], src.reps, F.zero)
    try:
        return F.matrix(tgt.classes(img))
    except ValueError as exc:
        raise ValueError("morphism does not carry Z_%d into Z_%d at (%d, %d); is it filtered?"
                         % (r, r, p, n)) from exc


def induced_page_map(f: FilteredMorphism, r: int, window: Window | None = None) -> PageMap:
    if window is None:
        window = auto_window(f.source, f.target, r=r)
    return PageMap(f, r, window)


# --- predicates -------------------------------------------------------------------

def _disp(p, n):
    return {"p": p, "n": n, "display": [p, p + n]}


def is_r_quasi_iso(f: FilteredMorphism, r: int, window: Window | None = None) -> Verdict:
    """f induces an isomorphism on every (r+1)-page entry in the window."""
    if window is None:
        window = auto_window(f.source, f.target, r=r + 1)
    fails = induced_page_map(f, r + 1, window).failures()
    for x in fails:
        x["display"] = [x["p"], x["p"] + x["n"]]
    return Verdict("r-quasi-iso", not fails, fails, detail={"r": r, "window": window.to_json()})


def is_r_acyclic(A: FilteredComplex, r: int, window: Window | None = None) -> Verdict:
    """The (r+1)-page of A vanishes on the window."""
    if window is None:
        window = auto_window(A, r=r + 1)
    pg = page(A, r + 1, window)
    wit = [dict(_disp(p, n), dim=k) for (p, n), k in pg.nonzero().items()]
    return Verdict("r-acyclic", not wit, wit, detail={"r": r, "window": window.to_json()})


def cone_criterion_cross_check(f: FilteredMorphism, r: int, window: Window | None = None):
    """(is_r_quasi_iso(f), is_r_acyclic(C_r(f))) on a window covering both."""
    C = cone(f, r).obj
    if window is None:
        window = auto_window(f.source, f.target, C, r=r + 1)
    a = is_r_quasi_iso(f, r, window)
    b = is_r_acyclic(C, r, window)
    if bool(a) != bool(b):
        raise AssertionError("cone criterion violated for r=%d: weq=%s, cone acyclic=%s"
                             % (r, bool(a), bool(b)))
    return a, b


# --- shift and decalage ---------------------------------------------------------

def shift(A: FilteredComplex, r: int) -> FilteredComplex:
    """S^r: a degree-n vector of weight w gets weight w - r n.

    Pages move by E_{k+r}^{p - r n}(S^r A)^n = E_k^p(A)^n.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    weights = {n: tuple(w - r * n for w in A.weights(n)) for n in A.degrees}
    return FilteredComplex(A.field, weights, A.nonzero_diffs())


def shift_morphism(f: FilteredMorphism, r: int) -> FilteredMorphism:
    return FilteredMorphism(shift(f.source, r), shift(f.target, r), f.nonzero_maps())


class FlagNotExhaustive(RuntimeError):
    pass


def decalage_flag(A: FilteredComplex, r: int, n: int) -> list[tuple[int, Subspace]]:
    """(p, Z_r^{p - r n}(n)) for every p at which the flag changes."""
    ws = A.weights(n)
    if not ws:
        return []
    lo = min(ws)
    hi = max(ws)
    up = A.weights(n + 1)
    if up:
        hi = max(hi, max(up) + r)
    flag = [(q + r * n, r_cycles(A, r, q, n)) for q in range(lo, hi + 1)]
    if flag[-1][1].dim != A.rank(n):
        raise FlagNotExhaustive("degree %d: top decalage stage is not the whole space" % n)
    return flag


def decalage_with_basis(A: FilteredComplex, r: int) -> tuple[FilteredComplex, FilteredMorphism]:
    """Dec^r A re-based, together with the comparison map (new basis -> old basis)."""
    if r < 0:
        raise ValueError("r must be >= 0")
    bases, weights = {}, {}
    for n in A.degrees:
        P, ws = flag_quotient(A.rank(n), decalage_flag(A, r, n), A.field)
        bases[n], weights[n] = P, ws
    return rebase(A, bases, weights)


def decalage(A: FilteredComplex, r: int) -> FilteredComplex:
    """Dec^r: F_p(Dec A)^n = Z_r^{p - r n}(n); same underlying complex."""
    return decalage_with_basis(A, r)[0]


def page_dims(A: FilteredComplex, r: int, window: Window) -> dict[tuple[int, int], int]:
    return page(A, r, window).nonzero()


def dims_multiset(pairs: Iterable[int]) -> list[int]:
    return sorted(pairs)
