"""The bundled verification suite: twelve desk-scale checks of the theory.

Each ``criterion_*`` function is deterministic for a given seed and returns a
``CriterionResult``; ``run_suite`` runs a selection and ``render_table`` prints
them one line each.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dc_field
from typing import Callable

from .fcomplex import boundary_rep, cycle_rep, direct_sum, sphere, staircase
from .linalg import Q, rank
from .modelcat import (SSpec, cofibrant_conditions, cofibrant_conditions_1_to_4, dec_shift_equivalence_check,
                       is_S_fibration, monoid_axiom_spot_check, page_zero_check, phi_box_phi_check,
                       pushout_closed_form_check, rlp_I, rlp_J, subclass_cofibration_check,
                       unit_lift_pattern)
from .monoidal import (find_filtered_isomorphism, find_morphism_isomorphism, muro_factorization,
                       fold_map, phi_box_zero_to_cycle, tensor, tensor_decomposition_check,
                       unit_axiom_check)
from .randgen import random_complex, random_morphism
from .spectral import (auto_window, cone_criterion_cross_check, decalage, is_r_quasi_iso,
                       page_differential, page_entry, r_boundaries, r_cycles, shift)


@dataclass
class CriterionResult:
    number: int
    name: str
    ok: bool
    detail: dict = dc_field(default_factory=dict)
    failures: list = dc_field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        return "[%s] criterion %2d  %-34s %6.2fs" % ("PASS" if self.ok else "FAIL", self.number, self.name,
                                                     self.seconds)

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "result": self.ok,
                "detail": self.detail, "failures": self.failures[:10], "seconds": round(self.seconds, 3)}


def _result(number, name, failures, **detail) -> CriterionResult:
    return CriterionResult(number, name, not failures, detail, failures)


# 1 ------------------------------------------------------------------------------------

def page_homology_dims(A, r: int, p: int, n: int) -> int:
    """dim H(E_r, d_r) at (p, n) from the E_r data alone."""
    dim = page_entry(A, r, p, n).dim
    out = page_differential(A, r, p, n)
    inc = page_differential(A, r, p + r, n - 1)
    return dim - (rank(out) if out.size else 0) - (rank(inc) if inc.size else 0)


def criterion_1(seed: int = 1, count: int = 100, max_r: int = 4) -> CriterionResult:
    rng = random.Random(seed)
    fails = []
    entries = 0
    for t in range(count):
        A = random_complex(rng, max_rank=6)
        W = auto_window(A, r=max_r + 1)
        for r in range(max_r + 1):
            for p, n in W:
                Z, B = r_cycles(A, r, p, n), r_boundaries(A, r, p, n)
                if not B <= Z:
                    fails.append({"complex": t, "r": r, "p": p, "n": n, "issue": "B not in Z"})
                d1 = page_differential(A, r, p, n)
                d2 = page_differential(A, r, p - r, n + 1)
                if d1.size and d2.size and any(x != 0 for x in (d2.dot(d1)).flat):
                    fails.append({"complex": t, "r": r, "p": p, "n": n, "issue": "d_r d_r != 0"})
                if page_entry(A, r + 1, p, n).dim != page_homology_dims(A, r, p, n):
                    fails.append({"complex": t, "r": r, "p": p, "n": n, "issue": "E_{r+1} != H(E_r)"})
                entries += 1
    return _result(1, "spectral-sequence soundness", fails, complexes=count, entries=entries)


# 2 ------------------------------------------------------------------------------------

def criterion_2(seed: int = 2, count: int = 50) -> CriterionResult:
    rng = random.Random(seed)
    fails = []
    weqs = 0
    for t in range(count):
        f = random_morphism(rng)
        for r in (0, 1, 2):
            try:
                a, b = cone_criterion_cross_check(f, r)
            except AssertionError as exc:
                fails.append({"morphism": t, "r": r, "issue": str(exc)})
                continue
            weqs += bool(a)
    return _result(2, "cone criterion", fails, morphisms=count, weq_instances=weqs,
                   non_weq_instances=3 * count - weqs - len(fails))


# 3 ------------------------------------------------------------------------------------

def criterion_3(N: int = 6) -> CriterionResult:
    fails = []
    for r in (1, 2):
        st = staircase(Q, r, N)
        W = auto_window(st.obj, r=r + 1).restrict_p(st.safe_min_p)
        for k in range(r):
            for p, n in W:
                m = page_differential(st.obj, k, p, n)
                if m.size and rank(m):
                    fails.append({"r": r, "k": k, "p": p, "n": n, "issue": "d_k != 0"})
        for p in (-3, -2, -1):
            m = page_differential(st.obj, r, p, 0)
            if not (m.shape == (1, 1) and rank(m) == 1):
                fails.append({"r": r, "p": p, "issue": "d_r at (p,p) not an isomorphism",
                              "shape": list(m.shape)})
        spec = SSpec(r, {r})
        fib = is_S_fibration(st.pi, spec, W)
        weq = is_r_quasi_iso(st.pi, r, W)
        if not fib:
            fails.append({"r": r, "issue": "pi not an {r}-fibration", "witnesses": fib.witnesses})
        if not weq:
            fails.append({"r": r, "issue": "pi not an r-weq", "witnesses": weq.witnesses})
    return _result(3, "staircase pages", fails, N=N)


# 4 ------------------------------------------------------------------------------------

def criterion_4(seed: int = 4, atoms: int = 10, offsets: int = 5) -> CriterionResult:
    rng = random.Random(seed)
    fails = []
    for _ in range(atoms):
        p, n, q, m = (rng.randint(-4, 4) for _ in range(4))
        if find_filtered_isomorphism(tensor(sphere(Q, p, n), sphere(Q, q, m)), sphere(Q, p + q, n + m)) is None:
            fails.append({"atoms": [p, n, q, m]})
    checks = 0
    for t in range(3):
        for s in range(t + 1):
            for _ in range(offsets):
                p, n, q, m = rng.randint(-3, 3), rng.randint(-2, 2), rng.randint(-3, 3), rng.randint(-2, 2)
                v = tensor_decomposition_check(s, t, p, n, q, m)
                checks += 1
                if not v:
                    fails.append({"s": s, "t": t, "offset": [p, n, q, m], "status": v.witnesses})
    return _result(4, "tensor atoms and decompositions", fails, atom_checks=atoms, decomposition_checks=checks)


# 5 ------------------------------------------------------------------------------------

def criterion_5(seed: int = 5, per_r: int = 3) -> CriterionResult:
    rng = random.Random(seed)
    fails = []
    done = 0
    for r in (1, 2):
        for _ in range(per_r):
            p, n, q, m = rng.randint(-2, 2), rng.randint(-1, 1), rng.randint(-2, 2), rng.randint(-1, 1)
            for s in range(r + 1):
                pp, expected = phi_box_zero_to_cycle(Q, r, p, n, s, q, m)
                if find_morphism_isomorphism(pp, expected) is None:
                    fails.append({"r": r, "s": s, "params": [p, n, q, m], "issue": "phi [] (0->Z_s)"})
                done += 1
            v = phi_box_phi_check(Q, r, p, n, q, m)
            done += 1
            if not v:
                fails.append({"r": r, "params": [p, n, q, m], "issue": "phi [] phi", "witnesses": v.witnesses})
    return _result(5, "pushout-products", fails, checks=done)


# 6 ------------------------------------------------------------------------------------

SPECS_6 = [(1, {1}), (2, {0, 2}), (2, {0, 1, 2})]


def criterion_6(seed: int = 6, count: int = 20) -> CriterionResult:
    rng = random.Random(seed)
    fails = []
    tally = {"fib": 0, "acyclic_fib": 0, "cases": 0}
    for t in range(count):
        f = random_morphism(rng, max_rank=4)
        for r, S in SPECS_6:
            spec = SSpec(r, S)
            fib = bool(is_S_fibration(f, spec))
            weq = bool(is_r_quasi_iso(f, r))
            j = bool(rlp_J(f, spec))
            i = bool(rlp_I(f, spec))
            tally["cases"] += 1
            tally["fib"] += fib
            tally["acyclic_fib"] += fib and weq
            if j != fib:
                fails.append({"morphism": t, "spec": [r, sorted(S)], "rlp_J": j, "fibration": fib})
            if i != (fib and weq):
                fails.append({"morphism": t, "spec": [r, sorted(S)], "rlp_I": i,
                              "fibration": fib, "weq": weq})
    return _result(6, "generating-set lifting identities", fails, morphisms=count, **tally)


# 7 ------------------------------------------------------------------------------------

def random_attaching_map(rng: random.Random, A, r: int):
    """A nonzero filtered map Z_{r+1}(p,n) -> A for some (p,n) with Z_{r+1}^p(A)^n != 0."""
    from .fcomplex import FilteredMorphism

    W = auto_window(A, r=r + 1)
    spots = [(p, n) for p, n in W if r_cycles(A, r + 1, p, n).dim]
    if not spots:
        return None
    p, n = rng.choice(spots)
    Z = r_cycles(A, r + 1, p, n)
    coeffs = [Q(rng.randint(-2, 2)) for _ in range(Z.dim)]
    if all(c == 0 for c in coeffs):
        coeffs[0] = Q(1)
    a = Z.basis.dot(Q.matrix([[c] for c in coeffs]))
    src = cycle_rep(A.field, r + 1, p, n)
    maps = {n: a}
    if A.rank(n + 1):
        maps[n + 1] = A.d(n).dot(a)
    return FilteredMorphism(src, A, maps), p, n


def criterion_7(seed: int = 7, count: int = 10) -> CriterionResult:
    rng = random.Random(seed)
    fails = []
    done = 0
    while done < count:
        A = random_complex(rng, max_rank=5)
        r = rng.randint(0, 2)
        got = random_attaching_map(rng, A, r)
        if got is None:
            continue
        f, p, n = got
        v = pushout_closed_form_check(A, f, r, p, n)
        done += 1
        if not v:
            fails.append({"case": done, "r": r, "p": p, "n": n, "witnesses": v.witnesses})
    return _result(7, "pushout closed form", fails, attaching_maps=count)


# 8 ------------------------------------------------------------------------------------

def unit_axiom_inputs(seed: int = 8, count: int = 10) -> list:
    """Random complexes plus non-cofibrant ones (spheres, Z_0, B_1, a non-suppressive sum)."""
    rng = random.Random(seed)
    fixed = [sphere(Q, 0, 0), cycle_rep(Q, 0, 0, 0), boundary_rep(Q, 1, 0, 0),
             direct_sum(sphere(Q, 1, 1), cycle_rep(Q, 1, 0, 0)).obj]
    out = list(fixed)
    while len(out) < count:
        out.append(random_complex(rng, max_rank=3, atoms=rng.randint(1, 2), pr=(-1, 1), nr=(0, 1)))
    return out[:count]


def criterion_8(seed: int = 8, count: int = 10, N: int = 8, characterization_checks: bool = True) -> CriterionResult:
    fails = []
    inputs = unit_axiom_inputs(seed, count)
    for r in (1, 2):
        for t, A in enumerate(inputs):
            v = unit_axiom_check(A, r, N, characterization_checks=characterization_checks)
            if not v:
                fails.append({"r": r, "input": t, "witnesses": v.witnesses[:5]})
    return _result(8, "unit axiom", fails, inputs=len(inputs), N=N)


# 9 ------------------------------------------------------------------------------------

def criterion_9(seed: int = 9, count: int = 50) -> CriterionResult:
    rng = random.Random(seed)
    fails = []
    for t in range(count):
        A = random_complex(rng, max_rank=5)
        for l in (1, 2):
            if decalage(shift(A, l), l) != A:
                fails.append({"complex": t, "l": l, "issue": "Dec(S A) != A"})
    # (k+l)-suppressive inputs built by shifting
    constructed = 0
    for t in range(10):
        k, l = rng.randint(0, 1), rng.randint(1, 2)
        A = shift(random_complex(rng, max_rank=4), k + l)
        v = dec_shift_equivalence_check(A, k, l)
        constructed += 1
        if not v:
            fails.append({"constructed": t, "k": k, "l": l, "witnesses": v.witnesses})
    for p, n in [(0, 0), (2, -1), (-1, 1)]:
        Z0, Z1 = cycle_rep(Q, 0, p, n), cycle_rep(Q, 1, p + 1, n)
        if find_filtered_isomorphism(decalage(Z0, 1), decalage(Z1, 1)) is None:
            fails.append({"p": p, "n": n, "issue": "Dec(Z_0) and Dec(Z_1) not certified isomorphic"})
        if find_filtered_isomorphism(Z0, Z1) is not None:
            fails.append({"p": p, "n": n, "issue": "Z_0 and Z_1 wrongly certified isomorphic"})
    return _result(9, "shift and decalage", fails, random_complexes=count, constructed=constructed)


# 10 -----------------------------------------------------------------------------------

def criterion_10(N: int = 6) -> CriterionResult:
    fails = []
    for r in (1, 2):
        spec = SSpec(r, {r})
        for p, n in [(0, 0), (1, -1)]:
            v = cofibrant_conditions(cycle_rep(Q, r + 1, p, n), spec)
            if not v:
                fails.append({"r": r, "object": "Z_%d(%d,%d)" % (r + 1, p, n), "detail": v.witnesses})
        st = staircase(Q, r, N)
        v = cofibrant_conditions(st.obj, spec, safe_min=st.safe_min_p)
        if not cofibrant_conditions_1_to_4(v):
            fails.append({"r": r, "object": "staircase", "detail": v.witnesses})
        v = cofibrant_conditions(sphere(Q, 0, 0), spec)
        if v.detail["4-cone-lifting"]["result"]:
            fails.append({"r": r, "object": "R_(0)^0", "issue": "condition 4 unexpectedly passes"})
        lift = unit_lift_pattern(Q, r, N)
        if not lift:
            fails.append({"r": r, "issue": "unit lift misses a staircase summand", "detail": lift.witnesses})
        # page-zero: Z_k for k < r has d_k != 0, which only the full S = {0..r} allows
        for k in range(r):
            W = cycle_rep(Q, k, 0, 0)
            narrow = page_zero_check(W, SSpec(r, {r}))
            full = page_zero_check(W, SSpec(r, set(range(r + 1))))
            if narrow or not full:
                fails.append({"r": r, "witness": "Z_%d(0,0)" % k, "S={r}": bool(narrow), "S=0..r": bool(full)})
        if not page_zero_check(cycle_rep(Q, r + 1, 0, 0), spec):
            fails.append({"r": r, "issue": "Z_{r+1} fails page-zero for S={r}"})
        W = auto_window(st.obj, r=r + 1).restrict_p(st.safe_min_p)
        if not page_zero_check(st.obj, spec, W):
            fails.append({"r": r, "issue": "staircase fails page-zero for S={r}"})
    return _result(10, "cofibrancy diagnostics", fails, N=N)


# 11 -----------------------------------------------------------------------------------

def criterion_11(r: int = 1, N: int = 6) -> CriterionResult:
    fails = []
    mf = muro_factorization(Q, r, N)
    if mf.q @ mf.j != fold_map(Q, r, N):
        fails.append("q j != (pi, id)")
    W = auto_window(mf.D, r=r + 1).restrict_p(mf.staircase.safe_min_p)
    weq = is_r_quasi_iso(mf.q, r, W)
    if not weq:
        fails.append({"issue": "q not an r-weq", "witnesses": weq.witnesses})
    sc = subclass_cofibration_check(mf.j, SSpec(r, {r}), safe_min=mf.staircase.safe_min_p + r)
    if not sc:
        fails.append({"issue": "j fails the subclass-cofibration check", "witnesses": sc.witnesses})
    return _result(11, "Muro factorization", fails, r=r, N=N)


# 12 -----------------------------------------------------------------------------------

def criterion_12(seed: int = 12, count: int = 10) -> CriterionResult:
    rng = random.Random(seed)
    fails = []
    done = 0
    for t in range(count):
        A = random_complex(rng, max_rank=3, atoms=rng.randint(1, 2), pr=(-2, 2), nr=(0, 1))
        for r in range(3):
            for s in range(r + 1):
                p, n = rng.randint(-2, 2), rng.randint(-1, 1)
                v = monoid_axiom_spot_check(s, p, n, A, r)
                done += 1
                if not v:
                    fails.append({"input": t, "s": s, "r": r, "p": p, "n": n, "witnesses": v.witnesses[:3]})
    return _result(12, "monoid-axiom spot checks", fails, checks=done)


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6,
    7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10, 11: criterion_11, 12: criterion_12,
}

SUITES = {
    "all": list(CRITERIA),
    "spectral": [1, 2, 3, 9],
    "monoidal": [4, 5, 8, 12],
    "modelcat": [6, 7, 10, 11],
    "quick": [3, 4, 5, 7, 9, 10, 11],
}


def run_criterion(k: int) -> CriterionResult:
    t = time.perf_counter()
    try:
        res = CRITERIA[k]()
    except Exception as exc:  # a crash is a failed criterion, reported with its message
        res = CriterionResult(k, CRITERIA[k].__name__, False, {}, [{"error": repr(exc)}])
    res.seconds = time.perf_counter() - t
    return res


def run_suite(name: str = "all") -> list[CriterionResult]:
    if name in SUITES:
        ids = SUITES[name]
    else:
        try:
            ids = [int(x) for x in name.split(",")]
        except ValueError:
            raise KeyError("unknown suite %r (choose from %s or a list like 1,4,7)"
                           % (name, ", ".join(SUITES))) from None
        bad = [k for k in ids if k not in CRITERIA]
        if bad:
            raise KeyError("no criteria numbered %s" % bad)
    return [run_criterion(k) for k in ids]


def render_table(results: list[CriterionResult]) -> str:
    lines = [r.line() for r in results]
    passed = sum(r.ok for r in results)
    lines.append("%d/%d passed" % (passed, len(results)))
    return "\n".join(lines)
