"""Command-line front end.

    fss pages --input A.json --r 1 [--window auto|p=a..b,n=c..d]
    fss check {weq|fib|acyclic|suppressive|cofibrant-conditions|rlp} ...
    fss build {sphere|zr|br|phi|tensor|hom|cone|suspend|shift|dec|pushout|coproduct|
               pushout-product|staircase|twisted-sum|muro} ...
    fss lift --square sq.json
    fss verify paper [--suite all]

Exit status: 0 for success or a true verdict, 1 for a false verdict, 2 for bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import colim, io, modelcat, monoidal, spectral
from .fcomplex import (InvalidComplex, TwistBreaksFiltration, TwistNotAnticommuting, boundary_rep,
                       cone, cycle_rep, identity, phi, sphere, staircase, suspend, twisted_sum)
from .linalg import Field, FlagNotIncreasing
from .verdict import Verdict

INPUT_ERRORS = (io.FormatError, InvalidComplex, TwistBreaksFiltration, TwistNotAnticommuting,
                FlagNotIncreasing, ValueError, KeyError, OSError)


class UsageError(Exception):
    pass


# --- helpers ----------------------------------------------------------------------------

def _field(text: str) -> Field:
    t = text.strip()
    if t.upper() in ("Q", "QQ", "RATIONALS"):
        return Field.rationals()
    for prefix in ("GF(", "GF", "F_", "F"):
        if t.upper().startswith(prefix):
            body = t[len(prefix):].rstrip(")")
            try:
                return Field.prime(int(body))
            except ValueError:
                break
    raise UsageError("unknown field %r (use Q or GF(p))" % text)


def _window(text: str | None):
    if text is None or text == "auto":
        return None
    try:
        return spectral.Window.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _spec(r: int, S: str | None) -> modelcat.SSpec:
    if S is None:
        return modelcat.SSpec(r, {r})
    try:
        members = {int(x) for x in S.replace("{", "").replace("}", "").split(",") if x.strip()}
    except ValueError:
        raise UsageError("--S must be a comma-separated list of integers") from None
    return modelcat.SSpec(r, members)


def _need(args, name: str):
    v = getattr(args, name, None)
    if v is None:
        raise UsageError("missing --%s" % name.replace("_", "-"))
    return v


def _emit(args, payload) -> None:
    """Write a complex / morphism / JSON dict to --output or stdout."""
    text = io.dumps(payload)
    out = getattr(args, "output", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(args, v: Verdict) -> int:
    if args.format == "json":
        sys.stdout.write(json.dumps(v.to_json(), indent=2, sort_keys=True) + "\n")
    else:
        print(v.summary())
        for w in v.witnesses[:20] if not v else []:
            print("  witness:", json.dumps(w, sort_keys=True, default=str))
    return 0 if v else 1


# --- pages --------------------------------------------------------------------------------

def cmd_pages(args) -> int:
    A = io.load_complex(args.input)
    pg = spectral.page(A, args.r, _window(args.window))
    if args.format == "json":
        sys.stdout.write(json.dumps(pg.to_json(), indent=2, sort_keys=True) + "\n")
    else:
        print(pg.render())
        ranks = [(p, n, pg.d_rank(p, n)) for p, n in pg.window if pg.dim(p, n)]
        ranks = [x for x in ranks if x[2]]
        if ranks:
            print("d_%d nonzero at: %s" % (args.r, ", ".join("(%d,%d)->(%d,%d) rank %d"
                                                             % (p, n, p - args.r, n + 1, k)
                                                             for p, n, k in ranks)))
    return 0


# --- check ---------------------------------------------------------------------------------

def cmd_check(args) -> int:
    W = _window(args.window)
    what = args.what
    if what == "weq":
        v = spectral.is_r_quasi_iso(io.load_morphism(_need(args, "f")), args.r, W)
    elif what == "fib":
        v = modelcat.is_S_fibration(io.load_morphism(_need(args, "f")), _spec(args.r, args.S), W)
    elif what == "acyclic":
        v = spectral.is_r_acyclic(io.load_complex(_need(args, "input")), args.r, W)
    elif what == "suppressive":
        if args.f:
            v = modelcat.is_r_suppressive_inclusion(io.load_morphism(args.f), args.r)
        else:
            v = modelcat.is_k_suppressive(io.load_complex(_need(args, "input")), args.r)
    elif what == "cofibrant-conditions":
        A = io.load_complex(_need(args, "input"))
        v = modelcat.cofibrant_conditions(A, _spec(args.r, args.S), safe_min=args.safe_min)
    elif what == "rlp":
        f = io.load_morphism(_need(args, "f"))
        spec = _spec(args.r, args.S)
        v = (modelcat.rlp_I if args.against == "I" else modelcat.rlp_J)(f, spec, W)
    else:  # argparse restricts the choices
        raise UsageError("unknown check %r" % what)
    return _report(args, v)


# --- build --------------------------------------------------------------------------------

def _pick(parts: dict, name: str | None, default: str):
    key = name or default
    if key not in parts:
        raise UsageError("--part must be one of %s" % ", ".join(sorted(parts)))
    return parts[key]


def _load_tau(path: str, field: Field) -> dict:
    doc = io.load_json(path)
    tau = doc.get("tau", doc)
    out = {}
    for k, rows in tau.items():
        out[int(k)] = field.matrix([[field.parse(x) for x in row] for row in rows]) if rows else None
    return {k: v for k, v in out.items() if v is not None}


def cmd_build(args) -> int:
    kind = args.kind
    F = _field(args.field)
    ins = args.inputs or []

    def one():
        if len(ins) != 1:
            raise UsageError("build %s takes one input complex" % kind)
        return io.load_complex(ins[0])

    def two():
        if len(ins) != 2:
            raise UsageError("build %s takes two input complexes" % kind)
        return io.load_complex(ins[0]), io.load_complex(ins[1])

    if kind == "sphere":
        out = sphere(F, args.p, args.n)
    elif kind == "zr":
        out = cycle_rep(F, args.r, args.p, args.n)
    elif kind == "br":
        out = boundary_rep(F, args.r, args.p, args.n)
    elif kind == "phi":
        out = phi(F, args.r, args.p, args.n)
    elif kind == "tensor":
        out = monoidal.tensor(*two())
    elif kind == "hom":
        out = monoidal.internal_hom(*two())
    elif kind == "cone":
        if args.f:
            c = cone(io.load_morphism(args.f), args.r)
        else:
            c = cone(identity(one()), args.r)
        out = _pick({"obj": c.obj, "incl": c.incl, "proj": c.proj}, args.part, "obj")
    elif kind == "suspend":
        out = suspend(one(), args.r, "omega" if args.omega else "sigma")
    elif kind == "shift":
        out = spectral.shift(one(), args.r)
    elif kind == "dec":
        out = spectral.decalage(one(), args.r)
    elif kind == "pushout":
        po = colim.pushout(io.load_morphism(_need(args, "f")), io.load_morphism(_need(args, "g")))
        out = _pick({"obj": po.obj, "leg_b": po.leg_b, "leg_c": po.leg_c}, args.part, "obj")
    elif kind == "coproduct":
        out = colim.coproduct(*two()).obj
    elif kind == "pushout-product":
        pp = monoidal.pushout_product(io.load_morphism(_need(args, "f")), io.load_morphism(_need(args, "g")))
        parts = {"map": pp.map, "obj": pp.pushout.obj, "cokernel": colim.cokernel(pp.map).obj}
        out = _pick(parts, args.part, "map")
    elif kind == "staircase":
        st = staircase(F, args.r, args.N)
        out = _pick({"obj": st.obj, "pi": st.pi}, args.part, "obj")
    elif kind == "twisted-sum":
        A, C = two()
        ts = twisted_sum(A, C, _load_tau(_need(args, "tau"), A.field))
        out = _pick({"obj": ts.obj, "incl": ts.incl, "proj": ts.proj}, args.part, "obj")
    elif kind == "muro":
        mf = monoidal.muro_factorization(F, args.r, args.N)
        out = _pick({"D": mf.D, "j": mf.j, "q": mf.q}, args.part, "j")
    else:
        raise UsageError("unknown build %r" % kind)
    _emit(args, out)
    return 0


# --- lift -----------------------------------------------------------------------------------

def cmd_lift(args) -> int:
    path = args.square
    doc = io.load_json(path)
    base = os.path.dirname(os.path.abspath(path))
    try:
        parts = {k: io.morphism_from_json(io._resolve(doc[k], base), base) for k in ("i", "p", "f", "g")}
    except KeyError as exc:
        raise UsageError("square document needs keys i, p, f, g (missing %s)" % exc) from None
    lp = modelcat.LiftingProblem(parts["i"], parts["p"], parts["f"], parts["g"])
    h = modelcat.solve_lifting(lp)
    if h is None:
        v = Verdict("lift", False, ["no filtered chain map solves the square"])
        return _report(args, v)
    if args.format == "json" or args.output:
        _emit(args, h)
    else:
        print("lift: found")
        sys.stdout.write(io.dumps(h))
    return 0


# --- verify -----------------------------------------------------------------------------------

def cmd_verify(args) -> int:
    from . import verify

    if args.target != "paper":
        raise UsageError("only 'verify paper' is available")
    try:
        results = verify.run_suite(args.suite)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    if args.format == "json":
        sys.stdout.write(json.dumps([r.to_json() for r in results], indent=2, sort_keys=True,
                                    default=str) + "\n")
    else:
        print(verify.render_table(results))
    return 0 if all(r.ok for r in results) else 1


# --- parser -----------------------------------------------------------------------------------

BUILD_KINDS = ["sphere", "zr", "br", "phi", "tensor", "hom", "cone", "suspend", "shift", "dec",
               "pushout", "coproduct", "pushout-product", "staircase", "twisted-sum", "muro"]
CHECKS = ["weq", "fib", "acyclic", "suppressive", "cofibrant-conditions", "rlp"]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")

    ap = argparse.ArgumentParser(prog="fss", description="Filtered complexes and their spectral sequences.")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("pages", parents=[common], help="E_r page of a complex")
    p.add_argument("--input", required=True)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--window", default="auto")
    p.set_defaults(run=cmd_pages)

    c = sub.add_parser("check", parents=[common], help="run a predicate")
    c.add_argument("what", choices=CHECKS)
    c.add_argument("--f", help="morphism JSON")
    c.add_argument("--input", help="complex JSON")
    c.add_argument("--r", type=int, required=True)
    c.add_argument("--S", help="comma-separated index set (default: {r})")
    c.add_argument("--window", default="auto")
    c.add_argument("--against", choices=["I", "J"], default="J")
    c.add_argument("--safe-min", type=int, default=None,
                   help="for truncated inputs: only require cone lifts on generators of weight >= this")
    c.set_defaults(run=cmd_check)

    b = sub.add_parser("build", parents=[common], help="construct an object or morphism")
    b.add_argument("kind", choices=BUILD_KINDS)
    b.add_argument("inputs", nargs="*")
    b.add_argument("--field", default="Q")
    b.add_argument("--r", type=int, default=1)
    b.add_argument("--p", type=int, default=0)
    b.add_argument("--n", type=int, default=0)
    b.add_argument("--N", type=int, default=6)
    b.add_argument("--f")
    b.add_argument("--g")
    b.add_argument("--tau")
    b.add_argument("--omega", action="store_true", help="suspend: use the inverse reindexing")
    b.add_argument("--part", help="which piece of a multi-part construction to write")
    b.add_argument("--output", "-o")
    b.set_defaults(run=cmd_build)

    li = sub.add_parser("lift", parents=[common], help="solve a lifting square")
    li.add_argument("--square", required=True)
    li.add_argument("--output", "-o")
    li.set_defaults(run=cmd_lift)

    v = sub.add_parser("verify", parents=[common], help="run the bundled verification suite")
    v.add_argument("target", choices=["paper"])
    v.add_argument("--suite", default="all")
    v.set_defaults(run=cmd_verify)
    return ap


def run(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args, extra = ap.parse_known_args(argv)
        # build takes input files anywhere on the line, e.g. `build dec --r 1 A.json`
        if extra and args.verb == "build" and not any(x.startswith("-") for x in extra):
            args.inputs = list(args.inputs or []) + extra
        elif extra:
            ap.error("unrecognized arguments: %s" % " ".join(extra))
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.run(args)
    except UsageError as exc:
        print("fss: error: %s" % exc, file=sys.stderr)
        return 2
    except INPUT_ERRORS as exc:
        print("fss: error: %s" % exc, file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
