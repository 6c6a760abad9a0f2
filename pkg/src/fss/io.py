"""JSON documents for complexes, morphisms and lifting squares."""

from __future__ import annotations

import json
import os
from typing import Any

import numpy as np

from .fcomplex import FilteredComplex, FilteredMorphism
from .linalg import Field


class FormatError(ValueError):
    pass


def _matrix_to_json(field: Field, m: np.ndarray) -> list[list[str]]:
    return [[field.format(x) for x in row] for row in m.tolist()]


def _matrix_from_json(field: Field, rows, shape: tuple[int, int], what: str) -> np.ndarray:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise FormatError("%s must be a list of rows" % what)
    if shape[0] * shape[1] == 0:
        if any(len(r) for r in rows):
            raise FormatError("%s must be empty, expected shape %r" % (what, shape))
        return field.zeros(*shape)
    if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
        got = (len(rows), len(rows[0]) if rows else 0)
        raise FormatError("%s has shape %r, expected %r" % (what, got, shape))
    try:
        return field.matrix([[field.parse(x) for x in r] for r in rows])
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise FormatError("%s: bad scalar (%s)" % (what, exc)) from exc


def complex_to_json(A: FilteredComplex) -> dict:
    F = A.field
    return {
        "field": F.to_json(),
        "window": list(A.window),
        "degrees": {str(n): {"weights": list(A.weights(n))} for n in A.degrees},
        "differentials": {str(n): _matrix_to_json(F, m)
                          for n, m in sorted(A.nonzero_diffs().items())},
    }


def complex_from_json(doc: dict, check: bool = True) -> FilteredComplex:
    if not isinstance(doc, dict):
        raise FormatError("complex document must be a JSON object")
    try:
        F = Field.from_json(doc.get("field", {"kind": "rationals"}))
    except (ValueError, KeyError, TypeError) as exc:
        raise FormatError("bad field: %s" % exc) from exc
    degrees = doc.get("degrees", {})
    if not isinstance(degrees, dict):
        raise FormatError("'degrees' must be an object keyed by degree")
    weights = {}
    for k, v in degrees.items():
        try:
            n = int(k)
            ws = [int(x) for x in v["weights"]]
        except (ValueError, KeyError, TypeError) as exc:
            raise FormatError("degree %r: %s" % (k, exc)) from exc
        if any(isinstance(x, float) for x in v["weights"]):
            raise FormatError("degree %r: weights must be integers" % k)
        weights[n] = ws
    win = doc.get("window")
    if win is not None:
        if not (isinstance(win, list) and len(win) == 2 and all(isinstance(x, int) for x in win)
                and win[0] <= win[1]):
            raise FormatError("'window' must be [n_min, n_max]")
        outside = [n for n, ws in weights.items() if ws and not win[0] <= n <= win[1]]
        if outside:
            raise FormatError("degrees %s lie outside the declared window" % outside)
    diffs = {}
    for k, rows in doc.get("differentials", {}).items():
        try:
            n = int(k)
        except ValueError as exc:
            raise FormatError("bad differential degree %r" % k) from exc
        shape = (len(weights.get(n + 1, ())), len(weights.get(n, ())))
        diffs[n] = _matrix_from_json(F, rows, shape, "d_%d" % n)
    A = FilteredComplex(F, weights, diffs)
    if check:
        rep = A.validate()
        if not rep.ok:
            raise FormatError("invalid complex: " + "; ".join(rep.problems))
    return A


def morphism_to_json(f: FilteredMorphism) -> dict:
    F = f.field
    return {
        "source": complex_to_json(f.source),
        "target": complex_to_json(f.target),
        "maps": {str(n): _matrix_to_json(F, m) for n, m in sorted(f.nonzero_maps().items())},
    }


def _resolve(ref, base: str | None) -> dict:
    if isinstance(ref, str):
        path = ref if os.path.isabs(ref) or base is None else os.path.join(base, ref)
        with open(path) as fh:
            return json.load(fh)
    return ref


def morphism_from_json(doc: dict, base: str | None = None, check: bool = True) -> FilteredMorphism:
    if not isinstance(doc, dict) or "source" not in doc or "target" not in doc:
        raise FormatError("morphism document needs 'source', 'target' and 'maps'")
    A = complex_from_json(_resolve(doc["source"], base), check)
    B = complex_from_json(_resolve(doc["target"], base), check)
    if A.field != B.field:
        raise FormatError("source and target fields differ")
    maps = {}
    for k, rows in doc.get("maps", {}).items():
        n = int(k)
        maps[n] = _matrix_from_json(A.field, rows, (B.rank(n), A.rank(n)), "f_%d" % n)
    f = FilteredMorphism(A, B, maps)
    if check:
        rep = f.validate()
        if not rep.ok:
            raise FormatError("invalid morphism: " + "; ".join(rep.problems))
    return f


def dumps(obj: Any) -> str:
    if isinstance(obj, FilteredComplex):
        obj = complex_to_json(obj)
    elif isinstance(obj, FilteredMorphism):
        obj = morphism_to_json(obj)
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError("%s: not valid JSON (%s)" % (path, exc)) from exc


def load_complex(path: str) -> FilteredComplex:
    return complex_from_json(load_json(path))


def load_morphism(path: str) -> FilteredMorphism:
    return morphism_from_json(load_json(path), base=os.path.dirname(os.path.abspath(path)))


def load_any(path: str):
    doc = load_json(path)
    if isinstance(doc, dict) and "maps" in doc:
        return morphism_from_json(doc, base=os.path.dirname(os.path.abspath(path)))
    return complex_from_json(doc)
