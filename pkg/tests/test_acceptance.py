"""Acceptance suite: one test per criterion, each printing a [PASS]/[FAIL] line.

The lines are also repeated in the pytest terminal summary.  Run this file directly
(``python tests/test_acceptance.py``) to get just the table.
"""

import sys

from fss.verify import CRITERIA, render_table, run_criterion

LINES: dict[int, str] = {}


def _check(k):
    res = run_criterion(k)
    LINES[k] = res.line()
    print(res.line())
    assert res.ok, res.failures[:5]


def test_criterion_01_spectral_sequence_soundness():
    _check(1)


def test_criterion_02_cone_criterion():
    _check(2)


def test_criterion_03_staircase_pages():
    _check(3)


def test_criterion_04_tensor_atoms_and_decompositions():
    _check(4)


def test_criterion_05_pushout_products():
    _check(5)


def test_criterion_06_generating_set_lifting():
    _check(6)


def test_criterion_07_pushout_closed_form():
    _check(7)


def test_criterion_08_unit_axiom():
    _check(8)


def test_criterion_09_shift_and_decalage():
    _check(9)


def test_criterion_10_cofibrancy_diagnostics():
    _check(10)


def test_criterion_11_muro_factorization():
    _check(11)


def test_criterion_12_monoid_axiom_spot_checks():
    _check(12)


def test_every_criterion_has_a_test():
    names = [n for n in globals() if n.startswith("test_criterion_")]
    assert sorted(int(n.split("_")[2]) for n in names) == sorted(CRITERIA)


if __name__ == "__main__":
    results = [run_criterion(k) for k in sorted(CRITERIA)]
    print(render_table(results))
    sys.exit(0 if all(r.ok for r in results) else 1)
