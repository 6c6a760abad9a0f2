import json
import random

import pytest
from hypothesis import given, strategies as st

from fss import io
from fss.cli import run
from fss.fcomplex import cycle_rep, identity, phi, sphere, staircase, zero_complex, zero_morphism
from fss.linalg import GF, Q
from fss.randgen import random_complex, random_morphism

seeds = st.integers(0, 10 ** 6)


# --- serialization -----------------------------------------------------------------------------

@given(seeds)
def test_complex_roundtrip(seed):
    A = random_complex(random.Random(seed))
    assert io.complex_from_json(json.loads(io.dumps(A))) == A


@given(seeds)
def test_morphism_roundtrip(seed):
    f = random_morphism(random.Random(seed), max_rank=4)
    assert io.morphism_from_json(json.loads(io.dumps(f))) == f


def test_prime_field_roundtrip():
    A = random_complex(random.Random(3), field=GF(7))
    B = io.complex_from_json(json.loads(io.dumps(A)))
    assert B == A and B.field == GF(7)


def test_dumps_is_deterministic():
    f = phi(Q, 2, 1, -1)
    assert io.dumps(f) == io.dumps(phi(Q, 2, 1, -1))


def test_rationals_serialize_as_strings():
    doc = io.complex_to_json(staircase(Q, 1, 2).obj)
    assert all(isinstance(x, str) for rows in doc["differentials"].values() for row in rows for x in row)


@pytest.mark.parametrize("doc,msg", [
    ({"degrees": {"0": {"weights": [0]}, "1": {"weights": [1]}}, "differentials": {"0": [["1"]]}},
     "raises weight"),
    ({"degrees": {"0": {"weights": [0]}}, "differentials": {"0": [["1"]]}}, "expected shape"),
    ({"degrees": {"x": {"weights": [0]}}}, "degree"),
    ({"degrees": {"0": {"weights": [0]}}, "window": [1, 2]}, "outside the declared window"),
    ([], "JSON object"),
])
def test_bad_documents(doc, msg):
    with pytest.raises(ValueError, match=msg):
        io.complex_from_json(doc)


def test_morphism_needs_source_and_target():
    with pytest.raises(io.FormatError):
        io.morphism_from_json({"maps": {}})


# --- command line ----------------------------------------------------------------------------

def write(path, obj):
    path.write_text(io.dumps(obj))
    return str(path)


def test_build_and_pages(tmp_path, capsys):
    out = tmp_path / "Z.json"
    assert run(["build", "zr", "--r", "1", "--p", "0", "--n", "0", "-o", str(out)]) == 0
    assert io.load_complex(str(out)) == cycle_rep(Q, 1, 0, 0)
    assert run(["pages", "--input", str(out), "--r", "1"]) == 0
    text = capsys.readouterr().out
    assert "E_1" in text and "d_1 nonzero at: (0,0)->(-1,1) rank 1" in text


def test_pages_json(tmp_path, capsys):
    A = write(tmp_path / "A.json", sphere(Q, 2, 1))
    assert run(["pages", "--input", A, "--r", "0", "--window", "p=2..2,n=1..1", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["entries"] == [{"p": 2, "n": 1, "dim": 1, "d_r_rank": 0}]


def test_check_exit_codes(tmp_path, capsys):
    stc = staircase(Q, 1, 6)
    pi = write(tmp_path / "pi.json", stc.pi)
    win = "p=%d..1,n=-1..2" % stc.safe_min_p
    assert run(["check", "weq", "--f", pi, "--r", "1", "--window", win]) == 0
    f = write(tmp_path / "phi.json", phi(Q, 2, 0, 0))
    assert run(["check", "weq", "--f", f, "--r", "1", "--format", "json"]) == 1
    assert run(["check", "weq", "--f", f, "--r", "2"]) == 0


def test_check_json_witnesses(tmp_path, capsys):
    f = write(tmp_path / "phi.json", phi(Q, 2, 0, 0))
    capsys.readouterr()
    assert run(["check", "weq", "--f", f, "--r", "1", "--format", "json"]) == 1
    doc = json.loads(capsys.readouterr().out)
    assert doc["check"] == "r-quasi-iso" and doc["result"] is False
    assert all({"p", "n", "display"} <= set(w) for w in doc["witnesses"])


def test_check_other_predicates(tmp_path, capsys):
    U = write(tmp_path / "U.json", sphere(Q, 0, 0))
    Z = write(tmp_path / "Z.json", cycle_rep(Q, 2, 0, 0))
    assert run(["check", "acyclic", "--input", U, "--r", "0"]) == 1
    assert run(["check", "suppressive", "--input", Z, "--r", "2"]) == 0
    assert run(["check", "cofibrant-conditions", "--input", Z, "--r", "1"]) == 0
    assert run(["check", "cofibrant-conditions", "--input", U, "--r", "1"]) == 1
    inc = write(tmp_path / "inc.json", zero_morphism(zero_complex(Q), cycle_rep(Q, 1, 0, 0)))
    assert run(["check", "fib", "--f", inc, "--r", "1"]) == 1
    idz = write(tmp_path / "id.json", identity(cycle_rep(Q, 1, 0, 0)))
    assert run(["check", "rlp", "--f", idz, "--r", "1", "--against", "I"]) == 0


def test_input_errors_exit_2(tmp_path, capsys):
    assert run(["pages", "--input", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["pages", "--input", str(bad)]) == 2
    A = write(tmp_path / "A.json", sphere(Q, 0, 0))
    capsys.readouterr()
    assert run(["pages", "--input", A, "--window", "p=1"]) == 2
    assert "window must look like" in capsys.readouterr().err
    idA = write(tmp_path / "id.json", identity(sphere(Q, 0, 0)))
    assert run(["check", "fib", "--f", idA, "--r", "1", "--S", "0"]) == 2
    assert "S must contain" in capsys.readouterr().err
    assert run(["build", "tensor", A]) == 2
    assert run(["build", "sphere", "--field", "R"]) == 2
    assert run(["verify", "paper", "--suite", "nonsense"]) == 2
    assert run(["frobnicate"]) == 2


def test_build_roundtrips_through_dec_and_shift(tmp_path):
    A = write(tmp_path / "A.json", random_complex(random.Random(8)))
    S = tmp_path / "S.json"
    D = tmp_path / "D.json"
    assert run(["build", "shift", "--r", "1", A, "-o", str(S)]) == 0
    assert run(["build", "dec", "--r", "1", str(S), "-o", str(D)]) == 0
    assert D.read_text() == open(A).read()


def test_build_suspend_omega_inverts(tmp_path):
    A = write(tmp_path / "A.json", random_complex(random.Random(9)))
    S, O = tmp_path / "S.json", tmp_path / "O.json"
    assert run(["build", "suspend", "--r", "2", A, "-o", str(S)]) == 0
    assert run(["build", "suspend", "--r", "2", "--omega", str(S), "-o", str(O)]) == 0
    assert O.read_text() == open(A).read()


def test_build_morphism_kinds(tmp_path):
    f = write(tmp_path / "f.json", phi(Q, 1, 0, 0))
    out = tmp_path / "pp.json"
    assert run(["build", "pushout-product", "--f", f, "--g", f, "-o", str(out)]) == 0
    assert io.load_morphism(str(out)).is_valid()
    assert run(["build", "pushout", "--f", f, "--g", f, "--part", "leg_c", "-o", str(out)]) == 0
    assert io.load_morphism(str(out)).is_valid()
    assert run(["build", "cone", "--f", f, "--r", "1", "--part", "nope"]) == 2
    assert run(["build", "muro", "--r", "1", "--N", "5", "--part", "q", "-o", str(out)]) == 0
    assert io.load_morphism(str(out)).is_valid()


def test_build_twisted_sum(tmp_path):
    A = write(tmp_path / "A.json", sphere(Q, -1, 1))
    C = write(tmp_path / "C.json", sphere(Q, 0, 0))
    tau = tmp_path / "tau.json"
    tau.write_text(json.dumps({"tau": {"0": [["1"]]}}))
    out = tmp_path / "T.json"
    assert run(["build", "twisted-sum", A, C, "--tau", str(tau), "-o", str(out)]) == 0
    assert io.load_complex(str(out)) == cycle_rep(Q, 1, 0, 0)
    tau.write_text(json.dumps({"tau": {"0": [["1"]]}}))
    bad = write(tmp_path / "B.json", sphere(Q, 1, 1))
    assert run(["build", "twisted-sum", bad, C, "--tau", str(tau)]) == 2


def test_lift_command(tmp_path, capsys):
    z = zero_complex(Q)
    U = sphere(Q, 0, 0)
    stc = staircase(Q, 1, 4)
    sq = {"i": io.morphism_to_json(zero_morphism(z, U)), "p": io.morphism_to_json(stc.pi),
          "f": io.morphism_to_json(zero_morphism(z, stc.obj)), "g": io.morphism_to_json(identity(U))}
    path = tmp_path / "sq.json"
    path.write_text(json.dumps(sq))
    out = tmp_path / "h.json"
    assert run(["lift", "--square", str(path), "-o", str(out)]) == 0
    h = io.load_morphism(str(out))
    assert stc.pi @ h == identity(U)
    i = phi(Q, 1, 0, 0)
    sq = {"i": io.morphism_to_json(i), "p": io.morphism_to_json(zero_morphism(i.source, z)),
          "f": io.morphism_to_json(identity(i.source)), "g": io.morphism_to_json(zero_morphism(i.target, z))}
    path.write_text(json.dumps(sq))
    assert run(["lift", "--square", str(path)]) == 1
    path.write_text(json.dumps({"i": sq["i"]}))
    assert run(["lift", "--square", str(path)]) == 2


def test_verify_quick_suite(capsys):
    assert run(["verify", "paper", "--suite", "4"]) == 0
    assert "[PASS]" in capsys.readouterr().out
