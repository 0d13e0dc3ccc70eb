import json
import subprocess
import sys


def run(*args):
    r = subprocess.run(
        [sys.executable, "-m", "tropfan.cli", *args],
        capture_output=True,
        text=True,
    )
    return r.returncode, r.stdout, r.stderr


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


EX_FAN = {
    "ambient_dim": 2,
    "rays": [[-1, 0], [0, -1], [1, 1]],
    "lineality": [],
    "cones": [[0, 2], [1, 2], [0, 1]],
}

EX_PP = dict(
    EX_FAN,
    degree=2,
    pieces={
        "0": {"degree": 2, "terms": [{"exps": [0, 2], "coeff": "1"}]},
        "1": {"degree": 2, "terms": [{"exps": [2, 0], "coeff": "1"}]},
        "2": {"degree": 2, "terms": []},
    },
)

R2 = {
    "ambient_dim": 2,
    "rays": [],
    "lineality": [[1, 0], [0, 1]],
    "cones": [[]],
    "weights": {"0": "1"},
    "dim": 2,
}

U23 = {"n": 3, "bases": [[1, 2], [1, 3], [2, 3]]}
F3 = {"n": 3, "bases": [[1, 2, 3]]}


def test_validate_fan(tmp_path):
    code, out, _ = run("validate-fan", "--fan", write(tmp_path, "f.json", EX_FAN))
    assert code == 0
    bad = {
        "ambient_dim": 2,
        "rays": [[1, 0], [0, 1], [1, 1], [-1, 1]],
        "lineality": [],
        "cones": [[0, 1], [2, 3]],
    }
    code, out, _ = run("validate-fan", "--fan", write(tmp_path, "b.json", bad))
    assert code != 0


def test_katz_payne_and_determinism(tmp_path):
    p = write(tmp_path, "pp.json", EX_PP)
    code, out, _ = run("katz-payne", "--pp", p)
    assert code == 0
    doc = json.loads(out)
    assert doc["weights"] == {"origin": "1"}
    code2, out2, _ = run("katz-payne", "--pp", p)
    assert out2 == out


def test_pp_validate(tmp_path):
    code, _, _ = run("pp-validate", "--pp", write(tmp_path, "pp.json", EX_PP))
    assert code == 0


def test_divisor_and_balance(tmp_path):
    r2 = write(tmp_path, "r2.json", R2)
    phi = write(
        tmp_path, "phi.json", {"ambient_dim": 2, "max_of": [[1, 0], [0, 1], [0, 0]]}
    )
    code, out, _ = run("divisor", "--function", phi, "--cycle", r2)
    doc = json.loads(out)
    assert code == 0 and doc["certificates"]["balancing"] == "ok"
    assert sorted(doc["cycle"]["rays"]) == [[-1, 0], [0, -1], [1, 1]]
    line = write(tmp_path, "line.json", doc["cycle"])
    code, _, _ = run("balance", "--cycle", line)
    assert code == 0
    bad = {
        "ambient_dim": 2,
        "rays": [[1, 0]],
        "lineality": [],
        "cones": [[0]],
        "weights": {"0": "1"},
        "dim": 1,
    }
    code, out, _ = run("balance", "--cycle", write(tmp_path, "bad.json", bad))
    assert code == 2
    doc = json.loads(out)
    assert "violation" in json.dumps(doc) or doc.get("certificates")


def test_pp_intersect(tmp_path):
    code, out, _ = run(
        "pp-intersect",
        "--pp",
        write(tmp_path, "pp.json", EX_PP),
        "--cycle",
        write(tmp_path, "r2.json", R2),
    )
    doc = json.loads(out)
    assert code == 0 and doc["weights"] == {"origin": "1"}


def test_pp_intersect_verbose(tmp_path):
    code, out, _ = run(
        "pp-intersect",
        "--pp",
        write(tmp_path, "pp.json", EX_PP),
        "--cycle",
        write(tmp_path, "r2.json", R2),
        "--verbose",
    )
    doc = json.loads(out)
    assert code == 0
    assert "psi_representation" in doc["audit"] and "product_form" in doc["audit"]


def test_decompose(tmp_path):
    code, out, _ = run("decompose", "--pp", write(tmp_path, "pp.json", EX_PP))
    assert code == 0
    doc = json.loads(out)
    assert doc["psi_representation"]["terms"]


def test_refine_flag(tmp_path):
    fan = {
        "ambient_dim": 2,
        "rays": [[1, 0], [1, 2], [-1, 0], [0, -1]],
        "lineality": [],
        "cones": [[0, 1], [1, 2], [2, 3], [3, 0]],
    }
    pp = dict(
        fan,
        degree=1,
        pieces={str(i): {"degree": 1, "terms": []} for i in range(4)},
    )
    p = write(tmp_path, "pp.json", pp)
    code, out, err = run("katz-payne", "--pp", p)
    assert code == 1
    code, out, _ = run("katz-payne", "--pp", p, "--refine", "unimodular")
    assert code == 0


def test_bergman_rank_cut_cut(tmp_path):
    u23 = write(tmp_path, "u23.json", U23)
    f3 = write(tmp_path, "f3.json", F3)
    code, out, _ = run("bergman", "--matroid", u23)
    doc = json.loads(out)
    assert code == 0 and doc["certificates"]["balancing"] == "ok"
    assert doc["cycle"]["dim"] == 2

    code, out, _ = run("rank-cut", "--matroid", f3, "--sub", u23)
    doc = json.loads(out)
    assert code == 0 and doc["certificates"]["count"] == 1

    cyc = {
        "ambient_dim": 3,
        "rays": [],
        "lineality": [[1, 1, 1]],
        "cones": [[]],
        "weights": {"0": "1"},
        "dim": 1,
    }
    code, out, _ = run(
        "cut", "--matroid", u23, "--cycle", write(tmp_path, "lin.json", cyc)
    )
    doc = json.loads(out)
    assert code == 0 and doc["certificates"]["reproduces_input"] == "verified"


def test_pushforward_and_star(tmp_path):
    u23 = write(tmp_path, "u23.json", U23)
    _, out, _ = run("bergman", "--matroid", u23)
    berg = json.loads(out)["cycle"]
    pi = write(tmp_path, "pi.json", [[1, 0, 0], [0, 1, 0]])
    code, out, _ = run(
        "pushforward", "--matrix", pi, "--cycle", write(tmp_path, "b.json", berg)
    )
    doc = json.loads(out)
    assert code == 0 and doc["certificates"]["balancing"] == "ok"

    r2 = write(tmp_path, "r2.json", R2)
    phi = write(
        tmp_path, "phi.json", {"ambient_dim": 2, "max_of": [[1, 0], [0, 1], [0, 0]]}
    )
    _, out, _ = run("divisor", "--function", phi, "--cycle", r2)
    line = json.loads(out)["cycle"]
    linep = write(tmp_path, "line.json", line)
    tau = write(tmp_path, "tau.json", {"rays": [line["rays"][0]]})
    code, out, _ = run("star", "--cycle", linep, "--cone", tau)
    assert code == 0


def test_verify_duality(tmp_path):
    u23 = write(tmp_path, "u23.json", U23)
    _, out, _ = run("bergman", "--matroid", u23)
    berg = json.loads(out)["cycle"]
    fn = {k: v for k, v in berg.items() if k not in ("weights", "dim")}
    fn["linear_parts"] = {
        str(i): ["1", "2", "-1"] for i in range(len(fn["cones"]))
    }
    code, out, _ = run(
        "verify-duality",
        "--matroid",
        u23,
        "--function",
        write(tmp_path, "fn.json", fn),
    )
    doc = json.loads(out)
    assert code == 0 and doc["criterion_holds"]


def test_invert(tmp_path):
    fan = {
        "ambient_dim": 2,
        "rays": [[1, 0], [0, 1], [-1, -1]],
        "lineality": [],
        "cones": [[0, 1], [1, 2], [2, 0]],
    }
    target = {
        "ambient_dim": 2,
        "rays": [],
        "lineality": [],
        "cones": [[]],
        "weights": {"0": "2"},
        "dim": 0,
    }
    code, out, _ = run(
        "invert",
        "--fan",
        write(tmp_path, "fan.json", fan),
        "--cycle",
        write(tmp_path, "t.json", target),
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["certificates"]["round_trip"] == "verified"


def test_missing_file_exit_1(tmp_path):
    code, _, _ = run("balance", "--cycle", str(tmp_path / "nope.json"))
    assert code == 1


def test_out_flag(tmp_path):
    p = write(tmp_path, "pp.json", EX_PP)
    dest = tmp_path / "out.json"
    code, out, _ = run("katz-payne", "--pp", p, "--out", str(dest))
    assert code == 0
    assert json.loads(dest.read_text())["weights"] == {"origin": "1"}
