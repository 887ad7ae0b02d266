import json

from zipstrata.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_strata_list_gl42(capsys):
    code, out = run(capsys, "--gl", "4", "2", "strata-list")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["nodes"]) == 6
    edges = {(tuple(c["upper"]), tuple(c["lower"])) for c in doc["covers"]}
    assert ((3, 1, 4, 2), (3, 1, 2, 4)) in edges
    assert ((3, 1, 4, 2), (1, 3, 4, 2)) in edges
    assert len(edges) == 6


def test_strata_list_gl21(capsys):
    code, out = run(capsys, "--gl", "2", "1", "strata-list")
    doc = json.loads(out)
    assert code == 0 and len(doc["nodes"]) == 2 and len(doc["covers"]) == 1


def test_strata_list_gl53_counts(capsys):
    code, out = run(capsys, "--gl", "5", "3", "strata-list")
    doc = json.loads(out)
    assert code == 0 and len(doc["nodes"]) == 10


def test_strata_list_dot(capsys):
    code, out = run(capsys, "--gl", "4", "2", "--format", "dot", "strata-list")
    assert code == 0
    assert out.startswith("digraph strata")
    assert out.count("->") == 6


def test_decide_smooth_json(capsys):
    code, out = run(capsys, "--gl", "5", "3", "decide", "s3 s4", "s3")
    doc = json.loads(out)
    assert code == 0 and doc["smooth"] is True


def test_decide_not_smooth_certificate(capsys):
    code, out = run(capsys, "--gl", "5", "3", "decide", "s3 s2", "s3")
    doc = json.loads(out)
    assert code == 0 and doc["smooth"] is False
    assert doc["certificate"] == [1, 3, 2, 4, 5]


def test_decide_precondition_exit_code(capsys):
    code, _ = run(capsys, "--gl", "4", "2", "decide", "1,3,2,4", "3,4,1,2")
    assert code == 2


def test_budget_exit_code(capsys):
    code, _ = run(capsys, "--gl", "8", "4", "--budget", "10", "strata-list")
    assert code == 3


def test_sweep_length2_csv(capsys):
    code, out = run(capsys, "--format", "csv", "sweep-length2", "--n-max", "7")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("r,s,n,gcd,branch")
    assert len(lines) == 1 + 6  # (2,2),(3,2),(4,2),(3,3),(5,2),(4,3)


def test_hasse_single(capsys):
    code, out = run(capsys, "--gl", "4", "2", "hasse", "1,3,2,4")
    doc = json.loads(out)
    assert code == 0 and doc["feasible"] is False


def test_hasse_all_with_weight(capsys):
    code, out = run(capsys, "--gl", "4", "2", "hasse", "--weight", "0,0,0,0")
    docs = json.loads(out)
    assert code == 0 and len(docs) == 6


def test_xi_element(capsys):
    code, out = run(capsys, "--gl", "4", "2", "xi", "e")
    doc = json.loads(out)
    assert code == 0 and doc["xi"] == [1, 2, 3, 4]


def test_xi_matrix(capsys):
    entries = ",".join("1" if i == j else "0" for i in range(4) for j in range(4))
    code, out = run(capsys, "--gl", "4", "2", "xi", "--matrix", entries)
    doc = json.loads(out)
    assert code == 0 and doc["xi"] == [1, 2, 3, 4]


def test_xi_singular_matrix_rejected(capsys):
    code, _ = run(capsys, "--gl", "4", "2", "xi", "--matrix", ",".join(["0"] * 16))
    assert code == 2


def test_census_csv(capsys):
    code, out = run(capsys, "--gl", "3", "2", "--q", "2", "--format", "csv",
                    "census", "--m-list", "1,2")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "m,stratum,count"
    assert len(lines) == 1 + 6  # 3 strata x 2 exponents


def test_closed_form(capsys):
    code, out = run(capsys, "closed-form", "8", "4")
    doc = json.loads(out)
    assert code == 0 and doc["branch"] == "unbounded"


def test_generic_cartan_file(tmp_path, capsys):
    doc = {
        "cartan": [[2, -1], [-1, 2]],
        "I": [1],
        "lattice": {
            "dim": 2,
            "pairing": [[2, -1], [-1, 2]],
            "root_embedding": [[1, 0], [0, 1]],
        },
    }
    path = tmp_path / "a2.json"
    path.write_text(json.dumps(doc))
    code, out = run(capsys, "--cartan", str(path), "strata-list")
    parsed = json.loads(out)
    assert code == 0 and len(parsed["nodes"]) == 3


def test_json_round_trip_and_determinism(capsys):
    _, out1 = run(capsys, "--gl", "4", "2", "strata-list")
    _, out2 = run(capsys, "--gl", "4", "2", "strata-list")
    assert out1 == out2
    doc = json.loads(out1)
    assert json.loads(json.dumps(doc)) == doc


def test_closure_command(capsys):
    code, out = run(capsys, "--gl", "5", "3", "closure", "s3 s2")
    doc = json.loads(out)
    assert code == 0 and doc["smooth_in_codim_1"] is False
