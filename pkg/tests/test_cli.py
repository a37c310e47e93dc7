import json
from fractions import Fraction

import pytest

from graphspine.cli import main
from graphspine.graphs import parse_graph, serialize_graph

from .conftest import make_theta

RATIONAL = r"^-?\d+/\d+$"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_analyze_bundled_theta(capsys):
    code, out, _ = run_cli(capsys, "analyze", "theta")
    assert code == 0
    assert "systole length: 2/3" in out
    assert "systoles (3):" in out
    assert "membership (W, V, V'): yes, yes, yes" in out


def test_analyze_json_uses_rational_strings(capsys, tmp_path):
    path = tmp_path / "theta.graph"
    path.write_text(serialize_graph(make_theta()))
    code, out, _ = run_cli(capsys, "--json", "analyze", str(path))
    assert code == 0
    report = json.loads(out)
    assert report["systole_length"] == "2/3"
    assert report["volume"] == "1/1"
    assert report["lattice"]["index"] == 1
    assert report["membership"] == {"W": True, "V": True, "Vprime": True}

    def no_floats(node):
        if isinstance(node, float):
            raise AssertionError("float leaked into JSON report")
        if isinstance(node, dict):
            for k, v in node.items():
                if not str(k).endswith("_approx"):
                    no_floats(v)
        elif isinstance(node, list):
            for v in node:
                no_floats(v)

    no_floats(report)


def test_analyze_deterministic(capsys):
    _, out1, _ = run_cli(capsys, "--json", "analyze", "theta")
    _, out2, _ = run_cli(capsys, "--json", "analyze", "theta")
    assert out1 == out2


def test_retract_with_trace(capsys, tmp_path):
    trace = tmp_path / "out.json"
    code, out, _ = run_cli(capsys, "retract", "dumbbell_unequal", "--trace", str(trace))
    assert code == 0
    assert "u* = 10/7" in out
    payload = json.loads(trace.read_text())
    assert [e["kind"] for e in payload["events"]] == ["new-systoles", "stage-complete"]
    assert payload["events"][0]["u_star"] == "10/7"
    final = parse_graph(payload["final"]["graph"])
    assert final.num_vertices == 1
    assert payload["final"]["systole_length"] == "1/2"


def test_retract_normalizes_volume(capsys, tmp_path):
    g = make_theta(Fraction(1), Fraction(1), Fraction(1))
    path = tmp_path / "big.graph"
    path.write_text(serialize_graph(g))
    code, out, _ = run_cli(capsys, "retract", str(path))
    assert code == 0
    assert "volume normalized" in out


def test_dimension_json(capsys):
    code, out, _ = run_cli(capsys, "--json", "dimension", "theta")
    assert code == 0
    report = json.loads(out)
    assert report["dim"] == 0 and report["F"] == 3 and report["vcd"] == 1


def test_map_check_cube(capsys):
    code, out, _ = run_cli(capsys, "--json", "map-check", "cube")
    assert code == 0
    report = json.loads(out)
    assert report["F"] == 6 and report["p"] == 4 and report["q"] == 3
    assert report["flag_transitive"] is True and report["aut_order"] == 48
    assert report["faces_equal_min_cycles"]["equal"] is True
    assert report["euler_relations"]["n"] == 5


def test_verify_paper(capsys):
    code, out, _ = run_cli(capsys, "verify-paper")
    assert code == 0
    assert "FAIL" not in out
    assert "klein-conditional-chain" in out


def test_verify_paper_filter(capsys):
    code, out, _ = run_cli(capsys, "verify-paper", "--filter", "klein")
    assert code == 0
    assert "theta-analysis" not in out
    assert "klein-counting" in out


def test_domain_error_exit_code(capsys, tmp_path):
    path = tmp_path / "circle.graph"
    path.write_text("graph circle\nvertices 1\nedge 0 0 0 1/1\n")
    code, out, err = run_cli(capsys, "analyze", str(path))
    assert code == 1
    assert "NotOuterSpace" in err
    # permissive mode accepts it
    code2, out2, _ = run_cli(capsys, "--permissive", "analyze", str(path))
    assert code2 == 0
    assert "systole length: 1/1" in out2


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as excinfo:
        main(["frobnicate"])
    assert excinfo.value.code == 2
