import json
import subprocess
import sys

import pytest

from su2splice.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_arcs_3_5(capsys):
    code, out, _ = run(capsys, "arcs", "3", "5")
    assert code == EXIT_OK
    strata = json.loads(out)["strata"]
    irr = [s for s in strata if s["kind"] == "IrreducibleArc"]
    assert len(irr) == 4
    assert {"num": 1, "den": 15} in [s["x_range"][0] for s in irr]
    assert [s["x_range"] for s in irr if s["arcs"] == [[1, 1]]] == [
        [{"num": 1, "den": 15}, {"num": 11, "den": 15}]]


def test_arcs_2_7(capsys):
    code, out, _ = run(capsys, "arcs", "2", "7")
    ranges = [s["x_range"] for s in json.loads(out)["strata"] if s["arcs"] == [[1, 1]]]
    assert ranges == [[{"num": 1, "den": 14}, {"num": 13, "den": 14}]]


def test_arcs_sum_with_negative_tokens(capsys):
    code, out, _ = run(capsys, "arcs", "--sum", "-2,7", "-2,7")
    assert code == EXIT_OK
    strata = json.loads(out)["strata"]
    near = [s["slope"] for s in strata if all(a in (None, [1, 1]) for a in s["arcs"])]
    assert sorted(near) == [0, 14, 14, 28]


def test_arcs_svg(tmp_path, capsys):
    svg = tmp_path / "a.svg"
    code, _, _ = run(capsys, "arcs", "3", "5", "--svg", str(svg), "--json", str(tmp_path / "a.json"))
    assert code == EXIT_OK and svg.read_text().startswith("<svg")
    assert json.loads((tmp_path / "a.json").read_text())["knot"] == "T(3,5)"


def test_splice_sigma1(capsys, tmp_path):
    code, out, _ = run(capsys, "splice", "3,5", "2,7", "--matrix", "1,0,-1,-1",
                       "--svg", str(tmp_path / "s.svg"))
    assert code == EXIT_OK
    data = json.loads(out)
    degenerate = [c for c in data["components"] if c["zariski"] == [2] and c["topology"] == "point"]
    pts = [c["pieces"][0]["locus"]["point"] for c in degenerate]
    assert {"x": {"num": 1, "den": 14}, "y": {"num": 27, "den": 14}} in pts
    assert "<circle" in (tmp_path / "s.svg").read_text()


def test_splice_json_is_deterministic(capsys):
    _, first, _ = run(capsys, "splice", "3,5", "2,7")
    _, second, _ = run(capsys, "splice", "3,5", "2,7")
    assert first == second


def test_splice_sigma2_link(capsys):
    code, out, _ = run(capsys, "splice", "3,5", "--sum=-2,7,-2,7", "--matrix", "1,0,-1,-1")
    assert code == EXIT_OK
    data = json.loads(out)
    wedges = [c for c in data["components"] if c["topology"] == "wedge of two 2-spheres"]
    rho0 = [c for c in wedges if any(
        l["point"] == {"x": {"num": 1, "den": 14}, "y": {"num": 27, "den": 14}}
        and l["pieces"] == ["circle", "circle"] for l in c["links"])]
    assert len(rho0) == 1 and rho0[0]["manifold"] is False


@pytest.mark.parametrize("argv", [
    ["arcs", "3", "6"],
    ["arcs"],
    ["arcs", "3", "5", "--sum", "2,7"],
    ["splice", "3,5", "2,7", "--matrix", "2,0,0,1"],
    ["splice", "3,5", "2,7,1"],
    ["splice", "3,5"],
    ["bogus"],
])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as info:
        raise SystemExit(main(argv))
    assert info.value.code == EXIT_USAGE


def test_verify_homology_only_and_figures(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "--homology-only", "--figures", str(tmp_path))
    assert code == EXIT_OK
    assert "[PASS] 1." in out
    assert sorted(p.name for p in tmp_path.iterdir()) == [f"fig{i}.svg" for i in range(1, 6)]


def test_verify_exit_code_reflects_results(capsys):
    from su2splice.acceptance import run_all
    code, out, _ = run(capsys, "verify")
    expected = EXIT_OK if all(r.passed for r in run_all()) else EXIT_FAIL
    assert code == expected
    assert out.count("[PASS]") + out.count("[FAIL]") == 8


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "su2splice", "verify", "--homology-only"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0 and "homology spheres" in proc.stdout
