"""Command-line interface: parsing, outputs, manifests, exit codes."""

import json
import subprocess
import sys

import pytest

from pa_lab import cli, cliques
from pa_lab.process import ProcessParams, generate, write_edge_list


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_help_and_unknown_command(capsys):
    for argv in ([], ["help"], ["--help"]):
        code, out, err = run(argv, capsys)
        assert code == 0 and "usage:" in out and err == ""
    code, out, err = run(["frobnicate"], capsys)
    assert code == 1 and "unknown command" in err


def test_gen_minimal_graph(tmp_path, capsys):
    out = tmp_path / "g.txt"
    code, stdout, _ = run(["gen", "n=1", f"out={out}"], capsys)
    assert code == 0 and "wrote" in stdout
    assert out.read_text() == "# pa n=1 m=1 seed=0\n1 1\n"
    manifest = json.loads((tmp_path / "g.txt.manifest.json").read_text())
    assert manifest["command"] == "gen"
    assert manifest["parameters"]["n"] == 1 and manifest["seed"] == 0
    assert manifest["artifacts"] == [str(out)]
    assert manifest["version"]


def test_gen_is_byte_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert run(["gen", "n=200", "m=2", "seed=9", f"out={a}"], capsys)[0] == 0
    assert run(["gen", "n=200", "m=2", "seed=9", f"out={b}"], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_flag_errors(tmp_path, capsys):
    out = tmp_path / "x"
    cases = [
        (["gen", "n=5"], "missing required flag out="),
        (["gen", "n=zero", f"out={out}"], "expects an integer"),
        (["gen", "n=5", "n=6", f"out={out}"], "duplicate flag"),
        (["gen", "n=5", f"out={out}", "bogus=1"], "unknown flag"),
        (["gen", "n=0", f"out={out}"], "n= must be >= 1"),
        (["gen", "extra", "n=5", f"out={out}"], "takes no action"),
        (["dist", "t=1", "n=2", "mode=fancy", f"out={out}"], "must be one of"),
    ]
    for argv, needle in cases:
        code, _, err = run(argv, capsys)
        assert code == 1 and needle in err, argv


def test_dist_exact_output(tmp_path, capsys):
    out = tmp_path / "d.csv"
    code, _, _ = run(["dist", "t=1", "n=2", f"out={out}"], capsys)
    assert code == 0
    assert out.read_text() == "degree,probability\n2,1/3\n3,2/3\n"
    manifest = json.loads((tmp_path / "d.csv.manifest.json").read_text())
    assert manifest["parameters"]["mode"] == "exact"  # auto resolves small n


def test_dist_auto_switches_to_float(tmp_path, capsys):
    out = tmp_path / "d.csv"
    code, _, _ = run(["dist", "t=1", "n=501", f"out={out}"], capsys)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "degree,probability"
    total = sum(float(line.split(",")[1]) for line in lines[1:])
    assert total == pytest.approx(1.0, abs=1e-9)
    manifest = json.loads((tmp_path / "d.csv.manifest.json").read_text())
    assert manifest["parameters"]["mode"] == "float"


def test_dist_conditional(tmp_path, capsys):
    out = tmp_path / "d.csv"
    code, _, _ = run(["dist", "t=3", "n=10", "d=4", f"out={out}"], capsys)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[1].startswith("4,")  # support starts at the conditioned degree


def test_urn_easy_case_equals_general_pmf(tmp_path, capsys):
    easy, gen_ = tmp_path / "e.csv", tmp_path / "p.csv"
    assert run(["urn", "easy-case", "n=6", f"out={easy}"], capsys)[0] == 0
    assert run(["urn", "pmf", "n=6", "a0=1", "b0=0", f"out={gen_}"], capsys)[0] == 0

    def rows(p):  # {value: probability}, zero-mass rows dropped
        out = {}
        for line in p.read_text().splitlines()[2:]:
            value, prob = line.split(",")
            if prob != "0/1":
                out[int(value)] = prob
        return out

    assert rows(easy) == rows(gen_)


def test_urn_enumerate_matches_pmf(tmp_path, capsys):
    enum, pmf = tmp_path / "e.csv", tmp_path / "p.csv"
    argv = ["urn", "enumerate", "matrix=1,1,0,2", "a0=1", "b0=2", "n=5",
            f"out={enum}"]
    assert run(argv, capsys)[0] == 0
    assert run(["urn", "pmf", "n=5", "a0=1", "b0=2", f"out={pmf}"], capsys)[0] == 0
    body = lambda p: p.read_text().splitlines()[1:]
    assert body(enum) == body(pmf)


def test_urn_easy_case_stdout(capsys):
    code, out, _ = run(["urn", "easy-case", "n=2"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "k,probability"
    assert lines[2] == "2,1/3" and lines[3] == "3,2/3"


def test_urn_simulate_deterministic_and_balanced(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["urn", "simulate", "matrix=1,1,0,2", "a0=1", "b0=2", "n=5",
            "trials=3", "seed=4"]
    assert run(argv + [f"out={a}"], capsys)[0] == 0
    assert run(argv + [f"out={b}"], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "trial,a,b" and len(lines) == 4
    for line in lines[1:]:
        _, sa, sb = line.split(",")
        assert int(sa) + int(sb) == 3 + 2 * 5  # balanced: total grows by 2/draw


def test_bounds_tail_stdout_json(capsys):
    code, out, _ = run(["bounds", "tail", "c=2", "n=10000"], capsys)
    assert code == 0
    (report,) = json.loads(out)
    assert report["name"].startswith("first_vertex_tail")
    assert report["holds"] is True
    assert report["bound"] == pytest.approx(0.36787944117144233)


def test_bounds_csv_output(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code, _, _ = run(["bounds", "tail", "c=2", "n=2000", f"out={out}"], capsys)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("name,measured,bound,holds")
    assert len(lines) == 2


def test_strict_turns_failed_checks_into_exit_2(capsys):
    # the sub-Gaussian tail comparison genuinely fails at c=0.5
    base = ["bounds", "tail", "c=0.5", "n=1000"]
    code, out, _ = run(base, capsys)
    assert code == 0
    (report,) = json.loads(out)
    assert report["holds"] is False
    code, _, _ = run(base + ["--strict"], capsys)
    assert code == 2
    # strict with a passing check stays 0
    assert run(["bounds", "tail", "c=2", "n=1000", "--strict"], capsys)[0] == 0


def test_bounds_mean_report(capsys):
    code, out, _ = run(["bounds", "mean", "n=200", "trials=400", "seed=1"], capsys)
    assert code == 0
    (report,) = json.loads(out)
    assert report["name"] == "mc_mean_vs_oracle"
    assert report["holds"] is True and "z=" in report["note"]


def test_seed_env_fallback_and_override(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("PA_LAB_SEED", "7")
    out = tmp_path / "g.txt"
    assert run(["gen", "n=3", f"out={out}"], capsys)[0] == 0
    assert "seed=7" in out.read_text().splitlines()[0]
    assert run(["gen", "n=3", "seed=2", f"out={out}"], capsys)[0] == 0
    assert "seed=2" in out.read_text().splitlines()[0]
    monkeypatch.setenv("PA_LAB_SEED", "not-a-number")
    code, _, err = run(["gen", "n=3", f"out={out}"], capsys)
    assert code == 1 and "seed=" in err


def test_clique_find_not_found_payload(capsys):
    code, out, _ = run(["clique", "find", "k=2", "n=2000", "seed=3"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload == {"found": False, "reason": "not found by horizon"}


def test_clique_find_verify_round_trip(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    witness = tmp_path / "w.json"
    assert run(["gen", "n=2000", "m=2", "seed=0", f"out={graph}"], capsys)[0] == 0
    code, stdout, _ = run(
        ["clique", "find", "k=2", "n=2000", "seed=0", f"out={witness}"], capsys
    )
    assert code == 0 and "witness found at t=1214" in stdout
    stats = json.loads((tmp_path / "w.stats.json").read_text())
    assert stats["found_at"] == 1214 and stats["k"] == 2
    manifest = json.loads((tmp_path / "w.json.manifest.json").read_text())
    assert str(witness) in manifest["artifacts"]
    with open(witness) as fh:
        w = cliques.read_witness_json(fh)
    assert w.k == 2
    code, out, _ = run(
        ["clique", "verify", f"graph={graph}", f"witness={witness}"], capsys
    )
    assert code == 0 and json.loads(out)["ok"] is True


def test_clique_verify_failure_modes(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    g = generate(2000, ProcessParams(m=2, seed=0))
    write_edge_list(g, graph)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "k": 2, "principals": [1, 2],
        "connectors": [{"pair": [1, 2], "vertex": 1999}],
    }))
    code, out, _ = run(
        ["clique", "verify", f"graph={graph}", f"witness={bad}"], capsys
    )
    assert code == 0
    verdict = json.loads(out)
    assert verdict["ok"] is False and verdict["diagnostics"]
    code, _, _ = run(
        ["clique", "verify", f"graph={graph}", f"witness={bad}", "--strict"],
        capsys,
    )
    assert code == 2
    junk = tmp_path / "junk.json"
    junk.write_text("witness: nope")
    code, _, err = run(
        ["clique", "verify", f"graph={graph}", f"witness={junk}"], capsys
    )
    assert code == 1 and "not a witness file" in err


def test_clique_greedy_from_graph_file(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    write_edge_list(generate(500, ProcessParams(m=2, seed=1)), graph)
    code, out, _ = run(["clique", "greedy", f"graph={graph}"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["k"] >= 1 and len(payload["principals"]) == payload["k"]
    code, _, err = run(
        ["clique", "greedy", f"graph={graph}", "n=10"], capsys
    )
    assert code == 1 and "mutually exclusive" in err


def test_clique_success_stdout(capsys):
    code, out, _ = run(
        ["clique", "success", "k=1", "n=30", "trials=5", "seed=0"], capsys
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["successes"] == 5 and payload["estimate"] == 1.0


def test_figure_left_columns(tmp_path, capsys):
    out = tmp_path / "left.csv"
    code, _, _ = run(["figure", "which=left", f"out={out}"], capsys)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "degree,p_uncond,p_cond100,p_cond1000"
    sums = [0.0, 0.0, 0.0]
    for line in lines[1:]:
        parts = line.split(",")
        for j in range(3):
            sums[j] += float(parts[1 + j])
    for s in sums:
        assert s == pytest.approx(1.0, abs=1e-9)
    code, _, err = run(["figure", "which=middle", f"out={out}"], capsys)
    assert code == 1 and "must be left or right" in err


def test_missing_graph_file_reports_path(tmp_path, capsys):
    missing = tmp_path / "nope.txt"
    code, _, err = run(["clique", "greedy", f"graph={missing}"], capsys)
    assert code == 1 and str(missing) in err


def test_console_script_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "pa_lab.cli", "help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and "usage:" in proc.stdout
    proc = subprocess.run(["pa-lab", "help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "usage:" in proc.stdout
