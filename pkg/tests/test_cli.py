import csv
import io
import json
import subprocess
import sys

import pytest

from ramsey_forge import cli, structures as st

ARROW = ["arrow", "--kind", "rigid", "--A", "chain:2", "--B", "chain:3", "--C", "chain:4", "--k", "2", "--t", "1"]

COMMANDS = [
    ["gen", "rot:5"],
    ["gen", "E:3:1/2"],
    ["enum", "--X", "chain:4", "--Y", "chain:2", "--kind", "rigid"],
    ["enum", "--X", "A:3", "--Y", "nA2:1", "--kind", "qrs"],
    ["check", "--X", "chain:3", "--Y", "chain:2", "--kind", "rigid", "--map", "0,0,1"],
    ["check", "--X", "chain:2", "--Y", "chain:2", "--kind", "rigid", "--map", "1,0"],
    ARROW,
    ["arrow", "--kind", "rigid", "--A", "chain:2", "--B", "chain:2", "--k", "2", "--search", "--cap", "4"],
    ["arrow", *ARROW[1:], "--mode", "sampling", "--samples", "200"],
    ["mint", "--kind", "rigid", "--A", "chain:2", "--B", "chain:3", "--C", "chain:4", "--k", "2"],
    ["fibers", "--A", "nA2:1", "--kind", "tidy_edge_order", "--list"],
    ["fibers", "--A", "K:3", "--kind", "acyclic_orientation"],
    ["bounds", "--A", "nA2:1", "--class", "digraph"],
    ["bounds", "--A", "E:3:1", "--class", "metric"],
    ["bounds", "--A", "K:3", "--class", "graph"],
    ["preadj", "sweep", "--max-x", "3"],
    ["preadj", "cover", "--D", "rot:3"],
    ["tournaments", "no-degree", "--n", "1"],
    ["tournaments", "siblings", "--a", "3", "--b", "5", "--max", "5"],
    ["tournaments", "inflation", "--S", "rot:3", "--T", "rot:3"],
    ["metric", "project", "--M", "omega:3"],
    ["metric", "split", "--M", "omega:4", "--l", "3"],
    ["metric", "selfsim", "--order", "2,0,3,1"],
    ["selftest"],
]


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: "-".join(a[:2]))
def test_commands_emit_valid_reports(argv, capsys, report_validator):
    code, out, _ = run([*argv, "--workers", "1"], capsys)
    assert code == 0
    report = json.loads(out)
    report_validator.validate(report)
    assert report["schema_version"] == "1.0" and report["command"] == argv[0]
    assert len(report["input_hash"]) == 64


def test_arrow_certificate_report(capsys):
    code, out, _ = run([*ARROW, "--workers", "1"], capsys)
    res = json.loads(out)["result"]
    assert code == 0 and res["holds"] is False
    assert res["bad_coloring"] == [0, 0, 1, 0, 1, 1, 0]


def test_siblings_report_none(capsys):
    code, out, _ = run(["tournaments", "siblings", "--a", "3", "--b", "5", "--max", "5"], capsys)
    assert code == 0 and json.loads(out)["result"]["found"] is False


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "rot:4"],
        ["gen", "nosuchfile.json"],
        ["frobnicate"],
        ["check", "--X", "chain:2", "--Y", "chain:2", "--kind", "rigid", "--map", "0,x"],
        ["enum", "--X", "chain:2", "--Y", "chain:2", "--kind", "bijection"],
        ["metric", "selfsim"],
        ["tournaments", "siblings", "--a", "4"],
        ["arrow", "--kind", "rigid", "--A", "chain:2", "--B", "chain:4", "--C", "chain:3", "--k", "2"],
    ],
)
def test_input_errors_exit_1(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        sys.exit(cli.main(argv))
    assert exc.value.code == 1


def test_budget_exhaustion_exit_2(capsys):
    code, out, err = run([*ARROW[:-6], "--C", "chain:9", "--k", "2", "--t", "1", "--max-colorings", "1000"], capsys)
    assert code == 2 and "budget" in err and out == ""


def test_env_budget_override(capsys, monkeypatch):
    monkeypatch.setenv("RAMSEY_FORGE_BUDGET", "colorings=2^4")
    code, _, _ = run(ARROW, capsys)
    assert code == 2
    monkeypatch.setenv("RAMSEY_FORGE_BUDGET", "colorings=2^7")
    code, out, _ = run(ARROW, capsys)
    assert code == 0 and json.loads(out)["config"]["budget"]["colorings"] == 128
    monkeypatch.setenv("RAMSEY_FORGE_BUDGET", "nonsense")
    assert run(ARROW, capsys)[0] == 1


def test_csv_output(capsys):
    code, out, _ = run([*ARROW, "--format", "csv"], capsys)
    rows = dict(csv.reader(io.StringIO(out)))
    assert code == 0 and rows.pop("key") == "value"
    assert rows["result.holds"] == "false" and rows["result.bad_coloring"] == "[0,0,1,0,1,1,0]"
    assert rows["schema_version"] == "1.0"


def test_out_file_and_worker_independence(tmp_path):
    paths = []
    for w in (1, 2, 4):
        p = tmp_path / f"r{w}.json"
        assert cli.main([*ARROW, "--workers", str(w), "--out", str(p)]) == 0
        paths.append(p.read_bytes())
    assert paths[0] == paths[1] == paths[2]


def test_input_hash_covers_file_contents(tmp_path, capsys):
    f = tmp_path / "s.json"
    f.write_text(json.dumps(st.to_json(st.chain(3))))
    _, a, _ = run(["gen", str(f)], capsys)
    f.write_text(json.dumps(st.to_json(st.chain(4))))
    _, b, _ = run(["gen", str(f)], capsys)
    assert json.loads(a)["input_hash"] != json.loads(b)["input_hash"]


def test_seed_changes_config_hash(capsys):
    _, a, _ = run([*ARROW, "--mode", "sampling", "--samples", "50", "--seed", "1"], capsys)
    _, b, _ = run([*ARROW, "--mode", "sampling", "--samples", "50", "--seed", "2"], capsys)
    assert json.loads(a)["input_hash"] != json.loads(b)["input_hash"]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ramsey_forge", "gen", "chain:2"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["command"] == "gen"
