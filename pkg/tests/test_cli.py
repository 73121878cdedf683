import json

import pytest

from primcoh.cli import main
from primcoh.io import builtin_models, load_model


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_models(capsys):
    code, out, _ = run(capsys, "models")
    assert code == 0
    for name in ("t4", "t6", "kt", "heis3xs1"):
        assert name in out


def test_validate(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", "t4")
    assert code == 0 and "VALID: yes" in out
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"name": "bad", "m": 4, "d": [{"gen": 3, "terms": [["1", 1, 2]]},
                                                             {"gen": 4, "terms": [["1", 3, 4]]}]}))
    code, out, _ = run(capsys, "validate", str(bad))
    assert code == 1 and "VALID: no" in out and "d^2 e4" in out


def test_input_errors_exit_2(capsys, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text('{"name": "x", "m": 2, "eta": [["1/0", 1, 2]]}')
    assert run(capsys, "validate", str(broken))[0] == 2
    assert run(capsys, "cohomology", "kt", "--bundle", "nope")[0] == 2
    assert run(capsys, "cohomology", "does-not-exist.json", "--bundle", "x")[0] == 2
    assert run(capsys, "sweep", "kt", "--e", "line", "--l", "nil2")[0] == 2


def test_check_flat(capsys, tmp_path):
    code, out, _ = run(capsys, "check-flat", "kt", "--bundle", "line")
    assert code == 0 and "CONE-FLAT: yes" in out
    text = (
        '{"name": "kt2", "m": 4, "d": [{"gen": 4, "terms": [["1", 1, 2]]}], "eta": [["1", 1, 2]],'
        ' "bundles": {"bad": {"rank": 1, "A": [[[["-1", 4]]]], "Phi": [["2"]]}}}'
    )
    path = tmp_path / "kt2.json"
    path.write_text(text)
    code, out, _ = run(capsys, "check-flat", str(path), "--bundle", "bad")
    assert code == 1 and "entry (1,1) residual e12" in out
    code, out, _ = run(capsys, "cohomology", str(path), "--bundle", "bad")
    assert code == 1 and "COMPLEX: no" in out
    code, _, err = run(capsys, "sweep", str(path), "--e", "bad", "--l", "bad")
    assert code == 1 and "not cone-flat" in err


def test_cohomology_and_json(capsys):
    code, out, _ = run(capsys, "cohomology", "kt", "--bundle", "line", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["dims"] == [0] * 6 and doc["vanishes"] and doc["det_phi"] == "1"
    code, out, _ = run(capsys, "cohomology", "t4", "--bundle", "trivial", "--format", "json")
    assert json.loads(out)["dims"] == [1, 4, 5, 5, 4, 1]


def test_sweep_command(capsys):
    code, out, _ = run(capsys, "sweep", "kt", "--e", "nil2", "--l", "line", "--max-n", "3", "--dims")
    assert code == 0
    assert "threshold: 1" in out and "n^2" in out
    code, out, _ = run(capsys, "sweep", "kt", "--e", "trivial", "--l", "line", "--format", "json")
    doc = json.loads(out)
    assert len(doc["rows"]) == 11 and doc["rows"][0]["dims"] is None
    assert [r["det_phi"] for r in doc["rows"][:3]] == ["0", "1", "2"]


def test_contract_command(capsys):
    code, out, _ = run(capsys, "contract", "kt", "--bundle", "line")
    assert code == 0 and "ROUND-TRIP: ok" in out
    code, out, _ = run(capsys, "contract", "kt", "--bundle", "line", "--degree", "2", "--format", "json")
    doc = json.loads(out)
    assert doc["degrees"] == [{"degree": 2, "cocycles": 4, "contracted": 4}]
    code, _, err = run(capsys, "contract", "kt", "--bundle", "trivial")
    assert code == 1 and "singular" in err
    assert run(capsys, "contract", "kt", "--bundle", "line", "--degree", "9")[0] == 2


def _all_commands():
    cmds = [["models"]]
    for name in builtin_models():
        _, bundles = load_model(name)
        cmds.append(["validate", name])
        for b in sorted(bundles):
            cmds.append(["check-flat", name, "--bundle", b])
            cmds.append(["cohomology", name, "--bundle", b])
            cmds.append(["contract", name, "--bundle", b])
        lines = [b for b in sorted(bundles) if bundles[b].rank == 1]
        for b in sorted(bundles):
            cmds.append(["sweep", name, "--e", b, "--l", lines[-1], "--max-n", "3", "--dims"])
    return cmds


@pytest.mark.parametrize("fmt", ["text", "json"])
def test_every_command_is_byte_deterministic(capsys, fmt):
    for argv in _all_commands():
        first = run(capsys, *argv, "--format", fmt)
        second = run(capsys, *argv, "--format", fmt)
        assert first == second, argv
