import json

import pytest

from twistlab.cli import main


def run(tmp_path, *argv):
    out = tmp_path / "out.json"
    code = main(list(argv) + ["--out", str(out)])
    text = out.read_text() if out.exists() else ""
    return code, text


def test_tower_command(tmp_path):
    code, text = run(tmp_path, "tower", "--p", "2", "--q", "2", "--kmax", "2")
    assert code == 0
    data = json.loads(text)
    assert data["command"] == "tower"
    assert [lvl["m"] for lvl in data["result"]["levels"]] == [0, 1, 2]
    assert len(data["result"]["levels"][2]["defining_polynomial"]) == 5


def test_center_command_matches_expected_index(tmp_path):
    code, text = run(
        tmp_path, "center", "--p", "2", "--q", "2", "--n", "2", "--k", "2"
    )
    assert code == 0
    data = json.loads(text)
    assert data["result"]["index"] == 4
    assert data["result"]["k"] == 2


def test_simplicity_command(tmp_path):
    code, text = run(
        tmp_path, "simplicity", "--p", "2", "--q", "2", "--n", "2", "--k", "1",
        "--element", "1 + x1",
    )
    assert code == 0
    data = json.loads(text)
    assert data["result"]["audit_replay_ok"] is True
    assert len(data["result"]["trace"]["steps"]) == 1
    assert data["result"]["trace"]["final_unit"] == "x1"


def test_pi_test_command(tmp_path):
    code, text = run(
        tmp_path, "pi-test", "--p", "2", "--q", "2", "--n", "2", "--k", "1",
        "--degree", "4", "--trials", "50", "--seed", "7",
    )
    assert code == 0
    data = json.loads(text)
    assert data["result"]["report"]["vanish_count"] == 50
    assert "vanished" in data["result"]["verdict"]


def test_growth_command_csv(tmp_path):
    out = tmp_path / "table.csv"
    code = main(
        ["growth", "--p", "2", "--q", "2", "--n", "1", "--k", "1",
         "--nmax", "16", "--out", str(out)]
    )
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "N,dim"
    assert lines[1] == "0,1"
    assert lines[-1].startswith("# gk_estimate,")


def test_invert_command(tmp_path):
    code, text = run(
        tmp_path, "invert", "--p", "2", "--q", "2", "--n", "1", "--k", "1",
        "--element", "1 + x1",
    )
    assert code == 0
    data = json.loads(text)
    assert data["result"]["verification_product_equals_one"] is True


def test_center_probe_command(tmp_path):
    code, text = run(
        tmp_path, "center-probe", "--p", "2", "--q", "2", "--n", "1", "--k", "1",
        "--element", "x1^2", "--probe-level", "2",
    )
    assert code == 0
    assert json.loads(text)["result"]["commutes_at_probe_level"] is False


@pytest.mark.parametrize("p,q", [(2, 3), (3, 2)])
def test_verify_all_other_desk_configs(tmp_path, p, q):
    code, text = run(
        tmp_path, "verify-all", "--p", str(p), "--q", str(q), "--n", "2",
        "--trials", "40",
    )
    assert code == 0
    assert json.loads(text)["result"]["all_passed"] is True


def test_invert_with_denominator(tmp_path):
    code, text = run(
        tmp_path, "invert", "--p", "2", "--q", "2", "--n", "1", "--k", "1",
        "--element", "t*x1 + 1", "--den", "1 + x1^2",
    )
    assert code == 0
    data = json.loads(text)
    assert data["result"]["verification_product_equals_one"] is True


def test_budget_exceeded_exits_2(tmp_path):
    code, _ = run(tmp_path, "tower", "--p", "3", "--q", "3", "--kmax", "3")
    assert code == 2


def test_budget_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("TWISTLAB_FIELD_BUDGET", "8")
    code, _ = run(tmp_path, "tower", "--p", "2", "--q", "2", "--kmax", "2")
    assert code == 2  # 2^4 = 16 > 8
    monkeypatch.setenv("TWISTLAB_FIELD_BUDGET", "16")
    code, _ = run(tmp_path, "tower", "--p", "2", "--q", "2", "--kmax", "2")
    assert code == 0


def test_dependent_exponents_refused(tmp_path):
    code, _ = run(
        tmp_path, "verify-all", "--p", "2", "--q", "2", "--n", "2",
        "--exponents", "[[0],[0]]",
    )
    assert code == 2


def test_bad_element_literal_exits_2(tmp_path):
    code, _ = run(
        tmp_path, "invert", "--p", "2", "--q", "2", "--n", "1", "--k", "1",
        "--element", "x9 + ??",
    )
    assert code == 2


def test_config_file_supplies_defaults(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"p": 2, "q": 2, "n": 2, "k": 2}))
    code, text = run(tmp_path, "center", "--config", str(cfg))
    assert code == 0
    assert json.loads(text)["result"]["index"] == 4


def test_explicit_flags_beat_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"k": 2}))
    code, text = run(tmp_path, "center", "--config", str(cfg), "--k", "1")
    assert code == 0
    assert json.loads(text)["result"]["index"] == 2


def test_reports_embed_version_and_seed(tmp_path):
    import twistlab

    code, text = run(tmp_path, "center", "--seed", "99")
    data = json.loads(text)
    assert data["version"] == twistlab.__version__
    assert data["config"]["seed"] == 99


def test_script_entry_point():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "twistlab.cli", "center", "--p", "2", "--q", "2",
         "--n", "1", "--k", "1"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["index"] == 2
