import json
import math
from pathlib import Path

import pytest

from lossybounds.cli import main
from lossybounds.report import Report, format_value

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def write(tmp_path, text, name="exp.toml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_format_value():
    assert format_value(None) == ""
    assert format_value(True) == "true"
    assert format_value(0.1) == "0.1"
    assert format_value(math.inf) == "inf"


def test_report_requires_columns():
    rep = Report(("a", "pass"))
    with pytest.raises(KeyError):
        rep.add(a=1)
    rep.add(a=1, **{"pass": False})
    assert not rep.all_passed


def test_cantor_bounds_csv(tmp_path):
    out = tmp_path / "cantor.csv"
    cfg = write(tmp_path, 'task = "bounds"\nseed = 1\n[space]\ntype = "selfsimilar"\npreset = "cantor"\n'
                          '[params]\nn_range = [1, 64]\n')
    assert main(["bounds", "--config", cfg, "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].split(",")[:5] == ["space_id", "n", "L_n", "U_n", "v_hat"]
    assert len(lines) == 65
    assert float(lines[4].split(",")[4]) == pytest.approx(1 / 648, rel=1e-14)


def test_rd_lower_vmf(tmp_path, capsys):
    assert main(["rd-lower", "--config", str(CONFIGS / "vmf_rd_lower.toml")]) == 0
    rows = capsys.readouterr().out.splitlines()
    header = rows[0].split(",")
    assert header[:3] == ["D", "rate_lower", "h_plus_F"]
    offsets = [abs(float(r.split(",")[3])) for r in rows[1:]]
    assert offsets == sorted(offsets)


def test_missing_seed_exits_one(tmp_path, capsys):
    cfg = write(tmp_path, 'task = "bounds"\n[space]\ntype = "interval"\n[params]\nn_list = [1]\n')
    assert main(["bounds", "--config", cfg]) == 1
    assert "seed" in capsys.readouterr().err


def test_unknown_space_names_field(tmp_path, capsys):
    cfg = write(tmp_path, 'seed = 1\n[space]\ntype = "torus"\n[params]\nn_list = [1]\n')
    assert main(["bounds", "--config", cfg]) == 1
    assert "space.type" in capsys.readouterr().err


def test_missing_params_names_field(tmp_path, capsys):
    cfg = write(tmp_path, 'seed = 1\n[space]\ntype = "interval"\n')
    assert main(["rd-lower", "--config", cfg]) == 1
    assert "params.D_grid" in capsys.readouterr().err


def test_task_mismatch_and_bad_file(tmp_path):
    cfg = write(tmp_path, 'task = "bounds"\nseed = 1\n[space]\ntype = "interval"\n[params]\nn_list = [1]\n')
    assert main(["rd-lower", "--config", cfg]) == 1
    assert main(["bounds", "--config", str(tmp_path / "missing.toml")]) == 1
    assert main(["bounds"]) == 1


def test_violation_exits_two(tmp_path, monkeypatch, capsys):
    from lossybounds import cli

    def failing(space, model, params, seed, workers):
        rep = Report(("n", "pass"))
        rep.add(n=1, **{"pass": True})
        rep.add(n=2, **{"pass": False})
        return rep

    monkeypatch.setitem(cli.RUNNERS, "bounds", failing)
    cfg = write(tmp_path, 'seed = 1\n[space]\ntype = "interval"\n')
    assert main(["bounds", "--config", cfg, "--out", str(tmp_path / "r.csv")]) == 2
    assert capsys.readouterr().out.splitlines() == ["n=1  pass=true", "n=2  pass=false"]


def test_json_config_and_output(tmp_path):
    out = tmp_path / "rep.json"
    cfg = {"task": "volume-check", "seed": 3, "space": {"type": "sphere", "d": 3},
           "params": {"radii": [0.5], "samples": 20000}}
    path = write(tmp_path, json.dumps(cfg), "exp.json")
    assert main(["volume-check", "--config", path, "--out", str(out), "--format", "json"]) == 0
    data = json.loads(out.read_text())
    assert data["columns"][0] == "radius" and data["meta"]["seed"] == 3


def test_outputs_are_byte_identical(tmp_path):
    cfg = str(CONFIGS / "sphere_certificates.json")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify-cert", "--config", cfg, "--out", str(a)]) == 0
    assert main(["verify-cert", "--config", cfg, "--out", str(b), "--workers", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_seed_override_changes_monte_carlo(tmp_path):
    cfg = str(CONFIGS / "sphere_cap.toml")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["volume-check", "--config", cfg, "--out", str(a), "--seed", "1"])
    main(["volume-check", "--config", cfg, "--out", str(b), "--seed", "2"])
    assert a.read_bytes() != b.read_bytes()


def test_quantize_task(tmp_path):
    cfg = write(tmp_path, 'seed = 5\n[space]\ntype = "interval"\n[params]\nn_list = [1, 4]\nbudget = 40000\n')
    out = tmp_path / "q.csv"
    assert main(["quantize", "--config", cfg, "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 3


@pytest.mark.parametrize("config", sorted(p.name for p in CONFIGS.iterdir()))
def test_shipped_configs_are_valid(config, tmp_path):
    from lossybounds.cli import load_config
    data = load_config(CONFIGS / config)
    assert "seed" in data and data["task"] in ("bounds", "rd-lower", "multi-letter", "quantize",
                                                "volume-check", "verify-cert")
