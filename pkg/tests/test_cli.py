import json
import math
from pathlib import Path

import pytest

from pointscatter import config as cfg
from pointscatter.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, OUT_ENV, main

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

SOPERATOR = """\
command: soperator
potential:
  dimension: 2
  scatterers:
    - {position: [0.0, 0.0], alpha: 0.5}
    - {position: [1.0, 0.0], alpha: -0.3}
energy: 1.0
quadrature: {M: 64}
"""


def write(tmp_path, text, name="run.yaml"):
    path = tmp_path / name
    path.write_text(text)
    return path


def run(tmp_path, *args, out="out"):
    return main([*map(str, args), "--out", str(tmp_path / out)])


def test_soperator_example(tmp_path):
    assert run(tmp_path, "soperator", "--config", write(tmp_path, SOPERATOR)) == EXIT_OK
    lines = (tmp_path / "out" / "singular_values.csv").read_text().splitlines()
    assert lines[0] == "energy,index,sigma,sigma/sigma1"
    assert len(lines) == 65
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["status"] == "pass"
    assert {v["name"] for v in manifest["verdicts"]} == {"rank E=1", "unitarity E=1"}
    assert set(manifest["thresholds"]) == {"rank_threshold", "unitarity"}


def test_soliton_flags(tmp_path, capsys):
    assert run(tmp_path, "soliton", "--N", 4, "--kappas", "1,2,3,4") == EXIT_OK
    rows = (tmp_path / "out" / "transparency.csv").read_text().splitlines()
    assert rows[0] == "N,count,E_1"
    assert rows[1].startswith("4,1,")
    assert float(rows[1].split(",")[2]) == pytest.approx(5.0, rel=1e-12)
    assert "PASS  count law" in capsys.readouterr().out


def test_missing_dimension_names_the_field(tmp_path, capsys):
    bad = SOPERATOR.replace("  dimension: 2\n", "")
    assert run(tmp_path, "soperator", "--config", write(tmp_path, bad)) == EXIT_USAGE
    err = capsys.readouterr().err
    assert "dimension" in err and "run.yaml:3" in err


@pytest.mark.parametrize("edit, needle", [
    (("energy: 1.0", "energy: -1.0"), "energy"),
    (("M: 64", "M: 4"), "quadrature"),
    (("alpha: 0.5", "alpha: [0.5, 1.0]"), "experimental"),
    (("energy: 1.0", "energy: 1.0\nbogus: 3"), "bogus"),
    (("position: [1.0, 0.0]", "position: [0.0, 0.0]"), "potential"),
])
def test_config_errors_exit_2(tmp_path, capsys, edit, needle):
    assert run(tmp_path, "soperator", "--config", write(tmp_path, SOPERATOR.replace(*edit))) == EXIT_USAGE
    assert needle in capsys.readouterr().err


def test_usage_errors(tmp_path):
    assert run(tmp_path, "soperator") == EXIT_USAGE
    assert run(tmp_path, "soperator", "--config", tmp_path / "missing.yaml") == EXIT_USAGE
    assert run(tmp_path, "soliton", "--N", 3, "--kappas", "1,2") == EXIT_USAGE
    assert run(tmp_path, "amplitude", "--N", 3) == EXIT_USAGE
    assert run(tmp_path, "nonsense") == EXIT_USAGE
    assert run(tmp_path, "soliton", "--N", 3, "--threads", 0) == EXIT_USAGE
    assert run(tmp_path, "soperator", "--config", write(tmp_path, "a: [1, 2\n")) == EXIT_USAGE


def test_resonance_becomes_failed_verdict(tmp_path, capsys):
    text = f"""\
potential:
  dimension: 3
  experimental: true
  scatterers:
    - {{position: [0, 0, 0], alpha: [0.0, {1 / (4 * math.pi)!r}]}}
energy: 1.0
quadrature: {{M: 32}}
"""
    assert run(tmp_path, "soperator", "--config", write(tmp_path, text)) == EXIT_FAIL
    assert "ResonanceError" in capsys.readouterr().out
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["status"] == "fail"


def test_rank_violation_fails(tmp_path):
    strict = SOPERATOR + "tolerances: {rank_threshold: 1.0e-20}\n"
    assert run(tmp_path, "soperator", "--config", write(tmp_path, strict)) == EXIT_FAIL


def test_outputs_are_byte_stable(tmp_path):
    path = write(tmp_path, SOPERATOR)
    run(tmp_path, "soperator", "--config", path, out="a")
    main(["soperator", "--config", str(path), "--out", str(tmp_path / "b"), "--threads", "3"])
    for name in ("singular_values.csv", "manifest.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_env_var_sets_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv(OUT_ENV, str(tmp_path / "env"))
    assert main(["soliton", "--N", "3"]) == EXIT_OK
    assert (tmp_path / "env" / "manifest.json").exists()


@pytest.mark.parametrize("name, command", [
    ("amplitude_d2", "amplitude"),
    ("soperator_d2", "soperator"),
    ("kernel_d2", "kernel"),
    ("delta_limit", "delta-limit"),
    ("ite_d2", "ite"),
    ("box_bound", "box-bound"),
])
def test_shipped_configs_pass(tmp_path, name, command):
    assert run(tmp_path, command, "--config", CONFIGS / f"{name}.yaml", "--threads", 2) == EXIT_OK


def test_amplitude_csv_columns(tmp_path):
    run(tmp_path, "amplitude", "--config", CONFIGS / "amplitude_d2.yaml")
    header = (tmp_path / "out" / "amplitude.csv").read_text().splitlines()[0]
    assert header == "energy,theta_in,theta_out,Re(f),Im(f),Re(f+),Im(f+)"


def test_line_lookup_for_nested_field(tmp_path):
    text = SOPERATOR.replace("alpha: -0.3", "alpha: oops")
    with pytest.raises(cfg.ConfigError, match=r"run.yaml:6: potential.scatterers.1.alpha"):
        cfg.load("soperator", write(tmp_path, text))


def test_config_hash_ignores_formatting(tmp_path):
    a = cfg.load("soperator", write(tmp_path, SOPERATOR, "a.yaml"))
    b = cfg.load("soperator", write(tmp_path, "# comment\n" + SOPERATOR.replace("{M: 64}", "\n  M: 64"), "b.yaml"))
    assert a.sha256() == b.sha256()


def test_parse_complex():
    assert cfg.parse_complex("1+0.5j") == 1 + 0.5j
    assert cfg.parse_complex([2, -1]) == 2 - 1j
    assert cfg.parse_complex(3) == 3
