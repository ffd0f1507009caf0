import json
import subprocess
import sys

import numpy as np
import pytest

from twonorm import SpaceSpec, build_space
from twonorm.basis import orthonormal_columns
from twonorm.cli import main
from twonorm.config import (
    DEFAULT_TOLERANCES,
    RunConfig,
    config_from_mapping,
    load_config,
    load_frame_matrix,
)
from twonorm.sampling import random_complex, rng_for_trial
from twonorm.serialize import json_dumps, matrix_to_json


def write_config(tmp_path, name="cfg.json", **entries):
    p = tmp_path / name
    p.write_text(json.dumps(entries))
    return str(p)


def orthonormal_frame_payload(cols=2):
    g = build_space(SpaceSpec(domain_dim=1, grid_points=16, spacing=0.25))
    F = orthonormal_columns(random_complex(rng_for_trial(3, 3), g.n, cols), g)
    return matrix_to_json(F)


# -- configuration ----------------------------------------------------------


def test_default_config_tolerances():
    cfg = RunConfig()
    for key, value in DEFAULT_TOLERANCES.items():
        assert cfg.tolerance(key) == value
    with pytest.raises(KeyError):
        cfg.tolerance("unheard_of")


def test_config_rejects_bad_fields():
    with pytest.raises(ValueError):
        RunConfig(seed=-1)
    with pytest.raises(ValueError):
        RunConfig(seed=2**64)
    with pytest.raises(ValueError):
        RunConfig(subspace_dim=0)
    with pytest.raises(ValueError):
        RunConfig(subspace_dim=99)
    with pytest.raises(ValueError):
        RunConfig(trials=0)
    with pytest.raises(ValueError):
        RunConfig(tolerances={"unknown": 0.5})
    with pytest.raises(ValueError):
        RunConfig(tolerances={"sqrt": 2.0})


def test_mapping_rejects_unknown_keys():
    with pytest.raises(ValueError):
        config_from_mapping({"sede": 1})
    with pytest.raises(ValueError):
        config_from_mapping({"space": {"grid_pts": 8}})
    with pytest.raises(ValueError):
        config_from_mapping([])


def test_mapping_parses_norms():
    assert config_from_mapping({"norm": "operator_h1"}).norm.label == "operator_h1"
    assert (
        config_from_mapping({"norm": {"kind": "schatten_p", "p": 1}}).norm.label
        == "schatten_1"
    )
    assert (
        config_from_mapping({"norm": {"kind": "schatten_p", "p": "inf"}}).norm.label
        == "schatten_inf"
    )
    with pytest.raises(ValueError):
        config_from_mapping({"norm": {"kind": "nuclear"}})
    with pytest.raises(ValueError):
        config_from_mapping({"norm": {"kind": "operator_h1", "p": 2}})


def test_load_config_round_trip(tmp_path):
    path = write_config(
        tmp_path,
        seed=7,
        trials=5,
        space={"grid_points": 8, "spacing": 0.5},
        tolerances={"sqrt": 1e-9},
    )
    cfg = load_config(path)
    assert cfg.seed == 7
    assert cfg.trials == 5
    assert cfg.space.grid_points == 8
    assert cfg.tolerance("sqrt") == 1e-9
    # Untouched keys keep their defaults.
    assert cfg.tolerance("section") == DEFAULT_TOLERANCES["section"]


def test_load_config_bad_files(tmp_path):
    with pytest.raises(ValueError):
        load_config(str(tmp_path / "absent.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ValueError):
        load_config(str(broken))


def test_frame_file_validation(tmp_path):
    good = tmp_path / "frame.json"
    good.write_text(json_dumps(orthonormal_frame_payload()))
    cfg = load_config(write_config(tmp_path, frame_file=str(good)))
    F = load_frame_matrix(cfg)
    assert F.shape == (16, 2)

    skewed = tmp_path / "skewed.json"
    skewed.write_text(json_dumps(matrix_to_json(np.ones((16, 2)))))
    with pytest.raises(ValueError):
        load_config(write_config(tmp_path, name="cfg2.json", frame_file=str(skewed)))

    wrong_shape = tmp_path / "narrow.json"
    wrong_shape.write_text(json_dumps(orthonormal_frame_payload(cols=3)))
    with pytest.raises(ValueError):
        load_config(write_config(tmp_path, name="cfg3.json", frame_file=str(wrong_shape)))


# -- command line -----------------------------------------------------------


def test_usage_errors_exit_two(tmp_path, capsys):
    assert main([]) == 2
    assert main(["no-such-command"]) == 2
    assert main(["validate", "--config", str(tmp_path / "absent.json")]) == 2
    capsys.readouterr()


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    capsys.readouterr()


def test_validate_writes_report(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["validate", "--trials", "2", "--out", str(out)]) == 0
    report = json.loads((out / "validate.json").read_text())
    assert report["all_passed"] is True
    assert report["trials"] == 2
    assert {s["suite"] for s in report["suites"]} >= {"space", "group", "section"}
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == len(report["suites"])


@pytest.mark.parametrize(
    "command,artifact",
    [
        ("validate", "validate.json"),
        ("section-demo", "section_demo.csv"),
        ("sqrt-bench", "sqrt_bench.csv"),
        ("geometry", "geometry.csv"),
    ],
)
def test_double_runs_are_byte_identical(tmp_path, capsys, command, artifact):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main([command, "--trials", "2", "--out", str(a)]) == 0
    assert main([command, "--trials", "2", "--out", str(b)]) == 0
    capsys.readouterr()
    assert (a / artifact).read_bytes() == (b / artifact).read_bytes()


def test_seed_changes_section_table(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["section-demo", "--trials", "2", "--out", str(a), "--seed", "1"]) == 0
    assert main(["section-demo", "--trials", "2", "--out", str(b), "--seed", "2"]) == 0
    capsys.readouterr()
    assert (a / "section_demo.csv").read_bytes() != (b / "section_demo.csv").read_bytes()


def test_frame_file_reference_is_used(tmp_path, capsys):
    frame = tmp_path / "frame.json"
    frame.write_text(json_dumps(orthonormal_frame_payload()))
    cfg = write_config(tmp_path, trials=2, frame_file=str(frame))
    out = tmp_path / "run"
    assert main(["validate", "--config", cfg, "--out", str(out)]) == 0
    capsys.readouterr()


def test_non_orthonormal_frame_exits_two(tmp_path, capsys):
    frame = tmp_path / "frame.json"
    frame.write_text(json_dumps(matrix_to_json(np.ones((16, 2)))))
    cfg = write_config(tmp_path, frame_file=str(frame))
    assert main(["validate", "--config", cfg]) == 2
    assert "configuration error" in capsys.readouterr().err


def test_unattainable_tolerance_exits_one(tmp_path, capsys):
    cfg = write_config(tmp_path, trials=2, tolerances={"sqrt": 1e-18})
    out = tmp_path / "run"
    assert main(["sqrt-bench", "--config", cfg, "--out", str(out)]) == 1
    capsys.readouterr()


def test_module_entry_point(tmp_path):
    out = tmp_path / "run"
    proc = subprocess.run(
        [sys.executable, "-m", "twonorm", "validate", "--trials", "1", "--out", str(out)],
        capture_output=True,
        text=True,
        timeout=300,
    )
    assert proc.returncode == 0, proc.stderr
    assert (out / "validate.json").exists()
