import json
import numpy as np
import pytest

from cosetwalk import examples as ex
from cosetwalk.cli import main
from cosetwalk.io import (
    WalkFileError,
    dumps_walk,
    loads_walk,
    save_dispersion_csv,
)
from cosetwalk.spectral import dispersion_grid
from cosetwalk.walks import unitarity_residual


@pytest.mark.parametrize("maker", [
    lambda: ex.g1_walk(ex.G1Params("II", 0.6, 0.8, -1)),
    lambda: ex.g2_walk("I"),
    lambda: ex.g2_walk("II"),
], ids=["g1", "g2-I", "g2-II"])
def test_walk_file_round_trip_is_byte_identical(maker):
    walk = maker()
    text = dumps_walk(walk)
    rebuilt = loads_walk(text)
    assert dumps_walk(rebuilt) == text
    residual, _ = unitarity_residual(rebuilt)
    assert residual < 1e-12


def test_document_is_valid_json(g2_one):
    doc = json.loads(dumps_walk(g2_one))
    assert doc["dimension"] == 2
    assert doc["index"] == 2
    assert doc["coin_dim"] == 2
    assert doc["generators"] == [["a", "a^-1"], ["b", "b^-1"]]


def test_parse_error_reports_position():
    with pytest.raises(WalkFileError, match="line"):
        loads_walk("{ not json")


def test_parse_error_reports_field():
    with pytest.raises(WalkFileError, match="dimension"):
        loads_walk("{}")
    with pytest.raises(WalkFileError, match="transitions"):
        loads_walk(
            '{"dimension": 1, "index": 1, "coin_dim": 1, "generators": [["t", "t^-1"]],'
            '"relators": [], "rep_words": [[]], "table": [], "transitions": {"q": []}}'
        )


def test_dispersion_csv_format(tmp_path, g2_one):
    grid = dispersion_grid(g2_one, 5)
    path = tmp_path / "grid.csv"
    save_dispersion_csv(grid, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "k_1,k_2,omega_1,omega_2,omega_3,omega_4"
    assert len(lines) == 1 + 25
    for line in lines[1:]:
        values = [float(x) for x in line.split(",")]
        omegas = values[2:]
        assert omegas == sorted(omegas)
        assert all(-np.pi < w <= np.pi + 1e-15 for w in omegas)


# --- CLI ---------------------------------------------------------------------


def test_cli_export_then_validate(tmp_path, capsys):
    out = tmp_path / "g1.json"
    assert main(["show-example", "g1", "--out", str(out)]) == 0
    assert main(["validate", str(out), "--isotropy", "sigma_x"]) == 0
    text = capsys.readouterr().out
    assert "unitarity: ok" in text
    assert "isotropy: ok" in text


def test_cli_validate_rejects_corrupted_table(tmp_path, capsys):
    out = tmp_path / "g2.json"
    assert main(["show-example", "g2", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    doc["table"][2][3] = [5, 0]  # break one displacement vector
    out.write_text(json.dumps(doc))
    assert main(["validate", str(out)]) == 1
    assert "relator" in capsys.readouterr().out


def test_cli_validate_empty_file(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text("")
    assert main(["validate", str(path)]) == 2
    assert "parse error" in capsys.readouterr().err


def test_cli_dispersion_oracle(tmp_path):
    out = tmp_path / "d.csv"
    assert main([
        "dispersion", "--example", "g2", "--grid", "9", "--oracle", "--out", str(out)
    ]) == 0
    assert out.exists()
    assert main([
        "dispersion", "--example", "g1",
        "--params", "n=0.6,m=0.8,class=I,sign=-",
        "--grid", "9", "--oracle",
    ]) == 0


def test_cli_dispersion_grid_usage_error(capsys):
    assert main(["dispersion", "--example", "g2", "--grid", "1"]) == 2
    assert "grid" in capsys.readouterr().err


def test_cli_dispersion_deterministic_output(tmp_path):
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    args = ["dispersion", "--example", "g2", "--grid", "7", "--out"]
    assert main(args + [str(first)]) == 0
    assert main(args + [str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_cli_evolve_reports_norm_drift(tmp_path, capsys):
    out = tmp_path / "prob.csv"
    assert main([
        "evolve", "--example", "g1", "--torus", "16", "--steps", "10",
        "--init", "delta", "--out", str(out)
    ]) == 0
    text = capsys.readouterr().out
    drift = float(text.split("norm drift after 10 steps:")[1].split()[0])
    assert drift < 1e-12
    assert out.exists()


def test_cli_evolve_zero_steps_keeps_distribution(tmp_path):
    moved = tmp_path / "a.csv"
    assert main([
        "evolve", "--example", "g2", "--torus", "8", "--steps", "0",
        "--init", "delta", "--out", str(moved)
    ]) == 0
    lines = moved.read_text().strip().splitlines()[1:]
    total = {}
    for line in lines:
        s1, s2, coset, p = line.split(",")
        total[(int(s1), int(s2), int(coset))] = float(p)
    assert total[(0, 0, 0)] == pytest.approx(1.0)
    assert sum(total.values()) == pytest.approx(1.0)


def test_cli_evolve_torus_too_small(capsys):
    assert main(["evolve", "--example", "g1", "--torus", "2", "--steps", "1"]) == 2
    assert "torus" in capsys.readouterr().err


def test_cli_unknown_example(capsys):
    assert main(["dispersion", "--example", "g9", "--grid", "5"]) == 2
    assert "unknown example" in capsys.readouterr().err


def test_cli_missing_source(capsys):
    assert main(["validate"]) == 2


def test_cli_bad_params(capsys):
    assert main([
        "dispersion", "--example", "g1", "--params", "n=0.6,m=0.7", "--grid", "5"
    ]) == 2


def test_cli_suite(capsys):
    assert main(["suite", "--samples", "40", "--seed", "7"]) == 0
    text = capsys.readouterr().out
    assert "scalar_walks_rejected" in text
    assert "FAIL" not in text


def test_cli_planewave_init(capsys):
    assert main([
        "evolve", "--example", "g2", "--torus", "8", "--steps", "5",
        "--init", "planewave", "--momentum", "1,2"
    ]) == 0
    drift = float(capsys.readouterr().out.split("norm drift after 5 steps:")[1].split()[0])
    assert drift < 1e-12
