import io
import json
import math

import pytest

from strongmax.cli import EXIT_INVALID, EXIT_OK, EXIT_TARGET_MISSED, RunConfig, main
from strongmax.utils.exceptions import InvalidInputError
from strongmax.utils.writers import dump_json, format_number, write_csv

INTERVAL = '{"shape": "cube", "half_width": 1}'
SQUARE = '{"shape": "cube", "half_width": 1, "dim": 2}'
BALL = '{"shape": "ball", "radius": 1, "dim": 2}'


def _run(capsys, *argv):
    status = main(list(argv))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


def _csv_rows(path):
    lines = path.read_text().splitlines()
    return lines[0], [line.split(",") for line in lines[1:]]


def test_format_number():
    assert format_number(3) == "3"
    assert format_number(0.1) == "0.1"
    assert format_number("grid") == "grid"
    assert format_number(math.nan) == "nan"


def test_write_csv(tmp_path):
    path = tmp_path / "out.csv"
    count = write_csv(path, ("a", "b"), [(1, 0.5), (2, "x")])
    assert count == 2
    assert path.read_text() == "# a,b\n1,0.5\n2,x\n"


def test_dump_json_nan():
    stream = io.StringIO()
    dump_json({"b": math.nan, "a": [1.0, math.inf]}, stream)
    assert json.loads(stream.getvalue()) == {"a": [1.0, None], "b": None}
    assert stream.getvalue().endswith("\n")


def test_run_config_validation():
    with pytest.raises(InvalidInputError):
        RunConfig("certify", resolution=1)
    with pytest.raises(InvalidInputError):
        RunConfig("certify", lambda_min=1e-2, lambda_max=1e-3)
    with pytest.raises(InvalidInputError):
        RunConfig("certify", points_per_decade=0)
    assert len(RunConfig("certify", lambda_min=1e-3, lambda_max=1.0).lambdas) == 37


def test_lemma_volume(capsys):
    status, out, _ = _run(
        capsys, "lemma-volume", "--n", "1", "--R", "1", "--r", "0.5", "--c", "10"
    )
    assert status == EXIT_OK
    result = json.loads(out)
    assert result["closed_form"] == pytest.approx(8.5)
    assert result["coefficients"] == [1.0]
    assert result["normalized"] == ["1"]
    assert "mc_estimate" not in result


def test_lemma_volume_with_monte_carlo(capsys):
    argv = "lemma-volume --n 2 --R 1.5 --r 0.5 --c 100 --mc-samples 200000 --seed 7"
    status, out, _ = _run(capsys, *argv.split())
    assert status == EXIT_OK
    result = json.loads(out)
    assert result["closed_form"] == pytest.approx(225.888, abs=1e-3)
    assert result["normalized"] == ["-1", "1"]
    assert abs(result["mc_estimate"] - result["closed_form"]) <= 4 * result["mc_stderr"]
    assert result["mc_samples"] == 200000
    assert result["seed"] == 7


def test_lemma_volume_precondition(capsys):
    status, out, err = _run(
        capsys, "lemma-volume", "--n", "2", "--R", "1", "--r", "1", "--c", "1"
    )
    assert status == EXIT_INVALID
    assert out == ""
    assert "c > (R+r)^n" in err


def test_limit_scan(capsys, tmp_path):
    output = tmp_path / "scan.csv"
    status, out, _ = _run(
        capsys,
        "limit-scan",
        "--function",
        INTERVAL,
        *f"--points-per-decade 4 --output {output}".split(),
    )
    assert status == EXIT_OK
    summary = json.loads(out)
    assert summary["target"] == 4.0
    assert summary["method"] == "separable"
    assert summary["relative_gap"] < 0.002
    header, rows = _csv_rows(output)
    assert header == "# lambda,measure,weighted,u,method"
    assert len(rows) == summary["points"] == 25
    assert all(row[-1] == "separable" for row in rows)
    assert float(rows[0][0]) > float(rows[-1][0])


def test_limit_scan_max_gap(capsys):
    status, out, _ = _run(
        capsys,
        "limit-scan",
        "--function",
        INTERVAL,
        *"--points-per-decade 2 --max-gap 1e-12".split(),
    )
    assert status == EXIT_TARGET_MISSED
    assert json.loads(out)["relative_gap"] > 1e-12


def test_limit_scan_toward_infinity(capsys, tmp_path):
    output = tmp_path / "scan.csv"
    status, out, _ = _run(
        capsys,
        "limit-scan",
        "--function",
        SQUARE,
        *"--direction infinity --lambda-min 0.5 --lambda-max 100".split(),
        *f"--points-per-decade 2 --output {output}".split(),
    )
    assert status == EXIT_OK
    summary = json.loads(out)
    assert summary["extrapolated"] is None
    _, rows = _csv_rows(output)
    for row in rows:
        if float(row[0]) > 1:
            assert float(row[2]) == 0.0
            assert row[3] == "nan"


def test_limit_scan_determinism(capsys, tmp_path):
    outputs = []
    for name in ("first.csv", "second.csv"):
        path = tmp_path / name
        _, out, _ = _run(
            capsys,
            "limit-scan",
            "--function",
            SQUARE,
            *"--lambda-min 1e-6 --lambda-max 1e-2 --points-per-decade 2".split(),
            "--output",
            str(path),
        )
        outputs.append((path.read_bytes(), out))
    assert outputs[0] == outputs[1]


def test_certify(capsys):
    status, out, _ = _run(
        capsys, "certify", "--function", SQUARE, "--points-per-decade", "2"
    )
    assert status == EXIT_OK
    certificate = json.loads(out)
    assert certificate["achieved"] >= 3.8
    assert certificate["passed"] is True
    assert certificate["function"]["shape"] == "cube"


def test_certify_shallow_range(capsys):
    status, out, _ = _run(
        capsys,
        "certify",
        "--function",
        SQUARE,
        *"--lambda-min 0.5 --lambda-max 1".split(),
    )
    assert status == EXIT_TARGET_MISSED
    assert json.loads(out)["passed"] is False


def test_certify_centered_ball(capsys):
    status, out, _ = _run(
        capsys,
        "certify",
        "--function",
        BALL,
        *"--variant centered --lambda-min 0.9 --lambda-max 0.999".split(),
        *"--resolution 32".split(),
    )
    assert status == EXIT_OK
    assert json.loads(out)["achieved"] >= 0.95


def test_certify_tall_function(capsys):
    status, _, err = _run(
        capsys,
        "certify",
        "--function",
        '{"shape": "cube", "half_width": 1, "height": 2}',
    )
    assert status == EXIT_INVALID
    assert "height" in err


def test_maximal(capsys, tmp_path):
    output = tmp_path / "field.csv"
    descriptor = (
        '{"shape": "cube", "half_width": 1, "box_lo": [-2], "box_hi": [2], '
        '"cells": [4]}'
    )
    status, out, _ = _run(
        capsys, "maximal", "--function", descriptor, "--output", str(output)
    )
    assert status == EXIT_OK
    summary = json.loads(out)
    assert summary["cells"] == [4]
    assert summary["max"] == 1.0
    assert summary["bilinear"] is False
    header, rows = _csv_rows(output)
    assert header == "# x0,value,method"
    assert [row[0] for row in rows] == ["-1.5", "-0.5", "0.5", "1.5"]
    assert float(rows[0][1]) == pytest.approx(2 / 3)
    assert rows[1][1] == "1.0"
    assert all(row[2] == "grid" for row in rows)


def test_maximal_bilinear(capsys):
    status, out, _ = _run(
        capsys,
        "maximal",
        "--function",
        SQUARE,
        "--g-function",
        SQUARE,
        *"--resolution 16".split(),
    )
    assert status == EXIT_OK
    summary = json.loads(out)
    assert summary["bilinear"] is True
    assert summary["cells"] == [16, 16]


def test_distribution(capsys, tmp_path):
    output = tmp_path / "curve.csv"
    status, out, _ = _run(
        capsys,
        "distribution",
        "--function",
        BALL,
        *"--resolution 16 --lambda-min 0.01 --lambda-max 0.9".split(),
        *f"--points-per-decade 3 --output {output}".split(),
    )
    assert status == EXIT_OK
    summary = json.loads(out)
    assert summary["method"] == "grid"
    assert summary["weak_phi_norm"] > 0
    header, rows = _csv_rows(output)
    assert header == "# lambda,measure,weighted,uncertainty,method"
    assert len(rows) == summary["points"]
    measures = [float(row[1]) for row in rows]
    assert measures == sorted(measures, reverse=True)


def test_distribution_hybrid(capsys, tmp_path):
    output = tmp_path / "curve.csv"
    status, out, _ = _run(
        capsys,
        "distribution",
        "--function",
        SQUARE,
        *"--method hybrid --resolution 36 --lambda-min 1e-6 --lambda-max 1e-3".split(),
        *f"--points-per-decade 1 --output {output}".split(),
    )
    assert status == EXIT_OK
    assert json.loads(out)["method"] == "hybrid"
    _, rows = _csv_rows(output)
    assert all(float(row[3]) > 0 for row in rows)


def test_oracle_check(capsys):
    status, out, _ = _run(capsys, "oracle-check", "--trials", "2", "--seed", "3")
    assert status == EXIT_OK
    assert json.loads(out) == {"passed": 6, "failed": 0, "trials": 2}


@pytest.mark.parametrize(
    "argv",
    [
        ["certify", "--function", "{not json"],
        ["certify", "--function", SQUARE, "--n", "1"],
        ["certify", "--function", INTERVAL, *"--lambda-min 1 --lambda-max 0.1".split()],
        [
            "limit-scan",
            "--function",
            SQUARE,
            *"--variant centered --method hybrid".split(),
        ],
        ["maximal", "--function", BALL, "--resolution", "1"],
        ["distribution", "--function", BALL, "--method", "separable"],
    ],
)
def test_invalid_input_exits_2(capsys, argv):
    status, out, err = _run(capsys, *argv)
    assert status == EXIT_INVALID
    assert out == ""
    assert err.startswith("strongmax: error:")


def test_missing_required_flag():
    with pytest.raises(SystemExit) as excinfo:
        main(["certify"])
    assert excinfo.value.code == 2
