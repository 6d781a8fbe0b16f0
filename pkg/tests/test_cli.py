# coding: utf-8
# pylint: disable=no-self-use

import json
import math
import os

import pytest
from mock import patch
from typer.testing import CliRunner

from anisoemit.cli import (
    EXIT_CHECK_FAILED,
    EXIT_INVALID_INPUT,
    EXIT_ROUTES_DISAGREE,
    EXIT_TOLERANCE,
    EXIT_VALIDATION_FAILED,
    app,
)
from anisoemit.config import TOL_ENV
from anisoemit.validation import check_names

runner = CliRunner()


@pytest.fixture(autouse=True)
def no_tol_env(monkeypatch):
    monkeypatch.delenv(TOL_ENV, raising=False)


def invoke(tmpdir, command, *extra, name="out"):
    """Run ``command`` (whitespace separated) plus ``extra`` arguments, writing to a file"""
    path = tmpdir.join(name)
    result = runner.invoke(app, [*command.split(), *extra, "--out", str(path)])
    return result, path


def read_json(path):
    return json.loads(path.read_text("utf8"))


class TestRate:
    def test_isotropic_csv(self, tmpdir):
        result, path = invoke(tmpdir, "rate --eps 4,4,4")

        assert result.exit_code == 0
        assert path.read_binary() == (
            b"gamma_normalized,method_tag,branch_1,gamma_1,branch_2,gamma_2,quad_order,quad_err\n"
            b"2,closed-form,ordinary,1.5,extraordinary,0.5,,\n"
        )

    def test_stdout(self):
        result = runner.invoke(app, ["rate", "--eps", "4,4,4", "--output", "json"])

        assert result.exit_code == 0
        assert json.loads(result.stdout)["gamma_normalized"] == 2.0

    def test_uniaxial(self, tmpdir):
        result, path = invoke(tmpdir, "rate --eps 1.5,5,5 --dipole 0,0,1 --output json")

        assert result.exit_code == 0
        row = read_json(path)
        assert row["gamma_normalized"] == pytest.approx(1.84476, abs=1e-5)
        assert row["method_tag"] == "closed-form"
        assert row["quad_order"] is None

    def test_numeric(self, tmpdir):
        result, path = invoke(tmpdir, "rate --eps 1.5,1.5,5 --method numeric --output json")

        assert result.exit_code == 0
        row = read_json(path)
        assert row["gamma_normalized"] == pytest.approx(math.sqrt(1.5), rel=1e-8)
        assert row["method_tag"] == "quadrature"
        assert row["quad_order"] >= 64
        assert row["quad_err"] < 1e-10

    def test_biaxial_defaults_to_quadrature(self, tmpdir):
        result, path = invoke(tmpdir, "rate --eps 1.5,3,5 --output json")

        assert result.exit_code == 0
        row = read_json(path)
        assert row["method_tag"] == "quadrature"
        assert (row["branch_1"], row["branch_2"]) == ("minus", "plus")
        assert abs(row["gamma_normalized"] - 1.50610) / row["gamma_normalized"] <= 0.02

    def test_model(self, tmpdir):
        result, path = invoke(tmpdir, "rate --eps 1.5,3,5 --method model --output json")

        assert result.exit_code == 0
        row = read_json(path)
        assert row["gamma_normalized"] == pytest.approx(1.50610, abs=1e-5)
        assert row["method_tag"] == "interpolation-model"
        assert row["branch_1"] is None

    def test_component_flags(self, tmpdir):
        result, path = invoke(
            tmpdir, "rate --eps-x 7 --eps-y 1 --eps-z 1 --dipole 1,0,0 --output json"
        )

        assert result.exit_code == 0
        assert read_json(path)["gamma_normalized"] == pytest.approx(1.0, rel=1e-14)

    def test_local_field(self, tmpdir):
        result, path = invoke(
            tmpdir, "rate --eps 7,1,1 --dipole 1,0,0 --local-field 1.2,1,1 --output json"
        )

        assert result.exit_code == 0
        assert read_json(path)["gamma_normalized"] == pytest.approx(1.44, rel=1e-14)

    def test_si(self, tmpdir):
        result, path = invoke(
            tmpdir, "rate --eps 4,4,4 --si --omega 2.4e15 --dipole-si 3.33564e-30"
        )

        assert result.exit_code == 0
        header, row = path.read_text("utf8").splitlines()
        assert header.endswith(",quad_err,gamma_absolute")
        absolute = float(row.split(",")[-1])
        epsilon_0, hbar, c = 8.8541878128e-12, 1.054571817e-34, 299792458.0
        vacuum = 2.4e15**3 * 3.33564e-30**2 / (3 * math.pi * epsilon_0 * hbar * c**3)
        assert absolute == pytest.approx(2.0 * vacuum, rel=1e-8)

    def test_config_file(self, tmpdir):
        config = tmpdir.join("run.yaml")
        config.write('eps: "7,1,1"\ndipole: "0,0,1"\noutput: json\n')

        result, path = invoke(tmpdir, "rate --dipole 1,0,0 --config", str(config))

        assert result.exit_code == 0
        assert read_json(path)["gamma_normalized"] == pytest.approx(1.0, rel=1e-14)

    @pytest.mark.parametrize(
        "command",
        [
            "rate --eps 1,-2,3",
            "rate --eps 1,2",
            "rate --dipole 0,0,1",
            "rate --eps 4,4,4 --dipole 0,0,0",
            "rate --eps 4,4,4 --method fastest",
            "rate --eps 2,3,4 --method closed",
            "rate --eps 4,4,4 --local-field 0,1,1 --dipole 1,0,0",
            "rate --eps 2,3,4 --local-field 0,1,1 --dipole 1,0,0",
        ],
    )
    def test_invalid_input(self, tmpdir, command):
        result, _ = invoke(tmpdir, command)
        assert result.exit_code == EXIT_INVALID_INPUT

    def test_invalid_environment(self, tmpdir):
        with patch.dict(os.environ, {TOL_ENV: "tiny"}):
            result, _ = invoke(tmpdir, "rate --eps 4,4,4")
        assert result.exit_code == EXIT_INVALID_INPUT

    def test_tolerance_not_reached(self, tmpdir):
        config = tmpdir.join("coarse.yaml")
        config.write("quadrature:\n  theta_rule: 4\n  phi_points: 8\n  max_order: 8\n")

        result, path = invoke(
            tmpdir,
            "rate --eps 2,3,4 --dipole 1,2,3 --tol 1e-15 --output json --config",
            str(config),
        )

        assert result.exit_code == EXIT_TOLERANCE
        row = read_json(path)
        assert row["gamma_normalized"] > 0
        assert row["quad_order"] == 8


class TestAngular:
    def test_csv(self, tmpdir):
        result, path = invoke(tmpdir, "angular --eps 4,4,4 --samples 3")

        assert result.exit_code == 0
        lines = path.read_binary().decode("utf8").split("\n")
        assert lines[0] == "theta_rad,f_theta"
        assert lines[1] == "0,0"
        assert len(lines) == 5
        assert lines[-1] == ""
        theta, f = (float(v) for v in lines[2].split(","))
        assert theta == pytest.approx(math.pi / 2)
        assert f == pytest.approx(2.0, rel=1e-14)

    def test_json(self, tmpdir):
        result, path = invoke(tmpdir, "angular --eps 1,7,7 --samples 11 --output json")

        assert result.exit_code == 0
        data = read_json(path)
        assert len(data["rows"]) == 11
        assert data["peaks"] == pytest.approx([0.339837, 2.801756], abs=1e-6)
        assert max(r["f_theta"] for r in data["rows"]) > data["rows"][5]["f_theta"]
        assert data["rows"][0]["n_e"] == pytest.approx(math.sqrt(7.0), rel=1e-14)
        assert data["rows"][5]["n_e"] == pytest.approx(1.0, rel=1e-14)

    def test_split_just_above_ratio_five_thirds(self, tmpdir):
        result, path = invoke(tmpdir, "angular --eps 1,1.6668333,1.6668333 --output json")

        assert result.exit_code == 0
        lower, upper = read_json(path)["peaks"]
        assert lower < math.pi / 2 < upper
        assert lower + upper == pytest.approx(math.pi, abs=1e-12)

    def test_peak_verification_failed(self, tmpdir):
        with patch("anisoemit.uniaxial.locate_peak", return_value=1.0):
            result, path = invoke(tmpdir, "angular --eps 1,7,7")

        assert result.exit_code == EXIT_CHECK_FAILED
        assert not path.exists()

    def test_theta_range(self, tmpdir):
        result, path = invoke(
            tmpdir, "angular --eps 2,1,1 --samples 2 --theta-range 90deg:180deg --output json"
        )

        assert result.exit_code == 0
        first, last = read_json(path)["rows"]
        assert first["theta_rad"] == pytest.approx(math.pi / 2)
        assert first["f_theta"] == pytest.approx(math.sqrt(2.0), rel=1e-12)
        assert last["theta_rad"] == pytest.approx(math.pi)

    @pytest.mark.parametrize(
        "command", ["angular --eps 1.5,3,5", "angular --eps 4,4,4 --theta-range 2:1"]
    )
    def test_invalid(self, tmpdir, command):
        result, _ = invoke(tmpdir, command)
        assert result.exit_code == EXIT_INVALID_INPUT


class TestSweep:
    def test_json(self, tmpdir):
        result, path = invoke(
            tmpdir, "sweep --eps-x 1.5 --eps-z 5 --sweep eps_y --range 1.5:5:3 --output json"
        )

        assert result.exit_code == 0
        data = read_json(path)
        first, middle, last = data["rows"]
        assert [r["eps_sweep"] for r in data["rows"]] == [1.5, 3.25, 5.0]
        assert first["rel_error"] <= 1e-8
        assert last["rel_error"] <= 1e-8
        assert middle["gamma_closed"] is None
        assert last["gamma_closed"] == pytest.approx(1.84476, abs=1e-5)
        assert data["max_rel_error"] <= 0.02
        assert data["mean_rel_error"] <= data["max_rel_error"]
        # one-sided interpolants, JSON only
        assert first["gamma_lin_x"] == pytest.approx(first["gamma_lin_y"], rel=1e-14)
        assert middle["gamma_model"] == pytest.approx(
            (middle["gamma_lin_x"] + middle["gamma_lin_y"]) / 2, rel=1e-12
        )

    def test_csv(self, tmpdir):
        result, path = invoke(tmpdir, "sweep --eps 1.5,1.5,5 --sweep eps_y --range 1.5:5:2")

        assert result.exit_code == 0
        header, *rows = path.read_binary().decode("utf8").splitlines()
        assert header.split(",") == [
            "eps_sweep",
            "gamma_numeric",
            "gamma_model",
            "gamma_closed",
            "rel_error",
            "quad_order",
            "quad_err",
        ]
        assert len(rows) == 2
        assert rows[0].startswith("1.5,")

    def test_byte_identical(self, tmpdir):
        command = "sweep --eps-x 6 --eps-z 4 --sweep eps_y --range 1:7:4"
        first, first_path = invoke(tmpdir, command, name="first.csv")
        second, second_path = invoke(tmpdir, command, name="second.csv")

        assert first.exit_code == second.exit_code == 0
        assert first_path.read_binary() == second_path.read_binary()

    @pytest.mark.parametrize(
        "command",
        [
            "sweep --eps 1.5,1.5,5 --sweep eps_y",
            "sweep --eps 1.5,1.5,5 --range 1:2:3",
            "sweep --eps 1.5,1.5,5 --sweep eps_w --range 1:2:3",
            "sweep --eps 1.5,1.5,5 --sweep eps_y --range 1:2:1",
        ],
    )
    def test_invalid(self, tmpdir, command):
        result, _ = invoke(tmpdir, command)
        assert result.exit_code == EXIT_INVALID_INPUT


class TestGreens:
    def test_isotropic(self, tmpdir):
        result, path = invoke(tmpdir, "greens --eps 4,4,4 --output json")

        assert result.exit_code == 0
        row = read_json(path)
        assert row["gamma_fermi"] == pytest.approx(2.0, rel=1e-10)
        assert row["gamma_greens"] == pytest.approx(2.0, rel=1e-10)
        assert row["rel_diff"] <= 1e-8
        assert row["completeness_defect"] <= 1e-12

    def test_csv_header(self, tmpdir):
        result, path = invoke(tmpdir, "greens --eps 2,3,4 --dipole 1,1,1")

        assert result.exit_code == 0
        assert path.read_text("utf8").splitlines()[0] == (
            "gamma_fermi,gamma_greens,abs_diff,rel_diff,completeness_defect"
        )

    def test_routes_disagree(self, tmpdir):
        with patch("anisoemit.cli.imag_greens_trace", return_value=3.0):
            result, path = invoke(tmpdir, "greens --eps 4,4,4 --output json")

        assert result.exit_code == EXIT_ROUTES_DISAGREE
        assert read_json(path)["rel_diff"] == pytest.approx(0.5, rel=1e-9)


class TestValidate:
    def test_default_suite(self, tmpdir):
        result, path = invoke(tmpdir, "validate")

        assert result.exit_code == 0
        report = read_json(path)
        assert report["passed"] is True
        assert report["quick"] is False
        assert [c["name"] for c in report["checks"]] == check_names()
        assert all(c["passed"] is True for c in report["checks"])

    def test_pass(self, tmpdir):
        result, path = invoke(tmpdir, "validate --quick --check model_forms")

        assert result.exit_code == 0
        report = read_json(path)
        assert report["passed"] is True
        assert report["quick"] is True
        assert report["seed"] == 0
        assert [c["name"] for c in report["checks"]] == ["model_forms"]

    def test_csv(self, tmpdir):
        result, path = invoke(
            tmpdir, "validate --quick --check peak_angles --check longitudinal_nullity --output csv"
        )

        assert result.exit_code == 0
        header, *rows = path.read_text("utf8").splitlines()
        assert header == "name,samples,worst_defect,threshold,passed"
        assert [r.split(",")[0] for r in rows] == ["peak_angles", "longitudinal_nullity"]
        assert all(r.endswith(",true") for r in rows)

    def test_inject_fault(self, tmpdir):
        result, path = invoke(
            tmpdir, "validate --quick --check longitudinal_nullity --inject-fault"
        )

        assert result.exit_code == EXIT_VALIDATION_FAILED
        report = read_json(path)
        assert report["passed"] is False
        assert report["checks"][-1]["name"] == "injected_fault"

    def test_reproducible(self, tmpdir):
        command = "validate --quick --seed 7 --check model_forms --check completeness"

        first, first_path = invoke(tmpdir, command, name="first.json")
        second, second_path = invoke(tmpdir, command, name="second.json")

        assert first.exit_code == second.exit_code == 0
        assert first_path.read_binary() == second_path.read_binary()

    def test_unknown_check(self, tmpdir):
        result, _ = invoke(tmpdir, "validate --check no_such_check")
        assert result.exit_code == EXIT_INVALID_INPUT
