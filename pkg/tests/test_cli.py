import json
from pathlib import Path

import pytest
import sympy

from trlimits.cli import (
    EXIT_FAILURE,
    EXIT_NON_ADMISSIBLE,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_UNSUPPORTED,
    TypeWindow,
    exit_code_for,
    parse_point_list,
)
from trlimits.cli.main import main
from trlimits.errors import (
    DomainError,
    FieldExtensionRequiredError,
    NonAdmissibleError,
    ParseError,
    TransalgebraicCurveError,
    UnsupportedGenusError,
)

w0 = sympy.Symbol("w0")


def make_spec(tmp_path: Path, document, name: str = "spec.json") -> str:
    path = tmp_path / name
    path.write_text(document if isinstance(document, str) else json.dumps(document), encoding="utf-8")
    return str(path)


def make_rs_spec(tmp_path: Path, r: int, s: int) -> str:
    return make_spec(tmp_path, {"name": f"({r},{s})", "parametrization": {"x": f"w^{r}", "y": f"w^({s - r})"}})


def run_cli(capsys, *argv: str) -> tuple[int, dict]:
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_exit_codes() -> None:
    assert exit_code_for(NonAdmissibleError("x")) == EXIT_NON_ADMISSIBLE
    assert exit_code_for(UnsupportedGenusError(1)) == EXIT_UNSUPPORTED
    assert exit_code_for(TransalgebraicCurveError("exp")) == EXIT_UNSUPPORTED
    assert exit_code_for(FieldExtensionRequiredError("root", polynomial="w^5 - w - 1")) == EXIT_UNSUPPORTED
    assert exit_code_for(ParseError("bad", line=1, column=2)) == EXIT_PARSE
    assert exit_code_for(DomainError("other")) == EXIT_FAILURE


def test_type_window() -> None:
    assert TypeWindow().types() == [(0, 3), (1, 1)]
    assert TypeWindow(2, gmax=0).types() == [(0, 3), (0, 4)]
    assert TypeWindow(2, nmax=1).types() == [(1, 1)]


def test_point_lists() -> None:
    assert parse_point_list("0,0 2,3 1,1") == [(0, 0), (2, 3), (1, 1)]
    assert parse_point_list("[[0, 0], [4, 1]]") == [(0, 0), (4, 1)]
    with pytest.raises(ParseError):
        parse_point_list("")
    with pytest.raises(ParseError):
        parse_point_list("1,2,3")


def test_check_curve_on_an_admissible_point(tmp_path, capsys) -> None:
    code, report = run_cli(capsys, "check-curve", make_rs_spec(tmp_path, 5, 3))

    assert code == EXIT_OK
    assert report["command"] == "check-curve"
    assert report["verdicts"]["locally_admissible"] == "yes"
    assert report["verdicts"]["globalisable above 0"] == "yes"
    assert "lA1" in report["provenance"]["locally_admissible"]
    assert {row["r"] for row in report["payload"]["ramification"]} == {5}


def test_check_curve_reports_the_failed_clause(tmp_path, capsys) -> None:
    code, report = run_cli(capsys, "check-curve", make_rs_spec(tmp_path, 7, 5))

    assert code == EXIT_OK
    assert report["verdicts"]["locally_admissible"] == "no (lA2)"


def test_check_curve_on_local_data(tmp_path, capsys) -> None:
    spec = make_spec(
        tmp_path,
        {
            "fibers": [
                {"base": "0", "points": [{"r": 3, "s_bar": 2}, {"r": 3, "s_bar": 2}]},
                {"base": "1", "points": [{"r": 2, "s_bar": 1}]},
            ]
        },
    )
    code, report = run_cli(capsys, "check-curve", spec)

    assert code == EXIT_OK
    assert report["verdicts"]["globalisable above 0"] == "unknown"
    assert report["verdicts"]["globalisable above 1"] == "yes"
    assert "locally_admissible" not in report["verdicts"]


def test_check_curve_with_a_polynomial_gives_the_polygon_verdict(tmp_path, capsys) -> None:
    spec = make_spec(tmp_path, {"polynomial": "x^2*y^5 - 1"})
    code, report = run_cli(capsys, "check-curve", spec)

    assert code == EXIT_OK
    assert report["verdicts"]["gamma_admissible"] in ("yes", "no")
    assert "GA1" in report["provenance"]["gamma_admissible"]


def test_parse_errors_carry_the_position(tmp_path, capsys) -> None:
    code, report = run_cli(capsys, "check-curve", make_spec(tmp_path, '{"parametrization": '))

    assert code == EXIT_PARSE
    assert report["error"]["type"] == "ParseError"
    assert report["error"]["line"] == 1


def test_unsupported_inputs(tmp_path, capsys) -> None:
    genus_one = make_spec(tmp_path, {"polynomial": "y^2 - x^3 - x - 1"}, "genus.json")
    code, report = run_cli(capsys, "check-curve", genus_one)
    assert code == EXIT_UNSUPPORTED
    assert report["error"]["type"] == "UnsupportedGenusError"

    exponential = make_spec(tmp_path, {"parametrization": {"x": "exp(w)", "y": "w"}}, "exp.json")
    code, report = run_cli(capsys, "correlators", exponential)
    assert code == EXIT_UNSUPPORTED
    assert report["error"]["type"] == "TransalgebraicCurveError"


def test_missing_file_is_a_failure(tmp_path, capsys) -> None:
    code, report = run_cli(capsys, "check-curve", str(tmp_path / "absent.json"))

    assert code == EXIT_FAILURE
    assert report["error"]["type"] == "ConfigurationError"


def test_correlators_of_the_three_one_curve(tmp_path, capsys) -> None:
    code, report = run_cli(capsys, "correlators", make_rs_spec(tmp_path, 3, 1))

    assert code == EXIT_OK
    assert report["backend"] == "exact"
    assert report["verdicts"]["certified"] == "yes"
    assert sorted(report["payload"]["correlators"]) == ["0,3", "1,1"]
    assert report["payload"]["correlators"]["0,3"]["coeffs"] == []
    rendered = sympy.sympify(report["payload"]["correlators"]["1,1"]["rendered"], locals={"w0": w0})
    assert sympy.cancel(rendered + 1 / (9 * w0**2)) == 0


def test_non_admissible_curve_needs_force(tmp_path, capsys) -> None:
    spec = make_rs_spec(tmp_path, 7, 5)

    code, report = run_cli(capsys, "correlators", spec)
    assert code == EXIT_NON_ADMISSIBLE
    assert report["error"]["clause"] == "lA2"


@pytest.mark.slow
def test_forced_run_is_flagged_uncertified(tmp_path, capsys) -> None:
    code, report = run_cli(capsys, "correlators", make_rs_spec(tmp_path, 7, 5), "--force")

    assert code == EXIT_OK
    assert report["verdicts"]["certified"] == "no"
    assert report["verdicts"]["symmetric"].startswith("no")
    assert report["payload"]["violations"][0]["clause"] == "lA2"


def test_reports_are_reproducible(tmp_path, capsys) -> None:
    spec = make_rs_spec(tmp_path, 3, 1)
    first, second = tmp_path / "first.json", tmp_path / "second.json"

    assert main(["correlators", spec, "--json", str(first)]) == EXIT_OK
    assert main(["correlators", spec, "--json", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    assert "timing" not in json.loads(first.read_text(encoding="utf-8"))
    assert capsys.readouterr().out == ""


def test_timing_is_opt_in(tmp_path, capsys) -> None:
    _, report = run_cli(capsys, "correlators", make_rs_spec(tmp_path, 3, 1), "--timing")

    assert "total" in report["timing"]
    assert "omega_1_1" in report["timing"]


def test_analyze_polygon_of_a_diagonal(tmp_path, capsys) -> None:
    svg = tmp_path / "polygon.svg"
    code, report = run_cli(capsys, "analyze-polygon", "--polynomial", "x^2*y^5 - 1", "--svg", str(svg))

    assert code == EXIT_OK
    assert report["payload"]["rs_delta_max"]["r"] == 5
    assert report["payload"]["rs_delta_max"]["s"] == 3
    assert report["verdicts"]["nondegenerate"] == "yes"
    assert svg.read_text(encoding="utf-8").startswith("<svg")


def test_analyze_polygon_from_points(tmp_path, capsys) -> None:
    code, report = run_cli(capsys, "analyze-polygon", "--points", "0,0 3,0 0,3")

    assert code == EXIT_OK
    assert report["payload"]["polygon"]["genus"] == 1
    assert "rs_delta_max" not in report["payload"]

    spec = make_spec(tmp_path, {"points": [[0, 0], [2, 0], [0, 2]]})
    code, report = run_cli(capsys, "analyze-polygon", "--file", spec)
    assert code == EXIT_OK
    assert report["payload"]["polygon"]["genus"] == 0


def test_empty_support_is_an_error(capsys) -> None:
    code, report = run_cli(capsys, "analyze-polygon", "--points", "")

    assert code == EXIT_PARSE
    assert "empty" in report["error"]["message"]


@pytest.mark.slow
def test_family_limit_commutes_for_three_two(tmp_path, capsys) -> None:
    spec = make_spec(tmp_path, {"family": "rs", "r": 3, "s": 2})
    code, report = run_cli(capsys, "family-limit", spec)

    assert code == EXIT_OK
    assert report["verdicts"]["commutes with the limit"] == "yes"
    assert report["verdicts"]["limit 0,3"] == "matches central"


@pytest.mark.slow
def test_family_limit_diverges_for_seven_five(tmp_path, capsys) -> None:
    spec = make_spec(tmp_path, {"family": "seven-five"})
    code, report = run_cli(capsys, "family-limit", spec)

    assert code == EXIT_OK
    assert report["verdicts"]["limit 0,3"] == "divergent (order t^-2)"
    assert report["verdicts"]["commutes with the limit"] == "no"
    assert report["payload"]["profile"]["profile"]


@pytest.mark.slow
def test_family_limit_of_the_singular_family(tmp_path, capsys) -> None:
    spec = make_spec(tmp_path, {"family": "singular"})
    code, report = run_cli(capsys, "family-limit", spec)

    assert code == EXIT_OK
    assert report["verdicts"]["limit 0,3"] == "matches central"
    assert report["verdicts"]["limit 1,1"] == "converges, differs from central"
    assert report["payload"]["method"] == "rescaled"


def test_unknown_family_kind(tmp_path, capsys) -> None:
    code, report = run_cli(capsys, "family-limit", make_spec(tmp_path, {"family": "hyperbolic"}))

    assert code == EXIT_PARSE
    assert "hyperbolic" in report["error"]["message"]
