import io
from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from gcapacity.cli import main
from gcapacity.geometry import polytope_from_vertices
from gcapacity.io import (
    ParseError, dump_ingredients, dump_polytope, dump_semitoric, parse_config, parse_document,
)
from conftest import DATA, load

GOLDEN = Path(__file__).parent / "golden"


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


def test_parse_error_names_field():
    with pytest.raises(ParseError, match=r"vertices\[1\]\[0\]: zero denominator in '3/0'"):
        load("bad_rational")


def test_yaml_syntax_error_has_line():
    with pytest.raises(ParseError, match="line 2"):
        parse_document("vertices: [[0, 0],\n  [1, 1]")


def test_floats_are_rejected():
    with pytest.raises(ParseError, match="floats"):
        parse_document("vertices: [[0, 0], [0.5, 0], [0, 1]]")


pts = st.lists(st.tuples(st.fractions(-3, 3, max_denominator=6), st.fractions(-3, 3, max_denominator=6)),
               min_size=3, max_size=7, unique=True)


@settings(max_examples=40)
@given(pts)
def test_polytope_round_trip(points):
    p = polytope_from_vertices(points)
    if not p.full_dimensional:
        return
    text = dump_polytope(p, "x")
    assert parse_document(text).polytope == p
    assert dump_polytope(parse_document(text).polytope, "x") == text


@pytest.mark.parametrize("name", ["st_triangle", "st_fake_pentagon", "st_wedge"])
def test_semitoric_round_trip(name):
    doc = load(name)
    text = dump_semitoric(doc.primitive(), doc.heights, name)
    again = parse_document(text)
    assert again.primitive() == doc.primitive() and again.heights == doc.heights


def test_ingredient_round_trip():
    ing = load("ing_triangle").ingredients()
    text = dump_ingredients(ing, "t")
    assert parse_document(text).ingredients() == ing


def test_config_parser():
    assert parse_config("tol = 1/10\n# c\ndegree: 4\n") == {"tol": "1/10", "degree": "4"}
    with pytest.raises(ParseError):
        parse_config("nonsense")


# -- commands -----------------------------------------------------------------

def test_validate_outputs():
    assert run("validate", DATA / "square.yaml") == (0, "delzant: ok, vertices: 4\n")
    code, out = run("validate", DATA / "not_smooth.yaml")
    assert code == 1 and "(1, 0)" in out
    assert run("validate", DATA / "bad_rational.yaml")[0] == 2
    assert run("validate", DATA / "missing.yaml")[0] == 2


def test_pack_and_capacity_outputs():
    code, out = run("pack", DATA / "square.yaml", "--tol", "1/100")
    assert code == 0 and out.splitlines()[0] == "pack in [4, 4]"
    assert run("pack", DATA / "st_wedge.yaml")[1] == "pack = +inf\n"
    assert run("capacity", DATA / "cube2d.yaml", "--which", "cB")[1] == "sqrt(2)\n"
    assert run("capacity", DATA / "square.yaml", "--which", "T")[1] == "(8)^(1/4)\n"
    assert run("capacity", DATA / "square.yaml", "--which", "Er", "--r", "0")[1] == "8*sqrt(8)*pi\n"
    assert run("capacity", DATA / "square.yaml", "--which", "Er")[0] == 2


def test_decimal_column_is_additional():
    out = run("capacity", DATA / "cube2d.yaml", "--which", "cB", "--decimal", "4")[1]
    assert out == "sqrt(2)\t~1.4142\n"


def test_pack_csv(tmp_path):
    path = tmp_path / "p.csv"
    run("pack", DATA / "delta1.yaml", "--exclude", "0", "--csv", path)
    lines = [l for l in path.read_text().splitlines() if not l.startswith("#")]
    assert lines == ["subject,tol,exclude,pack_lower,pack_upper,converged", "delta1.yaml,1/1000,0,1/2,1/2,1"]


def test_chop_sequence_golden(tmp_path):
    path = tmp_path / "c.csv"
    code, _ = run("chop-sequence", DATA / "square.yaml", "--schedule", "1/2,1/4,1/8", "--tol", "1/100",
                  "--csv", path)
    assert code == 0

    def data(text):
        return [l for l in text.splitlines() if not l.startswith("#")]

    assert data(path.read_text()) == data((GOLDEN / "square_chop.csv").read_text())


def test_chop_sequence_rejects_bad_schedules():
    assert run("chop-sequence", DATA / "square.yaml", "--schedule", "")[0] == 2
    assert run("chop-sequence", DATA / "square.yaml", "--schedule", "1/8,1/4")[0] == 2
    assert run("chop-sequence", DATA / "square.yaml", "--schedule", "2")[0] == 1


def test_plot_data(tmp_path):
    path = tmp_path / "p.csv"
    run("chop-sequence", DATA / "square.yaml", "--schedule", "1/2,1/4", "--plot-data", path)
    rows = [l for l in path.read_text().splitlines() if not l.startswith("#")]
    assert rows == ["series,x,y", "pack_lower,1/2,1/2", "pack_lower,1/4,1/8", "d,1/2,1/2", "d,1/4,1/8"]


def test_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run1 = run("experiment", DATA / "exp_rectangles.yaml", "--csv", a)
    run2 = run("experiment", DATA / "exp_rectangles.yaml", "--csv", b)
    assert run1 == run2 and a.read_bytes() == b.read_bytes()


def test_continuity_scan_outputs():
    out = run("continuity-scan", DATA / "square.yaml")[1]
    assert out.splitlines()[-1] == "largest-neighborhood: no"


def test_strict_undecided_exit(tmp_path):
    # a coarse tolerance leaves the pentagon's comparisons open
    code, out = run("continuity-scan", DATA / "pentagon.yaml", "--tol", "1/10", "--strict")
    assert "undecided" in out
    assert code == 3


def test_metric_outputs():
    assert run("metric", DATA / "square.yaml", DATA / "square.yaml", "--kind", "dP")[1] == "0\n"
    assert run("metric", DATA / "square.yaml", DATA / "chopped_square.yaml", "--kind", "dP")[1] == "1/8\n"
    out = run("metric", DATA / "ing_triangle.yaml", DATA / "ing_square.yaml", "--kind", "dIngredients")[1]
    assert out == "1\n"
    out = run("metric", DATA / "ing_triangle.yaml", DATA / "ing_triangle_b.yaml", "--kind", "dTaylor",
              "--degree", "1")[1]
    assert out == "1/2 (tail <= 2)\n"


def test_config_precedence(tmp_path):
    conf = tmp_path / "c.conf"
    conf.write_text("degree = 1\nweights = geometric\n")
    a, b = DATA / "ing_triangle.yaml", DATA / "ing_triangle_b.yaml"
    from_file = run("metric", a, b, "--kind", "dTaylor", "--config", conf)[1]
    from_flag = run("metric", a, b, "--kind", "dTaylor", "--config", conf, "--degree", "6")[1]
    default = run("metric", a, b, "--kind", "dTaylor")[1]
    assert from_file == "1/2 (tail <= 2)\n"
    assert from_flag == default == "1/2 (tail <= 9/64)\n"


def test_angles_command():
    assert run("angles", "--bound", "1") == (0, "pi/2\n")
    assert run("angles", "--bound", "2")[1] == "pi/4\npi/2\n3*pi/4\n"


def test_usage_errors():
    assert run("capacity", DATA / "square.yaml")[0] == 2
    assert run("nonsense")[0] == 2
