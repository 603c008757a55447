"""Text format: tokenizer, recursive-descent parser, canonical renderer."""

from fractions import Fraction

import pytest

from linjacobi import (CATALOG, Chart, ExpPoly, SpecError, build_case,
                       parse_expression, parse_spec, render_spec,
                       spec_from_algebroid, spec_from_jacobi)

AFF1 = """\
algebroid
  rank 2
  c[1,2] = 1*e_2
end
"""

REMARK = """\
patch
  x fiber
  y fiber
end

jacobi
  lambda = x*y * d/dx^d/dy
  efield = x * d/dx
end
"""


def test_structure_line_parses():
    spec = parse_spec(AFF1)
    assert spec.rank == 2
    assert set(spec.structure) == {(1, 2, 2)}
    assert spec.structure[(1, 2, 2)] == ExpPoly.const(Chart(()), 1)


def test_jacobi_section_parses():
    spec = parse_spec(REMARK)
    J = spec.to_jacobi()
    chart = spec.chart
    assert chart.roles == ("fiber", "fiber")
    xy = ExpPoly.var(chart, "x") * ExpPoly.var(chart, "y")
    assert J.lam.comps == {(0, 1): xy}
    assert J.e_field.comps == {(0,): ExpPoly.var(chart, "x")}


def test_diagonal_structure_rejected():
    with pytest.raises(SpecError) as exc:
        parse_spec("algebroid\n  rank 2\n  c[1,1] = 1*e_1\nend\n")
    assert "diagonal" in str(exc.value)
    assert exc.value.line == 3


def test_position_info_on_syntax_error():
    with pytest.raises(SpecError) as exc:
        parse_spec("patch\n  x base\nend\njacobi\n  lambda = @\nend\n")
    assert exc.value.line == 5
    assert exc.value.col == 12


def test_undeclared_coordinate_reported():
    with pytest.raises(SpecError) as exc:
        parse_spec("patch\n  x base\nend\njacobi\n  efield = y * d/dx\nend\n")
    assert "undeclared" in exc.value.message


def test_fiber_coordinate_refused_in_algebroid():
    text = ("patch\n  x base\n  mu fiber\nend\n"
            "algebroid\n  rank 1\n  rho[1] = mu*d/dx\nend\n")
    with pytest.raises(SpecError) as exc:
        parse_spec(text)
    assert "fiber coordinate" in exc.value.message


def test_unclosed_section():
    with pytest.raises(SpecError) as exc:
        parse_spec("patch\n  x base\n")
    assert "not closed" in exc.value.message


def test_cocycle_rank_mismatch():
    text = AFF1 + "\ncocycle\n  phi[1] = 1\n  phi[2] = 0\n  phi[3] = 0\nend\n"
    with pytest.raises(SpecError):
        parse_spec(text)


def test_rational_and_power_factors():
    chart = Chart((("x", "base"), ("y", "base")))
    p = parse_expression("3/2*x^2*y - y + 4", chart)
    x, y = ExpPoly.var(chart, "x"), ExpPoly.var(chart, "y")
    assert p == Fraction(3, 2) * x * x * y - y + 4


def test_exponential_factor_requires_time():
    chart = Chart((("x", "base"), ("t", "time")))
    p = parse_expression("2*exp(-1*t)", chart)
    assert p == 2 * ExpPoly.s_power(chart, -1)
    with pytest.raises(SpecError):
        parse_expression("exp(1*x)", chart)


def test_expression_trailing_input():
    chart = Chart((("x", "base"),))
    with pytest.raises(SpecError):
        parse_expression("x x", chart)


@pytest.mark.parametrize("name", CATALOG)
def test_catalog_round_trips_byte_stably(name):
    case = build_case(name)
    if case.pair is not None:
        spec = spec_from_algebroid(case.pair.algebroid, case.pair.cocycle)
    else:
        spec = spec_from_jacobi(case.jacobi)
    once = render_spec(spec)
    twice = render_spec(parse_spec(once))
    assert once == twice
    assert render_spec(parse_spec(twice)) == twice


def test_round_trip_preserves_objects():
    case = build_case("tangent_lift_so3star")
    spec = parse_spec(render_spec(
        spec_from_algebroid(case.pair.algebroid, case.pair.cocycle)))
    assert spec.to_algebroid().same_structure(case.pair.algebroid)
    assert spec.to_cocycle() == case.pair.cocycle


def test_bytes_input_and_bad_utf8():
    assert parse_spec(AFF1.encode()).rank == 2
    with pytest.raises(SpecError):
        parse_spec(b"\xff\xfe\x00")
