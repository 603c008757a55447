"""The two maps between algebroid-with-cocycle pairs and linear Jacobi
structures, their inverse relation, and the exponential-time bivector."""

from fractions import Fraction

import pytest

from linjacobi import (AlgebroidError, AlgebroidPatch, AlgebroidWithCocycle,
                       C1Violation, C2Violation, Chart, Cocycle, ExpPoly,
                       JacobiStructure, Multivector, forward_report,
                       hat_algebroid, jacobi_bracket, linear_poisson_dual,
                       liouville, poissonization, psi_forward, psi_inverse,
                       roundtrip_check, sn_bracket, verify_algebroid,
                       verify_jacobi, vertical_lift)

from conftest import base_chart

POINT = Chart(())


def aff1_pair(a=2):
    A = AlgebroidPatch(POINT, 2, {(1, 2, 2): 1})
    return AlgebroidWithCocycle(A, Cocycle.from_scalars(POINT, (a, 0)))


def test_pair_validates_inputs():
    bad = AlgebroidPatch(POINT, 3, {(1, 2, 1): 1, (2, 3, 2): 1})
    with pytest.raises(AlgebroidError):
        AlgebroidWithCocycle(bad)
    A = AlgebroidPatch(POINT, 2, {(1, 2, 2): 1})
    with pytest.raises(AlgebroidError):
        AlgebroidWithCocycle(A, Cocycle.from_scalars(POINT, (0, 1)))


def test_linear_poisson_dual_components():
    pair = aff1_pair()
    lam = linear_poisson_dual(pair.algebroid)
    dual = lam.chart
    assert lam == Multivector(dual, 2, {(0, 1): ExpPoly.var(dual, "mu2")})


def test_liouville_and_vertical_lift():
    pair = aff1_pair(3)
    dual = pair.algebroid.dual_chart()
    delta = liouville(dual)
    assert delta.comps == {(0,): ExpPoly.var(dual, "mu1"),
                           (1,): ExpPoly.var(dual, "mu2")}
    pv = vertical_lift(pair.algebroid, pair.cocycle)
    assert pv == 3 * Multivector.basis(dual, "mu1")


def test_forward_map_closed_form():
    J = psi_forward(aff1_pair(2))
    dual = J.chart
    assert J.lam == Multivector(dual, 2, {(0, 1): -ExpPoly.var(dual, "mu2")})
    assert J.e_field == -2 * Multivector.basis(dual, "mu1")
    assert verify_jacobi(J).passed


def test_forward_bracket_characterization():
    rep = forward_report(aff1_pair(1))
    assert rep.passed, rep.to_text()


def test_forward_brackets_on_generators():
    """{mu_i, mu_j} returns the structure functions; {mu_i, 1} the cocycle."""
    pair = aff1_pair(3)
    J = psi_forward(pair)
    dual = J.chart
    mu1 = ExpPoly.var(dual, "mu1")
    mu2 = ExpPoly.var(dual, "mu2")
    one = ExpPoly.const(dual, 1)
    # the E-term cancels the Liouville correction: only the structure
    # function survives
    assert jacobi_bracket(J, mu1, mu2) == mu2
    assert jacobi_bracket(J, mu1, one) == 3 * one
    assert jacobi_bracket(J, mu2, one).is_zero


def test_inverse_recovers_data():
    pair = aff1_pair(2)
    back = psi_inverse(psi_forward(pair))
    assert back == pair


def test_inverse_on_base_dependent_structure():
    chart = base_chart(2)
    x1 = ExpPoly.var(chart, "x1")
    A = AlgebroidPatch(chart, 2, {(1, 2, 2): x1}, anchor={(0, 1): 1})
    pair = AlgebroidWithCocycle(A)
    assert roundtrip_check(pair).passed


def test_inverse_rejections_carry_residuals():
    chart = Chart((("x", "base"), ("mu", "fiber")))
    mu = ExpPoly.var(chart, "mu")
    quad = JacobiStructure.poisson(
        Multivector(chart, 2, {(1, 0): mu * mu}))
    with pytest.raises(C1Violation) as exc:
        psi_inverse(quad)
    assert "mu" in exc.value.residual

    fibers = Chart((("x", "fiber"), ("y", "fiber")))
    xy = ExpPoly.var(fibers, "x") * ExpPoly.var(fibers, "y")
    remark = JacobiStructure(
        fibers, Multivector(fibers, 2, {(0, 1): xy}),
        Multivector(fibers, 1, {(0,): ExpPoly.var(fibers, "x")}))
    with pytest.raises(C2Violation) as exc:
        psi_inverse(remark)
    assert exc.value.residual == "-1*x"


def test_roundtrip_report_shape():
    rep = roundtrip_check(aff1_pair(0))
    assert [c.name for c in rep.checks] == ["inverse_after_forward",
                                            "forward_after_inverse"]
    assert rep.passed


def test_poissonization_is_poisson():
    P = poissonization(psi_forward(aff1_pair(1)))
    assert P.chart.has_time
    assert sn_bracket(P, P).is_zero


def test_poissonization_of_poisson_input_scales():
    """With E = 0 the output is just e^{-t} times the input bivector."""
    pair = AlgebroidWithCocycle(AlgebroidPatch(POINT, 2, {(1, 2, 2): 1}))
    J = psi_forward(pair)
    P = poissonization(J)
    ext = P.chart
    assert P == ExpPoly.s_power(ext, -1) * J.lam.transfer(ext)


def test_hat_algebroid_matches_poissonization():
    pair = aff1_pair(3)
    hat = hat_algebroid(pair)
    assert verify_algebroid(hat).passed
    ext = hat.base_chart
    s_inv = ExpPoly.s_power(ext, -1)
    assert hat.c(1, 2, 2) == -2 * s_inv     # 1 - phi_1
    assert hat.rho(ext.index("t"), 1) == 3 * s_inv
    Lhat = linear_poisson_dual(hat)
    P = poissonization(psi_forward(pair)).transfer(Lhat.chart)
    assert Lhat == P


def test_hat_of_zero_cocycle_keeps_structure_shape():
    pair = AlgebroidWithCocycle(AlgebroidPatch(POINT, 2, {(1, 2, 2): 1}))
    hat = hat_algebroid(pair)
    s_inv = ExpPoly.s_power(hat.base_chart, -1)
    assert hat.c(1, 2, 2) == s_inv
    assert not any(l == hat.base_chart.index("t") for (l, _) in hat.anchor)
