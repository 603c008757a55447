"""Algebroid patches: axiom checks, section brackets, cocycles, and the
two induced constructions on cotangent bundles."""

import random

import pytest

from linjacobi import (AlgebroidError, AlgebroidPatch, Chart, Cocycle,
                       ExpPoly, Multivector, Section, anchor_apply,
                       bracket_sections, cotangent_algebroid,
                       jacobi_algebroid, verify_algebroid, verify_cocycle)

from conftest import base_chart, random_poly

POINT = Chart(())
R3 = base_chart(3)


def so3():
    return AlgebroidPatch(POINT, 3, {(1, 2, 3): 1, (2, 3, 1): 1, (1, 3, 2): -1})


def aff1():
    return AlgebroidPatch(POINT, 2, {(1, 2, 2): 1})


def test_structure_stored_skew():
    A = AlgebroidPatch(POINT, 2, {(2, 1, 2): 1})
    assert A.c(1, 2, 2) == ExpPoly.const(POINT, -1)
    assert A.c(2, 1, 2) == ExpPoly.const(POINT, 1)
    assert A.c(1, 1, 2).is_zero


def test_diagonal_entry_rejected():
    with pytest.raises(AlgebroidError):
        AlgebroidPatch(POINT, 2, {(1, 1, 2): 1})


def test_verify_passes_on_lie_algebras():
    for A in (so3(), aff1(), AlgebroidPatch(POINT, 3, {(1, 2, 3): 1})):
        rep = verify_algebroid(A)
        assert rep.passed, rep.to_text()


def test_verify_catches_broken_jacobi():
    # [e1,e2] = e1 and [e2,e3] = e2 leave a cyclic defect of -e1
    A = AlgebroidPatch(POINT, 3, {(1, 2, 1): 1, (2, 3, 2): 1})
    rep = verify_algebroid(A)
    assert rep.check("jacobi_identity").verdict == "fail"
    assert "e1" in rep.check("jacobi_identity").residual


def test_verify_catches_anchor_mismatch():
    chart = base_chart(1)
    A = AlgebroidPatch(chart, 2, anchor={(0, 1): 1,
                                         (0, 2): ExpPoly.var(chart, "x1")})
    # [e1,e2] = 0 but [rho(e1), rho(e2)] = d/dx1
    rep = verify_algebroid(A)
    assert rep.check("anchor_morphism").verdict == "fail"


def test_bracket_sections_leibniz():
    rng = random.Random(21)
    chart = base_chart(2)
    A = AlgebroidPatch(chart, 2, {(1, 2, 2): ExpPoly.var(chart, "x1")},
                       anchor={(0, 1): 1})
    for _ in range(25):
        f = random_poly(rng, chart)
        mu = Section(A, (random_poly(rng, chart), random_poly(rng, chart)))
        eta = Section(A, (random_poly(rng, chart), random_poly(rng, chart)))
        lhs = bracket_sections(A, mu, eta.scale(f))
        rho_mu_f = anchor_apply(A, mu).apply(f)
        rhs = bracket_sections(A, mu, eta).scale(f) + eta.scale(rho_mu_f)
        assert lhs == rhs


def test_cocycle_condition():
    A = aff1()
    assert verify_cocycle(A, Cocycle.from_scalars(POINT, (5, 0))).passed
    rep = verify_cocycle(A, Cocycle.from_scalars(POINT, (0, 1)))
    assert not rep.passed


def test_constant_cocycles_on_so3_must_vanish():
    A = so3()
    assert verify_cocycle(A, Cocycle.zero(POINT, 3)).passed
    for bad in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        assert not verify_cocycle(A, Cocycle.from_scalars(POINT, bad)).passed


def test_cotangent_algebroid_of_linear_bivector():
    v = lambda n: ExpPoly.var(R3, n)
    L = Multivector(R3, 2, {(0, 1): v("x3"), (0, 2): -v("x2"), (1, 2): v("x1")})
    A = cotangent_algebroid(L)
    assert A.rank == 3
    assert A.c(1, 2, 3) == ExpPoly.const(R3, 1)
    assert A.c(2, 3, 1) == ExpPoly.const(R3, 1)
    assert A.c(1, 3, 2) == ExpPoly.const(R3, -1)
    assert A.rho(1, 1) == v("x3")      # sharp(dx1) = x3 d2 - x2 d3
    assert A.rho(2, 1) == -v("x2")
    assert verify_algebroid(A).passed


def test_cotangent_algebroid_rejects_non_poisson():
    v = lambda n: ExpPoly.var(R3, n)
    L = Multivector(R3, 2, {(0, 1): v("x1"), (0, 2): v("x2")})
    with pytest.raises(AlgebroidError):
        cotangent_algebroid(L)


def test_jacobi_algebroid_of_vector_field():
    chart = base_chart(1)
    E = Multivector(chart, 1, {(0,): ExpPoly.const(chart, 1)})
    A = jacobi_algebroid(Multivector.zero(chart, 2), E)
    assert A.rank == 2
    assert verify_algebroid(A).passed
    # anchor: #(dx, 0) = sharp(0) = 0, #(0, 1) = E
    assert A.rho(0, 1).is_zero
    assert A.rho(0, 2) == ExpPoly.const(chart, 1)


def test_section_rendering():
    A = aff1()
    s = Section(A, (2, -1))
    assert s.render() == "2 e1 + -1 e2"
    assert Section(A, (0, 0)).render() == "0"
