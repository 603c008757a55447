"""Graded tensors: wedge, exterior derivative, interior product, the
Schouten bracket and its axioms, sharp/pairing, nondegeneracy."""

import random

import pytest

from linjacobi import (Chart, DiffForm, ExpPoly, GradeError, Multivector,
                       check_nondegenerate, exterior_d, interior,
                       lie_derivative, pairing, sharp, sn_bracket)

from conftest import base_chart, random_multivector, random_poly

R3 = base_chart(3)
R4 = base_chart(4)


def _v(chart, name):
    return ExpPoly.var(chart, name)


# -- wedge ------------------------------------------------------------------

def test_wedge_orders_indices_with_sign():
    a = Multivector.basis(R3, "x2").wedge(Multivector.basis(R3, "x1"))
    assert a.comps == {(0, 1): ExpPoly.const(R3, -1)}


def test_wedge_repeated_factor_vanishes():
    dx = DiffForm.basis(R3, "x1")
    assert dx.wedge(dx).is_zero


def test_wedge_graded_commutativity():
    rng = random.Random(7)
    for _ in range(60):
        p = rng.randint(1, 2)
        q = rng.randint(1, 2)
        P = random_multivector(rng, R4, p)
        Q = random_multivector(rng, R4, q)
        sign = -1 if (p * q) % 2 else 1
        assert P.wedge(Q) == sign * Q.wedge(P)


def test_wedge_associativity():
    rng = random.Random(8)
    for _ in range(40):
        a = random_multivector(rng, R4, 1)
        b = random_multivector(rng, R4, 1)
        c = random_multivector(rng, R4, 2)
        assert a.wedge(b.wedge(c)) == a.wedge(b).wedge(c)


# -- exterior derivative ----------------------------------------------------

def test_d_of_function_is_gradient():
    f = _v(R3, "x1") * _v(R3, "x2")
    df = exterior_d(f)
    assert df.comps == {(0,): _v(R3, "x2"), (1,): _v(R3, "x1")}


def test_d_squared_zero():
    rng = random.Random(9)
    for _ in range(60):
        grade = rng.randint(0, 2)
        w = random_multivector(rng, R4, grade)
        if grade:
            w = DiffForm(R4, grade, w.comps)
        assert exterior_d(exterior_d(w)).is_zero


def test_d_leibniz_on_forms():
    rng = random.Random(10)
    for _ in range(40):
        a = DiffForm(R4, 1, random_multivector(rng, R4, 1).comps)
        b = DiffForm(R4, 1, random_multivector(rng, R4, 1).comps)
        lhs = exterior_d(a.wedge(b))
        rhs = exterior_d(a).wedge(b) - a.wedge(exterior_d(b))
        assert lhs == rhs


# -- interior product and Cartan formula ------------------------------------

def test_interior_single_contraction():
    dx_dy = DiffForm.basis(R3, "x1").wedge(DiffForm.basis(R3, "x2"))
    got = interior(Multivector.basis(R3, "x1"), dx_dy)
    assert got == DiffForm.basis(R3, "x2")


def test_interior_full_contraction_scalar():
    dx_dy = DiffForm.basis(R3, "x1").wedge(DiffForm.basis(R3, "x2"))
    X = Multivector.basis(R3, "x1").wedge(Multivector.basis(R3, "x2"))
    assert interior(X, dx_dy) == ExpPoly.const(R3, 1)


def test_cartan_formula():
    rng = random.Random(11)
    for _ in range(40):
        X = random_multivector(rng, R4, 1)
        w = DiffForm(R4, 2, random_multivector(rng, R4, 2).comps)
        lhs = lie_derivative(X, w)
        rhs = interior(X, exterior_d(w)) + exterior_d(interior(X, w))
        assert lhs == rhs


# -- Schouten bracket -------------------------------------------------------

def test_bracket_of_vector_fields_is_lie_bracket():
    rng = random.Random(12)
    for _ in range(40):
        X = random_multivector(rng, R3, 1)
        Y = random_multivector(rng, R3, 1)
        f = random_poly(rng, R3)
        lhs = sn_bracket(X, Y).apply(f)
        rhs = X.apply(Y.apply(f)) - Y.apply(X.apply(f))
        assert lhs == rhs


def test_bracket_vector_with_function():
    X = Multivector(R3, 1, {(0,): _v(R3, "x2")})
    f = _v(R3, "x1") * _v(R3, "x1")
    assert sn_bracket(X, f) == 2 * _v(R3, "x1") * _v(R3, "x2")


def test_graded_antisymmetry():
    rng = random.Random(13)
    for _ in range(60):
        p = rng.randint(1, 2)
        q = rng.randint(1, 2)
        P = random_multivector(rng, R4, p)
        Q = random_multivector(rng, R4, q)
        sign = -1 if ((p - 1) * (q - 1)) % 2 else 1
        assert sn_bracket(P, Q) == (-sign) * sn_bracket(Q, P)


def test_graded_jacobi():
    rng = random.Random(14)
    for _ in range(40):
        p, q, r = (rng.randint(1, 2) for _ in range(3))
        P = random_multivector(rng, R4, p, max_terms=1, max_deg=1)
        Q = random_multivector(rng, R4, q, max_terms=1, max_deg=1)
        R = random_multivector(rng, R4, r, max_terms=1, max_deg=1)
        s1 = -1 if ((p - 1) * (r - 1)) % 2 else 1
        s2 = -1 if ((q - 1) * (p - 1)) % 2 else 1
        s3 = -1 if ((r - 1) * (q - 1)) % 2 else 1
        total = (s1 * sn_bracket(P, sn_bracket(Q, R))
                 + s2 * sn_bracket(Q, sn_bracket(R, P))
                 + s3 * sn_bracket(R, sn_bracket(P, Q)))
        assert total.is_zero


def test_leibniz_rule():
    rng = random.Random(15)
    for _ in range(40):
        p, q, r = (rng.randint(1, 2) for _ in range(3))
        P = random_multivector(rng, R4, p, max_terms=1, max_deg=1)
        Q = random_multivector(rng, R4, q, max_terms=1, max_deg=1)
        R = random_multivector(rng, R4, r, max_terms=1, max_deg=1)
        sign = -1 if ((p - 1) * r) % 2 else 1
        lhs = sn_bracket(P, Q.wedge(R))
        rhs = sign * sn_bracket(P, Q).wedge(R) + Q.wedge(sn_bracket(P, R))
        assert lhs == rhs


def test_poisson_iff_coordinate_jacobi():
    """[L,L] = 0 exactly when the induced bracket of coordinate
    functions satisfies the Jacobi identity, in both directions."""
    v = lambda n: _v(R3, n)
    cases = [
        (Multivector(R3, 2, {(0, 1): v("x3"), (0, 2): -v("x2"),
                             (1, 2): v("x1")}), True),
        (Multivector(R3, 2, {(0, 1): v("x1"), (0, 2): v("x2")}), False),
    ]
    for L, expect_poisson in cases:
        assert sn_bracket(L, L).is_zero is expect_poisson
        jac_ok = True
        names = R3.names
        bra = lambda f, g: pairing(L, exterior_d(f), exterior_d(g))
        for a in range(3):
            for b in range(3):
                for c in range(3):
                    f, g, h = (_v(R3, names[i]) for i in (a, b, c))
                    cyc = bra(bra(f, g), h) + bra(bra(g, h), f) + bra(bra(h, f), g)
                    if not cyc.is_zero:
                        jac_ok = False
        assert jac_ok is expect_poisson


# -- sharp, pairing, nondegeneracy ------------------------------------------

def _canonical(chart):
    """sum d/dmu_i ^ d/dx_i on a chart (x..., mu...)."""
    m = chart.dim // 2
    one = ExpPoly.const(chart, 1)
    return Multivector(chart, 2, {(m + i, i): one for i in range(m)})


def test_sharp_of_canonical_structure():
    chart = Chart((("x", "base"), ("mu", "fiber")))
    L = _canonical(chart)
    got = sharp(L, DiffForm.basis(chart, "x"))
    assert got == -Multivector.basis(chart, "mu")
    assert sharp(L, DiffForm.basis(chart, "mu")) == Multivector.basis(chart, "x")


def test_pairing_antisymmetric():
    chart = Chart((("x", "base"), ("mu", "fiber")))
    L = _canonical(chart)
    dx, dmu = DiffForm.basis(chart, "x"), DiffForm.basis(chart, "mu")
    assert pairing(L, dmu, dx) == ExpPoly.const(chart, 1)
    assert pairing(L, dx, dmu) == ExpPoly.const(chart, -1)


def test_nondegeneracy_verdicts():
    chart = Chart((("x1", "base"), ("x2", "base"),
                   ("mu1", "fiber"), ("mu2", "fiber")))
    assert check_nondegenerate(_canonical(chart)) == "nondegenerate_constant"
    degenerate = Multivector(chart, 2, {(0, 1): ExpPoly.const(chart, 1)})
    assert check_nondegenerate(degenerate) == "degenerate"
    wobbly = Multivector(chart, 2, {(2, 0): ExpPoly.const(chart, 1),
                                    (3, 1): _v(chart, "x1")})
    assert check_nondegenerate(wobbly) == "indeterminate"


def test_odd_dimension_always_degenerate():
    L = Multivector(R3, 2, {(0, 1): ExpPoly.const(R3, 1)})
    assert check_nondegenerate(L) == "degenerate"


def test_grade_errors():
    with pytest.raises(GradeError):
        Multivector(R3, 2, {(0,): ExpPoly.const(R3, 1)})
