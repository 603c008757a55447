"""Forward and inverse maps between algebroid-with-cocycle pairs and
linear Jacobi structures on the dual bundle, plus poissonization and the
induced algebroid over M x R."""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .chart import Chart
from .ring import ExpPoly
from .exterior import DiffForm, Multivector, exterior_d, pairing, sn_bracket
from .algebroid import (AlgebroidError, AlgebroidPatch, Cocycle, Section,
                        anchor_apply, bracket_sections, verify_algebroid,
                        verify_cocycle)
from .jacobi import JacobiStructure, check_C1, check_C2, jacobi_bracket, verify_jacobi
from .report import Report


class LinearityViolation(ValueError):
    """Base class of the inverse-map rejections; carries the residual."""

    def __init__(self, message: str, residual: str = ""):
        super().__init__(message)
        self.residual = residual


class C1Violation(LinearityViolation):
    pass


class C2Violation(LinearityViolation):
    pass


class DerivedVanishingViolation(LinearityViolation):
    pass


class AlgebroidWithCocycle:
    """A validated pair of an algebroid patch and a 1-cocycle."""

    __slots__ = ("algebroid", "cocycle")

    def __init__(self, algebroid: AlgebroidPatch, cocycle: Optional[Cocycle] = None,
                 validate: bool = True):
        if cocycle is None:
            cocycle = Cocycle.zero(algebroid.base_chart, algebroid.rank)
        if cocycle.rank != algebroid.rank:
            raise AlgebroidError("cocycle rank mismatch")
        if validate:
            rep = verify_algebroid(algebroid)
            if not rep.passed:
                raise AlgebroidError(f"not a Lie algebroid:\n{rep.to_text()}")
            rep = verify_cocycle(algebroid, cocycle)
            if not rep.passed:
                raise AlgebroidError(f"not a 1-cocycle:\n{rep.to_text()}")
        object.__setattr__(self, "algebroid", algebroid)
        object.__setattr__(self, "cocycle", cocycle)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebroidWithCocycle is immutable")

    def __eq__(self, other):
        if not isinstance(other, AlgebroidWithCocycle):
            return NotImplemented
        return (self.algebroid.same_structure(other.algebroid)
                and self.cocycle == other.cocycle)


# ---------------------------------------------------------------------------
# Building blocks on the dual chart
# ---------------------------------------------------------------------------

def linear_poisson_dual(A: AlgebroidPatch,
                        dual: Optional[Chart] = None) -> Multivector:
    """The linear Poisson bivector on A*:

        sum_{i<j,k} c_ij^k mu_k d/dmu_i ^ d/dmu_j
        + sum_{i,l} rho^l_i d/dmu_i ^ d/dx^l.
    """
    if dual is None:
        dual = A.dual_chart()
    n_base = A.base_chart.dim
    fib = dual.fiber_indices
    comps: Dict[Tuple[int, ...], ExpPoly] = {}

    def acc(idx, p):
        comps[idx] = comps.get(idx, ExpPoly.zero(dual)) + p

    for (i, j, k), c in A.structure.items():
        mu_k = ExpPoly.var(dual, dual.names[fib[k - 1]])
        acc((fib[i - 1], fib[j - 1]), c.transfer(dual) * mu_k)
    for (l, i), p in A.anchor.items():
        acc((fib[i - 1], l), p.transfer(dual))
    return Multivector(dual, 2, comps)


def liouville(chart: Chart) -> Multivector:
    """The fiber-scaling vector field sum_i mu_i d/dmu_i."""
    fib = chart.fiber_indices
    if not fib:
        raise AlgebroidError("chart has no fiber coordinates")
    return Multivector(chart, 1,
                       {(i,): ExpPoly.var(chart, chart.names[i]) for i in fib})


def vertical_lift(A: AlgebroidPatch, phi: Cocycle,
                  dual: Optional[Chart] = None) -> Multivector:
    """phi^v = sum_i phi_i d/dmu_i on the dual chart."""
    if phi.rank != A.rank:
        raise AlgebroidError("cocycle rank mismatch")
    if dual is None:
        dual = A.dual_chart()
    fib = dual.fiber_indices
    comps = {}
    for i, p in enumerate(phi.components):
        if not p.is_zero:
            comps[(fib[i],)] = p.transfer(dual)
    return Multivector(dual, 1, comps)


# ---------------------------------------------------------------------------
# Theorem 1: forward map
# ---------------------------------------------------------------------------

def psi_forward(pair: AlgebroidWithCocycle,
                dual: Optional[Chart] = None) -> JacobiStructure:
    """lambda = lambda_{A*} + Delta ^ phi^v,  E = -phi^v."""
    A, phi = pair.algebroid, pair.cocycle
    if dual is None:
        dual = A.dual_chart()
    lam = linear_poisson_dual(A, dual)
    phi_v = vertical_lift(A, phi, dual)
    lam = lam + liouville(dual).wedge(phi_v)
    return JacobiStructure(dual, lam, -phi_v)


def forward_report(pair: AlgebroidWithCocycle,
                   J: Optional[JacobiStructure] = None) -> Report:
    """Full post-checks of the forward map: the Jacobi equations, (C1),
    (C2), and the three bracket characterizations on generators."""
    if J is None:
        J = psi_forward(pair)
    A, phi = pair.algebroid, pair.cocycle
    dual = J.chart
    fib = dual.fiber_indices
    rep = Report()
    rep.extend(verify_jacobi(J), "jacobi.")
    rep.extend(check_C1(J), "C1.")
    rep.extend(check_C2(J), "C2.")

    with rep.timed("bracket_linear_linear") as slot:
        bad = []
        for i in range(1, A.rank + 1):
            for j in range(i + 1, A.rank + 1):
                mui = ExpPoly.var(dual, dual.names[fib[i - 1]])
                muj = ExpPoly.var(dual, dual.names[fib[j - 1]])
                lhs = jacobi_bracket(J, mui, muj)
                rhs = ExpPoly.zero(dual)
                for k in range(1, A.rank + 1):
                    muk = ExpPoly.var(dual, dual.names[fib[k - 1]])
                    rhs = rhs + A.c(i, j, k).transfer(dual) * muk
                if lhs != rhs:
                    bad.append(f"({i},{j}): {(lhs - rhs).render()}")
        slot["ok"] = not bad
        slot["residual"] = "; ".join(bad)

    with rep.timed("bracket_linear_basic") as slot:
        bad = []
        for i in range(1, A.rank + 1):
            mui = ExpPoly.var(dual, dual.names[fib[i - 1]])
            for l, name in enumerate(A.base_chart.names):
                f = ExpPoly.var(dual, name)
                lhs = jacobi_bracket(J, mui, f)
                rhs = (A.rho(l, i) + phi.components[i - 1] *
                       ExpPoly.var(A.base_chart, name)).transfer(dual)
                if lhs != rhs:
                    bad.append(f"({i},{name}): {(lhs - rhs).render()}")
            one = ExpPoly.const(dual, 1)
            lhs = jacobi_bracket(J, mui, one)
            rhs = phi.components[i - 1].transfer(dual)
            if lhs != rhs:
                bad.append(f"({i},1): {(lhs - rhs).render()}")
        slot["ok"] = not bad
        slot["residual"] = "; ".join(bad)

    with rep.timed("bracket_basic_basic") as slot:
        bad = []
        names = A.base_chart.names
        for a, na in enumerate(names):
            for nb in names[a + 1:]:
                lhs = jacobi_bracket(J, ExpPoly.var(dual, na), ExpPoly.var(dual, nb))
                if not lhs.is_zero:
                    bad.append(f"({na},{nb}): {lhs.render()}")
        slot["ok"] = not bad
        slot["residual"] = "; ".join(bad)

    return rep


# ---------------------------------------------------------------------------
# Theorem 2: inverse map
# ---------------------------------------------------------------------------

def _fiber_linear_decompose(p: ExpPoly, dual: Chart,
                            base: Chart) -> List[ExpPoly]:
    """Write a fiber-linear function as sum_k f_k * mu_k; each f_k lands
    on the base chart."""
    fib = dual.fiber_indices
    buckets: Dict[int, Dict] = {i: {} for i in range(len(fib))}
    for (exps, k), c in p.terms.items():
        hit = None
        for pos, i in enumerate(fib):
            if exps[i] == 1:
                hit = pos
        down = list(exps)
        down[fib[hit]] -= 1
        buckets[hit][(tuple(down), k)] = c
    out = []
    for pos in range(len(fib)):
        out.append(ExpPoly(dual, buckets[pos]).transfer(base))
    return out


def psi_inverse(J: JacobiStructure,
                basis_names: Optional[Sequence[str]] = None) -> AlgebroidWithCocycle:
    """Read the algebroid data off the Jacobi bracket:

        c_ij^k  from  {mu_i, mu_j} = sum_k c_ij^k mu_k,
        phi_i   =  {mu_i, 1},
        rho^l_i =  {mu_i, x^l} - x^l {mu_i, 1}.

    Raises C1Violation / C2Violation / DerivedVanishingViolation when the
    structure is not linear in the required sense.
    """
    dual = J.chart
    fib = dual.fiber_indices
    if not fib:
        raise AlgebroidError("chart has no fiber coordinates")
    rep1 = check_C1(J)
    if not rep1.passed:
        failed = [c for c in rep1.checks if c.verdict != "pass"]
        raise C1Violation(f"C1 violation: {failed[0].name}", failed[0].residual)
    rep2 = check_C2(J)
    if not rep2.passed:
        failed = [c for c in rep2.checks if c.verdict != "pass"]
        raise C2Violation("C2 violation", failed[0].residual)

    base = dual.restrict(("base", "time"))
    n = len(fib)
    one = ExpPoly.const(dual, 1)
    mu = [ExpPoly.var(dual, dual.names[i]) for i in fib]

    # derived vanishings (Eq. (8)-type): re-asserted defensively; these are
    # generator consequences of C1/C2 and cannot fail past the checks above
    for a, na in enumerate(base.names):
        b = jacobi_bracket(J, ExpPoly.var(dual, na), one)
        if not b.is_zero:
            raise DerivedVanishingViolation(
                f"{{{na}, 1}} does not vanish", b.render())
        for nb in base.names[a + 1:]:
            b = jacobi_bracket(J, ExpPoly.var(dual, na), ExpPoly.var(dual, nb))
            if not b.is_zero:
                raise DerivedVanishingViolation(
                    f"{{{na}, {nb}}} does not vanish", b.render())

    structure: Dict[Tuple[int, int, int], ExpPoly] = {}
    for i in range(n):
        for j in range(i + 1, n):
            br = jacobi_bracket(J, mu[i], mu[j])
            if br.is_zero:
                continue
            if not br.is_linear():
                raise C1Violation(
                    f"{{mu_{i+1}, mu_{j+1}}} is not fiber-linear", br.render())
            cs = _fiber_linear_decompose(br, dual, base)
            for k, c in enumerate(cs):
                if not c.is_zero:
                    structure[(i + 1, j + 1, k + 1)] = c

    anchor: Dict[Tuple[int, int], ExpPoly] = {}
    phi_comps = []
    for i in range(n):
        pv = jacobi_bracket(J, mu[i], one)
        if not pv.is_basic():
            raise C2Violation(f"{{mu_{i+1}, 1}} is not basic", pv.render())
        phi_comps.append(pv.transfer(base))
        for l, name in enumerate(base.names):
            xl = ExpPoly.var(dual, name)
            r = jacobi_bracket(J, mu[i], xl) - xl * pv
            if not r.is_basic():
                raise DerivedVanishingViolation(
                    f"rho component ({name},{i+1}) is not basic", r.render())
            if not r.is_zero:
                anchor[(l, i + 1)] = r.transfer(base)

    A = AlgebroidPatch(base, n, structure, anchor, basis_names=basis_names)
    return AlgebroidWithCocycle(A, Cocycle(tuple(phi_comps)))


# ---------------------------------------------------------------------------
# Theorem 3: bijection at desk scale
# ---------------------------------------------------------------------------

def roundtrip_check(pair: AlgebroidWithCocycle) -> Report:
    """psi_inverse(psi_forward(pair)) == pair, componentwise exact, and
    the forward map of the recovered pair equals the Jacobi structure."""
    rep = Report()
    J = psi_forward(pair)
    with rep.timed("inverse_after_forward") as slot:
        try:
            back = psi_inverse(J)
        except LinearityViolation as exc:
            slot["ok"] = False
            slot["residual"] = f"{exc}: {exc.residual}"
        else:
            diffs = _pair_diff(pair, back)
            slot["ok"] = not diffs
            slot["residual"] = "; ".join(diffs)
    with rep.timed("forward_after_inverse") as slot:
        try:
            back = psi_inverse(J)
            J2 = psi_forward(back, dual=J.chart)
        except LinearityViolation as exc:
            slot["ok"] = False
            slot["residual"] = f"{exc}: {exc.residual}"
        else:
            ok = J2 == J
            slot["ok"] = ok
            if not ok:
                slot["residual"] = (f"lambda diff {(J2.lam - J.lam).render()}; "
                                    f"E diff {(J2.e_field - J.e_field).render()}")
    return rep


def _pair_diff(a: AlgebroidWithCocycle, b: AlgebroidWithCocycle) -> List[str]:
    diffs = []
    A, B = a.algebroid, b.algebroid
    if A.rank != B.rank:
        return [f"rank {A.rank} != {B.rank}"]
    for i in range(1, A.rank + 1):
        for j in range(i + 1, A.rank + 1):
            for k in range(1, A.rank + 1):
                d = A.c(i, j, k) - B.c(i, j, k).transfer(A.base_chart)
                if not d.is_zero:
                    diffs.append(f"c[{i},{j}]^{k}: {d.render()}")
    for l in range(A.base_chart.dim):
        for i in range(1, A.rank + 1):
            d = A.rho(l, i) - B.rho(l, i).transfer(A.base_chart)
            if not d.is_zero:
                diffs.append(f"rho[{A.base_chart.names[l]},{i}]: {d.render()}")
    for i in range(A.rank):
        d = a.cocycle.components[i] - b.cocycle.components[i].transfer(A.base_chart)
        if not d.is_zero:
            diffs.append(f"phi[{i+1}]: {d.render()}")
    return diffs


# ---------------------------------------------------------------------------
# Example 6: poissonization and the algebroid over M x R
# ---------------------------------------------------------------------------

def poissonization(J: JacobiStructure, time_name: str = "t") -> Multivector:
    """The Poisson bivector  e^{-t} (lambda + d/dt ^ E)  on chart x R."""
    if J.chart.has_time:
        raise AlgebroidError("chart already has a time coordinate")
    rep = verify_jacobi(J)
    if not rep.passed:
        raise AlgebroidError("input is not a Jacobi structure")
    ext = J.chart.extend(time_name, "time")
    lam = J.lam.transfer(ext)
    E = J.e_field.transfer(ext)
    dt = Multivector.basis(ext, time_name)
    s_inv = ExpPoly.s_power(ext, -1)
    return (lam + dt.wedge(E)) * s_inv


def hat_algebroid(pair: AlgebroidWithCocycle,
                  time_name: str = "t") -> AlgebroidPatch:
    """The algebroid structure on A x R over M x R induced by the pair:

        c_hat_ij^k = e^{-t} (c_ij^k - phi_i d_jk + phi_j d_ik),
        rho_hat    = e^{-t} (rho + phi_i d/dt).
    """
    A, phi = pair.algebroid, pair.cocycle
    if A.base_chart.has_time:
        raise AlgebroidError("base chart already has a time coordinate")
    ext = A.base_chart.extend(time_name, "time")
    s_inv = ExpPoly.s_power(ext, -1)
    t_idx = ext.dim - 1
    structure: Dict[Tuple[int, int, int], ExpPoly] = {}
    for i in range(1, A.rank + 1):
        for j in range(i + 1, A.rank + 1):
            for k in range(1, A.rank + 1):
                c = A.c(i, j, k).transfer(ext)
                if k == j:
                    c = c - phi.components[i - 1].transfer(ext)
                if k == i:
                    c = c + phi.components[j - 1].transfer(ext)
                c = c * s_inv
                if not c.is_zero:
                    structure[(i, j, k)] = c
    anchor: Dict[Tuple[int, int], ExpPoly] = {}
    for (l, i), p in A.anchor.items():
        anchor[(l, i)] = p.transfer(ext) * s_inv
    for i in range(1, A.rank + 1):
        p = phi.components[i - 1].transfer(ext) * s_inv
        if not p.is_zero:
            anchor[(t_idx, i)] = p
    return AlgebroidPatch(ext, A.rank, structure, anchor,
                          basis_names=A.basis_names)
