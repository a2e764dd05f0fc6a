"""End-to-end pipelines for the two admissible mixing parameters.

The plus case (p12, p11) = (1, 0) deforms the matrix algebra over the
base deformation, locates the full idempotent, and extracts the corner as a
semi-trivial extension; the minus case (p12 = -1, p11 normalized to 0)
deforms the direct product, packs it into a semi-trivial extension by an
involution, and identifies the degree-0 part with a Zhang twist.  Every
claimed identification is re-verified against the independently built
rewriting oracle for the big deformation, structure constant by structure
constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NqhError, WrongP
from .exactlin import HALF, I, ONE, ZERO, Scalar, Subspace, TensorElement, nullspace
from .algebra import (
    GradedAlgebra,
    GradedLinMap,
    MatrixHom,
    Report,
    corner_embedding,
    extend_on_generators,
    full_idempotent_check,
    is_nilpotent_element,
    radical,
    strongly_graded_check,
    vec_add,
    vec_dense,
    vec_eq,
    vec_scale,
    vec_sparse,
    verify_algebra,
    verify_iso,
    xi_automorphism,
)
from .deform import (
    CaseKind,
    b_presentation,
    build_Bshriek_clifford,
    build_clifford,
    central_lift_in_b,
    centrality_check_minus,
    centrality_check_plus,
    check_central,
    dualize_hom,
    normalize_p11,
    p12_classify,
    validate_double_ore,
)
from .twist import (
    SemiTrivialData,
    TwistingSystemM2,
    TwistingSystemProd,
    build_semitrivial,
    build_twisted_M2,
    build_twisted_prod,
    product_l_tensor,
    semitrivial_mu,
    standard_basis_m2,
    verify_twisting_M2,
    verify_twisting_prod,
    verify_twisting_suite,
    zhang_twist,
)


class PipelineError(NqhError):
    pass


class IsoFailed(PipelineError):
    pass


@dataclass
class PlusCaseResult:
    sigma_dual: MatrixHom
    Theta: TwistingSystemM2
    twisted: GradedAlgebra          # total-degree regrading
    twisted_bigraded: GradedAlgebra
    oracle: object                  # CliffordData of the big deformation
    base: object                    # CliffordData of the small deformation
    iso: GradedLinMap
    e: dict
    xi1: GradedLinMap
    xi2: GradedLinMap
    phi1: GradedLinMap
    phi2: GradedLinMap
    S: Subspace
    M: Subspace
    Lambda: GradedAlgebra
    Lambda_bigraded: GradedAlgebra
    corner_iso_ok: bool
    checks: Report = field(default_factory=Report)

    @property
    def case(self):
        return "plus"


@dataclass
class MinusCaseResult:
    sigma_dual: MatrixHom
    theta_prod: TwistingSystemProd
    Gamma: GradedAlgebra
    mu: GradedLinMap
    semitrivial: GradedAlgebra      # forget-first regrading
    semitrivial_bigraded: GradedAlgebra
    oracle: object
    base: object
    iso: GradedLinMap
    zhang: GradedAlgebra
    checks: Report = field(default_factory=Report)

    @property
    def case(self):
        return "minus"


def _compose(a, b):
    return a.compose(b)


def _cor42_identities(sd, E):
    """The sign-separated composition identities of the dualized table in
    the plus case."""
    s = sd.entries
    ident = GradedLinMap.identity(E)
    ok = True
    ok &= (_compose(s[0][0], s[0][0]) + _compose(s[1][0], s[1][0])) == ident
    ok &= (_compose(s[0][1], s[0][1]) + _compose(s[1][1], s[1][1])) == ident
    total = (_compose(s[0][1], s[0][0]) + _compose(s[1][1], s[1][0])
             + _compose(s[0][0], s[0][1]) + _compose(s[1][0], s[1][1]))
    ok &= total.is_zero()
    ok &= _compose(s[0][0], s[1][0]) == _compose(s[1][0], s[0][0])
    ok &= _compose(s[0][1], s[1][1]) == _compose(s[1][1], s[0][1])
    ok &= (_compose(s[1][1], s[0][0]) - _compose(s[0][1], s[1][0])) == (
        _compose(s[0][0], s[1][1]) - _compose(s[1][0], s[0][1]))
    return ok


def _cor54_identities(sd, E):
    s = sd.entries
    ident = GradedLinMap.identity(E)
    ok = True
    ok &= (_compose(s[0][0], s[0][0]) + _compose(s[1][0], s[1][0])) == ident
    ok &= (_compose(s[0][1], s[0][1]) + _compose(s[1][1], s[1][1])) == ident
    ok &= (_compose(s[0][1], s[0][0]) + _compose(s[1][1], s[1][0])) == (
        _compose(s[0][0], s[0][1]) + _compose(s[1][0], s[1][1]))
    ok &= (_compose(s[0][0], s[1][0]) + _compose(s[1][0], s[0][0])).is_zero()
    ok &= (_compose(s[0][1], s[1][1]) + _compose(s[1][1], s[0][1])).is_zero()
    ok &= (_compose(s[1][1], s[0][0]) + _compose(s[0][1], s[1][0])) == (
        _compose(s[0][0], s[1][1]) + _compose(s[1][0], s[0][1]))
    return ok


def _plus_theta(sd, E):
    s = sd.entries
    ident = GradedLinMap.identity(E)
    zero = GradedLinMap.zero(E)
    xi = xi_automorphism(E, Scalar(-1))
    theta0 = MatrixHom([
        [ident, _compose(s[0][1], s[0][0]) + _compose(s[1][1], s[1][0])],
        [zero, _compose(s[1][1], s[0][0]) - _compose(s[0][1], s[1][0])],
    ])
    theta1 = MatrixHom([[_compose(s[i][j], xi) for j in range(2)]
                        for i in range(2)])
    return theta0, theta1


def _minus_theta(sd, E):
    s = sd.entries
    ident = GradedLinMap.identity(E)
    zero = GradedLinMap.zero(E)
    theta = MatrixHom([
        [ident, _compose(s[0][1], s[0][0]) + _compose(s[1][1], s[1][0])],
        [zero, _compose(s[1][1], s[0][0]) + _compose(s[0][1], s[1][0])],
    ])
    return theta


def _lemma46_suite(xi1, xi2, phi1, phi2, theta0, theta1, E):
    """The nine derived identities of the quarter-projections."""
    report = Report()
    ident = GradedLinMap.identity(E)
    th12 = theta0.entry(1, 2)
    th22 = theta0.entry(2, 2)
    i_th12 = th12.scale(I)
    report.add("xi-idempotent",
               _compose(xi1, xi1) == xi1 and _compose(xi2, xi2) == xi2)

    ok2 = True
    ok3 = True
    for a in range(E.dim):
        va = E.basis_vec(a)
        xi1_a = xi1.apply(va)
        xi2_a = xi2.apply(va)
        for b in range(E.dim):
            vb = E.basis_vec(b)
            prod = E.table[a][b]
            th22_b = th22.apply(vb)
            lhs = xi1.apply(prod)
            rhs = vec_add(E.mul(va, xi2.apply(vb)), E.mul(xi1_a, th22_b))
            if not vec_eq(lhs, rhs):
                ok2 = False
            alt = vec_add(vec_add(E.mul(va, xi1.apply(vb)),
                                  E.mul(xi1_a, th22_b)),
                          vec_scale(E.mul(va, th22_b), Scalar(-1)))
            if not vec_eq(lhs, alt):
                ok2 = False
            lhs = xi2.apply(prod)
            rhs = vec_add(E.mul(va, xi2.apply(vb)), E.mul(xi2_a, th22_b))
            if not vec_eq(lhs, rhs):
                ok3 = False
            alt = vec_add(vec_add(E.mul(va, xi1.apply(vb)),
                                  E.mul(xi2_a, th22_b)),
                          vec_scale(E.mul(va, th22_b), Scalar(-1)))
            if not vec_eq(lhs, alt):
                ok3 = False
    report.add("xi1-product-rule", ok2)
    report.add("xi2-product-rule", ok3)

    report.add("xi1-phi1", _compose(xi1, phi1) == _compose(th22, phi1))
    report.add("phi1-xi1", _compose(phi1, xi1) == phi1)
    report.add("phi1-xi2", _compose(phi1, xi2) == _compose(phi1, i_th12))
    report.add("xi2-phi1", _compose(xi2, phi1).is_zero())
    report.add("xi1-phi2", _compose(xi1, phi2).is_zero())
    report.add("phi2-xi1", _compose(phi2, xi1) == _compose(phi2, i_th12))
    report.add("phi2-xi2", _compose(phi2, xi2) == phi2)
    report.add("xi2-phi2", _compose(xi2, phi2) == _compose(th22, phi2).scale(Scalar(-1)))

    ok6 = True
    ok7 = True
    for a in range(E.dim):
        va = E.basis_vec(a)
        for b in range(E.dim):
            vb = E.basis_vec(b)
            if not vec_eq(phi1.apply(E.mul(xi1.apply(va), vb)),
                          E.mul(phi1.apply(va), phi1.apply(vb))):
                ok6 = False
            if not vec_eq(phi1.apply(E.mul(va, xi1.apply(vb))),
                          E.mul(phi1.apply(va), phi1.apply(xi1.apply(vb)))):
                ok6 = False
            if not vec_eq(phi1.apply(E.mul(phi2.apply(va), xi2.apply(vb))),
                          E.mul(xi2.apply(va), phi2.apply(vb))):
                ok6 = False
            if not vec_eq(phi2.apply(E.mul(xi2.apply(va), vb)),
                          E.mul(phi2.apply(va), phi1.apply(vb))):
                ok7 = False
            if not vec_eq(phi2.apply(E.mul(phi1.apply(va), xi2.apply(vb))),
                          E.mul(xi1.apply(va), phi2.apply(vb))):
                ok7 = False
    report.add("phi1-two-argument", ok6)
    report.add("phi2-two-argument", ok7)

    t11, t12 = theta1.entry(1, 1), theta1.entry(1, 2)
    t21, t22 = theta1.entry(2, 1), theta1.entry(2, 2)
    report.add("phi1-recovers-xi1",
               _compose(t11 - t21.scale(I), phi1) == xi1
               and _compose(t22 + t12.scale(I), phi1) == xi1)
    report.add("phi2-recovers-xi2",
               _compose(t11 + t21.scale(I), phi2) == xi2
               and _compose(t12.scale(I) - t22, phi2) == xi2)
    return report


def _eigenspace_per_degree(E, linmap):
    """Homogeneous basis of the eigenvalue-1 space of a graded map."""
    rows = []
    for degree in sorted({d for d in E.degrees}):
        indices = E.component_indices(degree)
        block = []
        for i in indices:
            img = linmap.apply(E.basis_vec(i))
            img[i] = img.get(i, ZERO) - ONE
            block.append([img.get(j, ZERO) for j in indices])
        # kernel of (map - id) restricted to the component
        kernel = nullspace([[block[r][c] for r in range(len(indices))]
                            for c in range(len(indices))], len(indices))
        for vec in kernel.basis:
            full = [ZERO] * E.dim
            for pos, j in enumerate(indices):
                full[j] = vec[pos]
            rows.append(full)
    return Subspace.from_rows(rows, E.dim) if rows else Subspace.zero(E.dim)


def _subspace_algebra(E, space):
    """Algebra structure on a multiplication-closed homogeneous subspace."""
    rows = list(space.basis)
    degs = []
    for row in rows:
        vec = vec_sparse(list(row))
        deg = E.element_degree(vec)
        if deg is None:
            raise PipelineError("subspace basis is not homogeneous")
        degs.append(deg)
    table = []
    for u in rows:
        entries = []
        for v in rows:
            product = E.mul(vec_sparse(list(u)), vec_sparse(list(v)))
            coords, rem = space.reduce_with_coords(vec_dense(product, E.dim))
            if any(rem):
                raise PipelineError("subspace is not multiplicatively closed")
            entries.append({k: c for k, c in enumerate(coords) if c})
        table.append(entries)
    unit_coords, rem = space.reduce_with_coords(vec_dense(E.unit, E.dim))
    if any(rem):
        raise PipelineError("unit lies outside the subspace")
    unit = {k: c for k, c in enumerate(unit_coords) if c}
    labels = [f"s{k}" for k in range(len(rows))]
    return GradedAlgebra(labels, table, unit, degs, E.group_rank), rows


def run_plus_case(data, z):
    """The full (p12, p11) = (1, 0) pipeline with every verification."""
    lift = z.lift if hasattr(z, "lift") else z
    if p12_classify(data) != CaseKind.PLUS:
        raise WrongP("the plus-case pipeline needs (p12, p11) = (1, 0)")
    checks = Report()
    rep, _ = validate_double_ore(data)
    checks.add("double-ore-valid", rep.ok)
    if not rep.ok:
        raise PipelineError(f"invalid double Ore data: {rep.first_failure()}")
    central = centrality_check_plus(data, lift)
    checks.add("centrality-sigma-conditions", central)
    cross = check_central(b_presentation(data), central_lift_in_b(data, lift))
    checks.add("centrality-commutator-check", cross)
    if not (central and cross):
        raise PipelineError("the extended element is not central")

    base = build_clifford(data.base, lift)
    E = base.algebra
    sd = dualize_hom(data, base)
    cor = _cor42_identities(sd, E)
    checks.add("dual-table-identities", cor)
    if not cor:
        raise PipelineError("dualized table fails the plus-case identities")

    theta0, theta1 = _plus_theta(sd, E)
    basis = standard_basis_m2()
    Theta = TwistingSystemM2(E, (theta0, theta1), basis)
    rep = verify_twisting_M2(Theta)
    checks.add("twisting-system", rep.ok,
               "" if rep.ok else str(rep.first_failure()))
    if not rep.ok:
        raise PipelineError("the constructed pair is not a twisting system")
    suite = verify_twisting_suite(Theta)
    checks.add("twisting-derived-identities", suite.ok)

    twisted_big = build_twisted_M2(Theta)
    checks.add("twisted-algebra-valid", verify_algebra(twisted_big).ok)
    twisted = twisted_big.total_degree_regrade()

    oracle = build_Bshriek_clifford(data, z)
    dimE = E.dim

    def pos(i, j, b):
        return (i * 2 + (j - 1)) * dimE + b

    unit_index = E.words.index(())
    images = [{pos(1, 1, unit_index): ONE}, {pos(1, 2, unit_index): ONE}]
    for a in range(data.ngens):
        images.append({pos(0, 1, E.words.index((a,))): ONE})
    iso = extend_on_generators(oracle, twisted, images)
    iso_ok = verify_iso(iso)
    checks.add("oracle-isomorphism", iso_ok)
    if not iso_ok:
        raise IsoFailed("the deformation does not match the twisted matrix algebra")

    e = vec_add(vec_scale({pos(0, 1, unit_index): ONE}, HALF),
                vec_scale({pos(0, 2, unit_index): ONE}, HALF * I))
    checks.add("full-idempotent", full_idempotent_check(twisted, e))

    xi1 = (GradedLinMap.identity(E) + theta0.entry(1, 2).scale(I)
           + theta0.entry(2, 2)).scale(HALF)
    xi2 = (GradedLinMap.identity(E) + theta0.entry(1, 2).scale(I)
           - theta0.entry(2, 2)).scale(HALF)
    phi1 = (theta1.entry(1, 1) - theta1.entry(1, 2).scale(I)
            + theta1.entry(2, 1).scale(I) + theta1.entry(2, 2)).scale(HALF)
    phi2 = (theta1.entry(1, 1) - theta1.entry(1, 2).scale(I)
            - theta1.entry(2, 1).scale(I) - theta1.entry(2, 2)).scale(HALF)
    suite46 = _lemma46_suite(xi1, xi2, phi1, phi2, theta0, theta1, E)
    checks.add("projection-identity-suite", suite46.ok,
               "" if suite46.ok else str(suite46.first_failure()))

    S = _eigenspace_per_degree(E, xi1)
    M = _eigenspace_per_degree(E, xi2)
    S_alg, s_rows = _subspace_algebra(E, S)
    checks.add("eigenspace-subalgebra", True)

    # bimodule structure on M and the pairing into S
    m_rows = list(M.basis)
    m_degs = []
    for row in m_rows:
        deg = E.element_degree(vec_sparse(list(row)))
        if deg is None:
            raise PipelineError("eigenspace basis is not homogeneous")
        m_degs.append(deg)
    left = []
    right = []
    psi_ok = True
    for i in range(S_alg.dim):
        s_vec = vec_sparse(list(s_rows[i]))
        phi1_s = phi1.apply(s_vec)
        lmat = [[ZERO] * len(m_rows) for _ in range(len(m_rows))]
        rmat = [[ZERO] * len(m_rows) for _ in range(len(m_rows))]
        for b, mrow in enumerate(m_rows):
            m_vec = vec_sparse(list(mrow))
            limg = E.mul(phi1_s, m_vec)
            coords, rem = M.reduce_with_coords(vec_dense(limg, E.dim))
            if any(rem):
                psi_ok = False
            for r, c in enumerate(coords):
                lmat[r][b] = c
            rimg = E.mul(m_vec, s_vec)
            coords, rem = M.reduce_with_coords(vec_dense(rimg, E.dim))
            if any(rem):
                psi_ok = False
            for r, c in enumerate(coords):
                rmat[r][b] = c
        left.append(lmat)
        right.append(rmat)
    psi = []
    for a, arow in enumerate(m_rows):
        row_entries = []
        for b, brow in enumerate(m_rows):
            value = E.mul(phi2.apply(vec_sparse(list(arow))),
                          vec_sparse(list(brow)))
            coords, rem = S.reduce_with_coords(vec_dense(value, E.dim))
            if any(rem):
                psi_ok = False
                coords = [ZERO] * S.dim
            row_entries.append({k: c for k, c in enumerate(coords) if c})
        psi.append(tuple(row_entries))
    checks.add("module-and-pairing-closure", psi_ok)
    if not psi_ok:
        raise PipelineError("the eigenspace bimodule or pairing is not closed")
    shifted = [((d[0] + 1) % 2,) for d in m_degs]
    st_data = SemiTrivialData(S_alg, len(m_rows), tuple(shifted),
                              tuple(left), tuple(right), tuple(psi))
    Lambda_big = build_semitrivial(st_data)
    Lambda = Lambda_big.forget_first_regrade()
    checks.add("semitrivial-valid", verify_algebra(Lambda_big).ok)

    # corner at e matches the semi-trivial extension
    corner_alg, inclusion = corner_embedding(twisted, e)
    corner_ok = corner_alg.dim == Lambda.dim
    if corner_ok:
        cols = []
        minus_i = -I
        for k in range(S.dim):
            target = {}
            svec = vec_sparse(list(s_rows[k]))
            for b, coeff in svec.items():
                target[pos(0, 1, b)] = coeff * HALF
                target[pos(0, 2, b)] = coeff * HALF * I
            cols.append(target)
        for k in range(M.dim):
            target = {}
            mvec = vec_sparse(list(m_rows[k]))
            for b, coeff in mvec.items():
                target[pos(1, 1, b)] = coeff * HALF
                target[pos(1, 2, b)] = coeff * HALF * minus_i
            cols.append(target)
        # express each target in the corner basis
        corner_cols = []
        for target in cols:
            coords = _coords_in_rows(twisted, inclusion, target)
            if coords is None:
                corner_ok = False
                break
            corner_cols.append(coords)
        if corner_ok:
            candidate = GradedLinMap(Lambda, corner_alg, corner_cols)
            corner_ok = verify_iso(candidate)
    checks.add("corner-matches-semitrivial", corner_ok)
    if not corner_ok:
        raise IsoFailed("the corner does not realize the semi-trivial extension")

    return PlusCaseResult(
        sigma_dual=sd, Theta=Theta, twisted=twisted,
        twisted_bigraded=twisted_big, oracle=oracle, base=base, iso=iso,
        e=e, xi1=xi1, xi2=xi2, phi1=phi1, phi2=phi2, S=S, M=M,
        Lambda=Lambda, Lambda_bigraded=Lambda_big, corner_iso_ok=corner_ok,
        checks=checks,
    )


def _coords_in_rows(algebra, inclusion_cols, target):
    """Coordinates of a vector in the span of homogeneous columns."""
    from .algebra import _HomogeneousLookup

    rows = [vec_dense(col, algebra.dim) for col in inclusion_cols]
    degs = []
    for col in inclusion_cols:
        deg = algebra.element_degree(col)
        if deg is None:
            return None
        degs.append(deg)
    lookup = _HomogeneousLookup(algebra, rows, degs)
    return lookup.coords(target)


def run_minus_case(data, z):
    """The full p12 = -1 pipeline with every verification."""
    lift = z.lift if hasattr(z, "lift") else z
    if p12_classify(data) != CaseKind.MINUS:
        raise WrongP("the minus-case pipeline needs p12 = -1")
    checks = Report()
    if data.p11:
        cross0 = check_central(b_presentation(data), central_lift_in_b(data, lift))
        checks.add("centrality-before-normalization", cross0)
        data = normalize_p11(data)
        checks.add("p11-normalized", True)
    rep, _ = validate_double_ore(data)
    checks.add("double-ore-valid", rep.ok)
    if not rep.ok:
        raise PipelineError(f"invalid double Ore data: {rep.first_failure()}")
    central = centrality_check_minus(data, lift)
    checks.add("centrality-sigma-conditions", central)
    cross = check_central(b_presentation(data), central_lift_in_b(data, lift))
    checks.add("centrality-commutator-check", cross)
    if not (central and cross):
        raise PipelineError("the extended element is not central")

    base = build_clifford(data.base, lift)
    E = base.algebra
    sd = dualize_hom(data, base)
    cor = _cor54_identities(sd, E)
    checks.add("dual-table-identities", cor)
    if not cor:
        raise PipelineError("dualized table fails the minus-case identities")

    theta = _minus_theta(sd, E)
    epsilon = ((ONE, ONE), (ONE, Scalar(-1)))
    ltens = product_l_tensor(epsilon)
    system = TwistingSystemProd(E, theta, epsilon, ltens)
    rep = verify_twisting_prod(system)
    checks.add("twisting-system", rep.ok,
               "" if rep.ok else str(rep.first_failure()))
    if not rep.ok:
        raise PipelineError("the constructed pair is not a product twisting system")

    Gamma = build_twisted_prod(system)
    checks.add("twisted-product-valid", verify_algebra(Gamma).ok)
    dimE = E.dim

    def pos(j, b):
        return (j - 1) * dimE + b

    # the involution exchanging the two slots through the dual table
    xi = xi_automorphism(E, Scalar(-1))
    s11xi = _compose(sd.entry(1, 1), xi)
    s21xi = _compose(sd.entry(2, 1), xi)
    mu_cols = [None] * Gamma.dim
    for j in (1, 2):
        for b in range(dimE):
            bx = E.basis_vec(b)
            a1 = s11xi.apply(bx)
            a2 = s21xi.apply(bx)
            img = {}
            first, second = (a1, a2) if j == 1 else (a2, a1)
            for k, v in first.items():
                img[pos(1, k)] = v
            for k, v in second.items():
                img[pos(2, k)] = img.get(pos(2, k), ZERO) + v
            mu_cols[pos(j, b)] = {k: v for k, v in img.items() if v}
    mu = GradedLinMap(Gamma, Gamma, mu_cols)
    mu_ok = verify_iso(mu) and mu.compose(mu) == GradedLinMap.identity(Gamma)
    checks.add("involution", mu_ok)
    if not mu_ok:
        raise PipelineError("the slot-exchange map is not a graded involution")

    st_data = semitrivial_mu(Gamma, mu)
    ST_big = build_semitrivial(st_data)
    ST = ST_big.forget_first_regrade()
    checks.add("semitrivial-valid", verify_algebra(ST_big).ok)
    checks.add("semitrivial-strongly-graded", strongly_graded_check(ST))

    oracle = build_Bshriek_clifford(data, z)
    unit_index = E.words.index(())
    images = [
        {Gamma.dim + pos(1, unit_index): ONE},
        {Gamma.dim + pos(2, unit_index): ONE},
    ]
    for a in range(data.ngens):
        images.append({pos(1, E.words.index((a,))): ONE})
    iso = extend_on_generators(oracle, ST, images)
    iso_ok = verify_iso(iso)
    checks.add("oracle-isomorphism", iso_ok)
    if not iso_ok:
        raise IsoFailed("the deformation does not match the semi-trivial extension")

    NG = zhang_twist(Gamma, (GradedLinMap.identity(Gamma), mu))
    checks.add("zhang-twist-valid", verify_algebra(NG).ok)
    zero_idx = [i for i in range(ST_big.dim) if ST_big.degrees[i][1] == 0]
    ST0 = ST_big.subalgebra_on(
        zero_idx, degrees=[(ST_big.degrees[i][0],) for i in zero_idx],
        group_rank=1)
    ng_cols = [None] * NG.dim
    for j in (1, 2):
        for b in range(dimE):
            src = pos(j, b)
            if E.degrees[b][0] == 0:
                ng_cols[src] = {zero_idx.index(src): ONE}
            else:
                ng_cols[src] = {zero_idx.index(Gamma.dim + src): ONE}
    iso_zero = GradedLinMap(NG, ST0, ng_cols)
    zero_ok = verify_iso(iso_zero)
    checks.add("zhang-is-degree-zero-part", zero_ok)
    if not zero_ok:
        raise IsoFailed("the Zhang twist does not match the degree-0 part")

    return MinusCaseResult(
        sigma_dual=sd, theta_prod=system, Gamma=Gamma, mu=mu,
        semitrivial=ST, semitrivial_bigraded=ST_big, oracle=oracle, base=base,
        iso=iso, zhang=NG, checks=checks,
    )


# ---------------------------------------------------------------------------
# verdicts and reports


def _is_commutative(algebra):
    for i in range(algebra.dim):
        for j in range(i):
            if not vec_eq(algebra.table[i][j], algebra.table[j][i]):
                return False
    return True


@dataclass
class SingularityReport:
    case: str
    big_radical_dim: int
    degree0_radical_dim: int
    small_radical_dim: int
    isolated: bool
    lines: list

    def text(self):
        return "\n".join(self.lines) + "\n"


def singularity_report(result, decomposition=None):
    """Radical dimensions and the isolated-singularity verdict.

    ``decomposition`` optionally carries (simple modules, multiplicities,
    block names, target algebra) verified upstream; block structure is
    otherwise certified only through commutativity over the closure.
    """
    lines = []
    if result.case == "plus":
        big = result.twisted
        small = result.Lambda
        small_name = "corner extension"
    else:
        big = result.semitrivial
        small = result.zhang
        small_name = "twisted-product Zhang twist"
    big_rad = radical(big).dim
    small_rad = radical(small).dim
    zero_part = big.subalgebra_on(big.component_indices((0,)))
    zero_rad = radical(zero_part).dim
    lines.append("regularity of the central element: assumed (not computed)")
    lines.append(f"big deformation dim: {big.dim}, radical dim: {big_rad}")
    lines.append(f"degree-0 part dim: {zero_part.dim}, radical dim: {zero_rad}")
    lines.append(f"{small_name} dim: {small.dim}, radical dim: {small_rad}")
    isolated = big_rad == 0
    lines.append(f"isolated singularity: {'yes' if isolated else 'no'}")
    block_list = None
    if decomposition is not None:
        simples, mults, names, target = decomposition
        from .algebra import verify_decomposition

        if verify_decomposition(target, simples, mults):
            block_list = names
            lines.append(f"blocks: {','.join(names)}")
            lines.append("block certification: verified module decomposition")
    if block_list is None and isolated:
        certified = False
        if result.case == "plus":
            lam = result.Lambda
            concentrated = all(d == (0,) for d in lam.degrees)
            if concentrated and _is_commutative(lam) and radical(lam).dim == 0:
                blocks = ",".join(["k"] * lam.dim)
                lines.append(f"blocks: {blocks} ×2 components")
                lines.append(
                    "block certification: commutative semisimple over the closure")
                lines.append(f"mcm description: D^b(mod k)^{{×{2 * lam.dim}}}")
                certified = True
        if not certified:
            lines.append("block structure: not certified over the coefficient"
                         " field (NotSplitOverK possible)")
    if decomposition is not None and block_list is not None:
        count = len(block_list)
        lines.append(f"mcm description: D^b(k)^{{×{count}}}")
    return SingularityReport(result.case, big_rad, zero_rad, small_rad,
                             isolated, lines)


def prop51_scenario(data, z):
    """The degenerate p11 = +-2i analysis.

    The change of variables sends the extended central element to z + y2^2,
    and the two-variable deformation at y2^2 has a nonzero radical, so the
    quadric is never an isolated singularity in this regime.
    """
    lift = z.lift if hasattr(z, "lift") else z
    if data.p12 != Scalar(-1) or (data.p11 != Scalar(2) * I
                                  and data.p11 != Scalar(-2) * I):
        raise WrongP("the degenerate analysis needs p12 = -1, p11 = +-2i")
    lines = []
    half_p = data.p11 * HALF
    # substitution y1 -> y1, y2 -> y2 + (p11/2) y1 on the mixing lift
    y1 = TensorElement({(0,): ONE})
    y2 = TensorElement({(1,): ONE, (0,): half_p})
    image = y1.concat(y1) + y2.concat(y2)
    mixing = Subspace.from_rows(
        [TensorElement({(1, 0): ONE, (0, 1): ONE}).coordinates(2, 2)], 4)
    target = TensorElement({(1, 1): ONE})
    fixed = not any(mixing.reduce((image - target).coordinates(2, 2)))
    lines.append(f"substitution image of the extended element: z + y2^2"
                 f" ({'verified' if fixed else 'FAILED'})")
    if not fixed:
        raise PipelineError("the degenerate substitution did not collapse y1^2")
    # the two-variable witness deformation
    from .quadratic import QuadraticPresentation

    jpres = QuadraticPresentation(
        ("y1", "y2"), [TensorElement({(0, 1): ONE, (1, 0): ONE})])
    witness = build_clifford(jpres, TensorElement({(1, 1): ONE}))
    rad = radical(witness.algebra).dim
    lines.append(f"witness deformation dim: {witness.algebra.dim},"
                 f" radical dim: {rad}")
    nilp = is_nilpotent_element(witness.algebra,
                                {witness.algebra.words.index((0,)): ONE})
    lines.append(f"first dual generator squares to zero: {nilp}")
    lines.append("isolated singularity: no")
    if rad < 1:
        raise PipelineError("expected a nonzero radical in the degenerate case")
    return lines, witness
