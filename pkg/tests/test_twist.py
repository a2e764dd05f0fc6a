import random

import pytest

from nqh.errors import MuNotInvolution, NotTwistingSystem, SingularBasis
from nqh.exactlin import HALF, I, ONE, Scalar, ZERO
from nqh.algebra import (
    GradedAlgebra,
    GradedLinMap,
    MatrixHom,
    vec_eq,
    verify_algebra,
    verify_iso,
    xi_automorphism,
)
from nqh.twist import (
    GradedBasisM2,
    SemiTrivialData,
    TwistingSystemM2,
    TwistingSystemProd,
    build_semitrivial,
    build_twisted_M2,
    build_twisted_prod,
    normalize_upsilon,
    plain_m2,
    product_l_tensor,
    rebase_omega,
    semitrivial_mu,
    standard_basis_m2,
    structure_tensors,
    trivial_system,
    verify_twisting_M2,
    verify_twisting_prod,
    verify_twisting_suite,
    zhang_twist,
)

MINUS_ONE = Scalar(-1)


def paper_plus_system(clifford, double_ore):
    from nqh.deform import dualize_hom

    E = clifford.algebra
    hom = dualize_hom(double_ore, clifford)
    s = hom.entries
    ident = GradedLinMap.identity(E)
    zero = GradedLinMap.zero(E)
    xi = xi_automorphism(E, MINUS_ONE)
    theta0 = MatrixHom([
        [ident, s[0][1].compose(s[0][0]) + s[1][1].compose(s[1][0])],
        [zero, s[1][1].compose(s[0][0]) - s[0][1].compose(s[1][0])],
    ])
    theta1 = MatrixHom([[s[i][j].compose(xi) for j in range(2)]
                        for i in range(2)])
    return TwistingSystemM2(E, (theta0, theta1), standard_basis_m2())


@pytest.fixture(scope="module")
def plus_system(clifford_km1, double_ore_class_z):
    system = paper_plus_system(clifford_km1, double_ore_class_z)
    assert verify_twisting_M2(system).ok
    return system


def test_standard_basis_tensors():
    basis = standard_basis_m2()
    gamma, _ = structure_tensors(basis)
    assert gamma == (ONE, ZERO)
    ident = [[ONE, ZERO], [ZERO, ONE]]
    for i in (0, 1):
        for ip in (0, 1):
            assert basis.L_matrix(i, ip, 1) == ident
    assert basis.L_matrix(0, 0, 2) == [[ZERO, -ONE], [ONE, ZERO]]
    assert basis.L_matrix(0, 1, 2) == [[ZERO, ONE], [-ONE, ZERO]]
    assert basis.L_matrix(1, 0, 2) == [[ZERO, -ONE], [ONE, ZERO]]
    assert basis.L_matrix(1, 1, 2) == [[ZERO, ONE], [-ONE, ZERO]]


def random_graded_basis(rng):
    pool = [ONE, MINUS_ONE, I, -I, Scalar(2), HALF, Scalar(1, 1), Scalar(1, -1),
            Scalar(0, 0, 1), Scalar(0, 0, 1, 0, 2)]
    while True:
        entries = [rng.choice(pool) for _ in range(8)]
        try:
            return GradedBasisM2({
                (0, 1): ((entries[0], ZERO), (ZERO, entries[1])),
                (0, 2): ((entries[2], ZERO), (ZERO, entries[3])),
                (1, 1): ((ZERO, entries[4]), (entries[5], ZERO)),
                (1, 2): ((ZERO, entries[6]), (entries[7], ZERO)),
            })
        except SingularBasis:
            continue


def test_random_bases_satisfy_tensor_identities():
    rng = random.Random(2024)
    for _ in range(10):
        basis = random_graded_basis(rng)
        assert basis.basis_identities().ok


def test_degenerate_basis_rejected():
    with pytest.raises(SingularBasis):
        GradedBasisM2({
            (0, 1): ((ONE, ZERO), (ZERO, ONE)),
            (0, 2): ((ONE, ZERO), (ZERO, ONE)),
            (1, 1): ((ZERO, ONE), (ONE, ZERO)),
            (1, 2): ((ZERO, I), (-I, ZERO)),
        })
    with pytest.raises(SingularBasis):
        GradedBasisM2({
            (0, 1): ((ONE, ZERO), (ZERO, ZERO)),
            (0, 2): ((ONE, ZERO), (ZERO, ONE)),
            (1, 1): ((ZERO, ONE), (ONE, ZERO)),
            (1, 2): ((ZERO, I), (-I, ZERO)),
        })


def test_trivial_system_gives_plain_matrix_algebra(clifford_km1):
    E = clifford_km1.algebra
    basis = standard_basis_m2()
    system = trivial_system(E, basis)
    assert verify_twisting_M2(system).ok
    twisted = build_twisted_M2(system)
    plain = plain_m2(E, basis)
    assert twisted.unit == plain.unit
    for i in range(twisted.dim):
        for j in range(twisted.dim):
            assert vec_eq(twisted.table[i][j], plain.table[i][j])


def test_paper_system_passes_all_conditions(plus_system):
    suite = verify_twisting_suite(plus_system)
    assert suite.ok


def test_solved_t_inverses_match_printed_formulas(plus_system, clifford_km1,
                                                  double_ore_class_z):
    """The t-inverse of the triangular table equals its printed closed form
    built from the t-inverse of the dualized sigma table."""
    from nqh.algebra import t_inverse_table
    from nqh.deform import dualize_hom

    E = clifford_km1.algebra
    sigma_dual = dualize_hom(double_ore_class_z, clifford_km1)
    psi = t_inverse_table(sigma_dual)
    assert psi is not None
    p = psi.entries
    ident = GradedLinMap.identity(E)
    expected_phi0 = MatrixHom([
        [ident, GradedLinMap.zero(E)],
        [p[1][0].compose(p[0][0]) + p[1][1].compose(p[0][1]),
         p[1][1].compose(p[0][0]) - p[1][0].compose(p[0][1])],
    ])
    solved_phi0 = plus_system.t_inverses[0]
    for a in range(2):
        for b in range(2):
            assert solved_phi0.entries[a][b] == expected_phi0.entries[a][b]
    # the odd table's t-inverse is the dual t-inverse composed with the sign
    xi = xi_automorphism(E, MINUS_ONE)
    expected_phi1 = MatrixHom([[p[i][j].compose(xi) for j in range(2)]
                               for i in range(2)])
    solved_phi1 = plus_system.t_inverses[1]
    for a in range(2):
        for b in range(2):
            assert solved_phi1.entries[a][b] == expected_phi1.entries[a][b]


def test_broken_table_fails(clifford_km1, plus_system):
    E = clifford_km1.algebra
    zero = GradedLinMap.zero(E)
    broken_theta1 = MatrixHom([[zero, zero],
                               [plus_system.theta[1].entries[1][0],
                                plus_system.theta[1].entries[1][1]]])
    broken = TwistingSystemM2(E, (plus_system.theta[0], broken_theta1),
                              plus_system.basis)
    report = verify_twisting_M2(broken)
    assert not report.ok


def test_twisted_matrix_multiplication_table(plus_system, clifford_km1):
    """Every cell of the deformed product matches the printed table.

    In each cell below the pair (slot, map-entry, sign) lists the target
    span member and the table entry applied to the left coordinate; the
    second row of each degree flips through the anti-diagonal basis member.
    """
    E = clifford_km1.algebra
    twisted = build_twisted_M2(plus_system)
    assert verify_algebra(twisted).ok
    dim = E.dim

    def pos(i, j, b):
        return (i * 2 + (j - 1)) * dim + b

    theta0 = plus_system.theta[0]
    theta1 = plus_system.theta[1]
    cells = {
        # (j, jp, parity of right factor) -> [(target slot, entry, sign)]
        (1, 1, 0): [(1, None, ONE)],
        (2, 1, 0): [(2, None, ONE)],
        (1, 2, 0): [(1, (theta0, 1, 2), ONE), (2, (theta0, 2, 2), ONE)],
        (2, 2, 0): [(1, (theta0, 2, 2), MINUS_ONE), (2, (theta0, 1, 2), ONE)],
        (1, 1, 1): [(1, (theta1, 1, 1), ONE), (2, (theta1, 2, 1), ONE)],
        (2, 1, 1): [(1, (theta1, 2, 1), ONE), (2, (theta1, 1, 1), MINUS_ONE)],
        (1, 2, 1): [(1, (theta1, 1, 2), ONE), (2, (theta1, 2, 2), ONE)],
        (2, 2, 1): [(1, (theta1, 2, 2), ONE), (2, (theta1, 1, 2), MINUS_ONE)],
    }
    for i in (0, 1):
        for ip in (0, 1):
            isum = (i + ip) % 2
            for j in (1, 2):
                for jp in (1, 2):
                    spec = cells[(j, jp, ip)]
                    for x_idx in range(dim):
                        x = E.basis_vec(x_idx)
                        for y_idx in range(dim):
                            y = E.basis_vec(y_idx)
                            want = {}
                            for slot, entry, sign in spec:
                                if entry is None:
                                    piece = E.mul(x, y)
                                else:
                                    table, a, b = entry
                                    piece = E.mul(
                                        table.entries[a - 1][b - 1].apply(x), y)
                                for k, c in piece.items():
                                    key = pos(isum, slot, k)
                                    want[key] = want.get(key, ZERO) + sign * c
                            got = twisted.table[pos(i, j, x_idx)][pos(ip, jp, y_idx)]
                            assert vec_eq(
                                got, {k: v for k, v in want.items() if v})


def test_unit_of_paper_build_is_identity_matrix(plus_system):
    twisted = build_twisted_M2(plus_system)
    assert twisted.unit == {0: ONE}


def test_normalize_upsilon_fixed_point(plus_system):
    upsilon, iso = normalize_upsilon(plus_system)
    assert upsilon.theta[0].value_at_unit() == [[ONE, ZERO], [ZERO, ONE]]
    assert upsilon.theta[1].value_at_unit() == [[ONE, ZERO], [ZERO, ONE]]
    assert verify_iso(iso)


def test_normalize_upsilon_nontrivial(clifford_km1):
    """The globally rescaled diagonal pair is a twisting system whose unit
    values are not the identity matrix; normalization repairs them."""
    E = clifford_km1.algebra
    two = Scalar(2)
    ident = GradedLinMap.identity(E)
    zero = GradedLinMap.zero(E)
    scaled = MatrixHom([[ident.scale(two), zero], [zero, ident.scale(two)]])
    candidate = TwistingSystemM2(E, (scaled, scaled), standard_basis_m2())
    report = verify_twisting_M2(candidate)
    assert report.ok
    value = candidate.theta[1].value_at_unit()
    assert value != [[ONE, ZERO], [ZERO, ONE]]
    upsilon, iso = normalize_upsilon(candidate)
    assert upsilon.theta[0].value_at_unit() == [[ONE, ZERO], [ZERO, ONE]]
    assert upsilon.theta[1].value_at_unit() == [[ONE, ZERO], [ZERO, ONE]]
    assert verify_iso(iso)


def test_rebase_identity_basis(plus_system):
    omega, iso = rebase_omega(plus_system, plus_system.basis)
    assert verify_iso(iso)
    for i in (0, 1):
        for a in range(2):
            for b in range(2):
                assert omega.theta[i].entries[a][b] == (
                    plus_system.theta[i].entries[a][b])


def test_rebase_to_real_basis(plus_system):
    target = GradedBasisM2({
        (0, 1): ((ONE, ZERO), (ZERO, ONE)),
        (0, 2): ((ONE, ZERO), (ZERO, MINUS_ONE)),
        (1, 1): ((ZERO, ONE), (ONE, ZERO)),
        (1, 2): ((ZERO, ONE), (MINUS_ONE, ZERO)),
    })
    omega, iso = rebase_omega(plus_system, target)
    assert verify_iso(iso)
    assert verify_twisting_M2(omega).ok


def test_rebase_rejects_singular_member(plus_system):
    with pytest.raises(SingularBasis):
        GradedBasisM2({
            (0, 1): ((ONE, ZERO), (ZERO, ONE)),
            (0, 2): ((ZERO, ZERO), (ZERO, ONE)),
            (1, 1): ((ZERO, ONE), (ONE, ZERO)),
            (1, 2): ((ZERO, I), (-I, ZERO)),
        })


# ---------------------------------------------------------------------------
# twisted direct products


def test_product_l_tensor_default_basis():
    tensor = product_l_tensor(((ONE, ONE), (ONE, MINUS_ONE)))
    for j in (1, 2):
        for jp in (1, 2):
            assert tensor[(1, j, jp)] == (ONE if j == jp else ZERO)
            assert tensor[(2, j, jp)] == (ZERO if j == jp else ONE)


def test_product_l_tensor_rejects_degenerate():
    with pytest.raises(SingularBasis):
        product_l_tensor(((ONE, ZERO), (ONE, ONE)))
    with pytest.raises(SingularBasis):
        product_l_tensor(((ONE, ONE), (Scalar(2), Scalar(2))))


def minus_theta(clifford, data):
    from nqh.deform import dualize_hom

    E = clifford.algebra
    hom = dualize_hom(data, clifford)
    s = hom.entries
    ident = GradedLinMap.identity(E)
    zero = GradedLinMap.zero(E)
    return MatrixHom([
        [ident, s[0][1].compose(s[0][0]) + s[1][1].compose(s[1][0])],
        [zero, s[1][1].compose(s[0][0]) + s[0][1].compose(s[1][0])],
    ])


def test_diagonal_theta_gives_direct_product(clifford_km1):
    E = clifford_km1.algebra
    ident = GradedLinMap.identity(E)
    zero = GradedLinMap.zero(E)
    theta = MatrixHom([[ident, zero], [zero, ident]])
    system = TwistingSystemProd(E, theta, ((ONE, ONE), (ONE, MINUS_ONE)),
                                product_l_tensor(((ONE, ONE), (ONE, MINUS_ONE))))
    assert verify_twisting_prod(system).ok
    product = build_twisted_prod(system)
    assert verify_algebra(product).ok
    dim = E.dim
    # plain componentwise product in the pair coordinates
    for b in range(dim):
        for bp in range(dim):
            want = {k: v for k, v in E.table[b][bp].items()}
            got = product.table[b][bp]
            assert vec_eq(got, want)


def test_paper_minus_system(clifford_km1, double_ore_class_t):
    E = clifford_km1.algebra
    theta = minus_theta(clifford_km1, double_ore_class_t)
    epsilon = ((ONE, ONE), (ONE, MINUS_ONE))
    system = TwistingSystemProd(E, theta, epsilon, product_l_tensor(epsilon))
    assert verify_twisting_prod(system).ok
    product = build_twisted_prod(system)
    assert verify_algebra(product).ok
    dim = E.dim

    def pos(j, b):
        return (j - 1) * dim + b

    # the four displayed product patterns
    for b in range(dim):
        for bp in range(dim):
            want = {pos(1, k): v for k, v in E.table[b][bp].items()}
            assert vec_eq(product.table[pos(1, b)][pos(1, bp)], want)
            want = {pos(2, k): v for k, v in E.table[b][bp].items()}
            assert vec_eq(product.table[pos(2, b)][pos(1, bp)], want)
            x = E.basis_vec(b)
            y = E.basis_vec(bp)
            t12 = E.mul(theta.entries[0][1].apply(x), y)
            t22 = E.mul(theta.entries[1][1].apply(x), y)
            want = {pos(1, k): v for k, v in t12.items()}
            for k, v in t22.items():
                want[pos(2, k)] = want.get(pos(2, k), ZERO) + v
            assert vec_eq(product.table[pos(1, b)][pos(2, bp)],
                          {k: v for k, v in want.items() if v})
            want = {pos(1, k): v for k, v in t22.items()}
            for k, v in t12.items():
                want[pos(2, k)] = want.get(pos(2, k), ZERO) + v
            assert vec_eq(product.table[pos(2, b)][pos(2, bp)],
                          {k: v for k, v in want.items() if v})


# ---------------------------------------------------------------------------
# semi-trivial extensions and Zhang twists


def group_algebra():
    table = [[{0: ONE}, {1: ONE}], [{1: ONE}, {0: ONE}]]
    return GradedAlgebra(["1", "g"], table, {0: ONE}, [(0,), (1,)])


def test_semitrivial_zero_pairing():
    E = group_algebra()
    m = E.dim
    left = []
    right = []
    for i in range(E.dim):
        mat_l = [[ZERO] * m for _ in range(m)]
        mat_r = [[ZERO] * m for _ in range(m)]
        for b in range(m):
            for k, c in E.mul(E.basis_vec(i), E.basis_vec(b)).items():
                mat_l[k][b] = c
            for k, c in E.mul(E.basis_vec(b), E.basis_vec(i)).items():
                mat_r[k][b] = c
        left.append(mat_l)
        right.append(mat_r)
    psi = tuple(tuple({} for _ in range(m)) for _ in range(m))
    data = SemiTrivialData(E, m, ((1,), (0,)), tuple(left), tuple(right), psi)
    extension = build_semitrivial(data)
    assert verify_algebra(extension).ok
    # the module part squares to zero
    for a in range(m):
        for b in range(m):
            assert extension.table[E.dim + a][E.dim + b] == {}


def test_semitrivial_multiplication_pairing():
    """Pairing with the ring multiplication on a one-dimensional ring
    doubles into the split quadratic extension."""
    line = GradedAlgebra(["1"], [[{0: ONE}]], {0: ONE}, [(0,)])
    data = SemiTrivialData(line, 1, ((1,),), ([[ONE]],), ([[ONE]],),
                           (({0: ONE},),))
    extension = build_semitrivial(data)
    assert verify_algebra(extension).ok
    assert extension.table[1][1] == {0: ONE}
    from nqh.algebra import radical

    assert radical(extension).dim == 0


def test_semitrivial_mu_requires_involution():
    E = group_algebra()
    doubling = GradedLinMap(E, E, [{0: ONE}, {1: Scalar(2)}])
    with pytest.raises(MuNotInvolution):
        semitrivial_mu(E, doubling)
    non_iso = GradedLinMap(E, E, [{0: ONE}, {}])
    with pytest.raises(MuNotInvolution):
        semitrivial_mu(E, non_iso)


def test_semitrivial_mu_identity():
    E = group_algebra()
    data = semitrivial_mu(E, GradedLinMap.identity(E))
    extension = build_semitrivial(data)
    assert verify_algebra(extension).ok
    assert extension.dim == 4


def test_zhang_twist_identity(clifford_km1):
    E = clifford_km1.algebra
    ident = GradedLinMap.identity(E)
    twisted = zhang_twist(E, (ident, ident))
    for i in range(E.dim):
        for j in range(E.dim):
            assert vec_eq(twisted.table[i][j], E.table[i][j])


def test_zhang_twist_by_sign(clifford_km1):
    E = clifford_km1.algebra
    ident = GradedLinMap.identity(E)
    xi = xi_automorphism(E, MINUS_ONE)
    twisted = zhang_twist(E, (ident, xi))
    assert verify_algebra(twisted).ok
    assert twisted.dim == E.dim
    for degree in ((0,), (1,)):
        assert (len(twisted.component_indices(degree))
                == len(E.component_indices(degree)))


def test_zhang_twist_rejects_non_system(clifford_km1):
    E = clifford_km1.algebra
    ident = GradedLinMap.identity(E)
    cols = [dict(c) for c in ident.cols]
    odd = E.component_indices((1,))
    cols[odd[0]] = {odd[0]: ONE, odd[1]: ONE}
    shear = GradedLinMap(E, E, cols)
    with pytest.raises(NotTwistingSystem):
        zhang_twist(E, (ident, shear))
