import pytest

from conftest import diagonal_sigma

from nqh.errors import WrongP
from nqh.exactlin import HALF, I, ONE, Scalar, ZERO
from nqh.algebra import (
    GradedLinMap,
    RightModule,
    hom_dim,
    is_absolutely_simple,
    is_nilpotent_element,
    radical,
    spin,
    vec_add,
    vec_eq,
    vec_scale,
    vec_sparse,
    vec_sub,
    verify_decomposition,
    verify_iso,
)
from nqh.deform import DoubleOreData
from nqh.knorrer import (
    prop51_scenario,
    run_minus_case,
    run_plus_case,
    singularity_report,
)

MINUS_ONE = Scalar(-1)


@pytest.fixture(scope="module")
def plus_class_z(double_ore_class_z, z_lift):
    return run_plus_case(double_ore_class_z, z_lift)


@pytest.fixture(scope="module")
def minus_class_t(double_ore_class_t, z_lift):
    return run_minus_case(double_ore_class_t, z_lift)


@pytest.fixture(scope="module")
def minus_class_r(double_ore_class_r, z_lift):
    return run_minus_case(double_ore_class_r, z_lift)


def pair_tools(result):
    E = result.base.algebra
    dim = E.dim
    index = {lbl: k for k, lbl in enumerate(E.labels)}

    def pos(j, b):
        return (j - 1) * dim + b

    def pair_vec(a, b):
        out = {}
        for k, v in a.items():
            out[pos(1, k)] = out.get(pos(1, k), ZERO) + v * HALF
            out[pos(2, k)] = out.get(pos(2, k), ZERO) + v * HALF
        for k, v in b.items():
            out[pos(1, k)] = out.get(pos(1, k), ZERO) + v * HALF
            out[pos(2, k)] = out.get(pos(2, k), ZERO) - v * HALF
        return {k: v for k, v in out.items() if v}

    return index, pos, pair_vec


def test_wrong_case_is_rejected(double_ore_class_z, double_ore_class_t, z_lift):
    with pytest.raises(WrongP):
        run_minus_case(double_ore_class_z, z_lift)
    with pytest.raises(WrongP):
        run_plus_case(double_ore_class_t, z_lift)


def test_plus_class_z_all_checks(plus_class_z):
    assert plus_class_z.checks.ok
    names = {item.name for item in plus_class_z.checks.items}
    assert "oracle-isomorphism" in names
    assert "full-idempotent" in names
    assert "projection-identity-suite" in names
    assert "corner-matches-semitrivial" in names


def test_plus_class_z_dimensions(plus_class_z):
    assert plus_class_z.oracle.algebra.dim == 16
    assert plus_class_z.twisted.dim == 16
    assert plus_class_z.base.algebra.dim == 4
    assert plus_class_z.S.dim == 2 and plus_class_z.M.dim == 2
    assert plus_class_z.Lambda.dim == 4


def test_plus_class_z_extension_structure(plus_class_z):
    lam = plus_class_z.Lambda
    assert all(degree == (0,) for degree in lam.degrees)
    assert radical(lam).dim == 0
    for i in range(lam.dim):
        for j in range(lam.dim):
            assert vec_eq(lam.table[i][j], lam.table[j][i])


def test_plus_class_z_projection_values(plus_class_z):
    """The quarter projections act as the sign split, and the pairing map
    doubles as half the printed generator images."""
    E = plus_class_z.base.algebra
    even = E.component_indices((0,))
    odd = E.component_indices((1,))
    for k in even:
        assert vec_eq(plus_class_z.xi1.apply(E.basis_vec(k)), E.basis_vec(k))
        assert not plus_class_z.xi2.apply(E.basis_vec(k))
    for k in odd:
        assert vec_eq(plus_class_z.xi2.apply(E.basis_vec(k)), E.basis_vec(k))
        assert not plus_class_z.xi1.apply(E.basis_vec(k))
    index = {lbl: k for k, lbl in enumerate(E.labels)}
    h = Scalar(0, 0, 1, 0, 2)
    image = plus_class_z.phi2.apply(E.basis_vec(index["x1*"]))
    expected = {index["x1*"]: -h, index["x2*"]: I * h}
    assert vec_eq(image, expected)
    printed = vec_scale(expected, Scalar(2))
    assert not vec_eq(image, printed)  # the printed images carry a spare 2


def test_plus_diagonal_identity_case(km1, z_lift):
    sigma = diagonal_sigma([[1, 0], [0, 1]], [[1, 0], [0, 1]])
    result = run_plus_case(DoubleOreData(km1, ONE, ZERO, sigma), z_lift)
    assert result.checks.ok
    assert result.M.dim == 0
    E = result.base.algebra
    cols = [vec_sparse(list(row)) for row in result.S.basis]
    iso = GradedLinMap(result.Lambda, E, cols)
    assert verify_iso(iso)
    report = singularity_report(result)
    assert report.isolated


def test_plus_sign_and_identity_case(km1, z_lift):
    sigma = diagonal_sigma([[-1, 0], [0, -1]], [[1, 0], [0, 1]])
    result = run_plus_case(DoubleOreData(km1, ONE, ZERO, sigma), z_lift)
    assert result.checks.ok
    lam = result.Lambda
    assert all(degree == (0,) for degree in lam.degrees)
    assert lam.dim == 4
    E = result.base.algebra
    lam_first = result.Lambda_bigraded.regrade(
        [(d[0],) for d in result.Lambda_bigraded.degrees], 1)
    cols = ([vec_sparse(list(row)) for row in result.S.basis]
            + [vec_sparse(list(row)) for row in result.M.basis])
    iso = GradedLinMap(lam_first, E, cols)
    assert verify_iso(iso)


def test_minus_class_t_all_checks(minus_class_t):
    assert minus_class_t.checks.ok
    assert minus_class_t.oracle.algebra.dim == 16
    assert minus_class_t.semitrivial.dim == 16
    assert minus_class_t.Gamma.dim == 8
    assert minus_class_t.zhang.dim == 8


def test_minus_class_t_decomposition(minus_class_t):
    NG = minus_class_t.zhang
    assert radical(NG).dim == 0
    index, pos, pair_vec = pair_tools(minus_class_t)
    one_v = {index["1"]: ONE}
    w_v = {index["x1*x2*"]: ONE}
    u_v = {index["x1*"]: ONE}
    v_v = {index["x2*"]: ONE}
    regular = RightModule.regular(NG)

    def dense(d):
        out = [ZERO] * NG.dim
        for k, v in d.items():
            out[k] = v
        return out

    seeds = [
        [pair_vec(vec_sub(one_v, w_v), {}), pair_vec(vec_sub(u_v, v_v), {})],
        [pair_vec(vec_add(vec_scale(vec_add(one_v, w_v), I),
                          vec_add(u_v, v_v)), {})],
        [pair_vec(vec_sub(vec_scale(vec_add(one_v, w_v), I),
                          vec_add(u_v, v_v)), {})],
        [pair_vec({}, vec_add(vec_add(one_v, w_v), vec_add(u_v, v_v)))],
        [pair_vec({}, vec_sub(vec_add(one_v, w_v), vec_add(u_v, v_v)))],
    ]
    modules = []
    for seed_list in seeds:
        space = spin(regular, [dense(s) for s in seed_list])
        modules.append(RightModule.from_invariant_subspace(NG, space))
    assert [m.dim for m in modules] == [2, 1, 1, 1, 1]
    assert all(m.verify() for m in modules)
    assert all(is_absolutely_simple(m) for m in modules)
    assert hom_dim(modules[1], modules[2]) == 0
    assert hom_dim(modules[0], regular) == 2
    assert verify_decomposition(NG, modules, [2, 1, 1, 1, 1])
    report = singularity_report(
        minus_class_t,
        decomposition=(modules, [2, 1, 1, 1, 1],
                       ["M2(k)", "k", "k", "k", "k"], NG))
    assert report.isolated
    assert "D^b(k)^{×5}" in report.text()
    assert "blocks: M2(k),k,k,k,k" in report.text()


def test_minus_class_r_products_and_radical(minus_class_r):
    NG = minus_class_r.zhang
    index, pos, pair_vec = pair_tools(minus_class_r)
    one_v = {index["1"]: ONE}
    w_v = {index["x1*x2*"]: ONE}
    u_v = {index["x1*"]: ONE}
    v_v = {index["x2*"]: ONE}
    star = NG.mul
    assert vec_eq(star(pair_vec(v_v, {}), pair_vec(u_v, {})),
                  pair_vec({index["1"]: MINUS_ONE}, {}))
    assert vec_eq(star(pair_vec(v_v, {}), pair_vec(one_v, {})),
                  pair_vec(u_v, {}))
    assert vec_eq(star(pair_vec(w_v, {}), pair_vec({}, one_v)),
                  pair_vec(vec_sub(w_v, one_v), {}))
    # oracle-certified corrections of two misprinted row entries
    assert vec_eq(star(pair_vec(u_v, {}), pair_vec(u_v, {})),
                  pair_vec({index["1"]: MINUS_ONE}, {}))
    assert vec_eq(star(pair_vec(u_v, {}), pair_vec(v_v, {})),
                  pair_vec({index["x1*x2*"]: MINUS_ONE}, {}))
    witness = pair_vec(vec_sub(one_v, w_v), {})
    assert not star(witness, witness)
    assert is_nilpotent_element(NG, witness)
    assert radical(NG).dim == 4
    report = singularity_report(minus_class_r)
    assert not report.isolated
    assert "isolated singularity: no" in report.text()


def test_minus_radical_is_nilpotent_ideal(minus_class_r):
    NG = minus_class_r.zhang
    rad = radical(NG)
    for row in rad.basis:
        vec = vec_sparse(list(row))
        assert is_nilpotent_element(NG, vec)


def test_minus_diagonal_involutions_factor(km1, z_lift):
    sigma = diagonal_sigma([[-1, 0], [0, -1]], [[-1, 0], [0, -1]])
    result = run_minus_case(DoubleOreData(km1, MINUS_ONE, ZERO, sigma), z_lift)
    assert result.checks.ok
    E = result.base.algebra
    NG = result.zhang
    index, pos, pair_vec = pair_tools(result)
    # componentwise products in pair coordinates: two commuting copies
    for b in range(E.dim):
        for bp in range(E.dim):
            left = pair_vec({b: ONE}, {})
            right = pair_vec({bp: ONE}, {})
            assert vec_eq(NG.mul(left, right), pair_vec(E.table[b][bp], {}))
            left = pair_vec({}, {b: ONE})
            right = pair_vec({}, {bp: ONE})
            assert vec_eq(NG.mul(left, right), pair_vec({}, E.table[b][bp]))
            assert not NG.mul(pair_vec({b: ONE}, {}), pair_vec({}, {bp: ONE}))


def test_minus_normalized_entry_point(km1, z_lift):
    sigma = diagonal_sigma([[-1, 0], [0, -1]], [[-1, 0], [0, -1]])
    data = DoubleOreData(km1, MINUS_ONE, Scalar(2), sigma)
    result = run_minus_case(data, z_lift)
    assert result.checks.ok
    assert any(item.name == "p11-normalized" for item in result.checks.items)


def test_prop51_scenario(km1, z_lift):
    sigma = diagonal_sigma([[1, 0], [0, 1]], [[1, 0], [0, 1]])
    data = DoubleOreData(km1, MINUS_ONE, Scalar(2) * I, sigma)
    lines, witness = prop51_scenario(data, z_lift)
    assert any("z + y2^2" in line for line in lines)
    assert any("isolated singularity: no" in line for line in lines)
    assert radical(witness.algebra).dim == 2
    with pytest.raises(WrongP):
        prop51_scenario(DoubleOreData(km1, MINUS_ONE, ONE, sigma), z_lift)


def test_regrading_preserves_constants(plus_class_z):
    bigraded = plus_class_z.twisted_bigraded
    total = plus_class_z.twisted
    assert bigraded.table is total.table
    assert bigraded.unit == total.unit
    for bidegree, flat in zip(bigraded.degrees, total.degrees):
        assert ((bidegree[0] + bidegree[1]) % 2,) == flat


def test_singularity_report_shapes(plus_class_z, minus_class_t):
    plus_report = singularity_report(plus_class_z)
    assert plus_report.big_radical_dim == 0
    assert plus_report.isolated
    assert "blocks: k,k,k,k ×2 components" in plus_report.text()
    assert "D^b(mod k)^{×8}" in plus_report.text()
    minus_report = singularity_report(minus_class_t)
    assert minus_report.isolated
