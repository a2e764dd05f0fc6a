from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nqh.errors import DegreeMismatch, DimensionMismatch, ParseError
from nqh.exactlin import (
    HALF,
    I,
    IR2,
    MINUS_ONE,
    ONE,
    R2,
    SQRT2_OVER_2,
    Scalar,
    SparseEliminator,
    Subspace,
    TensorElement,
    ZERO,
    matrix_inverse,
    matrix_mul,
    nullspace,
    pairing,
    rref,
    scalar_arith,
    solve_linear,
    sqrt_in_K,
    subspace_intersection,
    words_of_length,
)

SMALL_COEFFS = [Fraction(-1), Fraction(0), Fraction(1), Fraction(1, 2)]
SMALL_SCALARS = [
    Scalar.from_rationals(a, b, c, d)
    for a in SMALL_COEFFS for b in SMALL_COEFFS
    for c in SMALL_COEFFS for d in SMALL_COEFFS
]

small_scalar = st.sampled_from(SMALL_SCALARS)


def test_defining_relations():
    assert scalar_arith(I, I, "mul") == MINUS_ONE
    assert scalar_arith(R2, R2, "mul") == Scalar(2)
    assert I * R2 == IR2
    assert IR2 * IR2 == Scalar(-2)


def test_half_sqrt2_squares_to_half():
    h = SQRT2_OVER_2
    assert scalar_arith(h, h, "mul") == HALF
    assert Scalar(2) * h * h == ONE


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        scalar_arith(ONE, ZERO, "div")


def test_every_small_nonzero_scalar_has_inverse():
    for s in SMALL_SCALARS:
        if not s:
            continue
        assert s * s.inverse() == ONE
        assert scalar_arith(ONE, s, "div") * s == ONE


@given(small_scalar, small_scalar, small_scalar)
def test_field_axioms_on_small_scalars(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a


@given(small_scalar)
def test_text_round_trip(s):
    assert Scalar.parse(s.text()) == s


def test_parse_shorthands():
    assert Scalar.parse("i") == I
    assert Scalar.parse("-r2") == -R2
    assert Scalar.parse("i*r2") == IR2
    assert Scalar.parse("1/2 + -3/2*i + r2") == Scalar.from_rationals(
        Fraction(1, 2), Fraction(-3, 2), 1, 0)
    with pytest.raises(ParseError):
        Scalar.parse("")
    with pytest.raises(ParseError):
        Scalar.parse("x")


def test_sqrt_in_K():
    assert sqrt_in_K(Scalar(4)) in (Scalar(2), Scalar(-2))
    root = sqrt_in_K(Scalar(2))
    assert root is not None and root * root == Scalar(2)
    root = sqrt_in_K(I)
    assert root is not None and root * root == I
    assert sqrt_in_K(Scalar(5)) is None
    # an eighth root of unity with no square root in the field
    zeta8_cubed = (I - ONE) * SQRT2_OVER_2
    assert sqrt_in_K(zeta8_cubed) is None


# ---------------------------------------------------------------------------
# linear algebra


def test_rref_dependent_rows():
    space, rank = rref([[1, 1], [2, 2]])
    assert rank == 1
    assert space.basis == ((ONE, ONE),)


def test_rref_empty_input():
    space, rank = rref([], ambient=3)
    assert rank == 0 and space.ambient == 3


def test_rref_rejects_ragged_rows():
    with pytest.raises(DimensionMismatch):
        rref([[1, 2], [1]])


def test_rref_idempotent():
    import random

    rng = random.Random(7)
    pool = [ZERO, ONE, MINUS_ONE, HALF, I, R2]
    for _ in range(20):
        rows = [[rng.choice(pool) for _ in range(4)] for _ in range(3)]
        space, _ = rref(rows)
        again, _ = rref([list(r) for r in space.basis], ambient=4)
        assert again == space


def test_nullspace_identity_and_zero():
    assert nullspace([[1, 0], [0, 1]]).dim == 0
    assert nullspace([[0, 0, 0]], 3).dim == 3


def test_nullspace_vectors_are_exact_kernel_elements():
    rows = [[ONE, I, ZERO, HALF], [ZERO, R2, ONE, MINUS_ONE]]
    kernel = nullspace(rows, 4)
    assert kernel.dim == 2
    for vec in kernel.basis:
        for row in rows:
            total = ZERO
            for a, b in zip(row, vec):
                total = total + a * b
            assert total == ZERO


def test_nullspace_of_pairing_row_gives_three_dim_complement():
    # the single relation row of the skew plane in the degree-2 word basis
    row = TensorElement({(0, 1): ONE, (1, 0): ONE}).coordinates(2, 2)
    kernel = nullspace([row], 4)
    assert kernel.dim == 3


def test_rank_of_single_relation_row():
    row = TensorElement({(0, 1): ONE, (1, 0): ONE}).coordinates(2, 2)
    space, rank = rref([row])
    assert rank == 1 and nullspace([row], 4).dim == 3
    assert space.ambient == 4


def test_subspace_membership_and_coords():
    space, _ = rref([[1, 0, 1], [0, 1, 1]])
    assert space.contains([1, 1, 2])
    assert not space.contains([0, 0, 1])
    coords, rem = space.reduce_with_coords([1, 1, 2])
    assert coords == [ONE, ONE] and not any(rem)


def test_subspace_intersection():
    u = Subspace.from_rows([[1, 0, 0], [0, 1, 0]], 3)
    w = Subspace.from_rows([[0, 1, 0], [0, 0, 1]], 3)
    meet = subspace_intersection(u, w)
    assert meet.dim == 1
    assert meet.contains([0, 1, 0])


def test_solve_linear_and_matrix_inverse():
    a = [[Scalar(2), ZERO], [ONE, ONE]]
    sol = solve_linear(a, [Scalar(4), Scalar(3)])
    assert sol == [Scalar(2), ONE]
    inv = matrix_inverse(a)
    assert matrix_mul(a, inv) == [[ONE, ZERO], [ZERO, ONE]]
    assert matrix_inverse([[ONE, ONE], [ONE, ONE]]) is None


def test_sparse_eliminator_rank_and_membership():
    elim = SparseEliminator()
    assert elim.add({0: ONE, 1: ONE})
    assert not elim.add({0: Scalar(2), 1: Scalar(2)})
    assert elim.add({1: ONE})
    assert elim.rank == 2
    assert elim.contains({0: Scalar(5), 1: Scalar(-3)})
    assert not elim.contains({2: ONE})


# ---------------------------------------------------------------------------
# words and pairing


def test_words_of_length_order():
    assert words_of_length(2, 2) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_pairing_matching_and_mismatched_words():
    d = TensorElement({(0, 1): ONE})
    assert pairing(d, TensorElement({(0, 1): ONE})) == ONE
    assert pairing(d, TensorElement({(1, 0): ONE})) == ZERO


def test_pairing_reproduces_deformation_constant():
    # the square of the first dual generator evaluated on the diagonal lift
    zhat = TensorElement({(0, 0): ONE, (1, 1): ONE})
    assert pairing(TensorElement({(0, 0): ONE}), zhat) == ONE


def test_pairing_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        pairing(TensorElement({(0,): ONE}), TensorElement({(0, 1): ONE}))


def test_pairing_matrix_is_identity():
    for degree in (1, 2, 3):
        words = words_of_length(2, degree)
        for w1 in words:
            for w2 in words:
                value = pairing(TensorElement.monomial(w1),
                                TensorElement.monomial(w2))
                assert value == (ONE if w1 == w2 else ZERO)


@given(small_scalar, small_scalar)
def test_pairing_bilinear(a, b):
    d1 = TensorElement({(0, 1): ONE})
    d2 = TensorElement({(1, 1): ONE})
    primal = TensorElement({(0, 1): a, (1, 1): b})
    combo = d1 + d2
    assert pairing(combo, primal) == a + b


def test_tensor_element_basics():
    t = TensorElement({(0,): ONE, (1,): MINUS_ONE})
    assert t.degree() == 1
    assert (t - t) == TensorElement()
    product = t.concat(t)
    assert product.terms[(0, 1)] == MINUS_ONE
    assert TensorElement({(0, 1): ONE}).max_word() == (0, 1)
    renamed = t.rename({0: 2, 1: 3})
    assert set(renamed.terms) == {(2,), (3,)}
