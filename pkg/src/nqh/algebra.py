"""Finite-dimensional graded algebras by structure constants.

Elements are sparse coordinate dicts {basis index: Scalar}.  Gradings live
over Z2^k (k = 1 or 2) with degrees stored as 0/1 tuples per basis element;
every basis element is homogeneous.  Graded linear maps store the image of
each source basis vector.  A 2x2 matrix of graded linear maps with common
source and target models algebra homomorphisms E -> M_2(E) and the
not-necessarily-multiplicative map tables used by twisting systems.

Right modules use the row convention: the action matrix of an algebra
element acts on the right of row vectors, so action(x) action(y) =
action(xy) and the span of all action matrices is multiplication closed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    DimensionMismatch,
    NotIdempotent,
    RelationViolated,
    ZeroScale,
)
from .exactlin import (
    ONE,
    ZERO,
    Scalar,
    SparseEliminator,
    Subspace,
    matrix_inverse,
    matrix_mul,
    nullspace,
    rref_rows,
)


def vec_add(a, b):
    out = dict(a)
    for k, v in b.items():
        acc = out.get(k)
        acc = v if acc is None else acc + v
        if acc:
            out[k] = acc
        else:
            out.pop(k, None)
    return out


def vec_sub(a, b):
    out = dict(a)
    for k, v in b.items():
        acc = out.get(k)
        acc = -v if acc is None else acc - v
        if acc:
            out[k] = acc
        else:
            out.pop(k, None)
    return out


def vec_scale(a, coeff):
    if not coeff:
        return {}
    return {k: v * coeff for k, v in a.items()}


def vec_eq(a, b):
    return vec_sub(a, b) == {}


def vec_dense(a, dim):
    out = [ZERO] * dim
    for k, v in a.items():
        out[k] = v
    return out


def vec_sparse(row):
    return {i: c for i, c in enumerate(row) if c}


def add_degrees(d1, d2):
    return tuple((a + b) % 2 for a, b in zip(d1, d2))


class GradedAlgebra:
    """A unital associative algebra on a homogeneous basis."""

    __slots__ = ("labels", "dim", "table", "unit", "degrees", "group_rank", "words")

    def __init__(self, labels, table, unit, degrees, group_rank=1, words=None):
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        self.table = table
        self.unit = dict(unit)
        self.degrees = tuple(tuple(d) for d in degrees)
        self.group_rank = group_rank
        self.words = tuple(words) if words is not None else None
        if len(self.table) != self.dim or len(self.degrees) != self.dim:
            raise DimensionMismatch("structure data sizes disagree")

    def mul(self, u, v):
        table = self.table
        out = {}
        for i, ci in u.items():
            row = table[i]
            for j, cj in v.items():
                coeff = ci * cj
                for k, ck in row[j].items():
                    acc = out.get(k)
                    acc = coeff * ck if acc is None else acc + coeff * ck
                    if acc:
                        out[k] = acc
                    else:
                        out.pop(k, None)
        return out

    def power(self, u, n):
        result = dict(self.unit)
        for _ in range(n):
            result = self.mul(result, u)
        return result

    def basis_vec(self, i):
        return {i: ONE}

    def element_degree(self, vec):
        degs = {self.degrees[i] for i in vec}
        return degs.pop() if len(degs) == 1 else None

    def left_mult_matrix(self, vec):
        """Column-convention matrix of x -> vec * x."""
        cols = [self.mul(vec, self.basis_vec(j)) for j in range(self.dim)]
        return [[cols[j].get(i, ZERO) for j in range(self.dim)]
                for i in range(self.dim)]

    def right_mult_rows(self, vec):
        """Row-convention action matrix of x -> x * vec."""
        return [vec_dense(self.mul(self.basis_vec(i), vec), self.dim)
                for i in range(self.dim)]

    def trace_left_mult(self, i):
        return sum((self.table[i][j].get(j, ZERO) for j in range(self.dim)),
                   start=ZERO)

    def regrade(self, degrees, group_rank):
        return GradedAlgebra(self.labels, self.table, self.unit, degrees,
                             group_rank, words=self.words)

    def total_degree_regrade(self):
        """Z2^2 -> Z2 by summing the two components."""
        assert self.group_rank == 2
        return self.regrade([( (d[0] + d[1]) % 2 ,) for d in self.degrees], 1)

    def forget_first_regrade(self):
        assert self.group_rank == 2
        return self.regrade([(d[1],) for d in self.degrees], 1)

    def component_indices(self, degree):
        return [i for i in range(self.dim) if self.degrees[i] == tuple(degree)]

    def subalgebra_on(self, indices, degrees=None, group_rank=None):
        """Algebra structure on a multiplication-closed subset of the basis."""
        pos = {b: k for k, b in enumerate(indices)}
        table = []
        for i in indices:
            row = []
            for j in indices:
                vec = self.table[i][j]
                new = {}
                for k, c in vec.items():
                    if k not in pos:
                        raise DimensionMismatch(
                            "basis subset is not multiplication closed")
                    new[pos[k]] = c
                row.append(new)
            table.append(row)
        unit = {}
        for k, c in self.unit.items():
            if k not in pos:
                raise DimensionMismatch("unit lies outside the basis subset")
            unit[pos[k]] = c
        if degrees is None:
            degrees = [self.degrees[i] for i in indices]
            group_rank = self.group_rank
        labels = [self.labels[i] for i in indices]
        words = None
        if self.words is not None:
            words = [self.words[i] for i in indices]
        return GradedAlgebra(labels, table, unit, degrees, group_rank, words=words)

    def element_text(self, vec):
        if not vec:
            return "0"
        parts = []
        for i in sorted(vec):
            parts.append(f"({vec[i].text()})*{self.labels[i]}")
        return " + ".join(parts)

    def to_text(self):
        lines = [f"dim {self.dim}", f"grading Z2^{self.group_rank}"]
        for i in range(self.dim):
            deg = ",".join(str(x) for x in self.degrees[i])
            lines.append(f"basis {i} {self.labels[i]} deg ({deg})")
        unit = " ".join(f"{k}:{v.text()}" for k, v in sorted(self.unit.items()))
        lines.append(f"unit {unit}")
        for i in range(self.dim):
            for j in range(self.dim):
                vec = self.table[i][j]
                if vec:
                    entry = " ".join(f"{k}:{vec[k].text()}" for k in sorted(vec))
                    lines.append(f"c {i} {j} {entry}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"GradedAlgebra(dim={self.dim}, Z2^{self.group_rank})"


@dataclass
class CheckItem:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Report:
    items: list = field(default_factory=list)

    def add(self, name, passed, detail=""):
        self.items.append(CheckItem(name, bool(passed), detail))
        return passed

    @property
    def ok(self):
        return all(item.passed for item in self.items)

    def first_failure(self):
        for item in self.items:
            if not item.passed:
                return item
        return None

    def lines(self):
        out = []
        for item in self.items:
            mark = "pass" if item.passed else "FAIL"
            suffix = f": {item.detail}" if item.detail else ""
            out.append(f"[{mark}] {item.name}{suffix}")
        return out


def verify_algebra(algebra):
    """Unit, associativity and grading checks with first counterexamples."""
    report = Report()
    dim = algebra.dim
    unit_ok = True
    unit_detail = ""
    for i in range(dim):
        b = algebra.basis_vec(i)
        if not vec_eq(algebra.mul(algebra.unit, b), b) or not vec_eq(
                algebra.mul(b, algebra.unit), b):
            unit_ok = False
            unit_detail = f"unit axiom fails at basis {i}"
            break
    report.add("unit", unit_ok, unit_detail)

    grading_ok = True
    grading_detail = ""
    for i in range(dim):
        for j in range(dim):
            target = add_degrees(algebra.degrees[i], algebra.degrees[j])
            for k in algebra.table[i][j]:
                if algebra.degrees[k] != target:
                    grading_ok = False
                    grading_detail = f"product ({i},{j}) hits degree of basis {k}"
                    break
            if not grading_ok:
                break
        if not grading_ok:
            break
    report.add("grading", grading_ok, grading_detail)

    assoc_ok = True
    assoc_detail = ""
    for i in range(dim):
        for j in range(dim):
            left = algebra.table[i][j]
            for k in range(dim):
                lhs = algebra.mul(left, algebra.basis_vec(k))
                rhs = algebra.mul(algebra.basis_vec(i), algebra.table[j][k])
                if not vec_eq(lhs, rhs):
                    assoc_ok = False
                    assoc_detail = f"associativity fails at ({i},{j},{k})"
                    break
            if not assoc_ok:
                break
        if not assoc_ok:
            break
    report.add("associativity", assoc_ok, assoc_detail)
    return report


class GradedLinMap:
    """A linear map between graded algebras, stored column-wise."""

    __slots__ = ("source", "target", "cols", "shift")

    def __init__(self, source, target, cols, shift=None):
        self.source = source
        self.target = target
        self.cols = tuple(dict(c) for c in cols)
        if len(self.cols) != source.dim:
            raise DimensionMismatch("one image per source basis vector required")
        self.shift = tuple(shift) if shift is not None else (0,) * target.group_rank

    @classmethod
    def identity(cls, algebra):
        return cls(algebra, algebra, [algebra.basis_vec(i) for i in range(algebra.dim)])

    @classmethod
    def zero(cls, algebra):
        return cls(algebra, algebra, [{} for _ in range(algebra.dim)])

    @classmethod
    def from_matrix(cls, source, target, dense_cols):
        return cls(source, target, [vec_sparse(col) for col in dense_cols])

    def apply(self, vec):
        out = {}
        for i, c in vec.items():
            for k, v in self.cols[i].items():
                acc = out.get(k)
                acc = c * v if acc is None else acc + c * v
                if acc:
                    out[k] = acc
                else:
                    out.pop(k, None)
        return out

    def compose(self, other):
        """self after other."""
        return GradedLinMap(other.source, self.target,
                            [self.apply(col) for col in other.cols])

    def __add__(self, other):
        return GradedLinMap(self.source, self.target,
                            [vec_add(a, b) for a, b in zip(self.cols, other.cols)])

    def __sub__(self, other):
        return GradedLinMap(self.source, self.target,
                            [vec_sub(a, b) for a, b in zip(self.cols, other.cols)])

    def scale(self, coeff):
        return GradedLinMap(self.source, self.target,
                            [vec_scale(c, coeff) for c in self.cols])

    def __eq__(self, other):
        return (isinstance(other, GradedLinMap) and self.cols == other.cols
                and self.source is other.source and self.target is other.target)

    def is_zero(self):
        return all(not c for c in self.cols)

    def is_graded(self):
        if self.source.group_rank != self.target.group_rank:
            return True
        for i, col in enumerate(self.cols):
            expected = add_degrees(self.source.degrees[i], self.shift)
            for k in col:
                if self.target.degrees[k] != expected:
                    return False
        return True

    def dense(self):
        return [[self.cols[j].get(i, ZERO) for j in range(self.source.dim)]
                for i in range(self.target.dim)]

    def rank(self):
        rows = [vec_dense(c, self.target.dim) for c in self.cols]
        _, pivots = rref_rows(rows, self.target.dim)
        return len(pivots)

    def is_invertible(self):
        return self.source.dim == self.target.dim and self.rank() == self.source.dim

    def inverse(self):
        inv = matrix_inverse(self.dense())
        if inv is None:
            return None
        return GradedLinMap.from_matrix(self.target, self.source, inv)

    def __repr__(self):
        return f"GradedLinMap({self.source.dim} -> {self.target.dim})"


class MatrixHom:
    """A 2x2 table of graded linear maps on a common algebra."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries = tuple(tuple(row) for row in entries)
        if len(self.entries) != 2 or any(len(r) != 2 for r in self.entries):
            raise DimensionMismatch("a 2x2 table of maps is required")

    @property
    def algebra(self):
        return self.entries[0][0].source

    def entry(self, i, j):
        """1-based access matching the customary subscripts."""
        return self.entries[i - 1][j - 1]

    def apply(self, vec):
        return [[self.entries[0][0].apply(vec), self.entries[0][1].apply(vec)],
                [self.entries[1][0].apply(vec), self.entries[1][1].apply(vec)]]

    def value_at_unit(self):
        """The 2x2 scalar matrix of images of 1, or None if not scalar."""
        E = self.algebra
        out = []
        for i in range(2):
            row = []
            for j in range(2):
                img = self.entries[i][j].apply(E.unit)
                diff = vec_sub(img, vec_scale(E.unit, _scalar_multiple(E, img)))
                if diff:
                    return None
                row.append(_scalar_multiple(E, img))
            out.append(row)
        return out

    def compose_entrywise(self, func):
        return MatrixHom([[func(self.entries[i][j]) for j in range(2)]
                          for i in range(2)])

    def __repr__(self):
        return f"MatrixHom(dim E = {self.algebra.dim})"


def _scalar_multiple(algebra, vec):
    """The scalar c with vec = c * unit, assuming vec is such a multiple."""
    if not vec:
        return ZERO
    k = next(iter(algebra.unit))
    return vec.get(k, ZERO) / algebra.unit[k]


def verify_hom_M2(hom):
    """The matrix homomorphism identity on all basis pairs."""
    E = hom.algebra
    for x in range(E.dim):
        bx = E.basis_vec(x)
        images_x = [[hom.entries[i][k].apply(bx) for k in range(2)] for i in range(2)]
        for y in range(E.dim):
            by = E.basis_vec(y)
            product = E.table[x][y]
            for i in range(2):
                for j in range(2):
                    direct = hom.entries[i][j].apply(product)
                    via = {}
                    for k in range(2):
                        via = vec_add(via, E.mul(images_x[i][k],
                                                 hom.entries[k][j].apply(by)))
                    if not vec_eq(direct, via):
                        return False
    return True


def _stack_matrix(entries, E):
    """Dense 2n x 2n block matrix B[(i,r),(k,s)] = Mat(entries[k][i])[r][s]."""
    n = E.dim
    dense = [[entries[k][i].dense() for i in range(2)] for k in range(2)]
    big = [[ZERO] * (2 * n) for _ in range(2 * n)]
    for i in range(2):
        for k in range(2):
            block = dense[k][i]
            for r in range(n):
                for s in range(n):
                    big[i * n + r][k * n + s] = block[r][s]
    return big


def _def11_solve(known, unknown_side):
    """Solve the inverse/t-inverse pair of equations for the unknown table.

    With sigma the known table and phi the unknown ("inverse" side), the
    equations are sum_k sigma_ki phi_kj = delta_ij and
    sum_k phi_jk sigma_ik = delta_ij; for unknown_side="t-inverse" the roles
    are swapped (the known table sits in the phi slot).
    """
    if unknown_side == "inverse":
        candidate = _def11_solve_transposed(known)
        if candidate is not None and _def11_check(known, candidate):
            return candidate
        return None

    assert unknown_side == "t-inverse"
    # unknown psi with sum_k psi_ki theta_kj = delta_ij: transposing every
    # entry matrix (positions unchanged) turns this into the column-solved
    # shape, and the solution transposes back.
    transposed_known = MatrixHom(
        [[_transpose_map(known.entries[i][j]) for j in range(2)] for i in range(2)]
    )
    solved = _def11_solve_transposed(transposed_known)
    if solved is None:
        return None
    candidate = MatrixHom(
        [[_transpose_map(solved.entries[i][j]) for j in range(2)] for i in range(2)]
    )
    if _def11_check(candidate, known):
        return candidate
    return None


def _cols_from(matrix):
    n = len(matrix)
    return [[matrix[r][c] for r in range(n)] for c in range(n)]


def _transpose_map(linmap):
    dense = linmap.dense()
    n = len(dense)
    transposed = [[dense[c][r] for c in range(n)] for r in range(n)]
    return GradedLinMap.from_matrix(linmap.source, linmap.target,
                                    _cols_from(transposed))


def _def11_solve_transposed(known):
    """Solve sum_k theta_kj^T psi_ki^T = delta: same block shape as inverse."""
    E = known.algebra
    n = E.dim
    big = _stack_matrix(known.entries, E)
    big_inv = matrix_inverse(big)
    if big_inv is None:
        return None
    mats = [[[[ZERO] * n for _ in range(n)] for _ in range(2)] for _ in range(2)]
    for j in range(2):
        for c in range(n):
            rhs = [ZERO] * (2 * n)
            rhs[j * n + c] = ONE
            sol = [sum((big_inv[r][t] * rhs[t] for t in range(2 * n)), start=ZERO)
                   for r in range(2 * n)]
            for k in range(2):
                for r in range(n):
                    mats[k][j][r][c] = sol[k * n + r]
    return MatrixHom([[GradedLinMap.from_matrix(E, E, _cols_from(mats[k][j]))
                       for j in range(2)] for k in range(2)])


def _def11_check(sigma, phi):
    """Both defining identities, as exact matrix equations."""
    E = sigma.algebra
    n = E.dim
    s = [[sigma.entries[i][j].dense() for j in range(2)] for i in range(2)]
    p = [[phi.entries[i][j].dense() for j in range(2)] for i in range(2)]
    ident = [[ONE if a == b else ZERO for b in range(n)] for a in range(n)]
    zero = [[ZERO] * n for _ in range(n)]
    for i in range(2):
        for j in range(2):
            acc = [[ZERO] * n for _ in range(n)]
            for k in range(2):
                prod = matrix_mul(s[k][i], p[k][j])
                acc = [[acc[r][c] + prod[r][c] for c in range(n)] for r in range(n)]
            expect = ident if i == j else zero
            if acc != expect:
                return False
            acc = [[ZERO] * n for _ in range(n)]
            for k in range(2):
                prod = matrix_mul(p[j][k], s[i][k])
                acc = [[acc[r][c] + prod[r][c] for c in range(n)] for r in range(n)]
            if acc != expect:
                return False
    return True


def t_invert_hom(sigma):
    """The table phi with sum_k sigma_ki phi_kj = delta_ij id and
    sum_k phi_jk sigma_ik = delta_ij id, or None when no solution exists.

    The returned phi is t-invertible with t-inverse sigma.
    """
    return _def11_solve(sigma, "inverse")


def t_inverse_table(theta):
    """The table psi with sum_k psi_ki theta_kj = delta_ij id and
    sum_k theta_jk psi_ik = delta_ij id (the t-inverse of theta)."""
    return _def11_solve(theta, "t-inverse")


def extend_on_generators(data, target, images):
    """Multiplicative extension of a generator assignment.

    ``data`` is a presented algebra with a normal-word basis (a
    CliffordData); ``images`` lists a target vector per generator.  Every
    defining relation is evaluated in the target; a nonzero value raises
    RelationViolated with the relation index.
    """
    memo = {(): dict(target.unit)}

    def image_of(word):
        cached = memo.get(word)
        if cached is not None:
            return cached
        value = target.mul(image_of(word[:-1]), images[word[-1]])
        memo[word] = value
        return value

    for idx, relation in enumerate(data.relations):
        acc = {}
        for word, coeff in relation.terms.items():
            acc = vec_add(acc, vec_scale(image_of(word), coeff))
        if acc:
            raise RelationViolated(idx)
    cols = [image_of(w) for w in data.algebra.words]
    return GradedLinMap(data.algebra, target, cols)


def verify_iso(linmap):
    """Bijective, multiplicative, unit- and degree-preserving."""
    source, target = linmap.source, linmap.target
    if source.dim != target.dim or not linmap.is_invertible():
        return False
    if not vec_eq(linmap.apply(source.unit), target.unit):
        return False
    for i in range(source.dim):
        for k in linmap.cols[i]:
            if target.degrees[k] != source.degrees[i]:
                return False
    for i in range(source.dim):
        fi = linmap.cols[i]
        for j in range(source.dim):
            lhs = linmap.apply(source.table[i][j])
            rhs = target.mul(fi, linmap.cols[j])
            if not vec_eq(lhs, rhs):
                return False
    return True


def xi_automorphism(algebra, k):
    """Scaling by k^degree, the degree read in Z2 as a 0/1 exponent."""
    k = k if isinstance(k, Scalar) else Scalar.of(k)
    if not k:
        raise ZeroScale("xi requires a nonzero scale")
    assert algebra.group_rank == 1
    cols = []
    for i in range(algebra.dim):
        factor = k if algebra.degrees[i][0] == 1 else ONE
        cols.append({i: factor})
    return GradedLinMap(algebra, algebra, cols)


def radical(algebra):
    """Jacobson radical via the trace form of left multiplication."""
    dim = algebra.dim
    traces = [algebra.trace_left_mult(i) for i in range(dim)]
    gram = []
    for i in range(dim):
        row = []
        for j in range(dim):
            acc = ZERO
            for k, c in algebra.table[i][j].items():
                if traces[k]:
                    acc = acc + c * traces[k]
            row.append(acc)
        gram.append(row)
    return nullspace(gram, dim)


def is_nilpotent_element(algebra, vec):
    power = dict(vec)
    for _ in range(algebra.dim):
        if not power:
            return True
        power = algebra.mul(power, vec)
    return not power


class RightModule:
    """A right module by one action matrix per algebra basis element."""

    __slots__ = ("algebra", "dim", "action")

    def __init__(self, algebra, dim, action):
        self.algebra = algebra
        self.dim = dim
        self.action = [tuple(tuple(row) for row in m) for m in action]
        if len(self.action) != algebra.dim:
            raise DimensionMismatch("one action matrix per algebra basis element")

    @classmethod
    def regular(cls, algebra):
        mats = [algebra.right_mult_rows(algebra.basis_vec(j))
                for j in range(algebra.dim)]
        return cls(algebra, algebra.dim, mats)

    @classmethod
    def from_invariant_subspace(cls, algebra, subspace):
        """Submodule of the regular module on an invariant subspace."""
        mats = []
        for j in range(algebra.dim):
            bj = algebra.basis_vec(j)
            rows = []
            for basis_vec in subspace.basis:
                image = algebra.mul(vec_sparse(list(basis_vec)), bj)
                coords, rem = subspace.reduce_with_coords(
                    vec_dense(image, algebra.dim))
                if any(rem):
                    raise DimensionMismatch("subspace is not action invariant")
                rows.append(coords)
            mats.append(rows)
        return cls(algebra, subspace.dim, mats)

    def act(self, vec, algebra_vec):
        """Row vector times the action of an algebra element."""
        out = [ZERO] * self.dim
        for j, cj in algebra_vec.items():
            mat = self.action[j]
            for r, vr in enumerate(vec):
                if not vr:
                    continue
                row = mat[r]
                for c in range(self.dim):
                    if row[c]:
                        out[c] = out[c] + vr * cj * row[c]
        return out

    def verify(self):
        """Unit acts as identity; action is multiplicative."""
        ident = [[ONE if i == j else ZERO for j in range(self.dim)]
                 for i in range(self.dim)]
        unit_mat = self._matrix_of(self.algebra.unit)
        if unit_mat != ident:
            return False
        for i in range(self.algebra.dim):
            for j in range(self.algebra.dim):
                lhs = matrix_mul(list(map(list, self.action[i])),
                                 list(map(list, self.action[j])))
                rhs = self._matrix_of(self.algebra.table[i][j])
                if [list(r) for r in lhs] != rhs:
                    return False
        return True

    def _matrix_of(self, algebra_vec):
        out = [[ZERO] * self.dim for _ in range(self.dim)]
        for j, cj in algebra_vec.items():
            mat = self.action[j]
            for r in range(self.dim):
                for c in range(self.dim):
                    if mat[r][c]:
                        out[r][c] = out[r][c] + cj * mat[r][c]
        return out


def spin(module, seeds):
    """Smallest action-invariant subspace containing the seed vectors."""
    seeds = [list(s) for s in seeds]
    if not seeds:
        return Subspace.zero(module.dim)
    space = Subspace.from_rows(seeds, ambient=module.dim)
    work = [list(row) for row in space.basis]
    while work:
        vec = work.pop()
        for j in range(module.algebra.dim):
            image = module.act(vec, module.algebra.basis_vec(j))
            if not space.contains(image):
                rows = list(space.basis) + [image]
                space = Subspace.from_rows(rows, module.dim)
                work.append(image)
    return space


def is_absolutely_simple(module):
    """Burnside: the action matrices span the full endomorphism space."""
    if module.dim < 1:
        return False
    elim = SparseEliminator()
    for mat in module.action:
        row = {}
        for r in range(module.dim):
            for c in range(module.dim):
                if mat[r][c]:
                    row[r * module.dim + c] = mat[r][c]
        elim.add(row)
    return elim.rank == module.dim * module.dim


def hom_dim(m, n):
    """Dimension of the space of module intertwiners m -> n."""
    if m.algebra is not n.algebra:
        raise DimensionMismatch("modules over different algebras")
    unknowns = m.dim * n.dim
    elim = SparseEliminator()
    for a in range(m.algebra.dim):
        am = m.action[a]
        an = n.action[a]
        for r in range(m.dim):
            for c in range(n.dim):
                row = {}
                for t in range(m.dim):
                    if am[r][t]:
                        key = t * n.dim + c
                        row[key] = row.get(key, ZERO) + am[r][t]
                for s in range(n.dim):
                    if an[s][c]:
                        key = r * n.dim + s
                        row[key] = row.get(key, ZERO) - an[s][c]
                row = {k: v for k, v in row.items() if v}
                if row:
                    elim.add(row)
    return unknowns - elim.rank


def verify_decomposition(algebra, simples, multiplicities):
    """Certify a full decomposition of the regular module.

    Requires zero radical, absolute simplicity of each listed module,
    no intertwiners between distinct listed modules, the prescribed
    multiplicities in the regular module, and a total dimension match.
    """
    if radical(algebra).dim != 0:
        return False
    if len(simples) != len(multiplicities):
        return False
    regular = RightModule.regular(algebra)
    total = 0
    for s, m in zip(simples, multiplicities):
        if not is_absolutely_simple(s):
            return False
        if hom_dim(s, regular) != m:
            return False
        total += m * s.dim
    for a in range(len(simples)):
        for b in range(len(simples)):
            if a != b and hom_dim(simples[a], simples[b]) != 0:
                return False
    return total == algebra.dim


def full_idempotent_check(algebra, e):
    """e is idempotent and the two-sided ideal it generates is everything."""
    if not vec_eq(algebra.mul(e, e), e):
        return False
    space = Subspace.from_rows([vec_dense(e, algebra.dim)], algebra.dim)
    work = [vec_dense(e, algebra.dim)]
    while work:
        vec = vec_sparse(work.pop())
        for j in range(algebra.dim):
            bj = algebra.basis_vec(j)
            for image in (algebra.mul(bj, vec), algebra.mul(vec, bj)):
                dense = vec_dense(image, algebra.dim)
                if not space.contains(dense):
                    space = Subspace.from_rows(list(space.basis) + [dense],
                                               algebra.dim)
                    work.append(dense)
    return space.dim == algebra.dim


class _HomogeneousLookup:
    """Coordinates in a stacked basis of homogeneous vectors, degree by
    degree; homogeneous components of distinct degrees have disjoint
    supports, so each degree block reduces independently."""

    def __init__(self, algebra, rows, degs):
        self.algebra = algebra
        self.offsets = {}
        self.blocks = {}
        position = 0
        for deg in sorted(set(degs)):
            block_rows = [rows[k] for k in range(len(rows)) if degs[k] == deg]
            self.offsets[deg] = position
            self.blocks[deg] = Subspace.from_rows(block_rows, algebra.dim)
            position += len(block_rows)
        self.total = position

    def coords(self, vec):
        """Sparse coordinates of an algebra vector, or None if outside."""
        by_degree = {}
        for i, c in vec.items():
            by_degree.setdefault(self.algebra.degrees[i], {})[i] = c
        out = {}
        for deg, part in by_degree.items():
            block = self.blocks.get(deg)
            if block is None:
                return None
            coeffs, rem = block.reduce_with_coords(
                vec_dense(part, self.algebra.dim))
            if any(rem):
                return None
            base = self.offsets[deg]
            for k, c in enumerate(coeffs):
                if c:
                    out[base + k] = c
        return out


def corner_embedding(algebra, e):
    """The corner algebra e A e plus the inclusion of its basis into A."""
    if not vec_eq(algebra.mul(e, e), e):
        raise NotIdempotent("corner requires an idempotent")
    degree_of_e = algebra.element_degree(e)
    if degree_of_e is None or any(degree_of_e):
        raise NotIdempotent("corner requires a homogeneous degree-0 idempotent")
    rows = []
    degs = []
    for deg in sorted({algebra.degrees[i] for i in range(algebra.dim)}):
        block = []
        for i in algebra.component_indices(deg):
            image = algebra.mul(algebra.mul(e, algebra.basis_vec(i)), e)
            if image:
                block.append(vec_dense(image, algebra.dim))
        if block:
            sub = Subspace.from_rows(block, algebra.dim)
            rows.extend(list(sub.basis))
            degs.extend([deg] * sub.dim)
    lookup = _HomogeneousLookup(algebra, rows, degs)
    labels = [f"e{k}" for k in range(len(rows))]
    table = []
    for u in rows:
        row_entries = []
        for v in rows:
            product = algebra.mul(vec_sparse(list(u)), vec_sparse(list(v)))
            coords = lookup.coords(product)
            if coords is None:
                raise DimensionMismatch("corner is not multiplicatively closed")
            row_entries.append(coords)
        table.append(row_entries)
    unit = lookup.coords(e)
    if unit is None:
        raise DimensionMismatch("idempotent lies outside its own corner")
    corner_algebra = GradedAlgebra(labels, table, unit, degs, algebra.group_rank)
    inclusion_cols = [vec_sparse(list(row)) for row in rows]
    return corner_algebra, inclusion_cols


def corner(algebra, e):
    """The corner algebra e A e with unit e, grading inherited."""
    corner_algebra, _ = corner_embedding(algebra, e)
    return corner_algebra


def strongly_graded_check(algebra):
    """For a Z2-grading: the degree-1 part squares onto the degree-0 part."""
    assert algebra.group_rank == 1
    odd = algebra.component_indices((1,))
    even = set(algebra.component_indices((0,)))
    elim = SparseEliminator()
    for i in odd:
        for j in odd:
            elim.add(dict(algebra.table[i][j]))
    return elim.rank == len(even)
