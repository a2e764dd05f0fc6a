"""Exact arithmetic over K = Q(i, sqrt(2)) and dense exact linear algebra.

A scalar is stored as four integers (a0, a1, a2, a3) over a common positive
denominator d, representing

    (a0 + a1*i + a2*r2 + a3*i*r2) / d,          r2 = sqrt(2),

reduced so that gcd(a0, a1, a2, a3, d) = 1.  K is a field: every nonzero
scalar is invertible (the inverse is computed from the three Galois
conjugates i -> -i, r2 -> -r2).

Tensor words over a finite alphabet are tuples of generator indices; the
empty tuple is the unit of the tensor algebra.  Words are ordered
degree-lexicographically: first by length, then lexicographically by index.
Free-algebra elements (TensorElement) map words to scalars with no zero
coefficients stored.

Subspaces of K^n are kept as reduced-row-echelon bases, which makes equality
and membership canonical.  A sparse forward eliminator is provided for rank
and membership questions in large ambient spaces (tensor degrees), where a
full dense RREF would be wasteful.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from .errors import DegreeMismatch, DimensionMismatch

Rational = Fraction

_UNIT_SUFFIX = ("", "*i", "*r2", "*i*r2")


def _normalize(n0, n1, n2, n3, d):
    if d == 0:
        raise ZeroDivisionError("zero denominator")
    if d < 0:
        n0, n1, n2, n3, d = -n0, -n1, -n2, -n3, -d
    if n0 == 0 and n1 == 0 and n2 == 0 and n3 == 0:
        return (0, 0, 0, 0, 1)
    if d == 1:
        return (n0, n1, n2, n3, 1)
    g = gcd(gcd(abs(n0), abs(n1)), gcd(abs(n2), abs(n3)))
    g = gcd(g, d)
    if g > 1:
        return (n0 // g, n1 // g, n2 // g, n3 // g, d // g)
    return (n0, n1, n2, n3, d)


class Scalar:
    """An element of K = Q(i, sqrt(2)) in canonical form."""

    __slots__ = ("n", "d")

    def __init__(self, n0=0, n1=0, n2=0, n3=0, d=1):
        n0, n1, n2, n3, d = _normalize(int(n0), int(n1), int(n2), int(n3), int(d))
        self.n = (n0, n1, n2, n3)
        self.d = d

    @classmethod
    def _raw(cls, n, d):
        s = object.__new__(cls)
        n0, n1, n2, n3, d = _normalize(n[0], n[1], n[2], n[3], d)
        s.n = (n0, n1, n2, n3)
        s.d = d
        return s

    @classmethod
    def of(cls, value):
        """Coerce an int, Fraction or Scalar into K."""
        if isinstance(value, Scalar):
            return value
        if isinstance(value, int):
            return cls(value)
        if isinstance(value, Fraction):
            return cls(value.numerator, 0, 0, 0, value.denominator)
        raise TypeError(f"cannot coerce {value!r} into K")

    @classmethod
    def from_rationals(cls, c0, c1=0, c2=0, c3=0):
        c0, c1, c2, c3 = (Fraction(c) for c in (c0, c1, c2, c3))
        d = 1
        for c in (c0, c1, c2, c3):
            d = d * c.denominator // gcd(d, c.denominator)
        return cls(
            c0.numerator * (d // c0.denominator),
            c1.numerator * (d // c1.denominator),
            c2.numerator * (d // c2.denominator),
            c3.numerator * (d // c3.denominator),
            d,
        )

    def as_rationals(self):
        return tuple(Fraction(c, self.d) for c in self.n)

    def is_rational(self):
        return self.n[1] == 0 and self.n[2] == 0 and self.n[3] == 0

    def rational_part(self):
        return Fraction(self.n[0], self.d)

    def __bool__(self):
        return self.n != (0, 0, 0, 0)

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                other = Scalar.of(other)
            else:
                return NotImplemented
        return self.n == other.n and self.d == other.d

    def __hash__(self):
        return hash((self.n, self.d))

    def __neg__(self):
        a = self.n
        return Scalar._raw((-a[0], -a[1], -a[2], -a[3]), self.d)

    def __add__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.of(other)
        a, b = self.n, other.n
        da, db = self.d, other.d
        if da == db:
            return Scalar._raw((a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]), da)
        return Scalar._raw(
            (a[0] * db + b[0] * da, a[1] * db + b[1] * da,
             a[2] * db + b[2] * da, a[3] * db + b[3] * da),
            da * db,
        )

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.of(other)
        a, b = self.n, other.n
        da, db = self.d, other.d
        if da == db:
            return Scalar._raw((a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]), da)
        return Scalar._raw(
            (a[0] * db - b[0] * da, a[1] * db - b[1] * da,
             a[2] * db - b[2] * da, a[3] * db - b[3] * da),
            da * db,
        )

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.of(other)
        a0, a1, a2, a3 = self.n
        b0, b1, b2, b3 = other.n
        return Scalar._raw(
            (
                a0 * b0 - a1 * b1 + 2 * (a2 * b2 - a3 * b3),
                a0 * b1 + a1 * b0 + 2 * (a2 * b3 + a3 * b2),
                a0 * b2 + a2 * b0 - a1 * b3 - a3 * b1,
                a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1,
            ),
            self.d * other.d,
        )

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return Scalar.of(other).__sub__(self)

    def conj_i(self):
        a = self.n
        return Scalar._raw((a[0], -a[1], a[2], -a[3]), self.d)

    def conj_r2(self):
        a = self.n
        return Scalar._raw((a[0], a[1], -a[2], -a[3]), self.d)

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero in K")
        c1 = self.conj_i()
        c2 = self.conj_r2()
        c3 = c1.conj_r2()
        p = c1 * c2 * c3
        norm = self * p
        assert norm.is_rational() and norm
        nr = norm.rational_part()
        # p / nr
        return Scalar._raw(
            tuple(c * nr.denominator for c in p.n), p.d * nr.numerator
        )

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.of(other)
        return self * other.inverse()

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("only nonnegative integer powers")
        result = ONE
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def text(self):
        """Canonical textual form, terms ordered 1, i, r2, i*r2."""
        if not self:
            return "0"
        parts = []
        for k, c in enumerate(self.n):
            if c == 0:
                continue
            f = Fraction(c, self.d)
            num = f"{f.numerator}" if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
            parts.append(num + _UNIT_SUFFIX[k])
        return " + ".join(parts)

    @classmethod
    def parse(cls, text):
        """Parse the textual form emitted by :meth:`text`.

        Accepts bare symbols (``i``, ``-r2``, ``i*r2``) as coefficient 1
        shorthands and arbitrary whitespace around ``+``.
        """
        from .errors import ParseError

        s = text.replace(" ", "")
        if not s:
            raise ParseError("empty scalar")
        if s == "0":
            return ZERO
        coeffs = [Fraction(0)] * 4
        # split into signed terms
        terms = []
        current = ""
        for ch in s:
            if ch in "+-" and current and current[-1] not in "+-/*":
                terms.append(current)
                current = ch if ch == "-" else ""
            else:
                current += ch
        if current:
            terms.append(current)
        for term in terms:
            if not term or term in ("+", "-"):
                raise ParseError(f"bad scalar term in {text!r}")
            body = term
            sign = 1
            if body[0] == "+":
                body = body[1:]
            elif body[0] == "-":
                sign = -1
                body = body[1:]
            slot = 0
            if body.endswith("i*r2"):
                slot = 3
                body = body[: -len("i*r2")]
            elif body.endswith("r2"):
                slot = 2
                body = body[: -len("r2")]
            elif body.endswith("i"):
                slot = 1
                body = body[:-1]
            body = body.rstrip("*")
            if body == "":
                value = Fraction(1)
            else:
                try:
                    value = Fraction(body)
                except (ValueError, ZeroDivisionError) as exc:
                    raise ParseError(f"bad scalar {text!r}") from exc
            coeffs[slot] += sign * value
        return cls.from_rationals(*coeffs)

    def __repr__(self):
        return f"Scalar({self.text()})"


ZERO = Scalar(0)
ONE = Scalar(1)
MINUS_ONE = Scalar(-1)
I = Scalar(0, 1)
R2 = Scalar(0, 0, 1)
IR2 = Scalar(0, 0, 0, 1)
HALF = Scalar(1, 0, 0, 0, 2)
SQRT2_OVER_2 = Scalar(0, 0, 1, 0, 2)


def scalar_arith(a, b, op):
    """Field arithmetic dispatch; ``op`` is one of add, sub, mul, div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def _rational_sqrt(x):
    """Square root of a Fraction within Q, or None."""
    x = Fraction(x)
    if x < 0:
        return None
    pn, pd = x.numerator, x.denominator
    rn, rd = isqrt(pn), isqrt(pd)
    if rn * rn == pn and rd * rd == pd:
        return Fraction(rn, rd)
    return None


def _sqrt_in_Qi(u, v):
    """Square root of u + v*i with u, v in Q, as a pair (x, y), or None."""
    u, v = Fraction(u), Fraction(v)
    if v == 0:
        r = _rational_sqrt(u)
        if r is not None:
            return (r, Fraction(0))
        r = _rational_sqrt(-u)
        if r is not None:
            return (Fraction(0), r)
        return None
    r = _rational_sqrt(u * u + v * v)
    if r is None:
        return None
    for root in (r, -r):
        t = (u + root) / 2
        x = _rational_sqrt(t)
        if x is not None and x != 0:
            return (x, v / (2 * x))
    return None


def sqrt_in_K(s):
    """A square root of ``s`` in K, or None when none exists in K.

    Works down the tower K = Q(i)(r2): writing s = s0 + s1*r2 with
    s0, s1 in Q(i), a root a + b*r2 satisfies a^2 + 2b^2 = s0 and
    2ab = s1.
    """
    s = Scalar.of(s) if not isinstance(s, Scalar) else s
    c0, c1, c2, c3 = s.as_rationals()
    # s0 = c0 + c1*i,  s1 = c2 + c3*i
    if c2 == 0 and c3 == 0:
        root = _sqrt_in_Qi(c0, c1)
        if root is not None:
            return Scalar.from_rationals(root[0], root[1], 0, 0)
        # try a pure r2-multiple root: (b*r2)^2 = 2 b^2
        root = _sqrt_in_Qi(c0 / 2, c1 / 2)
        if root is not None:
            return Scalar.from_rationals(0, 0, root[0], root[1])
        return None
    # d = sqrt(s0^2 - 2 s1^2) in Q(i)
    d_re = c0 * c0 - c1 * c1 - 2 * (c2 * c2 - c3 * c3)
    d_im = 2 * c0 * c1 - 4 * c2 * c3
    d = _sqrt_in_Qi(d_re, d_im)
    if d is None:
        return None
    for sign in (1, -1):
        t_re = (c0 + sign * d[0]) / 2
        t_im = (c1 + sign * d[1]) / 2
        a = _sqrt_in_Qi(t_re, t_im)
        if a is None:
            continue
        a_sc = Scalar.from_rationals(a[0], a[1], 0, 0)
        if not a_sc:
            continue
        b_sc = Scalar.from_rationals(c2, c3, 0, 0) / (Scalar(2) * a_sc)
        root = a_sc + b_sc * R2
        if root * root == s:
            return root
    return None


# ---------------------------------------------------------------------------
# words and free-algebra elements


def deglex_key(word):
    return (len(word), word)


def word_index(word, nletters):
    idx = 0
    for letter in word:
        idx = idx * nletters + letter
    return idx


def words_of_length(nletters, length):
    """All words of a given length in index (= deglex) order."""
    if length == 0:
        return [()]
    words = [()]
    for _ in range(length):
        words = [w + (a,) for w in words for a in range(nletters)]
    return words


class TensorElement:
    """A finite K-linear combination of tensor words."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        cleaned = {}
        if terms:
            for word, coeff in terms.items():
                coeff = coeff if isinstance(coeff, Scalar) else Scalar.of(coeff)
                if coeff:
                    cleaned[tuple(word)] = coeff
        self.terms = cleaned

    @classmethod
    def monomial(cls, word, coeff=ONE):
        return cls({tuple(word): coeff})

    @classmethod
    def unit(cls):
        return cls({(): ONE})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, TensorElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: deglex_key(kv[0]))

    def __add__(self, other):
        out = dict(self.terms)
        for word, coeff in other.terms.items():
            acc = out.get(word)
            acc = coeff if acc is None else acc + coeff
            if acc:
                out[word] = acc
            else:
                out.pop(word, None)
        result = TensorElement.__new__(TensorElement)
        result.terms = out
        return result

    def __neg__(self):
        result = TensorElement.__new__(TensorElement)
        result.terms = {w: -c for w, c in self.terms.items()}
        return result

    def __sub__(self, other):
        return self + (-other)

    def scale(self, coeff):
        coeff = coeff if isinstance(coeff, Scalar) else Scalar.of(coeff)
        if not coeff:
            return TensorElement()
        result = TensorElement.__new__(TensorElement)
        result.terms = {w: c * coeff for w, c in self.terms.items()}
        return result

    def concat(self, other):
        """Tensor-algebra product."""
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                word = w1 + w2
                coeff = c1 * c2
                acc = out.get(word)
                acc = coeff if acc is None else acc + coeff
                if acc:
                    out[word] = acc
                else:
                    out.pop(word, None)
        result = TensorElement.__new__(TensorElement)
        result.terms = out
        return result

    def degree(self):
        """Common word length, or None for 0 or mixed-degree elements."""
        lengths = {len(w) for w in self.terms}
        if len(lengths) == 1:
            return lengths.pop()
        return None

    def max_word(self):
        return max(self.terms, key=deglex_key)

    def coordinates(self, nletters, length):
        vec = [ZERO] * (nletters ** length)
        for word, coeff in self.terms.items():
            if len(word) != length:
                raise DegreeMismatch("element is not homogeneous of the requested degree")
            vec[word_index(word, nletters)] = coeff
        return vec

    @classmethod
    def from_coordinates(cls, vec, nletters, length):
        words = words_of_length(nletters, length)
        return cls({w: c for w, c in zip(words, vec) if c})

    def rename(self, word_map):
        """Apply an index substitution letter-wise."""
        return TensorElement(
            {tuple(word_map[a] for a in w): c for w, c in self.terms.items()}
        )

    def text(self, names):
        if not self.terms:
            return "0"
        parts = []
        for word, coeff in self.items():
            label = "1" if not word else "".join(names[a] for a in word)
            parts.append(f"({coeff.text()})*{label}")
        return " + ".join(parts)

    def __repr__(self):
        return f"TensorElement({dict(self.items())!r})"


def pairing(dual, primal):
    """Evaluate a dual tensor on a primal tensor of the same degree.

    Word functionals multiply factor by factor in straight order, so in the
    word bases the pairing matrix is the identity and the value is a plain
    coefficient dot product.
    """
    deg_d = dual.degree()
    deg_p = primal.degree()
    if deg_d is None or deg_p is None or deg_d != deg_p:
        if dual and primal:
            raise DegreeMismatch("pairing requires equal homogeneous degrees")
    total = ZERO
    for word, coeff in dual.terms.items():
        other = primal.terms.get(word)
        if other:
            total = total + coeff * other
    return total


# ---------------------------------------------------------------------------
# dense linear algebra


def _as_scalar_row(row):
    return [c if isinstance(c, Scalar) else Scalar.of(c) for c in row]


def rref_rows(rows, ambient=None):
    """Reduced row echelon form; returns (basis_rows, pivot_columns)."""
    work = [_as_scalar_row(r) for r in rows]
    ncols = ambient
    for r in work:
        if ncols is None:
            ncols = len(r)
        elif len(r) != ncols:
            raise DimensionMismatch("rows of unequal length")
    if ncols is None:
        raise DimensionMismatch("ambient dimension unknown for empty input")
    basis = []
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot_row = None
        for idx in range(rank, len(work)):
            if work[idx][col]:
                pivot_row = idx
                break
        if pivot_row is None:
            continue
        work[rank], work[pivot_row] = work[pivot_row], work[rank]
        inv = work[rank][col].inverse()
        row = work[rank]
        if inv != ONE:
            work[rank] = row = [c * inv for c in row]
        for idx in range(len(work)):
            if idx == rank:
                continue
            factor = work[idx][col]
            if factor:
                target = work[idx]
                work[idx] = [
                    target[j] - factor * row[j] if row[j] else target[j]
                    for j in range(ncols)
                ]
        pivots.append(col)
        rank += 1
        if rank == len(work):
            break
    basis = [tuple(work[i]) for i in range(rank)]
    return basis, pivots


class Subspace:
    """A subspace of K^ambient held as an RREF basis."""

    __slots__ = ("ambient", "basis", "pivots")

    def __init__(self, ambient, basis, pivots):
        self.ambient = ambient
        self.basis = tuple(tuple(r) for r in basis)
        self.pivots = tuple(pivots)

    @classmethod
    def from_rows(cls, rows, ambient=None):
        basis, pivots = rref_rows(rows, ambient)
        if ambient is None:
            ambient = len(basis[0]) if basis else 0
        return cls(ambient, basis, pivots)

    @classmethod
    def zero(cls, ambient):
        return cls(ambient, (), ())

    @property
    def dim(self):
        return len(self.basis)

    def reduce(self, vec):
        """Subtract the projection onto the subspace; returns the remainder."""
        vec = _as_scalar_row(vec)
        if len(vec) != self.ambient:
            raise DimensionMismatch("vector has wrong length")
        for row, p in zip(self.basis, self.pivots):
            factor = vec[p]
            if factor:
                vec = [vec[j] - factor * row[j] if row[j] else vec[j]
                       for j in range(self.ambient)]
        return vec

    def reduce_with_coords(self, vec):
        vec = _as_scalar_row(vec)
        if len(vec) != self.ambient:
            raise DimensionMismatch("vector has wrong length")
        coords = []
        for row, p in zip(self.basis, self.pivots):
            factor = vec[p]
            coords.append(factor)
            if factor:
                vec = [vec[j] - factor * row[j] if row[j] else vec[j]
                       for j in range(self.ambient)]
        return coords, vec

    def contains(self, vec):
        return not any(self.reduce(vec))

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(ambient={self.ambient}, dim={self.dim})"


def rref(rows, ambient=None):
    """Spec surface: (Subspace, rank) of the row span."""
    space = Subspace.from_rows(rows, ambient)
    return space, space.dim


def nullspace(rows, ncols=None):
    """Kernel {v : M v = 0} of the matrix with the given rows, in RREF."""
    rows = [_as_scalar_row(r) for r in rows]
    if ncols is None:
        if not rows:
            raise DimensionMismatch("ncols required for an empty matrix")
        ncols = len(rows[0])
    basis, pivots = rref_rows(rows, ncols)
    pivot_set = set(pivots)
    kernel = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [ZERO] * ncols
        vec[free] = ONE
        for row, p in zip(basis, pivots):
            if row[free]:
                vec[p] = -row[free]
        kernel.append(vec)
    return Subspace.from_rows(kernel, ncols)


def matrix_mul(a, b):
    rows = len(a)
    inner = len(b)
    cols = len(b[0]) if inner else 0
    out = [[ZERO] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            f = ai[k]
            if not f:
                continue
            bk = b[k]
            for j in range(cols):
                if bk[j]:
                    oi[j] = oi[j] + f * bk[j]
    return out


def matrix_vec(a, v):
    out = []
    for row in a:
        acc = ZERO
        for c, x in zip(row, v):
            if c and x:
                acc = acc + c * x
        out.append(acc)
    return out


def identity_matrix(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def zero_matrix(n, m=None):
    m = n if m is None else m
    return [[ZERO] * m for _ in range(n)]


def matrix_inverse(a):
    """Inverse of a square matrix, or None if singular."""
    n = len(a)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)]
           for i, row in enumerate(a)]
    basis, pivots = rref_rows(aug, 2 * n)
    if list(pivots)[:n] != list(range(n)) or len(basis) != n:
        return None
    return [list(row[n:]) for row in basis]


def solve_linear(rows, rhs):
    """One solution x of (rows) x = rhs, or None if inconsistent.

    When the system is underdetermined the free coordinates are set to 0.
    """
    if not rows:
        return []
    ncols = len(rows[0])
    aug = [list(_as_scalar_row(r)) + [Scalar.of(b) if not isinstance(b, Scalar) else b]
           for r, b in zip(rows, rhs)]
    basis, pivots = rref_rows(aug, ncols + 1)
    sol = [ZERO] * ncols
    for row, p in zip(basis, pivots):
        if p == ncols:
            return None
        sol[p] = row[ncols]
    return sol


def subspace_intersection(u, w):
    """Intersection of two subspaces of the same ambient space."""
    if u.ambient != w.ambient:
        raise DimensionMismatch("subspaces of different ambient spaces")
    if u.dim == 0 or w.dim == 0:
        return Subspace.zero(u.ambient)
    cols = list(u.basis) + list(w.basis)
    # kernel of the ambient x (p+q) matrix whose columns are the basis vectors
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(u.ambient)]
    kernel = nullspace(rows, len(cols))
    vectors = []
    for combo in kernel.basis:
        vec = [ZERO] * u.ambient
        for coeff, basis_vec in zip(combo[: u.dim], u.basis):
            if coeff:
                vec = [vec[i] + coeff * basis_vec[i] for i in range(u.ambient)]
        vectors.append(vec)
    return Subspace.from_rows(vectors, u.ambient)


class SparseEliminator:
    """Forward Gaussian eliminator over sparse rows keyed by column index.

    Supports incremental rank computation and membership tests in large
    ambient spaces.  Rows are dicts column -> Scalar.  Insertion reduces
    only until the row acquires a fresh lead column (row echelon, not
    reduced), which keeps pivot rows sparse; membership reduction cancels
    pivot leads until none remain.
    """

    __slots__ = ("pivots",)

    def __init__(self):
        self.pivots = {}

    def reduce(self, row):
        row = {c: v for c, v in row.items() if v}
        pivots = self.pivots
        while row:
            hit = None
            for col in row:
                if col in pivots and (hit is None or col < hit):
                    hit = col
            if hit is None:
                break
            factor = row.pop(hit)
            for col, val in pivots[hit].items():
                if col == hit:
                    continue
                acc = row.get(col)
                acc = -factor * val if acc is None else acc - factor * val
                if acc:
                    row[col] = acc
                else:
                    row.pop(col, None)
        return row

    def add(self, row):
        """Insert a row; returns True if it increased the rank."""
        row = {c: v for c, v in row.items() if v}
        pivots = self.pivots
        while row:
            lead = min(row)
            pivot_row = pivots.get(lead)
            if pivot_row is None:
                inv = row[lead].inverse()
                if inv != ONE:
                    row = {c: v * inv for c, v in row.items()}
                pivots[lead] = row
                return True
            factor = row.pop(lead)
            for col, val in pivot_row.items():
                if col == lead:
                    continue
                acc = row.get(col)
                acc = -factor * val if acc is None else acc - factor * val
                if acc:
                    row[col] = acc
                else:
                    row.pop(col, None)
        return False

    def contains(self, row):
        return not self.reduce(row)

    @property
    def rank(self):
        return len(self.pivots)
