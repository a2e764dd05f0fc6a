"""Quadratic presentations T(V)/(R), graded dimensions, and quadratic duals.

A presentation stores its relation space as an RREF subspace of V (x) V in
word coordinates, so two presentations with the same generators are equal
exactly when their relation subspaces coincide.  Degree-n components are
computed as quotients of V^(x)n by the two-sided degree-n piece of the
relation ideal.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BoundExceeded, DegreeMismatch, DimensionMismatch
from .exactlin import (
    ZERO,
    SparseEliminator,
    Subspace,
    TensorElement,
    nullspace,
    word_index,
    words_of_length,
)

DEGREE_BOUND = 8


class QuadraticPresentation:
    """Generators of degree 1 plus a subspace of quadratic relations."""

    __slots__ = ("generators", "relations", "_dim_cache", "_ideal_cache")

    def __init__(self, generators, relations):
        generators = tuple(generators)
        if len(set(generators)) != len(generators):
            raise DimensionMismatch("generator names must be unique")
        g = len(generators)
        if isinstance(relations, Subspace):
            if relations.ambient != g * g:
                raise DimensionMismatch("relation subspace has wrong ambient dimension")
            space = relations
        else:
            rows = []
            for rel in relations:
                deg = rel.degree()
                if deg != 2:
                    raise DegreeMismatch("relations must be homogeneous of degree 2")
                rows.append(rel.coordinates(g, 2))
            space = Subspace.from_rows(rows, g * g)
        self.generators = generators
        self.relations = space
        self._dim_cache = {}
        self._ideal_cache = {}

    @property
    def ngens(self):
        return len(self.generators)

    def relation_elements(self):
        """RREF basis of the relation space as tensor elements."""
        g = self.ngens
        return [TensorElement.from_coordinates(row, g, 2) for row in self.relations.basis]

    def index_of(self, name):
        return self.generators.index(name)

    def _ideal_eliminator(self, n):
        """Forward eliminator spanning sum_i V^i (x) R (x) V^(n-2-i)."""
        cached = self._ideal_cache.get(n)
        if cached is not None:
            return cached
        g = self.ngens
        elim = SparseEliminator()
        if n >= 2 and self.relations.dim:
            sparse_rels = []
            for row in self.relations.basis:
                sparse_rels.append([(idx, c) for idx, c in enumerate(row) if c])
            for i in range(n - 1):
                left_count = g ** i
                right_count = g ** (n - 2 - i)
                right_block = g ** (n - 2 - i)
                for rel in sparse_rels:
                    for left in range(left_count):
                        base = left * (g * g)
                        for right in range(right_count):
                            row = {}
                            for idx, coeff in rel:
                                col = (base + idx) * right_block + right
                                row[col] = coeff
                            elim.add(row)
        self._ideal_cache[n] = elim
        return elim

    def component_dim(self, n):
        if n < 0:
            raise DegreeMismatch("negative degree")
        cached = self._dim_cache.get(n)
        if cached is None:
            g = self.ngens
            if n == 0:
                cached = 1
            elif n == 1:
                cached = g
            else:
                cached = g ** n - self._ideal_eliminator(n).rank
            self._dim_cache[n] = cached
        return cached

    def component_basis_words(self, n):
        """Words giving coset representatives of the degree-n component.

        The representatives are the non-pivot words of the relation-ideal
        eliminator, in deglex order.
        """
        g = self.ngens
        if n == 0:
            return [()]
        if n == 1:
            return [(a,) for a in range(g)]
        elim = self._ideal_eliminator(n)
        words = words_of_length(g, n)
        return [w for i, w in enumerate(words) if i not in elim.pivots]

    def reduce_mod_ideal(self, element, n):
        """Coordinates of a degree-n tensor in the component basis."""
        g = self.ngens
        elim = self._ideal_eliminator(n)
        row = {word_index(w, g): c for w, c in element.terms.items() if c}
        for w in element.terms:
            if len(w) != n:
                raise DegreeMismatch("element is not homogeneous of degree n")
        residue = elim.reduce(row)
        basis_words = self.component_basis_words(n)
        pos = {word_index(w, g): k for k, w in enumerate(basis_words)}
        vec = [ZERO] * len(basis_words)
        for col, coeff in residue.items():
            vec[pos[col]] = coeff
        return vec

    def in_ideal(self, element, n):
        g = self.ngens
        row = {word_index(w, g): c for w, c in element.terms.items()}
        return self._ideal_eliminator(n).contains(row)

    def __eq__(self, other):
        return (
            isinstance(other, QuadraticPresentation)
            and self.generators == other.generators
            and self.relations == other.relations
        )

    def __repr__(self):
        return f"QuadraticPresentation({self.generators}, dim R={self.relations.dim})"


@dataclass(frozen=True)
class CentralElement:
    """A degree-2 tensor lift of a (claimed) central element."""

    lift: TensorElement
    owner: QuadraticPresentation


def graded_dim(presentation, n):
    return presentation.component_dim(n)


def hilbert_profile(presentation, upto, bound=DEGREE_BOUND):
    if upto > bound:
        raise BoundExceeded(f"degree {upto} exceeds the configured bound {bound}")
    return [presentation.component_dim(n) for n in range(upto + 1)]


def koszul_dual(presentation):
    """The quadratic dual: starred generators, relations the orthogonal
    complement of R under the straight word pairing."""
    g = presentation.ngens
    rows = [list(row) for row in presentation.relations.basis]
    complement = nullspace(rows, g * g)
    dual_names = tuple(name + "*" for name in presentation.generators)
    return QuadraticPresentation(dual_names, complement)


def check_central(presentation, z):
    """Whether the degree-2 class of the lift commutes with every generator."""
    if isinstance(z, CentralElement):
        lift = z.lift
    else:
        lift = z
    if lift.degree() not in (2, None):
        raise DegreeMismatch("central lift must have degree 2")
    if not lift:
        return True
    g = presentation.ngens
    for v in range(g):
        gen = TensorElement.monomial((v,))
        diff = lift.concat(gen) - gen.concat(lift)
        if not presentation.in_ideal(diff, 3):
            return False
    return True
