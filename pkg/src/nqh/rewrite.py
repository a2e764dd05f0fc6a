"""Bounded-degree rewriting for inhomogeneous quadratic quotients.

Relations f - c_f are oriented into rules lhs -> rhs with lhs the
deglex-largest word, after a full Gaussian interreduction over the words
appearing in the input, so that left-hand sides are distinct and no rule's
right-hand side contains another rule's left-hand side.  Completion
resolves overlap ambiguities up to a degree bound, adding oriented rules
for every critical pair that does not already reduce to zero; for the PBW
deformations this package builds, all overlaps resolve at degree 3 and the
resulting normal words form a finite basis.

Reduction always replaces a word by deglex-smaller words, so normal forms
terminate; confluence up to the completion bound makes them unique.
"""

from __future__ import annotations

from .errors import (
    CompletionDiverged,
    DegreeExceedsConfluence,
    InfiniteDimensional,
    NotConfluent,
    NotOrientable,
)
from .exactlin import ONE, Scalar, TensorElement, deglex_key, rref_rows

RULE_CAP = 512
NORMAL_WORD_CAP = 4096


class RewriteRule:
    __slots__ = ("lhs", "rhs")

    def __init__(self, lhs, rhs):
        self.lhs = tuple(lhs)
        self.rhs = rhs
        for word in rhs.terms:
            if deglex_key(word) >= deglex_key(self.lhs):
                raise NotOrientable("rule does not descend in deglex order")

    def as_element(self):
        return TensorElement.monomial(self.lhs) - self.rhs

    def __repr__(self):
        return f"RewriteRule({self.lhs} -> {dict(self.rhs.items())})"


def _interreduce(elements, min_lhs_degree=2):
    """Gaussian interreduction; returns oriented rules keyed by lhs."""
    elements = [e for e in elements if e]
    if not elements:
        return {}
    support = sorted({w for e in elements for w in e.terms}, key=deglex_key, reverse=True)
    col_of = {w: i for i, w in enumerate(support)}
    rows = []
    for e in elements:
        row = [Scalar(0)] * len(support)
        for w, c in e.terms.items():
            row[col_of[w]] = c
        rows.append(row)
    basis, pivots = rref_rows(rows, len(support))
    rules = {}
    for row, p in zip(basis, pivots):
        lhs = support[p]
        if len(lhs) < min_lhs_degree:
            raise NotOrientable(
                f"leading-term elimination degenerates to a degree-{len(lhs)} lead"
            )
        rhs = TensorElement(
            {support[j]: -row[j] for j in range(len(support)) if j != p and row[j]}
        )
        rules[lhs] = rhs
    return rules


class RewriteSystem:
    """An oriented rule set over a fixed alphabet."""

    __slots__ = ("rules", "alphabet", "max_degree", "confluent_up_to", "_nf_cache",
                 "_lhs_lengths")

    def __init__(self, rules, alphabet, max_degree=0, confluent_up_to=0):
        self.rules = dict(rules)
        self.alphabet = tuple(alphabet)
        self.max_degree = max_degree
        self.confluent_up_to = confluent_up_to
        self._nf_cache = {(): TensorElement.unit()}
        self._lhs_lengths = sorted({len(l) for l in self.rules}) if self.rules else []

    @property
    def nletters(self):
        return len(self.alphabet)

    def rule_list(self):
        return [RewriteRule(lhs, rhs) for lhs, rhs in
                sorted(self.rules.items(), key=lambda kv: deglex_key(kv[0]))]

    def _find_redex(self, word):
        rules = self.rules
        for pos in range(len(word)):
            for length in self._lhs_lengths:
                if pos + length > len(word):
                    break
                sub = word[pos:pos + length]
                if sub in rules:
                    return pos, length, sub
        return None

    def _nf_word(self, word):
        cached = self._nf_cache.get(word)
        if cached is not None:
            return cached
        redex = self._find_redex(word)
        if redex is None:
            result = TensorElement.monomial(word)
        else:
            pos, length, sub = redex
            prefix, suffix = word[:pos], word[pos + length:]
            acc = {}
            for rhs_word, coeff in self.rules[sub].terms.items():
                piece = self._nf_word(prefix + rhs_word + suffix)
                for w, c in piece.terms.items():
                    val = acc.get(w)
                    val = coeff * c if val is None else val + coeff * c
                    if val:
                        acc[w] = val
                    else:
                        acc.pop(w, None)
            result = TensorElement(acc)
        self._nf_cache[word] = result
        return result

    def reduce(self, element):
        """Normal form without the confluence-bound guard (internal use)."""
        acc = {}
        for word, coeff in element.terms.items():
            piece = self._nf_word(word)
            for w, c in piece.terms.items():
                val = acc.get(w)
                val = coeff * c if val is None else val + coeff * c
                if val:
                    acc[w] = val
                else:
                    acc.pop(w, None)
        return TensorElement(acc)

    def is_normal(self, word):
        return self._find_redex(word) is None


def orient(relations, alphabet):
    """Orient a list of tensor relations into a rewrite system."""
    rules = _interreduce(list(relations))
    return RewriteSystem(rules, alphabet)


def _overlaps(u, v):
    """Proper overlap words u[:k-cut] glued with v, by shared border length."""
    out = []
    top = min(len(u), len(v))
    for k in range(1, top):
        if u[len(u) - k:] == v[:k]:
            out.append(u + v[k:])
    return out


def complete(system, maxdeg):
    """Resolve all critical pairs of degree <= maxdeg."""
    if maxdeg < 3:
        raise ValueError("completion bound must be at least 3")
    equations = [rule.as_element() for rule in system.rule_list()]
    while True:
        rules = _interreduce(equations, min_lhs_degree=1)
        if len(rules) > RULE_CAP:
            raise CompletionDiverged(f"rule count exceeded {RULE_CAP}")
        work = RewriteSystem(rules, system.alphabet, maxdeg)
        new_equation = None
        lhs_list = sorted(rules, key=deglex_key)
        for u in lhs_list:
            for v in lhs_list:
                critical = []
                for word in _overlaps(u, v):
                    if len(word) <= maxdeg:
                        left = rules[u].concat(TensorElement.monomial(word[len(u):]))
                        right = TensorElement.monomial(
                            word[:len(word) - len(v)]).concat(rules[v])
                        critical.append((left, right))
                if v != u and len(v) < len(u):
                    for pos in range(len(u) - len(v) + 1):
                        if u[pos:pos + len(v)] == v:
                            right = TensorElement.monomial(u[:pos]).concat(
                                rules[v]).concat(
                                TensorElement.monomial(u[pos + len(v):]))
                            critical.append((rules[u], right))
                for left, right in critical:
                    diff = work.reduce(left) - work.reduce(right)
                    if diff:
                        new_equation = diff
                        break
                if new_equation is not None:
                    break
            if new_equation is not None:
                break
        if new_equation is None:
            return RewriteSystem(rules, system.alphabet, maxdeg, confluent_up_to=maxdeg)
        if not new_equation.max_word():
            raise NotOrientable("completion derived 1 = 0: inconsistent relations")
        equations = [TensorElement.monomial(l) - r for l, r in rules.items()]
        equations.append(new_equation)


def normal_form(system, element):
    """Unique irreducible representative of an element."""
    for word in element.terms:
        if len(word) > system.confluent_up_to:
            raise DegreeExceedsConfluence(
                f"degree {len(word)} exceeds the certified bound {system.confluent_up_to}"
            )
    return system.reduce(element)


def normal_words(system, cap=NORMAL_WORD_CAP):
    """All irreducible words, by increasing deglex; requires finiteness."""
    if system.confluent_up_to < 3:
        raise NotConfluent("complete the system before enumerating normal words")
    found = [()]
    level = [()]
    length = 0
    while level:
        length += 1
        if length > system.confluent_up_to:
            raise InfiniteDimensional(
                "normal words exceed the certified confluence bound")
        nxt = []
        for w in level:
            for a in range(system.nletters):
                word = w + (a,)
                if system.is_normal(word):
                    nxt.append(word)
        found.extend(nxt)
        if len(found) > cap:
            raise InfiniteDimensional(f"more than {cap} normal words")
        level = nxt
    return found


def extract_algebra(system, grading="parity", cap=NORMAL_WORD_CAP):
    """Structure constants of the quotient on the normal-word basis.

    The Z2-grading is word-length parity; ``grading`` may also be a callable
    word -> degree tuple.
    """
    from .algebra import GradedAlgebra

    words = normal_words(system, cap)
    index = {w: i for i, w in enumerate(words)}
    dim = len(words)
    if grading == "parity":
        degree_fn = lambda w: (len(w) % 2,)
    else:
        degree_fn = grading
    degrees = [degree_fn(w) for w in words]
    group_rank = len(degrees[0]) if degrees else 1
    labels = []
    names = system.alphabet
    for w in words:
        labels.append("1" if not w else "".join(names[a] for a in w))
    table = []
    for wi in words:
        row = []
        for wj in words:
            product = wi + wj
            if len(product) > system.confluent_up_to:
                raise NotConfluent(
                    "products of normal words exceed the confluence bound")
            nf = system._nf_word(product)
            vec = {}
            for w, c in nf.terms.items():
                k = index.get(w)
                if k is None:
                    raise NotConfluent("normal form left the normal-word basis")
                vec[k] = c
            row.append(vec)
        table.append(row)
    unit = {index[()]: ONE}
    return GradedAlgebra(labels, table, unit, degrees, group_rank, words=words)
