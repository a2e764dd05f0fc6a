"""Twisted matrix algebras, twisted direct products, semi-trivial
extensions and Zhang twists.

A twisting system for M_2(E) is a pair of 2x2 map tables theta^(0),
theta^(1) on E together with an invertible Z2-graded basis of the 2x2
scalar matrices (diagonal pair, anti-diagonal pair).  The basis carries the
structure tensor l and the vector gamma with gamma_1 I(0)_1 + gamma_2
I(0)_2 = identity; the tables must be t-invertible, send 1 to an invertible
scalar matrix, and satisfy the exchange identity that makes the deformed
product associative.  The individual table entries are NOT assumed
multiplicative: the upper-triangular tables produced by the deformation
pipelines have a derivation-like off-diagonal entry.

Twisted direct products are the analogous deformation of E x E over an
invertible basis of k x k.  Semi-trivial extensions and left Zhang twists
are the two repackagings used to identify degree-0 parts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    MuNotInvolution,
    NotTwistingSystem,
    PsiNotBalanced,
    PsiNotBimodule,
    SingularBasis,
)
from .exactlin import ONE, ZERO, Scalar, matrix_inverse, matrix_mul, matrix_vec
from .algebra import (
    GradedAlgebra,
    GradedLinMap,
    MatrixHom,
    Report,
    t_inverse_table,
    vec_add,
    vec_eq,
    vec_scale,
    verify_iso,
)


def _scalar_2x2(rows):
    return tuple(tuple(x if isinstance(x, Scalar) else Scalar.of(x) for x in row)
                 for row in rows)


class GradedBasisM2:
    """An invertible Z2-graded basis of the 2x2 scalar matrices.

    Carries the derived data: gamma (coordinates of the identity in the
    degree-0 pair) and the structure tensor l with
    I(i)_j I(i')_j' = sum_s I(i+i')_s l^(ii')_{s j j'}.
    """

    __slots__ = ("mats", "gamma", "l")

    def __init__(self, mats):
        # mats[(i, j)] with i in {0, 1}, j in {1, 2}
        self.mats = {key: _scalar_2x2(val) for key, val in mats.items()}
        for j in (1, 2):
            m0 = self.mats[(0, j)]
            if m0[0][1] or m0[1][0]:
                raise SingularBasis("degree-0 members must be diagonal")
            if not (m0[0][0] and m0[1][1]):
                raise SingularBasis("degree-0 members must be invertible")
            m1 = self.mats[(1, j)]
            if m1[0][0] or m1[1][1]:
                raise SingularBasis("degree-1 members must be anti-diagonal")
            if not (m1[0][1] and m1[1][0]):
                raise SingularBasis("degree-1 members must be invertible")
        for i in (0, 1):
            a, b = self.mats[(i, 1)], self.mats[(i, 2)]
            if i == 0:
                det = a[0][0] * b[1][1] - b[0][0] * a[1][1]
            else:
                det = a[0][1] * b[1][0] - b[0][1] * a[1][0]
            if not det:
                raise SingularBasis("graded pairs must be linearly independent")
        self.gamma = self._solve_gamma()
        self.l = self._solve_l()

    def _solve_gamma(self):
        a, b = self.mats[(0, 1)], self.mats[(0, 2)]
        det = a[0][0] * b[1][1] - b[0][0] * a[1][1]
        g1 = (b[1][1] - b[0][0]) / det
        g2 = (a[0][0] - a[1][1]) / det
        if g1 * a[0][0] + g2 * b[0][0] != ONE:
            raise SingularBasis("identity not solvable in the degree-0 pair")
        return (g1, g2)

    def _solve_l(self):
        out = {}
        for i in (0, 1):
            for ip in (0, 1):
                target = (i + ip) % 2
                t1, t2 = self.mats[(target, 1)], self.mats[(target, 2)]
                for j in (1, 2):
                    for jp in (1, 2):
                        prod = matrix_mul([list(r) for r in self.mats[(i, j)]],
                                          [list(r) for r in self.mats[(ip, jp)]])
                        if target == 0:
                            rows = [[t1[0][0], t2[0][0]], [t1[1][1], t2[1][1]]]
                            rhs = [prod[0][0], prod[1][1]]
                            off = (prod[0][1], prod[1][0])
                        else:
                            rows = [[t1[0][1], t2[0][1]], [t1[1][0], t2[1][0]]]
                            rhs = [prod[0][1], prod[1][0]]
                            off = (prod[0][0], prod[1][1])
                        if any(off):
                            raise SingularBasis("graded product left its component")
                        det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
                        if not det:
                            raise SingularBasis("structure tensor not solvable")
                        c1 = (rhs[0] * rows[1][1] - rows[0][1] * rhs[1]) / det
                        c2 = (rows[0][0] * rhs[1] - rhs[0] * rows[1][0]) / det
                        out[(i, ip, 1, j, jp)] = c1
                        out[(i, ip, 2, j, jp)] = c2
        return out

    def lval(self, i, ip, s, j, jp):
        return self.l[(i % 2, ip % 2, s, j, jp)]

    def L_matrix(self, i, ip, j):
        return [[self.lval(i, ip, 1, j, 1), self.lval(i, ip, 1, j, 2)],
                [self.lval(i, ip, 2, j, 1), self.lval(i, ip, 2, j, 2)]]

    def basis_identities(self):
        """The associativity / identity-coordinate relations of the tensor."""
        report = Report()
        ok = True
        for i in (0, 1):
            for ip in (0, 1):
                for ipp in (0, 1):
                    for j in (1, 2):
                        for jp in (1, 2):
                            for jpp in (1, 2):
                                for t in (1, 2):
                                    lhs = sum(
                                        (self.lval(i, ip + ipp, t, j, s)
                                         * self.lval(ip, ipp, s, jp, jpp)
                                         for s in (1, 2)), start=ZERO)
                                    rhs = sum(
                                        (self.lval(i + ip, ipp, t, s, jpp)
                                         * self.lval(i, ip, s, j, jp)
                                         for s in (1, 2)), start=ZERO)
                                    if lhs != rhs:
                                        ok = False
        report.add("l-associativity", ok)
        ok2 = True
        for i in (0, 1):
            for s in (1, 2):
                for j in (1, 2):
                    total = sum((self.lval(i, 0, s, j, t) * self.gamma[t - 1]
                                 for t in (1, 2)), start=ZERO)
                    if total != (ONE if s == j else ZERO):
                        ok2 = False
        report.add("l-right-unit", ok2)
        ok3 = True
        for i in (0, 1):
            for s in (1, 2):
                for t in (1, 2):
                    total = sum((self.lval(0, i, s, j, t) * self.gamma[j - 1]
                                 for j in (1, 2)), start=ZERO)
                    if total != (ONE if s == t else ZERO):
                        ok3 = False
        report.add("l-left-unit", ok3)
        return report


def structure_tensors(basis):
    """(gamma, l tensor) of an invertible graded basis, identities verified."""
    report = basis.basis_identities()
    if not report.ok:
        raise SingularBasis(str(report.first_failure()))
    return basis.gamma, basis.l


def standard_basis_m2():
    """The diagonal/anti-diagonal basis used by the plus-case pipeline."""
    from .exactlin import I as IMAG

    return GradedBasisM2({
        (0, 1): ((ONE, ZERO), (ZERO, ONE)),
        (0, 2): ((-IMAG, ZERO), (ZERO, IMAG)),
        (1, 1): ((ZERO, ONE), (ONE, ZERO)),
        (1, 2): ((ZERO, IMAG), (-IMAG, ZERO)),
    })


@dataclass
class TwistingSystemM2:
    """theta tables (one per Z2 degree) over a graded basis of M_2(k)."""

    algebra: GradedAlgebra
    theta: tuple     # theta[i] = MatrixHom-shaped table (not nec. multiplicative)
    basis: GradedBasisM2
    t_inverses: tuple = None

    def table(self, i):
        return self.theta[i % 2]


@dataclass
class TwistingSystemProd:
    algebra: GradedAlgebra
    theta: object    # a single 2x2 table
    epsilon: tuple   # basis of k x k as pairs of scalars
    l: dict
    t_inverse: object = None


def _table_entry(table, j, jp):
    return table.entries[j - 1][jp - 1]


def _apply(table, j, jp, vec):
    return table.entries[j - 1][jp - 1].apply(vec)


def verify_twisting_M2(system):
    """Full condition report for a candidate twisting system."""
    report = Report()
    E = system.algebra
    basis = system.basis
    report.add("basis-identities", basis.basis_identities().ok)
    inverses = []
    for i in (0, 1):
        inv = t_inverse_table(system.theta[i])
        inverses.append(inv)
        report.add(f"theta{i}-t-invertible", inv is not None)
    if any(inv is None for inv in inverses):
        return report
    system.t_inverses = tuple(inverses)
    theta1_at_unit = system.theta[1].value_at_unit()
    gl = theta1_at_unit is not None and bool(
        theta1_at_unit[0][0] * theta1_at_unit[1][1]
        - theta1_at_unit[0][1] * theta1_at_unit[1][0])
    report.add("theta1-unit-invertible", gl)
    theta0_at_unit = system.theta[0].value_at_unit()
    gl0 = theta0_at_unit is not None and bool(
        theta0_at_unit[0][0] * theta0_at_unit[1][1]
        - theta0_at_unit[0][1] * theta0_at_unit[1][0])
    report.add("theta0-unit-invertible", gl0)

    # the exchange identity, in its two-index form; inner applications are
    # hoisted per basis pair since they are reused across index tuples
    exchange_ok = True
    detail = ""
    for ip in (0, 1):
        for ipp in (0, 1):
            ti = system.theta[ip]
            tii = system.theta[ipp]
            tsum = system.theta[(ip + ipp) % 2]
            lcoeffs = {(p, a, b): basis.lval(ip, ipp, p, a, b)
                       for p in (1, 2) for a in (1, 2) for b in (1, 2)}
            for x in range(E.dim):
                bx = E.basis_vec(x)
                pre = [[_apply(ti, s, jp, bx) for jp in (1, 2)]
                       for s in (1, 2)]
                post = [[_apply(tsum, p, t, bx) for t in (1, 2)]
                        for p in (1, 2)]
                for y in range(E.dim):
                    by = E.basis_vec(y)
                    tii_by = [[_apply(tii, u, jpp, by) for jpp in (1, 2)]
                              for u in (1, 2)]
                    inner = [[E.mul(pre[s][jp], by) for jp in range(2)]
                             for s in range(2)]
                    lhs_app = [[[[_apply(tii, u, jpp, inner[s][jp])
                                  for jpp in (1, 2)] for u in (1, 2)]
                                for jp in range(2)] for s in range(2)]
                    rhs_app = [[[[E.mul(post[p][t], tii_by[u][jpp])
                                  for jpp in range(2)] for u in range(2)]
                                for t in range(2)] for p in range(2)]
                    for jp in (1, 2):
                        for jpp in (1, 2):
                            for p in (1, 2):
                                lhs = {}
                                for s in (1, 2):
                                    for u in (1, 2):
                                        coeff = lcoeffs[(p, s, u)]
                                        if coeff:
                                            lhs = vec_add(lhs, vec_scale(
                                                lhs_app[s - 1][jp - 1][u - 1][jpp - 1],
                                                coeff))
                                rhs = {}
                                for t in (1, 2):
                                    for u in (1, 2):
                                        coeff = lcoeffs[(t, jp, u)]
                                        if coeff:
                                            rhs = vec_add(rhs, vec_scale(
                                                rhs_app[p - 1][t - 1][u - 1][jpp - 1],
                                                coeff))
                                if not vec_eq(lhs, rhs):
                                    exchange_ok = False
                                    if not detail:
                                        detail = (f"first failure at i'={ip}"
                                                  f" i''={ipp} j'={jp}"
                                                  f" j''={jpp} p={p}"
                                                  f" x={x} y={y}")
                    if not exchange_ok:
                        break
                if not exchange_ok:
                    break
            if not exchange_ok:
                break
        if not exchange_ok:
            break
    report.add("exchange-identity", exchange_ok, detail)
    return report


def verify_twisting_suite(system):
    """The derived identities that hold on every accepted system."""
    report = Report()
    E = system.algebra
    basis = system.basis
    if system.t_inverses is None:
        for_check = verify_twisting_M2(system)
        if not for_check.ok:
            report.add("prerequisites", False, "system fails the defining checks")
            return report
    phis = system.t_inverses

    # l-weighted exchange law between theta and its t-inverses; the heavy
    # applications are cached per basis pair
    ok = True
    for i in (0, 1):
        for ip in (0, 1):
            th_ip = system.theta[ip]
            th_sum = system.theta[(i + ip) % 2]
            phi_i = phis[i]
            phi_ip = phis[ip]
            for x in range(E.dim):
                bx = E.basis_vec(x)
                phi_bx = [[_apply(phi_i, q, j, bx) for j in (1, 2)]
                          for q in (1, 2)]
                sum_phi = [[[[_apply(th_sum, p, t, phi_bx[q][j])
                              for j in range(2)] for q in range(2)]
                            for t in (1, 2)] for p in (1, 2)]
                for y in range(E.dim):
                    by = E.basis_vec(y)
                    phi_by = [[_apply(phi_ip, r, j, by) for j in (1, 2)]
                              for r in (1, 2)]
                    lhs_app = [[[_apply(th_ip, u, j + 1,
                                        E.mul(bx, phi_by[r][j]))
                                 for j in range(2)] for u in (1, 2)]
                               for r in range(2)]
                    rhs_app = [[[[E.mul(sum_phi[p][t][q][j], by)
                                  for j in range(2)] for q in range(2)]
                                for t in range(2)] for p in range(2)]
                    for p in (1, 2):
                        for q in (1, 2):
                            for r in (1, 2):
                                lhs = {}
                                for u in (1, 2):
                                    coeff = basis.lval(i, ip, p, q, u)
                                    if not coeff:
                                        continue
                                    for j in range(2):
                                        lhs = vec_add(lhs, vec_scale(
                                            lhs_app[r - 1][u - 1][j], coeff))
                                rhs = {}
                                for t in (1, 2):
                                    for j in (1, 2):
                                        coeff = basis.lval(i, ip, t, j, r)
                                        if coeff:
                                            rhs = vec_add(rhs, vec_scale(
                                                rhs_app[p - 1][t - 1][q - 1][j - 1],
                                                coeff))
                                if not vec_eq(lhs, rhs):
                                    ok = False
    report.add("theta-phi-exchange", ok)

    # invertibility of the values at 1 propagates to the t-inverses
    vals = [system.theta[i].value_at_unit() for i in (0, 1)]
    phi_vals = [phis[i].value_at_unit() for i in (0, 1)]
    ok2 = all(v is not None and bool(v[0][0] * v[1][1] - v[0][1] * v[1][0])
              for v in vals + phi_vals)
    report.add("units-invertible", ok2)

    # gamma relations against theta(1) and phi(1)
    ok3 = True
    for i in (0, 1):
        for ip in (0, 1):
            for q in (1, 2):
                for r in (1, 2):
                    for s in (1, 2):
                        lhs = {}
                        for p in (1, 2):
                            coeff = basis.lval(i, ip, p, q, r)
                            if coeff:
                                lhs = vec_add(lhs, vec_scale(
                                    _apply(phis[(i + ip) % 2], p, s, E.unit), coeff))
                        rhs = {}
                        for j in (1, 2):
                            coeff = basis.lval(i, ip, s, j, r)
                            if coeff:
                                rhs = vec_add(rhs, vec_scale(
                                    _apply(phis[i], q, j, E.unit), coeff))
                        if not vec_eq(lhs, rhs):
                            ok3 = False
    report.add("gamma-phi-relation", ok3)

    ok4 = True
    for x in range(E.dim):
        bx = E.basis_vec(x)
        for v in (1, 2):
            lhs = {}
            for r in (1, 2):
                for j in (1, 2):
                    inner = E.mul(bx, _apply(phis[0], r, j, E.unit))
                    lhs = vec_add(lhs, vec_scale(
                        _apply(system.theta[0], v, j, inner),
                        basis.gamma[r - 1]))
            rhs = vec_scale(bx, basis.gamma[v - 1])
            if not vec_eq(lhs, rhs):
                ok4 = False
    report.add("gamma-absorption", ok4)

    ok5 = True
    for i in (0, 1):
        for s in (1, 2):
            for q in (1, 2):
                total = ZERO
                for t in (1, 2):
                    for j in (1, 2):
                        for u in (1, 2):
                            lcoeff = basis.lval(0, i, s, j, t)
                            if not lcoeff:
                                continue
                            phi1 = _phi_scalar(E, phis[0], u, j)
                            th1 = _theta_scalar(E, system.theta[i], t, q)
                            total = total + basis.gamma[u - 1] * lcoeff * phi1 * th1
                want = ONE if s == q else ZERO
                if total != want:
                    ok5 = False
    report.add("gamma-unit-contraction", ok5)
    return report


def _theta_scalar(E, table, a, b):
    vec = _apply(table, a, b, E.unit)
    k = next(iter(E.unit))
    return vec.get(k, ZERO) / E.unit[k]


_phi_scalar = _theta_scalar


def build_twisted_M2(system):
    """The deformed algebra on the basis {I(i)_j e_b}, Z2 x Z2 graded."""
    E = system.algebra
    basis = system.basis
    dim = E.dim

    def pos(i, j, b):
        return (i * 2 + (j - 1)) * dim + b

    labels = []
    degrees = []
    for i in (0, 1):
        for j in (1, 2):
            for b in range(dim):
                labels.append(f"I{i}_{j}*{E.labels[b]}")
                degrees.append((i,) + E.degrees[b])
    total = 4 * dim
    table = [[{} for _ in range(total)] for _ in range(total)]
    for i in (0, 1):
        for j in (1, 2):
            for ip in (0, 1):
                isum = (i + ip) % 2
                for jp in (1, 2):
                    for b in range(dim):
                        bx = E.basis_vec(b)
                        pieces = {}
                        for s in (1, 2):
                            img = _apply(system.theta[ip], s, jp, bx)
                            if img:
                                pieces[s] = img
                        for bp in range(dim):
                            by = E.basis_vec(bp)
                            acc = {}
                            for s, img in pieces.items():
                                prod = E.mul(img, by)
                                if not prod:
                                    continue
                                for t in (1, 2):
                                    coeff = basis.lval(i, ip, t, j, s)
                                    if not coeff:
                                        continue
                                    for k, c in prod.items():
                                        key = pos(isum, t, k)
                                        val = acc.get(key)
                                        val = c * coeff if val is None else val + c * coeff
                                        if val:
                                            acc[key] = val
                                        else:
                                            acc.pop(key, None)
                            table[pos(i, j, b)][pos(ip, jp, bp)] = acc
    if system.t_inverses is None:
        raise NotTwistingSystem("verify the system before building")
    phi0 = system.t_inverses[0]
    unit = {}
    for j in (1, 2):
        for s in (1, 2):
            img = _apply(phi0, s, j, E.unit)
            if img:
                for k, c in img.items():
                    key = pos(0, j, k)
                    unit[key] = unit.get(key, ZERO) + basis.gamma[s - 1] * c
    unit = {k: v for k, v in unit.items() if v}
    return GradedAlgebra(labels, table, unit, degrees, group_rank=2)


def plain_m2(E, basis):
    """Ordinary matrix multiplication constants over the same basis."""
    dim = E.dim

    def pos(i, j, b):
        return (i * 2 + (j - 1)) * dim + b

    labels = []
    degrees = []
    for i in (0, 1):
        for j in (1, 2):
            for b in range(dim):
                labels.append(f"I{i}_{j}*{E.labels[b]}")
                degrees.append((i,) + E.degrees[b])
    total = 4 * dim
    table = [[{} for _ in range(total)] for _ in range(total)]
    for i in (0, 1):
        for j in (1, 2):
            for ip in (0, 1):
                isum = (i + ip) % 2
                for jp in (1, 2):
                    for b in range(dim):
                        for bp in range(dim):
                            prod = E.table[b][bp]
                            acc = {}
                            for t in (1, 2):
                                coeff = basis.lval(i, ip, t, j, jp)
                                if not coeff:
                                    continue
                                for k, c in prod.items():
                                    key = pos(isum, t, k)
                                    acc[key] = acc.get(key, ZERO) + c * coeff
                            table[pos(i, j, b)][pos(ip, jp, bp)] = {
                                k: v for k, v in acc.items() if v}
    gamma = basis.gamma
    unit = {}
    for j in (1, 2):
        if gamma[j - 1]:
            for k, c in E.unit.items():
                unit[pos(0, j, k)] = gamma[j - 1] * c
    return GradedAlgebra(labels, table, unit, degrees, group_rank=2)


def trivial_system(E, basis):
    ident = GradedLinMap.identity(E)
    zero = GradedLinMap.zero(E)
    table = MatrixHom([[ident, zero], [zero, ident]])
    return TwistingSystemM2(E, (table, table), basis)


def normalize_upsilon(system, old=None):
    """Rescale the tables so both send 1 to the identity matrix.

    Returns (new system, iso from the old twisted algebra to the new one);
    pass a prebuilt twisted algebra as ``old`` to avoid rebuilding it.
    """
    E = system.algebra
    if system.t_inverses is None:
        rep = verify_twisting_M2(system)
        if not rep.ok:
            raise NotTwistingSystem(str(rep.first_failure()))
    new_tables = []
    for i in (0, 1):
        phi_at_1 = system.t_inverses[i].value_at_unit()
        if phi_at_1 is None:
            raise NotTwistingSystem("t-inverse value at 1 is not scalar")
        entries = [[None, None], [None, None]]
        for j in (1, 2):
            for k in (1, 2):
                acc = GradedLinMap.zero(E)
                for m in (1, 2):
                    coeff = phi_at_1[k - 1][m - 1]
                    if coeff:
                        acc = acc + _table_entry(system.theta[i], j, m).scale(coeff)
                entries[j - 1][k - 1] = acc
        new_tables.append(MatrixHom(entries))
    upsilon = TwistingSystemM2(E, tuple(new_tables), system.basis)
    rep = verify_twisting_M2(upsilon)
    if not rep.ok:
        raise NotTwistingSystem(f"normalized tables fail: {rep.first_failure()}")
    if old is None:
        old = build_twisted_M2(system)
    new = build_twisted_M2(upsilon)
    dim = E.dim

    def pos(i, j, b):
        return (i * 2 + (j - 1)) * dim + b

    cols = []
    for i in (0, 1):
        for j in (1, 2):
            for b in range(dim):
                img = {}
                for s in (1, 2):
                    coeff = _theta_scalar(E, system.theta[i], s, j)
                    if coeff:
                        img[pos(i, s, b)] = coeff
                cols.append(img)
    iso = GradedLinMap(old, new, cols)
    if not verify_iso(iso):
        raise NotTwistingSystem("normalization map is not an isomorphism")
    return upsilon, iso


def rebase_omega(system, new_basis, old=None):
    """Transport a twisting system to another graded basis of M_2(k).

    Solves (I...) = (J...) U per degree and conjugates the tables by U.
    Returns (new system, iso from the old twisted algebra to the new one);
    pass a prebuilt twisted algebra as ``old`` to avoid rebuilding it.
    """
    E = system.algebra
    if system.t_inverses is None:
        rep = verify_twisting_M2(system)
        if not rep.ok:
            raise NotTwistingSystem(str(rep.first_failure()))
    U = {}
    for i in (0, 1):
        if i == 0:
            rows = [[new_basis.mats[(0, 1)][0][0], new_basis.mats[(0, 2)][0][0]],
                    [new_basis.mats[(0, 1)][1][1], new_basis.mats[(0, 2)][1][1]]]
            targets = [[system.basis.mats[(0, j)][0][0],
                        system.basis.mats[(0, j)][1][1]] for j in (1, 2)]
        else:
            rows = [[new_basis.mats[(1, 1)][0][1], new_basis.mats[(1, 2)][0][1]],
                    [new_basis.mats[(1, 1)][1][0], new_basis.mats[(1, 2)][1][0]]]
            targets = [[system.basis.mats[(1, j)][0][1],
                        system.basis.mats[(1, j)][1][0]] for j in (1, 2)]
        inv = matrix_inverse([list(r) for r in rows])
        if inv is None:
            raise SingularBasis("replacement basis is not invertible")
        U[i] = [matrix_vec(inv, t) for t in targets]  # column j of U^(i)
    new_tables = []
    for i in (0, 1):
        u = [[U[i][0][0], U[i][1][0]], [U[i][0][1], U[i][1][1]]]
        uinv = matrix_inverse(u)
        if uinv is None:
            raise SingularBasis("change of basis is singular")
        entries = [[GradedLinMap.zero(E), GradedLinMap.zero(E)],
                   [GradedLinMap.zero(E), GradedLinMap.zero(E)]]
        for a in (1, 2):
            for b in (1, 2):
                acc = GradedLinMap.zero(E)
                for p in (1, 2):
                    for q in (1, 2):
                        coeff = u[a - 1][p - 1] * uinv[q - 1][b - 1]
                        if coeff:
                            acc = acc + _table_entry(
                                system.theta[i], p, q).scale(coeff)
                entries[a - 1][b - 1] = acc
        new_tables.append(MatrixHom(entries))
    omega = TwistingSystemM2(E, tuple(new_tables), new_basis)
    rep = verify_twisting_M2(omega)
    if not rep.ok:
        raise NotTwistingSystem(f"rebased tables fail: {rep.first_failure()}")
    if old is None:
        old = build_twisted_M2(system)
    new = build_twisted_M2(omega)
    dim = E.dim

    def pos(i, j, b):
        return (i * 2 + (j - 1)) * dim + b

    cols = []
    for i in (0, 1):
        for j in (1, 2):
            for b in range(dim):
                img = {}
                for s in (1, 2):
                    coeff = U[i][j - 1][s - 1]
                    if coeff:
                        img[pos(i, s, b)] = coeff
                cols.append(img)
    iso = GradedLinMap(old, new, cols)
    if not verify_iso(iso):
        raise NotTwistingSystem("rebase map is not an isomorphism")
    return omega, iso


# ---------------------------------------------------------------------------
# twisted direct products


def product_l_tensor(epsilon):
    """l with eps_j eps_j' = sum_p eps_p l_{p;jj'}, computed not assumed."""
    e1, e2 = epsilon
    if not (e1[0] and e1[1] and e2[0] and e2[1]):
        raise SingularBasis("basis members must be invertible in k x k")
    det = e1[0] * e2[1] - e2[0] * e1[1]
    if not det:
        raise SingularBasis("basis of k x k must be linearly independent")
    out = {}
    for j, ej in ((1, e1), (2, e2)):
        for jp, ejp in ((1, e1), (2, e2)):
            prod = (ej[0] * ejp[0], ej[1] * ejp[1])
            c1 = (prod[0] * e2[1] - e2[0] * prod[1]) / det
            c2 = (e1[0] * prod[1] - prod[0] * e1[1]) / det
            out[(1, j, jp)] = c1
            out[(2, j, jp)] = c2
    return out


def verify_twisting_prod(system):
    report = Report()
    E = system.algebra
    ltens = system.l
    inv = t_inverse_table(system.theta)
    report.add("theta-t-invertible", inv is not None)
    if inv is None:
        return report
    system.t_inverse = inv
    val = system.theta.value_at_unit()
    report.add("theta-unit-invertible", val is not None and bool(
        val[0][0] * val[1][1] - val[0][1] * val[1][0]))
    ok = True
    detail = ""
    for x in range(E.dim):
        bx = E.basis_vec(x)
        pre = [[_apply(system.theta, s, j, bx) for j in (1, 2)] for s in (1, 2)]
        for y in range(E.dim):
            by = E.basis_vec(y)
            for j in (1, 2):
                for jp in (1, 2):
                    for p in (1, 2):
                        lhs = {}
                        for s in (1, 2):
                            for u in (1, 2):
                                coeff = ltens[(p, s, u)]
                                if not coeff:
                                    continue
                                inner = E.mul(pre[s - 1][j - 1], by)
                                lhs = vec_add(lhs, vec_scale(
                                    _apply(system.theta, u, jp, inner), coeff))
                        rhs = {}
                        for t in (1, 2):
                            for u in (1, 2):
                                coeff = ltens[(t, j, u)]
                                if not coeff:
                                    continue
                                term = E.mul(_apply(system.theta, p, t, bx),
                                             _apply(system.theta, u, jp, by))
                                rhs = vec_add(rhs, vec_scale(term, coeff))
                        if not vec_eq(lhs, rhs):
                            ok = False
                            if not detail:
                                detail = f"fails at j={j} j'={jp} p={p} x={x} y={y}"
    report.add("product-exchange-identity", ok, detail)
    return report


def build_twisted_prod(system):
    """The twisted product on the basis {eps_j e_b}, graded by E's grading."""
    E = system.algebra
    dim = E.dim
    ltens = system.l

    def pos(j, b):
        return (j - 1) * dim + b

    labels = []
    degrees = []
    for j in (1, 2):
        for b in range(dim):
            labels.append(f"e{j}*{E.labels[b]}")
            degrees.append(E.degrees[b])
    total = 2 * dim
    table = [[{} for _ in range(total)] for _ in range(total)]
    for j in (1, 2):
        for jp in (1, 2):
            for b in range(dim):
                bx = E.basis_vec(b)
                pieces = {}
                for s in (1, 2):
                    img = _apply(system.theta, s, jp, bx)
                    if img:
                        pieces[s] = img
                for bp in range(dim):
                    by = E.basis_vec(bp)
                    acc = {}
                    for s, img in pieces.items():
                        prod = E.mul(img, by)
                        if not prod:
                            continue
                        for t in (1, 2):
                            coeff = ltens[(t, j, s)]
                            if not coeff:
                                continue
                            for k, c in prod.items():
                                key = pos(t, k)
                                val = acc.get(key)
                                val = c * coeff if val is None else val + c * coeff
                                if val:
                                    acc[key] = val
                                else:
                                    acc.pop(key, None)
                    table[pos(j, b)][pos(jp, bp)] = acc
    if system.t_inverse is None:
        raise NotTwistingSystem("verify the system before building")
    # gamma: gamma_1 eps_1 + gamma_2 eps_2 = (1, 1)
    e1, e2 = system.epsilon
    det = e1[0] * e2[1] - e2[0] * e1[1]
    g1 = (e2[1] - e2[0]) / det
    g2 = (e1[0] - e1[1]) / det
    unit = {}
    for j in (1, 2):
        for s, gcoeff in ((1, g1), (2, g2)):
            if not gcoeff:
                continue
            img = _apply(system.t_inverse, s, j, E.unit)
            for k, c in img.items():
                key = pos(j, k)
                unit[key] = unit.get(key, ZERO) + gcoeff * c
    unit = {k: v for k, v in unit.items() if v}
    return GradedAlgebra(labels, table, unit, degrees, group_rank=1)


# ---------------------------------------------------------------------------
# semi-trivial extensions


@dataclass
class SemiTrivialData:
    """A ring, a bimodule given by action matrices, and a pairing psi."""

    ring: GradedAlgebra
    module_dim: int
    module_degrees: tuple     # Z2 degrees, already shifted if applicable
    left: tuple               # left[i]: column-convention matrix of e_i . -
    right: tuple              # right[i]: column-convention matrix of - . e_i
    psi: tuple                # psi[a][b] = ring vector for basis pair (a, b)

    def left_act(self, ring_vec, m_vec):
        out = {}
        for i, c in ring_vec.items():
            mat = self.left[i]
            for b, v in m_vec.items():
                for r in range(self.module_dim):
                    if mat[r][b]:
                        acc = out.get(r, ZERO) + c * v * mat[r][b]
                        if acc:
                            out[r] = acc
                        else:
                            out.pop(r, None)
        return out

    def right_act(self, m_vec, ring_vec):
        out = {}
        for i, c in ring_vec.items():
            mat = self.right[i]
            for b, v in m_vec.items():
                for r in range(self.module_dim):
                    if mat[r][b]:
                        acc = out.get(r, ZERO) + c * v * mat[r][b]
                        if acc:
                            out[r] = acc
                        else:
                            out.pop(r, None)
        return out

    def psi_of(self, m_vec, mp_vec):
        out = {}
        for a, ca in m_vec.items():
            for b, cb in mp_vec.items():
                out = vec_add(out, vec_scale(self.psi[a][b], ca * cb))
        return out


def verify_semitrivial(data):
    """Bimodule axioms, psi bimodule-linearity, balance, and the bridge."""
    E = data.ring
    m = data.module_dim
    report = Report()
    ok = True
    for i in range(E.dim):
        for j in range(E.dim):
            prod = E.table[i][j]
            for b in range(m):
                mb = {b: ONE}
                via = data.left_act(E.basis_vec(i), data.left_act(E.basis_vec(j), mb))
                direct = data.left_act(prod, mb)
                if not vec_eq(via, direct):
                    ok = False
                via = data.right_act(data.right_act(mb, E.basis_vec(i)), E.basis_vec(j))
                direct = data.right_act(mb, prod)
                if not vec_eq(via, direct):
                    ok = False
    for b in range(m):
        mb = {b: ONE}
        if not vec_eq(data.left_act(E.unit, mb), mb):
            ok = False
        if not vec_eq(data.right_act(mb, E.unit), mb):
            ok = False
    for i in range(E.dim):
        for b in range(m):
            mb = {b: ONE}
            lhs = data.right_act(data.left_act(E.basis_vec(i), mb), E.basis_vec(i))
            rhs = data.left_act(E.basis_vec(i), data.right_act(mb, E.basis_vec(i)))
            if not vec_eq(lhs, rhs):
                ok = False
    report.add("bimodule-axioms", ok)
    if not ok:
        raise PsiNotBimodule("module actions are not a bimodule")

    ok_bal = True
    for i in range(E.dim):
        ei = E.basis_vec(i)
        for a in range(m):
            ma = {a: ONE}
            for b in range(m):
                mb = {b: ONE}
                if not vec_eq(data.psi_of(data.right_act(ma, ei), mb),
                              data.psi_of(ma, data.left_act(ei, mb))):
                    ok_bal = False
    report.add("psi-balanced", ok_bal)
    if not ok_bal:
        raise PsiNotBalanced("psi is not balanced over the ring")

    ok_bim = True
    for i in range(E.dim):
        ei = E.basis_vec(i)
        for a in range(m):
            ma = {a: ONE}
            for b in range(m):
                mb = {b: ONE}
                if not vec_eq(data.psi_of(data.left_act(ei, ma), mb),
                              E.mul(ei, data.psi_of(ma, mb))):
                    ok_bim = False
                if not vec_eq(data.psi_of(ma, data.right_act(mb, ei)),
                              E.mul(data.psi_of(ma, mb), ei)):
                    ok_bim = False
    report.add("psi-bimodule-map", ok_bim)
    if not ok_bim:
        raise PsiNotBimodule("psi is not a bimodule map")

    ok_bridge = True
    for a in range(m):
        ma = {a: ONE}
        for b in range(m):
            mb = {b: ONE}
            for c in range(m):
                mc = {c: ONE}
                lhs = data.right_act(ma, data.psi_of(mb, mc))
                rhs = data.left_act(data.psi_of(ma, mb), mc)
                if not vec_eq(lhs, rhs):
                    ok_bridge = False
    report.add("psi-bridge", ok_bridge)
    if not ok_bridge:
        raise PsiNotBalanced("m psi(m' (x) m'') != psi(m (x) m') m''")
    return report


def build_semitrivial(data):
    """The algebra on ring (+) module with the twisted-square product."""
    verify_semitrivial(data)
    E = data.ring
    m = data.module_dim
    dim = E.dim + m
    labels = [f"r:{lbl}" for lbl in E.labels] + [f"m{k}" for k in range(m)]
    degrees = ([(0,) + d for d in E.degrees]
               + [(1,) + tuple(d) for d in data.module_degrees])

    def ring_part(vec):
        return {k: v for k, v in vec.items()}

    table = [[{} for _ in range(dim)] for _ in range(dim)]
    for i in range(E.dim):
        for j in range(E.dim):
            table[i][j] = dict(E.table[i][j])
        ei = E.basis_vec(i)
        for b in range(m):
            img = data.left_act(ei, {b: ONE})
            table[i][E.dim + b] = {E.dim + k: v for k, v in img.items()}
            img = data.right_act({b: ONE}, ei)
            table[E.dim + b][i] = {E.dim + k: v for k, v in img.items()}
    for a in range(m):
        for b in range(m):
            table[E.dim + a][E.dim + b] = ring_part(data.psi[a][b])
    unit = dict(E.unit)
    return GradedAlgebra(labels, table, unit, degrees, group_rank=2)


def semitrivial_mu(E, mu):
    """The bimodule-and-psi package built from an involutive automorphism:
    the module is E twisted by mu on the left and shifted, and psi is
    (a, b) -> mu(a) b."""
    if not verify_iso(mu):
        raise MuNotInvolution("mu must be a graded algebra automorphism")
    if not mu.compose(mu) == GradedLinMap.identity(E):
        raise MuNotInvolution("mu squared must be the identity")
    m = E.dim
    left = []
    right = []
    for i in range(E.dim):
        ei = E.basis_vec(i)
        mu_ei = mu.apply(ei)
        left_mat = [[ZERO] * m for _ in range(m)]
        right_mat = [[ZERO] * m for _ in range(m)]
        for b in range(m):
            img = E.mul(mu_ei, E.basis_vec(b))
            for r, c in img.items():
                left_mat[r][b] = c
            img = E.mul(E.basis_vec(b), ei)
            for r, c in img.items():
                right_mat[r][b] = c
        left.append(left_mat)
        right.append(right_mat)
    psi = []
    for a in range(m):
        mu_a = mu.apply(E.basis_vec(a))
        psi.append([E.mul(mu_a, E.basis_vec(b)) for b in range(m)])
    assert E.group_rank == 1
    shifted = [((d[0] + 1) % 2,) for d in E.degrees]
    return SemiTrivialData(E, m, tuple(shifted), tuple(left), tuple(right),
                           tuple(tuple(row) for row in psi))


def zhang_twist(E, nu):
    """The left Zhang twist of a Z2-graded algebra by nu = (nu_0, nu_1).

    The product is x * y = nu_{deg y}(x) y; the pair must satisfy the left
    twisting-system identity on basis pairs.
    """
    assert E.group_rank == 1
    nu0, nu1 = nu
    for member in (nu0, nu1):
        if not member.is_invertible() or not member.is_graded():
            raise NotTwistingSystem("twist maps must be graded automorphisms")
    maps = {0: nu0, 1: nu1}
    for ell in (0, 1):
        for h in (0, 1):
            hl = (h + ell) % 2
            for x in range(E.dim):
                bx = E.basis_vec(x)
                for y in range(E.dim):
                    if E.degrees[y][0] != h:
                        continue
                    by = E.basis_vec(y)
                    lhs = maps[ell].apply(E.mul(maps[h].apply(bx), by))
                    rhs = E.mul(maps[hl].apply(bx), maps[ell].apply(by))
                    if not vec_eq(lhs, rhs):
                        raise NotTwistingSystem(
                            f"left twisting identity fails at l={ell} h={h}"
                            f" x={x} y={y}")
    table = []
    for i in range(E.dim):
        bx = E.basis_vec(i)
        row = []
        for j in range(E.dim):
            twisted = maps[E.degrees[j][0]].apply(bx)
            row.append(E.mul(twisted, E.basis_vec(j)))
        table.append(row)
    return GradedAlgebra(E.labels, table, dict(E.unit), E.degrees, 1,
                         words=E.words)
