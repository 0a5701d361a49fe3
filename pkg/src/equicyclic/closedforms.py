"""Closed-form calculators for graded pieces of pi_alpha(HA) and pi_alpha(HZ).

Every calculator returns a ``GradedPiece`` (or a Mackey functor for the
C_pq classifier) that can be compared with the cellular oracles in
``spheres``.  Ring presentations are reduced to a single multidegree by
enumerating the finitely many monomials of that degree and instantiating
every relation times every monomial landing there.

Conventions: lambda^d for d | n has kernel C_d; sigma has kernel C_{n/2};
a grading m - V (- sigma) with V actual is the positive cone, where
pi_{m-V}(HM) = H_m(S^V; M).
"""

import itertools
from math import gcd

from .burnside import (BurnsideElement, BurnsideIdeal, CyclicGroupCtx, divisors,
                       factorization, is_prime_power, is_square_free, lcm, multiply,
                       restrict, transfer, transfer_matrix)
from .exactlin import FgAbGroup, IntComplex, direct_sum, format_group, homology
from .ro import (ROElement, fixed_dims, format_grading, in_ro_zero, is_divisor_graded,
                 tau_of)
from .spheres import GradedPiece


class ClosedFormError(ValueError):
    pass


def _ctx(alpha):
    return alpha.ctx


# ---------------------------------------------------------------------------
# positive cone bookkeeping

def cone_data(alpha):
    """Split a positive-cone grading into (m, factors, eps).

    ``factors`` is a list of (d, mult) for the lambda^d summands of V
    (lambda^(n/2) included, d ascending) and eps in {0, 1} is the number of
    extra sigma's.  Raises ClosedFormError outside the divisor-graded
    positive cone.
    """
    n = alpha.n
    half = n // 2 if n % 2 == 0 else None
    for s, c in alpha.lam.items():
        if n % s:
            raise ClosedFormError(
                "%s is not divisor graded (lambda^%d); use the oracle instead"
                % (format_grading(alpha), s))
        if c > 0 and s != half:
            raise ClosedFormError(
                "%s is outside the positive cone; use the oracle instead" % format_grading(alpha))
    st = alpha.sigma_total()
    if st > 0:
        raise ClosedFormError(
            "%s is outside the positive cone; use the oracle instead" % format_grading(alpha))
    t = -st
    factors = [(d, -c) for d, c in sorted(alpha.lam.items()) if d != half]
    if t // 2:
        factors.append((half, t // 2))
    factors.sort()
    return alpha.trivial, factors, t % 2


def l_index_set(factors, mhat):
    """The tuples L = (l_i) with 0 <= l_i <= m_i and sum l_i = mhat/2."""
    if mhat % 2 or mhat < 0:
        return []
    r = mhat // 2
    out = []
    for ls in itertools.product(*[range(m + 1) for _, m in factors]):
        if sum(ls) == r:
            out.append(ls)
    return out


def j_set(factors, L):
    """Indices i with m_i - l_i > 0."""
    return [i for i, ((_, m), l) in enumerate(zip(factors, L)) if m - l > 0]


def _u_group(n, factors, L):
    """Order of the intersection of the kernels of the u-factors of L."""
    h = n
    for (d, _), l in zip(factors, L):
        if l:
            h = gcd(h, d)
    return h


def _rep_name(n, d):
    return "s" if d == "s" else "L%d" % d


def monomial_label(n, factors, L, eps):
    parts = []
    for (d, m), l in zip(factors, L):
        for kind, e in (("u", l), ("a", m - l)):
            if e:
                parts.append("%s_%s%s" % (kind, _rep_name(n, d), "" if e == 1 else "^%d" % e))
    if eps:
        parts.append("a_s")
    return " ".join(parts) if parts else "1"


def _orbit_label(h, k):
    return "1" if h == k else "[C%d/C%d]" % (h, k)


# ---------------------------------------------------------------------------
# the presented positive cone (coefficients A(H_U) or Z)

class _Presentation:
    """Generators (monomial, coefficient basis element) and relation rows."""

    def __init__(self):
        self.blocks = []  # (key, offset, size)
        self.index = {}
        self.labels = []
        self.rows = []
        self.ngens = 0

    def add_block(self, key, labels):
        self.index[key] = (self.ngens, len(labels))
        self.blocks.append(key)
        self.labels.extend(labels)
        self.ngens += len(labels)

    def add_row(self, entries):
        """entries: list of (block key, vector) summed into one row."""
        row = [0] * self.ngens
        for key, vec in entries:
            off, size = self.index[key]
            for i, v in enumerate(vec):
                row[off + i] += v
        if any(row):
            self.rows.append(row)

    def group(self):
        return FgAbGroup(self.ngens, self.rows)


def _coeff_vec(x, coeff):
    """Coordinates of a Burnside element x of A(C_h) in the coefficient C(h)."""
    if coeff == "A":
        return list(x.coords)
    # Z: the Burnside ring acts through cardinality
    h = x.group
    return [sum(c * (h // e) for e, c in zip(divisors(h), x.coords))]


def _coeff_basis(ctx, h, coeff):
    if coeff == "A":
        return [BurnsideElement.orbit(ctx, h, k) for k in divisors(h)]
    return [BurnsideElement.one(ctx, h)]


def _coeff_labels(h, coeff):
    if coeff == "A":
        return [_orbit_label(h, k) for k in divisors(h)]
    return ["1"]


def presented_positive_piece(alpha, coeff="A"):
    """Graded piece of the a/u presentation at a positive-cone grading.

    The monomial with u-factors U carries coefficients C(H_U), H_U the
    intersection of the kernels in U: C(H) = A(H) for coeff "A" and Z for
    coeff "Z".  Relations: y * a_xi = 0 for y = [G/C_k], C_k <= ker xi, and
    the gold relations tr^{H1}_{H12}(x) u_xi1 a_xi2 = tr^{H2}_{H12}(x) u_xi2 a_xi1
    for x in A(H12), H_i = ker xi_i, H12 = H1 n H2, times every coefficient of
    the remaining factors.
    Returns (group, generator labels).
    """
    if coeff not in ("A", "Z"):
        raise ClosedFormError("coefficients must be 'A' or 'Z'")
    ctx = _ctx(alpha)
    n = ctx.n
    mhat, factors, eps = cone_data(alpha)
    pres = _Presentation()
    Ls = l_index_set(factors, mhat)
    hs = {}
    for L in Ls:
        h = _u_group(n, factors, L)
        hs[L] = h
        mono = monomial_label(n, factors, L, eps)
        pres.add_block(L, ["%s*%s" % (c, mono) if c != "1" else mono
                           for c in _coeff_labels(h, coeff)])
    # a-relations
    for L in Ls:
        h = hs[L]
        kernels = [d for (d, m), l in zip(factors, L) if m - l > 0]
        if eps:
            kernels.append(n // 2)
        basis = _coeff_basis(ctx, h, coeff)
        for kd in sorted(set(kernels)):
            for k in divisors(kd):
                y = restrict(BurnsideElement.orbit(ctx, n, k), h)
                for c in basis:
                    pres.add_row([(L, _coeff_vec(multiply(y, c), coeff))])
    # gold relations
    for L in Ls:
        for i, ((d1, m1), l1) in enumerate(zip(factors, L)):
            if not l1:
                continue
            for j, ((d2, m2), l2) in enumerate(zip(factors, L)):
                if j == i or m2 - l2 <= 0:
                    continue
                L2 = list(L)
                L2[i] -= 1
                L2[j] += 1
                L2 = tuple(L2)
                rest = list(L)
                rest[i] -= 1
                h0 = _u_group(n, factors, rest)
                h1, h2 = hs[L], hs[L2]
                h12 = gcd(d1, d2)
                for x in _coeff_basis(ctx, h12, coeff):
                    w1 = restrict(transfer(x, d1), h1)
                    w2 = restrict(transfer(x, d2), h2)
                    for c in _coeff_basis(ctx, h0, coeff):
                        v1 = multiply(restrict(c, h1), w1)
                        v2 = multiply(restrict(c, h2), w2)
                        pres.add_row([(L, _coeff_vec(v1, coeff)),
                                      (L2, [-y for y in _coeff_vec(v2, coeff)])])
    return pres.group(), pres.labels


def hz_positive_piece(alpha):
    """pi_alpha(HZ) on the divisor-graded positive cone, by the lcm/gcd formula.

    Without sigma: Z in the top degree m = dim V, cyclic of order
    lcm_L gcd(n/d_i : i in J(L)) for even 0 <= m < dim V, zero otherwise.
    With one sigma the same lcm/gcd with 2 = n/(n/2) joined to every gcd, so
    Z/2 or zero for even 0 <= m <= dim V.
    """
    mhat, factors, eps = cone_data(alpha)
    n = alpha.n
    dim_v = 2 * sum(m for _, m in factors)
    Ls = l_index_set(factors, mhat) if mhat <= dim_v else []
    labels = [monomial_label(n, factors, L, eps) for L in Ls]
    if not Ls:
        value = FgAbGroup(0)
    elif mhat == dim_v and not eps:
        value = FgAbGroup.free(1)
    else:
        order = 1
        for L in Ls:
            k = 2 if eps else 0
            for i in j_set(factors, L):
                k = gcd(k, n // factors[i][0])
            order = lcm(order, k)
        value = FgAbGroup.cyclic(order)
    return GradedPiece(alpha, value, labels, method="closedform")


def hz_presented_piece(alpha):
    """pi_alpha(HZ) from the presentation (n/d) a = 0, gold relations, 2 a_sigma = 0."""
    g, labels = presented_positive_piece(alpha, "Z")
    return GradedPiece(alpha, g, labels, method="closedform")


def ha_positive_piece_primepower(alpha):
    """pi_alpha(HA) over C_{p^m} on the divisor-graded positive cone."""
    if not is_prime_power(alpha.n):
        raise ClosedFormError("the prime-power calculator needs n = p^m, got %d" % alpha.n)
    g, labels = presented_positive_piece(alpha, "A")
    return GradedPiece(alpha, g, labels, method="closedform")


def ha_positive_piece_squarefree(alpha, subgroup=None):
    """Graded piece of R_n (tensored over A(G) with A(C_c) if subgroup = c).

    Generators are monomials with A(C_c)-coefficients; relations are
    I_res(C_d) u_d = 0, I_tr(C_d) a_d = 0, I_tr(C_{n/2}) a_sigma = 0 and
    [G/C_{(n/d)(d,e)}] u_d a_e = [G/C_{(n/e)(d,e)}] u_e a_d.  With subgroup
    c, A(G) acts on A(C_c) by restriction; subgroup = 1 gives the Z-analogue.
    """
    n = alpha.n
    if not is_square_free(n):
        raise ClosedFormError("the square-free calculator needs square-free n, got %d" % n)
    ctx = _ctx(alpha)
    c = n if subgroup is None else subgroup
    ctx.check_divisor(c)
    mhat, factors, eps = cone_data(alpha)
    pres = _Presentation()
    Ls = l_index_set(factors, mhat)
    basis = [BurnsideElement.orbit(ctx, c, k) for k in divisors(c)]

    def act(y):
        ry = restrict(y, c)
        return [multiply(ry, b).coords for b in basis]

    for L in Ls:
        mono = monomial_label(n, factors, L, eps)
        pres.add_block(L, ["%s*%s" % (lab, mono) if lab != "1" else mono
                           for lab in (_orbit_label(c, k) for k in divisors(c))])
    for L in Ls:
        for (d, m), l in zip(factors, L):
            if l:
                for y in BurnsideIdeal(ctx, "res", d).generators():
                    for v in act(y):
                        pres.add_row([(L, v)])
            if m - l > 0:
                for k in divisors(d):
                    for v in act(BurnsideElement.orbit(ctx, n, k)):
                        pres.add_row([(L, v)])
        if eps:
            for k in divisors(n // 2):
                for v in act(BurnsideElement.orbit(ctx, n, k)):
                    pres.add_row([(L, v)])
        for i, ((d1, _), l1) in enumerate(zip(factors, L)):
            if not l1:
                continue
            for j, ((d2, m2), l2) in enumerate(zip(factors, L)):
                if j == i or m2 - l2 <= 0:
                    continue
                L2 = list(L)
                L2[i] -= 1
                L2[j] += 1
                L2 = tuple(L2)
                g12 = gcd(d1, d2)
                v1 = act(BurnsideElement.orbit(ctx, n, (n // d1) * g12))
                v2 = act(BurnsideElement.orbit(ctx, n, (n // d2) * g12))
                for a, b in zip(v1, v2):
                    pres.add_row([(L, a), (L2, [-x for x in b])])
    return GradedPiece(alpha, pres.group(), pres.labels, method="closedform")


# ---------------------------------------------------------------------------
# negative cone over C_{p^m} (HZ)

def _pm(n):
    f = factorization(n)
    if len(f) != 1:
        raise ClosedFormError("the negative cone calculator needs n = p^m, got %d" % n)
    (p, m), = f
    return p, m


def _level_dims(alpha):
    """[|alpha^{H_0}|, ..., |alpha^{H_m}|] with H_i = C_{p^i}."""
    p, m = _pm(alpha.n)
    fd = fixed_dims(alpha)
    return [fd[p ** i] for i in range(m + 1)]


def chi_index_data(dims):
    """(I, S, q) for the level dimensions of a grading with |alpha| = 0.

    I lists the i with dims[i] = 0 and dims[i+1] != 0 (i = m always counts
    when dims[m] = 0); S the matching s_k in (i_{k-1}, i_k] with dims[s] = 0
    and dims[s-1] != 0 (dims[-1] counts as nonzero); q(k, l) the sum of
    -dims[j]/2 over i_l < j <= i_k (k, l are 0-based positions in I).
    """
    m = len(dims) - 1
    idx = [i for i in range(m + 1) if dims[i] == 0 and (i == m or dims[i + 1] != 0)]
    ss = []
    prev = -1
    for i in idx:
        s = i
        while s - 1 > prev and dims[s - 1] == 0:
            s -= 1
        ss.append(s)
        prev = i

    def q(k, l):
        return sum(-dims[j] // 2 for j in range(idx[l] + 1, idx[k] + 1))

    return idx, ss, q


def chi_marks(alpha, s):
    """Mark vector of chi_{alpha,s} = tr^G_{H_s}(chi_{res alpha}) at H_0, ..., H_m.

    Entry j is p^{m-s} p^{-sum_{j<=k<=s} |alpha^{H_k}|/2} when j <= s and
    |alpha^{H_j}| = 0, else 0.
    """
    p, m = _pm(alpha.n)
    dims = _level_dims(alpha)
    if dims[0] != 0 or any(v > 0 for v in dims):
        raise ClosedFormError("chi classes need |alpha| = 0 and alpha <= 0")
    if not 0 <= s <= m:
        raise ClosedFormError("chi index %d outside 0..%d" % (s, m))
    out = []
    for j in range(m + 1):
        if j <= s and dims[j] == 0:
            out.append(p ** (m - s) * p ** sum(-dims[k] // 2 for k in range(j, s + 1)))
        else:
            out.append(0)
    return out


def _chi_relations(p, m, dims, top, a_power):
    """Relation rows on chi_0..chi_top for level dimensions dims (|beta| = 0)."""
    rows = []
    ng = top + 1

    def vec(*pairs):
        v = [0] * ng
        for i, c in pairs:
            if i <= top:
                v[i] += c
        return v

    for i in range(1, top + 1):
        if dims[i] == 0:
            rows.append(vec((i - 1, 1), (i, -p)))
        else:
            r = -dims[i] // 2
            if r >= 1:
                rows.append(vec((i, 1), (i - 1, -p ** (r - 1))))
    idx, ss, q = chi_index_data(dims)
    for k in range(1, len(idx)):
        ik, il, sk = idx[k], idx[k - 1], ss[k]
        if ik > top:
            continue
        rows.append(vec((il, p ** (il + q(k, k - 1) - sk + 1)), (ik, -p ** (ik - sk + 1))))
    if a_power >= 1:
        for s in range(top + 1):
            rows.append(vec((s, p ** s)))
    return rows


def _chi_label(beta, s, d, extra=""):
    lab = "chi[%s,%d]" % (format_grading(beta), s)
    if extra:
        lab += " " + extra
    if d:
        lab += " a_L1" + ("" if d == 1 else "^%d" % d)
    return lab


def negative_cone_piece(alpha):
    """pi_alpha(HZ) over C_{p^m} for alpha <= 0 from the chi-presentation.

    Generators chi_{beta,s} a_{lambda_0}^d with d = -|alpha|/2 and
    beta = alpha + d lambda_0; relations rel11, rel9 and p^s a chi_s = 0.
    For p = 2 with a sigma: 2 chi = 0, only s <= m-1, chi_{m-1} = 0 when
    |beta^G| = -1; for odd |alpha| the group is Z/2 on a_sigma chi_{beta,m}
    a^d (beta = alpha + sigma + d lambda_0) when |beta^G| = 0, else 0.
    """
    n = alpha.n
    p, m = _pm(n)
    if not is_divisor_graded(alpha):
        raise ClosedFormError("%s is not divisor graded; use the oracle instead"
                              % format_grading(alpha))
    dims = _level_dims(alpha)
    if any(v > 0 for v in dims):
        raise ClosedFormError("%s is not in the negative cone; use the oracle instead"
                              % format_grading(alpha))
    ctx = _ctx(alpha)
    has_sigma = alpha.sigma % 2 == 1
    if not has_sigma:
        if dims[0] % 2:
            return GradedPiece(alpha, FgAbGroup(0), [], method="closedform")
        d = -dims[0] // 2
        beta = alpha + ROElement(ctx, 0, 0, {1: d})
        bd = _level_dims(beta)
        rows = _chi_relations(p, m, bd, m, d)
        labels = [_chi_label(beta, s, d) for s in range(m + 1)]
        return GradedPiece(alpha, FgAbGroup(m + 1, rows), labels, method="closedform")
    # p = 2 and alpha contains sigma
    if dims[0] % 2:
        d = -(dims[0] + 1) // 2
        beta = alpha + ROElement(ctx, 0, 1, {1: d})
        bd = _level_dims(beta)
        if bd[m] == 0:
            return GradedPiece(alpha, FgAbGroup.cyclic(2),
                               [_chi_label(beta, m, d, "a_s")], method="closedform")
        return GradedPiece(alpha, FgAbGroup(0), [], method="closedform")
    d = -dims[0] // 2
    beta = alpha + ROElement(ctx, 0, 0, {1: d})
    bd = _level_dims(beta)
    top = m - 1
    rows = _chi_relations(p, m, bd, top, d)
    for s in range(top + 1):
        v = [0] * (top + 1)
        v[s] = 2
        rows.append(v)
    if bd[m] == -1:
        v = [0] * (top + 1)
        v[top] = 1
        rows.append(v)
    labels = [_chi_label(beta, s, d) for s in range(top + 1)]
    return GradedPiece(alpha, FgAbGroup(top + 1, rows), labels, method="closedform")


# ---------------------------------------------------------------------------
# C_p in divisor gradings

def cp_pm_div_piece(c0, c1, p):
    """pi_{c0 + c1 lambda}(HA) over C_p (all signs of c0, c1).

    Summands of A(C_p)[u, a]/(alpha a, (alpha - p) u) + A/(alpha - p){alpha u^-l}
    + A/alpha{p a^-k} + A/(alpha, p){Sigma^-1 u^-j a^-k} (l, j, k > 0), with
    u in degree 2 - lambda, a in degree -lambda, alpha = [C_p/e] and Sigma^-1
    shifting c0 by -1.  At most one summand lives in each bidegree.
    """
    if p < 2 or len(factorization(p)) != 1 or factorization(p)[0][1] != 1:
        raise ClosedFormError("%d is not a prime" % p)
    alpha = ROElement(CyclicGroupCtx(p), c0, 0, {1: c1} if c1 else {})

    def piece(value, label):
        return GradedPiece(alpha, value, [label], method="closedform")

    if c0 >= 0 and c0 % 2 == 0 and c1 <= -c0 // 2:
        s, t = c0 // 2, -c1 - c0 // 2
        label = " ".join(x for x in (("u_L1" + ("^%d" % s if s > 1 else "")) if s else "",
                                      ("a_L1" + ("^%d" % t if t > 1 else "")) if t else "") if x) or "1"
        if s and t:
            return piece(FgAbGroup.cyclic(p), label)
        if s or t:
            return piece(FgAbGroup.free(1), label)
        return piece(FgAbGroup.free(2), "A(C%d)" % p)
    if c0 < 0 and c0 % 2 == 0 and c1 == -c0 // 2:
        return piece(FgAbGroup.free(1), "alpha u_L1^-%d" % c1)
    if c0 == 0 and c1 > 0:
        return piece(FgAbGroup.free(1), "p a_L1^-%d" % c1)
    if c0 <= -3 and c0 % 2 and c1 > (-1 - c0) // 2:
        j = (-1 - c0) // 2
        return piece(FgAbGroup.cyclic(p), "Sigma^-1 u_L1^-%d a_L1^-%d" % (j, c1 - j))
    return GradedPiece(alpha, FgAbGroup(0), [], method="closedform")


# ---------------------------------------------------------------------------
# geometric fixed points of HA

def _maximal_subgroups(n):
    """[(p_l, |H_l|)] with H_l = C_{n/p_l}, primes ascending."""
    return [(p, n // p) for p, _ in factorization(n)]


def _geo_summand(n, p, h, others):
    """A(C_h)/<tr from C_{(h, h')} for h' in others, p A(C_h)> with labels."""
    ds = divisors(h)
    rows = []
    for h2 in others:
        g = gcd(h, h2)
        for k in divisors(g):
            v = [0] * len(ds)
            v[ds.index(k)] = 1
            rows.append(v)
    for i in range(len(ds)):
        v = [0] * len(ds)
        v[i] = p
        rows.append(v)
    return FgAbGroup(len(ds), rows), [_orbit_label(h, k) for k in ds]


class GeoFixRing:
    """Degreewise groups of pi_*(Phi^{C_n} HA).

    Z{[G/G]} in degree 0; in degree 2t > 0 the sum over maximal subgroups
    H_l = C_{n/p_l} of A(H_l)/<I_{H_l}, p_l> on (u_{H_l}/a_{H_l})^t, where
    I_{H_l} is spanned by the transfers from H_l n H_i, i != l; zero in odd
    and negative degrees.
    """

    def __init__(self, n):
        if n < 2:
            raise ClosedFormError("geometric fixed points need n >= 2")
        self.n = n
        self.maximal = _maximal_subgroups(n)
        self._summands = []
        for p, h in self.maximal:
            others = [h2 for _, h2 in self.maximal if h2 != h]
            g, labels = _geo_summand(n, p, h, others)
            self._summands.append((p, h, g, labels))

    def summands(self):
        """[(p_l, |H_l|, group, basis labels)] of the periodic part."""
        return list(self._summands)

    def group(self, degree):
        if degree == 0:
            return FgAbGroup.free(1)
        if degree < 0 or degree % 2:
            return FgAbGroup(0)
        return direct_sum([g for _, _, g, _ in self._summands])

    def generators(self, degree):
        if degree == 0:
            return ["[C%d/C%d]" % (self.n, self.n)]
        if degree < 0 or degree % 2:
            return []
        t = degree // 2
        out = []
        for p, h, _, labels in self._summands:
            cls = "(u_H%d/a_H%d)%s" % (h, h, "" if t == 1 else "^%d" % t)
            out.extend("%s*%s" % (lab, cls) if lab != "1" else cls for lab in labels)
        return out

    def canonical(self, degree):
        return self.group(degree).canonical()

    def table(self, max_degree):
        return [(d, self.canonical(d)) for d in range(max_degree + 1)]

    def to_json(self, max_degree=10):
        return {"n": self.n,
                "degrees": [{"degree": d, "group": format_group(c),
                             "generators": self.generators(d)}
                            for d, c in self.table(max_degree)]}


def geometric_fixed_points(n):
    return GeoFixRing(n)


class GeoSpectralE2:
    """E^1 and E^2 pages of the isotropy filtration spectral sequence.

    E^1_{r,t} = sum over r-subsets s of the maximal subgroups of
    pi_t(S(infinity lambda^{|cap H_s|})_+ ; A): A(cap H_s) at t = 0 and
    A(cap H_s)/[G : cap H_s] at odd t (r >= 1); E^1_{0,*} = A(G) at t = 0.
    d_1 is the alternating sum of transfers to the faces s minus one element.
    """

    def __init__(self, n, max_t=10):
        self.n = n
        self.max_t = max_t
        self.maximal = _maximal_subgroups(n)
        k = len(self.maximal)
        self.subsets = {r: list(itertools.combinations(range(k), r)) for r in range(k + 1)}
        self.e1 = {}
        self.e2 = {}
        for t in range(max_t + 1):
            cx = self.row_complex(t)
            for r in range(k + 1):
                self.e1[(r, t)] = cx.term(r)
                self.e2[(r, t)] = homology(cx, r)

    def _meet(self, s):
        h = self.n
        for i in s:
            h = gcd(h, self.maximal[i][1])
        return h

    def _term(self, s, t):
        h = self._meet(s)
        size = len(divisors(h))
        if t == 0:
            return FgAbGroup(size)
        if t % 2 and s:
            idx = self.n // h
            return FgAbGroup(size, [[idx if i == j else 0 for j in range(size)]
                                    for i in range(size)])
        return FgAbGroup(0)

    def row_complex(self, t):
        k = len(self.maximal)
        terms, diffs, offs = {}, {}, {}
        for r in range(k + 1):
            groups = [self._term(s, t) for s in self.subsets[r]]
            o, acc = [], 0
            for g in groups:
                o.append(acc)
                acc += g.ngens
            offs[r] = o
            terms[r] = direct_sum(groups) if groups else FgAbGroup(0)
        for r in range(1, k + 1):
            rows, cols = terms[r - 1].ngens, terms[r].ngens
            if not rows or not cols:
                continue
            m = [[0] * cols for _ in range(rows)]
            for a, s in enumerate(self.subsets[r]):
                if not self._term(s, t).ngens:
                    continue
                h = self._meet(s)
                for j in range(len(s)):
                    face = s[:j] + s[j + 1:]
                    b = self.subsets[r - 1].index(face)
                    if not self._term(face, t).ngens:
                        continue
                    tm = transfer_matrix(h, self._meet(face))
                    sign = -1 if j % 2 else 1
                    for x, row in enumerate(tm):
                        for y, v in enumerate(row):
                            m[offs[r - 1][b] + x][offs[r][a] + y] += sign * v
            diffs[r] = m
        return IntComplex(terms, diffs)

    def assembled(self, degree):
        """sum over r + t = degree of E^2_{r,t} (the page collapses)."""
        parts = [self.e2[(r, degree - r)] for r in range(len(self.maximal) + 1)
                 if 0 <= degree - r <= self.max_t]
        return direct_sum(parts) if parts else FgAbGroup(0)

    def checks(self):
        """Structural statements about E^2, as a dict name -> bool."""
        k = len(self.maximal)
        expected_odd = FgAbGroup.from_invariants(
            0, [p for p, e in factorization(self.n) for _ in range(e)])
        return {
            "E2_00_is_Z": self.e2[(0, 0)].canonical() == (1, ()),
            "row0_vanishes_above_0": all(self.e2[(r, 0)].is_zero() for r in range(1, k + 1)),
            "vanishes_for_r_gt_1": all(self.e2[(r, t)].is_zero()
                                       for r in range(2, k + 1) for t in range(1, self.max_t + 1)),
            "E2_1_odd": all(self.e2[(1, t)].canonical() == expected_odd.canonical()
                            for t in range(1, self.max_t + 1, 2)),
            "E2_even_rows_vanish": all(self.e2[(r, t)].is_zero() for r in range(k + 1)
                                       for t in range(2, self.max_t + 1, 2)),
        }

    def report(self):
        lines = []
        for (r, t) in sorted(self.e2, key=lambda x: (x[1], x[0])):
            lines.append("E2[%d,%d] = %s" % (r, t, format_group(self.e2[(r, t)].canonical())))
        return lines


def geo_spectral_sequence_e2(n, max_t=10):
    return GeoSpectralE2(n, max_t)


# ---------------------------------------------------------------------------
# C_pq gradings with many zeros

def bezout_pair(p, q):
    """(gamma_p, gamma_q) with p gamma_p + q gamma_q = 1 and 0 < gamma_p < q."""
    gp = pow(p, -1, q)
    return gp, (1 - p * gp) // q


def _cpq_primes(n):
    f = factorization(n)
    if len(f) != 2 or any(e != 1 for _, e in f):
        raise ClosedFormError("the many-zeros classifier needs n = pq, got %d" % n)
    return f[0][0], f[1][0]


def _zero_pattern(alpha):
    fd = fixed_dims(alpha)
    return fd, frozenset(d for d, v in fd.items() if v == 0)


def is_many_zeros(alpha):
    """Some |alpha^{C_d}| = 0 together with |alpha^{C_{dp}}| = 0 for a prime p."""
    fd, zeros = _zero_pattern(alpha)
    n = alpha.n
    for d in zeros:
        for p, _ in factorization(n // d) if d != n else ():
            if d * p in zeros:
                return True
    return False


def classify_many_zeros(alpha):
    """Case data for alpha over C_pq with many zeros.

    Returns a dict with the case number (1..6), a subcase label, the primes
    in the roles p and q, the integers k, l, the divisor-graded beta with the
    fixed dimensions of alpha, tau_p, tau_q, tau_e of tau(alpha - beta) and
    the Bezout pair (gamma_p, gamma_q).
    """
    n = alpha.n
    p0, q0 = _cpq_primes(n)
    if not is_many_zeros(alpha):
        raise ClosedFormError(
            "%s does not have many zeros; use the divisor-grading / RO_0 paths"
            % format_grading(alpha))
    fd, zeros = _zero_pattern(alpha)
    ctx = _ctx(alpha)

    def lam(**kw):
        return ROElement(ctx, kw.get("t", 0), 0, {d: c for d, c in kw.get("l", {}).items() if c})

    out = {"k": 0, "l": 0, "sub": ""}
    if len(zeros) == 4:
        case, p, q = 1, p0, q0
        beta = ROElement(ctx)
    elif zeros == {p0, q0, n}:
        case, p, q = 2, p0, q0
        out["k"] = fd[1] // 2
        beta = lam(l={1: out["k"]})
        out["sub"] = "K" if out["k"] > 0 else "C"
    elif len(zeros) == 3 and 1 in zeros and n in zeros:
        case = 3
        p = p0 if fd[p0] else q0
        q = q0 if p == p0 else p0
        k = -fd[p] // 2
        out["k"] = k
        beta = lam(l={1: k, p: -k})
        out["sub"] = "L2" if k > 0 else "L1"
    elif zeros == {1, p0, q0}:
        case, p, q = 4, p0, q0
        k = fd[n] // 2
        out["k"] = k
        beta = lam(t=2 * k, l={1: k, p: -k, q: -k})
        out["sub"] = "N1" if k > 0 else "N2"
    elif len(zeros) == 2 and n in zeros:
        case = 5
        q = min(zeros - {n})
        p = p0 if q == q0 else q0
        k = fd[p] // 2
        l = (fd[1] - fd[p]) // 2
        out["k"], out["l"] = k, l
        beta = lam(l={p: k, 1: l})
        if (k > 0 and l > -k) or (k < 0 and l < -k):
            out["sub"] = "A"
        elif k < 0:
            out["sub"] = "Agamma"
        else:
            out["sub"] = "ZmodpA"
    elif len(zeros) == 2 and 1 in zeros:
        case = 6
        q = min(zeros - {1})
        p = p0 if q == q0 else q0
        l = fd[n] // 2
        k = (fd[p] - fd[n]) // 2
        out["k"], out["l"] = k, l
        beta = lam(t=2 * l, l={p: k, 1: -k, q: -l})
        if k + l < 0:
            out["sub"] = "U-" if l < 0 else "U+"
        else:
            out["sub"] = "V-" if l < 0 else "V+"
    else:
        raise ClosedFormError("unexpected zero pattern for %s" % format_grading(alpha))
    tau = tau_of(alpha - beta)
    gp, gq = bezout_pair(p, q)
    out.update({"case": case, "p": p, "q": q, "beta": beta, "tau": tau,
                "tau_p": tau[p], "tau_q": tau[q], "tau_e": tau[1],
                "gamma_p": gp, "gamma_q": gq})
    return out


def _cpq_functor(n, p, q, groups, maps, name):
    """Mackey functor over C_pq from the four levels T, P, Q, E (P = C_p)."""
    from .mackey import MackeyFunctor

    def grp(g):
        return FgAbGroup.free(g) if isinstance(g, int) else g

    T, P, Q, E = (grp(groups[x]) for x in "TPQE")
    levels = {n: T, p: P, q: Q, 1: E}
    res = {(n, q): maps.get("resTP"), (n, p): maps.get("resTQ"),
           (p, p): maps.get("resPE"), (q, q): maps.get("resQE")}
    tr = {(n, q): maps.get("trPT"), (n, p): maps.get("trQT"),
          (p, p): maps.get("trEP"), (q, q): maps.get("trEQ")}
    res = {k: v for k, v in res.items() if v is not None}
    tr = {k: v for k, v in tr.items() if v is not None}
    return MackeyFunctor(CyclicGroupCtx(n), levels, res, tr, name=name)


def _cp_tau(p, x):
    from .mackey import tau_burnside
    from .ro import TauFunction
    return tau_burnside(TauFunction(p, {1: x}))


def cpq_many_zeros(alpha):
    """pi_alpha(HA) over C_pq for alpha with many zeros, from the case diagrams.

    Returns a MackeyFunctor; its ``case_data`` attribute holds the output of
    ``classify_many_zeros``.
    """
    from .mackey import (boxtimes, bracket_functor, constant_functor,
                         direct_sum_functors, tau_burnside)
    c = classify_many_zeros(alpha)
    n, p, q = alpha.n, c["p"], c["q"]
    k, l = c["k"], c["l"]
    tp, tq, te = c["tau_p"], c["tau_q"], c["tau_e"]
    gp, gq = c["gamma_p"], c["gamma_q"]
    a = abs(k)
    name = "case%d%s" % (c["case"], c["sub"])
    case = c["case"]
    if case == 1:
        out = tau_burnside(c["tau"], name=name)
    elif case == 2:
        if k < 0:
            rp, rq = tp, tq
        else:
            rp, rq = tp * gp, tq * gq
        out = _cpq_functor(n, p, q, {"T": 3, "P": 1, "Q": 1, "E": 0}, {
            "resTP": [[rp, q, 0]], "resTQ": [[rq, 0, p]],
            "trPT": [[0], [1], [0]], "trQT": [[0], [0], [1]]}, name)
    elif case == 3:
        if k < 0:
            g = gp ** a
            maps = {"resTP": [[g * q * tp * tq * te, g * p * tp * te, q]],
                    "trPT": [[0], [0], [1]],
                    "resTQ": [[q * tq, p, 0], [0, 0, 1]],
                    "trQT": [[0, 0], [1, 0], [0, p]],
                    "resPE": [[1]], "trEP": [[p]],
                    "resQE": [[g * tp * te, q]], "trEQ": [[0], [1]]}
        else:
            maps = {"resTP": [[p ** (a - 1) * tp * tq * te, p ** a * tp * te, q]],
                    "trPT": [[0], [0], [1]],
                    "resTQ": [[tq, p, 0], [0, 0, p]],
                    "trQT": [[0, 0], [1, 0], [0, 1]],
                    "resPE": [[p]], "trEP": [[1]],
                    "resQE": [[p ** a * tp * te, q]], "trEQ": [[0], [1]]}
        out = _cpq_functor(n, p, q, {"T": 3, "P": 1, "Q": 2, "E": 1}, maps, name)
    elif case == 4:
        if k > 0:
            maps = {"resTP": [[1, 0, 0], [0, p ** (a - 1) * tp * te, q]],
                    "trPT": [[q, 0], [0, 0], [0, 1]],
                    "resTQ": [[0, 1, 0], [q ** (a - 1) * tq * te, 0, p]],
                    "trQT": [[0, 0], [p, 0], [0, 1]],
                    "resPE": [[q ** a * tq * te, p]], "resQE": [[p ** a * tp * te, q]],
                    "trEP": [[0], [1]], "trEQ": [[0], [1]]}
        else:
            maps = {"resTP": [[q, 0, 0], [0, gp ** a * tp * te, q]],
                    "trPT": [[1, 0], [0, 0], [0, 1]],
                    "resTQ": [[0, p, 0], [gq ** a * tq * te, 0, p]],
                    "trQT": [[0, 0], [1, 0], [0, 1]],
                    "resPE": [[gq ** a * tq * te, p]], "resQE": [[gp ** a * tp * te, q]],
                    "trEP": [[0], [1]], "trEQ": [[0], [1]]}
        out = _cpq_functor(n, p, q, {"T": 3, "P": 2, "Q": 2, "E": 1}, maps, name)
    elif case == 5:
        zq = bracket_functor(q)
        if c["sub"] == "A":
            out = boxtimes(_cp_tau(p, tq), zq)
        elif c["sub"] == "Agamma":
            out = boxtimes(_cp_tau(p, gq * tq), zq)
        else:
            out = direct_sum_functors(
                boxtimes(bracket_functor(p, p), constant_functor(q, dual=True)),
                boxtimes(_cp_tau(p, q * tq), zq))
        out.name = name
    else:
        g = gp ** k if k >= 0 else p ** a
        sub = c["sub"]
        if sub == "U-":
            out = boxtimes(constant_functor(p, dual=True), _cp_tau(q, g * tp * te))
        elif sub == "V+":
            out = boxtimes(constant_functor(p), _cp_tau(q, g * tp * te))
        elif sub == "U+":
            maps = {"resTP": [[p ** (a - 1) * tp * te, q, 0]], "trPT": [[0], [1], [0]],
                    "resTQ": [[1, 0, 0], [0, p, 0]], "trQT": [[p, 0], [0, 1], [0, 0]],
                    "resPE": [[p]], "trEP": [[1]],
                    "resQE": [[p ** a * tp * te, q]], "trEQ": [[0], [1]]}
            out = _cpq_functor(n, p, q, {"T": FgAbGroup(3, [[0, 0, q]]), "P": 1, "Q": 2, "E": 1},
                               maps, name)
        else:
            g = gp ** a
            maps = {"resTP": [[p * g * tp * te, q]], "trPT": [[0], [1]],
                    "resTQ": [[p, 0], [0, 1]], "trQT": [[1, 0], [0, p]],
                    "resPE": [[1]], "trEP": [[p]],
                    "resQE": [[g * tp * te, q]], "trEQ": [[0], [1]]}
            out = _cpq_functor(n, p, q, {"T": 2, "P": 1, "Q": 2, "E": 1}, maps, name)
        out.name = name
    out.case_data = c
    return out



# ---------------------------------------------------------------------------
# dispatch

def _in_positive_cone(alpha):
    try:
        cone_data(alpha)
        return True
    except ClosedFormError:
        return False


def closedform_piece(alpha, coeff="Z"):
    """pi_alpha(H coeff) at G/G from whichever closed form covers alpha.

    Z: positive cone (lcm/gcd formula) or, over C_{p^m}, the negative cone.
    A: C_p in any divisor grading; positive cone over prime-power or
    square-free n, or by the general presentation otherwise.
    """
    n = alpha.n
    if coeff == "Z":
        if _in_positive_cone(alpha):
            return hz_positive_piece(alpha)
        if is_prime_power(n) and all(v <= 0 for v in fixed_dims(alpha).values()):
            return negative_cone_piece(alpha)
        raise ClosedFormError(
            "no closed form for %s with Z coefficients over C_%d; use the oracle"
            % (format_grading(alpha), n))
    if coeff == "A":
        prime = len(factorization(n)) == 1 and factorization(n)[0][1] == 1
        if prime and is_divisor_graded(alpha) and not alpha.sigma:
            return cp_pm_div_piece(alpha.trivial, alpha.lam.get(1, 0), n)
        if _in_positive_cone(alpha):
            if is_prime_power(n):
                return ha_positive_piece_primepower(alpha)
            if is_square_free(n):
                return ha_positive_piece_squarefree(alpha)
            g, labels = presented_positive_piece(alpha, "A")
            return GradedPiece(alpha, g, labels, method="closedform")
        raise ClosedFormError(
            "no closed form for %s with A coefficients over C_%d; use the oracle"
            % (format_grading(alpha), n))
    raise ClosedFormError("closed forms exist for A and Z coefficients only, not %r" % coeff)


def closedform_mackey(alpha):
    """pi_alpha(HA) as a Mackey functor: A[tau(alpha)] on RO_0, and the
    case diagrams for C_pq gradings with many zeros."""
    from .mackey import tau_burnside
    if in_ro_zero(alpha):
        return tau_burnside(tau_of(alpha))
    if len(factorization(alpha.n)) == 2 and is_square_free(alpha.n) and is_many_zeros(alpha):
        return cpq_many_zeros(alpha)
    raise ClosedFormError(
        "no closed-form Mackey functor for %s over C_%d; use the oracle"
        % (format_grading(alpha), alpha.n))
