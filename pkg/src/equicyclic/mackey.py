"""Mackey functors for cyclic groups C_n.

A Mackey functor stores, for every divisor d of n, a presented abelian group
(the value at G/C_d), restriction and transfer maps along the prime steps
C_{d/p} < C_d, and the action of the fixed generator g of G on every level.
All other structure maps are composites of these.
"""

import itertools
import json
from math import gcd

from .burnside import (CyclicGroupCtx, divisors, factorization, prime_divisors, restriction_matrix,
                       transfer_matrix)
from .exactlin import (FgAbGroup, GroupMap, determinant, LinAlgError, direct_sum, format_group,
                       identity, kernel_basis, kron, rank, mat_add, mat_mul, mat_vec,
                       smith_normal_form, solve, tensor, transpose, zeros)
from .ro import TauFunction


class MackeyError(ValueError):
    pass


def _mul(a, b, inner):
    if not a or not a[0] and inner == 0:
        return [[0] * (len(b[0]) if b else 0) for _ in a]
    return mat_mul(a, b, inner)


def _shape(m, rows, cols):
    """m as a rows x cols matrix; products through a zero level come back empty."""
    if not rows:
        return []
    if not m or len(m) != rows or len(m[0]) != cols:
        return zeros(rows, cols)
    return m


def _mat(rows, cols, m):
    if not rows:
        return []
    if m is None:
        return zeros(rows, cols)
    return [list(r) for r in m]


class MackeyFunctor:
    """Levels d -> FgAbGroup with res/tr along primes and the Weyl action.

    ``res[(d, p)]`` : level d -> level d/p, ``tr[(d, p)]`` : level d/p ->
    level d, ``weyl[d]`` : level d -> level d (action of g).  Matrices act on
    column vectors of generator coordinates.
    """

    def __init__(self, ctx, levels, res, tr, weyl=None, name=None, check=True):
        if isinstance(ctx, int):
            ctx = CyclicGroupCtx(ctx)
        self.ctx = ctx
        self.name = name
        self.levels = {}
        for d in ctx.divisors:
            if d not in levels:
                raise MackeyError("missing level %d" % d)
            self.levels[d] = levels[d]
        self.res, self.tr, self.weyl = {}, {}, {}
        for d in ctx.divisors:
            src = self.levels[d]
            self.weyl[d] = _mat(src.ngens, src.ngens,
                                (weyl or {}).get(d) or (identity(src.ngens) if src.ngens else None))
            for p in prime_divisors(d):
                low = self.levels[d // p]
                self.res[(d, p)] = _mat(low.ngens, src.ngens, res.get((d, p)))
                self.tr[(d, p)] = _mat(src.ngens, low.ngens, tr.get((d, p)))
        if check:
            for key, m in self.res.items():
                GroupMap(self.levels[key[0]], self.levels[key[0] // key[1]], m)
            for key, m in self.tr.items():
                GroupMap(self.levels[key[0] // key[1]], self.levels[key[0]], m)
            for d, m in self.weyl.items():
                GroupMap(self.levels[d], self.levels[d], m)
        self._cache = {}

    @property
    def n(self):
        return self.ctx.n

    def level(self, d):
        return self.levels[d]

    def ngens(self, d):
        return self.levels[d].ngens

    # -- derived maps --------------------------------------------------------
    def res_map(self, d, e):
        """Matrix of res^{C_d}_{C_e}."""
        if d % e:
            raise MackeyError("C_%d is not a subgroup of C_%d" % (e, d))
        key = ("res", d, e)
        if key not in self._cache:
            if d == e:
                m = identity(self.ngens(d))
            else:
                p = min(q for q in prime_divisors(d // e))
                m = _shape(_mul(self.res_map(d // p, e), self.res[(d, p)], self.ngens(d // p)),
                           self.ngens(e), self.ngens(d))
            self._cache[key] = m
        return self._cache[key]

    def tr_map(self, e, d):
        """Matrix of tr^{C_d}_{C_e}."""
        if d % e:
            raise MackeyError("C_%d is not a subgroup of C_%d" % (e, d))
        key = ("tr", e, d)
        if key not in self._cache:
            if d == e:
                m = identity(self.ngens(d))
            else:
                p = min(q for q in prime_divisors(d // e))
                m = _shape(_mul(self.tr[(d, p)], self.tr_map(e, d // p), self.ngens(d // p)),
                           self.ngens(d), self.ngens(e))
            self._cache[key] = m
        return self._cache[key]

    def weyl_pow(self, d, k):
        """Matrix of g^k on level d."""
        k %= self.n // d
        key = ("weyl", d, k)
        if key not in self._cache:
            if k == 0:
                m = identity(self.ngens(d))
            else:
                m = _mul(self.weyl[d], self.weyl_pow(d, k - 1), self.ngens(d))
            self._cache[key] = m
        return self._cache[key]

    def conj(self, h, d, i=1):
        """Action on level d of the i-th power of the generator of C_h."""
        return self.weyl_pow(d, i * (self.n // h))

    def map_(self, kind, a, b):
        return GroupMap(self.levels[a], self.levels[b],
                        self.res_map(a, b) if kind == "res" else self.tr_map(a, b), check=False)

    def __repr__(self):
        return "MackeyFunctor(C_%d%s: %s)" % (
            self.n, (" " + self.name) if self.name else "",
            ", ".join("%d:%s" % (d, format_group(self.levels[d].canonical()))
                      for d in self.ctx.divisors))

    # -- serialization -------------------------------------------------------
    def to_json(self):
        return {
            "n": self.n,
            "name": self.name,
            "levels": {str(d): {"ngens": g.ngens, "relations": g.relations}
                       for d, g in self.levels.items()},
            "res": {"%d,%d" % k: m for k, m in self.res.items()},
            "tr": {"%d,%d" % k: m for k, m in self.tr.items()},
            "weyl": {str(d): m for d, m in self.weyl.items()},
        }

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        levels = {int(d): FgAbGroup(v["ngens"], v["relations"]) for d, v in data["levels"].items()}

        def keys(dct):
            return {tuple(int(x) for x in k.split(",")): m for k, m in dct.items()}
        return cls(int(data["n"]), levels, keys(data["res"]), keys(data["tr"]),
                   {int(d): m for d, m in data["weyl"].items()}, name=data.get("name"))


# ---------------------------------------------------------------------------
# maps of Mackey functors

def _equal_mod(target, a, b, ncols):
    for j in range(ncols):
        col = [x[j] - y[j] for x, y in zip(a, b)]
        if not target.is_zero_element(col):
            return False
    return True


class MackeyMap:
    """Levelwise homomorphisms commuting with res, tr and the Weyl action."""

    def __init__(self, source, target, mats, check=True):
        if source.n != target.n:
            raise MackeyError("functors over different groups")
        self.source = source
        self.target = target
        self.maps = {}
        for d in source.ctx.divisors:
            self.maps[d] = GroupMap(source.level(d), target.level(d),
                                    _mat(target.ngens(d), source.ngens(d), mats.get(d)),
                                    check=check)
        if check:
            bad = self.failing_square()
            if bad:
                raise MackeyError("not natural: %s" % (bad,))

    def failing_square(self):
        s, t = self.source, self.target
        for d in s.ctx.divisors:
            f = self.maps[d].matrix
            ns = s.ngens(d)
            if ns and not _equal_mod(t.level(d), _mul(t.weyl[d], f, t.ngens(d)),
                                     _mul(f, s.weyl[d], ns), ns):
                return ("weyl", d)
            for p in prime_divisors(d):
                g = self.maps[d // p].matrix
                if ns and t.ngens(d // p) and not _equal_mod(
                        t.level(d // p), _mul(t.res[(d, p)], f, t.ngens(d)),
                        _mul(g, s.res[(d, p)], ns), ns):
                    return ("res", d, p)
                nl = s.ngens(d // p)
                if nl and t.ngens(d) and not _equal_mod(
                        t.level(d), _mul(t.tr[(d, p)], g, t.ngens(d // p)),
                        _mul(f, s.tr[(d, p)], nl), nl):
                    return ("tr", d, p)
        return None

    def is_iso(self):
        return all(m.is_iso() for m in self.maps.values())

    def kernel_levels(self):
        return {d: m.kernel() for d, m in self.maps.items()}

    def cokernel_levels(self):
        return {d: m.cokernel() for d, m in self.maps.items()}


# ---------------------------------------------------------------------------
# axioms

class AxiomReport:
    def __init__(self, failures):
        self.failures = failures

    @property
    def ok(self):
        return not self.failures

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return "AxiomReport(pass)"
        return "AxiomReport(fail: %s)" % "; ".join(f["detail"] for f in self.failures[:3])


def _first_bad_column(target, a, b, ncols):
    for j in range(ncols):
        col = [x[j] - y[j] for x, y in zip(a, b)]
        if not target.is_zero_element(col):
            return j
    return None


def check_axioms(m):
    """Check the Mackey functor axioms on generators.

    Axiom 1: transitivity of res/tr and equivariance of the structure maps
    (with weyl_d of order dividing n/d); axiom 2: transfers are invariant
    under the Weyl action of the bigger group; axiom 3: restrictions land in
    invariants; axiom 4: the double coset formula for all K, L <= H.
    """
    n = m.n
    fails = []

    def record(axiom, detail, levels, gen):
        fails.append({"axiom": axiom, "levels": levels, "generator": gen, "detail": detail})

    divs = m.ctx.divisors
    # axiom 1
    for d in divs:
        g = m.level(d)
        k = g.ngens
        if not k:
            continue
        # weyl_pow reduces exponents modulo n/d, so compute the power directly
        w = identity(k)
        for _ in range(n // d):
            w = _mul(m.weyl[d], w, k)
        j = _first_bad_column(g, w, identity(k), k)
        if j is not None:
            record(1, "weyl_%d does not have order dividing %d" % (d, n // d), (d,), j)
        ps = prime_divisors(d)
        for p in ps:
            low = m.level(d // p)
            if low.ngens:
                j = _first_bad_column(low, _mul(m.res[(d, p)], m.weyl[d], k),
                                      _mul(m.weyl[d // p], m.res[(d, p)], low.ngens), k)
                if j is not None:
                    record(1, "res^%d_%d is not equivariant" % (d, d // p), (d, d // p), j)
                j = _first_bad_column(g, _mul(m.tr[(d, p)], m.weyl[d // p], low.ngens),
                                      _mul(m.weyl[d], m.tr[(d, p)], k), low.ngens)
                if j is not None:
                    record(1, "tr^%d_%d is not equivariant" % (d, d // p), (d, d // p), j)
            for q in ps:
                if q <= p or (d // p) % q:
                    continue
                e = d // (p * q)
                le = m.level(e)
                if le.ngens:
                    a = _shape(_mul(m.res[(d // p, q)], m.res[(d, p)], low.ngens), le.ngens, k)
                    b = _shape(_mul(m.res[(d // q, p)], m.res[(d, q)], m.ngens(d // q)),
                               le.ngens, k)
                    j = _first_bad_column(le, a, b, k)
                    if j is not None:
                        record(1, "restrictions %d->%d do not commute" % (d, e), (d, e), j)
                    a = _shape(_mul(m.tr[(d, p)], m.tr[(d // p, q)], low.ngens), k, le.ngens)
                    b = _shape(_mul(m.tr[(d, q)], m.tr[(d // q, p)], m.ngens(d // q)),
                               k, le.ngens)
                    j = _first_bad_column(g, a, b, le.ngens)
                    if j is not None:
                        record(1, "transfers %d->%d do not commute" % (e, d), (e, d), j)
    # axioms 2 and 3
    for d in divs:
        for e in divisors(d):
            if e == d:
                continue
            le, ld = m.level(e), m.level(d)
            if not le.ngens or not ld.ngens:
                continue
            gam = m.conj(d, e)
            t = m.tr_map(e, d)
            j = _first_bad_column(ld, _mul(t, gam, le.ngens), t, le.ngens)
            if j is not None:
                record(2, "tr^%d_%d is not invariant under C_%d" % (d, e, d), (d, e), j)
            r = m.res_map(d, e)
            j = _first_bad_column(le, _mul(gam, r, le.ngens), r, ld.ngens)
            if j is not None:
                record(3, "res^%d_%d does not land in invariants" % (d, e), (d, e), j)
    # axiom 4
    for h in divs:
        for k in divisors(h):
            for l in divisors(h):
                lk, ll = m.level(k), m.level(l)
                if not lk.ngens or not ll.ngens:
                    continue
                lhs = _shape(_mul(m.res_map(h, k), m.tr_map(l, h), m.ngens(h)),
                             lk.ngens, ll.ngens)
                c = gcd(k, l)
                base = _shape(_mul(m.tr_map(c, k), m.res_map(l, c), m.ngens(c)),
                              lk.ngens, ll.ngens)
                rhs = zeros(lk.ngens, ll.ngens)
                for i in range(h * c // (k * l)):
                    rhs = mat_add(rhs, _mul(m.conj(h, k, i), base, lk.ngens))
                j = _first_bad_column(lk, lhs, rhs, ll.ngens)
                if j is not None:
                    record(4, "double coset formula fails for res^%d_%d tr^%d_%d" % (h, k, h, l),
                           (h, k, l), j)
    return AxiomReport(fails)


# ---------------------------------------------------------------------------
# standard functors

def burnside_functor(ctx):
    if isinstance(ctx, int):
        ctx = CyclicGroupCtx(ctx)
    return tau_burnside(TauFunction(ctx.n, {}), name="A")


def constant_functor(ctx, dual=False):
    """Z (res = 1, tr = index) or Z* (tr = 1, res = index)."""
    if isinstance(ctx, int):
        ctx = CyclicGroupCtx(ctx)
    levels = {d: FgAbGroup.free(1) for d in ctx.divisors}
    res, tr = {}, {}
    for d in ctx.divisors:
        for p in prime_divisors(d):
            res[(d, p)] = [[p if dual else 1]]
            tr[(d, p)] = [[1 if dual else p]]
    return MackeyFunctor(ctx, levels, res, tr, name="Z*" if dual else "Z")


def bracket_functor(ctx, order=0):
    """<Z> (order 0) or <Z/order>: the group at G/G, zero elsewhere."""
    if isinstance(ctx, int):
        ctx = CyclicGroupCtx(ctx)
    n = ctx.n
    levels = {d: FgAbGroup(0) for d in ctx.divisors}
    levels[n] = FgAbGroup.cyclic(order)
    name = "<Z>" if order == 0 else "<Z/%d>" % order
    return MackeyFunctor(ctx, levels, {}, {}, name=name)


def _sub_ctx_index(n, d):
    """Split a divisor k of n into its parts dividing d and n/d (coprime)."""
    return lambda k: (gcd(k, d), gcd(k, n // d))


def boxtimes(m, nf):
    """M x N over C_{d e} for M over C_d, N over C_e with gcd(d, e) = 1."""
    d, e = m.n, nf.n
    if gcd(d, e) != 1:
        raise MackeyError("boxtimes needs coprime orders, got %d and %d" % (d, e))
    n = d * e
    ctx = CyclicGroupCtx(n)
    split = _sub_ctx_index(n, d)
    levels, res, tr, weyl = {}, {}, {}, {}
    for k in ctx.divisors:
        a, b = split(k)
        levels[k] = tensor(m.level(a), nf.level(b))
        # g in C_n maps to the generators of both factors
        weyl[k] = kron(m.weyl[a], nf.weyl[b]) if levels[k].ngens else []
        for p in prime_divisors(k):
            if a % p == 0:
                res[(k, p)] = kron(m.res[(a, p)], identity(nf.ngens(b)))
                tr[(k, p)] = kron(m.tr[(a, p)], identity(nf.ngens(b)))
            else:
                res[(k, p)] = kron(identity(m.ngens(a)), nf.res[(b, p)])
                tr[(k, p)] = kron(identity(m.ngens(a)), nf.tr[(b, p)])
    name = None
    if m.name and nf.name:
        name = "%s[%d]x%s[%d]" % (m.name, d, nf.name, e)
    return MackeyFunctor(ctx, levels, res, tr, weyl, name=name)


def ai_boxtimes_zic(ctx, primes):
    """A_I x Z_{I^c} for square-free n, I given as a collection of primes."""
    if isinstance(ctx, int):
        ctx = CyclicGroupCtx(ctx)
    n = ctx.n
    if any(e > 1 for _, e in ctx.factorization):
        raise MackeyError("A_I x Z_I^c needs square-free n")
    d = 1
    for p in primes:
        if n % p:
            raise MackeyError("%d does not divide %d" % (p, n))
        d *= p
    out = boxtimes(burnside_functor(d), constant_functor(n // d))
    out.name = "A_%d x Z_%d" % (d, n // d)
    return out


def brackz_boxtimes(ctx, p, rest):
    """<Z>_p x M for M a functor over C_{n/p}."""
    return boxtimes(bracket_functor(p), rest)


def standard(name, ctx, arg=None):
    """Named standard functors: A, Z, Zdual, brackZ, brackZmodp, AI_boxtimes_ZIc."""
    if isinstance(ctx, int):
        ctx = CyclicGroupCtx(ctx)
    if name == "A":
        return burnside_functor(ctx)
    if name == "Z":
        return constant_functor(ctx)
    if name in ("Zdual", "Z*"):
        return constant_functor(ctx, dual=True)
    if name in ("brackZ", "<Z>"):
        return bracket_functor(ctx)
    if name == "brackZmodp":
        if arg is None or arg < 2:
            raise MackeyError("brackZmodp needs a modulus")
        return bracket_functor(ctx, arg)
    if name == "AI_boxtimes_ZIc":
        return ai_boxtimes_zic(ctx, arg or ())
    raise MackeyError("unknown standard functor %r" % name)


# ---------------------------------------------------------------------------
# A[tau]

def tau_coefficient(tau, j, g):
    """prod of tau_s over divisors s of n with g | s and j not dividing s."""
    out = 1
    for s in divisors(tau.n):
        if s % g == 0 and s % j:
            out *= tau[s]
    return out


def tau_restriction_matrix(tau, d, e):
    """res^{C_d}_{C_e} on orbit bases of A(C_d), A(C_e) in A[tau]."""
    src, tgt = divisors(d), divisors(e)
    m = [[0] * len(src) for _ in tgt]
    for col, j in enumerate(src):
        g = gcd(e, j)
        m[tgt.index(g)][col] += (d * g // (e * j)) * tau_coefficient(tau, j, g)
    return m


def tau_burnside(tau, name=None):
    """A[tau]: levels A(C_d) (orbit basis [C_d/C_e], e ascending) with
    res^{C_d}_{C_k} mu_d = (prod_{k|s, d not| s} tau_s) mu_k."""
    ctx = CyclicGroupCtx(tau.n)
    levels = {d: FgAbGroup.free(len(divisors(d))) for d in ctx.divisors}
    res, tr = {}, {}
    for d in ctx.divisors:
        for p in prime_divisors(d):
            res[(d, p)] = tau_restriction_matrix(tau, d, d // p)
            tr[(d, p)] = [list(r) for r in transfer_matrix(d // p, d)]
    out = MackeyFunctor(ctx, levels, res, tr, name=name or "A[%s]" % (
        ",".join("%d:%d" % kv for kv in sorted(tau.values.items()))))
    out.tau = tau
    return out


def display_order(d):
    """Basis permutation for displays: mu_d first, then the transfers from
    larger subgroups (more prime factors) before smaller ones, ties by order.
    For C_pq this is [mu, tr_p, tr_q, tr_e]."""
    divs = list(divisors(d))
    rest = sorted(range(len(divs) - 1),
                  key=lambda i: (-sum(e for _, e in factorization(divs[i])), divs[i]))
    return [len(divs) - 1] + rest


def display_matrix(m, src, tgt):
    """Rewrite a matrix from orbit-ascending bases to display bases."""
    ps, pt = display_order(src), display_order(tgt)
    return [[m[i][j] for j in ps] for i in pt]


def _is_a_shaped(m):
    return all(m.level(d).is_free() and m.level(d).rank == len(divisors(d))
               for d in m.ctx.divisors)


def _free_coords(group):
    """(to, from) matrices between the generators of a free group and Z^r."""
    g, to_c, from_c = group.canonical_group()
    return to_c, from_c


def _hom_from_tau(tau, m, coords):
    """Lattice of compatible families (m_d) for maps A[tau] -> M.

    Unknowns are the canonical coordinates of m_d for all d at once.
    Returns a list of basis vectors split per level.
    """
    n = m.n
    divs = list(m.ctx.divisors)
    offs, tot = {}, 0
    for d in divs:
        offs[d] = tot
        tot += m.level(d).rank
    rows = []
    for d in divs:
        to_d, from_d = coords[d]
        r = m.level(d).rank
        w = mat_mul(to_d, _mul(m.weyl[d], from_d, m.ngens(d)), m.ngens(d)) if r else []
        for i in range(r):
            row = [0] * tot
            for j in range(r):
                row[offs[d] + j] = w[i][j] - (1 if i == j else 0)
            rows.append(row)
        for p in prime_divisors(d):
            e = d // p
            to_e, from_e = coords[e]
            re_ = mat_mul(to_e, _mul(m.res[(d, p)], from_d, m.ngens(d)), m.ngens(e))
            c = tau_coefficient(tau, d, e)
            for i in range(m.level(e).rank):
                row = [0] * tot
                for j in range(r):
                    row[offs[d] + j] = re_[i][j]
                row[offs[e] + i] -= c
                rows.append(row)
    kb = kernel_basis(rows, tot) if rows else identity(tot)
    cols = transpose(kb, len(kb[0]) if kb and kb[0] else 0) if kb else []
    return cols, offs


def _quotient_by_transfers(m, d, coords):
    """Linear functional on canonical coords of level d vanishing on transfers.

    Returns (phi, ok) where ok says level d modulo transfers is Z.
    """
    to_d, from_d = coords[d]
    r = m.level(d).rank
    span = []
    for p in prime_divisors(d):
        e = d // p
        to_e, from_e = coords[e]
        t = mat_mul(to_d, _mul(m.tr[(d, p)], from_e, m.ngens(e)), m.ngens(d))
        span.extend(transpose(t, m.level(e).rank))
    if not span:
        return [[1 if i == j else 0 for j in range(r)] for i in range(r)], r == 1
    diag, L, R = smith_normal_form(span, r)
    # span = L^-1 D R^-1 as rows; the quotient Z^r / rowspan is read off
    # from R: coordinates x -> (x R) restricted to zero columns of D.
    rk = sum(1 for x in diag if x)
    if any(x != 1 for x in diag[:rk]) or r - rk != 1:
        return None, False
    phi = [[R[i][rk] for i in range(r)]]
    return phi, True


def tau_candidates(n, units_only=True):
    """Representatives of prod_d (Z/(n/d))^x / +-1 (or all residues)."""
    per = []
    ds = [d for d in divisors(n) if d != n]
    for d in ds:
        mod = n // d
        if mod <= 2:
            per.append([1])
            continue
        opts = []
        for v in range(1, mod // 2 + 1):
            if units_only and gcd(v, mod) != 1:
                continue
            opts.append(v)
        if not units_only:
            opts = [0] + opts
        per.append(opts)
    for combo in itertools.product(*per):
        yield TauFunction(n, dict(zip(ds, combo)))


def iso_to_tau(m, tau):
    """An isomorphism A[tau] -> M, as the family of images m_d of mu_d, or None."""
    coords = {d: _free_coords(m.level(d)) for d in m.ctx.divisors}
    phis = {}
    for d in m.ctx.divisors:
        phi, ok = _quotient_by_transfers(m, d, coords)
        if not ok:
            return None
        phis[d] = phi[0]
    basis, offs = _hom_from_tau(tau, m, coords)
    if not basis:
        return None
    divs = list(m.ctx.divisors)
    # project the lattice to the leading coefficients
    proj = []
    for v in basis:
        row = []
        for d in divs:
            r = m.level(d).rank
            row.append(sum(phis[d][i] * v[offs[d] + i] for i in range(r)))
        proj.append(row)
    pt = transpose(proj, len(divs))
    n = m.n
    for signs in itertools.product((1, -1), repeat=len(divs) - 1):
        target = list(signs) + [1]
        sol = solve(pt, target, len(basis))
        if sol is None:
            continue
        vec = [sum(c * v[i] for c, v in zip(sol, basis)) for i in range(len(basis[0]))]
        out = {}
        for d in divs:
            r = m.level(d).rank
            to_d, from_d = coords[d]
            out[d] = mat_vec(from_d, vec[offs[d]:offs[d] + r])
        return out
    return None


class NotTauShaped(MackeyError):
    pass


def iso_as_tau(m, units_only=False):
    """Find tau with M = A[tau]; raises NotTauShaped if there is none."""
    if not _is_a_shaped(m):
        raise NotTauShaped("levels are not those of A")
    passes = [True] if units_only else [True, False]
    for units in passes:
        for tau in tau_candidates(m.n, units):
            if iso_to_tau(m, tau) is not None:
                return tau
    raise NotTauShaped("no A[tau] is isomorphic to this functor")


# ---------------------------------------------------------------------------
# box product

class _Level:
    """A presented level: raw generators with relations, plus canonical data."""

    def __init__(self, raw):
        self.raw = raw
        self.group, self.to_c, self.from_c = raw.canonical_group()

    def canon(self, m, ncols):
        """Compose a raw-coordinate matrix with the projection to canonical."""
        if not self.group.ngens:
            return []
        return _mul(self.to_c, m, self.raw.ngens) if m else zeros(self.group.ngens, ncols)


def _block(rows, cols, r0, c0, blk, out):
    for i, row in enumerate(blk):
        for j, x in enumerate(row):
            if x:
                out[r0 + i][c0 + j] += x


def _finish_box(ctx, lv, raw_res, raw_tr, raw_weyl, name):
    """Turn raw-coordinate structure maps into canonical ones."""
    levels = {d: lv[d].group for d in ctx.divisors}
    res, tr, weyl = {}, {}, {}
    for d in ctx.divisors:
        L = lv[d]
        if L.group.ngens:
            weyl[d] = L.canon(_mul(raw_weyl[d], L.from_c, L.raw.ngens), L.group.ngens)
            GroupMap(L.raw, L.raw, raw_weyl[d])
        for p in prime_divisors(d):
            low = lv[d // p]
            GroupMap(L.raw, low.raw, raw_res[(d, p)] if low.raw.ngens else [])
            GroupMap(low.raw, L.raw, raw_tr[(d, p)] if L.raw.ngens else [])
            if low.group.ngens and L.group.ngens:
                res[(d, p)] = low.canon(_mul(raw_res[(d, p)], L.from_c, L.raw.ngens),
                                        L.group.ngens)
                tr[(d, p)] = L.canon(_mul(raw_tr[(d, p)], low.from_c, low.raw.ngens),
                                     low.group.ngens)
    return MackeyFunctor(ctx, levels, res, tr, weyl, name=name)


def box(m, nf):
    """Box product, built level by level along the divisor lattice.

    Level d is the tensor product M(d) x N(d) together with, for each prime
    p | d, a copy of level d/p made coinvariant under C_d/C_{d/p}; the copies
    are glued along transfers from d/pq and the Frobenius relations are
    imposed.  Lower levels enter in their canonical presentations.
    """
    if m.n != nf.n:
        raise MackeyError("box product of functors over different groups")
    ctx = m.ctx
    n = ctx.n
    lv = {}
    raw_res, raw_tr, raw_weyl = {}, {}, {}
    for d in ctx.divisors:
        T = tensor(m.level(d), nf.level(d))
        ps = prime_divisors(d)
        blocks = [T] + [lv[d // p].group for p in ps]
        offs = [0]
        for b in blocks:
            offs.append(offs[-1] + b.ngens)
        tot = offs[-1]
        rels = []

        def embed(i, vec):
            row = [0] * tot
            for j, x in enumerate(vec):
                row[offs[i] + j] = x
            return row

        for i, b in enumerate(blocks):
            rels.extend(embed(i, r) for r in b.relations)
        # coinvariants of C_d/C_{d/p} on the p-th copy
        for i, p in enumerate(ps, 1):
            low = lv[d // p]
            gm = low.canon(_mul(_raw_conj(raw_weyl, d // p, n // d, low), low.from_c,
                                low.raw.ngens), low.group.ngens) if low.group.ngens else []
            for j in range(low.group.ngens):
                col = [gm[r][j] - (1 if r == j else 0) for r in range(low.group.ngens)]
                rels.append(embed(i, col))
        # glue transfers out of d/pq
        for a, p in enumerate(ps, 1):
            for b, q in enumerate(ps, 1):
                if q <= p or (d // p) % q:
                    continue
                e = d // (p * q)
                src = lv[e]
                tp = lv[d // p].canon(_mul(raw_tr[(d // p, q)], src.from_c, src.raw.ngens),
                                      src.group.ngens)
                tq = lv[d // q].canon(_mul(raw_tr[(d // q, p)], src.from_c, src.raw.ngens),
                                      src.group.ngens)
                for j in range(src.group.ngens):
                    row = [0] * tot
                    for r in range(lv[d // p].group.ngens):
                        row[offs[a] + r] += tp[r][j]
                    for r in range(lv[d // q].group.ngens):
                        row[offs[b] + r] -= tq[r][j]
                    rels.append(row)
        # Frobenius relations
        mm, nn = m.ngens(d), nf.ngens(d)
        for i, p in enumerate(ps, 1):
            e = d // p
            low = lv[e]
            me, ne = m.ngens(e), nf.ngens(e)
            # raw T(e) coordinates -> canonical coordinates of level e
            t_to_low = low.to_c if low.group.ngens else []
            for x in range(mm):
                rx = [row[x] for row in m.res[(d, p)]]
                for y in range(ne):
                    ty = [row[y] for row in nf.tr[(d, p)]]
                    lhs = [0] * (mm * nn)
                    for a_, xa in enumerate([1 if k == x else 0 for k in range(mm)]):
                        if xa:
                            for b_, yb in enumerate(ty):
                                if yb:
                                    lhs[a_ * nn + b_] += xa * yb
                    rhs_t = [0] * (me * ne)
                    for a_, xa in enumerate(rx):
                        if xa:
                            rhs_t[a_ * ne + y] += xa
                    row = embed(0, lhs)
                    if low.group.ngens:
                        rc = mat_vec(t_to_low, rhs_t + [0] * (low.raw.ngens - me * ne))
                        for r, v in enumerate(rc):
                            row[offs[i] + r] -= v
                    rels.append(row)
            for w in range(me):
                tw = [row[w] for row in m.tr[(d, p)]]
                for z in range(nn):
                    rz = [row[z] for row in nf.res[(d, p)]]
                    lhs = [0] * (mm * nn)
                    for a_, xa in enumerate(tw):
                        if xa:
                            lhs[a_ * nn + z] += xa
                    rhs_t = [0] * (me * ne)
                    for b_, yb in enumerate(rz):
                        if yb:
                            rhs_t[w * ne + b_] += yb
                    row = embed(0, lhs)
                    if low.group.ngens:
                        rc = mat_vec(t_to_low, rhs_t + [0] * (low.raw.ngens - me * ne))
                        for r, v in enumerate(rc):
                            row[offs[i] + r] -= v
                    rels.append(row)
        raw = FgAbGroup(tot, rels)
        L = _Level(raw)
        L.offs = offs
        L.ps = ps
        lv[d] = L
        # Weyl action on raw coordinates
        W = zeros(tot, tot)
        if mm * nn:
            _block(tot, tot, 0, 0, kron(m.weyl[d], nf.weyl[d]), W)
        for i, p in enumerate(ps, 1):
            low = lv[d // p]
            if low.group.ngens:
                gm = low.canon(_mul(raw_weyl[d // p], low.from_c, low.raw.ngens),
                               low.group.ngens)
                _block(tot, tot, offs[i], offs[i], gm, W)
        raw_weyl[d] = W
        # transfers into d and restrictions out of d (raw coordinates of d,
        # raw coordinates of d/p)
        for i, p in enumerate(ps, 1):
            e = d // p
            low = lv[e]
            trm = zeros(tot, low.raw.ngens)
            if low.group.ngens:
                _block(tot, low.raw.ngens, offs[i], 0, low.to_c, trm)
            raw_tr[(d, p)] = trm
            resm = zeros(low.raw.ngens, tot)
            if mm * nn and low.raw.ngens:
                _block(low.raw.ngens, tot, 0, 0, kron(m.res[(d, p)], nf.res[(d, p)]), resm)
            for b, q in enumerate(ps, 1):
                src = lv[d // q]
                if not src.group.ngens or not low.raw.ngens:
                    continue
                lift = src.from_c  # canonical coords of d/q -> raw coords of d/q
                if q == p:
                    acc = zeros(src.raw.ngens, src.raw.ngens)
                    for t in range(p):
                        acc = mat_add(acc, _raw_conj(raw_weyl, e, t * (n // d), src))
                    blk = _mul(acc, lift, src.raw.ngens)
                else:
                    # C_{d/q} meets C_{d/p} in C_{d/pq}: a single double coset
                    blk = _mul(raw_tr[(e, q)],
                               _mul(raw_res[(d // q, p)], lift, src.raw.ngens),
                               lv[e // q].raw.ngens)
                _block(low.raw.ngens, tot, 0, offs[b], blk, resm)
            raw_res[(d, p)] = resm
    name = None
    if m.name and nf.name:
        name = "%s[]%s" % (m.name, nf.name)
    return _finish_box(ctx, lv, raw_res, raw_tr, raw_weyl, name)


def _raw_conj(raw_weyl, d, k, L):
    """k-th power of the raw Weyl matrix of level d."""
    size = L.raw.ngens
    out = identity(size)
    for _ in range(k):
        out = _mul(raw_weyl[d], out, size)
    return out


def box_reference(m, nf):
    """Box product from the direct formula.

    (M box N)(C_h) = (sum over k | h of M(k) x N(k)) modulo Frobenius
    relations along prime steps and the conjugation action of C_h.
    """
    if m.n != nf.n:
        raise MackeyError("box product of functors over different groups")
    ctx = m.ctx
    n = ctx.n
    lv, raw_res, raw_tr, raw_weyl = {}, {}, {}, {}
    info = {}
    for h in ctx.divisors:
        ks = list(divisors(h))
        blocks = [tensor(m.level(k), nf.level(k)) for k in ks]
        offs = {}
        o = 0
        for k, b in zip(ks, blocks):
            offs[k] = o
            o += b.ngens
        tot = o
        info[h] = (ks, offs, tot)
        rels = []

        def emb(k, vec, out=None):
            row = out if out is not None else [0] * tot
            for j, x in enumerate(vec):
                if x:
                    row[offs[k] + j] += x
            return row

        for k, b in zip(ks, blocks):
            rels.extend(emb(k, r) for r in b.relations)
        for k in ks:
            mk, nk = m.ngens(k), nf.ngens(k)
            if not mk * nk:
                continue
            g = kron(m.conj(h, k), nf.conj(h, k))
            for j in range(mk * nk):
                col = [g[r][j] - (1 if r == j else 0) for r in range(mk * nk)]
                rels.append(emb(k, col))
            for p in prime_divisors(k):
                e = k // p
                me, ne = m.ngens(e), nf.ngens(e)
                if not me * ne:
                    # relations still force (a x tr b) = 0 etc.
                    pass
                for x in range(mk):
                    for y in range(ne):
                        lhs = [0] * (mk * nk)
                        for b_ in range(nk):
                            lhs[x * nk + b_] += nf.tr[(k, p)][b_][y]
                        rhs = [0] * (me * ne)
                        for a_ in range(me):
                            rhs[a_ * ne + y] += m.res[(k, p)][a_][x]
                        row = emb(k, lhs)
                        emb(e, [-v for v in rhs], row)
                        rels.append(row)
                for w in range(me):
                    for z in range(nk):
                        lhs = [0] * (mk * nk)
                        for a_ in range(mk):
                            lhs[a_ * nk + z] += m.tr[(k, p)][a_][w]
                        rhs = [0] * (me * ne)
                        for b_ in range(ne):
                            rhs[w * ne + b_] += nf.res[(k, p)][b_][z]
                        row = emb(k, lhs)
                        emb(e, [-v for v in rhs], row)
                        rels.append(row)
        lv[h] = _Level(FgAbGroup(tot, rels))
        W = zeros(tot, tot)
        for k in ks:
            if m.ngens(k) * nf.ngens(k):
                _block(tot, tot, offs[k], offs[k], kron(m.weyl[k], nf.weyl[k]), W)
        raw_weyl[h] = W
        for p in prime_divisors(h):
            e = h // p
            eks, eoffs, etot = info[e]
            trm = zeros(tot, etot)
            for k in eks:
                sz = m.ngens(k) * nf.ngens(k)
                _block(tot, etot, offs[k], eoffs[k], identity(sz) if sz else [], trm)
            raw_tr[(h, p)] = trm
            resm = zeros(etot, tot)
            for k in ks:
                sz = m.ngens(k) * nf.ngens(k)
                if not sz:
                    continue
                if e % k == 0:
                    acc = zeros(sz, sz)
                    for i in range(p):
                        acc = mat_add(acc, kron(m.conj(h, k, i), nf.conj(h, k, i)))
                    _block(etot, tot, eoffs[k], offs[k], acc, resm)
                else:
                    c = gcd(k, e)
                    blk = kron(m.res_map(k, c), nf.res_map(k, c))
                    if m.ngens(c) * nf.ngens(c):
                        _block(etot, tot, eoffs[c], offs[k], blk, resm)
            raw_res[(h, p)] = resm
    name = None
    if m.name and nf.name:
        name = "%s[]%s" % (m.name, nf.name)
    return _finish_box(ctx, lv, raw_res, raw_tr, raw_weyl, name)


def direct_sum_functors(*ms, name=None):
    """Levelwise direct sum of Mackey functors over the same group."""
    if not ms:
        raise MackeyError("direct sum of no functors")
    ctx = ms[0].ctx
    if any(m.n != ctx.n for m in ms):
        raise MackeyError("direct sum over different groups")
    levels, res, tr, weyl = {}, {}, {}, {}
    for d in ctx.divisors:
        levels[d] = direct_sum([m.level(d) for m in ms])
        sizes = [m.ngens(d) for m in ms]
        weyl[d] = _block_maps([m.weyl[d] for m in ms], sizes, sizes)
        for p in prime_divisors(d):
            e = d // p
            res[(d, p)] = _block_maps([m.res[(d, p)] for m in ms],
                                      [m.ngens(e) for m in ms], [m.ngens(d) for m in ms])
            tr[(d, p)] = _block_maps([m.tr[(d, p)] for m in ms],
                                     [m.ngens(d) for m in ms], [m.ngens(e) for m in ms])
    return MackeyFunctor(ctx, levels, res, tr, weyl,
                         name=name or " + ".join(str(m.name) for m in ms))


def _block_maps(mats, rows, cols):
    out = zeros(sum(rows), sum(cols))
    r0 = c0 = 0
    for mat, r, c in zip(mats, rows, cols):
        for i in range(r):
            for j in range(c):
                out[r0 + i][c0 + j] = mat[i][j]
        r0 += r
        c0 += c
    return out


# ---------------------------------------------------------------------------
# restriction to subgroups

def restrict_to_subgroup(m, e):
    """The underlying C_e-Mackey functor."""
    if m.n % e:
        raise MackeyError("%d does not divide %d" % (e, m.n))
    ctx = CyclicGroupCtx(e)
    levels = {d: m.level(d) for d in ctx.divisors}
    res = {k: v for k, v in m.res.items() if e % k[0] == 0}
    tr = {k: v for k, v in m.tr.items() if e % k[0] == 0}
    weyl = {d: m.weyl_pow(d, m.n // e) for d in ctx.divisors}
    return MackeyFunctor(ctx, levels, res, tr, weyl, name=m.name and "%s|C%d" % (m.name, e))


# ---------------------------------------------------------------------------
# normal forms, invariants and isomorphism

def canonicalize(m):
    """The same functor with every level in canonical (SNF) presentation."""
    ctx = m.ctx
    data = {d: m.level(d).canonical_group() for d in ctx.divisors}
    levels = {d: data[d][0] for d in ctx.divisors}

    def conv(mat, s, t):
        gs, _, from_s = data[s]
        gt, to_t, _ = data[t]
        if not gs.ngens or not gt.ngens:
            return []
        return _mul(to_t, _mul(mat, from_s, m.ngens(s)), m.ngens(t))
    res = {(d, p): conv(mat, d, d // p) for (d, p), mat in m.res.items()}
    tr = {(d, p): conv(mat, d // p, d) for (d, p), mat in m.tr.items()}
    weyl = {d: conv(mat, d, d) for d, mat in m.weyl.items()}
    out = MackeyFunctor(ctx, levels, res, tr, weyl, name=m.name)
    return out


def _gm(m, a, b, mat):
    return GroupMap(m.level(a), m.level(b), mat if mat else [], check=False)


def invariants(m):
    """Isomorphism invariants: level groups and kernels/cokernels of the
    structure maps along prime steps and of 1 - weyl."""
    m = canonicalize(m)
    out = []
    for d in m.ctx.divisors:
        out.append(("level", d, m.level(d).canonical()))
        k = m.ngens(d)
        if k:
            one_minus = [[(1 if i == j else 0) - m.weyl[d][i][j] for j in range(k)]
                         for i in range(k)]
            f = _gm(m, d, d, one_minus)
            out.append(("1-g", d, f.kernel().canonical(), f.cokernel().canonical()))
        for p in prime_divisors(d):
            e = d // p
            for kind, a, b, mat in (("res", d, e, m.res[(d, p)]), ("tr", e, d, m.tr[(d, p)])):
                f = _gm(m, a, b, mat)
                out.append((kind, d, p, f.kernel().canonical(), f.cokernel().canonical()))
            # composite with the norm
            if m.ngens(e) and k:
                rt = _mul(m.res[(d, p)], m.tr[(d, p)], k)
                f = _gm(m, e, e, rt)
                out.append(("res.tr", d, p, f.kernel().canonical(), f.cokernel().canonical()))
    return out


def hom_lattice(m, nf):
    """Basis of Hom(M, N) as families of matrices between canonical levels."""
    mc, nc = canonicalize(m), canonicalize(nf)
    divs = list(m.ctx.divisors)
    offs, tot = {}, 0
    shape = {}
    for d in divs:
        r, c = nc.ngens(d), mc.ngens(d)
        shape[d] = (r, c)
        offs[d] = tot
        tot += r * c

    def var(d, i, j):
        return offs[d] + i * shape[d][1] + j

    def orders(g):
        # canonical presentations are diagonal
        o = [0] * g.ngens
        for row in g.relations:
            for i, x in enumerate(row):
                if x:
                    o[i] = abs(x)
        return o

    eqs = []  # (coefficients over unknowns, modulus)

    def add_eq(coeffs, mod):
        if mod == 1:
            return
        eqs.append((coeffs, mod))

    for d in divs:
        r, c = shape[d]
        om = orders(mc.level(d))
        on = orders(nc.level(d))
        # well defined: om_j * f[:, j] = 0 in N
        for j in range(c):
            if om[j]:
                for i in range(r):
                    co = {var(d, i, j): om[j]}
                    add_eq(co, on[i])

        # weyl: gN f - f gM = 0 in N(d)
        gN, gM = nc.weyl[d], mc.weyl[d]
        for i in range(r):
            for j in range(c):
                co = {}
                for k in range(r):
                    if gN[i][k]:
                        co[var(d, k, j)] = co.get(var(d, k, j), 0) + gN[i][k]
                for k in range(c):
                    if gM[k][j]:
                        co[var(d, i, k)] = co.get(var(d, i, k), 0) - gM[k][j]
                add_eq(co, on[i])
        for p in prime_divisors(d):
            e = d // p
            re_, ce = shape[e]
            oe = orders(nc.level(e))
            # res: resN f_d - f_e resM = 0 in N(e)
            rN, rM = nc.res[(d, p)], mc.res[(d, p)]
            for i in range(re_):
                for j in range(c):
                    co = {}
                    for k in range(r):
                        if rN and rN[i][k]:
                            co[var(d, k, j)] = co.get(var(d, k, j), 0) + rN[i][k]
                    for k in range(ce):
                        if rM and rM[k][j]:
                            co[var(e, i, k)] = co.get(var(e, i, k), 0) - rM[k][j]
                    add_eq(co, oe[i])
            # tr: trN f_e - f_d trM = 0 in N(d)
            tN, tM = nc.tr[(d, p)], mc.tr[(d, p)]
            for i in range(r):
                for j in range(ce):
                    co = {}
                    for k in range(re_):
                        if tN and tN[i][k]:
                            co[var(e, k, j)] = co.get(var(e, k, j), 0) + tN[i][k]
                    for k in range(c):
                        if tM and tM[k][j]:
                            co[var(d, i, k)] = co.get(var(d, i, k), 0) - tM[k][j]
                    add_eq(co, on[i])
    mods = [mod for _, mod in eqs if mod]
    nslack = len(mods)
    width = tot + nslack
    rows = []
    s = 0
    for co, mod in eqs:
        row = [0] * width
        for k, v in co.items():
            row[k] += v
        if mod:
            row[tot + s] = -mod
            s += 1
        rows.append(row)
    if not rows:
        basis = identity(tot)
    else:
        basis = kernel_basis(rows, width)
    cols = transpose(basis, len(basis[0]) if basis and basis[0] else 0) if basis else []
    vecs = [v[:tot] for v in cols]
    vecs = [v for v in vecs if any(v)]

    def unpack(v):
        out = {}
        for d in divs:
            r, c = shape[d]
            out[d] = [[v[var(d, i, j)] for j in range(c)] for i in range(r)]
        return out
    return mc, nc, vecs, unpack


def _lll(vecs):
    if len(vecs) < 2:
        return vecs
    try:
        from sympy import ZZ
        from sympy.polys.matrices import DomainMatrix
    except ImportError:  # pragma: no cover
        return vecs
    indep = []
    for v in vecs:
        if rank(indep + [v], len(v)) == len(indep) + 1:
            indep.append(v)
    if len(indep) < 2:
        return indep
    dm = DomainMatrix([[ZZ(x) for x in v] for v in indep], (len(indep), len(indep[0])), ZZ)
    return [[int(x) for x in row] for row in dm.lll().to_list()]


def _shell(k, r):
    """Integer vectors of length k with max norm exactly r."""
    if r == 0:
        yield (0,) * k
        return
    for c in itertools.product(range(-r, r + 1), repeat=k):
        if max(abs(x) for x in c) == r:
            yield c


def _affine_families(per, mc, nc, k, max_families=256):
    """Affine families c0 + K z of Hom coordinates that can contain an iso.

    On levels free of the same rank on both sides an isomorphism has
    determinant +-1.  These determinants are polynomials in z; every
    irreducible factor must then be +-1 too, and each linear factor gives a
    linear condition (one branch per sign).  Families are refined until no
    linear factor is left.
    """
    import sympy
    levels = [d for d in mc.ctx.divisors
              if mc.ngens(d) and not mc.level(d).relations and not nc.level(d).relations]
    done, todo = [], [([0] * k, [[1 if i == j else 0 for i in range(k)] for j in range(k)])]
    while todo:
        if len(todo) + len(done) > max_families:
            done.extend(todo)
            break
        c0, cols = todo.pop()
        z = sympy.symbols("z0:%d" % max(len(cols), 1))
        coords = [c0[t] + sum(z[i] * cols[i][t] for i in range(len(cols))) for t in range(k)]
        linear, dead = None, False
        for d in levels:
            mat = sympy.Matrix([[sum(ci * f[d][i][j] for ci, f in zip(coords, per))
                                 for j in range(mc.ngens(d))] for i in range(nc.ngens(d))])
            det = sympy.expand(mat.det())
            if det == 0:
                dead = True
                break
            if not cols:
                if abs(int(det)) != 1:
                    dead = True
                    break
                continue
            content, factors = sympy.factor_list(det, *z)
            if abs(content) != 1:
                dead = True
                break
            for fac, _ in factors:
                poly = sympy.Poly(fac, *z)
                if poly.total_degree() == 1:
                    linear = poly
                    break
            if linear is not None:
                break
        if dead:
            continue
        if linear is None:
            done.append((c0, cols))
            continue
        coeff = [int(linear.coeff_monomial(zi)) for zi in z[:len(cols)]]
        const = int(linear.coeff_monomial(1))
        ker = kernel_basis([coeff], len(cols))
        kcols = [list(col) for col in zip(*ker)] if ker and ker[0] else []
        for sgn in (1, -1):
            z0 = solve([coeff], [sgn - const], len(cols))
            if z0 is None:
                continue
            new_c0 = [c0[t] + sum(z0[i] * cols[i][t] for i in range(len(cols))) for t in range(k)]
            new_cols = [[sum(kc[i] * cols[i][t] for i in range(len(cols))) for t in range(k)]
                        for kc in kcols]
            todo.append((new_c0, _lll(new_cols) if len(new_cols) > 1 else new_cols))
    return done


def find_isomorphism(m, nf, max_tries=400000, bound=None):
    """Search Hom(M, N) for a levelwise isomorphism.

    Candidates are integer points of Hom(M, N) (in an LLL-reduced basis) that
    are +-1 on every level equal to Z on both sides, enumerated in shells of
    growing max norm.  On the other free levels a candidate must have
    determinant +-1 before the full check runs.  Returns a MackeyMap between
    the canonicalized functors, or None if the invariants differ or nothing
    was found within the budget.
    """
    if m.n != nf.n:
        return None
    if invariants(m) != invariants(nf):
        return None
    mc, nc, vecs, unpack = hom_lattice(m, nf)
    vecs = _lll(vecs)
    if not vecs:
        if all(mc.level(d).is_zero() and nc.level(d).is_zero() for d in mc.ctx.divisors):
            return MackeyMap(mc, nc, {}, check=False)
        return None
    k = len(vecs)
    per = [unpack(v) for v in vecs]
    free_levels = [d for d in mc.ctx.divisors
                   if mc.ngens(d) > 1 and not mc.level(d).relations
                   and not nc.level(d).relations]
    branches = _affine_families(per, mc, nc, k)

    def combo(c, d):
        return [[sum(ci * f[d][i][j] for ci, f in zip(c, per) if ci)
                 for j in range(mc.ngens(d))] for i in range(nc.ngens(d))]

    tries = 0
    r = 0
    while True:
        if bound is not None and r > bound:
            return None
        live = False
        for c0, kcols in branches:
            if r and not kcols:
                continue
            live = True
            for z in _shell(len(kcols), r):
                tries += 1
                if tries > max_tries:
                    return None
                c = list(c0)
                for zi, col in zip(z, kcols):
                    if zi:
                        for t in range(k):
                            c[t] += zi * col[t]
                if any(abs(determinant(combo(c, d))) != 1 for d in free_levels):
                    continue
                f = MackeyMap(mc, nc, {d: combo(c, d) for d in mc.ctx.divisors}, check=False)
                if f.is_iso():
                    return f
        if not live:
            return None
        r += 1


def isomorphic(m, nf, **kw):
    """Isomorphism test: A[tau] shaped functors via iso_as_tau, others by search."""
    if m.n != nf.n:
        return False
    if _is_a_shaped(m) and _is_a_shaped(nf):
        try:
            t1 = iso_as_tau(m)
        except NotTauShaped:
            t1 = None
        try:
            t2 = iso_as_tau(nf)
        except NotTauShaped:
            t2 = None
        if t1 is not None and t2 is not None:
            return t1.equivalent(t2) and t2.equivalent(t1)
        if (t1 is None) != (t2 is None):
            return False
    return find_isomorphism(m, nf, **kw) is not None


# ---------------------------------------------------------------------------
# diagrams

def _fmt_matrix(mat):
    if not mat:
        return "0"
    return "[" + "; ".join(" ".join(str(x) for x in row) for row in mat) + "]"


def lewis_ascii(m):
    """Text rendering: one line per level, then one line per structure map."""
    lines = ["Mackey functor over C_%d%s" % (m.n, (" (%s)" % m.name) if m.name else "")]
    for d in sorted(m.ctx.divisors, reverse=True):
        lines.append("  C_%d: %s  weyl=%s" % (d, format_group(m.level(d).canonical()),
                                             _fmt_matrix(m.weyl[d])))
    for d in sorted(m.ctx.divisors, reverse=True):
        for p in prime_divisors(d):
            lines.append("  res %d->%d: %s" % (d, d // p, _fmt_matrix(m.res[(d, p)])))
            lines.append("  tr  %d->%d: %s" % (d // p, d, _fmt_matrix(m.tr[(d, p)])))
    return "\n".join(lines)


def lewis_dot(m):
    lines = ["digraph mackey {", "  rankdir=TB;"]
    for d in sorted(m.ctx.divisors, reverse=True):
        lines.append('  c%d [label="C_%d: %s"];' % (d, d, format_group(m.level(d).canonical())))
    for d in sorted(m.ctx.divisors, reverse=True):
        for p in prime_divisors(d):
            lines.append('  c%d -> c%d [label="res %s"];' % (d, d // p, _fmt_matrix(m.res[(d, p)])))
            lines.append('  c%d -> c%d [label="tr %s", style=dashed];' % (
                d // p, d, _fmt_matrix(m.tr[(d, p)])))
    lines.append("}")
    return "\n".join(lines)
