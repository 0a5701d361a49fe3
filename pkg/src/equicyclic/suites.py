"""Verification suites: closed forms against the cellular oracle.

Each suite returns a SuiteResult; the CLI ``verify`` command and the
acceptance tests both run these.
"""

import itertools
import random
import time
from math import gcd

from .burnside import (BurnsideElement, CyclicGroupCtx, divisors, factorization, marks_matrix,
                       multiply, restrict, transfer)
from .exactlin import determinant, rank
from .mackey import (box, boxtimes, bracket_functor, burnside_functor, constant_functor,
                     isomorphic, iso_as_tau, tau_burnside)
from .ro import ROElement, TauFunction, fixed_dims, format_grading, tau_of
from . import closedforms as cf
from . import spheres


class SuiteResult:
    def __init__(self, name):
        self.name = name
        self.checked = 0
        self.failures = []
        self.notes = []
        self.seconds = 0.0

    @property
    def ok(self):
        return not self.failures

    def check(self, cond, detail):
        self.checked += 1
        if not cond:
            self.failures.append(detail)
        return cond

    def line(self):
        return "%s %s: %d checks, %d failures, %.1fs%s" % (
            "PASS" if self.ok else "FAIL", self.name, self.checked, len(self.failures),
            self.seconds, ("  [" + "; ".join(self.notes) + "]") if self.notes else "")

    def to_json(self):
        return {"suite": self.name, "ok": self.ok, "checked": self.checked,
                "failures": self.failures[:50], "notes": self.notes,
                "seconds": round(self.seconds, 2)}


def _timed(name):
    def wrap(fn):
        def run(*args, **kw):
            res = SuiteResult(name)
            t0 = time.time()
            fn(res, *args, **kw)
            res.seconds = time.time() - t0
            return res
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


# ---------------------------------------------------------------------------
# grading generators

def _slots(n):
    """lambda^k slots up to conjugation, without lambda^(n/2)."""
    return [k for k in range(1, n // 2 + 1) if not (n % 2 == 0 and k == n // 2)]


def positive_cone_grid(n, max_dim, sigma=True):
    """Gradings m - V with V a sum of lambda^d (d | n, 2 sigma = lambda^(n/2))
    plus at most one sigma, dim V <= max_dim, -1 <= m <= dim V + 1."""
    ctx = CyclicGroupCtx(n)
    half = n // 2 if n % 2 == 0 else None
    slots = [d for d in divisors(n) if d != n and d != half] + ([half] if half else [])
    for ms in itertools.product(range(max_dim // 2 + 1), repeat=len(slots)):
        if 2 * sum(ms) > max_dim:
            continue
        for eps in ([0, 1] if (sigma and half) else [0]):
            dim_v = 2 * sum(ms) + eps
            if dim_v > max_dim:
                continue
            lam = {d: -m for d, m in zip(slots, ms) if m}
            for mh in range(-1, dim_v + 2):
                yield ROElement(ctx, mh, -eps, lam)


def negative_cone_grid(n, bound):
    """Divisor-graded alpha <= 0 over C_{p^m} with sum |c_i| <= bound."""
    (p, m), = factorization(n)
    ctx = CyclicGroupCtx(n)
    slots = [p ** i for i in range(m)]
    nsig = 1 if p == 2 else 0
    seen = set()
    for cs in itertools.product(range(-bound, bound + 1), repeat=len(slots) + 1 + nsig):
        if sum(map(abs, cs)) > bound:
            continue
        sig = cs[1] if nsig else 0
        lam = {d: c for d, c in zip(slots, cs[1 + nsig:]) if c}
        a = ROElement(ctx, cs[0], 0, lam) + _sigma(ctx, sig)
        if a in seen:
            continue
        seen.add(a)
        if all(v <= 0 for v in fixed_dims(a).values()):
            yield a


def _sigma(ctx, k):
    out = ROElement(ctx)
    if not k:
        return out
    s = ROElement(ctx, 0, 1, {})
    for _ in range(abs(k)):
        out = out + s if k > 0 else out - s
    return out


def _rep(ctx, k, c=1):
    n = ctx.n
    k %= n
    k = min(k, n - k)
    return ROElement(ctx, 0, 0, {k: c}) if c else ROElement(ctx)


def random_ro_zero(n, rng, terms=3):
    """Random element of RO_0: sums of lambda^a - lambda^b with (a, n) = (b, n)."""
    ctx = CyclicGroupCtx(n)
    out = ROElement(ctx)
    for _ in range(rng.randint(1, terms)):
        g = rng.choice([d for d in divisors(n) if d != n])
        units = [u for u in range(1, n) if gcd(u, n) == g]
        out = out + _rep(ctx, rng.choice(units)) - _rep(ctx, rng.choice(units))
    return out


def random_nonpositive(n, rng, bound=3):
    """Random sigma-free alpha with all fixed-point dimensions <= 0."""
    ctx = CyclicGroupCtx(n)
    slots = _slots(n)
    while True:
        lam = {k: rng.randint(-bound, bound) for k in slots}
        a = ROElement(ctx, rng.randint(-bound, 1), 0, {k: c for k, c in lam.items() if c})
        if all(v <= 0 for v in fixed_dims(a).values()):
            return a


def random_tau(n, rng):
    vals = {}
    for d in divisors(n):
        if d == n:
            continue
        m = n // d
        units = [u for u in range(1, m + 1) if gcd(u, m) == 1]
        vals[d] = rng.choice(units)
    return TauFunction(n, vals)


# ---------------------------------------------------------------------------
# suites

@_timed("burnside")
def burnside_suite(res, nmax=36):
    """Mark injectivity, Frobenius reciprocity and rank = prod (n_i + 1)."""
    for n in range(1, nmax + 1):
        ctx = CyclicGroupCtx(n)
        expected = 1
        for _, e in factorization(n):
            expected *= e + 1
        res.check(ctx.rank() == expected == len(divisors(n)), "rank of A(C_%d)" % n)
        res.check(determinant(marks_matrix(n)) != 0, "marks of C_%d not injective" % n)
        for d in divisors(n):
            for e in divisors(d):
                for a in divisors(d):
                    x = BurnsideElement.orbit(ctx, d, a)
                    rx = restrict(x, e)
                    for b in divisors(e):
                        y = BurnsideElement.orbit(ctx, e, b)
                        lhs = transfer(multiply(y, rx), d)
                        rhs = multiply(transfer(y, d), x)
                        res.check(lhs == rhs, "Frobenius C_%d > C_%d, [%d], [%d]" % (d, e, a, b))


def _standard_sample(n, rng):
    return [burnside_functor(n), constant_functor(n), constant_functor(n, dual=True),
            bracket_functor(n), tau_burnside(random_tau(n, rng))]


@_timed("box")
def box_suite(res, ns=(4, 6, 9, 12), pairs=50, seed=2):
    """A box M = M; A[t] box A[t'] = A[t t']; boxtimes compatibility over C6."""
    rng = random.Random(seed)
    for n in ns:
        a = burnside_functor(n)
        for m in _standard_sample(n, rng):
            res.check(isomorphic(box(a, m), m), "A box %s over C_%d" % (m.name, n))
    for n, _ in itertools.product(ns, range(pairs)):
        t1, t2 = random_tau(n, rng), random_tau(n, rng)
        lhs = box(tau_burnside(t1), tau_burnside(t2))
        try:
            t = iso_as_tau(lhs)
            ok = t.equivalent(t1 * t2) and (t1 * t2).equivalent(t)
        except Exception:
            ok = False
        res.check(ok, "A[%s] box A[%s] over C_%d" % (t1.values, t2.values, n))
    # (M1 x N1) box (M2 x N2) = (M1 box M2) x (N1 box N2) over C_6 = C_2 x C_3
    for i, j in itertools.product(range(5), repeat=2):
        m1, m2 = _standard_sample(2, rng)[i], _standard_sample(2, rng)[j]
        n1, n2 = _standard_sample(3, rng)[j], _standard_sample(3, rng)[i]
        lhs = box(boxtimes(m1, n1), boxtimes(m2, n2))
        rhs = boxtimes(box(m1, m2), box(n1, n2))
        res.check(isomorphic(lhs, rhs), "boxtimes compatibility %s,%s / %s,%s" % (
            m1.name, m2.name, n1.name, n2.name))


@_timed("ro-zero")
def ro_zero_suite(res, ns=(4, 6, 9, 15), count=25, seed=3):
    """Oracle pi_alpha(HA) = A[tau(alpha)] for random alpha in RO_0."""
    rng = random.Random(seed)
    for n in ns:
        A = burnside_functor(n)
        for _ in range(count):
            a = random_ro_zero(n, rng)
            m = spheres.homotopy_mackey(a, A)
            try:
                t = iso_as_tau(m)
                ok = t.equivalent(tau_of(a)) and tau_of(a).equivalent(t)
            except Exception:
                ok = False
            res.check(ok, "C_%d, %s" % (n, format_grading(a)))


@_timed("hz-cone")
def hz_cone_suite(res, ns=(4, 8, 9, 12, 36), max_dim=8):
    """hz_positive_piece against the oracle on the positive cone."""
    for n in ns:
        Z = constant_functor(n)
        for a in positive_cone_grid(n, max_dim):
            o = spheres.homotopy_group(a, Z).canonical()
            c = cf.hz_positive_piece(a).canonical()
            res.check(o == c, "C_%d, %s: oracle %s, closed form %s" % (n, format_grading(a), o, c))
    if 36 in ns:
        a = ROElement(CyclicGroupCtx(36), 2, 0, {2: -1, 3: -1, 4: -1})
        o = spheres.homotopy_group(a, constant_functor(36)).canonical()
        c = cf.hz_positive_piece(a).canonical()
        res.check(o == c == (0, (18,)), "C_36, 2 - L2 - L3 - L4: oracle %s, closed form %s" % (o, c))


@_timed("ha-cone")
def ha_cone_suite(res, prime_powers=(3, 4, 8, 9), square_free=(6, 15), max_dim=6):
    """A-coefficient positive-cone calculators against the oracle."""
    for n, calc in [(n, cf.ha_positive_piece_primepower) for n in prime_powers] + \
                   [(n, cf.ha_positive_piece_squarefree) for n in square_free]:
        A = burnside_functor(n)
        for a in positive_cone_grid(n, max_dim):
            o = spheres.homotopy_group(a, A).canonical()
            c = calc(a).canonical()
            res.check(o == c, "C_%d, %s: oracle %s, closed form %s" % (n, format_grading(a), o, c))
    # S^{lambda + lambda^p}: A(G)/tr(A(C_p)) in degree 0, A(C_p)/(p^(m-1)[C_p/e]) in degree 2
    for n in prime_powers:
        (p, m), = factorization(n)
        if m < 2:
            continue
        ctx = CyclicGroupCtx(n)
        for i, want in ((0, (m - 1, ())), (2, (1, (p ** (m - 1),)))):
            a = ROElement(ctx, i, 0, {1: -1, p: -1})
            o = spheres.homotopy_group(a, burnside_functor(n)).canonical()
            c = cf.ha_positive_piece_primepower(a).canonical()
            res.check(o == c == want, "C_%d, %s: oracle %s, closed form %s, expected %s" % (
                n, format_grading(a), o, c, want))


def _nontrivial_lines(n):
    ctx = CyclicGroupCtx(n)
    return [ROElement(ctx, 0, 0, {k: 1}) for k in range(1, n // 2 + 1)]


@_timed("gold")
def gold_suite(res, ns=(4, 6, 9, 12)):
    """The au-relation for all pairs of nontrivial 1-dim complex reps."""
    for n in ns:
        for x1, x2 in itertools.combinations_with_replacement(_nontrivial_lines(n), 2):
            ok, _ = spheres.verify_gold_relation(x1, x2)
            res.check(ok, "C_%d, %s / %s" % (n, format_grading(x1), format_grading(x2)))


@_timed("geofix")
def geofix_suite(res, ns=(6, 12, 30), max_degree=10):
    """Geometric fixed points: formula against E^2 assembly."""
    for n in ns:
        ring = cf.geometric_fixed_points(n)
        ss = cf.geo_spectral_sequence_e2(n, max_degree)
        for d in range(max_degree + 1):
            a, b = ring.canonical(d), ss.assembled(d).canonical()
            res.check(a == b, "C_%d degree %d: formula %s, E2 %s" % (n, d, a, b))
            if d % 2:
                res.check(a == (0, ()), "C_%d odd degree %d nonzero" % (n, d))
        res.check(ring.canonical(0) == (1, ()), "C_%d degree 0 is not Z" % n)
        for key, ok in ss.checks().items():
            res.check(ok, "C_%d E2 check %s" % (n, key))
    if 12 in ns:
        ss = cf.geo_spectral_sequence_e2(12, max_degree)
        for t in range(1, max_degree + 1, 2):
            g = ss.e2[(1, t)].canonical()
            res.check(g == (0, (2, 6)), "C_12 E2[1,%d] = %s, expected (Z/2)^2 + Z/3" % (t, g))


@_timed("negative-cone")
def negative_cone_suite(res, ns=(9, 27, 4, 8), bound=5):
    """negative_cone_piece against the oracle, plus the pinned examples."""
    for n in ns:
        Z = constant_functor(n)
        A = burnside_functor(n)
        (p, m), = factorization(n)
        for a in negative_cone_grid(n, bound):
            o = spheres.homotopy_group(a, Z).canonical()
            c = cf.negative_cone_piece(a).canonical()
            res.check(o == c, "C_%d, %s: oracle %s, closed form %s" % (n, format_grading(a), o, c))
            dims = cf._level_dims(a)
            if dims[0] == 0 and not a.sigma:
                r = rank([cf.chi_marks(a, s) for s in range(m + 1)])
                ha = spheres.homotopy_group(a, A).canonical()
                res.check(r == ha[0], "chi_marks rank C_%d, %s: %d vs %s" % (
                    n, format_grading(a), r, ha))
    for p in (2, 3):
        n = p ** 3
        a = ROElement(CyclicGroupCtx(n), 0, 0, {1: 2, p: -2})
        c = cf.negative_cone_piece(a).canonical()
        o = spheres.homotopy_group(a, constant_functor(n)).canonical()
        res.check(c == o == (1, (p,)), "C_%d, 2L1 - 2L%d: %s / %s" % (n, p, c, o))
    for n in (2, 4, 8):
        a = ROElement(CyclicGroupCtx(n), -1, 1, {})
        c = cf.negative_cone_piece(a).canonical()
        o = spheres.homotopy_group(a, constant_functor(n)).canonical()
        res.check(c == o == (0, ()), "C_%d, s - 1: %s / %s" % (n, c, o))


def _cpq_case_grading(n, case, rng, kmax=3):
    """Random alpha over C_pq in the given many-zeros case."""
    ctx = CyclicGroupCtx(n)
    (p0, _), (q0, _) = factorization(n)
    while True:
        p, q = rng.choice([(p0, q0), (q0, p0)])
        k = rng.choice([x for x in range(-kmax, kmax + 1) if x])
        l = rng.choice([x for x in range(-kmax, kmax + 1) if x])
        if case == 1:
            beta = ROElement(ctx)
        elif case == 2:
            beta = _rep(ctx, 1, k)
        elif case == 3:
            beta = _rep(ctx, 1, k) - _rep(ctx, p, k)
        elif case == 4:
            beta = ROElement(ctx, 2 * k) + _rep(ctx, 1, k) - _rep(ctx, p, k) - _rep(ctx, q, k)
        elif case == 5:
            if l == -k:
                continue
            beta = _rep(ctx, p, k) + _rep(ctx, 1, l)
        else:
            if k + l == 0:
                continue
            beta = ROElement(ctx, 2 * l) + _rep(ctx, p, k) - _rep(ctx, 1, k) - _rep(ctx, q, l)
        a = beta + (random_ro_zero(n, rng, 2) if rng.random() < 0.8 else ROElement(ctx))
        if case == 1 and a.is_zero():
            continue
        return a


@_timed("many-zeros")
def many_zeros_suite(res, ns=(15, 35), per_case=10, seed=5):
    """cpq_many_zeros against twist_by_ro_zero, per_case gradings per case."""
    rng = random.Random(seed)
    for n in ns:
        A = burnside_functor(n)
        for case in range(1, 7):
            for _ in range(per_case):
                a = _cpq_case_grading(n, case, rng)
                m = cf.cpq_many_zeros(a)
                got = m.case_data["case"]
                res.check(got == case, "C_%d, %s classified as case %d, built for %d" % (
                    n, format_grading(a), got, case))
                o = spheres.twist_by_ro_zero(a, A)
                res.check(isomorphic(m, o), "C_%d, %s (case %d%s) not isomorphic" % (
                    n, format_grading(a), case, m.case_data["sub"]))


@_timed("torsion-free")
def torsion_free_suite(res, ns=(4, 9, 6), count=40, seed=7):
    """pi_alpha(HA) torsion-free for random sigma-free alpha <= 0."""
    rng = random.Random(seed)
    res.notes.append("sigma-free gradings; sigma - 1 over C_4 has Z/2")
    for n in ns:
        A = burnside_functor(n)
        for _ in range(count):
            a = random_nonpositive(n, rng)
            g = spheres.homotopy_group(a, A).canonical()
            res.check(not g[1], "C_%d, %s: %s has torsion" % (n, format_grading(a), g))


SUITES = {
    "burnside": burnside_suite,
    "box": box_suite,
    "ro-zero": ro_zero_suite,
    "hz-cone": hz_cone_suite,
    "ha-cone": ha_cone_suite,
    "gold": gold_suite,
    "geofix": geofix_suite,
    "negative-cone": negative_cone_suite,
    "many-zeros": many_zeros_suite,
    "torsion-free": torsion_free_suite,
}


@_timed("box-unit")
def box_unit_suite(res, n=6, seed=1):
    """A box M = M for the standard functors over C_n."""
    rng = random.Random(seed)
    a = burnside_functor(n)
    for m in _standard_sample(n, rng):
        res.check(isomorphic(box(a, m), m), "A box %s over C_%d" % (m.name, n))


SUITES["box-unit"] = box_unit_suite
