"""Burnside rings of cyclic groups.

Subgroups of C_n are indexed by their orders: the divisor d stands for C_d.
An element of A(C_d) is an integer vector over the orbit basis
[C_d/C_e], e | d, with e ascending.
"""

import json
from functools import lru_cache
from math import gcd

from .exactlin import FgAbGroup, kernel_basis, solve, transpose


@lru_cache(maxsize=None)
def divisors(n):
    return tuple(d for d in range(1, n + 1) if n % d == 0)


@lru_cache(maxsize=None)
def factorization(n):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_divisors(n):
    return tuple(p for p, _ in factorization(n))


def lcm(a, b):
    return a * b // gcd(a, b)


def is_prime_power(n):
    return len(factorization(n)) == 1


def is_square_free(n):
    return all(e == 1 for _, e in factorization(n))


class BurnsideError(ValueError):
    pass


class CyclicGroupCtx:
    """The cyclic group C_n with its subgroup lattice."""

    _cache = {}

    def __new__(cls, n):
        if n in cls._cache:
            return cls._cache[n]
        if not isinstance(n, int) or n < 1:
            raise BurnsideError("group order must be a positive integer")
        self = super().__new__(cls)
        self.n = n
        self.divisors = divisors(n)
        self.factorization = factorization(n)
        self.primes = prime_divisors(n)
        cls._cache[n] = self
        return self

    def __getnewargs__(self):
        return (self.n,)

    def __repr__(self):
        return "C_%d" % self.n

    def check_divisor(self, d):
        if d not in self.divisors:
            raise BurnsideError("%r is not a divisor of %d" % (d, self.n))

    def subdivisors(self, d):
        return divisors(d)

    def index(self, d, e):
        """Position of e in the orbit basis of A(C_d)."""
        return divisors(d).index(e)

    def rank(self, d=None):
        return len(divisors(self.n if d is None else d))


class BurnsideElement:
    __slots__ = ("ctx", "group", "coords")

    def __init__(self, ctx, group, coords):
        ctx.check_divisor(group)
        coords = list(coords)
        if len(coords) != len(divisors(group)):
            raise BurnsideError("wrong number of coordinates for A(C_%d)" % group)
        self.ctx = ctx
        self.group = group
        self.coords = coords

    @classmethod
    def orbit(cls, ctx, d, e, coeff=1):
        """coeff * [C_d/C_e]."""
        if d % e:
            raise BurnsideError("C_%d is not a subgroup of C_%d" % (e, d))
        v = [0] * len(divisors(d))
        v[divisors(d).index(e)] = coeff
        return cls(ctx, d, v)

    @classmethod
    def one(cls, ctx, d=None):
        d = ctx.n if d is None else d
        return cls.orbit(ctx, d, d)

    @classmethod
    def zero(cls, ctx, d=None):
        d = ctx.n if d is None else d
        return cls(ctx, d, [0] * len(divisors(d)))

    def __add__(self, other):
        _same(self, other)
        return BurnsideElement(self.ctx, self.group, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        _same(self, other)
        return BurnsideElement(self.ctx, self.group, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return BurnsideElement(self.ctx, self.group, [-a for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, int):
            return BurnsideElement(self.ctx, self.group, [other * a for a in self.coords])
        return multiply(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, BurnsideElement) and self.group == other.group
                and self.coords == other.coords)

    def __hash__(self):
        return hash((self.group, tuple(self.coords)))

    def is_zero(self):
        return not any(self.coords)

    def terms(self):
        return [(e, c) for e, c in zip(divisors(self.group), self.coords) if c]

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for e, c in self.terms():
            b = "1" if e == self.group else "[C%d/C%d]" % (self.group, e)
            if c == 1:
                parts.append(b)
            elif b == "1":
                parts.append("%d" % c)
            else:
                parts.append("%d%s" % (c, b))
        return " + ".join(parts)

    def to_json(self):
        return {"group": self.group,
                "coords": {str(e): c for e, c in self.terms()}}

    @classmethod
    def from_json(cls, ctx, data):
        if isinstance(data, str):
            data = json.loads(data)
        d = int(data["group"])
        v = [0] * len(divisors(d))
        for e, c in data["coords"].items():
            e = int(e)
            if d % e:
                raise BurnsideError("coordinate %d is not a divisor of %d" % (e, d))
            v[divisors(d).index(e)] = int(c)
        return cls(ctx, d, v)


def _same(x, y):
    if x.group != y.group or x.ctx.n != y.ctx.n:
        raise BurnsideError("elements live in different Burnside rings")


@lru_cache(maxsize=None)
def _product_table(d):
    divs = divisors(d)
    table = {}
    for a in divs:
        for b in divs:
            g = gcd(a, b)
            table[(a, b)] = (g, d * g // (a * b))
    return table


def multiply(x, y):
    """Product in A(C_d): [C_d/C_a][C_d/C_b] = (d gcd(a,b)/ab) [C_d/C_gcd(a,b)]."""
    _same(x, y)
    d = x.group
    divs = divisors(d)
    table = _product_table(d)
    out = [0] * len(divs)
    for a, ca in x.terms():
        for b, cb in y.terms():
            g, c = table[(a, b)]
            out[divs.index(g)] += ca * cb * c
    return BurnsideElement(x.ctx, d, out)


@lru_cache(maxsize=None)
def marks_matrix(d):
    """Table of marks of C_d: rows indexed by subgroups f, columns by orbits e."""
    divs = divisors(d)
    return tuple(tuple((d // e if e % f == 0 else 0) for e in divs) for f in divs)


def marks(x):
    """Mark vector of x, indexed by the divisors of its group."""
    m = marks_matrix(x.group)
    return [sum(a * b for a, b in zip(row, x.coords)) for row in m]


def from_marks(ctx, d, vec):
    """Inverse of ``marks``; raises if vec is not a mark vector."""
    m = [list(r) for r in marks_matrix(d)]
    sol = solve(m, list(vec))
    if sol is None:
        raise BurnsideError("not a mark vector of A(C_%d)" % d)
    return BurnsideElement(ctx, d, sol)


@lru_cache(maxsize=None)
def restriction_matrix(d, e):
    """Matrix of res^{C_d}_{C_e} on orbit bases (columns: source basis)."""
    if d % e:
        raise BurnsideError("C_%d is not a subgroup of C_%d" % (e, d))
    src, tgt = divisors(d), divisors(e)
    m = [[0] * len(src) for _ in tgt]
    for j, k in enumerate(src):
        g = gcd(e, k)
        m[tgt.index(g)][j] += (d // k) * g // e
    return tuple(tuple(r) for r in m)


def restrict(x, to):
    d = x.group
    if d % to:
        raise BurnsideError("C_%d is not a subgroup of C_%d" % (to, d))
    m = restriction_matrix(d, to)
    return BurnsideElement(x.ctx, to, [sum(a * b for a, b in zip(row, x.coords)) for row in m])


@lru_cache(maxsize=None)
def transfer_matrix(e, d):
    if d % e:
        raise BurnsideError("C_%d is not a subgroup of C_%d" % (e, d))
    src, tgt = divisors(e), divisors(d)
    m = [[0] * len(src) for _ in tgt]
    for j, k in enumerate(src):
        m[tgt.index(k)][j] = 1
    return tuple(tuple(r) for r in m)


def transfer(x, to):
    """tr^{C_to}_{C_e} for x in A(C_e): [C_e/C_k] -> [C_to/C_k]."""
    e = x.group
    x.ctx.check_divisor(to)
    if to % e:
        raise BurnsideError("C_%d is not a subgroup of C_%d" % (e, to))
    m = transfer_matrix(e, to)
    return BurnsideElement(x.ctx, to, [sum(a * b for a, b in zip(row, x.coords)) for row in m])


def alpha(ctx, d, group=None):
    """alpha_d = [G/C_{|G|/d}], the orbit with d points (G = C_group)."""
    g = ctx.n if group is None else group
    if g % d:
        raise BurnsideError("%d does not divide %d" % (d, g))
    return BurnsideElement.orbit(ctx, g, g // d)


class BurnsideIdeal:
    """I_tr,H (span of transfers from H) or I_res,H (kernel of res to H)."""

    def __init__(self, ctx, kind, subgroup, group=None):
        if kind not in ("tr", "res"):
            raise BurnsideError("ideal kind must be 'tr' or 'res'")
        g = ctx.n if group is None else group
        ctx.check_divisor(subgroup)
        if g % subgroup:
            raise BurnsideError("C_%d is not a subgroup of C_%d" % (subgroup, g))
        self.ctx = ctx
        self.kind = kind
        self.subgroup = subgroup
        self.group = g

    def generators(self):
        """A Z-basis of the ideal as BurnsideElements."""
        g, h = self.group, self.subgroup
        if self.kind == "tr":
            return [BurnsideElement.orbit(self.ctx, g, k) for k in divisors(h)]
        m = [list(r) for r in restriction_matrix(g, h)]
        kb = kernel_basis(m, len(divisors(g)))
        return [BurnsideElement(self.ctx, g, col) for col in transpose(kb, 0)] if kb and kb[0] else []

    def basis_matrix(self):
        """Generators as rows of coordinates."""
        return [x.coords for x in self.generators()]

    def contains(self, x):
        rows = self.basis_matrix()
        if not rows:
            return x.is_zero()
        return solve(transpose(rows), x.coords) is not None

    def rank(self):
        return len(self.generators())

    def quotient(self, extra=()):
        """A(G)/I (plus optional extra elements) as a presented group."""
        rows = self.basis_matrix() + [e.coords for e in extra]
        return FgAbGroup(len(divisors(self.group)), rows)

    def __repr__(self):
        return "I_%s(C_%d in C_%d)" % (self.kind, self.subgroup, self.group)


def ideal_presentation(ideal):
    """The ideal as a free group with its embedding into A(G).

    Returns ``(group, gens)`` where gens is the list of BurnsideElements
    giving the images of the free generators.
    """
    gens = ideal.generators()
    return FgAbGroup.free(len(gens)), gens


def alpha_res_generators(ctx, h, group=None):
    """The elements alpha_d - d for d | [G:H]."""
    g = ctx.n if group is None else group
    out = []
    for d in divisors(g // h):
        out.append(alpha(ctx, d, g) - d * BurnsideElement.one(ctx, g))
    return out


def ideal_generated(ctx, gens, group=None):
    """Z-span of the ideal generated by gens (as rows), via products with the basis."""
    g = ctx.n if group is None else group
    rows = []
    for x in gens:
        for e in divisors(g):
            rows.append(multiply(x, BurnsideElement.orbit(ctx, g, e)).coords)
    return rows


def same_lattice(rows_a, rows_b, ncols):
    """Whether two sets of row vectors span the same sublattice of Z^ncols."""
    def contained(a, b):
        if not a:
            return True
        if not b:
            return all(not any(r) for r in a)
        bt = transpose(b)
        return all(solve(bt, r) is not None for r in a)
    return contained(rows_a, rows_b) and contained(rows_b, rows_a)


def res_ideal_matches_alphas(ctx, h):
    """Check I_res,H = (alpha_d - d : d | [G:H]) as ideals."""
    ideal = BurnsideIdeal(ctx, "res", h)
    rows = ideal_generated(ctx, alpha_res_generators(ctx, h))
    return same_lattice(ideal.basis_matrix(), rows, ctx.rank())
