"""The real representation ring RO(C_n).

An element is l + e*sigma + sum_s c_s lambda^s.  lambda^s and lambda^(n-s)
are the same real representation, lambda^0 = 2 and, for even n,
lambda^(n/2) = 2 sigma.  In canonical form the sigma multiplicity e is 0 or 1
and the remaining sigma's are carried by the slot s = n/2.
"""

import re
from math import gcd

from .burnside import CyclicGroupCtx, divisors


class RepError(ValueError):
    pass


class ParseError(RepError):
    def __init__(self, message, text, position):
        super().__init__(message)
        self.text = text
        self.position = position

    def caret(self):
        return "%s\n%s^" % (self.text, " " * self.position)


def _slots(n):
    return list(range(1, n // 2 + 1))


class ROElement:
    __slots__ = ("ctx", "trivial", "sigma", "lam")

    def __init__(self, ctx, trivial=0, sigma=0, lam=None):
        if isinstance(ctx, int):
            ctx = CyclicGroupCtx(ctx)
        n = ctx.n
        t = int(trivial)
        sig = int(sigma)
        if sig and n % 2:
            raise RepError("sigma only exists for even n")
        cs = {}
        for s, c in (lam or {}).items():
            if not c:
                continue
            s = int(s) % n
            if s == 0:
                t += 2 * c
                continue
            s = min(s, n - s)
            cs[s] = cs.get(s, 0) + c
        if n % 2 == 0:
            tot = sig + 2 * cs.pop(n // 2, 0)
            sig = tot % 2
            half = (tot - sig) // 2
            if half:
                cs[n // 2] = half
        self.ctx = ctx
        self.trivial = t
        self.sigma = sig
        self.lam = {s: c for s, c in sorted(cs.items()) if c}

    # -- construction ------------------------------------------------------
    @classmethod
    def zero(cls, ctx):
        return cls(ctx)

    @classmethod
    def lambda_(cls, ctx, s, mult=1):
        return cls(ctx, lam={s: mult})

    @classmethod
    def parse(cls, ctx, text):
        return parse_grading(ctx, text)

    @property
    def n(self):
        return self.ctx.n

    def key(self):
        return (self.n, self.trivial, self.sigma, tuple(sorted(self.lam.items())))

    def __eq__(self, other):
        return isinstance(other, ROElement) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __add__(self, other):
        if isinstance(other, int):
            other = ROElement(self.ctx, trivial=other)
        _same_group(self, other)
        lam = dict(self.lam)
        for s, c in other.lam.items():
            lam[s] = lam.get(s, 0) + c
        return ROElement(self.ctx, self.trivial + other.trivial,
                         self.sigma + other.sigma, lam)

    __radd__ = __add__

    def __neg__(self):
        return ROElement(self.ctx, -self.trivial, -self.sigma,
                         {s: -c for s, c in self.lam.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = ROElement(self.ctx, trivial=other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return ROElement(self.ctx, k * self.trivial, k * self.sigma,
                         {s: k * c for s, c in self.lam.items()})

    __rmul__ = __mul__

    def sigma_total(self):
        """Total number of sigma's, counting lambda^(n/2) as two."""
        if self.n % 2:
            return 0
        return self.sigma + 2 * self.lam.get(self.n // 2, 0)

    def is_zero(self):
        return not self.trivial and not self.sigma and not self.lam

    def is_actual(self):
        return (self.trivial >= 0 and self.sigma_total() >= 0
                and all(c >= 0 for c in self.lam.values()))

    def irreducibles(self):
        """Non-trivial summands as a list of ('L', s, mult) / ('s', mult).

        lambda^(n/2) is reported as sigma's.
        """
        out = []
        half = self.n // 2 if self.n % 2 == 0 else None
        for s, c in self.lam.items():
            if s != half:
                out.append(("L", s, c))
        if self.sigma_total():
            out.append(("s", self.sigma_total()))
        return out

    @property
    def dim(self):
        return fixed_dims(self)[1]

    def restrict(self, d):
        """Restriction to the subgroup C_d, as an element of RO(C_d)."""
        n = self.n
        if n % d:
            raise RepError("%d does not divide %d" % (d, n))
        sub = CyclicGroupCtx(d)
        lam = {}
        t = self.trivial
        for s, c in self.lam.items():
            if n % 2 == 0 and s == n // 2:
                continue
            lam[s % d] = lam.get(s % d, 0) + c
        sig = 0
        st = self.sigma_total()
        if st:
            if (n // d) % 2 == 0:
                t += st
            else:
                sig = st
        return ROElement(sub, t, sig, lam)

    def __repr__(self):
        return "ROElement(%d, %r)" % (self.n, format_grading(self))

    def __str__(self):
        return format_grading(self)

    def to_json(self):
        return {"n": self.n, "trivial": self.trivial, "sigma": self.sigma,
                "lambda": {str(s): c for s, c in self.lam.items()}}

    @classmethod
    def from_json(cls, data):
        return cls(CyclicGroupCtx(int(data["n"])), data.get("trivial", 0),
                   data.get("sigma", 0),
                   {int(s): c for s, c in data.get("lambda", {}).items()})


def _same_group(a, b):
    if a.n != b.n:
        raise RepError("representations of different groups")


def format_grading(a):
    terms = []
    if a.trivial:
        terms.append((a.trivial, ""))
    st = a.sigma_total()
    half = a.n // 2 if a.n % 2 == 0 else None
    if st:
        terms.append((st, "s"))
    for s, c in a.lam.items():
        if s != half:
            terms.append((c, "L%d" % s))
    if not terms:
        return "0"
    out = ""
    for i, (c, name) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        m = abs(c)
        body = str(m) if not name else (name if m == 1 else "%d%s" % (m, name))
        if i == 0:
            out = ("-" if c < 0 else "") + body
        else:
            out += " %s %s" % (sign, body)
    return out


_TOKEN = re.compile(r"\s*([+-])?\s*(\d+)?\s*(L\s*\d+|s|σ)?")


def parse_grading(ctx, text):
    """Parse gradings such as "3 - 2L1 - L3 + s"."""
    if isinstance(ctx, int):
        ctx = CyclicGroupCtx(ctx)
    src = text
    pos = 0
    trivial = sig = 0
    lam = {}
    first = True
    n = len(src)
    if not src.strip():
        raise ParseError("empty grading", src, 0)
    while pos < n:
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            raise ParseError("unexpected character", src, pos)
        sign, num, name = m.group(1), m.group(2), m.group(3)
        start = pos
        while start < n and src[start].isspace():
            start += 1
        if sign is None and not first:
            raise ParseError("expected '+' or '-'", src, start)
        if num is None and name is None:
            bad = m.end()
            while bad < n and src[bad].isspace():
                bad += 1
            raise ParseError("expected a number, 'Lk' or 's'", src, min(bad, n))
        c = int(num) if num is not None else 1
        if sign == "-":
            c = -c
        if name is None:
            trivial += c
        elif name in ("s", "σ"):
            if ctx.n % 2:
                raise ParseError("sigma needs an even group order", src,
                                 m.start(3))
            sig += c
        else:
            k = int(name[1:].strip())
            lam[k] = lam.get(k, 0) + c
        pos = m.end()
        first = False
    return ROElement(ctx, trivial, sig, lam)


# ---------------------------------------------------------------------------
# invariants

def fixed_dims(a):
    """Map d | n -> dim of the C_d-fixed points of a."""
    n = a.n
    st = a.sigma_total()
    half = n // 2 if n % 2 == 0 else None
    out = {}
    for d in divisors(n):
        v = a.trivial
        if st and (n // 2) % d == 0 and n % 2 == 0:
            v += st
        for s, c in a.lam.items():
            if s == half:
                continue
            if gcd(s, n) % d == 0:
                v += 2 * c
        out[d] = v
    return out


def in_ro_zero(a):
    return all(v == 0 for v in fixed_dims(a).values())


def divisor_decompose(a):
    """Split a = a0 + a_div with a0 in RO_0 and a_div divisor-graded."""
    n = a.n
    f = fixed_dims(a)
    ell = f[n]
    eps = f[n // 2] - ell if n % 2 == 0 else 0
    coeff = {}
    for d in sorted(divisors(n), reverse=True):
        if d == n or (n % 2 == 0 and d == n // 2):
            continue
        v = f[d] - ell - (eps if (n // 2) % d == 0 and n % 2 == 0 else 0)
        for e, c in coeff.items():
            if e % d == 0:
                v -= 2 * c
        if v % 2:
            raise RepError("fixed dimensions are not realizable")
        coeff[d] = v // 2
    div = ROElement(a.ctx, ell, eps, coeff)
    a0 = a - div
    if not in_ro_zero(a0):
        raise RepError("divisor decomposition failed")
    return a0, div


def is_divisor_graded(a):
    return all(a.n % s == 0 for s in a.lam)


def positive_split(a):
    """(b, c) actual representations with a = b - c and disjoint support."""
    ctx = a.ctx
    bt = max(a.trivial, 0)
    ct = max(-a.trivial, 0)
    st = a.sigma_total()
    half = a.n // 2 if a.n % 2 == 0 else None
    bl, cl = {}, {}
    for s, c in a.lam.items():
        if s == half:
            continue
        if c > 0:
            bl[s] = c
        else:
            cl[s] = -c
    return (ROElement(ctx, bt, max(st, 0), bl), ROElement(ctx, ct, max(-st, 0), cl))


# ---------------------------------------------------------------------------
# tau

class TauFunction:
    """Values tau_d for proper divisors d of n; tau_n = 1."""

    __slots__ = ("n", "values")

    def __init__(self, n, values):
        self.n = n
        vals = {}
        for d in divisors(n):
            if d == n:
                continue
            vals[d] = int(values.get(d, 1))
        self.values = vals

    def __getitem__(self, d):
        if d == self.n:
            return 1
        return self.values[d]

    def normalized(self):
        """Least positive residues mod n/d (with 0 kept as 0)."""
        out = {}
        for d, v in self.values.items():
            m = self.n // d
            r = v % m
            out[d] = r if r else (0 if m > 1 else 1)
            if m == 1:
                out[d] = 1
        return TauFunction(self.n, out)

    def is_invertible(self):
        return all(gcd(v, self.n // d) == 1 for d, v in self.values.items())

    def equivalent(self, other):
        """tau_d = +-tau'_d mod n/d wherever both are nonzero mod n/d."""
        if self.n != other.n:
            return False
        for d in self.values:
            m = self.n // d
            a, b = self[d] % m, other[d] % m
            if a == 0 or b == 0:
                continue
            if a != b % m and a != (-b) % m:
                return False
        return True

    def __mul__(self, other):
        return TauFunction(self.n, {d: self[d] * other[d] for d in self.values})

    def inverse(self):
        out = {}
        for d, v in self.values.items():
            m = self.n // d
            out[d] = pow(v, -1, m) if m > 1 else 1
        return TauFunction(self.n, out)

    def __eq__(self, other):
        return isinstance(other, TauFunction) and self.normalized().values == other.normalized().values

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.normalized().values.items()))))

    def __repr__(self):
        return "TauFunction(%d, %r)" % (self.n, self.values)

    def to_json(self):
        return {str(d): v for d, v in sorted(self.values.items())}


def tau_pairs(a):
    """The pairing lambda^{d l} - lambda^{d k} used to define tau.

    Returns a list of (d, l, k) triples.
    """
    if not in_ro_zero(a):
        raise RepError("%s is not in RO_0" % format_grading(a))
    n = a.n
    if a.sigma_total() or a.trivial:
        raise RepError("sigma or trivial summands do not cancel")
    classes = {}
    for s, c in a.lam.items():
        d = gcd(s, n)
        pos, neg = classes.setdefault(d, ([], []))
        (pos if c > 0 else neg).extend([s] * abs(c))
    out = []
    for d in sorted(classes):
        pos, neg = classes[d]
        if len(pos) != len(neg):
            raise RepError("unbalanced summands with gcd %d" % d)
        for sp, sn in zip(sorted(pos), sorted(neg)):
            out.append((d, sp // d, sn // d))
    return out


def tau_of(a):
    n = a.n
    vals = {d: 1 for d in divisors(n) if d != n}
    for d, l, k in tau_pairs(a):
        m = n // d
        vals[d] = (vals[d] * k * pow(l, -1, m)) % m
    return TauFunction(n, vals)
