"""Exact integer linear algebra.

Finitely generated abelian groups are given by presentations (generators and
a relation matrix), matrices are plain lists of rows of Python ints, and
everything is reduced to Smith normal form.  Maps act on column vectors: a
``GroupMap`` matrix has one row per target generator and one column per
source generator.
"""

from math import gcd


class LinAlgError(ValueError):
    pass


# ---------------------------------------------------------------------------
# small matrix helpers

def zeros(r, c):
    return [[0] * c for _ in range(r)]


def identity(n):
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def transpose(m, ncols=None):
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*m)]


def mat_mul(a, b, inner=None):
    """Product of an (r x k) and a (k x c) matrix.

    ``inner`` is only needed when k = 0 and the shapes cannot be inferred.
    """
    if not a:
        return []
    k = len(a[0])
    if k == 0:
        c = len(b[0]) if b else (inner or 0)
        return zeros(len(a), c)
    c = len(b[0])
    bt = list(zip(*b))
    out = []
    for row in a:
        nz = [(j, x) for j, x in enumerate(row) if x]
        out.append([sum(x * col[j] for j, x in nz) for col in bt])
    return out


def mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v) if x) for row in a]


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, s):
    return [[s * x for x in row] for row in a]


def hstack(blocks, nrows):
    out = [[] for _ in range(nrows)]
    for blk in blocks:
        for i in range(nrows):
            out[i].extend(blk[i])
    return out


def vstack(blocks):
    out = []
    for blk in blocks:
        out.extend(list(r) for r in blk)
    return out


def block_diag(blocks):
    """Block diagonal matrix from (matrix, nrows, ncols) triples."""
    R = sum(b[1] for b in blocks)
    C = sum(b[2] for b in blocks)
    out = zeros(R, C)
    r0 = c0 = 0
    for m, r, c in blocks:
        for i in range(r):
            out[r0 + i][c0:c0 + c] = m[i]
        r0 += r
        c0 += c
    return out


def determinant(m):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form

def smith_normal_form(m, ncols=None, want_inverses=False):
    """Smith normal form of an integer matrix.

    Returns ``(diag, left, right)`` with ``left * m * right`` diagonal, the
    diagonal being ``diag`` (length min(rows, cols)), nonnegative, and each
    entry dividing the next.  With ``want_inverses`` the inverses of left and
    right are appended to the tuple.

    Pivots are chosen as the smallest nonzero entry in absolute value.
    """
    r = len(m)
    c = len(m[0]) if m else (ncols or 0)
    a = [list(row) for row in m]
    L = identity(r)
    R = identity(c)
    Li = identity(r) if want_inverses else None
    Ri = identity(c) if want_inverses else None

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            L[i], L[j] = L[j], L[i]
            if Li is not None:
                for row in Li:
                    row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in R:
                row[i], row[j] = row[j], row[i]
            if Ri is not None:
                Ri[i], Ri[j] = Ri[j], Ri[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        ad, as_ = a[dst], a[src]
        for j in range(c):
            if as_[j]:
                ad[j] += q * as_[j]
        ld, ls = L[dst], L[src]
        for j in range(r):
            if ls[j]:
                ld[j] += q * ls[j]
        if Li is not None:
            for row in Li:
                if row[dst]:
                    row[src] -= q * row[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for row in a:
            if row[src]:
                row[dst] += q * row[src]
        for row in R:
            if row[src]:
                row[dst] += q * row[src]
        if Ri is not None:
            rs, rd = Ri[src], Ri[dst]
            for j in range(c):
                if rd[j]:
                    rs[j] -= q * rd[j]

    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            row = a[i]
            for j in range(t, c):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            piv = a[t][t]
            dirty = False
            for i in range(t + 1, r):
                if a[i][t]:
                    q = a[i][t] // piv
                    add_row(i, t, -q)
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, c):
                if a[t][j]:
                    q = a[t][j] // piv
                    add_col(j, t, -q)
                    if a[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t, r):
                    if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                        best = (abs(a[i][t]), i, t)
                for j in range(t, c):
                    if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                        best = (abs(a[t][j]), t, j)
                swap_rows(t, best[1])
                swap_cols(t, best[2])
                continue
            # divisibility of the remaining block
            bad = None
            for i in range(t + 1, r):
                row = a[i]
                for j in range(t + 1, c):
                    if row[j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            L[t] = [-x for x in L[t]]
            if Li is not None:
                for row in Li:
                    row[t] = -row[t]
        t += 1
    diag = [a[i][i] for i in range(min(r, c))]
    if want_inverses:
        return diag, L, R, Li, Ri
    return diag, L, R


def invariant_factors(m, ncols=None):
    """Nonzero SNF diagonal entries of m."""
    d = smith_normal_form(m, ncols)[0]
    return [x for x in d if x]


def rank(m, ncols=None):
    return len(invariant_factors(m, ncols))


def solve(a, b, ncols=None):
    """An integer solution x of a x = b, or None if there is none."""
    r = len(a)
    c = len(a[0]) if a else (ncols or 0)
    if r == 0:
        return [0] * c
    diag, L, R = smith_normal_form(a, c)
    lb = mat_vec(L, b)
    y = [0] * c
    for i, v in enumerate(lb):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if v:
                return None
        else:
            if v % d:
                return None
            y[i] = v // d
    return mat_vec(R, y)


def kernel_basis(a, ncols=None):
    """Columns of the returned (c x s) matrix form a basis of ker(a)."""
    r = len(a)
    c = len(a[0]) if a else (ncols or 0)
    if r == 0:
        return identity(c)
    diag, L, R = smith_normal_form(a, c)
    rk = sum(1 for x in diag if x)
    return [row[rk:] for row in R]


# ---------------------------------------------------------------------------
# presented groups

def _canon(ngens, relations):
    diag, L, R, Li, Ri = smith_normal_form(relations, ngens, want_inverses=True)
    # relations * R = L^{-1} D: the row map x -> x R sends the relation
    # lattice onto the diagonal one, so y = R^T x are canonical coordinates.
    full = diag + [0] * (ngens - len(diag))
    keep = [i for i in range(ngens) if full[i] != 1]
    # order: torsion first (ascending), then free
    tors = [i for i in keep if full[i] != 0]
    free = [i for i in keep if full[i] == 0]
    order = tors + free
    to_c = [[R[j][i] for j in range(ngens)] for i in order]
    from_c = [[Ri[i][j] for i in order] for j in range(ngens)]
    orders = [full[i] for i in order]
    return orders, to_c, from_c


class FgAbGroup:
    """Finitely generated abelian group Z^ngens / rowspace(relations)."""

    __slots__ = ("ngens", "relations", "_canon")

    def __init__(self, ngens, relations=()):
        rels = [list(r) for r in relations]
        for row in rels:
            if len(row) != ngens:
                raise LinAlgError("relation has wrong length")
        self.ngens = ngens
        self.relations = [r for r in rels if any(r)]
        self._canon = None

    @classmethod
    def free(cls, n):
        return cls(n, [])

    @classmethod
    def cyclic(cls, d):
        if d == 0:
            return cls(1, [])
        return cls(1, [[d]])

    @classmethod
    def from_invariants(cls, rank, torsion=()):
        tors = [t for t in torsion if t != 1]
        n = len(tors) + rank
        rels = []
        for i, t in enumerate(tors):
            row = [0] * n
            row[i] = t
            rels.append(row)
        return cls(n, rels)

    def _canonical_data(self):
        if self._canon is None:
            self._canon = _canon(self.ngens, self.relations)
        return self._canon

    def canonical(self):
        """(free rank, invariant factors) with the factors ascending."""
        orders = self._canonical_data()[0]
        tors = canonical_torsion([o for o in orders if o])
        return (sum(1 for o in orders if o == 0), tuple(tors))

    @property
    def rank(self):
        return self.canonical()[0]

    @property
    def torsion(self):
        return self.canonical()[1]

    def order(self):
        """Order of the group, or 0 if infinite."""
        r, t = self.canonical()
        if r:
            return 0
        out = 1
        for x in t:
            out *= x
        return out

    def is_zero(self):
        return self.canonical() == (0, ())

    def is_free(self):
        return not self.canonical()[1]

    def isomorphic(self, other):
        return self.canonical() == other.canonical()

    def reduce(self, v):
        """Canonical coordinates of the element with coordinates v."""
        orders, to_c, _ = self._canonical_data()
        y = mat_vec(to_c, v)
        return [x % o if o else x for x, o in zip(y, orders)]

    def is_zero_element(self, v):
        return not any(self.reduce(v))

    def canonical_group(self):
        """The canonical presentation and the isomorphism to it.

        Returns ``(group, to_canonical, from_canonical)``: two matrices whose
        columns give coordinates.
        """
        orders, to_c, from_c = self._canonical_data()
        rels = []
        for i, o in enumerate(orders):
            if o:
                row = [0] * len(orders)
                row[i] = o
                rels.append(row)
        return FgAbGroup(len(orders), rels), to_c, from_c

    def __eq__(self, other):
        return isinstance(other, FgAbGroup) and self.isomorphic(other)

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        return "FgAbGroup(%s)" % format_group(self.canonical())

    def __str__(self):
        return format_group(self.canonical())


def canonical_torsion(orders):
    """Invariant factors d1 | d2 | ... of a direct sum of cyclic groups."""
    if not orders:
        return []
    n = len(orders)
    rels = [[o if i == j else 0 for j in range(n)] for i, o in enumerate(orders)]
    d = smith_normal_form(rels)[0]
    return sorted(x for x in d if x > 1)


def format_group(canon):
    rank_, tors = canon
    parts = []
    if rank_ == 1:
        parts.append("Z")
    elif rank_ > 1:
        parts.append("Z^%d" % rank_)
    for t in tors:
        parts.append("Z/%d" % t)
    return " + ".join(parts) if parts else "0"


def direct_sum(groups):
    n = sum(g.ngens for g in groups)
    rels = []
    off = 0
    for g in groups:
        for r in g.relations:
            rels.append([0] * off + list(r) + [0] * (n - off - g.ngens))
        off += g.ngens
    return FgAbGroup(n, rels)


def tensor(g, h):
    """Tensor product of presented groups; generators ordered (i, j) -> i*h+j."""
    n, m = g.ngens, h.ngens
    rels = []
    for r in g.relations:
        for j in range(m):
            row = [0] * (n * m)
            for i, x in enumerate(r):
                row[i * m + j] = x
            rels.append(row)
    for r in h.relations:
        for i in range(n):
            row = [0] * (n * m)
            for j, x in enumerate(r):
                row[i * m + j] = x
            rels.append(row)
    return FgAbGroup(n * m, rels)


def kron(a, b):
    """Kronecker product, matching the generator order of ``tensor``."""
    ra, ca = len(a), (len(a[0]) if a else 0)
    rb, cb = len(b), (len(b[0]) if b else 0)
    out = zeros(ra * rb, ca * cb)
    for i in range(ra):
        for j in range(ca):
            x = a[i][j]
            if x:
                for k in range(rb):
                    for l in range(cb):
                        if b[k][l]:
                            out[i * rb + k][j * cb + l] = x * b[k][l]
    return out


def in_lattice(v, group):
    """Whether v lies in the relation lattice of ``group``."""
    return group.is_zero_element(v)


class GroupMap:
    """Homomorphism of presented groups given on generators."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source, target, matrix, check=True):
        self.source = source
        self.target = target
        if not matrix and target.ngens:
            matrix = zeros(target.ngens, source.ngens)
        if target.ngens == 0:
            matrix = []
        self.matrix = [list(r) for r in matrix]
        if check:
            if len(self.matrix) != target.ngens or any(
                    len(r) != source.ngens for r in self.matrix):
                raise LinAlgError("matrix shape does not match groups")
            for rel in source.relations:
                if not target.is_zero_element(mat_vec(self.matrix, rel)):
                    raise LinAlgError("map is not well defined on relation %r" % (rel,))

    def __call__(self, v):
        return mat_vec(self.matrix, v)

    def compose(self, other):
        """self o other."""
        if other.target.ngens != self.source.ngens:
            raise LinAlgError("maps not composable")
        m = mat_mul(self.matrix, other.matrix, other.source.ngens) \
            if self.matrix else []
        return GroupMap(other.source, self.target, m, check=False)

    def is_zero(self):
        for j in range(self.source.ngens):
            col = [row[j] for row in self.matrix]
            if not self.target.is_zero_element(col):
                return False
        return True

    def equals(self, other):
        """Equality as homomorphisms (modulo target relations)."""
        for j in range(self.source.ngens):
            col = [a[j] - b[j] for a, b in zip(self.matrix, other.matrix)]
            if not self.target.is_zero_element(col):
                return False
        return True

    def kernel(self):
        return kernel_of(self).group

    def cokernel(self):
        t = self.target
        rels = list(t.relations) + transpose(self.matrix, self.source.ngens) \
            if self.matrix else list(t.relations)
        return FgAbGroup(t.ngens, rels)

    def image(self):
        """Image as a subquotient presentation."""
        return FgAbGroup(self.source.ngens, list(self.source.relations) + _kernel_rows(self))

    def is_injective(self):
        return self.kernel().is_zero()

    def is_surjective(self):
        return self.cokernel().is_zero()

    def is_iso(self):
        return self.is_surjective() and self.is_injective()


def _kernel_rows(f):
    """Generators (as source coordinate rows) of the kernel of f."""
    basis, _ = _kernel_lattice(f)
    return transpose(basis, 0) if basis and basis[0] else []


def _kernel_lattice(f):
    """Basis (columns) of {x : f(x) = 0 in target}, as lifts in Z^ngens."""
    s, t = f.source, f.target
    trel = t.relations
    if not trel:
        kb = kernel_basis(f.matrix, s.ngens) if t.ngens else identity(s.ngens)
        return kb, True
    big = hstack([f.matrix, transpose(trel)], t.ngens)
    kb = kernel_basis(big, s.ngens + len(trel))
    proj = [row for row in kb[:s.ngens]]
    return proj, False


def kernel_of(f):
    """Kernel of f as a presented group with its inclusion map."""
    s = f.source
    proj, _ = _kernel_lattice(f)
    return _subquotient(s, proj, [])


class Subquotient:
    """A subquotient Z/B of a presented group, Z given by spanning lifts.

    ``group`` is the canonical presentation; ``reps`` has one column per
    canonical generator (coordinates in the ambient group); ``coords`` maps an
    ambient element of Z to canonical coordinates.
    """

    def __init__(self, ambient, span, extra_rels):
        self.ambient = ambient
        n = ambient.ngens
        cols = transpose(span, len(span[0]) if span and span[0] else 0) if span else []
        cols = [c for c in cols if any(c)]
        if cols:
            m = transpose(cols)
            diag, L, R, Li, Ri = smith_normal_form(m, want_inverses=True)
            rk = sum(1 for x in diag if x)
        else:
            diag, L, Li, rk = [], identity(n), identity(n), 0
        self._L = L
        self._diag = diag[:rk]
        # basis of Z: columns Li[:, i] * d_i
        basis = [[Li[j][i] * diag[i] for i in range(rk)] for j in range(n)]
        self._basis = basis
        # relations: ambient relations plus extra, in Z-coordinates
        rel_rows = []
        for v in list(ambient.relations) + [list(r) for r in extra_rels]:
            c = self._zcoords(v)
            if c is None:
                raise LinAlgError("relation does not lie in the subgroup")
            rel_rows.append(c)
        pres = FgAbGroup(rk, rel_rows)
        self.presentation = pres
        self.group, to_c, from_c = pres.canonical_group()
        self._to_c = to_c
        self._orders = pres._canonical_data()[0]
        self.reps = mat_mul(basis, from_c, rk) if rk else [[] for _ in range(n)]

    def _zcoords(self, v):
        lv = mat_vec(self._L, v)
        out = []
        for i, x in enumerate(lv):
            if i < len(self._diag):
                d = self._diag[i]
                if x % d:
                    return None
                out.append(x // d)
            elif x:
                return None
        return out

    def contains(self, v):
        return self._zcoords(v) is not None

    def coords(self, v):
        c = self._zcoords(v)
        if c is None:
            raise LinAlgError("element does not lie in the subgroup")
        y = mat_vec(self._to_c, c)
        return [x % o if o else x for x, o in zip(y, self._orders)]


def _subquotient(ambient, span, extra):
    return Subquotient(ambient, span, extra)


# ---------------------------------------------------------------------------
# complexes

class IntComplex:
    """Chain complex of presented groups, differential lowering degree.

    ``terms`` maps degree -> FgAbGroup; ``diffs`` maps k -> matrix of
    d_k : C_k -> C_{k-1}.  Missing terms are zero.
    """

    def __init__(self, terms, diffs, check=True):
        self.terms = {k: g for k, g in terms.items()}
        self.diffs = {}
        for k, m in diffs.items():
            src = self.term(k)
            tgt = self.term(k - 1)
            if src.ngens == 0 or tgt.ngens == 0:
                continue
            self.diffs[k] = GroupMap(src, tgt, m, check=check)
        if check:
            for k in sorted(self.diffs):
                if k - 1 in self.diffs:
                    comp = self.diffs[k - 1].compose(self.diffs[k])
                    if not comp.is_zero():
                        raise LinAlgError("d_%d o d_%d is not zero" % (k - 1, k))

    def term(self, k):
        return self.terms.get(k, FgAbGroup(0))

    def diff(self, k):
        if k in self.diffs:
            return self.diffs[k]
        src, tgt = self.term(k), self.term(k - 1)
        return GroupMap(src, tgt, zeros(tgt.ngens, src.ngens), check=False)

    def degrees(self):
        return sorted(k for k, g in self.terms.items() if g.ngens)

    def euler_characteristic(self):
        return sum((-1) ** k * self.term(k).rank for k in self.degrees())


def homology_data(c, k):
    """ker(d_k)/im(d_{k+1}) as a ``Subquotient`` of C_k."""
    ck = c.term(k)
    if ck.ngens == 0:
        return Subquotient(ck, [], [])
    dk = c.diff(k)
    span, _ = _kernel_lattice(dk)
    d1 = c.diff(k + 1)
    bounds = transpose(d1.matrix, d1.source.ngens) if d1.matrix else []
    return Subquotient(ck, span, bounds)


def homology(c, k):
    """Homology of c in degree k, in canonical presentation."""
    return homology_data(c, k).group


class ChainMap:
    """Chain map f_k : C_k -> D_k given by matrices per degree."""

    def __init__(self, source, target, mats, check=True):
        self.source = source
        self.target = target
        self.mats = {}
        for k in set(source.degrees()) | set(target.degrees()):
            s, t = source.term(k), target.term(k)
            m = mats.get(k)
            if m is None or not t.ngens:
                m = zeros(t.ngens, s.ngens)
            self.mats[k] = GroupMap(s, t, m, check=check)
        if check:
            bad = self.offending_square()
            if bad is not None:
                raise LinAlgError("not a chain map: square at degree %d does not commute" % bad)

    def at(self, k):
        if k in self.mats:
            return self.mats[k]
        s, t = self.source.term(k), self.target.term(k)
        return GroupMap(s, t, zeros(t.ngens, s.ngens), check=False)

    def offending_square(self):
        for k in sorted(self.mats):
            lhs = self.target.diff(k).compose(self.at(k))
            rhs = self.at(k - 1).compose(self.source.diff(k))
            if not lhs.equals(rhs):
                return k
        return None


def map_on_homology(f, k, src_data=None, tgt_data=None):
    """Induced map H_k(source) -> H_k(target) between canonical groups."""
    if not isinstance(f, ChainMap):
        raise LinAlgError("expected a ChainMap")
    bad = f.offending_square()
    if bad is not None:
        raise LinAlgError("not a chain map: square at degree %d does not commute" % bad)
    hs = src_data or homology_data(f.source, k)
    ht = tgt_data or homology_data(f.target, k)
    fk = f.at(k)
    cols = []
    for j in range(hs.group.ngens):
        rep = [row[j] for row in hs.reps]
        cols.append(ht.coords(fk(rep)))
    m = transpose(cols, 0) if cols else zeros(ht.group.ngens, 0)
    if not cols:
        m = zeros(ht.group.ngens, 0)
    return GroupMap(hs.group, ht.group, m)


class IntBicomplex:
    """Double complex with terms at (i, j).

    ``dh[(i, j)]`` : C_{i,j} -> C_{i-1,j} and ``dv[(i, j)]`` : C_{i,j} ->
    C_{i,j-1}; the two commute.  The total differential twists the vertical
    one by (-1)^i.
    """

    def __init__(self, terms, dh, dv, check=True):
        self.terms = dict(terms)
        self.dh = dict(dh)
        self.dv = dict(dv)
        if check:
            for (i, j) in self.terms:
                a = self._h(i, j - 1)
                b = self._v(i, j)
                c_ = self._v(i - 1, j)
                d = self._h(i, j)
                s = self.term(i, j)
                t = self.term(i - 1, j - 1)
                if not s.ngens or not t.ngens:
                    continue
                lhs = mat_mul(a, b, self.term(i, j - 1).ngens) if a and b else zeros(t.ngens, s.ngens)
                rhs = mat_mul(c_, d, self.term(i - 1, j).ngens) if c_ and d else zeros(t.ngens, s.ngens)
                diff = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(lhs, rhs)]
                for col in transpose(diff, s.ngens):
                    if not t.is_zero_element(col):
                        raise LinAlgError("square at (%d, %d) does not commute" % (i, j))
            self.total()  # checks d o d = 0 and well-definedness

    def term(self, i, j):
        return self.terms.get((i, j), FgAbGroup(0))

    def _h(self, i, j):
        s, t = self.term(i, j), self.term(i - 1, j)
        m = self.dh.get((i, j))
        if m is None:
            return zeros(t.ngens, s.ngens) if t.ngens and s.ngens else []
        return m

    def _v(self, i, j):
        s, t = self.term(i, j), self.term(i, j - 1)
        m = self.dv.get((i, j))
        if m is None:
            return zeros(t.ngens, s.ngens) if t.ngens and s.ngens else []
        return m

    def total(self):
        degs = {}
        for (i, j), g in self.terms.items():
            if g.ngens:
                degs.setdefault(i + j, []).append((i, j))
        for k in degs:
            degs[k].sort()
        terms, offs = {}, {}
        for k, cells in degs.items():
            terms[k] = direct_sum([self.term(*ij) for ij in cells])
            o = 0
            for ij in cells:
                offs[ij] = o
                o += self.term(*ij).ngens
        diffs = {}
        for k, cells in degs.items():
            if k - 1 not in degs:
                continue
            m = zeros(terms[k - 1].ngens, terms[k].ngens)
            for (i, j) in cells:
                s = self.term(i, j)
                for (ti, tj), blk, sign in (((i - 1, j), self._h(i, j), 1),
                                             ((i, j - 1), self._v(i, j), (-1) ** i)):
                    if (ti, tj) not in offs or not blk:
                        continue
                    r0, c0 = offs[(ti, tj)], offs[(i, j)]
                    for a, row in enumerate(blk):
                        for b, x in enumerate(row):
                            if x:
                                m[r0 + a][c0 + b] += sign * x
            diffs[k] = m
        return IntComplex(terms, diffs)


def total_homology(b, k):
    return homology(b.total(), k)
