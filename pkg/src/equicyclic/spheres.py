"""Cellular chains of representation spheres over C_n.

Cells are orbits G/C_a (indexed by the divisor a).  A boundary entry between
an a-cell and a b-cell is a formal combination of basic spans

    G/C_a <- G/C_c -> G/C_b,   x |-> x,   x |-> x + k

written as a dict {(c, k): coeff} with c | gcd(a, b) and k taken modulo
gcd(n/a, n/b).  We model G/C_a as Z/(n/a) with g acting by +1.  Evaluated on
a Mackey functor M the span (c, k) is x |-> tr^b_c(g^k res^a_c(x)).

Products of orbits decompose as G/C_a x G/C_b = union over r in
Z/gcd(n/a, n/b) of copies of G/C_gcd(a,b), embedded by z |-> (z, z + r).
"""

from math import gcd

from .burnside import CyclicGroupCtx, divisors, lcm
from .exactlin import (FgAbGroup, GroupMap, IntBicomplex, IntComplex, LinAlgError,
                       Subquotient, homology_data, mat_vec, solve, transpose, zeros)
from .mackey import MackeyFunctor, _mul
from .ro import ROElement, RepError, positive_split


class SphereError(ValueError):
    pass


# ---------------------------------------------------------------------------
# span algebra

def _mod(n, a, b):
    return gcd(n // a, n // b)


def span_id(a):
    return {(a, 0): 1}


def span_translate(n, a, k):
    return {(a, k % (n // a)): 1}


def span_add(s, t, sign=1):
    out = dict(s)
    for key, v in t.items():
        x = out.get(key, 0) + sign * v
        if x:
            out[key] = x
        else:
            out.pop(key, None)
    return out


def span_scale(s, c):
    return {k: c * v for k, v in s.items()} if c else {}


def span_reverse(n, a, b, s):
    """The dual span G/b -> G/a."""
    m = _mod(n, a, b)
    out = {}
    for (c, k), v in s.items():
        key = (c, (-k) % m)
        out[key] = out.get(key, 0) + v
    return {k: v for k, v in out.items() if v}


def span_compose(n, a, b, e, s1, s2):
    """s2 o s1 for s1 : G/a -> G/b and s2 : G/b -> G/e."""
    nb = n // b
    m_out = _mod(n, a, e)
    out = {}
    for (c1, k1), x1 in s1.items():
        n1 = n // c1
        for (c2, k2), x2 in s2.items():
            g12 = gcd(n1, n // c2)
            mid = gcd(c1, c2)
            base = k1 % nb
            for t in range(g12 // nb):
                key = (mid, (base + nb * t + k2) % m_out)
                out[key] = out.get(key, 0) + x1 * x2
    return {k: v for k, v in out.items() if v}


def _crt(u, a, v, b):
    """delta = u mod a, delta = v mod b (assumes compatibility)."""
    g = gcd(a, b)
    if (v - u) % g:
        raise SphereError("incompatible congruences")
    l = a // g * b
    # a * x = v - u mod b
    x = ((v - u) // g) * pow(a // g, -1, b // g) % (b // g) if b // g > 1 else 0
    return (u + a * x) % l


def span_tensor(n, a, b, a2, b2, s1, s2):
    """s1 x s2 between orbit decompositions of G/a x G/b and G/a2 x G/b2.

    Returns {(r, r2): span} where r indexes orbits of G/a x G/b and r2 those
    of G/a2 x G/b2.
    """
    na, nb, na2, nb2 = n // a, n // b, n // a2, n // b2
    gs, gt = gcd(na, nb), gcd(na2, nb2)
    src_t, tgt_t = gcd(a, b), gcd(a2, b2)
    m_out = _mod(n, src_t, tgt_t)
    out = {}
    for (c1, k1), x1 in s1.items():
        for (c2, k2), x2 in s2.items():
            mid = gcd(c1, c2)
            for rp in range(gcd(n // c1, n // c2)):
                r = rp % gs
                dl = _crt(0, na, rp - r, nb)
                r2 = (rp + k2 - k1) % gt
                dr = _crt(k1, na2, rp + k2 - r2, nb2)
                key = (mid, (dr - dl) % m_out)
                ent = out.setdefault((r, r2), {})
                ent[key] = ent.get(key, 0) + x1 * x2
    return {rk: {k: v for k, v in sp.items() if v} for rk, sp in out.items()
            if any(sp.values())}


def span_matrix(m, a, b, s):
    """Matrix of the span s : G/a -> G/b evaluated on the Mackey functor m."""
    rows, cols = m.ngens(b), m.ngens(a)
    out = zeros(rows, cols)
    if not rows or not cols:
        return out
    for (c, k), coef in s.items():
        key = ("span", a, b, c, k)
        mat = m._cache.get(key)
        if mat is None:
            mat = _mul(m.tr_map(c, b), _mul(m.weyl_pow(c, k), m.res_map(a, c), m.ngens(c)),
                       m.ngens(c))
            m._cache[key] = mat
        for i in range(rows):
            ri, oi = mat[i], out[i]
            for j in range(cols):
                if ri[j]:
                    oi[j] += coef * ri[j]
    return out


def span_is_unit(n, a, b, s):
    """(True, inverse) if s is +-(translation) of G/a = G/b."""
    if a != b or len(s) != 1:
        return None
    (c, k), v = next(iter(s.items()))
    if c != a or v not in (1, -1):
        return None
    return {(a, (-k) % (n // a)): v}


# ---------------------------------------------------------------------------
# orbit complexes

class OrbitComplex:
    """Chain complex in the Burnside category.

    ``cells[k]`` is a list of orbit types; ``diff[k][i]`` maps a target index
    j in degree k-1 to the span from cell (k, i) to cell (k-1, j).
    """

    def __init__(self, n, cells, diff, labels=None):
        self.n = n
        self.cells = {k: list(v) for k, v in cells.items() if v}
        self.diff = {k: {i: dict(t) for i, t in v.items()} for k, v in diff.items()}
        self.labels = labels or {k: [(k, i) for i in range(len(v))] for k, v in self.cells.items()}

    def degrees(self):
        return sorted(self.cells)

    def ncells(self):
        return sum(len(v) for v in self.cells.values())

    def orbit(self, k, i):
        return self.cells[k][i]

    def boundary(self, k, i):
        return self.diff.get(k, {}).get(i, {})

    def check(self):
        """d o d = 0 as spans."""
        n = self.n
        for k in self.degrees():
            if k - 1 not in self.cells or k - 2 not in self.cells:
                continue
            for i, tg in self.diff.get(k, {}).items():
                acc = {}
                a = self.cells[k][i]
                for j, s in tg.items():
                    b = self.cells[k - 1][j]
                    for l, t in self.boundary(k - 1, j).items():
                        e = self.cells[k - 2][l]
                        acc.setdefault(l, {})
                        acc[l] = span_add(acc[l], span_compose(n, a, b, e, s, t))
                if any(acc.values()):
                    return False
        return True

    def evaluate(self, m):
        """The complex of abelian groups obtained by applying m."""
        terms, diffs, offs = _evaluated_layout(self, m)
        for k in self.degrees():
            if k - 1 not in self.cells:
                continue
            mat = zeros(terms[k - 1].ngens, terms[k].ngens)
            for i, tg in self.diff.get(k, {}).items():
                a = self.cells[k][i]
                for j, s in tg.items():
                    b = self.cells[k - 1][j]
                    blk = span_matrix(m, a, b, s)
                    r0, c0 = offs[k - 1][j], offs[k][i]
                    for x, row in enumerate(blk):
                        for y, v in enumerate(row):
                            if v:
                                mat[r0 + x][c0 + y] += v
            diffs[k] = mat
        return IntComplex(terms, diffs, check=False)

    def sparse_evaluate(self, m):
        """Sparse form {k: {col: {row: value}}} with basis sizes per degree."""
        sizes, offs = {}, {}
        for k in self.degrees():
            o, lst = 0, []
            for a in self.cells[k]:
                lst.append(o)
                o += m.ngens(a)
            offs[k] = lst
            sizes[k] = o
        cols = {}
        for k in self.degrees():
            if k - 1 not in self.cells:
                continue
            ck = {}
            for i, tg in self.diff.get(k, {}).items():
                a = self.cells[k][i]
                for j, s in tg.items():
                    b = self.cells[k - 1][j]
                    blk = span_matrix(m, a, b, s)
                    r0, c0 = offs[k - 1][j], offs[k][i]
                    for x, row in enumerate(blk):
                        for y, v in enumerate(row):
                            if v:
                                col = ck.setdefault(c0 + y, {})
                                col[r0 + x] = col.get(r0 + x, 0) + v
            cols[k] = ck
        return sizes, offs, cols

    def shift(self, t):
        return OrbitComplex(self.n, {k + t: v for k, v in self.cells.items()},
                            {k + t: v for k, v in self.diff.items()},
                            {k + t: v for k, v in self.labels.items()})

    def __repr__(self):
        return "OrbitComplex(C_%d: %s)" % (self.n, ", ".join(
            "%d:%s" % (k, self.cells[k]) for k in self.degrees()))


def _evaluated_layout(cx, m):
    terms, offs = {}, {}
    for k in cx.degrees():
        groups = [m.level(a) for a in cx.cells[k]]
        o, lst = 0, []
        for g in groups:
            lst.append(o)
            o += g.ngens
        offs[k] = lst
        rels = []
        for g, off in zip(groups, lst):
            for r in g.relations:
                rels.append([0] * off + list(r) + [0] * (o - off - g.ngens))
        terms[k] = FgAbGroup(o, rels)
    return terms, {}, offs


def point_complex(n, a=None):
    """The orbit G/C_a (default G/G) in degree 0."""
    a = n if a is None else a
    return OrbitComplex(n, {0: [a]}, {}, {0: [("pt", a)]})


def tensor_complexes(x, y):
    """x (x) y with the Leibniz sign on the second factor."""
    n = x.n
    cells, labels, index = {}, {}, {}
    for p in x.degrees():
        for q in y.degrees():
            k = p + q
            lst = cells.setdefault(k, [])
            lab = labels.setdefault(k, [])
            for i, a in enumerate(x.cells[p]):
                for j, b in enumerate(y.cells[q]):
                    for r in range(gcd(n // a, n // b)):
                        index[(p, i, q, j, r)] = len(lst)
                        lst.append(gcd(a, b))
                        lab.append((x.labels[p][i], y.labels[q][j], r))
    diff = {}
    for p in x.degrees():
        for q in y.degrees():
            k = p + q
            dk = diff.setdefault(k, {})
            for i, a in enumerate(x.cells[p]):
                for j, b in enumerate(y.cells[q]):
                    # d e_i x f_j
                    for i2, s in x.boundary(p, i).items():
                        a2 = x.cells[p - 1][i2]
                        for (r, r2), sp in span_tensor(n, a, b, a2, b, s, span_id(b)).items():
                            src = index[(p, i, q, j, r)]
                            tgt = index[(p - 1, i2, q, j, r2)]
                            ent = dk.setdefault(src, {})
                            ent[tgt] = span_add(ent.get(tgt, {}), sp)
                    sign = -1 if p % 2 else 1
                    for j2, s in y.boundary(q, j).items():
                        b2 = y.cells[q - 1][j2]
                        for (r, r2), sp in span_tensor(n, a, b, a, b2, span_id(a), s).items():
                            src = index[(p, i, q, j, r)]
                            tgt = index[(p, i, q - 1, j2, r2)]
                            ent = dk.setdefault(src, {})
                            ent[tgt] = span_add(ent.get(tgt, {}), sp, sign)
    for k in diff:
        for i in list(diff[k]):
            diff[k][i] = {j: s for j, s in diff[k][i].items() if s}
    out = OrbitComplex(n, cells, diff, labels)
    out.index = index
    return out


def dual_complex(x):
    """Hom(x, A): cells in degree -k, spans reversed."""
    n = x.n
    cells = {-k: list(v) for k, v in x.cells.items()}
    labels = {-k: [("dual", l) for l in v] for k, v in x.labels.items()}
    diff = {}
    for k in x.degrees():
        for i, tg in x.diff.get(k, {}).items():
            a = x.cells[k][i]
            for j, s in tg.items():
                b = x.cells[k - 1][j]
                diff.setdefault(-(k - 1), {}).setdefault(j, {})[i] = span_reverse(n, a, b, s)
    return OrbitComplex(n, cells, diff, labels)


def tensor_with_orbit(x, d):
    """x (x) G/C_d, with the orbit index map."""
    return tensor_complexes(x, point_complex(x.n, d))


def orbit_chain_map(x, d, e, s):
    """The chain map id (x) s : x (x) G/d -> x (x) G/e for a span s : G/d -> G/e.

    Returns (source complex, target complex, {k: {src: {tgt: span}}}).
    """
    n = x.n
    src = tensor_with_orbit(x, d)
    tgt = tensor_with_orbit(x, e)
    maps = {}
    for k in x.degrees():
        mk = maps.setdefault(k, {})
        for i, a in enumerate(x.cells[k]):
            for (r, r2), sp in span_tensor(n, a, d, a, e, span_id(a), s).items():
                si = src.index[(k, i, 0, 0, r)]
                ti = tgt.index[(k, i, 0, 0, r2)]
                mk.setdefault(si, {})[ti] = sp
    return src, tgt, maps


# ---------------------------------------------------------------------------
# elimination

def reduce_complex(x):
    """Cancel invertible spans (+-translations) until none are left.

    The result is chain homotopy equivalent to x in the Burnside category, so
    it computes the same homology for every coefficient functor.
    """
    n = x.n
    cells = {k: list(v) for k, v in x.cells.items()}
    alive = {k: set(range(len(v))) for k, v in cells.items()}
    out = {k: {i: dict(t) for i, t in v.items()} for k, v in x.diff.items()}
    inc = {}
    for k, v in out.items():
        for i, t in v.items():
            for j, s in t.items():
                inc.setdefault(k, {}).setdefault(j, {})[i] = s

    def set_entry(k, i, j, s):
        if s:
            out.setdefault(k, {}).setdefault(i, {})[j] = s
            inc.setdefault(k, {}).setdefault(j, {})[i] = s
        else:
            out.get(k, {}).get(i, {}).pop(j, None)
            inc.get(k, {}).get(j, {}).pop(i, None)

    def remove_cell(k, i):
        alive[k].discard(i)
        for j in list(out.get(k, {}).get(i, {})):
            inc[k][j].pop(i, None)
        out.get(k, {}).pop(i, None)
        for j in list(inc.get(k + 1, {}).get(i, {})):
            out[k + 1][j].pop(i, None)
        inc.get(k + 1, {}).pop(i, None)

    changed = True
    while changed:
        changed = False
        for k in sorted(out):
            if k - 1 not in cells:
                continue
            while True:
                pivot = None
                for i in sorted(out.get(k, {})):
                    if i not in alive[k]:
                        continue
                    for j, s in sorted(out[k][i].items()):
                        inv = span_is_unit(n, cells[k][i], cells[k - 1][j], s)
                        if inv is not None:
                            pivot = (i, j, inv)
                            break
                    if pivot:
                        break
                if pivot is None:
                    break
                i, j, inv = pivot
                a = cells[k][i]
                rows = {q: s for q, s in out[k][i].items() if q != j}
                colsrc = {p: s for p, s in inc[k].get(j, {}).items() if p != i}
                for p, b in colsrc.items():
                    bp = cells[k][p]
                    core = span_compose(n, bp, a, a, b, inv)
                    for q, c in rows.items():
                        cq = cells[k - 1][q]
                        delta = span_compose(n, bp, a, cq, core, c)
                        cur = out.get(k, {}).get(p, {}).get(q, {})
                        set_entry(k, p, q, span_add(cur, delta, -1))
                remove_cell(k, i)
                remove_cell(k - 1, j)
                changed = True
    # re-index
    newidx = {k: {} for k in cells}
    ncells, nlabels = {}, {}
    for k in sorted(cells):
        for i in sorted(alive[k]):
            newidx[k][i] = len(ncells.setdefault(k, []))
            ncells[k].append(cells[k][i])
            nlabels.setdefault(k, []).append(x.labels[k][i])
    ndiff = {}
    for k, v in out.items():
        for i, t in v.items():
            if i not in alive.get(k, ()):
                continue
            for j, s in t.items():
                if s and j in alive.get(k - 1, ()):
                    ndiff.setdefault(k, {}).setdefault(newidx[k][i], {})[newidx[k - 1][j]] = s
    return OrbitComplex(n, ncells, ndiff, nlabels)


class ReducedChains:
    """A complex of free abelian groups after cancelling unit entries.

    Keeps the elimination log, so chains can be moved between the original
    complex and the reduced one (``push`` and ``pull``).
    """

    def __init__(self, sizes, cols):
        self.sizes = dict(sizes)
        col = {k: {i: dict(c) for i, c in v.items()} for k, v in cols.items()}
        row = {}
        for k, v in col.items():
            for i, c in v.items():
                for j, x in c.items():
                    row.setdefault(k, {}).setdefault(j, {})[i] = x
        alive = {k: set(range(s)) for k, s in sizes.items()}
        log = []

        def setv(k, i, j, x):
            if x:
                col.setdefault(k, {}).setdefault(i, {})[j] = x
                row.setdefault(k, {}).setdefault(j, {})[i] = x
            else:
                col.get(k, {}).get(i, {}).pop(j, None)
                row.get(k, {}).get(j, {}).pop(i, None)

        def kill(k, i):
            alive[k].discard(i)
            for j in list(col.get(k, {}).get(i, {})):
                row[k][j].pop(i, None)
            col.get(k, {}).pop(i, None)
            for j in list(row.get(k + 1, {}).get(i, {})):
                col[k + 1][j].pop(i, None)
            row.get(k + 1, {}).pop(i, None)

        for k in sorted(col):
            ck = col[k]
            queue = sorted(ck)
            while queue:
                i = queue.pop()
                if i not in alive[k] or i not in ck:
                    continue
                piv = None
                for j, x in ck[i].items():
                    if x in (1, -1):
                        if piv is None or len(row[k][j]) < len(row[k][piv[0]]):
                            piv = (j, x)
                if piv is None:
                    continue
                j, u = piv
                b = {p: x for p, x in row[k][j].items() if p != i}
                c = {q: x for q, x in ck[i].items() if q != j}
                log.append((k, i, j, u, b, c))
                for p, bx in b.items():
                    f = u * bx
                    cp = ck.get(p, {})
                    for q, cx in c.items():
                        setv(k, p, q, cp.get(q, 0) - cx * f)
                        cp = ck.get(p, {})
                kill(k, i)
                kill(k - 1, j)
                queue.extend(p for p in b if p in alive[k])
        self.log = log
        self.alive = alive
        self.index = {k: {i: t for t, i in enumerate(sorted(v))} for k, v in alive.items()}
        self.cols = col

    def complex(self):
        terms, diffs = {}, {}
        for k, idx in self.index.items():
            terms[k] = FgAbGroup.free(len(idx))
        for k, idx in self.index.items():
            if k - 1 not in self.index or not idx or not self.index[k - 1]:
                continue
            tidx = self.index[k - 1]
            m = zeros(len(tidx), len(idx))
            for i, c in self.cols.get(k, {}).items():
                if i not in idx:
                    continue
                for j, x in c.items():
                    if j in tidx:
                        m[tidx[j]][idx[i]] += x
            diffs[k] = m
        return IntComplex(terms, diffs, check=False)

    def push(self, k, vec):
        """Original chain in degree k (dict or list) -> reduced coordinates."""
        x = dict(vec) if isinstance(vec, dict) else {i: v for i, v in enumerate(vec) if v}
        for (kk, i, j, u, b, c) in self.log:
            if kk == k + 1:
                xj = x.pop(j, 0)
                if xj:
                    for q, cx in c.items():
                        x[q] = x.get(q, 0) - cx * u * xj
            elif kk == k:
                x.pop(i, None)
        idx = self.index.get(k, {})
        out = [0] * len(idx)
        for i, v in x.items():
            if v:
                out[idx[i]] += v
        return out

    def pull(self, k, vec):
        """Reduced chain in degree k -> chain of the original complex."""
        idx = self.index.get(k, {})
        y = {}
        for i, t in idx.items():
            if vec[t]:
                y[i] = vec[t]
        for (kk, i, j, u, b, c) in reversed(self.log):
            if kk == k:
                s = sum(bx * y.get(p, 0) for p, bx in b.items())
                if s:
                    y[i] = -u * s
        return y


# ---------------------------------------------------------------------------
# sphere models

def _kernel(n, factor):
    if factor[0] == "s":
        return n // 2
    return gcd(factor[1], n)


def _expand(v):
    """Irreducible summands with multiplicity as factors ('L', s) / ('s',)."""
    if not v.is_actual():
        raise SphereError("%s is not an actual representation" % v)
    out = []
    for item in v.irreducibles():
        if item[0] == "L":
            out.extend([("L", item[1])] * item[2])
        else:
            out.extend([("s",)] * item[1])
    return out


def factor_complex(n, factor):
    """3-cell model of S^{lambda^s} or 2-cell model of S^sigma."""
    return chain_sphere(n, [factor])


def chain_sphere(n, factors):
    """Minimal model of S^V when the kernels of the factors decrease.

    Every new factor with kernel K is attached along the fundamental cycle of
    the previous top cell, sum over G/K_top of det(g^i) g^i; a lambda^s
    factor contributes a second cell with boundary det(g^t) g^t - 1, t the
    inverse of s/|K| modulo n/|K|.  det(g) = (-1)^(number of sigma's so far).
    """
    cells = {0: [n]}
    labels = {0: [("e", 0)]}
    diff = {}
    top_deg, top_orb = 0, n
    nsig = 0
    for pos, f in enumerate(factors):
        k = _kernel(n, f)
        if top_orb % k:
            raise SphereError("kernels do not decrease along the chain")
        nk, nt = n // k, n // top_orb
        att = {}
        for i in range(nt):
            sgn = -1 if (nsig * i) % 2 else 1
            key = (k, i % nt)
            att[key] = att.get(key, 0) + sgn
        att = {kk: v for kk, v in att.items() if v}
        d1 = top_deg + 1
        cells.setdefault(d1, []).append(k)
        labels.setdefault(d1, []).append((f, 1, pos))
        diff.setdefault(d1, {})[len(cells[d1]) - 1] = {len(cells[top_deg]) - 1: att} if att else {}
        if f[0] == "s":
            nsig += 1
            top_deg, top_orb = d1, k
            continue
        s = f[1]
        t = pow((s // k) % nk, -1, nk)
        sgn = -1 if (nsig * t) % 2 else 1
        ent = {}
        ent[(k, t % nk)] = ent.get((k, t % nk), 0) + sgn
        ent[(k, 0)] = ent.get((k, 0), 0) - 1
        ent = {kk: v for kk, v in ent.items() if v}
        d2 = d1 + 1
        cells.setdefault(d2, []).append(k)
        labels.setdefault(d2, []).append((f, 2, pos))
        diff.setdefault(d2, {})[len(cells[d2]) - 1] = {len(cells[d1]) - 1: ent} if ent else {}
        top_deg, top_orb = d2, k
    return OrbitComplex(n, cells, diff, labels)


def _factor_order(n, factors):
    """Increasing stabilizer divisor, ties by exponent (sigma last)."""
    return sorted(factors, key=lambda f: (_kernel(n, f), f[1] if f[0] == "L" else n))


def sphere_complex(v, model="product"):
    """Cellular chains of S^V.

    ``model="product"`` smashes the 3-cell (resp. 2-cell) models of all
    irreducible summands; ``model="chain"`` groups the summands into chains of
    decreasing kernels, uses the minimal model on each chain and cancels
    invertible entries after every smash factor.
    """
    n = v.n
    factors = _expand(v)
    if model == "product":
        out = point_complex(n)
        for f in _factor_order(n, factors):
            out = tensor_complexes(out, factor_complex(n, f))
        return out
    if model != "chain":
        raise SphereError("unknown model %r" % model)
    chains = []
    for f in sorted(factors, key=lambda f: (-_kernel(n, f), f[1] if f[0] == "L" else 0)):
        k = _kernel(n, f)
        for ch in chains:
            if _kernel(n, ch[-1]) % k == 0:
                ch.append(f)
                break
        else:
            chains.append([f])
    out = point_complex(n)
    for ch in chains:
        out = reduce_complex(tensor_complexes(out, chain_sphere(n, ch))) \
            if out.ncells() > 1 else chain_sphere(n, ch)
    return out


def grading_complex(alpha, model="chain"):
    """C(S^V) (x) D C(S^W) shifted so that H_l computes pi_{l+W-V}.

    Returns (complex, l) with alpha = l + W - V.
    """
    b, c = positive_split(alpha)
    ell = b.trivial - c.trivial
    w = ROElement(alpha.ctx, 0, b.sigma, b.lam)
    v = ROElement(alpha.ctx, 0, c.sigma, c.lam)
    cv = sphere_complex(v, model)
    if w.is_zero():
        return cv, ell
    dw = dual_complex(sphere_complex(w, model))
    out = tensor_complexes(cv, dw)
    if model == "chain":
        out = reduce_complex(out)
    return out, ell


# ---------------------------------------------------------------------------
# homotopy

class GradedPiece:
    def __init__(self, grading, value, generators=None, method="oracle"):
        self.grading = grading
        self.value = value
        self.generators = generators or []
        self.method = method

    def canonical(self):
        return self.value.canonical()

    def to_json(self):
        r, t = self.canonical()
        return {"grading": str(self.grading), "method": self.method,
                "group": {"rank": r, "torsion": list(t)},
                "generators": [str(g) for g in self.generators]}

    def __repr__(self):
        return "GradedPiece(%s: %s)" % (self.grading, self.value)


def _all_free(m, cx):
    return all(not any(any(r) for r in m.level(a).relations)
               for k in cx.degrees() for a in cx.cells[k])


class _LevelHomology:
    """Homology of cx evaluated at m in a fixed degree, with chain access."""

    def __init__(self, cx, m, ell):
        self.cx = cx
        self.m = m
        self.ell = ell
        if _all_free(m, cx):
            sizes, offs, cols = cx.sparse_evaluate(m)
            self.red = ReducedChains(sizes, cols)
            self.cc = self.red.complex()
            self.offs = offs
        else:
            self.red = None
            self.cc = cx.evaluate(m)
        self.data = homology_data(self.cc, ell)

    @property
    def group(self):
        return self.data.group

    def rep(self, j):
        """Original-coordinate chain (dict) representing generator j."""
        vec = [row[j] for row in self.data.reps]
        if self.red is None:
            return {i: v for i, v in enumerate(vec) if v}
        return self.red.pull(self.ell, vec)

    def coords(self, chain):
        if self.red is None:
            size = self.cc.term(self.ell).ngens
            vec = [0] * size
            for i, v in chain.items():
                vec[i] += v
        else:
            vec = self.red.push(self.ell, chain)
        return self.data.coords(vec)


def homotopy_group(alpha, m, model="chain"):
    """pi_alpha(HM) at level G/G."""
    if alpha.n != m.n:
        raise SphereError("grading and coefficients over different groups")
    cx, ell = grading_complex(alpha, model)
    h = _LevelHomology(cx, m, ell)
    gens = [_format_chain(cx, m, ell, h.rep(j)) for j in range(h.group.ngens)]
    return GradedPiece(alpha, h.group, gens)


def _format_chain(cx, m, k, chain):
    """A chain in degree k as a sum of (level generator) * e^k_i."""
    offs = _offsets(m, cx, k)
    burnside = m.name == "A"
    parts = []
    for idx in sorted(chain):
        c = chain[idx]
        if not c:
            continue
        i = _cell_of(offs, idx)
        a = cx.cells[k][i]
        j = idx - offs[i]
        if burnside:
            e = divisors(a)[j]
            g = "1" if e == a else "[C%d/C%d]" % (a, e)
        else:
            g = "x%d" % j if m.ngens(a) > 1 else ""
        cell = "e%d_%d" % (k, i)
        term = cell if g in ("", "1") else "%s*%s" % (g, cell)
        parts.append((c, term))
    if not parts:
        return "0"
    out = ""
    for t, (c, term) in enumerate(parts):
        body = term if abs(c) == 1 else "%d%s" % (abs(c), term)
        out += (("-" if c < 0 else "") if t == 0 else (" - " if c < 0 else " + ")) + body
    return out


def homology_complex(alpha, m, model="chain"):
    cx, ell = grading_complex(alpha, model)
    return cx.evaluate(m), ell


def hom_bicomplex(alpha, m):
    """The double complex with (i, j) = (cells of S^V in degree i) x (duals of
    cells of S^W in degree -j), evaluated at m; its total homology in degree
    l computes pi_{l+W-V}(HM)."""
    b, c = positive_split(alpha)
    ell = b.trivial - c.trivial
    w = ROElement(alpha.ctx, 0, b.sigma, b.lam)
    v = ROElement(alpha.ctx, 0, c.sigma, c.lam)
    cv = sphere_complex(v, "chain")
    dw = dual_complex(sphere_complex(w, "chain"))
    prod = tensor_complexes(cv, dw)
    n = alpha.n
    terms, dh, dv = {}, {}, {}
    # group product cells by (p, q)
    blocks = {}
    for (p, i, q, j, r), idx in prod.index.items():
        blocks.setdefault((p, q), []).append(idx)
    for key in blocks:
        blocks[key].sort()
    pos = {}
    for (p, q), idxs in blocks.items():
        o = 0
        for idx in idxs:
            pos[(p + q, idx)] = ((p, q), o)
            o += m.ngens(prod.cells[p + q][idx])
        terms[(p, q)] = FgAbGroup.free(o)
    for (p, q), idxs in blocks.items():
        k = p + q
        for idx in idxs:
            a = prod.cells[k][idx]
            c0 = pos[(k, idx)][1]
            for tgt, s in prod.boundary(k, idx).items():
                b2 = prod.cells[k - 1][tgt]
                (tp, tq), r0 = pos[(k - 1, tgt)]
                blk = span_matrix(m, a, b2, s)
                if (tp, tq) == (p - 1, q):
                    store, sign = dh, 1
                else:
                    store, sign = dv, (-1) ** p
                mat = store.setdefault((p, q), zeros(terms[(tp, tq)].ngens, terms[(p, q)].ngens))
                for x, row in enumerate(blk):
                    for y, val in enumerate(row):
                        if val:
                            mat[r0 + x][c0 + y] += sign * val
    return IntBicomplex(terms, dh, dv), ell


def _chain_map_apply(m, src_cx, tgt_cx, maps, k, chain, src_offs=None):
    """Apply a symbolic chain map (per-cell spans) to an evaluated chain."""
    so = _offsets(m, src_cx, k)
    to = _offsets(m, tgt_cx, k)
    out = {}
    by_cell = {}
    for i, v in chain.items():
        cell = _cell_of(so, i)
        by_cell.setdefault(cell, {})[i - so[cell]] = v
    for cell, vec in by_cell.items():
        a = src_cx.cells[k][cell]
        x = [vec.get(t, 0) for t in range(m.ngens(a))]
        for tcell, s in maps.get(k, {}).get(cell, {}).items():
            b = tgt_cx.cells[k][tcell]
            y = mat_vec(span_matrix(m, a, b, s), x)
            for t, val in enumerate(y):
                if val:
                    out[to[tcell] + t] = out.get(to[tcell] + t, 0) + val
    return out


def _offsets(m, cx, k):
    o, lst = 0, []
    for a in cx.cells.get(k, []):
        lst.append(o)
        o += m.ngens(a)
    lst.append(o)
    return lst


def _cell_of(offs, i):
    lo, hi = 0, len(offs) - 2
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if offs[mid] <= i:
            lo = mid
        else:
            hi = mid - 1
    return lo


def homotopy_mackey(alpha, m, model="chain"):
    """The Mackey functor pi_alpha(HM): level d is H_l of C (x) G/C_d."""
    n = alpha.n
    ctx = CyclicGroupCtx(n)
    cx, ell = grading_complex(alpha, model)
    lv = {}
    for d in ctx.divisors:
        lc = tensor_with_orbit(cx, d)
        lv[d] = (lc, _LevelHomology(lc, m, ell))

    def induced(d, e, s):
        src, tgt, maps = orbit_chain_map(cx, d, e, s)
        hs, ht = lv[d][1], lv[e][1]
        cols = []
        for j in range(hs.group.ngens):
            chain = hs.rep(j)
            img = _chain_map_apply(m, lv[d][0], lv[e][0], maps, ell, chain)
            cols.append(ht.coords(img))
        if not ht.group.ngens:
            return []
        return transpose(cols, ht.group.ngens) if cols else zeros(ht.group.ngens, 0)

    levels = {d: lv[d][1].group for d in ctx.divisors}
    res, tr, weyl = {}, {}, {}
    for d in ctx.divisors:
        if levels[d].ngens:
            weyl[d] = induced(d, d, span_translate(n, d, 1))
        for p in ctx.primes:
            if d % p:
                continue
            e = d // p
            tr[(d, p)] = induced(e, d, {(e, 0): 1})
            res[(d, p)] = induced(d, e, {(e, 0): 1})
    return MackeyFunctor(ctx, levels, res, tr, weyl, name="pi_{%s}" % alpha)


def twist_by_ro_zero(alpha, m):
    """pi_{alpha_div}(HM) box A[tau(alpha_0)] for A-type coefficients."""
    from .mackey import box, tau_burnside
    from .ro import divisor_decompose, tau_of
    a0, div = divisor_decompose(alpha)
    base = homotopy_mackey(div, m)
    if a0.is_zero() or m.name in ("Z", "Z*"):
        return base
    return box(base, tau_burnside(tau_of(a0)))


# ---------------------------------------------------------------------------
# classes

class ClassExpr:
    """Monomial in a- and u-classes with its degree in RO(G)."""

    def __init__(self, ctx, factors, coeff=None):
        self.ctx = ctx
        self.factors = dict(factors)
        self.coeff = coeff

    def degree(self):
        n = self.ctx.n
        deg = ROElement(self.ctx)
        for (kind, rep), e in self.factors.items():
            r = _rep_element(self.ctx, rep)
            if kind == "a":
                deg = deg - r * e
            else:
                deg = deg + (ROElement(self.ctx, 2) - r) * e
        return deg

    def __mul__(self, other):
        f = dict(self.factors)
        for k, v in other.factors.items():
            f[k] = f.get(k, 0) + v
        return ClassExpr(self.ctx, f)

    def __repr__(self):
        parts = []
        for (kind, rep), e in sorted(self.factors.items(), key=lambda kv: str(kv[0])):
            name = "%s_%s" % (kind, "sigma" if rep == "s" else "L%d" % rep)
            parts.append(name if e == 1 else "%s^%d" % (name, e))
        return "*".join(parts) or "1"


def _rep_element(ctx, rep):
    if rep == "s":
        return ROElement(ctx, 0, 1)
    return ROElement.lambda_(ctx, rep)


def euler_class(v):
    """a_V with its representative: 1 in A(G) on the 0-cell of S^V."""
    ctx = v.ctx
    factors = {}
    for item in v.irreducibles():
        if item[0] == "L":
            factors[("a", item[1])] = item[2]
        else:
            factors[("a", "s")] = item[1]
    expr = ClassExpr(ctx, factors)
    expr.complex = sphere_complex(v, "chain")
    expr.cycle = (0, {0: [1 if e == ctx.n else 0 for e in divisors(ctx.n)]})
    return expr


def orientation_class(xi):
    """u_xi: 1 in A(ker xi) on the top cell of S^xi."""
    ctx = xi.ctx
    try:
        s = _single_line(xi)
    except SphereError:
        raise SphereError("orientation classes exist only for nontrivial complex lines")
    k = gcd(s, ctx.n)
    expr = ClassExpr(ctx, {("u", s): 1})
    expr.complex = factor_complex(ctx.n, ("L", s))
    expr.cycle = (2, {0: [1 if e == k else 0 for e in divisors(k)]})
    return expr


def burnside_action(cx, x, k):
    """Multiplication by x in A(G) on A-coefficient chains of degree k.

    Returns the matrix on the evaluated term (cells in order).
    """
    from .burnside import BurnsideElement, multiply, restrict
    ctx = x.ctx
    blocks = []
    for a in cx.cells.get(k, []):
        r = restrict(x, a)
        size = len(divisors(a))
        mat = zeros(size, size)
        for j, e in enumerate(divisors(a)):
            y = multiply(r, BurnsideElement.orbit(ctx, a, e))
            for i, v in enumerate(y.coords):
                mat[i][j] = v
        blocks.append(mat)
    from .exactlin import block_diag
    return block_diag(blocks)


def class_in_homology(cx, m, k, cell_values):
    """Homology coordinates of the chain given per cell (dict cell -> vector)."""
    h = _LevelHomology(cx, m, k)
    offs = _offsets(m, cx, k)
    chain = {}
    for cell, vec in cell_values.items():
        for t, v in enumerate(vec):
            if v:
                chain[offs[cell] + t] = v
    return h.group, h.coords(chain)


def verify_gold_relation(xi1, xi2):
    """Check [H1/H1nH2] u_1 a_2 = +-t [H2/H1nH2] u_2 a_1 in H_2(S^{xi1+xi2}; A).

    Both sides are the cycles tr^{H1}_{H1nH2}(1) on e^2 x e^0 and
    tr^{H2}_{H1nH2}(1) on e^0 x e^2; the relation holds if their difference
    (for one sign) is the boundary of an explicit 3-chain, returned as the
    witness.  For xi_i = lambda^{d_i w_i} with d_i | n and w_i a unit, the
    factor t is w_2 / w_1 mod n / lcm(d_1, d_2); t = 1 for divisor powers.
    """
    from .mackey import burnside_functor
    n = xi1.n
    s1 = _single_line(xi1)
    s2 = _single_line(xi2)
    h1, h2 = gcd(s1, n), gcd(s2, n)
    h = gcd(h1, h2)
    c1 = factor_complex(n, ("L", s1))
    c2 = factor_complex(n, ("L", s2))
    prod = tensor_complexes(c1, c2)
    A = burnside_functor(n)
    ev = prod.evaluate(A)
    offs2 = _offsets(A, prod, 2)
    z1 = [0] * offs2[-1]
    z2 = [0] * offs2[-1]
    i1 = prod.index[(2, 0, 0, 0, 0)]
    i2 = prod.index[(0, 0, 2, 0, 0)]
    z1[offs2[i1] + divisors(h1).index(h)] = 1
    z2[offs2[i2] + divisors(h2).index(h)] = 1
    d2 = ev.diff(2).matrix
    for z in (z1, z2):
        if d2 and any(mat_vec(d2, z)):
            raise SphereError("class representative is not a cycle")
    d3 = ev.diff(3).matrix
    t = _gold_factor(n, s1, s2)
    for eps in (1, -1):
        target = [a - eps * t * b for a, b in zip(z1, z2)]
        if not any(target):
            return True, {"sign": eps, "factor": t, "witness": []}
        if not d3:
            continue
        sol = solve(d3, target, len(d3[0]))
        if sol is not None:
            return True, {"sign": eps, "factor": t, "witness": sol}
    return False, {}


def _gold_factor(n, s1, s2):
    d1, d2 = gcd(s1, n), gcd(s2, n)
    mod = n // (d1 * d2 // gcd(d1, d2))
    if mod == 1:
        return 1
    w1, w2 = (s1 // d1) % mod, (s2 // d2) % mod
    return (w2 * pow(w1, -1, mod)) % mod


def _single_line(xi):
    irr = xi.irreducibles()
    if irr == [("s", 2)] and not xi.trivial:
        return xi.n // 2
    if len(irr) != 1 or irr[0][0] != "L" or irr[0][2] != 1 or xi.trivial:
        raise SphereError("expected a nontrivial complex line, got %s" % xi)
    return irr[0][1]
