import itertools
import random

import pytest

from equicyclic.exactlin import (ChainMap, FgAbGroup, GroupMap, IntBicomplex, IntComplex,
                                 LinAlgError, determinant, homology, invariant_factors,
                                 kernel_basis, map_on_homology, mat_mul, rank,
                                 smith_normal_form, solve, tensor, total_homology)


def _brute_det(m):
    n = len(m)
    tot = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        prod = 1
        for i in range(n):
            prod *= m[i][perm[i]]
        tot += sign * prod
    return tot


def _brute_minor_gcds(m):
    """d_k = gcd of k x k minors; invariant factors are d_k / d_{k-1}."""
    from math import gcd
    r, c = len(m), len(m[0])
    out, prev = [], 1
    for k in range(1, min(r, c) + 1):
        g = 0
        for rows in itertools.combinations(range(r), k):
            for cols in itertools.combinations(range(c), k):
                g = gcd(g, _brute_det([[m[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def test_snf_diagonal_pair():
    assert invariant_factors([[2, 0], [0, 3]]) == [1, 6]


def test_snf_zero():
    diag, _, _ = smith_normal_form([[0]])
    assert diag == [0]
    assert invariant_factors([[0]]) == []


@pytest.mark.parametrize("p,m", [(2, 2), (3, 2), (2, 3)])
def test_snf_sphere_boundary(p, m):
    assert invariant_factors([[p ** (m - 1)]]) == [p ** (m - 1)]


def test_snf_random_against_minors():
    rng = random.Random(11)
    for _ in range(60):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        a = [[rng.randint(-6, 6) for _ in range(c)] for _ in range(r)]
        nonzero = [d for d in invariant_factors(a) if d]
        assert nonzero == _brute_minor_gcds(a)
        diag, left, right = smith_normal_form(a, want_inverses=False)
        prod = mat_mul(mat_mul(left, a), right)
        for i in range(r):
            for j in range(c):
                assert prod[i][j] == (diag[i] if i == j and i < len(diag) else 0)
        assert rank(a) == len(nonzero)


def test_determinant_matches_permutation_expansion():
    rng = random.Random(4)
    for n in range(1, 5):
        a = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        assert determinant(a) == _brute_det(a)


def test_solve_and_kernel():
    a = [[1, 2, 3], [0, 2, 4]]
    x = solve(a, [6, 6])
    assert [sum(r[j] * x[j] for j in range(3)) for r in a] == [6, 6]
    assert solve([[2]], [1]) is None
    ker = kernel_basis(a)
    v = [row[0] for row in ker]
    assert len(ker[0]) == 1 and any(v)
    assert all(sum(r[j] * v[j] for j in range(3)) == 0 for r in a)


def test_group_canonical():
    g = FgAbGroup(3, [[2, 0, 0], [0, 4, 6]])
    assert g.canonical() == (1, (2, 2))
    assert FgAbGroup.cyclic(12).canonical() == (0, (12,))
    assert FgAbGroup.cyclic(1).is_zero
    assert tensor(FgAbGroup.cyclic(4), FgAbGroup.cyclic(6)).canonical() == (0, (2,))
    assert tensor(FgAbGroup.free(2), FgAbGroup.cyclic(3)).canonical() == (0, (3, 3))


def test_group_map_kernel_cokernel():
    f = GroupMap(FgAbGroup.free(1), FgAbGroup.free(1), [[3]])
    assert f.cokernel().canonical() == (0, (3,))
    assert f.kernel().canonical() == (0, ())
    assert f.is_injective() and not f.is_surjective()
    with pytest.raises(LinAlgError):
        GroupMap(FgAbGroup.cyclic(2), FgAbGroup.free(1), [[1]])


def test_homology_single_term():
    c = IntComplex({0: FgAbGroup.free(1)}, {})
    assert homology(c, 0).canonical() == (1, ())
    assert homology(c, 5).canonical() == (0, ())


def _sphere_complex(p, m):
    # A(e) -> 0 -> A(e) -> A(C_p) -> 0 -> A(C_p) -> A(G) evaluated at G:
    # degree-2 piece is A(C_p)/(p^{m-1}[C_p/e]); use Z-ranks of Burnside rings.
    # A(C_p) has basis ([C_p/C_p], [C_p/e]); the boundary sends 1 to p^{m-1}[C_p/e].
    c = IntComplex({2: FgAbGroup.free(2), 3: FgAbGroup.free(1)}, {3: [[0], [p ** (m - 1)]]})
    return c


@pytest.mark.parametrize("p,m", [(2, 2), (3, 2), (3, 3)])
def test_sphere_example_degrees(p, m):
    c = _sphere_complex(p, m)
    assert homology(c, 2).canonical() == (1, (p ** (m - 1),))
    assert homology(c, 3).canonical() == (0, ())


def test_complex_rejects_nonzero_square():
    with pytest.raises(LinAlgError):
        IntComplex({0: FgAbGroup.free(1), 1: FgAbGroup.free(1), 2: FgAbGroup.free(1)},
                   {1: [[1]], 2: [[1]]})


def test_chain_map_rejected_with_square():
    c = IntComplex({0: FgAbGroup.free(1), 1: FgAbGroup.free(1)}, {1: [[2]]})
    with pytest.raises(LinAlgError, match="degree"):
        ChainMap(c, c, {0: [[1]], 1: [[0]]})
    f = ChainMap(c, c, {0: [[3]], 1: [[3]]})
    h = map_on_homology(f, 0)
    assert h.matrix == [[1]] or h.matrix == [[-1]]  # 3 acts as 1 on Z/2


def test_bicomplex_point_and_row():
    b = IntBicomplex({(0, 0): FgAbGroup.free(1)}, {}, {})
    assert total_homology(b, 0).canonical() == (1, ())
    row = IntBicomplex({(0, 0): FgAbGroup.free(1), (1, 0): FgAbGroup.free(1)}, {(1, 0): [[4]]}, {})
    c = IntComplex({0: FgAbGroup.free(1), 1: FgAbGroup.free(1)}, {1: [[4]]})
    for k in range(3):
        assert total_homology(row, k).canonical() == homology(c, k).canonical()


def test_bicomplex_square_commutes():
    b = IntBicomplex({(0, 0): FgAbGroup.free(1), (1, 0): FgAbGroup.free(1),
                      (0, 1): FgAbGroup.free(1), (1, 1): FgAbGroup.free(1)},
                     {(1, 0): [[1]], (1, 1): [[1]]}, {(0, 1): [[1]], (1, 1): [[1]]})
    for k in range(3):
        assert total_homology(b, k).canonical() == (0, ())
    with pytest.raises(LinAlgError):
        IntBicomplex({(0, 0): FgAbGroup.free(1), (1, 0): FgAbGroup.free(1),
                      (0, 1): FgAbGroup.free(1), (1, 1): FgAbGroup.free(1)},
                     {(1, 0): [[1]], (1, 1): [[2]]}, {(0, 1): [[1]], (1, 1): [[1]]})
