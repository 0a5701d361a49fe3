import pytest

from equicyclic import closedforms as cf
from equicyclic.burnside import divisors
from equicyclic.mackey import (box, burnside_functor, check_axioms, constant_functor,
                               invariants, isomorphic, tau_burnside)
from equicyclic.ro import ROElement, parse_grading, tau_of
from equicyclic.spheres import homotopy_group, twist_by_ro_zero


def G(n, text):
    return parse_grading(n, text)


# Oracle-derived values (cellular chains of representation spheres), frozen.
POSITIVE_Z = [
    (36, "2-L2-L3-L4", (0, (18,))),
    (12, "2-L1-L2-s", (0, (2,))),
    (12, "2-L1-L2", (0, (12,))),
    (8, "2-L1-L2-L4", (0, (4,))),
    (8, "4-L1-L2-L4", (0, (8,))),
    (9, "2-2L1-L3", (0, (9,))),
    (12, "2-L1-L4-L6", (0, (6,))),
    (12, "3-L1-L2-s", (0, ())),
]

POSITIVE_A = [
    (9, "4-L1-L3", (1, ())),
    (9, "2-L1-L3", (1, (3,))),
    (9, "-L1-L3", (1, ())),
    (8, "2-L1-L2", (1, (4,))),
    (8, "2-L1-L2-s", (0, (2, 2))),
    (15, "2-L1-L3", (1, (5,))),
    (15, "-L1-L3-L5", (1, ())),
    (6, "2-L1-L2-L3", (2, ())),
    (6, "4-L1-L2-L3", (0, (6,))),
]

NEGATIVE_Z = [
    (27, "2L1-2L3", (1, (3,))),
    (27, "4L1-2L3-2L9", (1, (3,))),
    (9, "-L1", (0, (9,))),
]


@pytest.mark.parametrize("n,text,expect", POSITIVE_Z)
def test_hz_positive_frozen(n, text, expect):
    assert cf.hz_positive_piece(G(n, text)).canonical() == expect
    assert cf.closedform_piece(G(n, text), "Z").canonical() == expect


@pytest.mark.parametrize("n,text,expect", POSITIVE_A)
def test_ha_positive_frozen(n, text, expect):
    assert cf.closedform_piece(G(n, text), "A").canonical() == expect


@pytest.mark.parametrize("n,text,expect", NEGATIVE_Z)
def test_negative_cone_frozen(n, text, expect):
    assert cf.negative_cone_piece(G(n, text)).canonical() == expect


def test_frozen_values_still_match_oracle():
    for n, text, expect in POSITIVE_Z[1:4] + NEGATIVE_Z:
        assert homotopy_group(G(n, text), constant_functor(n)).canonical() == expect
    for n, text, expect in POSITIVE_A[:5]:
        assert homotopy_group(G(n, text), burnside_functor(n)).canonical() == expect


def test_hz_top_and_single_line():
    assert cf.hz_positive_piece(G(12, "6-L2-L3-L4")).canonical() == (1, ())
    for d in divisors(12)[:-1]:
        assert cf.hz_positive_piece(G(12, "-L%d" % d)).canonical() == (0, (12 // d,))


def test_ha_examples():
    for p, m in ((2, 2), (3, 2), (2, 3)):
        n = p ** m
        v = G(n, "L1 + L%d" % p)
        assert cf.ha_positive_piece_primepower(-v).canonical() == (len(divisors(n)) - 2, ())
        assert cf.ha_positive_piece_primepower(2 - v).canonical() == (1, (p ** (m - 1),))
    assert cf.ha_positive_piece_primepower(G(8, "3-L1-s")).canonical() == (0, ())
    assert cf.ha_positive_piece_squarefree(ROElement(6)).canonical() == (4, ())
    with pytest.raises(cf.ClosedFormError):
        cf.ha_positive_piece_squarefree(G(12, "-L1"))


def test_cp_pieces():
    assert cf.cp_pm_div_piece(0, 0, 5).canonical() == (2, ())
    for p in (3, 5):
        for c1 in range(-2, 3):
            for c0 in range(-5, 6):
                got = cf.cp_pm_div_piece(c0, c1, p).canonical()
                want = homotopy_group(ROElement(p, c0, 0, {1: c1}), burnside_functor(p)).canonical()
                assert got == want, (p, c0, c1)


def test_chi_marks():
    for p, m in ((2, 3), (3, 3)):
        n = p ** m
        assert cf.chi_marks(ROElement(n), m) == [1] * (m + 1)
        for i in range(1, m + 1):
            # a_{lambda_i} / a_{lambda_{i-1}}, with lambda_m = 2
            lo = ROElement.lambda_(n, p ** (i - 1))
            hi = ROElement.lambda_(n, p ** i) if i < m else ROElement(n, 2)
            assert cf.chi_marks(lo - hi, m) == [p] * i + [0] + [1] * (m - i)


def test_negative_cone_small():
    assert cf.negative_cone_piece(ROElement(27)).canonical() == (1, ())
    for n in (2, 4, 8):
        assert cf.negative_cone_piece(G(n, "s-1")).canonical() == (0, ())
    with pytest.raises(cf.ClosedFormError):
        cf.negative_cone_piece(G(9, "2-L1"))


def test_out_of_cone_errors():
    with pytest.raises(cf.ClosedFormError, match="oracle"):
        cf.hz_positive_piece(G(12, "L1"))
    with pytest.raises(cf.ClosedFormError):
        cf.classify_many_zeros(G(15, "2-L1"))


def test_geometric_fixed_points_c12():
    g = cf.geometric_fixed_points(12)
    table = dict(g.table(8))
    assert table[0] == (1, ())
    assert all(table[k] == (0, ()) for k in (1, 3, 5, 7))
    assert table[2] == (0, (2, 6))
    e2 = cf.geo_spectral_sequence_e2(12, 8)
    assert all(e2.checks().values())
    for k in range(9):
        assert e2.assembled(k).canonical() == table[k]


def test_geometric_fixed_points_c6():
    assert dict(cf.geometric_fixed_points(6).table(4))[2] == (0, (6,))


# C_pq gradings with many zeros, one per case and subcase (n = 15, p = 3).
MANY_ZEROS = [
    ("L1-L2", 1, ""),
    ("L1", 2, "K"),
    ("-L1", 2, "C"),
    ("L1-L3", 3, "L2"),
    ("L2+L6-2L7", 3, "L1"),
    ("L1-L3-L5+2", 4, "N1"),
    ("L3+L5-L1-2", 4, "N2"),
    ("-2L1-2L3", 5, "A"),
    ("3L1-2L3", 5, "Agamma"),
    ("-3L1+L3", 5, "ZmodpA"),
    ("L1-L3-2+L5", 6, "U-"),
    ("2+3L1-3L3-L5", 6, "U+"),
    ("L3-L1+2-L5", 6, "V+"),
    ("2L3-2L1-2+L5", 6, "V-"),
]


@pytest.mark.parametrize("text,case,sub", MANY_ZEROS)
def test_many_zeros_against_oracle(text, case, sub):
    a = G(15, text)
    d = cf.classify_many_zeros(a)
    assert (d["case"], d["sub"]) == (case, sub)
    m = cf.cpq_many_zeros(a)
    assert check_axioms(m).ok
    assert isomorphic(m, twist_by_ro_zero(a, burnside_functor(15)))


def test_many_zeros_case_two_negative_is_cokernel():
    # pi_{-k lambda}(HA) = pi_{-lambda}(HA) = Coker(Z* -> A)
    m1 = cf.cpq_many_zeros(G(15, "-L1"))
    m3 = cf.cpq_many_zeros(G(15, "-3L1"))
    assert isomorphic(m1, m3)
    want = {15: (3, ()), 5: (1, ()), 3: (1, ()), 1: (0, ())}
    assert {d: m1.level(d).canonical() for d in divisors(15)} == want


def test_many_zeros_twist_is_box_with_tau():
    base = G(15, "L1-L3-L5+2")
    a0 = G(15, "L1-L2")
    lhs = cf.cpq_many_zeros(base + a0)
    rhs = box(cf.cpq_many_zeros(base), tau_burnside(tau_of(a0)))
    assert invariants(lhs) == invariants(rhs)
    assert isomorphic(lhs, rhs)


def test_bezout():
    for p, q in ((3, 5), (5, 7), (2, 3)):
        gp, gq = cf.bezout_pair(p, q)
        assert p * gp + q * gq == 1


def test_closedform_mackey_ro_zero():
    a = G(9, "L1-L2")
    assert isomorphic(cf.closedform_mackey(a), tau_burnside(tau_of(a)))
