from math import gcd

import pytest

from equicyclic.burnside import divisors
from equicyclic.mackey import (burnside_functor, check_axioms, constant_functor, iso_as_tau,
                               isomorphic)
from equicyclic.ro import ROElement, parse_grading, tau_of
from equicyclic.spheres import (SphereError, euler_class, homotopy_group, homotopy_mackey,
                                orientation_class, sphere_complex, twist_by_ro_zero,
                                verify_gold_relation)


def G(n, text):
    return parse_grading(n, text)


def test_point_complex():
    cx = sphere_complex(ROElement(6))
    assert cx.degrees() == [0]
    assert cx.cells[0] == [6]


@pytest.mark.parametrize("p,m", [(2, 2), (3, 2), (2, 3)])
def test_sphere_lambda_lambda_p(p, m):
    n = p ** m
    v = G(n, "L1 + L%d" % p)
    cx = sphere_complex(v, "chain")
    # A(G) in degree 0, A(C_p) in degrees 1, 2 and A(e) in degrees 3, 4
    assert cx.cells == {0: [n], 1: [p], 2: [p], 3: [1], 4: [1]}
    a = burnside_functor(n)
    got = [homotopy_group(k - v, a).canonical() for k in range(5)]
    assert got[0] == (len(divisors(n)) - 2, ())  # A(G)/tr A(C_p)
    assert got[1] == (0, ()) and got[3] == (0, ())
    assert got[2] == (1, (p ** (m - 1),))  # A(C_p)/(p^{m-1}[C_p/e])
    assert got[4] == (1, ())
    prod = sphere_complex(v, "product")
    for k in range(5):
        assert homotopy_group(k - v, a, model="product").canonical() == got[k]
    assert prod.ncells() >= cx.ncells()


def test_orientation_degree_pieces():
    n = 6
    a = burnside_functor(n)
    for s in (1, 2, 3):
        k = gcd(s, n)  # ker(lambda^s) = C_k
        assert homotopy_group(G(n, "2 - L%d" % s), a).canonical() == (len(divisors(k)), ())


def test_sigma_examples():
    for n in (2, 4, 8):
        z = constant_functor(n)
        assert homotopy_group(G(n, "-s"), z).canonical() == (0, (2,))
        assert homotopy_group(G(n, "s - 1"), z).canonical() == (0, ())
    # with Burnside coefficients the same grading carries 2-torsion over C_4
    assert homotopy_group(G(4, "s - 1"), burnside_functor(4)).canonical() == (0, (2,))


def test_top_piece_with_sigma_vanishes():
    for n in (4, 6, 8):
        v = G(n, "L1 + s")
        assert homotopy_group(3 - v, burnside_functor(n)).canonical() == (0, ())


def test_negative_example_c_p_cubed():
    for p in (2, 3):
        n = p ** 3
        a = G(n, "2L1 - 2L%d" % p)
        assert homotopy_group(a, constant_functor(n)).canonical() == (1, (p,))


def test_zero_grading_mackey_is_burnside():
    for n in (6, 9):
        assert isomorphic(homotopy_mackey(ROElement(n), burnside_functor(n)), burnside_functor(n))


@pytest.mark.parametrize("text", ["L1 - L2", "L1 - L4 + L3 - L6"])
def test_ro_zero_mackey(text):
    a = G(15, text)
    m = homotopy_mackey(a, burnside_functor(15))
    assert check_axioms(m).ok
    assert iso_as_tau(m).equivalent(tau_of(a))
    assert isomorphic(twist_by_ro_zero(a, burnside_functor(15)), m)


def test_twist_trivial_for_divisor_grading():
    a = G(12, "2 - L2 - L3")
    assert isomorphic(twist_by_ro_zero(a, burnside_functor(12)),
                      homotopy_mackey(a, burnside_functor(12)))


def test_euler_and_orientation_classes():
    e = euler_class(G(6, "L1 + s"))
    assert e.degree() == -G(6, "L1 + s")
    u = orientation_class(G(6, "L2"))
    assert u.degree() == G(6, "2 - L2")
    for bad in ("s", "1", "2L1"):
        with pytest.raises(SphereError):
            orientation_class(G(4, bad))


def test_gold_relations():
    ok, w = verify_gold_relation(G(6, "L1"), G(6, "L3"))
    assert ok and w["factor"] == 1
    for p in (2, 3):
        ok, _ = verify_gold_relation(G(p * p, "L1"), G(p * p, "L%d" % p))
        assert ok
    ok, _ = verify_gold_relation(G(9, "L2"), G(9, "L2"))
    assert ok
    ok, w = verify_gold_relation(G(12, "L1"), G(12, "L5"))
    assert ok and w["factor"] % 12 in (5, 7)
