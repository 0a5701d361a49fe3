import json
import random

import pytest

from equicyclic.burnside import divisors
from equicyclic.exactlin import FgAbGroup
from equicyclic.mackey import (MackeyError, MackeyFunctor, MackeyMap, NotTauShaped,
                               ai_boxtimes_zic, box, box_reference, boxtimes, bracket_functor,
                               burnside_functor, canonicalize, check_axioms, constant_functor,
                               direct_sum_functors, find_isomorphism, invariants, iso_as_tau,
                               isomorphic, lewis_ascii, lewis_dot, restrict_to_subgroup,
                               standard, tau_burnside)
from equicyclic.ro import TauFunction
from equicyclic.suites import random_tau


@pytest.mark.parametrize("n", [6, 8, 12, 30])
def test_standard_functors_satisfy_axioms(n):
    for m in (burnside_functor(n), constant_functor(n), constant_functor(n, dual=True),
              bracket_functor(n), bracket_functor(n, 3)):
        assert check_axioms(m).ok, (n, m.name)


def test_corrupted_transfer_fails_axiom_4():
    a = burnside_functor(6)
    tr = dict(a.tr)
    tr[(6, 2)] = [[2 * x for x in row] for row in tr[(6, 2)]]
    bad = MackeyFunctor(6, a.levels, a.res, tr, a.weyl)
    report = check_axioms(bad)
    assert not report.ok
    assert any(f["axiom"] == 4 for f in report.failures)
    assert all({"levels", "generator", "detail"} <= set(f) for f in report.failures)


def test_constant_functor_maps():
    z = constant_functor(12)
    assert z.res_map(12, 1) == [[1]]
    assert z.tr_map(1, 12) == [[12]]


@pytest.mark.parametrize("n,d", [(6, 2), (15, 5), (30, 6)])
def test_boxtimes_splittings(n, d):
    assert isomorphic(boxtimes(burnside_functor(d), burnside_functor(n // d)), burnside_functor(n))
    assert isomorphic(boxtimes(constant_functor(d), constant_functor(n // d)), constant_functor(n))
    with pytest.raises(MackeyError):
        boxtimes(burnside_functor(2), burnside_functor(4))


def test_tau_trivial_is_burnside():
    for n in (6, 9, 12):
        assert isomorphic(tau_burnside(TauFunction(n, {})), burnside_functor(n))
        assert iso_as_tau(burnside_functor(n)).equivalent(TauFunction(n, {}))
    with pytest.raises(NotTauShaped):
        iso_as_tau(constant_functor(6))


@pytest.mark.parametrize("n", [4, 6, 9, 12])
def test_tau_functors_axioms_and_recovery(n):
    rng = random.Random(n)
    for _ in range(5):
        t = random_tau(n, rng)
        m = tau_burnside(t)
        assert check_axioms(m).ok
        assert iso_as_tau(m).equivalent(t)


def test_box_unit_and_reference():
    for n in (4, 6):
        a = burnside_functor(n)
        for m in (constant_functor(n), constant_functor(n, True), bracket_functor(n),
                  tau_burnside(TauFunction(n, {1: n - 1}))):
            assert isomorphic(box(a, m), m)
            assert isomorphic(box(m, a), m)
            assert invariants(box(m, m)) == invariants(box_reference(m, m))


def test_box_of_tau_functors_multiplies():
    rng = random.Random(3)
    for n in (6, 9):
        for _ in range(4):
            t1, t2 = random_tau(n, rng), random_tau(n, rng)
            prod = box(tau_burnside(t1), tau_burnside(t2))
            assert iso_as_tau(prod).equivalent(t1 * t2)


def test_constant_box_constant():
    # Z box Z = Z for cyclic groups: the unit of Z-modules
    for n in (4, 6, 9):
        z = constant_functor(n)
        assert isomorphic(box(z, z), z)


def test_ai_boxtimes_ses_ranks():
    # 0 -> <Z>_p x A_{I-p} x Z_{I^c} -> A_I x Z_{I^c} -> A_{I-p} x Z_{I^c+p} -> 0
    n, primes = 30, (2, 3)
    mid = ai_boxtimes_zic(n, primes)
    right = ai_boxtimes_zic(n, (3,))
    left = boxtimes(bracket_functor(2), ai_boxtimes_zic(15, (3,)))
    assert check_axioms(mid).ok and check_axioms(left).ok
    for d in divisors(n):
        assert left.level(d).rank + right.level(d).rank == mid.level(d).rank


def test_direct_sum_restrict_json():
    m = direct_sum_functors(constant_functor(6), bracket_functor(6, 2))
    assert m.level(6).canonical() == (1, (2,))
    assert m.level(1).canonical() == (1, ())
    r = restrict_to_subgroup(m, 3)
    assert r.n == 3 and check_axioms(r).ok
    back = MackeyFunctor.from_json(json.loads(json.dumps(m.to_json())))
    assert isomorphic(back, m)
    assert "C_6" in lewis_ascii(m)
    assert lewis_dot(m).startswith("digraph")


def test_find_isomorphism_reports_maps():
    a = tau_burnside(TauFunction(6, {1: 5}))
    b = canonicalize(a)
    iso = find_isomorphism(a, b)
    assert iso is not None
    assert isinstance(iso, MackeyMap) and iso.is_iso()
    assert find_isomorphism(constant_functor(6), constant_functor(6, True)) is None


def test_standard_names():
    assert isomorphic(standard("A", 6), burnside_functor(6))
    assert standard("brackZmodp", 6, 5).level(6).canonical() == (0, (5,))
    with pytest.raises(MackeyError):
        standard("nope", 6)


def test_mackey_map_naturality():
    z, zs = constant_functor(4), constant_functor(4, dual=True)
    # Z* -> Z multiplying level d by d is natural
    f = MackeyMap(zs, z, {1: [[1]], 2: [[2]], 4: [[4]]})
    assert not f.is_iso()
    with pytest.raises(MackeyError):
        MackeyMap(zs, z, {1: [[1]], 2: [[1]], 4: [[1]]})
