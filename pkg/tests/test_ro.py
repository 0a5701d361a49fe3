import random
from math import gcd

import pytest

from equicyclic.burnside import CyclicGroupCtx, divisors
from equicyclic.ro import (ParseError, RepError, ROElement, TauFunction, divisor_decompose,
                           fixed_dims, format_grading, in_ro_zero, parse_grading, tau_of)


def _brute_fixed_dims(a):
    """Count real dimensions of the C_d-fixed part character-free: lambda^s is
    fixed by C_d iff d divides s (as a residue mod n)."""
    n = a.n
    out = {}
    for d in divisors(n):
        v = a.trivial
        if a.sigma_total() and (n // d) % 2 == 0:
            v += a.sigma_total()
        for s, c in a.lam.items():
            if n % 2 == 0 and s == n // 2:
                continue
            if (s * (n // d)) % n == 0:  # generator of C_d is n/d
                v += 2 * c
        out[d] = v
    return out


def test_fixed_dims_examples():
    assert fixed_dims(ROElement(4, lam={1: 1})) == {1: 2, 2: 0, 4: 0}
    assert fixed_dims(ROElement(2, sigma=1)) == {1: 1, 2: 0}
    for p in (2, 3):
        n = p ** 3
        a = ROElement(n, lam={1: 2, p: -2})
        assert [fixed_dims(a)[p ** i] for i in range(4)] == [0, -4, 0, 0]


def test_fixed_dims_random():
    rng = random.Random(8)
    for n in (4, 6, 8, 12, 15, 30):
        for _ in range(20):
            lam = {rng.randint(1, n - 1): rng.randint(-3, 3) for _ in range(3)}
            sig = rng.randint(-2, 2) if n % 2 == 0 else 0
            a = ROElement(n, rng.randint(-3, 3), sig, lam)
            assert fixed_dims(a) == _brute_fixed_dims(a)


def test_ro_zero():
    for n in (5, 12):
        for k in range(1, n):
            if gcd(k, n) == 1:
                assert in_ro_zero(ROElement.lambda_(n, 1) - ROElement.lambda_(n, k))
    assert in_ro_zero(ROElement(6))
    assert not in_ro_zero(ROElement(15, lam={1: 1, 3: -1}))


def test_divisor_decompose():
    a = ROElement(15, lam={2: 1, 4: -1})
    assert divisor_decompose(a) == (a, ROElement(15))
    b = ROElement(12, lam={4: 1})
    assert divisor_decompose(b) == (ROElement(12), b)
    for n, s in ((12, 8), (12, 10), (15, 9), (9, 6)):
        a = ROElement(n, lam={s: 1})
        a0, div = divisor_decompose(a)
        g = gcd(s, n)
        assert div == ROElement(n, lam={g: 1})
        assert a0 == a - div and in_ro_zero(a0)


def test_tau():
    n = 12
    for d in divisors(n)[:-1]:
        m = n // d
        for s in range(1, m):
            for t in range(1, m):
                if gcd(s, m) == 1 and gcd(t, m) == 1:
                    a = ROElement.lambda_(n, d * t) - ROElement.lambda_(n, d * s)
                    tau = tau_of(a)
                    assert tau[d] % m in ((s * pow(t, -1, m)) % m, (-s * pow(t, -1, m)) % m)
    t0 = tau_of(ROElement(n))
    assert all(t0[d] == 1 for d in divisors(n))
    t1 = tau_of(parse_grading(12, "L1 - L5"))
    assert t1[1] % 12 in (5, 7)
    with pytest.raises(RepError):
        tau_of(ROElement(12, lam={1: 1}))


def test_tau_function_algebra():
    t = TauFunction(12, {1: 5, 2: 5, 3: 3, 4: 1, 6: 1})
    assert t.is_invertible()
    assert (t * t.inverse()).equivalent(TauFunction(12, {}))
    assert not TauFunction(12, {1: 2}).is_invertible()


def test_parse_and_format():
    a = parse_grading(27, "4 - L1 - L3")
    assert a == ROElement(27, 4, 0, {1: -1, 3: -1})
    assert format_grading(a) == "4 - L1 - L3"
    assert parse_grading(12, "L13") == ROElement(12, lam={1: 1})
    assert parse_grading(6, "L3") == ROElement(6, sigma=2)
    assert parse_grading(4, "2 + s - 2L1") == ROElement(4, 2, 1, {1: -2})
    for bad, pos in (("2 + * L1", 4), ("L1 L2", 3)):
        with pytest.raises(ParseError) as e:
            parse_grading(12, bad)
        assert e.value.position == pos
        assert e.value.caret().splitlines()[1] == " " * pos + "^"
    with pytest.raises(ParseError):
        parse_grading(9, "s")


def test_restrict_and_json():
    a = ROElement(12, 1, 1, {1: 2, 4: -1})
    r = a.restrict(6)
    assert fixed_dims(r) == {d: fixed_dims(a)[d] for d in divisors(6)}
    assert ROElement.from_json(a.to_json()) == a
    assert ROElement(CyclicGroupCtx(4), sigma=3).sigma == 1
