import pytest

from equicyclic.burnside import (BurnsideElement, BurnsideError, BurnsideIdeal, CyclicGroupCtx,
                                 alpha, divisors, factorization, from_marks, marks, multiply,
                                 res_ideal_matches_alphas, restrict, transfer)


def _orbits(ctx, d=None):
    d = ctx.n if d is None else d
    return [BurnsideElement.orbit(ctx, d, e) for e in divisors(d)]


def _brute_fixed(d, e, f):
    """|(C_d/C_e)^{C_f}| by listing cosets of Z/d."""
    cosets = {frozenset((x + k * (d // e)) % d for k in range(e)) for x in range(d)}
    # C_f acts by adding multiples of d/f
    shift = d // f  # generator of C_f acting on Z/d
    return sum(1 for c in cosets if frozenset((y + shift) % d for y in c) == c)


def test_alpha_p_squared():
    for p in (2, 3, 5):
        ctx = CyclicGroupCtx(p)
        a = alpha(ctx, p)
        assert a * a == p * a


def test_unit():
    ctx = CyclicGroupCtx(12)
    one = BurnsideElement.one(ctx)
    for x in _orbits(ctx):
        assert one * x == x


def test_c12_product():
    ctx = CyclicGroupCtx(12)
    x = BurnsideElement.orbit(ctx, 12, 2) * BurnsideElement.orbit(ctx, 12, 3)
    assert x == BurnsideElement.orbit(ctx, 12, 1, 2)
    mx = marks(x)
    m2 = marks(BurnsideElement.orbit(ctx, 12, 2))
    m3 = marks(BurnsideElement.orbit(ctx, 12, 3))
    assert mx == [a * b for a, b in zip(m2, m3)]


@pytest.mark.parametrize("n", [4, 6, 9, 12])
def test_marks_against_coset_count(n):
    ctx = CyclicGroupCtx(n)
    for e in divisors(n):
        v = marks(BurnsideElement.orbit(ctx, n, e))
        assert v == [_brute_fixed(n, e, f) for f in divisors(n)]


def test_marks_small():
    for p in (2, 3):
        ctx = CyclicGroupCtx(p)
        assert marks(BurnsideElement.orbit(ctx, p, 1)) == [p, 0]
        assert marks(BurnsideElement.one(ctx)) == [1, 1]
        ctx2 = CyclicGroupCtx(p * p)
        assert marks(alpha(ctx2, p * p)) == [p * p, 0, 0]


def test_from_marks_roundtrip_and_error():
    ctx = CyclicGroupCtx(6)
    for x in _orbits(ctx):
        assert from_marks(ctx, 6, marks(x)) == x
    with pytest.raises(BurnsideError):
        from_marks(ctx, 6, [1, 0, 0, 0])


def test_restriction_examples():
    p, q = 3, 5
    ctx = CyclicGroupCtx(p * q)
    assert restrict(alpha(ctx, q), p) == q * BurnsideElement.one(ctx, p)
    x = BurnsideElement.orbit(ctx, 15, 5) + 2 * BurnsideElement.one(ctx)
    assert restrict(x, 15) == x
    for p, m in ((2, 3), (3, 2)):
        ctx = CyclicGroupCtx(p ** m)
        one_e = BurnsideElement.one(ctx, 1)
        got = restrict(transfer(one_e, p ** m), p)
        assert got == BurnsideElement.orbit(ctx, p, 1, p ** (m - 1))
    with pytest.raises(BurnsideError):
        restrict(BurnsideElement.one(ctx), 5)


def test_transfer_examples():
    ctx = CyclicGroupCtx(7)
    assert transfer(BurnsideElement.one(ctx, 1), 7) == alpha(ctx, 7)
    assert transfer(BurnsideElement.zero(ctx, 1), 7).is_zero()


@pytest.mark.parametrize("n", [6, 8, 12, 30])
def test_frobenius_reciprocity(n):
    ctx = CyclicGroupCtx(n)
    for h in divisors(n):
        for x in _orbits(ctx, h):
            for y in _orbits(ctx):
                assert transfer(x, n) * y == transfer(x * restrict(y, h), n)


def test_ideals():
    ctx = CyclicGroupCtx(15)
    for p in (3, 5):
        assert res_ideal_matches_alphas(ctx, 15 // p)
    assert BurnsideIdeal(ctx, "tr", 15).rank() == 4
    ctx = CyclicGroupCtx(9)
    ideal = BurnsideIdeal(ctx, "res", 1)
    assert ideal.rank() == 2
    for g in ideal.generators():
        assert marks(g)[0] == 0
    assert ideal.contains(alpha(ctx, 3) - 3 * BurnsideElement.one(ctx))
    assert not ideal.contains(BurnsideElement.one(ctx))
    with pytest.raises(BurnsideError):
        BurnsideIdeal(ctx, "res", 2)


def test_rank_formula():
    for n in range(1, 37):
        expect = 1
        for _, e in factorization(n):
            expect *= e + 1
        assert CyclicGroupCtx(n).rank() == expect


def test_json_roundtrip():
    ctx = CyclicGroupCtx(12)
    x = BurnsideElement.orbit(ctx, 12, 2, 3) - BurnsideElement.one(ctx)
    assert BurnsideElement.from_json(ctx, x.to_json()) == x
