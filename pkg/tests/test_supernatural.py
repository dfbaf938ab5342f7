import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from collatz_lab.errors import NotEven, PlusUndefined, PreconditionFailed
from collatz_lab.supernatural import (
    DEFAULT_INJECTION,
    INF,
    ONE,
    TWO_INF,
    Supernatural,
    check_plus_incompatibility,
    sn_collatz_step,
    sn_divides,
    sn_halve,
    sn_mul,
    sn_oplus,
    sn_partition,
    check_two_inf_fixed_point,
)

S = Supernatural.parse
N = Supernatural.from_int

PRIMES = [2, 3, 5, 7, 11, 13]


@st.composite
def supernaturals(draw):
    factors = {}
    for p in draw(st.lists(st.sampled_from(PRIMES), max_size=4, unique=True)):
        factors[p] = draw(st.one_of(st.integers(1, 6), st.just(INF)))
    return Supernatural.from_map(factors)


class TestMul:
    def test_examples(self):
        assert sn_mul(TWO_INF, N(8)) == TWO_INF
        assert sn_mul(N(6), N(5)) == N(30)
        assert sn_mul(sn_mul(TWO_INF, S("3^inf")), N(6)) == S("2^inf*3^inf")

    @given(supernaturals(), supernaturals(), supernaturals())
    def test_monoid(self, a, b, c):
        assert sn_mul(a, b) == sn_mul(b, a)
        assert sn_mul(sn_mul(a, b), c) == sn_mul(a, sn_mul(b, c))
        assert sn_mul(a, ONE) == a

    def test_agrees_with_integers(self, rng):
        for _ in range(500):
            a, b = rng.randint(1, 10**6), rng.randint(1, 10**6)
            assert sn_mul(N(a), N(b)).to_int() == a * b


class TestDivides:
    def test_examples(self):
        assert sn_divides(N(6), S("2^inf*3"))
        assert not sn_divides(TWO_INF, N(2**99))
        assert sn_divides(TWO_INF, S("2^inf*3^inf"))
        assert sn_divides(S("2^inf*3^inf"), Supernatural.omega_of([2, 3, 5]))

    @given(supernaturals(), supernaturals(), supernaturals())
    def test_partial_order_and_monotone(self, a, b, c):
        assert sn_divides(a, a)
        if sn_divides(a, b) and sn_divides(b, a):
            assert a == b
        if sn_divides(a, b) and sn_divides(b, c):
            assert sn_divides(a, c)
        if sn_divides(a, b):
            assert sn_divides(sn_mul(a, c), sn_mul(b, c))

    def test_agrees_with_integers(self, rng):
        for _ in range(500):
            a, b = rng.randint(1, 2000), rng.randint(1, 10**6)
            assert sn_divides(N(a), N(b)) == (b % a == 0)


class TestPartition:
    def test_examples(self):
        assert sn_partition(S("2^inf*3^2*5")) == ({2}, {3, 5})
        assert sn_partition(N(12)) == (set(), {2, 3})
        assert sn_partition(Supernatural.omega_of([2, 3])) == ({2, 3}, set())


class TestHalve:
    def test_examples(self):
        assert sn_halve(S("2^inf*5")) == S("2^inf*5")
        assert sn_halve(N(8)) == N(4)
        with pytest.raises(NotEven):
            sn_halve(S("3^inf"))

    def test_agrees_with_integers(self, rng):
        for _ in range(300):
            n = 2 * rng.randint(1, 10**6)
            assert sn_halve(N(n)).to_int() == n // 2


class TestOplus:
    def test_naturals(self):
        assert sn_oplus(N(3), N(4)) == N(7)

    def test_extensionality_random(self, rng):
        for _ in range(2000):
            a, b = rng.randint(1, 10**6), rng.randint(1, 10**6)
            assert sn_oplus(N(a), N(b)).to_int() == a + b

    def test_undefined_off_naturals(self):
        with pytest.raises(PlusUndefined):
            sn_oplus(TWO_INF, ONE)
        with pytest.raises(PlusUndefined):
            sn_oplus(TWO_INF, TWO_INF)

    @given(supernaturals(), supernaturals())
    def test_commutative_where_defined(self, a, b):
        try:
            ab = sn_oplus(a, b)
        except PlusUndefined:
            with pytest.raises(PlusUndefined):
                sn_oplus(b, a)
        else:
            assert sn_oplus(b, a) == ab

    @given(st.integers(1, 10**9), st.integers(1, 10**9), st.integers(1, 10**9))
    def test_associative_on_decodable_fragment(self, x, y, z):
        a, b, c = N(x), N(y), N(z)
        assert sn_oplus(sn_oplus(a, b), c) == sn_oplus(a, sn_oplus(b, c))

    @given(supernaturals())
    def test_injection_round_trip(self, x):
        assert DEFAULT_INJECTION.decode(DEFAULT_INJECTION.encode(x)) == x

    def test_decode_rejects_foreign_vectors(self):
        from fractions import Fraction

        assert DEFAULT_INJECTION.decode({1: Fraction(1, 2)}) is None
        assert DEFAULT_INJECTION.decode({2: Fraction(1)}) is None
        assert DEFAULT_INJECTION.decode({1: Fraction(1), 9: Fraction(1)}) is None


class TestCollatzStep:
    def test_examples(self):
        assert sn_collatz_step(S("2^inf*5")) == S("2^inf*5")
        assert sn_collatz_step(N(7)) == N(22)
        with pytest.raises(PlusUndefined):
            sn_collatz_step(S("3^inf"))

    def test_agrees_with_integers(self):
        for k in range(1, 3000):
            want = k // 2 if k % 2 == 0 else 3 * k + 1
            assert sn_collatz_step(N(k)).to_int() == want


class TestFixedPoint:
    def test_two_inf(self):
        v = check_two_inf_fixed_point(TWO_INF, 100)
        assert v.stationary and v.never_reaches_one

    def test_multiples(self, rng):
        for _ in range(100):
            extra = {p: rng.choice([0, 1, 2, 5, INF]) for p in PRIMES[1:]}
            n = sn_mul(TWO_INF, Supernatural.from_map(extra))
            assert check_two_inf_fixed_point(n, 20).never_reaches_one

    def test_precondition(self):
        with pytest.raises(PreconditionFailed):
            check_two_inf_fixed_point(N(8))


def test_remark():
    rep = check_plus_incompatibility()
    assert rep.two_times_2inf_is_2inf
    assert not rep.three_times_2inf_is_2inf
    assert rep.three_times_2inf_exponent_of_3 == 1
    assert rep.no_repeated_sum_plus


class TestParsing:
    def test_round_trip(self):
        for text in ["2^inf*5", "2^inf*3^2*5", "12", "1", "7^inf"]:
            x = S(text)
            assert S(str(x)) == x
            assert Supernatural.from_json(x.to_json()) == x

    def test_json_shape(self):
        assert S("2^inf*5").to_json() == {"factors": [{"p": "2", "e": "inf"}, {"p": "5", "e": "1"}]}

    @pytest.mark.parametrize("bad", ["", "4^inf", "2^x", "abc", "0"])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            S(bad)

    def test_non_prime_key(self):
        with pytest.raises(ValueError):
            Supernatural(((4, 1),))
