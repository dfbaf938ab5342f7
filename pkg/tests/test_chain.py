from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from collatz_lab import flow
from collatz_lab.chain import (
    MOD3_CHAIN,
    PARITY_CHAIN,
    Chain2,
    DistVec2,
    derive_collatz_chains,
    distribution_after,
    is_fixed_point,
    limit_distribution,
    mod3_closed_form,
    parity_closed_form,
    power_by_multiplication,
    power_closed_form,
)
from collatz_lab.errors import InvalidChain, NoMixingLimit

probs = st.fractions(min_value=0, max_value=1, max_denominator=50)


@st.composite
def chains(draw):
    a, b, i = draw(probs), draw(probs), draw(probs)
    return Chain2(a, 1 - a, b, 1 - b, i, 1 - i)


class TestPower:
    def test_first_power(self):
        assert power_closed_form(PARITY_CHAIN, 1) == ((F(1, 2), F(1, 2)), (F(1), F(0)))

    def test_identity_at_zero(self):
        assert power_closed_form(MOD3_CHAIN, 0) == ((1, 0), (0, 1))

    @pytest.mark.parametrize("n", range(1, 20))
    def test_parity_entry(self, n):
        assert power_closed_form(PARITY_CHAIN, n)[0][0] == F(2, 3) + F((-1) ** n, 3 * 2**n)

    @pytest.mark.parametrize("n", range(1, 20))
    def test_mod3_entry(self, n):
        assert power_closed_form(MOD3_CHAIN, n)[0][0] == F(3, 5) + F((-1) ** n, 5 * 2 ** (2 * n - 1))

    @given(chains(), st.integers(0, 64))
    def test_closed_form_equals_product(self, c, n):
        p = power_closed_form(c, n)
        assert p == power_by_multiplication(c, n)
        for row in p:
            assert sum(row) == 1 and all(0 <= x <= 1 for x in row)

    def test_identity_chain_fallback(self):
        c = Chain2(1, 0, 0, 1, F(1, 4), F(3, 4))
        assert power_closed_form(c, 7) == ((1, 0), (0, 1))


class TestDistribution:
    def test_examples(self):
        assert distribution_after(PARITY_CHAIN, 1) == DistVec2(F(3, 4), F(1, 4))
        assert distribution_after(MOD3_CHAIN, 2) == DistVec2(F(7, 12), F(5, 12))
        assert distribution_after(MOD3_CHAIN, 0) == MOD3_CHAIN.init

    @given(chains(), st.integers(0, 40))
    def test_sums_to_one(self, c, n):
        d = distribution_after(c, n)
        assert d.m0 + d.m1 == 1


class TestLimit:
    def test_derived_chains(self):
        assert limit_distribution(PARITY_CHAIN) == DistVec2(F(2, 3), F(1, 3))
        assert limit_distribution(MOD3_CHAIN) == DistVec2(F(3, 5), F(2, 5))

    @pytest.mark.parametrize("rows", [((1, 0), (0, 1)), ((0, 1), (1, 0))])
    def test_no_mixing(self, rows):
        with pytest.raises(NoMixingLimit):
            limit_distribution(Chain2.from_rows(*rows, (F(1, 2), F(1, 2))))

    @given(chains())
    def test_fixed_point(self, c):
        if abs(c.eigen_ratio) < 1:
            assert is_fixed_point(c, limit_distribution(c))


class TestClosedForms:
    @pytest.mark.parametrize(
        "n, want", [(1, (F(3, 4), F(1, 4))), (2, (F(5, 8), F(3, 8))), (3, (F(11, 16), F(5, 16)))]
    )
    def test_parity_values(self, n, want):
        assert tuple(parity_closed_form(n)) == want

    @pytest.mark.parametrize("n, want", [(1, (F(2, 3), F(1, 3))), (2, (F(7, 12), F(5, 12)))])
    def test_mod3_values(self, n, want):
        assert tuple(mod3_closed_form(n)) == want

    def test_mod3_undefined_at_zero(self):
        with pytest.raises(ValueError):
            mod3_closed_form(0)

    def test_mod3_tends_to_limit(self):
        gap = abs(mod3_closed_form(30).m0 - F(3, 5))
        assert gap < F(1, 10**17)

    @pytest.mark.parametrize("n", range(0, 65))
    def test_against_chain(self, n):
        assert parity_closed_form(n) == distribution_after(PARITY_CHAIN, n)
        if n:
            assert mod3_closed_form(n) == distribution_after(MOD3_CHAIN, n)

    @pytest.mark.parametrize("n", range(0, 17))
    def test_parity_model_is_exact(self, n):
        assert parity_closed_form(n).m0 == flow.residue_distribution(flow.system_after(n), 2)[0]

    def test_mod3_model_is_not_exact(self):
        exact = flow.residue_distribution(flow.system_after(2), 3)[1]
        assert exact == F(1, 3)
        assert mod3_closed_form(2).m0 - exact == F(1, 4)


class TestDerivation:
    def test_derived_chains(self):
        parity, mod3 = derive_collatz_chains()
        assert (parity.p00, parity.p01, parity.p10, parity.p11) == (F(1, 2), F(1, 2), 1, 0)
        assert (mod3.p00, mod3.p01, mod3.p10, mod3.p11) == (F(1, 2), F(1, 2), F(3, 4), F(1, 4))
        assert (mod3.init0, mod3.init1) == (F(1, 3), F(2, 3))
        assert (parity.init0, parity.init1) == (F(1, 2), F(1, 2))


class TestValidation:
    def test_rows_must_sum(self):
        with pytest.raises(InvalidChain):
            Chain2(F(1, 2), F(1, 3), 1, 0, 1, 0)

    def test_entries_in_range(self):
        with pytest.raises(InvalidChain):
            Chain2(F(3, 2), F(-1, 2), 1, 0, 1, 0)

    def test_json_round_trip(self):
        assert Chain2.from_json(MOD3_CHAIN.to_json()) == MOD3_CHAIN
        assert MOD3_CHAIN.to_json()["matrix"][1][0] == {"num": "3", "den": "4"}
