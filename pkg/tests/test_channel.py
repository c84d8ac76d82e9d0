import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmcthermo.channel import (
    ChannelParams,
    capacity,
    mutual_information,
    mutual_information_entropies,
    mutual_information_small_c,
    output_weight,
    transition_matrix,
    transition_prob,
)
from mmcthermo.core_math import DomainError, jensen_gap

import oracle

MI_01_1_05 = 0.022439943439616459  # high-precision entropy difference
CH = ChannelParams(0.01, 0.1)


def channels():
    return st.tuples(st.floats(1e-7, 0.5), st.floats(1.0, 50.0)).filter(
        lambda t: t[0] * t[1] < 1
    ).map(lambda t: ChannelParams(t[0], t[0] * t[1]))


class TestParams:
    @pytest.mark.parametrize("a,b", [(0.0, 0.1), (0.2, 0.1), (0.1, 1.0), (-0.1, 0.5)])
    def test_invalid(self, a, b):
        with pytest.raises(DomainError):
            ChannelParams(a, b)

    def test_small_c_flag(self):
        assert ChannelParams(1e-4, 1e-3).is_small_c
        assert not CH.is_small_c
        assert ChannelParams(0.01, 0.1, small_c_threshold=0.2).is_small_c


class TestTransition:
    def test_values(self):
        assert transition_prob(CH, 0, 1) == 0.01
        assert transition_prob(CH, 1, 0) == 0.9
        assert transition_prob(CH, 0, 0) == 0.99
        assert transition_prob(CH, 1, 1) == 0.1

    def test_degenerate_is_input_independent(self):
        ch = ChannelParams(0.05, 0.05)
        assert transition_prob(ch, 0, 1) == transition_prob(ch, 1, 1) == 0.05

    @settings(max_examples=200)
    @given(channels())
    def test_rows_sum_to_one_exactly(self, ch):
        for x in (0, 1):
            assert transition_prob(ch, x, 0) + transition_prob(ch, x, 1) == 1.0
        assert np.all(transition_matrix(ch).sum(axis=1) == 1.0)

    def test_non_bits(self):
        with pytest.raises(DomainError):
            transition_prob(CH, 2, 0)


class TestOutputWeight:
    def test_values(self):
        assert output_weight(CH, 0.5) == pytest.approx(0.055, rel=1e-15)
        assert output_weight(CH, 1.0) == 0.01
        assert output_weight(CH, 0.9) == pytest.approx(0.019, rel=1e-15)


class TestMutualInformation:
    def test_frozen_value(self):
        assert mutual_information(CH, 0.5) == pytest.approx(MI_01_1_05, rel=1e-13)

    def test_matches_entropy_form(self):
        p = np.linspace(0, 1, 101)
        np.testing.assert_allclose(
            mutual_information(CH, p), mutual_information_entropies(CH, p), rtol=1e-12, atol=1e-17
        )

    def test_zero_cases(self):
        assert mutual_information(ChannelParams(0.05, 0.05), 0.3) == 0.0
        assert mutual_information(CH, 0.0) == 0.0
        assert mutual_information(CH, 1.0) == 0.0

    def test_tiny_fractions_against_oracle(self):
        # entropy-difference form cancels badly here
        for a, b, p in [(1e-6, 3e-6, 0.4), (1e-4, 1.0001e-4, 0.5), (1e-9, 1e-7, 0.7)]:
            ref = float(oracle.mi(a, b, p))
            assert mutual_information(ChannelParams(a, b), p) == pytest.approx(ref, rel=1e-9)

    @settings(max_examples=300, deadline=None)
    @given(channels(), st.floats(0, 1))
    def test_bounds(self, ch, p):
        i = mutual_information(ch, p)
        assert 0.0 <= i <= math.log(2)

    @settings(max_examples=100, deadline=None)
    @given(channels(), st.floats(0, 1))
    def test_against_oracle(self, ch, p):
        ref = float(oracle.mi(ch.c_low, ch.c_high, p))
        assert mutual_information(ch, p) == pytest.approx(ref, rel=1e-9, abs=1e-60)


class TestSmallC:
    def test_equals_jensen_gap(self):
        p = np.linspace(0, 1, 257)
        assert np.array_equal(mutual_information_small_c(CH, p), jensen_gap(0.01, 0.1, p))

    def test_value_below_exact(self):
        small = mutual_information_small_c(CH, 0.5)
        assert small == pytest.approx(0.021368109576588896, rel=1e-13)
        assert small < mutual_information(CH, 0.5)

    def test_tracks_exact_when_small(self):
        ch = ChannelParams(1e-4, 1e-3)
        exact, small = mutual_information(ch, 0.5), mutual_information_small_c(ch, 0.5)
        assert abs(exact - small) / exact <= 1e-2

    def test_degenerate(self):
        assert mutual_information_small_c(ChannelParams(0.02, 0.02), 0.4) == 0.0

    def test_strict_rejects_large_c(self):
        with pytest.raises(DomainError):
            mutual_information_small_c(CH, 0.5, strict=True)
        ch = ChannelParams(1e-4, 1e-3)
        assert mutual_information_small_c(ch, 0.5, strict=True) > 0


class TestCapacity:
    def test_degenerate(self):
        assert capacity(ChannelParams(0.05, 0.05)) == (0.5, 0.0)

    @pytest.mark.parametrize("approx", ["exact", "small_c"])
    def test_against_grid_oracle(self, approx):
        measure = mutual_information if approx == "exact" else mutual_information_small_c
        grid = np.linspace(0, 1, 100_001)
        values = measure(CH, grid)
        k = int(np.argmax(values))
        p_star, c = capacity(CH, approx)
        assert abs(p_star - grid[k]) <= 1e-5
        assert c >= values[k]
        assert c - values[k] <= 1e-10

    def test_dominates_uniform_input(self):
        assert capacity(CH)[1] >= mutual_information(CH, 0.5)

    def test_maximality_random_inputs(self):
        rng = np.random.default_rng(7)
        for a, b in [(0.01, 0.1), (1e-5, 1e-3), (0.3, 0.6)]:
            ch = ChannelParams(a, b)
            _, c = capacity(ch)
            p = rng.uniform(0, 1, 10_000)
            assert np.all(mutual_information(ch, p) <= c)

    def test_bad_tol(self):
        with pytest.raises(DomainError):
            capacity(CH, tol=0)
