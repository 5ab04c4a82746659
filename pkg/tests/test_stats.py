import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as sps

from wealthabm.errors import ConfigError
from wealthabm.stats import (decile_totals, fit_boltzmann_gibbs, fit_normal, histogram,
                             ks_distance, summarize)

balance_lists = st.lists(st.integers(0, 400), min_size=1, max_size=60)
decile_lists = st.integers(1, 6).flatmap(
    lambda k: st.lists(st.integers(0, 300), min_size=10 * k, max_size=10 * k))


class TestSummarize:
    def test_equal_population(self):
        assert summarize([100] * 500) == (100.0, 0.0)

    def test_two_point(self):
        assert summarize([0, 200]) == (100.0, 10000.0)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            summarize([])

    @given(balance_lists)
    def test_matches_numpy_population_moments(self, values):
        mean, var = summarize(values)
        assert mean == pytest.approx(np.mean(values), rel=1e-12)
        assert var == pytest.approx(np.var(values), rel=1e-9, abs=1e-9)

    @given(balance_lists, st.randoms())
    def test_order_independent(self, values, rnd):
        shuffled = list(values)
        rnd.shuffle(shuffled)
        assert summarize(values) == summarize(shuffled)


class TestDecileTotals:
    def test_equal_start(self):
        per, top, bottom = decile_totals([100] * 500)
        assert (top, bottom) == (5000, 25000)
        assert per == [5000] * 10

    def test_singleton_deciles(self):
        per, top, bottom = decile_totals(list(range(1, 11)))
        assert per == list(range(1, 11))
        assert (top, bottom) == (10, 15)

    def test_indivisible_rejected(self):
        with pytest.raises(ConfigError):
            decile_totals([1] * 55)

    @given(decile_lists, st.randoms())
    def test_permutation_invariant_and_exhaustive(self, values, rnd):
        per, top, _ = decile_totals(values)
        shuffled = list(values)
        rnd.shuffle(shuffled)
        assert decile_totals(shuffled)[0] == per
        assert top + sum(per[:9]) == sum(values)
        assert per == sorted(per)


class TestHistogram:
    def test_small_example(self):
        h = histogram([0, 0, 5, 10], 10)
        assert h.bins == [(0, 3), (10, 1)]
        assert h.total_count == 4

    def test_single_nonzero_bin(self):
        h = histogram([100] * 500, 50)
        assert [b for b in h.bins if b[1]] == [(100, 500)]
        assert h.edges == (0, 50, 100)

    @pytest.mark.parametrize("width", [0, -3, 2.5])
    def test_bad_width(self, width):
        with pytest.raises(ConfigError):
            histogram([1, 2], width)

    @given(balance_lists, st.integers(1, 40))
    def test_rebinning_width_one_reproduces_wider_bins(self, values, width):
        fine = histogram(values, 1)
        merged = {}
        for edge, count in fine.bins:
            merged[edge // width * width] = merged.get(edge // width * width, 0) + count
        wide = histogram(values, width)
        assert dict(wide.bins) == {e: merged.get(e, 0) for e in wide.edges}
        assert sum(wide.counts) == wide.total_count == len(values)
        assert all(b - a == width for a, b in zip(wide.edges, wide.edges[1:]))


class TestFits:
    def test_equal_start_exponential_step(self):
        fit = fit_boltzmann_gibbs([100] * 500)
        assert fit.temperature == 100
        assert fit.normalization == pytest.approx(0.01)
        # single jump at 100 against F(100) = 1 - 1/e
        assert fit.ks_distance == pytest.approx(1 - math.exp(-1), abs=1e-15)

    def test_all_zero_is_degenerate(self):
        with pytest.raises(ValueError):
            fit_boltzmann_gibbs([0] * 20)

    @given(st.lists(st.integers(0, 500), min_size=2, max_size=80).filter(lambda v: sum(v) > 0))
    @settings(max_examples=60)
    def test_ks_agrees_with_scipy(self, values):
        arr = np.array(values)
        fit = fit_boltzmann_gibbs(arr)
        assert fit.temperature == pytest.approx(arr.mean(), rel=0, abs=1e-12)
        ref = sps.kstest(arr, "expon", args=(0, arr.mean())).statistic
        assert fit.ks_distance == pytest.approx(ref, abs=1e-12)
        if arr.std() > 0:
            ref_n = sps.kstest(arr, "norm", args=(arr.mean(), arr.std())).statistic
            assert fit_normal(arr).ks_distance == pytest.approx(ref_n, abs=1e-12)

    def test_exponential_sample_fits_well(self):
        draws = np.random.default_rng(7).exponential(100, size=10_000)
        fit = fit_boltzmann_gibbs(draws)
        assert fit.ks_distance < 0.02

    def test_ks_distance_bounds(self):
        assert ks_distance([5, 5, 5], lambda m: np.zeros_like(m)) == 1.0
        assert 0 <= ks_distance([1, 2, 3], lambda m: m / 4) <= 1
