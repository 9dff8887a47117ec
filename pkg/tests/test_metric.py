from fractions import Fraction
from unittest import TestCase

import numpy as np
from hypothesis import given, settings, strategies as st

from hext.core import FiniteSet, DomainError
from hext.metric import (hausdorff_finite, gap_to_space, is_delta_dense, is_sdense, is_stretched,
                         is_strongly_stretched, min_pairwise_distance, greedy_packing, stretch_extend,
                         is_delta_dense_halfline, reciprocal_parts)
from hext.samplers import cantor_k
from hext.spaces import Interval, DyadicSet, HarmonicSet

points = st.lists(st.floats(min_value=0.0, max_value=1.0, allow_nan=False), min_size=1, max_size=8)
open_unit = Interval(0.0, 1.0, left_closed=False, right_closed=False)


def chain(rng, delta, top=1.0):
    """
    Points of (0, top) with the first below delta, consecutive gaps below 2 delta and
    the last above top - delta.
    """
    x = rng.uniform(0.1, 0.9) * delta
    out = []
    while x < top:
        out.append(x)
        x += rng.uniform(0.3, 0.95) * 2 * delta
    if top - out[-1] >= 0.9 * delta:
        out.append(top - rng.uniform(0.1, 0.8) * delta)
    return out


class HausdorffTest(TestCase):

    def test_directed_distances(self):
        K = FiniteSet.from_values([0.0])
        L = FiniteSet.from_values([1.0, 2.0])
        self.assertEqual(hausdorff_finite(K, L), 2.0)

    def test_exact_sets(self):
        K = FiniteSet.from_values([Fraction(0), Fraction(1, 3)])
        L = FiniteSet.from_values([Fraction(1, 9)])
        self.assertEqual(hausdorff_finite(K, L), Fraction(2, 9))

    def test_custom_metric(self):
        K = FiniteSet.from_labels([1, 2], [0.0, 1.0])
        L = FiniteSet.from_labels([3], [0.0])
        self.assertEqual(hausdorff_finite(K, L, metric=lambda x, y: abs(x % 2 - y % 2)), 1)

    def test_empty_set(self):
        with self.assertRaises(DomainError):
            hausdorff_finite(FiniteSet.empty(), FiniteSet.from_values([0.0]))

    @given(points, points)
    @settings(max_examples=100)
    def test_symmetry(self, xs, ys):
        K, L = FiniteSet.from_values(xs), FiniteSet.from_values(ys)
        self.assertEqual(hausdorff_finite(K, L), hausdorff_finite(L, K))

    @given(points)
    @settings(max_examples=50)
    def test_zero_on_itself(self, xs):
        K = FiniteSet.from_values(xs)
        self.assertEqual(hausdorff_finite(K, K), 0.0)

    @given(points, points, points)
    @settings(max_examples=100)
    def test_triangle_inequality(self, xs, ys, zs):
        K, L, M = FiniteSet.from_values(xs), FiniteSet.from_values(ys), FiniteSet.from_values(zs)
        self.assertLessEqual(hausdorff_finite(K, M), hausdorff_finite(K, L) + hausdorff_finite(L, M) + 1e-12)

    @given(points)
    @settings(max_examples=100)
    def test_gap_is_a_hausdorff_distance_bound(self, xs):
        # grid points lie within the gap of K, points of K within a grid step of the grid
        K = FiniteSet.from_values(xs)
        grid = FiniteSet.from_values([i / 64.0 for i in range(65)])
        gap = Interval(0.0, 1.0).gap(K).hi
        self.assertLessEqual(hausdorff_finite(K, grid), gap + 1.0 / 64)


class DensityTest(TestCase):

    def test_sdense_is_strict(self):
        space = Interval(0.0, 1.0)
        K = FiniteSet.from_values([0.25, 0.75])
        self.assertFalse(is_sdense(K, space, 0.25))
        self.assertTrue(is_sdense(K, space, 0.26))
        self.assertFalse(is_delta_dense(K, space, 0.25))
        self.assertFalse(is_delta_dense(FiniteSet.empty(), space, 1.0))

    def test_min_pairwise_distance(self):
        self.assertEqual(min_pairwise_distance(FiniteSet.from_values([0.0])), float('inf'))
        self.assertEqual(min_pairwise_distance(FiniteSet.from_values([0.0, 0.5, 0.75])), 0.25)
        self.assertEqual(min_pairwise_distance(cantor_k(3)), Fraction(1, 9))

    def test_stretched(self):
        space = Interval(0.0, 1.0)
        self.assertTrue(is_stretched(FiniteSet.from_values([0.0, 0.5, 1.0]), space))
        self.assertFalse(is_stretched(FiniteSet.from_values([0.0, 0.1, 1.0]), space))
        self.assertTrue(is_strongly_stretched(FiniteSet.from_values([0.25, 0.75]), space))
        self.assertFalse(is_strongly_stretched(FiniteSet.from_values([0.0, 0.5, 1.0]), Interval(0.0, 2.0)))

    def test_halfline_density(self):
        K = FiniteSet.from_values([0.25 * i for i in range(1, 16)])
        self.assertTrue(is_delta_dense_halfline(K, 0.25))
        self.assertFalse(is_delta_dense_halfline(K, 0.125))
        with self.assertRaises(DomainError):
            is_delta_dense_halfline(K, 1.0)

    def test_reciprocal_parts(self):
        low, high = reciprocal_parts(FiniteSet.from_values([0.5, 2.0, 4.0]))
        self.assertEqual(low.as_list(), [0.5])
        self.assertEqual(high.as_list(), [0.25, 0.5])
        with self.assertRaises(DomainError):
            reciprocal_parts(FiniteSet.from_values([0.0, 1.0]))


class GreedyPackingTest(TestCase):

    def check_net(self, space, delta, seed):
        K = greedy_packing(space, delta, seed=seed)
        self.assertTrue(is_delta_dense(K, space, delta))
        self.assertTrue(is_strongly_stretched(K, space))
        self.assertGreater(min_pairwise_distance(K), delta / 2)

    def test_interval(self):
        for delta in (0.5, 0.1, 0.01):
            for seed in range(100):
                self.check_net(Interval(0.0, 1.0), delta, seed)

    def test_dyadic(self):
        for delta in (0.5, 0.1, 0.01):
            for seed in range(100):
                self.check_net(DyadicSet(), delta, seed)

    def test_scan_order(self):
        K = greedy_packing(HarmonicSet(), 0.5)
        self.assertEqual(K.as_list()[-1], 1.0)

    def test_invalid_delta(self):
        with self.assertRaises(DomainError):
            greedy_packing(Interval(0.0, 1.0), 0.0)

    def test_stretch_extend_keeps_the_set(self):
        K = FiniteSet.from_values([0.0, 0.1])
        L = stretch_extend(K, Interval(0.0, 1.0))
        self.assertTrue(set(K.as_list()) <= set(L.as_list()))
        self.assertTrue(is_stretched(L, Interval(0.0, 1.0)))

    def test_stretched_set_is_returned_as_is(self):
        K = FiniteSet.from_values([0.25, 0.75])
        self.assertIs(stretch_extend(K, Interval(0.0, 1.0)), K)


class DensityInvariantTest(TestCase):

    @given(points, st.floats(min_value=0.01, max_value=1.0))
    @settings(max_examples=200)
    def test_dense_sets_are_within_delta(self, xs, delta):
        K = FiniteSet.from_values(xs)
        space = Interval(0.0, 1.0)
        if is_delta_dense(K, space, delta):
            self.assertLessEqual(gap_to_space(K, space).hi, delta + 1e-9)

    def test_subsets_of_a_dense_pair(self):
        space = Interval(0.0, 1.0)
        H = [0.25, 0.75]
        self.assertTrue(is_delta_dense(FiniteSet.from_values(H), space, 0.5))
        found = [S for S in ([0.25], [0.75], H)
                 if is_stretched(FiniteSet.from_values(S), space)
                 and is_delta_dense(FiniteSet.from_values(S), space, 0.5)]
        self.assertEqual(found, [H])

    def test_dense_set_without_a_stretched_dense_subset(self):
        space = Interval(0.0, 1.0)
        H = [0.45, 0.55]
        self.assertTrue(is_delta_dense(FiniteSet.from_values(H), space, 0.5))
        for S in ([0.45], [0.55], H):
            K = FiniteSet.from_values(S)
            self.assertFalse(is_stretched(K, space) and is_delta_dense(K, space, 0.5), S)

    def test_harmonic_prefix_next_to_an_isolated_point(self):
        space = HarmonicSet(extras=(-1.0,))
        for N in (1, 4, 64, 1024):
            K = space.prefix(N)
            self.assertAlmostEqual(gap_to_space(K, space).hi, 1.0 + 1.0 / N)
            self.assertFalse(is_delta_dense(K, space, 1.0))
            self.assertTrue(is_delta_dense(K, space, 1.0 + 2.0 / N))

    def test_stretched_sets_are_no_larger_than_finer_dense_sets(self):
        space = Interval(0.0, 1.0)
        rng = np.random.default_rng(7)
        for delta in (0.2, 0.1, 0.05):
            for seed in range(20):
                K = greedy_packing(space, 2 * delta, seed=seed)
                self.assertTrue(is_stretched(K, space))
                half = gap_to_space(K, space).hi / 2
                L = space.random_sdense(rng, half)
                self.assertLess(gap_to_space(L, space).hi, half)
                self.assertLessEqual(len(K), len(L))
                finer = greedy_packing(space, delta / 2, seed=seed)
                if gap_to_space(finer, space).hi < half:
                    self.assertLessEqual(len(K), len(finer))


class ReciprocalTest(TestCase):

    @given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.sampled_from([0.5, 0.25, 0.1]))
    @settings(max_examples=100, deadline=None)
    def test_halfline_density_passes_to_both_parts(self, seed, delta):
        rng = np.random.default_rng(seed)
        values = chain(rng, delta, 1.0 / delta) + rng.uniform(1.0 / delta, 3.0 / delta, 4).tolist()
        K = FiniteSet.from_values(values)
        self.assertTrue(is_delta_dense_halfline(K, delta))
        low, high = reciprocal_parts(K)
        self.assertTrue(is_delta_dense(low, open_unit, 2 * delta))
        self.assertTrue(is_delta_dense(high, open_unit, 2 * delta))

    @given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.sampled_from([0.4, 0.25]))
    @settings(max_examples=100, deadline=None)
    def test_dense_parts_make_the_halfline_set_dense(self, seed, delta):
        rng = np.random.default_rng(seed)
        fine = delta ** 3
        low, tail = chain(rng, fine), chain(rng, fine)
        K = FiniteSet.from_values(low + [1.0 / y for y in tail])
        parts = reciprocal_parts(K)
        self.assertTrue(all(is_delta_dense(part, open_unit, fine) for part in parts))
        self.assertTrue(is_delta_dense_halfline(K, 2 * delta))

    def test_dense_parts_can_miss_the_window_edge(self):
        # 1/0.49 lies past the window (0, 2), leaving (1.87, 2) uncovered
        low = [i / 8.0 + 1 / 16.0 for i in range(8)]
        tail = [0.1, 0.3, 0.49, 0.73, 0.97]
        K = FiniteSet.from_values(low + [1.0 / y for y in tail])
        self.assertTrue(all(is_delta_dense(part, open_unit, 0.125) for part in reciprocal_parts(K)))
        self.assertFalse(is_delta_dense_halfline(K, 0.5))
