from fractions import Fraction
from unittest import TestCase

import numpy as np

from hext.core import FiniteSet, DomainError, UnresolvedError
from hext.functions import SeriesSpec
from hext.metric import is_delta_dense_halfline, is_stretched
from hext.samplers import (SamplerSpec, refine, cantor_k, cantor_l, cantor_samples, eds_bins, in_class_s,
                           adversarial_series_sampler, EDS_INFIMUM, EDS_RANDOM)
from hext.spaces import Interval, UnionOfIntervals, HarmonicSet, DyadicSet, CantorSet, HalfLine, ProductSpace


class SamplerSpecTest(TestCase):

    def test_defaults(self):
        self.assertEqual(SamplerSpec(SamplerSpec.GRID).schedule, 'linear')
        self.assertEqual(SamplerSpec(SamplerSpec.RANDOM).schedule, 'doubling')
        self.assertEqual(SamplerSpec(SamplerSpec.GRID, base=10).resolution(3), 30)

    def test_random_sampling_needs_doubling(self):
        with self.assertRaises(DomainError):
            SamplerSpec(SamplerSpec.RANDOM, 'linear')
        with self.assertRaises(DomainError):
            SamplerSpec(SamplerSpec.EDS, 'linear', rule=EDS_RANDOM)

    def test_unknown_strategy(self):
        with self.assertRaises(DomainError):
            SamplerSpec('sobol')

    def test_level_must_be_positive(self):
        with self.assertRaises(DomainError):
            refine(Interval(0.0, 1.0), SamplerSpec(SamplerSpec.GRID), 0)


class GridTest(TestCase):

    def test_closed_interval(self):
        K = refine(Interval(0.0, 1.0), SamplerSpec(SamplerSpec.GRID, base=4), 1)
        self.assertEqual(K.as_list(), [0.0, 0.25, 0.5, 0.75, 1.0])

    def test_open_interval_drops_endpoints(self):
        space = Interval(0.0, 1.0, left_closed=False, right_closed=False)
        K = refine(space, SamplerSpec(SamplerSpec.GRID, base=4), 1)
        self.assertEqual(K.as_list(), [0.25, 0.5, 0.75])

    def test_offset(self):
        K = refine(Interval(0.0, 1.0), SamplerSpec(SamplerSpec.GRID, base=4, offset=0.5), 1)
        self.assertEqual(K.as_list(), [0.125, 0.375, 0.625, 0.875])

    def test_rational_grid_is_exact(self):
        K = refine(Interval(0, 1, rational=True), SamplerSpec(SamplerSpec.GRID, base=3), 1)
        self.assertEqual(K.as_list(), [Fraction(0), Fraction(1, 3), Fraction(2, 3), Fraction(1)])

    def test_union(self):
        space = UnionOfIntervals([Interval(0.0, 1.0), Interval(2.0, 3.0)])
        K = refine(space, SamplerSpec(SamplerSpec.GRID, base=2), 1)
        self.assertEqual(K.as_list(), [0.0, 0.5, 1.0, 2.0, 2.5, 3.0])

    def test_product(self):
        space = ProductSpace(Interval(0.0, 1.0), Interval(0.0, 1.0))
        K = refine(space, SamplerSpec(SamplerSpec.GRID, base=2), 1)
        self.assertEqual(len(K), 9)

    def test_mismatch(self):
        with self.assertRaises(DomainError):
            refine(HarmonicSet(), SamplerSpec(SamplerSpec.GRID), 1)


class RandomGridTest(TestCase):

    def test_seeded(self):
        spec = SamplerSpec(SamplerSpec.RANDOM, base=8, seed=5)
        K = refine(Interval(0.0, 1.0), spec, 2)
        self.assertEqual(K.as_list(), refine(Interval(0.0, 1.0), spec, 2).as_list())
        self.assertEqual(len(K), 16)

    def test_gap_does_not_grow(self):
        space = Interval(0.0, 1.0)
        spec = SamplerSpec(SamplerSpec.RANDOM, base=4, seed=1)
        gaps = [space.gap(refine(space, spec, level)).hi for level in range(1, 8)]
        self.assertTrue(all(b <= a for a, b in zip(gaps, gaps[1:])))


class SequenceSamplerTest(TestCase):

    def test_prefix_parity(self):
        space = HarmonicSet()
        self.assertEqual(len(refine(space, SamplerSpec(SamplerSpec.PREFIX, parity='even'), 3)), 6)
        self.assertEqual(len(refine(space, SamplerSpec(SamplerSpec.PREFIX, parity='odd'), 3)), 5)
        with self.assertRaises(DomainError):
            refine(space, SamplerSpec(SamplerSpec.PREFIX, parity='both'), 3)

    def test_prefix_keeps_extras(self):
        K = refine(HarmonicSet(extras=(0.0,)), SamplerSpec(SamplerSpec.PREFIX), 2)
        self.assertEqual(K.as_list(), [0.0, 0.5, 1.0])

    def test_stretched_dyadic(self):
        space = DyadicSet()
        K = refine(space, SamplerSpec(SamplerSpec.STRETCHED_DYADIC), 5)
        self.assertEqual(len(K), 5)
        self.assertTrue(is_stretched(K, space))
        with self.assertRaises(DomainError):
            refine(HarmonicSet(), SamplerSpec(SamplerSpec.STRETCHED_DYADIC), 1)

    def test_adversarial_tail(self):
        a = SeriesSpec.alternating_harmonic().a
        K = adversarial_series_sampler(a, 4, 2)
        self.assertEqual(K.as_list(), sorted([1.0, 0.5, 1.0 / 3, 0.25, 0.2, 1.0 / 7]))
        spec = SamplerSpec(SamplerSpec.ADVERSARIAL_TAIL, base=4, ratio=0.5, series=a)
        self.assertEqual(refine(HarmonicSet(), spec, 1).as_list(), K.as_list())

    def test_halfline_grid(self):
        spec = SamplerSpec(SamplerSpec.HALFLINE_GRID, base=3)
        K = refine(HalfLine(), spec, 1)
        self.assertTrue(is_delta_dense_halfline(K, 0.25))


class CantorSamplerTest(TestCase):

    def test_sizes(self):
        self.assertEqual(len(cantor_k(3)), 8)
        self.assertEqual(len(cantor_l(3)), 6)
        self.assertEqual(cantor_l(3).exact_values(),
                         [Fraction(1, 9), Fraction(2, 9), Fraction(2, 3), Fraction(7, 9), Fraction(8, 9), Fraction(1)])

    def test_exact_means(self):
        def mean(K):
            return Fraction(int(K.coords.sum()), K.denominator * len(K))

        for n in range(3, 21):
            K, L = cantor_samples(n)
            self.assertEqual(len(L), 3 * 2 ** (n - 2))
            self.assertEqual(mean(K), Fraction(1, 2))
            self.assertEqual(mean(L), Fraction(11, 18))

    def test_samples_are_stretched_cantor_points(self):
        space = CantorSet()
        K, L = cantor_samples(5)
        self.assertTrue(is_stretched(K, space))
        self.assertTrue(is_stretched(L, space))
        self.assertTrue(all(space.contains(x) for x in L.exact_values()))

    def test_small_n(self):
        with self.assertRaises(DomainError):
            cantor_samples(2)

    def test_levels(self):
        K = refine(CantorSet(), SamplerSpec(SamplerSpec.CANTOR_K), 1)
        self.assertEqual(K.denominator, 9)


class EdsTest(TestCase):

    def test_midpoints(self):
        H = Interval(0.0, 1.0)
        K = eds_bins(H, 4)
        self.assertEqual(K.as_list(), [0.125, 0.375, 0.625, 0.875])
        self.assertTrue(in_class_s(K, H, 4))
        self.assertFalse(in_class_s(K.union(FiniteSet.from_values([0.1])), H, 4))

    def test_bins_follow_the_set(self):
        H = UnionOfIntervals([Interval(0.0, 0.3), Interval(0.7, 1.0)])
        K = eds_bins(H, 4)
        self.assertEqual(len(K), 4)
        self.assertAlmostEqual(K.as_list()[1], 0.275)
        self.assertTrue(in_class_s(K, H, 4))

    def test_empty_bins_are_skipped(self):
        H = UnionOfIntervals([Interval(0.0, 0.1), Interval(0.9, 1.0)])
        K = eds_bins(H, 4)
        self.assertEqual(len(K), 2)
        self.assertTrue(in_class_s(K, H, 4))

    def test_infimum_of_open_bin(self):
        H = Interval(0.0, 1.0, left_closed=False)
        with self.assertRaises(UnresolvedError):
            eds_bins(H, 4, EDS_INFIMUM)
        self.assertEqual(eds_bins(Interval(0.0, 1.0), 4, EDS_INFIMUM).as_list(), [0.0, 0.25, 0.5, 0.75])

    def test_random_rule(self):
        with self.assertRaises(DomainError):
            eds_bins(Interval(0.0, 1.0), 4, EDS_RANDOM)
        K = eds_bins(Interval(0.0, 1.0), 8, EDS_RANDOM, np.random.default_rng(2))
        self.assertTrue(in_class_s(K, Interval(0.0, 1.0), 8))
