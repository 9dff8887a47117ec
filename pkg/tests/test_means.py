from unittest import TestCase, mock

import numpy as np
from hypothesis import given, settings, strategies as st

from hext.core import FiniteSet, DomainError, DOMAIN_STRETCHED
from hext.engine import Tolerances, ExtensionEstimate
from hext.means import (MeanSpec, ARITHMETIC, GEOMETRIC, MEANS, OracleVerdict, IsoSetSpec, sf_unordered_mean,
                        unordered_average_oracle, mean_iso, mean_iso_limit, prefix_averages, arrange_blocks,
                        arrange_iso_sequence, iso_blocks, sf_mean_iso_dyadic, sf_mean_eds, mean_eds_limit)
from hext.samplers import EDS_RANDOM, EDS_MIDPOINT
from hext.spaces import Interval, UnionOfIntervals

unit = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


def harmonic_zero():
    return IsoSetSpec([(lambda n: 1.0 / np.asarray(n, dtype=float), 0.0)])


def symmetric():
    return IsoSetSpec([(lambda n: 1.0 / np.asarray(n, dtype=float), 0.0),
                       (lambda n: 1.0 - 1.0 / np.asarray(n, dtype=float), 1.0)])


class MeanSpecTest(TestCase):

    def test_means(self):
        self.assertEqual(ARITHMETIC([1.0, 2.0, 3.0]), 2.0)
        self.assertAlmostEqual(GEOMETRIC([1.0, 4.0]), 2.0)
        self.assertEqual(sorted(MEANS), ['arithmetic', 'geometric', 'quadratic'])
        with self.assertRaises(DomainError):
            ARITHMETIC([])
        with self.assertRaises(DomainError):
            GEOMETRIC([-1.0, 1.0])

    def test_spot_checks(self):
        rng = np.random.default_rng(0)
        for mean in MEANS.values():
            self.assertEqual(mean.spot_check(rng), [])
        self.assertIn('prefix-continuous', MeanSpec(np.max, 'max').spot_check(rng))
        self.assertIn('permutation-invariant', MeanSpec(lambda x: x[0], 'first').spot_check(rng))

    def test_unordered_mean_needs_a_regular_mean(self):
        with self.assertRaises(DomainError):
            sf_unordered_mean(lambda i: 1.0 / i, MeanSpec(np.max, 'max', prefix_continuous=False), size=4)
        space, s = sf_unordered_mean(lambda i: 1.0 / i, size=4)
        self.assertAlmostEqual(s(space.prefix(4)), (1 + 1 / 2 + 1 / 3 + 1 / 4) / 4)
        with self.assertRaises(DomainError):
            s(FiniteSet.empty())


class UnorderedAverageOracleTest(TestCase):

    def test_convergent_sequence(self):
        verdict = unordered_average_oracle(lambda i: 1.0 / i)
        self.assertEqual(verdict.verdict, OracleVerdict.EXISTS)
        self.assertLess(verdict.value, 1e-3)

    def test_eventually_constant(self):
        verdict = unordered_average_oracle(lambda i: np.where(np.asarray(i) < 10, 5.0, 2.0))
        self.assertEqual(verdict.verdict, OracleVerdict.EXISTS)
        self.assertEqual(verdict.value, 2.0)

    def test_two_limits(self):
        self.assertEqual(unordered_average_oracle(lambda i: i % 2 + 1.0 / i).verdict, OracleVerdict.NOT_EXISTS)
        self.assertEqual(unordered_average_oracle(lambda i: np.where(i % 2 == 0, 1.0, -1.0)).verdict,
                         OracleVerdict.NOT_EXISTS)

    def test_dense_oscillation_is_undecided(self):
        self.assertEqual(unordered_average_oracle(np.sin).verdict, OracleVerdict.UNKNOWN)


class IsolatedMeanTest(TestCase):

    def test_isolated_points(self):
        spec = harmonic_zero()
        np.testing.assert_allclose(spec.isolated(0.25), [0.25, 1.0 / 3, 0.5, 1.0])
        self.assertAlmostEqual(mean_iso(spec, 0.25), 0.520833, places=6)
        with self.assertRaises(DomainError):
            mean_iso(spec, 2.0)

    def test_harmonic_mean_vanishes(self):
        estimate = mean_iso_limit(harmonic_zero())
        self.assertTrue(estimate.converged)
        self.assertLess(abs(estimate.value), 1e-3)

    def test_symmetric_sets(self):
        self.assertAlmostEqual(mean_iso_limit(symmetric()).value, 0.5)
        estimate = mean_iso_limit(IsoSetSpec(points=[0.25, 0.75]))
        self.assertEqual(estimate.status, ExtensionEstimate.CONVERGED)
        self.assertEqual(estimate.value, 0.5)

    def test_sequence_that_never_approaches_its_limit(self):
        with mock.patch('hext.means.ISO_MAX_TERMS', 4096):
            with self.assertRaises(DomainError):
                IsoSetSpec([(lambda n: np.ones(np.shape(n)), 0.0)]).isolated(0.5)


class ArrangementTest(TestCase):

    @given(st.lists(unit, min_size=1, max_size=10), st.lists(unit, min_size=1, max_size=30))
    @settings(max_examples=1000, deadline=None)
    def test_block_averages_stay_between_the_ends(self, head, block):
        arranged = arrange_blocks(head, block)
        self.assertEqual(sorted(arranged), sorted(float(x) for x in block))
        averages = prefix_averages(list(head) + arranged)
        start, target = averages[len(head) - 1], averages[-1]
        low, high = min(start, target), max(start, target)
        for k in range(len(head), len(averages)):
            step = 2.0 / (k + 1)
            self.assertGreaterEqual(averages[k], low - step - 1e-9)
            self.assertLessEqual(averages[k], high + step + 1e-9)
            self.assertLessEqual(abs(averages[k] - averages[k - 1]), step + 1e-9)

    def test_arranged_sequence_follows_the_isolated_mean(self):
        sequence = arrange_iso_sequence(symmetric(), 512)
        self.assertEqual(len(sequence), 512)
        self.assertAlmostEqual(prefix_averages(sequence)[-1], 0.5, places=2)

    def test_arranged_prefix_averages_stay_in_block_windows(self):
        four_sided = IsoSetSpec([(lambda n: 1.0 / np.asarray(n, dtype=float), 0.0),
                                 (lambda n: -1.0 / np.asarray(n, dtype=float), 0.0),
                                 (lambda n: 1.0 - 1.0 / np.asarray(n, dtype=float), 1.0),
                                 (lambda n: 1.0 + 1.0 / np.asarray(n, dtype=float), 1.0)])
        n = 400
        for spec in (symmetric(), four_sided):
            sequence = arrange_iso_sequence(spec, n)
            averages = prefix_averages(sequence)
            M = float(np.abs(sequence).max())
            end = 0
            for index, block in enumerate(iso_blocks(spec, n)):
                start, end = end, end + len(block)
                if end > n:
                    break
                if not index:
                    continue
                low = min(averages[start - 1], averages[end - 1])
                high = max(averages[start - 1], averages[end - 1])
                for k in range(start, end):
                    step = 2 * M / (k + 1)
                    self.assertGreaterEqual(averages[k], low - step - 1e-9)
                    self.assertLessEqual(averages[k], high + step + 1e-9)

    def test_dyadic_extension(self):
        spec = harmonic_zero()
        space, s = sf_mean_iso_dyadic(spec, count=64)
        self.assertEqual(s.domain, DOMAIN_STRETCHED)
        K = space.prefix(64)
        self.assertAlmostEqual(s(K), float(np.mean(arrange_iso_sequence(spec, 64))))
        with self.assertRaises(DomainError):
            s(space.prefix(65))


class EdsMeanTest(TestCase):

    def test_midpoint_rule(self):
        estimate = mean_eds_limit(Interval(0.0, 1.0))
        self.assertTrue(estimate.converged)
        self.assertAlmostEqual(estimate.value, 0.5, places=9)
        H = UnionOfIntervals([Interval(0.0, 0.3), Interval(0.7, 1.0)])
        self.assertAlmostEqual(mean_eds_limit(H).value, 0.5, places=9)

    def test_random_rule(self):
        tol = Tolerances(tol_abs=1e-3, max_level=16)
        for seed in range(5):
            estimate = mean_eds_limit(Interval(0.0, 1.0), EDS_RANDOM, tol, seed=seed)
            self.assertTrue(estimate.converged)
            self.assertAlmostEqual(estimate.value, 0.5, delta=1e-2)

    def test_cross_checked_rules(self):
        tol = Tolerances(tol_abs=1e-3, max_level=16)
        estimate = mean_eds_limit(Interval(0.0, 1.0), EDS_RANDOM, tol, seed=7, compare_rule=EDS_MIDPOINT)
        self.assertEqual(estimate.status, ExtensionEstimate.CONVERGED)
        self.assertEqual(len(estimate.parts), 2)

    def test_empty_set(self):
        with self.assertRaises(DomainError):
            sf_mean_eds()(FiniteSet.empty())
