from unittest import TestCase, mock

from hext.core import FiniteSet, UnresolvedError
from hext.functions import (StepOracle, SurvivalOracle, sf_measure_integral, measure_space, layer_sum_delta,
                            MEASURE_HALFLINE, sf_sum, sf_average, sf_diameter, sf_midpoint, sf_dyadic_parity,
                            sf_two_dense_indicator, two_dense_space)
from hext.properties import (PredicateReport, check_increasing, check_d_increasing, certify_d_increasing,
                             check_d_continuous, check_left_continuous, check_l_continuous, _ladder)
from hext.spaces import Interval, DyadicSet, HalfLine


class PredicateReportTest(TestCase):

    def test_str(self):
        report = PredicateReport('increasing', PredicateReport.COUNTEREXAMPLE, 3, seed=0,
                                 counterexample={'K': 'K', 'L': 'L', 'values': (1, 0), 'trial': 2})
        self.assertTrue(report.failed)
        self.assertFalse(report.holds)
        self.assertEqual(str(report), 'PredicateReport<increasing counterexample, trials=3> K=K L=L values=(1, 0)')


class IncreasingTest(TestCase):

    def test_sum_of_nonnegative_points(self):
        report = check_increasing(sf_sum(), Interval(0.0, 1.0))
        self.assertTrue(report.holds)
        self.assertEqual(report.trials, 50)

    def test_average(self):
        report = check_increasing(sf_average(), Interval(0.0, 1.0))
        self.assertTrue(report.failed)
        K, L = report.counterexample['K'], report.counterexample['L']
        self.assertTrue(set(K.as_list()) <= set(L.as_list()))
        self.assertGreater(*report.counterexample['values'])

    def test_dyadic_parity(self):
        self.assertTrue(check_increasing(sf_dyadic_parity(), DyadicSet(), trials=200).failed)

    def test_seeded(self):
        first = check_increasing(sf_average(), Interval(0.0, 1.0), seed=3)
        second = check_increasing(sf_average(), Interval(0.0, 1.0), seed=3)
        self.assertEqual(first.trials, second.trials)
        self.assertEqual(first.counterexample['K'].as_list(), second.counterexample['K'].as_list())


class DIncreasingTest(TestCase):

    def test_diameter(self):
        self.assertTrue(check_d_increasing(sf_diameter(), Interval(0.0, 1.0)).holds)
        self.assertTrue(check_d_increasing(sf_diameter(), Interval(0.0, 1.0), decreasing=True).failed)

    def test_two_dense_indicator(self):
        report = check_d_increasing(sf_two_dense_indicator(), two_dense_space())
        self.assertTrue(report.failed)
        self.assertEqual(report.counterexample['values'], (1.0, 0.0))

    def test_unresolved(self):
        with mock.patch.object(Interval, 'random_sdense', side_effect=UnresolvedError('no rational witness')):
            report = check_d_increasing(sf_diameter(), Interval(0.0, 1.0))
        self.assertEqual(report.verdict, PredicateReport.UNRESOLVED)
        self.assertEqual(report.reason, 'no rational witness')

    def test_layer_sum_certificate(self):
        oracle = SurvivalOracle.lebesgue_identity()
        s = sf_measure_integral(oracle, 2.0)
        samples = [FiniteSet.from_values([0.5, 1.0, 1.5]), FiniteSet.from_values([0.1])]
        report = certify_d_increasing(s, measure_space(2.0), samples, 0.1, layer_sum_delta(oracle.total))
        self.assertTrue(report.holds)
        self.assertEqual(report.trials, 200)

    def test_certificate_with_too_large_delta(self):
        report = certify_d_increasing(sf_diameter(), Interval(0.0, 1.0), [FiniteSet.from_values([0.0, 1.0])],
                                      0.01, 0.5, trials=10)
        self.assertTrue(report.failed)

    def test_half_line_layer_sum(self):
        s = sf_measure_integral(SurvivalOracle.lebesgue_identity(), None, MEASURE_HALFLINE)
        report = check_d_increasing(s, measure_space(None, MEASURE_HALFLINE), non_strict=True)
        self.assertTrue(report.holds, report)
        self.assertGreater(report.trials, 0)

    def test_delta_ladder_of_an_unbounded_space(self):
        K = FiniteSet.from_values([0.5, 3.0])
        self.assertEqual(_ladder(HalfLine(), 3, K), [0.125, 0.0625, 0.03125])
        self.assertEqual(_ladder(HalfLine(), 1), [0.25])
        self.assertEqual(_ladder(Interval(0.0, 2.0), 2, K), [0.5, 0.25])


class ContinuityTest(TestCase):

    def test_midpoint_is_continuous(self):
        self.assertTrue(check_d_continuous(sf_midpoint(), Interval(0.0, 1.0)).holds)

    def test_sum_is_continuous_on_fixed_sizes_only(self):
        self.assertTrue(check_d_continuous(sf_sum(), Interval(0.0, 1.0), n=3).holds)
        report = check_d_continuous(sf_sum(), Interval(0.0, 1.0), samples=[FiniteSet.from_values([0.5])])
        self.assertTrue(report.failed)
        self.assertEqual(report.predicate, 'continuous')

    def test_step_layer_sum(self):
        s = sf_measure_integral(StepOracle([1.0, 2.0], [1.0, 0.0]), 3.0)
        samples = [FiniteSet.from_values([1.0])]
        down = check_left_continuous(s, measure_space(3.0), 'down', samples=samples)
        up = check_left_continuous(s, measure_space(3.0), 'up', samples=samples)
        self.assertTrue(down.holds)
        self.assertTrue(up.failed)
        self.assertEqual(up.predicate, 'right-continuous')
        with self.assertRaises(ValueError):
            check_left_continuous(s, measure_space(3.0), 'sideways')


class LContinuousTest(TestCase):

    def setUp(self):
        self.J = Interval(0, 1, rational=True)
        self.space = Interval(0.0, 1.0)

    def test_average(self):
        self.assertTrue(check_l_continuous(sf_average(), self.J, self.space).holds)

    def test_two_dense_indicator(self):
        report = check_l_continuous(sf_two_dense_indicator(), self.J, self.space)
        self.assertTrue(report.failed)
        self.assertEqual(report.trials, 12)
