"""
Experiment driver: validated configs, the closed function catalog, trace CSV files and suites.
"""
import csv
import glob
import logging
import os
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
import yaml

from hext.core import FiniteSet, RecordBase, ExtensionError, DomainError, ConfigError
from hext.engine import Tolerances, ExtensionEstimate, classify_trace, estimate_ext, cross_check
from hext.helpers import format_real, compare, SCHEDULE_LINEAR, SCHEDULE_DOUBLING
from hext import functions as fn
from hext.means import MEANS, IsoSetSpec, sf_unordered_mean, mean_iso_limit, mean_eds_limit
from hext.properties import (PredicateReport, check_increasing, check_d_increasing, certify_d_increasing,
                             check_d_continuous, check_left_continuous, check_l_continuous)
from hext.samplers import SamplerSpec, EDS_RULES
from hext.spaces import (Interval, UnionOfIntervals, FinitePoints, HarmonicSet, DyadicSet, CantorSet,
                         HalfLine)


logger = logging.getLogger(__name__)

TRACE_HEADER = ['level', 'gap_hi', 's_value', 'running_estimate', 'status']
SUMMARY_HEADER = ['name', 'result', 'status', 'value', 'levels', 'exit_code']

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2


# closed catalog: every entry builds its object from the config

COEFFICIENTS = {
    'geometric': lambda c: fn.SeriesSpec.geometric(c.get('ratio', 0.5)),
    'alternating-harmonic': lambda c: fn.SeriesSpec.alternating_harmonic(),
    'harmonic': lambda c: fn.SeriesSpec.harmonic(),
    'constant': lambda c: fn.SeriesSpec.constant(c.get('c', 0.0)),
    'shifted-harmonic': lambda c: fn.SeriesSpec.shifted_harmonic(c.get('c', 0.0)),
    'alternating-sign': lambda c: fn.SeriesSpec.alternating_sign(),
    'two-clusters': lambda c: fn.SeriesSpec.two_clusters(),
    'first-indicator': lambda c: fn.SeriesSpec.first_indicator(),
    'parity': lambda c: fn.SeriesSpec.parity(),
}

REAL_FUNCTIONS = {
    'identity': lambda c: (lambda x: x),
    'square': lambda c: (lambda x: x ** 2),
    'tent': lambda c: (lambda x: 1 - np.abs(2 * x - 1)),
    'constant': lambda c: (lambda x: np.full(np.shape(x), float(c.get('c', 1.0)))),
    'point-indicator': lambda c: (lambda x: np.where(x == c.get('point', 0.5), 1.0, 0.0)),
    'scaled-identity': lambda c: (lambda x: x + x / c.get('n', 1)),
}

SUPREMA = {
    'monotone': lambda f, c: fn.monotone_sup(f),
    'point': lambda f, c: fn.point_mass_sup(c.get('point', 0.5)),
    'probe': lambda f, c: fn.probe_sup(f),
}

CURVES = {
    'quarter-circle': fn.quarter_circle,
    'segment': fn.segment,
}

ORACLES = {
    'lebesgue-identity': lambda c: fn.SurvivalOracle.lebesgue_identity(),
    'step-example': lambda c: fn.StepOracle([1.0, 2.0], [1.0, 0.0], 'f=1 except f(1)=2'),
    'exponential': lambda c: fn.SurvivalOracle(lambda t: np.exp(-np.asarray(t)), 1.0, 'exponential'),
}

ISO_SETS = {
    'harmonic-zero': lambda c: IsoSetSpec([(lambda n: 1.0 / n, 0.0)], [0.0], bound=2.0),
    'symmetric': lambda c: IsoSetSpec([(lambda n: 1.0 / n, 0.0), (lambda n: 1.0 - 1.0 / n, 1.0)],
                                      [0.0, 1.0], bound=2.0),
    'finite': lambda c: IsoSetSpec(points=c.get('points', [0.0, 1.0])),
}


def _fixture_two_dense_increasing(c):
    return check_increasing(fn.sf_two_dense_indicator(), fn.two_dense_space(), trials=c.get('trials', 50),
                            seed=c.seed)


def _fixture_two_dense_d_increasing(c):
    return check_d_increasing(fn.sf_two_dense_indicator(), fn.two_dense_space(), eps=(1e-2,),
                              samples=[FiniteSet.from_values([0.5])], trials=c.get('trials', 4), seed=c.seed,
                              levels=6)


def _fixture_jordan_d_increasing(c):
    H = UnionOfIntervals([Interval(0.0, 1.0), Interval(1, 2, rational=True)])
    return check_d_increasing(fn.sf_inner_jordan(H), H, eps=(1e-2,), trials=c.get('trials', 10), seed=c.seed)


def _fixture_layer_sum_certificate(c):
    oracle = fn.SurvivalOracle.lebesgue_identity()
    space = fn.measure_space(2.0)
    s = fn.sf_measure_integral(oracle, 2.0)
    samples = [space.sample_points(np.random.default_rng([c.seed, j]), 4) for j in range(5)]
    report = None
    for eps in (1e-2, 1e-3):
        report = certify_d_increasing(s, space, samples, eps, fn.layer_sum_delta(oracle.total),
                                      trials=c.get('trials', 100), seed=c.seed)
        if not report.holds:
            break
    return report


def _fixture_step_continuity(direction):
    def fixture(c):
        s = fn.sf_measure_integral(ORACLES['step-example'](c), 3.0)
        return check_left_continuous(s, fn.measure_space(3.0), direction, samples=[FiniteSet.from_values([1.0])],
                                     trials=c.get('trials', 20), seed=c.seed)
    return fixture


def _fixture_finite_sum_continuous(c):
    space = HarmonicSet(extras=(0.0,))
    return check_d_continuous(fn.sf_sum(), space, samples=[FiniteSet.from_values([0.0])],
                              trials=c.get('trials', 5), seed=c.seed)


def _fixture_midpoint_continuous(c):
    return check_d_continuous(fn.sf_midpoint(), Interval(0.0, 1.0), trials=c.get('trials', 20), seed=c.seed)


def _fixture_average_l_continuous(c):
    return check_l_continuous(fn.sf_average(), Interval(0, 1, rational=True), Interval(0.0, 1.0), seed=c.seed)


def _fixture_darboux_d_increasing(c):
    s = fn.sf_darboux_upper(REAL_FUNCTIONS['point-indicator'](c), sup=fn.point_mass_sup(0.5))
    return check_d_increasing(s, Interval(0.0, 1.0), eps=(1e-1,), samples=[FiniteSet.from_values([0.0, 1.0])],
                              trials=c.get('trials', 10), seed=c.seed)


def _fixture_dyadic_parity_increasing(c):
    return check_increasing(fn.sf_dyadic_parity(), DyadicSet(), trials=c.get('trials', 50), seed=c.seed)


PROPERTY_FIXTURES = {
    'two-dense-increasing': _fixture_two_dense_increasing,
    'two-dense-d-increasing': _fixture_two_dense_d_increasing,
    'jordan-d-increasing': _fixture_jordan_d_increasing,
    'layer-sum-certificate': _fixture_layer_sum_certificate,
    'step-left-continuous': _fixture_step_continuity('down'),
    'step-upward-continuous': _fixture_step_continuity('up'),
    'finite-sum-continuous': _fixture_finite_sum_continuous,
    'midpoint-continuous': _fixture_midpoint_continuous,
    'average-l-continuous': _fixture_average_l_continuous,
    'darboux-d-increasing': _fixture_darboux_d_increasing,
    'dyadic-parity-increasing': _fixture_dyadic_parity_increasing,
}


def _is_number(value, key):
    if isinstance(value, bool):
        return False
    if isinstance(value, str) and key == 'rational_intervals':
        try:
            Fraction(value)
        except ValueError:
            return False
        return True
    return isinstance(value, (int, float))


class ExperimentConfig(RecordBase):
    """
    A flat experiment mapping, validated before anything is computed.
    """

    EXPERIMENT_SERIES = 'series'
    EXPERIMENT_UNORDERED_SUM = 'unordered-sum'
    EXPERIMENT_UNORDERED_MEAN = 'unordered-mean'
    EXPERIMENT_RIEMANN = 'riemann'
    EXPERIMENT_DARBOUX = 'darboux'
    EXPERIMENT_ARCLENGTH = 'arclength'
    EXPERIMENT_JORDAN = 'jordan'
    EXPERIMENT_MEASURE = 'measure'
    EXPERIMENT_ISO_MEAN = 'iso-mean'
    EXPERIMENT_EDS_MEAN = 'eds-mean'
    EXPERIMENT_CANTOR = 'cantor'
    EXPERIMENT_SEQUENCE = 'sequence'
    EXPERIMENT_PROPERTIES = 'properties'

    CATALOGS = {
        EXPERIMENT_SERIES: ('function', COEFFICIENTS),
        EXPERIMENT_UNORDERED_SUM: ('function', COEFFICIENTS),
        EXPERIMENT_UNORDERED_MEAN: ('function', COEFFICIENTS),
        EXPERIMENT_SEQUENCE: ('function', COEFFICIENTS),
        EXPERIMENT_RIEMANN: ('function', REAL_FUNCTIONS),
        EXPERIMENT_DARBOUX: ('function', REAL_FUNCTIONS),
        EXPERIMENT_ARCLENGTH: ('function', CURVES),
        EXPERIMENT_MEASURE: ('function', ORACLES),
        EXPERIMENT_ISO_MEAN: ('function', ISO_SETS),
        EXPERIMENT_PROPERTIES: ('fixture', PROPERTY_FIXTURES),
        EXPERIMENT_JORDAN: None,
        EXPERIMENT_EDS_MEAN: None,
        EXPERIMENT_CANTOR: None,
    }

    DEFAULT_SAMPLERS = {
        EXPERIMENT_SERIES: SamplerSpec.PREFIX,
        EXPERIMENT_UNORDERED_SUM: SamplerSpec.PREFIX,
        EXPERIMENT_UNORDERED_MEAN: SamplerSpec.PREFIX,
        EXPERIMENT_SEQUENCE: SamplerSpec.PREFIX,
        EXPERIMENT_EDS_MEAN: SamplerSpec.EDS,
        EXPERIMENT_CANTOR: SamplerSpec.CANTOR_K,
    }

    NUMBERS = ('a', 'b', 'M', 'c', 'n', 'ratio', 'point', 'offset', 'tol_abs', 'divergence', 'separation',
               'growth', 'expect_value', 'expect_tol')
    INTEGERS = ('base', 'seed', 'first', 'size', 'k', 'tail_window', 'window', 'max_level', 'trials', 'max_points')
    TOLERANCE_KEYS = ('tol_abs', 'window', 'divergence', 'separation', 'max_level', 'growth', 'max_points')
    SAMPLER_KEYS = ('offset', 'rule', 'parity', 'k', 'ratio', 'exact')

    def __init__(self, **fields):
        fields.setdefault('name', fields.get('experiment'))
        fields.setdefault('seed', 0)
        fields.setdefault('base', 1)
        fields.setdefault('schedule', None)
        fields.setdefault('expect', PredicateReport.HOLDS if fields.get('experiment') == 'properties'
                          else ExtensionEstimate.CONVERGED)
        super(ExperimentConfig, self).__init__(**fields)

    @classmethod
    def from_dict(cls, mapping):
        if not isinstance(mapping, dict) or not mapping:
            raise ConfigError('experiment', 'empty or malformed config')
        config = cls(**mapping)
        config.validate()
        return config

    def validate(self):
        experiment = self.get('experiment')
        if experiment not in EXPERIMENT_FUNCTIONS:
            raise ConfigError('experiment', 'unknown experiment {!r}'.format(experiment))
        for key in ExperimentConfig.NUMBERS:
            value = self.get(key)
            if value is not None and (isinstance(value, bool) or not isinstance(value, (int, float))):
                raise ConfigError(key, 'expected a number, got {!r}'.format(value))
        for key in ExperimentConfig.INTEGERS:
            value = self.get(key)
            if value is not None and (isinstance(value, bool) or not isinstance(value, int)):
                raise ConfigError(key, 'expected an integer, got {!r}'.format(value))
        catalog = ExperimentConfig.CATALOGS[experiment]
        if catalog is not None:
            key, entries = catalog
            if self.get(key) not in entries:
                raise ConfigError(key, '{!r} is not one of {}'.format(self.get(key), sorted(entries)))
        for key in ('sampler', 'sampler_b'):
            if self.get(key) is not None and self.get(key) not in SamplerSpec.STRATEGIES:
                raise ConfigError(key, 'unknown sampler {!r}'.format(self.get(key)))
        if self.schedule not in (None, SCHEDULE_LINEAR, SCHEDULE_DOUBLING):
            raise ConfigError('schedule', 'unknown schedule {!r}'.format(self.schedule))
        for key in ('rule', 'rule_b'):
            if self.get(key) is not None and self.get(key) not in EDS_RULES:
                raise ConfigError(key, 'unknown eds rule {!r}'.format(self.get(key)))
        if self.expect not in ExtensionEstimate.STATUSES + (PredicateReport.HOLDS, PredicateReport.COUNTEREXAMPLE):
            raise ConfigError('expect', 'unknown status {!r}'.format(self.expect))
        for key in ('intervals', 'rational_intervals', 'points'):
            value = self.get(key)
            if value is not None and not isinstance(value, list):
                raise ConfigError(key, 'expected a list, got {!r}'.format(value))
        for key in ('intervals', 'rational_intervals'):
            for entry in self.get(key) or []:
                if not isinstance(entry, list) or len(entry) != 2 or not all(_is_number(x, key) for x in entry):
                    raise ConfigError(key, 'expected [lo, hi] pairs of numbers, got {!r}'.format(entry))
        for point in self.get('points') or []:
            if not _is_number(point, 'points'):
                raise ConfigError('points', 'expected numbers, got {!r}'.format(point))
        if experiment == ExperimentConfig.EXPERIMENT_JORDAN and not self.get('intervals'):
            raise ConfigError('intervals', 'the jordan experiment needs at least one interval')
        if experiment == ExperimentConfig.EXPERIMENT_EDS_MEAN and not (self.get('intervals') or self.get('points')):
            raise ConfigError('intervals', 'the eds-mean experiment needs intervals or points')
        if experiment == ExperimentConfig.EXPERIMENT_SERIES and self.get('space', 'harmonic') not in ('harmonic',
                                                                                                       'dyadic'):
            raise ConfigError('space', 'expected harmonic or dyadic, got {!r}'.format(self.get('space')))
        self.tolerances()
        self.sampler_spec()
        return self

    def tolerances(self):
        values = {key: self.get(key) for key in ExperimentConfig.TOLERANCE_KEYS if self.get(key) is not None}
        try:
            return Tolerances(**values)
        except DomainError as e:
            field = next((key for key in values if str(e).startswith(key)), 'tol_abs')
            raise ConfigError(field, str(e))

    def sampler_spec(self, second=False, default=SamplerSpec.GRID, **params):
        """
        SamplerSpec of the first ladder, or of the second one (keys suffixed ``_b`` win).
        """
        def pick(key):
            return self.get(key + '_b', self.get(key)) if second else self.get(key)

        strategy = self.get('sampler_b') if second else self.get('sampler')
        strategy = strategy or ExperimentConfig.DEFAULT_SAMPLERS.get(self.experiment, default)
        for key in ExperimentConfig.SAMPLER_KEYS:
            if pick(key) is not None:
                params[key] = pick(key)
        if self.get('tail_window') is not None:
            params['window'] = self.tail_window
        try:
            return SamplerSpec(strategy, pick('schedule'), pick('base') or 1, self.seed + (1 if second else 0),
                               **params)
        except DomainError as e:
            raise ConfigError('sampler_b' if second else 'sampler', str(e))


def _intervals(config):
    components = [Interval(float(lo), float(hi)) for lo, hi in config.get('intervals') or []]
    components += [Interval(lo, hi, rational=True) for lo, hi in config.get('rational_intervals') or []]
    if config.get('points') and not components:
        return FinitePoints(config.points)
    return UnionOfIntervals(components)


def _ladder(config, s, space, jobs, default=SamplerSpec.GRID, stretched=False, **params):
    tol = config.tolerances()
    spec = config.sampler_spec(default=default, **params)
    if config.get('sampler_b') is None:
        return estimate_ext(s, space, spec, tol, stretched=stretched, jobs=jobs)
    other = config.sampler_spec(second=True, default=default, **params)
    return cross_check(s, space, spec, other, tol, stretched=stretched, jobs=jobs)


def run_series(config, jobs):
    spec = COEFFICIENTS[config.function](config)
    if config.get('space', 'harmonic') == 'dyadic':
        return _ladder(config, fn.sf_series_dyadic(spec), DyadicSet(), jobs, SamplerSpec.STRETCHED_DYADIC)
    return _ladder(config, fn.sf_series_harmonic(spec), HarmonicSet(), jobs, series=spec.a)


def run_unordered_sum(config, jobs):
    spec = COEFFICIENTS[config.function](config)
    space, s = fn.sf_unordered_sum(spec.a, config.get('first', 1), config.get('size'), spec.accumulation,
                                   spec.spread)
    return _ladder(config, s, space, jobs)


def run_unordered_mean(config, jobs):
    spec = COEFFICIENTS[config.function](config)
    mean = MEANS.get(config.get('mean', 'arithmetic'))
    if mean is None:
        raise ConfigError('mean', 'unknown mean {!r}'.format(config.get('mean')))
    space, s = sf_unordered_mean(spec.a, mean, config.get('first', 1), config.get('size'), spec.accumulation,
                                 spec.spread)
    return _ladder(config, s, space, jobs)


def run_riemann(config, jobs):
    a, b = config.get('a', 0.0), config.get('b', 1.0)
    f = REAL_FUNCTIONS[config.function](config)
    return _ladder(config, fn.sf_riemann(f, a, b), Interval(a, b), jobs)


def run_darboux(config, jobs):
    a, b = config.get('a', 0.0), config.get('b', 1.0)
    f = REAL_FUNCTIONS[config.function](config)
    sup = SUPREMA.get(config.get('sup', 'monotone'))
    if sup is None:
        raise ConfigError('sup', 'unknown supremum oracle {!r}'.format(config.get('sup')))
    return _ladder(config, fn.sf_darboux_upper(f, a, b, sup(f, config)), Interval(a, b), jobs)


def run_arclength(config, jobs):
    s = fn.sf_polygon_length(CURVES[config.function], config.function)
    return _ladder(config, s, Interval(0.0, 1.0), jobs)


def run_jordan(config, jobs):
    H = _intervals(config)
    return _ladder(config, fn.sf_inner_jordan(H), H, jobs)


def run_measure(config, jobs):
    variant = config.get('variant', fn.MEASURE_NONNEG)
    try:
        s = fn.sf_measure_integral(ORACLES[config.function](config), config.get('M'), variant)
    except DomainError as e:
        raise ConfigError('M', str(e))
    space = fn.measure_space(config.get('M'), variant)
    default = SamplerSpec.HALFLINE_GRID if isinstance(space, HalfLine) else SamplerSpec.GRID
    return _ladder(config, s, space, jobs, default)


def run_iso_mean(config, jobs):
    return mean_iso_limit(ISO_SETS[config.function](config), config.tolerances())


def run_eds_mean(config, jobs):
    return mean_eds_limit(_intervals(config), config.get('rule', 'midpoint'), config.tolerances(), config.seed,
                          config.base, config.get('rule_b'), jobs)


def run_cantor(config, jobs):
    if config.get('sampler_b') is None:
        config.sampler_b = SamplerSpec.CANTOR_L
    return _ladder(config, fn.sf_average(), CantorSet(), jobs, stretched=True)


def run_sequence(config, jobs):
    spec = COEFFICIENTS[config.function](config)
    return _ladder(config, fn.sf_sequence_limit(spec.a), HarmonicSet(), jobs)


def run_properties(config, jobs):
    return PROPERTY_FIXTURES[config.fixture](config)


EXPERIMENT_FUNCTIONS = {
    ExperimentConfig.EXPERIMENT_SERIES: run_series,
    ExperimentConfig.EXPERIMENT_UNORDERED_SUM: run_unordered_sum,
    ExperimentConfig.EXPERIMENT_UNORDERED_MEAN: run_unordered_mean,
    ExperimentConfig.EXPERIMENT_RIEMANN: run_riemann,
    ExperimentConfig.EXPERIMENT_DARBOUX: run_darboux,
    ExperimentConfig.EXPERIMENT_ARCLENGTH: run_arclength,
    ExperimentConfig.EXPERIMENT_JORDAN: run_jordan,
    ExperimentConfig.EXPERIMENT_MEASURE: run_measure,
    ExperimentConfig.EXPERIMENT_ISO_MEAN: run_iso_mean,
    ExperimentConfig.EXPERIMENT_EDS_MEAN: run_eds_mean,
    ExperimentConfig.EXPERIMENT_CANTOR: run_cantor,
    ExperimentConfig.EXPERIMENT_SEQUENCE: run_sequence,
    ExperimentConfig.EXPERIMENT_PROPERTIES: run_properties,
}


class TraceRow(RecordBase):

    def __init__(self, level, gap_hi, s_value, running_estimate, status):
        super(TraceRow, self).__init__(level=level, gap_hi=gap_hi, s_value=s_value,
                                       running_estimate=running_estimate, status=status)

    def as_list(self):
        return [str(self.level), format_real(self.gap_hi), format_real(self.s_value),
                format_real(self.running_estimate), self.status]


def trace_rows(estimate):
    """
    One row per level with the verdict of the trace up to that level.
    """
    rows = []
    for i, entry in enumerate(estimate.trace):
        status, value = classify_trace(estimate.trace[:i + 1], estimate.tolerances)
        rows.append(TraceRow(entry.level, entry.gap_hi, entry.value, entry.value if value is None else value, status))
    return rows


def write_atomic(path, header, rows):
    """
    Write a CSV file through a temporary file in the same directory.
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    handle, temporary = tempfile.mkstemp(dir=directory, suffix='.tmp')
    try:
        with os.fdopen(handle, 'w', newline='') as stream:
            writer = csv.writer(stream, lineterminator='\n')
            writer.writerow(header)
            writer.writerows(rows)
        os.replace(temporary, path)
    except Exception:
        os.unlink(temporary)
        raise


class ExperimentResult(RecordBase):

    def __init__(self, name, status, value=None, levels=0, wall_ms=0, exit_code=EXIT_OK):
        super(ExperimentResult, self).__init__(name=name, status=status, value=value, levels=levels,
                                               wall_ms=wall_ms, exit_code=exit_code)

    @property
    def passed(self):
        return self.exit_code == EXIT_OK

    def line(self):
        return 'RESULT {} {} {} {}'.format(self.status, format_real(self.value), self.levels, self.wall_ms)


def _exit_code(config, status, value):
    if status in (ExtensionEstimate.INCONCLUSIVE, PredicateReport.UNRESOLVED):
        return EXIT_INCONCLUSIVE
    if status != config.expect:
        return EXIT_ERROR
    if config.get('expect_value') is not None:
        tol = config.get('expect_tol', 1e-9)
        if value is None or compare(abs(float(value) - config.expect_value), tol) > 0:
            return EXIT_ERROR
    return EXIT_OK


def run_experiment(config, out=None, seed=None, jobs=1):
    """
    Run one validated config, write its trace CSV and return an ExperimentResult.

    :param out: CSV path; defaults to the config's ``out`` or ``<name>.csv``
    :param seed: overrides the config's seed
    """
    if seed is not None:
        config.seed = seed
    path = out or config.get('out') or '{}.csv'.format(config.name)
    started = time.monotonic()
    outcome = EXPERIMENT_FUNCTIONS[config.experiment](config, jobs)
    wall_ms = int(round((time.monotonic() - started) * 1000))

    if isinstance(outcome, PredicateReport):
        write_atomic(path, TRACE_HEADER, [])
        code = _exit_code(config, outcome.verdict, None)
        return ExperimentResult(config.name, outcome.verdict, None, outcome.trials, wall_ms, code)

    write_atomic(path, TRACE_HEADER, [row.as_list() for row in trace_rows(outcome)])
    if outcome.parts:
        stem, extension = os.path.splitext(path)
        write_atomic('{}-b{}'.format(stem, extension), TRACE_HEADER,
                     [row.as_list() for row in trace_rows(outcome.parts[1])])
    code = _exit_code(config, outcome.status, outcome.value)
    logger.info('%s: %s %s after %d levels', config.name, outcome.status, outcome.value, outcome.levels)
    return ExperimentResult(config.name, outcome.status, outcome.value, outcome.levels, wall_ms, code)


def load_config(path):
    """
    Parsed YAML mapping of a config file, or None when it cannot be read.
    """
    try:
        with open(path) as stream:
            return yaml.safe_load(stream)
    except (OSError, yaml.YAMLError) as exc:
        logger.error('cannot load %s: %s', path, exc)
        return None


def _run_member(path, directory, seed):
    name = os.path.splitext(os.path.basename(path))[0]
    try:
        config = ExperimentConfig.from_dict(load_config(path))
        config.name = name
        return run_experiment(config, os.path.join(directory, name + '.csv'), seed)
    except ExtensionError as e:
        logger.error('%s failed: %s', name, e)
    except Exception:
        logger.exception('%s crashed', name)
    return ExperimentResult(name, 'error', exit_code=EXIT_ERROR)


def run_suite(path, jobs=1, out=None, seed=None):
    """
    Run every ``*.yml`` config of a directory, print one SUITE line per member and a total,
    and write ``suite-summary.csv``. Returns (exit code, results).
    """
    directory = out or path
    configs = sorted(glob.glob(os.path.join(path, '*.yml')))
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as executor:
        results = list(executor.map(lambda member: _run_member(member, directory, seed), configs))
    for result in results:
        print('SUITE {} {} {}'.format(result.name, 'PASS' if result.passed else 'FAIL', result.status))
    passed = sum(1 for result in results if result.passed)
    print('SUITE TOTAL {}/{}'.format(passed, len(results)))
    write_atomic(os.path.join(directory, 'suite-summary.csv'), SUMMARY_HEADER,
                 [[r.name, 'PASS' if r.passed else 'FAIL', r.status, format_real(r.value), r.levels, r.exit_code]
                  for r in results])
    return (EXIT_OK if passed == len(results) else EXIT_ERROR), results
