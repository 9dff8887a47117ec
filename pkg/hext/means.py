"""
Means of infinite sets: unordered averages over index universes, the isolated-point
mean and the evenly-distributed-sample mean.
"""
import logging
import math

import numpy as np

from hext.core import RecordBase, DomainError, DOMAIN_STRETCHED, DOMAIN_CLASS_S
from hext.engine import SetFunction, Tolerances, TraceEntry, ExtensionEstimate, classify_trace, \
    estimate_ext, cross_check
from hext.samplers import SamplerSpec, EDS_MIDPOINT
from hext.helpers import SCHEDULE_DOUBLING
from hext.spaces import FunctionInduced, DyadicSet, vectorized


logger = logging.getLogger(__name__)

ISO_CHUNK = 1024
ISO_MAX_TERMS = 1 << 26


class MeanSpec(object):
    """
    A mean of finite sequences of reals with the regularity conditions it claims:
    permutation invariance, continuity along convergent sequences and interval stability.
    """

    def __init__(self, mean, name='mean', permutation_invariant=True, prefix_continuous=True,
                 interval_stable=True, positive=False):
        self.mean = mean
        self.name = name
        self.permutation_invariant = permutation_invariant
        self.prefix_continuous = prefix_continuous
        self.interval_stable = interval_stable
        self.positive = positive

    def __str__(self):
        return self.name

    def __call__(self, values):
        values = np.asarray(values, dtype=float)
        if not len(values):
            raise DomainError('the {} mean of an empty sequence is undefined'.format(self.name))
        if self.positive and not values.min() > 0:
            raise DomainError('the {} mean needs positive values'.format(self.name))
        return float(self.mean(values))

    @property
    def regular(self):
        return self.permutation_invariant and self.prefix_continuous and self.interval_stable

    def spot_check(self, rng, trials=20, size=12):
        """
        Names of the claimed conditions that fail on random inputs; empty when none does.
        """
        failed = []
        for _ in range(trials):
            values = rng.uniform(0.1, 2.0, size)
            value = self(values)
            if self.permutation_invariant and abs(self(rng.permutation(values)) - value) > 1e-9:
                failed.append('permutation-invariant')
            if self.interval_stable:
                inside = float(rng.uniform(values.min(), values.max()))
                extended = self(np.append(values, inside))
                if not values.min() - 1e-12 <= extended <= values.max() + 1e-12:
                    failed.append('interval-stable')
            if self.prefix_continuous:
                c = float(rng.uniform(0.1, 2.0))
                drift = [abs(self(np.append(values, np.full(count, c))) - c) for count in (100, 10000)]
                if not drift[1] < drift[0] or drift[1] > 1e-2:
                    failed.append('prefix-continuous')
        return sorted(set(failed))


ARITHMETIC = MeanSpec(np.mean, 'arithmetic')
QUADRATIC = MeanSpec(lambda x: math.sqrt(np.mean(x ** 2)), 'quadratic', positive=True)
GEOMETRIC = MeanSpec(lambda x: math.exp(np.mean(np.log(x))), 'geometric', positive=True)

MEANS = {m.name: m for m in (ARITHMETIC, QUADRATIC, GEOMETRIC)}


def sf_unordered_mean(a, mean=ARITHMETIC, first=1, size=None, accumulation=(), tail_bound=None):
    """
    s(K) = mean of {a(i) : i in K} over the index universe with the pseudo-metric |a(x) - a(y)|.
    """
    if not mean.regular:
        raise DomainError('the unordered mean needs a regular mean, {} is not'.format(mean))
    space = FunctionInduced(a, first=first, size=size, accumulation=accumulation, tail_bound=tail_bound)

    def evaluate(K):
        if not len(K):
            raise DomainError('the unordered mean of the empty set is undefined')
        return mean(K.coords)
    return space, SetFunction(evaluate, 'unordered {} mean'.format(mean))


class OracleVerdict(RecordBase):

    EXISTS = 'exists'
    NOT_EXISTS = 'not-exists'
    UNKNOWN = 'unknown'

    def __init__(self, verdict, value=None, spread=None):
        super(OracleVerdict, self).__init__(verdict=verdict, value=value, spread=spread)


def _split(block):
    """
    Sorted block cut at its widest gap: (gap, lower part, upper part).
    """
    values = np.sort(block)
    gaps = np.diff(values)
    j = int(np.argmax(gaps))
    return float(gaps[j]), values[:j + 1], values[j + 1:]


def unordered_average_oracle(a, first=1, cutoff=4096, tol=1e-6):
    """
    Decide whether the unordered average of a exists from the first ``cutoff`` terms:
    it does exactly when a is eventually constant or converges.
    """
    a = vectorized(a)
    values = a(np.arange(first, first + cutoff))
    tail = values[cutoff // 2:]
    if float(np.ptp(tail)) <= tol:
        return OracleVerdict(OracleVerdict.EXISTS, float(tail[-1]), float(np.ptp(tail)))

    quarter = cutoff // 4
    halves = [values[cutoff // 2:cutoff // 2 + quarter], values[cutoff // 2 + quarter:]]
    clustered = True
    for half in halves:
        gap, low, high = _split(half)
        spread = max(float(np.ptp(low)), float(np.ptp(high)))
        if not (gap > 4 * spread and min(len(low), len(high)) >= len(half) // 8):
            clustered = False
    if clustered:
        return OracleVerdict(OracleVerdict.NOT_EXISTS, spread=float(np.ptp(tail)))

    c = float(np.median(values[cutoff // 2:]))
    edges = [cutoff // 16, cutoff // 8, cutoff // 4, cutoff // 2, cutoff]
    deviations = [float(np.abs(values[lo:hi] - c).max()) for lo, hi in zip(edges, edges[1:])]
    shrinking = all(later <= earlier for earlier, later in zip(deviations, deviations[1:]))
    if shrinking and deviations[-1] < deviations[0] / 2:
        return OracleVerdict(OracleVerdict.EXISTS, c, deviations[-1])
    logger.info('unordered average of %s undecided at cutoff %d: deviations %s', a, cutoff, deviations)
    return OracleVerdict(OracleVerdict.UNKNOWN, spread=deviations[-1])


class IsoSetSpec(object):
    """
    Bounded set H given as finitely many convergent sequences (term, limit) plus finitely
    many points, with |h| < bound. The accumulation set H' is the set of the limits.
    """

    def __init__(self, sequences=(), points=(), bound=None):
        self.sequences = [(vectorized(term), float(limit)) for term, limit in sequences]
        self.points = np.unique(np.asarray(points, dtype=float))
        self.limits = np.unique(np.asarray([limit for _, limit in self.sequences], dtype=float))
        self.bound = bound
        if bound is None:
            self.bound = 1.0 + max([abs(float(x)) for x in self.points] + [abs(x) for x in self.limits] + [0.0])

    def __str__(self):
        return 'iso-set(sequences={}, points={})'.format(len(self.sequences), self.points.tolist())

    def distance_to_limits(self, xs):
        xs = np.asarray(xs, dtype=float)
        if not len(self.limits):
            return np.full(xs.shape, np.inf)
        return np.abs(xs[:, None] - self.limits[None, :]).min(axis=1)

    def isolated(self, delta):
        """
        Points of H - H' at distance >= delta from H', sorted.
        """
        found = [self.points]
        for term, limit in self.sequences:
            start = 1
            while start < ISO_MAX_TERMS:
                chunk = term(np.arange(start, start + ISO_CHUNK))
                near = np.abs(chunk - limit) < delta
                found.append(chunk[~near])
                if near.all():
                    break
                start += ISO_CHUNK
            else:
                raise DomainError('{} does not approach {} within {} terms'.format(self, limit, ISO_MAX_TERMS))
        points = np.unique(np.concatenate(found))
        return points[self.distance_to_limits(points) >= delta]


def mean_iso(spec, delta):
    """
    Arithmetic mean of the points of H outside the open delta-neighbourhood of H'.
    """
    points = spec.isolated(delta)
    if not len(points):
        raise DomainError('no isolated point of {} at distance >= {}'.format(spec, delta))
    return float(np.mean(points))


def mean_iso_limit(spec, tol=None):
    """
    Limit of mean_iso over delta = 2^-level, classified by the ladder window rule.
    """
    tol = tol or Tolerances(tol_abs=1e-3, max_level=24)
    trace = []
    for level in range(1, tol.max_level + 1):
        delta = 2.0 ** -level
        points = spec.isolated(delta)
        if not len(points):
            continue
        trace.append(TraceEntry(level, delta, float(np.mean(points))))
        status, value = classify_trace(trace, tol)
        if status != ExtensionEstimate.INCONCLUSIVE:
            logger.info('isolated mean of %s: %s %s at delta=%s', spec, status, value, delta)
            return ExtensionEstimate(status, value, trace, tol)
    return ExtensionEstimate(ExtensionEstimate.INCONCLUSIVE, None, trace, tol)


def prefix_averages(sequence):
    sequence = np.asarray(sequence, dtype=float)
    return np.cumsum(sequence) / np.arange(1, len(sequence) + 1)


def arrange_blocks(head, block):
    """
    Order ``block`` after the sequence ``head`` so that every intermediate average stays
    between the averages before and after the block, up to one step of 2M/(n+1): below
    the final average take the largest remaining value, otherwise the smallest.
    """
    remaining = sorted(float(x) for x in block)
    total, count = float(np.sum(head)), len(head)
    target = (total + sum(remaining)) / (count + len(remaining))
    arranged = []
    lo, hi = 0, len(remaining) - 1
    while lo <= hi:
        if count and total / count < target:
            x = remaining[hi]
            hi -= 1
        else:
            x = remaining[lo]
            lo += 1
        arranged.append(x)
        total += x
        count += 1
    return arranged


def iso_blocks(spec, count):
    """
    Isolated points grouped by their distance to H', farthest group first, with at least
    ``count`` points in total.
    """
    level = 1
    while True:
        points = spec.isolated(2.0 ** -level)
        if len(points) >= count or level >= 50:
            break
        level += 1
    if len(points) < count:
        raise DomainError('{} has fewer than {} isolated points'.format(spec, count))
    distances = spec.distance_to_limits(points)
    keys = np.round(distances, 15)
    order = np.unique(keys)[::-1]
    return [points[keys == key] for key in order]


def arrange_iso_sequence(spec, n):
    """
    The first n terms of H - H' arranged block by block (by decreasing distance to H')
    so that prefix averages follow the isolated means.
    """
    sequence = []
    for block in iso_blocks(spec, n):
        if not sequence:
            sequence.extend(block.tolist())
        else:
            sequence.extend(arrange_blocks(sequence, block))
        if len(sequence) >= n:
            break
    return np.asarray(sequence[:n], dtype=float)


def sf_mean_iso_dyadic(spec, count=4096):
    """
    The isolated mean as an extension over stretched sets of {1/2^m}: the point 1/2^m
    carries the m-th arranged term and s is the average over K.
    """
    terms = arrange_iso_sequence(spec, count)
    space = DyadicSet(first=1)

    def evaluate(K):
        if not len(K):
            raise DomainError('the isolated mean of the empty set is undefined')
        exponents = np.rint(-np.log2(K.values)).astype(np.int64)
        if exponents.max() > count:
            raise DomainError('{} reaches beyond the {} arranged terms'.format(K, count))
        return float(np.mean(terms[exponents - 1]))
    return space, SetFunction(evaluate, 'isolated mean of {}'.format(spec), DOMAIN_STRETCHED)


def sf_mean_eds():
    def evaluate(K):
        if not len(K):
            raise DomainError('the mean of the empty set is undefined')
        return float(np.mean(K.values))
    return SetFunction(evaluate, 'eds mean', DOMAIN_CLASS_S)


def mean_eds_limit(H, rule=EDS_MIDPOINT, tol=None, seed=0, base=16, compare_rule=None, jobs=1):
    """
    Mean of evenly distributed samples of H over n = base * 2^(level-1) bins. With
    ``compare_rule`` a second ladder using that representative rule is cross-checked.
    """
    s = sf_mean_eds()
    spec = SamplerSpec(SamplerSpec.EDS, SCHEDULE_DOUBLING, base, seed, rule=rule)
    if compare_rule is None:
        return estimate_ext(s, H, spec, tol, jobs=jobs)
    other = SamplerSpec(SamplerSpec.EDS, SCHEDULE_DOUBLING, base, seed + 1, rule=compare_rule)
    return cross_check(s, H, spec, other, tol, jobs=jobs)
