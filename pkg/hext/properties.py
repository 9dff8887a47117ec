"""
Sampling checks of structural properties of set functions.

Every check draws its sets from a generator seeded with ``seed`` and returns a
PredicateReport. A verdict of HOLDS only means that no sampled case failed.
"""
import logging
import math
from fractions import Fraction

import numpy as np

from hext.core import FiniteSet, UnresolvedError
from hext.helpers import compare


logger = logging.getLogger(__name__)

DEFAULT_LEVELS = 12


class PredicateReport(object):
    """
    Outcome of a property check.

    :param counterexample: dict with the sets ``K`` and ``L``, their ``values`` and the
        ``trial`` index, so that the failing draw can be replayed from ``seed``
    """

    HOLDS = 'holds-on-samples'
    COUNTEREXAMPLE = 'counterexample'
    UNRESOLVED = 'unresolved'

    def __init__(self, predicate, verdict, trials=0, parameters=None, seed=None, counterexample=None,
                 reason=None):
        self.predicate = predicate
        self.verdict = verdict
        self.trials = trials
        self.parameters = parameters or {}
        self.seed = seed
        self.counterexample = counterexample
        self.reason = reason

    def __str__(self):
        text = 'PredicateReport<{} {}, trials={}>'.format(self.predicate, self.verdict, self.trials)
        if self.counterexample is not None:
            text += ' K={K} L={L} values={values}'.format(**self.counterexample)
        return text

    __repr__ = __str__

    @property
    def holds(self):
        return self.verdict == PredicateReport.HOLDS

    @property
    def failed(self):
        return self.verdict == PredicateReport.COUNTEREXAMPLE


def _counterexample(K, L, values, trial):
    return {'K': K, 'L': L, 'values': values, 'trial': trial}


def _samples(space, rng, samples, count, size):
    if samples is not None:
        return list(samples)
    drawn = [space.sample_points(rng, size) for _ in range(count)]
    return [K for K in drawn if len(K)]


def _ladder(space, levels, K=None):
    """
    Halving scales from diam / 4. Unbounded spaces start from 1 / (2 (1 + max |K|)), the
    scale at which a dense set reaches past K, or from 1/4 without K.
    """
    diameter = float(space.diameter())
    if math.isfinite(diameter):
        top = diameter / 4
    elif K is not None and len(K):
        top = 0.5 / (1.0 + float(np.abs(K.values).max()))
    else:
        top = 0.25
    return [top * 2.0 ** -j for j in range(levels)]


def check_increasing(s, space, trials=50, seed=0, size=6):
    """
    K subset L implies s(K) <= s(L), on random chains.
    """
    rng = np.random.default_rng(seed)
    parameters = {'size': size}
    for trial in range(trials):
        K = space.sample_points(rng, size)
        L = K.union(space.sample_points(rng, size))
        u, v = s(K), s(L)
        if compare(u, v) > 0:
            logger.info('%s is not increasing: s(%s)=%s > s(%s)=%s', s, K, u, L, v)
            return PredicateReport('increasing', PredicateReport.COUNTEREXAMPLE, trial + 1, parameters, seed,
                                   _counterexample(K, L, (u, v), trial))
    return PredicateReport('increasing', PredicateReport.HOLDS, trials, parameters, seed)


def _d_condition(u, v, eps, non_strict, decreasing):
    """
    s(K) - eps < s(L), or s(L) < s(K) + eps for the decreasing variant.
    """
    if decreasing:
        u, v = -u, -v
    c = compare(u - eps, v)
    return c <= 0 if non_strict else c < 0


def check_d_increasing(s, space, eps=(1e-2,), samples=None, sample_count=5, size=4, trials=20, seed=0,
                       levels=DEFAULT_LEVELS, non_strict=False, decreasing=False):
    """
    For every eps and sampled K, search the halving delta ladder for a level where every
    random delta-sdense L satisfies the d-increasing (or d-decreasing) inequality.

    :param non_strict: use s(K) - eps <= s(L)
    """
    rng = np.random.default_rng(seed)
    name = 'd-decreasing' if decreasing else 'd-increasing'
    parameters = {'eps': list(eps), 'levels': levels, 'non_strict': non_strict}
    count = 0
    try:
        for e in eps:
            for K in _samples(space, rng, samples, sample_count, size):
                u = s(K)
                failure = None
                for delta in _ladder(space, levels, K):
                    failure = None
                    for trial in range(trials):
                        L = space.random_sdense(rng, delta, variant=trial)
                        v = s(L)
                        count += 1
                        if not _d_condition(u, v, e, non_strict, decreasing):
                            failure = _counterexample(K, L, (u, v), trial)
                            break
                    if failure is None:
                        logger.debug('%s: %s holds for K=%s, eps=%s at delta=%s', s, name, K, e, delta)
                        break
                if failure is not None:
                    logger.info('%s is not %s: K=%s, eps=%s', s, name, K, e)
                    return PredicateReport(name, PredicateReport.COUNTEREXAMPLE, count, parameters, seed, failure)
    except UnresolvedError as e:
        return PredicateReport(name, PredicateReport.UNRESOLVED, count, parameters, seed, reason=str(e))
    return PredicateReport(name, PredicateReport.HOLDS, count, parameters, seed)


def certify_d_increasing(s, space, samples, eps, delta, trials=100, seed=0, non_strict=True):
    """
    Check s(K) - eps <= s(L) for ``trials`` random L that are delta(K, eps)-sdense, with
    delta taken from a closed-form recipe.

    :param delta: number, or callable (K, eps) -> delta
    """
    rng = np.random.default_rng(seed)
    parameters = {'eps': eps, 'trials': trials}
    count = 0
    for K in samples:
        u = s(K)
        d = delta(K, eps) if callable(delta) else delta
        for trial in range(trials):
            L = space.random_sdense(rng, d, variant=trial)
            v = s(L)
            count += 1
            if not _d_condition(u, v, eps, non_strict, False):
                return PredicateReport('d-increasing certificate', PredicateReport.COUNTEREXAMPLE, count,
                                       parameters, seed, _counterexample(K, L, (u, v), trial))
    return PredicateReport('d-increasing certificate', PredicateReport.HOLDS, count, parameters, seed)


def _continuity(name, s, samples, eps, scales, trials, seed, parameters, move):
    """
    For every K look for a scale eta at which all moved sets L = move(K, eta) stay within
    eps of s(K).
    """
    count = 0
    for K in samples:
        u = s(K)
        failure = None
        for eta in scales:
            failure = None
            for trial in range(trials):
                L = move(K, eta)
                v = s(L)
                count += 1
                if not compare(abs(u - v), eps) < 0:
                    failure = _counterexample(K, L, (u, v), trial)
                    break
            if failure is None:
                break
        if failure is not None:
            logger.info('%s is not %s at K=%s', s, name, K)
            return PredicateReport(name, PredicateReport.COUNTEREXAMPLE, count, parameters, seed, failure)
    return PredicateReport(name, PredicateReport.HOLDS, count, parameters, seed)


def check_d_continuous(s, space, n=None, samples=None, sample_count=5, eps=1e-3, scales=None, trials=20,
                       seed=0, densify=4096):
    """
    Continuity of s restricted to n-point sets: small perturbations of each point move
    s(K) by less than eps. With n=None sets near K may also gain points, which checks
    continuity on all finite sets.

    :param densify: cap on the points added near K when n is None
    """
    rng = np.random.default_rng(seed)
    scales = scales or _ladder(space, DEFAULT_LEVELS)
    if samples is None:
        samples = _samples(space, rng, None, sample_count, n or 4)
        if n is not None:
            samples = [K for K in samples if len(K) == n]

    def move(K, eta):
        L = space.perturb(K, eta, rng)
        if n is None:
            count = min(int(math.ceil(3 / eta)), densify)
            L = L.union(space.points_near(K, eta, count, rng))
        return L

    name = 'd-continuous' if n is not None else 'continuous'
    return _continuity(name, s, samples, eps, scales, trials, seed, {'n': n, 'eps': eps}, move)


def check_left_continuous(s, space, direction='down', samples=None, sample_count=5, size=3, eps=1e-3,
                          scales=None, trials=20, seed=0):
    """
    Moving every point of K down (or, for the weaker variant, up) by less than eta moves
    s(K) by less than eps for small eta.
    """
    if direction not in ('down', 'up'):
        raise ValueError('direction must be down or up, got {}'.format(direction))
    rng = np.random.default_rng(seed)
    scales = scales or _ladder(space, DEFAULT_LEVELS)
    samples = _samples(space, rng, samples, sample_count, size)

    def move(K, eta):
        return space.perturb(K, eta, rng, direction)

    name = 'left-continuous' if direction == 'down' else 'right-continuous'
    return _continuity(name, s, samples, eps, scales, trials, seed,
                       {'direction': direction, 'eps': eps}, move)


def check_l_continuous(s, J, space, samples=None, sample_count=10, size=4, eps=1e-3, seed=0, max_steps=12):
    """
    For sampled K of the space find L in the dense subspace J with d_H(L, J) <= 2 d_H(K, J)
    and |s(K) - s(L)| < eps; L rounds each point of K to a rational of growing denominator.
    """
    rng = np.random.default_rng(seed)
    parameters = {'eps': eps, 'max_steps': max_steps}
    count = 0
    for K in _samples(space, rng, samples, sample_count, size):
        u = s(K)
        reach = 2 * J.gap(K).hi
        L, v = None, None
        for step in range(1, max_steps + 1):
            L = FiniteSet.from_values([Fraction(x).limit_denominator(10 ** step) for x in K.as_list()])
            count += 1
            if not all(J.contains(x) for x in L.as_list()):
                continue
            v = s(L)
            if compare(J.gap(L).hi, reach) <= 0 and compare(abs(u - v), eps) < 0:
                break
        else:
            logger.info('%s is not l-continuous on %s at K=%s', s, J, K)
            return PredicateReport('l-continuous', PredicateReport.COUNTEREXAMPLE, count, parameters, seed,
                                   _counterexample(K, L, (u, v), max_steps))
    return PredicateReport('l-continuous', PredicateReport.HOLDS, count, parameters, seed)
