"""
Extension estimates: run a refinement ladder K_1, K_2, ... with gaps -> 0 and decide
whether s(K_level) converges, diverges, or disagrees across ladders.
"""
import logging
import math
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor

from hext.core import (FiniteSet, RecordBase, DomainError, SamplerError, EvaluationError,
                       DOMAIN_ALL, DOMAIN_STRETCHED, DOMAIN_CLASS_S)
from hext.helpers import compare, ext_sum, ext_mul, INF
from hext.metric import gap_to_space, is_stretched
from hext.samplers import refine


logger = logging.getLogger(__name__)


TraceEntry = namedtuple('TraceEntry', ['level', 'gap_hi', 'value'])


class SetFunction(object):
    """
    A pure function on finite subsets of a space, with values in the extended reals.

    :param evaluate: callable FiniteSet -> real, +inf or -inf
    :param domain: DOMAIN_ALL, DOMAIN_STRETCHED or DOMAIN_CLASS_S
    """

    DOMAINS = (DOMAIN_ALL, DOMAIN_STRETCHED, DOMAIN_CLASS_S)

    def __init__(self, evaluate, name='s', domain=DOMAIN_ALL):
        if domain not in SetFunction.DOMAINS:
            raise DomainError('unknown set function domain: {}'.format(domain))
        self.evaluate = evaluate
        self.name = name
        self.domain = domain

    def __str__(self):
        return self.name

    __repr__ = __str__

    def __call__(self, K):
        value = self.evaluate(K)
        if isinstance(value, float) and math.isnan(value):
            raise EvaluationError('{} returned NaN on {}'.format(self.name, K))
        return value

    def combine(self, other, F, name=None):
        """
        K -> F(s(K), t(K)).
        """
        domain = self.domain if self.domain == other.domain else DOMAIN_ALL
        return SetFunction(lambda K: F(self(K), other(K)), name or 'F({}, {})'.format(self, other), domain)

    def __add__(self, other):
        return self.combine(other, lambda u, v: ext_sum([u, v]), '{} + {}'.format(self, other))

    def __sub__(self, other):
        return self + (-1) * other

    def __mul__(self, alpha):
        return SetFunction(lambda K: ext_mul(alpha, self(K)), '{}*{}'.format(alpha, self), self.domain)

    __rmul__ = __mul__

    def __neg__(self):
        return (-1) * self

    def pullback(self, f, name=None):
        """
        K -> s(f(K)) for a point map f (vectorized over coordinates).
        """
        def evaluate(K):
            return self(FiniteSet.from_values(f(K.values)))
        return SetFunction(evaluate, name or '{} o f'.format(self), self.domain)

    def without(self, J, name=None):
        """
        K -> s(K - J).
        """
        def evaluate(K):
            return self(K.select([not J.contains(x) for x in K.as_list()]))
        return SetFunction(evaluate, name or '{} without {}'.format(self, J), self.domain)


class Tolerances(RecordBase):
    """
    Stopping rules of a ladder.

    * ``tol_abs`` - the last ``window`` values must lie within tol_abs of each other
    * ``divergence`` - threshold T for the divergence verdicts
    * ``separation`` - largest distance between two converged ladders that still agree
      (10 tol_abs by default)
    * ``growth`` - the divergence ramp. Levels are read at every halving of the gap bound;
      the ramp fires when the last ``window`` of them rise by more than tol_abs each and
      every rise is at least growth times the previous one. None switches it off.
    * ``max_points`` - levels whose resolution exceeds this are not sampled
    """

    def __init__(self, tol_abs=1e-9, window=4, divergence=1e9, separation=None, max_level=60, growth=1.0,
                 max_points=2 ** 22):
        if not tol_abs > 0 or not divergence > 0 or not max_level >= 1:
            raise DomainError('tolerances must be positive: tol_abs={}, divergence={}, max_level={}'.format(
                tol_abs, divergence, max_level))
        if not max_points >= 1:
            raise DomainError('max_points must be positive, got {}'.format(max_points))
        if window < 2:
            raise DomainError('the stabilization window needs at least 2 levels, got {}'.format(window))
        if growth is not None and not growth > 0:
            raise DomainError('growth must be positive or None, got {}'.format(growth))
        if separation is None:
            separation = 10 * tol_abs
        super(Tolerances, self).__init__(tol_abs=tol_abs, window=window, divergence=divergence,
                                         separation=separation, max_level=max_level, growth=growth,
                                         max_points=max_points)


class ExtensionEstimate(object):
    """
    Verdict of a ladder run together with its trace.
    """

    CONVERGED = 'converged'
    DIVERGES_PLUS = 'diverges-plus'
    DIVERGES_MINUS = 'diverges-minus'
    NO_EXTENSION = 'no-extension-evidence'
    INCONCLUSIVE = 'inconclusive'

    STATUSES = (CONVERGED, DIVERGES_PLUS, DIVERGES_MINUS, NO_EXTENSION, INCONCLUSIVE)

    def __init__(self, status, value=None, trace=None, tolerances=None, witness=None, parts=None):
        """
        :param witness: the finest set of the ladder and its value
        :param parts: the two estimates a cross-check was built from
        """
        self.status = status
        self.value = value
        self.trace = trace or []
        self.tolerances = tolerances
        self.witness = witness
        self.parts = parts or ()

    def __str__(self):
        if self.value is None:
            return 'ExtensionEstimate<{}, levels={}>'.format(self.status, len(self.trace))
        return 'ExtensionEstimate<{} {}, levels={}>'.format(self.status, self.value, len(self.trace))

    __repr__ = __str__

    @property
    def converged(self):
        return self.status == ExtensionEstimate.CONVERGED

    @property
    def diverges(self):
        return self.status in (ExtensionEstimate.DIVERGES_PLUS, ExtensionEstimate.DIVERGES_MINUS)

    @property
    def levels(self):
        return len(self.trace)


def halving_levels(trace):
    """
    The entries at which the gap bound has at least halved since the previous one taken.
    """
    picked = []
    for entry in trace:
        if not picked or compare(entry.gap_hi, picked[-1].gap_hi / 2) <= 0:
            picked.append(entry)
    return picked


def _ramp(values, tol):
    increments = [b - a for a, b in zip(values, values[1:])]
    if not all(math.isfinite(float(inc)) for inc in increments):
        return False
    if not all(inc > tol.tol_abs for inc in increments):
        return False
    return all(later >= tol.growth * earlier for earlier, later in zip(increments, increments[1:]))


def classify_trace(trace, tol):
    """
    (status, value) of a trace: converged when the last ``window`` values are within
    tol_abs, diverging when the finest value is beyond the threshold or the ramp fires.

    The ramp reads s at every halving of the gap: when each halving raises the value by
    a step that does not shrink, the values passed are thresholds n_k with
    gap < delta_k => s > n_k, and n_k has no finite bound.
    """
    values = [entry.value for entry in trace]
    if not values:
        return ExtensionEstimate.INCONCLUSIVE, None
    last = values[-tol.window:]
    if len(last) == tol.window and all(math.isfinite(float(v)) for v in last):
        if compare(max(last) - min(last), tol.tol_abs) <= 0:
            return ExtensionEstimate.CONVERGED, last[-1]
    finest = values[-1]
    if finest > tol.divergence:
        return ExtensionEstimate.DIVERGES_PLUS, INF
    if finest < -tol.divergence:
        return ExtensionEstimate.DIVERGES_MINUS, -INF
    if tol.growth is not None:
        picked = halving_levels(trace)[-tol.window:]
        if len(picked) == tol.window and picked[-1] is trace[-1]:
            steps = [entry.value for entry in picked]
            if _ramp(steps, tol):
                return ExtensionEstimate.DIVERGES_PLUS, INF
            if _ramp([-v for v in steps], tol):
                return ExtensionEstimate.DIVERGES_MINUS, -INF
    return ExtensionEstimate.INCONCLUSIVE, None


def _check_domain(s, spec, stretched):
    if s.domain == DOMAIN_STRETCHED and not (stretched or spec.domain == DOMAIN_STRETCHED):
        raise DomainError('{} is defined on stretched sets only; sampler {} is not'.format(s, spec.describe()))
    if s.domain == DOMAIN_CLASS_S and spec.domain != DOMAIN_CLASS_S:
        raise DomainError('{} is defined on class S sets only; sampler {} is not'.format(s, spec.describe()))


def _evaluate_level(s, space, target, spec, level, stretched):
    K = refine(space, spec, level)
    if stretched and not is_stretched(K, space):
        raise SamplerError('level {} of {} is not stretched'.format(level, spec.describe()))
    bound = gap_to_space(K, target)
    try:
        value = s(K)
    except EvaluationError as e:
        e.level = level
        raise
    except Exception as e:
        raise EvaluationError('{} failed at level {}: {}'.format(s, level, e), level=level)
    return K, bound, value


def estimate_ext(s, space, spec, tol=None, within=None, stretched=False, jobs=1):
    """
    Run the ladder of ``spec`` on ``space`` until the trace converges, diverges or
    ``max_level`` is reached.

    :param within: measure gaps against this subspace instead of ``space``
    :param stretched: assert that every sampled set is stretched
    :param jobs: levels evaluated concurrently; results are merged in level order
    """
    tol = tol or Tolerances()
    _check_domain(s, spec, stretched)
    target = space if within is None else within
    trace = []
    witness = None
    level = 1
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as executor:
        while level <= tol.max_level:
            batch = [lvl for lvl in range(level, min(level + max(1, jobs), tol.max_level + 1))
                     if spec.resolution(lvl) <= tol.max_points]
            if not batch:
                logger.warning('%s: level %d needs resolution %d > max_points %d', s, level,
                               spec.resolution(level), tol.max_points)
                break
            futures = [executor.submit(_evaluate_level, s, space, target, spec, lvl, stretched) for lvl in batch]
            for lvl, future in zip(batch, futures):
                try:
                    K, bound, value = future.result()
                except EvaluationError as e:
                    e.trace = list(trace)
                    raise
                except MemoryError:
                    for pending in futures:
                        pending.cancel()
                    logger.warning('%s: out of memory sampling level %d of %s', s, lvl, spec.describe())
                    return _inconclusive(s, target, trace, tol, witness)
                if trace and compare(bound.hi, trace[-1].gap_hi) > 0:
                    raise SamplerError('gap grew from {} to {} at level {} of {}'.format(
                        trace[-1].gap_hi, bound.hi, lvl, spec.describe()))
                trace.append(TraceEntry(lvl, bound.hi, value))
                witness = (K, value)
                logger.debug('%s level %d: gap=%s value=%s', s, lvl, bound.hi, value)
                status, estimate = classify_trace(trace, tol)
                if status != ExtensionEstimate.INCONCLUSIVE:
                    for pending in futures:
                        pending.cancel()
                    logger.info('%s on %s: %s %s after %d levels', s, target, status, estimate, len(trace))
                    return ExtensionEstimate(status, estimate, trace, tol, witness)
            level = batch[-1] + 1
    return _inconclusive(s, target, trace, tol, witness)


def _inconclusive(s, target, trace, tol, witness):
    logger.info('%s on %s: inconclusive after %d levels', s, target, len(trace))
    return ExtensionEstimate(ExtensionEstimate.INCONCLUSIVE, None, trace, tol, witness)


def estimate_ext_stretched(s, space, spec, tol=None, jobs=1):
    return estimate_ext(s, space, spec, tol, stretched=True, jobs=jobs)


def estimate_ext_within(s, J, space, spec, tol=None, jobs=1):
    """
    Extension of s onto J within ``space``: sets are drawn from ``space`` and their gap is
    measured against J.
    """
    return estimate_ext(s, space, spec, tol, within=J, jobs=jobs)


def combine_estimates(first, second, tol):
    """
    Cross-check verdict of two independent ladders.
    """
    E = ExtensionEstimate
    parts = (first, second)
    witness = (first.witness, second.witness)
    if first.converged and second.converged:
        if compare(abs(first.value - second.value), tol.separation) <= 0:
            return E(E.CONVERGED, (first.value + second.value) / 2, first.trace, tol, witness, parts)
        return E(E.NO_EXTENSION, None, first.trace, tol, witness, parts)
    if first.diverges and second.diverges:
        if first.status == second.status:
            return E(first.status, first.value, first.trace, tol, witness, parts)
        return E(E.NO_EXTENSION, None, first.trace, tol, witness, parts)
    if (first.converged and second.diverges) or (first.diverges and second.converged):
        return E(E.NO_EXTENSION, None, first.trace, tol, witness, parts)
    return E(E.INCONCLUSIVE, None, first.trace, tol, witness, parts)


def cross_check(s, space, spec_a, spec_b, tol=None, within=None, stretched=False, jobs=1):
    """
    Run two ladders and compare their verdicts. Agreement is evidence, not proof: two
    samplers can agree by coincidence.
    """
    tol = tol or Tolerances()
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=2) as executor:
            a = executor.submit(estimate_ext, s, space, spec_a, tol, within, stretched, max(1, jobs // 2))
            b = executor.submit(estimate_ext, s, space, spec_b, tol, within, stretched, max(1, jobs // 2))
            first, second = a.result(), b.result()
    else:
        first = estimate_ext(s, space, spec_a, tol, within, stretched)
        second = estimate_ext(s, space, spec_b, tol, within, stretched)
    result = combine_estimates(first, second, tol)
    logger.info('cross-check of %s: %s (%s vs %s)', s, result.status, first.status, second.status)
    return result
