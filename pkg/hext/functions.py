"""
Set functions whose extensions are series sums, integrals, lengths and measures.

Every ``sf_*`` constructor returns a SetFunction (or a (space, SetFunction) pair when the
function defines its own space). Real-line functions work on ``K.values`` with numpy.
"""
import logging
import math
from fractions import Fraction

import numpy as np

from hext.core import FiniteSet, DomainError, OracleError, DOMAIN_STRETCHED
from hext.engine import SetFunction
from hext.helpers import ext_dot, INF
from hext.spaces import FunctionInduced, Interval, UnionOfIntervals, HalfLine, vectorized


logger = logging.getLogger(__name__)

ADDITIVITY_TOLERANCE = 1e-9


def pointwise(f):
    """
    Wrap a real function so that it accepts float arrays.
    """
    def evaluate(x):
        x = np.asarray(x, dtype=float)
        try:
            y = np.asarray(f(x), dtype=float)
            if y.shape == x.shape:
                return y
        except (TypeError, ValueError):
            pass
        return np.array([f(float(t)) for t in x.ravel()], dtype=float).reshape(x.shape)
    return evaluate


class SeriesSpec(object):
    """
    Coefficients a_first, a_first+1, ... of a series with an optional known sum and a
    bound on the tail after n terms.

    :param accumulation: accumulation values of the coefficients
    :param spread: spread(N) bounds the distance of a(i), i > N, to ``accumulation``
    """

    def __init__(self, a, name='a', value=None, tail_bound=None, first=1, accumulation=(0.0,), spread=None):
        self.a = vectorized(a)
        self.name = name
        self.value = value
        self.tail_bound = tail_bound
        self.first = first
        self.accumulation = tuple(accumulation)
        self.spread = spread or tail_bound

    def __str__(self):
        return self.name

    def partial_sum(self, n):
        return math.fsum(self.a(np.arange(self.first, n + 1)).tolist())

    def reference(self, n):
        """
        (partial sum of n terms, bound on its distance to the sum).
        """
        bound = self.tail_bound(n) if self.tail_bound is not None else None
        return self.partial_sum(n), bound

    @staticmethod
    def geometric(ratio=0.5):
        return SeriesSpec(lambda i: ratio ** np.asarray(i, dtype=float), 'geometric({})'.format(ratio),
                          value=ratio / (1 - ratio), tail_bound=lambda n: ratio ** (n + 1) / (1 - ratio))

    @staticmethod
    def alternating_harmonic():
        return SeriesSpec(lambda i: np.where(np.asarray(i) % 2 == 1, 1.0, -1.0) / np.asarray(i, dtype=float),
                          'alternating-harmonic', value=math.log(2), tail_bound=lambda n: 1.0 / (n + 1))

    @staticmethod
    def harmonic():
        return SeriesSpec(lambda i: 1.0 / np.asarray(i, dtype=float), 'harmonic', value=INF,
                          spread=lambda n: 1.0 / (n + 1))

    @staticmethod
    def constant(c=0.0):
        return SeriesSpec(lambda i: np.full(np.shape(i), float(c)), 'constant({})'.format(c),
                          value=0.0 if c == 0 else INF, accumulation=(c,), spread=lambda n: 0.0)

    @staticmethod
    def shifted_harmonic(c=0.0):
        """
        a_n = c + 1/n.
        """
        return SeriesSpec(lambda i: c + 1.0 / np.asarray(i, dtype=float), 'c+1/n({})'.format(c),
                          accumulation=(c,), spread=lambda n: 1.0 / (n + 1))

    @staticmethod
    def alternating_sign():
        """
        a_n = (-1)^n.
        """
        return SeriesSpec(lambda i: np.where(np.asarray(i) % 2 == 0, 1.0, -1.0), 'alternating-sign',
                          accumulation=(-1.0, 1.0), spread=lambda n: 0.0)

    @staticmethod
    def parity():
        """
        a_n = n mod 2. Prefixes and distinct prefixes of the induced space share their gap
        but not their sums.
        """
        return SeriesSpec(lambda i: (np.asarray(i) % 2).astype(float), 'parity', value=INF,
                          accumulation=(0.0, 1.0), spread=lambda n: 0.0)

    @staticmethod
    def two_clusters():
        """
        a_n = (n mod 2) + 1/n, accumulating at 0 and 1.
        """
        return SeriesSpec(lambda i: np.asarray(i) % 2 + 1.0 / np.asarray(i, dtype=float), 'two-clusters',
                          accumulation=(0.0, 1.0), spread=lambda n: 1.0 / (n + 1))

    @staticmethod
    def first_indicator():
        """
        a_1 = 1 and a_n = 0 otherwise.
        """
        return SeriesSpec(lambda i: np.where(np.asarray(i) == 1, 1.0, 0.0), 'first-indicator', value=1.0,
                          accumulation=(0.0,), spread=lambda n: 0.0)


def _positive(K):
    values = K.values
    if len(values) and not values.min() > 0:
        raise DomainError('expected positive points, got {}'.format(K))
    return values


def sf_series_harmonic(spec):
    """
    s(H) = sum of a_{1/h} over h in H, on {1/n}.
    """
    def evaluate(K):
        if not len(K):
            return 0.0
        indices = np.rint(1.0 / _positive(K)).astype(np.int64)
        return float(np.sum(spec.a(indices)))
    return SetFunction(evaluate, 'series[{}] on 1/n'.format(spec))


def sf_series_dyadic(spec):
    """
    s(H) = sum of a_{-log2 h} over h in H, on {1/2^n}; stretched sets only.
    """
    def evaluate(K):
        if not len(K):
            return 0.0
        values = _positive(K)
        exponents = np.rint(-np.log2(values)).astype(np.int64)
        if not np.array_equal(np.ldexp(1.0, -exponents), values):
            raise DomainError('not a dyadic set: {}'.format(K))
        return float(np.sum(spec.a(exponents)))
    return SetFunction(evaluate, 'series[{}] on 1/2^n'.format(spec), DOMAIN_STRETCHED)


def sf_unordered_sum(a, first=1, size=None, accumulation=(), tail_bound=None):
    """
    Unordered sum of a over the index universe with the pseudo-metric |a(x) - a(y)|.
    """
    space = FunctionInduced(a, first=first, size=size, accumulation=accumulation, tail_bound=tail_bound)

    def evaluate(K):
        return float(np.sum(K.coords)) if len(K) else 0.0
    return space, SetFunction(evaluate, 'unordered sum')


def sf_sequence_limit(a):
    """
    s(K) = a_{1/min K} on {1/n}.
    """
    a = vectorized(a)

    def evaluate(K):
        if not len(K):
            raise DomainError('the sequence functional needs a nonempty set')
        return float(a(np.array([int(round(1.0 / float(_positive(K).min())))]))[0])
    return SetFunction(evaluate, 'sequence limit')


def _augmented(K, a, b):
    values = K.values
    if len(values) and (values.min() < a or values.max() > b):
        raise DomainError('{} is not a subset of [{}, {}]'.format(K, a, b))
    return np.unique(np.concatenate([values, [a, b]]))


def sf_riemann(f, a=0.0, b=1.0):
    """
    Riemann functional of f over [a, b] on H u {a, b} = {x_0 < ... < x_n}:
    f(x_1)(x_2 - x_0) + f(x_3)(x_4 - x_2) + ..., closed by f(b)(x_n - x_{n-1}) when n is odd.
    """
    f = pointwise(f)

    def evaluate(K):
        x = _augmented(K, a, b)
        n = len(x) - 1
        k = np.arange(n // 2)
        total = float(np.sum(f(x[2 * k + 1]) * (x[2 * k + 2] - x[2 * k])))
        if n % 2:
            total += float(f(np.array([b]))[0]) * (x[n] - x[n - 1])
        return total
    return SetFunction(evaluate, 'riemann[{}, {}]'.format(a, b))


def monotone_sup(f):
    """
    Exact supremum oracle for monotone f: the larger endpoint value.
    """
    f = pointwise(f)
    return lambda lo, hi: np.maximum(f(lo), f(hi))


def breakpoint_sup(f, breakpoints):
    """
    Exact supremum oracle for continuous f that is monotone between ``breakpoints``.
    """
    f = pointwise(f)
    breakpoints = np.asarray(breakpoints, dtype=float)
    peaks = f(breakpoints)

    def sup(lo, hi):
        best = np.maximum(f(lo), f(hi))
        for t, value in zip(breakpoints, peaks):
            best = np.where((lo <= t) & (t <= hi), np.maximum(best, value), best)
        return best
    return sup


def point_mass_sup(point, value=1.0, base=0.0):
    """
    Supremum oracle for the function equal to ``value`` at ``point`` and ``base`` elsewhere.
    """
    return lambda lo, hi: np.where((lo <= point) & (point <= hi), max(value, base), base)


def probe_sup(f, probes=16):
    """
    Supremum estimate from ``probes`` + 1 equally spaced samples per cell. It can miss
    narrow peaks, so sums built on it are optimistic lower bounds of the upper sum.
    """
    f = pointwise(f)
    logger.warning('using probe-based suprema (%d probes per cell); upper sums are optimistic', probes)
    t = np.linspace(0.0, 1.0, probes + 1)

    def sup(lo, hi):
        grid = lo[:, None] + (hi - lo)[:, None] * t[None, :]
        return f(grid).max(axis=1)
    return sup


def sf_darboux_upper(f, a=0.0, b=1.0, sup=None):
    """
    Upper Darboux sum over the partition H u {a, b}.

    :param sup: vectorized oracle (lo, hi) -> sup f([lo, hi]); probe-based when omitted
    """
    sup = sup or probe_sup(f)

    def evaluate(K):
        x = _augmented(K, a, b)
        return float(np.sum(sup(x[:-1], x[1:]) * np.diff(x)))
    return SetFunction(evaluate, 'darboux[{}, {}]'.format(a, b))


def quarter_circle(t):
    t = np.asarray(t, dtype=float)
    return np.column_stack([np.cos(np.pi * t / 2), np.sin(np.pi * t / 2)])


def segment(t):
    t = np.asarray(t, dtype=float)
    return np.column_stack([t, np.zeros_like(t)])


def sf_polygon_length(gamma, name='curve'):
    """
    Length of the polygon inscribed in gamma at the parameters K u {0, 1}.
    """
    def evaluate(K):
        t = _augmented(K, 0.0, 1.0)
        points = np.asarray(gamma(t), dtype=float).reshape(len(t), -1)
        return float(np.linalg.norm(np.diff(points, axis=0), axis=1).sum())
    return SetFunction(evaluate, 'polygon length of {}'.format(name))


def solid_blocks(H):
    """
    Maximal intervals [c, d] made of the solid components of H; open intervals inside H are
    exactly the open intervals inside one block.
    """
    blocks = []
    for c in sorted((c for c in H.components if not c.rational), key=lambda c: (c.a, c.b)):
        a, b = float(c.a), float(c.b)
        if blocks and (a < blocks[-1][1] or (a == blocks[-1][1] and H.contains(Fraction(a)))):
            blocks[-1][1] = max(blocks[-1][1], b)
        else:
            blocks.append([a, b])
    return blocks


def sf_inner_jordan(H):
    """
    Sum of k_{i+1} - k_i over consecutive points of K with (k_i, k_{i+1}) inside H.
    """
    blocks = solid_blocks(H)

    def evaluate(K):
        x = np.sort(K.values)
        if len(x) < 2:
            return 0.0
        u, v = x[:-1], x[1:]
        inside = np.zeros(len(u), dtype=bool)
        for c, d in blocks:
            inside |= (u >= c) & (v <= d)
        return float(np.sum((v - u)[inside]))
    return SetFunction(evaluate, 'inner jordan of {}'.format(H))


class MeasureOracle(object):
    """
    Layer masses mu(f^-1([lo, hi))) of a measurable f; ``total`` is mu(X), possibly +inf.
    """

    def __init__(self, total, name='mu'):
        self.total = total
        self.name = name

    def __str__(self):
        return self.name

    def layer(self, lo, hi):
        raise NotImplementedError()

    def layers(self, cuts):
        """
        Masses of the consecutive layers [cuts_i, cuts_i+1), checked for sign and additivity.
        """
        cuts = np.asarray(cuts, dtype=float)
        masses = np.asarray(self.layer(cuts[:-1], cuts[1:]), dtype=float)
        if np.any(np.isnan(masses)) or np.any(masses < -ADDITIVITY_TOLERANCE):
            raise OracleError('{} returned negative or undefined layers over {}'.format(self, cuts.tolist()))
        whole = float(np.asarray(self.layer(cuts[:1], cuts[-1:]), dtype=float)[0])
        if math.isfinite(whole) and abs(float(np.sum(masses)) - whole) > ADDITIVITY_TOLERANCE * max(1.0, whole):
            raise OracleError('{} is not additive over {}: {} != {}'.format(
                self, cuts.tolist(), float(np.sum(masses)), whole))
        return masses


class SurvivalOracle(MeasureOracle):
    """
    Layers from the survival function G(t) = mu(f >= t), which must be nonincreasing.
    """

    def __init__(self, survival, total, name='survival'):
        super(SurvivalOracle, self).__init__(total, name)
        self.survival = pointwise(survival)

    def _G(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(np.isposinf(t), 0.0, self.survival(np.where(np.isposinf(t), 0.0, t)))

    def layer(self, lo, hi):
        upper, lower = self._G(lo), self._G(hi)
        if np.any(upper < lower - ADDITIVITY_TOLERANCE):
            raise OracleError('{} survival function increases'.format(self))
        if np.any(np.isposinf(upper) & np.isposinf(lower)):
            raise OracleError('{} cannot resolve a layer between two infinite tails'.format(self))
        with np.errstate(invalid='ignore'):
            return np.where(np.isposinf(upper), INF, upper - lower)

    @staticmethod
    def lebesgue_identity(a=0.0, b=1.0):
        """
        f(x) = x on [a, b] with Lebesgue measure.
        """
        return SurvivalOracle.lebesgue_increasing(lambda t: t, a, b, a, b, 'lebesgue x on [{}, {}]'.format(a, b))

    @staticmethod
    def lebesgue_increasing(inverse, a, b, low, high, name=None):
        """
        Lebesgue measure on [a, b] with f continuous and increasing from ``low`` to ``high``;
        ``inverse`` is f^-1 on [low, high].
        """
        inverse = pointwise(inverse)

        def survival(t):
            t = np.asarray(t, dtype=float)
            inside = np.clip(t, low, high)
            return np.where(t <= low, b - a, np.where(t > high, 0.0, b - np.clip(inverse(inside), a, b)))
        return SurvivalOracle(survival, b - a, name or 'lebesgue[{}, {}]'.format(a, b))


class StepOracle(MeasureOracle):
    """
    Simple functions, counting measures and point masses: f takes ``values[i]`` on a set
    of mass ``masses[i]``.
    """

    def __init__(self, values, masses, name='step'):
        self.values = np.asarray(values, dtype=float)
        self.masses = np.asarray(masses, dtype=float)
        if np.any(self.masses < 0):
            raise OracleError('negative mass in {}'.format(name))
        super(StepOracle, self).__init__(float(self.masses.sum()), name)

    def layer(self, lo, hi):
        lo = np.asarray(lo, dtype=float)[:, None]
        hi = np.asarray(hi, dtype=float)[:, None]
        hit = (self.values[None, :] >= lo) & (self.values[None, :] < hi)
        return (hit * self.masses[None, :]).sum(axis=1)


MEASURE_NONNEG = 'nonneg'
MEASURE_SIGNED = 'signed'
MEASURE_HALFLINE = 'halfline'


def measure_space(M=None, variant=MEASURE_NONNEG):
    """
    Domain of the layer sum: (0, M), (-M, M) without 0, or (0, +inf).
    """
    if variant == MEASURE_NONNEG:
        return Interval(0.0, M, left_closed=False, right_closed=False)
    if variant == MEASURE_SIGNED:
        return UnionOfIntervals([Interval(-M, 0.0, left_closed=False, right_closed=False),
                                 Interval(0.0, M, left_closed=False, right_closed=False)])
    if variant == MEASURE_HALFLINE:
        return HalfLine()
    raise DomainError('unknown layer sum variant: {}'.format(variant))


def sf_measure_integral(oracle, M=None, variant=MEASURE_NONNEG):
    """
    Layer sum sum_i a_i mu(f^-1([a_i, a_i+1))) over the cuts a_0 < a_1 < ... < a_n+1:
    0, H, M (nonneg); -M, H u {0}, M (signed); 0, H, +inf (halfline).
    """
    if variant != MEASURE_HALFLINE and not (M is not None and M > 0):
        raise DomainError('the {} layer sum needs a bound M > 0'.format(variant))
    space = measure_space(M, variant)

    def evaluate(K):
        values = K.values
        if len(values) and not space.contains_array(values).all():
            raise DomainError('{} is not a subset of {}'.format(K, space))
        if variant == MEASURE_NONNEG:
            cuts = np.concatenate([[0.0], values, [M]])
        elif variant == MEASURE_SIGNED:
            cuts = np.concatenate([[-M], np.unique(np.concatenate([values, [0.0]])), [M]])
        else:
            cuts = np.concatenate([[0.0], values, [INF]])
        masses = oracle.layers(cuts)
        return ext_dot(cuts[:-1], masses)
    return SetFunction(evaluate, 'layer sum[{}] of {}'.format(variant, oracle))


def layer_sum_delta(total, halfline=False):
    """
    delta(K, eps) from the d-increasing argument: eps / (2 mu(X)), and on the half-line
    min(1 / max K, eps / mu(X)) / 2.
    """
    def delta(K, eps):
        if halfline:
            return min(1.0 / float(K.values.max()), eps / total) / 2
        return eps / (2 * total)
    return delta


def sf_midpoint():
    def evaluate(K):
        if not len(K):
            raise DomainError('the midpoint of the empty set is undefined')
        return (K.min() + K.max()) / 2
    return SetFunction(evaluate, 'midpoint')


def sf_diameter():
    return SetFunction(lambda K: K.max() - K.min() if len(K) else 0.0, 'diameter')


def sf_sum():
    return SetFunction(lambda K: sum(K.as_list()) if K.is_exact else float(np.sum(K.values)), 'sum')


def sf_average():
    def evaluate(K):
        if not len(K):
            raise DomainError('the average of the empty set is undefined')
        return sum(K.as_list()) / len(K) if K.is_exact else float(np.mean(K.values))
    return SetFunction(evaluate, 'average')


def sf_constant(c):
    return SetFunction(lambda K: c, 'constant {}'.format(c))


def sf_indicator_subset(J):
    """
    1 when K is a subset of J, else 0.
    """
    return SetFunction(lambda K: 1.0 if all(J.contains(x) for x in K.as_list()) else 0.0,
                       'indicator[K in {}]'.format(J))


def sf_two_dense_indicator():
    """
    On [0,1] split into its rational and irrational points (Fraction and float
    coordinates): 0 when every point is rational, else 1. Increasing, not d-increasing.
    """
    return SetFunction(lambda K: 0.0 if all(isinstance(x, Fraction) for x in K.as_list()) else 1.0,
                       'two-dense indicator')


def two_dense_space():
    return UnionOfIntervals([Interval(0, 1, rational=True), Interval(0.0, 1.0)])


def sf_dyadic_parity():
    """
    On {1/2^n}: sum of K for even |K|; otherwise the sum without min K, minus 1/|K|.
    Its extension is finite and it is d-increasing without being increasing.
    """
    def evaluate(K):
        values = np.sort(K.values)
        if len(values) % 2 == 0:
            return float(values.sum())
        return float(values[1:].sum()) - 1.0 / len(values)
    return SetFunction(evaluate, 'dyadic parity')


def linear_combination(terms):
    """
    sum of alpha_i s_i for terms [(alpha_i, s_i), ...].
    """
    (alpha, s), rest = terms[0], terms[1:]
    result = alpha * s
    for alpha, s in rest:
        result = result + alpha * s
    return result


def separated_union(s1, I1, s2, I2, F):
    """
    K -> F(s1(K n I1), s2(K n I2)) on a union of two spaces at positive distance.
    """
    def evaluate(K):
        values = K.as_list()
        first = K.select([I1.contains(x) for x in values])
        second = K.select([I2.contains(x) for x in values])
        return F(s1(first), s2(second))
    return SetFunction(evaluate, 'F({}, {})'.format(s1, s2))


def product_composition(s1, s2, F):
    """
    K -> F(s1(pi1 K), s2(pi2 K)) on a product space.
    """
    def evaluate(K):
        first = FiniteSet.from_values(K.coords[:, 0])
        second = FiniteSet.from_values(K.coords[:, 1])
        return F(s1(first), s2(second))
    return SetFunction(evaluate, 'F({} x {})'.format(s1, s2))
