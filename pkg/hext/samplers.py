"""
Refinement samplers: level-indexed finite subsets K_level of a space with gap -> 0.

Every strategy is a plain function ``(space, spec, level) -> FiniteSet`` registered in
``STRATEGY_FUNCTIONS``; ``refine`` dispatches on ``spec.strategy``.
"""
import logging
from fractions import Fraction

import numpy as np

from hext.core import (FiniteSet, RecordBase, DomainError, UnresolvedError,
                       DOMAIN_ALL, DOMAIN_STRETCHED, DOMAIN_CLASS_S)
from hext.helpers import resolution, SCHEDULE_LINEAR, SCHEDULE_DOUBLING
from hext.spaces import (RealLineSpace, FinitePoints, SequenceSet, HarmonicSet, DyadicSet,
                         FunctionInduced, CantorSet, HalfLine, ProductSpace, vectorized)


logger = logging.getLogger(__name__)

EDS_MIDPOINT = 'midpoint'
EDS_INFIMUM = 'infimum'
EDS_RANDOM = 'random'
EDS_RULES = (EDS_MIDPOINT, EDS_INFIMUM, EDS_RANDOM)

CANTOR_LEVEL_OFFSET = 2     # level 1 is K_3 / L_3


class SamplerSpec(RecordBase):
    """
    Strategy name, level-to-resolution schedule, seed and strategy parameters.
    """

    GRID = 'grid'
    RANDOM = 'random'
    PREFIX = 'prefix'
    DISTINCT_PREFIX = 'distinct-prefix'
    STRETCHED_DYADIC = 'stretched-dyadic'
    ADVERSARIAL_TAIL = 'adversarial-tail'
    CANTOR_K = 'cantor-K'
    CANTOR_L = 'cantor-L'
    EDS = 'eds'
    HALFLINE_GRID = 'halfline-grid'

    STRATEGIES = (GRID, RANDOM, PREFIX, DISTINCT_PREFIX, STRETCHED_DYADIC, ADVERSARIAL_TAIL,
                  CANTOR_K, CANTOR_L, EDS, HALFLINE_GRID)

    DOMAINS = {
        STRETCHED_DYADIC: DOMAIN_STRETCHED,
        CANTOR_K: DOMAIN_STRETCHED,
        CANTOR_L: DOMAIN_STRETCHED,
        EDS: DOMAIN_CLASS_S,
    }

    DEFAULT_SCHEDULES = {
        RANDOM: SCHEDULE_DOUBLING,
        EDS: SCHEDULE_DOUBLING,
    }

    def __init__(self, strategy, schedule=None, base=1, seed=0, **params):
        if strategy not in SamplerSpec.STRATEGIES:
            raise DomainError('unknown sampler strategy: {}'.format(strategy))
        schedule = schedule or SamplerSpec.DEFAULT_SCHEDULES.get(strategy, SCHEDULE_LINEAR)
        if schedule not in (SCHEDULE_LINEAR, SCHEDULE_DOUBLING):
            raise DomainError('unknown schedule: {}'.format(schedule))
        randomized = strategy == SamplerSpec.RANDOM or params.get('rule') == EDS_RANDOM
        if randomized and schedule != SCHEDULE_DOUBLING:
            raise DomainError('{} sampling keeps its gap monotone only with the doubling schedule'.format(strategy))
        super(SamplerSpec, self).__init__(strategy=strategy, schedule=schedule, base=base, seed=seed, **params)

    @property
    def domain(self):
        return SamplerSpec.DOMAINS.get(self.strategy, DOMAIN_ALL)

    def resolution(self, level):
        return resolution(level, self.base, self.schedule)

    def rng(self, level):
        return np.random.default_rng([self.seed, level])

    def describe(self):
        return '{}({})'.format(self.strategy, self.schedule)


def refine(space, spec, level):
    """
    The level-th set of the ladder described by ``spec``.
    """
    if level < 1:
        raise DomainError('level must be >= 1, got {}'.format(level))
    strategy = STRATEGY_FUNCTIONS[spec.strategy]
    return strategy(space, spec, level)


def _mismatch(space, spec):
    raise DomainError('sampler {} does not apply to {}'.format(spec.strategy, space))


def grid(space, spec, level):
    """
    Equally spaced points; with ``offset`` theta the shifted grid a + (i + theta) h.
    """
    if isinstance(space, ProductSpace):
        return space.product_set(grid(space.first, spec, level), grid(space.second, spec, level))
    if isinstance(space, FinitePoints):
        return space.points
    if not isinstance(space, RealLineSpace):
        _mismatch(space, spec)
    n = spec.resolution(level)
    offset = spec.get('offset')
    variant = spec.get('variant', 0)
    exact, floats = [], []
    for group in space._hull_groups():
        c = group[variant % len(group)]
        if c.rational or spec.get('exact'):
            a, b = Fraction(c.a), Fraction(c.b)
            shift = Fraction(offset).limit_denominator(10 ** 6) if offset else 0
            count = n if offset else n + 1
            exact.extend(a + (i + shift) * (b - a) / n for i in range(count))
        elif offset:
            h = (float(c.b) - float(c.a)) / n
            floats.append(float(c.a) + (np.arange(n) + offset) * h)
        else:
            floats.append(np.linspace(float(c.a), float(c.b), n + 1))
    if exact:
        points = [x for x in exact if space.contains(x)]
        for chunk in floats:
            points.extend(chunk[space.contains_array(chunk)].tolist())
        return FiniteSet.from_values(points)
    floats = np.concatenate(floats)
    return FiniteSet.from_values(floats[space.contains_array(floats)])


def random_grid(space, spec, level):
    """
    Jittered grid: one uniform point per cell of width (b - a) / n.
    """
    if not isinstance(space, RealLineSpace) or isinstance(space, FinitePoints):
        _mismatch(space, spec)
    n = spec.resolution(level)
    rng = spec.rng(level)
    variant = spec.get('variant', 0)
    points = []
    for group in space._hull_groups():
        c = group[variant % len(group)]
        points.extend(c.jittered_grid(rng, count=n))
    return FiniteSet.from_values(points)


def prefix(space, spec, level):
    """
    Initial segment of a sequence space or an index universe; ``parity`` fixes the
    parity of its length.
    """
    n = spec.resolution(level)
    parity = spec.get('parity')
    if parity == 'even':
        n = 2 * n
    elif parity == 'odd':
        n = 2 * n - 1
    elif parity is not None:
        raise DomainError('parity must be even or odd, got {}'.format(parity))
    if isinstance(space, SequenceSet):
        return space.prefix(n).union(FiniteSet.from_values(space.extras))
    if isinstance(space, FunctionInduced):
        return space.prefix(n)
    _mismatch(space, spec)


def distinct_prefix(space, spec, level):
    if not isinstance(space, FunctionInduced):
        _mismatch(space, spec)
    return space.distinct_prefix(spec.resolution(level))


def stretched_dyadic(space, spec, level):
    """
    {1/2^m : first <= m < first + n}, a set of the form {i : i >= k1} u {k0}.
    """
    if not isinstance(space, DyadicSet):
        _mismatch(space, spec)
    return space.prefix(spec.resolution(level))


def adversarial_tail(space, spec, level):
    if not isinstance(space, HarmonicSet):
        _mismatch(space, spec)
    N = spec.resolution(level)
    k = spec.get('k')
    if k is None:
        k = int(spec.get('ratio', 0) * N)
    return adversarial_series_sampler(spec.series, N, k, first=space.first, window=spec.get('window'))


def adversarial_series_sampler(a, N, k, first=1, window=None):
    """
    Prefix {1/first, ..., 1/N} plus the k indices beyond N, within ``window`` (4k by
    default), whose terms are the largest positive ones. Adding points never increases
    the gap, so the set stays as dense as the prefix.
    """
    a = vectorized(a)
    indices = np.arange(first, N + 1, dtype=np.int64)
    if k > 0:
        tail = np.arange(N + 1, N + 1 + (4 * k if window is None else window), dtype=np.int64)
        values = a(tail)
        positive = values > 0
        order = np.argsort(-values[positive], kind='stable')[:k]
        indices = np.concatenate([indices, tail[positive][order]])
    return FiniteSet.from_values(1.0 / indices.astype(float))


def _ternary_bases(weights, start=0):
    """
    All sums start + sum(d_j w_j) with digits d_j in {0, 2}.
    """
    bases = np.array([start], dtype=np.int64)
    for w in weights:
        bases = np.concatenate([bases, bases + 2 * w])
    return np.sort(bases)


def cantor_k(n):
    """
    K_n: both endpoints of every cell of the (n-1)-th Cantor construction step; 2^n points,
    gap 3^-n, mean 1/2.
    """
    if n < 1:
        raise DomainError('K_n needs n >= 1, got {}'.format(n))
    denominator = 3 ** (n - 1)
    bases = _ternary_bases([3 ** (n - 1 - j) for j in range(1, n)])
    return FiniteSet.from_numerators(np.concatenate([bases, bases + 1]), denominator)


def cantor_l(n):
    """
    L_n = L_1 u L_2: inner endpoints of the step-(n-1) cells inside [0, 1/3] and both
    endpoints of the step-(n-1) cells inside [2/3, 1]; 3 * 2^(n-2) points, gap 3^-(n-1),
    mean 11/18.
    """
    if n < 3:
        raise DomainError('L_n needs n >= 3, got {}'.format(n))
    denominator = 3 ** (n - 1)
    right = _ternary_bases([3 ** (n - 1 - j) for j in range(2, n)], start=2 * 3 ** (n - 2))
    left = _ternary_bases([3 ** (n - 1 - j) for j in range(2, n - 1)])
    return FiniteSet.from_numerators(np.concatenate([left + 1, left + 2, right, right + 1]), denominator)


def cantor_samples(n):
    """
    The pair (K_n, L_n) of stretched Cantor subsets with means 1/2 and 11/18.
    """
    if n < 3:
        raise DomainError('Cantor samples need n >= 3, got {}'.format(n))
    return cantor_k(n), cantor_l(n)


def cantor_k_level(space, spec, level):
    if not isinstance(space, CantorSet):
        _mismatch(space, spec)
    return cantor_k(level + CANTOR_LEVEL_OFFSET)


def cantor_l_level(space, spec, level):
    if not isinstance(space, CantorSet):
        _mismatch(space, spec)
    return cantor_l(level + CANTOR_LEVEL_OFFSET)


def _bins(H, n):
    """
    Pieces of H inside each of the n equal-width bins [a + i w, a + (i + 1) w), the last
    closed on the right. A piece is (lo, hi, lo_in, hi_in).
    """
    if n < 1:
        raise DomainError('eds needs n >= 1 bins, got {}'.format(n))
    lo, hi = H.bounds()
    a, b = float(lo), float(hi)
    width = (b - a) / n
    pieces = [[] for _ in range(n)]
    if width == 0:
        pieces[0].append((a, a, True, True))
        return a, width, pieces
    if isinstance(H, FinitePoints):
        for x in H.points.values.tolist():
            pieces[min(int((x - a) // width), n - 1)].append((x, x, True, True))
        return a, width, pieces
    for c in H.components:
        if c.rational:
            raise UnresolvedError('cannot pick eds representatives in {}'.format(c.describe()))
        ca, cb = float(c.a), float(c.b)
        first = max(min(int((ca - a) // width), n - 1) - 1, 0)
        last = min(int((cb - a) // width), n - 1)
        for i in range(first, last + 1):
            bin_lo = a + i * width
            bin_hi = b if i == n - 1 else a + (i + 1) * width
            p, q = max(bin_lo, ca), min(bin_hi, cb)
            p_in = p > ca or c.left_closed
            q_in = (q < bin_hi or i == n - 1) and (q < cb or c.right_closed)
            if p < q or (p == q and p_in and q_in):
                pieces[i].append((p, q, p_in, q_in))
    return a, width, pieces


def _in_piece(x, piece):
    p, q, p_in, q_in = piece
    return p < x < q or (x == p and p_in) or (x == q and q_in)


def _pick(pieces, rule, rng):
    if rule == EDS_INFIMUM:
        p, _, p_in, _ = min(pieces)
        if not p_in:
            raise UnresolvedError('bin infimum {} is not a point of the space'.format(p))
        return p
    if rule == EDS_RANDOM:
        lengths = np.array([q - p for p, q, _, _ in pieces])
        weights = lengths / lengths.sum() if lengths.sum() > 0 else None
        p, q, _, _ = pieces[int(rng.choice(len(pieces), p=weights))]
        return p if p == q else float(rng.uniform(p, q))
    middle = (min(pc[0] for pc in pieces) + max(pc[1] for pc in pieces)) / 2
    if any(_in_piece(middle, pc) for pc in pieces):
        return middle
    candidates = [(abs(x - middle), x, inside) for p, q, p_in, q_in in pieces
                  for x, inside in ((p, p_in), (q, q_in))]
    _, x, inside = min(candidates)
    if not inside:
        raise UnresolvedError('no nearest point to the bin midpoint {}'.format(middle))
    return x


def eds_bins(H, n, rule=EDS_MIDPOINT, rng=None):
    """
    One representative from every nonempty bin of H: a set of class S_n.

    :param rule: 'midpoint' (point of H nearest the middle of the bin's hull, ties to the
        lower point), 'infimum' or 'random' (needs ``rng``)
    """
    if rule not in EDS_RULES:
        raise DomainError('unknown eds rule: {}'.format(rule))
    if rule == EDS_RANDOM and rng is None:
        raise DomainError('the random eds rule needs a generator')
    if not isinstance(H, RealLineSpace):
        raise DomainError('eds bins need a bounded subset of the line, got {}'.format(H))
    _, _, pieces = _bins(H, n)
    return FiniteSet.from_values([_pick(bin_pieces, rule, rng) for bin_pieces in pieces if bin_pieces])


def in_class_s(K, H, n):
    """
    True iff K is a subset of H with exactly one point in every nonempty bin and none
    elsewhere.
    """
    _, _, pieces = _bins(H, n)
    counts = [0] * n
    for x in K.values.tolist():
        owners = [i for i, bin_pieces in enumerate(pieces) if any(_in_piece(x, pc) for pc in bin_pieces)]
        if len(owners) != 1:
            return False
        counts[owners[0]] += 1
    return all(count == (1 if bin_pieces else 0) for count, bin_pieces in zip(counts, pieces))


def eds(space, spec, level):
    rule = spec.get('rule', EDS_MIDPOINT)
    rng = spec.rng(level) if rule == EDS_RANDOM else None
    return eds_bins(space, spec.resolution(level), rule, rng)


def halfline_grid(space, spec, level):
    """
    Points spaced delta/2 over (0, 1/delta) with delta = 1/(n + 1).
    """
    if not isinstance(space, HalfLine):
        _mismatch(space, spec)
    delta = 1.0 / (spec.resolution(level) + 1)
    count = int(np.ceil(2.0 / delta ** 2)) - 1
    return FiniteSet.from_values(np.arange(1, count + 1) * (delta / 2))


STRATEGY_FUNCTIONS = {
    SamplerSpec.GRID: grid,
    SamplerSpec.RANDOM: random_grid,
    SamplerSpec.PREFIX: prefix,
    SamplerSpec.DISTINCT_PREFIX: distinct_prefix,
    SamplerSpec.STRETCHED_DYADIC: stretched_dyadic,
    SamplerSpec.ADVERSARIAL_TAIL: adversarial_tail,
    SamplerSpec.CANTOR_K: cantor_k_level,
    SamplerSpec.CANTOR_L: cantor_l_level,
    SamplerSpec.EDS: eds,
    SamplerSpec.HALFLINE_GRID: halfline_grid,
}
