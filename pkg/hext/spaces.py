"""
Space descriptors: totally bounded pseudo-metric spaces given structurally.

Every descriptor knows its distance, decides membership and certifies the Hausdorff gap
d_H(K, I) of a finite subset, exactly where the structure allows it and as a bracket
otherwise. Samplers and predicates reach the space only through this interface.
"""
import bisect
import itertools
import logging
import math
from fractions import Fraction
from functools import reduce

import numpy as np
from scipy.spatial.distance import cdist

from hext.core import FiniteSet, GapBound, DomainError, UnresolvedError, TOLERANCE
from hext.helpers import compare


logger = logging.getLogger(__name__)

RATIONAL_DENOMINATOR = 10 ** 6       # resolution of randomly drawn rational points


def nearest_distance(points, xs):
    """
    Distance from each x to the sorted, nonempty array ``points``.
    """
    if points.dtype == object or getattr(xs, 'dtype', None) == object:
        pts = list(points)
        return np.array([_nearest_exact(pts, x) for x in xs], dtype=object)
    xs = np.asarray(xs, dtype=float)
    idx = np.searchsorted(points, xs)
    left = points[np.clip(idx - 1, 0, len(points) - 1)]
    right = points[np.clip(idx, 0, len(points) - 1)]
    return np.minimum(np.abs(xs - left), np.abs(right - xs))


def _nearest_exact(pts, x):
    i = bisect.bisect_left(pts, x)
    best = None
    for j in (i - 1, i):
        if 0 <= j < len(pts):
            d = abs(pts[j] - x)
            best = d if best is None or d < best else best
    return best


def line_coords(K):
    """
    Coordinates of a real-line set: floats, or an object array of ``Fraction``.
    """
    if K.denominator is not None:
        coords = np.empty(len(K), dtype=object)
        coords[:] = K.exact_values()
        return coords
    return K.coords


def to_exact(x):
    return x if isinstance(x, (Fraction, int)) else Fraction(x)


class Space(object):
    """
    Base class for all space descriptors.
    """

    KIND = 'space'
    exact = True
    real_line = False

    def _unsupported(self, operation):
        raise DomainError('{} is not supported on {}'.format(operation, self))

    def __str__(self):
        return self.KIND

    __repr__ = __str__

    def distance(self, x, y):
        return abs(x - y)

    def diameter(self):
        raise NotImplementedError()

    def contains(self, x):
        raise NotImplementedError()

    def finite(self, points):
        """
        Build a validated FiniteSet of this space.
        """
        K = FiniteSet.from_values(points)
        self.validate(K)
        return K

    def validate(self, K):
        for x in K.as_list():
            if not self.contains(x):
                raise DomainError('{} is not a point of {}'.format(x, self))
        return K

    def gap(self, K):
        raise NotImplementedError()

    def witness(self, K, radius):
        """
        A point of the space farther than ``radius`` from K, or None when the gap is at most radius.
        """
        self._unsupported('witness search')

    def probes(self, step):
        """
        Finite probe set in scan order and its covering radius.
        """
        self._unsupported('probing')

    def sample_points(self, rng, count):
        self._unsupported('random sampling')

    def random_sdense(self, rng, delta, variant=None):
        self._unsupported('random sdense sets')

    def perturb(self, K, eta, rng, direction=None):
        self._unsupported('perturbation')

    def points_near(self, K, eta, count, rng):
        self._unsupported('densification')


class RealLineSpace(Space):
    """
    Subsets of the real line that are finite unions of intervals (solid or rational).
    """

    real_line = True

    def __init__(self, components):
        if not components:
            raise DomainError('a union needs at least one component')
        self.components = sorted(components, key=lambda c: (c.a, c.b))

    def __str__(self):
        return ' u '.join(c.describe() for c in self.components)

    def bounds(self):
        return min(c.a for c in self.components), max(c.b for c in self.components)

    def diameter(self):
        lo, hi = self.bounds()
        return hi - lo

    def contains(self, x):
        return any(c.contains_point(x) for c in self.components)

    def contains_array(self, xs):
        """
        Membership of float coordinates, vectorized.
        """
        xs = np.asarray(xs, dtype=float)
        inside = np.zeros(xs.shape, dtype=bool)
        for c in self.components:
            inside |= c.contains_floats(xs)
        return inside

    def distance_to_space(self, xs):
        xs = np.asarray(xs, dtype=float)
        dist = np.full(xs.shape, np.inf)
        for c in self.components:
            below = np.maximum(float(c.a) - xs, 0.0)
            above = np.maximum(xs - float(c.b), 0.0)
            dist = np.minimum(dist, below + above)
        return dist

    def _candidates(self, K):
        """
        Points where d(., K) can peak on the space: component endpoints and midpoints of
        consecutive points of K. Yields (point, distance, attained).
        """
        points = line_coords(K)
        mids = (points[:-1] + points[1:]) / 2
        halves = (points[1:] - points[:-1]) / 2
        for c in self.components:
            for end in (c.a, c.b):
                d = nearest_distance(points, [end])[0]
                yield end, d, c.contains_point(end)
            if len(mids):
                inside = np.asarray((mids >= c.a) & (mids <= c.b), dtype=bool)
                if inside.any():
                    idx = np.flatnonzero(inside)
                    j = idx[int(np.argmax(halves[idx]))]
                    yield mids[j], halves[j], c.contains_point(mids[j])

    def gap(self, K):
        if not len(K):
            return GapBound(self.diameter() / 2, self.diameter())
        best, attained = None, False
        for _, d, member in self._candidates(K):
            if best is None or compare(d, best) > 0:
                best, attained = d, member
            elif compare(d, best) == 0:
                attained = attained or member
        outside = self.distance_to_space(K.values)
        if len(outside) and float(outside.max()) > 0 and compare(float(outside.max()), best) >= 0:
            return GapBound(float(outside.max()))
        return GapBound(best, attained=attained)

    def witness(self, K, radius):
        if not len(K):
            lo, hi = self.bounds()
            return lo if self.contains(lo) else (lo + hi) / 2
        best, best_point, member = None, None, False
        for point, d, is_member in self._candidates(K):
            if best is None or compare(d, best) > 0:
                best, best_point, member = d, point, is_member
        if compare(best, radius) <= 0:
            return None
        if member:
            return best_point
        component = next(c for c in self.components if c.a <= best_point <= c.b)
        if component.rational:
            raise UnresolvedError('no rational witness near {} in {}'.format(best_point, component.describe()))
        shift = (best - radius) / 2
        return best_point + shift if best_point == component.a else best_point - shift

    def probes(self, step):
        chunks = []
        for c in self.components:
            if c.rational:
                raise UnresolvedError('cannot probe the rational component {}'.format(c.describe()))
            count = int(math.ceil(float(c.b - c.a) / step))
            grid = np.linspace(float(c.a), float(c.b), count + 1)
            chunks.append(grid[[c.contains_point(x) for x in grid]])
        probes = np.unique(np.concatenate(chunks))
        return FiniteSet(probes), step / 2

    def _hull_groups(self):
        groups = []
        for c in self.components:
            for group in groups:
                if group[0].a == c.a and group[0].b == c.b:
                    group.append(c)
                    break
            else:
                groups.append([c])
        return groups

    def sample_points(self, rng, count):
        points = []
        for _ in range(count):
            c = self.components[int(rng.integers(len(self.components)))]
            points.append(c.random_point(rng))
        return self.finite(points)

    def random_sdense(self, rng, delta, variant=None):
        """
        Jittered grid of cell width < delta over one component per hull group. ``variant``
        selects among overlapping components (random when None).
        """
        points = []
        for group in self._hull_groups():
            c = group[int(rng.integers(len(group)))] if variant is None else group[variant % len(group)]
            points.extend(c.jittered_grid(rng, delta / 2))
        K = FiniteSet.from_values(points)
        bound = self.gap(K)
        if not compare(bound.hi, delta) < 0:
            return self.random_sdense(rng, delta / 2, variant)
        return K

    def perturb(self, K, eta, rng, direction=None):
        moved = []
        for x in K.as_list():
            for _ in range(10):
                t = float(rng.uniform(0, eta))
                if direction is None:
                    t = t if rng.integers(2) else -t
                elif direction == 'down':
                    t = -t
                candidate = x + to_exact(t) if isinstance(x, Fraction) else x + t
                if self.contains(candidate) and candidate not in moved:
                    moved.append(candidate)
                    break
            else:
                moved.append(x)
        return FiniteSet.from_values(moved)

    def points_near(self, K, eta, count, rng):
        if not K.is_exact:
            xs = K.values[np.arange(count) % len(K)] + rng.uniform(-eta, eta, count)
            return FiniteSet.from_values(xs[self.contains_array(xs)])
        points = []
        values = K.as_list()
        for i in range(count):
            x = values[i % len(values)]
            t = float(rng.uniform(-eta, eta))
            candidate = x + to_exact(t) if isinstance(x, Fraction) else x + t
            if self.contains(candidate):
                points.append(candidate)
        return FiniteSet.from_values(points)


class Interval(RealLineSpace):
    """
    Interval with endpoint flags. With ``rational`` the space is the dense subspace of its
    rational points; members are ``Fraction`` coordinates, floats count as generic reals.
    """

    KIND = 'interval'

    def __init__(self, a, b, left_closed=True, right_closed=True, rational=False):
        if not a < b:
            raise DomainError('interval needs a < b, got [{}, {}]'.format(a, b))
        self.rational = rational
        self.a = to_exact(a) if rational else a
        self.b = to_exact(b) if rational else b
        self.left_closed = left_closed
        self.right_closed = right_closed
        super(Interval, self).__init__([self])

    def describe(self):
        text = '{}{}, {}{}'.format('[' if self.left_closed else '(', self.a, self.b,
                                   ']' if self.right_closed else ')')
        return 'Q n ' + text if self.rational else text

    def contains_point(self, x):
        if self.rational and not isinstance(x, (Fraction, int)):
            return False
        if x < self.a or x > self.b:
            return False
        if x == self.a and not self.left_closed:
            return False
        if x == self.b and not self.right_closed:
            return False
        return True

    def contains_floats(self, xs):
        if self.rational:
            return np.zeros(xs.shape, dtype=bool)
        a, b = float(self.a), float(self.b)
        above = xs >= a if self.left_closed else xs > a
        below = xs <= b if self.right_closed else xs < b
        return above & below

    def random_point(self, rng):
        if self.rational:
            u = Fraction(int(rng.integers(1, RATIONAL_DENOMINATOR)), RATIONAL_DENOMINATOR)
            return self.a + u * (self.b - self.a)
        return float(rng.uniform(float(self.a), float(self.b)))

    def jittered_grid(self, rng, width=None, count=None):
        """
        One random point per cell; cells have the given width, or there are ``count`` of them.
        """
        if count is None:
            count = int(math.ceil(float(self.b - self.a) / width))
        h = (self.b - self.a) / count
        if self.rational:
            jitter = [Fraction(int(j), RATIONAL_DENOMINATOR)
                      for j in rng.integers(1, RATIONAL_DENOMINATOR, count)]
            return [self.a + (i + jitter[i]) * h for i in range(count)]
        jitter = rng.uniform(0.0, 1.0, count)
        points = float(self.a) + (np.arange(count) + jitter) * float(h)
        return points[self.contains_floats(points)].tolist()


class UnionOfIntervals(RealLineSpace):
    KIND = 'union'


class FinitePoints(RealLineSpace):
    """
    Finite subset of the real line.
    """

    KIND = 'finite'

    def __init__(self, values):
        self.points = FiniteSet.from_values(values)
        if not len(self.points):
            raise DomainError('a finite space needs at least one point')
        self.components = []

    def __str__(self):
        return 'finite{}'.format(self.points.as_list())

    def bounds(self):
        return self.points.min(), self.points.max()

    def contains(self, x):
        return x in self.points.as_list()

    def contains_array(self, xs):
        return np.isin(np.asarray(xs, dtype=float), self.points.values)

    def distance_to_space(self, xs):
        return nearest_distance(line_coords(self.points), xs).astype(float)

    def _candidates(self, K):
        own = line_coords(self.points)
        dist = nearest_distance(line_coords(K), own)
        j = int(np.argmax(dist))
        yield own[j], dist[j], True

    def gap(self, K):
        if not len(K):
            return GapBound(self.diameter() / 2, self.diameter())
        own = line_coords(self.points)
        inner = nearest_distance(line_coords(K), own).max()
        outer = nearest_distance(own, line_coords(K)).max()
        return GapBound(max(inner, outer))

    def probes(self, step):
        return self.points, 0.0

    def sample_points(self, rng, count):
        values = self.points.as_list()
        chosen = rng.choice(len(values), size=min(count, len(values)), replace=False)
        return FiniteSet.from_values([values[i] for i in chosen])

    def random_sdense(self, rng, delta, variant=None):
        return self.points

    def perturb(self, K, eta, rng, direction=None):
        return K

    def points_near(self, K, eta, count, rng):
        own = line_coords(self.points)
        near = nearest_distance(line_coords(K), own) < eta
        return self.points.select(np.asarray(near, dtype=bool))


class SequenceSet(Space):
    """
    Points x_m = term(m), m >= first, strictly decreasing to 0, plus finitely many extra points.
    The limit 0 belongs to the space only when it is listed among the extras.
    """

    KIND = 'sequence'
    real_line = True

    def __init__(self, first=1, extras=()):
        self.first = first
        self.extras = tuple(sorted(extras))

    def __str__(self):
        return '{}(first={}, extras={})'.format(self.KIND, self.first, list(self.extras))

    def term(self, m):
        raise NotImplementedError()

    def index_at_most(self, tau):
        """
        Smallest index m >= first with term(m) <= tau.
        """
        raise NotImplementedError()

    def index_of(self, x):
        raise NotImplementedError()

    def terms(self, start, stop):
        return self.term(np.arange(start, stop, dtype=np.int64))

    def diameter(self):
        head = float(self.term(self.first))
        values = [head, 0.0] + list(self.extras)
        return max(values) - min(values)

    def contains(self, x):
        if x in self.extras:
            return True
        if not x > 0:
            return False
        m = self.index_of(x)
        return m >= self.first and compare(float(self.term(m)), float(x)) == 0

    def prefix(self, count):
        return FiniteSet.from_values(self.terms(self.first, self.first + count))

    def _scan(self, K):
        """
        Exact sup of d(x, K) over the space: explicit points down to a cutoff below which the
        distance is monotone, plus the limit of the tail. Returns (value, point, attained, limit).
        """
        points = K.values
        positive = points[points > 0]
        others = points[points <= 0]
        p = float(positive.min()) if len(positive) else None
        q = float(others.max()) if len(others) else None
        if p is None:
            cutoff = self.first + 1
        else:
            tau = p / 2
            if q is not None and (p + q) / 2 > 0:
                tau = min(tau, (p + q) / 2)
            cutoff = self.index_at_most(tau) + 1
        explicit = np.concatenate([self.terms(self.first, cutoff + 1), np.asarray(self.extras, dtype=float)])
        dist = nearest_distance(points, explicit)
        j = int(np.argmax(dist))
        value, point = float(dist[j]), float(explicit[j])
        limit = None
        if p is not None and (q is None or (p + q) / 2 <= 0):
            limit = p
        return value, point, limit, (p, q)

    def gap(self, K):
        if not len(K):
            return GapBound(self.diameter() / 2, self.diameter())
        value, _, limit, _ = self._scan(K)
        if limit is None or compare(value, limit) >= 0:
            return GapBound(value)
        return GapBound(limit, attained=0.0 in self.extras)

    def witness(self, K, radius):
        if not len(K):
            return float(self.term(self.first))
        value, point, limit, (p, _) = self._scan(K)
        if compare(value, radius) > 0 and (limit is None or value >= limit):
            return point
        if limit is not None and compare(limit, radius) > 0:
            return float(self.term(self.index_at_most((p - radius) / 2)))
        if compare(value, radius) > 0:
            return point
        return None

    def probes(self, step):
        cutoff = self.index_at_most(step)
        values = np.concatenate([self.terms(self.first, cutoff + 1), np.asarray(self.extras, dtype=float)])
        order = np.argsort(-values, kind='stable')
        return FiniteSet(values[order]), float(self.term(cutoff))

    def sample_points(self, rng, count):
        indices = self.first + rng.integers(0, 64, count)
        values = self.term(indices).tolist()
        values += [x for x in self.extras if rng.integers(2)]
        return FiniteSet.from_values(values)

    def random_sdense(self, rng, delta, variant=None):
        count = self.index_at_most(delta / 2) - self.first + 1
        while True:
            K = self.prefix(count).union(FiniteSet.from_values(self.extras))
            extra = self.first + count + rng.integers(0, 4 * count + 1, int(rng.integers(0, 8)))
            K = K.union(FiniteSet.from_values(self.term(extra)))
            if compare(self.gap(K).hi, delta) < 0:
                return K
            count *= 2

    def neighbours(self, x, eta, limit):
        """
        Points of the space within eta of x, nearest first, at most ``limit`` of them.
        """
        found = [e for e in self.extras if abs(e - x) < eta]
        if x + eta > 0:
            m = self.index_at_most(x + eta)
            while len(found) < limit:
                t = float(self.term(m))
                if t <= x - eta:
                    break
                if t < x + eta:
                    found.append(t)
                m += 1
        found.sort(key=lambda y: abs(y - x))
        return found[:limit]

    def perturb(self, K, eta, rng, direction=None):
        moved = []
        for x in K.as_list():
            options = [y for y in self.neighbours(x, eta, 64) if y not in moved]
            if direction == 'down':
                options = [y for y in options if y <= x]
            elif direction == 'up':
                options = [y for y in options if y >= x]
            moved.append(options[int(rng.integers(len(options)))] if options else x)
        return FiniteSet.from_values(moved)

    def points_near(self, K, eta, count, rng):
        points = []
        for x in K.as_list():
            points.extend(self.neighbours(x, eta, count))
        return FiniteSet.from_values(points)


class HarmonicSet(SequenceSet):
    """
    {1/n : n >= first}, optionally with extra points such as 0 or -1.
    """

    KIND = 'harmonic'

    def term(self, m):
        return 1.0 / np.asarray(m, dtype=float)

    def index_at_most(self, tau):
        return max(self.first, int(math.ceil(1.0 / tau - TOLERANCE)))

    def index_of(self, x):
        return int(round(1.0 / float(x)))


class DyadicSet(SequenceSet):
    """
    {1/2^n : n >= first}.
    """

    KIND = 'dyadic'

    def term(self, m):
        return np.ldexp(1.0, -np.asarray(m, dtype=np.int64))

    def index_at_most(self, tau):
        return max(self.first, int(math.ceil(-math.log2(tau) - TOLERANCE)))

    def index_of(self, x):
        return int(round(-math.log2(float(x))))


def vectorized(a):
    """
    Wrap an index function so that it accepts integer arrays.
    """
    def evaluate(indices):
        indices = np.asarray(indices, dtype=np.int64)
        try:
            values = np.asarray(a(indices), dtype=float)
            if values.shape == indices.shape:
                return values
        except (TypeError, ValueError):
            pass
        return np.array([a(int(i)) for i in indices.ravel()], dtype=float).reshape(indices.shape)
    return evaluate


class FunctionInduced(Space):
    """
    Index universe {first, first+1, ...} (or ``size`` indices) with the pseudo-metric
    d(x, y) = |a(x) - a(y)|. Points are labelled by their index.

    Infinite universes need the accumulation values of a and ``tail_bound(N)``, a bound on
    the distance of a(i), i > N, to the accumulation set; gaps are then bracketed.
    """

    KIND = 'function-induced'

    def __init__(self, a, first=1, size=None, accumulation=(), tail_bound=None, cutoff=4096):
        self.a = vectorized(a)
        self.first = first
        self.size = size
        self.accumulation = tuple(accumulation)
        self.tail_bound = tail_bound
        self.cutoff = cutoff
        if size is None and tail_bound is None:
            raise DomainError('an infinite index universe needs tail_bound')
        self.exact = size is not None

    def __str__(self):
        return 'function-induced(first={}, size={})'.format(self.first, self.size)

    def distance(self, x, y):
        return abs(float(self.a(x)) - float(self.a(y)))

    def diameter(self):
        values = self.a(np.arange(self.first, self.first + (self.size or self.cutoff)))
        values = np.concatenate([values, np.asarray(self.accumulation, dtype=float)])
        return float(values.max() - values.min())

    def contains(self, index):
        index = int(index)
        return index >= self.first and (self.size is None or index < self.first + self.size)

    def finite(self, indices):
        indices = np.asarray(list(indices), dtype=np.int64)
        K = FiniteSet.from_labels(indices, self.a(indices))
        self.validate(K)
        return K

    def prefix(self, count):
        if self.size is not None:
            count = min(count, self.size)
        return self.finite(np.arange(self.first, self.first + count))

    def distinct_prefix(self, count):
        """
        Prefix of ``count`` indices keeping one index per distinct value.
        """
        K = self.prefix(count)
        _, keep = np.unique(K.coords, return_index=True)
        mask = np.zeros(len(K), dtype=bool)
        mask[keep] = True
        return K.select(mask)

    def gap(self, K):
        if not len(K):
            return GapBound(self.diameter() / 2, self.diameter())
        own = np.unique(K.coords)
        horizon = self.size if self.size is not None else max(self.cutoff, 4 * int(K.labels.max()))
        enumerated = self.a(np.arange(self.first, self.first + horizon))
        value = float(nearest_distance(own, enumerated).max())
        if self.size is not None:
            return GapBound(value)
        limit = float(nearest_distance(own, np.asarray(self.accumulation, dtype=float)).max()) \
            if self.accumulation else 0.0
        spread = float(self.tail_bound(self.first + horizon - 1))
        return GapBound(max(value, limit), max(value, limit + spread))

    def sample_points(self, rng, count):
        span = self.size if self.size is not None else 256
        return self.finite(self.first + rng.integers(0, span, count))

    def random_sdense(self, rng, delta, variant=None):
        count = 8
        while True:
            K = self.prefix(count)
            if self.size is None:
                extra = self.first + count + rng.integers(0, 4 * count, int(rng.integers(0, 8)))
                K = K.union(self.finite(extra))
            if compare(self.gap(K).hi, delta) < 0:
                return K
            if self.size is not None and count >= self.size:
                raise UnresolvedError('cannot reach gap below {} on {}'.format(delta, self))
            count *= 2


class CantorSet(Space):
    """
    Ternary Cantor set. Points are exact rationals with a power-of-three denominator;
    the gap is computed exactly by an integer ternary descent.
    """

    KIND = 'cantor'
    real_line = True

    def diameter(self):
        return Fraction(1)

    def contains(self, x):
        x = to_exact(x)
        if x < 0 or x > 1:
            return False
        seen = set()
        while x not in seen:
            seen.add(x)
            if x == 0 or x == 1:
                return True
            y = 3 * x
            if y == 1 or y == 2:
                return True
            if 1 < y < 2:
                return False
            x = y if y < 1 else y - 2
        return True

    def finite(self, points):
        points = [to_exact(x) for x in points]
        denominator = reduce(lambda u, v: u * v // math.gcd(u, v), [x.denominator for x in points], 1)
        K = FiniteSet.from_numerators([int(x * denominator) for x in points], denominator)
        self.validate(K)
        return K

    @staticmethod
    def _numerators(K):
        if K.denominator is not None:
            return K.coords.astype(np.int64), K.denominator
        exact = [to_exact(x) for x in K.as_list()]
        denominator = reduce(lambda u, v: u * v // math.gcd(u, v), [x.denominator for x in exact], 1)
        return np.array([int(x * denominator) for x in exact], dtype=np.int64), denominator

    def gap(self, K):
        if not len(K):
            return GapBound(Fraction(1, 2), Fraction(1))
        numerators, denominator = self._numerators(K)
        depth = 0
        while 3 ** depth < denominator:
            depth += 1
        if 3 ** depth != denominator:
            raise DomainError('Cantor points need a power-of-three denominator, got {}'.format(denominator))
        unit = 6 * denominator
        k = np.sort(numerators) * 6
        best = max(int(k[0]), int(unit - k[-1]))
        if len(k) > 1:
            lo, hi = k[:-1], k[1:]
            mid = (lo + hi) // 2
            left, right = self._nearest_cantor(mid, unit, depth + 1)
            reach = np.maximum(np.minimum(left - lo, hi - left), np.minimum(right - lo, hi - right))
            best = max(best, int(reach.max()))
        return GapBound(Fraction(best, unit))

    @staticmethod
    def _nearest_cantor(mid, width, steps):
        """
        For each integer position (in units of 1/width) return the nearest Cantor points on
        both sides: the position itself when it is a cell endpoint, otherwise the endpoints
        of the removed interval containing it.
        """
        left = mid.copy()
        right = mid.copy()
        done = np.zeros(len(mid), dtype=bool)
        cell = np.zeros(len(mid), dtype=np.int64)
        for _ in range(steps):
            if width % 3:
                break
            third = width // 3
            t = mid - cell
            endpoint = ~done & ((t == 0) | (t == third) | (t == 2 * third) | (t == width))
            done |= endpoint
            removed = ~done & (t > third) & (t < 2 * third)
            left[removed] = cell[removed] + third
            right[removed] = cell[removed] + 2 * third
            done |= removed
            cell = np.where(~done & (t > 2 * third), cell + 2 * third, cell)
            width = third
            if done.all():
                break
        if not done.all():
            raise UnresolvedError('ternary descent did not settle for {} midpoints'.format(int((~done).sum())))
        return left, right

    def sample_points(self, rng, count, depth=8):
        digits = rng.integers(0, 2, (count, depth)) * 2
        weights = 3 ** np.arange(depth - 1, -1, -1, dtype=np.int64)
        return FiniteSet.from_numerators(digits @ weights, 3 ** depth)


class HalfLine(Space):
    """
    (0, +inf), not totally bounded. Density is measured by the half-line notion: K is
    delta-dense when K n (0, 1/delta) is delta-dense in (0, 1/delta). ``gap`` reports the
    smallest dyadic delta for which K is dense in this sense.
    """

    KIND = 'halfline'
    exact = False

    def contains(self, x):
        return x > 0

    def contains_array(self, xs):
        return np.asarray(xs, dtype=float) > 0

    def diameter(self):
        return float('inf')

    def gap(self, K):
        from hext.metric import is_delta_dense_halfline
        delta = None
        for j in range(1, 48):
            candidate = 2.0 ** -j
            if not is_delta_dense_halfline(K, candidate):
                break
            delta = candidate
        return GapBound(0.0, 1.0 if delta is None else delta)

    def sample_points(self, rng, count, scale=4.0):
        return FiniteSet.from_values(rng.uniform(0.0, scale, count) + TOLERANCE)

    def random_sdense(self, rng, delta, variant=None):
        """
        Jittered grid over (0, 1/delta) plus a few points beyond it.
        """
        window = Interval(0.0, 1.0 / delta, left_closed=False, right_closed=False)
        K = window.random_sdense(rng, delta, variant)
        beyond = 1.0 / delta + rng.exponential(1.0 / delta, int(rng.integers(0, 4)))
        return K.union(FiniteSet.from_values(beyond))


class ProductSpace(Space):
    """
    Product of two real-line spaces with d = d1 + d2. Points are coordinate pairs.
    """

    KIND = 'product'

    def __init__(self, first, second, probe_step=1.0 / 64):
        self.first = first
        self.second = second
        self.probe_step = probe_step
        self.exact = first.exact and second.exact

    def __str__(self):
        return '({}) x ({})'.format(self.first, self.second)

    def distance(self, x, y):
        return abs(x[0] - y[0]) + abs(x[1] - y[1])

    def diameter(self):
        return self.first.diameter() + self.second.diameter()

    def contains(self, x):
        return self.first.contains(x[0]) and self.second.contains(x[1])

    def finite(self, pairs):
        K = FiniteSet.from_pairs(pairs)
        self.validate(K)
        return K

    def product_set(self, K1, K2):
        return FiniteSet.from_pairs(list(itertools.product(K1.values.tolist(), K2.values.tolist())))

    @staticmethod
    def projections(K):
        return FiniteSet.from_values(K.coords[:, 0]), FiniteSet.from_values(K.coords[:, 1])

    def is_product_set(self, K):
        K1, K2 = self.projections(K)
        return len(K1) * len(K2) == len(K)

    def gap(self, K):
        if len(K) and self.is_product_set(K):
            K1, K2 = self.projections(K)
            g1, g2 = self.first.gap(K1), self.second.gap(K2)
            return GapBound(g1.lo + g2.lo, g1.hi + g2.hi, attained=g1.attained and g2.attained)
        if not len(K):
            return GapBound(self.diameter() / 2, self.diameter())
        logger.warning('bracketing the gap of a non-product set on %s by probes', self)
        P1, r1 = self.first.probes(self.probe_step)
        P2, r2 = self.second.probes(self.probe_step)
        probes = np.array(list(itertools.product(P1.values, P2.values)))
        inner = float(cdist(probes, K.coords, 'cityblock').min(axis=1).max())
        return GapBound(inner, inner + r1 + r2)

    def sample_points(self, rng, count):
        K1 = self.first.sample_points(rng, count)
        K2 = self.second.sample_points(rng, count)
        n = min(len(K1), len(K2))
        return FiniteSet.from_pairs(np.column_stack([K1.values[:n], K2.values[:n]]))
