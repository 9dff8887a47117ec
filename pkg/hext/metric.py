"""
Hausdorff distance between finite sets, density and stretchedness predicates, greedy nets.
"""
import bisect
import logging
from fractions import Fraction

import numpy as np
from scipy.spatial.distance import cdist

from hext.core import FiniteSet, DomainError, UnresolvedError
from hext.helpers import compare, INF
from hext.spaces import Interval, nearest_distance, line_coords


logger = logging.getLogger(__name__)


def hausdorff_finite(K, L, metric=None):
    """
    Hausdorff distance of two nonempty finite sets: the larger of the two directed
    max-min distances.

    :param metric: optional callable d(x, y) on point identities; by default the distance
        is |x - y| on the line (exact for exact sets) and d1 + d2 on coordinate pairs
    """
    if not len(K) or not len(L):
        raise DomainError('Hausdorff distance needs nonempty sets, got {} and {}'.format(K, L))
    if metric is not None:
        xs, ys = K.as_list(), L.as_list()
        forward = max(min(metric(x, y) for y in ys) for x in xs)
        backward = max(min(metric(x, y) for x in xs) for y in ys)
        return max(forward, backward)
    if K.coords.ndim == 2 or L.coords.ndim == 2:
        dist = cdist(np.atleast_2d(K.coords), np.atleast_2d(L.coords), 'cityblock')
        return float(max(dist.min(axis=1).max(), dist.min(axis=0).max()))
    if K.is_exact and L.is_exact:
        ks, ls = line_coords(K), line_coords(L)
        return max(max(nearest_distance(ls, ks)), max(nearest_distance(ks, ls)))
    ks, ls = np.sort(K.values), np.sort(L.values)
    return float(max(nearest_distance(ls, ks).max(), nearest_distance(ks, ls).max()))


def gap_to_space(K, space):
    """
    Certified bracket of d_H(K, I).
    """
    return space.gap(K)


def is_delta_dense(K, space, delta):
    """
    True iff the open balls of radius delta around K cover the space.
    """
    if not len(K) or not delta > 0:
        return False
    bound = space.gap(K)
    c = compare(bound.hi, delta)
    if c < 0:
        return True
    # a gap equal to delta still covers when the supremum is not reached by a point
    return c == 0 and bound.exact and not bound.attained


def is_sdense(K, space, delta):
    if not len(K) or not delta > 0:
        return False
    return compare(space.gap(K).hi, delta) < 0


def min_pairwise_distance(K):
    """
    Smallest distance between two distinct points of K; +inf for fewer than two points.
    Labelled points compare by value, so distinct indices may be at distance 0.
    """
    if len(K) < 2:
        return INF
    if K.coords.ndim == 2:
        dist = cdist(K.coords, K.coords, 'cityblock')
        np.fill_diagonal(dist, INF)
        return float(dist.min())
    if K.denominator is not None:
        return Fraction(int(np.diff(np.sort(K.coords)).min()), K.denominator)
    if K.is_exact:
        values = sorted(K.exact_values())
        return min(b - a for a, b in zip(values, values[1:]))
    values = np.sort(K.values)
    return float(np.diff(values).min())


def is_stretched(K, space):
    if len(K) < 2:
        return True
    return compare(min_pairwise_distance(K), space.gap(K).hi) >= 0


def is_strongly_stretched(K, space):
    if len(K) < 2:
        return True
    return compare(min_pairwise_distance(K), space.gap(K).hi) > 0


class _Packing(object):
    """
    Sorted chosen points with a closed exclusion radius.
    """

    def __init__(self, radius, start=()):
        self.radius = radius
        self.points = sorted(start)

    def admits(self, x):
        i = bisect.bisect_left(self.points, x)
        for j in (i - 1, i):
            if 0 <= j < len(self.points) and compare(abs(self.points[j] - x), self.radius) <= 0:
                return False
        return True

    def add(self, x):
        bisect.insort(self.points, x)


def greedy_packing(space, delta, probe=None, seed=None, start=None):
    """
    Greedy net: scan the probes of the space and keep every probe outside the closed
    balls of radius delta/2 around the points kept so far, then insert witnesses of the
    remaining gap until it is at most delta/2.

    The result is delta-dense, strongly stretched and its points are more than delta/2
    apart; any failure of these raises UnresolvedError.

    :param probe: probe spacing, delta/8 by default
    :param seed: when given, the probe order is shuffled with this seed
    :param start: points the net must contain (pairwise more than delta/2 apart)
    """
    if not delta > 0:
        raise DomainError('greedy packing needs delta > 0, got {}'.format(delta))
    if not space.real_line:
        raise DomainError('greedy packing is defined on real-line spaces, not {}'.format(space))
    step = delta / 8 if probe is None else probe
    probes, cover = space.probes(step)
    if compare(cover, delta / 4) >= 0:
        raise UnresolvedError('probe spacing {} does not resolve delta={} on {}'.format(step, delta, space))
    order = probes.as_list()
    if seed is not None:
        rng = np.random.default_rng(seed)
        order = [order[i] for i in rng.permutation(len(order))]

    packing = _Packing(delta / 2, start.as_list() if start is not None else ())
    for x in order:
        if packing.admits(x):
            packing.add(x)

    for _ in range(len(order) + 1):
        x = space.witness(FiniteSet.from_values(packing.points), delta / 2)
        if x is None:
            break
        if not packing.admits(x):
            raise UnresolvedError('witness {} collides with the net on {}'.format(x, space))
        packing.add(x)
    else:
        raise UnresolvedError('coverage repair did not terminate on {}'.format(space))

    K = FiniteSet.from_values(packing.points)
    if not is_delta_dense(K, space, delta):
        raise UnresolvedError('greedy net is not {}-dense on {}'.format(delta, space))
    if not is_strongly_stretched(K, space) or compare(min_pairwise_distance(K), delta / 2) <= 0:
        raise UnresolvedError('greedy net is not strongly stretched on {}'.format(space))
    logger.debug('greedy net on %s with delta=%s: %d points', space, delta, len(K))
    return K


def stretch_extend(K, space, probe=None, seed=None):
    """
    Stretched superset of K, built by a greedy scan seeded with K at the scale of the
    smallest distance in K.
    """
    if len(K) and is_stretched(K, space):
        return K
    delta = min_pairwise_distance(K) if len(K) >= 2 else space.diameter()
    if not len(K):
        delta = delta / 2
    return greedy_packing(space, delta, probe=probe, seed=seed, start=K if len(K) else None)


def is_delta_dense_halfline(K, delta):
    """
    Half-line density: K n (0, 1/delta) is delta-dense in (0, 1/delta).
    """
    if not 0 < delta < 1:
        raise DomainError('half-line density needs 0 < delta < 1, got {}'.format(delta))
    if not len(K):
        return False
    window = Interval(0.0, 1.0 / delta, left_closed=False, right_closed=False)
    values = K.values
    inside = K.select((values > 0) & (values < 1.0 / delta))
    return is_delta_dense(inside, window, delta)


def reciprocal_parts(K):
    """
    Split a subset of (0, +inf) into K n (0, 1) and the reciprocals of K n [1, +inf).
    """
    values = K.values
    if len(values) and not values.min() > 0:
        raise DomainError('reciprocal parts need positive points, got {}'.format(K))
    low = FiniteSet.from_values(values[values < 1])
    high = FiniteSet.from_values(1.0 / values[values >= 1])
    return low, high
