from collections import OrderedDict
from fractions import Fraction
from math import gcd

import numpy as np


TOLERANCE = 1e-12           # float comparisons; exact coordinates compare with zero tolerance

DOMAIN_ALL = 'all'
DOMAIN_STRETCHED = 'stretched'
DOMAIN_CLASS_S = 'class-s'  # one point per nonempty equal-width bin


class ExtensionError(Exception):
    """
    Base class for all errors raised by the package.
    """


class DomainError(ExtensionError, ValueError):
    """
    Precondition violated: empty input, point outside its space, sampler/space kind mismatch.
    """


class UnresolvedError(ExtensionError):
    """
    A predicate cannot be decided with the resolution supplied (probe grid too coarse,
    bin membership undecidable).
    """


class SamplerError(ExtensionError):
    """
    A sampler broke its contract: the certified gap grew, or a stretched ladder emitted
    a set that is not stretched.
    """


class OracleError(ExtensionError):
    """
    A measure oracle is inconsistent (negative, non-additive or non-monotone layers).
    """


class EvaluationError(ExtensionError):
    """
    A set function raised or returned NaN while a ladder was evaluated.
    """

    def __init__(self, message, level=None, trace=None):
        super(EvaluationError, self).__init__(message)
        self.level = level
        self.trace = trace or []


class ConfigError(ExtensionError):
    """
    Experiment config is incomplete or malformed.
    """

    def __init__(self, field, message):
        super(ConfigError, self).__init__('{}: {}'.format(field, message))
        self.field = field


class FiniteSet(object):
    """
    Finite set of points of a space, the argument of every set function.

    Points are stored column-wise:

    * ``coords`` - coordinates, shape (n,) for subsets of the real line, (n, 2) for products.
      Float arrays hold generic reals; object arrays hold exact ``Fraction`` coordinates.
    * ``labels`` - optional point identities (function-induced spaces: the index of each point;
      distinct labels may share a coordinate).
    * ``denominator`` - when set, ``coords`` are integer numerators of exact rationals over
      this common denominator (Cantor points).

    Use the ``from_*`` constructors; they remove duplicate identities and sort.
    """

    def __init__(self, coords, labels=None, denominator=None):
        self.coords = coords
        self.labels = labels
        self.denominator = denominator

    @staticmethod
    def empty():
        return FiniteSet(np.empty(0, dtype=float))

    @staticmethod
    def from_values(values):
        """
        :param values: real coordinates; ``Fraction`` entries are kept exact
        :type values: iterable
        """
        values = list(values)
        if any(isinstance(v, Fraction) for v in values):
            unique = sorted(set(values))
            coords = np.empty(len(unique), dtype=object)
            coords[:] = unique
            return FiniteSet(coords)
        coords = np.unique(np.asarray(values, dtype=float))
        if not np.all(np.isfinite(coords)):
            raise DomainError('coordinates must be finite reals: {}'.format(values))
        return FiniteSet(coords)

    @staticmethod
    def from_numerators(numerators, denominator):
        numerators = np.unique(np.asarray(numerators, dtype=np.int64))
        return FiniteSet(numerators, denominator=int(denominator))

    @staticmethod
    def from_labels(labels, values):
        labels = np.asarray(labels, dtype=np.int64)
        values = np.asarray(values, dtype=float)
        labels, first = np.unique(labels, return_index=True)
        return FiniteSet(values[first], labels=labels)

    @staticmethod
    def from_pairs(pairs):
        pairs = np.asarray(pairs, dtype=float).reshape(-1, 2)
        return FiniteSet(np.unique(pairs, axis=0))

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.as_list())

    def __repr__(self):
        shown = self.as_list()
        if len(shown) > 8:
            shown = shown[:4] + ['...'] + shown[-2:]
        return 'FiniteSet<{}: {}>'.format(len(self), shown)

    @property
    def is_exact(self):
        return self.denominator is not None or self.coords.dtype == object

    @property
    def is_labelled(self):
        return self.labels is not None

    @property
    def values(self):
        """
        Coordinates as a float array.
        """
        if self.denominator is not None:
            return self.coords.astype(float) / self.denominator
        if self.coords.dtype == object:
            return np.array([float(x) for x in self.coords], dtype=float)
        return self.coords

    def exact_values(self):
        """
        Coordinates as a list of ``Fraction`` (exact sets only).
        """
        if self.denominator is not None:
            return [Fraction(int(num), self.denominator) for num in self.coords]
        if self.coords.dtype == object:
            return list(self.coords)
        raise DomainError('set holds floating point coordinates')

    def as_list(self):
        if self.labels is not None:
            return [int(label) for label in self.labels]
        if self.is_exact:
            return self.exact_values()
        if self.coords.ndim == 2:
            return [tuple(row) for row in self.coords.tolist()]
        return self.coords.tolist()

    def select(self, mask):
        mask = np.asarray(mask, dtype=bool)
        labels = self.labels[mask] if self.labels is not None else None
        return FiniteSet(self.coords[mask], labels=labels, denominator=self.denominator)

    def union(self, other):
        if not len(self):
            return other
        if not len(other):
            return self
        if self.labels is not None:
            return FiniteSet.from_labels(
                np.concatenate([self.labels, other.labels]),
                np.concatenate([self.coords, other.coords]))
        if self.denominator is not None and other.denominator is not None:
            common = self.denominator * other.denominator // gcd(self.denominator, other.denominator)
            return FiniteSet.from_numerators(
                np.concatenate([self.coords * (common // self.denominator),
                                other.coords * (common // other.denominator)]),
                common)
        if self.coords.ndim == 2:
            return FiniteSet.from_pairs(np.concatenate([self.coords, other.coords]))
        if self.is_exact or other.is_exact:
            return FiniteSet.from_values(self._python_values() + other._python_values())
        return FiniteSet.from_values(np.concatenate([self.coords, other.coords]))

    def _python_values(self):
        return self.exact_values() if self.is_exact else self.coords.tolist()

    def _extreme(self, pick):
        if not len(self):
            raise DomainError('the empty set has no least or greatest point')
        if self.coords.ndim != 1:
            raise DomainError('points of a product space are not ordered')
        if self.is_exact:
            return pick(self._python_values())
        return float(pick(self.coords))

    def min(self):
        return self._extreme(min)

    def max(self):
        return self._extreme(max)


class GapBound(object):
    """
    Certified bracket lo <= d_H(K, I) <= hi.

    ``attained`` tells whether the supremum defining the gap is reached by a point of the
    space; it decides the open-ball boundary case of delta-density.
    """

    def __init__(self, lo, hi=None, attained=True):
        self.lo = lo
        self.hi = lo if hi is None else hi
        self.attained = attained

    @property
    def exact(self):
        return self.lo == self.hi

    def as_list(self):
        return [self.lo, self.hi]

    @staticmethod
    def from_list(t):
        return GapBound(t[0], t[1])

    def __str__(self):
        if self.exact:
            return 'GapBound<{}>'.format(self.hi)
        return 'GapBound<{},{}>'.format(self.lo, self.hi)

    __repr__ = __str__


class RecordBase(object):
    """
    Parameter record.
    All attributes are stored as dictionary elements, so records round-trip through
    plain mappings (YAML configs, summary rows).
    """

    def __init__(self, **fields):
        self.data = OrderedDict()
        for key, value in fields.items():
            self.data[key] = value

    def __getattr__(self, key):
        data = self.__dict__.get('data')
        if data is None or key not in data:
            raise AttributeError(key)
        return data[key]

    def __setattr__(self, key, value):
        if key != 'data':
            self.data[key] = value
        else:
            super(RecordBase, self).__setattr__(key, value)

    def __str__(self):
        return str([(key, value) for key, value in self.data.items() if value is not None])

    def get(self, key, default=None):
        return self.data.get(key, default)

    def as_dict(self):
        return OrderedDict(self.data)

    @classmethod
    def from_dict(cls, mapping):
        return cls(**mapping)
