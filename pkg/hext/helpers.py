import math
from fractions import Fraction

import numpy as np

from hext.core import TOLERANCE, DomainError


INF = float('inf')

SCHEDULE_LINEAR = 'linear'
SCHEDULE_DOUBLING = 'doubling'


def is_exact_number(x):
    return isinstance(x, (Fraction, int))


def compare(x, y, tol=TOLERANCE):
    """
    Three-way comparison, exact for rationals and tolerant for floats.

    >>> compare(Fraction(1, 3), Fraction(1, 3))
    0
    >>> compare(0.1 + 0.2, 0.3)
    0
    >>> compare(1, 2)
    -1
    """
    if is_exact_number(x) and is_exact_number(y):
        return (x > y) - (x < y)
    if x == y:
        return 0
    if abs(x - y) <= tol:
        return 0
    return 1 if x > y else -1


def ext_mul(x, y):
    """
    Product on the extended reals with 0 * inf = 0.

    >>> ext_mul(0, float('inf'))
    0.0
    >>> ext_mul(2.0, 3.0)
    6.0
    """
    if x == 0 or y == 0:
        return 0.0
    return x * y


def ext_sum(values):
    """
    Sum on the extended reals; +inf and -inf together are undefined.

    >>> ext_sum([1.0, float('inf')])
    inf
    """
    values = list(values)
    if INF in values and -INF in values:
        raise DomainError('undefined sum of +inf and -inf')
    return math.fsum(values) if all(math.isfinite(v) for v in values) else sum(values)


def ext_dot(x, y):
    """
    Sum of the products x_i * y_i on the extended reals, with 0 * inf = 0.

    >>> ext_dot([0.0, 1.0, 2.0], [float('inf'), 0.5, 0.25])
    1.0
    >>> ext_dot([1.0, 2.0], [float('inf'), 1.0])
    inf
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    with np.errstate(invalid='ignore'):
        products = np.where((x == 0) | (y == 0), 0.0, x * y)
    if np.isposinf(products).any() and np.isneginf(products).any():
        raise DomainError('undefined sum of +inf and -inf')
    return float(np.sum(products))


def format_real(x):
    """
    Locale independent CSV representation.

    >>> format_real(float('-inf'))
    '-inf'
    >>> format_real(Fraction(11, 18))
    '0.6111111111111112'
    >>> format_real(None)
    ''
    """
    if x is None:
        return ''
    x = float(x)
    if math.isinf(x):
        return 'inf' if x > 0 else '-inf'
    return repr(x)


def parse_real(text):
    """
    >>> parse_real('inf')
    inf
    >>> parse_real('1/3')
    Fraction(1, 3)
    >>> parse_real(0.5)
    0.5
    """
    if isinstance(text, (int, float, Fraction)):
        return text
    text = str(text).strip()
    if '/' in text:
        return Fraction(text)
    return float(text)


def resolution(level, base=1, schedule=SCHEDULE_LINEAR):
    """
    Level to resolution mapping shared by the samplers.

    >>> resolution(3, base=10)
    30
    >>> resolution(3, base=10, schedule='doubling')
    40
    """
    if level < 1:
        raise DomainError('level must be >= 1, got {}'.format(level))
    if schedule == SCHEDULE_LINEAR:
        return base * level
    if schedule == SCHEDULE_DOUBLING:
        return base * 2 ** (level - 1)
    raise DomainError('unknown schedule: {}'.format(schedule))
