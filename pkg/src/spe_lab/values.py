"""Extended values and exact rational helpers.

Costs are exact: integers (reachability), fractions (edge weights), and the
two infinities.  float("inf") / float("-inf") are used purely as sentinels;
comparisons against ints and Fractions are exact, and no finite value is
ever stored as a float.
"""

from fractions import Fraction

INF = float("inf")
NEG_INF = float("-inf")


class InputError(ValueError):
    """Malformed game, profile or lasso input."""


class InternalConsistencyError(RuntimeError):
    """A result contradicts a structural guarantee (CLI exit code 3)."""


def parse_rational(x):
    """Parse an int, or a "p/q" string, into an exact number."""
    if isinstance(x, bool):
        raise InputError("booleans are not weights: %r" % (x,))
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            raise InputError("not a rational: %r" % (x,))
    raise InputError("not a rational: %r" % (x,))


def rational_to_json(q):
    if q.denominator == 1:
        return int(q)
    return "%d/%d" % (q.numerator, q.denominator)


def value_to_json(v):
    """Serialize an extended value ("inf", "-inf", int, or "p/q")."""
    if v == INF:
        return "inf"
    if v == NEG_INF:
        return "-inf"
    if isinstance(v, Fraction):
        return rational_to_json(v)
    return int(v)


def value_from_json(x):
    if x == "inf":
        return INF
    if x == "-inf":
        return NEG_INF
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    if isinstance(x, str):
        return parse_rational(x)
    raise InputError("not an extended value: %r" % (x,))
