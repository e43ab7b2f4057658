"""Pochhammer symbols and terminating generalized hypergeometric series."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InvalidSeries

# parameters in this package are integers or half-integers given exactly
_INT_TOL = 1e-12


def _is_nonpositive_integer(a: float) -> bool:
    r = round(a)
    return r <= 0 and abs(a - r) <= _INT_TOL


def pochhammer(c: float, k: int) -> float:
    """Rising factorial ``(c)_k = c (c+1) ... (c+k-1)``, with ``(c)_0 = 1``."""
    if k < 0:
        raise ValueError(f"pochhammer order must be nonnegative, got {k}")
    out = 1.0
    for i in range(k):
        out *= c + i
    return out


@dataclass(frozen=True)
class HypergeometricSpec:
    """Parameters of a terminating ``rFs`` series.

    ``term_cap`` is the largest summation index ``k`` that is included, so
    ``term_cap=0`` returns only the leading 1. At least one numerator must be
    a nonpositive integer when ``term_cap`` is ``None``.
    """

    numerator_params: tuple
    denominator_params: tuple
    argument: float = 1.0
    term_cap: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "numerator_params", tuple(float(a) for a in self.numerator_params))
        object.__setattr__(self, "denominator_params", tuple(float(b) for b in self.denominator_params))
        if self.term_cap is not None and self.term_cap < 0:
            raise InvalidSeries(f"term_cap must be nonnegative, got {self.term_cap}")
        if self.term_cap is None and not any(_is_nonpositive_integer(a) for a in self.numerator_params):
            raise InvalidSeries(
                "series does not terminate: no nonpositive-integer numerator parameter and no term_cap"
            )

    @property
    def last_index(self) -> int:
        """Index of the last term that can be nonzero."""
        stops = [-round(a) for a in self.numerator_params if _is_nonpositive_integer(a)]
        if self.term_cap is not None:
            stops.append(self.term_cap)
        return min(stops)


def _check_denominators(spec: HypergeometricSpec, k: int) -> None:
    for b in spec.denominator_params:
        if abs(b + k) <= _INT_TOL:
            raise InvalidSeries(f"denominator parameter {b} gives a vanishing Pochhammer at index {k + 1}")


def hyp_terminating(spec: HypergeometricSpec, exact: bool = True) -> float:
    """Sum a terminating hypergeometric series.

    Terms come from the ratio recurrence
    ``t_{k+1} = t_k * prod(a_i + k) / prod(b_j + k) * z / (k + 1)``.

    With ``exact=True`` (default) the recurrence runs in rational arithmetic
    on the binary values of the parameters and the sum is rounded once, so
    the result is correctly rounded however strongly the terms cancel. The
    ``exact=False`` path works in floats and adds with ``math.fsum``; its
    error grows like ``eps * sum |t_k|``, which for the alternating series of
    a 32-site chain is around 1e-7.

    Raises
    ------
    InvalidSeries
        If a denominator factor ``b_j + k`` vanishes at an index that is
        reached before termination.
    """
    if not exact:
        return math.fsum(hyp_terms(spec))
    last = spec.last_index
    num = [Fraction(a) for a in spec.numerator_params]
    den = [Fraction(b) for b in spec.denominator_params]
    z = Fraction(spec.argument)
    term = Fraction(1)
    total = Fraction(1)
    for k in range(last):
        _check_denominators(spec, k)
        ratio = z / (k + 1)
        for a in num:
            ratio *= a + k
        for b in den:
            ratio /= b + k
        term *= ratio
        total += term
    return float(total)


def hyp_terms(spec: HypergeometricSpec) -> list[float]:
    """Float terms ``t_0 .. t_last`` of the series."""
    last = spec.last_index
    z = spec.argument
    term = 1.0
    terms = [1.0]
    for k in range(last):
        _check_denominators(spec, k)
        num = 1.0
        for a in spec.numerator_params:
            num *= a + k
        den = 1.0
        for b in spec.denominator_params:
            den *= b + k
        term *= num / den * z / (k + 1)
        terms.append(term)
    return terms


def hyp(numerator: Sequence[float], denominator: Sequence[float], z: float = 1.0,
        term_cap: Optional[int] = None, exact: bool = True) -> float:
    """Shorthand for ``hyp_terminating(HypergeometricSpec(...))``."""
    return hyp_terminating(HypergeometricSpec(tuple(numerator), tuple(denominator), z, term_cap), exact)
