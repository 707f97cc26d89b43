"""
Laurent Series Module
Exact Laurent series in z over Q or F_p with explicit precision windows.

A series carries a window [lo, hi): every coefficient below ``lo`` is known
to be zero, coefficients in the window are stored, and nothing is known at
or above ``hi`` unless the series is marked exact (a Laurent polynomial).
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterable, Iterator, Mapping, Optional, Tuple

from sympy import Rational, integer_nthroot, isprime
from sympy.ntheory.residue_ntheory import nthroot_mod
from sympy.polys.domains import GF, QQ
from sympy.polys.polyerrors import NotReversible

from config import get_error_message

from . import (
    CharacteristicError,
    FieldMismatchError,
    InputError,
    PrecisionError,
    format_rational,
    parse_rational,
)

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def _domain_for(characteristic: int):
    if characteristic == 0:
        return QQ
    return GF(characteristic)


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: characteristic 0 means Q, otherwise F_p"""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if not isinstance(p, int) or p < 0 or (p != 0 and not isprime(p)):
            raise InputError(f"{get_error_message('field', 'not_prime')} Got {p!r}")

    @property
    def domain(self):
        """The sympy domain (QQ or GF(p)) doing the arithmetic"""
        return _domain_for(self.characteristic)

    @property
    def zero(self):
        return self.domain.zero

    @property
    def one(self):
        return self.domain.one

    @property
    def is_prime_field(self) -> bool:
        return self.characteristic != 0

    def require_char_zero(self, operation: str) -> None:
        """Raise CharacteristicError unless this is Q"""
        if self.characteristic != 0:
            raise CharacteristicError(
                f"{get_error_message('field', 'characteristic')} {operation} was called over F_{self.characteristic}"
            )

    def convert(self, value: Any):
        """
        Convert an int, Fraction, "num/den" string, sympy Rational or domain
        element into an element of this field

        Args:
            value: Value to convert

        Returns:
            Domain element
        """
        K = self.domain
        if K.of_type(value):
            return value
        if isinstance(value, Rational):
            value = Fraction(int(value.p), int(value.q))
        elif not isinstance(value, (int, Fraction, str)):
            try:
                return K.convert(value)
            except Exception as e:
                raise InputError(f"Cannot convert {value!r} into {self}") from e
        q = parse_rational(value)
        if q.denominator == 1:
            return K.convert(q.numerator)
        try:
            return K.convert(q.numerator) * K.revert(K.convert(q.denominator))
        except (NotReversible, ZeroDivisionError) as e:
            raise InputError(f"{value!r} is not defined over F_{self.characteristic}") from e

    def inverse(self, value):
        """Multiplicative inverse, InputError on zero"""
        try:
            return self.domain.revert(value)
        except (NotReversible, ZeroDivisionError) as e:
            raise InputError("Zero has no inverse") from e

    def to_fraction(self, value) -> Fraction:
        """Exact rational (char 0) or representative in [0, p) (char p)"""
        r = self.domain.to_sympy(self.convert(value))
        if self.characteristic:
            return Fraction(int(r) % self.characteristic)
        return Fraction(int(r.p), int(r.q))

    def format(self, value) -> str:
        return format_rational(self.to_fraction(value))

    def nth_root(self, value, m: int):
        """
        An m-th root of a field element, or None if it has none

        Args:
            value: Field element
            m: Root degree

        Returns:
            Domain element r with r**m == value, or None
        """
        q = self.to_fraction(value)
        if q == 0:
            return self.zero
        if self.characteristic:
            root = nthroot_mod(int(q) % self.characteristic, m, self.characteristic)
            return None if root is None else self.convert(int(root))
        if q < 0 and m % 2 == 0:
            return None
        num, num_exact = integer_nthroot(abs(q.numerator), m)
        den, den_exact = integer_nthroot(q.denominator, m)
        if not (num_exact and den_exact):
            return None
        sign = -1 if q < 0 else 1
        return self.convert(Fraction(sign * int(num), int(den)))

    def __str__(self) -> str:
        return "Q" if self.characteristic == 0 else f"F_{self.characteristic}"


Q = FieldSpec(0)


class LaurentSeries:
    """
    Immutable Laurent series with a precision window

    Exact series are Laurent polynomials: their precision is infinite and
    ``hi`` only records one past the top stored exponent.
    """

    __slots__ = ('field', 'lo', 'hi', 'exact', '_coeffs')

    def __init__(
        self,
        field: FieldSpec,
        coeffs: Optional[Mapping[int, Any]] = None,
        lo: int = 0,
        hi: int = 0,
        exact: bool = False,
    ):
        if lo > hi and not exact:
            raise InputError(f"Invalid window [{lo}, {hi}): lo must not exceed hi")
        data: Dict[int, Any] = {}
        for e, c in (coeffs or {}).items():
            c = field.convert(c)
            if not c:
                continue
            if e < lo:
                raise InputError(f"Coefficient at z^{e} lies below the window start {lo}")
            if e >= hi and not exact:
                continue
            data[e] = c
        if exact:
            top = max(data) + 1 if data else lo
            hi = max(hi, top, lo)
        self.field = field
        self.lo = lo
        self.hi = hi
        self.exact = exact
        self._coeffs = data

    # Constructors

    @classmethod
    def zero(cls, field: FieldSpec = Q, lo: int = 0, hi: int = 0, exact: bool = True) -> 'LaurentSeries':
        return cls(field, {}, lo, hi, exact)

    @classmethod
    def one(cls, field: FieldSpec = Q) -> 'LaurentSeries':
        return cls.monomial(0, 1, field)

    @classmethod
    def monomial(cls, exponent: int, coefficient: Any = 1, field: FieldSpec = Q) -> 'LaurentSeries':
        """Exact series c z^exponent"""
        return cls(field, {exponent: coefficient}, exponent, exponent + 1, exact=True)

    @classmethod
    def polynomial(cls, coeffs: Mapping[int, Any], field: FieldSpec = Q) -> 'LaurentSeries':
        """Exact Laurent polynomial from {exponent: coefficient}"""
        nonzero = [e for e, c in coeffs.items() if field.convert(c)]
        lo = min(nonzero) if nonzero else 0
        return cls(field, coeffs, lo, lo, exact=True)

    # Accessors

    @property
    def precision(self) -> float:
        """Exclusive upper bound of knowledge (math.inf for exact series)"""
        return math.inf if self.exact else self.hi

    @property
    def window(self) -> Tuple[int, int]:
        return self.lo, self.hi

    def coefficient(self, exponent: int):
        """
        Coefficient of z^exponent

        Raises:
            PrecisionError: if the exponent is at or beyond the precision
        """
        if exponent < self.lo:
            return self.field.zero
        if exponent >= self.precision:
            raise PrecisionError(
                f"Coefficient of z^{exponent} is unknown (window [{self.lo}, {self.hi}))"
            )
        return self._coeffs.get(exponent, self.field.zero)

    def items(self) -> Iterator[Tuple[int, Any]]:
        """Nonzero (exponent, coefficient) pairs in increasing exponent order"""
        for e in sorted(self._coeffs):
            yield e, self._coeffs[e]

    def support(self) -> Tuple[int, ...]:
        return tuple(sorted(self._coeffs))

    def valuation(self) -> Optional[int]:
        """Least exponent with a nonzero coefficient, None if none is visible"""
        return min(self._coeffs) if self._coeffs else None

    def is_zero(self) -> bool:
        """True when every coefficient in the window is zero"""
        return not self._coeffs

    def leading_coefficient(self):
        v = self.valuation()
        if v is None:
            raise PrecisionError("Series has no visible nonzero coefficient")
        return self._coeffs[v]

    # Window manipulation

    def truncate(self, hi: int) -> 'LaurentSeries':
        """Forget everything at or above hi"""
        hi = int(min(hi, self.precision))
        hi = max(hi, self.lo)
        return LaurentSeries(self.field, self._coeffs, self.lo, hi, exact=False)

    def tightened(self) -> 'LaurentSeries':
        """Same series with lo raised to the visible valuation"""
        v = self.valuation()
        if v is None or v == self.lo:
            return self
        return LaurentSeries(self.field, self._coeffs, v, self.hi, self.exact)

    def with_lo(self, lo: int) -> 'LaurentSeries':
        """Same series with the window start lowered to lo"""
        if lo > self.lo:
            v = self.valuation()
            if v is not None and v < lo:
                raise InputError(f"Cannot raise window start above the valuation {v}")
        return LaurentSeries(self.field, self._coeffs, lo, max(self.hi, lo), self.exact)

    def shift(self, n: int) -> 'LaurentSeries':
        """Multiply by z^n"""
        data = {e + n: c for e, c in self._coeffs.items()}
        return LaurentSeries(self.field, data, self.lo + n, self.hi + n, self.exact)

    def to_exact(self) -> 'LaurentSeries':
        """The stored window contents as a Laurent polynomial"""
        return LaurentSeries(self.field, self._coeffs, self.lo, self.lo, exact=True)

    # Arithmetic

    def _check_field(self, other: 'LaurentSeries') -> None:
        if self.field != other.field:
            raise FieldMismatchError(f"{get_error_message('field', 'mismatch')} {self.field} vs {other.field}")

    def _coerce(self, other: Any) -> 'LaurentSeries':
        if isinstance(other, LaurentSeries):
            self._check_field(other)
            return other
        return LaurentSeries.monomial(0, other, self.field)

    def __add__(self, other: Any) -> 'LaurentSeries':
        other = self._coerce(other)
        lo = min(self.lo, other.lo)
        exact = self.exact and other.exact
        hi = max(self.hi, other.hi) if exact else int(min(self.precision, other.precision))
        K = self.field.domain
        data = dict(self._coeffs)
        for e, c in other._coeffs.items():
            data[e] = K.add(data.get(e, K.zero), c)
        return LaurentSeries(self.field, data, lo, max(hi, lo), exact)

    __radd__ = __add__

    def __neg__(self) -> 'LaurentSeries':
        data = {e: -c for e, c in self._coeffs.items()}
        return LaurentSeries(self.field, data, self.lo, self.hi, self.exact)

    def __sub__(self, other: Any) -> 'LaurentSeries':
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> 'LaurentSeries':
        return self._coerce(other) - self

    def scale(self, scalar: Any) -> 'LaurentSeries':
        s = self.field.convert(scalar)
        data = {e: c * s for e, c in self._coeffs.items()}
        return LaurentSeries(self.field, data, self.lo, self.hi, self.exact)

    def __mul__(self, other: Any) -> 'LaurentSeries':
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        self._check_field(other)
        lo = self.lo + other.lo
        exact = self.exact and other.exact
        bound = min(self.lo + other.precision, other.lo + self.precision)
        if not exact and bound <= lo:
            raise PrecisionError(
                f"{get_error_message('precision', 'window_too_small')} Product starts at z^{lo} but is known only below z^{bound}"
            )
        K = self.field.domain
        data: Dict[int, Any] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                e = e1 + e2
                if e >= bound:
                    continue
                data[e] = K.add(data.get(e, K.zero), c1 * c2)
        hi = lo if exact else max(int(bound), lo)
        return LaurentSeries(self.field, data, lo, hi, exact)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> 'LaurentSeries':
        if k < 0:
            return self.invert() ** (-k)
        result = LaurentSeries.one(self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def invert(self, hi: Optional[int] = None) -> 'LaurentSeries':
        """
        Multiplicative inverse of a series with a visible valuation

        Args:
            hi: Requested exclusive upper bound of the inverse window

        Returns:
            Series b with self * b = 1 on the common window

        Raises:
            InputError: for the zero series
            PrecisionError: if the valuation is not visible or hi exceeds
                what the input determines
        """
        v = self.valuation()
        if v is None:
            if self.exact:
                raise InputError("The zero series has no inverse")
            raise PrecisionError(f"Valuation is not determined within [{self.lo}, {self.hi})")
        K = self.field.domain
        c0_inv = self.field.inverse(self._coeffs[v])
        if self.exact and len(self._coeffs) == 1:
            return LaurentSeries(self.field, {-v: c0_inv}, -v, -v + 1, exact=True)
        natural = self.precision - 2 * v
        if hi is None:
            hi = int(natural) if not self.exact else self.hi - 2 * v
        elif hi > natural:
            raise PrecisionError(
                f"Inverse window up to z^{hi} exceeds the available precision {int(natural)}"
            )
        b: Dict[int, Any] = {}
        for k in range(0, hi + v):
            s = K.one if k == 0 else K.zero
            for j in range(1, k + 1):
                a = self._coeffs.get(v + j)
                if a is None:
                    continue
                bk = b.get(-v + k - j)
                if bk is not None:
                    s = s - a * bk
            if s:
                b[-v + k] = s * c0_inv
        return LaurentSeries(self.field, b, -v, max(hi, -v), exact=False)

    def __truediv__(self, other: Any) -> 'LaurentSeries':
        if not isinstance(other, LaurentSeries):
            return self.scale(self.field.inverse(self.field.convert(other)))
        return self * other.invert()

    def derivative(self) -> 'LaurentSeries':
        """d/dz"""
        K = self.field.domain
        data = {e - 1: c * K.convert(e) for e, c in self._coeffs.items() if e}
        return LaurentSeries(self.field, data, self.lo - 1, self.hi - 1, self.exact)

    def residue(self):
        """
        Coefficient of z^{-1}

        Raises:
            PrecisionError: when the window does not determine it
        """
        if -1 >= self.precision:
            raise PrecisionError(
                f"Window [{self.lo}, {self.hi}) does not determine the z^-1 coefficient"
            )
        return self.coefficient(-1)

    def nth_root(self, m: int, hi: Optional[int] = None) -> 'LaurentSeries':
        """
        m-th root by Newton iteration

        Args:
            m: Root degree, invertible in the field
            hi: Requested exclusive upper bound of the result window

        Returns:
            Series r with r**m = self on the window
        """
        if m < 1:
            raise InputError(f"Root degree must be positive, got {m}")
        if self.field.characteristic and m % self.field.characteristic == 0:
            raise InputError(f"Root degree {m} is not invertible in {self.field}")
        v = self.valuation()
        if v is None:
            raise PrecisionError("Valuation is not determined; no root can be taken")
        if v % m:
            raise InputError(f"Valuation {v} is not divisible by {m}")
        r0 = self.field.nth_root(self._coeffs[v], m)
        if r0 is None:
            raise InputError(f"Leading coefficient has no {m}-th root in {self.field}")
        unit = self.shift(-v)
        available = unit.precision if not unit.exact else unit.hi
        target = (hi - v // m) if hi is not None else available
        if target > unit.precision:
            raise PrecisionError(f"Root window up to z^{hi} exceeds the available precision")
        target = int(target)
        K = self.field.domain
        m_elem = K.convert(m)
        root = LaurentSeries(self.field, {0: r0}, 0, 0, exact=True)
        prec = 1
        while prec < target:
            prec = min(2 * prec, target)
            u_p = unit.truncate(prec).to_exact()
            residual = root ** m - u_p
            slope = (root ** (m - 1)).scale(m_elem)
            step = (residual * slope.invert(prec)).truncate(prec)
            root = (root - step).truncate(prec).to_exact()
        return LaurentSeries(self.field, root.shift(v // m)._coeffs, v // m, v // m + max(target, 0))

    # Comparison

    def agrees_with(self, other: 'LaurentSeries') -> bool:
        """True when both series coincide on their common window"""
        self._check_field(other)
        top = min(self.precision, other.precision)
        keys = set(self._coeffs) | set(other._coeffs)
        K = self.field.domain
        for e in keys:
            if e >= top:
                continue
            if self._coeffs.get(e, K.zero) != other._coeffs.get(e, K.zero):
                return False
        return True

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.field == other.field
            and self.exact == other.exact
            and (self.exact or self.hi == other.hi)
            and self._coeffs == other._coeffs
        )

    def __hash__(self) -> int:
        return hash((self.field, self.exact, self.hi if not self.exact else None,
                     tuple(sorted(self._coeffs.items(), key=lambda item: item[0]))))

    def __repr__(self) -> str:
        terms = ' + '.join(f'{self.field.format(c)}*z^{e}' for e, c in self.items()) or '0'
        tail = '' if self.exact else f' + O(z^{self.hi})'
        return f'LaurentSeries({terms}{tail}, lo={self.lo})'


def series_from_pairs(pairs: Iterable[Tuple[int, Any]], field: FieldSpec, lo: int, hi: int,
                      exact: bool = False) -> LaurentSeries:
    """Build a series from (exponent, coefficient) pairs"""
    data: Dict[int, Any] = {}
    K = field.domain
    for e, c in pairs:
        data[e] = K.add(data.get(e, K.zero), field.convert(c))
    return LaurentSeries(field, data, lo, hi, exact)


__all__ = [
    'FieldSpec',
    'Q',
    'LaurentSeries',
    'series_from_pairs',
]
