"""
Utilities Module for the Sato Grassmannian toolkit
Contains the exact-arithmetic substrate (Laurent series, partitions,
time-variable polynomials), linear algebra helpers, JSON codecs and the
exception hierarchy shared across the application.
"""

from typing import Any, Iterable, List, Sequence, Tuple, Union
from fractions import Fraction

# Version Information
__version__ = '1.0.0'
__author__ = 'Sato Toolkit Team'

# Type Aliases
Scalar = Any  # element of a sympy domain (QQ or GF(p))
RationalLike = Union[int, str, Fraction]
Exponent = int
Monomial = Tuple[int, ...]
Window = Tuple[int, int]


class SatoError(Exception):
    """Base exception for all toolkit errors"""
    pass


class InputError(SatoError, ValueError):
    """Exception raised for malformed or inconsistent input data"""
    pass


class FieldMismatchError(InputError):
    """Exception raised when operands live over different fields"""
    pass


class CharacteristicError(SatoError):
    """Exception raised when a characteristic-zero operation meets a prime field"""
    pass


class PrecisionError(SatoError):
    """Exception raised when a window, depth, precision or weight is too small"""
    pass


class BigCellError(SatoError):
    """Exception raised when a Baker-Akhiezer function is requested off the big cell"""
    pass


class CertificationError(SatoError):
    """Exception raised when an exact certification fails where it must succeed"""
    pass


def parse_rational(value: RationalLike) -> Fraction:
    """
    Parse an exact rational from an int, a Fraction or a "num/den" string

    Args:
        value: Value to parse

    Returns:
        Fraction in lowest terms
    """
    if isinstance(value, bool):
        raise InputError(f"Boolean is not a rational number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"Invalid rational literal {value!r}: {e}") from e
    raise InputError(f"Unsupported rational value: {value!r}")


def format_rational(value: Fraction) -> str:
    """
    Format a rational as "num/den" (or "num" for integers)

    Args:
        value: Rational to format

    Returns:
        Canonical string in lowest terms
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f'{value.numerator}/{value.denominator}'


def parse_integer_list(text: str) -> List[int]:
    """
    Parse a comma separated list of integers, e.g. "2,1" or "" for the empty list

    Args:
        text: Comma separated integers

    Returns:
        List of integers
    """
    text = (text or '').strip().strip('[]()')
    if not text:
        return []
    try:
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError as e:
        raise InputError(f"Invalid integer list {text!r}") from e


def parse_rational_list(text: str) -> List[Fraction]:
    """Parse a comma separated list of rationals such as "1/2,3,-4/5" """
    text = (text or '').strip()
    if not text:
        return []
    return [parse_rational(part) for part in text.split(',') if part.strip()]


def pairwise(items: Sequence[Any]) -> Iterable[Tuple[Any, Any]]:
    """Yield all unordered pairs (items[i], items[j]) with i <= j"""
    for i in range(len(items)):
        for j in range(i, len(items)):
            yield items[i], items[j]


def sign_of_weight(weight: int) -> int:
    """(-1)**weight as an int"""
    return -1 if weight % 2 else 1


# Export all utilities
__all__ = [
    'Scalar',
    'RationalLike',
    'Exponent',
    'Monomial',
    'Window',
    'SatoError',
    'InputError',
    'FieldMismatchError',
    'CharacteristicError',
    'PrecisionError',
    'BigCellError',
    'CertificationError',
    'parse_rational',
    'format_rational',
    'parse_integer_list',
    'parse_rational_list',
    'pairwise',
    'sign_of_weight',
]
