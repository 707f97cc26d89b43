"""
Formal groups Γ_− and Γ_+ at finite truncation.

Elements of Γ_− only have nilpotent coefficients, so they are handled through
universal elements whose z-coefficients are time polynomials (BiSeries).
Scalar exponentials of Γ_± are returned as power series in the group
parameter: w = z^{-1} for Γ_−, z for Γ_+.
"""

import logging
from typing import Any, Callable, Dict, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from utils import FieldMismatchError, InputError, PrecisionError
from utils.laurent import FieldSpec, LaurentSeries, Q
from utils.partitions import DEFAULT_TAG, TPolynomial, elementary_schur

logger = logging.getLogger(__name__)


class BiSeries:
    """
    Laurent series in z whose coefficients are TPolynomials

    Same window rules as LaurentSeries: coefficients below ``lo`` vanish,
    nothing is known at or above ``hi`` unless the series is exact.
    """

    __slots__ = ('field', 'lo', 'hi', 'exact', 'weight', 'tags', 'nvars', '_coeffs')

    def __init__(
        self,
        coeffs: Optional[Mapping[int, Any]] = None,
        lo: int = 0,
        hi: int = 0,
        exact: bool = False,
        weight: int = 0,
        tags: Tuple[str, ...] = (DEFAULT_TAG,),
        nvars: Optional[int] = None,
        field: FieldSpec = Q,
    ):
        if lo > hi and not exact:
            raise InputError(f"Invalid window [{lo}, {hi}): lo must not exceed hi")
        self.field = field
        self.weight = weight
        self.tags = tuple(tags)
        self.nvars = max(weight, 1) if nvars is None else nvars
        data: Dict[int, TPolynomial] = {}
        for e, c in (coeffs or {}).items():
            c = self._lift(c)
            if c.is_zero():
                continue
            if e < lo:
                raise InputError(f"Coefficient at z^{e} lies below the window start {lo}")
            if e >= hi and not exact:
                continue
            data[e] = c
        if exact:
            top = max(data) + 1 if data else lo
            hi = max(hi, top, lo)
        self.lo = lo
        self.hi = hi
        self.exact = exact
        self._coeffs = data

    def _lift(self, value: Any) -> TPolynomial:
        if isinstance(value, TPolynomial):
            if value.tags != self.tags:
                raise InputError(f"Coefficient sets {value.tags} differ from {self.tags}")
            if value.field != self.field:
                raise FieldMismatchError(f"Field mismatch: {value.field} vs {self.field}")
            if value.weight < self.weight:
                raise PrecisionError(
                    f"Coefficient truncated at weight {value.weight} below the series weight {self.weight}"
                )
            return value.relayout(self.nvars, self.weight)
        return TPolynomial.constant(value, self.weight, self.tags, self.nvars, self.field)

    # Constructors

    @classmethod
    def one(cls, weight: int, tags: Tuple[str, ...] = (DEFAULT_TAG,), nvars: Optional[int] = None,
            field: FieldSpec = Q) -> 'BiSeries':
        return cls({0: 1}, 0, 1, True, weight, tags, nvars, field)

    @classmethod
    def from_series(cls, series: LaurentSeries, weight: int, tags: Tuple[str, ...] = (DEFAULT_TAG,),
                    nvars: Optional[int] = None) -> 'BiSeries':
        """Scalar Laurent series seen as a series with constant t-coefficients"""
        return cls(dict(series.items()), series.lo, series.hi, series.exact, weight, tags, nvars,
                   series.field)

    def _like(self, coeffs: Mapping[int, Any], lo: int, hi: int, exact: bool) -> 'BiSeries':
        return BiSeries(coeffs, lo, hi, exact, self.weight, self.tags, self.nvars, self.field)

    # Accessors

    @property
    def precision(self) -> float:
        return float('inf') if self.exact else self.hi

    @property
    def window(self) -> Tuple[int, int]:
        return self.lo, self.hi

    def coefficient(self, exponent: int) -> TPolynomial:
        """
        TPolynomial coefficient of z^exponent

        Raises:
            PrecisionError: at or beyond the precision
        """
        if exponent >= self.precision:
            raise PrecisionError(
                f"Coefficient of z^{exponent} is unknown (window [{self.lo}, {self.hi}))"
            )
        found = self._coeffs.get(exponent)
        if found is None:
            return TPolynomial.constant(0, self.weight, self.tags, self.nvars, self.field)
        return found

    def items(self) -> Iterator[Tuple[int, TPolynomial]]:
        for e in sorted(self._coeffs):
            yield e, self._coeffs[e]

    def support(self) -> Tuple[int, ...]:
        return tuple(sorted(self._coeffs))

    def valuation(self) -> Optional[int]:
        return min(self._coeffs) if self._coeffs else None

    def is_zero(self) -> bool:
        return not self._coeffs

    def constant_part(self) -> LaurentSeries:
        """The t-independent part, a plain LaurentSeries"""
        data = {e: c.constant_term() for e, c in self._coeffs.items()}
        return LaurentSeries(self.field, data, self.lo, self.hi, self.exact)

    # Window manipulation

    def truncate(self, hi: int) -> 'BiSeries':
        hi = int(min(hi, self.precision))
        return self._like(self._coeffs, self.lo, max(hi, self.lo), False)

    def shift(self, n: int) -> 'BiSeries':
        """Multiply by z^n"""
        return self._like({e + n: c for e, c in self._coeffs.items()}, self.lo + n, self.hi + n, self.exact)

    def map_coefficients(self, fn: Callable[[TPolynomial], TPolynomial],
                         weight: Optional[int] = None, tags: Optional[Tuple[str, ...]] = None,
                         nvars: Optional[int] = None) -> 'BiSeries':
        """Apply fn to every coefficient, optionally changing the coefficient ring"""
        weight = self.weight if weight is None else weight
        tags = self.tags if tags is None else tuple(tags)
        nvars = self.nvars if nvars is None else nvars
        data = {e: fn(c) for e, c in self._coeffs.items()}
        return BiSeries(data, self.lo, self.hi, self.exact, weight, tags, nvars, self.field)

    def embed(self, tags: Tuple[str, ...], position: int) -> 'BiSeries':
        """Move the coefficients into set ``position`` of a multi-set ring"""
        return self.map_coefficients(lambda c: c.embed(tags, position), tags=tags)

    def negate_times(self) -> 'BiSeries':
        """ψ(z, −t)"""
        return self.map_coefficients(TPolynomial.negate_times)

    # Arithmetic

    def _coerce(self, other: Any) -> 'BiSeries':
        if isinstance(other, BiSeries):
            if other.tags != self.tags:
                raise InputError(f"Variable sets differ: {self.tags} vs {other.tags}")
            if other.field != self.field:
                raise FieldMismatchError(f"Field mismatch: {self.field} vs {other.field}")
            return other
        if isinstance(other, LaurentSeries):
            if other.field != self.field:
                raise FieldMismatchError(f"Field mismatch: {self.field} vs {other.field}")
            return BiSeries.from_series(other, self.weight, self.tags, self.nvars)
        return self._like({0: other}, 0, 1, True)

    def __add__(self, other: Any) -> 'BiSeries':
        other = self._coerce(other)
        weight = min(self.weight, other.weight)
        nvars = max(self.nvars, other.nvars)
        exact = self.exact and other.exact
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi) if exact else int(min(self.precision, other.precision))
        data: Dict[int, TPolynomial] = {}
        for source in (self, other):
            for e, c in source._coeffs.items():
                c = c.relayout(nvars, weight)
                data[e] = data[e] + c if e in data else c
        return BiSeries(data, lo, max(hi, lo), exact, weight, self.tags, nvars, self.field)

    __radd__ = __add__

    def __neg__(self) -> 'BiSeries':
        return self._like({e: -c for e, c in self._coeffs.items()}, self.lo, self.hi, self.exact)

    def __sub__(self, other: Any) -> 'BiSeries':
        return self + (-self._coerce(other))

    def scale(self, scalar: Any) -> 'BiSeries':
        return self._like({e: c.scale(scalar) for e, c in self._coeffs.items()}, self.lo, self.hi,
                          self.exact)

    def __mul__(self, other: Any) -> 'BiSeries':
        if isinstance(other, TPolynomial):
            return self.map_coefficients(lambda c: c * other, weight=min(self.weight, other.weight),
                                         nvars=max(self.nvars, other.nvars))
        if not isinstance(other, (BiSeries, LaurentSeries)):
            return self.scale(other)
        other = self._coerce(other)
        weight = min(self.weight, other.weight)
        nvars = max(self.nvars, other.nvars)
        lo = self.lo + other.lo
        exact = self.exact and other.exact
        bound = min(self.lo + other.precision, other.lo + self.precision)
        data: Dict[int, TPolynomial] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                e = e1 + e2
                if e >= bound:
                    continue
                term = c1 * c2
                if term.is_zero():
                    continue
                data[e] = data[e] + term if e in data else term
        hi = lo if exact else max(int(bound), lo)
        return BiSeries(data, lo, hi, exact, weight, self.tags, nvars, self.field)

    __rmul__ = __mul__

    def invert(self, hi: Optional[int] = None) -> 'BiSeries':
        """
        Inverse of a unit: u = c(z)(1 + ε) with c the constant part and ε
        nilpotent in the truncated ring

        Args:
            hi: Requested window end (defaults to what the input determines)

        Raises:
            InputError: when the constant part is zero
            PrecisionError: when its valuation is not visible
        """
        c_inv = self.constant_part().invert()
        scaled = self * c_inv
        epsilon = scaled - 1
        result = BiSeries.one(self.weight, self.tags, self.nvars, self.field)
        power = result
        for _ in range(self.weight * len(self.tags)):
            power = -(power * epsilon)
            if power.is_zero():
                break
            result = result + power
        inverse = result * c_inv
        logger.debug("inverted unit BiSeries over window [%s, %s)", inverse.lo, inverse.hi)
        return inverse if hi is None else inverse.truncate(hi)

    # Substitution

    def evaluate(self, values: Sequence[Any]) -> LaurentSeries:
        """Scalar series at tag_i = values[i-1] (single variable set)"""
        data = {e: c.evaluate(values) for e, c in self._coeffs.items()}
        return LaurentSeries(self.field, data, self.lo, self.hi, self.exact)

    def compose(self, images: Sequence[TPolynomial]) -> 'BiSeries':
        """Substitute tag_i -> images[i-1] in every coefficient"""
        target = images[0]
        data = {e: c.compose(images) for e, c in self._coeffs.items()}
        return BiSeries(data, self.lo, self.hi, self.exact, target.weight, target.tags, target.nvars,
                        self.field)

    # Comparison

    def agrees_with(self, other: 'BiSeries') -> bool:
        top = min(self.precision, other.precision)
        for e in set(self._coeffs) | set(other._coeffs):
            if e >= top:
                continue
            a, b = self.coefficient(e), other.coefficient(e)
            weight = min(a.weight, b.weight)
            if a.truncate(weight) != b.truncate(weight):
                return False
        return True

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BiSeries):
            return NotImplemented
        return (self.tags == other.tags and self.exact == other.exact
                and (self.exact or self.hi == other.hi)
                and set(self._coeffs) == set(other._coeffs)
                and all(self._coeffs[e] == other._coeffs[e] for e in self._coeffs))

    def __hash__(self) -> int:
        return hash((self.tags, self.exact, tuple(sorted(self._coeffs))))

    def __repr__(self) -> str:
        tail = '' if self.exact else f' + O(z^{self.hi})'
        return f'BiSeries({len(self._coeffs)} terms{tail}, lo={self.lo}, W={self.weight}, sets={self.tags})'


# ---------------------------------------------------------------------------
# Universal elements
# ---------------------------------------------------------------------------

def universal_element(W: int, zlo: int = 0, tag: str = DEFAULT_TAG, field: FieldSpec = Q) -> BiSeries:
    """
    v(t, z) = 1 + Σ_{i=1..W} t_i z^{-i} (exact)

    Args:
        W: Truncation weight
        zlo: Requested window start (lowered to -W when needed)
        tag: Variable set name
    """
    tags = (tag,)
    coeffs: Dict[int, Any] = {0: 1}
    for i in range(1, W + 1):
        coeffs[-i] = TPolynomial.variable(i, W, tag, tags, field=field)
    return BiSeries(coeffs, min(zlo, -W), 1, True, W, tags, None, field)


def exponential_element(W: int, sign: int = 1, tag: str = DEFAULT_TAG) -> BiSeries:
    """exp(±Σ t_i z^{-i}) = Σ_k p_k(±t) z^{-k} (exact at weight W, characteristic 0)"""
    tags = (tag,)
    coeffs: Dict[int, Any] = {}
    for k in range(W + 1):
        p = elementary_schur(k, W)
        if sign < 0:
            p = p.negate_times()
        coeffs[-k] = p.retag(tags) if tag != DEFAULT_TAG else p
    return BiSeries(coeffs, -W, 1, True, W, tags, None, Q)


def abel_element(W: int, field: FieldSpec = Q) -> BiSeries:
    """(1 − u/z)^{-1} = 1 + Σ_{i=1..W} u^i z^{-i}, truncated at u-degree W"""
    tags = ('u',)
    coeffs = {-i: TPolynomial.from_terms({(i,): 1}, W, tags, 1, field) for i in range(1, W + 1)}
    coeffs[0] = TPolynomial.constant(1, W, tags, 1, field)
    return BiSeries(coeffs, -W, 1, True, W, tags, 1, field)


def abel_images(W: int, field: FieldSpec = Q) -> List[TPolynomial]:
    """Images of t_i ← u^i, for composing with the universal element"""
    return [TPolynomial.from_terms({(i,): 1}, W, ('u',), 1, field) for i in range(1, W + 1)]


def series_inverse_substitution(W: int, tag: str = DEFAULT_TAG, field: FieldSpec = Q) -> List[TPolynomial]:
    """
    t ↦ t* with v(t*, z) = v(t, z)^{-1}

    Returns:
        [t*_1, ..., t*_W], the z^{-i} coefficients of the inverse universal element
    """
    inverse = universal_element(W, tag=tag, field=field).invert()
    return [inverse.coefficient(-i) for i in range(1, W + 1)]


# ---------------------------------------------------------------------------
# Scalar exponentials
# ---------------------------------------------------------------------------

def _parameters(a: Sequence[Any], field: FieldSpec) -> List[Any]:
    return [field.convert(x) for x in a]


def _place(coeffs: Sequence[Any], sign: int, field: FieldSpec) -> LaurentSeries:
    """Coefficients c_0..c_W of the group parameter as a series in z^{-1} (sign -1) or z (sign +1)"""
    W = len(coeffs) - 1
    if sign < 0:
        # weight-W truncation of a Γ_− element keeps exponents -W..0
        return LaurentSeries(field, {-k: c for k, c in enumerate(coeffs)}, -W, 1, exact=True)
    if sign > 0:
        return LaurentSeries(field, dict(enumerate(coeffs)), 0, W + 1)
    raise InputError(f"sign must be +1 or -1, got {sign!r}")


def exp_char0(a: Sequence[Any], sign: int = -1, field: FieldSpec = Q) -> LaurentSeries:
    """
    exp(Σ a_i z^{∓i}) in characteristic zero

    Args:
        a: Scalars a_1..a_W
        sign: -1 for Γ_− (powers of z^{-1}), +1 for Γ_+ (powers of z)

    Returns:
        Γ_−: the weight-W terms on z^{-W}..z^0 as a Laurent polynomial.
        Γ_+: a power series on the window [0, W+1).
    """
    field.require_char_zero("exp_char0")
    K = field.domain
    vals = _parameters(a, field)
    W = len(vals)
    # k E_k = Σ_i i a_i E_{k-i}
    E = [K.one]
    for k in range(1, W + 1):
        acc = K.zero
        for i in range(1, k + 1):
            acc += K.convert(i) * vals[i - 1] * E[k - i]
        E.append(acc * K.revert(K.convert(k)))
    logger.debug("exp_char0 sign=%d at truncation %d", sign, W)
    return _place(E, sign, field)


def exp_charp(a: Sequence[Any], sign: int = -1, field: FieldSpec = Q) -> LaurentSeries:
    """
    ∏_i (1 − a_i z^{∓i}) in any characteristic, placed like exp_char0

    This map is not a group homomorphism; see the tests for a witness over F_2.
    """
    vals = _parameters(a, field)
    W = len(vals)
    result = LaurentSeries.one(field).truncate(W + 1)
    for i, ai in enumerate(vals, start=1):
        if ai:
            factor = LaurentSeries.polynomial({0: 1, i: -ai}, field)
            result = (result * factor).truncate(W + 1)
    return _place([result.coefficient(k) for k in range(W + 1)], sign, field)


class UnitFactors(NamedTuple):
    """g = minus · z^power · constant · plus"""
    minus: LaurentSeries
    power: int
    constant: Any
    plus: LaurentSeries


def factor_unit(g: LaurentSeries) -> UnitFactors:
    """
    Split a unit of k((z)) into its Γ_−, z-power, constant and Γ_+ parts

    Over a field the Γ_− part is trivial; the Γ_+ part has constant term 1.
    """
    v = g.valuation()
    if v is None:
        raise InputError("The zero series is not a unit")
    c = g.leading_coefficient()
    plus = g.shift(-v).scale(g.field.inverse(c))
    return UnitFactors(LaurentSeries.one(g.field), v, c, plus)


__all__ = [
    'BiSeries',
    'universal_element',
    'exponential_element',
    'abel_element',
    'abel_images',
    'series_inverse_substitution',
    'exp_char0',
    'exp_charp',
    'UnitFactors',
    'factor_unit',
]
