"""
Tau functions, Baker-Akhiezer functions and the Addition Formula.

τ_U(t) = Σ_λ Ω_λ(U) χ_λ(t), normalized so the stratum coordinate is 1.
The shift t ↦ t ± [z] is applied as Σ_j z^j p_j(±∂̃), so the τ-multiplied
functions

    ψ̂_U(z, t)  = exp(−Σ t_i z^{-i}) · τ_U(t + [z])
    ψ̂*_U(z, t) = exp(+Σ t_i z^{-i}) · τ_U(t − [z])

are available on every stratum; ψ_U = ψ̂_U / τ_U needs the big cell.
Points of index n are handled through their index-0 shift z^{-n}U.
"""

import logging
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

from config import get_error_message
from utils import BigCellError, CertificationError, InputError, PrecisionError
from utils.calculations import TruncatedDeterminant
from utils.laurent import FieldSpec, LaurentSeries
from utils.partitions import (
    TPolynomial,
    apply,
    elementary_operator,
    elementary_schur,
    from_schur_expansion,
)

from .gamma import BiSeries, exponential_element, universal_element
from .grassmannian import GrassPoint

logger = logging.getLogger(__name__)

CHARTS = ('exp', 'additive')


# ---------------------------------------------------------------------------
# Tau functions
# ---------------------------------------------------------------------------

def tau_expand(U: GrassPoint, W: int) -> TPolynomial:
    """
    τ_U through weight W from the Plücker coordinates

    Args:
        U: Point over Q
        W: Truncation weight

    Returns:
        Σ_{|λ| <= W} Ω_λ(U) χ_λ(t)

    Raises:
        CharacteristicError: over F_p
        PrecisionError: when depth or precision is too small for W
    """
    U.field.require_char_zero("tau_expand")
    coordinates = U.pluecker_coordinates(W)
    lam = U.partition
    normalizer = coordinates.get(lam) if lam.weight <= W else U.pluecker(lam)
    if normalizer != U.field.one:
        raise CertificationError(
            f"{get_error_message('check', 'certification')} Stratum coordinate Ω_{lam} = {normalizer}"
        )
    logger.debug("tau_expand: %d nonzero coordinates through weight %d", len(coordinates), W)
    return from_schur_expansion(coordinates, W)


def tau_direct(U: GrassPoint, W: int, chart: str = 'exp') -> TPolynomial:
    """
    τ_U as the vacuum minor of g·U for the universal group element g

    Args:
        U: Point
        W: Truncation weight
        chart: 'exp' uses g = exp(Σ t_i z^{-i}) (characteristic 0, agrees
            with tau_expand); 'additive' uses g = 1 + Σ t_i z^{-i} and works
            in every characteristic

    Returns:
        det_{1<=i,j<=K} [(g·u_j)_{-i}] with K = max(W, deepest gap)
    """
    if chart not in CHARTS:
        raise InputError(f"Unknown chart {chart!r}; expected one of {CHARTS}")
    U.require_weight(W)
    U0 = U.at_index_zero()
    K = max(W, U0.deepest_gap())
    if chart == 'exp':
        U.field.require_char_zero("tau_direct with the exponential chart")
        g = exponential_element(W)
    else:
        g = universal_element(W, field=U.field)
    one = TPolynomial.constant(1, W, g.tags, g.nvars, U.field)
    if K == 0:
        return one
    columns = U0.members_from(-K)
    moved = [g * BiSeries.from_series(u, W, g.tags, g.nvars) for u in columns]
    matrix = [[m.coefficient(-i) for m in moved] for i in range(1, K + 1)]
    logger.debug("tau_direct: %dx%d truncated determinant at weight %d (%s chart)", K, K, W, chart)
    det = TruncatedDeterminant.subset_expansion(
        matrix,
        multiply=lambda a, b: a * b,
        add=lambda a, b: a + b,
        negate=lambda a: -a,
        is_zero=lambda a: a.is_zero(),
        one=one,
    )
    return one.scale(0) if det is None else det


# ---------------------------------------------------------------------------
# Baker-Akhiezer functions
# ---------------------------------------------------------------------------

def _at_weight(poly: TPolynomial, W: int) -> TPolynomial:
    """Re-read a polynomial at truncation W in the standard ring with max(W,1) variables"""
    return poly.relayout(max(W, 1), W)


def _lift_below(poly: TPolynomial, known: int, W: int) -> TPolynomial:
    """
    poly through weight ``known``, recorded at weight W

    Only valid as a factor against a homogeneous polynomial of weight W − known.
    """
    if poly.weight < known:
        raise PrecisionError(
            f"{get_error_message('precision', 'weight_too_small')} "
            f"Need weight {known}, the polynomial is known through {poly.weight}"
        )
    lowered = poly.relayout(max(W, 1), known)
    return TPolynomial(lowered.poly, W, lowered.tags, lowered.nvars)


def shift_coefficients(tau: TPolynomial, sign: int, top: int) -> List[TPolynomial]:
    """
    A_j = p_j(±∂̃)τ for j = 0..top, the z^j coefficients of τ(t ± [z])

    A_j is known to weight tau.weight − j.
    """
    if top > tau.weight:
        raise PrecisionError(
            f"{get_error_message('precision', 'weight_too_small')} "
            f"Shift coefficient A_{top} needs τ through weight >= {top}, got {tau.weight}"
        )
    return [apply(elementary_operator(j, sign), tau) for j in range(top + 1)]


def _hat_coefficients(tau: TPolynomial, W: int, lo: int, hi: int, adjoint: bool) -> Dict[int, TPolynomial]:
    """z^a coefficients of ψ̂ (or ψ̂*) for lo <= a < hi, truncated at weight W"""
    sign = -1 if adjoint else 1
    top = hi - 1 + W
    A = shift_coefficients(tau, sign, max(top, 0))
    prefactors = []
    for k in range(W + 1):
        p = elementary_schur(k, W)
        prefactors.append(_at_weight(p if adjoint else p.negate_times(), W))
    coeffs: Dict[int, TPolynomial] = {}
    for a in range(lo, hi):
        total = None
        for k in range(max(0, -a), W + 1):
            shifted = A[a + k]
            if shifted.is_zero():
                continue
            term = prefactors[k] * _lift_below(shifted, W - k, W)
            total = term if total is None else total + term
        if total is not None and not total.is_zero():
            coeffs[a] = total
    return coeffs


def _tau_for_window(U: GrassPoint, W: int, hi: int) -> TPolynomial:
    return tau_expand(U, W + max(hi - 1, 0))


def ba_hat(U: GrassPoint, W: int, zwin: Tuple[int, int], adjoint: bool = False) -> BiSeries:
    """
    τ-multiplied BA function ψ̂_U (or its adjoint twin ψ̂*_U)

    Args:
        U: Point over Q, any stratum
        W: Truncation weight of the t-coefficients
        zwin: Requested z-window (lo, hi); lo is lowered to −W where needed

    Returns:
        BiSeries on [min(lo, −W), hi)
    """
    zlo, zhi = zwin
    lo = min(zlo, -W)
    if zhi <= lo:
        raise InputError(get_error_message('input', 'invalid_window'))
    tau = _tau_for_window(U, W, zhi)
    coeffs = _hat_coefficients(tau, W, lo, zhi, adjoint)
    return BiSeries(coeffs, lo, zhi, False, W)


def _require_big_cell(U: GrassPoint) -> None:
    if not U.is_big_cell():
        raise BigCellError(
            f"{get_error_message('check', 'big_cell')} Stratum is {U.partition}; "
            f"use ba_structure or ba_hat off the big cell"
        )


def ba(U: GrassPoint, W: int, zwin: Tuple[int, int]) -> BiSeries:
    """
    ψ_U(z, t) = exp(−Σ t_i z^{-i}) τ_U(t + [z]) / τ_U(t)

    Raises:
        BigCellError: τ_U(0) = 0
    """
    _require_big_cell(U)
    hat = ba_hat(U, W, zwin)
    inverse = _at_weight(tau_expand(U, W), W).invert()
    return hat * inverse


def ba_adjoint(U: GrassPoint, W: int, zwin: Tuple[int, int]) -> BiSeries:
    """
    ψ*_U(z, t) = exp(Σ t_i z^{-i}) τ_U(t − [z]) / τ_U(t); it lies in z^{1+n} U^⊥

    Raises:
        BigCellError: τ_U(0) = 0
    """
    _require_big_cell(U)
    hat = ba_hat(U, W, zwin, adjoint=True)
    inverse = _at_weight(tau_expand(U, W), W).invert()
    return hat * inverse


class StructureTerm(NamedTuple):
    """One summand ψ^{(i)}(z) p_i(t) of z^{n−1}ψ̂_U"""
    member: LaurentSeries
    coefficient: TPolynomial
    pole_order: int
    leading_weight: Optional[int]
    leading_part: TPolynomial


def structure_expansion(U: GrassPoint, W: int,
                        adjoint: bool = False) -> List[Tuple[LaurentSeries, TPolynomial]]:
    """
    z^{n−1}ψ̂_U = Σ_i u_i(z) P_i(t) over the echelon members u_i of U

    P_i is the coefficient of z^{val(u_i)} in z^{n−1}ψ̂_U; every other
    coefficient up to the frame precision, or as far as the depth and
    precision of U let τ reach, is certified to match. With
    ``adjoint`` the same is done for z^{−n−1}ψ̂*_U over the members of U^⊥.

    Args:
        U: Point over Q, any stratum
        W: Truncation weight
        adjoint: Expand ψ̂*_U over U^⊥ instead

    Returns:
        (member, P_i) for all members with nonzero P_i, decreasing valuation

    Raises:
        CertificationError: when the expansion leaves a residual
    """
    n = U.index
    U0 = U.at_index_zero()
    frame = U0.perp() if adjoint else U0
    offset = -n if adjoint else n
    members = frame.members_from(-W - 1)
    top_valuation = members[0].valuation() if members else -W - 2
    # ψ̂ through z^top needs τ through weight W + top
    reach = min(U0.depth, U0.precision) - W
    top = min(max(top_valuation + 2, reach), frame.precision)
    if top <= top_valuation:
        raise PrecisionError(
            f"{get_error_message('precision', 'window_too_small')} "
            f"Structure expansion needs the frame known beyond z^{top_valuation + offset}"
        )
    hat = ba_hat(U0, W, (-W, top + 1), adjoint=adjoint)
    # z^{-1}ψ̂ has coefficient F_{e+1} at z^e
    pivots = []
    for u in members:
        P = hat.coefficient(u.valuation() + 1)
        pivots.append((u, P))
    for e in range(-W - 1, top):
        residual = hat.coefficient(e + 1)
        for u, P in pivots:
            c = u.coefficient(e)
            if c and not P.is_zero():
                residual = residual - P.scale(c)
        if not residual.is_zero():
            raise CertificationError(
                f"{get_error_message('check', 'certification')} "
                f"z^{e + offset} coefficient of the τ-multiplied expansion is outside the frame span"
            )
    logger.debug("structure_expansion: %d pivots certified on [%d, %d)", len(pivots), -W - 1, top)
    return [(u.shift(offset), P) for u, P in pivots if not P.is_zero()]


def ba_structure(U: GrassPoint, count: int, weight: Optional[int] = None) -> List[StructureTerm]:
    """
    First ``count`` terms of the BA structure decomposition

    The members are the echelon frame of U (certified in U). The lowest
    homogeneous part of p_i has weight s_i − 1 + |λ| with s_i the pole order
    in z^{-n}U; on the big cell it is p_{i−1}(−t).

    Args:
        U: Point over Q
        count: Number of terms
        weight: Truncation weight (default count − 1 + |λ|)
    """
    lam = U.partition
    W = count - 1 + lam.weight if weight is None else weight
    if not U.is_big_cell():
        logger.warning("ba_structure on stratum %s: using the τ-multiplied expansion", lam)
    n = U.index
    U0 = U.at_index_zero()
    members = U0.members_from(-W - 1)
    if len(members) < count:
        raise PrecisionError(
            f"{get_error_message('precision', 'weight_too_small')} "
            f"Only {len(members)} members reach weight {W}; raise the weight for {count} terms"
        )
    expansion = dict((u.valuation(), P) for u, P in structure_expansion(U, W))
    terms = []
    for u0 in members[:count]:
        v = u0.valuation() + n
        P = expansion.get(v, TPolynomial.constant(0, W))
        low = P.lowest_weight()
        leading = P.homogeneous_part(low) if low is not None else P
        terms.append(StructureTerm(U.member(v), P, -v, low, leading))
    return terms


# ---------------------------------------------------------------------------
# Addition Formula
# ---------------------------------------------------------------------------

class AdditionResult(NamedTuple):
    """Both sides as power series in the scale s of the Miwa points"""
    lhs: LaurentSeries
    rhs: LaurentSeries
    ratio: Any
    proportional: bool


def _distinct(x: Sequence[Any], field: FieldSpec) -> List[Any]:
    vals = [field.convert(v) for v in x]
    if len(set(vals)) != len(vals):
        raise InputError("Miwa points must be distinct (the Vandermonde determinant vanishes)")
    return vals


def miwa_series(tau: TPolynomial, x: Sequence[Any], field: FieldSpec, chart: str = 'exp') -> LaurentSeries:
    """
    τ at the Miwa point Σ_j [s x_j] as a power series in s

    'exp' substitutes t_k = Σ_j x_j^k / k, 'additive' substitutes the
    complete symmetric polynomials t_k = h_k(x).
    """
    K = field.domain
    vals = [field.convert(v) for v in x]
    n = tau.nvars
    if chart == 'exp':
        values = [sum((v ** k for v in vals), K.zero) * K.revert(K.convert(k)) for k in range(1, n + 1)]
    else:
        # h_k from ∏ (1 − x_j w)^{-1}
        h = [K.one] + [K.zero] * n
        for v in vals:
            for k in range(1, n + 1):
                h[k] = h[k] + v * h[k - 1]
        values = h[1:]
    graded = tau.weight_series(values)
    return LaurentSeries(field, dict(enumerate(graded)), 0, tau.weight + 1)


def addition_formula(U: GrassPoint, N: int, x: Sequence[Any], weight: Optional[int] = None,
                     chart: str = 'exp') -> AdditionResult:
    """
    Both sides of φ_N^*τ_U = det(f_i(x_j)) / ∏_{i<j}(x_i − x_j), up to k^*

    The points are scaled x ↦ s·x, so both sides are power series in s and
    compared modulo s^{W+1}. f_1..f_N is the echelon basis of V_+ ∩ z^N·z^{-n}U.

    Args:
        U: Point
        N: Number of Miwa points (N >= deepest gap of z^{-n}U)
        x: N distinct scalars
        weight: Truncation in s (default max(4, |λ| + N))
        chart: 'exp' (τ from Plücker coordinates) or 'additive' (τ from the
            universal element, any characteristic)

    Raises:
        InputError: repeated points or failing hypotheses
    """
    field = U.field
    if len(x) != N or N < 1:
        raise InputError(f"Expected {N} Miwa points, got {len(x)}")
    vals = _distinct(x, field)
    U0 = U.at_index_zero()
    d = U0.deepest_gap()
    if N < d:
        raise InputError(f"V/V_+ + z^N U is not zero for N = {N}; the deepest gap is {d}")
    W = max(4, U.partition.weight + N) if weight is None else weight
    tau = tau_expand(U, W) if chart == 'exp' else tau_direct(U, W, chart='additive')
    lhs = miwa_series(tau, vals, field, chart)

    shift = N * (N - 1) // 2
    f = [u.shift(N) for u in U0.members_from(-N)]
    reach = W + 1 + shift
    known = min(g.precision for g in f)
    if known < reach:
        raise PrecisionError(
            f"{get_error_message('precision', 'window_too_small')} "
            f"Addition formula through s^{W} with N = {N} needs the frame known below z^{reach - N}"
        )
    K = field.domain

    def evaluated(g: LaurentSeries, v) -> LaurentSeries:
        return LaurentSeries(field, {e: c * v ** e for e, c in g.items() if e < reach}, 0, reach)

    matrix = [[evaluated(g, v) for v in vals] for g in f]
    det = TruncatedDeterminant.subset_expansion(
        matrix,
        multiply=lambda a, b: a * b,
        add=lambda a, b: a + b,
        negate=lambda a: -a,
        is_zero=lambda a: a.is_zero(),
        one=LaurentSeries.one(field).truncate(reach),
    )
    if det is None:
        det = LaurentSeries.zero(field, 0, reach, exact=False)
    vandermonde = K.one
    for i in range(N):
        for j in range(i + 1, N):
            vandermonde = vandermonde * (vals[i] - vals[j])
    rhs = det.shift(-shift).scale(field.inverse(vandermonde)).with_lo(0).truncate(W + 1)

    ratio, proportional = _proportionality(lhs, rhs)
    logger.info("addition formula N=%d: proportional=%s", N, proportional)
    return AdditionResult(lhs, rhs, ratio, proportional)


def _proportionality(lhs: LaurentSeries, rhs: LaurentSeries) -> Tuple[Any, bool]:
    v = rhs.valuation()
    if v is None:
        return None, lhs.is_zero()
    ratio = lhs.coefficient(v) * lhs.field.inverse(rhs.coefficient(v))
    return ratio, lhs.agrees_with(rhs.scale(ratio))


def gamma_plus_factor(h: LaurentSeries, x: Sequence[Any], W: int) -> LaurentSeries:
    """∏_j h(s x_j) modulo s^{W+1}"""
    field = h.field
    result = LaurentSeries.one(field).truncate(W + 1)
    for v in x:
        v = field.convert(v)
        scaled = LaurentSeries(field, {e: c * v ** e for e, c in h.items() if e <= W}, 0, W + 1)
        result = result * scaled
    return result


class PlueckerCheck(NamedTuple):
    residual: LaurentSeries
    holds: bool


def addition_pluecker_check(U: GrassPoint, x: Sequence[Any], weight: Optional[int] = None) -> PlueckerCheck:
    """
    3-term Plücker relation among F_ij(s) = (s x_j − s x_i)·τ_U([s x_i] + [s x_j])

    Args:
        U: Point whose index-0 shift has deepest gap <= 2
        x: Four distinct scalars
        weight: Truncation in s (default max(4, |λ| + 2))

    Returns:
        F_12 F_34 − F_13 F_24 + F_14 F_23 modulo s^{W+1}, and whether it vanishes
    """
    field = U.field
    if len(x) != 4:
        raise InputError(f"The Plücker check needs four Miwa points, got {len(x)}")
    vals = _distinct(x, field)
    d = U.at_index_zero().deepest_gap()
    if d > 2:
        raise InputError(f"Two-point addition formula needs deepest gap <= 2, got {d}")
    W = max(4, U.partition.weight + 2) if weight is None else weight
    tau = tau_expand(U, W)
    F = {}
    for i in range(4):
        for j in range(i + 1, 4):
            value = miwa_series(tau, [vals[i], vals[j]], field)
            F[(i, j)] = value.shift(1).scale(vals[j] - vals[i]).truncate(W + 1)
    residual = (F[(0, 1)] * F[(2, 3)] - F[(0, 2)] * F[(1, 3)] + F[(0, 3)] * F[(1, 2)]).truncate(W + 1)
    return PlueckerCheck(residual, residual.is_zero())


__all__ = [
    'CHARTS',
    'tau_expand',
    'tau_direct',
    'shift_coefficients',
    'ba_hat',
    'ba',
    'ba_adjoint',
    'StructureTerm',
    'structure_expansion',
    'ba_structure',
    'AdditionResult',
    'miwa_series',
    'addition_formula',
    'gamma_plus_factor',
    'PlueckerCheck',
    'addition_pluecker_check',
]
