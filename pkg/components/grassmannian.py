"""
Grassmannian points at finite depth.

A GrassPoint stores the reduced echelon frame of U ∩ {val ≥ −M}: members
with pairwise distinct valuations, coefficient 1 at their own valuation and
0 at every other member's valuation. Below −M the point contains every
valuation (the tail) and tail corrections never reach the stored window.
"""

import logging
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from config import get_error_message
from utils import CertificationError, FieldMismatchError, InputError, PrecisionError
from utils.calculations import ExactLinearAlgebra
from utils.formatters import SeriesFormatter
from utils.laurent import FieldSpec, LaurentSeries, Q
from utils.partitions import (
    EMPTY,
    MayaDiagram,
    Partition,
    ValuationSet,
    partition_of_valuations,
    partitions_up_to,
)

from .gamma import BiSeries

logger = logging.getLogger(__name__)


class GrassPoint:
    """Discrete subspace U ⊂ k((z)) known on the window [−depth, precision)"""

    __slots__ = ('field', 'frame', 'depth', 'precision', '_valuation_set')

    def __init__(self, field: FieldSpec, frame: Sequence[LaurentSeries], depth: int, precision: int):
        members = sorted(frame, key=lambda u: -_valuation_of(u))
        vals = [_valuation_of(u) for u in members]
        if len(set(vals)) != len(vals):
            raise InputError("Frame valuations must be pairwise distinct")
        for u, v in zip(members, vals):
            if u.field != field:
                raise FieldMismatchError(f"Frame member over {u.field}, point over {field}")
            if v < -depth:
                raise InputError(f"Frame member of valuation {v} lies below the depth {-depth}")
            if u.precision < precision:
                raise PrecisionError(
                    f"{get_error_message('precision', 'window_too_small')} "
                    f"Member of valuation {v} is known below z^{u.hi}, point precision is {precision}"
                )
            if u.coefficient(v) != field.one:
                raise InputError(f"Frame member of valuation {v} is not monic")
            for w in vals:
                if w != v and w < precision and u.coefficient(w):
                    raise InputError(f"Frame is not reduced: member {v} has a coefficient at valuation {w}")
        self.field = field
        self.frame: Tuple[LaurentSeries, ...] = tuple(members)
        self.depth = depth
        self.precision = precision
        self._valuation_set = ValuationSet.from_valuations(vals, depth)

    # Structure

    @property
    def valuations(self) -> Tuple[int, ...]:
        """Frame valuations, decreasing"""
        return tuple(_valuation_of(u) for u in self.frame)

    @property
    def valuation_set(self) -> ValuationSet:
        return self._valuation_set

    @property
    def index(self) -> int:
        return self._valuation_set.index()

    def stratum(self) -> Tuple[Partition, MayaDiagram]:
        """Stratum partition and Maya diagram S = Z − T"""
        T = self._valuation_set
        return partition_of_valuations(T, T.index()), T.complement()

    @property
    def partition(self) -> Partition:
        return self.stratum()[0]

    def is_big_cell(self) -> bool:
        return self.partition == EMPTY

    def deepest_gap(self) -> int:
        """Deepest gap of the index-0 shift z^{-n}U"""
        return self._valuation_set.shifted(-self.index).deepest_gap()

    def member(self, valuation: int) -> LaurentSeries:
        for u in self.frame:
            if _valuation_of(u) == valuation:
                return u
        raise InputError(f"No frame member of valuation {valuation}")

    def members_from(self, lowest: int) -> List[LaurentSeries]:
        """Frame members of valuation >= lowest, decreasing"""
        if lowest < -self.depth:
            raise PrecisionError(
                f"{get_error_message('precision', 'depth_too_small')} "
                f"Need members down to valuation {lowest}, depth is {self.depth}"
            )
        return [u for u in self.frame if _valuation_of(u) >= lowest]

    # Homotheties

    def shifted(self, n: int) -> 'GrassPoint':
        """z^n U; the index grows by n"""
        if n == 0:
            return self
        return GrassPoint(self.field, [u.shift(n) for u in self.frame], self.depth - n, self.precision + n)

    def at_index_zero(self) -> 'GrassPoint':
        """z^{-n} U"""
        return self.shifted(-self.index)

    # Plücker coordinates

    def minor_size(self, lam: Partition) -> int:
        return max(lam.length, self.deepest_gap())

    def require_weight(self, W: int, what: str = "weight") -> None:
        """
        Check depth and precision for all Plücker coordinates of weight <= W

        Raises:
            PrecisionError: naming the violated bound
        """
        n = self.index
        K = max(W, self.deepest_gap())
        if self.depth + n < K:
            raise PrecisionError(
                f"{get_error_message('precision', 'depth_too_small')} "
                f"{what} {W} at index {n} needs depth >= {K - n}, got {self.depth}"
            )
        if W and self.precision - n < W:
            raise PrecisionError(
                f"{get_error_message('precision', 'window_too_small')} "
                f"{what} {W} at index {n} needs precision >= {W + n}, got {self.precision}"
            )

    def pluecker(self, lam: Partition):
        """
        Plücker coordinate Ω_λ(U)

        Minor of the index-0 frame on rows λ_i − i (i = 1..K) and the K
        members of valuation >= −K, with K = max(ℓ(λ), deepest gap).
        """
        n = self.index
        K = self.minor_size(lam)
        if K == 0:
            return self.field.one
        if self.depth + n < K:
            raise PrecisionError(
                f"{get_error_message('precision', 'depth_too_small')} "
                f"Ω_{lam} needs depth >= {K - n}, got {self.depth}"
            )
        columns = [u for u in self.frame if _valuation_of(u) - n >= -K]
        if len(columns) != K:
            raise CertificationError(f"Expected {K} frame members above valuation {n - K}, found {len(columns)}")
        rows = [lam.part(i) - i + n for i in range(1, K + 1)]
        if rows[0] >= self.precision:
            raise PrecisionError(
                f"{get_error_message('precision', 'window_too_small')} "
                f"Ω_{lam} needs precision > {rows[0]}, got {self.precision}"
            )
        matrix = [[u.coefficient(r) for u in columns] for r in rows]
        return ExactLinearAlgebra.determinant(matrix, self.field.domain)

    def pluecker_coordinates(self, W: int) -> Dict[Partition, Any]:
        """Nonzero Ω_λ(U) for |λ| <= W"""
        self.require_weight(W)
        found = {}
        candidates = partitions_up_to(W)
        for lam in candidates:
            value = self.pluecker(lam)
            if value:
                found[lam] = value
        logger.debug("pluecker: %d of %d coordinates nonzero through weight %d", len(found), len(candidates), W)
        return found

    # Duality

    def perp(self, depth: Optional[int] = None, precision: Optional[int] = None) -> 'GrassPoint':
        """
        Annihilator of U under the residue pairing

        Args:
            depth: Depth M′ of the result (default: this point's precision)
            precision: Precision D′ of the result (default: this point's depth)

        Raises:
            PrecisionError: unless D′ <= M, M′ <= D, M′ > max T and D′ > max T⊥
        """
        M, D = self.depth, self.precision
        M2 = D if depth is None else depth
        D2 = M if precision is None else precision
        T = self._valuation_set
        dual = T.dual()
        if D2 > M:
            raise PrecisionError(f"Perp precision {D2} exceeds the depth {M} of the point")
        if M2 > D:
            raise PrecisionError(f"Perp depth {M2} exceeds the precision {D} of the point")
        if M2 <= T.max_element():
            raise PrecisionError(f"Perp depth must exceed the top valuation {T.max_element()}, got {M2}")
        if D2 <= dual.max_element():
            raise PrecisionError(f"Perp precision must exceed {dual.max_element()}, got {D2}")
        exponents = list(range(-M2, M))
        rows = [[u.coefficient(-1 - e) for e in exponents] for u in self.frame]
        basis = ExactLinearAlgebra.nullspace(rows, self.field.domain, len(exponents))
        expected = M2 - self.index
        if len(basis) != expected:
            raise CertificationError(f"Perp frame has {len(basis)} members, expected {expected}")
        members = []
        for vector in basis:
            coeffs = {e: x for e, x in zip(exponents, vector) if x and e < D2}
            v = min(coeffs)
            members.append(LaurentSeries(self.field, coeffs, v, D2))
        result = GrassPoint(self.field, members, M2, D2)
        if result.valuation_set.index() != -self.index:
            raise CertificationError("Perp index is not the negated index")
        logger.debug("perp: %d constraints, %d unknowns, %d members", len(rows), len(exponents), len(members))
        return result

    # Group action

    def act(self, g: Union[LaurentSeries, BiSeries]):
        """
        g·U for a unit g

        A scalar unit returns a GrassPoint; a BiSeries returns the moved
        frame as a list of BiSeries (decreasing original valuation).
        """
        if isinstance(g, BiSeries):
            return [g * BiSeries.from_series(u, g.weight, g.tags, g.nvars) for u in self.frame]
        if g.field != self.field:
            raise FieldMismatchError(f"Field mismatch: {g.field} vs {self.field}")
        v = g.valuation()
        if v is None:
            raise InputError("Only units act on the Grassmannian; the series has no visible valuation")
        if g.exact and len(g.support()) == 1:
            return self.shifted(v)
        products = [g * u for u in self.frame]
        bounds = [self.precision + v] + [p.precision for p in products]
        precision = int(min(bounds))
        return normalize(products, self.depth - v, precision, self.field)

    # Comparison and records

    def agrees_with(self, other: 'GrassPoint') -> bool:
        """Same point on the common window"""
        if self.field != other.field or self.index != other.index:
            return False
        floor = -min(self.depth, other.depth)
        mine = [v for v in self.valuations if v >= floor]
        theirs = [v for v in other.valuations if v >= floor]
        if mine != theirs:
            return False
        return all(self.member(v).agrees_with(other.member(v)) for v in mine)

    def to_record(self) -> Dict[str, Any]:
        return {
            "field": self.field.characteristic,
            "index": self.index,
            "depth": self.depth,
            "precision": self.precision,
            "tail_start": -self.depth,
            "frame": [SeriesFormatter.to_record(u) for u in self.frame],
        }

    @classmethod
    def from_record(cls, record: Dict[str, Any]) -> 'GrassPoint':
        try:
            field = FieldSpec(int(record.get("field", 0)))
            depth = int(record["depth"])
            precision = int(record["precision"])
            members = [SeriesFormatter.from_record(item, field) for item in record["frame"]]
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, InputError):
                raise
            raise InputError(f"Malformed point record: {e}") from e
        if "tail_start" in record and int(record["tail_start"]) != -depth:
            raise InputError(f"tail_start {record['tail_start']} disagrees with depth {depth}")
        point = normalize(members, depth, precision, field)
        if "index" in record and int(record["index"]) != point.index:
            raise InputError(f"Declared index {record['index']} differs from the frame index {point.index}")
        return point

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrassPoint):
            return NotImplemented
        return (self.field == other.field and self.depth == other.depth
                and self.precision == other.precision and self.frame == other.frame)

    def __hash__(self) -> int:
        return hash((self.field, self.depth, self.precision, self.frame))

    def __repr__(self) -> str:
        return (f'GrassPoint(index={self.index}, stratum={self.partition}, depth={self.depth}, '
                f'precision={self.precision}, members={len(self.frame)})')


def _valuation_of(u: LaurentSeries) -> int:
    v = u.valuation()
    if v is None:
        raise InputError("Frame member vanishes on its window")
    return v


# ---------------------------------------------------------------------------
# Module operations
# ---------------------------------------------------------------------------

def normalize(frame: Sequence[LaurentSeries], M: int, D: int, field: Optional[FieldSpec] = None) -> GrassPoint:
    """
    Reduced echelon frame spanning the same space

    Args:
        frame: Spanning members, all known on [−M, D)
        M: Depth (everything below −M belongs to the point)
        D: Precision

    Raises:
        InputError: dependent members, or a member below the depth
        PrecisionError: a member not known up to D
    """
    field = field or (frame[0].field if frame else Q)
    exponents = list(range(-M, D))
    rows = []
    exact = True
    for u in frame:
        if u.field != field:
            raise FieldMismatchError(f"Frame member over {u.field}, expected {field}")
        if u.precision < D:
            raise PrecisionError(
                f"{get_error_message('precision', 'window_too_small')} "
                f"Member known below z^{u.hi}, precision {D} requested"
            )
        v = u.valuation()
        if v is not None and v < -M:
            raise InputError(f"Frame member of valuation {v} lies below the depth {-M}")
        exact = exact and u.exact and all(e < D for e in u.support())
        rows.append([u.coefficient(e) for e in exponents])
    reduced, pivots = ExactLinearAlgebra.rref(rows, field.domain)
    if len(pivots) != len(frame):
        raise InputError(get_error_message('input', 'dependent_frame'))
    members = []
    for row, pivot in zip(reduced, pivots):
        coeffs = {exponents[j]: x for j, x in enumerate(row) if x}
        members.append(LaurentSeries(field, coeffs, exponents[pivot], D, exact))
    logger.debug("normalize: %d members on [%d, %d)", len(members), -M, D)
    return GrassPoint(field, members, M, D)


def stratum(U: GrassPoint) -> Tuple[Partition, MayaDiagram]:
    return U.stratum()


def pluecker(U: GrassPoint, lam: Partition):
    return U.pluecker(lam)


def perp(U: GrassPoint, M2: Optional[int] = None, D2: Optional[int] = None) -> GrassPoint:
    return U.perp(M2, D2)


def act(g: Union[LaurentSeries, BiSeries], U: GrassPoint):
    return U.act(g)


def residue_pairing(f: LaurentSeries, g: LaurentSeries):
    """res_{z=0} f·g dz"""
    return (f * g).residue()


# ---------------------------------------------------------------------------
# Point builders
# ---------------------------------------------------------------------------

def monomial_point(valuations: Iterable[int], M: int, D: int, field: FieldSpec = Q) -> GrassPoint:
    """span{z^v : v in valuations} plus the tail below −M"""
    members = [LaurentSeries.monomial(v, 1, field) for v in valuations if v >= -M]
    return GrassPoint(field, members, M, D)


def vacuum(M: int, D: int, field: FieldSpec = Q) -> GrassPoint:
    """V_− = span{z^{-1}, z^{-2}, ...}"""
    return monomial_point(range(-1, -M - 1, -1), M, D, field)


def line_point(M: int, D: int, field: FieldSpec = Q) -> GrassPoint:
    """k[z^{-1}], index 1"""
    return monomial_point(range(0, -M - 1, -1), M, D, field)


def stratum_point(lam: Partition, n: int, M: int, D: int, field: FieldSpec = Q) -> GrassPoint:
    """The monomial point of the stratum (λ, n)"""
    T = ValuationSet(frozenset(lam.part(i) - i + n for i in range(1, lam.length + 1)), n - lam.length)
    vals = [v for v in range(-M, T.max_element() + 1) if v in T]
    return monomial_point(vals, M, D, field)


def random_point(lam: Partition, n: int, M: int, D: int, rng, field: FieldSpec = Q,
                 spread: int = 3, bound: int = 3) -> GrassPoint:
    """
    Point of the stratum (λ, n) with random small corrections

    Each member z^v receives integer coefficients in [−bound, bound] at the
    non-valuations e with v < e <= v + spread (and e < D).

    Args:
        rng: numpy Generator
    """
    base = stratum_point(lam, n, M, D, field)
    T = base.valuation_set
    members = []
    for v in base.valuations:
        coeffs = {v: 1}
        for e in range(v + 1, min(v + spread, D - 1) + 1):
            if e not in T:
                coeffs[e] = int(rng.integers(-bound, bound + 1))
        members.append(LaurentSeries.polynomial(coeffs, field))
    return normalize(members, M, D, field)


__all__ = [
    'GrassPoint',
    'normalize',
    'stratum',
    'pluecker',
    'perp',
    'act',
    'residue_pairing',
    'monomial_point',
    'vacuum',
    'line_point',
    'stratum_point',
    'random_point',
]
