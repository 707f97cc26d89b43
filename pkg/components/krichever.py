"""
Krichever Module
Curves to Grassmannian points and back: the Krichever map for superelliptic
curves y^m = f(x) marked at infinity, the algebra criterion U·U ⊆ U, pole
semigroup data and reconstruction of a presentation from a point.
"""

import logging
from dataclasses import dataclass, field as dataclass_field
from math import gcd
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from config import get_error_message, get_precision_config
from utils import CertificationError, InputError, PrecisionError
from utils.calculations import ExactLinearAlgebra
from utils.formatters import RationalFormatter, SeriesFormatter
from utils.laurent import FieldSpec, LaurentSeries, Q
from utils.partitions import Partition, ValuationSet, valuations_of_partition

from .grassmannian import GrassPoint, normalize
from .identities import scan

logger = logging.getLogger(__name__)

CURVE_KINDS = ('superelliptic', 'frame')


@dataclass(frozen=True)
class CurveSpec:
    """
    A marked curve: y^m = f(x) at its single point at infinity, or an
    explicit frame standing for H^0(C − p, O) expanded at p

    f holds the coefficients c_0..c_d of f(x), lowest degree first.
    """
    kind: str
    field: FieldSpec = Q
    m: int = 2
    f: Tuple[Any, ...] = ()
    frame: Tuple[LaurentSeries, ...] = ()

    @classmethod
    def superelliptic(cls, m: int, f: Sequence[Any], field: FieldSpec = Q) -> 'CurveSpec':
        """
        y^m = f(x) with gcd(m, deg f) = 1

        Raises:
            InputError: on coprimality failure or a leading coefficient without an m-th root
        """
        coeffs = [field.convert(c) for c in f]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        d = len(coeffs) - 1
        if m < 2 or d < 1:
            raise InputError(f"Superelliptic curves need m >= 2 and deg f >= 1, got m={m}, deg f={d}")
        if gcd(m, d) != 1:
            raise InputError(f"{get_error_message('curve', 'not_coprime')} gcd({m}, {d}) = {gcd(m, d)}")
        if field.characteristic and m % field.characteristic == 0:
            raise InputError(f"Root degree {m} is not invertible in {field}")
        if field.nth_root(coeffs[-1], m) is None:
            raise InputError(
                f"{get_error_message('input', 'non_monic')} Leading coefficient {field.format(coeffs[-1])}"
            )
        return cls('superelliptic', field, m, tuple(coeffs))

    @classmethod
    def from_frame(cls, frame: Sequence[LaurentSeries], field: Optional[FieldSpec] = None) -> 'CurveSpec':
        field = field or (frame[0].field if frame else Q)
        return cls('frame', field, frame=tuple(frame))

    @property
    def degree(self) -> int:
        return len(self.f) - 1

    @property
    def genus(self) -> int:
        """(m − 1)(d − 1)/2 for superelliptic data"""
        if self.kind != 'superelliptic':
            raise InputError("Genus is only known a priori for superelliptic curves")
        return (self.m - 1) * (self.degree - 1) // 2

    def to_record(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {"field": self.field.characteristic, "type": self.kind}
        if self.kind == 'superelliptic':
            record["m"] = self.m
            record["f"] = [RationalFormatter.format(self.field, c) for c in self.f]
        else:
            record["frame"] = [SeriesFormatter.to_record(u) for u in self.frame]
        return record

    @classmethod
    def from_record(cls, record: Mapping[str, Any]) -> 'CurveSpec':
        try:
            field = FieldSpec(int(record.get("field", 0)))
            kind = record.get("type", "superelliptic")
            if kind == 'superelliptic':
                f = [RationalFormatter.parse(field, c) for c in record["f"]]
                return cls.superelliptic(int(record["m"]), f, field)
            if kind == 'frame':
                return cls.from_frame([SeriesFormatter.from_record(r, field) for r in record["frame"]], field)
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, InputError):
                raise
            raise InputError(f"Malformed curve record: {e}") from e
        raise InputError(f"Unknown curve type {kind!r}; expected one of {CURVE_KINDS}")


def superelliptic_expansions(curve: CurveSpec, hi: int) -> Tuple[LaurentSeries, LaurentSeries]:
    """
    Local expansions of x and y at infinity

    x = z^{-m} exactly and y = z^{-d}(Σ_k c_{d−k} z^{mk})^{1/m}, the root taken
    by Newton iteration.

    Args:
        curve: Superelliptic curve
        hi: y is returned known below z^{hi − d}
    """
    m, d, field = curve.m, curve.degree, curve.field
    x = LaurentSeries.monomial(-m, 1, field)
    inner = LaurentSeries.polynomial({m * k: curve.f[d - k] for k in range(d + 1)}, field)
    try:
        root = inner.nth_root(m, hi)
    except InputError as e:
        raise InputError(f"{get_error_message('curve', 'bad_root')} {e}") from e
    return x, root.shift(-d)


def krichever_map(curve: CurveSpec, M: int, D: int) -> GrassPoint:
    """
    Point of H^0(C − p, O) expanded in the local parameter at p

    Args:
        curve: Curve data
        M: Depth (must reach the conductor: M >= 2g − 1)
        D: Precision

    Returns:
        GrassPoint of index 1 − g
    """
    if curve.kind == 'frame':
        return normalize(curve.frame, M, D, curve.field)
    g = curve.genus
    if M < 2 * g - 1:
        raise PrecisionError(
            f"{get_error_message('curve', 'depth_unreachable')} Genus {g} needs depth >= {2 * g - 1}, got {M}"
        )
    m, d = curve.m, curve.degree
    x, y = superelliptic_expansions(curve, D + M + get_precision_config()["root_slack"])
    frame = []
    y_power = LaurentSeries.one(curve.field)
    for b in range(m):
        for a in range(M // m + 1):
            if m * a + d * b > M:
                break
            frame.append((y_power * (x ** a)).truncate(D))
        y_power = y_power * y
    U = normalize(frame, M, D, curve.field)
    if U.index != 1 - g:
        raise CertificationError(f"Krichever point has index {U.index}, expected {1 - g}")
    logger.info("krichever_map: m=%d, d=%d, genus %d, %d members", m, d, g, len(U.frame))
    return U


# ---------------------------------------------------------------------------
# Algebra criterion
# ---------------------------------------------------------------------------

@dataclass
class AlgebraReport:
    """Closure of the frame under multiplication down to a pole bound"""
    passed: bool
    bound: int
    contains_unit: bool
    checked: int
    witness: Optional[Dict[str, Any]] = None
    field: FieldSpec = dataclass_field(default=Q)

    def to_record(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {
            "check": "algebra",
            "passed": self.passed,
            "bound": self.bound,
            "contains_unit": self.contains_unit,
            "checked_products": self.checked,
        }
        if self.witness is not None:
            witness = dict(self.witness)
            witness["coefficient"] = RationalFormatter.format(self.field, witness["coefficient"])
            record["witness"] = witness
        return record


def _defect(U: GrassPoint, series: LaurentSeries) -> Optional[Tuple[int, Any]]:
    """Lowest (exponent, coefficient) of series minus its projection to U, None if it lies in U"""
    top = int(min(series.precision, U.precision))
    vector = {e: c for e, c in series.items() if -U.depth <= e < top}
    basis = [(u.valuation(), {e: x for e, x in u.items() if e < top}) for u in U.frame]
    _, residual = ExactLinearAlgebra.reduce_against(vector, basis, U.field.domain)
    if not residual:
        return None
    e = min(residual)
    return e, residual[e]


def algebra_check(U: GrassPoint, bound: Optional[int] = None, threads: Optional[int] = None) -> AlgebraReport:
    """
    1 ∈ U and u_i·u_j ∈ U for all frame pairs with product valuation >= −bound

    Each product is reduced against the echelon frame; the first product
    with a residual is returned as the witness.

    Raises:
        PrecisionError: bound beyond the depth of the point
    """
    bound = U.depth if bound is None else bound
    if bound > U.depth:
        raise PrecisionError(
            f"{get_error_message('precision', 'depth_too_small')} Bound {bound} exceeds the depth {U.depth}"
        )
    unit_defect = _defect(U, LaurentSeries.one(U.field))
    if unit_defect is not None:
        e, c = unit_defect
        witness = {"pair": None, "exponent": e, "coefficient": c}
        logger.info("algebra_check: 1 is not in U")
        return AlgebraReport(False, bound, False, 0, witness, U.field)
    members = list(U.frame)
    pairs = [
        (i, j) for i in range(len(members)) for j in range(i, len(members))
        if members[i].valuation() + members[j].valuation() >= -bound
    ]
    results = scan(pairs, lambda p: _defect(U, members[p[0]] * members[p[1]]), threads, desc="products")
    for (i, j), defect in results:
        if defect is not None:
            e, c = defect
            witness = {
                "pair": [members[i].valuation(), members[j].valuation()],
                "exponent": e,
                "coefficient": c,
            }
            logger.info("algebra_check: product of members %d and %d leaves U", i, j)
            return AlgebraReport(False, bound, True, len(pairs), witness, U.field)
    logger.info("algebra_check: %d products closed through bound %d", len(pairs), bound)
    return AlgebraReport(True, bound, True, len(pairs), None, U.field)


# ---------------------------------------------------------------------------
# Pole semigroup
# ---------------------------------------------------------------------------

@dataclass
class GapReport:
    """Weierstrass data read off the valuation set"""
    gaps: List[int]
    genus: int
    pole_orders: List[int]
    multiplicity: Optional[int]
    conductor: int
    generators: List[int]
    is_semigroup: bool

    def to_record(self) -> Dict[str, Any]:
        return {
            "gaps": self.gaps,
            "genus": self.genus,
            "pole_orders": self.pole_orders,
            "multiplicity": self.multiplicity,
            "conductor": self.conductor,
            "generators": self.generators,
            "is_semigroup": self.is_semigroup,
        }


def _is_numerical_semigroup(T: ValuationSet) -> bool:
    """0 ∈ T, nothing positive in T, and the pole orders closed under addition"""
    if 0 not in T or T.max_element() > 0:
        return False
    limit = -T.floor + 1
    poles = set(T.pole_orders(limit))
    return all(a + b in poles for a in poles for b in poles if a and b and a + b <= limit)


def _minimal_generators(poles: Sequence[int]) -> List[int]:
    present = set(poles)
    positive = sorted(p for p in present if p > 0)
    generators = []
    for p in positive:
        if not any(a in present and p - a in present for a in positive if 0 < a < p):
            generators.append(p)
    return generators


def _semigroup_bound(T: ValuationSet) -> int:
    """Every minimal generator lies below this pole order"""
    return 2 * max(1 - T.floor, 1)


def gaps_and_genus(U: GrassPoint) -> GapReport:
    """
    Gaps Z_{<0} − T, genus = their count, and the pole-order semigroup data

    Returns:
        GapReport with multiplicity, conductor and minimal generators
    """
    T = U.valuation_set
    gaps = T.gaps()
    conductor = -gaps[-1] + 1 if gaps else 0
    bound = _semigroup_bound(T)
    poles = T.pole_orders(bound)
    positive = [p for p in poles if p > 0]
    report = GapReport(
        gaps=gaps,
        genus=len(gaps),
        pole_orders=[p for p in poles if p < conductor + (positive[0] if positive else 1)],
        multiplicity=positive[0] if positive else None,
        conductor=conductor,
        generators=_minimal_generators(poles),
        is_semigroup=_is_numerical_semigroup(T),
    )
    logger.debug("gaps_and_genus: gaps %s, generators %s", report.gaps, report.generators)
    return report


def wgp_check(lam: Partition, n: int) -> bool:
    """True iff the pole orders of the stratum (λ, n) form a numerical semigroup"""
    return _is_numerical_semigroup(valuations_of_partition(lam, n))


# ---------------------------------------------------------------------------
# Reconstruction
# ---------------------------------------------------------------------------

@dataclass
class Presentation:
    """Generators of the pole filtration and the relations found up to a pole bound"""
    generators: List[Tuple[str, int]]
    relations: List[Dict[Tuple[int, ...], Any]]
    bound: int
    field: FieldSpec = dataclass_field(default=Q)

    def to_record(self) -> Dict[str, Any]:
        names = [name for name, _ in self.generators]
        relations = []
        for relation in self.relations:
            terms = []
            for exps, c in sorted(relation.items(), reverse=True):
                terms.append({
                    "monomial": {name: e for name, e in zip(names, exps) if e},
                    "coefficient": RationalFormatter.format(self.field, c),
                })
            relations.append(terms)
        return {
            "generators": [{"name": name, "pole_order": p} for name, p in self.generators],
            "relations": relations,
            "bound": self.bound,
            "status": f"relations certified through pole order {self.bound}",
        }


def _monomials(orders: Sequence[int], bound: int) -> List[Tuple[int, ...]]:
    """Exponent tuples with weighted degree <= bound, by pole order then later exponents"""
    out: List[Tuple[int, ...]] = []

    def extend(position: int, prefix: Tuple[int, ...], used: int) -> None:
        if position == len(orders):
            out.append(prefix)
            return
        e = 0
        while used + e * orders[position] <= bound:
            extend(position + 1, prefix + (e,), used + e * orders[position])
            e += 1

    extend(0, (), 0)
    return sorted(out, key=lambda exps: (sum(e * p for e, p in zip(exps, orders)), tuple(reversed(exps))))


def _divides(a: Tuple[int, ...], b: Tuple[int, ...]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def reconstruct_algebra(U: GrassPoint, degree_bound: int) -> Presentation:
    """
    Presentation of the algebra U from its pole filtration

    Generators are the echelon members at the minimal generators of the
    pole semigroup; relations are the linear dependencies among generator
    monomials of pole order <= degree_bound, one per leading monomial not
    divisible by an earlier leading monomial.

    Raises:
        CertificationError: U is not closed under multiplication
        PrecisionError: degree_bound misses a generator (the first missing pole order is named)
    """
    closure = algebra_check(U, min(degree_bound, U.depth))
    if not closure.passed:
        raise CertificationError(
            f"{get_error_message('check', 'certification')} U is not an algebra: {closure.witness}"
        )
    T = U.valuation_set
    orders = _minimal_generators(T.pole_orders(_semigroup_bound(T)))
    missing = [p for p in orders if p > degree_bound]
    if missing:
        raise PrecisionError(
            f"Degree bound {degree_bound} misses the generator of pole order {missing[0]}"
        )
    names = list(get_precision_config()["generator_names"])
    if len(orders) > len(names):
        names = names + [f"g{i}" for i in range(len(names), len(orders))]
    generators = [U.member(-p) for p in orders]
    field = U.field
    K = field.domain

    monomials = _monomials(orders, degree_bound)
    expansions: List[LaurentSeries] = []
    powers: Dict[Tuple[int, int], LaurentSeries] = {}
    for exps in monomials:
        series = LaurentSeries.one(field)
        for k, e in enumerate(exps):
            if e:
                key = (k, e)
                if key not in powers:
                    powers[key] = generators[k] ** e
                series = series * powers[key]
        expansions.append(series)
    top = int(min([U.precision] + [s.precision for s in expansions]))
    if top <= 0:
        raise PrecisionError(
            f"{get_error_message('precision', 'window_too_small')} "
            f"Monomials of pole order {degree_bound} are not known at z^0"
        )

    # incremental elimination; each basis row keeps the monomial combination it came from
    basis: List[Tuple[int, Dict[int, Any], Dict[int, Any]]] = []
    relations: List[Dict[Tuple[int, ...], Any]] = []
    leading: List[Tuple[int, ...]] = []
    for idx, series in enumerate(expansions):
        vector = {e: c for e, c in series.items() if e < top}
        combo = {idx: K.one}
        for pivot, row, row_combo in basis:
            c = vector.get(pivot)
            if not c:
                continue
            for e, x in row.items():
                value = vector.get(e, K.zero) - c * x
                if value:
                    vector[e] = value
                else:
                    vector.pop(e, None)
            for k, x in row_combo.items():
                value = combo.get(k, K.zero) - c * x
                if value:
                    combo[k] = value
                else:
                    combo.pop(k, None)
        if vector:
            pivot = min(vector)
            inv = field.inverse(vector[pivot])
            basis.append((pivot, {e: x * inv for e, x in vector.items()},
                          {k: x * inv for k, x in combo.items()}))
            basis.sort(key=lambda item: item[0])
            continue
        exps = monomials[idx]
        if any(_divides(lead, exps) for lead in leading):
            continue
        leading.append(exps)
        relations.append({monomials[k]: x for k, x in combo.items()})
    logger.info("reconstruct_algebra: %d generators, %d relations through pole order %d",
                len(orders), len(relations), degree_bound)
    return Presentation(list(zip(names, orders)), relations, degree_bound, field)


__all__ = [
    'CURVE_KINDS',
    'CurveSpec',
    'superelliptic_expansions',
    'krichever_map',
    'AlgebraReport',
    'algebra_check',
    'GapReport',
    'gaps_and_genus',
    'wgp_check',
    'Presentation',
    'reconstruct_algebra',
]
