"""
Partitions Module
Young and Maya diagrams, time-variable polynomials truncated by weighted
degree, Schur polynomials and the scaled-derivative operators built from them.

Time variables t_1, t_2, ... carry weight wt(t_i) = i. A TPolynomial lives on
one or more variable sets (tags "t", "tp", "tpp" for t, t', t'') and is
truncated at weight W in every set separately.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, perm
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyRing
from sympy.utilities.iterables import partitions as _sympy_partitions

from . import FieldMismatchError, InputError, Monomial, PrecisionError
from .laurent import FieldSpec, Q

logger = logging.getLogger(__name__)

DEFAULT_TAG = 't'


# ---------------------------------------------------------------------------
# Young diagrams
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=False)
class Partition:
    """Young diagram given by weakly decreasing positive parts"""

    parts: Tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p <= 0 for p in parts):
            raise InputError(f"Partition parts must be positive integers, got {self.parts!r}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise InputError(f"Partition parts must be weakly decreasing, got {self.parts!r}")
        object.__setattr__(self, 'parts', parts)

    @classmethod
    def of(cls, *parts: int) -> 'Partition':
        return cls(tuple(parts))

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def part(self, i: int) -> int:
        """i-th part (1-based), zero beyond the length"""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    def conjugate(self) -> 'Partition':
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))

    def contains(self, other: 'Partition') -> bool:
        return all(self.part(i) >= other.part(i) for i in range(1, other.length + 1))

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        """Canonical order: by weight, then larger first parts first"""
        return self.weight, tuple(-p for p in self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return '(' + ','.join(map(str, self.parts)) + ')'


EMPTY = Partition()


def partitions_of(weight: int, max_length: Optional[int] = None) -> List[Partition]:
    """All partitions of one weight in canonical order"""
    if weight < 0:
        return []
    found = []
    for multiplicities in _sympy_partitions(weight, m=max_length):
        parts = []
        for part in sorted(multiplicities, reverse=True):
            parts.extend([part] * multiplicities[part])
        found.append(Partition(tuple(parts)))
    return sorted(found, key=Partition.sort_key)


def partitions_up_to(weight: int, max_length: Optional[int] = None) -> List[Partition]:
    """All partitions with |λ| <= weight in canonical order"""
    result: List[Partition] = []
    for w in range(weight + 1):
        result.extend(partitions_of(w, max_length))
    return result


def horizontal_strips(lam: Partition, alpha: int) -> List[Partition]:
    """
    All μ ⊆ λ such that λ/μ is a horizontal strip with alpha cells

    Args:
        lam: Outer diagram λ
        alpha: Number of removed cells

    Returns:
        Partitions μ with λ_{i+1} <= μ_i <= λ_i and |λ| - |μ| = alpha
    """
    if alpha < 0 or alpha > lam.weight:
        return []
    rows = lam.length
    found: List[Partition] = []

    def descend(i: int, remaining: int, chosen: List[int]) -> None:
        if i > rows:
            if remaining == 0:
                found.append(Partition(tuple(chosen)))
            return
        upper = lam.part(i)
        lower = lam.part(i + 1)
        capacity = sum(lam.part(k) - lam.part(k + 1) for k in range(i + 1, rows + 1))
        for mu_i in range(upper, lower - 1, -1):
            taken = upper - mu_i
            if taken > remaining:
                break
            if remaining - taken > capacity:
                continue
            descend(i + 1, remaining - taken, chosen + [mu_i])

    descend(1, alpha, [])
    return sorted(found, key=Partition.sort_key)


# ---------------------------------------------------------------------------
# Maya diagrams and valuation sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MayaDiagram:
    """
    Increasing integer sequence S that contains every integer >= tail_start

    ``exceptional`` holds the members of S below ``tail_start``; the stored
    form is canonical (tail_start - 1 is never a member).
    """

    exceptional: FrozenSet[int] = frozenset()
    tail_start: int = 0

    def __post_init__(self):
        members = frozenset(int(s) for s in self.exceptional)
        if any(s >= self.tail_start for s in members):
            members = frozenset(s for s in members if s < self.tail_start)
        tail = self.tail_start
        while tail - 1 in members:
            tail -= 1
            members = members - {tail}
        object.__setattr__(self, 'exceptional', members)
        object.__setattr__(self, 'tail_start', tail)

    def __contains__(self, s: int) -> bool:
        return s >= self.tail_start or s in self.exceptional

    def virtual_cardinal(self) -> int:
        """#(S - Z_{>=0}) - #(Z_{>=0} - S)"""
        negatives = sum(1 for s in self.exceptional if s < 0) + max(0, -self.tail_start)
        missing = sum(1 for k in range(0, max(self.tail_start, 0)) if k not in self)
        return negatives - missing

    def elements(self, count: int) -> List[int]:
        """First ``count`` elements s_0 < s_1 < ..."""
        out = sorted(self.exceptional)
        s = self.tail_start
        while len(out) < count:
            out.append(s)
            s += 1
        return out[:count]

    def complement(self) -> 'ValuationSet':
        """Z - S as a valuation set"""
        low = min(self.exceptional) if self.exceptional else self.tail_start
        members = frozenset(k for k in range(low, self.tail_start) if k not in self.exceptional)
        return ValuationSet(members, low)


def virtual_cardinal(S: MayaDiagram) -> int:
    return S.virtual_cardinal()


@dataclass(frozen=True)
class ValuationSet:
    """
    Set T of integers containing every integer below ``floor``; ``members``
    lists the elements at or above it (finitely many)
    """

    members: FrozenSet[int] = frozenset()
    floor: int = 0

    def __post_init__(self):
        members = frozenset(int(v) for v in self.members)
        floor = self.floor
        members = frozenset(v for v in members if v >= floor)
        while floor in members:
            members = members - {floor}
            floor += 1
        object.__setattr__(self, 'members', members)
        object.__setattr__(self, 'floor', floor)

    @classmethod
    def from_valuations(cls, valuations: Iterable[int], depth: int) -> 'ValuationSet':
        """Frame valuations >= -depth together with everything below -depth"""
        return cls(frozenset(valuations), -depth)

    def __contains__(self, v: int) -> bool:
        return v < self.floor or v in self.members

    def index(self) -> int:
        """#(T ∩ Z_{>=0}) - #(Z_{<0} - T)"""
        return len(self.members) + self.floor

    def decreasing(self, count: int) -> List[int]:
        """The ``count`` largest elements t_1 > t_2 > ..."""
        out = sorted(self.members, reverse=True)
        v = self.floor - 1
        while len(out) < count:
            out.append(v)
            v -= 1
        return out[:count]

    def max_element(self) -> int:
        return max(self.members) if self.members else self.floor - 1

    def gaps(self) -> List[int]:
        """Negative integers missing from T, decreasing"""
        return [v for v in range(-1, self.floor - 1, -1) if v not in self]

    def deepest_gap(self) -> int:
        """Depth of the lowest negative non-member (0 when there is none)"""
        gaps = self.gaps()
        return -gaps[-1] if gaps else 0

    def shifted(self, n: int) -> 'ValuationSet':
        return ValuationSet(frozenset(v + n for v in self.members), self.floor + n)

    def complement(self) -> MayaDiagram:
        tail = self.max_element() + 1
        return MayaDiagram(frozenset(v for v in range(self.floor, tail) if v not in self), tail)

    def dual(self) -> 'ValuationSet':
        """{-1 - s : s not in T}"""
        S = self.complement()
        return ValuationSet(frozenset(-1 - s for s in S.exceptional), -S.tail_start)

    def pole_orders(self, bound: int) -> List[int]:
        """Pole orders -v for v in T ∩ [-bound, 0], increasing"""
        return [-v for v in range(0, -bound - 1, -1) if v in self]


def partition_of_valuations(T: ValuationSet, n: int) -> Partition:
    """
    Stratum partition λ_i = t_i + i - n of a valuation set

    Raises:
        InputError: when n is not the index of T
    """
    if T.index() != n:
        raise InputError(f"Index {n} is inconsistent with the valuation set (index {T.index()})")
    values = T.decreasing(len(T.members))
    return Partition(tuple(v + i - n for i, v in enumerate(values, start=1)))


def valuations_of_partition(lam: Partition, n: int) -> ValuationSet:
    """Inverse of partition_of_valuations: T = {λ_i - i + n : i >= 1}"""
    members = frozenset(lam.part(i) - i + n for i in range(1, lam.length + 1))
    return ValuationSet(members, n - lam.length)


def maya_of_partition(lam: Partition, n: int) -> MayaDiagram:
    return valuations_of_partition(lam, n).complement()


# ---------------------------------------------------------------------------
# Time-variable polynomials
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def time_ring(tags: Tuple[str, ...], nvars: int, characteristic: int = 0) -> PolyRing:
    """Polynomial ring in tag1..tagN for every tag"""
    names = [f'{tag}{i}' for tag in tags for i in range(1, nvars + 1)]
    return PolyRing(names, FieldSpec(characteristic).domain, lex)


@lru_cache(maxsize=None)
def _variable_weights(nsets: int, nvars: int) -> Tuple[int, ...]:
    return tuple(i + 1 for _ in range(nsets) for i in range(nvars))


def _set_weights(monomial: Monomial, nsets: int, nvars: int) -> Tuple[int, ...]:
    return tuple(
        sum((i + 1) * monomial[s * nvars + i] for i in range(nvars))
        for s in range(nsets)
    )


def _relayout(monomial: Monomial, nsets: int, from_n: int, to_n: int) -> Optional[Monomial]:
    """Move a monomial between rings with different numbers of variables per set"""
    if from_n == to_n:
        return monomial
    out: List[int] = []
    for s in range(nsets):
        block = monomial[s * from_n:(s + 1) * from_n]
        if to_n < from_n:
            if any(block[to_n:]):
                return None
            out.extend(block[:to_n])
        else:
            out.extend(block)
            out.extend([0] * (to_n - from_n))
    return tuple(out)


class TPolynomial:
    """
    Polynomial in weighted time variables truncated at weight W per variable set

    The polynomial is stored as a sympy PolyElement over QQ or GF(p); every
    stored monomial has weighted degree <= W in each variable set.
    """

    __slots__ = ('poly', 'weight', 'tags', 'nvars')

    def __init__(self, poly, weight: int, tags: Tuple[str, ...] = (DEFAULT_TAG,),
                 nvars: Optional[int] = None):
        if weight < 0:
            raise PrecisionError(f"Truncation weight must be non-negative, got {weight}")
        tags = tuple(tags)
        nvars = max(weight, 1) if nvars is None else nvars
        ring = time_ring(tags, nvars, _characteristic_of(poly.ring.domain))
        if poly.ring != ring:
            raise InputError("Polynomial does not live in the declared time ring")
        nsets = len(tags)
        kept = {m: c for m, c in poly.items() if max(_set_weights(m, nsets, nvars)) <= weight}
        if len(kept) != len(poly):
            poly = ring.from_dict(kept)
        self.poly = poly
        self.weight = weight
        self.tags = tags
        self.nvars = nvars

    # Constructors

    @classmethod
    def from_terms(cls, terms: Mapping[Monomial, Any], weight: int,
                   tags: Tuple[str, ...] = (DEFAULT_TAG,), nvars: Optional[int] = None,
                   field: FieldSpec = Q) -> 'TPolynomial':
        nvars = max(weight, 1) if nvars is None else nvars
        ring = time_ring(tuple(tags), nvars, field.characteristic)
        data = {tuple(m): field.convert(c) for m, c in terms.items()}
        return cls(ring.from_dict({m: c for m, c in data.items() if c}), weight, tags, nvars)

    @classmethod
    def constant(cls, value: Any, weight: int, tags: Tuple[str, ...] = (DEFAULT_TAG,),
                 nvars: Optional[int] = None, field: FieldSpec = Q) -> 'TPolynomial':
        nvars = max(weight, 1) if nvars is None else nvars
        zero = (0,) * (nvars * len(tags))
        return cls.from_terms({zero: value}, weight, tags, nvars, field)

    @classmethod
    def variable(cls, i: int, weight: int, tag: str = DEFAULT_TAG, tags: Optional[Tuple[str, ...]] = None,
                 nvars: Optional[int] = None, field: FieldSpec = Q) -> 'TPolynomial':
        """The variable tag_i"""
        tags = tuple(tags or (tag,))
        nvars = max(weight, 1) if nvars is None else nvars
        if not 1 <= i <= nvars:
            return cls.constant(0, weight, tags, nvars, field)
        m = [0] * (nvars * len(tags))
        m[tags.index(tag) * nvars + i - 1] = 1
        return cls.from_terms({tuple(m): 1}, weight, tags, nvars, field)

    # Accessors

    @property
    def ring(self) -> PolyRing:
        return self.poly.ring

    @property
    def field(self) -> FieldSpec:
        return FieldSpec(_characteristic_of(self.ring.domain))

    def items(self) -> Iterator[Tuple[Monomial, Any]]:
        return iter(self.poly.items())

    def is_zero(self) -> bool:
        return not self.poly

    def term_weights(self, monomial: Monomial) -> Tuple[int, ...]:
        return _set_weights(monomial, len(self.tags), self.nvars)

    def coefficient(self, monomial: Mapping[Tuple[str, int], int]):
        """Coefficient of prod tag_i^e for {(tag, i): e}"""
        m = [0] * (self.nvars * len(self.tags))
        for (tag, i), e in monomial.items():
            if tag not in self.tags:
                raise InputError(f"Unknown variable set {tag!r}; expected one of {self.tags}")
            if not e:
                continue
            if i > self.nvars:
                return self.ring.domain.zero
            m[self.tags.index(tag) * self.nvars + i - 1] = e
        return self.poly.get(tuple(m), self.ring.domain.zero)

    def constant_term(self):
        return self.poly.get(self.ring.zero_monom, self.ring.domain.zero)

    def total_weight(self, monomial: Monomial) -> int:
        return sum(self.term_weights(monomial))

    def homogeneous_part(self, w: int) -> 'TPolynomial':
        """Terms of total weighted degree w"""
        kept = {m: c for m, c in self.poly.items() if self.total_weight(m) == w}
        return TPolynomial(self.ring.from_dict(kept), self.weight, self.tags, self.nvars)

    def lowest_weight(self) -> Optional[int]:
        if not self.poly:
            return None
        return min(self.total_weight(m) for m in self.poly)

    def is_homogeneous(self, w: int) -> bool:
        return all(self.total_weight(m) == w for m in self.poly)

    # Re-embedding

    def relayout(self, nvars: int, weight: Optional[int] = None) -> 'TPolynomial':
        """Same polynomial in a ring with nvars variables per set, at the same or a lower weight"""
        weight = self.weight if weight is None else weight
        if weight > self.weight:
            raise InputError(f"Cannot widen truncation weight from {self.weight} to {weight}")
        if nvars == self.nvars and weight == self.weight:
            return self
        ring = time_ring(self.tags, nvars, self.field.characteristic)
        data = {}
        for m, c in self.poly.items():
            moved = _relayout(m, len(self.tags), self.nvars, nvars)
            if moved is not None:
                data[moved] = c
        return TPolynomial(ring.from_dict(data), weight, self.tags, nvars)

    def truncate(self, weight: int) -> 'TPolynomial':
        if weight > self.weight:
            raise PrecisionError(f"Cannot raise truncation weight from {self.weight} to {weight}")
        return TPolynomial(self.poly, weight, self.tags, self.nvars)

    def retag(self, tags: Tuple[str, ...]) -> 'TPolynomial':
        """Rename the variable sets (same number of sets)"""
        if len(tags) != len(self.tags):
            raise InputError("Retagging must keep the number of variable sets")
        ring = time_ring(tuple(tags), self.nvars, self.field.characteristic)
        return TPolynomial(ring.from_dict(dict(self.poly.items())), self.weight, tuple(tags), self.nvars)

    def _align(self, other: 'TPolynomial') -> Tuple['TPolynomial', 'TPolynomial']:
        if self.tags != other.tags:
            raise InputError(f"Variable sets differ: {self.tags} vs {other.tags}")
        if self.field != other.field:
            raise FieldMismatchError(f"Field mismatch: {self.field} vs {other.field}")
        weight = min(self.weight, other.weight)
        nvars = max(self.nvars, other.nvars)
        return self.relayout(nvars, weight), other.relayout(nvars, weight)

    # Arithmetic

    def _coerce(self, other: Any) -> 'TPolynomial':
        if isinstance(other, TPolynomial):
            return other
        return TPolynomial.constant(other, self.weight, self.tags, self.nvars, self.field)

    def __add__(self, other: Any) -> 'TPolynomial':
        a, b = self._align(self._coerce(other))
        return TPolynomial(a.poly + b.poly, a.weight, a.tags, a.nvars)

    __radd__ = __add__

    def __neg__(self) -> 'TPolynomial':
        return TPolynomial(-self.poly, self.weight, self.tags, self.nvars)

    def __sub__(self, other: Any) -> 'TPolynomial':
        a, b = self._align(self._coerce(other))
        return TPolynomial(a.poly - b.poly, a.weight, a.tags, a.nvars)

    def __rsub__(self, other: Any) -> 'TPolynomial':
        return self._coerce(other) - self

    def scale(self, scalar: Any) -> 'TPolynomial':
        s = self.field.convert(scalar)
        return TPolynomial(self.poly * s, self.weight, self.tags, self.nvars)

    def __mul__(self, other: Any) -> 'TPolynomial':
        if not isinstance(other, TPolynomial):
            return self.scale(other)
        a, b = self._align(other)
        nsets = len(a.tags)
        weights_b = [(m, c, _set_weights(m, nsets, a.nvars)) for m, c in b.poly.items()]
        K = a.ring.domain
        data: Dict[Monomial, Any] = {}
        for m1, c1 in a.poly.items():
            w1 = _set_weights(m1, nsets, a.nvars)
            for m2, c2, w2 in weights_b:
                if any(x + y > a.weight for x, y in zip(w1, w2)):
                    continue
                m = tuple(x + y for x, y in zip(m1, m2))
                data[m] = K.add(data.get(m, K.zero), c1 * c2)
        return TPolynomial(a.ring.from_dict({m: c for m, c in data.items() if c}), a.weight, a.tags, a.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> 'TPolynomial':
        result = TPolynomial.constant(1, self.weight, self.tags, self.nvars, self.field)
        for _ in range(k):
            result = result * self
        return result

    def negate_times(self) -> 'TPolynomial':
        """f(-t): every variable changes sign"""
        data = {m: (-c if sum(m) % 2 else c) for m, c in self.poly.items()}
        return TPolynomial(self.ring.from_dict(data), self.weight, self.tags, self.nvars)

    def invert(self) -> 'TPolynomial':
        """
        Inverse in the truncated ring, for polynomials with nonzero constant term

        Raises:
            InputError: when the constant term vanishes
        """
        c0 = self.constant_term()
        if not c0:
            raise InputError("Polynomial with zero constant term is not invertible")
        inv0 = self.field.inverse(c0)
        nilpotent = self.scale(inv0) - 1
        result = TPolynomial.constant(1, self.weight, self.tags, self.nvars, self.field)
        power = result
        for _ in range(self.weight * len(self.tags)):
            power = -(power * nilpotent)
            if power.is_zero():
                break
            result = result + power
        return result.scale(inv0)

    def compose(self, images: Sequence['TPolynomial']) -> 'TPolynomial':
        """
        Substitute tag_i -> images[i-1] (single-set polynomials only)

        Args:
            images: One polynomial per variable, all in a common target ring

        Returns:
            The substituted polynomial truncated at the target weight
        """
        if len(self.tags) != 1:
            raise InputError("compose is defined for single-set polynomials")
        if not images:
            raise InputError("compose needs at least one image")
        target = images[0]
        result = TPolynomial.constant(0, target.weight, target.tags, target.nvars, target.field)
        powers: Dict[Tuple[int, int], TPolynomial] = {}

        def power(i: int, e: int) -> TPolynomial:
            key = (i, e)
            if key not in powers:
                powers[key] = images[i] if e == 1 else power(i, e - 1) * images[i]
            return powers[key]

        for m, c in self.poly.items():
            term = TPolynomial.constant(c, target.weight, target.tags, target.nvars, target.field)
            for i, e in enumerate(m):
                if e == 0:
                    continue
                if i >= len(images):
                    term = None
                    break
                term = term * power(i, e)
                if term.is_zero():
                    break
            if term is not None:
                result = result + term
        return result

    def evaluate(self, values: Sequence[Any]):
        """Value at tag_i = values[i-1] (single set; missing values count as 0)"""
        if len(self.tags) != 1:
            raise InputError("evaluate is defined for single-set polynomials")
        field = self.field
        vals = [field.convert(v) for v in values]
        K = self.ring.domain
        total = K.zero
        for m, c in self.poly.items():
            term = c
            for i, e in enumerate(m):
                if e:
                    if i >= len(vals):
                        term = K.zero
                        break
                    term = term * vals[i] ** e
            total = K.add(total, term)
        return total

    def weight_series(self, values: Sequence[Any]) -> List[Any]:
        """Evaluate at tag_i = values[i-1] keeping the weight grading: entry w sums weight-w terms"""
        field = self.field
        vals = [field.convert(v) for v in values]
        K = self.ring.domain
        out = [K.zero] * (self.weight + 1)
        for m, c in self.poly.items():
            term = c
            for i, e in enumerate(m):
                if e:
                    term = term * vals[i] ** e if i < len(vals) else K.zero
            w = self.total_weight(m)
            out[w] = K.add(out[w], term)
        return out

    def embed(self, tags: Tuple[str, ...], position: int) -> 'TPolynomial':
        """Place a single-set polynomial into set ``position`` of a multi-set ring"""
        if len(self.tags) != 1:
            raise InputError("embed is defined for single-set polynomials")
        ring = time_ring(tuple(tags), self.nvars, self.field.characteristic)
        nsets = len(tags)
        data = {}
        for m, c in self.poly.items():
            full = [0] * (self.nvars * nsets)
            full[position * self.nvars:(position + 1) * self.nvars] = m
            data[tuple(full)] = c
        return TPolynomial(ring.from_dict(data), self.weight, tuple(tags), self.nvars)

    # Comparison and display

    def _sparse(self) -> Dict[Tuple[Tuple[int, int, int], ...], Any]:
        n = self.nvars
        return {
            tuple((k // n, k % n, e) for k, e in enumerate(m) if e): c
            for m, c in self.poly.items()
        }

    def __eq__(self, other: object) -> bool:
        if isinstance(other, TPolynomial):
            return (self.tags == other.tags and self.field == other.field
                    and self._sparse() == other._sparse())
        if isinstance(other, (int, Fraction)):
            return self._sparse() == ({(): self.field.convert(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.tags, frozenset(self._sparse().items())))

    def as_expr(self):
        return self.poly.as_expr()

    def __repr__(self) -> str:
        return f'TPolynomial({self.as_expr()}, W={self.weight}, sets={self.tags})'


def _characteristic_of(domain) -> int:
    return int(domain.characteristic()) if hasattr(domain, 'characteristic') else 0


def tensor(polys: Sequence[TPolynomial], tags: Tuple[str, ...]) -> TPolynomial:
    """Product f_1(tag_1) f_2(tag_2) ... of single-set polynomials"""
    nvars = max(p.nvars for p in polys)
    weight = min(p.weight for p in polys)
    result = None
    for position, p in enumerate(polys):
        placed = p.relayout(nvars, weight).embed(tags, position)
        result = placed if result is None else result * placed
    return result


# ---------------------------------------------------------------------------
# Schur polynomials
# ---------------------------------------------------------------------------

def _require_q(field: FieldSpec, what: str) -> None:
    field.require_char_zero(what)


@lru_cache(maxsize=None)
def _elementary_table(W: int) -> Tuple[TPolynomial, ...]:
    """p_0..p_W in the ring with max(W,1) variables, from j p_j = sum_i i t_i p_{j-i}"""
    nvars = max(W, 1)
    ring = time_ring((DEFAULT_TAG,), nvars, 0)
    K = ring.domain
    gens = ring.gens
    table = [ring.one]
    for j in range(1, W + 1):
        acc = ring.zero
        for i in range(1, j + 1):
            acc += gens[i - 1] * table[j - i] * K.convert(i)
        table.append(acc * K.revert(K.convert(j)))
    return tuple(TPolynomial(p, W, (DEFAULT_TAG,), nvars) for p in table)


def elementary_schur(j: int, W: int, field: FieldSpec = Q) -> TPolynomial:
    """
    Elementary Schur polynomial p_j(t), defined by exp(sum t_i z^i) = sum p_j z^j

    Args:
        j: Degree, 0 <= j <= W
        W: Truncation weight

    Returns:
        p_j as a TPolynomial truncated at W
    """
    _require_q(field, "elementary_schur")
    if j < 0:
        return TPolynomial.constant(0, W)
    if j > W:
        raise PrecisionError(f"p_{j} has weight {j} above the truncation weight {W}")
    return _elementary_table(W)[j]


@lru_cache(maxsize=4096)
def _schur_cached(parts: Tuple[int, ...], W: int) -> TPolynomial:
    lam = Partition(parts)
    table = _elementary_table(W)
    ring = table[0].ring
    dom = ring.to_domain()
    conj = lam.conjugate()
    if lam.length <= conj.length:
        size, rows, sign_flip = lam.length, lam, False
    else:
        size, rows, sign_flip = conj.length, conj, True
    if size == 0:
        return TPolynomial(ring.one, W, (DEFAULT_TAG,), table[0].nvars)

    def entry(k: int):
        if k < 0:
            return ring.zero
        p = table[k].poly
        if sign_flip:
            # e_k(t) = (-1)^k p_k(-t)
            p = ring.from_dict({m: (c if (sum(m) + k) % 2 == 0 else -c) for m, c in p.items()})
        return p

    matrix = [[entry(rows.part(i) - i + j) for j in range(1, size + 1)] for i in range(1, size + 1)]
    det = DomainMatrix(matrix, (size, size), dom).det()
    return TPolynomial(det, W, (DEFAULT_TAG,), table[0].nvars)


def schur(lam: Partition, W: int, field: FieldSpec = Q) -> TPolynomial:
    """
    Schur polynomial χ_λ(t) by the Jacobi-Trudi determinant in the p_j

    The dual form in e_k = (-1)^k p_k(-t) is used when λ has more rows than
    columns, keeping the determinant at most min(ℓ(λ), λ_1) wide.
    """
    _require_q(field, "schur")
    if lam.weight > W:
        raise PrecisionError(f"χ_{lam} has weight {lam.weight} above the truncation weight {W}")
    return _schur_cached(lam.parts, W)


# ---------------------------------------------------------------------------
# Scaled-derivative operators
# ---------------------------------------------------------------------------

class DiffOperator:
    """
    Finite combination of monomials in the scaled derivations ∂̃_i = (1/i) ∂/∂t_i
    on one or more variable sets, with an evaluate-at-zero flag per set
    """

    __slots__ = ('terms', 'tags', 'nvars', 'at_zero')

    def __init__(self, terms: Mapping[Monomial, Any], tags: Tuple[str, ...] = (DEFAULT_TAG,),
                 nvars: int = 1, at_zero: Optional[Tuple[bool, ...]] = None):
        K = Q.domain
        self.tags = tuple(tags)
        self.nvars = nvars
        self.at_zero = tuple(at_zero) if at_zero is not None else (False,) * len(self.tags)
        if len(self.at_zero) != len(self.tags):
            raise InputError("One evaluate-at-zero flag per variable set is required")
        self.terms = {tuple(m): Q.convert(c) for m, c in terms.items() if Q.convert(c) != K.zero}

    @classmethod
    def identity(cls, tags: Tuple[str, ...] = (DEFAULT_TAG,), nvars: int = 1) -> 'DiffOperator':
        return cls({(0,) * (nvars * len(tags)): 1}, tags, nvars)

    @classmethod
    def zero(cls, tags: Tuple[str, ...] = (DEFAULT_TAG,), nvars: int = 1) -> 'DiffOperator':
        return cls({}, tags, nvars)

    @classmethod
    def from_polynomial(cls, poly: TPolynomial, sign: int = 1) -> 'DiffOperator':
        """q(±∂̃) for a polynomial q(t): t_i -> sign * ∂̃_i"""
        terms = {}
        for m, c in poly.items():
            terms[m] = -c if (sign < 0 and sum(m) % 2) else c
        return cls(terms, poly.tags, poly.nvars)

    def term_weights(self, monomial: Monomial) -> Tuple[int, ...]:
        return _set_weights(monomial, len(self.tags), self.nvars)

    def max_weight(self, position: int = 0) -> int:
        return max((self.term_weights(m)[position] for m in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def relayout(self, nvars: int) -> 'DiffOperator':
        if nvars == self.nvars:
            return self
        terms = {}
        for m, c in self.terms.items():
            moved = _relayout(m, len(self.tags), self.nvars, nvars)
            if moved is None:
                raise InputError(f"Operator uses variables beyond index {nvars}")
            terms[moved] = c
        return DiffOperator(terms, self.tags, nvars, self.at_zero)

    def evaluated(self, flags: Optional[Sequence[bool]] = None) -> 'DiffOperator':
        """Copy with evaluate-at-zero flags (all sets by default)"""
        flags = tuple(flags) if flags is not None else (True,) * len(self.tags)
        return DiffOperator(self.terms, self.tags, self.nvars, flags)

    def _align(self, other: 'DiffOperator') -> Tuple['DiffOperator', 'DiffOperator']:
        if self.tags != other.tags:
            raise InputError(f"Operator variable sets differ: {self.tags} vs {other.tags}")
        n = max(self.nvars, other.nvars)
        return self.relayout(n), other.relayout(n)

    def __add__(self, other: 'DiffOperator') -> 'DiffOperator':
        a, b = self._align(other)
        terms = dict(a.terms)
        for m, c in b.terms.items():
            terms[m] = terms.get(m, 0) + c
        return DiffOperator(terms, a.tags, a.nvars, tuple(x or y for x, y in zip(a.at_zero, b.at_zero)))

    def __neg__(self) -> 'DiffOperator':
        return DiffOperator({m: -c for m, c in self.terms.items()}, self.tags, self.nvars, self.at_zero)

    def __sub__(self, other: 'DiffOperator') -> 'DiffOperator':
        return self + (-other)

    def scale(self, scalar: Any) -> 'DiffOperator':
        s = Q.convert(scalar)
        return DiffOperator({m: c * s for m, c in self.terms.items()}, self.tags, self.nvars, self.at_zero)

    def __mul__(self, other: Any) -> 'DiffOperator':
        """Composition (the derivations commute)"""
        if not isinstance(other, DiffOperator):
            return self.scale(other)
        a, b = self._align(other)
        terms: Dict[Monomial, Any] = {}
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                terms[m] = terms.get(m, 0) + c1 * c2
        return DiffOperator(terms, a.tags, a.nvars, tuple(x or y for x, y in zip(a.at_zero, b.at_zero)))

    def embed(self, tags: Tuple[str, ...], position: int) -> 'DiffOperator':
        """Place a single-set operator on set ``position`` of a multi-set operator"""
        if len(self.tags) != 1:
            raise InputError("embed is defined for single-set operators")
        nsets = len(tags)
        terms = {}
        for m, c in self.terms.items():
            full = [0] * (self.nvars * nsets)
            full[position * self.nvars:(position + 1) * self.nvars] = m
            terms[tuple(full)] = c
        flags = [False] * nsets
        flags[position] = self.at_zero[0]
        return DiffOperator(terms, tuple(tags), self.nvars, tuple(flags))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiffOperator):
            return NotImplemented
        if self.tags != other.tags:
            return False
        a, b = self._align(other)
        return a.terms == b.terms

    def __hash__(self) -> int:
        return hash((self.tags, self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f'DiffOperator({len(self.terms)} terms, sets={self.tags}, at_zero={self.at_zero})'


def tensor_operators(ops: Sequence[DiffOperator], tags: Tuple[str, ...]) -> DiffOperator:
    """A_1(∂̃_{tag_1}) A_2(∂̃_{tag_2}) ... from single-set operators"""
    nvars = max(op.nvars for op in ops)
    result = None
    for position, op in enumerate(ops):
        placed = op.relayout(nvars).embed(tags, position)
        result = placed if result is None else result * placed
    return result


@lru_cache(maxsize=None)
def _scaled_factor(e: int, m: int, i: int) -> Fraction:
    """(1/i)^m d^m/dt_i^m applied to t_i^e, as the coefficient of t_i^(e-m)"""
    return Fraction(perm(e, m), i ** m)


def _scaled_value_at_zero(monomial: Monomial, nvars: int) -> Fraction:
    """∂̃^m t^m at t = 0"""
    value = Fraction(1)
    for k, e in enumerate(monomial):
        if e:
            value *= Fraction(factorial(e), ((k % nvars) + 1) ** e)
    return value


def schur_operator(lam: Partition, sign: int = 1) -> DiffOperator:
    """χ_λ(±∂̃)"""
    return DiffOperator.from_polynomial(schur(lam, lam.weight), sign)


def elementary_operator(j: int, sign: int = 1) -> DiffOperator:
    """p_j(±∂̃)"""
    if j < 0:
        return DiffOperator.zero()
    return DiffOperator.from_polynomial(elementary_schur(j, j), sign)


def D_operator(lam: Partition, alpha: int, sign: int = 1) -> DiffOperator:
    """
    D_{λ,α}(±∂̃) = sum of χ_μ(±∂̃) over μ with λ/μ a horizontal α-strip

    Args:
        lam: Diagram λ
        alpha: Strip size
        sign: +1 for ∂̃, -1 for -∂̃

    Returns:
        Single-set operator (zero when no strip exists)
    """
    result = DiffOperator.zero(nvars=max(lam.weight, 1))
    for mu in horizontal_strips(lam, alpha):
        result = result + schur_operator(mu, sign)
    return result


SeparableProduct = Union[Tuple[TPolynomial, ...], List[TPolynomial]]


def apply(op: DiffOperator, f: Union[TPolynomial, SeparableProduct]):
    """
    Apply a scaled-derivative operator, then evaluate flagged sets at zero

    Args:
        op: The operator
        f: A TPolynomial on op's variable sets (possibly more), or a tuple of
           single-set polynomials read as f_1(tag_1) f_2(tag_2) ...

    Returns:
        A field element when every variable set is evaluated, else a TPolynomial

    Raises:
        PrecisionError: when a truncation is too shallow for the operator
    """
    if isinstance(f, (tuple, list)):
        if len(f) != len(op.tags):
            raise InputError(f"Expected {len(op.tags)} factors, got {len(f)}")
        if all(op.at_zero):
            return _apply_separable_at_zero(op, tuple(f))
        f = tensor(list(f), op.tags)
    return _apply_general(op, f)


def _apply_separable_at_zero(op: DiffOperator, factors: Tuple[TPolynomial, ...]):
    nsets = len(op.tags)
    n = op.nvars
    K = factors[0].ring.domain
    field = factors[0].field
    total = K.zero
    cache: List[Dict[Monomial, Any]] = [dict() for _ in range(nsets)]
    for m, c in op.terms.items():
        weights = op.term_weights(m)
        value = field.convert(c)
        for s in range(nsets):
            f_s = factors[s]
            block = m[s * n:(s + 1) * n]
            if weights[s] > f_s.weight:
                raise PrecisionError(
                    f"Operator term of weight {weights[s]} exceeds the truncation weight {f_s.weight}"
                )
            if block not in cache[s]:
                moved = _relayout(block, 1, n, f_s.nvars)
                coeff = f_s.poly.get(moved, K.zero) if moved is not None else K.zero
                if coeff:
                    coeff = coeff * field.convert(_scaled_value_at_zero(block, n))
                cache[s][block] = coeff
            value = value * cache[s][block]
            if not value:
                break
        total = K.add(total, value)
    return total


def _apply_general(op: DiffOperator, f: TPolynomial):
    missing = [tag for tag in op.tags if tag not in f.tags]
    if missing:
        raise InputError(f"Operator acts on variable sets {missing} absent from the polynomial")
    field = f.field
    K = f.ring.domain
    n_f = f.nvars
    nsets_f = len(f.tags)
    positions = [f.tags.index(tag) for tag in op.tags]
    evaluated = {positions[k] for k, flag in enumerate(op.at_zero) if flag}
    reduction = [0] * nsets_f
    for m in op.terms:
        for k, w in enumerate(op.term_weights(m)):
            reduction[positions[k]] = max(reduction[positions[k]], w)
    for s in evaluated:
        if reduction[s] > f.weight:
            raise PrecisionError(
                f"Operator order {reduction[s]} exceeds the truncation weight {f.weight}"
            )
    remaining = [s for s in range(nsets_f) if s not in evaluated]
    new_weight = f.weight - max((reduction[s] for s in remaining), default=0)
    if remaining and new_weight < 0:
        raise PrecisionError(
            f"Operator order exceeds the truncation weight {f.weight}; nothing is determined"
        )

    out: Dict[Monomial, Any] = {}
    for m_op, c_op in op.terms.items():
        lifted = [0] * (n_f * nsets_f)
        ok = True
        for k, s in enumerate(positions):
            block = m_op[k * op.nvars:(k + 1) * op.nvars]
            moved = _relayout(block, 1, op.nvars, n_f)
            if moved is None:
                ok = False
                break
            lifted[s * n_f:(s + 1) * n_f] = moved
        if not ok:
            continue
        coeff_op = field.convert(c_op)
        for m_f, c_f in f.poly.items():
            factor = Fraction(1)
            rest = []
            for idx, (e, d) in enumerate(zip(m_f, lifted)):
                if e < d:
                    factor = Fraction(0)
                    break
                if d:
                    factor *= _scaled_factor(e, d, (idx % n_f) + 1)
                rest.append(e - d)
            if not factor:
                continue
            if any(any(rest[s * n_f:(s + 1) * n_f]) for s in evaluated):
                continue
            key = tuple(x for s in remaining for x in rest[s * n_f:(s + 1) * n_f])
            out[key] = K.add(out.get(key, K.zero), coeff_op * c_f * field.convert(factor))

    if not remaining:
        return out.get((), K.zero)
    tags = tuple(f.tags[s] for s in remaining)
    ring = time_ring(tags, n_f, field.characteristic)
    return TPolynomial(ring.from_dict({m: c for m, c in out.items() if c}), new_weight, tags, n_f)


def schur_coefficient(f: TPolynomial, diagrams: Sequence[Partition]):
    """
    Coefficient of χ_{λ_1}(tag_1) χ_{λ_2}(tag_2) ... in f

    Args:
        f: Polynomial on len(diagrams) variable sets
        diagrams: One diagram per variable set

    Returns:
        Field element
    """
    if len(diagrams) != len(f.tags):
        raise InputError(f"Expected {len(f.tags)} diagrams, got {len(diagrams)}")
    ops = [schur_operator(lam) for lam in diagrams]
    op = tensor_operators(ops, f.tags).evaluated() if len(ops) > 1 else ops[0].evaluated()
    return apply(op, f)


def schur_expansion(f: TPolynomial) -> Dict[Partition, Any]:
    """Coefficients of a single-set polynomial in the Schur basis, nonzero only"""
    result = {}
    for lam in partitions_up_to(f.weight):
        c = schur_coefficient(f, [lam])
        if c:
            result[lam] = c
    return result


def from_schur_expansion(coefficients: Mapping[Partition, Any], weight: int,
                         field: FieldSpec = Q) -> TPolynomial:
    """sum_λ c_λ χ_λ(t) truncated at weight"""
    result = TPolynomial.constant(0, weight)
    for lam, c in coefficients.items():
        if lam.weight <= weight:
            result = result + schur(lam, weight).scale(field.convert(c))
    return result


__all__ = [
    'Partition',
    'EMPTY',
    'partitions_of',
    'partitions_up_to',
    'horizontal_strips',
    'MayaDiagram',
    'ValuationSet',
    'virtual_cardinal',
    'partition_of_valuations',
    'valuations_of_partition',
    'maya_of_partition',
    'time_ring',
    'TPolynomial',
    'tensor',
    'elementary_schur',
    'schur',
    'DiffOperator',
    'tensor_operators',
    'schur_operator',
    'elementary_operator',
    'D_operator',
    'apply',
    'schur_coefficient',
    'schur_expansion',
    'from_schur_expansion',
]
