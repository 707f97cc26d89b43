"""
Residue identities and the differential equations generated from them.

Residues are computed on the τ-multiplied BA functions, so every quantity
is a polynomial in the time variables and no point has to sit on the big
cell. A vanishing residue therefore means the same as in the classical
form wherever τ is invertible.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from tqdm import tqdm

from config import get_check_config, get_error_message
from config.settings import Settings
from utils import InputError, PrecisionError, sign_of_weight
from utils.formatters import PartitionFormatter, RationalFormatter
from utils.laurent import FieldSpec, Q
from utils.partitions import (
    DiffOperator,
    Partition,
    TPolynomial,
    D_operator,
    apply,
    elementary_operator,
    partitions_of,
    schur_coefficient,
    tensor,
    tensor_operators,
)

from .grassmannian import GrassPoint, residue_pairing
from .tau_ba import ba_hat, structure_expansion, tau_expand

logger = logging.getLogger(__name__)

PAIR_TAGS = ('t', 'tp')
TRIPLE_TAGS = ('t', 'tp', 'tpp')
METHODS = ('direct', 'structure')


def _zero(W: int, tags: Tuple[str, ...], field: FieldSpec = Q) -> TPolynomial:
    return TPolynomial.constant(0, W, tags, max(W, 1), field)


def _check_method(method: str) -> None:
    if method not in METHODS:
        raise InputError(f"Unknown residue method {method!r}; expected one of {METHODS}")


def require_genus(U: GrassPoint, g: int) -> None:
    if U.index != 1 - g:
        raise InputError(
            f"{get_error_message('input', 'index_mismatch')} "
            f"Genus {g} needs index {1 - g}, the point has index {U.index}"
        )


# ---------------------------------------------------------------------------
# Residue forms
# ---------------------------------------------------------------------------

def bilinear_residue(U: GrassPoint, U2: GrassPoint, W: int, method: str = 'direct') -> TPolynomial:
    """
    res_{z=0} ψ̂_U(z,t) ψ̂*_{U2}(z,t′) dz/z² through weight W in t and t′

    Args:
        U, U2: Points of the same index over Q
        W: Truncation weight per variable set
        method: 'direct' multiplies the shift coefficients of both τ's;
            'structure' pairs the certified frame expansions

    Returns:
        TPolynomial on (t, t′); zero through W when U = U2
    """
    _check_method(method)
    if U.index != U2.index:
        raise InputError(
            f"{get_error_message('input', 'index_mismatch')} Indices are {U.index} and {U2.index}"
        )
    total = _zero(W, PAIR_TAGS)
    if method == 'direct':
        F = ba_hat(U, W, (-W, W + 2))
        G = ba_hat(U2, W, (-W, W + 2), adjoint=True)
        for a in range(-W, W + 2):
            Fa, Gb = F.coefficient(a), G.coefficient(1 - a)
            if Fa.is_zero() or Gb.is_zero():
                continue
            total = total + tensor([Fa, Gb], PAIR_TAGS)
    else:
        left = structure_expansion(U, W)
        right = structure_expansion(U2, W, adjoint=True)
        for u, P in left:
            paired = None
            for w, Qj in right:
                r = residue_pairing(u, w)
                if r:
                    term = Qj.scale(r)
                    paired = term if paired is None else paired + term
            if paired is not None and not paired.is_zero():
                total = total + tensor([P, paired], PAIR_TAGS)
    logger.debug("bilinear_residue (%s) through weight %d: %d terms", method, W, len(total.poly))
    return total


def moduli_residue(U: GrassPoint, g: int, W: int, method: str = 'structure') -> TPolynomial:
    """
    res_{z=0} ψ̂_U(z,t) ψ̂_U(z,t′) ψ̂*_U(z,t″) dz/z^{2+g} through weight W per set

    Args:
        U: Point of index 1 − g over Q
        g: Genus
        W: Truncation weight
        method: 'structure' (default) sums res(u_i u_k w_j) P_i P_k Q_j over
            the frames of U and U^⊥; 'direct' convolves shift coefficients

    Raises:
        InputError: when index(U) != 1 − g
    """
    _check_method(method)
    require_genus(U, g)
    n = U.index
    total = _zero(W, TRIPLE_TAGS)
    if method == 'direct':
        # exponent sum a + b + c = 2 − n with every index >= −W
        hi = 2 - n + 2 * W + 1
        F = ba_hat(U, W, (-W, hi))
        G = ba_hat(U, W, (-W, hi), adjoint=True)
        for a in range(-W, hi):
            Fa = F.coefficient(a)
            if Fa.is_zero():
                continue
            for b in range(-W, hi):
                c = 2 - n - a - b
                if c < -W or c >= hi:
                    continue
                Fb, Gc = F.coefficient(b), G.coefficient(c)
                if Fb.is_zero() or Gc.is_zero():
                    continue
                total = total + tensor([Fa, Fb, Gc], TRIPLE_TAGS)
    else:
        left = structure_expansion(U, W)
        right = structure_expansion(U, W, adjoint=True)
        for u_i, P_i in left:
            for u_k, P_k in left:
                product = u_i * u_k
                paired = None
                for w, Qj in right:
                    r = residue_pairing(product, w)
                    if r:
                        term = Qj.scale(r)
                        paired = term if paired is None else paired + term
                if paired is not None and not paired.is_zero():
                    total = total + tensor([P_i, P_k, paired], TRIPLE_TAGS)
    logger.debug("moduli_residue (%s) g=%d through weight %d: %d terms", method, g, W, len(total.poly))
    return total


def unit_residue(U: GrassPoint, g: int, W: int, method: str = 'direct') -> TPolynomial:
    """
    res_{z=0} ψ̂*_U(z,t) dz/z^{n+1}, n = 1 − g; vanishes iff 1 ∈ U

    Raises:
        InputError: when index(U) != 1 − g
    """
    _check_method(method)
    require_genus(U, g)
    n = U.index
    if method == 'direct':
        if n < -W:
            return _zero(W, ('t',))
        return ba_hat(U, W, (-W, n + 1), adjoint=True).coefficient(n)
    total = _zero(W, ('t',))
    for w, Qj in structure_expansion(U, W, adjoint=True):
        r = w.coefficient(-1)
        if r:
            total = total + Qj.scale(r)
    return total


# ---------------------------------------------------------------------------
# Operator forms
# ---------------------------------------------------------------------------

def _strips(lam: Partition, sign: int) -> List[Tuple[int, DiffOperator]]:
    """(α, D_{λ,α}(±∂̃)) for the α with a horizontal strip; α <= |λ|"""
    out = []
    for alpha in range(lam.weight + 1):
        D = D_operator(lam, alpha, sign)
        if not D.is_zero():
            out.append((alpha, D))
    return out


def _compositions(total: int, parts: int) -> Iterable[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _generated_operator(factors: Sequence[Tuple[Partition, int]], shift: int,
                        tags: Tuple[str, ...]) -> DiffOperator:
    """
    Σ ∏_s p_{β_s}(σ_s ∂̃) D_{λ_s,α_s}(−σ_s ∂̃) over Σ(β_s − α_s) = shift

    factors holds (λ_s, σ_s). α_s <= |λ_s| and β_s >= 0 make the sum finite:
    Σβ = shift + Σα <= shift + Σ|λ_s|.
    """
    strips = [_strips(lam, -sigma) for lam, sigma in factors]
    result = DiffOperator.zero(tags)
    count = 0

    def combine(position: int, chosen: List[Tuple[int, DiffOperator]]) -> None:
        nonlocal result, count
        if position < len(factors):
            for item in strips[position]:
                combine(position + 1, chosen + [item])
            return
        budget = shift + sum(alpha for alpha, _ in chosen)
        if budget < 0:
            return
        for betas in _compositions(budget, len(factors)):
            ops = [
                elementary_operator(beta, sigma) * D
                for beta, (_, sigma), (_, D) in zip(betas, factors, chosen)
            ]
            term = ops[0] if len(ops) == 1 else tensor_operators(ops, tags)
            result = result + term
            count += 1

    combine(0, [])
    logger.debug("generated operator on %s: %d tuples", tags, count)
    return result


@lru_cache(maxsize=1024)
def kp_operator(l1: Partition, l2: Partition) -> DiffOperator:
    """
    Σ p_{β1}(∂̃_t)D_{λ1,α1}(−∂̃_t) · p_{β2}(−∂̃_{t′})D_{λ2,α2}(∂̃_{t′})
    over −α1 + β1 − α2 + β2 = 1

    Every term has weight <= |λ1| + |λ2| + 1 in each variable set.
    """
    return _generated_operator([(l1, 1), (l2, -1)], 1, PAIR_TAGS)


@lru_cache(maxsize=1024)
def moduli_operator(l1: Partition, l2: Partition, l3: Partition, g: int) -> DiffOperator:
    """
    Σ p_{β1}(∂̃_t)D_{λ1,α1}(−∂̃_t) · p_{β2}(∂̃_{t′})D_{λ2,α2}(−∂̃_{t′})
      · p_{β3}(−∂̃_{t″})D_{λ3,α3}(∂̃_{t″}) over Σ(β_s − α_s) = 1 + g

    Weight bound per set: 1 + g + |λ1| + |λ2| + |λ3|.
    """
    return _generated_operator([(l1, 1), (l2, 1), (l3, -1)], 1 + g, TRIPLE_TAGS)


@lru_cache(maxsize=1024)
def unit_operator(lam: Partition, g: int) -> DiffOperator:
    """Σ_{−α+β=1−g} p_β(−∂̃)D_{λ,α}(∂̃); weight bound |λ| + 1 − g"""
    return _generated_operator([(lam, -1)], 1 - g, ('t',))


def _require_tau_weight(tau: TPolynomial, needed: int, what: str) -> None:
    if tau.weight < needed:
        raise PrecisionError(
            f"{get_error_message('precision', 'weight_too_small')} "
            f"{what} needs τ through weight {needed}, got {tau.weight}"
        )


def _single_set(tau: TPolynomial) -> TPolynomial:
    if len(tau.tags) != 1:
        raise InputError("τ must be a polynomial in one set of time variables")
    tau.field.require_char_zero("operator checks")
    return tau


def kp_check(tau: TPolynomial, l1: Partition, l2: Partition, tau2: Optional[TPolynomial] = None):
    """
    kp_operator(λ1, λ2) applied to τ(t)·τ2(t′) at t = t′ = 0

    With tau2 = τ this is the KP equation indexed by (λ1, λ2). For τ_U and
    τ_{U′} it equals (−1)^{|λ1|} times the χ_{λ1′}(t)χ_{λ2}(t′) coefficient of
    bilinear_residue(U, U′).
    """
    tau = _single_set(tau)
    tau2 = tau if tau2 is None else _single_set(tau2)
    needed = l1.weight + l2.weight + 1
    _require_tau_weight(tau, needed, f"kp_check({l1}, {l2})")
    _require_tau_weight(tau2, needed, f"kp_check({l1}, {l2})")
    return apply(kp_operator(l1, l2).evaluated(), (tau, tau2))


def moduli_check(tau: TPolynomial, l1: Partition, l2: Partition, l3: Partition, g: int):
    """
    moduli_operator applied to τ(t)τ(t′)τ(t″) at zero

    Equals (−1)^{|λ1|+|λ2|} times the χ_{λ1′}(t)χ_{λ2′}(t′)χ_{λ3}(t″)
    coefficient of moduli_residue.
    """
    tau = _single_set(tau)
    _require_tau_weight(tau, 1 + g + l1.weight + l2.weight + l3.weight, f"moduli_check({l1}, {l2}, {l3})")
    return apply(moduli_operator(l1, l2, l3, g).evaluated(), (tau, tau, tau))


def unit_condition(tau: Any, g: int, lam: Partition):
    """
    Σ_{−α+β=1−g} p_β(−∂̃)D_{λ,α}(∂̃)τ at zero; the χ_λ coefficient of unit_residue

    Args:
        tau: τ as a TPolynomial, or a GrassPoint (τ is expanded as needed)
        g: Genus
        lam: Diagram
    """
    needed = max(lam.weight + 1 - g, 0)
    if isinstance(tau, GrassPoint):
        tau = tau_expand(tau, needed)
    tau = _single_set(tau)
    _require_tau_weight(tau, needed, f"unit_condition({lam})")
    return apply(unit_operator(lam, g).evaluated(), tau)


def residue_coefficient(residue: TPolynomial, diagrams: Sequence[Partition], conjugated: int):
    """
    Operator-side value read off a residue: sign and conjugates on the first
    ``conjugated`` variable sets, plain Schur coefficient on the rest
    """
    read = [lam.conjugate() if s < conjugated else lam for s, lam in enumerate(diagrams)]
    sign = sign_of_weight(sum(lam.weight for lam in diagrams[:conjugated]))
    value = schur_coefficient(residue, read)
    return -value if sign < 0 else value


# ---------------------------------------------------------------------------
# Reports and scans
# ---------------------------------------------------------------------------

@dataclass
class CheckReport:
    """Outcome of one check through a weight"""
    check: str
    weight: int
    passed: bool
    point: Optional[str] = None
    witness: Optional[Dict[str, Any]] = None
    evaluated: int = 0
    field: FieldSpec = dataclass_field(default=Q)

    @property
    def status(self) -> str:
        config = get_check_config()
        template = config["consistent_message"] if self.passed else config["failure_message"]
        return template.format(weight=self.weight)

    def to_record(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {
            "check": self.check,
            "point": self.point,
            "weight": self.weight,
            "passed": self.passed,
            "status": self.status,
            "evaluated": self.evaluated,
        }
        if self.witness is not None:
            witness = dict(self.witness)
            witness["coefficient"] = RationalFormatter.format(self.field, witness["coefficient"])
            if "diagrams" in witness:
                witness["diagrams"] = [PartitionFormatter.to_record(lam) for lam in witness["diagrams"]]
            record["witness_coefficient"] = witness
        return record


def tuples_up_to(weight: int, size: int) -> List[Tuple[Partition, ...]]:
    """All size-tuples of diagrams with total weight <= weight, canonical order"""
    out: List[Tuple[Partition, ...]] = []
    for total in range(weight + 1):
        for split in _compositions(total, size):
            groups = [partitions_of(w) for w in split]
            out.extend(_product(groups))
    return out


def _product(groups: List[List[Partition]]) -> List[Tuple[Partition, ...]]:
    result: List[Tuple[Partition, ...]] = [()]
    for group in groups:
        result = [prefix + (lam,) for prefix in result for lam in group]
    return result


def scan(items: Sequence[Any], evaluate: Callable[[Any], Any], threads: Optional[int] = None,
         progress: bool = False, desc: str = "tuples") -> List[Tuple[Any, Any]]:
    """
    Evaluate independent diagram tuples, possibly on a thread pool

    Results come back in the order of ``items`` whatever the thread count.
    """
    threads = Settings.thread_count() if threads is None else max(1, threads)
    logger.debug("scan %s: %d items on %d threads", desc, len(items), threads)
    if threads == 1:
        values = [evaluate(item) for item in tqdm(items, desc=desc, disable=not progress)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(tqdm(pool.map(evaluate, items), total=len(items), desc=desc, disable=not progress))
    return list(zip(items, values))


def _scan_report(check: str, weight: int, results: List[Tuple[Any, Any]], field: FieldSpec,
                 point: Optional[str]) -> CheckReport:
    witness = None
    for diagrams, value in results:
        if value:
            witness = {"diagrams": list(diagrams), "coefficient": value}
            break
    report = CheckReport(check, weight, witness is None, point, witness, len(results), field)
    logger.info("%s: %s (%d tuples)", check, report.status, len(results))
    return report


def kp_scan(tau: TPolynomial, max_weight: int, tau2: Optional[TPolynomial] = None,
            threads: Optional[int] = None, progress: bool = False, point: Optional[str] = None) -> CheckReport:
    """kp_check over every pair with |λ1| + |λ2| <= max_weight"""
    pairs = tuples_up_to(max_weight, 2)
    results = scan(pairs, lambda p: kp_check(tau, p[0], p[1], tau2), threads, progress, "kp")
    return _scan_report("kp", max_weight, results, tau.field, point)


def moduli_scan(tau: TPolynomial, g: int, max_weight: int, threads: Optional[int] = None,
                progress: bool = False, point: Optional[str] = None) -> CheckReport:
    """moduli_check over every triple with |λ1| + |λ2| + |λ3| <= max_weight"""
    triples = tuples_up_to(max_weight, 3)
    results = scan(triples, lambda p: moduli_check(tau, p[0], p[1], p[2], g), threads, progress, "moduli")
    return _scan_report("moduli", max_weight, results, tau.field, point)


def unit_scan(tau: TPolynomial, g: int, max_weight: int, threads: Optional[int] = None,
              progress: bool = False, point: Optional[str] = None) -> CheckReport:
    """unit_condition over every λ with |λ| <= max_weight"""
    singles = tuples_up_to(max_weight, 1)
    results = scan(singles, lambda p: unit_condition(tau, g, p[0]), threads, progress, "unit")
    return _scan_report("unit", max_weight, results, tau.field, point)


def residue_report(check: str, residue: TPolynomial, weight: int, point: Optional[str] = None) -> CheckReport:
    """Report on a residue polynomial; the witness is its lowest-weight term"""
    witness = None
    if not residue.is_zero():
        names = [str(s) for s in residue.ring.symbols]
        monomial, coefficient = min(residue.items(), key=lambda item: (residue.total_weight(item[0]), item[0]))
        witness = {
            "monomial": {names[k]: e for k, e in enumerate(monomial) if e},
            "coefficient": coefficient,
        }
    report = CheckReport(check, weight, witness is None, point, witness, len(residue.poly), residue.field)
    logger.info("%s residue: %s", check, report.status)
    return report


def pde_triple(tau: TPolynomial, g: int, kp_weight: int, moduli_weight: int, unit_weight: int,
               threads: Optional[int] = None, progress: bool = False) -> Dict[str, CheckReport]:
    """
    KP, moduli and unit checks of one τ, each through its own weight

    τ must be known through max(kp_weight, moduli_weight + g, unit_weight − g) + 1.
    """
    return {
        "kp": kp_scan(tau.truncate(kp_weight + 1), kp_weight, threads=threads, progress=progress),
        "moduli": moduli_scan(tau.truncate(moduli_weight + 1 + g), g, moduli_weight, threads, progress),
        "unit": unit_scan(tau.truncate(max(unit_weight + 1 - g, 0)), g, unit_weight, threads, progress),
    }


__all__ = [
    'PAIR_TAGS',
    'TRIPLE_TAGS',
    'METHODS',
    'bilinear_residue',
    'moduli_residue',
    'unit_residue',
    'kp_operator',
    'moduli_operator',
    'unit_operator',
    'kp_check',
    'moduli_check',
    'unit_condition',
    'residue_coefficient',
    'CheckReport',
    'tuples_up_to',
    'scan',
    'kp_scan',
    'moduli_scan',
    'unit_scan',
    'residue_report',
    'require_genus',
    'pde_triple',
]
