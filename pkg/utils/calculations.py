"""
Exact Linear Algebra Calculations Module
Contains echelon, nullspace, determinant and reduction routines over QQ,
GF(p) and truncated time-polynomial rings.
"""

import logging
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from . import InputError

logger = logging.getLogger(__name__)

Row = List[Any]


class ExactLinearAlgebra:
    """Exact matrix calculations on lists of domain elements"""

    @staticmethod
    def to_matrix(rows: Sequence[Sequence[Any]], domain, ncols: Optional[int] = None) -> DomainMatrix:
        """Wrap a list of rows as a DomainMatrix"""
        nrows = len(rows)
        ncols = len(rows[0]) if rows and ncols is None else (ncols or 0)
        return DomainMatrix([list(r) for r in rows], (nrows, ncols), domain)

    @staticmethod
    def rref(rows: Sequence[Sequence[Any]], domain) -> Tuple[List[Row], Tuple[int, ...]]:
        """
        Reduced row echelon form

        Args:
            rows: Matrix rows (domain elements)
            domain: sympy field domain

        Returns:
            (rows of the RREF, pivot column indices)
        """
        if not rows:
            return [], ()
        matrix, pivots = ExactLinearAlgebra.to_matrix(rows, domain).rref()
        return matrix.to_list(), tuple(pivots)

    @staticmethod
    def determinant(rows: Sequence[Sequence[Any]], domain):
        """Determinant (one for the empty matrix)"""
        if not rows:
            return domain.one
        return ExactLinearAlgebra.to_matrix(rows, domain).det()

    @staticmethod
    def nullspace(rows: Sequence[Sequence[Any]], domain, ncols: int) -> List[Row]:
        """
        Basis of {x : A x = 0} in reduced echelon form

        Args:
            rows: Constraint rows
            domain: sympy field domain
            ncols: Number of unknowns

        Returns:
            Basis vectors, each with a leading 1 at a distinct position
        """
        if ncols == 0:
            return []
        if not rows:
            return [[domain.one if i == j else domain.zero for j in range(ncols)] for i in range(ncols)]
        basis = ExactLinearAlgebra.to_matrix(rows, domain, ncols).nullspace().to_list()
        if not basis:
            return []
        reduced, _ = ExactLinearAlgebra.rref(basis, domain)
        return [r for r in reduced if any(r)]

    @staticmethod
    def reduce_against(vector: Dict[int, Any], basis: Sequence[Tuple[int, Dict[int, Any]]],
                       domain) -> Tuple[Dict[int, Any], Dict[int, Any]]:
        """
        Express a sparse vector in a reduced echelon basis

        Args:
            vector: {position: value}
            basis: (pivot position, {position: value}) pairs, each with
                value 1 at its pivot and 0 at the other pivots
            domain: sympy field domain

        Returns:
            (coefficients by pivot, residual vector)
        """
        coefficients: Dict[int, Any] = {}
        residual = {k: v for k, v in vector.items() if v}
        for pivot, member in basis:
            c = residual.get(pivot)
            if not c:
                continue
            coefficients[pivot] = c
            for k, v in member.items():
                value = residual.get(k, domain.zero) - c * v
                if value:
                    residual[k] = value
                else:
                    residual.pop(k, None)
        return coefficients, residual


class TruncatedDeterminant:
    """Determinants over a ring where products may be truncated (no division needed)"""

    @staticmethod
    def subset_expansion(
        matrix: Sequence[Sequence[Any]],
        multiply: Callable[[Any, Any], Any],
        add: Callable[[Any, Any], Any],
        negate: Callable[[Any], Any],
        is_zero: Callable[[Any], bool],
        one: Any,
    ) -> Any:
        """
        Column-by-column Laplace expansion with memoised row subsets

        Cost grows as n 2^n ring products; entries are combined only through
        the supplied callables, so truncated multiplication is respected.

        Args:
            matrix: Square matrix of ring elements
            multiply, add, negate, is_zero: Ring operations
            one: Multiplicative identity

        Returns:
            The determinant, or None when it vanishes
        """
        n = len(matrix)
        if n == 0:
            return one
        if any(len(row) != n for row in matrix):
            raise InputError("Determinant needs a square matrix")
        states: Dict[int, Any] = {0: one}
        for col in range(n):
            nxt: Dict[int, Any] = {}
            for used, value in states.items():
                for row in range(n):
                    bit = 1 << row
                    if used & bit:
                        continue
                    entry = matrix[row][col]
                    if is_zero(entry):
                        continue
                    term = multiply(value, entry)
                    if is_zero(term):
                        continue
                    # inversions: rows already used with a larger index
                    if bin(used >> (row + 1)).count('1') % 2:
                        term = negate(term)
                    key = used | bit
                    nxt[key] = add(nxt[key], term) if key in nxt else term
            states = {k: v for k, v in nxt.items() if not is_zero(v)}
            logger.debug("subset expansion column %d: %d live row subsets", col, len(states))
            if not states:
                return None
        return states.get((1 << n) - 1)


__all__ = [
    'ExactLinearAlgebra',
    'TruncatedDeterminant',
]
