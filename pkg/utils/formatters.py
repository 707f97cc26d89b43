"""
Formatters Module
Canonical JSON records for exact values: rationals, Laurent series,
partitions, time polynomials, operators and whole documents.
"""

import json
from typing import Any, Dict, List, Mapping, Optional

from config import IO_CONFIG

from . import InputError, format_rational, parse_rational
from .laurent import FieldSpec, LaurentSeries
from .partitions import DiffOperator, Partition, TPolynomial, time_ring


class RationalFormatter:
    """Exact scalars as "num/den" strings"""

    @staticmethod
    def format(field: FieldSpec, value: Any) -> str:
        """
        Format a field element

        Args:
            field: Field of the value
            value: Domain element

        Returns:
            "num/den" in lowest terms, or the residue in [0, p) over F_p
        """
        return format_rational(field.to_fraction(value))

    @staticmethod
    def parse(field: FieldSpec, raw: Any):
        """Parse an int or "num/den" string into a field element"""
        return field.convert(parse_rational(raw))


class SeriesFormatter:
    """LaurentSeries records {field, lo, hi, exact, coeffs}"""

    @staticmethod
    def to_record(series: LaurentSeries) -> Dict[str, Any]:
        return {
            "field": series.field.characteristic,
            "lo": series.lo,
            "hi": series.hi,
            "exact": series.exact,
            "coeffs": [[e, RationalFormatter.format(series.field, c)] for e, c in series.items()],
        }

    @staticmethod
    def from_record(record: Mapping[str, Any], field: Optional[FieldSpec] = None) -> LaurentSeries:
        try:
            field = field or FieldSpec(int(record.get("field", 0)))
            coeffs: Dict[int, Any] = {}
            for e, c in record["coeffs"]:
                coeffs[int(e)] = RationalFormatter.parse(field, c)
            return LaurentSeries(field, coeffs, int(record["lo"]), int(record["hi"]),
                                 bool(record.get("exact", False)))
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, InputError):
                raise
            raise InputError(f"Malformed series record: {e}") from e


class PartitionFormatter:
    """Partitions as integer lists"""

    @staticmethod
    def to_record(lam: Partition) -> List[int]:
        return list(lam.parts)

    @staticmethod
    def from_record(record: Any) -> Partition:
        if not isinstance(record, (list, tuple)):
            raise InputError(f"Partition must be a list of integers, got {record!r}")
        return Partition(tuple(int(p) for p in record))


class PolynomialFormatter:
    """TPolynomial records and Schur-basis coefficient lists"""

    @staticmethod
    def to_record(poly: TPolynomial) -> Dict[str, Any]:
        field = poly.field
        n = poly.nvars
        terms = []
        for m, c in sorted(poly.items(), key=lambda item: item[0], reverse=True):
            exponents = {
                f'{poly.tags[k // n]}{k % n + 1}': e for k, e in enumerate(m) if e
            }
            terms.append({"monomial": exponents, "coefficient": RationalFormatter.format(field, c)})
        return {
            "field": field.characteristic,
            "weight": poly.weight,
            "sets": list(poly.tags),
            "terms": terms,
        }

    @staticmethod
    def from_record(record: Mapping[str, Any]) -> TPolynomial:
        try:
            field = FieldSpec(int(record.get("field", 0)))
            weight = int(record["weight"])
            tags = tuple(record.get("sets", ["t"]))
            nvars = max(weight, 1)
            ring = time_ring(tags, nvars, field.characteristic)
            names = [str(s) for s in ring.symbols]
            terms = {}
            for term in record["terms"]:
                m = [0] * len(names)
                for name, e in term["monomial"].items():
                    if name not in names:
                        raise InputError(f"Unknown variable {name!r} at weight {weight}")
                    m[names.index(name)] = int(e)
                terms[tuple(m)] = RationalFormatter.parse(field, term["coefficient"])
            return TPolynomial.from_terms(terms, weight, tags, nvars, field)
        except (KeyError, TypeError) as e:
            raise InputError(f"Malformed polynomial record: {e}") from e

    @staticmethod
    def schur_records(coefficients: Mapping[Partition, Any], field: FieldSpec) -> List[Dict[str, Any]]:
        """[{partition, coefficient}] in canonical partition order"""
        return [
            {"partition": PartitionFormatter.to_record(lam),
             "coefficient": RationalFormatter.format(field, c)}
            for lam, c in sorted(coefficients.items(), key=lambda item: item[0].sort_key())
        ]

    @staticmethod
    def from_schur_records(records: List[Mapping[str, Any]], field: FieldSpec) -> Dict[Partition, Any]:
        out: Dict[Partition, Any] = {}
        for item in records:
            lam = PartitionFormatter.from_record(item["partition"])
            out[lam] = RationalFormatter.parse(field, item["coefficient"])
        return out


class OperatorFormatter:
    """DiffOperator records: list of {coefficient, exponents per variable set}"""

    @staticmethod
    def to_record(op: DiffOperator) -> Dict[str, Any]:
        field = FieldSpec(0)
        n = op.nvars
        terms = []
        for m, c in sorted(op.terms.items(), key=lambda item: item[0], reverse=True):
            terms.append({
                "coefficient": RationalFormatter.format(field, c),
                "exponents": {tag: list(m[s * n:(s + 1) * n]) for s, tag in enumerate(op.tags)},
            })
        return {"sets": list(op.tags), "evaluate_at_zero": list(op.at_zero), "terms": terms}


class DocumentFormatter:
    """Whole JSON documents with the schema version field"""

    @staticmethod
    def dumps(document: Mapping[str, Any]) -> str:
        doc = dict(document)
        doc.setdefault("schema_version", IO_CONFIG["schema_version"])
        return json.dumps(doc, indent=IO_CONFIG["indent"], sort_keys=IO_CONFIG["sort_keys"])

    @staticmethod
    def loads(text: str) -> Dict[str, Any]:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"Invalid JSON document: {e}") from e
        if not isinstance(doc, dict):
            raise InputError("Document must be a JSON object")
        version = doc.get("schema_version", IO_CONFIG["schema_version"])
        if version != IO_CONFIG["schema_version"]:
            raise InputError(
                f"Unsupported schema version {version!r} (expected {IO_CONFIG['schema_version']!r})"
            )
        return doc


__all__ = [
    'RationalFormatter',
    'SeriesFormatter',
    'PartitionFormatter',
    'PolynomialFormatter',
    'OperatorFormatter',
    'DocumentFormatter',
]
