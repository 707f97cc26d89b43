from fractions import Fraction

import pytest

from utils import InputError, parse_integer_list, parse_rational, parse_rational_list
from utils.formatters import (
    DocumentFormatter,
    OperatorFormatter,
    PartitionFormatter,
    PolynomialFormatter,
    RationalFormatter,
    SeriesFormatter,
)
from utils.laurent import FieldSpec, LaurentSeries, Q
from utils.partitions import D_operator, EMPTY, Partition, TPolynomial

F5 = FieldSpec(5)


def test_rationals_in_lowest_terms():
    assert RationalFormatter.format(Q, Q.convert(Fraction(-3, 6))) == "-1/2"
    assert RationalFormatter.format(F5, F5.convert(-1)) == "4"
    assert RationalFormatter.parse(Q, "2/4") == Q.convert(Fraction(1, 2))


@pytest.mark.parametrize("raw", [True, "1/0", "half", 0.5])
def test_rejected_rationals(raw):
    with pytest.raises(InputError):
        parse_rational(raw)


def test_lists_from_the_command_line():
    assert parse_integer_list("2,1") == [2, 1]
    assert parse_integer_list("[3, 1]") == [3, 1]
    assert parse_integer_list("") == []
    assert parse_rational_list("1/2,3,-4/5") == [Fraction(1, 2), 3, Fraction(-4, 5)]
    with pytest.raises(InputError):
        parse_integer_list("2,a")


def test_series_record():
    series = LaurentSeries.polynomial({-1: Fraction(1, 2), 2: 3}, Q)
    record = SeriesFormatter.to_record(series)
    assert record["coeffs"] == [[-1, "1/2"], [2, "3"]]
    assert record["field"] == 0
    assert SeriesFormatter.from_record(record) == series


def test_malformed_series_records():
    with pytest.raises(InputError):
        SeriesFormatter.from_record({"coeffs": [[0, "x"]], "lo": 0, "hi": 1})
    with pytest.raises(InputError):
        SeriesFormatter.from_record({"coeffs": []})


def test_partition_records():
    assert PartitionFormatter.from_record([2, 1]) == Partition.of(2, 1)
    assert PartitionFormatter.to_record(EMPTY) == []
    with pytest.raises(InputError):
        PartitionFormatter.from_record("21")
    with pytest.raises(InputError):
        PartitionFormatter.from_record([1, 2])


def test_polynomial_record_names_the_variables():
    tags = ("t", "tp")
    t1 = TPolynomial.variable(1, 2, tags=tags)
    s2 = TPolynomial.variable(2, 2, tag="tp", tags=tags)
    poly = t1 * s2 + TPolynomial.constant(Fraction(1, 2), 2, tags)
    record = PolynomialFormatter.to_record(poly)
    assert record["sets"] == ["t", "tp"]
    monomials = [term["monomial"] for term in record["terms"]]
    assert {"t1": 1, "tp2": 1} in monomials
    assert {} in monomials
    assert PolynomialFormatter.from_record(record) == poly


def test_polynomial_record_with_an_unknown_variable():
    record = {"weight": 2, "terms": [{"monomial": {"t9": 1}, "coefficient": "1"}]}
    with pytest.raises(InputError):
        PolynomialFormatter.from_record(record)
    with pytest.raises(InputError):
        PolynomialFormatter.from_record({"terms": []})


def test_schur_records_in_canonical_order():
    records = PolynomialFormatter.schur_records({Partition.of(1): Q.one, EMPTY: Q.convert(2)}, Q)
    assert [item["partition"] for item in records] == [[], [1]]
    assert PolynomialFormatter.from_schur_records(records, Q) == {EMPTY: Q.convert(2), Partition.of(1): Q.one}


def test_operator_record():
    record = OperatorFormatter.to_record(D_operator(Partition.of(1), 1))
    assert record["sets"] == ["t"]
    assert len(record["terms"]) == 1
    assert record["terms"][0]["coefficient"] == "1"
    assert not any(record["terms"][0]["exponents"]["t"])


def test_documents_carry_the_schema_version():
    doc = DocumentFormatter.loads(DocumentFormatter.dumps({"command": "gaps"}))
    assert doc["schema_version"] == "sato.v1"
    for text in ("[1, 2]", "{not json", '{"schema_version": "sato.v0"}'):
        with pytest.raises(InputError):
            DocumentFormatter.loads(text)
