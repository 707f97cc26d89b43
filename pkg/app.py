"""
Sato Grassmannian toolkit: batch command line

Every subcommand reads JSON documents, writes one JSON report to stdout and
exits 0 (pass), 1 (check failed) or 2 (input, precision or field error).
"""

import argparse
import logging
import logging.config
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

from config import get_check_config, get_logging_config, get_precision_config
from config.settings import APP_METADATA, EXIT_CODES, IO_CONFIG
from utils import SatoError, InputError, parse_integer_list, parse_rational_list
from utils.formatters import (
    DocumentFormatter,
    OperatorFormatter,
    PartitionFormatter,
    PolynomialFormatter,
    RationalFormatter,
    SeriesFormatter,
)
from utils.laurent import FieldSpec
from utils.partitions import Partition, TPolynomial, schur_expansion

from components.gamma import BiSeries
from components.grassmannian import GrassPoint
from components.identities import (
    METHODS,
    bilinear_residue,
    kp_operator,
    kp_scan,
    moduli_residue,
    moduli_scan,
    require_genus,
    residue_report,
    unit_residue,
    unit_scan,
)
from components.krichever import CurveSpec, algebra_check, gaps_and_genus, krichever_map, reconstruct_algebra
from components.tau_ba import addition_formula, ba, ba_hat, ba_structure, tau_direct, tau_expand

logger = logging.getLogger("sato")

# Outcome of one subcommand: the report document and whether its check passed
Outcome = Tuple[Dict[str, Any], bool]


# ---------------------------------------------------------------------------
# Document loading
# ---------------------------------------------------------------------------

def _read_document(path: Optional[str]) -> Dict[str, Any]:
    if not path:
        raise InputError("A document path is required for this command")
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"Cannot read {path}: {e}") from e
    return DocumentFormatter.loads(text)


def _with_field(record: Dict[str, Any], field: Optional[int]) -> Dict[str, Any]:
    if field is None:
        return record
    return dict(record, field=field)


def load_point(path: str, field: Optional[int] = None) -> GrassPoint:
    """A point file is either the point record itself or a report carrying one under "point"."""
    doc = _read_document(path)
    record = doc if "frame" in doc else doc.get("point")
    if not isinstance(record, dict):
        raise InputError(f"{path} holds no point record")
    if field is not None:
        record = _with_field(record, field)
        record["frame"] = [_with_field(item, field) for item in record["frame"]]
    return GrassPoint.from_record(record)


def load_tau(path: str) -> TPolynomial:
    doc = _read_document(path)
    record = doc if "terms" in doc else doc.get("tau")
    if not isinstance(record, dict):
        raise InputError(f"{path} holds no tau record")
    return PolynomialFormatter.from_record(record)


def load_curve(path: str, field: Optional[int] = None) -> CurveSpec:
    doc = _read_document(path)
    record = doc.get("curve", doc)
    return CurveSpec.from_record(_with_field(record, field))


def parse_partition(text: str) -> Partition:
    return PartitionFormatter.from_record(parse_integer_list(text))


def bi_series_record(series: BiSeries) -> Dict[str, Any]:
    return {
        "lo": series.lo,
        "hi": series.hi,
        "weight": series.weight,
        "coeffs": [[e, PolynomialFormatter.to_record(c)] for e, c in series.items()],
    }


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_tau(args: argparse.Namespace) -> Outcome:
    U = load_point(args.point, args.field)
    doc: Dict[str, Any] = {"command": "tau", "weight": args.weight, "method": args.method}
    taus = {}
    if args.method in ("schur", "both"):
        taus["schur"] = tau_expand(U, args.weight)
    if args.method in ("direct", "both"):
        taus["direct"] = tau_direct(U, args.weight, args.chart)
    tau = next(iter(taus.values()))
    doc["tau"] = PolynomialFormatter.to_record(tau)
    if U.field.characteristic == 0:
        doc["schur_coefficients"] = PolynomialFormatter.schur_records(schur_expansion(tau), U.field)
    agree = True
    if len(taus) == 2:
        agree = taus["schur"] == taus["direct"]
        doc["agree"] = agree
        if not agree:
            logger.warning("tau: Schur expansion and direct determinant disagree")
    return doc, agree


def cmd_pluecker(args: argparse.Namespace) -> Outcome:
    U = load_point(args.point, args.field)
    coordinates = U.pluecker_coordinates(args.max_weight)
    return {
        "command": "pluecker",
        "max_weight": args.max_weight,
        "coordinates": PolynomialFormatter.schur_records(coordinates, U.field),
    }, True


def cmd_ba(args: argparse.Namespace) -> Outcome:
    U = load_point(args.point, args.field)
    doc: Dict[str, Any] = {"command": "ba", "weight": args.weight}
    if args.structure:
        terms = ba_structure(U, args.count, args.weight)
        doc["structure"] = [
            {
                "pole_order": term.pole_order,
                "member": SeriesFormatter.to_record(term.member),
                "coefficient": PolynomialFormatter.to_record(term.coefficient),
                "leading_weight": term.leading_weight,
            }
            for term in terms
        ]
        return doc, True
    window = (args.zlo, args.zhi)
    series = ba_hat(U, args.weight, window) if args.hat else ba(U, args.weight, window)
    doc["window"] = list(window)
    doc["series"] = bi_series_record(series)
    return doc, True


def cmd_check(args: argparse.Namespace) -> Outcome:
    handlers: Dict[str, Callable[[argparse.Namespace], Any]] = {
        "bilinear": _check_bilinear,
        "kp": _check_kp,
        "moduli": _check_moduli,
        "unit": _check_unit,
        "algebra": _check_algebra,
    }
    report = handlers[args.check](args)
    doc = {"command": "check"}
    doc.update(report.to_record())
    return doc, report.passed


def _check_bilinear(args: argparse.Namespace):
    U = load_point(args.point, args.field)
    U2 = load_point(args.point2, args.field) if args.point2 else U
    residue = bilinear_residue(U, U2, args.weight, args.method or "direct")
    return residue_report("bilinear", residue, args.weight, args.point)


def _tau_source(args: argparse.Namespace, weight: int, genus: Optional[int] = None) -> TPolynomial:
    if args.tau:
        return load_tau(args.tau)
    if not args.point:
        raise InputError("Either --point or --tau is required")
    U = load_point(args.point, args.field)
    if genus is not None:
        require_genus(U, genus)
    return tau_expand(U, weight)


def _check_kp(args: argparse.Namespace):
    tau = _tau_source(args, args.max_weight + 1)
    return kp_scan(tau, args.max_weight, progress=args.progress, point=args.point or args.tau)


def _check_moduli(args: argparse.Namespace):
    g = args.genus
    if args.method:
        residue = moduli_residue(load_point(args.point, args.field), g, args.max_weight, args.method)
        return residue_report("moduli", residue, args.max_weight, args.point)
    tau = _tau_source(args, args.max_weight + 1 + g, genus=g)
    return moduli_scan(tau, g, args.max_weight, progress=args.progress, point=args.point or args.tau)


def _check_unit(args: argparse.Namespace):
    g = args.genus
    if args.method:
        residue = unit_residue(load_point(args.point, args.field), g, args.max_weight, args.method)
        return residue_report("unit", residue, args.max_weight, args.point)
    tau = _tau_source(args, max(args.max_weight + 1 - g, 0), genus=g)
    return unit_scan(tau, g, args.max_weight, progress=args.progress, point=args.point or args.tau)


def _check_algebra(args: argparse.Namespace):
    return algebra_check(load_point(args.point, args.field), args.bound)


def cmd_kp_op(args: argparse.Namespace) -> Outcome:
    l1, l2 = parse_partition(args.l1), parse_partition(args.l2)
    return {
        "command": "kp-op",
        "l1": PartitionFormatter.to_record(l1),
        "l2": PartitionFormatter.to_record(l2),
        "operator": OperatorFormatter.to_record(kp_operator(l1, l2)),
    }, True


def cmd_krichever(args: argparse.Namespace) -> Outcome:
    curve = load_curve(args.curve, args.field)
    U = krichever_map(curve, args.depth, args.precision)
    doc = {"command": "krichever", "curve": curve.to_record(), "point": U.to_record()}
    if curve.kind == "superelliptic":
        doc["genus"] = curve.genus
    return doc, True


def cmd_gaps(args: argparse.Namespace) -> Outcome:
    U = load_point(args.point, args.field)
    doc = {"command": "gaps", "index": U.index}
    doc.update(gaps_and_genus(U).to_record())
    return doc, True


def cmd_perp(args: argparse.Namespace) -> Outcome:
    U = load_point(args.point, args.field)
    dual = U.perp(args.depth, args.precision)
    return {"command": "perp", "point": dual.to_record()}, True


def cmd_addition(args: argparse.Namespace) -> Outcome:
    U = load_point(args.point, args.field)
    x = parse_rational_list(args.x)
    result = addition_formula(U, args.n, x, args.weight, args.chart)
    field = U.field
    return {
        "command": "addition",
        "n": args.n,
        "x": [RationalFormatter.format(field, field.convert(v)) for v in x],
        "lhs": SeriesFormatter.to_record(result.lhs),
        "rhs": SeriesFormatter.to_record(result.rhs),
        "ratio": None if result.ratio is None else RationalFormatter.format(field, result.ratio),
        "proportional": result.proportional,
    }, result.proportional


def cmd_reconstruct(args: argparse.Namespace) -> Outcome:
    U = load_point(args.point, args.field)
    presentation = reconstruct_algebra(U, args.bound)
    doc = {"command": "reconstruct"}
    doc.update(presentation.to_record())
    return doc, True


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    precision = get_precision_config()
    checks = get_check_config()
    parser = argparse.ArgumentParser(prog=APP_METADATA["name"], description=APP_METADATA["description"])
    parser.add_argument("--version", action="version", version=APP_METADATA["version"])
    parser.add_argument("--field", type=int, default=None, help="Override the field characteristic of inputs")
    parser.add_argument("--verbose", action="store_true", help="Debug logging on stderr")
    parser.add_argument("--progress", action="store_true", help="Progress bars for diagram scans")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tau", help="tau-function coefficients of a point")
    p.add_argument("--point", required=True)
    p.add_argument("--weight", type=int, default=precision["default_weight"])
    p.add_argument("--method", choices=("schur", "direct", "both"), default="schur")
    p.add_argument("--chart", choices=("exp", "additive"), default="exp")
    p.set_defaults(handler=cmd_tau)

    p = sub.add_parser("pluecker", help="Nonzero Plücker coordinates")
    p.add_argument("--point", required=True)
    p.add_argument("--max-weight", type=int, default=precision["default_weight"])
    p.set_defaults(handler=cmd_pluecker)

    p = sub.add_parser("ba", help="Baker-Akhiezer function or its structure expansion")
    p.add_argument("--point", required=True)
    p.add_argument("--weight", type=int, default=precision["default_weight"])
    p.add_argument("--zlo", type=int, default=-precision["default_weight"])
    p.add_argument("--zhi", type=int, default=2)
    p.add_argument("--hat", action="store_true", help="tau-multiplied function (any stratum)")
    p.add_argument("--structure", action="store_true")
    p.add_argument("--count", type=int, default=4, help="Structure terms to certify")
    p.set_defaults(handler=cmd_ba)

    p = sub.add_parser("check", help="Bilinear, KP, moduli, unit or algebra checks")
    p.add_argument("check", choices=("bilinear", "kp", "moduli", "unit", "algebra"))
    p.add_argument("--point")
    p.add_argument("--point2")
    p.add_argument("--tau")
    p.add_argument("--weight", type=int, default=checks["default_weight"])
    p.add_argument("--max-weight", type=int, default=checks["default_weight"])
    p.add_argument("--genus", type=int, default=0)
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--method", choices=METHODS, default=None,
                   help="Residue form instead of the operator scan")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("kp-op", help="Dump the KP generating operator of a diagram pair")
    p.add_argument("--l1", default="")
    p.add_argument("--l2", default="")
    p.set_defaults(handler=cmd_kp_op)

    p = sub.add_parser("krichever", help="Point of a superelliptic curve or frame")
    p.add_argument("--curve", required=True)
    p.add_argument("--depth", type=int, default=precision["default_depth"])
    p.add_argument("--precision", type=int, default=precision["default_precision"])
    p.set_defaults(handler=cmd_krichever)

    p = sub.add_parser("gaps", help="Gap sequence, genus and pole semigroup")
    p.add_argument("--point", required=True)
    p.set_defaults(handler=cmd_gaps)

    p = sub.add_parser("perp", help="Orthogonal complement under the residue pairing")
    p.add_argument("--point", required=True)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--precision", type=int, default=None)
    p.set_defaults(handler=cmd_perp)

    p = sub.add_parser("addition", help="Addition formula at Miwa points")
    p.add_argument("--point", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", required=True, help="Comma separated rationals")
    p.add_argument("--weight", type=int, default=None)
    p.add_argument("--chart", choices=("exp", "additive"), default="exp")
    p.set_defaults(handler=cmd_addition)

    p = sub.add_parser("reconstruct", help="Presentation of the algebra of a point")
    p.add_argument("--point", required=True)
    p.add_argument("--bound", type=int, required=True)
    p.set_defaults(handler=cmd_reconstruct)
    return parser


def configure_logging(verbose: bool) -> None:
    logging.config.dictConfig(get_logging_config())
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    if args.field is not None:
        try:
            FieldSpec(args.field)
        except InputError as e:
            logger.error("%s", e)
            return EXIT_CODES["error"]
    try:
        doc, passed = args.handler(args)
    except SatoError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_CODES["error"]
    except Exception:
        logger.exception("Unexpected failure in %s", args.command)
        return EXIT_CODES["error"]
    doc.setdefault("schema_version", IO_CONFIG["schema_version"])
    sys.stdout.write(DocumentFormatter.dumps(doc) + "\n")
    return EXIT_CODES["ok"] if passed else EXIT_CODES["check_failed"]


if __name__ == "__main__":
    sys.exit(main())
