"""Command line: decide, split, and certify from JSON documents.

Exit codes: 0 success with a positive decision, 1 a negative decision
with a concrete witness in the output, 2 malformed or invalid input.
All output is a single JSON document on stdout with sorted keys, so a
repeated run is byte-identical; timing appears only under --timing.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Optional

from . import jsonio
from .cohomology import equivariant_section_exists, tate_cohomology
from .colimits import (
    CaseTwoEvidence,
    counterexample_tower,
    direct_limit_split,
    divisible_tower,
    limit_no_section_certificate,
    stabilizing_tower,
)
from .demos import DEMOS
from .errors import InputError, KummerError, NotExactError
from .fixtures import divisible_case_one_evidence, doomed_divisible_evidence
from .groups import GroupElement
from .matrices import smith_normal_form
from .sequences import (
    check_exact,
    dualize_sequence,
    is_pure,
    pontryagin_dual,
    section_exists,
)
from .towers import (
    CoKummerTower,
    KummerTower,
    dual_of_tower,
    dual_tower,
    dual_tower_split,
    sigma_kummer_tower,
    tower_split,
    validate_co_tower,
    validate_tower,
)

__all__ = ["main"]


def _read_document(args) -> object:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        path = Path(args.input)
        if not path.exists():
            raise InputError(f"input file not found: {args.input}")
        text = path.read_text()
    return jsonio.loads_checked(text)


def _maybe_witness(payload: dict, witness) -> dict:
    if isinstance(witness, GroupElement):
        payload["witness"] = jsonio.encode_element(witness)
    return payload


def _cmd_snf(args) -> tuple[dict, int]:
    mat = jsonio.decode_matrix(_read_document(args), "$")
    dec = smith_normal_form(mat)
    return {
        "diagonal": [str(d) for d in dec.diagonal],
        "s": jsonio.encode_matrix(dec.S),
        "u": jsonio.encode_matrix(dec.U),
        "v": jsonio.encode_matrix(dec.V),
        "u_inv": jsonio.encode_matrix(dec.U_inv),
        "v_inv": jsonio.encode_matrix(dec.V_inv),
    }, 0


def _cmd_group(args) -> tuple[dict, int]:
    grp = jsonio.decode_group(_read_document(args), "$")
    return {
        "invariant_factors": [str(d) for d in grp.invariant_factors],
        "free_rank": grp.free_rank,
        "order": jsonio.encode_int(grp.order),
        "exponent": jsonio.encode_int(grp.exponent),
    }, 0


def _cmd_seq_check(args) -> tuple[dict, int]:
    f, g = jsonio.decode_seq(_read_document(args), "$")
    try:
        seq = check_exact(f, g)
    except NotExactError as exc:
        payload = {"exact": False, "condition": exc.condition,
                   "pure": False, "split": False}
        return _maybe_witness(payload, exc.witness), 1
    certificate = is_pure(seq)
    section = section_exists(seq)
    payload = {"exact": True, "pure": bool(certificate),
               "split": section is not None}
    if certificate.failure is not None:
        _maybe_witness(payload, certificate.failure)
    if section is not None:
        payload["section"] = jsonio.encode_section(section)
    return payload, 0 if (certificate and section is not None) else 1


def _cmd_seq_split(args) -> tuple[dict, int]:
    f, g = jsonio.decode_seq(_read_document(args), "$")
    try:
        seq = check_exact(f, g)
    except NotExactError as exc:
        payload = {"split": False, "exact": False,
                   "condition": exc.condition}
        return _maybe_witness(payload, exc.witness), 1
    section = section_exists(seq)
    if section is not None:
        return {"split": True, "exact": True,
                "section": jsonio.encode_section(section)}, 0
    payload = {"split": False, "exact": True}
    certificate = is_pure(seq)
    _maybe_witness(payload, certificate.failure)
    return payload, 1


def _cmd_tower_validate(args) -> tuple[dict, int]:
    tower = jsonio.decode_tower(_read_document(args))
    if isinstance(tower, CoKummerTower):
        report = validate_co_tower(tower, jobs=args.jobs)
    else:
        report = validate_tower(tower, jobs=args.jobs)
    payload = {
        "valid": report.valid,
        "levels": report.levels,
        "violations": [
            _maybe_witness({"level": v.level, "check": v.check,
                            "message": v.message}, v.witness)
            for v in report.violations
        ],
    }
    return payload, 0 if report.valid else 1


def _cmd_tower_split(args) -> tuple[dict, int]:
    tower = jsonio.decode_tower(_read_document(args))
    if isinstance(tower, CoKummerTower):
        section = dual_tower_split(tower)
    else:
        section = tower_split(tower)
    return {"split": True, "level": tower.n,
            "section": jsonio.encode_section(section)}, 0


def _cmd_tower_generate(args) -> tuple[dict, int]:
    if args.sigma is not None:
        doc = jsonio.loads_checked(args.sigma)
    else:
        doc = _read_document(args)
    model = jsonio.decode_sigma(doc)
    levels = args.n if args.n is not None else 2
    if levels < 1:
        raise InputError("--n must be at least 1")
    return jsonio.encode_tower(sigma_kummer_tower(model, levels)), 0


def _cmd_counterexample(args) -> tuple[dict, int]:
    p = args.p if args.p is not None else 2
    depth = args.depth if args.depth is not None else 4
    cert = limit_no_section_certificate(counterexample_tower(p), depth)
    payload = {
        "p": cert.p,
        "depth": cert.depth,
        "divisibility_verified": cert.divisibility_verified,
        "heights_cross_checked": [[lvl, bad] for lvl, bad
                                  in cert.heights_cross_checked],
        "compatibility": [[lvl, solvable] for lvl, solvable
                          in cert.compatibility],
        "inference": list(cert.inference),
        "valid": cert.valid,
    }
    return payload, 0 if cert.valid else 1


_FAMILIES = {
    "stabilizing": lambda p, n0: stabilizing_tower(p, n0),
    "divisible": lambda p, n0: divisible_tower(p),
    "counterexample": lambda p, n0: counterexample_tower(p),
}


def _cmd_limit_split(args) -> tuple[dict, int]:
    doc = _read_document(args)
    if not isinstance(doc, dict):
        raise InputError("$: expected an object")
    family = doc.get("family")
    if family not in _FAMILIES:
        raise InputError(f"$.family: expected one of "
                         f"{sorted(_FAMILIES)}, got {family!r}")
    p = jsonio.decode_int(doc.get("p", 2), "$.p")
    case = jsonio.decode_int(doc.get("case", 2), "$.case")
    level = jsonio.decode_int(doc.get("level", 2), "$.level")
    n0 = jsonio.decode_int(doc.get("n0", 2), "$.n0")
    tower = _FAMILIES[family](p, n0)
    if case == 2:
        evidence = CaseTwoEvidence(level=level)
    elif case == 1:
        precision = (args.precision if args.precision is not None
                     else doc.get("precision"))
        precision = (jsonio.decode_int(precision, "$.precision")
                     if precision is not None else None)
        if family == "divisible":
            evidence = divisible_case_one_evidence(tower, level, precision)
        elif family == "counterexample":
            evidence = doomed_divisible_evidence(tower, level)
        else:
            raise InputError(
                f"$.case: no case-1 decomposition is known for the "
                f"{family} family")
    else:
        raise InputError(f"$.case: expected 1 or 2, got {case}")
    result = direct_limit_split(tower, evidence)
    return {
        "family": family,
        "case": result.case,
        "level": result.level,
        "section": jsonio.encode_section(result.section),
        "notes": list(result.notes),
    }, 0


def _cmd_dual(args) -> tuple[dict, int]:
    doc = _read_document(args)
    if not isinstance(doc, dict):
        raise InputError("$: expected an object")
    kind = doc.get("kind")
    if kind == "group":
        grp = jsonio.decode_group(doc.get("value"), "$.value")
        return {"kind": "group",
                "value": jsonio.encode_group(pontryagin_dual(grp))}, 0
    if kind == "hom":
        hom = jsonio.decode_hom(doc.get("value"), "$.value")
        return {"kind": "hom",
                "value": jsonio.encode_hom(pontryagin_dual(hom))}, 0
    if kind == "seq":
        f, g = jsonio.decode_seq(doc.get("value"), "$.value")
        seq = check_exact(f, g)
        return {"kind": "seq",
                "value": jsonio.encode_seq(dualize_sequence(seq))}, 0
    if kind == "tower":
        tower = jsonio.decode_tower(doc.get("value"), "$.value")
        if isinstance(tower, KummerTower):
            return {"kind": "tower",
                    "value": jsonio.encode_tower(dual_tower(tower))}, 0
        return {"kind": "tower",
                "value": jsonio.encode_tower(dual_of_tower(tower))}, 0
    raise InputError(f"$.kind: expected group, hom, seq or tower, "
                     f"got {kind!r}")


def _cmd_gmod_cohomology(args) -> tuple[dict, int]:
    module = jsonio.decode_gmodule(_read_document(args))
    tate = tate_cohomology(module)
    minus = [str(d) for d in tate.minus_one.group.invariant_factors]
    zero = [str(d) for d in tate.zero.group.invariant_factors]
    return {
        "minus_one": minus,
        "zero": zero,
        "one": minus,
        "two": zero,
        "trivial": tate.minus_one.group.is_trivial
        and tate.zero.group.is_trivial,
    }, 0


def _cmd_gmod_split(args) -> tuple[dict, int]:
    doc = _read_document(args)
    if not isinstance(doc, dict):
        raise InputError("$: expected an object")
    if "p" not in doc:
        raise InputError("$: missing field 'p'")
    p = jsonio.decode_int(doc["p"], "$.p")
    seq = jsonio.decode_gmodule_seq(doc)
    section = equivariant_section_exists(seq, p)
    plain = section_exists(seq.sequence)
    payload = {"equivariant": section is not None,
               "plain": plain is not None}
    if section is not None:
        payload["section"] = jsonio.encode_matrix(section.hom.matrix)
    return payload, 0 if section is not None else 1


def _cmd_demo(args) -> tuple[dict, int]:
    fn = DEMOS[args.name]
    kwargs = {}
    if args.name in ("main-lemma", "dual-lemma"):
        if args.seed is not None:
            kwargs["seed"] = args.seed
        if args.name == "main-lemma" and args.jobs is not None:
            kwargs["jobs"] = args.jobs
    if args.name in ("counterexample", "direct-limit", "chris"):
        if args.p is not None:
            kwargs["p"] = args.p
    if args.name == "counterexample" and args.depth is not None:
        kwargs["depth"] = args.depth
    ok, report = fn(**kwargs)
    return report, 0 if ok else 1


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", default="-",
                        help="path to a JSON document, or - for stdin")
    common.add_argument("--pretty", action="store_true",
                        help="indent the output document")
    common.add_argument("--jobs", type=int, default=None,
                        help="parallel workers for per-level checks")
    common.add_argument("--depth", type=int, default=None,
                        help="probe depth for limit certificates")
    common.add_argument("--precision", type=int, default=None,
                        help="p-power precision for case-1 evidence")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for randomized demos")
    common.add_argument("--timing", action="store_true",
                        help="include wall-clock seconds in the output")

    parser = argparse.ArgumentParser(
        prog="kummer",
        description="decide exactness, purity and splitting of sequences "
                    "of finitely generated abelian groups")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("snf", parents=[common]).set_defaults(handler=_cmd_snf)
    sub.add_parser("group", parents=[common]).set_defaults(handler=_cmd_group)
    sub.add_parser("seq-check", parents=[common]
                   ).set_defaults(handler=_cmd_seq_check)
    sub.add_parser("seq-split", parents=[common]
                   ).set_defaults(handler=_cmd_seq_split)
    sub.add_parser("tower-validate", parents=[common]
                   ).set_defaults(handler=_cmd_tower_validate)
    sub.add_parser("tower-split", parents=[common]
                   ).set_defaults(handler=_cmd_tower_split)

    gen = sub.add_parser("tower-generate", parents=[common])
    gen.add_argument("--sigma", default=None,
                     help="inline sigma model JSON {p, r, M}")
    gen.add_argument("--n", type=int, default=None,
                     help="number of tower levels (default 2)")
    gen.set_defaults(handler=_cmd_tower_generate)

    ce = sub.add_parser("counterexample", parents=[common])
    ce.add_argument("--p", type=int, default=None)
    ce.set_defaults(handler=_cmd_counterexample)

    sub.add_parser("limit-split", parents=[common]
                   ).set_defaults(handler=_cmd_limit_split)
    sub.add_parser("dual", parents=[common]).set_defaults(handler=_cmd_dual)
    sub.add_parser("gmod-cohomology", parents=[common]
                   ).set_defaults(handler=_cmd_gmod_cohomology)
    sub.add_parser("gmod-split", parents=[common]
                   ).set_defaults(handler=_cmd_gmod_split)

    demo = sub.add_parser("demo", parents=[common])
    demo.add_argument("name", choices=sorted(DEMOS))
    demo.add_argument("--p", type=int, default=None)
    demo.set_defaults(handler=_cmd_demo)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        payload, code = args.handler(args)
    except KummerError as exc:
        error = {"kind": type(exc).__name__, "message": str(exc)}
        check = getattr(exc, "check", None)
        if check is not None:
            error["check"] = check
        component = getattr(exc, "component", None)
        if component is not None:
            error["component"] = component
        payload, code = {"error": error}, 2
    doc = jsonio.document(payload)
    if args.timing:
        doc["timing"] = {"seconds": round(time.perf_counter() - started, 6)}
    print(jsonio.dumps(doc, args.pretty))
    return code


if __name__ == "__main__":
    sys.exit(main())
