"""Command-line front end.

Loads datasets, runs any single computation or the full verification suite,
and emits a canonical JSON report on standard output with a human summary on
standard error.  Exit codes: 0 all checks passed, 1 a mathematical check
failed, 2 bad input or usage.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import __version__
from .actions import verify_u_homotopy
from .complexes import Flavor, check_d_squared, default_window
from .data import (
    InvalidInput,
    MonopoleData,
    ParseError,
    SchemaError,
    generate_instances,
    parse,
    reverse_orientation,
    serialize,
    validate,
)
from .duality import DualityMismatch, duality_check
from .homology import GradedAbelianGroup, graded_homology
from .intlinalg import AbelianGroupInvariants, SparseIntMatrix
from .sequences import MismatchError, check_les_hat, check_les_main, hf_red
from .spectral import ComparisonMismatch, spectral_pages, structure_theorem

__all__ = ["main", "run", "verify_all"]

_U_FLAVORS = (Flavor.INFINITY, Flavor.MINUS, Flavor.PLUS)


# ---------------------------------------------------------------------------
# JSON documents
# ---------------------------------------------------------------------------

def _invariants_doc(g: AbelianGroupInvariants) -> dict:
    return {"free_rank": g.free_rank, "torsion": list(g.torsion)}


def _groups_doc(groups: dict[int, AbelianGroupInvariants]) -> dict:
    return {str(n): _invariants_doc(groups[n]) for n in sorted(groups)}


def _tail_doc(tail) -> dict | None:
    if tail is None:
        return None
    return {"even": _invariants_doc(tail.even),
            "odd": _invariants_doc(tail.odd),
            "verified": tail.verified}


def _graded_doc(graded: GradedAbelianGroup) -> dict:
    return {"window": list(graded.window),
            "groups": _groups_doc(graded.groups),
            "tail_above": _tail_doc(graded.tail_above),
            "tail_below": _tail_doc(graded.tail_below)}


def _matrix_doc(mat: SparseIntMatrix) -> dict:
    return {"rows": mat.rows, "cols": mat.cols, "dense": mat.to_dense()}


def _exactness_doc(report) -> dict:
    return {
        "window": list(report.window),
        "all_exact": report.all_exact(),
        "nodes": [{
            "degree": node.degree,
            "node": node.node,
            "exact": node.exact,
            "image": _invariants_doc(node.image),
            "kernel": _invariants_doc(node.kernel),
            "witness": (None if node.witness is None
                        else {"reason": node.witness[0],
                              "vector": list(node.witness[1])}),
        } for node in report.nodes],
    }


def _dataset_hash(data: MonopoleData) -> str:
    return hashlib.sha256(serialize(data)).hexdigest()


# ---------------------------------------------------------------------------
# the verification suite
# ---------------------------------------------------------------------------

def _infinity_pattern_ok(graded: GradedAbelianGroup) -> bool:
    z_one = AbelianGroupInvariants(1)
    zero = AbelianGroupInvariants(0)
    for n, g in graded.groups.items():
        if g != (z_one if n % 2 == 0 else zero):
            return False
    for tail in (graded.tail_above, graded.tail_below):
        if tail is None or not tail.verified:
            return False
        if tail.even != z_one or tail.odd != zero:
            return False
    return True


def verify_all(data: MonopoleData,
               window: tuple[int, int] | None = None) -> dict:
    """Run the whole checklist on one valid dataset.

    Squared differentials for all five flavors, the periodic pattern of the
    infinity flavor, both long exact sequences, the reduced-group
    comparison, the periodicity homotopy, the structure theorem, and the
    duality package.  Returns a dict with one entry per check and an
    aggregate verdict; raises InvalidInput on invalid data.
    """
    report = validate(data)
    if not report.ok:
        raise InvalidInput(f"invalid data: {report.violations[0]}")
    lo, hi = window if window is not None else default_window(data)
    checks: list[dict] = []

    ok = all(check_d_squared(data, flavor, (lo, hi)) for flavor in Flavor)
    checks.append({"name": "d-squared", "ok": ok})

    checks.append({"name": "infinity-pattern",
                   "ok": _infinity_pattern_ok(
                       graded_homology(data, Flavor.INFINITY, (lo, hi)))})

    main_report = check_les_main(data, (lo, hi))
    checks.append({"name": "les-main", "ok": main_report.all_exact()})

    try:
        hf_red(data, (lo, hi))
        checks.append({"name": "reduced-comparison", "ok": True})
    except MismatchError as err:
        checks.append({"name": "reduced-comparison", "ok": False,
                       "degree": err.degree})

    ok = all(verify_u_homotopy(data, flavor, (lo, hi))
             for flavor in _U_FLAVORS)
    checks.append({"name": "u-homotopy", "ok": ok})

    hat_report = check_les_hat(data, (lo, hi))
    checks.append({"name": "les-hat",
                   "ok": (hat_report.all_exact()
                          and hat_report.biconditional_holds)})

    try:
        checks.append({"name": "structure",
                       "ok": structure_theorem(data).matches})
    except ComparisonMismatch as err:
        checks.append({"name": "structure", "ok": False,
                       "degree": err.degree})

    try:
        checks.append({"name": "duality",
                       "ok": duality_check(data, (lo, hi)).ok})
    except DualityMismatch as err:
        checks.append({"name": "duality", "ok": False, "degree": err.degree})

    return {"window": [lo, hi], "checks": checks,
            "ok": all(check["ok"] for check in checks)}


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_validate(data, args):
    report = validate(data)
    results = {"ok": report.ok,
               "violations": [{"rule": rule, "pair": list(pair), "value": v}
                              for (rule, pair, v) in report.violations]}
    return results, report.ok


def _cmd_homology(data, args):
    graded = graded_homology(data, Flavor(args.flavor), args.window)
    results = {"flavor": args.flavor, "homology": _graded_doc(graded)}
    return results, True


def _cmd_les(data, args):
    window = args.window or default_window(data)
    if args.sequence == "main":
        report = check_les_main(data, window)
        results = {"sequence": "main", "exactness": _exactness_doc(report)}
        ok = report.all_exact()
        try:
            results["reduced"] = _graded_doc(hf_red(data, window))
        except MismatchError as err:
            results["reduced_mismatch"] = {
                "degree": err.degree,
                "cokernel": _invariants_doc(err.cokernel),
                "kernel": _invariants_doc(err.kernel)}
            ok = False
        return results, ok
    report = check_les_hat(data, window)
    results = {"sequence": "hat", "exactness": _exactness_doc(report),
               "hat_nonzero": report.hat_nonzero,
               "plus_nonzero": report.plus_nonzero,
               "biconditional_holds": report.biconditional_holds}
    return results, report.all_exact() and report.biconditional_holds


def _cmd_spectral(data, args):
    gradings = [p.grading for p in data.points] + [0]
    cap = 2 * (max(gradings) - min(gradings)) + 3
    pages = args.pages if args.pages is not None else min(3, cap)
    results = {"flavor": "plus", "pages": []}
    for page in spectral_pages(data, Flavor.PLUS, pages):
        cells = [{"p": p, "q": q, "group": _invariants_doc(g)}
                 for (p, q), g in sorted(page.cells.items())]
        diffs = [{"p": p, "q": q, **_matrix_doc(mat)}
                 for (p, q), mat in sorted(page.differentials.items())
                 if not mat.is_zero()]
        results["pages"].append(
            {"r": page.r, "cells": cells, "differentials": diffs})
    return results, True


def _cmd_structure(data, args):
    try:
        result = structure_theorem(data)
    except ComparisonMismatch as err:
        return {"matches": False, "degree": err.degree,
                "predicted": _invariants_doc(err.predicted),
                "actual": _invariants_doc(err.actual)}, False
    results = {
        "matches": result.matches,
        "window": list(result.window),
        "predicted": _groups_doc(result.predicted),
        "actual": _groups_doc(result.actual),
        "delta": {str(n): _matrix_doc(result.delta[n])
                  for n in sorted(result.delta)},
        "t_terms": {str(k): _invariants_doc(result.t_terms[k])
                    for k in sorted(result.t_terms)},
    }
    return results, result.matches


def _cmd_duality(data, args):
    window = args.window or default_window(data)
    try:
        report = duality_check(data, window)
    except DualityMismatch as err:
        return {"ok": False, "degree": err.degree,
                "dual_value": _invariants_doc(err.dual_value),
                "reversed_value": _invariants_doc(err.reversed_value)}, False
    results = {"ok": report.ok,
               "adjoint": report.adjoint,
               "pairings_perfect": report.pairings_perfect,
               "double_reversal": report.double_reversal,
               "plus_vs_minus": _groups_doc(report.plus_vs_minus),
               "minus_vs_plus": _groups_doc(report.minus_vs_plus),
               "hat_vs_hat": _groups_doc(report.hat_vs_hat)}
    return results, report.ok


def _cmd_reverse(data, args):
    reversed_doc = json.loads(serialize(reverse_orientation(data)))
    return {"dataset": reversed_doc}, True


def _cmd_verify_all(data, args):
    results = verify_all(data, args.window)
    return results, results["ok"]


def _cmd_generate(args):
    attempts = max(50, 20 * args.count)
    instances = generate_instances(args.seed, args.size, attempts)[:args.count]
    docs = [json.loads(serialize(d)) for d in instances]
    digest = hashlib.sha256(
        b"".join(serialize(d) for d in instances)).hexdigest()
    results = {"requested": args.count, "count": len(docs),
               "datasets": docs}
    return results, digest


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _window_type(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(
            f"window must look like lo:hi, got {text!r}")
    try:
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"window bounds must be integers, got {text!r}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monofloer",
        description="exact equivariant monopole Floer homology engine")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", default=None,
                        help="write the JSON report to PATH instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    def add_file(cmd):
        cmd.add_argument("file", help="dataset JSON file")

    def add_window(cmd):
        cmd.add_argument("--window", type=_window_type, default=None,
                         metavar="LO:HI")

    add_file(command("validate", help="check the coefficient identities"))

    cmd = command("homology", help="graded homology of one flavor")
    cmd.add_argument("--flavor", required=True,
                     choices=[f.value for f in Flavor])
    add_window(cmd)
    add_file(cmd)

    cmd = command("les", help="long exact sequence checks")
    cmd.add_argument("sequence", choices=["main", "hat"])
    add_window(cmd)
    add_file(cmd)

    cmd = command("spectral", help="filtration spectral sequence")
    cmd.add_argument("--pages", type=int, default=None, metavar="R")
    add_file(cmd)

    add_file(command("structure", help="structure theorem comparison"))

    cmd = command("duality", help="orientation-reversal duality")
    add_window(cmd)
    add_file(cmd)

    add_file(command("reverse", help="emit the reversed dataset"))

    cmd = command("verify-all", help="run the whole checklist")
    add_window(cmd)
    add_file(cmd)

    cmd = command("generate", help="emit a seeded dataset corpus")
    cmd.add_argument("--seed", type=int, required=True)
    cmd.add_argument("--size", type=int, required=True)
    cmd.add_argument("--count", type=int, required=True)

    return parser


_HANDLERS = {
    "validate": _cmd_validate,
    "homology": _cmd_homology,
    "les": _cmd_les,
    "spectral": _cmd_spectral,
    "structure": _cmd_structure,
    "duality": _cmd_duality,
    "reverse": _cmd_reverse,
    "verify-all": _cmd_verify_all,
}


def _load(path: str) -> MonopoleData:
    with open(path, "rb") as handle:
        return parse(handle.read())


def _window_of(args) -> tuple[int, int] | None:
    return getattr(args, "window", None)


def _emit(report: dict, out_path: str | None) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _glue_window(argv: list[str]) -> list[str]:
    # "--window -8:8" has a value starting with a dash, which argparse would
    # read as an option; fold it into the "--window=-8:8" form
    out: list[str] = []
    tokens = iter(argv)
    for token in tokens:
        if token == "--window":
            value = next(tokens, None)
            if value is None:
                out.append(token)
            else:
                out.append(f"--window={value}")
        else:
            out.append(token)
    return out


def run(argv: list[str]) -> int:
    """Execute one subcommand; returns the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(_glue_window(argv))
    except SystemExit as err:
        return 0 if err.code in (0, None) else 2

    started = time.perf_counter()
    try:
        if args.command == "generate":
            results, digest = _cmd_generate(args)
            name = f"corpus-seed-{args.seed}"
            window = None
            ok = True
        else:
            data = _load(args.file)
            results, ok = _HANDLERS[args.command](data, args)
            name = data.name
            digest = _dataset_hash(data)
            window = _window_of(args)
            if window is None and args.command != "reverse":
                window = default_window(data)
    except (ParseError, SchemaError, InvalidInput, OSError) as err:
        sys.stderr.write(f"error: {err}\n")
        return 2

    report = {
        "command": args.command,
        "engine_version": __version__,
        "dataset_name": name,
        "dataset_hash": digest,
        "window": list(window) if window is not None else None,
        "results": results,
    }
    _emit(report, args.out)

    elapsed = time.perf_counter() - started
    verdict = "PASS" if ok else "FAIL"
    sys.stderr.write(
        f"{args.command} {name}: {verdict} ({elapsed:.3f} s)\n")
    if args.command == "verify-all":
        for check in results["checks"]:
            state = "ok" if check["ok"] else "FAILED"
            sys.stderr.write(f"  {check['name']}: {state}\n")
    return 0 if ok else 1


def main(argv: list[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)
