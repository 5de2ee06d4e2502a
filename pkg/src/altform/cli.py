"""Command-line interface.

Subcommands::

    altform invariants -i FILE [--format json|text]
    altform check -i FILE [--suite all|direct|isotropic|qp|tran]
    altform classify -i FILE -j FILE [--object qsigma|qprime|pf]
    altform selftest [--seed N]

Exit status: 0 when every evaluated check passes, 1 on any failing check,
2 on usage errors and malformed or invalid input files.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .errors import AltformError, ParseError
from .forms import pfister_isometric, tsq_isometric
from .harness import (compute_invariants, dumps_report, instance_report, load_instance,
                      report_failed, run_selftest, suite_classification)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SUITE_CHOICES = {
    "all": ("direct", "isotropic", "qp", "tran"),
    "direct": ("direct",),
    "isotropic": ("isotropic",),
    "qp": ("qp",),
    "tran": ("tran",),
}


class InputError(Exception):
    """Raised for unreadable or invalid instance files; maps to exit 2."""


def _load(path: str):
    try:
        return load_instance(path)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from exc
    except AltformError as exc:
        raise InputError(f"{path}: invalid instance: {exc}") from exc


def format_text(report: dict) -> str:
    lines = [
        f"instance: {report['instance_id']}",
        f"dim S: {report['dim_S']}",
        "q_sigma: <" + ", ".join(report["q_sigma"]) + ">_q",
        "q'_sigma: <" + ", ".join(report["q_prime"]) + ">_q",
        f"direct: {'yes' if report['direct'] else 'no'}",
        f"S field test: {report['s_field']}",
        f"q_sigma anisotropic: {'yes' if report['q_anisotropic'] else 'no'}",
    ]
    if report.get("pf_slots") is not None:
        lines.append("Pf: <<" + ", ".join(report["pf_slots"]) + ">>")
        lines.append(f"Pf anisotropic: {'yes' if report['pf_anisotropic'] else 'no'}")
    for name, frag in sorted(report.get("suites", {}).items()):
        lines.append(f"suite {name}: {frag['verdict']}")
    return "\n".join(lines) + "\n"


def cmd_invariants(args: argparse.Namespace) -> int:
    inst = _load(args.input)
    report = instance_report(inst, ())
    sys.stdout.write(format_text(report) if args.format == "text" else dumps_report(report))
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    inst = _load(args.input)
    report = instance_report(inst, SUITE_CHOICES[args.suite])
    sys.stdout.write(dumps_report(report))
    return EXIT_FAIL if report_failed(report) else EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    a, b = _load(args.input), _load(args.other)
    if a.field != b.field:
        raise InputError("instances are defined over different fields")
    inv_a, inv_b = compute_invariants(a.algebra), compute_invariants(b.algebra)
    out: dict = {"instances": [a.instance_id, b.instance_id], "object": args.object}
    if args.object == "qsigma":
        out["isometric"] = tsq_isometric(inv_a.data.q_form, inv_b.data.q_form)
    elif args.object == "qprime":
        out["isometric"] = tsq_isometric(inv_a.data.q_prime_form, inv_b.data.q_prime_form)
    else:
        if inv_a.phi is None or inv_b.phi is None:
            raise InputError("Pf needs totally decomposable instances")
        if inv_a.phi.n != inv_b.phi.n:
            raise InputError("Pf comparison needs algebras of the same degree")
        out["isometric"] = pfister_isometric(inv_a.phi.pf, inv_b.phi.pf)
    if inv_a.phi is not None and inv_b.phi is not None and inv_a.phi.n == inv_b.phi.n:
        out["consistency"] = suite_classification(a.algebra, b.algebra, False, inv_a, inv_b)
    sys.stdout.write(dumps_report(out))
    return EXIT_FAIL if report_failed(out) else EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    report = run_selftest(args.seed)
    text = dumps_report(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report["all_pass"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="altform",
        description="Alternator forms of orthogonal involutions in characteristic two.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("invariants", help="print S, q_sigma, q'_sigma, directness and Pf")
    s.add_argument("-i", "--input", required=True, help="instance JSON file")
    s.add_argument("--format", choices=("json", "text"), default="json")
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("check", help="run verification suites on one instance")
    s.add_argument("-i", "--input", required=True, help="instance JSON file")
    s.add_argument("--suite", choices=tuple(SUITE_CHOICES), default="all")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("classify", help="compare two instances over the same field")
    s.add_argument("-i", "--input", required=True, help="first instance JSON file")
    s.add_argument("-j", "--other", required=True, help="second instance JSON file")
    s.add_argument("--object", choices=("qsigma", "qprime", "pf"), default="qsigma")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("selftest", help="regression fixtures plus seeded randomized suites")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--output", help="write the report here instead of stdout")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
