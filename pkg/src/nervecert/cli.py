"""Command line entry point: ``certify``.

Exit codes: 0 success with at least one unconditional vanishing entry,
3 success without one, 1 parse or validation failure, 2 internal check
failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from .certify import certify_problem, exit_code, problem_from_corpus, problem_from_input, self_test
from .corpus import CORPUS_NAMES
from .errors import InternalCheckFailure, ParseError, UnknownCorpusName, ValidationError
from .io import load_input

EXIT_OK, EXIT_INVALID, EXIT_INTERNAL, EXIT_NO_UNCONDITIONAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(
        prog="certify",
        description="Check an amenable-cover instance and report which comparison maps vanish.",
    )
    p.add_argument("file", nargs="?", help="input JSON document")
    p.add_argument("--format", choices=("json", "text"), default="json", help="report format (default json)")
    p.add_argument("--self-test", action="store_true", help="run the built-in corpus assertions")
    p.add_argument("--corpus", metavar="NAME", help=f"certify a built-in instance ({', '.join(CORPUS_NAMES)})")
    p.add_argument("--max-subdiv", type=int, metavar="N", help="subdivision budget for the nerve map")
    p.add_argument("--no-nerve-map", action="store_true", help="skip the nerve map and its homology ranks")
    p.add_argument("--tie-break", choices=("least", "greatest"), help="element choice for the nerve map")
    p.add_argument("--output-dir", metavar="DIR", help="also write the report into DIR")
    return p


def _write_output(args, name, text):
    if not args.output_dir:
        return
    os.makedirs(args.output_dir, exist_ok=True)
    stem = os.path.splitext(os.path.basename(name))[0] or "report"
    ext = "json" if args.format == "json" else "txt"
    with open(os.path.join(args.output_dir, f"{stem}.{ext}"), "w", encoding="utf-8") as fh:
        fh.write(text)


def _run_self_test(args):
    results = self_test()
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name}" + (f"  [{r.detail}]" if r.detail and not r.passed else ""))
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} self-test assertions passed")
    return EXIT_OK if failed == 0 else EXIT_INTERNAL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.self_test:
        return _run_self_test(args)
    if bool(args.file) == bool(args.corpus):
        print("certify: give exactly one of an input file or --corpus NAME", file=sys.stderr)
        return EXIT_INVALID
    if args.max_subdiv is not None and args.max_subdiv < 0:
        print("certify: --max-subdiv must be >= 0", file=sys.stderr)
        return EXIT_INVALID
    try:
        if args.corpus:
            problem, name = problem_from_corpus(args.corpus), args.corpus
        else:
            problem, name = problem_from_input(load_input(args.file)), args.file
        report = certify_problem(
            problem,
            compute_nerve_map=False if args.no_nerve_map else None,
            max_subdiv=args.max_subdiv,
            tie_break=args.tie_break,
        )
    except (ParseError, ValidationError, UnknownCorpusName) as exc:
        msg = exc.args[0] if isinstance(exc, UnknownCorpusName) else str(exc)
        print(f"certify: {type(exc).__name__}: {msg}", file=sys.stderr)
        return EXIT_INVALID
    except InternalCheckFailure as exc:
        print(f"certify: internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    text = report.to_json() if args.format == "json" else report.to_text()
    sys.stdout.write(text)
    _write_output(args, name, text)
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
