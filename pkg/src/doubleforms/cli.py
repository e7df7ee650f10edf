"""Command-line entry point: ``invariants``, ``positivity`` and ``check``.

Exit codes: 0 success, 1 a property or cross-check failed, 2 bad input or
configuration, 3 a computation error.  Errors are also reported as a JSON
object so scripted callers can tell them apart.
"""
from __future__ import annotations

import argparse
import json
import sys

from .errors import ConfigError, DimensionExceeded, DoubleFormError, InvalidParameters, ParseError, SymmetryConflict
from .positivity import DEFAULT_SAMPLES
from .reporting import RunConfig, dumps, error_document, parse_input, run_check, run_report
from .suites import SUITES

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_COMPUTE = 0, 1, 2, 3
_INPUT_ERRORS = (ParseError, SymmetryConflict, ConfigError, DimensionExceeded, InvalidParameters)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="doubleforms", description="Curvature invariants of double forms.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_input=True):
        if with_input:
            src = p.add_mutually_exclusive_group(required=True)
            src.add_argument("--input", help="JSON file with a model spec or an entry list ('-' for stdin)")
            src.add_argument("--model", help="inline JSON model spec, e.g. '{\"model\": \"constant\", \"n\": 4, \"lambda\": 1}'")
            p.add_argument("--q-max", type=int, default=None, help="largest q for h_2q and T_2q (default n // 2)")
            p.add_argument("--p", type=int, nargs="+", default=[1], help="degrees for classifiers and p-curvature")
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="write the JSON report here instead of stdout")

    common(sub.add_parser("invariants", help="h_2q, Einstein–Lovelock spectra, Avez checks, classifiers"))
    common(sub.add_parser("positivity", help="invariants plus sampled positivity conditions"))
    check = sub.add_parser("check", help="run seeded property suites")
    common(check, with_input=False)
    check.add_argument("--suite", default="all", help=f"one of {', '.join(SUITES)} or all")
    return parser


def _emit(doc: dict, out: str | None) -> None:
    text = dumps(doc) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_input(args) -> object:
    if args.model is not None:
        return args.model
    if args.input == "-":
        return sys.stdin.buffer.read()
    try:
        with open(args.input, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {args.input}: {exc.strerror}") from None


def _config(args) -> RunConfig:
    if args.command == "check":
        return RunConfig(command="check", tol=args.tol, samples=args.samples, seed=args.seed,
                         out=args.out, suite=args.suite)
    model = None
    if args.model is not None:
        try:
            model = json.loads(args.model)
        except json.JSONDecodeError as exc:
            raise ParseError(f"--model is not valid JSON: {exc}") from None
    return RunConfig(command=args.command, input=args.input, model=model, q_max=args.q_max, p=tuple(args.p),
                     tol=args.tol, samples=args.samples, seed=args.seed, out=args.out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config(args)
        if args.command == "check":
            doc = run_check(config)
            for prop in doc["properties"]:
                status = "PASS" if prop["passed"] else "FAIL"
                print(f"{status} {prop['suite']}.{prop['name']} worst={prop['worst_residual']:.3e} "
                      f"trials={prop['trials']}", file=sys.stderr if not args.out else sys.stdout)
        else:
            R = parse_input(_read_input(args))
            doc = run_report(R, config, positivity=args.command == "positivity")
    except _INPUT_ERRORS as exc:
        _emit(error_document(exc), args.out)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DoubleFormError as exc:
        _emit(error_document(exc), args.out)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    _emit(doc, args.out)
    return EXIT_OK if doc["passed"] else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
