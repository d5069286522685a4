"""Command line entry point: ``kout <subcommand> ...``.

Exit status is 0 on success, 1 on invalid parameters or usage, 2 on I/O
failure. Data goes to stdout (or ``--out``); progress goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

from . import experiment as ex
from .oracle import InstanceTooLargeError, exact_connectivity
from .params import ModelParams, ParamError
from .theory import bound_report, k_star

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")


def _range(text: str) -> list[int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected START:STOP, got {text!r}")
    return list(range(lo, hi + 1))


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file; flags override its values")
    p.add_argument("--n", type=int)
    p.add_argument("--mu", type=_floats, help="class probabilities, e.g. 0.9,0.06,0.04")
    p.add_argument("--k", type=_ints, help="selection counts, e.g. 1,2,3")


def _add_output(p: argparse.ArgumentParser, default_format: str) -> None:
    p.add_argument("--format", choices=("csv", "json"), default=default_format)
    p.add_argument("--out", help="output path (default: stdout)")


def _add_mc(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, dest="master_seed")
    p.add_argument("--confidence", type=float, dest="confidence_level")
    p.add_argument("--outputs", type=lambda s: s.split(","),
                   help="subset of " + ",".join(ex.OUTPUT_FIELDS))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kout", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="progress messages on stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="Monte Carlo for one configuration")
    _add_params(p)
    _add_mc(p)
    _add_output(p, "json")

    p = sub.add_parser("sweep", help="Monte Carlo over a K_r or n range")
    _add_params(p)
    _add_mc(p)
    p.add_argument("--vary", choices=("k_r", "n"))
    g = p.add_mutually_exclusive_group()
    g.add_argument("--values", type=_ints)
    g.add_argument("--range", type=_range, dest="values", metavar="START:STOP")
    _add_output(p, "csv")

    p = sub.add_parser("bounds", help="closed-form bounds, no sampling")
    _add_params(p)
    p.add_argument("--out")

    p = sub.add_parser("kstar", help="smallest K_r with a non-trivial one-law bound")
    p.add_argument("--mu-tilde", type=_floats, required=True, dest="mu_tilde")
    p.add_argument("--out")

    p = sub.add_parser("oracle", help="exact probabilities by enumeration (tiny n)")
    _add_params(p)
    p.add_argument("--out")

    p = sub.add_parser("figure1", help="empirical connectivity vs K_3 with the upper bound")
    p.add_argument("--trials", type=int, default=ex.DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=ex.FIGURE1_SEED, dest="master_seed")
    _add_output(p, "csv")
    return parser


def _load_doc(args) -> dict:
    doc: dict = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            doc = json.load(fh)
        if not isinstance(doc, dict):
            raise ParamError("config file must hold a JSON object")
    for key in ("n", "mu", "k", "trials", "master_seed", "confidence_level", "outputs"):
        value = getattr(args, key, None)
        if value is not None:
            doc[key] = value
    return doc


def _params(args) -> ModelParams:
    return ModelParams.from_mapping(_load_doc(args))


def _experiment(args, sweep: bool) -> ex.ExperimentConfig:
    doc = _load_doc(args)
    if sweep:
        spec = dict(doc.get("sweep") or {})
        if args.vary is not None:
            spec["vary"] = args.vary
        if args.values is not None:
            spec["values"] = args.values
            spec.pop("start", None)
            spec.pop("stop", None)
        if not spec:
            raise ParamError("sweep needs --vary with --values/--range, or a 'sweep' entry")
        doc["sweep"] = spec
    else:
        doc.pop("sweep", None)
    return ex.ExperimentConfig.from_mapping(doc)


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _run(args) -> str:
    if args.command in ("simulate", "sweep", "figure1"):
        if args.command == "figure1":
            config = ex.figure1_config(args.trials, args.master_seed)
        else:
            config = _experiment(args, sweep=args.command == "sweep")
        results = ex.run(config)
        if args.format == "csv":
            return ex.results_to_csv(results)
        if args.command == "simulate":
            return ex.result_to_json(results[0])
        return ex.results_to_json(results)
    if args.command == "bounds":
        return _dump(bound_report(_params(args)).to_dict())
    if args.command == "kstar":
        rows = ["mu_tilde,k_star"]
        rows += [f"{m!r},{k_star(m)}" for m in args.mu_tilde]
        return "\n".join(rows) + "\n"
    if args.command == "oracle":
        params = _params(args)
        doc = {**params.to_mapping(), **exact_connectivity(params).to_dict()}
        return _dump(doc)
    raise UsageError(f"unknown command {args.command!r}")


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    logger = logging.getLogger("kout")
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger.addHandler(handler)
    logger.setLevel(logging.INFO if args.verbose else logging.WARNING)
    try:
        text = _run(args)
        _emit(text, getattr(args, "out", None))
    except (ParamError, InstanceTooLargeError, UsageError, ValueError, TypeError) as exc:
        print(f"kout: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"kout: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    finally:
        logger.removeHandler(handler)
    return EXIT_OK


cli_main = main

if __name__ == "__main__":
    sys.exit(main())
