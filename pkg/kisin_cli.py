#!/usr/bin/env python3
"""
kisinlab - command line workbench

Reads module definition files, runs the library operations on them and
prints canonical module files, tables, DOT diagrams and scenario reports.
Exit codes: 0 success, 1 mathematical failure, 2 input or precision error.
"""

import argparse
import dataclasses
import json
import logging
import random
import sys
from pathlib import Path
from typing import Any, List, Optional, Sequence, TextIO

from kisinlab import __version__
from kisinlab.config_manager import ConfigManager, get_settings, set_settings
from kisinlab.error_handler import (
    EXIT_INPUT,
    EXIT_MATH,
    EXIT_OK,
    ErrorHandler,
    KisinError,
    install_global_exception_handler,
)
from kisinlab.field import field_params
from kisinlab.lattices import (
    METHODS,
    MaxMinResult,
    chain_bound,
    enumerate_fr,
    longest_chain,
    max_r,
    min_r,
    poset_csv,
    poset_dot,
)
from kisinlab.module_file import ModuleFile, emit_module, load_module, matrix_literals
from kisinlab.phi_module import PhiModule, dual, find_isomorphism, hom_space, validate
from kisinlab.scenarios import SCENARIOS, run_scenario, scenario_names
from kisinlab.simple import (
    SimpleSeq,
    build_module,
    classification_csv,
    enumerate_sequences,
    iso_simple,
    max_closed_form,
    min_closed_form,
    tame_weights,
    weights_from_t,
)
from kisinlab.utils import print_status, print_warning, setup_logging

logger = logging.getLogger("kisinlab.cli")


def parse_height(text: str) -> Optional[int]:
    """'inf' or a non-negative integer"""
    if text.strip().lower() in ("inf", "infinity"):
        return None
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("r must be >= 0")
    return value


def parse_word(text: str) -> List[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of integers, got {text!r}") from e


class KisinCLI:
    """Command implementations; each returns an exit code"""

    def __init__(self, json_output: bool = False, out: Optional[TextIO] = None):
        self.json_output = json_output
        self.out = out if out is not None else sys.stdout

    def emit(self, text: str = "") -> None:
        print(text, file=self.out)

    def emit_json(self, data: Any) -> None:
        self.emit(json.dumps(data, indent=2, ensure_ascii=False))

    def write_output(self, name: str, text: str) -> Path:
        """Write a result file; relative names go under the configured output_dir"""
        path = Path(name)
        if not path.is_absolute():
            path = Path(get_settings().output_dir) / path
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info("wrote %s", path)
        return path

    def _load_valid(self, path: str) -> Optional[PhiModule]:
        """Module from file, or None after printing the validation report"""
        m = load_module(path)
        report = validate(m)
        if report.passed:
            return m
        if self.json_output:
            self.emit_json(report.to_dict())
        else:
            self.emit(f"{path}: {report.summary}")
            ErrorHandler(stream=self.out).show_error_summary(report.as_errors())
        return None

    # module commands

    def validate(self, path: str) -> int:
        m = load_module(path)
        report = validate(m)
        if self.json_output:
            self.emit_json(report.to_dict())
        else:
            self.emit(report.summary)
            for check in report.checks:
                mark = "ok  " if check.passed else "FAIL"
                self.emit(f"  [{mark}] {check.name}: {check.message}")
            self.emit(emit_module(m).rstrip())
        return EXIT_OK if report.passed else EXIT_MATH

    def _max_min(self, path: str, method: str, maximal: bool, output: Optional[str]) -> int:
        m = self._load_valid(path)
        if m is None:
            return EXIT_MATH
        result: MaxMinResult = max_r(m, method) if maximal else min_r(m, method)
        name = "Max" if maximal else "Min"
        if output:
            self.write_output(output, emit_module(result.module))
        if self.json_output:
            self.emit_json({
                "operation": name,
                "method": result.method,
                "unchanged": result.is_identity,
                "lattice": result.lattice.describe(),
                "module": ModuleFile.from_module(result.module).to_dict(),
                "inclusion": matrix_literals(result.inclusion.mat),
            })
            return EXIT_OK
        self.emit(f"# {name}^r by {result.method}: {result.lattice.describe()}")
        self.emit(emit_module(result.module).rstrip())
        direction = "M -> Max" if maximal else "Min -> M"
        self.emit(f"# inclusion {direction}")
        for row in matrix_literals(result.inclusion.mat):
            self.emit("  " + json.dumps(row, ensure_ascii=False))
        return EXIT_OK

    def max(self, path: str, method: str = "auto", output: Optional[str] = None) -> int:
        return self._max_min(path, method, True, output)

    def min(self, path: str, method: str = "auto", output: Optional[str] = None) -> int:
        return self._max_min(path, method, False, output)

    def dual(self, path: str, output: Optional[str] = None) -> int:
        m = self._load_valid(path)
        if m is None:
            return EXIT_MATH
        d = dual(m)
        if output:
            self.write_output(output, emit_module(d))
        if self.json_output:
            self.emit_json(ModuleFile.from_module(d).to_dict())
        else:
            self.emit(emit_module(d).rstrip())
        return EXIT_OK

    def hom(self, path_a: str, path_b: str, iso: bool = False) -> int:
        a = self._load_valid(path_a)
        b = self._load_valid(path_b)
        if a is None or b is None:
            return EXIT_MATH
        basis = hom_space(a, b)
        data: dict = {"dimension": len(basis), "basis": [matrix_literals(g.mat) for g in basis]}
        if iso:
            found = find_isomorphism(a, b)
            data["isomorphism"] = {
                "status": found.status.value,
                "matrix": matrix_literals(found.morphism.mat) if found.morphism else None,
            }
        if self.json_output:
            self.emit_json(data)
            return EXIT_OK
        self.emit(f"dim_Fp Hom = {len(basis)}")
        for k, g in enumerate(basis):
            self.emit(f"f_{k} = {g.mat}")
        if iso:
            self.emit(f"isomorphism: {data['isomorphism']['status']}")
        return EXIT_OK

    def poset(self, path: str, dot: Optional[str] = None, csv_path: Optional[str] = None) -> int:
        m = self._load_valid(path)
        if m is None:
            return EXIT_MATH
        poset = enumerate_fr(m)
        if dot:
            self.write_output(dot, poset_dot(poset))
        if csv_path:
            self.write_output(csv_path, poset_csv(poset))
        summary = {
            "size": poset.size,
            "longest_chain": longest_chain(poset),
            "chain_bound": chain_bound(m),
            "max_index": poset.max_index,
            "min_index": poset.min_index,
            "standard_index": poset.standard_index,
            "elements": [lat.describe() for lat in poset.elements],
        }
        if self.json_output:
            self.emit_json(summary)
            return EXIT_OK
        self.emit(f"F^r: {poset.size} lattices, longest chain {summary['longest_chain']}"
                  f" (bound {summary['chain_bound']})")
        for i, lat in enumerate(poset.elements):
            tags = [t for t, idx in (("Max", poset.max_index), ("Min", poset.min_index),
                                     ("M", poset.standard_index)) if idx == i]
            self.emit(f"  {i}: {lat.describe()} {' '.join(tags)}".rstrip())
        return EXIT_OK

    # simple objects

    def simple(self, seq: SimpleSeq, action: str, other: Optional[List[int]] = None,
               max_d: int = 2) -> int:
        data: dict = {"n": list(seq.word)}
        if action == "info":
            data.update({
                "d": seq.d,
                "s": list(seq.s),
                "t": [str(t) for t in seq.t],
                "in_S": seq.in_s,
                "in_Smax": seq.in_smax,
                "in_Smin": seq.in_smin,
            })
        elif action in ("max", "min"):
            form = max_closed_form(seq) if action == "max" else min_closed_form(seq)
            data.update({action: list(form.seq.word), "q": list(form.q)})
        elif action == "weights":
            data.update({"tame_weights": list(tame_weights(seq)), "digits_of_t": list(weights_from_t(seq))})
        elif action == "iso":
            shift = iso_simple(seq, seq.with_word(other or []))
            data.update({"other": other, "isomorphic": shift is not None, "shift": shift})
        elif action == "module":
            self.emit(emit_module(build_module(seq)).rstrip())
            return EXIT_OK
        elif action == "table":
            if seq.r is None:
                self.emit("--table needs a finite r")
                return EXIT_INPUT
            self.out.write(classification_csv(list(enumerate_sequences(seq.field, seq.e, seq.r, max_d))))
            return EXIT_OK
        if self.json_output:
            self.emit_json(data)
        else:
            for key, value in data.items():
                self.emit(f"{key}: {value}")
        return EXIT_OK

    # scenarios

    def repro(self, name: Optional[str], list_only: bool = False) -> int:
        if list_only or not name:
            for key in scenario_names():
                self.emit(f"{key:<24} {SCENARIOS[key].description}")
            return EXIT_OK
        if name not in SCENARIOS:
            self.emit(f"unknown scenario {name!r}; try --list")
            return EXIT_INPUT
        result = run_scenario(name, random.Random(get_settings().random_seed))
        if self.json_output:
            self.emit_json(result.to_dict())
        else:
            self.emit(f"{result.name}: {result.description}")
            for check in result.checks:
                mark = "ok  " if check.ok else "FAIL"
                self.emit(f"  [{mark}] {check.label}: expected {check.expected}, got {check.actual}")
            for note in result.notes:
                self.emit(f"  - {note}")
            print_status(result.passed, f"scenario {result.name} {'passed' if result.passed else 'failed'}")
        return EXIT_OK if result.passed else EXIT_MATH


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--prec", type=int, default=None, help="working precision override (powers of u)")
    common.add_argument("--verbose", "-v", action="store_true", help="debug logging and tracebacks")
    common.add_argument("--config", default=None, help="configuration file (default: kisinlab_config.json)")

    parser = argparse.ArgumentParser(
        prog="kisinlab",
        description="Frobenius modules over k[[u]]: Max^r, Min^r, duality and simple objects",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Usage examples:
  %(prog)s validate module.json
  %(prog)s max module.json --json
  %(prog)s poset module.json --dot fr.dot --csv fr.csv
  %(prog)s simple --n 2,1 --p 2 --r 3 --max
  %(prog)s repro quotient-not-maximal
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("validate", parents=[common], help="check the object conditions")
    p.add_argument("path")

    for name, text in (("max", "greatest element of F^r"), ("min", "smallest element of F^r")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("path")
        p.add_argument("--method", choices=METHODS, default="auto")
        p.add_argument("-o", "--output", help="write the resulting module file here")

    p = sub.add_parser("dual", parents=[common], help="dual object")
    p.add_argument("path")
    p.add_argument("-o", "--output", help="write the dual module file here")

    p = sub.add_parser("hom", parents=[common], help="F_p-basis of Hom(a, b)")
    p.add_argument("path_a")
    p.add_argument("path_b")
    p.add_argument("--iso", action="store_true", help="also search for an isomorphism")

    p = sub.add_parser("poset", parents=[common], help="enumerate F^r")
    p.add_argument("path")
    p.add_argument("--dot", help="write the Hasse diagram in DOT")
    p.add_argument("--csv", dest="csv_path", help="write the element table as CSV")

    p = sub.add_parser("simple", parents=[common], help="simple objects M(n)")
    p.add_argument("--n", type=parse_word, required=True, help="period word, e.g. 2,1")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--f", type=int, default=1)
    p.add_argument("--e", type=int, default=1)
    p.add_argument("--r", type=parse_height, default=None, help="height bound or 'inf'")
    action = p.add_mutually_exclusive_group()
    action.add_argument("--info", dest="action", action="store_const", const="info")
    action.add_argument("--max", dest="action", action="store_const", const="max")
    action.add_argument("--min", dest="action", action="store_const", const="min")
    action.add_argument("--weights", dest="action", action="store_const", const="weights")
    action.add_argument("--module", dest="action", action="store_const", const="module",
                        help="print the module file of M(n)")
    action.add_argument("--iso", type=parse_word, metavar="LIST", help="compare with another word")
    action.add_argument("--table", type=int, metavar="MAX_D",
                        help="classification CSV of every word up to this period")

    p = sub.add_parser("repro", parents=[common], help="run a reproduction scenario")
    p.add_argument("name", nargs="?", help="scenario name, see --list")
    p.add_argument("--list", action="store_true", help="list the scenarios")
    return parser


def _apply_settings(args: argparse.Namespace) -> None:
    manager = ConfigManager(silent=True)
    settings = manager.load_settings(args.config)
    if args.prec is not None:
        settings = dataclasses.replace(settings, working_precision=args.prec)
    if args.json:
        settings = dataclasses.replace(settings, show_progress=False)
    set_settings(settings)
    setup_logging("DEBUG" if args.verbose else settings.log_level, settings.log_file)
    for problem in manager.get_errors():
        print_warning(f"{problem.message} ({problem.solution})")


def _dispatch(cli: KisinCLI, args: argparse.Namespace) -> int:
    if args.command == "validate":
        return cli.validate(args.path)
    if args.command == "max":
        return cli.max(args.path, args.method, args.output)
    if args.command == "min":
        return cli.min(args.path, args.method, args.output)
    if args.command == "dual":
        return cli.dual(args.path, args.output)
    if args.command == "hom":
        return cli.hom(args.path_a, args.path_b, args.iso)
    if args.command == "poset":
        return cli.poset(args.path, args.dot, args.csv_path)
    if args.command == "simple":
        seq = SimpleSeq(field_params(args.p, args.f), args.e, args.r, tuple(args.n))
        if args.iso is not None:
            return cli.simple(seq, "iso", other=args.iso)
        if args.table is not None:
            return cli.simple(seq, "table", max_d=args.table)
        return cli.simple(seq, args.action or "info")
    if args.command == "repro":
        return cli.repro(args.name, args.list)
    raise AssertionError(f"unhandled command {args.command}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return EXIT_INPUT
    _apply_settings(args)
    install_global_exception_handler()
    cli = KisinCLI(json_output=args.json)
    try:
        return _dispatch(cli, args)
    except KisinError as e:
        return ErrorHandler().handle_exception(e, verbose=args.verbose)
    except KeyboardInterrupt:
        print("\n⏹️ cancelled", file=sys.stderr)
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
