"""Command-line interface.

Exit status: 0 on success, 1 on a negative verdict (invalid model,
rejected proof, falsified formula, fuzz counterexample), 2 on usage
errors, including unreadable or malformed input files.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence, TextIO

from .model import ModelError, load_model, validate
from .proofkit.proof import (
    ConstantSpecification, CSError, Mode, ProofFormatError, check_proof, format_proof,
    parse_cs, parse_proof,
)
from .semantics import Evaluator, InvalidModelError
from .syntax import ParseError, parse_formula, print_formula

__all__ = ["main", "run", "build_parser"]


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e


def _model(path: str):
    try:
        return load_model(_read(path))
    except ModelError as e:
        raise UsageError(f"{path}: {e}") from e


def _formula(text: str, agents=None, allow_et: bool = False):
    try:
        return parse_formula(text, agents, allow_et=allow_et)
    except ParseError as e:
        raise UsageError(f"cannot parse formula: {e}") from e


def _cs(path: str | None, agents) -> ConstantSpecification:
    if path is None:
        return ConstantSpecification((), tuple(agents))
    try:
        return parse_cs(_read(path), agents)
    except (ProofFormatError, CSError) as e:
        raise UsageError(f"{path}: {e}") from e


def _proof(path: str):
    try:
        return parse_proof(_read(path))
    except ProofFormatError as e:
        raise UsageError(f"{path}: {e}") from e


# -- subcommands ------------------------------------------------------------------

def cmd_parse(args, out: TextIO) -> int:
    agents = args.agents.split(",") if args.agents else None
    texts = [args.expr] if args.expr is not None else [
        ln for ln in _read(args.file).splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    for text in texts:
        out.write(print_formula(_formula(text, agents, args.enable_et)) + "\n")
    return 0


def cmd_validate(args, out: TextIO) -> int:
    report = validate(_model(args.model))
    out.write(str(report) + "\n")
    for note in report.notes:
        out.write(f"note: {note}\n")
    return 1 if report else 0


def _evaluator(args, model) -> Evaluator:
    return Evaluator(model, waive_validation=args.waive_validation, enable_et=args.enable_et)


def cmd_eval(args, out: TextIO) -> int:
    model = _model(args.model)
    f = _formula(args.expr, model.agents, args.enable_et)
    try:
        value = _evaluator(args, model)(args.moment, args.leaf, f)
    except InvalidModelError as e:
        out.write(f"{e}\n")
        return 1
    except ModelError as e:
        raise UsageError(str(e)) from e
    out.write(f"{'true' if value else 'false'}\n")
    return 0 if value else 1


def cmd_valid(args, out: TextIO) -> int:
    model = _model(args.model)
    f = _formula(args.expr, model.agents, args.enable_et)
    try:
        bad = _evaluator(args, model).counterexample(f)
    except InvalidModelError as e:
        out.write(f"{e}\n")
        return 1
    except ModelError as e:
        raise UsageError(str(e)) from e
    if bad is None:
        out.write(f"valid: {print_formula(f)}\n")
        return 0
    out.write(f"not valid: {print_formula(f)} is false at ({bad[0]},{bad[1]})\n")
    return 1


def cmd_prove_check(args, out: TextIO) -> int:
    proof = _proof(args.proof)
    cs = _cs(args.cs, proof.agents)
    verdict = check_proof(proof, cs, Mode.PI_PRIME if args.pi_prime else Mode.PI)
    out.write(f"{verdict}\n")
    return 0 if verdict else 1


def cmd_prove_eliminate(args, out: TextIO) -> int:
    from .proofkit.s4elim import S4EliminationError, eliminate_s4
    proof = _proof(args.proof)
    cs = _cs(args.cs, proof.agents)
    try:
        result = eliminate_s4(proof, cs)
    except S4EliminationError as e:
        out.write(f"{e}\n")
        return 1
    text = format_proof(result)
    if args.output == "-":
        out.write(text)
    else:
        Path(args.output).write_text(text)
        out.write(f"wrote {args.output}: {len(proof)} -> {len(result)} lines, "
                  f"{proof.s4_steps()} S4 steps replaced\n")
    return 0


def cmd_fuzz(args, out: TextIO) -> int:
    from .harness.fuzz import FUZZ_AGENTS, soundness_fuzz
    cs = _cs(args.cs, FUZZ_AGENTS)
    report = soundness_fuzz(args.models, args.instances, args.seed, cs,
                            emit_models=args.emit_model is not None)
    out.write(report.text())
    if args.emit_model is not None and report.findings:
        target = Path(args.emit_model)
        target.mkdir(parents=True, exist_ok=True)
        for n, finding in enumerate(report.findings, start=1):
            path = target / f"counterexample-{n}-seed{finding.seed}.jstit"
            path.write_text(f"# {finding.line()}\n{finding.model_text}")
            out.write(f"wrote {path}\n")
    return 0 if report.ok else 1


def cmd_demo_prop1(args, out: TextIO) -> int:
    from .harness.demos import prop1_demo
    report = prop1_demo()
    out.write("\n".join(report.lines) + "\n")
    return 0 if report.ok else 1


def cmd_demo_fmp(args, out: TextIO) -> int:
    from .harness.demos import fmp_demo
    report = fmp_demo(args.models, args.seed)
    out.write("\n".join(report.lines()) + "\n")
    return 0 if report.ok else 1


# -- parser -------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="jstit", description="Justification stit logic toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("parse", help="print the canonical form of formulas")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("-e", dest="expr", help="formula text")
    src.add_argument("-f", dest="file", help="file with one formula per line")
    sp.add_argument("--agents", help="comma-separated agent set to check against")
    sp.add_argument("--enable-et", action="store_true", help="admit the E t extension")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("validate", help="check a model against the jstit constraints")
    sp.add_argument("model")
    sp.set_defaults(func=cmd_validate)

    for name, func, helptext in (("eval", cmd_eval, "truth at one moment/history pair"),
                                 ("valid", cmd_valid, "truth at every pair of a model")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("model")
        if name == "eval":
            sp.add_argument("-m", dest="moment", required=True)
            sp.add_argument("-l", dest="leaf", required=True, help="history, named by its leaf")
        sp.add_argument("-e", dest="expr", required=True, help="formula")
        sp.add_argument("--waive-validation", action="store_true")
        sp.add_argument("--enable-et", action="store_true")
        sp.set_defaults(func=func)

    prove = sub.add_parser("prove", help="proof checking and transformation")
    psub = prove.add_subparsers(dest="prove_command", required=True, parser_class=_Parser)
    sp = psub.add_parser("check", help="check a proof file")
    sp.add_argument("proof")
    sp.add_argument("--cs", help="constant specification file")
    sp.add_argument("--pi-prime", action="store_true", help="check in Pi' (A_S4 instead of S4)")
    sp.set_defaults(func=cmd_prove_check)
    sp = psub.add_parser("eliminate-s4", help="rewrite S4 steps with A_S4 axioms")
    sp.add_argument("proof")
    sp.add_argument("-o", dest="output", required=True, help="output file ('-' for stdout)")
    sp.add_argument("--cs", help="constant specification file")
    sp.set_defaults(func=cmd_prove_eliminate)

    sp = sub.add_parser("fuzz", help="soundness fuzzing on generated models")
    sp.add_argument("--models", type=int, default=200)
    sp.add_argument("--instances", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--cs", help="constant specification file")
    sp.add_argument("--emit-model", metavar="DIR", help="dump counterexample models into DIR")
    sp.set_defaults(func=cmd_fuzz)

    demo = sub.add_parser("demo", help="built-in demonstrations")
    dsub = demo.add_subparsers(dest="demo_command", required=True, parser_class=_Parser)
    sp = dsub.add_parser("prop1", help="dense-time countermodel")
    sp.set_defaults(func=cmd_demo_prop1)
    sp = dsub.add_parser("fmp", help="finite model property failure")
    sp.add_argument("--models", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_demo_fmp)
    return p


def run(argv: Sequence[str], out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(list(argv))
        return args.func(args, out)
    except UsageError as e:
        err.write(f"error: {e}\n")
        return 2


def main(argv: Sequence[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
