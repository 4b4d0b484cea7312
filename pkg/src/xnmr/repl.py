"""Interactive top loop and batch command line.

::

    $ xnmr game.lp
    xnmr> ?- win(X).
    win(1): false
    win(2): true
    xnmr> :mode brave
    mode: brave
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, replace
from typing import TextIO

from . import __version__
from .bridge import emit_xgf
from .engine import DEFAULT_MAX_MODELS, Mode, QueryResult, query_answer
from .errors import ResourceLimitExceeded, SafetyError, XnmrError
from .grounder import ResourceLimits
from .syntax import Program, parse_program, parse_query

PROMPT = "xnmr> "

HELP = """\
commands:
  ?- <query>.          answer a query in the current mode (the '?-' is optional)
  :load <path>         replace the program with the clauses in <path>
  :add <clause>        append one clause to the program
  :mode <m>            set the mode: wfs, brave, cautious or models
  :max <n>             list at most <n> models (currently {max})
  :residual <query>    print the residual program of <query> as XGF
  :models <query>      list partial stable models of <query>
  :help                show this text
  :quit                leave"""


@dataclass(frozen=True)
class Session:
    program: Program = Program()
    mode: Mode = Mode.MODELS
    max_models: int = DEFAULT_MAX_MODELS
    limits: ResourceLimits = ResourceLimits()
    last_result: QueryResult | None = None
    # outcome of the last command: routes its output to stdout or stderr
    ok: bool = True
    running: bool = True


def format_model(model: frozenset[str]) -> str:
    return "{" + ", ".join(sorted(model)) + "}"


def render_result(result: QueryResult, list_models: bool | None = None) -> str:
    """Verdict lines, then (in models mode) the partial stable models."""
    lines = []
    if not result.answers:
        lines.append("no answers")
    listing = result.mode is Mode.MODELS if list_models is None else list_models
    for ans in result.answers:
        lines.append(f"{ans.text}: {ans.label}")
        if listing and ans.verdict == "undefined":
            lines.append(f"  holds in: {_model_numbers(ans.holds_in)}")
            lines.append(f"  fails in: {_model_numbers(ans.fails_in)}")
    has_residual = len(result.residual.atoms) > 0
    if result.mode is not Mode.WFS and has_residual and not result.models:
        lines.append("no stable completion")
    if listing and (has_residual or list_models):
        for i, m in enumerate(result.models, 1):
            lines.append(f"model {i}: {format_model(m)}")
        if not result.models_complete:
            lines.append(f"more models exist (showing {len(result.models)}; see :max)")
    return "\n".join(lines)


def _model_numbers(indexes: tuple[int, ...]) -> str:
    return " ".join(str(i + 1) for i in indexes) if indexes else "-"


def execute_command(session: Session, line: str) -> tuple[Session, str]:
    """Run one input line; never raises for malformed input."""
    ok = replace(session, ok=True)
    bad = replace(session, ok=False)
    text = line.strip()
    if not text or text.startswith("%"):
        return ok, ""
    if text.startswith(":"):
        cmd, _, arg = text.partition(" ")
        arg = arg.strip()
        handler = _COMMANDS.get(cmd)
        if handler is None:
            return bad, f"unknown command {cmd} (try :help)"
        try:
            return handler(ok, arg)
        except XnmrError as err:
            return bad, str(err)
    try:
        result = _run_query(session, text, session.mode)
    except XnmrError as err:
        return bad, str(err)
    return replace(ok, last_result=result), render_result(result)


def _run_query(session: Session, text: str, mode: Mode) -> QueryResult:
    return query_answer(session.program, parse_query(text), mode, session.limits, session.max_models)


def _cmd_load(s: Session, arg: str) -> tuple[Session, str]:
    if not arg:
        return replace(s, ok=False), "usage: :load <path>"
    try:
        with open(arg, encoding="utf-8") as fh:
            source = fh.read()
    except (OSError, UnicodeDecodeError):
        return replace(s, ok=False), f"cannot read {arg}"
    program = parse_program(source)
    return replace(s, program=program, last_result=None), f"loaded {arg}: {len(program)} rules"


def _cmd_add(s: Session, arg: str) -> tuple[Session, str]:
    clause = parse_program(arg)
    if len(clause) != 1:
        return replace(s, ok=False), "usage: :add <one clause>"
    program = s.program + clause
    return replace(s, program=program, last_result=None), f"added: {clause.rules[0]}"


def _cmd_mode(s: Session, arg: str) -> tuple[Session, str]:
    try:
        mode = Mode(arg)
    except ValueError:
        return replace(s, ok=False), "usage: :mode wfs|brave|cautious|models"
    return replace(s, mode=mode), f"mode: {mode.value}"


def _cmd_max(s: Session, arg: str) -> tuple[Session, str]:
    try:
        n = int(arg)
    except ValueError:
        n = 0
    if n < 1:
        return replace(s, ok=False), "usage: :max <positive integer>"
    return replace(s, max_models=n), f"max models: {n}"


def _cmd_residual(s: Session, arg: str) -> tuple[Session, str]:
    result = _run_query(s, arg, Mode.WFS)
    return replace(s, last_result=result), emit_xgf(result.residual).rstrip("\n")


def _cmd_models(s: Session, arg: str) -> tuple[Session, str]:
    result = _run_query(s, arg, Mode.MODELS)
    if not result.models and not len(result.residual.atoms):
        # everything decided: the only partial stable model is the true part
        true_texts = frozenset(t for t in result.ground.texts(result.wfs.true_set) if not t.startswith("__"))
        result = replace(result, models=(true_texts,))
    return replace(s, last_result=result), render_result(result, list_models=True)


def _cmd_help(s: Session, arg: str) -> tuple[Session, str]:
    return s, HELP.format(max=s.max_models)


def _cmd_quit(s: Session, arg: str) -> tuple[Session, str]:
    return replace(s, running=False), ""


_COMMANDS = {
    ":load": _cmd_load,
    ":add": _cmd_add,
    ":mode": _cmd_mode,
    ":max": _cmd_max,
    ":residual": _cmd_residual,
    ":models": _cmd_models,
    ":help": _cmd_help,
    ":quit": _cmd_quit,
}


def repl(session: Session, stdin: TextIO, stdout: TextIO, stderr: TextIO, prompt: bool) -> Session:
    while session.running:
        if prompt:
            stdout.write(PROMPT)
            stdout.flush()
        line = stdin.readline()
        if not line:
            break
        session, out = execute_command(session, line)
        if out:
            print(out, file=stdout if session.ok else stderr)
    return session


# -- command line -------------------------------------------------------------


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="xnmr",
        description="Explore normal logic programs: well-founded answers and their stable completions.",
    )
    parser.add_argument("files", nargs="*", metavar="FILE", help="program files (.lp)")
    parser.add_argument("--query", "-q", help="answer this query and exit")
    parser.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.MODELS.value)
    parser.add_argument("--max-models", type=_positive, default=DEFAULT_MAX_MODELS)
    parser.add_argument("--emit-residual", metavar="PATH", help="write the residual program of --query as XGF")
    parser.add_argument("--max-ground-atoms", type=_positive, default=ResourceLimits().max_ground_atoms)
    parser.add_argument("--batch", action="store_true", help="never start the interactive loop")
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging on stderr")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


EXIT_OK, EXIT_USAGE, EXIT_SAFETY, EXIT_LIMIT = 0, 1, 2, 3


def run_batch(argv: list[str] | None = None, stdin: TextIO | None = None,
              stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as err:
        print(f"xnmr: {err}", file=stderr)
        return EXIT_USAGE
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, stream=stderr, format="%(name)s: %(message)s")
    if args.emit_residual and not args.query:
        print("xnmr: --emit-residual requires --query", file=stderr)
        return EXIT_USAGE

    session = Session(
        mode=Mode(args.mode),
        max_models=args.max_models,
        limits=ResourceLimits(args.max_ground_atoms),
    )
    try:
        program = Program()
        for path in args.files:
            try:
                with open(path, encoding="utf-8") as fh:
                    source = fh.read()
            except (OSError, UnicodeDecodeError):
                print(f"cannot read {path}", file=stderr)
                return EXIT_USAGE
            try:
                program = program + parse_program(source)
            except XnmrError as err:
                print(f"{path}: {err}", file=stderr)
                return _exit_code(err)
        session = replace(session, program=program)

        if args.query is not None:
            result = query_answer(program, parse_query(args.query), session.mode,
                                  session.limits, session.max_models)
            print(render_result(result), file=stdout)
            if args.emit_residual:
                try:
                    with open(args.emit_residual, "w", encoding="ascii", newline="\n") as fh:
                        fh.write(emit_xgf(result.residual))
                except OSError as err:
                    print(f"cannot write {args.emit_residual}: {err.strerror}", file=stderr)
                    return EXIT_USAGE
            return EXIT_OK
    except XnmrError as err:
        print(str(err), file=stderr)
        return _exit_code(err)

    if not args.batch:
        repl(session, stdin, stdout, stderr, prompt=stdin.isatty())
    return EXIT_OK


def _exit_code(err: Exception) -> int:
    if isinstance(err, SafetyError):
        return EXIT_SAFETY
    if isinstance(err, ResourceLimitExceeded):
        return EXIT_LIMIT
    return EXIT_USAGE


def main() -> None:
    sys.exit(run_batch())
