"""Query answering over the relevant program.

``query_answer`` chains grounding, the well-founded model, residual
extraction and (outside ``wfs`` mode) stable-model enumeration.  Models
are reported as partial stable models: the well-founded true atoms plus a
stable model of the residual, restricted to the query-relevant atoms.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .grounder import ANSWER_PREDICATE, GroundProgram, ResourceLimits, relevant_ground
from .solver import StableSolver
from .syntax import Program, Query, split_ground_atom
from .wfs import ResidualProgram, WfsResult, extract_residual, lift, well_founded

DEFAULT_MAX_MODELS = 10


class Mode(str, Enum):
    WFS = "wfs"
    BRAVE = "brave"
    CAUTIOUS = "cautious"
    MODELS = "models"


@dataclass(frozen=True)
class Answer:
    bindings: tuple[tuple[str, str | int], ...]
    text: str  # the query instantiated by ``bindings``
    verdict: str  # well-founded value: "true" | "false" | "undefined"
    label: str  # verdict as printed in the current mode
    holds_in: tuple[int, ...] = ()  # 0-based indexes into QueryResult.models
    fails_in: tuple[int, ...] = ()


@dataclass(frozen=True)
class QueryResult:
    query: Query
    mode: Mode
    answers: tuple[Answer, ...]
    models: tuple[frozenset[str], ...]
    # False when enumeration stopped at max_models with more models left
    models_complete: bool
    ground: GroundProgram
    wfs: WfsResult
    residual: ResidualProgram

    def count(self, verdict: str) -> int:
        return sum(1 for a in self.answers if a.verdict == verdict)

    @property
    def summary(self) -> dict[str, int]:
        return {
            "answers": len(self.answers),
            "true": self.count("true"),
            "false": self.count("false"),
            "undefined": self.count("undefined"),
            "models": len(self.models),
        }


def instantiate(query: Query, bindings: dict[str, str | int]) -> str:
    parts = []
    for lit in query.literals:
        atom = lit.atom
        if atom.args:
            args = ",".join(str(bindings[t.value]) if t.is_var else str(t.value) for t in atom.args)
            text = f"{atom.predicate}({args})"
        else:
            text = atom.predicate
        parts.append(f"not {text}" if lit.negated else text)
    return ", ".join(parts)


def _label(mode: Mode, verdict: str, holds: int, total: int) -> str:
    if verdict != "undefined" or mode in (Mode.WFS, Mode.MODELS):
        return verdict
    if mode is Mode.BRAVE:
        return "brave-true" if holds > 0 else "brave-false"
    return "cautious-true" if total > 0 and holds == total else "cautious-false"


def query_answer(
    program: Program,
    query: Query,
    mode: Mode | str = Mode.MODELS,
    limits: ResourceLimits | None = None,
    max_models: int | None = DEFAULT_MAX_MODELS,
) -> QueryResult:
    """Answer ``query`` against ``program``.

    ``max_models`` bounds the listing in ``models`` mode only; brave and
    cautious verdicts are computed over the complete set of models.
    """
    mode = Mode(mode)
    gp = relevant_ground(program, query, limits)
    w = well_founded(gp)
    rp = extract_residual(gp, w)

    residual_models: list[frozenset[int]] = []
    complete = True
    if mode is not Mode.WFS and len(rp.atoms):
        bound = max_models if mode is Mode.MODELS else None
        solver = StableSolver(rp)
        for m in solver:
            if bound is not None and len(residual_models) == bound:
                complete = False
                break
            residual_models.append(w.true_set | lift(rp, gp, m))

    variables = query.variables()
    answer_ids = sorted(gp.query_atoms)
    if not variables and not answer_ids:
        # ground query whose answer atom is not derivable at all
        return QueryResult(
            query, mode,
            (Answer((), str(query), "false", "false"),),
            (), complete, gp, w, rp,
        )

    answers = []
    for aid in answer_ids:
        _, values = split_ground_atom(gp.atoms.text(aid))
        bindings = dict(zip(variables, values))
        verdict = w.value(aid)
        holds = tuple(i for i, m in enumerate(residual_models) if aid in m)
        fails = tuple(i for i, m in enumerate(residual_models) if aid not in m)
        if verdict != "undefined":
            holds = fails = ()
        answers.append(Answer(
            tuple(bindings.items()),
            instantiate(query, bindings),
            verdict,
            _label(mode, verdict, len(holds), len(residual_models)),
            holds,
            fails,
        ))

    models = tuple(
        frozenset(t for t in gp.texts(m) if not t.startswith(ANSWER_PREDICATE))
        for m in residual_models
    )
    return QueryResult(query, mode, tuple(answers), models, complete, gp, w, rp)
