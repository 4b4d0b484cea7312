"""Stable model enumeration by propagation and chronological backtracking.

Propagation (:func:`expand`) combines forward inference, falsification of
atoms whose rules are all blocked, and falsification of the greatest
unfounded set.  Every total assignment reached by the search is re-checked
with the reduct test, so soundness never depends on the propagator.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import AbstractSet, Iterator

from .grounder import GroundProgram
from .wfs import gl_reduct_least_model

log = logging.getLogger(__name__)

UNLIMITED = None


class _PropState:
    """Rule counters consistent with the first ``processed`` trail entries."""

    __slots__ = ("unsettled", "dead", "alive", "processed")

    def __init__(self, unsettled, dead, alive, processed):
        self.unsettled = unsettled
        self.dead = dead
        self.alive = alive
        self.processed = processed


@dataclass(frozen=True)
class Assignment:
    """Three-valued assignment over atom ids ``1..n`` (index 0 unused).

    ``values[a]`` is ``True``, ``False`` or ``None`` (unknown).  ``trail``
    lists ``(atom, decision_level)`` in assignment order.
    """

    values: tuple[bool | None, ...]
    trail: tuple[tuple[int, int], ...] = ()
    level: int = 0
    # propagation counters left by expand(), reused by the next call
    _state: _PropState | None = field(default=None, compare=False, repr=False)

    @classmethod
    def empty(cls, n: int) -> Assignment:
        return cls((None,) * (n + 1))

    @classmethod
    def from_dict(cls, n: int, fixed: dict[int, bool]) -> Assignment:
        a = cls.empty(n)
        for atom, value in sorted(fixed.items()):
            a = a.assign(atom, value)
        return a

    def __getitem__(self, atom: int) -> bool | None:
        return self.values[atom]

    def assign(self, atom: int, value: bool) -> Assignment:
        if self.values[atom] is not None:
            raise ValueError(f"atom {atom} already assigned")
        vals = list(self.values)
        vals[atom] = value
        return Assignment(tuple(vals), self.trail + ((atom, self.level),), self.level, self._state)

    def decide(self, atom: int, value: bool) -> Assignment:
        deeper = Assignment(self.values, self.trail, self.level + 1, self._state)
        return deeper.assign(atom, value)

    @property
    def true_atoms(self) -> frozenset[int]:
        return frozenset(i for i, v in enumerate(self.values) if v is True)

    @property
    def unknown(self) -> list[int]:
        return [i for i in range(1, len(self.values)) if self.values[i] is None]

    @property
    def is_total(self) -> bool:
        return all(v is not None for v in self.values[1:])


@dataclass(frozen=True)
class Conflict:
    atom: int
    reason: str


@dataclass(frozen=True)
class StableModel:
    true_atoms: tuple[int, ...]

    def __iter__(self):
        return iter(self.true_atoms)

    def __len__(self) -> int:
        return len(self.true_atoms)

    def as_set(self) -> frozenset[int]:
        return frozenset(self.true_atoms)


def expand(rp: GroundProgram, a: Assignment) -> Assignment | Conflict:
    idx = rp.index
    rules = rp.rules
    vals = list(a.values)
    trail = list(a.trail)
    level = a.level
    queue: deque[int] = deque()

    st = a._state
    if st is not None and st.processed <= len(trail):
        # unsettled[ri]: body literals not yet satisfied; dead[ri]: body falsified
        unsettled, dead, alive = list(st.unsettled), list(st.dead), list(st.alive)
        queue.extend(atom for atom, _ in trail[st.processed:])
        fresh = False
    else:
        unsettled = list(idx.body_len)
        dead = [False] * len(rules)
        alive = [len(hs) for hs in idx.by_head]
        queue.extend(atom for atom, _ in trail)
        fresh = True

    def set_value(atom: int, value: bool, reason: str) -> Conflict | None:
        cur = vals[atom]
        if cur is None:
            vals[atom] = value
            trail.append((atom, level))
            queue.append(atom)
        elif cur is not value:
            return Conflict(atom, reason)
        return None

    if fresh:
        for atom in range(1, len(vals)):
            if alive[atom] == 0:
                c = set_value(atom, False, "no applicable rule")
                if c:
                    return c
        for ri, r in enumerate(rules):
            if unsettled[ri] == 0:
                c = set_value(r.head, True, "fact")
                if c:
                    return c

    killed = fresh
    while True:
        while queue:
            atom = queue.popleft()
            if vals[atom]:
                hit, block = idx.pos_occ[atom], idx.neg_occ[atom]
            else:
                hit, block = idx.neg_occ[atom], idx.pos_occ[atom]
            for ri in block:
                if dead[ri]:
                    continue
                dead[ri] = True
                killed = True
                h = rules[ri].head
                alive[h] -= 1
                if alive[h] == 0:
                    c = set_value(h, False, "no applicable rule")
                    if c:
                        return c
            for ri in hit:
                unsettled[ri] -= 1
                if unsettled[ri] == 0 and not dead[ri]:
                    c = set_value(rules[ri].head, True, "rule body true")
                    if c:
                        return c
        # support can only shrink when some rule body became false
        if not killed:
            break
        killed = False
        unfounded = _unfounded(rp, vals, dead)
        if not unfounded:
            break
        for atom in unfounded:
            c = set_value(atom, False, "unfounded")
            if c:
                return c
    state = _PropState(unsettled, dead, alive, len(trail))
    return Assignment(tuple(vals), tuple(trail), level, state)


def _unfounded(rp: GroundProgram, vals: list, dead: list[bool]) -> list[int]:
    """Non-false atoms in the greatest unfounded set.

    Computed as the complement of the atoms with non-circular support
    through rules whose bodies are not falsified.
    """
    idx = rp.index
    rules = rp.rules
    waiting = [len(r.pos) for r in rules]
    supported = [False] * len(vals)
    queue: deque[int] = deque()
    for ri, r in enumerate(rules):
        if not dead[ri] and waiting[ri] == 0 and not supported[r.head]:
            supported[r.head] = True
            queue.append(r.head)
    while queue:
        atom = queue.popleft()
        for ri in idx.pos_occ[atom]:
            waiting[ri] -= 1
            if waiting[ri] == 0 and not dead[ri]:
                h = rules[ri].head
                if not supported[h]:
                    supported[h] = True
                    queue.append(h)
    return [a for a in range(1, len(vals)) if not supported[a] and vals[a] is not False]


def is_stable_model(rp: GroundProgram, candidate: AbstractSet[int]) -> bool:
    return gl_reduct_least_model(rp, candidate) == frozenset(candidate)


class StableSolver:
    """Resumable enumeration of stable models over one program.

    Iterating the solver yields models in discovery order; the search
    state survives between ``next`` calls, so callers may stop early and
    resume later.
    """

    def __init__(self, rp: GroundProgram):
        self.rp = rp
        self.decisions = 0
        self.conflicts = 0
        self._models = self._search()

    @cached_property
    def branch_order(self) -> list[int]:
        """Atoms by descending number of rule bodies mentioning them, ties by id."""
        count = [0] * (len(self.rp.atoms) + 1)
        for r in self.rp.rules:
            for atom in set(r.pos) | set(r.neg):
                count[atom] += 1
        return sorted(self.rp.atoms.ids, key=lambda atom: (-count[atom], atom))

    def __iter__(self) -> Iterator[StableModel]:
        return self

    def __next__(self) -> StableModel:
        return next(self._models)

    def _pick(self, a: Assignment) -> int | None:
        for atom in self.branch_order:
            if a[atom] is None:
                return atom
        return None

    def _search(self) -> Iterator[StableModel]:
        # stack items: an expanded assignment, a Conflict, or a pending
        # (assignment, atom, value) branch expanded only when popped
        stack: list = [expand(self.rp, Assignment.empty(len(self.rp.atoms)))]
        while stack:
            item = stack.pop()
            if isinstance(item, tuple):
                base, atom, value = item
                item = expand(self.rp, base.decide(atom, value))
            if isinstance(item, Conflict):
                self.conflicts += 1
                continue
            atom = self._pick(item)
            if atom is None:
                model = item.true_atoms
                if is_stable_model(self.rp, model):
                    yield StableModel(tuple(sorted(model)))
                continue
            self.decisions += 1
            stack.append((item, atom, False))
            stack.append((item, atom, True))


def enumerate_stable(rp: GroundProgram, max_models: int | None = UNLIMITED) -> list[StableModel]:
    solver = StableSolver(rp)
    models = []
    for m in solver:
        models.append(m)
        if max_models is not None and len(models) >= max_models:
            break
    log.debug("%d models, %d decisions, %d conflicts", len(models), solver.decisions, solver.conflicts)
    return models
