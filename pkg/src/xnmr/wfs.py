"""Well-founded model and residual program of a ground program."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import AbstractSet, Iterable

from .grounder import AtomTable, GroundProgram, GroundRule


@dataclass(frozen=True)
class WfsResult:
    true_set: frozenset[int]
    false_set: frozenset[int]
    undefined_set: frozenset[int]

    def value(self, atom_id: int) -> str:
        if atom_id in self.true_set:
            return "true"
        if atom_id in self.undefined_set:
            return "undefined"
        return "false"


class ResidualProgram(GroundProgram):
    """Ground program over the atoms left undefined by the well-founded model.

    Structurally a :class:`GroundProgram` without answer atoms; kept as a
    separate type so signatures say which stage a program comes from.
    """


def gl_reduct_least_model(gp: GroundProgram, assumed: AbstractSet[int]) -> frozenset[int]:
    """Least model of the Gelfond-Lifschitz reduct of ``gp`` w.r.t. ``assumed``.

    Rules blocked by ``assumed`` are skipped; each remaining rule keeps a
    counter of positive body atoms not yet derived (linear-time fixpoint).
    """
    idx = gp.index
    missing = []
    derived: set[int] = set()
    queue: deque[int] = deque()
    for r in gp.rules:
        if any(a in assumed for a in r.neg):
            missing.append(-1)
            continue
        missing.append(len(r.pos))
        if not r.pos and r.head not in derived:
            derived.add(r.head)
            queue.append(r.head)
    while queue:
        a = queue.popleft()
        for ri in idx.pos_occ[a]:
            if missing[ri] <= 0:
                continue
            missing[ri] -= 1
            if missing[ri] == 0:
                h = gp.rules[ri].head
                if h not in derived:
                    derived.add(h)
                    queue.append(h)
    return frozenset(derived)


def well_founded(gp: GroundProgram) -> WfsResult:
    """Alternating fixpoint: iterate ``T := G(G(T))`` from the empty set."""
    true: frozenset[int] = frozenset()
    while True:
        possible = gl_reduct_least_model(gp, true)
        nxt = gl_reduct_least_model(gp, possible)
        if nxt == true:
            break
        true = nxt
    atoms = gp.atom_ids()
    return WfsResult(true, atoms - possible, possible - true)


def extract_residual(gp: GroundProgram, w: WfsResult) -> ResidualProgram:
    undefined = w.undefined_set
    kept: list[tuple[int, tuple[int, ...], tuple[int, ...]]] = []
    for r in gp.rules:
        if r.head not in undefined:
            continue
        if any(a in w.false_set for a in r.pos) or any(a in w.true_set for a in r.neg):
            continue
        kept.append((
            r.head,
            tuple(a for a in r.pos if a in undefined),
            tuple(a for a in r.neg if a in undefined),
        ))
    # old ids are already lexicographic, so sorting them preserves text order
    old = sorted(undefined)
    renum = {a: i for i, a in enumerate(old, 1)}
    table = AtomTable.from_ordered(gp.atoms.text(a) for a in old)
    rules = (
        GroundRule.make(renum[h], (renum[a] for a in p), (renum[a] for a in n))
        for h, p, n in kept
    )
    return ResidualProgram.build(table, rules)


def check_residual(rp: ResidualProgram) -> None:
    """Raise ``AssertionError`` if ``rp`` breaks a residual invariant."""
    heads = {r.head for r in rp.rules}
    missing = set(rp.atoms.ids) - heads
    assert not missing, f"residual atoms without rules: {sorted(missing)}"
    assert list(rp.atoms.texts) == sorted(rp.atoms.texts), "atom ids not lexicographic"
    assert list(rp.rules) == sorted(set(rp.rules)), "rules not canonical"


def lift(rp: ResidualProgram, gp: GroundProgram, ids: Iterable[int]) -> frozenset[int]:
    """Map residual atom ids back to ids of the program it was extracted from."""
    return frozenset(gp.atoms.id(rp.atoms.text(i)) for i in ids)
