"""Query-relevant grounding.

The query ``L1, ..., Ln`` is compiled into an answer rule
``__ans(V1, ..., Vk) :- L1, ..., Ln`` (variables in first-occurrence
order) and grounding proceeds in three phases:

1. predicate relevance: drop rules whose head predicate cannot be reached
   from ``__ans`` in the predicate dependency graph;
2. instantiation against the least model of the positive projection of
   the remaining rules (an over-approximation of everything that can be
   true or undefined); negative literals over atoms outside that set are
   certainly satisfied and are dropped;
3. atom relevance: keep only ground rules whose head is reachable from an
   answer atom through ground dependencies.
"""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .errors import InternalPredicateClash, ResourceLimitExceeded
from .syntax import Atom, Literal, Program, Query, Rule, Term, Var, ground_atom_text

log = logging.getLogger(__name__)

ANSWER_PREDICATE = "__ans"
RESERVED_PREFIX = "__"
DEFAULT_MAX_GROUND_ATOMS = 1_000_000

GroundKey = tuple[str, tuple]  # (predicate, argument values)


@dataclass(frozen=True)
class ResourceLimits:
    max_ground_atoms: int = DEFAULT_MAX_GROUND_ATOMS

    def __post_init__(self):
        if self.max_ground_atoms < 1:
            raise ValueError("max_ground_atoms must be at least 1")


class AtomTable:
    """Bidirectional map between canonical ground atom text and ids 1..n.

    Ids follow the lexicographic order of the texts, so two tables built
    from the same set of atoms are identical.
    """

    __slots__ = ("_texts", "_ids")

    def __init__(self, texts: Iterable[str] = ()):
        self._texts: tuple[str, ...] = tuple(sorted(set(texts)))
        self._ids = {t: i for i, t in enumerate(self._texts, 1)}

    @classmethod
    def from_ordered(cls, texts: Iterable[str]) -> AtomTable:
        table = cls.__new__(cls)
        table._texts = tuple(texts)
        table._ids = {t: i for i, t in enumerate(table._texts, 1)}
        if len(table._ids) != len(table._texts):
            raise ValueError("duplicate atom text")
        return table

    def __len__(self) -> int:
        return len(self._texts)

    def __iter__(self) -> Iterator[tuple[int, str]]:
        return iter(enumerate(self._texts, 1))

    def __contains__(self, text: object) -> bool:
        return text in self._ids

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AtomTable) and self._texts == other._texts

    def __hash__(self) -> int:
        return hash(self._texts)

    def __repr__(self) -> str:
        return f"AtomTable({list(self._texts)!r})"

    def id(self, text: str) -> int:
        return self._ids[text]

    def get(self, text: str) -> int | None:
        return self._ids.get(text)

    def text(self, atom_id: int) -> str:
        if atom_id < 1:
            raise KeyError(atom_id)
        return self._texts[atom_id - 1]

    @property
    def ids(self) -> range:
        return range(1, len(self._texts) + 1)

    @property
    def texts(self) -> tuple[str, ...]:
        return self._texts


@dataclass(frozen=True, order=True)
class GroundRule:
    head: int
    pos: tuple[int, ...] = ()
    neg: tuple[int, ...] = ()

    @classmethod
    def make(cls, head: int, pos: Iterable[int] = (), neg: Iterable[int] = ()) -> GroundRule:
        return cls(head, tuple(sorted(set(pos))), tuple(sorted(set(neg))))


@dataclass(frozen=True)
class GroundProgram:
    atoms: AtomTable
    rules: tuple[GroundRule, ...]
    query_atoms: frozenset[int] = frozenset()

    @classmethod
    def build(
        cls,
        atoms: AtomTable,
        rules: Iterable[GroundRule],
        query_atoms: Iterable[int] = (),
    ) -> "GroundProgram":
        """Deduplicate and sort ``rules``; check that every id is declared."""
        rules = tuple(sorted(set(rules)))
        n = len(atoms)
        for r in rules:
            for a in (r.head, *r.pos, *r.neg):
                if not 1 <= a <= n:
                    raise ValueError(f"atom id {a} not in table of {n} atoms")
        return cls(atoms, rules, frozenset(query_atoms))

    @classmethod
    def from_text(cls, rules: Iterable[tuple[str, Iterable[str], Iterable[str]]]) -> "GroundProgram":
        """Build from ``(head, pos, neg)`` triples of atom texts (test helper)."""
        rules = [(h, tuple(p), tuple(n)) for h, p, n in rules]
        table = AtomTable(t for h, p, n in rules for t in (h, *p, *n))
        return cls.build(
            table,
            (GroundRule.make(table.id(h), map(table.id, p), map(table.id, n)) for h, p, n in rules),
        )

    def __len__(self) -> int:
        return len(self.rules)

    def atom_ids(self) -> frozenset[int]:
        return frozenset(self.atoms.ids)

    def texts(self, ids: Iterable[int]) -> frozenset[str]:
        return frozenset(self.atoms.text(i) for i in ids)

    @cached_property
    def index(self) -> "RuleIndex":
        return RuleIndex(self)

    def format_rule(self, rule: GroundRule) -> str:
        body = [self.atoms.text(a) for a in rule.pos]
        body += [f"not {self.atoms.text(a)}" for a in rule.neg]
        head = self.atoms.text(rule.head)
        return f"{head} :- {', '.join(body)}." if body else f"{head}."

    def __str__(self) -> str:
        return "".join(self.format_rule(r) + "\n" for r in self.rules)


class RuleIndex:
    """Occurrence lists used by the fixpoint and propagation loops."""

    def __init__(self, gp: GroundProgram):
        n = len(gp.atoms)
        self.size = n
        self.by_head: list[list[int]] = [[] for _ in range(n + 1)]
        self.pos_occ: list[list[int]] = [[] for _ in range(n + 1)]
        self.neg_occ: list[list[int]] = [[] for _ in range(n + 1)]
        self.body_len = [len(r.pos) + len(r.neg) for r in gp.rules]
        for ri, r in enumerate(gp.rules):
            self.by_head[r.head].append(ri)
            for a in r.pos:
                self.pos_occ[a].append(ri)
            for a in r.neg:
                self.neg_occ[a].append(ri)


# -- phase 1: predicate relevance --------------------------------------------


def answer_rule(query: Query) -> Rule:
    head = Atom(ANSWER_PREDICATE, tuple(Var(v) for v in query.variables()))
    return Rule(head, query.literals)


def check_reserved(program: Program, query: Query | None = None) -> None:
    atoms = [a for r in program.rules for a in (r.head, *(l.atom for l in r.body))]
    if query is not None:
        atoms += [l.atom for l in query.literals]
    for a in atoms:
        if a.predicate.startswith(RESERVED_PREFIX):
            raise InternalPredicateClash(a.predicate)


def relevant_predicates(rules: Iterable[Rule], roots: Iterable[tuple[str, int]]) -> set[tuple[str, int]]:
    deps: dict[tuple[str, int], set[tuple[str, int]]] = defaultdict(set)
    for r in rules:
        deps[r.head.signature].update(l.atom.signature for l in r.body)
    seen = set(roots)
    todo = list(seen)
    while todo:
        for nxt in deps.get(todo.pop(), ()):
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return seen


# -- phase 2: positive over-approximation and instantiation ------------------


class _FactIndex:
    """Ground facts per predicate with lazily built lookup indexes."""

    def __init__(self):
        self.rows: dict[tuple[str, int], list[tuple]] = defaultdict(list)
        self.members: set[GroundKey] = set()
        # (signature, bound positions) -> key values -> rows
        self._lookup: dict[tuple, dict[tuple, list[tuple]]] = {}

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, key: GroundKey) -> bool:
        return key in self.members

    def add(self, pred: str, values: tuple) -> bool:
        key = (pred, values)
        if key in self.members:
            return False
        self.members.add(key)
        sig = (pred, len(values))
        self.rows[sig].append(values)
        for (s, positions), table in self._lookup.items():
            if s == sig:
                table.setdefault(tuple(values[p] for p in positions), []).append(values)
        return True

    def lookup(self, sig: tuple[str, int], positions: tuple[int, ...], key: tuple) -> list[tuple]:
        if not positions:
            return self.rows.get(sig, [])
        table = self._lookup.get((sig, positions))
        if table is None:
            table = {}
            for values in self.rows.get(sig, []):
                table.setdefault(tuple(values[p] for p in positions), []).append(values)
            self._lookup[(sig, positions)] = table
        return table.get(key, [])


def _resolve(term: Term, subst: Mapping[str, object]):
    return subst[term.value] if term.is_var else term.value


def _match(
    atoms: list[Atom],
    facts: _FactIndex,
    subst: dict,
    delta: tuple[int, _FactIndex] | None = None,
) -> Iterator[dict]:
    """All extensions of ``subst`` making every atom in ``atoms`` a fact.

    With ``delta = (i, d)`` the i-th atom is matched against ``d`` instead.
    Atoms are joined greedily, most-bound first.
    """
    if not atoms:
        yield subst
        return
    best, best_bound = 0, -1
    for k, a in enumerate(atoms):
        if delta is not None and k == delta[0]:
            best = k
            break
        bound = sum(1 for t in a.args if not t.is_var or t.value in subst)
        if bound > best_bound:
            best, best_bound = k, bound
    atom = atoms[best]
    rest = atoms[:best] + atoms[best + 1:]
    source = facts
    rest_delta = None
    if delta is not None:
        if delta[0] == best:
            source = delta[1]
        else:
            rest_delta = (delta[0] - (1 if delta[0] > best else 0), delta[1])
    positions = tuple(p for p, t in enumerate(atom.args) if not t.is_var or t.value in subst)
    key = tuple(_resolve(atom.args[p], subst) for p in positions)
    for values in source.lookup(atom.signature, positions, key):
        ext = dict(subst)
        ok = True
        for t, v in zip(atom.args, values):
            if t.is_var:
                prev = ext.get(t.value, _MISSING)
                if prev is _MISSING:
                    ext[t.value] = v
                elif prev != v or type(prev) is not type(v):
                    ok = False
                    break
        if ok:
            yield from _match(rest, facts, ext, rest_delta)


_MISSING = object()


def _ground(atom: Atom, subst: Mapping[str, object]) -> GroundKey:
    return (atom.predicate, tuple(_resolve(t, subst) for t in atom.args))


def positive_closure(rules: list[Rule], limits: ResourceLimits) -> _FactIndex:
    """Least model of the rules with negative literals deleted (semi-naive)."""
    facts = _FactIndex()
    delta = _FactIndex()

    def admit(target: _FactIndex, key: GroundKey) -> None:
        if key not in facts and target.add(*key) and len(facts) + len(target) > limits.max_ground_atoms:
            raise ResourceLimitExceeded(limits.max_ground_atoms)

    for r in rules:
        if not r.positive:
            admit(delta, _ground(r.head, {}))
    rounds = 0
    while len(delta):
        rounds += 1
        for pred, values in list(delta.members):
            facts.add(pred, values)
        new = _FactIndex()
        for r in rules:
            pos = list(r.positive)
            for i, a in enumerate(pos):
                if a.signature not in delta.rows:
                    continue
                for subst in _match(pos, facts, {}, (i, delta)):
                    key = _ground(r.head, subst)
                    if key not in facts:
                        admit(new, key)
        delta = new
    log.debug("positive closure: %d atoms after %d rounds", len(facts), rounds)
    return facts


@dataclass
class _Instances:
    texts: dict[GroundKey, str] = field(default_factory=dict)
    rules: set[tuple[GroundKey, frozenset, frozenset]] = field(default_factory=set)

    def text(self, key: GroundKey) -> str:
        t = self.texts.get(key)
        if t is None:
            t = self.texts[key] = ground_atom_text(*key)
        return t


def relevant_ground(
    program: Program,
    query: Query,
    limits: ResourceLimits | None = None,
) -> GroundProgram:
    limits = limits or ResourceLimits()
    check_reserved(program, query)
    ans = answer_rule(query)
    keep = relevant_predicates([ans, *program.rules], [ans.head.signature])
    rules = [ans] + [r for r in program.rules if r.head.signature in keep]
    log.debug("%d of %d rules predicate-relevant", len(rules) - 1, len(program.rules))

    over = positive_closure(rules, limits)

    inst = _Instances()
    for r in rules:
        pos = list(r.positive)
        for subst in _match(pos, over, {}):
            head = _ground(r.head, subst)
            p = frozenset(_ground(a, subst) for a in pos)
            n = frozenset(k for k in (_ground(a, subst) for a in r.negative) if k in over)
            inst.rules.add((head, p, n))

    # phase 3: atom relevance from the answer atoms
    by_head: dict[GroundKey, list] = defaultdict(list)
    for rec in inst.rules:
        by_head[rec[0]].append(rec)
    answers = [k for k in by_head if k[0] == ANSWER_PREDICATE]
    reached = set(answers)
    todo = deque(answers)
    while todo:
        for head, p, n in by_head[todo.popleft()]:
            for k in (*p, *n):
                if k not in reached:
                    reached.add(k)
                    todo.append(k)
    kept = [rec for k in reached for rec in by_head.get(k, ())]

    table = AtomTable(inst.text(k) for k in reached)
    ids = {k: table.id(inst.text(k)) for k in reached}
    ground_rules = [
        GroundRule.make(ids[h], (ids[k] for k in p), (ids[k] for k in n)) for h, p, n in kept
    ]
    gp = GroundProgram.build(table, ground_rules, (ids[k] for k in answers))
    log.debug("relevant ground program: %d atoms, %d rules", len(table), len(gp.rules))
    return gp
