"""Brute-force reference implementations used to cross-check the engine.

Nothing here reuses the fixpoint or propagation code of :mod:`xnmr.wfs`
and :mod:`xnmr.solver`: least models are recomputed naively and stable
models are found by exhaustive subset enumeration.
"""

from __future__ import annotations

import numpy as np

from .errors import OracleTooLarge
from .grounder import GroundProgram
from .solver import StableModel
from .wfs import WfsResult

ORACLE_BOUND = 20


def _check_size(gp: GroundProgram) -> int:
    n = len(gp.atoms)
    if n > ORACLE_BOUND:
        raise OracleTooLarge(n, ORACLE_BOUND)
    return n


def naive_reduct_model(gp: GroundProgram, assumed: frozenset[int]) -> frozenset[int]:
    """Least model of the reduct by repeated full passes over the rules."""
    model: set[int] = set()
    changed = True
    while changed:
        changed = False
        for r in gp.rules:
            if r.head in model or any(a in assumed for a in r.neg):
                continue
            if all(a in model for a in r.pos):
                model.add(r.head)
                changed = True
    return frozenset(model)


def _unfounded_wfs(gp: GroundProgram) -> tuple[frozenset[int], frozenset[int]]:
    """Iterate the immediate-consequence / greatest-unfounded-set operator."""
    atoms = gp.atom_ids()
    true: frozenset[int] = frozenset()
    false: frozenset[int] = frozenset()
    while True:
        def body_false(r):
            return any(a in false for a in r.pos) or any(a in true for a in r.neg)

        derived = frozenset(
            r.head for r in gp.rules
            if all(a in true for a in r.pos) and all(a in false for a in r.neg)
        )
        support: set[int] = set()
        changed = True
        while changed:
            changed = False
            for r in gp.rules:
                if r.head not in support and not body_false(r) and all(a in support for a in r.pos):
                    support.add(r.head)
                    changed = True
        unfounded = atoms - support
        if derived == true and unfounded == false:
            return true, false
        true, false = derived, unfounded


def brute_force_wfs(gp: GroundProgram) -> WfsResult:
    """Well-founded model via two independent characterisations.

    The least and greatest fixpoints of the squared reduct operator are
    reached by iterating from the empty set and from all atoms; the result
    is checked against the unfounded-set construction before returning.
    """
    _check_size(gp)
    atoms = gp.atom_ids()

    def gamma(s):
        return naive_reduct_model(gp, s)

    lo: frozenset[int] = frozenset()
    while (nxt := gamma(gamma(lo))) != lo:
        lo = nxt
    hi = atoms
    while (nxt := gamma(gamma(hi))) != hi:
        hi = nxt
    if gamma(lo) != hi or gamma(hi) != lo:
        raise AssertionError("least/greatest fixpoints of the squared operator do not bracket")
    true, false = _unfounded_wfs(gp)
    if true != lo or false != atoms - hi:
        raise AssertionError("alternating fixpoint disagrees with unfounded-set construction")
    return WfsResult(lo, atoms - hi, hi - lo)


def _reduct_models(gp: GroundProgram, n: int) -> np.ndarray:
    """For every candidate bitmask, the least model of the reduct as a bitmask."""
    cand = np.arange(1 << n, dtype=np.int64)
    heads = np.array([1 << (r.head - 1) for r in gp.rules], dtype=np.int64)
    pos = np.array([sum(1 << (a - 1) for a in r.pos) for r in gp.rules], dtype=np.int64)
    neg = np.array([sum(1 << (a - 1) for a in r.neg) for r in gp.rules], dtype=np.int64)
    model = np.zeros_like(cand)
    while True:
        nxt = model.copy()
        for h, p, q in zip(heads, pos, neg):
            fire = ((cand & q) == 0) & ((model & p) == p)
            nxt |= np.where(fire, h, 0)
        if np.array_equal(nxt, model):
            return model
        model = nxt


def brute_force_stable(gp: GroundProgram) -> list[StableModel]:
    """Every subset of atoms that equals the least model of its own reduct.

    Models come in lexicographic order of their sorted atom-id tuples.
    """
    n = _check_size(gp)
    cand = np.arange(1 << n, dtype=np.int64)
    stable = cand[_reduct_models(gp, n) == cand]
    models = [
        StableModel(tuple(i + 1 for i in range(n) if (int(m) >> i) & 1)) for m in stable
    ]
    return sorted(models, key=lambda m: m.true_atoms)
