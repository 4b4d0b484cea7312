import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import random_ground_program
from xnmr.errors import OracleTooLarge
from xnmr.grounder import GroundProgram, relevant_ground
from xnmr.oracles import brute_force_stable, brute_force_wfs, naive_reduct_model
from xnmr.solver import enumerate_stable, is_stable_model
from xnmr.syntax import parse_program, parse_query
from xnmr.wfs import check_residual, extract_residual, gl_reduct_least_model, lift, well_founded

TWO_CYCLE = [("p", [], ["q"]), ("q", [], ["p"])]
SELF_LOOP = [("p", [], ["p"])]


def gp_of(rules):
    return GroundProgram.from_text(rules)


def labels(gp, w):
    return (gp.texts(w.true_set), gp.texts(w.false_set), gp.texts(w.undefined_set))


def ids(gp, *texts):
    return frozenset(gp.atoms.id(t) for t in texts)


def test_reduct_two_cycle():
    gp = gp_of(TWO_CYCLE)
    assert gl_reduct_least_model(gp, ids(gp, "p")) == ids(gp, "p")


def test_reduct_self_loop_empty_assumption():
    gp = gp_of(SELF_LOOP)
    assert gl_reduct_least_model(gp, frozenset()) == ids(gp, "p")


def test_reduct_definite():
    gp = gp_of([("a", [], []), ("b", ["a"], [])])
    assert gl_reduct_least_model(gp, frozenset()) == ids(gp, "a", "b")


def test_wfs_self_loop():
    gp = gp_of(SELF_LOOP)
    assert labels(gp, well_founded(gp)) == (set(), set(), {"p"})


def test_wfs_stratified():
    gp = gp_of([("a", [], []), ("b", ["a"], []), ("c", [], ["b"])])
    assert labels(gp, well_founded(gp)) == ({"a", "b"}, {"c"}, set())


def test_wfs_two_cycle():
    gp = gp_of(TWO_CYCLE)
    assert labels(gp, well_founded(gp)) == (set(), set(), {"p", "q"})


def test_wfs_move_chain():
    prog = parse_program("move(1,2). move(2,3). win(X) :- move(X,Y), not win(Y).")
    gp = relevant_ground(prog, parse_query("win(1)"))
    true, false, undefined = labels(gp, well_founded(gp))
    assert true == {"win(2)", "move(1,2)", "move(2,3)"}
    assert false == {"win(1)", "__ans"}
    assert undefined == set()
    # win(3) has no rule at all and is not even interned
    assert "win(3)" not in gp.atoms


def test_wfs_positive_loop_is_false():
    gp = gp_of([("p", ["q"], []), ("q", ["p"], []), ("r", [], ["p"])])
    assert labels(gp, well_founded(gp)) == ({"r"}, {"p", "q"}, set())


def test_residual_empty_when_decided():
    gp = gp_of([("a", [], []), ("b", ["a"], []), ("c", [], ["b"])])
    rp = extract_residual(gp, well_founded(gp))
    assert len(rp.atoms) == 0 and len(rp.rules) == 0


def test_residual_two_cycle_identical():
    gp = gp_of(TWO_CYCLE)
    rp = extract_residual(gp, well_founded(gp))
    assert rp.atoms == gp.atoms and rp.rules == gp.rules


def test_residual_drops_settled_literal():
    gp = gp_of([("a", [], []), ("p", ["a"], ["q"]), ("q", [], ["p"])])
    rp = extract_residual(gp, well_founded(gp))
    assert rp.atoms.texts == ("p", "q")
    assert str(rp) == "p :- not q.\nq :- not p.\n"


def test_residual_discards_dead_rules_and_merges_duplicates():
    gp = gp_of([
        ("t", [], []),
        ("p", [], ["q"]), ("p", ["t"], ["q"]), ("p", ["f"], []), ("p", [], ["t"]),
        ("q", [], ["p"]),
    ])
    rp = extract_residual(gp, well_founded(gp))
    assert str(rp) == "p :- not q.\nq :- not p.\n"


def test_oracle_bound():
    gp = gp_of([(f"a{i:02d}", [], [f"a{i + 1:02d}"]) for i in range(21)])
    with pytest.raises(OracleTooLarge):
        brute_force_wfs(gp)
    with pytest.raises(OracleTooLarge):
        brute_force_stable(gp)


def test_oracle_examples():
    gp = gp_of(SELF_LOOP)
    assert labels(gp, brute_force_wfs(gp)) == (set(), set(), {"p"})
    gp = gp_of(TWO_CYCLE)
    assert labels(gp, brute_force_wfs(gp)) == (set(), set(), {"p", "q"})


# -- properties over random ground programs -----------------------------------

ground_rules = st.lists(
    st.tuples(
        st.integers(1, 8),
        st.lists(st.integers(1, 8), max_size=3),
        st.lists(st.integers(1, 8), max_size=3),
    ),
    min_size=1,
    max_size=14,
)


def from_ints(rules):
    return gp_of([(f"v{h}", [f"v{a}" for a in p], [f"v{a}" for a in n]) for h, p, n in rules])


def alternating_sequence(gp):
    seq = [frozenset()]
    while True:
        nxt = gl_reduct_least_model(gp, gl_reduct_least_model(gp, seq[-1]))
        if nxt == seq[-1]:
            return seq
        seq.append(nxt)


@settings(max_examples=300)
@given(ground_rules)
def test_monotone_convergence(rules):
    gp = from_ints(rules)
    seq = alternating_sequence(gp)
    assert all(a <= b for a, b in zip(seq, seq[1:]))
    assert len(seq) <= len(gp.atoms) + 1


@settings(max_examples=300)
@given(ground_rules)
def test_partition_and_model_property(rules):
    gp = from_ints(rules)
    w = well_founded(gp)
    assert w.true_set | w.false_set | w.undefined_set == gp.atom_ids()
    assert not (w.true_set & w.false_set)
    assert not (w.true_set & w.undefined_set)
    assert not (w.false_set & w.undefined_set)
    for r in gp.rules:
        if all(a in w.true_set for a in r.pos) and all(a in w.false_set for a in r.neg):
            assert r.head in w.true_set


@settings(max_examples=300)
@given(ground_rules, st.sets(st.integers(1, 8)))
def test_reduct_matches_naive(rules, assumed):
    gp = from_ints(rules)
    assumed = frozenset(a for a in assumed if a <= len(gp.atoms))
    assert gl_reduct_least_model(gp, assumed) == naive_reduct_model(gp, assumed)


@settings(max_examples=300)
@given(ground_rules)
def test_wfs_matches_oracle(rules):
    gp = from_ints(rules)
    assert well_founded(gp) == brute_force_wfs(gp)


@pytest.mark.parametrize("seed", range(150))
def test_residual_faithfulness(seed):
    rng = random.Random(seed)
    gp = random_ground_program(rng, max_atoms=10, max_rules=15)
    w = well_founded(gp)
    rp = extract_residual(gp, w)
    check_residual(rp)
    mentioned = {a for r in rp.rules for a in (r.head, *r.pos, *r.neg)}
    assert mentioned <= set(rp.atoms.ids)
    assert gp.texts(w.undefined_set) == set(rp.atoms.texts)

    full_models = {m.as_set() for m in brute_force_stable(gp)}
    completions = set()
    for m in enumerate_stable(rp):
        total = w.true_set | lift(rp, gp, m)
        assert is_stable_model(gp, total)
        completions.add(total)
    assert completions == full_models
    for m in full_models:
        assert w.true_set <= m and not (w.false_set & m)
