import itertools
import random

import pytest

from arraymatch.graph import is_complete, omega, validate
from arraymatch.matching import match, simplify
from arraymatch.oracle import optimal_omega
from arraymatch.reduction import (Clause2, ClauseFormatError, Literal, brute_force_max2sat,
                                  count_satisfied, decode_assignment, encode_max2sat,
                                  expand_or_clauses, literal_names, matching_for_assignment,
                                  normalize_clauses, parse_clauses)

RED = "a b\n!a c\nc d\n"


def test_parse():
    cl = parse_clauses("# header\na !b\n\nc   # unary\n")
    assert cl == [Clause2(Literal("a"), Literal("b", True)), Clause2(Literal("c"), Literal("c"))]
    with pytest.raises(ClauseFormatError, match="line 1"):
        parse_clauses("a b c")
    with pytest.raises(ClauseFormatError, match="line 2"):
        parse_clauses("a\n!\n")


def test_normalize_renames_negated_first_occurrence():
    cl = parse_clauses("!x y\nx !y\n")
    norm, renamed = normalize_clauses(cl)
    assert renamed == {"x": "not(x)"}
    assert [str(c) for c in norm] == ["not(x) y", "!not(x) !y"]


def test_expand_or():
    cl = parse_clauses("a !b")
    ex = expand_or_clauses(cl)
    assert [str(c) for c in ex] == ["a b", "!a !b", "a !b"]
    for bits in itertools.product([False, True], repeat=2):
        a = dict(zip("ab", bits))
        assert count_satisfied(ex, a) == count_satisfied(cl, a, "or")


def test_count_satisfied():
    assert count_satisfied(parse_clauses("a b"), {"a": True, "b": True}, "or") == 1
    assert count_satisfied(parse_clauses(RED), dict(a=False, b=True, c=True, d=True)) == 2
    assert count_satisfied([], {}) == 0
    with pytest.raises(KeyError):
        count_satisfied(parse_clauses("a b"), {"a": True})
    with pytest.raises(ValueError):
        count_satisfied([], {}, "xor")


def test_empty_clause_list():
    g, rmap = encode_max2sat([])
    assert not g.equations and not g.variables and not g.arcs


def test_red_example_structure():
    g, rmap = encode_max2sat(parse_clauses(RED))
    assert validate(g) == []
    assert g.scalar_equation_count() == g.scalar_variable_count() == 12
    assert set(rmap.literal_arcs) == {"a", "b", "c", "d"}
    assert rmap.clause_arcs == [("N[1].eq", "N[1].var"), ("N[2].eq", "N[2].var"),
                                ("N[3].eq", "N[3].var")]
    for n in (1, 2, 3):
        assert g.equations[f"N[{n}].eq"].size == (2,)
        assert g.arcs[(f"N[{n}].eq", f"N[{n}].var")].incidence.cardinality() == 2
    assert {k: len(v) for k, v in rmap.cycles.items()} == {"a": 8, "b": 4, "c": 8, "d": 4}


def test_red_example_decoding():
    cl = parse_clauses(RED)
    g, rmap = encode_max2sat(cl)
    matching_for_assignment(g, rmap, dict(a=False, b=True, c=True, d=True))
    assert is_complete(g)
    assert decode_assignment(g, rmap) == dict(a=False, b=True, c=True, d=True)
    assert omega(g) == 12 - 2


def test_unary_clause():
    g, rmap = encode_max2sat(parse_clauses("a"))
    assert list(rmap.cycles) == ["a"]
    assert len(rmap.cycles["a"]) == 8
    assert optimal_omega(g).omega == 3


def test_decode_rejects_incomplete():
    g, rmap = encode_max2sat(parse_clauses(RED))
    with pytest.raises(ValueError, match="not completely matched"):
        decode_assignment(g, rmap)


def test_malformed_clause_list():
    with pytest.raises(ClauseFormatError):
        encode_max2sat(["a b"])


def test_every_assignment_is_a_complete_matching():
    cl = parse_clauses("a !b\n!a b\nb c\n!c a\n")
    g, rmap = encode_max2sat(cl)
    for bits in itertools.product([False, True], repeat=3):
        a = dict(zip(literal_names(cl), bits))
        matching_for_assignment(g, rmap, a)
        assert is_complete(g)
        assert decode_assignment(g, rmap) == a
        assert omega(g) == g.scalar_equation_count() - count_satisfied(cl, a)


def random_clauses(rng):
    names = "abcd"[:rng.randint(1, 4)]
    return [Clause2(Literal(rng.choice(names), rng.random() < 0.5),
                    Literal(rng.choice(names), rng.random() < 0.5))
            for _ in range(rng.randint(1, 4))]


@pytest.mark.parametrize("seed", range(60))
def test_round_trip_against_brute_force(seed):
    cl = random_clauses(random.Random(seed))
    g, rmap = encode_max2sat(cl)
    assert all(len(c) % 2 == 0 for c in rmap.cycles.values())
    res = optimal_omega(g)
    best, _ = brute_force_max2sat(cl)
    assert count_satisfied(cl, decode_assignment(res.witness, rmap)) == best
    # the heuristic always finds some complete matching that decodes
    h = g.copy()
    simplify(h)
    match(h)
    assert is_complete(h)
    assert omega(h) >= res.omega
    decode_assignment(h, rmap)
