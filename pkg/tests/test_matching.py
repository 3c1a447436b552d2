import pytest

from arraymatch.generators import gen_random, gen_wire
from arraymatch.graph import ArrayGraph, flatten, is_complete, omega, validate
from arraymatch.matching import (AugmentingPath, MatchingError, PathStep, apply_path,
                                 augmenting_paths, bfs, match, revert_path, simplify,
                                 unmatched_degree)
from arraymatch.mcim import MCIM
from arraymatch.mcis import MCIS
from arraymatch.oracle import all_maximum_matchings, maximum_matching_size

from conftest import identity_graph


def one():
    return MCIM.from_entries((1,), (1,), [((1,), (1,))])


def chain():
    # e1 - v1 - e2 - v2 : e1 only sees v1, so e1=v1 and then e2=v2 are forced
    g = ArrayGraph()
    for n in ("e1", "e2"):
        g.add_equation(n)
    for n in ("v1", "v2"):
        g.add_variable(n)
    g.add_arc("e1", "v1", one())
    g.add_arc("e2", "v1", one())
    g.add_arc("e2", "v2", one())
    return g


def test_simplify_wire_is_complete():
    g = gen_wire(50)
    forced = simplify(g)
    assert len(forced) == 3
    assert is_complete(g)
    assert omega(g) == 3


def test_simplify_chain():
    g = chain()
    assert unmatched_degree(g, "e1") == 1
    assert unmatched_degree(g, "e2") == 2
    simplify(g)
    assert is_complete(g)
    assert omega(g) == 2


def test_simplify_leaves_ambiguous_alone():
    g = ArrayGraph()
    g.add_equation("e", (2,))
    g.add_variable("v", (2,))
    g.add_arc("e", "v", MCIM.from_entries((2,), (2,), [((1,), (1,)), ((2,), (2,)),
                                                       ((1,), (2,)), ((2,), (1,))]))
    assert simplify(g) == []
    match(g)
    assert is_complete(g)


def test_simplify_rejects_invalid_input():
    g = chain()
    g.arcs[("e1", "v1")].matching = MCIM.from_entries((1,), (1,), [((1,), (1,))])
    g.arcs[("e2", "v1")].matching = MCIM.from_entries((1,), (1,), [((1,), (1,))])
    with pytest.raises(MatchingError):
        simplify(g)


def test_bfs_stops_at_first_leaf_level():
    g = identity_graph(3)
    nodes, leaves = bfs(g, [(e, g.free(e)) for e in sorted(g.equations)])
    assert len(leaves) == 3
    assert all(nodes[i].level == 1 for i in leaves)


def test_augmenting_through_matched_arc():
    g = chain()
    # wrong greedy choice: e2 takes v1, e1 is left free
    g.arcs[("e2", "v1")].matching = one()
    paths = augmenting_paths(g)
    assert len(paths) == 1 and len(paths[0]) == 3
    assert [s.adds for s in paths[0].steps] == [True, False, True]
    before = {k: a.matching for k, a in g.arcs.items()}
    apply_path(g, paths[0])
    assert is_complete(g)
    revert_path(g, paths[0])
    assert {k: a.matching for k, a in g.arcs.items()} == before


def test_apply_path_checks_before_mutating():
    g = chain()
    bad = AugmentingPath((
        PathStep("e1", "equation", ("e1", "v1"), one()),
        PathStep("v1", "variable", ("e2", "v1"), one()),
    ))
    with pytest.raises(MatchingError):
        apply_path(g, bad)
    assert g.matched_count() == 0


def test_path_must_alternate():
    with pytest.raises(MatchingError):
        AugmentingPath((PathStep("e1", "equation", ("e1", "v1"), one()),
                        PathStep("e2", "equation", ("e2", "v1"), one())))


def test_array_path_matches_many_scalars_at_once():
    g = ArrayGraph()
    g.add_equation("e", (1000,))
    g.add_variable("v", (1000,))
    g.add_arc("e", "v", MCIM.diagonal((1000,), (1000,), MCIS.full((1000,)), (0,)))
    trace = []
    match(g, trace=trace)
    assert len(trace) == 1 and trace[0].added == 1000
    assert is_complete(g)


def test_iteration_cap():
    g = gen_random(3, 4, 4, 4, 1.0, square=True)
    with pytest.raises(MatchingError, match="iteration cap"):
        match(g, max_iterations=0)


def test_empty_graph():
    g = ArrayGraph()
    simplify(g)
    match(g)
    assert omega(g) == 0 and is_complete(g)


@pytest.mark.parametrize("seed", range(60))
def test_multidimensional_matches_are_maximum(seed):
    g = gen_random(seed, 3, 3, 3, 0.7, max_dim=2)
    h = g.copy()
    simplify(h)
    match(h)
    assert validate(h) == []
    assert h.matched_count() == maximum_matching_size(flatten(g))


@pytest.mark.parametrize("seed", range(40))
def test_match_without_simplify_is_maximum(seed):
    g = gen_random(seed, 4, 4, 4, 0.6)
    h = g.copy()
    match(h)
    assert h.matched_count() == maximum_matching_size(flatten(g))


def test_forced_pairs_on_small_graph():
    g = gen_random(11, 3, 3, 3, 0.5, square=True)
    h = g.copy()
    simplify(h)
    forced = flatten(h).matching
    for m in all_maximum_matchings(flatten(g)):
        if len(m) == g.scalar_equation_count():
            assert all(m[e] == v for e, v in forced.items())
