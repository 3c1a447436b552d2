import itertools

import numpy as np
import pytest

from arraymatch.generators import gen_random, gen_wire
from arraymatch.graph import ArrayGraph, flatten, validate
from arraymatch.mcim import MCIM
from arraymatch.oracle import (OracleCapError, all_maximum_matchings, dense_flatten_columns,
                               dense_solve_local, dense_subtract, enumerate_omegas, hopcroft_karp,
                               maximum_matching_size, optimal_omega, pairs_in_every_maximum_matching)
from arraymatch.scalar import ScalarGraph

from conftest import identity_graph


def brute_max(sg: ScalarGraph) -> int:
    best = 0
    arcs = sorted(sg.arcs)
    for r in range(len(arcs), 0, -1):
        for sub in itertools.combinations(arcs, r):
            es, vs = [e for e, _ in sub], [v for _, v in sub]
            if len(set(es)) == r and len(set(vs)) == r:
                return r
    return best


def test_hk_identity_and_star():
    assert maximum_matching_size(flatten(identity_graph(7))) == 7
    g = ArrayGraph()
    g.add_variable("v")
    for i in range(4):
        g.add_equation(f"e{i}")
        g.add_arc(f"e{i}", "v", MCIM.from_entries((1,), (1,), [((1,), (1,))]))
    assert maximum_matching_size(flatten(g)) == 1


def test_hk_wire():
    sg = hopcroft_karp(flatten(gen_wire(5)))
    assert len(sg.matching) == 5 and sg.matching_is_valid()


@pytest.mark.parametrize("seed", range(80))
def test_hk_against_brute_force(seed):
    g = gen_random(seed, 3, 3, 3, 0.5)
    sg = flatten(g)
    if len(sg.arcs) > 14:
        pytest.skip("too many arcs for subset enumeration")
    assert maximum_matching_size(sg) == brute_max(sg)


def test_all_maximum_matchings_cycle():
    # 2x2 complete bipartite graph has two perfect matchings
    g = ArrayGraph()
    g.add_equation("e", (2,))
    g.add_variable("v", (2,))
    g.add_arc("e", "v", MCIM.from_dense((2,), (2,), np.ones((2, 2), bool)))
    ms = list(all_maximum_matchings(flatten(g)))
    assert sorted(sorted(m.items()) for m in ms) == [[(0, 0), (1, 1)], [(0, 1), (1, 0)]]
    assert pairs_in_every_maximum_matching(flatten(g)) == set()


@pytest.mark.parametrize("seed", range(30))
def test_pairs_in_every_matching_agrees_with_enumeration(seed):
    sg = flatten(gen_random(seed, 3, 3, 3, 0.6))
    ms = list(all_maximum_matchings(sg))
    common = {p for p in sg.arcs if all(m.get(p[0]) == p[1] for m in ms)}
    assert pairs_in_every_maximum_matching(sg) == common


def test_optimal_omega_examples():
    assert optimal_omega(gen_wire(4)).omega == 3
    assert optimal_omega(identity_graph(1)).omega == 1
    res = optimal_omega(gen_wire(5))
    assert validate(res.witness, "complete") == []


def test_optimal_omega_infeasible_is_reported():
    g = ArrayGraph()
    g.add_equation("e", (2,))
    g.add_variable("v", (2,))
    g.add_arc("e", "v", MCIM.from_entries((2,), (2,), [((1,), (1,)), ((2,), (1,))]))
    res = optimal_omega(g)
    assert not res.feasible and res.omega is None


def test_optimal_omega_cap():
    with pytest.raises(OracleCapError):
        optimal_omega(gen_wire(30))


@pytest.mark.parametrize("seed", range(60))
def test_optimal_omega_against_enumeration(seed):
    g = gen_random(seed, 3, 3, 3, 0.8, square=True)
    if g.scalar_equation_count() > 9:
        pytest.skip("too large for plain enumeration")
    res = optimal_omega(g)
    omegas = enumerate_omegas(g)
    assert res.feasible == bool(omegas)
    if omegas:
        assert res.omega == min(omegas)
        assert validate(res.witness, "complete") == []


def test_dense_twins_trivia():
    a = np.eye(3, dtype=bool)
    assert not dense_subtract(a, a).any()
    assert dense_flatten_columns(a, 1).tolist() == [True, True, True]
    u = np.array([[1, 0, 0], [1, 1, 0], [1, 0, 1]], bool)
    opts = [set(map(tuple, np.argwhere(m))) for m in dense_solve_local(u, 1)]
    assert opts == [{(0, 0), (1, 1), (2, 2)}, {(2, 0)}, {(1, 0)}]
