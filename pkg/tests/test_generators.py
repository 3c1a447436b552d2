import pytest

from arraymatch.generators import gen_random, gen_wire
from arraymatch.graph import flatten, validate
from arraymatch.io import dumps_graph
from arraymatch.oracle import maximum_matching_size


def test_wire_shape():
    g = gen_wire(5)
    assert g.summary() == {"equationNodes": 3, "variableNodes": 1, "arcs": 3,
                           "scalarEquations": 5, "scalarVariables": 5}
    assert gen_wire(4).equations["eq.interior"].size == (2,)


@pytest.mark.parametrize("n", [4, 5, 7, 20, 333])
def test_wire_flatten_counts(n):
    sg = flatten(gen_wire(n))
    assert len(sg.equations) == n and len(sg.variables) == n
    # interior equation k uses der(T)[k+1]
    interior = [sg.variables[v][1] for e, v in sg.arcs if sg.equations[e][0] == "eq.interior"]
    assert interior == [(k + 1,) for k in range(1, n - 1)]


def test_wire_rejects_small():
    with pytest.raises(ValueError):
        gen_wire(3)


def test_random_is_deterministic():
    assert dumps_graph(gen_random(42, 5, 5, 4, 0.6)) == dumps_graph(gen_random(42, 5, 5, 4, 0.6))
    assert dumps_graph(gen_random(42, 5, 5, 4, 0.6)) != dumps_graph(gen_random(43, 5, 5, 4, 0.6))


def test_random_square_diagonal_is_perfect():
    g = gen_random(1, 4, 4, 4, 1.0, uniform_size=3, offsets=[0], max_diagonals=1)
    for a in g.arcs.values():
        assert a.incidence.deltas() == ((0,),)
    assert maximum_matching_size(flatten(g)) == 12


def test_random_square_balances():
    for seed in range(30):
        g = gen_random(seed, 3, 5, 4, 0.5, square=True)
        assert g.scalar_equation_count() == g.scalar_variable_count()


def test_random_parameter_errors():
    with pytest.raises(ValueError):
        gen_random(0, 0, 1, 1, 0.5)
    with pytest.raises(ValueError):
        gen_random(0, 1, 1, 1, 0.0)
    with pytest.raises(ValueError):
        gen_random(0, 1, 6, 4, 0.5, square=True)


@pytest.mark.parametrize("density", [0.3, 0.6, 1.0])
def test_random_graphs_validate(density):
    for seed in range(170):
        g = gen_random(seed, 1 + seed % 6, 1 + (seed // 6) % 6, 4, density, max_dim=1 + seed % 3)
        assert validate(g) == []
        assert all(a.incidence for a in g.arcs.values())
