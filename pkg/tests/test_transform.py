from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bqpcolor.graph import Graph, mycielski_graph
from bqpcolor.oracle import brute_force_mscp, brute_force_qubo
from bqpcolor.transform import (
    Coloring,
    Infeasible,
    QuboModel,
    build_linear_model,
    coloring_sum,
    decode,
    eval_h,
    eval_h_dense,
    penalty_components,
    read_qubo,
    to_qubo,
    write_qubo,
)

from .conftest import PRINTED_CONSTANT, PRINTED_OPTIMUM_X, PRINTED_Q
from .test_graph import graphs


def bits(model, *pairs):
    x = np.zeros(model.dimension, dtype=np.int8)
    for u, k in pairs:
        x[model.index(u, k)] = 1
    return x


# -- linear model ------------------------------------------------------------

def test_linear_model_of_cycle(golden_model):
    m = golden_model
    assert m.dimension == 8
    assert m.equalities() == [[0, 1], [2, 3], [4, 5], [6, 7]]
    # x11+x21, x12+x22, x11+x41, x12+x42, x21+x31, x22+x32, x31+x41, x32+x42
    named = {(m.variable(i), m.variable(j)) for i, j in m.inequalities()}
    assert named == {
        ((1, 1), (2, 1)), ((1, 2), (2, 2)), ((1, 1), (4, 1)), ((1, 2), (4, 2)),
        ((2, 1), (3, 1)), ((2, 2), (3, 2)), ((3, 1), (4, 1)), ((3, 2), (4, 2)),
    }
    # objective -x11 -2x12 -x21 ... in maximize form, i.e. color weights 1,2 per vertex
    assert m.objective_coeffs.tolist() == [1, 2] * 4


def test_linear_model_single_vertex():
    m = build_linear_model(Graph(1, frozenset()), 1)
    assert m.dimension == 1
    assert len(m.equalities()) == 1
    assert m.inequalities() == []


def test_linear_model_myciel3_size():
    assert build_linear_model(mycielski_graph(3), 6).dimension == 66


def test_linear_model_rejects_zero_colors(cycle4):
    with pytest.raises(ValueError):
        build_linear_model(cycle4, 0)


def test_variable_index_roundtrip(golden_model):
    for i in range(golden_model.dimension):
        assert golden_model.index(*golden_model.variable(i)) == i
    assert golden_model.variable(0) == (1, 1)
    assert golden_model.variable(7) == (4, 2)


def test_constraint_matrix(golden_model):
    A, b = golden_model.constraint_matrix()
    assert A.shape == (4, 8)
    assert (A.sum(axis=1) == 2).all()
    assert b.tolist() == [1, 1, 1, 1]


# -- QUBO construction -------------------------------------------------------

def test_printed_matrix_reproduced(golden_qubo):
    assert np.array_equal(golden_qubo.to_dense(), PRINTED_Q)
    assert golden_qubo.constant == PRINTED_CONSTANT
    assert golden_qubo.penalty == -5


def test_single_vertex_qubo():
    q = to_qubo(build_linear_model(Graph(1, frozenset()), 1), -5)
    assert q.to_dense().tolist() == [[4]]
    assert q.constant == -5
    assert eval_h(q, [1]) == -1
    assert eval_h(q, [0]) == -5


@pytest.mark.parametrize("penalty", [-1, 0, 3])
def test_penalty_rule_enforced(golden_model, penalty):
    with pytest.raises(ValueError):
        to_qubo(golden_model, penalty)


def test_penalty_just_above_bound(golden_model):
    # K = 2 needs |P| > 1
    to_qubo(golden_model, -2)


def test_overflow_guard():
    with pytest.raises(OverflowError):
        to_qubo(build_linear_model(Graph(4, frozenset()), 2), -(2**61))


def test_row_storage_is_sparse_and_symmetric(golden_qubo):
    rows = golden_qubo.q
    assert rows[0] == [(0, 4), (1, -5), (2, -5), (6, -5)]
    for i, row in enumerate(rows):
        for j, v in row:
            assert (i, v) in rows[j]


# -- evaluation --------------------------------------------------------------

def test_eval_h_at_printed_optimum(golden_qubo):
    assert eval_h(golden_qubo, PRINTED_OPTIMUM_X) == -6


def test_eval_h_all_zero_is_constant(golden_qubo):
    assert eval_h(golden_qubo, np.zeros(8)) == -20


def test_eval_h_all_ones(golden_qubo):
    # printed matrix: diagonal 28, 24 entries of -5 off the diagonal; 28 - 120 - 20
    assert eval_h(golden_qubo, np.ones(8)) == -112


def test_eval_h_dimension_mismatch(golden_qubo):
    with pytest.raises(ValueError):
        eval_h(golden_qubo, np.zeros(7))


def test_components_at_optimum(golden_model):
    assert penalty_components(golden_model, -5, PRINTED_OPTIMUM_X) == (6, 0, 0)


def test_components_double_color(golden_model):
    x = bits(golden_model, (1, 1), (1, 2), (2, 2), (3, 1), (4, 2))
    # vertex 1 appears twice; (1,2) shares color 2 with vertex 2 and with 4
    f, f1, f2 = penalty_components(golden_model, -5, x)
    assert f1 == -5
    assert f2 == 2 * -5 * 2


def test_components_single_conflict(golden_model):
    x = bits(golden_model, (1, 1), (2, 1))
    f, f1, f2 = penalty_components(golden_model, -5, x)
    assert f2 == -10
    assert f == 2
    assert f1 == -5 * 2


def test_components_dimension_mismatch(golden_model):
    with pytest.raises(ValueError):
        penalty_components(golden_model, -5, np.zeros(3))


# -- decoding ----------------------------------------------------------------

def test_decode_optimum(golden_model):
    c = decode(golden_model, PRINTED_OPTIMUM_X)
    assert c.colors == (1, 2, 1, 2)
    assert coloring_sum(c) == 6


def test_decode_uncolored(golden_model):
    with pytest.raises(Infeasible) as info:
        decode(golden_model, np.zeros(8))
    assert info.value.vertex == 1


def test_decode_double_colored(golden_model):
    with pytest.raises(Infeasible) as info:
        decode(golden_model, bits(golden_model, (1, 1), (2, 2), (3, 1), (3, 2), (4, 2)))
    assert info.value.vertex == 3


def test_decode_edge_conflict(golden_model):
    with pytest.raises(Infeasible) as info:
        decode(golden_model, bits(golden_model, (1, 1), (2, 1), (3, 2), (4, 2)))
    assert info.value.edge == (1, 2)
    assert info.value.color == 1


def test_coloring_sum_examples():
    assert coloring_sum(Coloring((1, 2, 1, 2))) == 6
    assert coloring_sum(Coloring((1,) * 7)) == 7
    assert Coloring((1,) * 7).is_legal(Graph(7, frozenset()))


def test_coloring_to_assignment_roundtrip(golden_model):
    c = Coloring((1, 2, 1, 2))
    assert np.array_equal(c.to_assignment(golden_model), PRINTED_OPTIMUM_X)


# -- export ------------------------------------------------------------------

def test_qubo_file_roundtrip(tmp_path, golden_qubo):
    path = tmp_path / "c4.qubo"
    write_qubo(golden_qubo, path)
    lines = path.read_text().splitlines()
    assert lines[1] == "8 20 -20"
    back = read_qubo(path)
    assert np.array_equal(back.to_dense(), golden_qubo.to_dense())
    assert back.constant == -20


def test_from_dense_requires_symmetry():
    with pytest.raises(ValueError):
        QuboModel.from_dense([[1, 2], [3, 4]])


# -- properties --------------------------------------------------------------

@st.composite
def model_and_assignment(draw):
    g = draw(graphs(max_n=7))
    K = draw(st.integers(1, 5))
    P = -draw(st.integers(K // 2 + 1, 600))
    x = draw(st.lists(st.integers(0, 1), min_size=g.vertex_count * K, max_size=g.vertex_count * K))
    return build_linear_model(g, K), P, np.array(x, dtype=np.int8)


@given(model_and_assignment())
@settings(max_examples=300, deadline=None)
def test_qubo_equals_components(case):
    m, P, x = case
    q = to_qubo(m, P)
    f, f1, f2 = penalty_components(m, P, x)
    assert eval_h(q, x) == -f + f1 + f2
    assert eval_h_dense(q, x) == eval_h(q, x)


@given(model_and_assignment())
@settings(max_examples=300, deadline=None)
def test_feasibility_equivalence(case):
    m, P, x = case
    _, f1, f2 = penalty_components(m, P, x)
    try:
        c = decode(m, x)
    except Infeasible:
        assert (f1, f2) != (0, 0)
    else:
        assert (f1, f2) == (0, 0)
        assert eval_h(to_qubo(m, P), x) == -coloring_sum(c)


@given(graphs(max_n=10), st.integers(1, 6))
@settings(max_examples=100, deadline=None)
def test_nonzero_pattern_closed_form(g, K):
    q = to_qubo(build_linear_model(g, K), -500)
    assert q.offdiag_pair_count() == g.vertex_count * comb(K, 2) + g.edge_count * K
    assert (q.data == -500).all()
    assert np.array_equal(q.diag, np.tile(np.arange(1, K + 1), g.vertex_count) * -1 + 500)
    assert q.constant == -500 * g.vertex_count
    if q.dimension <= 60:
        D = q.to_dense()
        assert np.array_equal(D, D.T)


@given(graphs(max_n=5))
@settings(max_examples=25, deadline=None)
def test_penalty_sufficiency_small_graphs(g):
    n = g.vertex_count
    m = build_linear_model(g, n)
    best = brute_force_qubo(to_qubo(m, -500))
    c = decode(m, best.witness)
    assert c.sum == -best.optimum == brute_force_mscp(g, n).optimum
