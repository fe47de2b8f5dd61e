import numpy as np
import pytest

from rpqaoa.errors import CapacityError, InvalidInputError
from rpqaoa.problems import (
    CostTable,
    Graph,
    QuboInstance,
    build_cost_table,
    cost_eval,
    instance_from_record,
    instance_to_record,
    is_connected,
    level_decomposition,
    maxcut_from_graph,
    random_connected_graph,
    random_qubo,
)


def triangle() -> QuboInstance:
    return maxcut_from_graph(Graph(n=3, edges=((0, 1), (0, 2), (1, 2))))


class TestCostEval:
    def test_triangle_all_zero_bits(self):
        # all spins -1: every edge agrees
        assert cost_eval(triangle(), 0b000) == 3

    def test_triangle_one_cut_vertex(self):
        assert cost_eval(triangle(), 0b001) == -1

    def test_single_linear_term(self):
        inst = QuboInstance(n=1, couplings=(), linears=((0, 2),))
        assert cost_eval(inst, 1) == 2
        assert cost_eval(inst, 0) == -2

    def test_bit_length_mismatch(self):
        with pytest.raises(InvalidInputError):
            cost_eval(triangle(), 8)
        with pytest.raises(InvalidInputError):
            cost_eval(triangle(), -1)


class TestBuildCostTable:
    def test_triangle_table(self):
        table = build_cost_table(triangle())
        assert table.costs.tolist() == [3, -1, -1, -1, -1, -1, -1, 3]

    def test_single_variable(self):
        inst = QuboInstance(n=1, couplings=(), linears=((0, 1),))
        assert build_cost_table(inst).costs.tolist() == [-1, 1]

    def test_empty_graph(self):
        inst = maxcut_from_graph(Graph(n=2, edges=()))
        assert build_cost_table(inst).costs.tolist() == [0, 0, 0, 0]

    def test_capacity_limit(self):
        inst = QuboInstance(n=6, couplings=((0, 1, 1),), linears=())
        with pytest.raises(CapacityError):
            build_cost_table(inst, max_n=5)

    def test_matches_cost_eval(self):
        inst = random_qubo(5, weighted=True, seed=11)
        table = build_cost_table(inst)
        for x in range(2**5):
            assert table.costs[x] == cost_eval(inst, x)


class TestLevelDecomposition:
    def test_triangle_levels(self):
        spec = level_decomposition(build_cost_table(triangle()))
        assert spec.values.tolist() == [-1, 3]
        assert spec.weights.tolist() == [6, 2]

    def test_path_levels(self):
        inst = maxcut_from_graph(Graph(n=3, edges=((0, 1), (1, 2))))
        spec = level_decomposition(build_cost_table(inst))
        assert spec.values.tolist() == [-2, 0, 2]
        assert spec.weights.tolist() == [2, 4, 2]

    def test_all_distinct_costs(self):
        table = CostTable(n=2, costs=np.arange(4))
        spec = level_decomposition(table)
        assert spec.values.tolist() == [0, 1, 2, 3]
        assert spec.weights.tolist() == [1, 1, 1, 1]

    @pytest.mark.parametrize("seed", range(5))
    def test_weights_cover_all_bitstrings(self, seed):
        inst = random_qubo(6, weighted=True, seed=seed)
        spec = level_decomposition(build_cost_table(inst))
        assert int(spec.weights.sum()) == 2**6
        assert np.all(np.diff(spec.values) > 0)

    @pytest.mark.parametrize("seed", range(5))
    def test_level_of_is_consistent(self, seed):
        inst = random_qubo(5, weighted=False, seed=seed)
        table = build_cost_table(inst)
        spec = level_decomposition(table)
        assert np.array_equal(spec.values[spec.level_of], table.costs)


class TestMaxcutFromGraph:
    def test_triangle(self):
        inst = triangle()
        assert inst.kind == "maxcut_unweighted"
        assert inst.couplings == ((0, 1, 1), (0, 2, 1), (1, 2, 1))
        assert inst.linears == ()

    def test_weighted_edge(self):
        g = Graph(n=2, edges=((0, 1),), weights=(2,))
        inst = maxcut_from_graph(g)
        assert inst.kind == "maxcut_weighted"
        assert inst.couplings == ((0, 1, 2),)

    def test_empty_graph(self):
        inst = maxcut_from_graph(Graph(n=3, edges=()))
        assert inst.couplings == ()


class TestSpinFlipSymmetry:
    @pytest.mark.parametrize("seed", range(4))
    def test_no_linear_terms_table_symmetric(self, seed):
        g = random_connected_graph(6, seed=seed)
        table = build_cost_table(maxcut_from_graph(g))
        n_states = len(table.costs)
        assert np.array_equal(table.costs, table.costs[::-1]), "F(x) must equal F(~x)"
        assert n_states == 2**6


class TestRelabelInvariance:
    @pytest.mark.parametrize("seed", range(4))
    def test_spectrum_unchanged_by_permutation(self, seed):
        inst = random_qubo(5, weighted=True, seed=seed)
        rng = np.random.default_rng(seed)
        perm = rng.permutation(5)
        couplings = tuple(
            (min(perm[i], perm[j]), max(perm[i], perm[j]), s) for i, j, s in inst.couplings
        )
        linears = tuple((perm[i], s) for i, s in inst.linears)
        permuted = QuboInstance(n=5, couplings=couplings, linears=linears, kind=inst.kind)
        spec_a = level_decomposition(build_cost_table(inst))
        spec_b = level_decomposition(build_cost_table(permuted))
        assert np.array_equal(spec_a.values, spec_b.values)
        assert np.array_equal(spec_a.weights, spec_b.weights)


class TestRandomConnectedGraph:
    def test_deterministic(self):
        assert random_connected_graph(7, seed=3) == random_connected_graph(7, seed=3)

    @pytest.mark.parametrize("seed", range(8))
    def test_always_connected(self, seed):
        assert is_connected(random_connected_graph(6, seed=seed))

    def test_two_vertices(self):
        assert random_connected_graph(2, seed=0).edges == ((0, 1),)

    def test_needs_two_vertices(self):
        with pytest.raises(InvalidInputError):
            random_connected_graph(1, seed=0)


class TestRandomQubo:
    def test_unweighted_coefficients_are_one(self):
        inst = random_qubo(6, weighted=False, seed=5)
        assert all(s == 1 for _, _, s in inst.couplings)
        assert all(s == 1 for _, s in inst.linears)
        assert inst.kind == "qubo_unweighted"

    @pytest.mark.parametrize("seed", range(6))
    def test_weighted_coefficients_in_pool(self, seed):
        inst = random_qubo(6, weighted=True, seed=seed)
        values = {s for _, _, s in inst.couplings} | {s for _, s in inst.linears}
        assert values <= {-3, -2, -1, 1, 2, 3}
        assert 0 not in values

    def test_deterministic(self):
        assert random_qubo(5, True, seed=9) == random_qubo(5, True, seed=9)


class TestIsConnected:
    def test_complete_graph(self):
        g = Graph(n=4, edges=tuple((i, j) for j in range(4) for i in range(j)))
        assert is_connected(g)

    def test_isolated_vertices(self):
        assert not is_connected(Graph(n=2, edges=()))

    def test_path(self):
        assert is_connected(Graph(n=5, edges=((0, 1), (1, 2), (2, 3), (3, 4))))


class TestValidation:
    def test_self_loop_rejected(self):
        with pytest.raises(InvalidInputError):
            Graph(n=3, edges=((1, 1),))

    def test_duplicate_edge_rejected(self):
        with pytest.raises(InvalidInputError):
            Graph(n=3, edges=((0, 1), (1, 0)))

    def test_out_of_range_edge_rejected(self):
        with pytest.raises(InvalidInputError):
            Graph(n=3, edges=((0, 3),))

    def test_edge_order_normalised(self):
        g = Graph(n=3, edges=((2, 0), (1, 0)))
        assert g.edges == ((0, 1), (0, 2))

    def test_weights_follow_edge_normalisation(self):
        g = Graph(n=3, edges=((2, 0), (1, 0)), weights=(5, 7))
        assert g.edges == ((0, 1), (0, 2))
        assert g.weights == (7, 5)

    def test_maxcut_kind_rejects_linears(self):
        with pytest.raises(InvalidInputError):
            QuboInstance(n=2, couplings=((0, 1, 1),), linears=((0, 1),), kind="maxcut_unweighted")

    def test_unweighted_kind_rejects_other_couplings(self):
        with pytest.raises(InvalidInputError):
            QuboInstance(n=2, couplings=((0, 1, 2),), linears=(), kind="maxcut_unweighted")

    def test_zero_couplings_dropped(self):
        inst = QuboInstance(n=2, couplings=((0, 1, 0),), linears=())
        assert inst.couplings == ()


class TestInstanceRecords:
    @pytest.mark.parametrize("seed", range(3))
    def test_round_trip(self, seed):
        inst = random_qubo(5, weighted=True, seed=seed)
        record = instance_to_record(inst, f"inst-{seed}", seed)
        ident, rec_seed, back = instance_from_record(record)
        assert ident == f"inst-{seed}"
        assert rec_seed == seed
        assert back == inst

    def test_none_seed(self):
        record = instance_to_record(triangle(), "tri", None)
        _, seed, back = instance_from_record(record)
        assert seed is None
        assert back == triangle()
