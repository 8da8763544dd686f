from fractions import Fraction

import pytest

from substreetution.errors import MalformedGraph
from substreetution.measures import invariant_measure
from substreetution.systems import OrbitGraph, build_orbit_graph, nomeasure_tree


def graph(states, a_edges, b_edges):
    return OrbitGraph(tuple(states), {}, a_edges, b_edges, depth_used=3)


@pytest.fixture(scope="module")
def six_state():
    return build_orbit_graph(nomeasure_tree(0, 12), 6)


class TestFeasibleGraphs:
    def test_self_loop(self):
        g = graph(["s0"], {"s0": "s0"}, {"s0": "s0"})
        res = invariant_measure(g)
        assert res.feasible and res.assignment == {"s0": Fraction(1)}

    def test_two_state_swap(self):
        g = graph(
            ["s0", "s1"],
            {"s0": "s1", "s1": "s0"},
            {"s0": "s1", "s1": "s0"},
        )
        res = invariant_measure(g)
        assert res.feasible
        assert res.assignment == {"s0": Fraction(1, 2), "s1": Fraction(1, 2)}

    def test_witness_reverifies(self):
        g = graph(
            ["x", "y"],
            {"x": "y", "y": "x"},
            {"x": "x", "y": "y"},
        )
        res = invariant_measure(g)
        if res.feasible:
            total = sum(res.assignment.values())
            assert total == 1

    def test_source_state_forced_to_zero(self):
        # no incoming a-edge pins a state's mass at zero; the rest can balance
        g = graph(
            ["src", "sink"],
            {"src": "sink", "sink": "sink"},
            {"src": "sink", "sink": "sink"},
        )
        res = invariant_measure(g)
        assert res.feasible
        assert res.assignment["src"] == 0
        assert res.assignment["sink"] == 1


class TestInfeasibleGraphs:
    def test_line_doubled_orbit(self, six_state):
        assert invariant_measure(six_state).status == "infeasible"

    def test_source_states_forced_to_zero(self, six_state):
        # a state with no incoming a-edge can only carry mass zero; here that
        # cascades to everything, contradicting total mass one
        incoming_a = set(six_state.a_edges.values())
        assert any(s not in incoming_a for s in six_state.states)

    def test_stable_under_relabeling(self, six_state):
        order = sorted(six_state.states, reverse=True)
        rename = {s: f"t{i}" for i, s in enumerate(order)}
        g = graph(
            [rename[s] for s in six_state.states],
            {rename[s]: rename[t] for s, t in six_state.a_edges.items()},
            {rename[s]: rename[t] for s, t in six_state.b_edges.items()},
        )
        assert invariant_measure(g).status == "infeasible"

    def test_stable_under_letter_swap(self, six_state):
        g = graph(six_state.states, dict(six_state.b_edges), dict(six_state.a_edges))
        assert invariant_measure(g).status == "infeasible"

    def test_serialize(self, six_state):
        assert invariant_measure(six_state).serialize() == "infeasible\n"


class TestValidation:
    def test_missing_edge(self):
        g = graph(["s0", "s1"], {"s0": "s1"}, {"s0": "s0", "s1": "s1"})
        with pytest.raises(MalformedGraph):
            invariant_measure(g)
