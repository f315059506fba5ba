import networkx as nx
import pytest

from app.core.graphs import bipartite_hard, cycle, directed_bipartite, make_graph, path, random_bounded, star
from app.core.network import Network
from app.errors import ConfigurationError, ParameterError
from app.protocols.library import RoundRobinProtocol
from app.repositories.graph_repo import read_edge_list, write_edge_list
from app.schemas.specs import GraphSpec


def test_star_has_center_zero():
    network = star(4)
    assert network.n == 5
    assert network.max_degree == 4
    assert network.neighbors(0) == {1, 2, 3, 4}
    assert all(network.neighbors(v) == {0} for v in range(1, 5))


def test_single_node_reports_degree_one():
    assert path(1).max_degree == 1


def test_balls_are_closed(path3):
    assert path3.closed_neighborhood(0) == {0, 1}
    assert path3.ball(0, 2) == {0, 1, 2}
    assert path(5).ball(2, 1) == {1, 2, 3}


def test_adjacency_matrix_matches_arcs(star4):
    matrix = star4.adjacency_matrix()
    assert matrix.sum() == 8
    assert matrix[0, 3] == matrix[3, 0] == 1.0


def test_cycle_needs_three_nodes():
    assert cycle(5).max_degree == 2
    with pytest.raises(ParameterError):
        cycle(2)


def test_random_bounded_respects_degree_and_connectivity():
    network = random_bounded(40, 3, seed=8)
    assert network.n == 40
    assert network.max_degree <= 3
    assert nx.is_connected(network.to_networkx())


def test_random_bounded_is_seeded():
    assert random_bounded(30, 4, seed=1).edges() == random_bounded(30, 4, seed=1).edges()
    assert random_bounded(30, 4, seed=1).edges() != random_bounded(30, 4, seed=2).edges()


def test_random_bounded_rejects_paths_with_degree_one():
    with pytest.raises(ParameterError):
        random_bounded(5, 1, seed=0)


def test_bipartite_hard_plan_is_collision_free():
    network = bipartite_hard(16, 4, seed=2)
    assert network.n == 32
    assert len(network.plan) == 4
    assert all(len(senders) == 4 for senders in network.plan)
    assert all(len(network.neighbors(r)) == 4 for r in range(16, 32))
    assert RoundRobinProtocol(network).length == 4


def test_bipartite_hard_parameter_checks():
    with pytest.raises(ParameterError):
        bipartite_hard(10, 4, seed=0)
    with pytest.raises(ParameterError):
        bipartite_hard(8, 4, seed=0)


def test_directed_bipartite_points_left_to_right():
    network = directed_bipartite(3)
    assert network.directed
    assert network.neighbors(0) == {3, 4, 5}
    assert network.neighbors(4) == frozenset()
    assert network.in_neighbors(4) == {0, 1, 2}
    assert network.plan == ((0,), (1,), (2,))


def test_network_validation():
    with pytest.raises(ConfigurationError):
        Network((frozenset({0}),))
    with pytest.raises(ConfigurationError):
        Network((frozenset({1}), frozenset()))
    with pytest.raises(ConfigurationError):
        Network.from_edges(2, [(0, 2)])


def test_make_graph_from_specs():
    assert make_graph(GraphSpec(kind="star", delta=3)).n == 4
    assert make_graph(GraphSpec(kind="path", n=6)).max_degree == 2
    assert make_graph(GraphSpec(kind="random_bounded", n=12, delta=3, seed=4)).name == "random_bounded:12:3:4"


def test_edge_list_round_trip(tmp_path):
    original = random_bounded(20, 4, seed=5)
    target = tmp_path / "g.txt"
    write_edge_list(original, target)

    loaded = make_graph(GraphSpec(kind="file", path=str(target)))
    assert loaded.adjacency == original.adjacency


def test_edge_list_header_is_checked(tmp_path):
    target = tmp_path / "bad.txt"
    target.write_text("3 2 0\n0 1\n", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        read_edge_list(target)
    with pytest.raises(ConfigurationError):
        read_edge_list(tmp_path / "missing.txt")
