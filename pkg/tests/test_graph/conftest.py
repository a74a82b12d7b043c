import pytest

from dgdflow.graph import Graph, build_graph, graph_from_preset


@pytest.fixture()
def path2() -> Graph:
    return build_graph(2, [(1, 2)])


@pytest.fixture()
def ring4() -> Graph:
    return graph_from_preset("ring", 4)


@pytest.fixture()
def split4() -> Graph:
    return build_graph(4, [(1, 2), (3, 4)])
