import networkx as nx
import pytest

from relloc.graph import Graph


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges())
    return h


@pytest.fixture
def nxify():
    return to_nx
