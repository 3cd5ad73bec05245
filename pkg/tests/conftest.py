import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from flexcomm.fitness import Partition
from flexcomm.graph import Graph, load_edge_list

DATA_DIR = Path(__file__).parent.parent / "src" / "flexcomm" / "data"


@pytest.fixture(scope="session")
def karate() -> Graph:
    return load_edge_list((DATA_DIR / "karate.edges").read_text())


@pytest.fixture(scope="session")
def karate_truth(karate) -> Partition:
    lines = [line.split()
             for line in (DATA_DIR / "karate_factions.communities").read_text().splitlines()
             if line and not line.startswith("#")]
    return Partition.from_communities(
        karate.node_count,
        [{karate.index_of(tok) for tok in line} for line in lines])


@pytest.fixture
def bridge_graph() -> Graph:
    return Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
