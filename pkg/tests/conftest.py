import functools

import pytest

from ghzfusion import Architecture, build_network
from ghzfusion.syndrome import build_syndrome_graphs


@functools.lru_cache(maxsize=None)
def bundle_for(architecture: Architecture, d: int = 3, hub_rotation: int = 0):
    network = build_network(d, architecture)
    return build_syndrome_graphs(network, architecture, hub_rotation)


@pytest.fixture(scope="session")
def cyclic_bundle():
    return bundle_for(Architecture.CYCLIC, 3)


@pytest.fixture(scope="session")
def minimal_bundle():
    return bundle_for(Architecture.MINIMAL, 3)
