"""
Shared fixtures

Puts backend/ on sys.path and provides the worked-example trie, a four-router
line scenario and the bundled link failure scenario.
"""

import sys
from pathlib import Path

# Add backend to path
backend_dir = Path(__file__).parent.parent
if str(backend_dir) not in sys.path:
    sys.path.insert(0, str(backend_dir))

import pytest

from app.framework.fib.trie import FibTrie
from app.framework.foundation.names import parse_name
from app.schemas.scenario import ScenarioConfig

# faces of the six-leaf worked example
F1, F2, F3, F4, F5 = 1, 2, 3, 4, 5


def build_worked_example() -> FibTrie:
    """
    Six leaves; node H exists but holds no faces anywhere below it

        /A/B/D -> f1   /A/B/F -> f1   /A/C -> f2
        /A/C/G -> f3   /K -> f4       /K/L -> f5
        /A/H/M (drained)
    """
    trie = FibTrie()
    trie.insert(parse_name("/A/B/D"), F1)
    trie.insert(parse_name("/A/B/F"), F1)
    trie.insert(parse_name("/A/C"), F2)
    trie.insert(parse_name("/A/C/G"), F3)
    trie.insert(parse_name("/K"), F4)
    trie.insert(parse_name("/K/L"), F5)
    trie.insert(parse_name("/A/H/M"), 9)
    trie.remove_face_from_leaf(parse_name("/A/H/M"), 9)
    return trie


def line_scenario_data(strategy: str = "approximate") -> dict:
    """C1 - R1 - R2 - R3 - R4 - P1, 10 ms links, 8 interests/s for 5 s"""
    return {
        "name": "line",
        "strategy": strategy,
        "seed": 3,
        "duration": 5.0,
        "topology": {
            "routers": {"R1": "edge", "R2": "core", "R3": "core", "R4": "edge"},
            "links": [
                {"a": "R1", "b": "R2"},
                {"a": "R2", "b": "R3"},
                {"a": "R3", "b": "R4"},
            ],
        },
        "consumer_apps": [{"name": "C1", "router": "R1", "prefix": "/d0/c0", "start": 0.0}],
        "producer_apps": [{"name": "P1", "router": "R4", "prefixes": ["/d0"]}],
    }


def square_scenario_data(strategy: str = "approximate") -> dict:
    """R1 reaches R4 over R3 and over R2; no failure"""
    return {
        "name": "square",
        "strategy": strategy,
        "seed": 1,
        "duration": 3.0,
        "topology": {
            "routers": {"R1": "edge", "R2": "core", "R3": "core", "R4": "edge"},
            "links": [
                {"a": "R1", "b": "R3"},
                {"a": "R1", "b": "R2"},
                {"a": "R3", "b": "R4"},
                {"a": "R2", "b": "R4"},
            ],
        },
        "consumer_apps": [{"name": "C1", "router": "R1", "prefix": "/P1", "start": 0.0}],
        "producer_apps": [{"name": "P1", "router": "R4", "prefixes": ["/P1"]}],
    }


@pytest.fixture
def worked_example_trie() -> FibTrie:
    return build_worked_example()


@pytest.fixture
def line_scenario() -> ScenarioConfig:
    return ScenarioConfig(**line_scenario_data())


@pytest.fixture
def square_scenario() -> ScenarioConfig:
    return ScenarioConfig(**square_scenario_data())


@pytest.fixture
def link_failure_scenario() -> ScenarioConfig:
    from app.core.config_loader import load_scenario

    return load_scenario("config/scenarios/fig9.scn")


class RecordingApp:
    """Consumer stand-in that keeps every packet handed to it"""

    def __init__(self, name: str = "app") -> None:
        self.name = name
        self.packets = []

    def receive(self, packet) -> None:
        self.packets.append(packet)


def make_network(strategy: str, routers: dict, links: list, trace: bool = True):
    """
    Network with zero-config routers for strategy-level tests

    Args:
        routers: name -> role
        links: (a, b) pairs, 10 ms each

    Returns:
        (loop, collector, network)
    """
    from app.framework.metrics.collector import MetricsCollector
    from app.framework.sim.event_loop import EventLoop
    from app.framework.sim.network import Network

    loop = EventLoop()
    collector = MetricsCollector(trace_enabled=trace)
    network = Network(loop, collector, strategy=strategy)
    for name, role in routers.items():
        network.add_router(name, role=role)
    for a, b in links:
        network.connect(a, b, delay=0.01)
    return loop, collector, network


def face_towards(network, router: str, peer: str) -> int:
    """Face of `router` on its first link to `peer`"""
    link = network.links_between(router, peer)[0]
    return link.endpoint_face(network.routers[router])
