"""
Test Suite for the forwarding strategies
Approximate forwarding, NACK repair, discovery flooding and the single-path baseline
"""

import pytest

from app.core.exceptions import StrategyNotFoundError
from app.framework.apps.producer import Producer
from app.framework.foundation.names import parse_name
from app.framework.foundation.packets import Data, FaceKind, Interest, Nack, NackReason
from app.framework.sim.runner import run
from app.framework.strategies.base_strategy import BaseStrategy
from app.framework.strategies.registry import StrategyRegistry
from app.schemas.scenario import ScenarioConfig

from tests.conftest import RecordingApp, face_towards, make_network

EDGE = "edge"
CORE = "core"


def _consumer_at(network, router: str) -> tuple:
    app = RecordingApp("C")
    face = network.routers[router].add_app_face(app, FaceKind.CONSUMER)
    return app, face


class TestStrategyRegistry:
    """Strategy lookup by id"""

    def test_known_strategies(self):
        """Test both strategies are registered"""
        assert StrategyRegistry.names() == ["approximate", "self-learning"]

    def test_alias_resolves(self):
        """Test samba is an alias of approximate"""
        assert StrategyRegistry.get("samba") is StrategyRegistry.get("approximate")

    def test_unknown_strategy(self):
        """Test an unknown id raises StrategyNotFoundError"""
        with pytest.raises(StrategyNotFoundError):
            StrategyRegistry.get("flooding")

    def test_register_rejects_non_strategy(self):
        """Test only BaseStrategy subclasses can be registered"""
        with pytest.raises(ValueError):
            StrategyRegistry.register("bogus", dict)

    def test_metadata(self):
        """Test metadata distinguishes multipath from single path"""
        _, _, network = make_network("approximate", {"R1": EDGE}, [])
        assert network.routers["R1"].strategy.metadata.multipath
        _, _, network = make_network("self-learning", {"R1": EDGE}, [])
        assert not network.routers["R1"].strategy.metadata.multipath
        assert isinstance(network.routers["R1"].strategy, BaseStrategy)


class TestApproximateInterest:
    """Regular interests under the approximate strategy"""

    def test_empty_fib_nacks_consumer(self):
        """Test an edge router with an empty FIB answers NoRoute"""
        loop, _, network = make_network("approximate", {"R1": EDGE, "R2": CORE}, [("R1", "R2")])
        app, face = _consumer_at(network, "R1")
        network.routers["R1"].receive_from_app(Interest(parse_name("/p/1"), 5), face)
        loop.run()
        assert len(app.packets) == 1
        assert isinstance(app.packets[0], Nack)
        assert app.packets[0].reason is NackReason.NO_ROUTE

    def test_approximate_path_reaches_producer(self):
        """Test a sibling prefix's entry carries the interest to the right producer"""
        loop, collector, network = make_network("approximate", {"R1": EDGE, "R2": EDGE}, [("R1", "R2")])
        producer = Producer("P", [parse_name("/d1")])
        producer.attach(network.routers["R2"])
        network.routers["R1"].fib_insert(parse_name("/d1/c9"), face_towards(network, "R1", "R2"))

        app, face = _consumer_at(network, "R1")
        network.routers["R1"].receive_from_app(Interest(parse_name("/d1/c0/3"), 5), face)
        loop.run()

        assert [type(p) for p in app.packets] == [Data]
        assert producer.served == 1
        assert collector.events["approximate-forward"] == 1

    def test_wrong_producer_answers_no_route(self):
        """Test an approximate path ending at a producer of another prefix yields NoRoute and drops the leaf used"""
        loop, _, network = make_network("approximate", {"R1": EDGE, "R2": EDGE}, [("R1", "R2")])
        producer = Producer("P", [parse_name("/q")])
        producer.attach(network.routers["R2"])
        r1 = network.routers["R1"]
        r1.fib_insert(parse_name("/d0/c1"), face_towards(network, "R1", "R2"))
        r2_before = network.routers["R2"].fib_faces()

        app, face = _consumer_at(network, "R1")
        r1.receive_from_app(Interest(parse_name("/d0/c5/0"), 5), face)
        loop.run()

        assert len(app.packets) == 1
        assert app.packets[0].reason is NackReason.NO_ROUTE
        assert r1.fib.faces_of(parse_name("/d0/c1")) is None
        assert r1.fib.leaf_count() == 0
        assert network.routers["R2"].fib_faces() == r2_before
        assert producer.served == 0

    def test_dfs_leaf_with_alternative_becomes_alt_route(self):
        """Test the leaf a DFS lookup used falls back to its next face"""
        loop, _, network = make_network(
            "approximate", {"R1": EDGE, "R2": EDGE, "R3": CORE}, [("R1", "R2"), ("R1", "R3")]
        )
        Producer("P", [parse_name("/q")]).attach(network.routers["R2"])
        r1 = network.routers["R1"]
        f2, f3 = face_towards(network, "R1", "R2"), face_towards(network, "R1", "R3")
        r1.fib_insert(parse_name("/d0/c1"), f2)
        r1.fib_insert(parse_name("/d0/c1"), f3)

        app, face = _consumer_at(network, "R1")
        r1.receive_from_app(Interest(parse_name("/d0/c5/0"), 5), face)
        loop.run()

        assert app.packets[0].reason is NackReason.ALT_ROUTE
        assert r1.fib_faces()["/d0/c1"] == (f3,)

    def test_no_route_with_alternative_becomes_alt_route(self):
        """Test leaf [f2, f3] with NoRoute from f2 sends AltRoute and keeps [f3]"""
        loop, _, network = make_network(
            "approximate", {"R1": EDGE, "R2": CORE, "R3": CORE}, [("R1", "R2"), ("R1", "R3")]
        )
        r1 = network.routers["R1"]
        f2, f3 = face_towards(network, "R1", "R2"), face_towards(network, "R1", "R3")
        r1.fib_insert(parse_name("/p"), f2)
        r1.fib_insert(parse_name("/p"), f3)

        app, face = _consumer_at(network, "R1")
        r1.receive_from_app(Interest(parse_name("/p/1"), 5), face)
        loop.run()

        assert len(app.packets) == 1
        assert app.packets[0].reason is NackReason.ALT_ROUTE
        assert r1.fib_faces()["/p"] == (f3,)

    def test_no_route_on_last_face_removes_entry(self):
        """Test leaf [f2] with NoRoute from f2 removes the entry and forwards NoRoute"""
        loop, _, network = make_network("approximate", {"R1": EDGE, "R2": CORE}, [("R1", "R2")])
        r1 = network.routers["R1"]
        r1.fib_insert(parse_name("/p"), face_towards(network, "R1", "R2"))

        app, face = _consumer_at(network, "R1")
        r1.receive_from_app(Interest(parse_name("/p/1"), 5), face)
        loop.run()

        assert app.packets[0].reason is NackReason.NO_ROUTE
        assert "/p" not in r1.fib_faces()
        assert r1.fib.leaf_count() == 0

    def test_alt_route_forwarded_verbatim(self):
        """Test an AltRoute crossing a router leaves that router's FIB alone"""
        loop, _, network = make_network(
            "approximate",
            {"R0": EDGE, "R1": CORE, "R2": CORE, "R3": CORE},
            [("R0", "R1"), ("R1", "R2"), ("R1", "R3")],
        )
        r0, r1 = network.routers["R0"], network.routers["R1"]
        r0.fib_insert(parse_name("/p"), face_towards(network, "R0", "R1"))
        r1.fib_insert(parse_name("/p"), face_towards(network, "R1", "R2"))
        r1.fib_insert(parse_name("/p"), face_towards(network, "R1", "R3"))
        before = r0.fib_faces()

        app, face = _consumer_at(network, "R0")
        r0.receive_from_app(Interest(parse_name("/p/1"), 5), face)
        loop.run()

        assert app.packets[0].reason is NackReason.ALT_ROUTE
        assert r0.fib_faces() == before


class TestDiscoveryFlooding:
    """Discovery interests"""

    def test_fresh_discovery_copies(self):
        """Test a fresh discovery leaves on every network face but the arrival face"""
        _, collector, network = make_network(
            "approximate",
            {"R0": CORE, "R1": CORE, "R2": CORE, "R3": CORE},
            [("R0", "R1"), ("R0", "R2"), ("R0", "R3")],
        )
        r0 = network.routers["R0"]
        r0.receive(Interest(parse_name("/p/1"), 9, is_discovery=True), face_towards(network, "R0", "R1"))
        assert collector.transmissions["discovery-interest"] == 2

        r0.receive(Interest(parse_name("/q/1"), 9, is_discovery=True), face_towards(network, "R0", "R1"))
        assert collector.transmissions["discovery-interest"] == 4

    def test_duplicate_discovery_aggregated(self):
        """Test a second copy via another face is recorded, not re-broadcast"""
        _, collector, network = make_network(
            "approximate", {"R0": CORE, "R1": CORE, "R2": CORE}, [("R0", "R1"), ("R0", "R2")]
        )
        r0 = network.routers["R0"]
        f1, f2 = face_towards(network, "R0", "R1"), face_towards(network, "R0", "R2")
        interest = Interest(parse_name("/p/1"), 9, is_discovery=True)
        r0.receive(interest, f1)
        r0.receive(interest, f2)
        assert collector.transmissions["discovery-interest"] == 1
        assert r0.pit.get(parse_name("/p/1"), 0.0).in_faces == [f1, f2]

    def test_self_learning_drops_duplicates(self):
        """Test the baseline keeps only the first arrival face"""
        _, collector, network = make_network(
            "self-learning", {"R0": CORE, "R1": CORE, "R2": CORE}, [("R0", "R1"), ("R0", "R2")]
        )
        r0 = network.routers["R0"]
        f1, f2 = face_towards(network, "R0", "R1"), face_towards(network, "R0", "R2")
        interest = Interest(parse_name("/p/1"), 9, is_discovery=True)
        r0.receive(interest, f1)
        r0.receive(interest, f2)
        assert r0.pit.get(parse_name("/p/1"), 0.0).in_faces == [f1]
        assert collector.events["drop-loop"] == 1

    def test_serving_producer_takes_discovery(self):
        """Test a discovery at the serving producer's router is answered, not flooded"""
        loop, collector, network = make_network("approximate", {"R0": EDGE, "R1": CORE}, [("R0", "R1")])
        producer = Producer("P", [parse_name("/p")])
        producer.attach(network.routers["R0"])
        network.routers["R0"].receive(
            Interest(parse_name("/p/1"), 9, is_discovery=True), face_towards(network, "R0", "R1")
        )
        loop.run()
        assert collector.transmissions["discovery-interest"] == 0
        assert collector.transmissions["discovery-data"] == 1
        assert producer.served == 1


class TestDiscoveryRuns:
    """End-to-end discovery on small topologies"""

    def test_square_multipath(self, square_scenario):
        """Test one discovery leaves R1 with both equal-cost faces"""
        report = run(square_scenario)
        assert len(report.fibs["R1"]["/P1"]) == 2
        assert "/P1" in report.fibs["R2"] and "/P1" in report.fibs["R3"]
        assert report.max_faces_per_leaf() == 2

    def test_square_single_path(self, square_scenario):
        """Test the baseline keeps one face per leaf"""
        report = run(square_scenario.model_copy(update={"strategy": "self-learning"}))
        assert all(len(faces) == 1 for fib in report.fibs.values() for faces in fib.values())
        assert len(report.fibs["R1"]["/P1"]) == 1

    @pytest.mark.parametrize("strategy", ["approximate", "self-learning"])
    def test_discovery_loop_freedom(self, square_scenario, strategy):
        """Test each router sends a given discovery at most once per face, within the directed link bound"""
        report = run(square_scenario.model_copy(update={"strategy": strategy}), trace=True)
        sent = report.trace[report.trace["event"] == "tx-discovery-interest"]
        assert not sent.duplicated(["node", "name", "nonce", "face"]).any()
        directed_links = 2 * 4
        assert (sent.groupby("nonce").size() <= directed_links).all()

    def test_unequal_paths_both_learned(self):
        """Test the copy that took the longer way round still leaves a second face behind"""
        scenario = ScenarioConfig(
            name="unequal",
            strategy="approximate",
            seed=1,
            duration=2.0,
            topology={
                "routers": {"R1": "edge", "R2": "core", "R3": "core", "R5": "core", "R4": "edge"},
                "links": [
                    {"a": "R1", "b": "R2"},
                    {"a": "R2", "b": "R4"},
                    {"a": "R1", "b": "R3"},
                    {"a": "R3", "b": "R5"},
                    {"a": "R5", "b": "R4"},
                ],
            },
            consumer_apps=[{"name": "C1", "router": "R1", "prefix": "/P1", "start": 0.0}],
            producer_apps=[{"name": "P1", "router": "R4", "prefixes": ["/P1"]}],
        )
        report = run(scenario)
        assert max(len(fib.get("/P1", ())) for fib in report.fibs.values()) >= 2
        assert len(report.fibs["R1"]["/P1"]) == 2
