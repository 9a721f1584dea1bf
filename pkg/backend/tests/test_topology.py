"""
Test Suite for topology generation and explicit topologies
"""

import networkx as nx
import pytest

from app.core.exceptions import ConfigurationError
from app.framework.foundation.names import parse_name
from app.framework.sim.topology import build_topology, explicit_topology, generate_topology
from app.schemas.scenario import ScenarioConfig


@pytest.fixture
def isp_scenario():
    return ScenarioConfig(consumers=10, producers=4, seed=7)


class TestGeneratedShape:
    """ISP-like shape of generated graphs"""

    def test_router_counts(self, isp_scenario):
        """Test the default shape has 21 core and 16 edge routers"""
        topology = generate_topology(isp_scenario)
        assert len(topology.core_routers()) == 21
        assert len(topology.edge_routers()) == 16
        assert topology.graph.number_of_nodes() == 37

    def test_core_degrees(self, isp_scenario):
        """Test every core router has three core neighbours except one with four"""
        topology = generate_topology(isp_scenario)
        cores = set(topology.core_routers())
        degrees = sorted(
            sum(1 for peer in topology.graph.neighbors(core) if peer in cores)
            for core in cores
        )
        assert degrees == [3] * 20 + [4]

    def test_edge_attachment(self, isp_scenario):
        """Test edge routers reach 1-3 core routers and never another edge router"""
        topology = generate_topology(isp_scenario)
        cores = set(topology.core_routers())
        for edge in topology.edge_routers():
            peers = list(topology.graph.neighbors(edge))
            assert 1 <= len(peers) <= 3
            assert all(peer in cores for peer in peers)

    def test_connected(self, isp_scenario):
        """Test the generated graph is connected"""
        assert nx.is_connected(generate_topology(isp_scenario).graph)

    def test_no_apps_still_connected(self):
        """Test C=P=0 still yields a connected router graph"""
        topology = generate_topology(ScenarioConfig(consumers=0, producers=0), seed=3)
        assert nx.is_connected(topology.graph)
        assert topology.consumers == [] and topology.producers == []

    def test_deterministic(self, isp_scenario):
        """Test the same seed gives the same links and placement"""
        first = generate_topology(isp_scenario, seed=11)
        second = generate_topology(isp_scenario, seed=11)
        assert first.links_frame().equals(second.links_frame())
        assert first.apps_frame().equals(second.apps_frame())

    def test_seed_changes_graph(self, isp_scenario):
        """Test different seeds give different cores"""
        first = generate_topology(isp_scenario, seed=1).links_frame()
        second = generate_topology(isp_scenario, seed=2).links_frame()
        assert not first.equals(second)

    def test_too_few_core_routers(self):
        """Test a 3-regular core below four routers is rejected"""
        scenario = ScenarioConfig(topology={"core_routers": 3, "edge_routers": 2}, consumers=0, producers=0)
        with pytest.raises(ConfigurationError):
            generate_topology(scenario)

    def test_consumers_need_producers(self):
        """Test consumers without producers are rejected"""
        with pytest.raises(ConfigurationError):
            generate_topology(ScenarioConfig(consumers=3, producers=0))

    def test_parallel_and_delay_attributes(self):
        """Test every adjacency carries the scenario delay and k"""
        topology = generate_topology(ScenarioConfig(parallel_links=5, link_delay=0.02, consumers=0, producers=0))
        frame = topology.links_frame()
        assert (frame["parallel"] == 5).all()
        assert (frame["delay"] == 0.02).all()


class TestPlacement:
    """Consumers, producers and their names"""

    def test_apps_on_edge_routers(self, isp_scenario):
        """Test applications attach to edge routers only"""
        topology = generate_topology(isp_scenario)
        edges = set(topology.edge_routers())
        assert all(app.router in edges for app in topology.consumers + topology.producers)

    def test_every_producer_has_a_domain(self):
        """Test round-robin ownership gives each producer at least one prefix"""
        topology = generate_topology(ScenarioConfig(consumers=20, producers=6, prefixes=9), seed=4)
        assert all(producer.prefixes for producer in topology.producers)
        owned = sorted(str(p) for producer in topology.producers for p in producer.prefixes)
        assert owned == sorted(f"/d{m}" for m in range(9))

    def test_consumer_names_are_served(self, isp_scenario):
        """Test each consumer prefix /d<m>/c<i> is under some producer's domain"""
        topology = generate_topology(isp_scenario)
        for index, consumer in enumerate(topology.consumers):
            assert consumer.prefix.components[-1] == f"c{index}"
            assert topology.producer_for(consumer.prefix.append("1")) is not None

    def test_total_nodes(self, isp_scenario):
        """Test N counts routers and applications"""
        topology = generate_topology(isp_scenario)
        assert topology.total_nodes == 37 + 10 + 4 == isp_scenario.total_nodes

    def test_mean_path_hops(self, isp_scenario):
        """Test consumers sit a few router hops from their producers"""
        hops = generate_topology(isp_scenario).mean_path_hops()
        assert 0 <= hops <= 6


class TestExplicitTopology:
    """Hand-written graphs"""

    def test_square(self, square_scenario):
        """Test the square scenario keeps its routers, links and apps"""
        topology = build_topology(square_scenario)
        assert sorted(topology.graph.nodes) == ["R1", "R2", "R3", "R4"]
        assert topology.graph.number_of_edges() == 4
        assert topology.consumers[0].router == "R1"
        assert topology.producers[0].prefixes == [parse_name("/P1")]
        assert topology.mean_path_hops() == 2

    def test_unknown_router_in_link(self, square_scenario):
        """Test a link to an undeclared router is rejected"""
        data = square_scenario.model_dump()
        data["topology"]["links"].append({"a": "R1", "b": "R9"})
        with pytest.raises(ConfigurationError):
            explicit_topology(ScenarioConfig(**data))

    def test_unknown_router_for_app(self, square_scenario):
        """Test an application on an undeclared router is rejected"""
        data = square_scenario.model_dump()
        data["producer_apps"][0]["router"] = "R9"
        with pytest.raises(ConfigurationError):
            explicit_topology(ScenarioConfig(**data))

    def test_generate_rejects_explicit(self, square_scenario):
        """Test the generator refuses an explicit scenario"""
        with pytest.raises(ConfigurationError):
            generate_topology(square_scenario)
