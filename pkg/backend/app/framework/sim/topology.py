"""
Topology - ISP-like router graphs and application placement

Generated topologies follow the usual desk-scale ISP shape: a random 3-regular
core (one router gets degree 4 when R_c is odd, since 3·R_c must be even) and
edge routers each wired to 1-3 distinct core routers. Consumers and producers
hang off random edge routers.

Workload names are hierarchical: M domain prefixes `/d<m>` are spread over the
producers (round-robin first, so every producer serves at least one, then at
random) and consumer i requests `/d<m>/c<i>/<seq>` for one random domain m.

Usage:
    >>> topology = generate_topology(ScenarioConfig(consumers=10, producers=4), seed=7)
    >>> topology.graph.number_of_nodes()
    37
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import networkx as nx
import numpy as np
import pandas as pd

from app.core.exceptions import ConfigurationError
from app.framework.foundation.names import Name, parse_name
from app.schemas.scenario import ExplicitTopology, GeneratedTopology, ScenarioConfig

logger = logging.getLogger(__name__)

# configuration-model draws before giving up on a simple connected core
MAX_CORE_ATTEMPTS = 1000


@dataclass
class AppPlacement:
    """A consumer or producer and the edge router it attaches to"""
    name: str
    router: str
    prefixes: List[Name]
    start: Optional[float] = None

    @property
    def prefix(self) -> Name:
        return self.prefixes[0]


@dataclass
class Topology:
    graph: nx.Graph
    consumers: List[AppPlacement] = field(default_factory=list)
    producers: List[AppPlacement] = field(default_factory=list)

    def routers(self, role: Optional[str] = None) -> List[str]:
        return [node for node, data in self.graph.nodes(data=True) if role is None or data["role"] == role]

    def core_routers(self) -> List[str]:
        return self.routers("core")

    def edge_routers(self) -> List[str]:
        return self.routers("edge")

    @property
    def total_nodes(self) -> int:
        return self.graph.number_of_nodes() + len(self.consumers) + len(self.producers)

    def producer_for(self, name: Name) -> Optional[AppPlacement]:
        for producer in self.producers:
            if any(prefix.is_prefix_of(name) for prefix in producer.prefixes):
                return producer
        return None

    def mean_path_hops(self) -> float:
        """Mean router hops between each consumer's router and its serving producer's router"""
        hops = []
        for consumer in self.consumers:
            producer = self.producer_for(consumer.prefix)
            if producer is not None:
                hops.append(nx.shortest_path_length(self.graph, consumer.router, producer.router))
        return float(np.mean(hops)) if hops else 0.0

    def links_frame(self) -> pd.DataFrame:
        rows = [
            {
                "a": a,
                "b": b,
                "role_a": self.graph.nodes[a]["role"],
                "role_b": self.graph.nodes[b]["role"],
                "delay": data["delay"],
                "parallel": data["parallel"],
            }
            for a, b, data in self.graph.edges(data=True)
        ]
        return pd.DataFrame(rows, columns=["a", "b", "role_a", "role_b", "delay", "parallel"])

    def apps_frame(self) -> pd.DataFrame:
        rows = [
            {"app": app.name, "kind": kind, "router": app.router, "prefixes": " ".join(str(p) for p in app.prefixes)}
            for kind, apps in (("consumer", self.consumers), ("producer", self.producers))
            for app in apps
        ]
        return pd.DataFrame(rows, columns=["app", "kind", "router", "prefixes"])


# ============================================================================
# Generation
# ============================================================================

def _core_graph(count: int, rng: np.random.Generator) -> List[tuple]:
    """Edges of a simple connected graph where every router has degree 3 (one has 4 if count is odd)"""
    if count == 0:
        return []
    if count < 4:
        raise ConfigurationError(
            f"A 3-regular core needs at least 4 routers, got {count}",
            details={"core_routers": count},
        )
    degrees = [3] * count
    if sum(degrees) % 2:
        degrees[-1] = 4

    for _ in range(MAX_CORE_ATTEMPTS):
        multigraph = nx.configuration_model(degrees, seed=int(rng.integers(0, 2**31 - 1)))
        simple = nx.Graph(multigraph)
        if simple.number_of_edges() != multigraph.number_of_edges() or nx.number_of_selfloops(simple):
            continue
        if not nx.is_connected(simple):
            continue
        return sorted(tuple(sorted(edge)) for edge in simple.edges())

    raise ConfigurationError(
        f"Could not draw a simple connected core of {count} routers",
        details={"core_routers": count, "attempts": MAX_CORE_ATTEMPTS},
    )


def generate_topology(config: ScenarioConfig, seed: Optional[int] = None) -> Topology:
    """
    Random ISP-like topology for a scenario

    Args:
        config: scenario with a generated topology section
        seed: overrides config.seed

    Returns:
        Topology: deterministic for a fixed seed

    Raises:
        ConfigurationError: unsatisfiable degree constraints or app placement
    """
    shape = config.topology
    if not isinstance(shape, GeneratedTopology):
        raise ConfigurationError("Scenario uses an explicit topology", details={"scenario": config.name})
    seed = config.seed if seed is None else seed
    rng = np.random.default_rng(seed)

    if shape.edge_routers and shape.edge_degree_min > shape.core_routers:
        raise ConfigurationError(
            "Edge routers need more distinct core routers than exist",
            details={"edge_degree_min": shape.edge_degree_min, "core_routers": shape.core_routers},
        )

    graph = nx.Graph()
    cores = [f"core{i}" for i in range(shape.core_routers)]
    edges = [f"edge{i}" for i in range(shape.edge_routers)]
    graph.add_nodes_from(cores, role="core")
    graph.add_nodes_from(edges, role="edge")
    attrs = {"delay": config.link_delay, "parallel": config.parallel_links}

    for a, b in _core_graph(len(cores), rng):
        graph.add_edge(cores[a], cores[b], **attrs)

    high = min(shape.edge_degree_max, len(cores))
    for edge in edges:
        degree = int(rng.integers(shape.edge_degree_min, high + 1))
        for index in sorted(rng.choice(len(cores), size=degree, replace=False)):
            graph.add_edge(edge, cores[int(index)], **attrs)

    if graph.number_of_nodes() and not nx.is_connected(graph):
        raise ConfigurationError("Generated topology is not connected", details={"seed": seed})

    consumers, producers = _place_apps(config, edges, rng)
    topology = Topology(graph, consumers, producers)
    logger.info(
        f"Generated topology seed={seed}: {len(cores)} core, {len(edges)} edge, "
        f"{graph.number_of_edges()} adjacencies, C={len(consumers)}, P={len(producers)}"
    )
    return topology


def _place_apps(config: ScenarioConfig, edges: List[str], rng: np.random.Generator):
    count_c, count_p, count_m = config.consumers, config.producers, config.prefix_count
    if (count_c or count_p) and not edges:
        raise ConfigurationError("Applications need at least one edge router", details={"edge_routers": 0})
    if count_c and not count_p:
        raise ConfigurationError("Consumers need at least one producer", details={"consumers": count_c})

    owners = [m % count_p for m in range(min(count_m, count_p))]
    owners += [int(owner) for owner in rng.integers(0, count_p, size=count_m - len(owners))] if count_p else []
    domains: Dict[int, List[Name]] = {j: [] for j in range(count_p)}
    for m, owner in enumerate(owners):
        domains[owner].append(Name.of(f"d{m}"))

    producers = [
        AppPlacement(f"producer{j}", edges[int(rng.integers(0, len(edges)))], domains[j])
        for j in range(count_p)
    ]
    consumers = []
    for i in range(count_c):
        router = edges[int(rng.integers(0, len(edges)))]
        domain = int(rng.integers(0, count_m))
        consumers.append(AppPlacement(f"consumer{i}", router, [Name.of(f"d{domain}", f"c{i}")]))
    return consumers, producers


def explicit_topology(config: ScenarioConfig) -> Topology:
    """
    Topology written out in the scenario

    Raises:
        ConfigurationError: links or apps naming unknown routers
    """
    shape = config.topology
    if not isinstance(shape, ExplicitTopology):
        raise ConfigurationError("Scenario uses a generated topology", details={"scenario": config.name})

    graph = nx.Graph()
    for router, role in shape.routers.items():
        graph.add_node(router, role=role)
    for link in shape.links:
        for router in (link.a, link.b):
            if router not in graph:
                raise ConfigurationError(f"Link names unknown router '{router}'", details={"router": router})
        graph.add_edge(
            link.a,
            link.b,
            delay=link.delay if link.delay is not None else config.link_delay,
            parallel=link.parallel if link.parallel is not None else config.parallel_links,
        )

    def placed(router: str) -> str:
        if router not in graph:
            raise ConfigurationError(f"Application attached to unknown router '{router}'", details={"router": router})
        return router

    consumers = [
        AppPlacement(spec.name, placed(spec.router), [parse_name(spec.prefix)], spec.start)
        for spec in config.consumer_apps
    ]
    producers = [
        AppPlacement(spec.name, placed(spec.router), [parse_name(p) for p in spec.prefixes])
        for spec in config.producer_apps
    ]
    return Topology(graph, consumers, producers)


def build_topology(config: ScenarioConfig, seed: Optional[int] = None) -> Topology:
    if config.is_explicit:
        return explicit_topology(config)
    return generate_topology(config, seed)
