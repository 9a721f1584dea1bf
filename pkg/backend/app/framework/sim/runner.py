"""
Simulation runner - builds a network from a scenario, runs it, reports metrics

A run owns one event loop, one collector and one random generator; nothing is
shared between runs, so sweeps can run them in separate processes. The same
(scenario, seed) always yields the same report and the same trace.

Usage:
    >>> from app.framework.sim.runner import run
    >>> report = run(scenario, trace=True)
    >>> report.avg_fib_entries("core")
"""

import logging
from typing import Dict, List, Optional

import numpy as np

from app.framework.apps.consumer import Consumer
from app.framework.apps.producer import Producer
from app.framework.metrics.collector import MetricsCollector
from app.framework.metrics.report import MetricsReport
from app.framework.sim.event_loop import EventLoop
from app.framework.sim.network import BfdMonitor, Network
from app.framework.sim.topology import Topology, build_topology
from app.schemas.scenario import ScenarioConfig

logger = logging.getLogger(__name__)

# stream of the run generator, kept apart from the topology generator of the same seed
_RUN_STREAM = 1


class Simulation:
    """One scenario instantiated on one seed"""

    def __init__(self, scenario: ScenarioConfig, trace: bool = False, seed: Optional[int] = None) -> None:
        self.scenario = scenario
        self.seed = scenario.seed if seed is None else seed
        self.loop = EventLoop()
        self.collector = MetricsCollector(trace_enabled=trace)
        self.rng = np.random.default_rng([self.seed, _RUN_STREAM])
        self.network = Network(
            self.loop,
            self.collector,
            strategy=scenario.strategy,
            interest_lifetime=scenario.timers.interest_lifetime,
            tmp=scenario.timers.tmp,
            bfd=BfdMonitor(
                interval=scenario.bfd.interval,
                dead_multiplier=scenario.bfd.dead_multiplier,
                enabled=scenario.bfd.enabled,
            ),
        )
        self.topology: Optional[Topology] = None
        self.consumers: List[Consumer] = []
        self.producers: List[Producer] = []
        self._built = False

    # ============================================================================
    # Construction
    # ============================================================================

    def build(self) -> "Simulation":
        """
        Create routers, links, applications and the failure schedule

        Raises:
            ConfigurationError: invalid topology, placement or failure
        """
        if self._built:
            return self
        scenario = self.scenario
        self.topology = build_topology(scenario, self.seed)
        graph = self.topology.graph

        for router, data in graph.nodes(data=True):
            self.network.add_router(router, role=data["role"])
        for a, b, data in graph.edges(data=True):
            self.network.connect(a, b, delay=data["delay"], parallel=data["parallel"])

        for placement in self.topology.producers:
            producer = Producer(placement.name, placement.prefixes, payload_size=scenario.workload.payload_size)
            producer.attach(self.network.routers[placement.router])
            self.producers.append(producer)

        workload = scenario.workload
        for placement in self.topology.consumers:
            consumer = Consumer(
                placement.name,
                placement.prefix,
                self.loop,
                self.rng,
                self.collector,
                rate=workload.rate,
                window_only=workload.window_only,
                max_cwnd=workload.max_cwnd,
                initial_cwnd=scenario.consumer.initial_cwnd,
                initial_ssthresh=scenario.consumer.initial_ssthresh,
                max_alt_attempts=scenario.consumer.max_alt_attempts,
                discovery_timer=scenario.timers.discovery_timer,
                interest_lifetime=scenario.timers.interest_lifetime,
            )
            consumer.attach(self.network.routers[placement.router])
            start = placement.start
            if start is None:
                start = float(self.rng.uniform(workload.start_min, max(workload.start_min, workload.start_max)))
            consumer.start(at=start, stop_at=scenario.duration)
            self.consumers.append(consumer)

        for failure in scenario.failures:
            self.network.fail_link(failure.a, failure.b, failure.at)

        self.network.start(scenario.timers.pit_sweep_interval)
        self._built = True
        logger.debug(f"Built {self.network} for '{scenario.name}' seed={self.seed}")
        return self

    # ============================================================================
    # Execution
    # ============================================================================

    def execute(self) -> MetricsReport:
        self.build()
        scenario = self.scenario
        logger.info(f"Running '{scenario.name}' strategy={scenario.strategy} seed={self.seed} for {scenario.duration}s")
        self.loop.run(until=scenario.duration)
        report = self.report()
        logger.info(
            f"Finished '{scenario.name}' seed={self.seed}: {self.loop.processed} events, "
            f"avg FIB {report.avg_fib_entries('all'):.2f}, {report.discovery_interest_count} discovery interests"
        )
        return report

    def report(self) -> MetricsReport:
        roles: Dict[str, str] = {name: fw.role for name, fw in self.network.routers.items()}
        return MetricsReport(
            scenario=self.scenario.name,
            strategy=self.scenario.strategy,
            seed=self.seed,
            duration=self.scenario.duration,
            throughput_bin=self.scenario.throughput_bin,
            roles=roles,
            fibs={name: fw.fib_faces() for name, fw in self.network.routers.items()},
            consumers=[consumer.name for consumer in self.consumers],
            producers=len(self.producers),
            parallel_links=self.scenario.parallel_links,
            discovery_interest_count=self.collector.discovery_interest_count,
            discovery_data_count=self.collector.discovery_data_count,
            deliveries=list(self.collector.deliveries),
            discoveries_issued=list(self.collector.discoveries_issued),
            failure_times=[failure.at for failure in self.scenario.failures],
            bfd_detections=list(self.network.bfd.detections),
            events=dict(self.collector.events),
            mean_path_hops=self.topology.mean_path_hops() if self.topology else 0.0,
            trace=self.collector.trace_frame() if self.collector.trace_enabled else None,
        )


def run(scenario: ScenarioConfig, trace: bool = False, seed: Optional[int] = None) -> MetricsReport:
    """
    Execute a scenario to its duration

    Args:
        scenario: validated scenario
        trace: keep the per-packet trace in the report
        seed: overrides scenario.seed

    Returns:
        MetricsReport: end-of-run metrics
    """
    return Simulation(scenario, trace=trace, seed=seed).execute()
