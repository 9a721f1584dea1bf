"""
Scenario schemas

A scenario file is YAML whose keys mirror ScenarioConfig. Unknown keys are
rejected so a typo never silently falls back to a default.
"""

from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.framework.foundation.names import parse_name

StrategyId = Literal["approximate", "self-learning"]

# alternative ids accepted wherever a strategy is named
STRATEGY_ALIASES: Dict[str, str] = {"samba": "approximate"}


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ============================================================================
# Topology
# ============================================================================

class GeneratedTopology(_Strict):
    """ISP-like random topology: 3-regular core, edges hanging off the core"""
    core_routers: int = Field(default=21, ge=0, description="R_c")
    edge_routers: int = Field(default=16, ge=0, description="R_e")
    edge_degree_min: int = Field(default=1, ge=1, description="Fewest core routers an edge router connects to")
    edge_degree_max: int = Field(default=3, ge=1, description="Most core routers an edge router connects to")

    @model_validator(mode="after")
    def _degree_range(self) -> "GeneratedTopology":
        if self.edge_degree_min > self.edge_degree_max:
            raise ValueError("edge_degree_min must not exceed edge_degree_max")
        return self


class LinkSpec(_Strict):
    a: str
    b: str
    delay: Optional[float] = Field(default=None, gt=0, description="One-way delay; scenario link_delay when unset")
    parallel: Optional[int] = Field(default=None, ge=1, description="Parallel links; scenario parallel_links when unset")


class ExplicitTopology(_Strict):
    """Hand-written router graph"""
    routers: Dict[str, Literal["core", "edge"]]
    links: List[LinkSpec]


# ============================================================================
# Applications
# ============================================================================

class ConsumerSpec(_Strict):
    name: str
    router: str
    prefix: str
    start: Optional[float] = Field(default=None, ge=0, description="Start time; drawn from the workload window when unset")

    @field_validator("prefix")
    @classmethod
    def _valid_prefix(cls, value: str) -> str:
        parse_name(value)
        return value


class ProducerSpec(_Strict):
    name: str
    router: str
    prefixes: List[str] = Field(..., min_length=1)

    @field_validator("prefixes")
    @classmethod
    def _valid_prefixes(cls, value: List[str]) -> List[str]:
        for prefix in value:
            parse_name(prefix)
        return value


class WorkloadConfig(_Strict):
    rate: float = Field(default=8.0, gt=0, description="Interests per second per consumer")
    start_min: float = Field(default=0.0, ge=0)
    start_max: float = Field(default=50.0, ge=0)
    payload_size: int = Field(default=1024, ge=0, description="Data payload in bytes")
    window_only: bool = Field(default=False, description="Send as fast as the window allows")
    max_cwnd: Optional[float] = Field(default=None, ge=1, description="Upper bound on the congestion window")


class TimerConfig(_Strict):
    tmp: float = Field(default=0.05, gt=0, description="Alternative-path window after the first discovery Data")
    discovery_timer: float = Field(default=1.0, gt=0)
    interest_lifetime: float = Field(default=2.0, gt=0)
    pit_sweep_interval: float = Field(default=1.0, gt=0)


class ConsumerConfig(_Strict):
    initial_cwnd: float = Field(default=1.0, ge=1)
    initial_ssthresh: float = Field(default=64.0, ge=1)
    max_alt_attempts: int = Field(default=3, ge=1)


class BfdConfig(_Strict):
    enabled: bool = True
    interval: float = Field(default=0.005, gt=0)
    dead_multiplier: int = Field(default=3, ge=1)


class FailureSpec(_Strict):
    a: str
    b: str
    at: float = Field(..., ge=0)


# ============================================================================
# Scenario
# ============================================================================

class ScenarioConfig(_Strict):
    """
    One simulation run

    With a generated topology, `consumers` (C), `producers` (P) and
    `prefixes` (M, default P) size the workload. With an explicit topology the
    apps come from `consumer_apps` and `producer_apps`.
    """
    name: str = "scenario"
    strategy: StrategyId = "approximate"
    seed: int = 0
    duration: float = 60.0
    topology: Union[ExplicitTopology, GeneratedTopology] = Field(default_factory=GeneratedTopology)
    consumers: int = Field(default=10, ge=0, description="C")
    producers: int = Field(default=4, ge=0, description="P")
    prefixes: Optional[int] = Field(default=None, ge=0, description="M, defaults to P")
    consumer_apps: List[ConsumerSpec] = Field(default_factory=list)
    producer_apps: List[ProducerSpec] = Field(default_factory=list)
    parallel_links: int = Field(default=1, ge=1, description="k")
    link_delay: float = Field(default=0.01, gt=0)
    workload: WorkloadConfig = Field(default_factory=WorkloadConfig)
    timers: TimerConfig = Field(default_factory=TimerConfig)
    consumer: ConsumerConfig = Field(default_factory=ConsumerConfig)
    bfd: BfdConfig = Field(default_factory=BfdConfig)
    failures: List[FailureSpec] = Field(default_factory=list)
    throughput_bin: float = Field(default=1.0, gt=0)

    @field_validator("strategy", mode="before")
    @classmethod
    def _resolve_alias(cls, value: object) -> object:
        if isinstance(value, str):
            return STRATEGY_ALIASES.get(value, value)
        return value

    @field_validator("duration")
    @classmethod
    def _positive_duration(cls, value: float) -> float:
        if value <= 0:
            raise ValueError("duration must be positive")
        return value

    @model_validator(mode="after")
    def _prefix_count(self) -> "ScenarioConfig":
        if self.prefixes is not None and self.prefixes < self.producers:
            raise ValueError(f"prefixes (M={self.prefixes}) must be at least producers (P={self.producers})")
        return self

    @property
    def is_explicit(self) -> bool:
        return isinstance(self.topology, ExplicitTopology)

    @property
    def prefix_count(self) -> int:
        return self.producers if self.prefixes is None else self.prefixes

    @property
    def consumer_count(self) -> int:
        return len(self.consumer_apps) if self.is_explicit else self.consumers

    @property
    def producer_count(self) -> int:
        return len(self.producer_apps) if self.is_explicit else self.producers

    @property
    def total_nodes(self) -> int:
        """N = R_c + R_e + C + P"""
        if isinstance(self.topology, ExplicitTopology):
            routers = len(self.topology.routers)
        else:
            routers = self.topology.core_routers + self.topology.edge_routers
        return routers + self.consumer_count + self.producer_count
