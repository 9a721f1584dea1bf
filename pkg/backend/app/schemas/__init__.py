"""
Schemas Package

Scenario configuration models
"""

from app.schemas.scenario import (
    BfdConfig,
    ConsumerConfig,
    ConsumerSpec,
    ExplicitTopology,
    FailureSpec,
    GeneratedTopology,
    LinkSpec,
    ProducerSpec,
    ScenarioConfig,
    TimerConfig,
    WorkloadConfig,
)

__all__ = [
    "BfdConfig",
    "ConsumerConfig",
    "ConsumerSpec",
    "ExplicitTopology",
    "FailureSpec",
    "GeneratedTopology",
    "LinkSpec",
    "ProducerSpec",
    "ScenarioConfig",
    "TimerConfig",
    "WorkloadConfig",
]
