"""
Forwarding strategies

- approximate: LPM with DFS fallback and multipath discovery
- self-learning: single-path baseline
"""

from app.framework.strategies.approximate import ApproximateStrategy
from app.framework.strategies.base_strategy import BaseStrategy, StrategyMetadata
from app.framework.strategies.registry import StrategyRegistry
from app.framework.strategies.self_learning import SelfLearningStrategy

__all__ = [
    "ApproximateStrategy",
    "BaseStrategy",
    "SelfLearningStrategy",
    "StrategyMetadata",
    "StrategyRegistry",
]
