"""
Strategy Registry - lookup of forwarding strategies by id

Strategies are bound to a forwarder, so the registry keeps classes and builds a
fresh instance per forwarder.

Examples:
    >>> StrategyRegistry.names()
    ['approximate', 'self-learning']
    >>> strategy = StrategyRegistry.create("samba", forwarder)  # alias of approximate
"""

import logging
from typing import TYPE_CHECKING, Dict, List, Type

from app.core.exceptions import StrategyNotFoundError
from app.framework.strategies.approximate import ApproximateStrategy
from app.framework.strategies.base_strategy import BaseStrategy
from app.framework.strategies.self_learning import SelfLearningStrategy
from app.schemas.scenario import STRATEGY_ALIASES

if TYPE_CHECKING:
    from app.framework.engine.forwarder import Forwarder

logger = logging.getLogger(__name__)


class StrategyRegistry:
    """Class-level store of strategy types"""

    _strategies: Dict[str, Type[BaseStrategy]] = {
        "approximate": ApproximateStrategy,
        "self-learning": SelfLearningStrategy,
    }

    @classmethod
    def register(cls, name: str, strategy_cls: Type[BaseStrategy]) -> None:
        """
        Register a strategy class under an id

        Raises:
            ValueError: not a BaseStrategy subclass, or empty id
        """
        if not isinstance(strategy_cls, type) or not issubclass(strategy_cls, BaseStrategy):
            raise ValueError(f"Strategy must inherit from BaseStrategy, got {strategy_cls!r}")
        if not name:
            raise ValueError("Strategy name cannot be empty")
        if name in cls._strategies:
            logger.warning(f"Strategy '{name}' already registered, overwriting")
        cls._strategies[name] = strategy_cls
        logger.info(f"Strategy registered: {name}")

    @classmethod
    def get(cls, name: str) -> Type[BaseStrategy]:
        """
        Strategy class for an id or one of its aliases

        Raises:
            StrategyNotFoundError: unknown id
        """
        strategy_cls = cls._strategies.get(STRATEGY_ALIASES.get(name, name))
        if strategy_cls is None:
            raise StrategyNotFoundError(
                f"Unknown strategy '{name}'",
                details={"strategy": name, "available": cls.names()},
            )
        return strategy_cls

    @classmethod
    def create(cls, name: str, forwarder: "Forwarder") -> BaseStrategy:
        return cls.get(name)(forwarder)

    @classmethod
    def names(cls) -> List[str]:
        return sorted(cls._strategies)
