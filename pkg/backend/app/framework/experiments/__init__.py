"""Paired-strategy experiment sweeps"""

from app.framework.experiments.sweep import EXPERIMENTS, STRATEGIES, SweepResult, plan, summarize, sweep

__all__ = ["EXPERIMENTS", "STRATEGIES", "SweepResult", "plan", "summarize", "sweep"]
