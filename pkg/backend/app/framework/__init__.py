"""
Framework Package

Core components of the forwarding simulator

Layout:
- foundation/: names and packets
- fib/: name trie with approximate lookup, FIB microbenchmark
- pit/: pending interest table
- strategies/: approximate forwarding and the self-learning baseline
- engine/: per-router forwarder
- apps/: consumer and producer applications
- sim/: event loop, topologies, links, scenario runner
- metrics/: collector, report, trace replay
- experiments/: paired-strategy sweeps
"""

__version__ = "1.0.0"
