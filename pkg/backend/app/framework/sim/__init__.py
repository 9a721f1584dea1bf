"""
Discrete-event engine, topologies, links and the scenario runner

Submodules are imported directly (`app.framework.sim.runner`, ...); the
forwarder depends on the event loop and the network depends on the forwarder.
"""
