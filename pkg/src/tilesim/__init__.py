"""Deterministic discrete-event simulator of a fault-aware 3D-torus tile fabric.

The package models a many-tile machine whose tiles are joined by a 3D torus
of bidirectional links, each tile carrying a network processor (RDMA-style
PUT/GET/SEND plus a blocking message layer), a mutual-watchdog fault
monitoring stack that propagates local fault awareness up a two-level
control hierarchy, declarative deterministic fault injection, and a
Kahn-process-network application layer with scenario-driven mapping,
restart-based recovery and redundant execution.  Two benchmarks (a spiking
neural network and a 4D halo-exchange stencil) exercise the whole stack.

Everything is deterministic: for a fixed (config, fault spec, seed) the
full event trace is byte-identical across runs.
"""

__version__ = "0.1.0"

from .engine import EventClass, Kernel, RngStream, SimulationError
from .topology import TorusGeometry, UNDELIVERABLE

__all__ = [
    "EventClass",
    "Kernel",
    "RngStream",
    "SimulationError",
    "TorusGeometry",
    "UNDELIVERABLE",
    "__version__",
]
