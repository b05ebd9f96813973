"""T-Cycle on embedded planar graphs: solver, reduction and kernelization."""

from .graph import EmbeddedGraph  # noqa: F401
