"""Simulation of eavesdropping on BB84 and on its entangled two-qubit variant."""

__version__ = "0.1.0"
