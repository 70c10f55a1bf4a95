"""Quantum Hilbert transform: simulator, circuits, classical oracle, and tooling."""

__version__ = "0.1.0"
