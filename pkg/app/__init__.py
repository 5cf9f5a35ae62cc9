"""Quantum public goods simulator application layer."""

__version__ = "1.0.0"
