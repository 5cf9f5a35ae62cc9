"""Entanglement schemes and qubit ownership."""
from .builder import EntanglementScheme, QubitLayout, build_layout

__all__ = ["EntanglementScheme", "QubitLayout", "build_layout"]
