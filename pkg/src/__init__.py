# Teledistill Source Package
"""
Library modules for teleportation channels, symplectic codes and
one-way distillation over Pauli-diagonal noise.
"""

__all__ = []
