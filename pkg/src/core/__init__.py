"""
Core module for Teledistill
Contains file-parsing helpers shared by the noise and code loaders
"""

__all__ = []
