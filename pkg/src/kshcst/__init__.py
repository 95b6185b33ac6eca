"""Normalization constants of KSH coherent-state transforms on compact Lie groups."""

__version__ = "0.1.0"
