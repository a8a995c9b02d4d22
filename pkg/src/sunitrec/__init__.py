"""Effective bounds and exhaustive search for aU_n + bU_m = z_1 + ... + z_r with S-unit summands."""

__version__ = "0.1.0"
