"""Exact and certified computations for MDC-Schottky groups and their finite extensions."""

__version__ = "0.1.0"
