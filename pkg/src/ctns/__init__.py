"""Chemotaxis-fluid box solver with an inequality verification harness."""

__version__ = "0.1.0"
