"""Simulator for temporary-assumption multiparty protocols."""

__version__ = "0.1.0"
