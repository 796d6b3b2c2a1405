"""Exact enumeration and limit laws for graphs and planar maps with minimum-degree constraints."""

__version__ = "0.1.0"
