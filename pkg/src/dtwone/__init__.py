"""Directed treewidth one: recognition with certificates, cycle hypergraphs,
decomposition conversions and the cops-and-robber game machinery."""

from __future__ import annotations

__version__ = "0.1.0"
