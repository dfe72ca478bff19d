"""Shared error types for enumeration caps and solver size guards."""

from __future__ import annotations


class CapExceeded(RuntimeError):
    """An enumeration would produce more items than its cap allows."""

    def __init__(self, cap, count):
        super().__init__(f"enumeration exceeded cap {cap} (saw at least {count} items)")
        self.cap = cap
        self.count = count


class InstanceTooLarge(RuntimeError):
    """An exact solver was asked for an instance beyond its size guard."""
