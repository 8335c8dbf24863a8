"""
Shared Memory Module

This module provides a lightweight in-memory store through which the
verification agents hand per-sample results to the scenario runner.
"""

from .shared_memory import SharedMemory

__all__ = ["SharedMemory"]
