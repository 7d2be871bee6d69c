# Tests package
"""Unit tests for HHLCircuits."""
