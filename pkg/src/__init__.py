# HHLCircuits package
"""
HHLCircuits - State-vector simulation of the HHL linear-system algorithm.
"""

__version__ = "2.0.0"
