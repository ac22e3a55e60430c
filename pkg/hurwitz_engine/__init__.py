"""
HurwitzForge

Counts full reflection factorizations in well generated complex reflection
groups and checks the closed forms against brute-force oracles.
"""

__version__ = "0.1.0"
