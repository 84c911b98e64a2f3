"""Preferential attachment processes, exact degree laws via two-color urns,
empirical concentration-bound checks, and one-subdivided-clique witnesses.

Submodules: process (graph growth), distributions (degree-law DP), urns
(urn DP, closed forms, simulation), bounds (tail/short-term/band checks),
cliques (witness search and verification), cli (command-line front end).
"""

from pa_lab._backend import backend_name

__version__ = "0.1.0"

__all__ = ["__version__", "backend_name"]
