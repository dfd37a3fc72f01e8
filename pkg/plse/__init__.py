# SortedPLSE - Sorted Concave Penalized Least Squares
"""
SortedPLSE: concave and sorted penalties, the local convex approximation (LCA)
solver, isotonic proximal mappings and estimation diagnostics.
"""

__version__ = "1.0.0"
