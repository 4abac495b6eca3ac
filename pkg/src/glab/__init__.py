"""Greedy and Chebyshev greedy algorithms over concrete sequence spaces."""
