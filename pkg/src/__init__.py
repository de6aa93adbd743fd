"""Exact dual certificates and brute-force oracles for cross-intersecting families."""
