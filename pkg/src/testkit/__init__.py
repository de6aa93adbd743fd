"""Shared fixtures, parameter grids and cross-validation helpers for the test suite."""
