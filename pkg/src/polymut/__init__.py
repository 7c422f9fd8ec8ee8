"""Exact combinatorial mutations of rational polytopes."""
