"""Exact engine, limit laws, combinatorics and samplers."""
