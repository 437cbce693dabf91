"""Exact-arithmetic toolkit for twisted generalized complex geometry at desk scale."""
