"""Exact-arithmetic workbench for curved dg algebras and their modules."""

__version__ = "0.1.0"
