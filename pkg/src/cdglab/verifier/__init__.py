"""Scenario runner with machine-readable reports."""
