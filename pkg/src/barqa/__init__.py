"""Synthetic bar-chart question answering toolkit."""
