"""Executable quantitative semantics of linear logic with Taylor expansion."""

__version__ = "0.1.0"
