"""Satisfiability of temporal logic with until and since over countable ordinals."""

__version__ = "0.1.0"
