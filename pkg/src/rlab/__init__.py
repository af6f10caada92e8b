"""Bohr-set counterexamples to integer-coefficient recurrence criteria, checked
with exact radicals and rigorous dyadic interval arithmetic."""

__version__ = "0.1.0"
