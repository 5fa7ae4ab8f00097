"""Desk-scale list-recovery laboratory over finite fields."""

__version__ = "0.1.0"
