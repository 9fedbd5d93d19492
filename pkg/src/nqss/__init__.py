"""Optimal individual eavesdropping on N-partner quantum secret sharing, and
the Mermin-Klyshko Bell inequalities that certify it."""

__version__ = "0.1.0"
