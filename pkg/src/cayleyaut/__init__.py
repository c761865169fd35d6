"""Cubic Cayley graphs on S_n: cycle censuses, vertex stabilizers and normality."""

__version__ = "0.1.0"
