"""Nearly Gorenstein tests for graded rings of Q-divisors on curves."""

__version__ = "0.1.0"
