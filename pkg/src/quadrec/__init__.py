"""Exact arithmetic for linear recurrences over quadratic fields: periods
modulo prime-ideal powers, Wieferich-type searches, cyclotomic non-Wieferich
certificates, heights, and the counting heuristics built on top of them."""

__version__ = "0.1.0"
