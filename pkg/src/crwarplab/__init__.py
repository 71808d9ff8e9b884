"""Riemannian invariants and first-Chen-type inequalities for CR-warped
product submanifolds of complex space forms."""

__version__ = "0.1.0"

SCHEMA = "cr-warp-lab/1"
