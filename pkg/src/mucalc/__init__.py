"""Satisfiability checking and model construction for the coalgebraic mu-calculus."""
__version__ = "0.1.0"
