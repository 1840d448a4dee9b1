"""feasimap - Bayesian search for the feasible space under expensive constraints."""

__version__ = "0.9.0"
