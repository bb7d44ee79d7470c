"""Signed operations over a monoid of signa, S-relations, and the Galois
connection between S-preclones and S-relational clones on finite sets."""

__version__ = "0.1.0"
