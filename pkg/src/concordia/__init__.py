"""Concordia: cross-connection workbench for finite concordant semigroups."""

__version__ = "0.1.0"
