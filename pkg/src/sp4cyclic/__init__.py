"""Maximal Sp(4,R) Higgs bundles, cyclic surfaces and a torus desk model for Hitchin's equations."""

__version__ = "0.1.0"
