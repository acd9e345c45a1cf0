"""Homogeneous pp-wave models, their transvection algebras and discrete quotients."""

__version__ = "0.1.0"
