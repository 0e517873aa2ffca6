"""
Test package for factor_bounds.

This package contains test suites for the bound computations, the search
harness, the fixture corpus and the command line.
"""
