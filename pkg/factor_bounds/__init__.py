"""
Factor Bounds - certified coefficient bounds for factors of integer polynomials

This package computes degree-aware and single-factor bounds on the
coefficients of factors of polynomials in Z[x], together with the exact
arithmetic, root bounds and search machinery used to study how tall the
factors of a polynomial can be compared with the polynomial itself.
"""

try:
    from ._version import version as __version__
except ImportError:
    # Fallback for development installations
    try:
        from importlib.metadata import version

        __version__ = version("factor-bounds")
    except Exception:
        __version__ = "unknown"
