"""Python bindings for the spincs C++ core.

Exposes the main operations: transfer-matrix spectra, Bethe solvers, fusion
analysis, exact nonsymmetric Jack polynomials, spin-Calogero-Sutherland
sector reports, and Haldane-Shastry freezing.
"""

import json as _json

try:
    from ._spincs import *  # installed package layout
    from . import _spincs as _impl
except ImportError:  # build-tree layout: _spincs.so next to the build dir
    from _spincs import *
    import _spincs as _impl

__version__ = _impl.version()


def cs_sector_report(lam, beta="2", kappa=1.0 + 0.0j):
    """cs_sector with the JSON parsed into a dict."""
    return _json.loads(_impl.cs_sector(lam, beta, kappa))


def n4_report(kappa=1.5 + 0.0j):
    """n4_example with the JSON parsed into a dict."""
    return _json.loads(_impl.n4_example(kappa))
