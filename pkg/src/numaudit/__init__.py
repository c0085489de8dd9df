"""Numerical-accuracy auditing harness.

Generates or ingests known-answer problems (univariate statistics,
distribution functions and quantiles, linear regression, singular
determinants, bipartite-graph Laplacian spectra), runs them against a
pluggable numerical backend, and scores the results by the number of
correct significant digits (LRE), bootstrap stability, and
decision-correctness counts.
"""

__version__ = "0.1.0"
