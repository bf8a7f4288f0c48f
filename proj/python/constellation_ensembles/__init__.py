"""Partition functions of constellation log-gas ensembles.

Specs are plain dicts with the same keys as a run-config "specs" entry, e.g.

    partition_function({"geometry": "linear", "L": 1, "K": 2, "M": 2, "y": [0, 0.8]})
"""

import json

from ._core import (
    ConfigError,
    ConstellationError,
    Form,
    IntegrityError,
    ResourceLimitExceeded,
    confluent_vandermonde_det,
    run_config,
    set_thread_count,
    verify,
)
from . import _core

__all__ = [
    "ConfigError",
    "ConstellationError",
    "Form",
    "IntegrityError",
    "ResourceLimitExceeded",
    "collapsed_limit",
    "confluent_vandermonde_det",
    "eta_form",
    "gamma_form",
    "oracle",
    "partition_function",
    "run_config",
    "separated_limit",
    "set_thread_count",
    "verify",
]


def _spec(spec):
    return spec if isinstance(spec, str) else json.dumps(spec)


def partition_function(spec):
    """Z with its route, parity case label, per-route values and diagnostics."""
    return _core._partition_function(_spec(spec))


def gamma_form(spec):
    return _core._gamma_form(_spec(spec))


def eta_form(spec):
    return _core._eta_form(_spec(spec))


def oracle(spec, method="nested", nodes=96, samples=1_000_000, seed=20240611):
    """Brute-force Z by nested quadrature or Monte Carlo."""
    return _core._oracle(_spec(spec), method, nodes, samples, seed)


def collapsed_limit(spec, scales=(1e-1, 1e-2, 1e-3, 1e-4)):
    return _core._collapsed_limit(_spec(spec), list(scales))


def separated_limit(spec, hs=(1e1, 1e2, 1e3, 1e4)):
    return _core._separated_limit(_spec(spec), list(hs))
