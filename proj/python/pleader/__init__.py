"""p-leader multifractal analysis with finite-resolution correction."""

import json

from . import _core
from ._core import (
    INDEX_CONVENTION,
    PleaderError,
    dbwc_eta,
    gamma_correction,
    legendre_at,
    oracle_dbwc_sf,
    resample_rr,
    synthesize_process,
)

__all__ = [
    "INDEX_CONVENTION",
    "PleaderError",
    "analyze",
    "analyze_pyramid",
    "dbwc_eta",
    "gamma_correction",
    "legendre_at",
    "oracle_dbwc_sf",
    "resample_rr",
    "run_benchmark",
    "synthesize_cascade",
    "synthesize_process",
]


def analyze(data, **kwargs):
    """Analysis report of a 1D or 2D array as a dict."""
    return json.loads(_core.analyze(data, **kwargs))


def analyze_pyramid(pyramid, **kwargs):
    if not isinstance(pyramid, str):
        pyramid = json.dumps(pyramid)
    return json.loads(_core.analyze_pyramid(pyramid, **kwargs))


def synthesize_cascade(spec, realization=0):
    if not isinstance(spec, str):
        spec = json.dumps(spec)
    return json.loads(_core.synthesize_cascade(spec, realization))


def run_benchmark(spec):
    """Returns (summary dict, performance table CSV text)."""
    if not isinstance(spec, str):
        spec = json.dumps(spec)
    summary, table = _core.run_benchmark(spec)
    return json.loads(summary), table
