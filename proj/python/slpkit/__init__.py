"""Straight-line programs over the integers."""

import json

from ._core import (
    BudgetExceeded,
    FactorizationTimeout,
    GapBoundExhausted,
    ParseError,
    Slp,
    ValidationError,
    campaign_names,
    decide,
    degree_upper_bound,
    density_scan,
    eval_exact,
    eval_mod,
    expand_poly,
    factorize,
    gen_random_slp,
    int_to_slp,
    is_2sos,
    is_3sos,
    isqrt,
    pow2_slp,
    problems,
    reduction_names,
)
from . import _core


def reduce(name, slp, **params):
    """Run a named transform or driver; returns the record as a dict."""
    return json.loads(_core.run_reduction(name, slp, **params))


def verify(name, **source):
    """Run a campaign; returns (ok, list of report records)."""
    ok, text = _core.run_campaign(name, **source)
    return ok, [json.loads(line) for line in text.splitlines()]


__all__ = [name for name in dir() if not name.startswith("_")]
