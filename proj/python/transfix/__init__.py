"""Transfinite fixed points, initial algebras, Kripke truth and reflective games."""

import json as _json

from ._core import (
    CapExceeded,
    Error,
    FiniteLattice,
    Ordinal,
    OverflowError,
    ParseError,
    PreconditionViolation,
    correspondence_ok,
    fixed_points,
    gfp,
    kleene_chain,
    lfp,
)
from . import _core


def _text(scenario):
    return scenario if isinstance(scenario, str) else _json.dumps(scenario)


def run(scenario, budget_steps=None, budget_jumps=None, max_stages=None):
    """Run a scenario (dict or JSON text) and return the report as a dict."""
    return _json.loads(_core.run_json(_text(scenario), budget_steps, budget_jumps, max_stages))


def format_text(report):
    return _core.format_text(_text(report))


def verify(document):
    """Re-check a scenario or report. Returns (ok, problems)."""
    return _core.verify_json(_text(document))


def enumerate_equilibria(scenario, max_stages=None):
    return _json.loads(_core.enumerate_json(_text(scenario), max_stages))


def canonical(scenario):
    return _json.loads(_core.canonical_json(_text(scenario)))


def suite(seed=42):
    return _json.loads(_core.suite_json(seed))


__all__ = [
    "CapExceeded", "Error", "FiniteLattice", "Ordinal", "OverflowError", "ParseError",
    "PreconditionViolation", "canonical", "correspondence_ok", "enumerate_equilibria",
    "fixed_points", "format_text", "gfp", "kleene_chain", "lfp", "run", "suite", "verify",
]
