"""Python front end for the irsolve inexact-restoration solver."""

import json

from ._irsolve import (
    TRACE_VERSION,
    AbnormalTermination,
    ConfigError,
    ContractError,
    InvariantViolation,
    SchemaError,
    audit_json,
    complexity_fit,
    merit_phi,
    problem_ids,
    run_json,
)

__all__ = [
    "TRACE_VERSION",
    "AbnormalTermination",
    "ConfigError",
    "ContractError",
    "InvariantViolation",
    "SchemaError",
    "audit",
    "complexity_fit",
    "merit_phi",
    "problem_ids",
    "run",
]


def run(problem="p1", **settings):
    """Run one suite problem. Keyword arguments are config keys (M, eps_opt, budget, ...).

    Returns the trace as a dict.
    """
    config = dict(settings, problem=problem)
    return json.loads(run_json(json.dumps(config)))


def audit(trace, kappas="configured"):
    """Audit a trace given as a dict or JSON string. Returns the audit report as a dict."""
    text = trace if isinstance(trace, str) else json.dumps(trace)
    return json.loads(audit_json(text, kappas))
