"""
skills/verify_trace.py — Tr Re A⁻¹ against Σ Re(1/λ) and the Riesz verdict.

Wraps src.trace.report.livsic_report and livsic_report_graph.
"""

from src.core.models import DampingParams, TraceReport
from src.trace.report import livsic_report, livsic_report_graph


def verify_interval(p: int, q: int, alpha: complex, truncation: int = 64) -> TraceReport:
    """Trace report for a = pπ/q."""
    return livsic_report(DampingParams.from_rational(p, q, alpha), truncation)


def verify_star(n: int, alpha: complex, truncation: int = 64) -> TraceReport:
    """Trace report for the n-edge star graph."""
    return livsic_report_graph(n, alpha, truncation)
