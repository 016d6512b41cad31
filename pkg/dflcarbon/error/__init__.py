"""Run diagnostics."""

from dflcarbon.error.diagnostics import (
    Diagnostic,
    DiagnosticKind,
    DiagnosticReporter,
    Severity,
)

__all__ = [
    'Diagnostic',
    'DiagnosticKind',
    'DiagnosticReporter',
    'Severity',
]
