"""Diagnostics collected during a run and recorded in the ledger metadata."""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional


class DiagnosticKind(Enum):
    """Modelling decisions and runtime events worth recording."""
    ER_REPAIR = "er_connectivity_repair"
    DIRICHLET_REPAIR = "dirichlet_empty_node_repair"
    SA_WEIGHTING = "green_sa_weighting"
    SA_REPORT_SEMANTICS = "green_sa_report_semantics"
    PERCENTILE_THRESHOLD = "percentile_threshold"
    SN_STALE_EXCLUSION = "green_sn_stale_model_exclusion"
    SN_RELAY = "green_sn_relay"
    SA_SN_EXPERIMENTAL = "sa_sn_experimental"
    KRUM_FALLBACK = "krum_fallback"
    CONSTANT_UTILIZATION = "constant_utilization"
    MEASURED_CLOCK = "measured_clock"
    EARLY_STOP = "early_stop"


class Severity(Enum):
    INFO = "info"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    """One recorded decision or event."""
    kind: DiagnosticKind
    severity: Severity
    message: str
    round: Optional[int] = None

    def __str__(self) -> str:
        where = f"round {self.round}: " if self.round is not None else ""
        return f"{where}{self.severity.value}: [{self.kind.value}] {self.message}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "severity": self.severity.value,
            "message": self.message,
            "round": self.round,
        }

    @classmethod
    def from_dict(cls, document: Dict[str, Any]) -> "Diagnostic":
        return cls(DiagnosticKind(document["kind"]), Severity(document["severity"]),
                   document["message"], document.get("round"))


class DiagnosticReporter:
    """Collects and formats diagnostics for one run."""

    def __init__(self):
        self.infos: List[Diagnostic] = []
        self.warnings: List[Diagnostic] = []

    def report_info(self, kind: DiagnosticKind, message: str,
                    round: Optional[int] = None) -> None:
        self.add(Diagnostic(kind, Severity.INFO, message, round))

    def report_warning(self, kind: DiagnosticKind, message: str,
                       round: Optional[int] = None) -> None:
        self.add(Diagnostic(kind, Severity.WARNING, message, round))

    def add(self, diagnostic: Diagnostic) -> None:
        """Add a pre-constructed diagnostic."""
        if diagnostic.severity is Severity.WARNING:
            self.warnings.append(diagnostic)
        else:
            self.infos.append(diagnostic)

    def has_warnings(self) -> bool:
        return len(self.warnings) > 0

    def has_kind(self, kind: DiagnosticKind) -> bool:
        return any(d.kind is kind for d in self.get_all())

    def warning_count(self) -> int:
        return len(self.warnings)

    def get_all(self) -> List[Diagnostic]:
        """All diagnostics, run-level first, then by round."""
        everything = self.infos + self.warnings
        everything.sort(key=lambda d: (-1 if d.round is None else d.round))
        return everything

    def to_dicts(self) -> List[Dict[str, Any]]:
        return [d.to_dict() for d in self.get_all()]

    def format_all(self) -> str:
        """Format all diagnostics with a count summary at the end.

        Returns:
            Empty string when nothing was reported
        """
        messages = self.get_all()
        if not messages:
            return ""
        lines = [str(m) for m in messages]
        parts = []
        if self.infos:
            parts.append(f"{len(self.infos)} note" + ("" if len(self.infos) == 1 else "s"))
        if self.warnings:
            word = "warning" if len(self.warnings) == 1 else "warnings"
            parts.append(f"{len(self.warnings)} {word}")
        lines.append(" and ".join(parts) + " recorded")
        return "\n".join(lines)
