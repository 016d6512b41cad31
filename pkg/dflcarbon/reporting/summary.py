"""Per-phase emission and energy summaries and side-by-side comparison tables."""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from dflcarbon.accounting.carbon import total_emissions
from dflcarbon.accounting.energy import Phase, total_energy
from dflcarbon.core.exceptions import LedgerError
from dflcarbon.reporting.ledger import RunLedger


@dataclass(frozen=True)
class PhaseTotals:
    grams_co2: float
    kwh: float


@dataclass(frozen=True)
class Summary:
    """Train/Agg/Comm emissions (CE, gCO2) and energy (EC, kWh) plus final F1."""
    label: str
    fingerprint: str
    k: int
    rounds: int
    training: PhaseTotals
    aggregation: PhaseTotals
    communication: PhaseTotals
    total: PhaseTotals
    final_f1: Optional[float]

    def phase(self, phase: Phase) -> PhaseTotals:
        return {
            Phase.TRAINING: self.training,
            Phase.AGGREGATION: self.aggregation,
            Phase.COMMUNICATION: self.communication,
        }[phase]


def summarize(ledger: RunLedger, label: Optional[str] = None) -> Summary:
    """Fold a ledger with the accounting totals."""
    energy = total_energy(ledger.energy_records())
    grams = total_emissions(ledger.emission_records())
    kwh = energy.per_phase_kwh
    return Summary(
        label=label or ledger.name,
        fingerprint=ledger.fingerprint,
        k=ledger.k,
        rounds=ledger.rounds,
        training=PhaseTotals(grams.per_phase[Phase.TRAINING], kwh[Phase.TRAINING]),
        aggregation=PhaseTotals(grams.per_phase[Phase.AGGREGATION], kwh[Phase.AGGREGATION]),
        communication=PhaseTotals(grams.per_phase[Phase.COMMUNICATION],
                                  kwh[Phase.COMMUNICATION]),
        total=PhaseTotals(grams.total, energy.total_kwh),
        final_f1=ledger.metadata.get("final_f1"),
    )


def check_comparable(summaries: Sequence[Summary], force: bool = False) -> None:
    """Refuse to put runs with different K or round counts side by side.

    Raises:
        LedgerError: Mismatch without `force`
    """
    if force or len(summaries) < 2:
        return
    first = summaries[0]
    for other in summaries[1:]:
        if (other.k, other.rounds) != (first.k, first.rounds):
            raise LedgerError(
                f"Cannot compare '{first.label}' (K={first.k}, rounds={first.rounds}) with "
                f"'{other.label}' (K={other.k}, rounds={other.rounds}); use --force",
                error_code="R005")


TABLE_HEADERS = ("Run", "Train CE", "Train EC", "Agg CE", "Agg EC", "Comm CE", "Comm EC",
                 "Total CE", "Total EC", "F1")


def summary_cells(summary: Summary) -> List[str]:
    cells = [summary.label]
    for totals in (summary.training, summary.aggregation, summary.communication, summary.total):
        cells.append(f"{totals.grams_co2:.4e}")
        cells.append(f"{totals.kwh:.4e}")
    cells.append("-" if summary.final_f1 is None else f"{summary.final_f1:.4f}")
    return cells


def format_summary_table(summaries: Sequence[Summary]) -> str:
    """Aligned text table, one line per run (CE in gCO2, EC in kWh)."""
    rows = [list(TABLE_HEADERS)] + [summary_cells(s) for s in summaries]
    widths = [max(len(row[i]) for row in rows) for i in range(len(TABLE_HEADERS))]
    lines = []
    for index, row in enumerate(rows):
        cells = [row[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
        if index == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def summary_to_dict(summary: Summary) -> Dict[str, object]:
    document: Dict[str, object] = {"label": summary.label, "fingerprint": summary.fingerprint,
                                   "k": summary.k, "rounds": summary.rounds}
    for phase in Phase:
        totals = summary.phase(phase)
        document[f"{phase.value}_gco2"] = totals.grams_co2
        document[f"{phase.value}_kwh"] = totals.kwh
    document["total_gco2"] = summary.total.grams_co2
    document["total_kwh"] = summary.total.kwh
    document["final_f1"] = summary.final_f1
    return document
