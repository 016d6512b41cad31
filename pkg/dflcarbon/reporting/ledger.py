"""
Run ledger: one row per (node, round, phase) plus run metadata.

CSV files hold the rows only; metadata (fingerprint, per-round scores,
vote tallies, diagnostics) goes to a `.meta.json` file next to them. JSON
files hold both. Floats are written with 17 significant digits so an
export -> load -> export cycle is byte-identical.
"""

import csv
import json
import logging
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Union

from dflcarbon.accounting.carbon import EmissionRecord
from dflcarbon.accounting.energy import EnergyRecord, Phase, ledger_order
from dflcarbon.config.scenario import to_dict
from dflcarbon.core.exceptions import LedgerError, LedgerIOError
from dflcarbon.core.units import joules_to_kwh
from dflcarbon.error.diagnostics import Diagnostic, DiagnosticReporter

logger = logging.getLogger(__name__)

LEDGER_COLUMNS = (
    "node", "round", "phase", "duration_s", "bytes_sent", "bytes_recv",
    "cpu_j", "gpu_j", "comm_j", "total_j", "energy_kwh", "effective_ci", "gco2",
)
_INT_COLUMNS = {"node", "round", "bytes_sent", "bytes_recv"}
LEDGER_VERSION = 1


class LedgerFormat(Enum):
    CSV = "csv"
    JSON = "json"


@dataclass(frozen=True)
class LedgerRow:
    node: int
    round: int
    phase: Phase
    duration_s: float
    bytes_sent: int
    bytes_recv: int
    cpu_j: float
    gpu_j: float
    comm_j: float
    total_j: float
    energy_kwh: float
    effective_ci: float
    gco2: float

    def energy_record(self) -> EnergyRecord:
        return EnergyRecord(self.node, self.round, self.phase, self.cpu_j, self.gpu_j, self.comm_j)

    def emission_record(self) -> EmissionRecord:
        return EmissionRecord(self.node, self.round, self.phase, self.gco2, self.effective_ci)


@dataclass
class RunLedger:
    """Rows in (node, round, phase) order plus JSON-ready metadata."""
    fingerprint: str = ""
    rows: List[LedgerRow] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def k(self) -> int:
        return self.metadata.get("k", len({r.node for r in self.rows}))

    @property
    def rounds(self) -> int:
        return self.metadata.get("rounds_executed", len({r.round for r in self.rows}))

    @property
    def name(self) -> str:
        return self.metadata.get("name", "run")

    def energy_records(self) -> List[EnergyRecord]:
        return [row.energy_record() for row in self.rows]

    def emission_records(self) -> List[EmissionRecord]:
        return [row.emission_record() for row in self.rows]

    def diagnostics(self) -> DiagnosticReporter:
        """Rebuild the run's diagnostics from the metadata.

        Raises:
            LedgerError: If an entry is not a diagnostic
        """
        reporter = DiagnosticReporter()
        for index, entry in enumerate(self.metadata.get("diagnostics", [])):
            try:
                reporter.add(Diagnostic.from_dict(entry))
            except (KeyError, ValueError, TypeError) as e:
                raise LedgerError(f"Malformed diagnostic {index}: {e}", error_code="R007")
        return reporter

    @classmethod
    def from_result(cls, result) -> "RunLedger":
        """Join observations, energy and emission records of a RunResult."""
        observations = sorted(result.observations, key=ledger_order)
        energy = sorted(result.energy, key=ledger_order)
        grams = sorted(result.emissions, key=ledger_order)
        if not len(observations) == len(energy) == len(grams):
            raise LedgerError("Observation, energy and emission counts differ",
                              error_code="R004")
        rows = []
        for obs, rec, em in zip(observations, energy, grams):
            if ledger_order(obs) != ledger_order(rec) or ledger_order(rec) != ledger_order(em):
                raise LedgerError(f"Ledger rows misaligned at node {obs.node} round {obs.round}",
                                  error_code="R004")
            rows.append(LedgerRow(
                node=obs.node, round=obs.round, phase=obs.phase, duration_s=obs.duration_s,
                bytes_sent=obs.bytes_sent, bytes_recv=obs.bytes_recv,
                cpu_j=rec.cpu_joules, gpu_j=rec.gpu_joules, comm_j=rec.comm_joules,
                total_j=rec.total_joules, energy_kwh=joules_to_kwh(rec.total_joules),
                effective_ci=em.effective_ci, gco2=em.grams_co2,
            ))

        exchanges: Dict[str, int] = {}
        for message in result.messages:
            exchanges[str(message.round)] = exchanges.get(str(message.round), 0) + 1
        metadata = {
            "ledger_version": LEDGER_VERSION,
            "fingerprint": result.fingerprint,
            "name": result.config.name,
            "k": result.config.k,
            "rounds_configured": result.config.rounds,
            "rounds_executed": result.rounds_executed,
            "stopped_early": result.stopped_early,
            "c_thresh": result.c_thresh,
            "final_f1": result.final_f1,
            "metrics": [
                {"round": m.round, "macro_f1": m.macro_f1, "loss": m.loss,
                 "accuracy": m.accuracy, "trainers": list(m.trainers)}
                for m in result.metrics
            ],
            "tallies": {
                str(rnd): [asdict(t) for t in tallies]
                for rnd, tallies in sorted(result.tallies.items())
            },
            "exchanges": exchanges,
            "topology": result.topology.to_dict(),
            "diagnostics": result.diagnostics.to_dicts(),
            "scenario": to_dict(result.config),
        }
        return cls(result.fingerprint, rows, metadata)


# --------------------------------------------------------------------------
# Export
# --------------------------------------------------------------------------

def _cell(name: str, value: Any) -> str:
    if isinstance(value, Phase):
        return value.value
    if name in _INT_COLUMNS:
        return str(int(value))
    return format(float(value), ".17g")


def _row_json(row: LedgerRow) -> str:
    """One JSON object on one line, floats in the same form as the CSV cells."""
    cells = []
    for name in LEDGER_COLUMNS:
        value = getattr(row, name)
        if isinstance(value, Phase):
            text = json.dumps(value.value)
        else:
            if not math.isfinite(value):
                raise LedgerError(f"Non-finite {name} at node {row.node} round {row.round}",
                                  error_code="R007")
            text = _cell(name, value)
        cells.append(f"\"{name}\": {text}")
    return "{" + ", ".join(cells) + "}"


def _dump_ledger_json(metadata: Dict[str, Any], rows: List[LedgerRow]) -> str:
    head = _dump_json(metadata).rstrip("\n").replace("\n", "\n  ")
    if rows:
        body = "[\n" + ",\n".join("    " + _row_json(r) for r in rows) + "\n  ]"
    else:
        body = "[]"
    return "{\n  \"metadata\": " + head + ",\n  \"rows\": " + body + "\n}\n"


def metadata_path(path: Union[str, Path]) -> Path:
    """Sidecar metadata file of a CSV ledger."""
    path = Path(path)
    return path.with_name(path.stem + ".meta.json")


def _dump_json(document: Dict[str, Any]) -> str:
    return json.dumps(document, indent=2, allow_nan=False) + "\n"


def export_ledger(ledger: RunLedger, fmt: Union[LedgerFormat, str],
                  path: Union[str, Path]) -> None:
    """Write a ledger as CSV (+ metadata sidecar) or JSON.

    Raises:
        LedgerIOError: If the file cannot be written
    """
    fmt = LedgerFormat(fmt) if not isinstance(fmt, LedgerFormat) else fmt
    path = Path(path)
    metadata = dict(ledger.metadata, fingerprint=ledger.fingerprint)
    try:
        if fmt is LedgerFormat.CSV:
            with open(path, "w", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(LEDGER_COLUMNS)
                for row in ledger.rows:
                    writer.writerow([_cell(name, getattr(row, name)) for name in LEDGER_COLUMNS])
            metadata_path(path).write_text(_dump_json(metadata), encoding="utf-8")
        else:
            path.write_text(_dump_ledger_json(metadata, ledger.rows), encoding="utf-8")
    except OSError as e:
        raise LedgerIOError(f"Cannot write ledger {path}: {e}", error_code="R006")
    logger.info("Wrote %d ledger rows to %s", len(ledger.rows), path)


# --------------------------------------------------------------------------
# Import
# --------------------------------------------------------------------------

def _parse_row(document: Dict[str, Any], where: str) -> LedgerRow:
    try:
        values = {}
        for name in LEDGER_COLUMNS:
            raw = document[name]
            if name == "phase":
                values[name] = Phase(raw)
            elif name in _INT_COLUMNS:
                values[name] = int(raw)
            else:
                values[name] = float(raw)
        return LedgerRow(**values)
    except (KeyError, ValueError, TypeError) as e:
        raise LedgerError(f"{where}: malformed ledger row ({e})", error_code="R007")


def load_ledger(path: Union[str, Path]) -> RunLedger:
    """Read a ledger written by export_ledger; the format follows the suffix.

    Raises:
        LedgerIOError: If the file cannot be read
        LedgerError: If its content is not a ledger
    """
    path = Path(path)
    try:
        if path.suffix.lower() == ".json":
            document = json.loads(path.read_text(encoding="utf-8"))
            if not isinstance(document, dict) or not isinstance(document.get("rows"), list):
                raise LedgerError(f"{path}: not a ledger document", error_code="R007")
            metadata = document.get("metadata", {})
            rows = [_parse_row(r, f"{path}: row {i + 1}")
                    for i, r in enumerate(document["rows"])]
        else:
            with open(path, newline="", encoding="utf-8") as handle:
                reader = csv.DictReader(handle)
                missing = [c for c in LEDGER_COLUMNS if c not in (reader.fieldnames or [])]
                if missing:
                    raise LedgerError(f"{path}: missing column(s) {', '.join(missing)}",
                                      error_code="R007")
                rows = [_parse_row(r, f"{path}: row {i}") for i, r in enumerate(reader, 1)]
            sidecar = metadata_path(path)
            metadata = (json.loads(sidecar.read_text(encoding="utf-8"))
                        if sidecar.is_file() else {})
    except json.JSONDecodeError as e:
        raise LedgerError(f"{path}: malformed JSON ({e.msg})", error_code="R007")
    except csv.Error as e:
        raise LedgerError(f"{path}: malformed CSV ({e})", error_code="R007")
    except (OSError, UnicodeDecodeError) as e:
        raise LedgerIOError(f"Cannot read ledger {path}: {e}", error_code="R006")
    if not isinstance(metadata, dict):
        raise LedgerError(f"{path}: ledger metadata must be an object", error_code="R007")
    return RunLedger(metadata.get("fingerprint", ""), rows, metadata)
