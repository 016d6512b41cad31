"""Tests for ledger export/import and summaries."""

import json
import tempfile
from pathlib import Path

import pytest

from dflcarbon.accounting import Phase
from dflcarbon.core.exceptions import LedgerError, LedgerIOError
from dflcarbon.engine import run_scenario
from dflcarbon.error import DiagnosticKind
from dflcarbon.reporting import (
    LEDGER_COLUMNS,
    LedgerFormat,
    RunLedger,
    check_comparable,
    export_ledger,
    format_summary_table,
    load_ledger,
    metadata_path,
    summarize,
    summary_to_dict,
)
from tests.conftest import make_config


@pytest.fixture(scope="module")
def two_node_ledger():
    """Ledger of a two-node, single-round FedAvg run."""
    return RunLedger.from_result(run_scenario(make_config()))


class TestRunLedger:
    """Test building ledgers from run results."""

    def test_one_row_per_node_round_phase(self, two_node_ledger):
        rows = two_node_ledger.rows
        assert len(rows) == 6
        assert [(r.node, r.round, r.phase) for r in rows] == [
            (0, 1, Phase.TRAINING), (0, 1, Phase.COMMUNICATION), (0, 1, Phase.AGGREGATION),
            (1, 1, Phase.TRAINING), (1, 1, Phase.COMMUNICATION), (1, 1, Phase.AGGREGATION),
        ]

    def test_rows_are_consistent(self, two_node_ledger):
        for row in two_node_ledger.rows:
            assert row.total_j == row.cpu_j + row.gpu_j + row.comm_j
            assert row.energy_kwh == pytest.approx(row.total_j / 3.6e6, rel=1e-12)
            assert row.gco2 == pytest.approx(row.energy_kwh * row.effective_ci, rel=1e-12)

    def test_metadata(self, two_node_ledger):
        metadata = two_node_ledger.metadata
        assert metadata["k"] == 2
        assert metadata["rounds_executed"] == 1
        assert metadata["exchanges"] == {"1": 2}
        assert len(metadata["fingerprint"]) == 64
        assert metadata["scenario"]["name"] == "test"
        assert {d["kind"] for d in metadata["diagnostics"]} >= {"constant_utilization"}


class TestExportLoad:
    """Test CSV and JSON ledgers on disk."""

    def test_csv_header(self, two_node_ledger):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "ledger.csv"
            export_ledger(two_node_ledger, LedgerFormat.CSV, path)
            lines = path.read_text(encoding="utf-8").splitlines()
            assert lines[0] == ",".join(LEDGER_COLUMNS)
            assert len(lines) == 7
            assert metadata_path(path).name == "ledger.meta.json"
            assert metadata_path(path).is_file()

    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_export_load_export_is_byte_identical(self, two_node_ledger, fmt):
        with tempfile.TemporaryDirectory() as tmpdir:
            first = Path(tmpdir) / f"first.{fmt}"
            second = Path(tmpdir) / f"second.{fmt}"
            export_ledger(two_node_ledger, fmt, first)
            loaded = load_ledger(first)
            export_ledger(loaded, fmt, second)
            assert first.read_bytes() == second.read_bytes()
            assert loaded.rows == two_node_ledger.rows
            assert loaded.fingerprint == two_node_ledger.fingerprint

    def test_empty_ledger_is_header_only(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "empty.csv"
            export_ledger(RunLedger(), "csv", path)
            assert path.read_text(encoding="utf-8") == ",".join(LEDGER_COLUMNS) + "\n"
            assert load_ledger(path).rows == []

    def test_json_document_layout(self, two_node_ledger):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "ledger.json"
            export_ledger(two_node_ledger, "json", path)
            document = json.loads(path.read_text(encoding="utf-8"))
        assert set(document) == {"metadata", "rows"}
        assert document["rows"][0]["phase"] == "training"

    def test_json_floats_match_csv_cells(self, two_node_ledger):
        """Both formats spell every float with 17 significant digits."""
        with tempfile.TemporaryDirectory() as tmpdir:
            csv_path = Path(tmpdir) / "ledger.csv"
            json_path = Path(tmpdir) / "ledger.json"
            export_ledger(two_node_ledger, "csv", csv_path)
            export_ledger(two_node_ledger, "json", json_path)
            first_row = csv_path.read_text(encoding="utf-8").splitlines()[1].split(",")
            text = json_path.read_text(encoding="utf-8")
        row = two_node_ledger.rows[0]
        assert first_row[LEDGER_COLUMNS.index("total_j")] == format(row.total_j, ".17g")
        assert f'"total_j": {format(row.total_j, ".17g")}' in text
        assert f'"gco2": {format(row.gco2, ".17g")}' in text

    def test_diagnostics_survive_export(self, two_node_ledger):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "ledger.csv"
            export_ledger(two_node_ledger, "csv", path)
            restored = load_ledger(path).diagnostics()
        assert restored.to_dicts() == two_node_ledger.metadata["diagnostics"]
        assert restored.has_kind(DiagnosticKind.CONSTANT_UTILIZATION)

    def test_malformed_diagnostic(self):
        ledger = RunLedger(metadata={"diagnostics": [{"kind": "weather"}]})
        with pytest.raises(LedgerError) as exc:
            ledger.diagnostics()
        assert exc.value.error_code == "R007"

    def test_missing_column(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "bad.csv"
            path.write_text("node,round\n0,1\n", encoding="utf-8")
            with pytest.raises(LedgerError) as exc:
                load_ledger(path)
        assert exc.value.error_code == "R007"

    def test_malformed_json(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "bad.json"
            path.write_text("{not json", encoding="utf-8")
            with pytest.raises(LedgerError):
                load_ledger(path)

    def test_not_utf8(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "ledger.csv"
            path.write_bytes(b"\xff\xfe\xfa not text\n")
            with pytest.raises(LedgerIOError) as exc:
                load_ledger(path)
        assert exc.value.error_code == "R006"

    def test_oversized_csv_field(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "ledger.csv"
            path.write_text(",".join(LEDGER_COLUMNS) + "\n" + "0" * 200_000 + "\n",
                            encoding="utf-8")
            with pytest.raises(LedgerError) as exc:
                load_ledger(path)
        assert exc.value.error_code == "R007"

    def test_rows_must_be_a_list(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "ledger.json"
            path.write_text('{"metadata": {}, "rows": 3}', encoding="utf-8")
            with pytest.raises(LedgerError) as exc:
                load_ledger(path)
        assert exc.value.error_code == "R007"

    def test_unreadable(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            with pytest.raises(LedgerIOError) as exc:
                load_ledger(Path(tmpdir) / "nope.csv")
        assert exc.value.error_code == "R006"


class TestSummary:
    """Test summaries and comparison tables."""

    def test_phase_identity(self, two_node_ledger):
        summary = summarize(two_node_ledger)
        phases = (summary.training, summary.aggregation, summary.communication)
        assert sum(p.kwh for p in phases) == pytest.approx(summary.total.kwh, rel=1e-12)
        assert sum(p.grams_co2 for p in phases) == pytest.approx(summary.total.grams_co2,
                                                                 rel=1e-12)
        assert summary.k == 2
        assert summary.rounds == 1

    def test_refuses_different_node_counts(self, two_node_ledger):
        other = RunLedger.from_result(run_scenario(make_config(k=3)))
        summaries = [summarize(two_node_ledger, "a"), summarize(other, "b")]
        with pytest.raises(LedgerError) as exc:
            check_comparable(summaries)
        assert exc.value.error_code == "R005"
        check_comparable(summaries, force=True)

    def test_table(self, two_node_ledger):
        table = format_summary_table([summarize(two_node_ledger, "fedavg")])
        lines = table.splitlines()
        assert lines[0].startswith("Run")
        assert "Train CE" in lines[0] and "F1" in lines[0]
        assert lines[2].startswith("fedavg")

    def test_summary_dict(self, two_node_ledger):
        document = summary_to_dict(summarize(two_node_ledger))
        assert document["total_kwh"] == pytest.approx(
            document["training_kwh"] + document["communication_kwh"]
            + document["aggregation_kwh"], rel=1e-12)
