"""Run ledgers and summary tables."""

from dflcarbon.reporting.ledger import (
    LEDGER_COLUMNS,
    LedgerFormat,
    LedgerRow,
    RunLedger,
    export_ledger,
    load_ledger,
    metadata_path,
)
from dflcarbon.reporting.summary import (
    PhaseTotals,
    Summary,
    check_comparable,
    format_summary_table,
    summarize,
    summary_to_dict,
)

__all__ = [
    'LEDGER_COLUMNS',
    'LedgerFormat',
    'LedgerRow',
    'PhaseTotals',
    'RunLedger',
    'Summary',
    'check_comparable',
    'export_ledger',
    'format_summary_table',
    'load_ledger',
    'metadata_path',
    'summarize',
    'summary_to_dict',
]
