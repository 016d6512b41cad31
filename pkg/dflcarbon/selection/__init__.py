"""Carbon-intensity voting for per-round trainer selection."""

from dflcarbon.selection.voting import (
    SelectionKind,
    SelectionResult,
    VoteTally,
    cast_votes,
    select_participants,
)

__all__ = [
    'SelectionKind',
    'SelectionResult',
    'VoteTally',
    'cast_votes',
    'select_participants',
]
