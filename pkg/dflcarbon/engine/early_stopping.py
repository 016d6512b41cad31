"""Plateau detection on the per-round validation loss."""

from typing import Sequence


def early_stop_check(history: Sequence[float], patience: int, min_delta: float) -> bool:
    """True once the best loss has not improved by more than `min_delta`
    over the last `patience` rounds.

    The best loss seen before that window is compared with the best loss
    inside it; fewer than patience + 1 entries never stop.
    """
    if patience < 1 or min_delta < 0:
        raise ValueError("patience must be >= 1 and min_delta >= 0")
    if len(history) < patience + 1:
        return False
    best_before = min(history[:-patience])
    best_recent = min(history[-patience:])
    return best_before - best_recent <= min_delta
