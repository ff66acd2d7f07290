from __future__ import annotations

import numpy as np

# scores within this relative distance of the maximum count as tied
TIE_RTOL = 1e-9


def argmax_first(scores) -> int:
    """Index of the maximum; near-equal maxima resolve to the lowest index."""
    s = np.asarray(scores, dtype=float)
    top = s.max()
    return int(np.flatnonzero(s >= top - TIE_RTOL * max(1.0, abs(top)))[0])


def argmax_rows(scores: np.ndarray) -> np.ndarray:
    s = np.asarray(scores, dtype=float)
    top = s.max(axis=1, keepdims=True)
    tied = s >= top - TIE_RTOL * np.maximum(1.0, np.abs(top))
    return tied.argmax(axis=1)
