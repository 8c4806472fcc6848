"""Mode-specific normalization to a common non-negative pattern representation.

Active frames are shifted down by their minimum; passive (shadow) frames are
inverted so the shadow dip becomes a bump with a zero baseline. Both keep the
pre-normalization maximum (rawmax) because it feeds the passive feature set
and the mode-switch statistic.
"""
from __future__ import annotations

import numpy as np

from .errors import ModeMismatch
from .frames import Mode, NormalizedFrame, RawDataFrame


def normalize_active(raw: RawDataFrame) -> NormalizedFrame:
    """values[i] = raw[i] - min(raw); min of the result is exactly 0."""
    if raw.mode is not Mode.ACTIVE:
        raise ModeMismatch(f"normalize_active needs an active frame, got {raw.mode}")
    v = raw.voltages
    return NormalizedFrame(values=v - v.min(), rawmax=float(v.max()), source_mode=Mode.ACTIVE)


def normalize_passive(raw: RawDataFrame) -> NormalizedFrame:
    """values[i] = max(raw) - raw[i]; the shadow dip becomes a bump."""
    if raw.mode is not Mode.PASSIVE:
        raise ModeMismatch(f"normalize_passive needs a passive frame, got {raw.mode}")
    v = raw.voltages
    return NormalizedFrame(values=v.max() - v, rawmax=float(v.max()), source_mode=Mode.PASSIVE)


def normalize_frame(raw: RawDataFrame) -> NormalizedFrame:
    """Dispatch to the normalizer matching the frame's mode."""
    if raw.mode is Mode.ACTIVE:
        return normalize_active(raw)
    return normalize_passive(raw)


def pattern_sd(values) -> float:
    """Population standard deviation (n divisor) of a pattern or raw frame.

    The 8 values are the complete signal, not a sample, so the n divisor is
    used throughout; the no-gesture threshold is calibrated against it.
    """
    return float(np.asarray(values, dtype=float).std())
