"""Sequence extrapolation helpers for boundary ladders."""

from __future__ import annotations


def aitken(values):
    """Accelerate a convergent sequence with one Aitken delta-squared step.

    Uses the last three entries.  Returns (estimate, uncertainty) where the
    uncertainty is the distance between the raw last entry and the
    accelerated value.  Falls back to the last entry when the denominator
    degenerates (sequence already flat).  Works for real or complex entries.
    """
    v = list(values)
    if len(v) < 3:
        est = v[-1]
        unc = abs(v[-1] - v[-2]) if len(v) == 2 else 0.0
        return est, float(unc)
    x0, x1, x2 = v[-3], v[-2], v[-1]
    d1 = x1 - x0
    d2 = x2 - x1
    den = d2 - d1
    if den == 0 or abs(den) < 1e-300:
        return x2, float(abs(d2))
    est = x2 - d2 * d2 / den
    return est, float(abs(x2 - est))


def is_converging(values, factor=10.0, floor=1e-12):
    """True when the tail of the sequence is not expanding.

    A last gap larger than `factor` times the previous gap (plus the
    floor, which callers set to their roundoff scale so that a sequence
    jittering at its precision limit is not flagged) signals divergence.
    """
    v = [complex(x) for x in values]
    if len(v) < 3:
        return True
    g1 = abs(v[-2] - v[-3])
    g2 = abs(v[-1] - v[-2])
    return g2 <= factor * g1 + floor
