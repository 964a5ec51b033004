"""Rate conversions, pseudothresholds, and family-threshold crossings."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InsufficientData, NoCrossings


@dataclass
class ThresholdEstimate:
    name: str
    kind: str  # pseudothreshold | family
    value: float | None  # None when above range
    above_range: bool = False
    max_p: float | None = None
    crossings_used: int = 0

    @property
    def marker(self) -> str:
        if self.above_range:
            return f"> {100 * self.max_p:g}%"
        return f"{100 * self.value:.4g}%"


def per_cycle_rate(P_L: float, T: int) -> float:
    """1 - (1 - P_L)^(1/T): per-round failure from a T-round experiment."""
    if not 0.0 <= P_L <= 1.0:
        raise ValueError(f"P_L = {P_L} outside [0, 1]")
    if T < 1:
        raise ValueError("T must be >= 1")
    return 1.0 - (1.0 - P_L) ** (1.0 / T)


def per_observable_rate(P_L: float, k: int) -> float:
    """Same map with k in place of T: normalizes any-logical rates across k."""
    return per_cycle_rate(P_L, k)


def wilson_interval(fails: int, shots: int, z: float = 1.959964) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if shots < 1 or not 0 <= fails <= shots:
        raise ValueError(f"invalid counts {fails}/{shots}")
    phat = fails / shots
    denom = 1.0 + z * z / shots
    center = (phat + z * z / (2 * shots)) / denom
    half = (
        z
        * math.sqrt(phat * (1 - phat) / shots + z * z / (4 * shots * shots))
        / denom
    )
    return max(0.0, center - half), min(1.0, center + half)


def pseudothreshold(
    points: list[tuple[float, float]], k: int, T: int, name: str = ""
) -> ThresholdEstimate:
    """Break-even p where the per-cycle logical rate crosses k*p.

    points are (p, P_L) sorted by p; the crossing is interpolated linearly
    in (p, p_L).  If p_L stays below k*p over the whole sweep, the estimate
    carries an above-range marker instead of a value.
    """
    if len(points) < 2:
        raise InsufficientData(f"{len(points)} sweep points (need >= 2)")
    ps = [p for p, _ in points]
    if ps != sorted(ps):
        raise ValueError("points must be sorted by p")
    gap = [per_cycle_rate(P_L, T) - k * p for p, P_L in points]
    for i in range(len(points) - 1):
        if gap[i] <= 0.0 <= gap[i + 1] and gap[i] != gap[i + 1]:
            p0, p1 = ps[i], ps[i + 1]
            t = -gap[i] / (gap[i + 1] - gap[i])
            return ThresholdEstimate(
                name, "pseudothreshold", p0 + t * (p1 - p0), crossings_used=1
            )
    if all(g < 0 for g in gap):
        return ThresholdEstimate(
            name, "pseudothreshold", None, above_range=True, max_p=ps[-1]
        )
    if all(g > 0 for g in gap):
        # already failing at the lowest swept p: report the bottom of range
        return ThresholdEstimate(
            name, "pseudothreshold", ps[0], crossings_used=0
        )
    # sign pattern +...- : encoded advantage only above some p; first
    # downward crossing is still the break-even point
    for i in range(len(points) - 1):
        if gap[i] >= 0.0 >= gap[i + 1] and gap[i] != gap[i + 1]:
            p0, p1 = ps[i], ps[i + 1]
            t = gap[i] / (gap[i] - gap[i + 1])
            return ThresholdEstimate(
                name, "pseudothreshold", p0 + t * (p1 - p0), crossings_used=1
            )
    raise NoCrossings("no sign change located")  # pragma: no cover


def _logit(x: float) -> float:
    return math.log(x / (1.0 - x))


def _curve_logspace(points, k):
    out = []
    for p, P_L in points:
        if p <= 0:
            continue
        q = per_observable_rate(P_L, k)
        if 0.0 < q < 1.0:
            out.append((math.log(p), _logit(q)))
    return out


def _segment_crossings(a, b):
    """Crossing x-positions of two piecewise-linear curves (shared x-axis)."""
    xs = sorted({x for x, _ in a} | {x for x, _ in b})

    def ev(curve, x):
        if x < curve[0][0] or x > curve[-1][0]:
            return None
        for (x0, y0), (x1, y1) in zip(curve, curve[1:]):
            if x0 <= x <= x1:
                if x1 == x0:
                    return y0
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        return None

    cross = []
    prev = None
    for x in xs:
        ya, yb = ev(a, x), ev(b, x)
        if ya is None or yb is None:
            prev = None
            continue
        diff = ya - yb
        if prev is not None:
            x0, d0 = prev
            if d0 == 0.0:
                cross.append(x0)
            elif d0 * diff < 0:
                cross.append(x0 + (x - x0) * d0 / (d0 - diff))
        prev = (x, diff)
    if prev is not None and prev[1] == 0.0:
        cross.append(prev[0])
    return cross


def family_threshold(
    curves: list[list[tuple[float, float]]], ks: list[int], name: str = ""
) -> ThresholdEstimate:
    """Mean crossing of consecutive codes' per-observable curves.

    Curves are per-code (p, P_L) sweeps ordered by code size; crossings are
    found between consecutive pairs in (log p, logit p_obs) space and
    averaged with equal weight.
    """
    if len(curves) < 2 or len(curves) != len(ks):
        raise InsufficientData("need >= 2 curves with matching k list")
    logs = [_curve_logspace(c, k) for c, k in zip(curves, ks)]
    crossings = []
    for a, b in zip(logs, logs[1:]):
        if len(a) < 2 or len(b) < 2:
            continue
        crossings.extend(_segment_crossings(a, b))
    if not crossings:
        raise NoCrossings("no per-observable curve crossings in the sweep")
    value = math.exp(sum(crossings) / len(crossings))
    return ThresholdEstimate(
        name, "family", value, crossings_used=len(crossings)
    )
