"""Closed-form and semi-analytic channel capacities for the damping family.

Everything here is expressed in bits (base-2 logarithms).  The building
block is the radius information function

    g(x) = (1 + x) log2(1 + x) + (1 - x) log2(1 - x),

whose derivative log2((1+x)/(1-x)) diverges at the endpoints; scans clamp
arguments to the open interval and rely on continuity of the capacity
itself.  For a unital map with transverse eigenvalue lam the one-shot
classical capacity is g(lam)/2 and the entanglement-assisted capacity is
exactly twice that.  Off the unital line the one-shot value comes from a
scalar implicit equation and the entanglement-assisted value from a 1-d
maximization, both solved by dense scans plus local refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PhaseCovariantChannel, binary_entropy
from .dynamics import GadcFamily
from .parallel import parallel_map

__all__ = [
    "bloch_information", "bloch_information_deriv",
    "holevo_unital", "ce_unital",
    "HolevoSolve", "holevo_gadc",
    "CEObjective", "ce_objective", "ce_gadc", "ce_ad",
    "gadc_parameters", "capacity_bounds",
    "crossing_windows",
    "CapacityPoint", "trajectory",
]

_EDGE = 1e-12


def bloch_information(x: float) -> float:
    """(1+x) log2(1+x) + (1-x) log2(1-x) with the 0 log 0 convention."""
    if not -1.0 - 1e-12 <= x <= 1.0 + 1e-12:
        raise ValueError("argument must lie in [-1, 1]")
    x = min(1.0, max(-1.0, x))
    acc = 0.0
    for u in (1.0 + x, 1.0 - x):
        if u > 0.0:
            acc += u * math.log2(u)
    return acc


def bloch_information_deriv(x) -> np.ndarray:
    """log2((1+x)/(1-x)), clamped away from the singular endpoints."""
    x = np.clip(np.asarray(x, dtype=float), -1.0 + _EDGE, 1.0 - _EDGE)
    return np.log2((1.0 + x) / (1.0 - x))


# ---------------------------------------------------------------------------
# Unital closed forms
# ---------------------------------------------------------------------------

def holevo_unital(lam: float) -> float:
    """One-shot classical capacity of the unital member, g(lam)/2.

    Coincides with the full classical capacity on the unital line.
    """
    return 0.5 * bloch_information(lam)


def ce_unital(lam: float) -> float:
    """Entanglement-assisted capacity of the unital member: 2 x Holevo."""
    return 2.0 * holevo_unital(lam)


# ---------------------------------------------------------------------------
# Holevo capacity off the unital line
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HolevoSolve:
    """Solution of the implicit stationarity equation for the Holevo value."""

    q: float
    r: float
    chi: float
    residual: float
    n_roots: int
    low_confidence: bool


def _radius(lam: float, p: float, q) -> np.ndarray:
    inner = (np.asarray(q, dtype=float) - p) / lam + p * lam
    rad = lam * lam + np.asarray(q) ** 2 - inner ** 2
    return np.sqrt(np.clip(rad, 0.0, None))


def _implicit_gap(lam: float, p: float, q) -> np.ndarray:
    r = _radius(lam, p, q)
    return (bloch_information_deriv(r) * (np.asarray(q) - p) * (1.0 - lam * lam)
            + r * lam * lam * bloch_information_deriv(q))


def _admissible_interval(lam: float, p: float) -> tuple:
    # radicand is a downward parabola in q: (1 - 1/lam^2) q^2 - 2ABq + lam^2 - B^2
    a = 1.0 / lam
    b = p * (lam - a)
    c2 = 1.0 - a * a
    disc = (a * b) ** 2 - c2 * (lam * lam - b * b)
    if disc < 0.0:
        raise ValueError("empty admissible set for the implicit equation")
    root = math.sqrt(disc)
    q1 = (a * b - root) / c2
    q2 = (a * b + root) / c2
    lo, hi = min(q1, q2), max(q1, q2)
    return max(lo, -1.0 + _EDGE), min(hi, 1.0 - _EDGE)


def holevo_gadc(lam: float, p: float, scan_points: int = 2001) -> HolevoSolve:
    """One-shot classical capacity of the damping family member (lam, p).

    The stationarity gap is scanned on a dense grid over the admissible
    interval, every sign change is bisected to 1e-12, and among the roots
    the one maximizing the capacity is returned (uniqueness of the root is
    not guaranteed, so all candidates are compared).  Interval endpoints
    are roots by construction (the induced radius vanishes there) but give
    nonpositive values and never win.
    """
    lam = abs(float(lam))
    if lam > 1.0 + 1e-12 or abs(p) > 1.0 + 1e-12:
        raise ValueError("need |lam| <= 1 and |p| <= 1")
    if lam >= 1.0 - _EDGE:
        return HolevoSolve(q=0.0, r=1.0, chi=1.0, residual=0.0,
                           n_roots=1, low_confidence=False)
    if lam <= _EDGE:
        r0 = abs(p)
        return HolevoSolve(q=p, r=r0, chi=0.0, residual=0.0,
                           n_roots=1, low_confidence=False)

    lo, hi = _admissible_interval(lam, p)
    qs = np.linspace(lo, hi, scan_points)
    gs = _implicit_gap(lam, p, qs)

    def bisect(a: float, b: float, ga: float) -> float:
        while b - a > 1e-12:
            m = 0.5 * (a + b)
            gm = float(_implicit_gap(lam, p, m))
            if gm == 0.0:
                return m
            if (gm > 0.0) == (ga > 0.0):
                a, ga = m, gm
            else:
                b = m
        return 0.5 * (a + b)

    roots = []
    sign = np.sign(gs)
    for i in range(scan_points - 1):
        if sign[i] == 0.0:
            roots.append(float(qs[i]))
        elif sign[i] * sign[i + 1] < 0.0:
            roots.append(bisect(float(qs[i]), float(qs[i + 1]), float(gs[i])))
    if sign[-1] == 0.0:
        roots.append(float(qs[-1]))

    low_confidence = False
    if not roots:
        roots = [float(qs[np.argmin(np.abs(gs))])]
        low_confidence = True

    best = None
    for q in roots:
        r = float(_radius(lam, p, q))
        chi = 0.5 * (bloch_information(min(r, 1.0)) - bloch_information(q))
        if best is None or chi > best[0]:
            best = (chi, q, r)
    chi, q, r = best
    residual = abs(float(_implicit_gap(lam, p, q)))
    return HolevoSolve(q=q, r=r, chi=max(chi, 0.0), residual=residual,
                       n_roots=len(roots), low_confidence=low_confidence)


# ---------------------------------------------------------------------------
# Entanglement-assisted capacity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CEObjective:
    """Mutual-information objective at input bias z, with its eigen-weights."""

    z: float
    value: float
    h_plus: float
    h_minus: float
    delta_plus: float
    delta_minus: float


def _xlog2(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    out = np.zeros_like(w)
    mask = w > 0.0
    out[mask] = w[mask] * np.log2(w[mask])
    return out


def _ce_weights(lam: float, p: float, z):
    z = np.asarray(z, dtype=float)
    l2 = lam * lam
    h_plus = 0.25 * (1.0 + z) * (1.0 - l2) * (1.0 - p)
    h_minus = 0.25 * (1.0 - z) * (1.0 - l2) * (1.0 + p)
    mid = 1.0 + l2 + z * p * (1.0 - l2)
    root = np.sqrt(np.clip(
        4.0 * (l2 + z * p * (1.0 - l2)) + (1.0 - l2) ** 2 * (p - z) ** 2,
        0.0, None))
    delta_plus = 0.25 * (mid + root)
    delta_minus = 0.25 * (mid - root)
    return h_plus, h_minus, delta_plus, delta_minus


def _ce_value(lam: float, p: float, z):
    z = np.asarray(z, dtype=float)
    l2 = lam * lam
    hp, hm, dp, dm = _ce_weights(lam, p, z)
    out_bias = 0.5 * (1.0 + p + l2 * (z - p))
    h2 = np.vectorize(binary_entropy)
    return (h2(0.5 * (1.0 + z)) + h2(out_bias)
            + _xlog2(hp) + _xlog2(hm)
            + _xlog2(np.clip(dp, 0.0, None)) + _xlog2(np.clip(dm, 0.0, None)))


def ce_objective(lam: float, p: float, z: float) -> CEObjective:
    """Evaluate the maximization objective and expose its four eigen-weights."""
    hp, hm, dp, dm = _ce_weights(lam, p, float(z))
    value = float(_ce_value(lam, p, float(z)))
    return CEObjective(float(z), value, float(hp), float(hm), float(dp), float(dm))


def _golden_max(fn, a: float, b: float, tol: float = 1e-8) -> tuple:
    gr = (math.sqrt(5.0) + 1.0) / 2.0
    c = b - (b - a) / gr
    d = a + (b - a) / gr
    fc, fd = fn(c), fn(d)
    while abs(b - a) > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - (b - a) / gr
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + (b - a) / gr
            fd = fn(d)
    x = 0.5 * (a + b)
    return x, fn(x)


def _grid_then_golden(fn_vec, fn_scalar, lo: float, hi: float,
                      step: float = 1e-3) -> tuple:
    grid = np.linspace(lo, hi, int(round((hi - lo) / step)) + 1)
    vals = fn_vec(grid)
    i = int(np.argmax(vals))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, grid.size - 1)]
    x, v = _golden_max(fn_scalar, float(a), float(b))
    if vals[i] > v:
        return float(grid[i]), float(vals[i])
    return x, v


def ce_gadc(lam: float, p: float) -> tuple:
    """Entanglement-assisted capacity for 0 < |p| < 1; returns (bits, argmax z).

    Concavity of the objective in z is not established, so a global grid
    (step 1e-3) precedes golden-section refinement of the best bracket.
    """
    lam = abs(float(lam))
    if not 0.0 <= lam <= 1.0 + 1e-12 or abs(p) > 1.0 + 1e-12:
        raise ValueError("need 0 <= lam <= 1 and |p| <= 1")
    if lam >= 1.0 - _EDGE:
        return 2.0, 0.0
    z, v = _grid_then_golden(lambda zs: _ce_value(lam, p, zs),
                             lambda zz: float(_ce_value(lam, p, zz)),
                             -1.0, 1.0)
    return v, z


def ce_ad(lam: float) -> float:
    """Entanglement-assisted capacity at maximal non-unitality (|p| = 1)."""
    lam = abs(float(lam))
    if lam > 1.0 + 1e-12:
        raise ValueError("need |lam| <= 1")
    l2 = min(lam * lam, 1.0)

    def fvec(pi):
        pi = np.asarray(pi, dtype=float)
        h2 = np.vectorize(binary_entropy)
        return h2(pi) + h2(pi * l2) - h2(pi * (1.0 - l2))

    _, v = _grid_then_golden(fvec, lambda x: float(fvec(x)), 0.0, 1.0)
    return v


# ---------------------------------------------------------------------------
# Bounds, dispatch, trajectories
# ---------------------------------------------------------------------------

def gadc_parameters(ch: PhaseCovariantChannel, tol: float = 1e-9) -> tuple:
    """Recover (lam, p) from a channel in the damping family, else raise."""
    lam = ch.lambda1
    if abs(ch.lambda3 - lam * lam) > tol:
        raise ValueError("channel is outside the damping family "
                         "(lambda3 != lambda1^2); use the brute-force oracle")
    span = 1.0 - lam * lam
    if span <= tol:
        if abs(ch.lambda_star) > tol:
            raise ValueError("lambda1 = +-1 requires lambda_star = 0")
        return lam, 0.0
    p = ch.lambda_star / span
    if abs(p) > 1.0 + 1e-9:
        raise ValueError("channel is outside the damping family (|p| > 1)")
    return lam, min(1.0, max(-1.0, p))


def _dispatch(lam: float, p: float) -> tuple:
    """(chi, c_e) for one damping-family member, routed per |p| regime."""
    lam = abs(float(lam))
    ap = abs(float(p))
    if lam >= 1.0 - _EDGE:
        return 1.0, 2.0
    if lam <= _EDGE:
        return 0.0, 0.0
    if ap <= _EDGE:
        chi = holevo_unital(lam)
        return chi, 2.0 * chi
    chi = holevo_gadc(lam, ap).chi
    if ap >= 1.0 - _EDGE:
        return chi, ce_ad(lam)
    return chi, ce_gadc(lam, ap)[0]


def capacity_bounds(channel_or_pair) -> tuple:
    """Lower and upper bounds on the classical capacity: (chi, c_e).

    The lower bound is tight (equals the classical capacity) on the
    unital line.
    """
    if isinstance(channel_or_pair, PhaseCovariantChannel):
        lam, p = gadc_parameters(channel_or_pair)
    else:
        lam, p = channel_or_pair
    chi, ce = _dispatch(lam, p)
    return chi, max(ce, chi)


@dataclass(frozen=True)
class CapacityPoint:
    """One row of a capacity-versus-time sweep."""

    t: float
    lam: float
    p: float
    chi: float
    c_e: float
    chi_unital: float
    c_e_unital: float


def trajectory(fam: GadcFamily, t_max: float, steps: int) -> list:
    """Capacity sweep on a uniform grid; failed rows carry NaN, never abort."""
    if steps < 2:
        raise ValueError("steps must be at least 2")
    ts = np.linspace(0.0, t_max, steps)

    def row(t: float) -> CapacityPoint:
        lam_t = float(fam.lam(t))
        chi_u = holevo_unital(abs(lam_t))
        try:
            chi, ce = _dispatch(lam_t, fam.p)
        except (ValueError, ArithmeticError):
            chi, ce = math.nan, math.nan
        return CapacityPoint(float(t), lam_t, fam.p, chi, ce,
                             chi_u, 2.0 * chi_u)

    return parallel_map(row, ts)


def crossing_windows(fam: GadcFamily, t_max: float, dt: float = 1e-2) -> list:
    """Times where the non-unital lower bound beats the unital assisted value.

    Returns [t_start, t_end] intervals with endpoints bisected to dt/100;
    an empty list is a legitimate result.
    """
    if abs(fam.p) <= _EDGE:
        return []
    n = int(round(t_max / dt))
    ts = np.arange(n + 1) * dt

    def gap(t: float) -> float:
        lam_t = abs(float(fam.lam(t)))
        chi, _ = _dispatch(lam_t, fam.p)
        return chi - ce_unital(lam_t)

    gaps = np.array([gap(t) for t in ts])

    def refine(a: float, b: float, ga: float) -> float:
        while b - a > dt / 100.0:
            m = 0.5 * (a + b)
            gm = gap(m)
            if (gm > 0.0) == (ga > 0.0):
                a, ga = m, gm
            else:
                b = m
        return 0.5 * (a + b)

    windows = []
    inside = gaps[0] > 0.0
    start = ts[0] if inside else None
    for i in range(n):
        now, nxt = gaps[i] > 0.0, gaps[i + 1] > 0.0
        if not now and nxt:
            start = refine(float(ts[i]), float(ts[i + 1]), float(gaps[i]))
        elif now and not nxt:
            end = refine(float(ts[i]), float(ts[i + 1]), float(gaps[i]))
            windows.append((float(start), float(end)))
            start = None
    if start is not None:
        windows.append((float(start), float(ts[-1])))
    return windows
