"""Brute-force capacity oracles, independent of every closed-form route.

The one-shot classical value is maximized directly over input ensembles
(output-entropy gap) and the entanglement-assisted value directly over
the Bloch ball (mutual information through the Stinespring environment).
No formula from :mod:`qcapax.capacity` enters; agreement between the two
routes is what the verification suite asserts.

Search strategy, deterministic for a given seed:

* one-shot: a dense coarse stage restricted to the x-z meridian (phase
  covariance makes that plane the natural first guess, but it is not
  trusted alone), then seeded random restarts of pattern-search ascent
  over full Bloch-sphere ensembles and their probabilities;
* assisted: a z-axis grid refined by golden section, plus seeded random
  off-axis restarts whose job is to certify that the axis was optimal.

Candidate scoring inside the searches uses fast closed-form qubit
entropies and a batched eigensolver; every reported value is re-scored
through :func:`holevo_of_ensemble` / :func:`mutual_information`, which
evaluate the definitions exactly via :mod:`qcapax.core`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    BlochVector, ChannelValidityError, DensityMatrix, IDENTITY_2,
    PhaseCovariantChannel, SIGMA_1, SIGMA_2, SIGMA_3,
    apply, binary_entropy, complementary_apply, entropy, kraus,
)
from .parallel import parallel_map

__all__ = [
    "Ensemble", "OracleReport",
    "holevo_of_ensemble", "chi_bruteforce",
    "mutual_information", "ce_bruteforce",
]


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Input states (Bloch form) with their probabilities."""

    states: list
    probs: np.ndarray

    def validate(self) -> None:
        p = np.asarray(self.probs, dtype=float)
        if len(self.states) != p.size:
            raise ValueError("one probability per state required")
        if np.any(p < -1e-12) or abs(p.sum() - 1.0) > 1e-10:
            raise ValueError("probabilities must be nonnegative and sum to 1")
        for st in self.states:
            if st.radius > 1.0 + 1e-10:
                raise ValueError("states must lie in the Bloch ball")


@dataclass(frozen=True, eq=False)
class OracleReport:
    """Outcome of a brute-force maximization."""

    value: float
    argmax: object
    restarts: int
    residual: float
    off_axis_improved: bool | None = None


def holevo_of_ensemble(ch: PhaseCovariantChannel, ens: Ensemble) -> float:
    """Output-entropy gap S(sum_k p_k out_k) - sum_k p_k S(out_k), exactly."""
    ens.validate()
    outs = [apply(ch, st.to_density()).matrix for st in ens.states]
    probs = np.asarray(ens.probs, dtype=float)
    avg = sum(p * m for p, m in zip(probs, outs))
    gap = entropy(avg)
    for p, m in zip(probs, outs):
        if p > 0.0:
            gap -= p * entropy(m)
    return gap


# ---------------------------------------------------------------------------
# Fast scoring helpers (closed-form qubit entropies)
# ---------------------------------------------------------------------------

def _h2_vec(x: np.ndarray) -> np.ndarray:
    x = np.clip(x, 0.0, 1.0)
    out = np.zeros_like(x)
    mask = (x > 0.0) & (x < 1.0)
    xm = x[mask]
    out[mask] = -(xm * np.log2(xm) + (1.0 - xm) * np.log2(1.0 - xm))
    return out


def _entropy_of_radius(r: float) -> float:
    return binary_entropy(0.5 * (1.0 + min(r, 1.0)))


# ---------------------------------------------------------------------------
# One-shot classical capacity
# ---------------------------------------------------------------------------

_COARSE_ANGLES = 180
_WEIGHT_STEP = 0.02
_CHI_RESTARTS = 200
_ASCENT_STOP = 1e-8


def _coarse_meridian(l1: float, l3: float, ls: float) -> tuple:
    """Best two-state ensemble on the x-z meridian, dense angle/weight grid."""
    theta = np.linspace(0.0, 2.0 * math.pi, _COARSE_ANGLES, endpoint=False)
    vx = l1 * np.sin(theta)
    vz = l3 * np.cos(theta) + ls
    s_pure = _h2_vec(0.5 * (1.0 + np.hypot(vx, vz)))
    best = (-math.inf, 0.0, 0.0, 0.5)
    for w in np.arange(0.0, 1.0 + 1e-9, _WEIGHT_STEP):
        mx = w * vx[:, None] + (1.0 - w) * vx[None, :]
        mz = w * vz[:, None] + (1.0 - w) * vz[None, :]
        val = (_h2_vec(0.5 * (1.0 + np.hypot(mx, mz)))
               - (w * s_pure[:, None] + (1.0 - w) * s_pure[None, :]))
        i, j = np.unravel_index(np.argmax(val), val.shape)
        if val[i, j] > best[0]:
            best = (float(val[i, j]), float(theta[i]), float(theta[j]), float(w))
    return best


def _chi_fast(l1: float, l3: float, ls: float, params: np.ndarray,
              k: int) -> float:
    th = params[:k]
    ph = params[k:2 * k]
    u = params[2 * k:]
    tot = u.sum()
    if tot < 1e-12:
        return -math.inf
    mx = my = mz = 0.0
    avg_s = 0.0
    for i in range(k):
        w = u[i] / tot
        if w == 0.0:
            continue
        st = math.sin(th[i])
        ox = l1 * st * math.cos(ph[i])
        oy = l1 * st * math.sin(ph[i])
        oz = l3 * math.cos(th[i]) + ls
        avg_s += w * _entropy_of_radius(math.sqrt(ox * ox + oy * oy + oz * oz))
        mx += w * ox
        my += w * oy
        mz += w * oz
    return _entropy_of_radius(math.sqrt(mx * mx + my * my + mz * mz)) - avg_s


def _pattern_ascend(score, params: np.ndarray, steps: np.ndarray,
                    lower=None, max_passes: int = 60) -> tuple:
    """Greedy coordinate pattern search with per-coordinate step halving."""
    params = params.copy()
    steps = steps.copy()
    best = score(params)
    last_gain = math.inf
    for _ in range(max_passes):
        gain = 0.0
        for i in range(params.size):
            moved = False
            for delta in (steps[i], -steps[i]):
                cand = params[i] + delta
                if lower is not None and lower[i] is not None:
                    cand = max(cand, lower[i])
                old = params[i]
                params[i] = cand
                v = score(params)
                if v > best + 1e-15:
                    gain += v - best
                    best = v
                    moved = True
                    break
                params[i] = old
            if not moved:
                steps[i] *= 0.5
        last_gain = gain
        if gain < _ASCENT_STOP and steps.max() < 1e-4:
            break
    return best, params, last_gain


def chi_bruteforce(ch: PhaseCovariantChannel, max_states: int = 4,
                   seed: int = 0) -> OracleReport:
    """Maximize the output-entropy gap over ensembles of pure states.

    Four states suffice for a qubit (the d^2 heuristic); the default
    matches that.  Results are deterministic given (seed, grid settings).
    """
    if not ch.is_valid:
        raise ChannelValidityError("oracle requires a completely positive channel")
    l1, l3, ls = ch.lambda1, ch.lambda3, ch.lambda_star
    k = max_states

    def score(params: np.ndarray) -> float:
        return _chi_fast(l1, l3, ls, params, k)

    coarse_val, th_i, th_j, w = _coarse_meridian(l1, l3, ls)

    def packed(thetas, phis, weights) -> np.ndarray:
        th = np.zeros(k)
        ph = np.zeros(k)
        u = np.zeros(k)
        th[:len(thetas)] = thetas
        ph[:len(phis)] = phis
        u[:len(weights)] = weights
        return np.concatenate([th, ph, u])

    starts = [
        packed([th_i, th_j], [0.0, 0.0], [w, 1.0 - w]),
        packed([0.0, math.pi], [0.0, 0.0], [0.5, 0.5]),
    ]
    seeds = np.random.SeedSequence(seed).spawn(_CHI_RESTARTS)

    def run_restart(idx: int) -> tuple:
        rng = np.random.default_rng(seeds[idx])
        params = packed(rng.uniform(0.0, math.pi, k),
                        rng.uniform(0.0, 2.0 * math.pi, k),
                        rng.uniform(0.1, 1.0, k))
        steps = np.concatenate([np.full(2 * k, 0.4), np.full(k, 0.25)])
        lower = [None] * (2 * k) + [0.0] * k
        return _pattern_ascend(score, params, steps, lower)

    best_val, best_params, best_gain = -math.inf, None, math.inf
    for start in starts:
        steps = np.concatenate([np.full(2 * k, 0.4), np.full(k, 0.25)])
        lower = [None] * (2 * k) + [0.0] * k
        v, pr, gain = _pattern_ascend(score, start, steps, lower)
        if v > best_val:
            best_val, best_params, best_gain = v, pr, gain
    for v, pr, gain in parallel_map(run_restart, range(_CHI_RESTARTS)):
        if v > best_val:
            best_val, best_params, best_gain = v, pr, gain

    th = best_params[:k]
    ph = best_params[k:2 * k]
    u = best_params[2 * k:]
    probs = u / u.sum()
    states = [BlochVector(math.sin(a) * math.cos(b),
                          math.sin(a) * math.sin(b),
                          math.cos(a)) for a, b in zip(th, ph)]
    ens = Ensemble(states, probs)
    return OracleReport(value=holevo_of_ensemble(ch, ens), argmax=ens,
                        restarts=_CHI_RESTARTS, residual=best_gain)


# ---------------------------------------------------------------------------
# Entanglement-assisted capacity
# ---------------------------------------------------------------------------

_CE_RESTARTS = 100
_CE_AXIS_STEP = 1e-3


def mutual_information(ch: PhaseCovariantChannel, rho: DensityMatrix) -> float:
    """S(rho) + S(out) - S(env), evaluated exactly from the definitions."""
    if not ch.is_valid:
        raise ChannelValidityError("oracle requires a completely positive channel")
    rho.validate()
    ks = kraus(ch)
    return (entropy(rho) + entropy(apply(ch, rho))
            - entropy(complementary_apply(ch, rho, ks)))


def _env_entropies(kr: np.ndarray, rhos: np.ndarray) -> np.ndarray:
    env = np.einsum("iab,nbc,jac->nij", kr, rhos, kr.conj())
    w = np.linalg.eigvalsh(env)
    w = np.clip(w, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(w > 0.0, w * np.log2(np.where(w > 0.0, w, 1.0)), 0.0)
    return -terms.sum(axis=1)


def _rho_batch(xs, ys, zs) -> np.ndarray:
    xs, ys, zs = np.broadcast_arrays(np.asarray(xs, float),
                                     np.asarray(ys, float),
                                     np.asarray(zs, float))
    return 0.5 * (IDENTITY_2[None, :, :]
                  + xs[:, None, None] * SIGMA_1[None, :, :]
                  + ys[:, None, None] * SIGMA_2[None, :, :]
                  + zs[:, None, None] * SIGMA_3[None, :, :])


def ce_bruteforce(ch: PhaseCovariantChannel, seed: int = 0) -> OracleReport:
    """Maximize the mutual information over the Bloch ball.

    A z-axis grid is scanned first (phase covariance suggests the optimum
    sits on the axis); off-axis restarts then either confirm it or set the
    ``off_axis_improved`` flag instead of silently trusting the symmetry.
    """
    if not ch.is_valid:
        raise ChannelValidityError("oracle requires a completely positive channel")
    l1, l3, ls = ch.lambda1, ch.lambda3, ch.lambda_star
    kr = np.array(kraus(ch).operators)

    def mi_fast_vec(xs, ys, zs) -> np.ndarray:
        xs = np.asarray(xs, float)
        ys = np.asarray(ys, float)
        zs = np.asarray(zs, float)
        r_in = np.sqrt(xs ** 2 + ys ** 2 + zs ** 2)
        r_out = np.sqrt((l1 * xs) ** 2 + (l1 * ys) ** 2 + (l3 * zs + ls) ** 2)
        s_in = _h2_vec(0.5 * (1.0 + np.clip(r_in, 0.0, 1.0)))
        s_out = _h2_vec(0.5 * (1.0 + np.clip(r_out, 0.0, 1.0)))
        return s_in + s_out - _env_entropies(kr, _rho_batch(xs, ys, zs))

    def mi_fast(x: float, y: float, z: float) -> float:
        return float(mi_fast_vec([x], [y], [z])[0])

    # stage 1: z axis
    zs = np.linspace(-1.0, 1.0, int(round(2.0 / _CE_AXIS_STEP)) + 1)
    vals = mi_fast_vec(np.zeros_like(zs), np.zeros_like(zs), zs)
    i = int(np.argmax(vals))
    axis_best = float(vals[i])
    axis_z = float(zs[i])
    gr = (math.sqrt(5.0) + 1.0) / 2.0
    a, b = max(-1.0, axis_z - _CE_AXIS_STEP), min(1.0, axis_z + _CE_AXIS_STEP)
    while b - a > 1e-8:
        c = b - (b - a) / gr
        d = a + (b - a) / gr
        if mi_fast(0.0, 0.0, c) > mi_fast(0.0, 0.0, d):
            b = d
        else:
            a = c
    axis_z = 0.5 * (a + b)
    axis_best = max(axis_best, mi_fast(0.0, 0.0, axis_z))

    # stage 2: off-axis restarts
    seeds = np.random.SeedSequence(seed).spawn(_CE_RESTARTS)

    def score(params: np.ndarray) -> float:
        r = math.sqrt(params @ params)
        if r > 1.0:
            params = params * ((1.0 - 1e-12) / r)
        return mi_fast(params[0], params[1], params[2])

    def run_restart(idx: int) -> tuple:
        rng = np.random.default_rng(seeds[idx])
        direction = rng.normal(size=3)
        direction /= np.linalg.norm(direction)
        params = direction * rng.uniform(0.0, 1.0) ** (1.0 / 3.0)
        steps = np.full(3, 0.25)
        return _pattern_ascend(score, params, steps, max_passes=50)

    best_val, best_pt, best_gain = axis_best, np.array([0.0, 0.0, axis_z]), 0.0
    off_axis_improved = False
    for v, pr, gain in parallel_map(run_restart, range(_CE_RESTARTS)):
        r = math.sqrt(pr @ pr)
        if r > 1.0:
            pr = pr * ((1.0 - 1e-12) / r)
        if v > axis_best + 1e-6 and math.hypot(pr[0], pr[1]) > 1e-6:
            off_axis_improved = True
        if v > best_val:
            best_val, best_pt, best_gain = v, pr, gain

    arg = BlochVector(float(best_pt[0]), float(best_pt[1]), float(best_pt[2]))
    value = mutual_information(ch, arg.to_density())
    return OracleReport(value=value, argmax=arg, restarts=_CE_RESTARTS,
                        residual=best_gain, off_axis_improved=off_axis_improved)
