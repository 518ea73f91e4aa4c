"""Phase-covariant qubit channels: states, channel forms, entropies.

A phase-covariant qubit channel commutes with every rotation about the z
axis and is fully described by three real numbers: the transverse
eigenvalue ``lambda1`` (shrinks x and y), the longitudinal eigenvalue
``lambda3`` (shrinks z), and the translation ``lambda_star`` that pushes
the Bloch ball off-center along z.  On Bloch coordinates the action is

    (x, y, z)  ->  (lambda1 * x, lambda1 * y, lambda3 * z + lambda_star)

This module holds the channel and state types plus the matrix machinery
needed downstream: complete-positivity tests, Choi/Kraus forms, the
complementary (environment) channel, von Neumann entropy, and a small
self-contained Hermitian eigensolver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SIGMA_1", "SIGMA_2", "SIGMA_3", "IDENTITY_2", "SIGMA_PLUS", "SIGMA_MINUS",
    "CP_TOL",
    "ChannelValidityError", "DegenerateChannelError",
    "PhaseCovariantChannel", "BlochVector", "DensityMatrix",
    "ChoiMatrix", "KrausSet",
    "make_channel", "channel_from_dict",
    "is_cp", "is_cp_linear",
    "apply", "apply_bloch", "apply_matrix",
    "stationary_state", "non_unitality", "gadc", "mix",
    "choi", "kraus", "complementary_apply",
    "entropy", "binary_entropy",
    "covariance_check", "hermitian_eig", "hermitian_eigenvalues",
]

# ---------------------------------------------------------------------------
# Pauli algebra
# ---------------------------------------------------------------------------

SIGMA_1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_PLUS = (SIGMA_1 + 1.0j * SIGMA_2) / 2.0   # |0><1|
SIGMA_MINUS = (SIGMA_1 - 1.0j * SIGMA_2) / 2.0  # |1><0|

#: tolerance for the complete-positivity margin tests
CP_TOL = 1e-12


class ChannelValidityError(ValueError):
    """Raised when an operation requires a completely positive channel."""


class DegenerateChannelError(ValueError):
    """Raised when a channel quantity is undefined for the given parameters."""


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhaseCovariantChannel:
    """Qubit map (x, y, z) -> (lambda1 x, lambda1 y, lambda3 z + lambda_star)."""

    lambda1: float
    lambda3: float
    lambda_star: float

    @property
    def is_valid(self) -> bool:
        return is_cp(self)[0]

    @property
    def is_unital(self) -> bool:
        return self.lambda_star == 0.0

    def to_dict(self) -> dict:
        return {
            "lambda1": self.lambda1,
            "lambda3": self.lambda3,
            "lambdaStar": self.lambda_star,
        }


def channel_from_dict(obj: dict) -> PhaseCovariantChannel:
    """Inverse of :meth:`PhaseCovariantChannel.to_dict`."""
    return make_channel(float(obj["lambda1"]), float(obj["lambda3"]),
                        float(obj["lambdaStar"]))


@dataclass(frozen=True)
class BlochVector:
    """Real Bloch coordinates of a qubit state, |r| <= 1."""

    x: float
    y: float
    z: float

    @property
    def radius(self) -> float:
        return math.sqrt(self.x ** 2 + self.y ** 2 + self.z ** 2)

    def to_density(self) -> "DensityMatrix":
        return DensityMatrix.from_bloch(self.x, self.y, self.z)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """2x2 Hermitian, unit-trace, positive-semidefinite matrix."""

    matrix: np.ndarray

    @classmethod
    def from_bloch(cls, x: float, y: float, z: float) -> "DensityMatrix":
        m = 0.5 * (IDENTITY_2 + x * SIGMA_1 + y * SIGMA_2 + z * SIGMA_3)
        return cls(m)

    @property
    def bloch(self) -> BlochVector:
        m = self.matrix
        return BlochVector(
            float(np.trace(m @ SIGMA_1).real),
            float(np.trace(m @ SIGMA_2).real),
            float(np.trace(m @ SIGMA_3).real),
        )

    def validate(self, trace_tol: float = 1e-12, psd_tol: float = 1e-12) -> None:
        m = self.matrix
        if m.shape != (2, 2):
            raise ValueError("density matrix must be 2x2")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError("density matrix must be Hermitian")
        if abs(np.trace(m).real - 1.0) > trace_tol:
            raise ValueError("density matrix must have unit trace")
        # 2x2 eigenvalues are (1 +- |r|)/2, so PSD <=> |r| <= 1
        if self.bloch.radius > 1.0 + 2.0 * psd_tol:
            raise ValueError("density matrix has a negative eigenvalue")


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    """4x4 Choi form (Lambda x id acting on the maximally entangled state)."""

    matrix: np.ndarray

    def min_eigenvalue(self) -> float:
        return float(hermitian_eigenvalues(self.matrix)[0])

    def is_psd(self, tol: float = 1e-12) -> bool:
        return self.min_eigenvalue() >= -tol


@dataclass(frozen=True, eq=False)
class KrausSet:
    """Kraus operators K_i with sum_i K_i^dag K_i = identity."""

    operators: list

    def completeness_residual(self) -> float:
        acc = np.zeros((2, 2), dtype=complex)
        for k in self.operators:
            acc += k.conj().T @ k
        return float(np.max(np.abs(acc - IDENTITY_2)))


# ---------------------------------------------------------------------------
# Channel construction and validity
# ---------------------------------------------------------------------------

def make_channel(lambda1: float, lambda3: float, lambda_star: float,
                 ) -> PhaseCovariantChannel:
    """Build a channel from its three real parameters.

    Validity is a queryable flag (``ch.is_valid``), not a construction
    failure, so invalid parameter regions can still be swept and mapped.
    """
    vals = (float(lambda1), float(lambda3), float(lambda_star))
    if not all(math.isfinite(v) for v in vals):
        raise ValueError("channel parameters must be finite")
    return PhaseCovariantChannel(*vals)


def is_cp(ch: PhaseCovariantChannel) -> tuple:
    """Complete-positivity test with margins.

    Returns ``(ok, (m1, m2))`` where ``m1 = 1 - |lambda_star| - |lambda3|``
    and ``m2 = (1 + lambda3)^2 - 4 lambda1^2 - lambda_star^2``; the map is
    completely positive iff both margins are nonnegative.
    """
    m1 = 1.0 - abs(ch.lambda_star) - abs(ch.lambda3)
    m2 = (1.0 + ch.lambda3) ** 2 - 4.0 * ch.lambda1 ** 2 - ch.lambda_star ** 2
    return (m1 >= -CP_TOL and m2 >= -CP_TOL), (m1, m2)


def is_cp_linear(ch: PhaseCovariantChannel) -> bool:
    """Sufficient (not necessary) linear complete-positivity conditions.

    True iff ``lambda3 + |lambda_star| <= 1`` and
    ``1 - 2|lambda1| + lambda3 - |lambda_star| >= 0``.  The first condition
    is evaluated literally (no absolute value on lambda3); it presumes the
    decaying-eigenvalue regime where lambda3 >= 0.
    """
    c1 = ch.lambda3 + abs(ch.lambda_star) <= 1.0 + CP_TOL
    c2 = 1.0 - 2.0 * abs(ch.lambda1) + ch.lambda3 - abs(ch.lambda_star) >= -CP_TOL
    return c1 and c2


# ---------------------------------------------------------------------------
# Channel action
# ---------------------------------------------------------------------------

def apply_bloch(ch: PhaseCovariantChannel, xyz: tuple) -> tuple:
    """Affine Bloch action of the channel; no validity gating."""
    x, y, z = xyz
    return (ch.lambda1 * x, ch.lambda1 * y, ch.lambda3 * z + ch.lambda_star)


def apply_matrix(ch: PhaseCovariantChannel, x: np.ndarray) -> np.ndarray:
    """Linear extension of the channel to arbitrary 2x2 matrices."""
    x = np.asarray(x, dtype=complex)
    t0 = np.trace(x)
    t1 = np.trace(x @ SIGMA_1)
    t2 = np.trace(x @ SIGMA_2)
    t3 = np.trace(x @ SIGMA_3)
    return 0.5 * ((IDENTITY_2 + ch.lambda_star * SIGMA_3) * t0
                  + ch.lambda1 * SIGMA_1 * t1
                  + ch.lambda1 * SIGMA_2 * t2
                  + ch.lambda3 * SIGMA_3 * t3)


def apply(ch: PhaseCovariantChannel, rho: DensityMatrix) -> DensityMatrix:
    """Apply a valid channel to a valid state."""
    if not ch.is_valid:
        raise ChannelValidityError("channel is not completely positive")
    rho.validate()
    b = rho.bloch
    return DensityMatrix.from_bloch(*apply_bloch(ch, (b.x, b.y, b.z)))


def stationary_state(ch: PhaseCovariantChannel) -> DensityMatrix:
    """State preserved by the channel: (I + lambda_star/(1-lambda3) sz)/2."""
    if ch.lambda_star == 0.0:
        return DensityMatrix.from_bloch(0.0, 0.0, 0.0)
    if abs(1.0 - ch.lambda3) < 1e-14:
        raise DegenerateChannelError(
            "lambda3 = 1 with lambda_star != 0 admits no stationary state of "
            "the affine form")
    return DensityMatrix.from_bloch(0.0, 0.0, ch.lambda_star / (1.0 - ch.lambda3))


def non_unitality(ch: PhaseCovariantChannel) -> float:
    """Degree of non-unitality |lambda_star| / (1 - |lambda3|) in [0, 1]."""
    if abs(1.0 - abs(ch.lambda3)) < 1e-14:
        raise DegenerateChannelError("non-unitality undefined for |lambda3| = 1")
    return abs(ch.lambda_star) / (1.0 - abs(ch.lambda3))


def gadc(lam: float, p: float) -> PhaseCovariantChannel:
    """Generalized amplitude damping family (lam, lam^2, p (1 - lam^2)).

    ``p = -1`` is amplitude damping, ``p = +1`` its inverse, ``p = 0`` the
    unital member.  Completely positive for all lam, p in [-1, 1].
    """
    if not (-1.0 <= lam <= 1.0) or not (-1.0 <= p <= 1.0):
        raise ValueError("gadc requires lam, p in [-1, 1]")
    return make_channel(lam, lam * lam, p * (1.0 - lam * lam))


def mix(channels: list, weights: list) -> PhaseCovariantChannel:
    """Convex mixture of channels; parameters combine linearly."""
    w = np.asarray(weights, dtype=float)
    if len(channels) != w.size:
        raise ValueError("one weight per channel required")
    if np.any(w < -1e-15) or abs(w.sum() - 1.0) > 1e-12:
        raise ValueError("weights must be nonnegative and sum to 1")
    l1 = sum(wi * ch.lambda1 for wi, ch in zip(w, channels))
    l3 = sum(wi * ch.lambda3 for wi, ch in zip(w, channels))
    ls = sum(wi * ch.lambda_star for wi, ch in zip(w, channels))
    return make_channel(l1, l3, ls)


# ---------------------------------------------------------------------------
# Choi / Kraus / complementary channel
# ---------------------------------------------------------------------------

def choi(ch: PhaseCovariantChannel) -> ChoiMatrix:
    """Choi matrix (Lambda x id)[|Omega><Omega|], |Omega> = (|00>+|11>)/sqrt2.

    Built for any parameter triple; positivity mirrors :func:`is_cp` and is
    enforced only where Kraus operators are extracted.
    """
    units = [np.zeros((2, 2), dtype=complex) for _ in range(4)]
    for idx, (i, j) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
        units[idx][i, j] = 1.0
    c = np.zeros((4, 4), dtype=complex)
    for e in units:
        c += 0.5 * np.kron(apply_matrix(ch, e), e)
    return ChoiMatrix(c)


def kraus(ch: PhaseCovariantChannel, rank_tol: float = 1e-12) -> KrausSet:
    """Kraus operators from the eigendecomposition of the Choi matrix.

    Eigenvalues below ``rank_tol`` are discarded to avoid spurious rank;
    the complement's entropy is continuous in this truncation at that scale.
    """
    c = choi(ch)
    w, v = hermitian_eig(c.matrix)
    if w[0] < -rank_tol:
        raise ChannelValidityError(
            f"Choi matrix is not positive semidefinite (min eigenvalue {w[0]:.3e})")
    ops = []
    for mu, vec in zip(w, v.T):
        if mu < rank_tol:
            continue
        # vec index (a, i) = 2a + i: row-major reshape gives K[a, i]
        ops.append(math.sqrt(2.0 * mu) * vec.reshape(2, 2))
    return KrausSet(ops)


def complementary_apply(ch: PhaseCovariantChannel, rho: DensityMatrix,
                        kraus_set: KrausSet | None = None) -> np.ndarray:
    """Environment state of the Stinespring dilation, entries Tr(K_i rho K_j^dag)."""
    ks = kraus_set if kraus_set is not None else kraus(ch)
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    n = len(ks.operators)
    env = np.empty((n, n), dtype=complex)
    for i, ki in enumerate(ks.operators):
        for j, kj in enumerate(ks.operators):
            env[i, j] = np.trace(ki @ m @ kj.conj().T)
    return env


# ---------------------------------------------------------------------------
# Entropies
# ---------------------------------------------------------------------------

def binary_entropy(x: float) -> float:
    """H2(x) = -x log2 x - (1-x) log2(1-x), with 0 log 0 = 0."""
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -(x * math.log2(x) + (1.0 - x) * math.log2(1.0 - x))


def entropy(rho, psd_tol: float = 1e-10) -> float:
    """Von Neumann entropy in bits of a Hermitian PSD matrix (size <= 4)."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    w = hermitian_eigenvalues(m)
    if w[0] < -psd_tol:
        raise ValueError(f"matrix is not PSD (min eigenvalue {w[0]:.3e})")
    s = 0.0
    for mu in w:
        if mu > 0.0:
            s -= mu * math.log2(mu)
    return s


# ---------------------------------------------------------------------------
# Covariance check
# ---------------------------------------------------------------------------

def covariance_check(target, phi_samples, tol: float = 1e-10) -> bool:
    """Test commutation with z-rotations on a spanning set of 2x2 inputs.

    ``target`` may be a :class:`PhaseCovariantChannel` or any callable
    implementing a linear map on 2x2 complex matrices.
    """
    if isinstance(target, PhaseCovariantChannel):
        fn = lambda x: apply_matrix(target, x)  # noqa: E731
    else:
        fn = target
    units = []
    for i, j in ((0, 0), (0, 1), (1, 0), (1, 1)):
        e = np.zeros((2, 2), dtype=complex)
        e[i, j] = 1.0
        units.append(e)
    for phi in phi_samples:
        u = np.diag([np.exp(-1.0j * phi), np.exp(1.0j * phi)])
        ud = u.conj().T
        for e in units:
            lhs = fn(u @ e @ ud)
            rhs = u @ fn(e) @ ud
            if np.max(np.abs(lhs - rhs)) > tol:
                return False
    return True


# ---------------------------------------------------------------------------
# Hermitian eigensolver (cyclic Jacobi, n <= 4)
# ---------------------------------------------------------------------------

def _jacobi(a: np.ndarray, want_vectors: bool,
            off_tol: float = 1e-13, max_sweeps: int = 100):
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n, dtype=complex) if want_vectors else None
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += abs(a[p, q]) ** 2
        if math.sqrt(2.0 * off) < off_tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                beta = abs(apq)
                if beta < off_tol / (4.0 * n):
                    continue
                phase = apq / beta
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * beta)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # W restricted to (p, q): [[c, s], [-conj(phase) s, conj(phase) c]]
                wpp, wpq = c, s
                wqp, wqq = -np.conj(phase) * s, np.conj(phase) * c
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = colp * wpp + colq * wqp
                a[:, q] = colp * wpq + colq * wqq
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = np.conj(wpp) * rowp + np.conj(wqp) * rowq
                a[q, :] = np.conj(wpq) * rowp + np.conj(wqq) * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                if want_vectors:
                    colp = v[:, p].copy()
                    colq = v[:, q].copy()
                    v[:, p] = colp * wpp + colq * wqp
                    v[:, q] = colp * wpq + colq * wqq
    w = np.real(np.diag(a))
    order = np.argsort(w, kind="stable")
    if want_vectors:
        return w[order], v[:, order]
    return w[order], None


def _check_hermitian(matrix, herm_tol: float) -> np.ndarray:
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    if a.shape[0] > 1 and np.max(np.abs(a - a.conj().T)) > herm_tol:
        raise ValueError("matrix is not Hermitian within tolerance")
    return 0.5 * (a + a.conj().T)


def hermitian_eig(matrix, herm_tol: float = 1e-10):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    Cyclic Jacobi rotations, converged when the off-diagonal norm drops
    below 1e-13; intended for the n <= 4 matrices used throughout.
    """
    a = _check_hermitian(matrix, herm_tol)
    if a.shape[0] == 1:
        return np.array([a[0, 0].real]), np.eye(1, dtype=complex)
    return _jacobi(a, want_vectors=True)


def hermitian_eigenvalues(matrix, herm_tol: float = 1e-10) -> np.ndarray:
    """Ascending eigenvalues only (same Jacobi sweep, no vector updates)."""
    a = _check_hermitian(matrix, herm_tol)
    if a.shape[0] == 1:
        return np.array([a[0, 0].real])
    return _jacobi(a, want_vectors=False)[0]
