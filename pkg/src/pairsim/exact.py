"""Exact ground states in the pair basis and their reduced objects.

The ground vector is computed densely below ``DENSE_CUTOFF`` and with a
Lanczos iteration (full reorthogonalization) above it. Off-diagonal
Hamiltonian elements are -G <= 0, so by Perron-Frobenius the ground
vector can be chosen elementwise nonnegative; that canonical gauge is
enforced on every :class:`PairStateVector`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .entanglement import binary_entropy
from .model import (
    DEFAULT_BASIS_CAPACITY,
    ModelParams,
    PairBasis,
    enumerate_basis,
    hamiltonian_dense,
    hamiltonian_diagonal,
)

__all__ = [
    "SolverError",
    "PairStateVector",
    "OccupationProfile",
    "FourModeEvenBlock",
    "ground_state",
    "occupations",
    "one_body_entropy",
    "quadratic_entropy",
    "schmidt_entropy",
    "pair_mode_state",
    "four_mode_block",
    "DENSE_CUTOFF",
]

DENSE_CUTOFF = 2000
_LANCZOS_MAX_ITER = 400


class SolverError(RuntimeError):
    """Eigensolver failed to reach the requested residual."""


@dataclass(frozen=True, eq=False)
class PairStateVector:
    """Normalized real amplitudes over a pair basis, in nonnegative gauge.

    ``energy`` is set for solver-produced ground states and left ``None``
    for externally constructed states (e.g. projected BCS).
    """

    basis: PairBasis
    amps: np.ndarray = field(repr=False)
    energy: float | None = None

    def __post_init__(self) -> None:
        a = np.asarray(self.amps, dtype=float)
        if a.shape != (self.basis.dim,):
            raise ValueError(f"amplitude length {a.shape} does not match basis dim {self.basis.dim}")
        nrm2 = float(a @ a)
        if abs(nrm2 - 1.0) > 1e-12:
            raise ValueError(f"state not normalized: sum of squares = {nrm2!r}")
        if a.sum() < 0.0:
            a = -a
        if a.min() < -1e-12:
            raise ValueError(
                f"amplitudes not nonnegative in canonical gauge (min = {a.min():.3e})"
            )
        object.__setattr__(self, "amps", np.clip(a, 0.0, None))


@dataclass(frozen=True, eq=False)
class OccupationProfile:
    """Average pair occupations f_k (equal for modes k and kbar)."""

    f: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        f = np.asarray(self.f, dtype=float)
        if np.any(f < -1e-10) or np.any(f > 1.0 + 1e-10):
            raise ValueError("occupations outside [0, 1]")
        object.__setattr__(self, "f", np.clip(f, 0.0, 1.0))


@dataclass(frozen=True)
class FourModeEvenBlock:
    """Even-parity 4x4 block of the four-mode reduced state.

    Basis order: (both pairs occupied, pair k only, pair k' only, both
    empty). ``pair_transfer`` is the off-diagonal contraction
    <c_k+ c_kbar+ c_kbar' c_k'>; ``fk``/``fkp`` are the marginal pair
    occupations.
    """

    nn: float
    n_tilde: float
    tilde_n: float
    tilde_tilde: float
    pair_transfer: float
    fk: float
    fkp: float

    def __post_init__(self) -> None:
        probs = (self.nn, self.n_tilde, self.tilde_n, self.tilde_tilde)
        if any(p < -1e-12 or p > 1.0 + 1e-12 for p in probs):
            raise ValueError(f"block probabilities outside [0, 1]: {probs}")
        if abs(sum(probs) - 1.0) > 1e-10:
            raise ValueError(f"block probabilities sum to {sum(probs)!r}, not 1")
        if abs(self.nn + self.n_tilde - self.fk) > 1e-10:
            raise ValueError("marginal fk inconsistent with block probabilities")
        if abs(self.nn + self.tilde_n - self.fkp) > 1e-10:
            raise ValueError("marginal fkp inconsistent with block probabilities")
        # PSD of the X-shaped block reduces to the inner 2x2 determinant
        if self.n_tilde * self.tilde_n - self.pair_transfer**2 < -1e-12:
            raise ValueError("inner block not positive semidefinite")

    def matrix(self) -> np.ndarray:
        m = np.diag([self.nn, self.n_tilde, self.tilde_n, self.tilde_tilde])
        m[1, 2] = m[2, 1] = self.pair_transfer
        return m


def _lanczos_lowest(matvec, dim: int, max_iter: int = _LANCZOS_MAX_ITER) -> tuple[float, np.ndarray]:
    """Lowest eigenpair by Lanczos with full reorthogonalization.

    The start vector is the normalized all-ones vector, which overlaps the
    (Perron-Frobenius) ground state for every G >= 0. Iterates until the
    residual estimate beta_j*|y_j| reaches ~1e-12*max(1, |theta|) or stops
    improving; anything above 1e-10*max(1, |theta|) is a failure.
    """
    max_iter = min(max_iter, dim)
    q = np.full(dim, 1.0 / math.sqrt(dim))
    qmat = np.empty((max_iter, dim))
    alphas = np.empty(max_iter)
    betas = np.empty(max_iter)

    theta = 0.0
    y = np.ones(1)
    best_resid = math.inf
    best_iter = 0
    n_iter = 0
    for j in range(max_iter):
        n_iter = j + 1
        qmat[j] = q
        w = matvec(q)
        alphas[j] = q @ w
        # full reorthogonalization; second pass only if cancellation was severe
        before = np.linalg.norm(w)
        w -= qmat[: j + 1].T @ (qmat[: j + 1] @ w)
        if np.linalg.norm(w) < 0.5 * before:
            w -= qmat[: j + 1].T @ (qmat[: j + 1] @ w)
        beta = float(np.linalg.norm(w))

        if j == 0:
            theta, y = alphas[0], np.ones(1)
        else:
            evals, evecs = sla.eigh_tridiagonal(
                alphas[: j + 1], betas[:j], select="i", select_range=(0, 0)
            )
            theta, y = float(evals[0]), evecs[:, 0]
        scale = max(1.0, abs(theta))
        resid = beta * abs(float(y[-1]))
        if resid < best_resid:
            best_resid, best_iter = resid, j
        if resid <= 1e-12 * scale or beta <= 1e-14 * scale:
            break
        # converged to the attainable floor above the target
        if resid <= 1e-10 * scale and j - best_iter > 30:
            break
        betas[j] = beta
        q = w / beta

    x = y @ qmat[:n_iter]
    x /= np.linalg.norm(x)
    resid = float(np.linalg.norm(matvec(x) - theta * x))
    if resid > 1e-10 * max(1.0, abs(theta)):
        raise SolverError(
            f"Lanczos did not converge in {n_iter} iterations: "
            f"residual {resid:.3e} > 1e-10*max(1, |E|) with E = {theta:.6e}"
        )
    return theta, x


def ground_state(
    params: ModelParams,
    basis: PairBasis | None = None,
    capacity: int = DEFAULT_BASIS_CAPACITY,
) -> PairStateVector:
    """Exact ground state of H in the pair basis.

    Uses a dense symmetric eigensolver for dim <= DENSE_CUTOFF and Lanczos
    above; the eigenpair residual satisfies |Hx - Ex| <= 1e-10*max(1, |E|).
    Pass a prebuilt ``basis`` to share it across a coupling scan.
    """
    if basis is None:
        basis = enumerate_basis(params, capacity)
    elif (basis.omega, basis.pairs) != (params.omega, params.pairs):
        raise ValueError("prebuilt basis does not match the model parameters")
    if basis.dim <= DENSE_CUTOFF:
        h = hamiltonian_dense(params, basis)
        evals, evecs = sla.eigh(h, subset_by_index=(0, 0))
        energy, x = float(evals[0]), evecs[:, 0]
    else:
        diag = hamiltonian_diagonal(params, basis)
        g, hop = params.coupling, basis.hopping

        def matvec(v: np.ndarray) -> np.ndarray:
            return diag * v - g * (hop @ v)

        energy, x = _lanczos_lowest(matvec, basis.dim)
    return PairStateVector(basis=basis, amps=x, energy=energy)


def occupations(state: PairStateVector) -> OccupationProfile:
    """Average occupations f_k = sum_nu alpha_nu^2 n_k^nu."""
    w = state.amps**2
    f = w @ state.basis.occupancy
    if abs(f.sum() - state.basis.pairs) > 1e-10:
        raise RuntimeError("occupations do not sum to the pair number")
    return OccupationProfile(f=f)


def one_body_entropy(profile: OccupationProfile) -> float:
    """One-body entanglement entropy 2*sum_k h(f_k) (both k and kbar count)."""
    return 2.0 * float(np.sum(binary_entropy(profile.f)))


def quadratic_entropy(profile: OccupationProfile) -> float:
    """Quadratic one-body entropy 4*sum over all 2*Omega modes of f(1-f)."""
    return 8.0 * float(np.sum(profile.f * (1.0 - profile.f)))


def schmidt_entropy(state: PairStateVector) -> float:
    """Entanglement entropy between all k modes and all kbar modes.

    The pair expansion is already the Schmidt decomposition of that
    bipartition, so the entropy is -sum_nu alpha_nu^2 log2 alpha_nu^2.
    """
    w = state.amps**2
    w = w[w > 0.0]
    return float(-np.sum(w * np.log2(w)))


def pair_mode_state(profile: OccupationProfile, k: int) -> np.ndarray:
    """Reduced 2x2 state diag(f_k, 1-f_k) in the basis (occupied, empty).

    The same matrix is rho_k, rho_kbar and the even-parity block of
    rho_{k kbar}; levels are indexed 1..Omega.
    """
    if not 1 <= k <= len(profile.f):
        raise IndexError(f"level index {k} out of range 1..{len(profile.f)}")
    fk = profile.f[k - 1]
    return np.diag([fk, 1.0 - fk])


def four_mode_block(state: PairStateVector, k: int, kp: int) -> FourModeEvenBlock:
    """Even-parity reduced block of the modes (k, kbar, k', kbar').

    Probabilities are sums of alpha_nu^2 over configurations partitioned by
    the occupancy of (k, k'); the pair-transfer element sums
    alpha_nu' alpha_nu over configurations related by moving one pair from
    k' to k (pair operators on distinct levels commute, so no sign occurs).
    """
    omega = state.basis.omega
    if not (1 <= k <= omega and 1 <= kp <= omega):
        raise IndexError(f"level indices ({k}, {kp}) out of range 1..{omega}")
    if k == kp:
        raise ValueError("four-mode block requires two distinct levels")
    occ_k = state.basis.occupancy[:, k - 1].astype(bool)
    occ_p = state.basis.occupancy[:, kp - 1].astype(bool)
    w = state.amps**2
    nn = float(w[occ_k & occ_p].sum())
    n_tilde = float(w[occ_k & ~occ_p].sum())
    tilde_n = float(w[~occ_k & occ_p].sum())
    tilde_tilde = float(w[~occ_k & ~occ_p].sum())

    sel = occ_p & ~occ_k
    if np.any(sel):
        swap = np.int64((1 << (k - 1)) | (1 << (kp - 1)))
        partners = state.basis.configs[sel] ^ swap
        idx = state.basis.rank_many(partners)
        pair_transfer = float(state.amps[idx] @ state.amps[sel])
    else:
        pair_transfer = 0.0
    return FourModeEvenBlock(
        nn=nn,
        n_tilde=n_tilde,
        tilde_n=tilde_n,
        tilde_tilde=tilde_tilde,
        pair_transfer=pair_transfer,
        fk=nn + n_tilde,
        fkp=nn + tilde_n,
    )
