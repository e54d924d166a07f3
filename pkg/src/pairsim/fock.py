"""Small-scale full-Fock-space oracle.

Pair-basis states are embedded into the 2^(2*Omega)-dimensional Fock
space so that reduced objects can be recomputed independently by partial
tracing, and the minimum-relative-entropy characterization of the
one-body entanglement entropy can be verified directly.

Mode ordering convention: the 2*Omega fermionic modes are ordered
(1, 1bar, 2, 2bar, ...), i.e. level k occupies Fock bits 2(k-1) (mode k)
and 2(k-1)+1 (mode kbar). A Fock basis state is the product of creation
operators applied in increasing mode order; all fermionic signs follow
from that single convention.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import expit

from .exact import OccupationProfile, PairStateVector, occupations, one_body_entropy
from .model import CapacityError

__all__ = [
    "FockState",
    "MinimumReport",
    "embed",
    "gaussian_from_occupations",
    "relative_entropy",
    "verify_minimum",
    "partial_trace_modes",
    "partial_trace_four_modes",
    "even_pair_block",
    "EMBED_MAX_OMEGA",
]

EMBED_MAX_OMEGA = 6       # vectors up to dim 4096
_DENSITY_MAX_MODES = 8    # dense densities up to 256 x 256 (Omega <= 4)
_LN2 = math.log(2.0)


@dataclass(frozen=True, eq=False)
class FockState:
    """State of ``n_modes`` fermionic modes: a vector or a density matrix."""

    n_modes: int
    vector: np.ndarray | None = field(default=None, repr=False)
    density: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        dim = 1 << self.n_modes
        if (self.vector is None) == (self.density is None):
            raise ValueError("exactly one of vector/density must be given")
        if self.vector is not None and self.vector.shape != (dim,):
            raise ValueError(f"vector shape {self.vector.shape} != ({dim},)")
        if self.density is not None and self.density.shape != (dim, dim):
            raise ValueError(f"density shape {self.density.shape} != ({dim},{dim})")

    @property
    def dim(self) -> int:
        return 1 << self.n_modes


def embed(state: PairStateVector) -> FockState:
    """Embed a pair-basis state into the full Fock space.

    Pair creation operators on distinct levels commute and each pair
    occupies adjacent modes in increasing order, so amplitudes carry over
    with no sign.
    """
    omega = state.basis.omega
    if omega > EMBED_MAX_OMEGA:
        raise CapacityError(f"Fock embedding limited to omega <= {EMBED_MAX_OMEGA}")
    n_modes = 2 * omega
    psi = np.zeros(1 << n_modes)
    fock_idx = np.zeros(state.basis.dim, dtype=np.int64)
    for k in range(omega):
        bit = (state.basis.configs >> k) & 1
        fock_idx |= bit * np.int64(0b11 << (2 * k))
    psi[fock_idx] = state.amps
    return FockState(n_modes=n_modes, vector=psi)


def _mode_occupations(profile: OccupationProfile) -> np.ndarray:
    # per-mode occupations in the (1, 1bar, 2, 2bar, ...) ordering
    return np.repeat(np.asarray(profile.f, dtype=float), 2)


def _diag_gaussian_probs(lam: np.ndarray) -> np.ndarray:
    """Probabilities of exp(-sum lam_m n_m)/Z over the Fock basis."""
    p = np.ones(1)
    for lm in lam:
        block = np.array([expit(lm), expit(-lm)])  # (empty, occupied) factors
        p = np.kron(block, p)  # newest factor carries the highest bit = mode m
    return p


def gaussian_from_occupations(profile: OccupationProfile) -> FockState:
    """Number-conserving gaussian (independent-mode) density matching f.

    Diagonal in the Fock basis with per-mode factors (f, 1-f); requires
    every f strictly inside (0, 1), since the matched gaussian degenerates
    at the endpoints.
    """
    f = _mode_occupations(profile)
    if np.any(f <= 0.0) or np.any(f >= 1.0):
        raise ValueError("gaussian construction requires occupations strictly in (0, 1)")
    if len(f) > _DENSITY_MAX_MODES:
        raise CapacityError(
            f"dense gaussian densities limited to {_DENSITY_MAX_MODES} modes"
        )
    lam = np.log(1.0 / f - 1.0)
    return FockState(n_modes=len(f), density=np.diag(_diag_gaussian_probs(lam)))


def relative_entropy(rho: FockState, rhop: FockState) -> float:
    """Base-2 relative entropy S(rho || rho') = -Tr[rho log2 rho'] - S(rho).

    Returns ``inf`` when rho has support outside the support of rho'.
    """
    if rho.n_modes != rhop.n_modes:
        raise ValueError("states live on different mode counts")
    sigma = rhop.density if rhop.density is not None else np.outer(
        rhop.vector, rhop.vector.conj()
    )
    w, basis_u = np.linalg.eigh(0.5 * (sigma + sigma.conj().T))
    support = w > 1e-15 * max(float(w.max()), 1e-300)

    if rho.vector is not None:
        weights = np.abs(basis_u.conj().T @ rho.vector) ** 2
        s_rho = 0.0
    else:
        rot = basis_u.conj().T @ rho.density @ basis_u
        weights = np.real(np.diag(rot))
        ev = np.linalg.eigvalsh(0.5 * (rho.density + rho.density.conj().T))
        ev = ev[ev > 0.0]
        s_rho = float(-np.sum(ev * np.log2(ev)))

    if float(weights[~support].sum()) > 1e-12:
        return math.inf
    cross = float(-np.sum(weights[support] * np.log2(w[support])))
    return cross - s_rho


@dataclass(frozen=True)
class MinimumReport:
    """Outcome of the minimum-relative-entropy verification."""

    identity_error: float          # |S(rho||rho'_matched) - 2 sum_k h(f_k)|
    min_increase: float            # smallest increase among the perturbations
    increases: np.ndarray = field(repr=False)
    max_violation: float = 0.0
    passed: bool = False


def verify_minimum(
    state: PairStateVector,
    perturbations: int = 20,
    delta: float = 0.05,
    seed: int = 0,
) -> MinimumReport:
    """Check that the matched gaussian minimizes the relative entropy.

    At the matched exponents S(rho||rho') equals the one-body entanglement
    entropy; each random perturbation lambda_i -> lambda_i +- delta must
    strictly increase it (the relative entropy is strictly convex in the
    exponents).
    """
    omega = state.basis.omega
    if omega > 4:
        raise CapacityError("verify_minimum limited to omega <= 4")
    profile = occupations(state)
    f = _mode_occupations(profile)
    if np.any(f <= 0.0) or np.any(f >= 1.0):
        raise ValueError("degenerate occupations; verify_minimum requires G > 0")

    psi = embed(state).vector
    w = psi**2
    n_modes = 2 * omega
    bits = (np.arange(1 << n_modes)[:, None] >> np.arange(n_modes)) & 1

    def rel_ent(lam: np.ndarray) -> float:
        # S(rho||rho') = (sum_m lam_m <n_m>_rho + ln Z)/ln 2 for pure rho
        log_z = float(np.sum(np.logaddexp(0.0, -lam)))
        return (float(w @ (bits @ lam)) + log_z) / _LN2

    lam0 = np.log(1.0 / f - 1.0)
    s0 = rel_ent(lam0)
    identity_error = abs(s0 - one_body_entropy(profile))

    rng = np.random.default_rng(seed)
    increases = np.empty(perturbations)
    for t in range(perturbations):
        lam = lam0.copy()
        lam[rng.integers(0, n_modes)] += delta * rng.choice((-1.0, 1.0))
        increases[t] = rel_ent(lam) - s0
    min_increase = float(increases.min()) if perturbations else math.inf
    max_violation = max(identity_error, max(0.0, -min_increase))
    passed = identity_error <= 1e-8 and min_increase > 0.0
    return MinimumReport(
        identity_error=identity_error,
        min_increase=min_increase,
        increases=increases,
        max_violation=max_violation,
        passed=passed,
    )


def _split_index(n: int, keep: Sequence[int], trace: Sequence[int]) -> tuple[int, int, int]:
    """A-index, B-index and reordering sign of Fock basis state ``n``.

    The sign is the parity of moving the occupied kept modes in front of
    the occupied traced modes while preserving internal order.
    """
    a = 0
    b = 0
    inversions = 0
    for j, m in enumerate(keep):
        if (n >> m) & 1:
            a |= 1 << j
            for t in trace:
                if t < m and (n >> t) & 1:
                    inversions += 1
    for j, m in enumerate(trace):
        if (n >> m) & 1:
            b |= 1 << j
    return a, b, -1 if inversions % 2 else 1


def partial_trace_modes(state: FockState, keep: Sequence[int]) -> np.ndarray:
    """Fermionic reduced density matrix of the modes in ``keep``.

    The kept modes index the local basis in ascending order. Amplitudes
    are reordered to (kept block)(traced block) with the fermionic
    permutation sign before the tensor trace, which reproduces every
    observable supported on the kept modes.
    """
    keep = sorted(keep)
    if len(set(keep)) != len(keep):
        raise ValueError("keep modes must be distinct")
    if any(m < 0 or m >= state.n_modes for m in keep):
        raise ValueError("keep mode out of range")
    trace = [m for m in range(state.n_modes) if m not in keep]
    dim_a, dim_b = 1 << len(keep), 1 << len(trace)

    a_idx = np.empty(state.dim, dtype=np.int64)
    b_idx = np.empty(state.dim, dtype=np.int64)
    sign = np.empty(state.dim)
    for n in range(state.dim):
        a_idx[n], b_idx[n], sign[n] = _split_index(n, keep, trace)

    if state.vector is not None:
        mat = np.zeros((dim_a, dim_b))
        mat[a_idx, b_idx] = sign * state.vector
        return mat @ mat.T
    pos = np.empty(state.dim, dtype=np.int64)
    pos[b_idx * dim_a + a_idx] = np.arange(state.dim)
    signed = state.density * sign[:, None] * sign[None, :]
    reordered = signed[np.ix_(pos, pos)].reshape(dim_b, dim_a, dim_b, dim_a)
    return np.einsum("iaib->ab", reordered)


def partial_trace_four_modes(state: FockState, k: int, kp: int) -> np.ndarray:
    """16x16 reduced state of the modes (k, kbar, k', kbar').

    Local bit order is (k, kbar, k', kbar') regardless of whether k < k'.
    """
    if k == kp:
        raise ValueError("four-mode trace requires two distinct levels")
    lo, hi = min(k, kp), max(k, kp)
    modes = [2 * lo - 2, 2 * lo - 1, 2 * hi - 2, 2 * hi - 1]
    rho = partial_trace_modes(state, modes)
    if k < kp:
        return rho
    # swap the two pair groups: bits (0,1) <-> (2,3), sign from crossing pairs
    idx = np.arange(16)
    swapped = ((idx & 0b0011) << 2) | ((idx & 0b1100) >> 2)
    par = (((idx >> 0) & 1) + ((idx >> 1) & 1)) * (((idx >> 2) & 1) + ((idx >> 3) & 1))
    sgn = np.where(par % 2, -1.0, 1.0)
    out = np.empty_like(rho)
    out[np.ix_(swapped, swapped)] = rho * sgn[:, None] * sgn[None, :]
    return out


def even_pair_block(rho16: np.ndarray) -> np.ndarray:
    """Seniority-zero 4x4 block of a 16x16 four-mode reduced state.

    Rows/columns ordered (both pairs, pair k, pair k', empty), matching
    :meth:`pairsim.exact.FourModeEvenBlock.matrix`.
    """
    idx = [0b1111, 0b0011, 0b1100, 0b0000]
    return rho16[np.ix_(idx, idx)]
