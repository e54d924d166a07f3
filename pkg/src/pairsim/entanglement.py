"""Correlation and entanglement measures for two pair-modes.

All entropies use base-2 logarithms. The central object is the reduced
state of four single-particle modes (k, kbar, k', kbar'). For states
without broken pairs it is a 4x4 even-parity block
(:class:`pairsim.exact.FourModeEvenBlock`) that behaves as a two-qubit
X state: each pair-mode (k, kbar) is either fully occupied or empty and
plays the role of one qubit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, NamedTuple

import numpy as np
from scipy.special import xlogy

from ._util import golden_section_min

if TYPE_CHECKING:  # pragma: no cover - type-only import avoids a cycle
    from .exact import FourModeEvenBlock

__all__ = [
    "binary_entropy",
    "vn_entropy",
    "EvenParityState8",
    "CONJUGATION",
    "concurrence_closed",
    "concurrence_general",
    "EofResult",
    "eof_from_concurrence",
    "mutual_information",
    "TwoQubitRep",
    "two_qubit_rep",
    "conditional_entropy",
    "discord",
    "StrongCouplingLimits",
    "strong_coupling_limits",
]

_LN2 = math.log(2.0)


def binary_entropy(f):
    """Base-2 binary entropy h(f) = -f log2 f - (1-f) log2(1-f).

    Accepts scalars or arrays; endpoints give exactly 0. Values outside
    [0, 1] by more than 1e-12 raise ValueError.
    """
    arr = np.asarray(f, dtype=float)
    if np.any(arr < -1e-12) or np.any(arr > 1.0 + 1e-12):
        raise ValueError(f"occupation probability outside [0, 1]: {f!r}")
    arr = np.clip(arr, 0.0, 1.0)
    h = -(xlogy(arr, arr) + xlogy(1.0 - arr, 1.0 - arr)) / _LN2
    return float(h) if np.ndim(f) == 0 else h


def vn_entropy(rho: np.ndarray) -> float:
    """Von Neumann entropy -Tr[rho log2 rho] of a unit-trace PSD matrix.

    Zero eigenvalues are skipped; tiny negative eigenvalues from rounding
    are clamped to zero. A trace deviating from 1 by more than 1e-8 raises
    ValueError.
    """
    rho = np.asarray(rho)
    tr = float(np.real(np.trace(rho)))
    if abs(tr - 1.0) > 1e-8:
        raise ValueError(f"density matrix trace {tr} deviates from 1 beyond 1e-8")
    w = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    w = w[w > 0.0]
    return float(-np.sum(w * np.log2(w)))


# Antiunitary conjugation for the fermionic concurrence of four modes,
# in the even-parity basis
# {|0>, c1+c2+|0>, c1+c3+|0>, c1+c4+|0>, -|full>, c2c1|full>, c3c1|full>, c4c1|full>}
# with |full> = c1+c2+c3+c4+|0> and modes labeled 1..4 = (k, kbar, k', kbar').
CONJUGATION = np.block(
    [[np.zeros((4, 4)), np.eye(4)], [np.eye(4), np.zeros((4, 4))]]
)

# Positions of the seniority-zero states in that basis: vacuum, pair k,
# both pairs (note the -|full> basis sign), pair k'.
_IDX_EMPTY, _IDX_PAIR_K, _IDX_FULL, _IDX_PAIR_KP = 0, 1, 4, 5


@dataclass(frozen=True, eq=False)
class EvenParityState8:
    """Density matrix of four fermionic modes restricted to even parity.

    The matrix lives in the 8-dimensional even-parity sector in the basis
    documented next to :data:`CONJUGATION`. Validated to be Hermitian,
    unit trace and positive semidefinite (eigenvalues >= -1e-12).
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix)
        if m.shape != (8, 8):
            raise ValueError(f"expected an 8x8 matrix, got shape {m.shape}")
        if not np.allclose(m, m.conj().T, atol=1e-10):
            raise ValueError("matrix is not Hermitian within 1e-10")
        tr = float(np.real(np.trace(m)))
        if abs(tr - 1.0) > 1e-8:
            raise ValueError(f"trace {tr} deviates from 1 beyond 1e-8")
        if np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min() < -1e-12:
            raise ValueError("matrix is not positive semidefinite within 1e-12")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_block(cls, block: "FourModeEvenBlock") -> "EvenParityState8":
        """Embed a seniority-zero 4x4 block into the even-parity sector."""
        m = np.zeros((8, 8))
        m[_IDX_FULL, _IDX_FULL] = block.nn
        m[_IDX_PAIR_K, _IDX_PAIR_K] = block.n_tilde
        m[_IDX_PAIR_KP, _IDX_PAIR_KP] = block.tilde_n
        m[_IDX_EMPTY, _IDX_EMPTY] = block.tilde_tilde
        m[_IDX_PAIR_K, _IDX_PAIR_KP] = m[_IDX_PAIR_KP, _IDX_PAIR_K] = block.pair_transfer
        return cls(m)


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Square root by symmetric eigendecomposition.

    Eigenvalues are clamped at 0; values below the working precision of
    the decomposition are dropped so they cannot be amplified by the root.
    """
    w, u = np.linalg.eigh(0.5 * (m + m.conj().T))
    w = np.clip(w, 0.0, None)
    if w[-1] > 0.0:
        w[w < 16.0 * np.finfo(float).eps * w[-1]] = 0.0
    return (u * np.sqrt(w)) @ u.conj().T


def concurrence_general(rho: EvenParityState8) -> float:
    """Fermionic concurrence of a four-mode even-parity state.

    C = max(2*lambda_max - Tr R, 0) with R = sqrt(sqrt(rho) rho~ sqrt(rho))
    and rho~ = T rho* T the conjugated state. The eigenvalues of R equal
    the singular values of sqrt(rho)* T sqrt(rho), which is how they are
    computed (one squaring fewer than forming R explicitly).
    """
    m = rho.matrix
    t = CONJUGATION
    s = _psd_sqrt(m)
    lam = np.linalg.svd(s.conj() @ t @ s, compute_uv=False)
    return float(max(2.0 * lam.max() - lam.sum(), 0.0))


def concurrence_closed(block: "FourModeEvenBlock") -> float:
    """Closed-form concurrence of a seniority-zero four-mode block:
    C = 2*max(|<P_k+ P_k'>| - sqrt(<n n> <n~ n~>), 0).
    """
    cross = math.sqrt(max(block.nn, 0.0) * max(block.tilde_tilde, 0.0))
    return max(2.0 * (abs(block.pair_transfer) - cross), 0.0)


class EofResult(NamedTuple):
    e_qsp: float   # four-mode one-body entanglement of formation
    e_pair: float  # bipartite pair-pair entanglement of formation (= e_qsp / 4)


def eof_from_concurrence(c: float) -> EofResult:
    """Entanglement of formation from the concurrence: f+- = (1 +- sqrt(1-C^2))/2."""
    if c < -1e-12 or c > 1.0 + 1e-12:
        raise ValueError(f"concurrence outside [0, 1]: {c}")
    c = min(max(c, 0.0), 1.0)
    f_plus = 0.5 * (1.0 + math.sqrt(max(1.0 - c * c, 0.0)))
    e_pair = binary_entropy(f_plus)
    return EofResult(e_qsp=4.0 * e_pair, e_pair=e_pair)


def mutual_information(block: "FourModeEvenBlock") -> float:
    """I_kk' = S(rho_kkbar) + S(rho_k'kbar') - S(rho_kkbar k'kbar')."""
    return (
        binary_entropy(block.fk)
        + binary_entropy(block.fkp)
        - vn_entropy(block.matrix())
    )


@dataclass(frozen=True)
class TwoQubitRep:
    """Bloch representation of the four-mode block as a two-qubit X state.

    rz_a, rz_b are the z polarizations 2<n> - 1 of the (k, kbar) and
    (k', kbar') qubits; cxx = cyy and czz are the diagonal entries of the
    correlation tensor (covariances of the pseudo-Pauli operators).
    """

    rz_a: float
    rz_b: float
    cxx: float
    czz: float

    def __post_init__(self) -> None:
        for name in ("rz_a", "rz_b", "cxx", "czz"):
            if abs(getattr(self, name)) > 1.0 + 1e-9:
                raise ValueError(f"{name} outside [-1, 1]: {getattr(self, name)}")
        if np.linalg.eigvalsh(self.density()).min() < -1e-9:
            raise ValueError("Bloch parameters do not define a PSD state")

    def density(self) -> np.ndarray:
        """Assembled 4x4 X-state density in the basis (11, 10, 01, 00)."""
        tzz = self.czz + self.rz_a * self.rz_b
        p11 = 0.25 * (1.0 + self.rz_a + self.rz_b + tzz)
        p10 = 0.25 * (1.0 + self.rz_a - self.rz_b - tzz)
        p01 = 0.25 * (1.0 - self.rz_a + self.rz_b - tzz)
        p00 = 0.25 * (1.0 - self.rz_a - self.rz_b + tzz)
        rho = np.diag([p11, p10, p01, p00])
        rho[1, 2] = rho[2, 1] = 0.5 * self.cxx
        return rho


def two_qubit_rep(block: "FourModeEvenBlock") -> TwoQubitRep:
    """Two-qubit Bloch parameters of a seniority-zero four-mode block."""
    return TwoQubitRep(
        rz_a=2.0 * block.fk - 1.0,
        rz_b=2.0 * block.fkp - 1.0,
        cxx=2.0 * block.pair_transfer,
        czz=4.0 * (block.nn - block.fk * block.fkp),
    )


def _h2(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -(x * math.log2(x) + (1.0 - x) * math.log2(1.0 - x))


def conditional_entropy(rep: TwoQubitRep, theta: float) -> float:
    """Average post-measurement entropy of qubit A = (k, kbar).

    Qubit B = (k', kbar') is measured projectively along (sin t, 0, cos t);
    the azimuthal angle is irrelevant because the state is symmetric under
    rotations about z. Outcomes with vanishing probability are skipped.
    """
    st, ct = math.sin(theta), math.cos(theta)
    total = 0.0
    for nu in (1.0, -1.0):
        denom = 1.0 + nu * rep.rz_b * ct
        p = 0.5 * denom
        if p < 1e-15:
            continue
        vx = rep.cxx * st / denom
        vz = rep.rz_a + nu * rep.czz * ct / denom
        r = min(math.hypot(vx, vz), 1.0)
        total += p * _h2(0.5 * (1.0 + r))
    return total


_THETA_GRID = np.linspace(0.0, math.pi / 2.0, 181)


def discord(block: "FourModeEvenBlock") -> float:
    """Quantum discord D(A|B) of the four-mode block, measuring B = (k', kbar').

    Minimizes the conditional entropy over projective measurement angles by
    a dense grid on [0, pi/2] (the state is symmetric about z and under
    theta -> pi - theta) followed by golden-section refinement to 1e-10.
    """
    rep = two_qubit_rep(block)
    base = vn_entropy(block.matrix()) - binary_entropy(block.fkp)
    vals = [conditional_entropy(rep, t) for t in _THETA_GRID]
    i = int(np.argmin(vals))
    lo = _THETA_GRID[max(i - 1, 0)]
    hi = _THETA_GRID[min(i + 1, len(_THETA_GRID) - 1)]
    _, refined = golden_section_min(lambda t: conditional_entropy(rep, t), lo, hi, 1e-10)
    value = min(vals[i], refined) - base
    return value if value >= 0.0 else max(value, -1e-10)


@dataclass(frozen=True)
class StrongCouplingLimits:
    """Closed forms for G/(Omega*eps) -> infinity at half filling."""

    nn: float                    # <n n> = <n~ n~> = (Omega-2)/(4(Omega-1))
    inner: float                 # inner-block elements = Omega/(4(Omega-1))
    concurrence: float           # C = 1/(Omega-1)
    mutual_information: float    # ~ (1 + 1/Omega)/2 for large Omega
    block_entropy: float         # ~ (3 - 1/Omega)/2 for large Omega
    discord: float               # ~ (1 - log2(3)/2)(3 + 1/Omega)/2
    discord_large_omega: float   # 3/2 - (3/4) log2 3


def strong_coupling_limits(omega: int) -> StrongCouplingLimits:
    """Strong-coupling record for a half-filled system of ``omega`` levels."""
    if omega < 2 or omega % 2 != 0:
        raise ValueError(f"omega must be an even integer >= 2, got {omega}")
    log2_3 = math.log2(3.0)
    return StrongCouplingLimits(
        nn=(omega - 2) / (4.0 * (omega - 1)),
        inner=omega / (4.0 * (omega - 1)),
        concurrence=1.0 / (omega - 1),
        mutual_information=0.5 * (1.0 + 1.0 / omega),
        block_entropy=0.5 * (3.0 - 1.0 / omega),
        discord=0.5 * (1.0 - log2_3 / 2.0) * (3.0 + 1.0 / omega),
        discord_large_omega=1.5 - 0.75 * log2_3,
    )
