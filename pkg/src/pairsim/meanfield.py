"""BCS mean field and number-projected BCS for the pairing model.

The chemical potential is fixed at the spectrum mean (exact for half
filling with a symmetric spectrum; self-energy shifts are neglected).
The projected treatment keeps the BCS functional form of u_k, v_k but
treats the gap as a variational parameter of the number-projected state,
optimized against the projected energy (projection before variation).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ._util import golden_section_min
from .entanglement import binary_entropy
from .exact import FourModeEvenBlock, PairStateVector
from .model import ModelParams, PairBasis, apply_hamiltonian, enumerate_basis

__all__ = [
    "GAMMA_HALF",
    "CriticalCoupling",
    "BcsSolution",
    "BcsEntropies",
    "PbcsSolution",
    "critical_coupling",
    "solve_gap",
    "bcs_energy",
    "bcs_entropies",
    "bcs_four_mode",
    "pbcs_state",
    "pbcs_optimize",
]

# -digamma(1/2) = euler_gamma + 2 ln 2, the constant in the large-Omega
# estimate of the critical coupling for an equally spaced spectrum.
GAMMA_HALF = np.euler_gamma + 2.0 * math.log(2.0)


class CriticalCoupling(NamedTuple):
    exact: float      # 2 / sum_k 1/|eps_k - mu|
    estimate: float   # eps / (ln(Omega/2) + GAMMA_HALF), large-Omega form


@dataclass(frozen=True, eq=False)
class BcsSolution:
    """Gap-equation solution: Delta, mu and the per-level u, v, lambda, f."""

    delta: float
    mu: float
    u: np.ndarray = field(repr=False)
    v: np.ndarray = field(repr=False)
    lam: np.ndarray = field(repr=False)
    f: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if np.max(np.abs(self.u**2 + self.v**2 - 1.0)) > 1e-12:
            raise ValueError("u_k^2 + v_k^2 != 1")
        if self.delta > 0.0 and np.max(np.abs(self.u * self.v - self.delta / (2.0 * self.lam))) > 1e-10:
            raise ValueError("u_k v_k != Delta/(2 lambda_k)")


@dataclass(frozen=True)
class BcsEntropies:
    """Entropy record of a BCS solution.

    ``e_qsp`` is the generalized one-body entropy of the quasiparticle
    vacuum, which vanishes by construction; ``qsp_defect`` reports the
    largest distance of the assembled generalized density-matrix
    eigenvalues from {0, 1}.
    """

    e_one_body: float
    e_schmidt: float
    number_fluctuation: float
    e_qsp: float
    qsp_defect: float


@dataclass(frozen=True, eq=False)
class PbcsSolution:
    """Variational number-projected BCS result.

    ``boundary`` flags a degenerate bracket (optimum pinned at an endpoint
    of the Delta search interval).
    """

    delta_var: float
    state: PairStateVector
    energy: float
    boundary: bool = False


def _check_half_filling(params: ModelParams) -> None:
    if params.pairs != params.omega // 2:
        raise ValueError(
            f"BCS treatment assumes half filling (pairs = omega/2); "
            f"got pairs={params.pairs}, omega={params.omega}"
        )


def critical_coupling(params: ModelParams) -> CriticalCoupling:
    """Critical coupling G_c = 2 / sum_k 1/|eps_k - mu| at half filling.

    Also returns the large-Omega estimate for the equally spaced spectrum.
    Raises if some level sits at the Fermi energy (|eps_k - mu| < 1e-14).
    """
    _check_half_filling(params)
    levels = params.level_energies
    tilde = levels - levels.mean()
    if np.min(np.abs(tilde)) < 1e-14:
        raise ValueError("degenerate Fermi level: some |eps_k - mu| < 1e-14")
    exact = 2.0 / float(np.sum(1.0 / np.abs(tilde)))
    estimate = params.eps / (math.log(params.omega / 2.0) + GAMMA_HALF)
    return CriticalCoupling(exact=exact, estimate=estimate)


def _uv_from_delta(tilde: np.ndarray, delta: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    lam = np.sqrt(tilde**2 + delta**2)
    v = np.sqrt(0.5 * (1.0 - tilde / lam))
    u = np.sqrt(0.5 * (1.0 + tilde / lam))
    return u, v, lam


def solve_gap(params: ModelParams) -> BcsSolution:
    """Solve the gap equation sum_k 1/(2 lambda_k) = 1/G at half filling.

    Returns Delta = 0 below the critical coupling; otherwise the unique
    positive root is bracketed on (0, G*Omega] and bisected to a relative
    width of 1e-12 (the left-hand side is strictly decreasing in Delta).
    """
    _check_half_filling(params)
    levels = params.level_energies
    mu = float(levels.mean())
    tilde = levels - mu
    g = params.coupling
    gc = critical_coupling(params).exact

    if g <= gc:
        v = (tilde < 0).astype(float)
        u = 1.0 - v
        lam = np.abs(tilde)
        return BcsSolution(delta=0.0, mu=mu, u=u, v=v, lam=lam, f=v**2)

    def excess(delta: float) -> float:
        return float(np.sum(0.5 / np.sqrt(tilde**2 + delta**2))) - 1.0 / g

    lo, hi = 0.0, g * params.omega
    if excess(hi) > 0.0:
        raise RuntimeError(f"gap-equation bracket failure at G = {g}")
    while hi - lo > 1e-12 * hi:
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    delta = 0.5 * (lo + hi)
    u, v, lam = _uv_from_delta(tilde, delta)
    return BcsSolution(delta=delta, mu=mu, u=u, v=v, lam=lam, f=v**2)


def bcs_energy(params: ModelParams, sol: BcsSolution) -> float:
    """BCS energy <H> = 2 sum eps v^2 - G[(sum uv)^2 - sum (uv)^2 + sum f]."""
    levels = params.level_energies
    uv = sol.u * sol.v
    return float(
        2.0 * np.sum(levels * sol.f)
        - params.coupling * (np.sum(uv) ** 2 - np.sum(uv**2) + np.sum(sol.f))
    )


def bcs_entropies(sol: BcsSolution) -> BcsEntropies:
    """Entropies of the BCS state; the Schmidt entropy is exactly half the
    one-body entropy because the k/kbar expansion factorizes per level."""
    h = binary_entropy(sol.f)
    e_schmidt = float(np.sum(h))
    uv = sol.u * sol.v
    number_fluctuation = 4.0 * float(np.sum(uv**2))

    # generalized one-body (Nambu) density matrix over the 2*Omega modes,
    # assembled from f_k and the pair contractions kappa_{k kbar} = u_k v_k
    omega = len(sol.f)
    m = np.zeros((2 * omega, 2 * omega))
    m[:omega, :omega] = np.diag(sol.f)
    m[omega:, omega:] = np.diag(1.0 - sol.f)
    m[:omega, omega:] = np.diag(uv)
    m[omega:, :omega] = np.diag(uv)
    eigs = np.linalg.eigvalsh(m)
    qsp_defect = float(np.max(np.minimum(np.abs(eigs), np.abs(1.0 - eigs))))
    e_qsp = 0.5 * float(np.sum(binary_entropy(np.clip(eigs, 0.0, 1.0))))
    return BcsEntropies(
        e_one_body=2.0 * e_schmidt,
        e_schmidt=e_schmidt,
        number_fluctuation=number_fluctuation,
        e_qsp=e_qsp,
        qsp_defect=qsp_defect,
    )


def bcs_four_mode(sol: BcsSolution, k: int, kp: int) -> FourModeEvenBlock:
    """BCS four-mode block: factorized probabilities and Wick pair transfer
    u_k v_k u_k' v_k', for which the concurrence vanishes identically."""
    omega = len(sol.f)
    if not (1 <= k <= omega and 1 <= kp <= omega):
        raise IndexError(f"level indices ({k}, {kp}) out of range 1..{omega}")
    if k == kp:
        raise ValueError("four-mode block requires two distinct levels")
    fk, fp = float(sol.f[k - 1]), float(sol.f[kp - 1])
    pt = float(sol.u[k - 1] * sol.v[k - 1] * sol.u[kp - 1] * sol.v[kp - 1])
    return FourModeEvenBlock(
        nn=fk * fp,
        n_tilde=fk * (1.0 - fp),
        tilde_n=(1.0 - fk) * fp,
        tilde_tilde=(1.0 - fk) * (1.0 - fp),
        pair_transfer=pt,
        fk=fk,
        fkp=fp,
    )


def pbcs_state(params: ModelParams, delta: float, basis: PairBasis | None = None) -> PairStateVector:
    """Number-projected BCS state with amplitudes prod_k v_k^n u_k^(1-n).

    u_k, v_k follow the BCS formulas at the given Delta with mu at the
    spectrum mean; Delta = 0 returns the Fermi sea. Products are evaluated
    in log space so very large Delta does not underflow.
    """
    if delta < 0.0:
        raise ValueError(f"delta must be nonnegative, got {delta}")
    if basis is None:
        basis = enumerate_basis(params)
    elif (basis.omega, basis.pairs) != (params.omega, params.pairs):
        raise ValueError("prebuilt basis does not match the model parameters")
    amps = np.zeros(basis.dim)
    if delta == 0.0:
        amps[0] = 1.0  # lowest mask = lowest `pairs` levels occupied
        return PairStateVector(basis=basis, amps=amps)
    levels = params.level_energies
    tilde = levels - levels.mean()
    u, v, _ = _uv_from_delta(tilde, delta)
    log_ratio = np.log(v) - np.log(u)
    logw = basis.occupancy @ log_ratio
    logw -= logw.max()
    amps = np.exp(logw)
    amps /= np.linalg.norm(amps)
    return PairStateVector(basis=basis, amps=amps)


def pbcs_optimize(params: ModelParams, basis: PairBasis | None = None) -> PbcsSolution:
    """Optimize the projected energy <psi(Delta)|H|psi(Delta)> over Delta >= 0.

    A coarse scan (Delta = 0 plus 16 log-spaced points up to 3*G*Omega)
    brackets the minimum, refined by golden section. A minimum pinned at
    the scan boundary is returned with ``boundary=True``.
    """
    if basis is None:
        basis = enumerate_basis(params)

    def energy_at(delta: float) -> float:
        psi = pbcs_state(params, delta, basis).amps
        return float(psi @ apply_hamiltonian(params, basis, psi))

    if params.coupling == 0.0:
        state = pbcs_state(params, 0.0, basis)
        return PbcsSolution(delta_var=0.0, state=state, energy=energy_at(0.0))

    hi = 3.0 * params.coupling * params.omega
    grid = np.concatenate([[0.0], np.geomspace(1e-6 * hi, hi, 16)])
    energies = [energy_at(d) for d in grid]
    i = int(np.argmin(energies))
    boundary = i == len(grid) - 1
    lo_edge = grid[max(i - 1, 0)]
    hi_edge = grid[min(i + 1, len(grid) - 1)]
    delta_star, e_star = golden_section_min(
        energy_at, lo_edge, hi_edge, xtol=1e-10 * max(1.0, hi)
    )
    if energies[i] < e_star:
        delta_star, e_star = grid[i], energies[i]
    boundary = boundary or delta_star <= 0.0
    state = pbcs_state(params, delta_star, basis)
    return PbcsSolution(delta_var=float(delta_star), state=state, energy=float(e_star),
                        boundary=bool(boundary))
