"""Pairing model definition and the seniority-zero pair basis.

The Hamiltonian acts on Omega doubly degenerate single-particle levels
(k, kbar), k = 1..Omega, with pair operators P_k^dag = c_k^dag c_kbar^dag:

    H = sum_k eps_k (n_k + n_kbar) - G sum_{k,k'} P_{k'}^dag P_k ,

with a constant coupling G >= 0 and an unrestricted double sum (the
k = k' term contributes -G per occupied pair). In the subspace with no
broken pairs every level pair is either fully occupied or empty, so a
basis state is an Omega-bit mask with popcount N/2. Pair operators on
distinct levels commute, hence no fermionic sign appears and H restricted
to this subspace has diagonal 2*sum_{k in nu} eps_k - G*(N/2) and a
constant off-diagonal element -G between masks related by moving one pair.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

__all__ = [
    "CapacityError",
    "ModelParams",
    "PairBasis",
    "enumerate_basis",
    "apply_hamiltonian",
    "hamiltonian_dense",
    "DEFAULT_BASIS_CAPACITY",
]

DEFAULT_BASIS_CAPACITY = 10_000_000


class CapacityError(ValueError):
    """A requested basis or Fock-space dimension exceeds the configured cap."""


@dataclass(frozen=True)
class ModelParams:
    """Instance of the constant-coupling pairing Hamiltonian.

    Parameters
    ----------
    omega : even number of doubly degenerate levels.
    pairs : number of fermion pairs N/2; defaults to omega/2 (half filling).
    eps : level spacing; the default spectrum is eps_k = k*eps, k = 1..omega.
    coupling : pairing strength G >= 0.
    levels : optional explicit nondecreasing level energies, length omega.
    """

    omega: int
    pairs: int | None = None
    eps: float = 1.0
    coupling: float = 0.0
    levels: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.omega <= 0 or self.omega % 2 != 0:
            raise ValueError(f"omega must be a positive even integer, got {self.omega}")
        if self.pairs is None:
            object.__setattr__(self, "pairs", self.omega // 2)
        if not 1 <= self.pairs <= self.omega:
            raise ValueError(f"pairs must satisfy 1 <= pairs <= omega, got {self.pairs}")
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if self.coupling < 0:
            raise ValueError(f"coupling must be nonnegative, got {self.coupling}")
        if self.levels is not None:
            levels = tuple(float(e) for e in self.levels)
            if len(levels) != self.omega:
                raise ValueError(f"levels must have length omega={self.omega}")
            if any(b < a for a, b in zip(levels, levels[1:])):
                raise ValueError("levels must be nondecreasing")
            object.__setattr__(self, "levels", levels)

    @property
    def level_energies(self) -> np.ndarray:
        """Single-particle energies eps_k as an array of length omega."""
        if self.levels is not None:
            return np.asarray(self.levels, dtype=float)
        return self.eps * np.arange(1, self.omega + 1, dtype=float)


@dataclass(frozen=True, eq=False)
class PairBasis:
    """Ordered enumeration of the Omega-bit pair configurations.

    ``configs`` is strictly increasing; ``occupancy[nu, k-1]`` is the pair
    occupation n_k of configuration nu; ``hopping`` is the unit adjacency
    matrix between configurations one pair move apart (coupling-independent,
    so a single basis serves a whole G scan).
    """

    omega: int
    pairs: int
    configs: np.ndarray = field(repr=False)
    occupancy: np.ndarray = field(repr=False)
    hopping: sp.csr_matrix = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.configs)

    def rank(self, mask: int) -> int:
        """Index of a configuration mask in the basis ordering."""
        i = int(np.searchsorted(self.configs, mask))
        if i >= self.dim or self.configs[i] != mask:
            raise KeyError(f"mask {mask:#x} not in basis")
        return i

    def rank_many(self, masks: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`rank`; all masks must belong to the basis."""
        idx = np.searchsorted(self.configs, masks)
        if np.any(idx >= self.dim) or np.any(self.configs[idx] != masks):
            raise KeyError("mask not in basis")
        return idx


def enumerate_basis(params: ModelParams, capacity: int = DEFAULT_BASIS_CAPACITY) -> PairBasis:
    """Enumerate all C(omega, pairs) pair configurations in increasing mask order."""
    omega, npairs = params.omega, params.pairs
    dim = math.comb(omega, npairs)
    if dim > capacity:
        raise CapacityError(
            f"basis dimension C({omega},{npairs}) = {dim} exceeds capacity {capacity}"
        )
    configs = np.empty(dim, dtype=np.int64)
    x = (1 << npairs) - 1
    for i in range(dim):
        configs[i] = x
        if i + 1 < dim:
            # Gosper's hack: next larger integer with the same popcount
            u = x & -x
            v = u + x
            x = v + (((v ^ x) // u) >> 2)

    occupancy = ((configs[:, None] >> np.arange(omega)) & 1).astype(float)
    occ_bool = occupancy.astype(bool)

    src_parts: list[np.ndarray] = []
    dst_parts: list[np.ndarray] = []
    for a in range(omega):
        for b in range(omega):
            if a == b:
                continue
            idx = np.nonzero(occ_bool[:, a] & ~occ_bool[:, b])[0]
            if idx.size == 0:
                continue
            moved = configs[idx] ^ ((1 << a) | (1 << b))
            src_parts.append(idx)
            dst_parts.append(np.searchsorted(configs, moved))
    if src_parts:
        src = np.concatenate(src_parts)
        dst = np.concatenate(dst_parts)
    else:
        src = np.zeros(0, dtype=np.int64)
        dst = np.zeros(0, dtype=np.int64)
    hopping = sp.csr_matrix(
        (np.ones(len(src)), (dst, src)), shape=(dim, dim), dtype=float
    )
    return PairBasis(omega=omega, pairs=npairs, configs=configs,
                     occupancy=occupancy, hopping=hopping)


def hamiltonian_diagonal(params: ModelParams, basis: PairBasis) -> np.ndarray:
    """Diagonal of H in the pair basis: 2*sum_{k in nu} eps_k - G*pairs."""
    return 2.0 * (basis.occupancy @ params.level_energies) - params.coupling * basis.pairs


def apply_hamiltonian(params: ModelParams, basis: PairBasis, x: np.ndarray) -> np.ndarray:
    """Apply H to an amplitude vector without materializing the full matrix."""
    x = np.asarray(x, dtype=float)
    if x.shape != (basis.dim,):
        raise ValueError(f"vector length {x.shape} does not match basis dim {basis.dim}")
    y = hamiltonian_diagonal(params, basis) * x
    if params.coupling != 0.0:
        y -= params.coupling * (basis.hopping @ x)
    return y


def hamiltonian_dense(params: ModelParams, basis: PairBasis) -> np.ndarray:
    """Dense H matrix; intended for small bases (used by the dense eigensolver)."""
    h = (-params.coupling) * basis.hopping.toarray()
    h[np.diag_indices(basis.dim)] += hamiltonian_diagonal(params, basis)
    return h
