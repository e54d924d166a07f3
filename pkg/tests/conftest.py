"""Shared fixtures: the default omega = 16 coupling grid computed once."""
from __future__ import annotations

from dataclasses import dataclass

import pytest

from pairsim import (
    BcsSolution,
    FourModeEvenBlock,
    ModelParams,
    PairStateVector,
    PbcsSolution,
    bcs_four_mode,
    enumerate_basis,
    four_mode_block,
    ground_state,
    pbcs_optimize,
    solve_gap,
)
from pairsim.scan import default_g_grid

LEVEL_PAIRS_16 = ((8, 9), (1, 16), (7, 10))


@dataclass(frozen=True)
class GridPoint:
    g: float
    exact_state: PairStateVector
    exact_blocks: dict[tuple[int, int], FourModeEvenBlock]
    bcs: BcsSolution
    bcs_blocks: dict[tuple[int, int], FourModeEvenBlock]
    pbcs: PbcsSolution
    pbcs_blocks: dict[tuple[int, int], FourModeEvenBlock]


@pytest.fixture(scope="session")
def grid16() -> list[GridPoint]:
    """Exact, BCS and projected-BCS solutions over the default grid."""
    basis = enumerate_basis(ModelParams(omega=16))
    points = []
    for g in default_g_grid(16, 1.0):
        params = ModelParams(omega=16, coupling=float(g))
        state = ground_state(params, basis)
        sol = solve_gap(params)
        proj = pbcs_optimize(params, basis)
        points.append(
            GridPoint(
                g=float(g),
                exact_state=state,
                exact_blocks={p: four_mode_block(state, *p) for p in LEVEL_PAIRS_16},
                bcs=sol,
                bcs_blocks={p: bcs_four_mode(sol, *p) for p in LEVEL_PAIRS_16},
                pbcs=proj,
                pbcs_blocks={p: four_mode_block(proj.state, *p) for p in LEVEL_PAIRS_16},
            )
        )
    return points


@pytest.fixture(scope="session")
def strong16() -> PairStateVector:
    """Exact ground state at omega = 16, G/(omega*eps) = 100."""
    return ground_state(ModelParams(omega=16, coupling=1600.0))
