"""Built-in verification suites behind the ``pairsim verify`` command.

Each check recomputes a closed-form or independently derived quantity and
compares the library against it at a stated tolerance. The ``fast`` level
runs everything that avoids large diagonalizations; ``full`` adds the
Omega = 16 strong-coupling and scan-based checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import entanglement as ent
from . import exact, fock, meanfield
from .model import ModelParams, apply_hamiltonian, enumerate_basis
from .scan import default_g_grid

__all__ = ["CheckResult", "run_verification", "FAST_CHECKS", "FULL_CHECKS"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    tolerance: str
    margin: str
    detail: str = ""


def _result(name: str, passed: bool, tolerance: str, margin: str, detail: str = "") -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), tolerance=tolerance,
                       margin=margin, detail=detail)


def check_two_level_closed_forms() -> CheckResult:
    """Omega = 2: concurrence G/sqrt(eps^2+G^2) and collapse of all measures."""
    worst_c = 0.0
    worst_collapse = 0.0
    for g in np.linspace(0.0, 10.0, 20):
        params = ModelParams(omega=2, coupling=float(g))
        state = exact.ground_state(params)
        block = exact.four_mode_block(state, 1, 2)
        c = ent.concurrence_closed(block)
        worst_c = max(worst_c, abs(c - g / math.hypot(1.0, g)))
        values = [
            ent.discord(block),
            ent.eof_from_concurrence(c).e_pair,
            exact.schmidt_entropy(state),
            exact.one_body_entropy(exact.occupations(state)) / 4.0,
        ]
        worst_collapse = max(worst_collapse, max(values) - min(values))
    passed = worst_c <= 1e-10 and worst_collapse <= 1e-9
    return _result(
        "two-level closed forms", passed,
        "C to 1e-10; measure collapse to 1e-9",
        f"max|dC| = {worst_c:.2e}, max spread = {worst_collapse:.2e}",
    )


def check_hamiltonian_dense_oracle() -> CheckResult:
    """Matrix-free application equals an independently assembled dense matrix."""
    worst = 0.0
    for omega, pairs in ((2, 1), (4, 2), (6, 3), (6, 2)):
        params = ModelParams(omega=omega, pairs=pairs, coupling=0.7)
        basis = enumerate_basis(params)
        levels = params.level_energies
        dense = np.zeros((basis.dim, basis.dim))
        for i, ci in enumerate(basis.configs):
            occ = [k for k in range(omega) if (int(ci) >> k) & 1]
            dense[i, i] = 2.0 * sum(levels[k] for k in occ) - params.coupling * pairs
            for j, cj in enumerate(basis.configs):
                diff = int(ci) ^ int(cj)
                if i != j and bin(diff).count("1") == 2 and bin(int(ci) & diff).count("1") == 1:
                    dense[i, j] = -params.coupling
        for col in range(basis.dim):
            e = np.zeros(basis.dim)
            e[col] = 1.0
            worst = max(worst, float(np.max(np.abs(apply_hamiltonian(params, basis, e) - dense[:, col]))))
    return _result(
        "matrix-free vs dense Hamiltonian", worst <= 1e-12,
        "elementwise 1e-12", f"max dev = {worst:.2e}",
    )


def concurrence_oracle_deviation(omega: int = 8, n_g: int = 21) -> tuple[float, int]:
    """Max |general - closed| concurrence over exact/BCS/PBCS blocks."""
    params0 = ModelParams(omega=omega)
    basis = enumerate_basis(params0)
    pairs = [(omega // 2, omega // 2 + 1), (1, omega), (2, omega - 1)]
    worst = 0.0
    count = 0
    grid = [0.0] + list(np.geomspace(0.02, 10.0 * omega, n_g - 1))
    for g in grid:
        params = ModelParams(omega=omega, coupling=float(g))
        blocks = []
        state = exact.ground_state(params, basis)
        blocks += [exact.four_mode_block(state, k, kp) for k, kp in pairs]
        sol = meanfield.solve_gap(params)
        blocks += [meanfield.bcs_four_mode(sol, k, kp) for k, kp in pairs]
        proj = meanfield.pbcs_optimize(params, basis)
        blocks += [exact.four_mode_block(proj.state, k, kp) for k, kp in pairs]
        for block in blocks:
            general = ent.concurrence_general(ent.EvenParityState8.from_block(block))
            worst = max(worst, abs(general - ent.concurrence_closed(block)))
            count += 1
    return worst, count


def check_concurrence_oracle() -> CheckResult:
    worst, count = concurrence_oracle_deviation()
    return _result(
        "concurrence closed form vs conjugation matrix", worst <= 1e-8,
        "1e-8 over all blocks", f"max dev = {worst:.2e} over {count} blocks",
    )


def check_bcs_identities() -> CheckResult:
    """BCS: zero concurrence, Schmidt = one-body/2, fluctuation and qsp identities."""
    worst_c = worst_fluct = worst_qsp = worst_ratio = 0.0
    for g in np.geomspace(0.05, 160.0, 12):
        params = ModelParams(omega=16, coupling=float(g))
        sol = meanfield.solve_gap(params)
        for k, kp in ((8, 9), (1, 16), (3, 11)):
            worst_c = max(worst_c, ent.concurrence_closed(meanfield.bcs_four_mode(sol, k, kp)))
        entropies = meanfield.bcs_entropies(sol)
        worst_ratio = max(worst_ratio, abs(entropies.e_one_body - 2.0 * entropies.e_schmidt))
        quad = exact.quadratic_entropy(exact.OccupationProfile(f=sol.f))
        worst_fluct = max(worst_fluct, abs(quad - 2.0 * entropies.number_fluctuation))
        worst_qsp = max(worst_qsp, entropies.qsp_defect)
    passed = (worst_c <= 1e-12 and worst_ratio == 0.0
              and worst_fluct <= 1e-12 and worst_qsp <= 1e-10)
    return _result(
        "BCS identities", passed,
        "C<=1e-12; Schmidt=onebody/2 exact; fluctuation 1e-12; qsp eigs 1e-10",
        f"C={worst_c:.2e}, ratio={worst_ratio:.2e}, fluct={worst_fluct:.2e}, qsp={worst_qsp:.2e}",
    )


def check_gap_equation() -> CheckResult:
    """Critical coupling against the written-out sum; residual and strong limit."""
    params = ModelParams(omega=16)
    harmonic = sum(1.0 / m for m in range(1, 16, 2))
    gc_oracle = 2.0 / (4.0 * harmonic)
    gc = meanfield.critical_coupling(params).exact
    err_gc = abs(gc - gc_oracle)

    worst_resid = 0.0
    for g in np.geomspace(0.05, 1600.0, 15):
        sol = meanfield.solve_gap(ModelParams(omega=16, coupling=float(g)))
        if sol.delta > 0:
            worst_resid = max(worst_resid, abs(float(np.sum(0.5 / sol.lam)) - 1.0 / g))
    strong = meanfield.solve_gap(ModelParams(omega=16, coupling=1600.0))
    err_strong = abs(strong.delta / (0.5 * 1600.0 * 16) - 1.0)
    passed = err_gc <= 1e-9 and worst_resid <= 1e-10 and err_strong <= 1e-4
    return _result(
        "gap equation", passed,
        "G_c 1e-9; residual 1e-10; Delta/g at strong coupling 1e-4",
        f"dG_c={err_gc:.2e}, resid={worst_resid:.2e}, dDelta/g={err_strong:.2e}",
    )


def check_relative_entropy_minimum() -> CheckResult:
    """Matched gaussian attains the one-body entropy and minimizes S(rho||rho')."""
    params0 = ModelParams(omega=4)
    gc = meanfield.critical_coupling(params0).exact
    basis = enumerate_basis(params0)
    worst_identity = 0.0
    worst_increase = math.inf
    for g in np.linspace(0.8, 4.0, 5) * gc:
        state = exact.ground_state(ModelParams(omega=4, coupling=float(g)), basis)
        report = fock.verify_minimum(state, perturbations=20)
        worst_identity = max(worst_identity, report.identity_error)
        worst_increase = min(worst_increase, report.min_increase)
    passed = worst_identity <= 1e-8 and worst_increase > 0.0
    return _result(
        "minimum relative entropy", passed,
        "identity 1e-8; perturbations strictly increase",
        f"identity={worst_identity:.2e}, min increase={worst_increase:.2e}",
    )


def check_fock_partial_traces() -> CheckResult:
    """All reduced objects at Omega = 4 against full-Fock partial traces."""
    params = ModelParams(omega=4, coupling=1.0)
    state = exact.ground_state(params)
    psi = fock.embed(state)
    profile = exact.occupations(state)
    worst = 0.0
    odd_worst = 0.0
    for k in range(1, 5):
        rho1 = fock.partial_trace_modes(psi, [2 * k - 2])
        worst = max(worst, abs(rho1[1, 1] - profile.f[k - 1]))
        rho_pair = fock.partial_trace_modes(psi, [2 * k - 2, 2 * k - 1])
        target = exact.pair_mode_state(profile, k)
        worst = max(worst, float(np.max(np.abs(rho_pair[np.ix_([3, 0], [3, 0])] - target))))
    for k, kp in ((1, 2), (2, 3), (1, 4)):
        rho16 = fock.partial_trace_four_modes(psi, k, kp)
        block = exact.four_mode_block(state, k, kp)
        worst = max(worst, float(np.max(np.abs(fock.even_pair_block(rho16) - block.matrix()))))
        odd = [i for i in range(16) if bin(i).count("1") % 2 == 1]
        odd_worst = max(odd_worst, float(np.max(np.abs(rho16[np.ix_(odd, odd)]))))
    schmidt_rho = fock.partial_trace_modes(psi, [0, 2, 4, 6])
    spectrum = np.sort(np.linalg.eigvalsh(schmidt_rho))[::-1]
    amps2 = np.sort(state.amps**2)[::-1]
    worst = max(worst, float(np.max(np.abs(spectrum[: len(amps2)] - amps2))))
    passed = worst <= 1e-10 and odd_worst <= 1e-12
    return _result(
        "full-Fock partial traces", passed,
        "reduced objects 1e-10; odd-parity blocks 1e-12",
        f"max dev = {worst:.2e}, odd block = {odd_worst:.2e}",
    )


def check_discord_consistency() -> CheckResult:
    """Discord bounds and xy-plane stationarity on exact blocks (Omega = 8)."""
    params0 = ModelParams(omega=8)
    basis = enumerate_basis(params0)
    worst_low = 0.0
    worst_high = 0.0
    worst_stat = 0.0
    thetas = np.linspace(0.0, math.pi / 2.0, 181)
    for g in [0.0, 0.1, 0.3, 1.0, 10.0, 80.0]:
        state = exact.ground_state(ModelParams(omega=8, coupling=g), basis)
        for k, kp in ((4, 5), (1, 8)):
            block = exact.four_mode_block(state, k, kp)
            d = ent.discord(block)
            worst_low = max(worst_low, -d)
            worst_high = max(worst_high, d - ent.mutual_information(block))
            rep = ent.two_qubit_rep(block)
            values = [ent.conditional_entropy(rep, t) for t in thetas]
            worst_stat = max(worst_stat, values[-1] - min(values))
    passed = worst_low <= 1e-10 and worst_high <= 1e-10 and worst_stat <= 1e-12
    return _result(
        "discord bounds and stationarity", passed,
        "D >= -1e-10; D <= I + 1e-10; minimum at theta = pi/2 within 1e-12",
        f"-D={worst_low:.2e}, D-I={worst_high:.2e}, stat={worst_stat:.2e}",
    )


def check_strong_coupling_16() -> CheckResult:
    """Omega = 16, G/(Omega*eps) = 100: occupations, block elements, C, I, S."""
    params = ModelParams(omega=16, coupling=1600.0)
    state = exact.ground_state(params)
    profile = exact.occupations(state)
    limits = ent.strong_coupling_limits(16)
    err_f = float(np.max(np.abs(profile.f - 0.5)))
    block = exact.four_mode_block(state, 8, 9)
    rel = lambda x, ref: abs(x - ref) / ref
    errs = {
        "nn": rel(block.nn, limits.nn),
        "tt": rel(block.tilde_tilde, limits.nn),
        "inner": rel(block.n_tilde, limits.inner),
        "pt": rel(block.pair_transfer, limits.inner),
        "I": rel(ent.mutual_information(block), limits.mutual_information),
        "S": rel(ent.vn_entropy(block.matrix()), limits.block_entropy),
    }
    worst_c = 0.0
    for k in range(1, 17):
        for kp in range(k + 1, 17):
            c = ent.concurrence_closed(exact.four_mode_block(state, k, kp))
            worst_c = max(worst_c, rel(c, limits.concurrence))
    passed = err_f <= 0.01 and worst_c <= 0.01 and max(errs.values()) <= 0.01
    detail = ", ".join(f"{k}={v:.2e}" for k, v in errs.items())
    return _result(
        "strong-coupling limits (omega=16)", passed,
        "f within 0.01 absolute; block/C/I/S within 1% relative",
        f"|f-1/2|={err_f:.2e}, C={worst_c:.2e}, {detail}",
    )


def check_discord_asymptote_16() -> CheckResult:
    params = ModelParams(omega=16, coupling=1600.0)
    state = exact.ground_state(params)
    block = exact.four_mode_block(state, 8, 9)
    measured = ent.discord(block)
    formula = ent.strong_coupling_limits(16).discord
    err = abs(measured - formula) / formula
    return _result(
        "discord asymptote (omega=16)", err <= 0.01,
        "within 1% of the closed form",
        f"measured={measured:.6f}, formula={formula:.6f}, rel dev={err:.2e}",
    )


def check_concurrence_peak_16() -> CheckResult:
    """Interior concurrence peak near the transition (full default grid)."""
    params0 = ModelParams(omega=16)
    basis = enumerate_basis(params0)
    gc = meanfield.critical_coupling(params0).exact
    grid = default_g_grid(16, 1.0)
    c_close = []
    c_far = []
    for g in grid:
        state = exact.ground_state(ModelParams(omega=16, coupling=float(g)), basis)
        c_close.append(ent.concurrence_closed(exact.four_mode_block(state, 8, 9)))
        c_far.append(ent.concurrence_closed(exact.four_mode_block(state, 1, 16)))
    i = int(np.argmax(c_close))
    peak_g, peak = grid[i], c_close[i]
    state10 = exact.ground_state(ModelParams(omega=16, coupling=10.0 * gc), basis)
    c_at_10gc = ent.concurrence_closed(exact.four_mode_block(state10, 8, 9))
    interior = 0 < i < len(grid) - 1 and 0.5 * gc <= peak_g <= 3.0 * gc
    passed = interior and c_at_10gc < 0.6 * peak and max(c_far) < 0.25 * peak
    return _result(
        "concurrence peak location (omega=16)", passed,
        "peak in [0.5, 3]*G_c; C(10*G_c) < 60% peak; far-pair peak < 25%",
        f"peak {peak:.4f} at G={peak_g:.4f} (G_c={gc:.4f}), "
        f"C(10Gc)/peak={c_at_10gc / peak:.2f}, far/close={max(c_far) / peak:.2f}",
    )


def check_pbcs_tracks_exact_16() -> CheckResult:
    """PBCS: positive variational gap, entropy tracking, concurrence peak."""
    params0 = ModelParams(omega=16)
    basis = enumerate_basis(params0)
    grid = default_g_grid(16, 1.0)
    worst_entropy = 0.0
    min_delta = math.inf
    c_exact, c_pbcs = [], []
    missing_positive = 0
    for g in grid:
        params = ModelParams(omega=16, coupling=float(g))
        state = exact.ground_state(params, basis)
        proj = meanfield.pbcs_optimize(params, basis)
        if g > 0:
            min_delta = min(min_delta, proj.delta_var)
        e_exact = exact.one_body_entropy(exact.occupations(state))
        e_proj = exact.one_body_entropy(exact.occupations(proj.state))
        worst_entropy = max(worst_entropy, abs(e_proj - e_exact))
        ce = ent.concurrence_closed(exact.four_mode_block(state, 8, 9))
        cp = ent.concurrence_closed(exact.four_mode_block(proj.state, 8, 9))
        c_exact.append(ce)
        c_pbcs.append(cp)
        if ce > 0.02 and cp <= 0.0:
            missing_positive += 1
    g_peak_exact = grid[int(np.argmax(c_exact))]
    g_peak_pbcs = grid[int(np.argmax(c_pbcs))]
    ratio = g_peak_pbcs / g_peak_exact
    passed = (min_delta > 0.0 and worst_entropy <= 0.05 * 32.0
              and missing_positive == 0 and 0.5 <= ratio <= 2.0)
    return _result(
        "projected BCS tracks exact (omega=16)", passed,
        "Delta*>0; |dE| <= 0.05*2*omega; C>0 where exact C>0.02; peak within x2",
        f"min Delta*={min_delta:.3e}, |dE|={worst_entropy:.3f}, "
        f"missing C>0 points={missing_positive}, peak ratio={ratio:.2f}",
    )


FAST_CHECKS = (
    check_two_level_closed_forms,
    check_hamiltonian_dense_oracle,
    check_concurrence_oracle,
    check_bcs_identities,
    check_gap_equation,
    check_relative_entropy_minimum,
    check_fock_partial_traces,
    check_discord_consistency,
)

FULL_CHECKS = FAST_CHECKS + (
    check_strong_coupling_16,
    check_discord_asymptote_16,
    check_concurrence_peak_16,
    check_pbcs_tracks_exact_16,
)


def run_verification(level: str = "fast") -> list[CheckResult]:
    """Run the named verification suite and return per-check results."""
    if level not in ("fast", "full"):
        raise ValueError(f"level must be 'fast' or 'full', got {level!r}")
    checks = FAST_CHECKS if level == "fast" else FULL_CHECKS
    return [check() for check in checks]
