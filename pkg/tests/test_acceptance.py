"""Acceptance suite: one test per criterion, each printing a PASS line.

Grid-based criteria share the session-scoped ``grid16`` fixture (the
default 61-point coupling grid at omega = 16, solved exactly plus BCS and
projected BCS). Run with ``pytest tests/test_acceptance.py -v``.
"""
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from pairsim import (
    EvenParityState8,
    ModelParams,
    concurrence_closed,
    concurrence_general,
    conditional_entropy,
    critical_coupling,
    discord,
    enumerate_basis,
    eof_from_concurrence,
    four_mode_block,
    ground_state,
    mutual_information,
    occupations,
    one_body_entropy,
    quadratic_entropy,
    schmidt_entropy,
    strong_coupling_limits,
    two_qubit_rep,
    verify_minimum,
    vn_entropy,
)
from pairsim.exact import OccupationProfile


def report(number: int, name: str, detail: str) -> None:
    print(f"ACCEPTANCE {number:02d} PASS  {name}: {detail}")


def test_criterion_01_two_level_analytic_case():
    start = time.perf_counter()
    worst_c = 0.0
    worst_spread = 0.0
    for g in np.linspace(0.0, 10.0, 20):
        params = ModelParams(omega=2, coupling=float(g))
        state = ground_state(params)
        block = four_mode_block(state, 1, 2)
        c = concurrence_closed(block)
        worst_c = max(worst_c, abs(c - g / math.hypot(1.0, g)))
        values = [
            discord(block),
            eof_from_concurrence(c).e_pair,
            schmidt_entropy(state),
            one_body_entropy(occupations(state)) / 4.0,
        ]
        worst_spread = max(worst_spread, max(values) - min(values))
    elapsed = time.perf_counter() - start
    assert worst_c <= 1e-10
    assert worst_spread <= 1e-9
    assert elapsed < 1.0
    report(1, "two-level analytic case",
           f"max|dC| = {worst_c:.2e}, collapse spread = {worst_spread:.2e}, {elapsed:.2f}s")


def test_criterion_02_strong_coupling_limits():
    start = time.perf_counter()
    params = ModelParams(omega=16, coupling=1600.0)  # G/(omega*eps) = 100
    state = ground_state(params)
    profile = occupations(state)
    limits = strong_coupling_limits(16)

    err_f = float(np.max(np.abs(profile.f - 0.5)))
    assert err_f <= 0.01

    block = four_mode_block(state, 8, 9)
    assert block.nn == pytest.approx(limits.nn, rel=0.01)
    assert block.tilde_tilde == pytest.approx(limits.nn, rel=0.01)
    assert block.n_tilde == pytest.approx(limits.inner, rel=0.01)
    assert block.tilde_n == pytest.approx(limits.inner, rel=0.01)
    assert block.pair_transfer == pytest.approx(limits.inner, rel=0.01)

    worst_c = 0.0
    for k in range(1, 17):
        for kp in range(k + 1, 17):
            c = concurrence_closed(four_mode_block(state, k, kp))
            worst_c = max(worst_c, abs(c - limits.concurrence) / limits.concurrence)
    assert worst_c <= 0.01

    info = mutual_information(block)
    assert info == pytest.approx(limits.mutual_information, rel=0.01)
    entropy = vn_entropy(block.matrix())
    assert entropy == pytest.approx(limits.block_entropy, rel=0.01)

    # monogamy at strong coupling: sum of squared pair concurrences stays <= 1
    c_sq_sum = sum(
        concurrence_closed(four_mode_block(state, 8, kp)) ** 2
        for kp in range(1, 17) if kp != 8
    )
    assert c_sq_sum <= 1.0

    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    report(2, "strong-coupling limits (omega=16, G/(omega*eps)=100)",
           f"|f-1/2| = {err_f:.1e}, C dev = {worst_c:.1e}, "
           f"I = {info:.5f}, S = {entropy:.5f}, {elapsed:.1f}s")


def test_criterion_03_concurrence_oracle_equivalence(grid16):
    worst = 0.0
    count = 0
    for point in grid16:
        for blocks in (point.exact_blocks, point.bcs_blocks, point.pbcs_blocks):
            for block in blocks.values():
                general = concurrence_general(EvenParityState8.from_block(block))
                worst = max(worst, abs(general - concurrence_closed(block)))
                count += 1
    assert count >= 200
    assert worst <= 1e-8
    report(3, "concurrence oracle equivalence",
           f"max |general - closed| = {worst:.2e} over {count} blocks")


def test_criterion_04_bcs_identities(grid16):
    from pairsim import bcs_entropies

    worst_c = worst_fluct = worst_qsp = 0.0
    for point in grid16:
        for block in point.bcs_blocks.values():
            worst_c = max(worst_c, concurrence_closed(block))
        entropies = bcs_entropies(point.bcs)
        assert entropies.e_schmidt * 2.0 == entropies.e_one_body  # exact equality
        quad = quadratic_entropy(OccupationProfile(f=point.bcs.f))
        worst_fluct = max(worst_fluct, abs(quad - 2.0 * entropies.number_fluctuation))
        worst_qsp = max(worst_qsp, entropies.qsp_defect)
    assert worst_c <= 1e-12
    assert worst_fluct <= 1e-12
    assert worst_qsp <= 1e-10
    report(4, "BCS identities",
           f"max C = {worst_c:.1e}, fluctuation dev = {worst_fluct:.1e}, "
           f"qsp defect = {worst_qsp:.1e}")


def test_criterion_05_gap_equation(grid16):
    params = ModelParams(omega=16)
    # independent oracle: the harmonic sum evaluated with exact rationals
    gc_oracle = float(Fraction(1, 2) / sum(Fraction(1, m) for m in range(1, 16, 2)))
    gc = critical_coupling(params).exact
    assert abs(gc - gc_oracle) <= 1e-9

    from pairsim import solve_gap

    strong = solve_gap(ModelParams(omega=16, coupling=1600.0))
    err_strong = abs(strong.delta / (0.5 * 1600.0 * 16.0) - 1.0)
    assert err_strong <= 1e-4

    worst_resid = 0.0
    n_super = 0
    for point in grid16:
        if point.bcs.delta > 0.0:
            n_super += 1
            resid = abs(float(np.sum(0.5 / point.bcs.lam)) - 1.0 / point.g)
            worst_resid = max(worst_resid, resid)
    assert n_super > 0
    assert worst_resid <= 1e-10
    report(5, "gap equation",
           f"G_c = {gc:.12f} (dev {abs(gc - gc_oracle):.1e}), "
           f"Delta/g dev = {err_strong:.1e}, residual = {worst_resid:.1e} "
           f"on {n_super} superconducting points")


def test_criterion_06_relative_entropy_minimum():
    params0 = ModelParams(omega=4)
    gc = critical_coupling(params0).exact
    basis = enumerate_basis(params0)
    worst_identity = 0.0
    worst_increase = math.inf
    for g in np.linspace(0.8, 4.0, 5) * gc:
        state = ground_state(ModelParams(omega=4, coupling=float(g)), basis)
        rep = verify_minimum(state, perturbations=20)
        worst_identity = max(worst_identity, rep.identity_error)
        worst_increase = min(worst_increase, rep.min_increase)
        assert rep.identity_error <= 1e-8
        assert np.all(rep.increases > 0.0)
    report(6, "relative-entropy minimum (omega<=4)",
           f"identity dev = {worst_identity:.1e}, min increase = {worst_increase:.1e}")


def test_criterion_07_full_fock_oracle():
    from pairsim import (
        embed,
        even_pair_block,
        pair_mode_state,
        partial_trace_four_modes,
        partial_trace_modes,
    )

    state = ground_state(ModelParams(omega=4, coupling=1.0))
    psi = embed(state)
    profile = occupations(state)
    worst = 0.0
    worst_odd = 0.0
    for k in range(1, 5):
        rho1 = partial_trace_modes(psi, [2 * k - 2])
        worst = max(worst, abs(rho1[1, 1] - profile.f[k - 1]))
        rho2 = partial_trace_modes(psi, [2 * k - 2, 2 * k - 1])
        sub = rho2[np.ix_([3, 0], [3, 0])]
        worst = max(worst, float(np.max(np.abs(sub - pair_mode_state(profile, k)))))
    for k in range(1, 5):
        for kp in range(k + 1, 5):
            rho16 = partial_trace_four_modes(psi, k, kp)
            block = four_mode_block(state, k, kp)
            worst = max(worst, float(np.max(np.abs(even_pair_block(rho16) - block.matrix()))))
            odd = [i for i in range(16) if bin(i).count("1") % 2 == 1]
            worst_odd = max(worst_odd, float(np.max(np.abs(rho16[np.ix_(odd, odd)]))))
    rho_k_side = partial_trace_modes(psi, [0, 2, 4, 6])
    spectrum = np.sort(np.linalg.eigvalsh(rho_k_side))[::-1]
    amps2 = np.sort(state.amps**2)[::-1]
    worst = max(worst, float(np.max(np.abs(spectrum[: len(amps2)] - amps2))))
    assert worst <= 1e-10
    assert worst_odd <= 1e-12
    report(7, "full-Fock oracle (omega=4)",
           f"max reduced-object dev = {worst:.1e}, odd-parity block = {worst_odd:.1e}")


def test_criterion_08_concurrence_peak(grid16):
    params0 = ModelParams(omega=16)
    gc = critical_coupling(params0).exact
    g = np.array([p.g for p in grid16])
    c_close = np.array([concurrence_closed(p.exact_blocks[(8, 9)]) for p in grid16])
    c_far = np.array([concurrence_closed(p.exact_blocks[(1, 16)]) for p in grid16])

    i = int(np.argmax(c_close))
    assert 0 < i < len(g) - 1  # interior maximum
    assert 0.5 * gc <= g[i] <= 3.0 * gc

    state_10gc = ground_state(ModelParams(omega=16, coupling=10.0 * gc),
                              grid16[0].exact_state.basis)
    c_10gc = concurrence_closed(four_mode_block(state_10gc, 8, 9))
    assert c_10gc < 0.6 * c_close[i]
    assert c_far.max() < 0.25 * c_close[i]
    report(8, "concurrence peak properties",
           f"peak C(8,9) = {c_close[i]:.4f} at G = {g[i]:.4f} "
           f"(G_c = {gc:.4f}); C(10 G_c)/peak = {c_10gc / c_close[i]:.2f}; "
           f"far-pair/close-pair = {c_far.max() / c_close[i]:.2f}")


def test_criterion_09_pbcs_tracks_exact(grid16):
    g = np.array([p.g for p in grid16])
    worst_entropy = 0.0
    min_delta = math.inf
    worst_bound = math.inf
    c_exact, c_pbcs = [], []
    for point in grid16:
        if point.g > 0:
            min_delta = min(min_delta, point.pbcs.delta_var)
        worst_bound = min(worst_bound, point.pbcs.energy - point.exact_state.energy)
        e_exact = one_body_entropy(occupations(point.exact_state))
        e_pbcs = one_body_entropy(occupations(point.pbcs.state))
        worst_entropy = max(worst_entropy, abs(e_pbcs - e_exact))
        ce = concurrence_closed(point.exact_blocks[(8, 9)])
        cp = concurrence_closed(point.pbcs_blocks[(8, 9)])
        c_exact.append(ce)
        c_pbcs.append(cp)
        if ce > 0.02:
            assert cp > 0.0
    assert min_delta > 0.0
    assert worst_entropy <= 0.05 * 32.0
    assert worst_bound >= -1e-9  # variational bound on the projected energy
    peak_ratio = g[int(np.argmax(c_pbcs))] / g[int(np.argmax(c_exact))]
    assert 0.5 <= peak_ratio <= 2.0
    report(9, "projected BCS tracks exact",
           f"min Delta* = {min_delta:.3f}, max one-body entropy dev = "
           f"{worst_entropy:.3f} (cap 1.6), peak-location ratio = {peak_ratio:.2f}")


def test_criterion_10_discord_asymptote_formula(strong16):
    block = four_mode_block(strong16, 8, 9)
    measured = discord(block)
    formula = strong_coupling_limits(16).discord
    rel = abs(measured - formula) / formula
    assert rel <= 0.01, (
        f"measured discord {measured:.6f} vs closed form {formula:.6f} "
        f"({100 * rel:.2f}% off)"
    )
    report(10, "discord asymptote formula",
           f"measured = {measured:.6f}, formula = {formula:.6f}, dev = {100 * rel:.2f}%")


def test_criterion_10_discord_internal_consistency(strong16):
    block = four_mode_block(strong16, 8, 9)
    d = discord(block)
    assert d >= -1e-10
    assert d <= mutual_information(block) + 1e-10
    rep = two_qubit_rep(block)
    thetas = np.linspace(0.0, math.pi / 2, 181)
    values = [conditional_entropy(rep, t) for t in thetas]
    assert values[-1] <= min(values) + 1e-12
    assert values[-1] <= values[0] + 1e-12
    report(10, "discord minimizer consistency",
           f"D = {d:.6f} within [0, I], minimum at theta = pi/2")
