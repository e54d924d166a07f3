"""Coupling-strength scans: CSV output, figures and single-point reports."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import entanglement as ent
from . import exact, meanfield
from .model import ModelParams, PairBasis, enumerate_basis

__all__ = ["ScanConfig", "ScanResult", "default_g_grid", "run_scan", "point_report"]

METHODS = ("exact", "bcs", "pbcs")


def default_g_grid(omega: int, eps: float) -> tuple[float, ...]:
    """Default coupling grid: G = 0 plus 60 log-spaced points on [0.02*eps, 10*omega*eps]."""
    return (0.0, *np.geomspace(0.02 * eps, 10.0 * omega * eps, 60))


def default_level_pairs(omega: int) -> tuple[tuple[int, int], ...]:
    """Closest to the Fermi level, most distant, and next-to-closest.

    Out-of-range or repeated candidates are dropped, so small systems get
    a shorter list (omega = 2 keeps just (1, 2)).
    """
    half = omega // 2
    candidates = ((half, half + 1), (1, omega), (half - 1, half + 2))
    pairs: list[tuple[int, int]] = []
    for k, kp in candidates:
        if 1 <= k < kp <= omega and (k, kp) not in pairs:
            pairs.append((k, kp))
    return tuple(pairs)


@dataclass(frozen=True)
class ScanConfig:
    """Configuration of a coupling scan."""

    omega: int = 16
    pairs: int | None = None
    eps: float = 1.0
    g_values: tuple[float, ...] = ()
    level_pairs: tuple[tuple[int, int], ...] = ()
    report_levels: tuple[int, ...] = ()
    methods: tuple[str, ...] = METHODS
    out_dir: Path = Path("out")
    make_plots: bool = True
    jobs: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "out_dir", Path(self.out_dir))
        if self.pairs is None:
            object.__setattr__(self, "pairs", self.omega // 2)
        if not self.g_values:
            object.__setattr__(self, "g_values", default_g_grid(self.omega, self.eps))
        if not self.level_pairs:
            object.__setattr__(self, "level_pairs", default_level_pairs(self.omega))
        if not self.report_levels:
            levels = (self.omega // 2, 1) if self.omega > 2 else (1,)
            object.__setattr__(self, "report_levels", levels)
        if any(g < 0 for g in self.g_values):
            raise ValueError("couplings must be nonnegative")
        if len(self.g_values) < 2:
            raise ValueError("a scan needs at least 2 coupling values")
        for k, kp in self.level_pairs:
            if k == kp or not (1 <= k <= self.omega and 1 <= kp <= self.omega):
                raise ValueError(f"invalid level pair ({k}, {kp})")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods: {sorted(unknown)}")


@dataclass(frozen=True)
class ScanResult:
    rows: dict[str, list[dict]]           # method -> list of row dicts
    csv_paths: dict[str, Path]
    figure_paths: list[Path] = field(default_factory=list)


def _measures(block) -> dict[str, float]:
    c = ent.concurrence_closed(block)
    return {
        "C": c,
        "Epair": ent.eof_from_concurrence(c).e_pair,
        "I": ent.mutual_information(block),
        "D": ent.discord(block),
    }


def _pair_columns(level_pairs) -> list[str]:
    cols = []
    for k, kp in level_pairs:
        cols += [f"C_{k}_{kp}", f"Epair_{k}_{kp}", f"I_{k}_{kp}", f"D_{k}_{kp}"]
    return cols


def _row_common(config: ScanConfig, g: float) -> dict:
    return {"g_over_eps": g / config.eps}


def _exact_row(config: ScanConfig, basis: PairBasis, g: float) -> dict:
    params = ModelParams(omega=config.omega, pairs=config.pairs, eps=config.eps, coupling=g)
    state = exact.ground_state(params, basis)
    profile = exact.occupations(state)
    row = _row_common(config, g)
    row["energy_over_eps"] = state.energy / config.eps
    row["e_onebody_over_2omega"] = exact.one_body_entropy(profile) / (2.0 * config.omega)
    row["e_schmidt_scaled"] = _scaled_schmidt(config, exact.schmidt_entropy(state))
    row["delta_over_g"] = None
    for lev in config.report_levels:
        row[f"hf_k{lev}"] = ent.binary_entropy(profile.f[lev - 1])
    for k, kp in config.level_pairs:
        block = exact.four_mode_block(state, k, kp)
        for name, value in _measures(block).items():
            row[f"{name}_{k}_{kp}"] = value
    return row


def _bcs_row(config: ScanConfig, g: float) -> dict:
    params = ModelParams(omega=config.omega, pairs=config.pairs, eps=config.eps, coupling=g)
    sol = meanfield.solve_gap(params)
    entropies = meanfield.bcs_entropies(sol)
    row = _row_common(config, g)
    row["energy_over_eps"] = meanfield.bcs_energy(params, sol) / config.eps
    row["e_onebody_over_2omega"] = entropies.e_one_body / (2.0 * config.omega)
    row["e_schmidt_scaled"] = _scaled_schmidt(config, entropies.e_schmidt)
    row["delta_over_g"] = sol.delta / (0.5 * g * config.omega) if g > 0 else None
    for lev in config.report_levels:
        row[f"hf_k{lev}"] = ent.binary_entropy(sol.f[lev - 1])
    for k, kp in config.level_pairs:
        block = meanfield.bcs_four_mode(sol, k, kp)
        for name, value in _measures(block).items():
            row[f"{name}_{k}_{kp}"] = value
    return row


def _pbcs_row(config: ScanConfig, basis: PairBasis, g: float) -> dict:
    params = ModelParams(omega=config.omega, pairs=config.pairs, eps=config.eps, coupling=g)
    sol = meanfield.pbcs_optimize(params, basis)
    profile = exact.occupations(sol.state)
    row = _row_common(config, g)
    row["energy_over_eps"] = sol.energy / config.eps
    row["e_onebody_over_2omega"] = exact.one_body_entropy(profile) / (2.0 * config.omega)
    row["e_schmidt_scaled"] = _scaled_schmidt(config, exact.schmidt_entropy(sol.state))
    row["delta_over_g"] = sol.delta_var / (0.5 * g * config.omega) if g > 0 else None
    for lev in config.report_levels:
        row[f"hf_k{lev}"] = ent.binary_entropy(profile.f[lev - 1])
    for k, kp in config.level_pairs:
        block = exact.four_mode_block(sol.state, k, kp)
        for name, value in _measures(block).items():
            row[f"{name}_{k}_{kp}"] = value
    return row


def _scaled_schmidt(config: ScanConfig, e_schmidt: float) -> float:
    cap = math.log2(math.comb(config.omega, config.pairs))
    return e_schmidt / cap if cap > 0 else 0.0


def _columns(config: ScanConfig) -> list[str]:
    return (
        ["g_over_eps", "energy_over_eps", "e_onebody_over_2omega",
         "e_schmidt_scaled", "delta_over_g"]
        + [f"hf_k{lev}" for lev in config.report_levels]
        + _pair_columns(config.level_pairs)
    )


def _fmt(value) -> str:
    if value is None:
        return ""
    return "%.12g" % (float(value) + 0.0)


def _write_csv(path: Path, columns: list[str], rows: list[dict]) -> None:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(row.get(c)) for c in columns))
    path.write_text("\n".join(lines) + "\n")


def run_scan(config: ScanConfig) -> ScanResult:
    """Run the scan and write one CSV per method (plus figures if enabled).

    Rows are computed with an ordered parallel map over coupling values, so
    serial and parallel runs produce byte-identical files.
    """
    config.out_dir.mkdir(parents=True, exist_ok=True)
    basis = None
    if {"exact", "pbcs"} & set(config.methods):
        basis = enumerate_basis(
            ModelParams(omega=config.omega, pairs=config.pairs, eps=config.eps)
        )

    workers = {
        "exact": lambda g: _exact_row(config, basis, g),
        "bcs": lambda g: _bcs_row(config, g),
        "pbcs": lambda g: _pbcs_row(config, basis, g),
    }
    rows: dict[str, list[dict]] = {}
    for method in config.methods:
        if config.jobs > 1:
            with ThreadPoolExecutor(max_workers=config.jobs) as pool:
                rows[method] = list(pool.map(workers[method], config.g_values))
        else:
            rows[method] = [workers[method](g) for g in config.g_values]

    columns = _columns(config)
    csv_paths = {}
    for method in config.methods:
        path = config.out_dir / f"scan_{method}.csv"
        _write_csv(path, columns, rows[method])
        csv_paths[method] = path

    figures = _write_figures(config, rows) if config.make_plots else []
    return ScanResult(rows=rows, csv_paths=csv_paths, figure_paths=figures)


_LINE_STYLE = {"exact": "-", "bcs": "--", "pbcs": ":"}


def _write_figures(config: ScanConfig, rows: dict[str, list[dict]]) -> list[Path]:
    """Line charts in SVG: entropies, gap, per-level entropies, pair measures."""
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "pairsim"
    import matplotlib.pyplot as plt

    def series(method: str, column: str):
        g = [r["g_over_eps"] for r in rows[method]]
        v = [r.get(column) for r in rows[method]]
        pairs = [(x, y) for x, y in zip(g, v) if y is not None]
        return [p[0] for p in pairs], [p[1] for p in pairs]

    def save(fig, name: str) -> Path:
        path = config.out_dir / name
        fig.savefig(path, metadata={"Date": None})
        plt.close(fig)
        return path

    out: list[Path] = []
    have = set(rows)
    k_close, kp_close = config.level_pairs[0]
    main_pair = f"{k_close}_{kp_close}"

    # 1: intensive one-body entropy and scaled gap
    fig, ax = plt.subplots(figsize=(5, 3.4))
    for m in ("exact", "bcs"):
        if m in have:
            ax.plot(*series(m, "e_onebody_over_2omega"), _LINE_STYLE[m], label=f"E/(2Ω) {m}")
    if "bcs" in have:
        ax.plot(*series("bcs", "delta_over_g"), "-.", label="Δ/g BCS")
    _style(ax, config, "entropy / scaled gap")
    out.append(save(fig, "fig1_onebody_entropy_gap.svg"))

    # 2: single-mode entropies for the requested levels
    fig, ax = plt.subplots(figsize=(5, 3.4))
    for lev in config.report_levels:
        for m in ("exact", "bcs"):
            if m in have:
                ax.plot(*series(m, f"hf_k{lev}"), _LINE_STYLE[m], label=f"h(f_{lev}) {m}")
    _style(ax, config, "single-mode entropy")
    out.append(save(fig, "fig2_single_mode_entropy.svg"))

    # 3: one-body vs scaled Schmidt entropy (exact)
    if "exact" in have:
        fig, ax = plt.subplots(figsize=(5, 3.4))
        ax.plot(*series("exact", "e_onebody_over_2omega"), "-", label="E/(2Ω)")
        ax.plot(*series("exact", "e_schmidt_scaled"), "--", label="E_sch/max")
        _style(ax, config, "scaled entropies")
        out.append(save(fig, "fig3_schmidt_vs_onebody.svg"))

    # 4: pair-pair entanglement of formation, all requested pairs
    if "exact" in have:
        fig, ax = plt.subplots(figsize=(5, 3.4))
        for k, kp in config.level_pairs:
            ax.plot(*series("exact", f"Epair_{k}_{kp}"), "-", label=f"E_({k},{kp})")
        _style(ax, config, "pair entanglement of formation")
        out.append(save(fig, "fig4_pair_eof.svg"))

    # 5: mutual information and discord for closest/most distant pairs
    fig, ax = plt.subplots(figsize=(5, 3.4))
    for k, kp in config.level_pairs[:2]:
        for m in ("exact", "bcs"):
            if m in have:
                ax.plot(*series(m, f"I_{k}_{kp}"), _LINE_STYLE[m], label=f"I_({k},{kp}) {m}")
                ax.plot(*series(m, f"D_{k}_{kp}"), _LINE_STYLE[m], alpha=0.6,
                        label=f"D_({k},{kp}) {m}")
    _style(ax, config, "mutual information / discord")
    out.append(save(fig, "fig5_mutual_information_discord.svg"))

    # 6: projected BCS vs exact
    if {"exact", "pbcs"} <= have:
        fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(5, 5.6), sharex=True)
        ax1.plot(*series("exact", f"Epair_{main_pair}"), "-", label="exact")
        ax1.plot(*series("pbcs", f"Epair_{main_pair}"), ":", label="pbcs")
        ax1.set_ylabel(f"E_({k_close},{kp_close})")
        ax1.legend(fontsize=7)
        ax2.plot(*series("exact", "e_onebody_over_2omega"), "-", label="exact")
        ax2.plot(*series("pbcs", "e_onebody_over_2omega"), ":", label="pbcs")
        _style(ax2, config, "E/(2Ω)")
        out.append(save(fig, "fig6_pbcs_vs_exact.svg"))
    return out


def _style(ax, config: ScanConfig, ylabel: str) -> None:
    positive = [g for g in config.g_values if g > 0]
    if positive and max(config.g_values) / min(positive) > 50:
        ax.set_xscale("log")
    ax.set_xlabel("G/ε")
    ax.set_ylabel(ylabel)
    ax.legend(fontsize=7)


def point_report(params: ModelParams, level_pairs=None, methods: tuple[str, ...] = METHODS) -> str:
    """Evaluate every measure at a single coupling and format a labeled table."""
    level_pairs = tuple(level_pairs) if level_pairs else default_level_pairs(params.omega)
    config = ScanConfig(
        omega=params.omega, pairs=params.pairs, eps=params.eps,
        g_values=(0.0, params.coupling), level_pairs=level_pairs, methods=methods,
        make_plots=False,
    )
    lines = [
        f"G/eps = {_fmt(params.coupling / params.eps)}   omega = {params.omega}   "
        f"pairs = {params.pairs}"
    ]
    basis = None
    if {"exact", "pbcs"} & set(methods):
        basis = enumerate_basis(params)
    for method in methods:
        if method == "exact":
            row = _exact_row(config, basis, params.coupling)
        elif method == "bcs":
            row = _bcs_row(config, params.coupling)
        else:
            row = _pbcs_row(config, basis, params.coupling)
        lines.append(f"[{method}]")
        lines.append(f"  energy/eps            = {_fmt(row['energy_over_eps'])}")
        lines.append(f"  E_onebody/(2*omega)   = {_fmt(row['e_onebody_over_2omega'])}")
        lines.append(f"  E_schmidt (scaled)    = {_fmt(row['e_schmidt_scaled'])}")
        if row["delta_over_g"] is not None:
            lines.append(f"  delta/g               = {_fmt(row['delta_over_g'])}")
        for lev in config.report_levels:
            lines.append(f"  h(f_{lev:<2d})              = {_fmt(row[f'hf_k{lev}'])}")
        for k, kp in level_pairs:
            lines.append(
                f"  pair ({k},{kp}): C = {_fmt(row[f'C_{k}_{kp}'])}  "
                f"E_pair = {_fmt(row[f'Epair_{k}_{kp}'])}  "
                f"I = {_fmt(row[f'I_{k}_{kp}'])}  "
                f"D = {_fmt(row[f'D_{k}_{kp}'])}"
            )
    return "\n".join(lines)
