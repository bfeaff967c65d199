"""Artifact emission: delimited curve data, threshold summaries, figures.

All numeric output is printed with 6 significant digits.  CSV files start
with a single version comment line; everything after it (the body) is
byte-reproducible for a fixed configuration and master seed.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from . import __version__
from .bsm import Protocol
from .threshold import (
    SweepResult,
    ThresholdResult,
    photons_per_resource_state,
)

_CSV_HEADER = (
    "architecture,protocol,n,m,j,convention,d,eta,ler,ci_low,ci_high,samples,seed"
)


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def sweep_tag(result: SweepResult) -> str:
    cfg = result.config
    tag = f"{cfg.architecture.value}-{cfg.protocol.value}-n{cfg.n}-m{cfg.m}"
    if cfg.protocol is Protocol.ACTIVE:
        tag += f"-j{cfg.j}"
    return tag


def curves_csv_lines(results: Sequence[SweepResult]) -> list[str]:
    lines = [_CSV_HEADER]
    for result in results:
        cfg = result.config
        for curve in result.curves:
            for eta, rate, lo, hi, seed in zip(
                curve.etas, curve.rates, curve.ci_low, curve.ci_high, curve.point_seeds
            ):
                lines.append(
                    ",".join(
                        [
                            cfg.architecture.value,
                            cfg.protocol.value,
                            str(cfg.n),
                            str(cfg.m),
                            str(cfg.j if cfg.protocol is Protocol.ACTIVE else 0),
                            cfg.resolved_convention().value,
                            str(curve.distance),
                            _fmt(eta),
                            _fmt(rate),
                            _fmt(lo),
                            _fmt(hi),
                            str(curve.samples),
                            str(seed),
                        ]
                    )
                )
    return lines


def write_curves_csv(path: Path, results: Sequence[SweepResult]) -> None:
    lines = [f"# ghzfusion {__version__}"] + curves_csv_lines(results)
    path.write_text("\n".join(lines) + "\n")


def threshold_summary(results: Sequence[ThresholdResult]) -> dict:
    entries = []
    for res in results:
        cfg = res.sweep.config
        entries.append(
            {
                "architecture": cfg.architecture.value,
                "protocol": cfg.protocol.value,
                "n": cfg.n,
                "m": cfg.m,
                "j": cfg.j if cfg.protocol is Protocol.ACTIVE else 0,
                "convention": cfg.resolved_convention().value,
                "eta_c": round(res.crossing.eta_c, 6),
                "sigma": round(res.crossing.sigma, 6),
                "ci_low": round(res.crossing.ci_low, 6),
                "ci_high": round(res.crossing.ci_high, 6),
                "photons_per_resource_state": photons_per_resource_state(
                    cfg.architecture, cfg.n, cfg.m
                ),
                "distances": list(cfg.distances),
                "samples": cfg.samples,
                "master_seed": cfg.master_seed,
                "recentered": res.recentered,
            }
        )
    return {"version": __version__, "thresholds": entries}


def write_threshold_json(path: Path, results: Sequence[ThresholdResult]) -> None:
    path.write_text(json.dumps(threshold_summary(results), indent=2) + "\n")


def write_sweep_figure(path: Path, result: SweepResult) -> None:
    """Logical error rate vs loss rate, one labelled curve per distance."""
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    for curve in result.curves:
        yerr = [
            [r - lo for r, lo in zip(curve.rates, curve.ci_low)],
            [hi - r for r, hi in zip(curve.rates, curve.ci_high)],
        ]
        line = ax.errorbar(
            curve.etas,
            curve.rates,
            yerr=yerr,
            marker="o",
            markersize=3,
            capsize=2,
            label=f"d = {curve.distance}",
        )
        line.lines[0].set_gid(f"curve-d{curve.distance}")
    ax.set_xlabel("single-photon loss rate")
    ax.set_ylabel("logical error rate")
    ax.set_title(sweep_tag(result))
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


_STYLE = {
    ("cyclic", "static"): dict(marker="o", color="tab:blue"),
    ("cyclic", "active"): dict(marker="s", color="tab:red"),
    ("minimal", "static"): dict(marker="^", color="tab:green"),
    ("minimal", "active"): dict(marker="v", color="tab:orange"),
}


def write_threshold_figure(path: Path, results: Sequence[ThresholdResult]) -> None:
    """Loss threshold against photons per resource state, per family."""
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    families: dict[tuple[str, str], list[tuple[int, float]]] = {}
    for res in results:
        cfg = res.sweep.config
        key = (cfg.architecture.value, cfg.protocol.value)
        photons = photons_per_resource_state(cfg.architecture, cfg.n, cfg.m)
        families.setdefault(key, []).append((photons, res.crossing.eta_c))
    for key, points in sorted(families.items()):
        points.sort()
        xs, ys = zip(*points)
        line = ax.plot(
            xs, ys, linestyle="-", label=f"{key[0]} / {key[1]}", **_STYLE[key]
        )[0]
        line.set_gid(f"family-{key[0]}-{key[1]}")
    ax.set_xlabel("photons per resource state")
    ax.set_ylabel("loss threshold")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def emit_results(
    out_dir: Path,
    sweeps: Sequence[SweepResult],
    thresholds: Sequence[ThresholdResult] = (),
) -> list[Path]:
    """Write every artifact for the given runs; returns the created paths."""
    out_dir.mkdir(parents=True, exist_ok=True)
    created = []
    csv_path = out_dir / "curves.csv"
    write_curves_csv(csv_path, sweeps)
    created.append(csv_path)
    for result in sweeps:
        fig_path = out_dir / f"sweep_{sweep_tag(result)}.svg"
        write_sweep_figure(fig_path, result)
        created.append(fig_path)
    if thresholds:
        json_path = out_dir / "thresholds.json"
        write_threshold_json(json_path, thresholds)
        created.append(json_path)
        scatter_path = out_dir / "thresholds_vs_photons.svg"
        write_threshold_figure(scatter_path, thresholds)
        created.append(scatter_path)
    return created
