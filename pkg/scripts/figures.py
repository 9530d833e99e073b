"""Regenerate the data behind each figure as CSV/JSON files.

    python3 scripts/figures.py --out results            # every figure
    python3 scripts/figures.py --figure 2 5 --quick     # coarse grids

Each figure has a dataclass config; ``--quick`` swaps in coarse grids for
smoke runs.  Files land in ``--out`` as ``figNN_<name>.csv`` plus a
``figNN_<name>.json`` sidecar holding the config and summary numbers.
"""

from __future__ import annotations

import argparse
import csv
import json
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from dkpwell.bound_states import find_critical, track_spectrum
from dkpwell.cli import fmt
from dkpwell.scattering import PhysicalSetup, find_resonances, sweep, woods_saxon
from dkpwell.square_well import SquareWellSetup, bound_states_square


@dataclass(frozen=True)
class ProfileConfig:
    a: float = 2.0
    eV0: float = 1.0
    shapes: tuple[float, ...] = (1 / 3, 1 / 100)
    z_range: tuple[float, float] = (-5.0, 5.0)
    steps: int = 1001


@dataclass(frozen=True)
class DepthSweepConfig:
    a: float = 2.0
    r: float = 0.0003
    E: float = -2.0
    depth_range: tuple[float, float] = (0.0, 10.0)
    steps: int = 4000


@dataclass(frozen=True)
class EnergySweepConfig:
    a: float = 2.0
    r: float = 0.0003
    eV0: float = 4.0
    energy_range: tuple[float, float] = (-10.0, 10.0)
    steps: int = 8000


@dataclass(frozen=True)
class EigenvalueConfig:
    a: float = 4.0
    r: float = 0.0003
    depth_range: tuple[float, float] = (0.0, 4.0)
    steps: int = 81
    grid_size: int = 2000
    resonance_sweep: EnergySweepConfig = field(
        default_factory=lambda: EnergySweepConfig(a=4.0, energy_range=(-2.999, -1.001)))


@dataclass(frozen=True)
class SupercriticalConfig:
    a: float = 1.0
    r: float = 0.00015
    depth_range: tuple[float, float] = (1.99, 2.1)
    steps: int = 56
    band_grid: int = 400
    bracket: tuple[float, float] = (1.9, 2.1)


@dataclass(frozen=True)
class CriticalCurveConfig:
    a: float = 4.0
    shapes: tuple[float, ...] = (0.000015, 0.00005, 0.0001, 0.0002, 0.0003)
    bracket: tuple[float, float] = (1.9, 2.1)
    depth_steps: int = 200


def write_csv(path: Path, header: list[str], rows) -> None:
    with path.open("w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(header)
        for row in rows:
            out.writerow([fmt(x) if isinstance(x, float) else x for x in row])


def write_json(path: Path, config, summary: dict) -> None:
    path.write_text(json.dumps({"config": asdict(config), "summary": summary}, indent=2) + "\n")


def profile(cfg: ProfileConfig, out: Path, stem: str) -> dict:
    zs = np.linspace(*cfg.z_range, cfg.steps)
    rows = [(float(z), *(float(woods_saxon(z, cfg.a, r, cfg.eV0)) for r in cfg.shapes))
            for z in zs]
    write_csv(out / f"{stem}.csv", ["z"] + [f"V_r={r:.6g}" for r in cfg.shapes], rows)
    return {"points": len(rows)}


def depth_sweep(cfg: DepthSweepConfig, out: Path, stem: str) -> dict:
    template = PhysicalSetup(cfg.a, cfg.r, 0.0, cfg.E)
    rows = sweep(template, "eV0", *cfg.depth_range, cfg.steps)
    write_csv(out / f"{stem}.csv", ["eV0", "R", "T", "flags"],
              [(r.x, r.R, r.T, "|".join(r.flags)) for r in rows])
    peaks = find_resonances([r.x for r in rows], [r.T for r in rows])
    return {"resonances": [[p.x, p.T] for p in peaks]}


def energy_sweep(cfg: EnergySweepConfig, out: Path | None, stem: str) -> dict:
    template = PhysicalSetup(cfg.a, cfg.r, cfg.eV0, 2.0)
    rows = sweep(template, "E", *cfg.energy_range, cfg.steps)
    if out is not None:
        write_csv(out / f"{stem}.csv", ["E", "R", "T", "flags"],
                  [(r.x, r.R, r.T, "|".join(r.flags)) for r in rows])
    xs, Ts = [r.x for r in rows], [r.T for r in rows]
    upper = [p for p in find_resonances(xs, Ts) if p.x > 1]
    lower = [p for p in find_resonances(xs, Ts) if p.x < -1]
    return {"resonances_above_m": len(upper), "resonances_below_minus_m": len(lower),
            "peaks": [[p.x, p.T] for p in upper + lower]}


def eigenvalues(cfg: EigenvalueConfig, out: Path, stem: str) -> dict:
    curve = track_spectrum(PhysicalSetup(cfg.a, cfg.r, 0.0, 0.0), *cfg.depth_range, cfg.steps,
                           grid_size=cfg.grid_size)
    rows = []
    for V, idx, root, flags in curve.rows():
        square = bound_states_square(SquareWellSetup(cfg.a, float(V)))
        E_sq = square[idx][0] if idx < len(square) else float("nan")
        rows.append((float(V), idx, root.E, root.parity, E_sq, "|".join(flags)))
    write_csv(out / f"{stem}.csv", ["eV0", "root_index", "E", "parity", "E_square", "flags"],
              rows)
    dived = energy_sweep(cfg.resonance_sweep, None, stem)
    return {"roots": len(rows), "dived_states_at_eV0": cfg.resonance_sweep.eV0,
            "dived_energies": [p[0] for p in dived["peaks"]]}


def supercritical(cfg: SupercriticalConfig, out: Path, stem: str) -> dict:
    template = PhysicalSetup(cfg.a, cfg.r, 0.0, 0.0)
    curve = track_spectrum(template, *cfg.depth_range, cfg.steps)
    write_csv(out / f"{stem}.csv", ["eV0", "root_index", "E", "parity", "flags"],
              [(float(V), i, root.E, root.parity, "|".join(fl))
               for V, i, root, fl in curve.rows()])
    merge = find_critical(template, cfg.bracket, band_grid=cfg.band_grid)
    edge = find_critical(template, cfg.bracket, reading="threshold")
    return {"coalescence": merge.record(), "threshold": edge.record()}


def critical_curve(cfg: CriticalCurveConfig, out: Path, stem: str) -> dict:
    rows = []
    for r in cfg.shapes:
        template = PhysicalSetup(cfg.a, r, 0.0, 0.0)
        merge = find_critical(template, cfg.bracket, depth_steps=cfg.depth_steps)
        edge = find_critical(template, cfg.bracket, reading="threshold")
        rows.append((r, merge.eV0_cr, merge.E_cr, edge.eV0_cr))
    write_csv(out / f"{stem}.csv", ["r", "eV0_cr", "E_cr", "eV0_cr_threshold"], rows)
    rising = lambda xs: all(x < y for x, y in zip(xs, xs[1:]))
    return {"eV0_cr_rising": rising([row[1] for row in rows]),
            "E_cr_rising": rising([row[2] for row in rows])}


FIGURES = {
    1: ("ws_profile", profile, ProfileConfig()),
    2: ("T_vs_depth_a2", depth_sweep, DepthSweepConfig(a=2.0)),
    3: ("T_vs_depth_a4", depth_sweep, DepthSweepConfig(a=4.0)),
    4: ("T_vs_energy_a2", energy_sweep, EnergySweepConfig(a=2.0)),
    5: ("T_vs_energy_a4", energy_sweep, EnergySweepConfig(a=4.0)),
    6: ("eigenvalues_a4", eigenvalues, EigenvalueConfig()),
    7: ("spectrum_a1", supercritical, SupercriticalConfig()),
    8: ("spectrum_a4", supercritical, SupercriticalConfig(a=4.0, r=0.0003)),
    9: ("critical_curve_a4", critical_curve, CriticalCurveConfig()),
}
# 10 and 11 plot other columns of the same critical-curve table
ALIASES = {10: 9, 11: 9}


def quick(config):
    """Coarse variant of a config for smoke runs."""
    if isinstance(config, EigenvalueConfig):
        return replace(config, steps=9, grid_size=400,
                       resonance_sweep=replace(config.resonance_sweep, steps=400))
    if isinstance(config, SupercriticalConfig):
        return replace(config, steps=6, band_grid=200)
    if isinstance(config, CriticalCurveConfig):
        return replace(config, shapes=config.shapes[::2], depth_steps=20)
    return replace(config, steps=min(config.steps, 200))


def run(figure: int, out: Path, coarse: bool = False) -> dict:
    name, fn, config = FIGURES[ALIASES.get(figure, figure)]
    if coarse:
        config = quick(config)
    stem = f"fig{ALIASES.get(figure, figure):02d}_{name}"
    t0 = time.perf_counter()
    summary = fn(config, out, stem)
    summary["seconds"] = round(time.perf_counter() - t0, 2)
    write_json(out / f"{stem}.json", config, summary)
    return summary


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--figure", type=int, nargs="+", default=sorted(FIGURES),
                        choices=sorted(FIGURES) + sorted(ALIASES))
    parser.add_argument("--out", type=Path, default=Path("results"))
    parser.add_argument("--quick", action="store_true")
    args = parser.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)
    done = set()
    for fig in args.figure:
        key = ALIASES.get(fig, fig)
        if key in done:
            continue
        done.add(key)
        summary = run(fig, args.out, args.quick)
        print(f"fig {key}: {json.dumps(summary)[:200]}")


if __name__ == "__main__":
    main()
