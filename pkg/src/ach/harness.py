"""Batch experiments: nested Monte Carlo over mappings and initial conditions.

A campaign walks a grid of (topology point, F) cells.  For every cell it
draws mapping realizations; for every mapping it runs the dynamics from
runs_per_mapping independent random initial populations and records the
fraction of runs that froze at the known minimum cost (0 for teacher
mappings, oracle-computed for random ones).  P_m is the mean of those
per-mapping fractions and its standard error is taken between mappings, not
over pooled runs, because runs sharing a mapping are correlated.

Every random stream is derived from the master seed through
numpy.random.SeedSequence([master, gridpoint, index, role, run]) with role
codes 0 = mapping, 1 = graph, 2 = run; streams are keyed by indices, never by
execution order, so results are identical under any worker count.

Results are emitted as a fixed-column CSV plus JSON manifest / fit files; see
write_results.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
from scipy.stats import linregress

from . import __version__ as _version
from .engine import run_to_absorption
from .oracle import exhaustive_min_cost
from .perceptron import (RANDOM_OUTPUT, TEACHER_SEPARABLE,
                         generate_random_mapping, generate_teacher_mapping)
from .topology import (LATTICE, RANDOM_REGULAR, component_labels,
                       random_regular_graph, square_lattice)

ROLE_MAPPING = 0
ROLE_GRAPH = 1
ROLE_RUN = 2

CSV_COLUMNS = ["topology_kind", "N", "L_or_C", "F", "M", "mapping_kind",
               "realizations", "runs_per_mapping", "pm", "pm_stderr",
               "mean_T", "mean_T_over_N", "t_stderr", "non_absorbed"]

SEED_SCHEME = ("numpy.random.SeedSequence([master_seed, gridpoint_index, "
               "mapping_index (or graph pool index), role, run_index]) with "
               "role 0=mapping, 1=graph, 2=run")


class ConfigError(ValueError):
    """Invalid campaign configuration (CLI exit code 2)."""


@dataclass
class CampaignConfig:
    f_list: list
    topology: str = LATTICE            # "lattice" | "random-regular"
    l_list: Optional[list] = None      # lattice sizes
    n: Optional[int] = None            # node count for random-regular
    c_list: Optional[list] = None      # connectivities for random-regular
    graphs_per_point: int = 1000
    mapping_kind: str = "teacher"      # "teacher" | "random"
    m_factor: int = 2                  # M = m_factor * F
    runs_per_mapping: int = 100
    realizations_min: int = 500
    realizations_max: int = 1_000_000
    pm_sem_target: float = 0.01        # stop adding mappings once reached
    master_seed: int = 0
    out_dir: Optional[str] = None
    max_events: int = 10**9
    threads: int = 1
    oracle_f_limit: int = 25

    def validate(self) -> None:
        if not self.f_list:
            raise ConfigError("f_list is empty")
        for f in self.f_list:
            if f < 1 or f % 2 == 0:
                raise ConfigError(f"F values must be positive odd, got {f}")
        if self.topology == LATTICE:
            if not self.l_list:
                raise ConfigError("lattice topology needs l_list")
            for l in self.l_list:
                if l < 3:
                    raise ConfigError(f"lattice size must be >= 3, got {l}")
        elif self.topology == RANDOM_REGULAR:
            if not self.n or not self.c_list:
                raise ConfigError("random-regular topology needs n and c_list")
            for c in self.c_list:
                if not 1 <= c < self.n:
                    raise ConfigError(f"need 1 <= C < N, got C={c}, N={self.n}")
                if (self.n * c) % 2:
                    raise ConfigError(f"N*C must be even, got N={self.n}, C={c}")
            if self.graphs_per_point < 1:
                raise ConfigError("graphs_per_point must be >= 1")
        else:
            raise ConfigError(f"unknown topology {self.topology!r}")
        if self.mapping_kind not in ("teacher", "random"):
            raise ConfigError(f"mapping_kind must be teacher|random, "
                              f"got {self.mapping_kind!r}")
        if self.mapping_kind == "random":
            for f in self.f_list:
                if f > self.oracle_f_limit:
                    raise ConfigError(
                        f"random mappings need the exhaustive oracle; F={f} "
                        f"exceeds oracle_f_limit={self.oracle_f_limit}")
        if self.m_factor < 0:
            raise ConfigError("m_factor must be non-negative")
        if self.runs_per_mapping < 1:
            raise ConfigError("runs_per_mapping must be >= 1")
        if not 1 <= self.realizations_min <= self.realizations_max:
            raise ConfigError("need 1 <= realizations_min <= realizations_max")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.max_events < 1:
            raise ConfigError("max_events must be >= 1")


@dataclass(frozen=True)
class GridPoint:
    index: int
    topology_kind: str
    n: int
    l_or_c: int
    f: int
    m: int


@dataclass
class RowStats:
    topology_kind: str
    n: int
    l_or_c: int
    f: int
    m: int
    mapping_kind: str
    realizations: int
    runs_per_mapping: int
    pm: float
    pm_stderr: float
    mean_t: float
    mean_t_over_n: float
    t_stderr: float
    non_absorbed: int


@dataclass
class CampaignResult:
    rows: list
    manifest: dict
    diagnostics: list = field(default_factory=list)


@dataclass(frozen=True)
class FitResult:
    model: str
    a: float
    b: float
    residual_norm: float
    points_used: int
    r_squared: float


def grid_points(cfg: CampaignConfig) -> list:
    pts = []
    if cfg.topology == LATTICE:
        for l in cfg.l_list:
            for f in cfg.f_list:
                pts.append(GridPoint(len(pts), LATTICE, l * l, l, f,
                                     cfg.m_factor * f))
    else:
        for c in cfg.c_list:
            for f in cfg.f_list:
                pts.append(GridPoint(len(pts), RANDOM_REGULAR, cfg.n, c, f,
                                     cfg.m_factor * f))
    return pts


def _seed(cfg, gp_index, idx, role, run):
    return np.random.default_rng(np.random.SeedSequence(
        [cfg.master_seed, gp_index, idx, role, run]))


def _one_mapping(cfg: CampaignConfig, gp: GridPoint, lattice_graph, mi: int):
    """Simulate one mapping realization; returns its summary tuple."""
    map_rng = _seed(cfg, gp.index, mi, ROLE_MAPPING, 0)
    if cfg.mapping_kind == "teacher":
        mapping, _ = generate_teacher_mapping(gp.f, gp.m, map_rng)
        kmin = 0
    else:
        mapping = generate_random_mapping(gp.f, gp.m, map_rng)
        kmin = exhaustive_min_cost(mapping, cfg.oracle_f_limit).min_cost
    if lattice_graph is not None:
        graph = lattice_graph
        ncomp = 1
    else:
        pool_idx = mi % cfg.graphs_per_point
        graph = random_regular_graph(
            gp.n, gp.l_or_c, _seed(cfg, gp.index, pool_idx, ROLE_GRAPH, 0))
        ncomp = int(component_labels(graph).max()) + 1
    succ = 0
    non_absorbed = 0
    t_over_n = []
    events = 0
    inter = 0
    for ri in range(cfg.runs_per_mapping):
        res = run_to_absorption(graph, mapping, kmin,
                                _seed(cfg, gp.index, mi, ROLE_RUN, ri),
                                max_events=cfg.max_events)
        succ += res.success
        events += res.event_count
        inter += res.interaction_count
        if res.absorbed:
            t_over_n.append(res.relaxation_time / gp.n)
        else:
            non_absorbed += 1
    return (succ / cfg.runs_per_mapping, t_over_n, non_absorbed,
            events, inter, ncomp)


def estimate_pm(success_fractions) -> tuple:
    """Mean and between-mapping standard error of per-mapping fractions."""
    fr = np.asarray(success_fractions, dtype=float)
    if fr.size == 0:
        raise ValueError("need at least one success fraction")
    if ((fr < 0) | (fr > 1)).any():
        raise ValueError("success fractions must lie in [0, 1]")
    sem = float(fr.std(ddof=1) / np.sqrt(fr.size)) if fr.size > 1 else 0.0
    return float(fr.mean()), sem


def _aggregate(cfg, gp, per_map) -> tuple:
    fracs = [p[0] for p in per_map]
    pm, pm_sem = estimate_pm(fracs)
    tn_all = np.concatenate([p[1] for p in per_map]) if per_map else np.array([])
    map_means = np.array([np.mean(p[1]) for p in per_map if p[1]])
    if tn_all.size:
        mean_tn = float(tn_all.mean())
        mean_t = mean_tn * gp.n
        t_sem = (float(map_means.std(ddof=1) / np.sqrt(map_means.size))
                 if map_means.size > 1 else 0.0)
    else:
        mean_tn = mean_t = t_sem = float("nan")
    non_absorbed = sum(p[2] for p in per_map)
    total_runs = len(per_map) * cfg.runs_per_mapping
    row = RowStats(
        gp.topology_kind, gp.n, gp.l_or_c, gp.f, gp.m,
        TEACHER_SEPARABLE if cfg.mapping_kind == "teacher" else RANDOM_OUTPUT,
        len(per_map), cfg.runs_per_mapping, pm, pm_sem,
        mean_t, mean_tn, t_sem, non_absorbed)
    diag = {
        "gridpoint": gp.index,
        "median_t_over_n": float(np.median(tn_all)) if tn_all.size else None,
        "p90_t_over_n": float(np.percentile(tn_all, 90)) if tn_all.size else None,
        "mean_events_per_run": sum(p[3] for p in per_map) / total_runs,
        "mean_interactions_per_run": sum(p[4] for p in per_map) / total_runs,
        "disconnected_graph_fraction":
            sum(p[5] > 1 for p in per_map) / len(per_map),
    }
    return row, diag


def run_campaign(cfg: CampaignConfig, log=None) -> CampaignResult:
    """Execute the whole grid; deterministic for a given config.

    Mapping realizations are added in fixed blocks until the between-mapping
    SEM of P_m reaches pm_sem_target, but never fewer than realizations_min
    nor more than realizations_max.  Block boundaries are fixed, so the
    adaptive stopping rule is scheduling-independent.  On KeyboardInterrupt
    partial results are flushed (when out_dir is set) with
    manifest["interrupted"] = true before re-raising.
    """
    cfg.validate()
    t_start = time.time()
    result = CampaignResult([], _manifest(cfg), [])
    pool = ThreadPoolExecutor(cfg.threads) if cfg.threads > 1 else None
    try:
        for gp in grid_points(cfg):
            lattice_graph = square_lattice(gp.l_or_c) \
                if gp.topology_kind == LATTICE else None
            per_map = []
            while True:
                lo = len(per_map)
                hi = min(max(cfg.realizations_min, lo + 50),
                         cfg.realizations_max)
                work = [(cfg, gp, lattice_graph, mi) for mi in range(lo, hi)]
                if pool is not None:
                    per_map.extend(pool.map(lambda w: _one_mapping(*w), work))
                else:
                    per_map.extend(_one_mapping(*w) for w in work)
                _, sem = estimate_pm([p[0] for p in per_map])
                if len(per_map) >= cfg.realizations_max or (
                        len(per_map) >= cfg.realizations_min
                        and sem <= cfg.pm_sem_target):
                    break
            row, diag = _aggregate(cfg, gp, per_map)
            result.rows.append(row)
            result.diagnostics.append(diag)
            if log is not None:
                print(f"[{time.time() - t_start:8.1f}s] {gp.topology_kind} "
                      f"N={gp.n} {'L' if gp.topology_kind == LATTICE else 'C'}"
                      f"={gp.l_or_c} F={gp.f}: Pm={row.pm:.4f}"
                      f"+-{row.pm_stderr:.4f} T/N={row.mean_t_over_n:.1f} "
                      f"maps={row.realizations}", file=log, flush=True)
    except KeyboardInterrupt:
        result.manifest["interrupted"] = True
        result.manifest["completed_gridpoints"] = len(result.rows)
        if cfg.out_dir:
            write_results(result, [], cfg.out_dir)
        raise
    finally:
        if pool is not None:
            pool.shutdown()
    result.manifest["completed_gridpoints"] = len(result.rows)
    result.manifest["wall_seconds"] = round(time.time() - t_start, 3)
    return result


def _manifest(cfg: CampaignConfig) -> dict:
    return {
        "config": asdict(cfg),
        "seed_scheme": SEED_SCHEME,
        "versions": {
            "python": sys.version.split()[0],
            "numpy": np.__version__,
            "ach": _version,
        },
        "created_unix": int(time.time()),
        "interrupted": False,
    }


# ---------------------------------------------------------------- fitting

def fit_exponential(xs, ys, model: str = "exponential") -> FitResult:
    """OLS of ln(y) on x; returns y ~ b * exp(-a * x)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size != ys.size or xs.size < 2:
        raise ValueError("need at least two (x, y) points")
    if (ys <= 0).any():
        raise ValueError("exponential fit needs strictly positive y")
    ln_y = np.log(ys)
    fit = linregress(xs, ln_y)
    resid = ln_y - (fit.intercept + fit.slope * xs)
    return FitResult(model, -float(fit.slope), float(np.exp(fit.intercept)),
                     float(np.linalg.norm(resid)), int(xs.size),
                     float(fit.rvalue ** 2))


def fit_power_law(xs, ys, model: str = "power-law") -> FitResult:
    """OLS of ln(y) on ln(x); returns y ~ b * x^a."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size != ys.size or xs.size < 2:
        raise ValueError("need at least two (x, y) points")
    if (xs <= 0).any() or (ys <= 0).any():
        raise ValueError("power-law fit needs strictly positive x and y")
    ln_x, ln_y = np.log(xs), np.log(ys)
    fit = linregress(ln_x, ln_y)
    resid = ln_y - (fit.intercept + fit.slope * ln_x)
    return FitResult(model, float(fit.slope), float(np.exp(fit.intercept)),
                     float(np.linalg.norm(resid)), int(xs.size),
                     float(fit.rvalue ** 2))


FIT_MODELS = ("one_minus_pm_vs_n4root", "pm_vs_f", "t_over_n_vs_f2")

_COL_TO_ATTR = dict(zip(CSV_COLUMNS, [
    "topology_kind", "n", "l_or_c", "f", "m", "mapping_kind", "realizations",
    "runs_per_mapping", "pm", "pm_stderr", "mean_t", "mean_t_over_n",
    "t_stderr", "non_absorbed"]))


def row_value(row, column: str):
    """Field access by CSV column name for both dict rows and RowStats."""
    if isinstance(row, dict):
        return row[column]
    return getattr(row, _COL_TO_ATTR[column])


def fit_rows(rows, model: str) -> FitResult:
    """Fit one of the standard models to result rows (dicts or RowStats).

    one_minus_pm_vs_n4root:  1 - P_m ~ b exp(-a N^(1/4))
    pm_vs_f:                 P_m ~ b exp(-a F)
    t_over_n_vs_f2:          T/N ~ b F^a   (a is the fitted exponent)

    Saturated points (P_m exactly 0 or 1) are excluded before the log
    transform.
    """
    if model == "one_minus_pm_vs_n4root":
        pts = [(row_value(r, "N") ** 0.25, 1.0 - row_value(r, "pm"))
               for r in rows if 0.0 < row_value(r, "pm") < 1.0]
    elif model == "pm_vs_f":
        pts = [(row_value(r, "F"), row_value(r, "pm"))
               for r in rows if 0.0 < row_value(r, "pm") < 1.0]
    elif model == "t_over_n_vs_f2":
        pts = [(row_value(r, "F"), row_value(r, "mean_T_over_N"))
               for r in rows if row_value(r, "mean_T_over_N") > 0]
    else:
        raise ValueError(f"unknown fit model {model!r}; "
                         f"choose from {FIT_MODELS}")
    if len(pts) < 2:
        raise ValueError(f"{model}: fewer than two usable points after "
                         f"excluding saturated/invalid rows")
    xs, ys = zip(*pts)
    if model == "t_over_n_vs_f2":
        return fit_power_law(xs, ys, model=model)
    return fit_exponential(xs, ys, model=model)


def scaling_collapse(rows, n_min: int = 900, grid: int = 50):
    """Collapse table (u = F / N^(1/4), P_m, N, F) plus a quality metric.

    The metric is the largest |P_m(N1, u) - P_m(N2, u)| over any pair of
    distinct N >= n_min curves, evaluated on a common interpolation grid over
    their overlapping u range.  With fewer than two eligible curves the table
    is still returned and the metric is None (flagged undefined); two or more
    curves without any u overlap is an error.
    """
    table = sorted(
        (row_value(r, "F") / row_value(r, "N") ** 0.25, row_value(r, "pm"),
         row_value(r, "N"), row_value(r, "F")) for r in rows)
    curves = {}
    for r in rows:
        if row_value(r, "N") >= n_min:
            curves.setdefault(row_value(r, "N"), []).append(
                (row_value(r, "F") / row_value(r, "N") ** 0.25,
                 row_value(r, "pm")))
    curves = {n: sorted(pts) for n, pts in curves.items() if len(pts) >= 2}
    ns = sorted(curves)
    if len(ns) < 2:
        return table, None
    quality = None
    for i in range(len(ns)):
        for j in range(i + 1, len(ns)):
            u1, p1 = map(np.asarray, zip(*curves[ns[i]]))
            u2, p2 = map(np.asarray, zip(*curves[ns[j]]))
            lo, hi = max(u1.min(), u2.min()), min(u1.max(), u2.max())
            if lo >= hi:
                continue
            uu = np.linspace(lo, hi, grid)
            diff = float(np.abs(np.interp(uu, u1, p1)
                                - np.interp(uu, u2, p2)).max())
            quality = diff if quality is None else max(quality, diff)
    if quality is None:
        raise ValueError("no overlapping u range between any pair of N curves")
    return table, quality


# ------------------------------------------------------------------- I/O

def _fmt(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(v)


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(CSV_COLUMNS)
    for r in rows:
        wr.writerow([_fmt(v) for v in (
            r.topology_kind, r.n, r.l_or_c, r.f, r.m, r.mapping_kind,
            r.realizations, r.runs_per_mapping, r.pm, r.pm_stderr,
            r.mean_t, r.mean_t_over_n, r.t_stderr, r.non_absorbed)])
    return buf.getvalue()


def write_results(result: CampaignResult, fits, out_dir: str) -> dict:
    """Emit results.csv, fits.json, manifest.json (and diagnostics.json).

    Returns {name: path}.  CSV is UTF-8 with LF endings and the fixed column
    order in CSV_COLUMNS; floats use shortest round-trip formatting so a
    parse of the file reproduces the in-memory values exactly.
    """
    os.makedirs(out_dir, exist_ok=True)
    paths = {}
    csv_text = rows_to_csv(result.rows)
    paths["results"] = os.path.join(out_dir, "results.csv")
    with open(paths["results"], "w", encoding="utf-8", newline="") as fh:
        fh.write(csv_text)
    paths["fits"] = os.path.join(out_dir, "fits.json")
    with open(paths["fits"], "w", encoding="utf-8") as fh:
        json.dump([asdict(f) for f in fits], fh, indent=2)
        fh.write("\n")
    manifest = dict(result.manifest)
    manifest["results_sha256"] = hashlib.sha256(
        csv_text.encode("utf-8")).hexdigest()
    paths["manifest"] = os.path.join(out_dir, "manifest.json")
    with open(paths["manifest"], "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    if result.diagnostics:
        paths["diagnostics"] = os.path.join(out_dir, "diagnostics.json")
        with open(paths["diagnostics"], "w", encoding="utf-8") as fh:
            json.dump(result.diagnostics, fh, indent=2)
            fh.write("\n")
    return paths


_INT_COLS = {"N", "L_or_C", "F", "M", "realizations", "runs_per_mapping",
             "non_absorbed"}
_FLOAT_COLS = {"pm", "pm_stderr", "mean_T", "mean_T_over_N", "t_stderr"}


def read_results(path: str) -> list:
    """Parse a results.csv back into typed row dicts."""
    with open(path, encoding="utf-8", newline="") as fh:
        rd = csv.DictReader(fh)
        if rd.fieldnames != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected columns {rd.fieldnames}")
        rows = []
        for rec in rd:
            row = {}
            for k, v in rec.items():
                row[k] = int(v) if k in _INT_COLS else (
                    float(v) if k in _FLOAT_COLS else v)
            rows.append(row)
    return rows
