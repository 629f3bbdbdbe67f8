"""Seeded repeated runs over benchmark instances and aggregate result tables."""
from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .engine import SolverConfig, solve
from .graph import Graph, read_dimacs
from .transform import Coloring, Infeasible, build_linear_model, decode, to_qubo

DEFAULT_PENALTY = -500
INSTANCE_ENV = "BQPCOLOR_INSTANCES"
CSV_COLUMNS = ["instance", "V", "E", "K", "N", "BKR", "Best", "Avr", "sigma",
               "T_b_avr", "T_AVR", "dev_best", "dev_avr"]


@dataclass(frozen=True)
class InstanceSpec:
    name: str
    path: Path
    num_colors: int
    bkr: int | None = None
    time_limit: float = 60.0
    vertices: int | None = None
    edges: int | None = None
    optimal: bool = False
    original_time_limit: float | None = None

    def __post_init__(self):
        if self.num_colors < 1:
            raise ValueError(f"{self.name}: K must be >= 1")
        if self.bkr is not None and self.bkr <= 0:
            raise ValueError(f"{self.name}: BKR must be positive")

    def resolve(self) -> Path | None:
        """Existing file for this instance, or None."""
        candidates = [self.path]
        extra = os.environ.get(INSTANCE_ENV)
        if extra:
            candidates.append(Path(extra) / self.path.name)
        return next((p for p in candidates if p.is_file()), None)

    def load(self) -> Graph:
        path = self.resolve()
        if path is None:
            raise FileNotFoundError(
                f"instance {self.name!r} not found at {self.path} "
                f"(set ${INSTANCE_ENV} to a directory holding {self.path.name})")
        g = read_dimacs(path)
        return replace(g, name=self.name) if g.name != self.name else g


def bundled_manifest() -> Path:
    return Path(str(resources.files("bqpcolor") / "data" / "manifest.txt"))


def load_manifest(path: str | Path | None = None) -> dict[str, InstanceSpec]:
    """Parse a whitespace-delimited manifest.

    Columns: name, path, then optionally V, E, K, BKR, optimal, limit,
    original_limit.  A three/four-column form ``name path K [BKR]`` is also
    accepted.  ``-`` leaves a field unset.
    """
    path = Path(path) if path is not None else bundled_manifest()
    specs = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        cols = line.split()
        opt = lambda i, cast: cast(cols[i]) if len(cols) > i and cols[i] != "-" else None
        try:
            if len(cols) <= 4:
                name, file_, K, bkr = cols[0], cols[1], int(cols[2]), opt(3, int)
                V = E = None
                optimal, limit, original = False, 60.0, None
            else:
                name, file_ = cols[0], cols[1]
                V, E, K, bkr = opt(2, int), opt(3, int), int(cols[4]), opt(5, int)
                optimal = bool(opt(6, int) or 0)
                limit = opt(7, float) or 60.0
                original = opt(8, float)
        except (IndexError, ValueError) as exc:
            raise ValueError(f"{path}:{lineno}: bad manifest line {raw!r}") from exc
        file_path = Path(file_)
        if not file_path.is_absolute():
            file_path = path.parent / file_path
        specs[name] = InstanceSpec(name, file_path, K, bkr, limit, V, E, optimal, original)
    return specs


@dataclass
class RunRecord:
    seed: int
    coloring: Coloring | None
    time_to_best: float
    iterations_to_best: int
    elapsed: float
    best_h: int
    note: str = ""
    trajectory: list[tuple[float, int, int]] = field(default_factory=list, repr=False)

    @property
    def feasible(self) -> bool:
        return self.coloring is not None

    @property
    def best_sum(self) -> int | None:
        return None if self.coloring is None else self.coloring.sum


@dataclass
class RunReport:
    """Per-instance results.

    ``time_unit`` is ``"s"`` for clock-limited runs and ``"iterations"``
    when an iteration budget was used (making the report reproducible).
    """
    instance: str
    graph: Graph = field(repr=False)
    num_colors: int
    bkr: int | None
    runs: list[RunRecord]
    time_unit: str = "s"

    @property
    def dimension(self) -> int:
        return self.graph.vertex_count * self.num_colors

    def verified_sums(self) -> list[int]:
        """Sums of the feasible runs, re-checked for legality against the graph."""
        sums = []
        for r in self.runs:
            if r.coloring is None:
                continue
            c = r.coloring
            if len(c.colors) != self.graph.vertex_count or not c.is_legal(self.graph):
                raise AssertionError(f"{self.instance} seed {r.seed}: recorded coloring is not legal")
            if not all(1 <= k <= self.num_colors for k in c.colors):
                raise AssertionError(f"{self.instance} seed {r.seed}: color out of range")
            sums.append(sum(c.colors))
        return sums

    def _time(self, r: RunRecord) -> float:
        return float(r.iterations_to_best) if self.time_unit == "iterations" else r.time_to_best

    @property
    def best(self) -> int | None:
        sums = self.verified_sums()
        return min(sums) if sums else None

    @property
    def average(self) -> float | None:
        sums = self.verified_sums()
        return sum(sums) / len(sums) if sums else None

    @property
    def sigma(self) -> float | None:
        sums = self.verified_sums()
        if not sums:
            return None
        mean = sum(sums) / len(sums)
        return math.sqrt(sum((s - mean) ** 2 for s in sums) / len(sums))

    @property
    def t_best_avr(self) -> float | None:
        best = self.best
        times = [self._time(r) for r in self.runs if r.best_sum is not None and r.best_sum == best]
        return sum(times) / len(times) if times else None

    @property
    def t_avr(self) -> float | None:
        times = [self._time(r) for r in self.runs if r.feasible]
        return sum(times) / len(times) if times else None

    @property
    def infeasible_runs(self) -> int:
        return sum(not r.feasible for r in self.runs)

    def deviation(self, value: float | None) -> float | None:
        if value is None or not self.bkr:
            return None
        return (value - self.bkr) / self.bkr

    def row(self) -> dict:
        return {
            "instance": self.instance,
            "V": self.graph.vertex_count,
            "E": self.graph.edge_count,
            "K": self.num_colors,
            "N": self.dimension,
            "BKR": self.bkr,
            "Best": self.best,
            "Avr": self.average,
            "sigma": self.sigma,
            "T_b_avr": self.t_best_avr,
            "T_AVR": self.t_avr,
            "dev_best": self.deviation(self.best),
            "dev_avr": self.deviation(self.average),
        }


def _one_run(graph: Graph, num_colors: int, penalty: int, cfg: SolverConfig) -> RunRecord:
    model = build_linear_model(graph, num_colors)
    result = solve(to_qubo(model, penalty), cfg)
    try:
        coloring, note = decode(model, result.best_x), ""
    except Infeasible as exc:
        coloring, note = None, str(exc)
    return RunRecord(cfg.seed, coloring, result.time_to_best, result.iterations_to_best,
                     result.elapsed, result.best_h, note, result.trajectory)


def run_graph(graph: Graph, num_colors: int, runs: int = 5, base_seed: int = 0,
              cfg: SolverConfig | None = None, penalty: int = DEFAULT_PENALTY,
              bkr: int | None = None, workers: int = 1) -> RunReport:
    """``runs`` independent solves with seeds ``base_seed .. base_seed + runs - 1``."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    cfg = cfg or SolverConfig()
    configs = [replace(cfg, seed=base_seed + r) for r in range(runs)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_one_run, graph, num_colors, penalty, c) for c in configs]
            records = [f.result() for f in futures]
    else:
        records = [_one_run(graph, num_colors, penalty, c) for c in configs]
    unit = "iterations" if cfg.max_iterations is not None else "s"
    return RunReport(graph.name or "graph", graph, num_colors, bkr, records, unit)


def run_instance(spec: InstanceSpec, runs: int = 5, base_seed: int = 0,
                 cfg: SolverConfig | None = None, penalty: int = DEFAULT_PENALTY,
                 workers: int = 1, stop_at_bkr: bool = False) -> RunReport:
    """Solve a manifest instance repeatedly.

    ``cfg.time_limit`` is replaced by the instance's limit unless an
    explicit config is passed.  With ``stop_at_bkr`` a run ends as soon as
    it reaches the best known sum.
    """
    graph = spec.load()
    cfg = cfg or SolverConfig(time_limit=spec.time_limit)
    if stop_at_bkr and spec.bkr is not None:
        cfg = replace(cfg, target=-spec.bkr)
    return run_graph(graph, spec.num_colors, runs, base_seed, cfg, penalty, spec.bkr, workers)


# -- reporting ---------------------------------------------------------------

def _notes(reports: list[RunReport]) -> list[str]:
    units = sorted({r.time_unit for r in reports}) or ["s"]
    return [
        "sigma: population standard deviation over feasible runs",
        "T_b_avr: mean time to best over the runs that reached Best; "
        "T_AVR: mean time to each run's own best",
        f"time unit: {', '.join(units)}",
        "dev_best, dev_avr: (value - BKR) / BKR; last row averages them",
    ]


def _fmt(value, digits: int = 6) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.{digits}f}"
    return str(value)


def _average_row(rows: list[dict]) -> dict | None:
    devs = [(r["dev_best"], r["dev_avr"]) for r in rows if r["dev_best"] is not None]
    if not devs:
        return None
    return {"instance": "Average",
            "dev_best": sum(d for d, _ in devs) / len(devs),
            "dev_avr": sum(d for _, d in devs) / len(devs)}


def report(reports: list[RunReport], fmt: str = "csv") -> str:
    """Render reports as ``csv``, ``json`` (JSON lines) or aligned ``text``."""
    rows = [r.row() for r in reports]
    avg = _average_row(rows)
    notes = _notes(reports)
    if fmt == "csv":
        buf = io.StringIO()
        for note in notes:
            buf.write(f"# {note}\n")
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows + ([avg] if avg else []):
            writer.writerow({k: _fmt(row.get(k)) for k in CSV_COLUMNS})
        return buf.getvalue()
    if fmt == "json":
        lines = [json.dumps({"notes": notes})]
        for rep, row in zip(reports, rows):
            row = dict(row, infeasible_runs=rep.infeasible_runs, runs=[
                {"seed": r.seed, "sum": r.best_sum, "feasible": r.feasible,
                 "time_to_best": rep._time(r), "colors": list(r.coloring.colors) if r.coloring else None,
                 "note": r.note}
                for r in rep.runs])
            lines.append(json.dumps(row))
        if avg:
            lines.append(json.dumps(avg))
        return "\n".join(lines) + "\n"
    if fmt == "text":
        table = [CSV_COLUMNS] + [[_fmt(row.get(k), 4 if k.startswith("dev") else 1) for k in CSV_COLUMNS]
                                 for row in rows]
        if avg:
            table.append([_fmt(avg.get(k), 4) for k in CSV_COLUMNS])
        widths = [max(len(r[i]) for r in table) for i in range(len(CSV_COLUMNS))]
        out = [f"# {n}" for n in notes]
        out += ["  ".join(c.rjust(w) if i else c.ljust(w) for i, (c, w) in enumerate(zip(r, widths))).rstrip()
                for r in table]
        for rep in reports:
            for r in rep.runs:
                if not r.feasible:
                    out.append(f"# {rep.instance} seed {r.seed}: infeasible ({r.note})")
        return "\n".join(out) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def load_reference() -> dict[str, dict[str, str]]:
    """Published per-instance results shipped with the package, keyed by instance name."""
    text = (resources.files("bqpcolor") / "data" / "reference.csv").read_text(encoding="utf-8")
    rows = csv.DictReader(line for line in text.splitlines() if not line.startswith("#"))
    return {r["instance"]: r for r in rows}
