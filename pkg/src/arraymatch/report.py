"""Run reports for the matching pipeline and the benchmark/quality report."""

from __future__ import annotations

import csv
import io as _io
import statistics
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .generators import gen_random, gen_wire
from .graph import ArrayGraph, flatten, is_complete, omega
from .matching import PhaseLog, match, simplify
from .oracle import OracleCapError, maximum_matching_size, optimal_omega


@dataclass
class RunReport:
    summary: dict
    forced: int
    phases: list[PhaseLog]
    omega_before: int
    omega_after: int
    matched: int
    total_equations: int
    total_variables: int
    complete: bool
    timings_ms: dict[str, float] | None = None
    oracle: dict | None = None
    settings: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.matched > min(self.total_equations, self.total_variables):
            raise ValueError("matched count exceeds the number of scalar nodes")

    def to_json(self) -> dict:
        out = {
            "input": self.summary,
            "settings": self.settings,
            "simplify": {"forced": self.forced},
            "phases": [asdict(p) for p in self.phases],
            "omegaBefore": self.omega_before,
            "omegaAfter": self.omega_after,
            "matched": self.matched,
            "totalEquations": self.total_equations,
            "totalVariables": self.total_variables,
            "complete": self.complete,
        }
        if self.timings_ms is not None:
            out["timingsMs"] = self.timings_ms
        if self.oracle is not None:
            out["oracle"] = self.oracle
        return out

    def to_text(self) -> str:
        s = self.summary
        lines = [
            f"input: {s['equationNodes']} equation nodes, {s['variableNodes']} variable nodes, "
            f"{s['arcs']} arcs, {s['scalarEquations']} scalar equations, "
            f"{s['scalarVariables']} scalar variables",
            f"simplify: {self.forced} forced matches",
        ]
        for p in self.phases:
            lines.append(f"phase {p.iteration}: {p.paths} path{'' if p.paths == 1 else 's'} of length {p.path_length}, "
                         f"+{p.added} -> {p.matched}")
        lines.append(f"omega: {self.omega_before} -> {self.omega_after}")
        lines.append(f"matched: {self.matched}/{self.total_equations}"
                     + (" (complete)" if self.complete else " (incomplete)"))
        if self.timings_ms is not None:
            lines.append("timings (ms): " + ", ".join(f"{k}={v:.3f}" for k, v in self.timings_ms.items()))
        if self.oracle is not None:
            lines.append("oracle: " + ", ".join(f"{k}={v}" for k, v in self.oracle.items()))
        return "\n".join(lines) + "\n"


def oracle_block(g: ArrayGraph, cap: int = 24) -> dict:
    """Hopcroft-Karp cardinality and, when affordable, the optimal Omega."""
    out = {"hopcroftKarp": maximum_matching_size(flatten(g))}
    try:
        res = optimal_omega(g, cap)
        out["omegaOptimal"] = res.omega if res.feasible else None
    except OracleCapError:
        out["omegaOptimal"] = "skipped"
    return out


def run_pipeline(g: ArrayGraph, *, do_simplify: bool = True, do_match: bool = True,
                 max_iterations: int | None = None, with_oracle: bool = False,
                 timings: bool = False, settings: dict | None = None) -> RunReport:
    """Simplify then match ``g`` in place and describe what happened."""
    summary = g.summary()
    before = omega(g)
    oracle = oracle_block(g) if with_oracle else None
    forced = []
    phases: list[PhaseLog] = []
    t0 = time.perf_counter()
    if do_simplify:
        forced = simplify(g)
    t1 = time.perf_counter()
    if do_match:
        match(g, max_iterations, phases)
    t2 = time.perf_counter()
    clock = {"simplify": (t1 - t0) * 1e3, "match": (t2 - t1) * 1e3, "total": (t2 - t0) * 1e3}
    return RunReport(
        summary=summary,
        forced=len(forced),
        phases=phases,
        omega_before=before,
        omega_after=omega(g),
        matched=g.matched_count(),
        total_equations=g.scalar_equation_count(),
        total_variables=g.scalar_variable_count(),
        complete=is_complete(g),
        timings_ms=clock if timings else None,
        oracle=oracle,
        settings=settings or {},
    )


# -- benchmark / quality report ---------------------------------------------------

WIRE_SIZES = (10, 100, 1_000, 10_000, 100_000, 1_000_000)
DENSITIES = (0.3, 0.6, 1.0)


def random_corpus(count: int, seed: int = 0):
    """Small random graphs: up to 6 equation and 6 variable nodes, sizes up to 4.

    Every other instance balances its scalar counts so that a fair share of
    the corpus admits a complete matching.
    """
    for i in range(count):
        s = seed + i
        density = DENSITIES[i % len(DENSITIES)]
        eq_nodes = 1 + s % 6
        var_nodes = 1 + (s // 6) % 6
        square = bool(i % 2) and max(eq_nodes, var_nodes) <= 4 * min(eq_nodes, var_nodes)
        yield s, density, gen_random(s, eq_nodes, var_nodes, 4, density, square=square)


def wire_rows(sizes=WIRE_SIZES) -> list[dict]:
    rows = []
    for n in sizes:
        g = gen_wire(n)
        t0 = time.perf_counter()
        simplify(g)
        match(g)
        ms = (time.perf_counter() - t0) * 1e3
        rows.append({"n": n, "ms": round(ms, 3), "omega": omega(g), "matched": g.matched_count()})
    return rows


def quality_rows(count: int, seed: int = 0) -> list[dict]:
    """Heuristic against optimal Omega on the completely matchable corpus members."""
    rows = []
    for s, density, g in random_corpus(count, seed):
        if g.scalar_equation_count() != g.scalar_variable_count():
            continue
        try:
            res = optimal_omega(g)
        except OracleCapError:
            continue
        if not res.feasible:
            continue
        h = g.copy()
        simplify(h)
        match(h)
        if not is_complete(h):
            # maximum but not perfect cannot happen when a perfect matching exists
            raise RuntimeError(f"seed {s}: heuristic missed a complete matching")
        rows.append({"seed": s, "density": density, "heuristic": omega(h), "optimal": res.omega,
                     "ratio": omega(h) / res.omega})
    return rows


def summarise_ratios(rows: list[dict]) -> dict:
    ratios = [r["ratio"] for r in rows]
    if not ratios:
        return {"instances": 0, "mean": None, "max": None}
    return {"instances": len(ratios), "mean": statistics.fmean(ratios), "max": max(ratios)}


def rows_to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = _io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def write_report(out_dir, wire: list[dict], quality: list[dict]) -> list[Path]:
    """CSV tables plus PNG figures of the wire scaling and the Omega ratios."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, rows in (("wire.csv", wire), ("quality.csv", quality)):
        p = out / name
        p.write_text(rows_to_csv(rows))
        written.append(p)

    if wire:
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.plot([r["n"] for r in wire], [r["ms"] for r in wire], marker="o")
        ax.set_xscale("log")
        ax.set_xlabel("wire volumes n")
        ax.set_ylabel("simplify + match (ms)")
        ax.set_title("wire scaling")
        fig.tight_layout()
        p = out / "wire_scaling.png"
        fig.savefig(p, dpi=100)
        plt.close(fig)
        written.append(p)

    if quality:
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.hist([r["ratio"] for r in quality], bins=20)
        ax.set_xlabel("heuristic / optimal Omega")
        ax.set_ylabel("instances")
        ax.set_title("Omega quality")
        fig.tight_layout()
        p = out / "omega_ratio.png"
        fig.savefig(p, dpi=100)
        plt.close(fig)
        written.append(p)
    return written
