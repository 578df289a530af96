"""Monte Carlo sweeps over the planted model.

Each trial samples a planted hypergraph, colors it, verifies the result and
records the mismatch against the planted coloring after every refinement
round. Per-trial seeds are derived from ``(master_seed, cell, trial)`` with
BLAKE2b, so results do not depend on execution order or worker count.

Output layout of :func:`run_sweep` with ``out_dir``::

    cell_000.csv ...   one row per trial, timing column last
    summary.csv        one row per cell, ends with a '# end' marker line
    manifest.txt       sweep parameters, master seed, package version
"""

from __future__ import annotations

import csv
import hashlib
import io
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import __version__
from .coloring import Status, color2, colorK
from .exceptions import ContractError
from .hypergraph import verify_proper
from .planted import PlantedParams, probs_for_density, profile_weights, sample
from .spectral import initial_error_budget

__all__ = [
    "SweepSpec",
    "Cell",
    "TrialRecord",
    "CellSummary",
    "SweepResult",
    "derive_seed",
    "run_trial",
    "run_sweep",
    "trial_csv",
    "summary_csv",
    "wilson_interval",
]

logger = logging.getLogger(__name__)

END_MARKER = "# end"


def derive_seed(master_seed: int, cell_key: str, trial_index: int) -> int:
    """64-bit seed from BLAKE2b over ``master_seed``, the cell key and the trial index."""
    payload = f"{master_seed}|{cell_key}|{trial_index}".encode()
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


def _cell_key(params: PlantedParams) -> str:
    return ";".join(line for line in params.to_text().splitlines() if not line.startswith("seed="))


@dataclass(frozen=True)
class Cell:
    index: int
    n: int
    k: int
    M: int
    d: float
    profile: str
    params: PlantedParams


@dataclass(frozen=True)
class SweepSpec:
    n_values: Sequence[int]
    M: int
    d_values: Sequence[float]
    k: int = 2
    profile: str = "equal"
    trials: int = 10
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "d_values", tuple(float(d) for d in self.d_values))
        if not self.n_values or not self.d_values:
            raise ContractError("n_values and d_values must be nonempty")
        if self.trials < 1:
            raise ContractError("trials must be at least 1")
        profile_weights(self.profile, self.M)

    def cells(self) -> list[Cell]:
        cells = []
        for n in self.n_values:
            for d in self.d_values:
                probs = probs_for_density(n, self.M, d, self.profile, k=self.k)
                if probs.clamped:
                    logger.warning("density %g unreachable at n=%d, M=%d; probabilities clamped to 1",
                                   d, n, self.M)
                params = PlantedParams(n, self.M, probs.p, k=self.k)
                cells.append(Cell(len(cells), n, self.k, self.M, d, self.profile, params))
        return cells

    def describe(self) -> str:
        return (
            f"n_values={','.join(map(str, self.n_values))}\n"
            f"M={self.M}\nk={self.k}\n"
            f"d_values={','.join(format(d, 'g') for d in self.d_values)}\n"
            f"profile={self.profile}\ntrials={self.trials}\nmaster_seed={self.master_seed}\n"
        )


@dataclass(frozen=True)
class TrialRecord:
    params: PlantedParams
    trial_index: int
    derived_seed: int
    status: Status
    proper: bool
    mismatch_by_iteration: tuple[int, ...]
    edge_count: int
    wall_time_ms: float
    cell: Cell | None = field(default=None, compare=False)

    @property
    def final_mismatch(self) -> int:
        return self.mismatch_by_iteration[-1]

    def mismatch_nonincreasing(self, start: int = 1) -> bool:
        series = self.mismatch_by_iteration[start:]
        return all(b <= a for a, b in zip(series, series[1:]))


def run_trial(params: PlantedParams, trial_index: int, master_seed: int, tol: float = 1e-8) -> TrialRecord:
    """Sample, color and verify one planted instance. Failures are recorded, not raised."""
    seed = derive_seed(master_seed, _cell_key(params), trial_index)
    params = params.with_seed(seed)
    start = time.perf_counter()
    h, planted = sample(params)
    if params.k == 2:
        outcome = color2(h, tol=tol, planted=planted)
    else:
        outcome = colorK(h, params.k, tol=tol, planted=planted)
    proper = verify_proper(h, outcome.coloring).proper
    elapsed = (time.perf_counter() - start) * 1000.0
    mismatches = tuple(s.mismatch for s in outcome.trajectory)
    if mismatches:
        logger.debug("trial %d: initial errors %d, budget %.3g", trial_index, mismatches[0],
                     initial_error_budget(params.n, params.M))
    return TrialRecord(params, trial_index, seed, outcome.status, proper, mismatches,
                       h.num_edges, elapsed)


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion (95% by default)."""
    if trials == 0:
        return 0.0, 1.0
    phat = successes / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class CellSummary:
    cell: Cell
    trials: int
    successes: int
    wilson_low: float
    wilson_high: float
    mean_final_mismatch: float

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials


@dataclass
class SweepResult:
    records: list[TrialRecord]
    summaries: list[CellSummary]

    def summary_for(self, n: int, d: float) -> CellSummary:
        for s in self.summaries:
            if s.cell.n == n and s.cell.d == d:
                return s
        raise KeyError((n, d))


def _run_cell_trial(args):
    cell, trial, master_seed = args
    rec = run_trial(cell.params, trial, master_seed)
    return TrialRecord(rec.params, rec.trial_index, rec.derived_seed, rec.status, rec.proper,
                       rec.mismatch_by_iteration, rec.edge_count, rec.wall_time_ms, cell)


def _summarize(cell, records):
    successes = sum(r.status is Status.SUCCESS for r in records)
    low, high = wilson_interval(successes, len(records))
    mean_final = sum(r.final_mismatch for r in records) / len(records)
    return CellSummary(cell, len(records), successes, low, high, mean_final)


def trial_header(num_rounds_: int) -> list[str]:
    return (["cell", "n", "k", "M", "d", "profile", "trial", "seed", "status", "proper", "edges"]
            + [f"mismatch_t{t}" for t in range(num_rounds_ + 1)] + ["wall_ms"])


def trial_csv(records: Sequence[TrialRecord], include_timing: bool = True) -> str:
    """CSV text for the trials of one cell. Timing is the last column."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if not records:
        return ""
    rounds = len(records[0].mismatch_by_iteration) - 1
    header = trial_header(rounds)
    writer.writerow(header if include_timing else header[:-1])
    for r in records:
        c = r.cell
        row = [
            c.index if c else "", r.params.n, r.params.k, r.params.M,
            format(c.d, "g") if c else "", c.profile if c else "",
            r.trial_index, r.derived_seed, r.status.value, int(r.proper), r.edge_count,
            *r.mismatch_by_iteration,
        ]
        if include_timing:
            row.append(f"{r.wall_time_ms:.3f}")
        writer.writerow(row)
    return buf.getvalue()


def summary_csv(summaries: Sequence[CellSummary]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["cell", "n", "k", "M", "d", "profile", "trials", "successes", "success_rate",
                     "wilson_low", "wilson_high", "mean_final_mismatch"])
    for s in summaries:
        c = s.cell
        writer.writerow([c.index, c.n, c.k, c.M, format(c.d, "g"), c.profile, s.trials, s.successes,
                         f"{s.success_rate:.6f}", f"{s.wilson_low:.6f}", f"{s.wilson_high:.6f}",
                         f"{s.mean_final_mismatch:.6f}"])
    buf.write(END_MARKER + "\n")
    return buf.getvalue()


def _atomic_write(path: Path, text: str):
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def run_sweep(spec: SweepSpec, out_dir: str | os.PathLike | None = None, n_jobs: int = 1) -> SweepResult:
    """Run every ``(n, d)`` cell of ``spec`` for ``spec.trials`` trials.

    Records are ordered by ``(cell, trial)`` whatever ``n_jobs`` is. With
    ``out_dir`` the CSV files and manifest are written; every file is written
    whole via a temporary name, and the summary is written last.
    """
    cells = spec.cells()
    jobs = [(cell, t, spec.master_seed) for cell in cells for t in range(spec.trials)]
    if n_jobs == 1:
        records = [_run_cell_trial(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            records = list(pool.map(_run_cell_trial, jobs, chunksize=max(1, len(jobs) // (4 * n_jobs))))
    records.sort(key=lambda r: (r.cell.index, r.trial_index))

    by_cell = {c.index: [] for c in cells}
    for r in records:
        by_cell[r.cell.index].append(r)
    summaries = [_summarize(c, by_cell[c.index]) for c in cells]

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _atomic_write(out / "manifest.txt", spec.describe() + f"version={__version__}\n")
        for c in cells:
            _atomic_write(out / f"cell_{c.index:03d}.csv", trial_csv(by_cell[c.index]))
        _atomic_write(out / "summary.csv", summary_csv(summaries))
    return SweepResult(records, summaries)
