"""Adaptive greedy/annealing spin-flip loop over the crossbar emulation.

The crossbar stores the spin-signed adjacency matrix in differential column
pairs: entry (i, j) is written as sign s_j when nodes i and j are adjacent.
Each iteration reads the column currents under a row drive equal to the
current spins, recovers the quadratic part of the per-node flip costs, applies
the linear degree/reward bias digitally (the summer, threshold, q, and spin
units all live off-array), compares the costs against a dynamic threshold,
flips up to k mutually non-adjacent nodes, and reprograms only the flipped
columns.

The flip cost is the true energy change delta_j of flipping node j, so the
candidate rule "delta_j below the threshold" is literal: the loop is greedy
whenever an improving move exists and otherwise behaves as Metropolis
annealing, with the acceptance probability exp(-delta/T) expressed as the
random threshold q = -T * ln(u).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .cnf import Cnf
from .device import Crossbar, DeviceConfig, CellState, new_crossbar
from .ising import (
    HamiltonianParams,
    IsingGraph,
    adjacency_matrix,
    build_graph,
    decode_solution,
)
from .util import derive_seed, substream


class MappingError(ValueError):
    """Problem does not fit the crossbar (multi-tile operation unsupported)."""


@dataclass(frozen=True)
class CrossbarMapping:
    """Node-to-array layout: node j lives on row j and column pair (2j, 2j+1)."""

    num_nodes: int
    row_offset: int = 0
    col_offset: int = 0

    def row(self, node: int) -> int:
        return self.row_offset + node

    def col_neg(self, node: int) -> int:
        return self.col_offset + 2 * node

    def col_pos(self, node: int) -> int:
        return self.col_offset + 2 * node + 1


@dataclass(frozen=True)
class SolverConfig:
    k: int = 1                      # max flips per iteration
    control_f: str = "min"          # candidate ordering: "min" or "max"
    t0: float = 1.0                 # temperature scale (multiple of delta spread)
    alpha: float = 0.95             # geometric cooling factor
    max_iters: int = 100
    restarts: int = 10
    hamiltonian: HamiltonianParams = field(default_factory=HamiltonianParams)
    seed: int = 0
    profile_iterations: bool = False  # run every iteration, no early exit

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.max_iters < 1 or self.restarts < 1:
            raise ValueError("max_iters and restarts must be >= 1")
        if self.control_f not in ("min", "max"):
            raise ValueError(f"control_f must be 'min' or 'max', got {self.control_f!r}")

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "control_f": self.control_f,
            "t0": self.t0,
            "alpha": self.alpha,
            "max_iters": self.max_iters,
            "restarts": self.restarts,
            "a_pen": self.hamiltonian.a_pen,
            "b_pen": self.hamiltonian.b_pen,
            "seed": self.seed,
            "profile_iterations": self.profile_iterations,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SolverConfig":
        data = dict(data)
        a_pen = data.pop("a_pen", None)
        b_pen = data.pop("b_pen", None)
        known = set(cls.__dataclass_fields__) - {"hamiltonian"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown solver config keys: {sorted(unknown)}")
        params = HamiltonianParams(
            a_pen=a_pen if a_pen is not None else 2.0,
            b_pen=b_pen if b_pen is not None else 1.0,
        )
        return cls(hamiltonian=params, **data)


def load_config_document(doc: dict) -> tuple[DeviceConfig, SolverConfig]:
    """Split one JSON document into device.* and solver.* sections.

    Both sections are optional and fall back to defaults.
    """
    device = DeviceConfig.from_dict(doc.get("device", {}))
    solver = SolverConfig.from_dict(doc.get("solver", {}))
    return device, solver


def load_config_file(path: str) -> tuple[DeviceConfig, SolverConfig]:
    with open(path, "r", encoding="utf-8") as handle:
        return load_config_document(json.load(handle))


@dataclass
class IterationTrace:
    t: int
    delta: tuple[float, ...]
    q: float
    flipped: tuple[int, ...]
    cells_targeted: int
    cells_correct: int
    iteration_accurate: bool
    program_energy_nj: float
    inference_energy_nj: float

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "delta": list(self.delta),
            "q": self.q,
            "flipped": list(self.flipped),
            "cells_targeted": self.cells_targeted,
            "cells_correct": self.cells_correct,
            "iteration_accurate": self.iteration_accurate,
            "program_energy_nj": self.program_energy_nj,
            "inference_energy_nj": self.inference_energy_nj,
        }


@dataclass
class RunReport:
    verdict: str                            # "SAT" or "Unknown"
    assignment: Optional[tuple[bool, ...]]
    final_spins: tuple[int, ...]
    traces: list[list[IterationTrace]]      # one list per restart
    totals: dict
    iteration_accuracy: float
    cell_write_accuracy: float
    restarts_executed: int
    sat_restart: Optional[int] = None
    sat_iteration: Optional[int] = None

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "assignment": list(self.assignment) if self.assignment is not None else None,
            "final_spins": list(self.final_spins),
            "traces": [[tr.to_dict() for tr in restart] for restart in self.traces],
            "totals": dict(self.totals),
            "iteration_accuracy": self.iteration_accuracy,
            "cell_write_accuracy": self.cell_write_accuracy,
            "restarts_executed": self.restarts_executed,
            "sat_restart": self.sat_restart,
            "sat_iteration": self.sat_iteration,
        }


def report_to_json(report: RunReport) -> str:
    """Stable JSON encoding (sorted keys) so identical runs match byte-wise."""
    return json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n"


def random_spins(num_nodes: int, rng: np.random.Generator) -> np.ndarray:
    return (2 * rng.integers(0, 2, size=num_nodes) - 1).astype(np.int64)


def map_problem(
    adj: np.ndarray,
    spins: Sequence[int],
    xb: Crossbar,
    row_offset: int = 0,
    col_offset: int = 0,
) -> CrossbarMapping:
    """Program the spin-signed adjacency matrix into the array (tag "init").

    Column j carries adj(i, j) * s_j in its differential pair; zero entries
    stay untouched.  Raises MappingError when the problem needs more rows or
    columns than the device offers.
    """
    n = adj.shape[0]
    if adj.shape != (n, n):
        raise ValueError("adjacency matrix must be square")
    if row_offset + n > xb.config.rows or col_offset + 2 * n > xb.config.cols:
        raise MappingError(
            f"{n} nodes need {n} rows and {2 * n} columns; device is "
            f"{xb.config.rows}x{xb.config.cols} (multi-tile operation unsupported)"
        )
    mapping = CrossbarMapping(n, row_offset, col_offset)
    spins = np.asarray(spins)
    for j in range(n):
        sign = int(spins[j])
        for i in range(n):
            if adj[i, j]:
                xb.program_pair(
                    mapping.row(i), mapping.col_pos(j), mapping.col_neg(j), sign, "init"
                )
    return mapping


def compute_delta(
    xb: Crossbar,
    mapping: CrossbarMapping,
    spins: Sequence[int],
    degrees: Sequence[int],
    params: HamiltonianParams,
    tag: str = "read",
) -> np.ndarray:
    """Per-node flip costs from one differential crossbar inference.

    The raw column readout recovers s_j * sum_i adj(i, j) * s_i; the exact
    energy change is then assembled digitally as
    delta_j = -(a_pen / 2) * (raw_j + s_j * deg_j) + b_pen * s_j.
    """
    spins = np.asarray(spins, dtype=np.int64)
    degrees = np.asarray(degrees, dtype=np.int64)
    n = mapping.num_nodes
    drive = np.zeros(xb.config.rows, dtype=np.int64)
    drive[mapping.row_offset : mapping.row_offset + n] = spins
    currents = xb.read_columns(drive, tag=tag)
    pos = currents[[mapping.col_pos(j) for j in range(n)]]
    neg = currents[[mapping.col_neg(j) for j in range(n)]]
    span = xb.config.v_read * (xb.config.g_state1 - xb.config.g_state0)
    raw = (pos - neg) / span
    return -(params.a_pen / 2.0) * (raw + spins * degrees) + params.b_pen * spins


def q_unit(
    delta: np.ndarray,
    prior_delta: Optional[np.ndarray],
    t: int,
    config: SolverConfig,
    rng: np.random.Generator,
) -> float:
    """Dynamic flip threshold.

    Greedy mode (q = 0) whenever an improving move exists; otherwise a
    Metropolis threshold q = -T_t * ln(u) with T_t scaled by the spread of the
    previous iteration's flip costs (falling back to b_pen when there is no
    usable prior).
    """
    if np.any(delta < 0):
        return 0.0
    sigma = float(np.std(prior_delta)) if prior_delta is not None else 0.0
    if sigma <= 0.0:
        sigma = config.hamiltonian.b_pen
    temperature = config.t0 * (config.alpha ** t) * sigma
    u = 1.0 - rng.random()  # uniform on (0, 1]
    return float(-temperature * np.log(u))


def select_flips(
    delta: np.ndarray, q: float, config: SolverConfig, graph: IsingGraph
) -> list[int]:
    """Up to k candidates with delta below q, forming an independent set.

    Candidates are ordered by the control function (min: ascending delta) with
    node id as the tie-break; adjacent picks are skipped because simultaneous
    neighbor flips would invalidate each other's predicted cost.
    """
    candidates = [i for i in range(len(delta)) if delta[i] < q]
    sign = -1.0 if config.control_f == "max" else 1.0
    candidates.sort(key=lambda i: (sign * delta[i], i))
    chosen: list[int] = []
    for i in candidates:
        if len(chosen) >= config.k:
            break
        if any(j in graph.neighbor_lists[i] for j in chosen):
            continue
        chosen.append(i)
    return chosen


def apply_flips(
    xb: Crossbar,
    mapping: CrossbarMapping,
    spins: np.ndarray,
    flips: Sequence[int],
    adj: np.ndarray,
    tag: str,
) -> tuple[int, int]:
    """Flip spins in place and reprogram the flipped nodes' column pairs.

    Only rows adjacent to a flipped node are rewritten, two cells per pair.
    Returns (cells targeted, cells that landed in their window).
    """
    targeted = correct = 0
    for j in sorted(flips):
        spins[j] = -spins[j]
        sign = int(spins[j])
        for i in np.flatnonzero(adj[:, j]):
            out_pos, out_neg = xb.program_pair(
                mapping.row(int(i)), mapping.col_pos(j), mapping.col_neg(j), sign, tag
            )
            targeted += 2
            correct += int(out_pos.landed_in_window) + int(out_neg.landed_in_window)
    return targeted, correct


def _mapped_pattern_ok(
    xb: Crossbar, mapping: CrossbarMapping, adj: np.ndarray, spins: np.ndarray
) -> bool:
    """Do all mapped cells classify as the expected spin-signed pattern?"""
    n = mapping.num_nodes
    r0, c0 = mapping.row_offset, mapping.col_offset
    states = xb.classify_grid()[r0 : r0 + n, c0 : c0 + 2 * n]
    weights = adj * spins[np.newaxis, :]
    expect_pos = np.where(weights == 1, int(CellState.STATE1), int(CellState.STATE0))
    expect_neg = np.where(weights == -1, int(CellState.STATE1), int(CellState.STATE0))
    return bool(
        np.array_equal(states[:, 1::2], expect_pos)
        and np.array_equal(states[:, 0::2], expect_neg)
    )


def run(cnf: Cnf, device_config: DeviceConfig, solver_config: SolverConfig) -> RunReport:
    """Full solve: restarts of map -> {read, threshold, flip, reprogram} loops.

    Each restart draws fresh random spins and a fresh array from seeds derived
    from (seed, restart index), so restarts are independent and the whole run
    is reproducible.  After every iteration the spin state is decoded; a
    verified assignment ends the run with verdict SAT (unless
    ``profile_iterations`` is set, in which case every restart runs its full
    iteration budget and the first verified decode is reported at the end).
    """
    graph = build_graph(cnf)
    adj = adjacency_matrix(graph)
    degrees = adj.sum(axis=1).astype(np.int64)
    params = solver_config.hamiltonian
    profile = solver_config.profile_iterations

    all_traces: list[list[IterationTrace]] = []
    totals = {"init_energy_nj": 0.0, "program_energy_nj": 0.0, "inference_energy_nj": 0.0}
    accurate = total_iters = 0
    cells_correct_sum = cells_targeted_sum = 0
    sat_assignment = None
    sat_restart = sat_iteration = None
    final_spins: Optional[np.ndarray] = None

    for restart in range(solver_config.restarts):
        srng = substream(solver_config.seed, restart, 0)
        spins = random_spins(graph.num_nodes, srng)
        xb = new_crossbar(device_config, derive_seed(solver_config.seed, restart, 1))
        mapping = map_problem(adj, spins, xb)
        traces: list[IterationTrace] = []
        prior_delta: Optional[np.ndarray] = None
        found_here = False

        for t in range(solver_config.max_iters):
            prog_before = xb.ledger.program_energy_nj
            infer_before = xb.ledger.inference_energy_nj
            delta = compute_delta(xb, mapping, spins, degrees, params, tag=f"iter{t}")
            q = q_unit(delta, prior_delta, t, solver_config, srng)
            flips = select_flips(delta, q, solver_config, graph)
            targeted, correct = apply_flips(xb, mapping, spins, flips, adj, f"iter{t}")
            ok = (correct == targeted) and _mapped_pattern_ok(xb, mapping, adj, spins)
            traces.append(
                IterationTrace(
                    t=t,
                    delta=tuple(float(d) for d in delta),
                    q=float(q),
                    flipped=tuple(flips),
                    cells_targeted=targeted,
                    cells_correct=correct,
                    iteration_accurate=ok,
                    program_energy_nj=xb.ledger.program_energy_nj - prog_before,
                    inference_energy_nj=xb.ledger.inference_energy_nj - infer_before,
                )
            )
            accurate += int(ok)
            total_iters += 1
            cells_targeted_sum += targeted
            cells_correct_sum += correct
            prior_delta = delta

            assignment = decode_solution(graph, spins, cnf)
            if assignment is not None and sat_assignment is None:
                sat_assignment = assignment
                sat_restart, sat_iteration = restart, t
                found_here = True
            if not profile and (assignment is not None or not flips):
                break

        all_traces.append(traces)
        totals["init_energy_nj"] += xb.ledger.init_energy_nj
        totals["program_energy_nj"] += xb.ledger.program_energy_nj
        totals["inference_energy_nj"] += xb.ledger.inference_energy_nj
        final_spins = spins
        if found_here and not profile:
            break

    totals["execute_energy_nj"] = totals["init_energy_nj"] + totals["program_energy_nj"]
    return RunReport(
        verdict="SAT" if sat_assignment is not None else "Unknown",
        assignment=sat_assignment.values if sat_assignment is not None else None,
        final_spins=tuple(int(s) for s in final_spins),
        traces=all_traces,
        totals=totals,
        iteration_accuracy=accurate / total_iters,
        cell_write_accuracy=(
            cells_correct_sum / cells_targeted_sum if cells_targeted_sum else 1.0
        ),
        restarts_executed=len(all_traces),
        sat_restart=sat_restart,
        sat_iteration=sat_iteration,
    )


def iteration_accuracy(report: RunReport) -> float:
    """Accurate iterations over total iterations, across every restart."""
    total = sum(len(traces) for traces in report.traces)
    if total == 0:
        raise ValueError("report contains no iterations")
    good = sum(tr.iteration_accurate for traces in report.traces for tr in traces)
    return good / total
