"""Behavioral model of a 1-bit differential ReRAM crossbar with energy ledger.

Cells hold a conductance in microsiemens and are classified against two
tolerance windows, low state 20 uS and high state 70 uS with a +/-10 uS
acceptance band by default.  Writes are stochastic: with probability
``p_cell_success`` the cell stops just inside the window edge nearest its
starting conductance (a verify loop halts on window entry, so overshoot decays
toward the nominal target with triangular density), otherwise the cell
scatters normally around the nominal target and may land anywhere, including
the wrong window or the dead zone between windows.

Write energy is the absolute difference in stored energy between the initial
and final conductance, evaluated on a piecewise-linear curve and scaled by
mean-one lognormal noise.  The default curve is a calibration artifact, not
physics: its anchors put a nominal 20->70 uS swing at 2.8 nJ and a worst-case
10->80 uS boundary swing at 9.5 nJ, and are configurable.

Reads drive rows at +/-v_read and sum per-column currents; read energy
(V^2 * G * t over driven cells) accrues to the ledger separately from writes.
The 2T-1R cell is modeled as an ideal selector: no sneak paths, no read
noise, no retention drift.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property
from typing import Sequence

import numpy as np

from .util import substream

# Anchors (uS, nJ); steep tails between the nominal points and the window
# boundaries carry the worst-case swing, the shallow mid-section keeps
# in-window shortcut hops cheap.
DEFAULT_ENERGY_CURVE: tuple[tuple[float, float], ...] = (
    (0.0, 0.0),
    (10.0, 0.5),
    (20.0, 3.85),
    (30.0, 3.93),
    (60.0, 4.01),
    (70.0, 6.65),
    (80.0, 10.0),
    (100.0, 11.0),
    (150.0, 13.5),
)


class CellState(IntEnum):
    STATE0 = 0
    STATE1 = 1
    INDETERMINATE = 2


class DeviceConfigError(ValueError):
    """Rejected device configuration."""


@dataclass(frozen=True)
class DeviceConfig:
    """Crossbar geometry, state windows, write statistics, and energy model."""

    rows: int = 32
    cols: int = 16
    g_state0: float = 20.0          # uS, low-conductance state (HRS)
    g_state1: float = 70.0          # uS, high-conductance state (LRS)
    tolerance: float = 10.0         # uS half-window
    p_cell_success: float = 0.99    # calibrated against iteration accuracy
    miss_spread: float = 15.0       # uS sigma of failed writes
    energy_curve: tuple[tuple[float, float], ...] = DEFAULT_ENERGY_CURVE
    energy_noise_sigma: float = 0.3  # relative lognormal sigma on write energy
    v_read: float = 0.3             # V
    t_read: float = 1e-6            # s
    shortcut_writes: bool = True    # False lands successful writes at nominal

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise DeviceConfigError(f"bad array dims {self.rows}x{self.cols}")
        if min(self.g_state0, self.g_state1, self.tolerance, self.miss_spread,
               self.v_read, self.t_read) <= 0:
            raise DeviceConfigError("physical quantities must be positive")
        if not 0.0 <= self.p_cell_success <= 1.0:
            raise DeviceConfigError(f"p_cell_success {self.p_cell_success} not in [0,1]")
        if self.energy_noise_sigma < 0:
            raise DeviceConfigError("energy_noise_sigma must be >= 0")
        if self.g_state1 - self.tolerance <= self.g_state0 + self.tolerance:
            raise DeviceConfigError(
                "state windows overlap: need g_state1 - tolerance > g_state0 + tolerance"
            )
        curve = tuple((float(g), float(e)) for g, e in self.energy_curve)
        if len(curve) < 2:
            raise DeviceConfigError("energy_curve needs at least two points")
        gs = [g for g, _ in curve]
        es = [e for _, e in curve]
        if any(b <= a for a, b in zip(gs, gs[1:])) or any(b <= a for a, b in zip(es, es[1:])):
            raise DeviceConfigError("energy_curve must be strictly increasing")
        if gs[0] > 0.0 or gs[-1] < self.g_state1 + self.tolerance:
            raise DeviceConfigError("energy_curve must span the operating range")
        object.__setattr__(self, "energy_curve", curve)

    @cached_property
    def _curve_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        gs = np.array([g for g, _ in self.energy_curve])
        es = np.array([e for _, e in self.energy_curve])
        return gs, es

    def stored_energy_nj(self, conductance: float) -> float:
        """Piecewise-linear stored energy at a conductance (uS -> nJ)."""
        gs, es = self._curve_arrays
        return float(np.interp(conductance, gs, es))

    def window(self, state: CellState) -> tuple[float, float]:
        nominal = self.g_state0 if state == CellState.STATE0 else self.g_state1
        return nominal - self.tolerance, nominal + self.tolerance

    def nominal(self, state: CellState) -> float:
        return self.g_state0 if state == CellState.STATE0 else self.g_state1

    def classify_value(self, conductance: float) -> CellState:
        for state in (CellState.STATE0, CellState.STATE1):
            lo, hi = self.window(state)
            if lo <= conductance <= hi:
                return state
        return CellState.INDETERMINATE

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "g_state0": self.g_state0,
            "g_state1": self.g_state1,
            "tolerance": self.tolerance,
            "p_cell_success": self.p_cell_success,
            "miss_spread": self.miss_spread,
            "energy_curve": [list(point) for point in self.energy_curve],
            "energy_noise_sigma": self.energy_noise_sigma,
            "v_read": self.v_read,
            "t_read": self.t_read,
            "shortcut_writes": self.shortcut_writes,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DeviceConfig":
        known = {f for f in cls.__dataclass_fields__}  # noqa: C416
        unknown = set(data) - known
        if unknown:
            raise DeviceConfigError(f"unknown device config keys: {sorted(unknown)}")
        kwargs = dict(data)
        if "energy_curve" in kwargs:
            kwargs["energy_curve"] = tuple(tuple(p) for p in kwargs["energy_curve"])
        return cls(**kwargs)

    @classmethod
    def from_json(cls, text: str) -> "DeviceConfig":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class WriteOutcome:
    final_g: float
    landed_in_window: bool
    energy_nj: float


@dataclass(frozen=True)
class LedgerEvent:
    kind: str       # init | program | inference | injected
    tag: str
    row: int        # -1 for array-level events (reads)
    col: int
    energy_nj: float


class EnergyLedger:
    """Append-only energy log; totals are maintained alongside the events."""

    def __init__(self) -> None:
        self.events: list[LedgerEvent] = []
        self._totals = {"init": 0.0, "program": 0.0, "inference": 0.0, "injected": 0.0}

    def record(self, kind: str, tag: str, row: int, col: int, energy_nj: float) -> None:
        if energy_nj < 0:
            raise ValueError("ledger entries must be non-negative")
        self.events.append(LedgerEvent(kind, tag, row, col, energy_nj))
        self._totals[kind] += energy_nj

    @property
    def init_energy_nj(self) -> float:
        return self._totals["init"]

    @property
    def program_energy_nj(self) -> float:
        return self._totals["program"]

    @property
    def inference_energy_nj(self) -> float:
        return self._totals["inference"]

    def total_nj(self) -> float:
        return sum(self._totals.values())

    def summary(self) -> dict:
        return {
            "init_energy_nj": self.init_energy_nj,
            "program_energy_nj": self.program_energy_nj,
            "inference_energy_nj": self.inference_energy_nj,
        }


class Crossbar:
    """Single-owner mutable crossbar; all state changes flow through methods.

    The RNG stream belongs to the instance, so two crossbars with the same
    config and seed replay identical stochastic behavior event for event.
    """

    def __init__(self, config: DeviceConfig, seed: int) -> None:
        self.config = config
        self.conductance = np.full((config.rows, config.cols), config.g_state0, dtype=float)
        self.rng = substream(seed, 0xC3)
        self.ledger = EnergyLedger()

    def _check_coords(self, row: int, col: int) -> None:
        if not (0 <= row < self.config.rows and 0 <= col < self.config.cols):
            raise IndexError(
                f"cell ({row}, {col}) outside {self.config.rows}x{self.config.cols} array"
            )

    def classify(self, row: int, col: int) -> CellState:
        self._check_coords(row, col)
        return self.config.classify_value(float(self.conductance[row, col]))

    def classify_grid(self) -> np.ndarray:
        """Window classification of every cell as an int array of CellState."""
        cfg = self.config
        g = self.conductance
        out = np.full(g.shape, int(CellState.INDETERMINATE), dtype=np.int8)
        for state in (CellState.STATE0, CellState.STATE1):
            lo, hi = cfg.window(state)
            out[(g >= lo) & (g <= hi)] = int(state)
        return out

    def _energy_noise(self) -> float:
        sigma = self.config.energy_noise_sigma
        if sigma == 0:
            return 1.0
        # Mean-one lognormal so that configured noise leaves averages in place.
        return float(self.rng.lognormal(mean=-0.5 * sigma * sigma, sigma=sigma))

    def program_cell(self, row: int, col: int, target: CellState, tag: str = "") -> WriteOutcome:
        """Issue one write pulse train toward a target state.

        Cells already inside the target window are skipped: no pulse, no
        energy, no conductance change.  Successful writes stop inside the
        window edge nearest the starting conductance (between that edge and
        the nominal target); failed writes scatter around the nominal.
        """
        self._check_coords(row, col)
        target = CellState(target)
        if target == CellState.INDETERMINATE:
            raise ValueError("cannot target the indeterminate state")
        cfg = self.config
        start = float(self.conductance[row, col])
        if cfg.classify_value(start) == target:
            return WriteOutcome(start, True, 0.0)
        lo, hi = cfg.window(target)
        nominal = cfg.nominal(target)
        if self.rng.random() < cfg.p_cell_success:
            if not cfg.shortcut_writes:
                final = nominal
            elif start < lo:
                final = float(self.rng.triangular(lo, lo, nominal))
            else:
                final = float(self.rng.triangular(nominal, hi, hi))
        else:
            final = float(self.rng.normal(nominal, cfg.miss_spread))
        gs, _ = cfg._curve_arrays
        final = float(np.clip(final, gs[0], gs[-1]))
        energy = abs(cfg.stored_energy_nj(final) - cfg.stored_energy_nj(start))
        energy *= self._energy_noise()
        kind = "init" if tag == "init" else "program"
        self.ledger.record(kind, tag, row, col, energy)
        self.conductance[row, col] = final
        return WriteOutcome(final, cfg.classify_value(final) == target, energy)

    def program_pair(
        self, row: int, col_pos: int, col_neg: int, logical: int, tag: str = ""
    ) -> tuple[WriteOutcome, WriteOutcome]:
        """Write one signed weight into a differential column pair.

        logical +1 puts the high cell in the positive column, -1 in the
        negative column, 0 sets both low.  Cells already holding their target
        are skipped inside :meth:`program_cell`.
        """
        if col_pos == col_neg:
            raise ValueError("differential pair must use two distinct columns")
        if logical not in (-1, 0, 1):
            raise ValueError(f"logical weight must be -1, 0, or +1, got {logical}")
        pos_target = CellState.STATE1 if logical == 1 else CellState.STATE0
        neg_target = CellState.STATE1 if logical == -1 else CellState.STATE0
        return (
            self.program_cell(row, col_pos, pos_target, tag),
            self.program_cell(row, col_neg, neg_target, tag),
        )

    def read_columns(self, drive: Sequence[int], tag: str = "read") -> np.ndarray:
        """Column currents (uA) under a signed row drive, logging read energy.

        The signed drive is a functional idealization of the inference step;
        every cell in a driven row dissipates V^2 * G * t_read.
        """
        d = np.asarray(drive)
        if d.shape != (self.config.rows,):
            raise ValueError(f"drive has shape {d.shape}, expected ({self.config.rows},)")
        if not np.isin(d, (-1, 0, 1)).all():
            raise ValueError("drive entries must be in {-1, 0, +1}")
        currents = self.config.v_read * (d.astype(float) @ self.conductance)
        driven = d != 0
        # uS * V^2 * s = 1e-6 J units; convert to nJ.
        energy_nj = float(
            self.config.v_read ** 2
            * self.conductance[driven, :].sum()
            * self.config.t_read
            * 1e3
        )
        self.ledger.record("inference", tag, -1, -1, energy_nj)
        return currents

    def inject_fault(self, row: int, col: int, conductance: float) -> None:
        """Force a cell's conductance directly; logged but free of energy."""
        self._check_coords(row, col)
        self.conductance[row, col] = float(conductance)
        self.ledger.record("injected", "inject", row, col, 0.0)

    def snapshot_csv(self) -> str:
        """Row-major CSV dump of the conductance grid, 3 decimal places."""
        lines = [
            ",".join(f"{value:.3f}" for value in row_values)
            for row_values in self.conductance
        ]
        return "\n".join(lines) + "\n"


def new_crossbar(config: DeviceConfig, seed: int) -> Crossbar:
    """Fresh crossbar with every cell in the low-conductance state."""
    return Crossbar(config, seed)


def ideal_config(**overrides) -> DeviceConfig:
    """Noise-free variant of the default config (handy for exact tests).

    Writes always succeed and land at nominal values, energy noise is off, and
    v_read defaults to 0.25 V so current ratios are exactly representable in
    binary floating point.
    """
    base = dict(
        p_cell_success=1.0,
        energy_noise_sigma=0.0,
        shortcut_writes=False,
        v_read=0.25,
    )
    base.update(overrides)
    return DeviceConfig(**base)
