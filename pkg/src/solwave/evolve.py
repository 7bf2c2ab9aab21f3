"""Leapfrog time evolution of the field equation on a periodic grid.

The second-order update

    psi^{m+1} = 2 psi^m - psi^{m-1} + dt^2 (Lap_h psi^m + f(psi^m))

uses the standard 2nd-order Laplacian stencil under periodic wrap; the first
step is bootstrapped by the Taylor expansion from (psi^0, psi_dot^0), and the
time derivative is reconstructed centrally as (psi^{m+1} - psi^{m-1})/(2 dt),
so each state carries a consistent (psi, psi_dot) pair at its own time at the
cost of one stencil evaluation per step.  Blow-up is reported (NonFinite),
not prevented: focusing nonlinearities can and should fail loudly for
non-soliton data.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field

import numpy as np

from .boost import FieldSample, measure_energy, measure_momentum, _energy_density
from .potential import PotentialSpec, evaluate_force

__all__ = [
    "CFL_NUMBER",
    "CflViolation",
    "NonFinite",
    "ZeroField",
    "DiagnosticPoint",
    "EvolutionState",
    "step",
    "evolve",
    "center_of_energy",
    "diagnostics_to_csv",
]

CFL_NUMBER = 0.5


class CflViolation(ValueError):
    """Time step exceeds the stability bound CFL * min h_j."""


class NonFinite(RuntimeError):
    """Field left the finite range (blow-up or instability)."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class ZeroField(RuntimeError):
    """Center of energy is undefined for an (almost) zero field."""


@dataclass(frozen=True)
class DiagnosticPoint:
    time: float
    energy: float
    momentum: np.ndarray
    center_of_energy: np.ndarray


@dataclass
class EvolutionState:
    """Field state at one time level plus the memory the two-step scheme needs.

    sample holds a consistent (psi, psi_dot) pair at sample.time; prev_psi is
    the previous level (None before the first step); _psi_next caches the
    already-computed next level so the centered psi_dot reconstruction costs
    nothing extra.
    """

    sample: FieldSample
    prev_psi: np.ndarray | None = None
    diagnostics: list[DiagnosticPoint] = field(default_factory=list)
    _psi_next: np.ndarray | None = None

    @classmethod
    def from_sample(cls, sample: FieldSample) -> "EvolutionState":
        return cls(sample=sample)


def _laplacian(psi: np.ndarray, spacing) -> np.ndarray:
    out = np.zeros_like(psi)
    for axis, h in enumerate(spacing):
        out += (np.roll(psi, 1, axis=axis) + np.roll(psi, -1, axis=axis)
                - 2.0 * psi) / (h * h)
    return out


def step(state: EvolutionState, spec: PotentialSpec, dt: float) -> EvolutionState:
    """Advance one leapfrog step; returns a new state one dt later.

    Raises CflViolation when dt > 0.5 min h_j and NonFinite (with the failing
    time attached) when the update leaves the finite range.
    """
    grid = state.sample.grid
    if grid.n > 2:
        raise ValueError("time evolution supports n = 1 and n = 2 only")
    h_min = min(grid.spacing)
    if dt > CFL_NUMBER * h_min:
        raise CflViolation(f"dt={dt} exceeds {CFL_NUMBER} * min h = {CFL_NUMBER * h_min}")

    psi = state.sample.psi
    t = state.sample.time
    # blow-up produces inf/nan mid-update before the explicit check below;
    # keep numpy quiet about it
    with np.errstate(invalid="ignore", over="ignore"):
        if state._psi_next is None:
            accel = _laplacian(psi, grid.spacing) + evaluate_force(spec, psi)
            psi_cur_next = psi + dt * state.sample.psi_dot + 0.5 * dt * dt * accel
        else:
            psi_cur_next = state._psi_next

        accel_next = _laplacian(psi_cur_next, grid.spacing) + evaluate_force(spec, psi_cur_next)
        psi_ahead = 2.0 * psi_cur_next - psi + dt * dt * accel_next
    if not np.all(np.isfinite(psi_ahead)):
        raise NonFinite(f"field became non-finite at t={t + 2 * dt:.6g}", time=t + 2 * dt)

    new_sample = FieldSample(
        grid=grid,
        time=t + dt,
        psi=psi_cur_next,
        psi_dot=(psi_ahead - psi) / (2.0 * dt),
        source=state.sample.source,
    )
    return EvolutionState(
        sample=new_sample,
        prev_psi=psi,
        diagnostics=state.diagnostics,
        _psi_next=psi_ahead,
    )


def center_of_energy(sample: FieldSample, spec: PotentialSpec) -> np.ndarray:
    """Energy-density-weighted mean position, by grid sums."""
    density = _energy_density(sample, spec)
    total = float(np.sum(density)) * sample.grid.cell_volume
    if total < 1e-20:
        raise ZeroField(f"total energy {total:.3e} below 1e-20")
    out = np.empty(sample.grid.n)
    for axis, x in enumerate(sample.grid.axes()):
        shape = [1] * sample.grid.n
        shape[axis] = -1
        out[axis] = float(np.sum(density * x.reshape(shape))) * sample.grid.cell_volume / total
    return out


def evolve(initial: FieldSample, spec: PotentialSpec, t_final: float, dt: float,
           diag_stride: int = 10, snapshot_stride: int | None = None,
           snapshot_dir=None) -> EvolutionState:
    """Step the field from initial to t_final, recording diagnostics
    (time, E, P, center of energy) every diag_stride steps.

    With snapshot_stride set, the full field is written in the flat binary
    sample layout to snapshot_dir every snapshot_stride steps (plus the
    initial state)."""
    if dt <= 0 or t_final < 0:
        raise ValueError("need dt > 0 and t_final >= 0")
    n_steps = int(round(t_final / dt))
    state = EvolutionState.from_sample(initial)

    def record(st):
        st.diagnostics.append(DiagnosticPoint(
            time=st.sample.time,
            energy=measure_energy(st.sample, spec),
            momentum=measure_momentum(st.sample),
            center_of_energy=center_of_energy(st.sample, spec),
        ))

    def snapshot(st, m):
        if snapshot_stride is not None and snapshot_dir is not None:
            from .boost import save_sample
            save_sample(st.sample, os.path.join(os.fspath(snapshot_dir),
                                                f"snapshot_{m:08d}.bin"))

    record(state)
    snapshot(state, 0)
    for m in range(1, n_steps + 1):
        state = step(state, spec, dt)
        if m % diag_stride == 0 or m == n_steps:
            record(state)
        if snapshot_stride is not None and m % snapshot_stride == 0:
            snapshot(state, m)
    return state


def diagnostics_to_csv(diagnostics: list[DiagnosticPoint], path) -> None:
    n = diagnostics[0].momentum.size if diagnostics else 0
    header = (["time", "E"] + [f"P{j+1}" for j in range(n)]
              + [f"X{j+1}" for j in range(n)])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for d in diagnostics:
            writer.writerow([f"{d.time:.17g}", f"{d.energy:.17g}"]
                            + [f"{x:.17g}" for x in d.momentum]
                            + [f"{x:.17g}" for x in d.center_of_energy])
