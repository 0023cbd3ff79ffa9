"""Characteristic U-I and P-I curves of a receiver under a current sweep.

A sweep holds the steering angle at the receiver azimuth (maximal coupling
projection) and records, for each transmitter current, the reported coil
voltage magnitude and the system input power.  Multiplicative Gaussian
noise can be layered on to mimic measured data.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, replace

import numpy as np

from .circuit import (
    Couplings,
    DriveSpec,
    Receiver,
    TxCoil,
    default_tx_coil,
    input_power,
    transmitter_voltages,
)


@dataclass(frozen=True)
class SweepSpec:
    """Transmitter-current sweep for one receiver configuration."""

    i_min: float
    i_max: float
    steps: int
    drive: DriveSpec  # template; amplitude is overridden per sweep point
    receiver: Receiver
    couplings: Couplings
    tx: TxCoil | None = None
    label: str = ""

    def __post_init__(self):
        if not (0.0 <= self.i_min < self.i_max):
            raise ValueError("require 0 <= i_min < i_max")
        if self.steps < 2:
            raise ValueError("steps must be >= 2")


@dataclass(frozen=True)
class CharacteristicCurve:
    """Sampled (current, voltage, power) locus for one labeled receiver."""

    label: str
    i_tx: np.ndarray  # [A], strictly increasing
    u_tx: np.ndarray  # [V], reported coil voltage magnitude
    p_in: np.ndarray  # [W]
    u_a: np.ndarray | None = None  # raw per-coil voltage magnitudes
    u_b: np.ndarray | None = None

    def __post_init__(self):
        for name in ("i_tx", "u_tx", "p_in"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if not (len(self.i_tx) == len(self.u_tx) == len(self.p_in)):
            raise ValueError("curve arrays must have equal length")
        if np.any(np.diff(self.i_tx) <= 0.0):
            raise ValueError("i_tx must be strictly increasing")
        if np.any(self.u_tx < 0.0) or np.any(self.p_in < 0.0):
            raise ValueError("u_tx and p_in must be nonnegative")

    @property
    def points(self) -> list[tuple[float, float, float]]:
        return list(zip(self.i_tx.tolist(), self.u_tx.tolist(), self.p_in.tolist()))


@dataclass(frozen=True)
class NoiseSpec:
    """Multiplicative relative Gaussian noise, reproducible from the seed."""

    relative_sigma: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if self.relative_sigma < 0.0:
            raise ValueError("relative_sigma must be >= 0")


def sweep_curve(spec: SweepSpec) -> CharacteristicCurve:
    """Evaluate the noiseless characteristic curve for one receiver.

    The reported u_tx is the voltage magnitude of the coil carrying the
    larger share of the drive current at the sweep steering angle (coil A
    on ties); both coil voltages are retained in the raw record.
    """
    tx = spec.tx or default_tx_coil(omega=spec.drive.angular_frequency)
    currents = np.linspace(spec.i_min, spec.i_max, spec.steps)
    use_coil_a = abs(math.sin(spec.drive.steering)) >= abs(math.cos(spec.drive.steering))
    u_sel = np.empty_like(currents)
    u_a_abs = np.empty_like(currents)
    u_b_abs = np.empty_like(currents)
    p = np.empty_like(currents)
    for idx, amp in enumerate(currents):
        drive = replace(spec.drive, amplitude=float(amp))
        ua, ub = transmitter_voltages(drive, spec.couplings, spec.receiver, tx)
        u_a_abs[idx] = abs(ua)
        u_b_abs[idx] = abs(ub)
        u_sel[idx] = u_a_abs[idx] if use_coil_a else u_b_abs[idx]
        p[idx] = input_power(drive, spec.couplings, spec.receiver, tx)
    return CharacteristicCurve(
        label=spec.label, i_tx=currents, u_tx=u_sel, p_in=p, u_a=u_a_abs, u_b=u_b_abs
    )


def evaluate_point(spec: SweepSpec, i_tx: float) -> tuple[float, float]:
    """Noiseless (u_tx, p_in) of the sweep configuration at one current."""
    tx = spec.tx or default_tx_coil(omega=spec.drive.angular_frequency)
    drive = replace(spec.drive, amplitude=float(i_tx))
    ua, ub = transmitter_voltages(drive, spec.couplings, spec.receiver, tx)
    use_coil_a = abs(math.sin(spec.drive.steering)) >= abs(math.cos(spec.drive.steering))
    u = abs(ua) if use_coil_a else abs(ub)
    return u, input_power(drive, spec.couplings, spec.receiver, tx)


def add_noise(curve: CharacteristicCurve, noise: NoiseSpec) -> CharacteristicCurve:
    """Scale u_tx and p_in by independent (1 + eps) draws; currents stay exact."""
    if noise.relative_sigma == 0.0:
        return curve
    rng = np.random.default_rng(noise.seed)
    eps_u = rng.normal(0.0, noise.relative_sigma, len(curve.i_tx))
    eps_p = rng.normal(0.0, noise.relative_sigma, len(curve.i_tx))
    return CharacteristicCurve(
        label=curve.label,
        i_tx=curve.i_tx,
        u_tx=np.maximum(curve.u_tx * (1.0 + eps_u), 0.0),
        p_in=np.maximum(curve.p_in * (1.0 + eps_p), 0.0),
        u_a=curve.u_a,
        u_b=curve.u_b,
    )


def curves_to_csv(curves: list[CharacteristicCurve]) -> str:
    """Render curves in the interchange CSV layout, one row per point."""
    out = io.StringIO()
    out.write("label,i_tx_A,u_tx_V,p_in_W\n")
    for curve in curves:
        for i, u, p in zip(curve.i_tx, curve.u_tx, curve.p_in):
            out.write(f"{curve.label},{i:.12f},{u:.12f},{p:.12f}\n")
    return out.getvalue()


def curves_from_csv(text: str) -> list[CharacteristicCurve]:
    """Parse the interchange CSV layout back into curves (grouped by label)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "label,i_tx_A,u_tx_V,p_in_W":
        raise ValueError("missing or malformed curve CSV header")
    grouped: dict[str, list[tuple[float, float, float]]] = {}
    order: list[str] = []
    for ln in lines[1:]:
        label, i, u, p = ln.split(",")
        if label not in grouped:
            grouped[label] = []
            order.append(label)
        grouped[label].append((float(i), float(u), float(p)))
    curves = []
    for label in order:
        pts = grouped[label]
        curves.append(
            CharacteristicCurve(
                label=label,
                i_tx=np.array([p[0] for p in pts]),
                u_tx=np.array([p[1] for p in pts]),
                p_in=np.array([p[2] for p in pts]),
            )
        )
    return curves
