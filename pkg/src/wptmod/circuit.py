"""Phasor solution of the two-transmitter WPT circuit and its reduction.

The full model is three coupled KVL loops (coil A, coil B, receiver); the
reduced model replaces the orthogonal pair with a single coil coaxial to
the receiver.  Receivers are either a resonant coil with a resistive load
or a metal plate with equivalent series (R_m, L_m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EquivalenceViolationError, SingularityError

DEFAULT_FREQUENCY_HZ = 20e3
DEFAULT_OMEGA = 2.0 * math.pi * DEFAULT_FREQUENCY_HZ


@dataclass(frozen=True)
class TxCoil:
    """Series R-L-C transmitter branch."""

    resistance: float  # [ohm]
    inductance: float  # [H]
    capacitance: float  # [F]

    def __post_init__(self):
        if not (self.resistance > 0.0 and self.inductance > 0.0 and self.capacitance > 0.0):
            raise ValueError("TxCoil parameters must be strictly positive")

    def reactance(self, omega: float) -> float:
        return omega * self.inductance - 1.0 / (omega * self.capacitance)

    def is_resonant(self, omega: float, rel_tol: float = 1e-9) -> bool:
        return abs(self.reactance(omega)) <= rel_tol * omega * self.inductance

    def impedance(self, omega: float) -> complex:
        return self.resistance + 1j * self.reactance(omega)


def resonant_capacitance(inductance: float, omega: float = DEFAULT_OMEGA) -> float:
    """Series capacitance that nulls the branch reactance at omega."""
    return 1.0 / (omega * omega * inductance)


def default_tx_coil(
    resistance: float = 0.1,
    inductance: float = 10e-6,
    omega: float = DEFAULT_OMEGA,
) -> TxCoil:
    """10 uH coil resonated at the default 20 kHz operating frequency."""
    return TxCoil(resistance, inductance, resonant_capacitance(inductance, omega))


@dataclass(frozen=True)
class CoilReceiver:
    """Resonant receiver coil terminated with a resistive load."""

    resistance: float  # [ohm], coil copper loss
    inductance: float  # [H]
    capacitance: float  # [F]
    load: float  # [ohm]

    def __post_init__(self):
        if not (
            self.resistance > 0.0
            and self.inductance > 0.0
            and self.capacitance > 0.0
            and self.load > 0.0
        ):
            raise ValueError("CoilReceiver parameters must be strictly positive")

    def impedance(self, omega: float) -> complex:
        x = omega * self.inductance - 1.0 / (omega * self.capacitance)
        return self.resistance + self.load + 1j * x

    @property
    def dissipative_resistance(self) -> float:
        return self.resistance + self.load


@dataclass(frozen=True)
class MetalReceiver:
    """Metal plate seen as an equivalent series R-L branch."""

    r_m: float  # [ohm]
    l_m: float  # [H]

    def __post_init__(self):
        if self.r_m < 0.0:
            raise ValueError("r_m must be >= 0")

    def impedance(self, omega: float) -> complex:
        return self.r_m + 1j * omega * self.l_m

    @property
    def dissipative_resistance(self) -> float:
        return self.r_m


Receiver = CoilReceiver | MetalReceiver


@dataclass(frozen=True)
class DriveSpec:
    """Transmitter current drive: amplitude, steering direction, frequency."""

    angular_frequency: float = DEFAULT_OMEGA
    amplitude: float = 0.0  # [A], composite current I
    steering: float = 0.0  # [rad]
    phase_offset: float = 0.0  # [rad]

    def __post_init__(self):
        if self.amplitude < 0.0:
            raise ValueError("amplitude must be >= 0")
        if not self.angular_frequency > 0.0:
            raise ValueError("angular_frequency must be > 0")


@dataclass(frozen=True)
class Couplings:
    """Mutual inductances between each transmitter coil and the receiver."""

    m_ac: float  # [H]
    m_bc: float  # [H]

    def __post_init__(self):
        if not (math.isfinite(self.m_ac) and math.isfinite(self.m_bc)):
            raise ValueError("couplings must be finite")

    @property
    def magnitude(self) -> float:
        return math.hypot(self.m_ac, self.m_bc)

    @property
    def axis_angle(self) -> float:
        """Angle whose sine aligns the drive with the receiver coupling."""
        return math.atan2(self.m_bc, self.m_ac)

    def projection(self, theta: float) -> float:
        """Effective coupling m_ac*sin(theta) + m_bc*cos(theta)."""
        return self.m_ac * math.sin(theta) + self.m_bc * math.cos(theta)


def couplings_from_coaxial(m: float, azimuth: float) -> Couplings:
    """Split a coaxial coupling onto the two orthogonal transmitter coils.

    Chosen so the coupling projection is maximal when the drive steering
    equals the receiver azimuth.
    """
    return Couplings(m_ac=m * math.sin(azimuth), m_bc=m * math.cos(azimuth))


@dataclass(frozen=True)
class PhasorSolution:
    """One steady-state operating point of the full or reduced circuit.

    For the reduced (single-coil) model, i_a/u_a hold the primary current
    and source voltage, i_c the secondary current, and u_p/u_s the mutual
    inductance voltages; i_b and u_b are zero.
    """

    i_a: complex
    i_b: complex
    i_c: complex
    u_a: complex
    u_b: complex
    p_in: float
    u_p: complex | None = None
    u_s: complex | None = None
    omega: float = DEFAULT_OMEGA
    drive: DriveSpec | None = None
    couplings: Couplings | None = None
    receiver: Receiver | None = None
    tx: TxCoil | None = None
    reduced_m: float | None = None


def current_decomposition(drive: DriveSpec) -> tuple[float, float]:
    """Split the composite drive amplitude onto the two coils by steering."""
    return (
        drive.amplitude * math.sin(drive.steering),
        drive.amplitude * math.cos(drive.steering),
    )


def _receiver_branch(drive: DriveSpec, couplings: Couplings, rx: Receiver):
    z2 = rx.impedance(drive.angular_frequency)
    if z2 == 0.0:
        raise SingularityError("receiver impedance is zero")
    return z2


def receiver_current(drive: DriveSpec, couplings: Couplings, rx: Receiver) -> complex:
    """Receiver current phasor induced by the steered transmitter drive."""
    z2 = _receiver_branch(drive, couplings, rx)
    w = drive.angular_frequency
    eff = couplings.magnitude * math.sin(drive.steering + couplings.axis_angle)
    return 1j * w * drive.amplitude * eff / z2


def input_power(
    drive: DriveSpec,
    couplings: Couplings,
    rx: Receiver,
    tx: TxCoil | None = None,
) -> float:
    """Total input power: transmitter copper loss plus receiver dissipation."""
    tx = tx or default_tx_coil(omega=drive.angular_frequency)
    i_c = receiver_current(drive, couplings, rx)
    return (
        drive.amplitude**2 * tx.resistance
        + abs(i_c) ** 2 * rx.dissipative_resistance
    )


def transmitter_voltages(
    drive: DriveSpec,
    couplings: Couplings,
    rx: Receiver,
    tx: TxCoil | None = None,
) -> tuple[complex, complex]:
    """Source voltage phasors on both transmitter coils, reflected term included."""
    tx = tx or default_tx_coil(omega=drive.angular_frequency)
    w = drive.angular_frequency
    z2 = _receiver_branch(drive, couplings, rx)
    z_tx = tx.impedance(w)
    proj = couplings.projection(drive.steering)
    s, c = math.sin(drive.steering), math.cos(drive.steering)
    u_a = drive.amplitude * (z_tx * s + w * w * couplings.m_ac * proj / z2)
    u_b = drive.amplitude * (z_tx * c + w * w * couplings.m_bc * proj / z2)
    return u_a, u_b


def solve_from_drive(
    drive: DriveSpec,
    couplings: Couplings,
    rx: Receiver,
    tx: TxCoil | None = None,
) -> PhasorSolution:
    """Current-driven operating point of the full two-transmitter system."""
    tx = tx or default_tx_coil(omega=drive.angular_frequency)
    i_a, i_b = current_decomposition(drive)
    i_c = receiver_current(drive, couplings, rx)
    u_a, u_b = transmitter_voltages(drive, couplings, rx, tx)
    p_in = (u_a * np.conj(i_a)).real + (u_b * np.conj(i_b)).real
    return PhasorSolution(
        i_a=i_a,
        i_b=i_b,
        i_c=i_c,
        u_a=u_a,
        u_b=u_b,
        p_in=p_in,
        omega=drive.angular_frequency,
        drive=drive,
        couplings=couplings,
        receiver=rx,
        tx=tx,
    )


def solve_full_system(
    u_a: complex,
    u_b: complex,
    couplings: Couplings,
    rx: Receiver,
    tx: TxCoil | tuple[TxCoil, TxCoil] | None = None,
    omega: float = DEFAULT_OMEGA,
) -> PhasorSolution:
    """Voltage-driven exact solve of the 3x3 coupled KVL system."""
    if tx is None:
        tx = default_tx_coil(omega=omega)
    tx_a, tx_b = tx if isinstance(tx, tuple) else (tx, tx)
    w = omega
    z_a = tx_a.impedance(w)
    z_b = tx_b.impedance(w)
    z_c = rx.impedance(w)
    m_ac, m_bc = couplings.m_ac, couplings.m_bc
    a = np.array(
        [
            [z_a, 0.0, -1j * w * m_ac],
            [0.0, z_b, -1j * w * m_bc],
            [1j * w * m_ac, 1j * w * m_bc, -z_c],
        ],
        dtype=complex,
    )
    rhs = np.array([u_a, u_b, 0.0], dtype=complex)
    if abs(np.linalg.det(a)) == 0.0:
        raise SingularityError("coupled KVL system matrix is singular")
    i_a, i_b, i_c = np.linalg.solve(a, rhs)
    p_in = (u_a * np.conj(i_a)).real + (u_b * np.conj(i_b)).real
    return PhasorSolution(
        i_a=complex(i_a),
        i_b=complex(i_b),
        i_c=complex(i_c),
        u_a=u_a,
        u_b=u_b,
        p_in=float(p_in),
        omega=omega,
        couplings=couplings,
        receiver=rx,
        tx=tx_a,
    )


def solve_single_coil(
    m: float,
    rx: Receiver,
    tx: TxCoil | None = None,
    u_i: complex | None = None,
    i_1: complex | None = None,
    omega: float = DEFAULT_OMEGA,
) -> PhasorSolution:
    """Operating point of the reduced single-coil model.

    Exactly one of u_i (voltage-driven) or i_1 (current-driven) must be
    given.  The reflected impedance w^2 M^2 / Z2 appears in series with the
    primary branch.
    """
    if (u_i is None) == (i_1 is None):
        raise ValueError("specify exactly one of u_i or i_1")
    tx = tx or default_tx_coil(omega=omega)
    w = omega
    z2 = rx.impedance(w)
    if z2 == 0.0:
        raise SingularityError("receiver impedance is zero")
    z1 = tx.impedance(w)
    z_total = z1 + (w * m) ** 2 / z2
    if i_1 is None:
        if z_total == 0.0:
            raise SingularityError("total primary impedance is zero")
        i_1 = u_i / z_total
    else:
        u_i = i_1 * z_total
    i_2 = 1j * w * m * i_1 / z2
    u_p = 1j * w * m * i_2
    u_s = 1j * w * m * i_1
    p_in = (u_i * np.conj(i_1)).real
    return PhasorSolution(
        i_a=complex(i_1),
        i_b=0.0,
        i_c=complex(i_2),
        u_a=complex(u_i),
        u_b=0.0,
        p_in=float(p_in),
        u_p=complex(u_p),
        u_s=complex(u_s),
        omega=omega,
        receiver=rx,
        tx=tx,
        reduced_m=m,
    )


@dataclass(frozen=True)
class EquivalenceConstants:
    """Scale factors relating the full system to its single-coil reduction."""

    k1: float
    k2: float
    k3: float
    k4: float
    k5: float
    k6: float

    def as_tuple(self) -> tuple[float, ...]:
        return (self.k1, self.k2, self.k3, self.k4, self.k5, self.k6)


def _real_ratio(num: complex, den: complex, tol: float) -> float:
    if den == 0.0:
        raise EquivalenceViolationError("degenerate operating point: zero denominator")
    ratio = num / den
    if abs(ratio.imag) > tol * max(abs(ratio), 1.0):
        raise EquivalenceViolationError(
            f"equivalence ratio {ratio} is not real within tolerance {tol:g}"
        )
    return ratio.real


def equivalence_constants(
    full: PhasorSolution,
    reduced: PhasorSolution,
    rel_tol: float = 1e-9,
) -> EquivalenceConstants:
    """Constants mapping a full-system solution onto a reduced solution.

    The voltage relation uses the unambiguous steering-weighted sum
    u_a*sin(theta) + u_b*cos(theta).  Raises EquivalenceViolationError when
    the six ratios are not mutually consistent (k1 = k2*k3 = k4*k5 and
    k3*k4 = k2*k6 within rel_tol).
    """
    if full.drive is None or full.couplings is None:
        raise ValueError("full solution must carry its drive and couplings")
    if reduced.reduced_m is None:
        raise ValueError("reduced solution must come from solve_single_coil")
    theta = full.drive.steering
    s, c = math.sin(theta), math.cos(theta)
    w = full.omega
    k1 = _real_ratio(full.u_a * s + full.u_b * c, reduced.u_a, rel_tol)
    k2 = _real_ratio(full.i_c, reduced.i_c, rel_tol)
    k3 = full.couplings.projection(theta) / reduced.reduced_m
    k4 = _real_ratio(full.drive.amplitude, reduced.i_a, rel_tol)
    k5 = _real_ratio(full.tx.impedance(w), reduced.tx.impedance(w), rel_tol)
    k6 = _real_ratio(
        full.receiver.impedance(w), reduced.receiver.impedance(reduced.omega), rel_tol
    )
    consts = EquivalenceConstants(k1, k2, k3, k4, k5, k6)
    scale = max(abs(v) for v in consts.as_tuple())
    if (
        abs(k1 - k2 * k3) > rel_tol * max(abs(k1), scale)
        or abs(k1 - k4 * k5) > rel_tol * max(abs(k1), scale)
        or abs(k3 * k4 - k2 * k6) > rel_tol * max(abs(k3 * k4), scale)
    ):
        raise EquivalenceViolationError(f"inconsistent equivalence constants: {consts}")
    return consts


def reduced_counterpart(full: PhasorSolution) -> PhasorSolution:
    """Construct the unit-constant reduced operating point of a full solution."""
    if full.drive is None or full.couplings is None:
        raise ValueError("full solution must carry its drive and couplings")
    m = full.couplings.projection(full.drive.steering)
    return solve_single_coil(
        m=m,
        rx=full.receiver,
        tx=full.tx,
        i_1=full.drive.amplitude,
        omega=full.omega,
    )


def energy_balance_residual(sol: PhasorSolution) -> float:
    """Relative mismatch between source power and resistive dissipation."""
    rx = sol.receiver
    tx = sol.tx
    dissipated = (
        abs(sol.i_a) ** 2 * tx.resistance
        + abs(sol.i_b) ** 2 * tx.resistance
        + abs(sol.i_c) ** 2 * rx.dissipative_resistance
    )
    scale = max(abs(sol.p_in), dissipated, 1e-300)
    return abs(sol.p_in - dissipated) / scale


def resonant_coil_receiver(
    resistance: float,
    load: float,
    inductance: float = 10e-6,
    omega: float = DEFAULT_OMEGA,
) -> CoilReceiver:
    """Receiver coil resonated at omega with the given copper loss and load."""
    return CoilReceiver(
        resistance=resistance,
        inductance=inductance,
        capacitance=resonant_capacitance(inductance, omega),
        load=load,
    )
