"""Scenario files: human-editable JSON binding geometry to the pipeline.

Keys carry explicit units in their names; unknown keys are rejected so a
typo cannot silently fall back to a default.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

from . import circuit, eddy, magnetics
from .characteristics import NoiseSpec, SweepSpec
from .circuit import DriveSpec, MetalReceiver, TxCoil, couplings_from_coaxial
from .errors import ScenarioError


def _check_keys(section: dict, allowed: set[str], where: str) -> None:
    unknown = set(section) - allowed
    if unknown:
        raise ScenarioError(f"unknown keys in {where}: {sorted(unknown)}")


def _require(section: dict, key: str, where: str):
    if key not in section:
        raise ScenarioError(f"missing key {key!r} in {where}")
    return section[key]


@dataclass(frozen=True)
class TransmitterSpec:
    half_side_m: float
    turns: int
    resistance_ohm: float
    inductance_h: float
    capacitance_f: float | None = None


@dataclass(frozen=True)
class ReceiverCoilSpec:
    label: str
    load_ohm: float
    half_side_m: float
    turns: int
    resistance_ohm: float
    inductance_h: float
    distance_m: float
    capacitance_f: float | None = None


@dataclass(frozen=True)
class MetalPlateSpec:
    label: str
    material: str
    half_side_m: float
    distance_m: float
    mu_r: float | None = None


@dataclass(frozen=True)
class SweepSection:
    i_min_a: float
    i_max_a: float
    steps: int
    azimuth_rad: float


@dataclass(frozen=True)
class DetectionSection:
    degree: int = 2
    gate_amps: float = 3.0
    test_currents_a: tuple[float, ...] = (3.0, 6.0, 9.0)


@dataclass(frozen=True)
class Scenario:
    frequency_hz: float
    transmitter: TransmitterSpec
    receiver_coils: tuple[ReceiverCoilSpec, ...]
    metal_plates: tuple[MetalPlateSpec, ...]
    sweep: SweepSection
    noise: NoiseSpec
    detection: DetectionSection
    materials_db: str | None = None

    @property
    def omega(self) -> float:
        return 2.0 * math.pi * self.frequency_hz


def load_scenario(path=None) -> Scenario:
    """Load and validate a scenario file; None loads the bundled repro setup."""
    if path is None:
        text = resources.files("wptmod.data").joinpath("paper_repro.json").read_text()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ScenarioError(f"cannot read scenario file: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario file is not valid JSON: {exc}") from exc
    return parse_scenario(raw)


def parse_scenario(raw: dict) -> Scenario:
    _check_keys(
        raw,
        {
            "frequency_hz",
            "transmitter",
            "receiver_coils",
            "metal_plates",
            "sweep",
            "noise",
            "detection",
            "materials_db",
        },
        "scenario",
    )
    freq = _require(raw, "frequency_hz", "scenario")
    if not freq > 0.0:
        raise ScenarioError("frequency_hz must be > 0")

    tx_raw = _require(raw, "transmitter", "scenario")
    _check_keys(
        tx_raw,
        {"half_side_m", "turns", "resistance_ohm", "inductance_h", "capacitance_f"},
        "transmitter",
    )
    tx = TransmitterSpec(
        half_side_m=_require(tx_raw, "half_side_m", "transmitter"),
        turns=_require(tx_raw, "turns", "transmitter"),
        resistance_ohm=_require(tx_raw, "resistance_ohm", "transmitter"),
        inductance_h=_require(tx_raw, "inductance_h", "transmitter"),
        capacitance_f=tx_raw.get("capacitance_f"),
    )

    coils = []
    for idx, entry in enumerate(raw.get("receiver_coils", [])):
        where = f"receiver_coils[{idx}]"
        _check_keys(
            entry,
            {
                "label",
                "load_ohm",
                "half_side_m",
                "turns",
                "resistance_ohm",
                "inductance_h",
                "distance_m",
                "capacitance_f",
            },
            where,
        )
        coils.append(
            ReceiverCoilSpec(
                label=_require(entry, "label", where),
                load_ohm=_require(entry, "load_ohm", where),
                half_side_m=_require(entry, "half_side_m", where),
                turns=_require(entry, "turns", where),
                resistance_ohm=_require(entry, "resistance_ohm", where),
                inductance_h=_require(entry, "inductance_h", where),
                distance_m=_require(entry, "distance_m", where),
                capacitance_f=entry.get("capacitance_f"),
            )
        )

    plates = []
    for idx, entry in enumerate(raw.get("metal_plates", [])):
        where = f"metal_plates[{idx}]"
        _check_keys(
            entry, {"label", "material", "half_side_m", "distance_m", "mu_r"}, where
        )
        plates.append(
            MetalPlateSpec(
                label=_require(entry, "label", where),
                material=_require(entry, "material", where),
                half_side_m=_require(entry, "half_side_m", where),
                distance_m=_require(entry, "distance_m", where),
                mu_r=entry.get("mu_r"),
            )
        )

    sweep_raw = _require(raw, "sweep", "scenario")
    _check_keys(sweep_raw, {"i_min_a", "i_max_a", "steps", "azimuth_rad"}, "sweep")
    sweep = SweepSection(
        i_min_a=_require(sweep_raw, "i_min_a", "sweep"),
        i_max_a=_require(sweep_raw, "i_max_a", "sweep"),
        steps=_require(sweep_raw, "steps", "sweep"),
        azimuth_rad=_require(sweep_raw, "azimuth_rad", "sweep"),
    )

    noise_raw = raw.get("noise", {})
    _check_keys(noise_raw, {"relative_sigma", "seed"}, "noise")
    try:
        noise = NoiseSpec(
            relative_sigma=noise_raw.get("relative_sigma", 0.01),
            seed=noise_raw.get("seed", 0),
        )
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc

    det_raw = raw.get("detection", {})
    _check_keys(det_raw, {"degree", "gate_amps", "test_currents_a"}, "detection")
    detection = DetectionSection(
        degree=det_raw.get("degree", 2),
        gate_amps=det_raw.get("gate_amps", 3.0),
        test_currents_a=tuple(det_raw.get("test_currents_a", (3.0, 6.0, 9.0))),
    )

    try:
        return Scenario(
            frequency_hz=freq,
            transmitter=tx,
            receiver_coils=tuple(coils),
            metal_plates=tuple(plates),
            sweep=sweep,
            noise=noise,
            detection=detection,
            materials_db=raw.get("materials_db"),
        )
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc


# -- builders binding a scenario to the physics modules ----------------------


def build_tx_coil(sc: Scenario) -> TxCoil:
    t = sc.transmitter
    cap = t.capacitance_f
    if cap is None:
        cap = circuit.resonant_capacitance(t.inductance_h, sc.omega)
    try:
        return TxCoil(t.resistance_ohm, t.inductance_h, cap)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc


def tx_loop(sc: Scenario) -> magnetics.SquareLoop:
    try:
        return magnetics.SquareLoop(sc.transmitter.half_side_m, sc.transmitter.turns)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc


def coil_coupling(sc: Scenario, spec: ReceiverCoilSpec) -> float:
    """Coil-to-coil coupling from the Neumann ground-truth integral."""
    pair = magnetics.CoaxialPair(
        primary=tx_loop(sc),
        secondary_half_side=spec.half_side_m,
        separation=spec.distance_m,
        secondary_turns=spec.turns,
    )
    return magnetics.mutual_inductance_neumann(pair)


def plate_coupling(sc: Scenario, spec: MetalPlateSpec) -> float:
    return magnetics.mutual_inductance_coil_plate(
        tx_loop(sc), spec.half_side_m, spec.distance_m
    )


def plate_material(sc: Scenario, spec: MetalPlateSpec) -> eddy.MetalMaterial:
    db = eddy.load_materials(sc.materials_db)
    key = spec.material.lower()
    if key not in db:
        raise ScenarioError(f"unknown material {spec.material!r}")
    mat = db[key]
    if spec.mu_r is not None:
        mat = eddy.MetalMaterial(mat.name, mat.conductivity, spec.mu_r)
    return mat


def plate_eddy_geometry(sc: Scenario, spec: MetalPlateSpec) -> eddy.EddyGeometry:
    # kernel length scale saturates at whichever of plate and coil is smaller
    scale = min(spec.half_side_m, sc.transmitter.half_side_m)
    return eddy.EddyGeometry(
        coil_half_side=scale,
        coil_turns=sc.transmitter.turns,
        plate_distance=spec.distance_m,
        angular_frequency=sc.omega,
    )


def plate_receiver(sc: Scenario, spec: MetalPlateSpec) -> MetalReceiver:
    imp = eddy.plate_impedance(plate_eddy_geometry(sc, spec), plate_material(sc, spec))
    return MetalReceiver(r_m=imp.r_m, l_m=imp.l_m)


def coil_receiver(sc: Scenario, spec: ReceiverCoilSpec) -> circuit.CoilReceiver:
    cap = spec.capacitance_f
    if cap is None:
        cap = circuit.resonant_capacitance(spec.inductance_h, sc.omega)
    try:
        return circuit.CoilReceiver(
            resistance=spec.resistance_ohm,
            inductance=spec.inductance_h,
            capacitance=cap,
            load=spec.load_ohm,
        )
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc


def _drive_template(sc: Scenario) -> DriveSpec:
    return DriveSpec(
        angular_frequency=sc.omega, amplitude=0.0, steering=sc.sweep.azimuth_rad
    )


def build_sweeps(sc: Scenario) -> list[SweepSpec]:
    """All labeled sweeps of the scenario; labels carry the class prefix."""
    tx = build_tx_coil(sc)
    drive = _drive_template(sc)
    sweeps = []
    for spec in sc.receiver_coils:
        m = coil_coupling(sc, spec)
        sweeps.append(
            SweepSpec(
                i_min=sc.sweep.i_min_a,
                i_max=sc.sweep.i_max_a,
                steps=sc.sweep.steps,
                drive=drive,
                receiver=coil_receiver(sc, spec),
                couplings=couplings_from_coaxial(m, sc.sweep.azimuth_rad),
                tx=tx,
                label=f"coil:{spec.label}",
            )
        )
    for spec in sc.metal_plates:
        m = plate_coupling(sc, spec)
        sweeps.append(
            SweepSpec(
                i_min=sc.sweep.i_min_a,
                i_max=sc.sweep.i_max_a,
                steps=sc.sweep.steps,
                drive=drive,
                receiver=plate_receiver(sc, spec),
                couplings=couplings_from_coaxial(m, sc.sweep.azimuth_rad),
                tx=tx,
                label=f"metal:{spec.label}",
            )
        )
    return sweeps


def generate_test_samples(
    sc: Scenario, seed: int | None = None, sweeps: list[SweepSpec] | None = None
):
    """Noisy labeled test points at the scenario's test currents.

    Returns (true_label, label, Sample) triples; noise draws follow a fixed
    receiver-major, current-minor order so a seed pins the whole batch.
    Pass precomputed sweeps to skip rebuilding couplings and impedances.
    """
    import numpy as np

    from .characteristics import evaluate_point
    from .detection import Sample

    rng = np.random.default_rng(sc.noise.seed if seed is None else seed)
    sigma = sc.noise.relative_sigma
    samples = []
    for sweep in sweeps if sweeps is not None else build_sweeps(sc):
        true_label, name = sweep.label.split(":", 1)
        for i_tx in sc.detection.test_currents_a:
            u, p = evaluate_point(sweep, i_tx)
            eps_u, eps_p = rng.normal(0.0, sigma, 2)
            samples.append(
                (
                    true_label,
                    name,
                    Sample(
                        i_tx=i_tx,
                        u_tx=max(u * (1.0 + eps_u), 0.0),
                        p_in=max(p * (1.0 + eps_p), 0.0),
                    ),
                )
            )
    return samples
