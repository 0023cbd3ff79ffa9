"""Equivalent series impedance of a metal plate in the transmitter field.

A plate exposed to the coil field behaves like a series R-L branch: the
resistance carries the eddy-current loss and the inductance the induced
current's flux contribution.  Both follow from semi-infinite spatial
frequency integrals of a material response kernel times an exponential
distance decay and a geometric Bessel weight.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np
from scipy.integrate import quad
from scipy.special import j1 as _scipy_j1

from .errors import ConvergenceError
from .magnetics import MU0

# max of |J1| on the real line, used for the truncation tail bound
_J1_SUP = 0.5819


@dataclass(frozen=True)
class MetalMaterial:
    """Bulk metal described by conductivity and relative permeability."""

    name: str
    conductivity: float  # [S/m]
    rel_permeability: float = 1.0
    rel_permeability_range: tuple[float, float] | None = None

    def __post_init__(self):
        if not self.conductivity > 0.0:
            raise ValueError("conductivity must be > 0")
        if self.rel_permeability < 1.0:
            raise ValueError("rel_permeability must be >= 1")


@dataclass(frozen=True)
class EddyGeometry:
    """Geometry and excitation for the plate impedance integrals."""

    coil_half_side: float  # [m], length scale entering the Bessel kernel
    coil_turns: int
    plate_distance: float  # [m], coil-to-plate separation
    angular_frequency: float  # [rad/s]

    def __post_init__(self):
        if not (
            self.coil_half_side > 0.0
            and self.coil_turns > 0
            and self.plate_distance > 0.0
            and self.angular_frequency > 0.0
        ):
            raise ValueError("all EddyGeometry fields must be strictly positive")


@dataclass(frozen=True)
class EddyImpedance:
    """Equivalent series resistance and inductance of a plate."""

    r_m: float  # [ohm]
    l_m: float  # [H]

    def __post_init__(self):
        if not (math.isfinite(self.r_m) and math.isfinite(self.l_m)):
            raise ValueError("EddyImpedance entries must be finite")
        if self.r_m < 0.0:
            raise ValueError("r_m must be >= 0")

    def impedance(self, omega: float) -> complex:
        return self.r_m + 1j * omega * self.l_m


def phi_k(k, geom: EddyGeometry, mat: MetalMaterial):
    """Complex material response at spatial frequency k (principal root).

    phi = (sqrt(k^2 + j*w*sigma*mu0*mur) - k*mur) / (same sqrt + k*mur).
    Bounded by 1 in magnitude with nonnegative imaginary part for any
    passive material, which keeps the loss resistance nonnegative.
    """
    k = np.asarray(k, dtype=float)
    if np.any(k < 0.0):
        raise ValueError("k must be >= 0")
    root = np.sqrt(
        k * k
        + 1j * geom.angular_frequency * mat.conductivity * MU0 * mat.rel_permeability
    )
    out = (root - k * mat.rel_permeability) / (root + k * mat.rel_permeability)
    return out if out.ndim else complex(out)


def bessel_j1(x):
    """Bessel function of the first kind, order 1 (odd in x)."""
    return _scipy_j1(x)


def geometry_factor(k, geom: EddyGeometry):
    """Squared Bessel kernel weight [N * a * J1(k a)]^2."""
    k = np.asarray(k, dtype=float)
    a = geom.coil_half_side
    out = (geom.coil_turns * a * bessel_j1(k * a)) ** 2
    return out if out.ndim else float(out)


def _tail_k_max(geom: EddyGeometry, estimate: float, floor: float) -> float:
    """Smallest k_max whose truncation tail is below 1e-12 of the estimate.

    |phi| <= 1, so the tail is bounded by sup(T) * exp(-2 k d) / (2 d).
    """
    d = geom.plate_distance
    sup_t = (geom.coil_turns * geom.coil_half_side * _J1_SUP) ** 2
    target = 1e-12 * max(abs(estimate), floor)
    return math.log(sup_t / (2.0 * d * target)) / (2.0 * d)


def plate_impedance(
    geom: EddyGeometry, mat: MetalMaterial, quad_tol: float = 1e-12
) -> EddyImpedance:
    """Evaluate the plate's equivalent (R_m, L_m) by adaptive quadrature.

    Both semi-infinite integrals are truncated at a k_max certified by the
    exponential tail bound; the truncation point is re-derived once from a
    first-pass estimate so the tail stays below 1e-12 of the result.
    """
    d = geom.plate_distance
    w = geom.angular_frequency

    def integrand_imag(k):
        return phi_k(k, geom, mat).imag * math.exp(-2.0 * k * d) * geometry_factor(k, geom)

    def integrand_real(k):
        return phi_k(k, geom, mat).real * math.exp(-2.0 * k * d) * geometry_factor(k, geom)

    # integrand peaks near the decay scale; seed subdivision points there
    k_peak = 1.0 / (2.0 * d)

    def integrate(f, k_max):
        pts = [p for p in (k_peak, 2.0 * k_peak, 10.0 * k_peak) if p < k_max]
        val, err = quad(
            f, 0.0, k_max, points=pts, limit=400, epsabs=0.0, epsrel=quad_tol
        )
        if not math.isfinite(val) or (val != 0.0 and err > 1e-6 * abs(val)):
            raise ConvergenceError(
                f"plate impedance quadrature error {err:g} too large for value {val:g}"
            )
        return val

    # first pass with a generous truncation, then certify
    k_max = 60.0 / (2.0 * d)
    raw_i = integrate(integrand_imag, k_max)
    raw_r = integrate(integrand_real, k_max)
    floor = (geom.coil_turns * geom.coil_half_side * _J1_SUP) ** 2 * 1e-30
    k_need = max(
        _tail_k_max(geom, raw_i, floor), _tail_k_max(geom, raw_r, floor)
    )
    if k_need > k_max:
        raw_i = integrate(integrand_imag, k_need)
        raw_r = integrate(integrand_real, k_need)
    return EddyImpedance(r_m=w * math.pi * MU0 * raw_i, l_m=math.pi * MU0 * raw_r)


def load_materials(path=None) -> dict[str, MetalMaterial]:
    """Load the material database, keyed by lowercase name and aliases.

    With no path, the bundled database seeded from standard metal
    properties (Cu, Al, Fe) is used.
    """
    if path is None:
        text = resources.files("wptmod.data").joinpath("materials.json").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    entries = json.loads(text)
    db: dict[str, MetalMaterial] = {}
    for entry in entries:
        rng = entry.get("mu_r_range")
        mat = MetalMaterial(
            name=entry["name"],
            conductivity=entry["conductivity_S_per_m"],
            rel_permeability=entry.get("mu_r", 1.0),
            rel_permeability_range=tuple(rng) if rng else None,
        )
        for key in [entry["name"], *entry.get("aliases", [])]:
            db[key.lower()] = mat
    return db
