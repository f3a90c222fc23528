"""Transverse-field Ising ring, H = -sum_j [lambda sx_j sx_{j+1} + sz_j].

Free-fermion solution on a ring of N sites (N even) at coupling lambda
(in units of the transverse field) and temperature T.  The parity sector
fixes the momentum grid: half-odd-integer multiples of 2pi/N in the even
(P = +1) sector, integers in the odd sector.  The finite-temperature
formulas are the unprojected single-sector thermal averages; the sector
enters only through the momentum grid, and even/odd differences are
O(1/N).

Correlations at separation r (lattice constants, r <= N/2):

    <sx_0 sx_r> = det[ a_{i-j-1} ]_{r x r}
    <sy_0 sy_r> = det[ a_{i-j+1} ]_{r x r}
    <sz_0 sz_r> = <sz>^2 - a_r a_{-r}

where a_n are the Wick-contraction coefficients below and <sz> = -a_0.
The two-site reduced state is block diagonal in the parity of the pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .density import DensityMatrix, make_density_matrix, mutual_information
from .errors import ModelConsistencyError, ValidationError
from .numerics import ToeplitzSequence, toeplitz_determinant

SECTORS = ("even", "odd")


@dataclass(frozen=True)
class TfimParams:
    """One parameter point: coupling, temperature, ring size, separation."""

    coupling: float
    temperature: float
    sites: int
    separation: int
    sector: str = "even"

    def __post_init__(self):
        if self.coupling < 0:
            raise ValueError("coupling must be >= 0")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.sites < 4 or self.sites % 2:
            raise ValueError("sites must be even and >= 4")
        if not 1 <= self.separation <= self.sites // 2:
            raise ValueError("separation must be in [1, sites/2]")
        if self.sector not in SECTORS:
            raise ValueError(f"sector must be one of {SECTORS}")


@dataclass(frozen=True)
class CorrelationSet:
    """<sz>, <sx sx>, <sy sy>, <sz sz> at one parameter point."""

    mz: float
    gxx: float
    gyy: float
    gzz: float

    def __post_init__(self):
        for name in ("mz", "gxx", "gyy", "gzz"):
            v = getattr(self, name)
            if not -1.0 - 1e-8 <= v <= 1.0 + 1e-8:
                raise ModelConsistencyError(f"{name} = {v:.6g} outside [-1, 1]")


def momenta(sites: int, sector: str = "even") -> np.ndarray:
    """Momentum grid 2 pi q / N; q half-odd (even sector) or integer (odd)."""
    if sites % 2:
        raise ValueError("sites must be even")
    if sector == "even":
        q = np.arange(-sites // 2, sites // 2) + 0.5
    elif sector == "odd":
        q = np.arange(-sites // 2 + 1, sites // 2 + 1).astype(float)
    else:
        raise ValueError(f"sector must be one of {SECTORS}")
    return 2.0 * np.pi * q / sites


def dispersion(coupling: float, phi) -> np.ndarray:
    """omega = sqrt(1 + lambda^2 - 2 lambda cos phi) >= |1 - lambda|."""
    if coupling < 0:
        raise ValueError("coupling must be >= 0")
    return np.sqrt(1.0 + coupling**2 - 2.0 * coupling * np.cos(phi))


def _thermal_factor(coupling, temperature, phi):
    """tanh(omega/T)/omega, with the T = 0 limit tanh -> 1 taken exactly."""
    omega = dispersion(coupling, phi)
    if temperature == 0:
        if np.any(omega < 1e-12):
            raise ValueError(
                "gapless momentum at T = 0 (odd sector at coupling 1)"
            )
        return 1.0 / omega
    small = omega < 1e-8
    safe = np.where(small, 1.0, omega)
    return np.where(small, 1.0 / temperature, np.tanh(safe / temperature) / safe)


def magnetization_z(
    coupling: float, temperature: float, sites: int, sector: str = "even"
) -> float:
    """<sz> = (1/N) sum_phi (1 - lambda cos phi) tanh(omega/T)/omega."""
    phi = momenta(sites, sector)
    f = _thermal_factor(coupling, temperature, phi)
    return float(np.sum((1.0 - coupling * np.cos(phi)) * f) / sites)


def toeplitz_coefficient(
    coupling: float, temperature: float, sites: int, n: int, sector: str = "even"
) -> float:
    """Wick coefficient a_n generating the correlation determinants:

    a_n = (1/N) sum_phi cos(phi n)(lambda cos phi - 1) tanh(omega/T)/omega
        - (lambda/N) sum_phi sin(phi n) sin(phi) tanh(omega/T)/omega
    """
    if abs(n) > sites:
        raise ValueError("|n| must be <= sites")
    phi = momenta(sites, sector)
    f = _thermal_factor(coupling, temperature, phi)
    cos_sum = np.sum(np.cos(phi * n) * (coupling * np.cos(phi) - 1.0) * f)
    sin_sum = np.sum(np.sin(phi * n) * np.sin(phi) * f)
    return float((cos_sum - coupling * sin_sum) / sites)


def coefficient_window(
    coupling: float,
    temperature: float,
    sites: int,
    n_max: int,
    sector: str = "even",
) -> ToeplitzSequence:
    """a_n for |n| <= n_max as one vectorized pass over the momentum grid."""
    phi = momenta(sites, sector)
    f = _thermal_factor(coupling, temperature, phi)
    cos_part = (coupling * np.cos(phi) - 1.0) * f
    sin_part = coupling * np.sin(phi) * f
    ns = np.arange(-n_max, n_max + 1)
    vals = (
        np.cos(np.outer(ns, phi)) @ cos_part - np.sin(np.outer(ns, phi)) @ sin_part
    ) / sites
    return ToeplitzSequence(-n_max, vals.astype(complex))


def correlations(params: TfimParams) -> CorrelationSet:
    """All four correlation entries at one parameter point."""
    r = params.separation
    seq = coefficient_window(
        params.coupling, params.temperature, params.sites, r, params.sector
    )
    mz = -seq.coefficient(0).real
    gxx = toeplitz_determinant(seq, r, row_shift=-1)
    gyy = toeplitz_determinant(seq, r, row_shift=+1)
    gzz = mz * mz - seq.coefficient(r).real * seq.coefficient(-r).real
    return CorrelationSet(mz=mz, gxx=gxx, gyy=gyy, gzz=gzz)


def single_site_state(params: TfimParams) -> DensityMatrix:
    """diag((1+<sz>)/2, (1-<sz>)/2)."""
    mz = magnetization_z(
        params.coupling, params.temperature, params.sites, params.sector
    )
    return make_density_matrix(np.diag([(1 + mz) / 2, (1 - mz) / 2]), (2,))


def two_site_state(params: TfimParams) -> DensityMatrix:
    """Block-diagonal two-site reduced state.

    Outer block [[u+, z-], [z-, u-]] on {uu, dd}, inner block
    [[w, z+], [z+, w]] on {ud, du}, with u+- = (1 +- 2<sz> + gzz)/4,
    w = (1 - gzz)/4 and z+- = (gxx +- gyy)/4.  Marginals equal
    single_site_state by construction.
    """
    c = correlations(params)
    u_plus = (1.0 + 2.0 * c.mz + c.gzz) / 4.0
    u_minus = (1.0 - 2.0 * c.mz + c.gzz) / 4.0
    w = (1.0 - c.gzz) / 4.0
    z_plus = (c.gxx + c.gyy) / 4.0
    z_minus = (c.gxx - c.gyy) / 4.0
    rho = np.array(
        [
            [u_plus, 0.0, 0.0, z_minus],
            [0.0, w, z_plus, 0.0],
            [0.0, z_plus, w, 0.0],
            [z_minus, 0.0, 0.0, u_minus],
        ]
    )
    try:
        return make_density_matrix(rho, (2, 2))
    except ValidationError as exc:
        raise ModelConsistencyError(
            f"correlations {c} gave an invalid two-site state: {exc}"
        ) from exc


def correlation_mi(params: TfimParams) -> float:
    """Two-site mutual information, in bits."""
    return mutual_information(two_site_state(params))


def ground_energy(coupling: float, sites: int, sector: str = "even") -> float:
    """Sector vacuum energy -sum_phi omega_phi (exact for the even sector)."""
    return float(-np.sum(dispersion(coupling, momenta(sites, sector))))
