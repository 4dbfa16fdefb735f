"""Device-parameter derivations and Hamiltonian rendering.

Four frames are supported:

* ``LAB`` -- bare energies on the diagonal plus the bus-qubit and qubit-NVCE
  couplings.
* ``RESONANT_INTERACTION`` -- interaction picture at common frequency; zero
  diagonal, time independent.
* ``DETUNED_INTERACTION`` -- interaction picture with the bus detuned from the
  qubits; the bus-qubit element rotates as ``g_j * exp(i delta_j t)``.
* ``EFFECTIVE_DISPERSIVE`` -- bus adiabatically eliminated; Stark shifts
  ``lambda_j`` on the qubits and a bus-mediated qubit-qubit exchange.

All frequencies are angular (rad/s, hbar = 1).  Inputs quoted in cyclic units
(Hz) should be converted with :func:`cyclic_to_angular` at the boundary.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass

import numpy as np

from .basis import BasisState, ExcitationBasis, bus, nvce, qubit
from .errors import ConfigurationError

__all__ = [
    "Frame",
    "DeviceParams",
    "CouplingGraph",
    "HamiltonianSpec",
    "cyclic_to_angular",
    "derive_bus_frequency",
    "derive_qubit_bus_coupling",
    "derive_qubit_frequency",
    "derive_nvce_gap",
    "render_hamiltonian",
    "toggle_site",
]

HBAR = 1.054571817e-34  # J s
BOHR_MAGNETON = 9.2740100783e-24  # J/T
NV_LANDE_FACTOR = 2.0028


def cyclic_to_angular(f_hz: float) -> float:
    """Convert a cyclic frequency in Hz to angular rad/s."""
    return 2.0 * math.pi * f_hz


class Frame(enum.Enum):
    LAB = "lab"
    RESONANT_INTERACTION = "resonant"
    DETUNED_INTERACTION = "detuned"
    EFFECTIVE_DISPERSIVE = "effective"


@dataclass(frozen=True)
class DeviceParams:
    """Physical device constants (SI units; frequencies angular)."""

    inductance: float  # H
    capacitance: float  # F
    mutual_inductances: tuple[float, ...]  # H, one per site
    persistent_current: float  # A
    zero_field_splitting: float = cyclic_to_angular(2.88e9)  # rad/s
    lande_factor: float = NV_LANDE_FACTOR
    bohr_magneton: float = BOHR_MAGNETON
    axial_field: float = 0.0  # T
    qubit_bias: tuple[float, ...] = ()  # rad/s per site
    qubit_gap: tuple[float, ...] = ()  # rad/s per site

    def __post_init__(self):
        if self.inductance <= 0 or self.capacitance <= 0:
            raise ValueError("inductance and capacitance must be positive")
        if self.persistent_current <= 0:
            raise ValueError("persistent current must be positive")
        if any(m < 0 for m in self.mutual_inductances):
            raise ValueError("mutual inductances must be >= 0")


def derive_bus_frequency(inductance: float, capacitance: float) -> float:
    """Resonance frequency of the LC mode, 1/sqrt(LC)."""
    if inductance <= 0 or capacitance <= 0:
        raise ValueError("inductance and capacitance must be positive")
    return 1.0 / math.sqrt(inductance * capacitance)


def derive_qubit_bus_coupling(
    mutual_inductance: float, persistent_current: float, omega: float, inductance: float
) -> float:
    """Bus-qubit coupling M * I_p * sqrt(omega / 2L)."""
    if inductance <= 0:
        raise ValueError("inductance must be positive")
    if omega <= 0:
        raise ValueError("bus frequency must be positive")
    return mutual_inductance * persistent_current * math.sqrt(omega / (2.0 * inductance))


def derive_qubit_frequency(bias: float, gap: float) -> float:
    """Flux-qubit level splitting sqrt(bias^2 + gap^2)."""
    return math.hypot(bias, gap)


def derive_nvce_gap(
    zero_field_splitting: float,
    lande_factor: float = NV_LANDE_FACTOR,
    bohr_magneton: float = BOHR_MAGNETON,
    axial_field: float = 0.0,
) -> float:
    """NVCE |g> -> |e> gap: zero-field splitting minus the axial Zeeman shift.

    The Zeeman term g_e * mu_B * B_z is an energy; dividing by hbar keeps the
    result in angular-frequency units alongside the splitting.
    """
    return zero_field_splitting - lande_factor * bohr_magneton * axial_field / HBAR


def _as_tuple(values, n: int, name: str) -> tuple[float, ...]:
    if np.isscalar(values):
        return (float(values),) * n
    out = tuple(float(v) for v in values)
    if len(out) != n:
        raise ConfigurationError(f"{name} must have length {n}, got {len(out)}")
    return out


@dataclass(frozen=True)
class CouplingGraph:
    """Per-site couplings and frequencies of the star-shaped circuit."""

    n_sites: int
    g: tuple[float, ...]  # bus-qubit coupling per site
    J: tuple[float, ...]  # qubit-NVCE coupling per site
    enabled: tuple[bool, ...] = ()
    omega: float = 0.0  # bus frequency (LAB frame)
    omega_q: tuple[float, ...] = ()  # qubit frequency per site (LAB frame)
    Omega: tuple[float, ...] = ()  # NVCE gap per site (LAB frame)

    def __post_init__(self):
        if self.n_sites < 1:
            raise ConfigurationError(f"n_sites must be >= 1, got {self.n_sites}")
        n = self.n_sites
        object.__setattr__(self, "g", _as_tuple(self.g, n, "g"))
        object.__setattr__(self, "J", _as_tuple(self.J, n, "J"))
        enabled = self.enabled if len(self.enabled) else (True,) * n
        if len(enabled) != n:
            raise ConfigurationError(f"enabled must have length {n}")
        object.__setattr__(self, "enabled", tuple(bool(e) for e in enabled))
        omega_q = self.omega_q if len(self.omega_q) else (0.0,) * n
        Omega = self.Omega if len(self.Omega) else (0.0,) * n
        object.__setattr__(self, "omega_q", _as_tuple(omega_q, n, "omega_q"))
        object.__setattr__(self, "Omega", _as_tuple(Omega, n, "Omega"))
        if any(v < 0 for v in self.g) or any(v < 0 for v in self.J):
            raise ConfigurationError("couplings g and J must be >= 0")


def toggle_site(graph: CouplingGraph, j: int, enabled: bool) -> CouplingGraph:
    """Return a copy of ``graph`` with site ``j``'s bus coupling switched.

    The qubit-NVCE coupling J_j is untouched; only the bus-qubit link is
    gated, mirroring flux-tuning a qubit in and out of resonance with the bus.
    """
    if not 1 <= j <= graph.n_sites:
        raise ConfigurationError(f"site index {j} out of range 1..{graph.n_sites}")
    flags = list(graph.enabled)
    flags[j - 1] = bool(enabled)
    return dataclasses.replace(graph, enabled=tuple(flags))


@dataclass(frozen=True)
class HamiltonianSpec:
    """A coupling graph plus the frame in which it should be rendered."""

    graph: CouplingGraph
    frame: Frame
    delta: tuple[float, ...] | None = None  # qubit-bus detuning (DETUNED frame)
    lam: tuple[float, ...] | None = None  # Stark shifts (EFFECTIVE frame)
    # Multiplier on the bus-induced qubit-qubit exchange.  1.0 is the physical
    # dispersive value; other values exist to probe sensitivity in tests.
    exchange_scale: float = 1.0

    def __post_init__(self):
        n = self.graph.n_sites
        if self.delta is not None:
            object.__setattr__(self, "delta", _as_tuple(self.delta, n, "delta"))
        if self.lam is not None:
            object.__setattr__(self, "lam", _as_tuple(self.lam, n, "lam"))
        if self.frame is Frame.DETUNED_INTERACTION and self.delta is None:
            raise ConfigurationError("DETUNED_INTERACTION frame requires delta")
        if self.frame is Frame.EFFECTIVE_DISPERSIVE:
            if self.lam is None and self.delta is None:
                raise ConfigurationError(
                    "EFFECTIVE_DISPERSIVE frame requires lam or delta"
                )
        if self.frame is Frame.RESONANT_INTERACTION:
            g = self.graph
            for j in range(n):
                if g.enabled[j] and not (
                    math.isclose(g.omega, g.omega_q[j], rel_tol=1e-12, abs_tol=1e-12)
                    and math.isclose(g.omega, g.Omega[j], rel_tol=1e-12, abs_tol=1e-12)
                ):
                    raise ConfigurationError(
                        "RESONANT_INTERACTION requires omega == omega_q_j == Omega_j "
                        f"for every enabled site (site {j + 1} violates it)"
                    )

    @property
    def time_dependent(self) -> bool:
        return self.frame is Frame.DETUNED_INTERACTION

    @property
    def needs_bus(self) -> bool:
        return self.frame is not Frame.EFFECTIVE_DISPERSIVE

    def stark_shift(self, j: int) -> float:
        """lambda_j = g_j^2 / delta_j (site index 1-based)."""
        if self.lam is not None:
            return self.lam[j - 1]
        return self.graph.g[j - 1] ** 2 / self.delta[j - 1]

    def exchange(self, j: int, k: int) -> float:
        """Bus-mediated qubit-qubit exchange between sites j and k.

        With detunings available this is the symmetrized dispersive rate
        (g_j g_k / 2)(1/delta_j + 1/delta_k); with Stark shifts given directly
        it is the geometric mean sqrt(lambda_j lambda_k), the equal-detuning
        special case.  Both reduce to lambda for equal couplings.
        """
        if self.lam is None:
            gj, gk = self.graph.g[j - 1], self.graph.g[k - 1]
            return 0.5 * gj * gk * (1.0 / self.delta[j - 1] + 1.0 / self.delta[k - 1])
        return math.sqrt(self.lam[j - 1] * self.lam[k - 1])


def _check_basis(spec: HamiltonianSpec, basis: ExcitationBasis):
    if basis.n_sites != spec.graph.n_sites:
        raise ConfigurationError(
            f"basis has {basis.n_sites} sites, graph has {spec.graph.n_sites}"
        )
    if basis.include_bus != spec.needs_bus:
        raise ConfigurationError(
            f"frame {spec.frame.name} requires include_bus={spec.needs_bus}, "
            f"basis has include_bus={basis.include_bus}"
        )


def render_hamiltonian(
    spec: HamiltonianSpec, basis: ExcitationBasis, t: float = 0.0
) -> np.ndarray:
    """Render the Hamiltonian as a Hermitian matrix over ``basis`` at time ``t``.

    The GROUND row and column stay zero off-diagonal in every frame: all
    generators conserve excitation number.
    """
    _check_basis(spec, basis)
    graph = spec.graph
    n = graph.n_sites
    dim = basis.dim
    H = np.zeros((dim, dim), dtype=complex)

    def i_of(node):
        return basis.index_of(BasisState.at(node))

    if spec.frame is Frame.LAB:
        # Zero-point: eigenvalue of the sigma_z-form terms on the all-down
        # state; the excited diagonals sit one gap above it.
        z0 = -(graph.omega + sum(graph.omega_q) + sum(graph.Omega)) / 2.0
        H[0, 0] = z0
        H[i_of(bus()), i_of(bus())] = z0 + graph.omega
        for j in range(1, n + 1):
            H[i_of(qubit(j)), i_of(qubit(j))] = z0 + graph.omega_q[j - 1]
            H[i_of(nvce(j)), i_of(nvce(j))] = z0 + graph.Omega[j - 1]

    if spec.frame in (Frame.LAB, Frame.RESONANT_INTERACTION, Frame.DETUNED_INTERACTION):
        ib = i_of(bus())
        for j in range(1, n + 1):
            iq, ine = i_of(qubit(j)), i_of(nvce(j))
            Jj = graph.J[j - 1]
            H[iq, ine] += Jj
            H[ine, iq] += Jj
            if graph.enabled[j - 1]:
                gj = graph.g[j - 1]
                if spec.frame is Frame.DETUNED_INTERACTION:
                    # a sigma_j^+ e^{i delta_j t} takes the bus excitation onto
                    # qubit j, so <q_j|H|bus> carries the positive phase.
                    phase = np.exp(1j * spec.delta[j - 1] * t)
                    H[iq, ib] += gj * phase
                    H[ib, iq] += gj * np.conj(phase)
                else:
                    H[iq, ib] += gj
                    H[ib, iq] += gj
    elif spec.frame is Frame.EFFECTIVE_DISPERSIVE:
        for j in range(1, n + 1):
            iq, ine = i_of(qubit(j)), i_of(nvce(j))
            Jj = graph.J[j - 1]
            H[iq, ine] += Jj
            H[ine, iq] += Jj
            if graph.enabled[j - 1]:
                H[iq, iq] += spec.stark_shift(j)
        for j in range(1, n + 1):
            if not graph.enabled[j - 1]:
                continue
            for k in range(j + 1, n + 1):
                if not graph.enabled[k - 1]:
                    continue
                x = spec.exchange(j, k) * spec.exchange_scale
                ij, ik = i_of(qubit(j)), i_of(qubit(k))
                H[ij, ik] += x
                H[ik, ij] += x

    return H
