"""Truncated Hilbert space: global ground state plus all single-excitation states.

A system with ``n`` sites has one NV-ensemble (NVCE) and one flux qubit per
site and, optionally, a single shared LC bus mode.  Every generator used in
this package conserves or lowers the total excitation number and every initial
state carries at most one excitation, so restricting the LC mode to {|0>, |1>}
and each two-level node to {ground, excited} is exact, not an approximation.

Basis ordering (fixed and relied upon everywhere): GROUND first, then for each
site j = 1..n the pair (NVCE_j, QUBIT_j), and the bus state last when present.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import NormalizationError

__all__ = [
    "NodeKind",
    "NodeLabel",
    "BasisState",
    "ExcitationBasis",
    "StateVector",
    "DensityMatrix",
    "make_basis",
    "pure_state",
    "superpose",
    "density_from_state",
]


class NodeKind(enum.Enum):
    LC_BUS = "BUS"
    FLUX_QUBIT = "Q"
    NVCE = "NE"


@dataclass(frozen=True)
class NodeLabel:
    """One excitation-carrying node: the bus, a flux qubit, or an NVCE."""

    kind: NodeKind
    index: int = 0  # site index >= 1; the bus carries no index

    def __post_init__(self):
        if self.kind is NodeKind.LC_BUS:
            if self.index != 0:
                raise ValueError("the LC bus carries no site index")
        elif self.index < 1:
            raise ValueError(f"site index must be >= 1, got {self.index}")

    @property
    def name(self) -> str:
        if self.kind is NodeKind.LC_BUS:
            return "BUS"
        return f"{self.kind.value}{self.index}"


def bus() -> NodeLabel:
    return NodeLabel(NodeKind.LC_BUS)


def qubit(j: int) -> NodeLabel:
    return NodeLabel(NodeKind.FLUX_QUBIT, j)


def nvce(j: int) -> NodeLabel:
    return NodeLabel(NodeKind.NVCE, j)


@dataclass(frozen=True)
class BasisState:
    """Either the global ground state or a single excitation at one node."""

    node: NodeLabel | None = None  # None == GROUND

    @classmethod
    def ground(cls) -> "BasisState":
        return cls(None)

    @classmethod
    def at(cls, node: NodeLabel) -> "BasisState":
        return cls(node)

    @property
    def is_ground(self) -> bool:
        return self.node is None

    @property
    def name(self) -> str:
        return "GROUND" if self.node is None else self.node.name


GROUND = BasisState.ground()


class ExcitationBasis:
    """Ordered basis of the zero- and single-excitation subspace.

    Dimension is 2n+2 with the bus, 2n+1 without it.
    """

    def __init__(self, n_sites: int, include_bus: bool = True):
        if n_sites < 1:
            raise ValueError(f"n_sites must be >= 1, got {n_sites}")
        self.n_sites = int(n_sites)
        self.include_bus = bool(include_bus)
        states = [GROUND]
        for j in range(1, self.n_sites + 1):
            states.append(BasisState.at(nvce(j)))
            states.append(BasisState.at(qubit(j)))
        if self.include_bus:
            states.append(BasisState.at(bus()))
        self.states: tuple[BasisState, ...] = tuple(states)
        self._index = {s: i for i, s in enumerate(self.states)}

    @property
    def dim(self) -> int:
        return len(self.states)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.states)

    def index_of(self, state: BasisState) -> int:
        try:
            return self._index[state]
        except KeyError:
            raise ValueError(f"state {state.name} not in this basis") from None

    def __contains__(self, state: BasisState) -> bool:
        return state in self._index

    def __len__(self) -> int:
        return self.dim

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExcitationBasis)
            and other.n_sites == self.n_sites
            and other.include_bus == self.include_bus
        )

    def __hash__(self):
        return hash((self.n_sites, self.include_bus))

    def __repr__(self):
        return f"ExcitationBasis(n_sites={self.n_sites}, include_bus={self.include_bus})"


def make_basis(n_sites: int, include_bus: bool = True) -> ExcitationBasis:
    """Build the ordered zero/single-excitation basis for ``n_sites`` sites."""
    return ExcitationBasis(n_sites, include_bus)


class StateVector:
    """Normalized complex amplitude vector over an :class:`ExcitationBasis`."""

    def __init__(self, basis: ExcitationBasis, amplitudes, norm_tol: float = 1e-12):
        amps = np.asarray(amplitudes, dtype=complex)
        if amps.shape != (basis.dim,):
            raise ValueError(f"expected {basis.dim} amplitudes, got shape {amps.shape}")
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if abs(norm2 - 1.0) > norm_tol:
            raise NormalizationError(
                f"state vector norm^2 = {norm2!r} deviates from 1 beyond {norm_tol}"
            )
        self.basis = basis
        self.amplitudes = amps.copy()
        self.amplitudes.flags.writeable = False

    def amplitude(self, state: BasisState) -> complex:
        return complex(self.amplitudes[self.basis.index_of(state)])

    def population(self, state: BasisState) -> float:
        return float(abs(self.amplitude(state)) ** 2)

    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def overlap(self, other: "StateVector") -> complex:
        if other.basis != self.basis:
            raise ValueError("overlap requires matching bases")
        return complex(np.vdot(other.amplitudes, self.amplitudes))


class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite operator over a basis."""

    def __init__(
        self,
        basis: ExcitationBasis,
        matrix,
        herm_tol: float = 1e-12,
        trace_tol: float = 1e-12,
        psd_tol: float = 1e-10,
    ):
        rho = np.asarray(matrix, dtype=complex)
        if rho.shape != (basis.dim, basis.dim):
            raise ValueError(f"expected {basis.dim}x{basis.dim} matrix, got {rho.shape}")
        herm = float(np.max(np.abs(rho - rho.conj().T)))
        if herm > herm_tol:
            raise ValueError(f"matrix not Hermitian: max |rho - rho^dag| = {herm:g}")
        tr = complex(np.trace(rho))
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(f"trace = {tr!r} deviates from 1 beyond {trace_tol}")
        min_eig = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2).min())
        if min_eig < -psd_tol:
            raise ValueError(f"matrix not PSD: min eigenvalue = {min_eig:g}")
        self.basis = basis
        self.matrix = rho.copy()
        self.matrix.flags.writeable = False

    def population(self, state: BasisState) -> float:
        i = self.basis.index_of(state)
        return float(self.matrix[i, i].real)

    def populations(self) -> np.ndarray:
        return np.diag(self.matrix).real.copy()

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def expectation(self, psi: StateVector) -> float:
        """<psi| rho |psi>."""
        if psi.basis != self.basis:
            raise ValueError("expectation requires matching bases")
        return float(np.real(np.vdot(psi.amplitudes, self.matrix @ psi.amplitudes)))


def pure_state(basis: ExcitationBasis, which: BasisState) -> StateVector:
    """Unit amplitude on one basis state, zero elsewhere."""
    amps = np.zeros(basis.dim, dtype=complex)
    amps[basis.index_of(which)] = 1.0
    return StateVector(basis, amps)


def superpose(
    basis: ExcitationBasis, terms: list[tuple[BasisState, complex]]
) -> StateVector:
    """Normalized superposition from explicit (state, coefficient) terms.

    Coefficients must already satisfy sum |c|^2 = 1 within 1e-9; inputs outside
    that tolerance are rejected rather than silently renormalized.  Accepted
    inputs are scaled to unit norm at machine precision.
    """
    amps = np.zeros(basis.dim, dtype=complex)
    for state, coeff in terms:
        amps[basis.index_of(state)] += coeff
    norm2 = float(np.sum(np.abs(amps) ** 2))
    if abs(norm2 - 1.0) > 1e-9:
        raise NormalizationError(
            f"superposition coefficients have norm^2 = {norm2!r}; refusing to renormalize"
        )
    return StateVector(basis, amps / np.sqrt(norm2))


def density_from_state(psi: StateVector) -> DensityMatrix:
    """Rank-1 projector |psi><psi|."""
    return DensityMatrix(psi.basis, np.outer(psi.amplitudes, psi.amplitudes.conj()))
