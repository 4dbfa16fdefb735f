"""Numerical time evolution: Schrodinger and Lindblad integrators.

The Hilbert spaces here are tiny (dimension 2n+2), so density matrices are
propagated directly; no stochastic unraveling.  The fixed-step method is a
classic RK4 that evaluates time-dependent generators at the substage times
t, t+dt/2, t+dt -- piecewise-constant sampling would degrade the order when
the detuned-frame phase rotates fast.  The adaptive method wraps
``scipy.integrate.solve_ivp`` (DOP853) for stiff large-detuning runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .basis import (
    GROUND,
    BasisState,
    DensityMatrix,
    ExcitationBasis,
    StateVector,
    bus,
    nvce,
    qubit,
)
from .errors import ConfigurationError, IntegrationError
from .hamiltonian import Frame, HamiltonianSpec, render_hamiltonian

__all__ = [
    "IntegratorConfig",
    "LindbladModel",
    "Trajectory",
    "evolve_schrodinger",
    "evolve_lindblad",
    "build_collapse_operators",
]

RK4_FIXED = "rk4"
RK45_ADAPTIVE = "rk45"


@dataclass(frozen=True)
class IntegratorConfig:
    """Stepping and sampling controls for one trajectory.

    For ``rk4`` the run takes uniform steps of (at most) ``dt`` and records
    every ``sample_every``-th step.  For ``rk45`` the run is adaptive with
    ``(abs_tol, rel_tol)`` and records ``samples`` evenly spaced points.
    """

    method: str = RK4_FIXED
    t_end: float = 10.0
    dt: float | None = None
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    sample_every: int = 1
    samples: int = 201  # adaptive mode only

    def __post_init__(self):
        if self.method not in (RK4_FIXED, RK45_ADAPTIVE):
            raise ConfigurationError(f"unknown integrator method {self.method!r}")
        if self.t_end < 0:
            raise ConfigurationError("t_end must be >= 0")
        if self.method == RK4_FIXED:
            if self.dt is None or self.dt <= 0:
                raise ConfigurationError("rk4 requires dt > 0")
            if self.sample_every < 1:
                raise ConfigurationError("sample_every must be >= 1")
        else:
            if self.abs_tol <= 0 or self.rel_tol <= 0:
                raise ConfigurationError("adaptive tolerances must be > 0")
            if self.samples < 2:
                raise ConfigurationError("samples must be >= 2")

    @classmethod
    def for_grid(cls, t_end: float, samples: int, substeps: int = 10) -> "IntegratorConfig":
        """Fixed-step config whose recorded times are exactly
        ``linspace(0, t_end, samples)`` with ``substeps`` RK4 steps between
        neighbouring samples."""
        if samples < 2 or substeps < 1:
            raise ConfigurationError("samples must be >= 2 and substeps >= 1")
        dt = t_end / ((samples - 1) * substeps)
        return cls(method=RK4_FIXED, t_end=t_end, dt=dt, sample_every=substeps)


@dataclass(frozen=True)
class LindbladModel:
    """Hamiltonian plus dissipation rates (all in the same angular units).

    Scalars broadcast across sites.  The effective-dispersive frame has the
    bus eliminated, so its decay rate must be zero there.
    """

    hamiltonian: HamiltonianSpec
    lc_decay_rate: float = 0.0  # kappa
    qubit_dephasing: tuple[float, ...] | float = 0.0  # gamma'_q per site
    nvce_dephasing: tuple[float, ...] | float = 0.0  # gamma'_N per site
    qubit_relaxation: tuple[float, ...] | float = 0.0  # gamma_q per site
    nvce_relaxation: tuple[float, ...] | float = 0.0  # gamma_N per site

    def __post_init__(self):
        n = self.hamiltonian.graph.n_sites
        for name in ("qubit_dephasing", "nvce_dephasing", "qubit_relaxation", "nvce_relaxation"):
            v = getattr(self, name)
            if np.isscalar(v):
                v = (float(v),) * n
            else:
                v = tuple(float(x) for x in v)
                if len(v) != n:
                    raise ConfigurationError(f"{name} must have length {n}")
            if any(r < 0 for r in v):
                raise ConfigurationError(f"{name} rates must be >= 0")
            object.__setattr__(self, name, v)
        if self.lc_decay_rate < 0:
            raise ConfigurationError("lc_decay_rate must be >= 0")
        if (
            self.hamiltonian.frame is Frame.EFFECTIVE_DISPERSIVE
            and self.lc_decay_rate != 0.0
        ):
            raise ConfigurationError(
                "the bus is eliminated in the EFFECTIVE_DISPERSIVE frame; "
                "lc_decay_rate must be 0 there"
            )


@dataclass
class Trajectory:
    """Sampled time evolution: amplitudes (nt, dim) or densities (nt, dim, dim)."""

    times: np.ndarray
    basis: ExcitationBasis
    data: np.ndarray
    kind: str  # "state" | "density"
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.times) == 0 or np.any(np.diff(self.times) <= 0):
            if len(self.times) > 1:
                raise ValueError("trajectory times must be strictly increasing")

    @property
    def n_samples(self) -> int:
        return len(self.times)

    def state_at(self, i: int, norm_tol: float = 1e-8) -> StateVector:
        if self.kind != "state":
            raise ValueError("not a state-vector trajectory")
        return StateVector(self.basis, self.data[i], norm_tol=norm_tol)

    def density_at(self, i: int) -> DensityMatrix:
        if self.kind != "density":
            raise ValueError("not a density-matrix trajectory")
        # tolerances widened to integrator-level drift
        return DensityMatrix(
            self.basis, self.data[i], herm_tol=1e-10, trace_tol=1e-8, psd_tol=1e-7
        )

    def populations(self) -> np.ndarray:
        """(nt, dim) real populations per basis state."""
        if self.kind == "state":
            return np.abs(self.data) ** 2
        return np.einsum("tii->ti", self.data).real


def _hamiltonian_fn(spec: HamiltonianSpec, basis: ExcitationBasis):
    """Return (H(t) callable, time_dependent flag); constant matrix is cached."""
    if not spec.time_dependent:
        H0 = render_hamiltonian(spec, basis, 0.0)
        return (lambda t, _H=H0: _H), False

    # Detuned frame: only the bus-qubit phases move; update them in place on a
    # template to keep per-substage cost low.
    H0 = render_hamiltonian(spec, basis, 0.0)
    ib = basis.index_of(BasisState.at(bus()))
    sites = [
        (basis.index_of(BasisState.at(qubit(j + 1))), spec.graph.g[j], spec.delta[j])
        for j in range(spec.graph.n_sites)
        if spec.graph.enabled[j] and spec.graph.g[j] != 0.0
    ]

    def H(t, _H=H0, _sites=sites, _ib=ib):
        M = _H.copy()
        for iq, gj, dj in _sites:
            e = gj * np.exp(1j * dj * t)
            M[iq, _ib] = e
            M[_ib, iq] = np.conj(e)
        return M

    return H, True


def _sample_grid(cfg: IntegratorConfig):
    """(n_steps, dt, record stride) with the final time hit exactly."""
    n_steps = max(1, math.ceil(cfg.t_end / cfg.dt - 1e-12))
    # round up to a multiple of the stride so samples stay uniform
    stride = cfg.sample_every
    n_steps = ((n_steps + stride - 1) // stride) * stride
    return n_steps, cfg.t_end / n_steps, stride


def evolve_schrodinger(
    spec: HamiltonianSpec, psi0: StateVector, cfg: IntegratorConfig
) -> Trajectory:
    """Integrate i d|psi>/dt = H(t) |psi| from t = 0 to cfg.t_end.

    States are never renormalized; the maximum norm drift is recorded in
    ``metadata["max_norm_drift"]`` and must stay below 1e-9.
    """
    basis = psi0.basis
    H, time_dep = _hamiltonian_fn(spec, basis)

    if cfg.method == RK45_ADAPTIVE:
        t_eval = np.linspace(0.0, cfg.t_end, cfg.samples)
        sol = solve_ivp(
            lambda t, y: -1j * (H(t) @ y),
            (0.0, cfg.t_end),
            psi0.amplitudes.astype(complex),
            t_eval=t_eval,
            method="DOP853",
            rtol=cfg.rel_tol,
            atol=cfg.abs_tol,
        )
        if not sol.success:
            raise IntegrationError(
                f"adaptive integration failed: {sol.message}", t_reached=sol.t[-1] if len(sol.t) else 0.0
            )
        data = sol.y.T.copy()
        times = sol.t
    else:
        n_steps, dt, stride = _sample_grid(cfg)
        psi = psi0.amplitudes.astype(complex)
        times_l = [0.0]
        data_l = [psi.copy()]
        if time_dep:
            H0 = None
        else:
            H0 = H(0.0)
            miH = -1j * H0
        for step in range(n_steps):
            t = step * dt
            if time_dep:
                k1 = -1j * (H(t) @ psi)
                Hm = H(t + 0.5 * dt)
                k2 = -1j * (Hm @ (psi + 0.5 * dt * k1))
                k3 = -1j * (Hm @ (psi + 0.5 * dt * k2))
                k4 = -1j * (H(t + dt) @ (psi + dt * k3))
            else:
                k1 = miH @ psi
                k2 = miH @ (psi + 0.5 * dt * k1)
                k3 = miH @ (psi + 0.5 * dt * k2)
                k4 = miH @ (psi + dt * k3)
            psi = psi + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if (step + 1) % stride == 0:
                times_l.append((step + 1) * dt)
                data_l.append(psi.copy())
        times = np.array(times_l)
        data = np.array(data_l)

    norms2 = np.sum(np.abs(data) ** 2, axis=1)
    drift = float(np.max(np.abs(norms2 - 1.0)))
    if drift > 1e-9:
        raise IntegrationError(
            f"norm drift {drift:g} exceeds 1e-9; reduce dt or tighten tolerances",
            t_reached=float(times[-1]),
        )
    return Trajectory(
        times=times,
        basis=basis,
        data=data,
        kind="state",
        metadata={"spec": spec, "config": cfg, "max_norm_drift": drift},
    )


def build_collapse_operators(
    model: LindbladModel, basis: ExcitationBasis
) -> list[tuple[np.ndarray, float]]:
    """Collapse operators with rates in the standard-dissipator convention
    ``rho' += rate * (L rho L^+ - (1/2){L^+ L, rho})``.

    Relaxation terms are conventionally quoted as
    (gamma/2)(2 L rho L^+ - ...), i.e. standard rate gamma.  Dephasing terms
    are (gamma'/2)(Z rho Z - rho); since Z^2 = 1 that equals the standard
    dissipator with rate gamma'/2 -- the factor is pinned here on purpose,
    do not "simplify" it.  Zero-rate channels are dropped.

    On this truncated basis the lowering operator of node m is
    |GROUND><AT(m)| (collective NVCE lowering has unit matrix element in the
    Dicke reduction) and Z of node m is diagonal with +1 on AT(m) and -1
    everywhere else.
    """
    dim = basis.dim

    def lowering(node) -> np.ndarray:
        L = np.zeros((dim, dim), dtype=complex)
        L[basis.index_of(GROUND), basis.index_of(BasisState.at(node))] = 1.0
        return L

    def z_op(node) -> np.ndarray:
        d = -np.ones(dim)
        d[basis.index_of(BasisState.at(node))] = 1.0
        return np.diag(d).astype(complex)

    ops: list[tuple[np.ndarray, float]] = []
    if basis.include_bus and model.lc_decay_rate > 0:
        ops.append((lowering(bus()), model.lc_decay_rate))
    n = basis.n_sites
    for j in range(1, n + 1):
        if model.qubit_relaxation[j - 1] > 0:
            ops.append((lowering(qubit(j)), model.qubit_relaxation[j - 1]))
        if model.nvce_relaxation[j - 1] > 0:
            ops.append((lowering(nvce(j)), model.nvce_relaxation[j - 1]))
        if model.qubit_dephasing[j - 1] > 0:
            ops.append((z_op(qubit(j)), model.qubit_dephasing[j - 1] / 2.0))
        if model.nvce_dephasing[j - 1] > 0:
            ops.append((z_op(nvce(j)), model.nvce_dephasing[j - 1] / 2.0))
    return ops


def evolve_lindblad(
    model: LindbladModel, rho0: DensityMatrix, cfg: IntegratorConfig
) -> Trajectory:
    """Integrate the master equation from rho0; Hermiticity is enforced by
    symmetrization after every step, trace drift is recorded and bounded."""
    basis = rho0.basis
    spec = model.hamiltonian
    H, time_dep = _hamiltonian_fn(spec, basis)
    channels = build_collapse_operators(model, basis)
    dim = basis.dim
    eye = np.eye(dim)

    # Row-major vectorization: (A X B).ravel() == kron(A, B.T) @ X.ravel().
    # The dissipator is always time independent; for a constant H the whole
    # Liouvillian collapses to one matrix and each RK4 stage is a matvec.
    dissipator = np.zeros((dim * dim, dim * dim), dtype=complex)
    for L, r in channels:
        Ld = L.conj().T
        LL = Ld @ L
        dissipator += r * (
            np.kron(L, L.conj())
            - 0.5 * (np.kron(LL, eye) + np.kron(eye, LL.T))
        )

    def commutator_super(Ht):
        return -1j * (np.kron(Ht, eye) - np.kron(eye, Ht.T))

    if not time_dep:
        liouvillian = commutator_super(H(0.0)) + dissipator

        def rhs_vec(t, v):
            return liouvillian @ v
    else:

        def rhs_vec(t, v):
            rho = v.reshape(dim, dim)
            Ht = H(t)
            return (-1j * (Ht @ rho - rho @ Ht)).ravel() + dissipator @ v


    if cfg.method == RK45_ADAPTIVE:
        t_eval = np.linspace(0.0, cfg.t_end, cfg.samples)
        sol = solve_ivp(
            rhs_vec,
            (0.0, cfg.t_end),
            rho0.matrix.astype(complex).ravel(),
            t_eval=t_eval,
            method="DOP853",
            rtol=cfg.rel_tol,
            atol=cfg.abs_tol,
        )
        if not sol.success:
            raise IntegrationError(
                f"adaptive integration failed: {sol.message}",
                t_reached=sol.t[-1] if len(sol.t) else 0.0,
            )
        data = sol.y.T.reshape(-1, dim, dim)
        data = (data + data.conj().transpose(0, 2, 1)) / 2.0
        times = sol.t
    else:
        n_steps, dt, stride = _sample_grid(cfg)
        v = rho0.matrix.astype(complex).ravel()
        times_l = [0.0]
        data_l = [v.reshape(dim, dim).copy()]
        for step in range(n_steps):
            t = step * dt
            k1 = rhs_vec(t, v)
            k2 = rhs_vec(t + 0.5 * dt, v + 0.5 * dt * k1)
            k3 = rhs_vec(t + 0.5 * dt, v + 0.5 * dt * k2)
            k4 = rhs_vec(t + dt, v + dt * k3)
            v = v + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            rho = v.reshape(dim, dim)
            rho = (rho + rho.conj().T) / 2.0
            v = rho.ravel()
            if (step + 1) % stride == 0:
                times_l.append((step + 1) * dt)
                data_l.append(rho.copy())
        times = np.array(times_l)
        data = np.array(data_l)

    traces = np.einsum("tii->t", data)
    trace_drift = float(np.max(np.abs(traces - 1.0)))
    if trace_drift > 1e-8:
        raise IntegrationError(
            f"trace drift {trace_drift:g} exceeds 1e-8; reduce dt",
            t_reached=float(times[-1]),
        )
    return Trajectory(
        times=times,
        basis=basis,
        data=data,
        kind="density",
        metadata={"model": model, "config": cfg, "max_trace_drift": trace_drift},
    )
