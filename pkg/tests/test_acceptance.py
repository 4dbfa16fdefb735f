"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
report lines.  Every criterion is independent; numeric tolerances are stated
inline next to each assertion.
"""

import math
import time

import numpy as np
import pytest

from nvbus import (
    BasisState,
    CouplingGraph,
    Frame,
    HamiltonianSpec,
    IntegratorConfig,
    LindbladModel,
    builtin_scenarios,
    bus,
    density_from_state,
    dispersive_coefficients,
    evolve_lindblad,
    evolve_schrodinger,
    fidelity,
    golden_path,
    make_basis,
    nvce,
    pure_state,
    qubit,
    render_csv,
    resonant_coefficients,
    run_scenario,
)

BUS_BASIS = make_basis(2)
EFF_BASIS = make_basis(2, include_bus=False)
NE1 = BasisState.at(nvce(1))
NE2 = BasisState.at(nvce(2))

RES_ORDER = (nvce(1), qubit(1), qubit(2), bus(), nvce(2))
EFF_ORDER = (nvce(1), qubit(1), qubit(2), nvce(2))


def report(tag: str, ok: bool, detail: str):
    print(f"{tag}: {'PASS' if ok else 'FAIL'} -- {detail}")
    assert ok, f"{tag} failed: {detail}"


def amplitudes(traj, i, order):
    return np.array([traj.data[i, traj.basis.index_of(BasisState.at(n))] for n in order])


def test_ac1_closed_form_consistency():
    """AC-1: closed-form coefficients conserve probability and obey the
    mirror identity C1 - C5 = cos(J t) on 1000 random parameter draws."""
    rng = np.random.default_rng(2024)
    start = time.monotonic()
    worst_norm = worst_mirror = 0.0
    for _ in range(1000):
        t = rng.uniform(0.0, 50.0)
        g = rng.uniform(0.01, 10.0)
        J = rng.uniform(0.01, 10.0)
        c = resonant_coefficients(t, g, J)
        worst_norm = max(worst_norm, abs(np.sum(np.abs(c.as_array()) ** 2) - 1.0))
        worst_mirror = max(worst_mirror, abs((c.c1 - c.c5) - math.cos(J * t)))
    elapsed = time.monotonic() - start
    report(
        "AC-1",
        worst_norm < 1e-10 and worst_mirror < 1e-10 and elapsed < 1.0,
        f"norm err {worst_norm:.2e}, mirror err {worst_mirror:.2e}, {elapsed:.2f}s",
    )


def test_ac2_integrator_accuracy_and_order():
    """AC-2: fixed-step RK4 reproduces the resonant closed form to 1e-6 over
    Jt in [0, 30], and halving dt shrinks the error about 16-fold."""
    spec = HamiltonianSpec(CouplingGraph(2, g=1.0, J=1.0), Frame.RESONANT_INTERACTION)
    psi0 = pure_state(BUS_BASIS, NE1)

    def max_err(substeps):
        traj = evolve_schrodinger(spec, psi0, IntegratorConfig.for_grid(30.0, 301, substeps))
        return max(
            np.max(np.abs(amplitudes(traj, i, RES_ORDER)
                          - resonant_coefficients(t, 1.0, 1.0).as_array()))
            for i, t in enumerate(traj.times)
        )

    start = time.monotonic()
    e_coarse, e_fine = max_err(8), max_err(16)
    elapsed = time.monotonic() - start
    ratio = e_coarse / e_fine
    report(
        "AC-2",
        e_fine < 1e-6 and 10.0 < ratio < 25.0 and elapsed < 2.0,
        f"max err {e_fine:.2e} at dt/2, halving ratio {ratio:.1f}, {elapsed:.2f}s",
    )


def test_ac3_strong_inductance_transfer():
    """AC-3: for J = 0.1 g the swap at Jt = pi is near perfect, both in
    target population and in encoded-qubit fidelity."""
    g, J = 1.0, 0.1
    t_pi = math.pi / J
    p5 = abs(resonant_coefficients(t_pi, g, J).c5) ** 2
    spec = HamiltonianSpec(CouplingGraph(2, g=g, J=J), Frame.RESONANT_INTERACTION)
    traj = evolve_schrodinger(
        spec, pure_state(BUS_BASIS, NE1), IntegratorConfig.for_grid(t_pi, 201, 20)
    )
    f_end = fidelity(traj, 1 / math.sqrt(3), math.sqrt(2 / 3)).values[-1]
    f_required = 1 / 3 + 2 / 3 * 0.999
    report(
        "AC-3",
        p5 >= 0.999 and f_end >= f_required,
        f"|C5|^2(Jt=pi) = {p5:.6f}, F(Jt=pi) = {f_end:.6f}",
    )


def test_ac4_effective_model_vs_closed_form():
    """AC-4: the effective dispersive generator reproduces the closed-form
    two-NVCE dynamics to 1e-6 for lambda/J in {0.1, 1, 10}; doubling the
    qubit-qubit exchange term breaks the agreement."""

    def max_err(lam, scale):
        spec = HamiltonianSpec(
            CouplingGraph(2, g=0.0, J=1.0),
            Frame.EFFECTIVE_DISPERSIVE,
            lam=lam,
            exchange_scale=scale,
        )
        substeps = 80 if lam > 1 else 10
        traj = evolve_schrodinger(
            spec, pure_state(EFF_BASIS, NE1), IntegratorConfig.for_grid(10.0, 101, substeps)
        )
        return max(
            np.max(np.abs(amplitudes(traj, i, EFF_ORDER)
                          - dispersive_coefficients(t, lam, 1.0).as_array()))
            for i, t in enumerate(traj.times)
        )

    errs = {lam: max_err(lam, 1.0) for lam in (0.1, 1.0, 10.0)}
    err_doubled = max_err(1.0, 2.0)
    report(
        "AC-4",
        max(errs.values()) < 1e-6 and err_doubled > 1e-2,
        f"corrected errs {max(errs.values()):.2e}; doubled-exchange err {err_doubled:.2e}",
    )


def test_ac5_dispersive_regime_validity():
    """AC-5: full detuned dynamics at delta = 20 g track the effective model
    populations to 5e-2 and bus population stays below 2 (g/delta)^2."""
    J = lam = 1.0
    g = 20.0 * lam
    delta = 20.0 * g
    spec = HamiltonianSpec(CouplingGraph(2, g=g, J=J), Frame.DETUNED_INTERACTION, delta=delta)
    traj = evolve_schrodinger(
        spec,
        pure_state(BUS_BASIS, NE1),
        IntegratorConfig(method="rk45", t_end=10.0, samples=201, rel_tol=1e-10, abs_tol=1e-12),
    )
    pop_err = 0.0
    for i, t in enumerate(traj.times):
        d = dispersive_coefficients(t, lam, J)
        pop_err = max(pop_err, abs(traj.state_at(i).population(NE1) - abs(d.d1) ** 2))
        pop_err = max(pop_err, abs(traj.state_at(i).population(NE2) - abs(d.d4) ** 2))
    bus_peak = float(
        (np.abs(traj.data[:, BUS_BASIS.index_of(BasisState.at(bus()))]) ** 2).max()
    )
    bound = 2 * (g / delta) ** 2
    report(
        "AC-5",
        pop_err < 5e-2 and bus_peak <= bound,
        f"NVCE pop err {pop_err:.2e} (< 5e-2), bus peak {bus_peak:.2e} (<= {bound:.2e})",
    )


def test_ac6_lindblad_reduces_to_unitary():
    """AC-6: with all rates zero the master equation matches the pure-state
    propagator to 1e-6 while keeping trace and Hermiticity exact."""
    spec = HamiltonianSpec(CouplingGraph(2, g=1.0, J=1.0), Frame.RESONANT_INTERACTION)
    cfg = IntegratorConfig.for_grid(10.0, 101, 20)
    traj_psi = evolve_schrodinger(spec, pure_state(BUS_BASIS, NE1), cfg)
    traj_rho = evolve_lindblad(
        LindbladModel(hamiltonian=spec),
        density_from_state(pure_state(BUS_BASIS, NE1)),
        cfg,
    )
    pop_gap = float(np.max(np.abs(traj_rho.populations() - traj_psi.populations())))
    trace_drift = traj_rho.metadata["max_trace_drift"]
    herm = float(
        np.max(np.abs(traj_rho.data - traj_rho.data.conj().transpose(0, 2, 1)))
    )
    report(
        "AC-6",
        pop_gap < 1e-6 and trace_drift < 1e-8 and herm < 1e-10,
        f"pop gap {pop_gap:.2e}, trace drift {trace_drift:.2e}, herm {herm:.2e}",
    )


def test_ac7_weak_dissipation_perturbs_weakly():
    """AC-7: rates of 1e-3 (in units of J) change the g = J fidelity curve by
    less than 1% over Jt in [0, pi]."""
    spec = HamiltonianSpec(CouplingGraph(2, g=1.0, J=1.0), Frame.RESONANT_INTERACTION)
    model = LindbladModel(
        hamiltonian=spec,
        lc_decay_rate=0.001,
        qubit_dephasing=0.001,
        nvce_dephasing=0.001,
        qubit_relaxation=0.001,
        nvce_relaxation=0.001,
    )
    cfg = IntegratorConfig.for_grid(math.pi, 65, 25)
    traj = evolve_lindblad(model, density_from_state(pure_state(BUS_BASIS, NE1)), cfg)
    alpha, beta = 1 / math.sqrt(3), math.sqrt(2 / 3)
    f_lossy = fidelity(traj, alpha, beta).values
    f_free = np.array(
        [
            abs(alpha) ** 2 + abs(beta * resonant_coefficients(t, 1.0, 1.0).c5) ** 2
            for t in traj.times
        ]
    )
    dev = float(np.max(np.abs(f_lossy - f_free)))
    report("AC-7", dev < 0.01, f"max fidelity deviation {dev:.2e} (< 1e-2)")


def test_ac8_selective_chain_reduces_to_pair():
    """AC-8: in a 4-site chain with only sites 2 and 4 coupled, the active
    pair evolves exactly like the standalone two-site system."""
    cfg = IntegratorConfig.for_grid(10.0, 101, 20)
    pair_spec = HamiltonianSpec(CouplingGraph(2, g=1.0, J=1.0), Frame.RESONANT_INTERACTION)
    pair = evolve_schrodinger(pair_spec, pure_state(BUS_BASIS, NE1), cfg)

    chain_spec = HamiltonianSpec(
        CouplingGraph(4, g=1.0, J=1.0, enabled=(False, True, False, True)),
        Frame.RESONANT_INTERACTION,
    )
    chain_basis = make_basis(4)
    chain = evolve_schrodinger(
        chain_spec, pure_state(chain_basis, BasisState.at(nvce(2))), cfg
    )

    pair_nodes = (nvce(1), qubit(1), bus(), qubit(2), nvce(2))
    chain_nodes = (nvce(2), qubit(2), bus(), qubit(4), nvce(4))
    gap = 0.0
    for i in range(pair.n_samples):
        a = np.array([pair.data[i, BUS_BASIS.index_of(BasisState.at(n))] for n in pair_nodes])
        b = np.array([chain.data[i, chain_basis.index_of(BasisState.at(n))] for n in chain_nodes])
        gap = max(gap, float(np.max(np.abs(a - b))))
    idle = [BasisState.at(n) for j in (1, 3) for n in (nvce(j), qubit(j))]
    leak = float(
        max(np.max(np.abs(chain.data[:, chain_basis.index_of(s)])) for s in idle)
    )
    report(
        "AC-8",
        gap < 1e-9 and leak < 1e-12,
        f"active-pair gap {gap:.2e} (< 1e-9), idle-site leakage {leak:.2e}",
    )


def test_ac9_golden_tables_reproduce():
    """AC-9: every built-in scenario regenerates its shipped CSV byte for
    byte."""
    stale = []
    for sid, cfg in builtin_scenarios().items():
        if render_csv(run_scenario(cfg)) != golden_path(sid).read_text():
            stale.append(sid)
    report(
        "AC-9",
        not stale,
        f"{17 - len(stale)}/17 golden tables bit-identical"
        + (f"; stale: {stale}" if stale else ""),
    )
