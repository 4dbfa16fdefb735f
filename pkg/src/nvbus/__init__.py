"""Single-excitation quantum information transfer between NV-center ensembles
coupled through flux qubits to a shared LC-circuit bus.

Layers, bottom to top: :mod:`nvbus.basis` (truncated Hilbert space),
:mod:`nvbus.hamiltonian` (parameter derivations and frame rendering),
:mod:`nvbus.analytic` (closed-form oracles), :mod:`nvbus.dynamics`
(Schrodinger/Lindblad integrators), :mod:`nvbus.observables` (populations,
fidelity, transfer time), :mod:`nvbus.scenarios` + :mod:`nvbus.cli`
(figure-reproduction scenarios, sweeps, CSV/PNG output).
"""

from .basis import (
    GROUND,
    BasisState,
    DensityMatrix,
    ExcitationBasis,
    NodeKind,
    NodeLabel,
    StateVector,
    bus,
    density_from_state,
    make_basis,
    nvce,
    pure_state,
    qubit,
    superpose,
)
from .analytic import (
    DispersiveCoefficients,
    LimitCase,
    ResonantCoefficients,
    dispersive_coefficients,
    limit_case,
    resonant_coefficients,
    transfer_fidelity,
)
from .dynamics import (
    IntegratorConfig,
    LindbladModel,
    Trajectory,
    build_collapse_operators,
    evolve_lindblad,
    evolve_schrodinger,
)
from .errors import (
    ConfigurationError,
    DegenerateParametersError,
    IntegrationError,
    NormalizationError,
    NvbusError,
)
from .hamiltonian import (
    CouplingGraph,
    DeviceParams,
    Frame,
    HamiltonianSpec,
    cyclic_to_angular,
    derive_bus_frequency,
    derive_nvce_gap,
    derive_qubit_bus_coupling,
    derive_qubit_frequency,
    render_hamiltonian,
    toggle_site,
)
from .observables import (
    FidelitySeries,
    PopulationSeries,
    fidelity,
    jt_to_seconds,
    populations,
    transfer_time,
)
from .scenarios import (
    ResultTable,
    ScenarioConfig,
    builtin_scenarios,
    golden_dir,
    golden_path,
    parse_config_file,
    render_csv,
    run_scenario,
    run_sweep,
    write_table,
)

__version__ = "0.1.0"
