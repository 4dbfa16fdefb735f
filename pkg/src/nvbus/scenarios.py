"""Built-in scenario catalog, scenario runner, sweeps and CSV output.

Scenario time is dimensionless: couplings are quoted in units of J1 and the
output abscissa is the phase J*t (J == J1), matching how the transfer curves
are conventionally plotted.  Everything is deterministic -- fixed-step RK4
with a step chosen from the fastest eigenfrequency of the configuration --
so identical configs produce bit-identical CSV files.
"""

from __future__ import annotations

import concurrent.futures
import configparser
import dataclasses
import math
import os
import tempfile
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .basis import BasisState, bus, density_from_state, make_basis, nvce, pure_state, qubit
from .dynamics import (
    IntegratorConfig,
    LindbladModel,
    Trajectory,
    evolve_lindblad,
    evolve_schrodinger,
)
from .errors import ConfigurationError
from .hamiltonian import CouplingGraph, Frame, HamiltonianSpec
from .observables import fidelity, populations

__all__ = [
    "ScenarioConfig",
    "ResultTable",
    "builtin_scenarios",
    "run_scenario",
    "run_sweep",
    "write_table",
    "parse_config_file",
    "golden_dir",
    "golden_path",
]

_FRAMES = {
    "resonant": Frame.RESONANT_INTERACTION,
    "detuned": Frame.DETUNED_INTERACTION,
    "effective": Frame.EFFECTIVE_DISPERSIVE,
    "lab": Frame.LAB,
}


@dataclass(frozen=True)
class ScenarioConfig:
    """One runnable scenario; all couplings/rates in units of J1."""

    scenario_id: str | None = None
    frame: Frame = Frame.RESONANT_INTERACTION
    n_sites: int = 2
    g: tuple[float, ...] | float = 1.0
    J: tuple[float, ...] | float = 1.0
    delta: tuple[float, ...] | float | None = None
    lam: tuple[float, ...] | float | None = None
    enabled: tuple[bool, ...] | None = None
    kappa: float = 0.0
    gamma_phi_q: tuple[float, ...] | float = 0.0
    gamma_phi_n: tuple[float, ...] | float = 0.0
    gamma_q: tuple[float, ...] | float = 0.0
    gamma_n: tuple[float, ...] | float = 0.0
    alpha: complex | None = None
    beta: complex | None = None
    t_end: float = 30.0  # in units of 1/J1
    samples: int = 601
    substeps: int | None = None  # RK4 steps per sample; None = automatic
    initial: str = "NE1"
    track: tuple[str, ...] = ("NE1", "NE2")
    # fidelity multi-curve scenarios: (column suffix, field overrides) pairs
    variants: tuple[tuple[str, dict], ...] = ()

    def __post_init__(self):
        if self.t_end <= 0:
            raise ConfigurationError("t_end must be > 0")
        if self.samples < 2:
            raise ConfigurationError("samples must be >= 2")


@dataclass(frozen=True)
class ResultTable:
    """Column headers plus a rectangular block of finite reals."""

    headers: tuple[str, ...]
    rows: np.ndarray  # (nt, ncol)

    def __post_init__(self):
        if self.rows.ndim != 2 or self.rows.shape[1] != len(self.headers):
            raise ValueError("rows shape does not match headers")
        if not np.all(np.isfinite(self.rows)):
            raise ValueError("table contains non-finite values")
        if np.any(np.diff(self.rows[:, 0]) <= 0):
            raise ValueError("first column must be strictly increasing")
        for k, name in enumerate(self.headers):
            if name.startswith(("P_", "F")):
                col = self.rows[:, k]
                if col.min() < -1e-6 or col.max() > 1.0 + 1e-6:
                    raise ValueError(f"column {name} leaves [0, 1]")

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.headers.index(name)]


def _node_from_label(label: str, n_sites: int) -> BasisState:
    label = label.strip().upper()
    if label == "GROUND":
        return BasisState.ground()
    if label == "BUS":
        return BasisState.at(bus())
    for prefix, maker in (("NE", nvce), ("Q", qubit)):
        if label.startswith(prefix) and label[len(prefix) :].isdigit():
            j = int(label[len(prefix) :])
            if not 1 <= j <= n_sites:
                raise ConfigurationError(f"node {label} out of range for n_sites={n_sites}")
            return BasisState.at(maker(j))
    raise ConfigurationError(f"unknown node label {label!r}")


def _build_spec(cfg: ScenarioConfig) -> HamiltonianSpec:
    graph = CouplingGraph(
        n_sites=cfg.n_sites,
        g=cfg.g,
        J=cfg.J,
        enabled=cfg.enabled if cfg.enabled is not None else (),
    )
    delta = cfg.delta
    lam = cfg.lam
    if cfg.frame is Frame.EFFECTIVE_DISPERSIVE and lam is None and delta is None:
        raise ConfigurationError("field 'lam' (or 'delta') required for effective frame")
    return HamiltonianSpec(graph=graph, frame=cfg.frame, delta=delta, lam=lam)


def _max_frequency(cfg: ScenarioConfig) -> float:
    """Upper estimate of the fastest eigenfrequency, for step selection."""
    g = np.max(np.atleast_1d(cfg.g))
    J = np.max(np.atleast_1d(cfg.J))
    w = math.sqrt(J * J + 2 * g * g)
    if cfg.lam is not None:
        lam = np.max(np.atleast_1d(cfg.lam))
        w = max(w, lam + math.sqrt(lam * lam + J * J))
    if cfg.delta is not None:
        w = max(w, np.max(np.atleast_1d(cfg.delta)))
    return max(w, 1.0)


def _integrator(cfg: ScenarioConfig) -> IntegratorConfig:
    spacing = cfg.t_end / (cfg.samples - 1)
    if cfg.substeps is not None:
        substeps = cfg.substeps
    else:
        # keep the accumulated RK4 error ~1e-7: t * w^5 * dt^4 / 120 <= 1e-7.
        # The detuned-frame fast phase enters only with amplitude ~g/delta, so
        # resolving it at ~50 steps per period is enough; feeding delta into
        # the full error budget would demand absurdly small steps.
        w = 1.2 * _max_frequency(cfg)
        dt_req = (12e-6 / (cfg.t_end * w**5)) ** 0.25
        if cfg.delta is not None:
            g = np.max(np.atleast_1d(cfg.g))
            J = np.max(np.atleast_1d(cfg.J))
            w_chain = 1.2 * max(math.sqrt(J * J + 2 * g * g), 1.0)
            dt_chain = (12e-6 / (cfg.t_end * w_chain**5)) ** 0.25
            dt_fast = 2.0 * math.pi / (50.0 * np.max(np.atleast_1d(cfg.delta)))
            dt_req = min(dt_chain, dt_fast)
        substeps = max(1, min(5000, math.ceil(spacing / dt_req)))
    return IntegratorConfig.for_grid(cfg.t_end, cfg.samples, substeps)


def _has_dissipation(cfg: ScenarioConfig) -> bool:
    rates = [cfg.kappa]
    for v in (cfg.gamma_phi_q, cfg.gamma_phi_n, cfg.gamma_q, cfg.gamma_n):
        rates.extend(np.atleast_1d(v).tolist())
    return any(r > 0 for r in rates)


def _run_dynamics(cfg: ScenarioConfig) -> Trajectory:
    spec = _build_spec(cfg)
    basis = make_basis(cfg.n_sites, include_bus=spec.needs_bus)
    psi0 = pure_state(basis, _node_from_label(cfg.initial, cfg.n_sites))
    integ = _integrator(cfg)
    if _has_dissipation(cfg):
        model = LindbladModel(
            hamiltonian=spec,
            lc_decay_rate=cfg.kappa,
            qubit_dephasing=cfg.gamma_phi_q,
            nvce_dephasing=cfg.gamma_phi_n,
            qubit_relaxation=cfg.gamma_q,
            nvce_relaxation=cfg.gamma_n,
        )
        return evolve_lindblad(model, density_from_state(psi0), integ)
    return evolve_schrodinger(spec, psi0, integ)


def run_scenario(cfg: ScenarioConfig) -> ResultTable:
    """Execute one scenario and return its result table.

    Plain scenarios emit ``Jt`` plus one ``P_<node>`` column per tracked node
    (plus ``F`` if an encoding (alpha, beta) is configured).  Variant
    scenarios run each variant and emit one ``F_<label>`` column per variant.
    """
    if cfg.variants:
        cols = []
        headers = ["Jt"]
        times = None
        for label, overrides in cfg.variants:
            sub = dataclasses.replace(cfg, variants=(), **overrides)
            traj = _run_dynamics(sub)
            fid = fidelity(traj, sub.alpha, sub.beta)
            if times is None:
                times = fid.times
            headers.append(f"F_{label}")
            cols.append(fid.values)
        rows = np.column_stack([times, *cols])
        return ResultTable(headers=tuple(headers), rows=rows)

    traj = _run_dynamics(cfg)
    pops = populations(traj)
    headers = ["Jt"]
    cols = [traj.times]
    for label in cfg.track:
        node = _node_from_label(label, cfg.n_sites)
        headers.append(f"P_{node.name}")
        cols.append(np.clip(pops.of(node), 0.0, 1.0))
    if cfg.alpha is not None:
        fid = fidelity(traj, cfg.alpha, cfg.beta)
        headers.append("F")
        cols.append(fid.values)
    return ResultTable(headers=tuple(headers), rows=np.column_stack(cols))


def run_sweep(
    base: ScenarioConfig, axis: str, values: list[float], jobs: int = 1
) -> tuple[list[ResultTable], ResultTable | None]:
    """Independent re-runs of ``base`` with ``axis`` set to each value.

    Returns the per-value tables plus a summary table of
    (value, peak target-NVCE population, transfer time at threshold 0.99);
    an unreached transfer time is reported as -1.  An empty value list yields
    no tables and no summary.
    """
    if axis not in {f.name for f in dataclasses.fields(ScenarioConfig)}:
        raise ConfigurationError(f"unknown sweep axis {axis!r}")
    if not values:
        return [], None

    def one(v):
        return run_scenario(dataclasses.replace(base, scenario_id=None, **{axis: v}))

    if jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
            tables = list(pool.map(one, values))
    else:
        tables = [one(v) for v in values]

    summary_rows = []
    target = f"P_NE{base.n_sites}"
    for v, table in zip(values, tables):
        candidates = [c for c in table.headers if c == target or c.startswith("F")]
        col = table.column(candidates[0])
        peak = float(col.max())
        above = np.nonzero(col >= 0.99)[0]
        tt = float(table.rows[above[0], 0]) if len(above) else -1.0
        summary_rows.append([v, peak, tt])
    order = np.argsort(np.asarray(values, dtype=float), kind="stable")
    summary = ResultTable(
        headers=(axis, "peak_target", "transfer_time"),
        rows=np.asarray(summary_rows, dtype=float)[order],
    )
    return tables, summary


# ---------------------------------------------------------------------------
# built-in catalog

_ALPHA = 1.0 / math.sqrt(3.0)
_BETA = math.sqrt(2.0 / 3.0)


def builtin_scenarios() -> dict[str, ScenarioConfig]:
    """The catalog of named parameter studies with shipped golden tables."""
    res = dict(frame=Frame.RESONANT_INTERACTION)
    eff = dict(frame=Frame.EFFECTIVE_DISPERSIVE)
    fid_enc = dict(alpha=_ALPHA, beta=_BETA)
    rates = dict(gamma_phi_q=0.001, gamma_phi_n=0.001, gamma_q=0.001, gamma_n=0.001)

    cat = {
        # resonant, balanced couplings
        "res-bal-eq": ScenarioConfig(**res, g=1.0, J=1.0),
        "res-bal-mag": ScenarioConfig(**res, g=0.1, J=1.0, t_end=100.0),
        "res-bal-ind": ScenarioConfig(**res, g=10.0, J=1.0),
        # resonant, unbalanced: g1=0.9 J1, g2=0.9 J2 with J2=0.9 J1, etc.
        "res-unbal-eq": ScenarioConfig(**res, g=(0.9, 0.81), J=(1.0, 0.9)),
        "res-unbal-mag": ScenarioConfig(
            **res, g=(0.1, 1.0 / 9.0), J=(1.0, 10.0 / 9.0), t_end=100.0
        ),
        "res-unbal-ind": ScenarioConfig(**res, g=(10.0, 100.0 / 9.0), J=(1.0, 10.0 / 9.0)),
        # dispersive (bus eliminated), balanced
        "disp-bal-eq": ScenarioConfig(**eff, lam=1.0, J=1.0),
        "disp-bal-mag": ScenarioConfig(**eff, lam=0.1, J=1.0, t_end=100.0),
        "disp-bal-ind": ScenarioConfig(**eff, lam=10.0, J=1.0),
        # dispersive, unbalanced
        "disp-unbal-eq": ScenarioConfig(**eff, lam=(0.9, 0.81), J=(1.0, 0.9)),
        "disp-unbal-mag": ScenarioConfig(
            **eff, lam=(0.1, 1.0 / 9.0), J=(1.0, 10.0 / 9.0), t_end=100.0
        ),
        "disp-unbal-ind": ScenarioConfig(
            **eff, lam=(10.0, 100.0 / 9.0), J=(1.0, 10.0 / 9.0)
        ),
        # fidelity curves (alpha = 1/sqrt(3)), three coupling ratios per table
        "fid-res": ScenarioConfig(
            **res,
            **fid_enc,
            variants=(
                ("eq", dict(g=1.0)),
                ("mag", dict(g=0.1)),
                ("ind", dict(g=10.0)),
            ),
        ),
        "fid-disp": ScenarioConfig(
            **eff,
            **fid_enc,
            variants=(
                ("eq", dict(lam=1.0)),
                ("mag", dict(lam=0.1)),
                ("ind", dict(lam=10.0)),
            ),
        ),
        "fid-res-dissip": ScenarioConfig(
            **res,
            **fid_enc,
            kappa=0.001,
            **rates,
            variants=(
                ("eq", dict(g=1.0)),
                ("mag", dict(g=0.1)),
                ("ind", dict(g=10.0)),
            ),
        ),
        "fid-disp-dissip": ScenarioConfig(
            **eff,
            **fid_enc,
            **rates,
            variants=(
                ("eq", dict(lam=1.0)),
                ("mag", dict(lam=0.1)),
                ("ind", dict(lam=10.0)),
            ),
        ),
        # selective transfer in a 4-site chain: only sites 2 and 4 see the bus
        "chain-select": ScenarioConfig(
            frame=Frame.RESONANT_INTERACTION,
            n_sites=4,
            g=1.0,
            J=1.0,
            enabled=(False, True, False, True),
            initial="NE2",
            track=("NE2", "Q2", "BUS", "Q4", "NE4"),
        ),
    }
    return {k: dataclasses.replace(v, scenario_id=k) for k, v in cat.items()}


# ---------------------------------------------------------------------------
# CSV output

def format_value(x: float) -> str:
    return format(float(x), ".12g")


def render_csv(table: ResultTable) -> str:
    lines = [",".join(table.headers)]
    for row in table.rows:
        lines.append(",".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def write_table(table: ResultTable, path: str | Path) -> Path:
    """Write a table as CSV atomically (temp file + rename)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(render_csv(table))
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def golden_dir() -> Path:
    return Path(resources.files("nvbus") / "golden")


def golden_path(scenario_id: str) -> Path:
    return golden_dir() / f"{scenario_id}.csv"


# ---------------------------------------------------------------------------
# config-file front end

_SCALAR_FIELDS = {
    "n_sites": int,
    "kappa": float,
    "alpha": float,
    "beta": float,
    "t_end": float,
    "samples": int,
    "substeps": int,
    "initial": str,
}
_ARRAY_FIELDS = {"g", "J", "delta", "lam", "gamma_phi_q", "gamma_phi_n", "gamma_q", "gamma_n"}


def _parse_array(raw: str) -> tuple[float, ...] | float:
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    vals = tuple(float(p) for p in parts)
    return vals[0] if len(vals) == 1 else vals


def parse_config_file(path: str | Path) -> ScenarioConfig:
    """Parse a flat key-value scenario file (INI sections, commas for arrays)."""
    parser = configparser.ConfigParser()
    parser.optionxform = str  # field names are case sensitive (J vs j)
    read = parser.read(path)
    if not read:
        raise ConfigurationError(f"cannot read config file {path}")
    if "scenario" not in parser:
        raise ConfigurationError("config file must contain a [scenario] section")
    sec = parser["scenario"]
    kwargs: dict = {}
    for key, raw in sec.items():
        if key == "frame":
            try:
                kwargs["frame"] = _FRAMES[raw.strip().lower()]
            except KeyError:
                raise ConfigurationError(
                    f"field 'frame': unknown value {raw!r} (choose from {sorted(_FRAMES)})"
                ) from None
        elif key == "enabled":
            kwargs["enabled"] = tuple(
                p.strip().lower() in ("1", "true", "yes", "on")
                for p in raw.split(",")
                if p.strip()
            )
        elif key == "track":
            kwargs["track"] = tuple(p.strip() for p in raw.split(",") if p.strip())
        elif key in _ARRAY_FIELDS:
            try:
                kwargs[key] = _parse_array(raw)
            except ValueError:
                raise ConfigurationError(f"field {key!r}: cannot parse {raw!r}") from None
        elif key in _SCALAR_FIELDS:
            try:
                kwargs[key] = _SCALAR_FIELDS[key](raw)
            except ValueError:
                raise ConfigurationError(f"field {key!r}: cannot parse {raw!r}") from None
        else:
            raise ConfigurationError(f"unknown config field {key!r}")
    if "integrator" in parser:
        for key, raw in parser["integrator"].items():
            if key == "substeps":
                kwargs["substeps"] = int(raw)
            elif key == "samples":
                kwargs["samples"] = int(raw)
            else:
                raise ConfigurationError(f"unknown integrator field {key!r}")
    try:
        return ScenarioConfig(**kwargs)
    except TypeError as exc:
        raise ConfigurationError(str(exc)) from None
