"""Bell-state generation: prepare, evolve on a sideband, post-select on |g>."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .analysis import fidelity
from .hilbert import (
    BipartiteState,
    FockCutoffs,
    PureState,
    basis_state,
    bipartite_from_pairs,
    qubit_index,
    superpose,
)
from .operators import SystemParams, blue_rwa_hamiltonian, red_rwa_hamiltonian
from .propagation import analytic_blue_propagate, analytic_red_propagate, numeric_propagate

SIDEBANDS = ("red", "blue")
BELL_NAMES = ("phi_plus", "phi_minus", "psi_plus", "psi_minus")
IMPOSSIBLE_OUTCOME = 1e-12


class PostSelectionError(RuntimeError):
    """The requested measurement outcome has (numerically) zero probability."""


@dataclass(frozen=True)
class ProtocolConfig:
    sideband: str
    n: int
    m: int
    theta: float
    phi: float
    k: int = 0
    cutoffs: FockCutoffs = field(default_factory=lambda: FockCutoffs(8, 8))
    params: SystemParams = field(
        default_factory=lambda: SystemParams.for_sideband(
            "red", eta=0.1, g=10.0, nu=500.0, omega0=1e4
        )
    )

    def __post_init__(self):
        if self.sideband not in SIDEBANDS:
            raise ValueError(f"sideband must be 'red' or 'blue', got {self.sideband!r}")
        if not 0.0 <= self.theta <= math.pi / 2:
            raise ValueError(f"theta must lie in [0, pi/2], got {self.theta!r}")
        if not -math.pi < self.phi <= math.pi:
            raise ValueError(f"phi must lie in (-pi, pi], got {self.phi!r}")
        if self.k < 0:
            raise ValueError(f"k must be non-negative, got {self.k!r}")
        if self.n < 0 or self.m < 0:
            raise ValueError("occupations must be non-negative")
        # one level of headroom for the raising branch
        if self.n + 1 >= self.cutoffs.field_dim:
            raise ValueError(
                f"n={self.n} needs field_dim >= {self.n + 2}, got {self.cutoffs.field_dim}"
            )
        if self.m + 1 >= self.cutoffs.vib_dim:
            raise ValueError(
                f"m={self.m} needs vib_dim >= {self.m + 2}, got {self.cutoffs.vib_dim}"
            )
        p = self.params
        target = p.nu if self.sideband == "red" else -p.nu
        if not math.isclose(p.detuning, target, rel_tol=1e-9, abs_tol=1e-9 * p.nu):
            raise ValueError(
                f"{self.sideband} sideband needs omega0 - omega = {target:g}, "
                f"got {p.detuning:g}"
            )

    def with_(self, **changes) -> "ProtocolConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class MeasurementRecord:
    outcome: str
    probability: float
    post_state: BipartiteState


@dataclass(frozen=True)
class BellReport:
    time: float
    best: str
    fidelity: float
    fidelities: dict
    predicted_fidelity: float | None = None


def prepare_initial(config: ProtocolConfig) -> PureState:
    """|n>_f |m>_v (cos(theta)|e> + exp(i phi) sin(theta)|g>)."""
    c = config.cutoffs
    terms = [
        (math.cos(config.theta), basis_state(c, config.n, config.m, "e")),
        (np.exp(1j * config.phi) * math.sin(config.theta), basis_state(c, config.n, config.m, "g")),
    ]
    # drop exact zeros so theta = 0, pi/2 give a single Fock product state
    return superpose([(w, s) for w, s in terms if abs(w) > 1e-15])


def bell_time(params: SystemParams, k: int, m_eff: int = 0) -> float:
    """pi (4k + 1) / (2 eta g sqrt(m_eff + 1)).

    ``m_eff = 0`` gives the vacuum-state times; in general the excited branch
    amplitude cos(eta g sqrt(m_eff + 1) t) vanishes at these times.
    """
    if k < 0 or m_eff < 0:
        raise ValueError("k and m_eff must be non-negative")
    if params.eta_g == 0.0:
        raise ValueError("bell_time is undefined for eta * g = 0")
    return math.pi * (4 * k + 1) / (2 * params.eta_g * math.sqrt(m_eff + 1))


def effective_excitation(config: ProtocolConfig) -> int:
    """m_eff such that sqrt(m_eff + 1) is the Rabi factor of the excited branch."""
    if config.sideband == "red":
        factor2 = (config.n + 1) * (config.m + 1)
    else:
        factor2 = (config.n + 1) * config.m
    return max(factor2 - 1, 0)


def protocol_time(config: ProtocolConfig) -> float:
    return bell_time(config.params, config.k, effective_excitation(config))


def sideband_hamiltonian(config: ProtocolConfig):
    build = red_rwa_hamiltonian if config.sideband == "red" else blue_rwa_hamiltonian
    return build(config.params, config.cutoffs)


def evolve_protocol(
    config: ProtocolConfig, t: float | None = None, method: str = "analytic"
) -> PureState:
    """Evolve the prepared state under the chosen sideband.

    ``t`` defaults to :func:`protocol_time`. ``method='numeric'`` exponentiates
    the sideband Hamiltonian instead of using the closed-form propagator.
    """
    if t is None:
        t = protocol_time(config)
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t!r}")
    psi0 = prepare_initial(config)
    if method == "analytic":
        prop = analytic_red_propagate if config.sideband == "red" else analytic_blue_propagate
        return prop(config.params, psi0, t)
    if method == "numeric":
        return numeric_propagate(sideband_hamiltonian(config), psi0, t)
    raise ValueError(f"method must be 'analytic' or 'numeric', got {method!r}")


def outcome_probability(state: PureState, outcome) -> float:
    q = qubit_index(outcome)
    branch = state.tensor()[:, :, q]
    return float(np.sum(np.abs(branch) ** 2))


def measure_qubit(state: PureState, outcome) -> MeasurementRecord:
    """Project the ion onto ``outcome`` and renormalize the field x vibration state."""
    q = qubit_index(outcome)
    branch = state.tensor()[:, :, q].reshape(-1)
    p = float(np.vdot(branch, branch).real)
    label = "ge"[q]
    if p < IMPOSSIBLE_OUTCOME:
        raise PostSelectionError(f"outcome |{label}> has probability {p:.3e}; post-selection failed")
    post = BipartiteState(state.cutoffs, branch / math.sqrt(p))
    return MeasurementRecord(outcome=label, probability=min(p, 1.0), post_state=post)


_BELL_TERMS = {
    "phi_plus": ((0, 0, 1), (1, 1, 1)),
    "phi_minus": ((0, 0, 1), (1, 1, -1)),
    "psi_plus": ((0, 1, 1), (1, 0, 1)),
    "psi_minus": ((0, 1, 1), (1, 0, -1)),
}


def bell_target(which: str, cutoffs: FockCutoffs | None = None) -> BipartiteState:
    """One of the four field-vibration Bell states, embedded in ``cutoffs``."""
    if which not in _BELL_TERMS:
        raise ValueError(f"unknown Bell state {which!r}; expected one of {BELL_NAMES}")
    cutoffs = cutoffs or FockCutoffs(2, 2)
    r = 1 / math.sqrt(2)
    return bipartite_from_pairs(cutoffs, [(s * r, n, m) for n, m, s in _BELL_TERMS[which]])


def predicted_post_state(config: ProtocolConfig) -> BipartiteState | None:
    """Balanced state (e^{i phi}|0, m> - i|1, m +/- 1>)/sqrt2 expected for n = 0, theta = pi/4.

    Returns None outside that family.
    """
    if config.n != 0 or not math.isclose(config.theta, math.pi / 4):
        return None
    if config.sideband == "blue" and config.m == 0:
        return None
    m2 = config.m + 1 if config.sideband == "red" else config.m - 1
    return bipartite_from_pairs(
        config.cutoffs, [(np.exp(1j * config.phi), 0, config.m), (-1j, 1, m2)]
    )


def bell_report(config: ProtocolConfig, post: BipartiteState, t: float) -> BellReport:
    fids = {name: fidelity(post, bell_target(name, post.cutoffs)) for name in BELL_NAMES}
    best = max(BELL_NAMES, key=lambda name: fids[name])
    expected = predicted_post_state(config)
    pred = fidelity(post, expected) if expected is not None else None
    return BellReport(time=t, best=best, fidelity=fids[best], fidelities=fids, predicted_fidelity=pred)


def run_bell_protocol(
    config: ProtocolConfig, t: float | None = None, method: str = "analytic"
) -> tuple[MeasurementRecord, BellReport]:
    """prepare -> evolve -> measure |g> -> compare with the Bell basis."""
    if t is None:
        t = protocol_time(config)
    psi = evolve_protocol(config, t, method)
    record = measure_qubit(psi, "g")
    return record, bell_report(config, record.post_state, t)
