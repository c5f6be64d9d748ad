"""Check the sideband (rotating-wave) propagators against the full Hamiltonian.

The full Hamiltonian, including the operator sine, is exponentiated exactly
in the Schrodinger picture, rotated into the interaction picture of the free
Hamiltonian and compared with the closed-form sideband evolution.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .analysis import fidelity
from .operators import SystemParams, full_hamiltonian
from .propagation import (
    LEAKAGE_THRESHOLD,
    analytic_blue_propagate,
    analytic_red_propagate,
    leakage,
    numeric_trajectory,
    to_interaction_picture,
)
from .protocol import ProtocolConfig, prepare_initial, protocol_time

log = logging.getLogger(__name__)

OMEGA0_OVER_ETAG = 1e4


@dataclass(frozen=True)
class RwaRow:
    ratio: float
    final_fidelity: float
    min_fidelity: float
    leakage: float
    t_final: float

    @property
    def trusted(self) -> bool:
        return self.leakage <= LEAKAGE_THRESHOLD


def rwa_params(sideband: str, ratio: float, eta: float, g: float,
               omega0_over_etag: float = OMEGA0_OVER_ETAG) -> SystemParams:
    """nu = ratio * eta g, omega0 = omega0_over_etag * eta g, omega on resonance."""
    scale = eta * g if g > 0 else 1.0
    return SystemParams.for_sideband(
        sideband, eta=eta, g=g, nu=ratio * scale, omega0=omega0_over_etag * scale
    )


def compare_full_vs_rwa(config: ProtocolConfig, t_final: float | None = None,
                        samples: int = 41) -> RwaRow:
    """Fidelity between full-Hamiltonian and sideband evolution over [0, t_final]."""
    p = config.params
    if t_final is None:
        t_final = protocol_time(config) if p.eta_g > 0 else 1.0
    times = np.linspace(0.0, t_final, samples)
    psi0 = prepare_initial(config)
    full = numeric_trajectory(full_hamiltonian(p, config.cutoffs), psi0, times)
    prop = analytic_red_propagate if config.sideband == "red" else analytic_blue_propagate
    fids = []
    worst_leak = 0.0
    for t, psi_s in zip(times, full):
        worst_leak = max(worst_leak, leakage(psi_s).worst)
        psi_i = to_interaction_picture(p, psi_s, t)
        fids.append(fidelity(psi_i, prop(p, psi0, t)))
    return RwaRow(
        ratio=p.nu / (p.eta_g if p.eta_g > 0 else 1.0),
        final_fidelity=fids[-1],
        min_fidelity=min(fids),
        leakage=worst_leak,
        t_final=float(t_final),
    )


def validate_rwa(base: ProtocolConfig, ratios, samples: int = 41,
                 omega0_over_etag: float = OMEGA0_OVER_ETAG):
    """Run :func:`compare_full_vs_rwa` for each nu/(eta g) ratio.

    Returns ``(rows, monotone)`` where ``monotone`` says the final fidelity is
    non-decreasing along ``ratios`` as given.
    """
    rows = []
    for ratio in ratios:
        p = rwa_params(base.sideband, ratio, base.params.eta, base.params.g, omega0_over_etag)
        row = compare_full_vs_rwa(base.with_(params=p), samples=samples)
        log.info("ratio=%g fidelity=%.9f leakage=%.2e", ratio, row.final_fidelity, row.leakage)
        rows.append(row)
    finals = [r.final_fidelity for r in rows]
    monotone = all(b >= a for a, b in zip(finals, finals[1:]))
    return rows, monotone
