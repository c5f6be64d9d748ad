"""Closed-form sideband propagators and an exact numeric propagator.

The analytic propagators act on the invariant two-level blocks

    red:  {|n, m, e>, |n+1, m+1, g>}   coupling eta g sqrt((n+1)(m+1))
    blue: {|n, m, e>, |n+1, m-1, g>}   coupling eta g sqrt((n+1) m)

(labels are field, vibration, qubit). The numeric propagator exponentiates
any Hermitian matrix through its eigendecomposition.
"""
from __future__ import annotations

import hashlib
import logging
import threading
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .hilbert import FockCutoffs, PureState, describe_basis
from .operators import HERMITIAN_TOL, OperatorMatrix, SystemParams, free_energies

log = logging.getLogger(__name__)

LEAKAGE_THRESHOLD = 1e-6


class LeakageError(ValueError):
    """A populated basis state would couple outside the Fock truncation."""


def _check_time(t: float) -> float:
    t = float(t)
    if not np.isfinite(t):
        raise ValueError(f"time must be finite, got {t!r}")
    return t


def _sideband(params: SystemParams, state: PureState, t: float, blue: bool) -> PureState:
    t = _check_time(t)
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t!r}")
    c = state.cutoffs
    out, bad = _kernels.sideband_propagate(
        state.amplitudes, c.field_dim, c.vib_dim, params.eta_g * t, blue
    )
    if bad >= 0:
        kind = "blue" if blue else "red"
        raise LeakageError(
            f"{kind}-sideband partner of populated state {describe_basis(c, bad)} "
            f"lies outside cutoffs (field_dim={c.field_dim}, vib_dim={c.vib_dim})"
        )
    return PureState(c, out)


def analytic_red_propagate(params: SystemParams, state: PureState, t: float) -> PureState:
    """U^r(t)|psi> for H = eta g (sigma_- a^dag b^dag + sigma_+ a b)."""
    return _sideband(params, state, t, blue=False)


def analytic_blue_propagate(params: SystemParams, state: PureState, t: float) -> PureState:
    """U^b(t)|psi> for H = eta g (sigma_- a b^dag + sigma_+ a^dag b)."""
    return _sideband(params, state, t, blue=True)


@dataclass(frozen=True)
class Leakage:
    """Probability in the top retained Fock level of each mode."""

    field: float
    vib: float

    @property
    def worst(self) -> float:
        return max(self.field, self.vib)

    @property
    def trusted(self) -> bool:
        return self.worst <= LEAKAGE_THRESHOLD


def leakage(state: PureState) -> Leakage:
    p = np.abs(state.tensor()) ** 2
    return Leakage(field=float(p[-1].sum()), vib=float(p[:, -1].sum()))


class _EigenCache:
    """Small LRU of Hermitian eigendecompositions keyed by matrix content."""

    def __init__(self, maxsize: int = 16):
        self.maxsize = maxsize
        self._data: OrderedDict = OrderedDict()
        self._lock = threading.Lock()

    def get(self, mat: np.ndarray):
        key = (mat.shape, hashlib.blake2b(mat.tobytes(), digest_size=16).digest())
        with self._lock:
            hit = self._data.get(key)
            if hit is not None:
                self._data.move_to_end(key)
                return hit
        w, v = np.linalg.eigh(mat)
        with self._lock:
            self._data[key] = (w, v)
            while len(self._data) > self.maxsize:
                self._data.popitem(last=False)
        return w, v

    def clear(self):
        with self._lock:
            self._data.clear()


eigen_cache = _EigenCache()


def _hermitian_matrix(H) -> np.ndarray:
    mat = H.entries if isinstance(H, OperatorMatrix) else np.asarray(H, dtype=np.complex128)
    scale = max(float(np.max(np.abs(mat), initial=0.0)), 1.0)
    if np.max(np.abs(mat - mat.conj().T), initial=0.0) > HERMITIAN_TOL * scale:
        raise ValueError("numeric propagation requires a Hermitian Hamiltonian")
    return mat


def numeric_propagate(H: OperatorMatrix, state: PureState, t: float) -> PureState:
    """exp(-i H t)|psi> via eigendecomposition of H (exact on the truncated space).

    Logs the top-level occupation of the result at DEBUG level; use
    :func:`leakage` to inspect it.
    """
    return numeric_trajectory(H, state, [t])[0]


def numeric_trajectory(H: OperatorMatrix, state: PureState, times) -> list[PureState]:
    """States exp(-i H t)|psi> for every t in ``times`` (one diagonalization)."""
    if H.cutoffs != state.cutoffs:
        raise ValueError(f"mismatched cutoffs: {H.cutoffs} vs {state.cutoffs}")
    w, v = eigen_cache.get(_hermitian_matrix(H))
    coeffs = v.conj().T @ state.amplitudes
    out = []
    for t in times:
        t = _check_time(t)
        vec = v @ (np.exp(-1j * w * t) * coeffs)
        psi = PureState(state.cutoffs, vec)
        if log.isEnabledFor(logging.DEBUG):
            lk = leakage(psi)
            log.debug("t=%g leakage field=%.3e vib=%.3e", t, lk.field, lk.vib)
        out.append(psi)
    return out


def to_interaction_picture(params: SystemParams, state: PureState, t: float) -> PureState:
    """exp(+i H0 t)|psi> with H0 the free Hamiltonian."""
    t = _check_time(t)
    c = state.cutoffs
    out = _kernels.apply_phases(state.amplitudes, free_energies(params, c), t)
    return PureState(c, out)


def red_support_ok(cutoffs: FockCutoffs, n_f: int, m_v: int, q: int) -> bool:
    """True if |n_f, m_v, q> is safe for the red analytic propagator."""
    if q == 1:
        return n_f + 1 < cutoffs.field_dim and m_v + 1 < cutoffs.vib_dim
    return True


def blue_support_ok(cutoffs: FockCutoffs, n_f: int, m_v: int, q: int) -> bool:
    """True if |n_f, m_v, q> is safe for the blue analytic propagator."""
    if q == 1:
        return m_v == 0 or n_f + 1 < cutoffs.field_dim
    return n_f == 0 or m_v + 1 < cutoffs.vib_dim
