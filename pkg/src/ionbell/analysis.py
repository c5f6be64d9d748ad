"""Fidelity, reduced density matrices and entanglement measures for field x vibration states."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hilbert import BipartiteState, PureState, inner_product

EIG_CLIP = 1e-10


@dataclass(frozen=True, eq=False)
class ReducedDensity:
    dim: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = np.array(self.entries, dtype=np.complex128)
        if rho.shape != (self.dim, self.dim):
            raise ValueError(f"expected {self.dim}x{self.dim} matrix, got {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T), initial=0.0) > 1e-12:
            raise ValueError("reduced density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > 1e-12:
            raise ValueError(f"reduced density matrix has trace {np.trace(rho).real!r}")
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)

    def eigenvalues(self) -> np.ndarray:
        w = np.linalg.eigvalsh(self.entries)
        if w.min(initial=0.0) < -EIG_CLIP:
            raise ValueError(f"reduced density matrix has eigenvalue {w.min():.3e} < 0")
        return np.clip(w, 0.0, None)


def fidelity(a: BipartiteState, b: BipartiteState) -> float:
    """|<a|b>|^2."""
    return min(abs(inner_product(a, b)) ** 2, 1.0)


def partial_trace(state: BipartiteState, keep: str = "field") -> ReducedDensity:
    """Reduced state of the field (``keep='field'``) or the vibration."""
    psi = state.matrix()
    if keep == "field":
        rho = psi @ psi.conj().T
    elif keep in ("vibration", "vib"):
        rho = psi.T @ psi.conj()
    else:
        raise ValueError(f"keep must be 'field' or 'vibration', got {keep!r}")
    rho = 0.5 * (rho + rho.conj().T)
    return ReducedDensity(rho.shape[0], rho)


def von_neumann_entropy(rho: ReducedDensity) -> float:
    """-tr(rho ln rho) in nats."""
    w = rho.eigenvalues()
    w = w[w > 0.0]
    s = float(-np.sum(w * np.log(w)))
    return s if s > 0.0 else 0.0


def entanglement_entropy(state: BipartiteState) -> float:
    return von_neumann_entropy(partial_trace(state, "field"))


def negativity(state: BipartiteState) -> float:
    """(||rho^{T_field}||_1 - 1) / 2 of the pure state |psi><psi|."""
    fd, vd = state.cutoffs.field_dim, state.cutoffs.vib_dim
    psi = state.amplitudes.reshape(fd, vd)
    # rho[i, j, k, l] = psi[i, j] psi*[k, l]; transpose the field indices i <-> k
    rho_tf = np.einsum("kj,il->ijkl", psi, psi.conj()).reshape(fd * vd, fd * vd)
    trace_norm = np.sum(np.abs(np.linalg.eigvalsh(rho_tf)))
    neg = float((trace_norm - 1.0) / 2.0)
    return neg if neg > 0.0 else 0.0


def schmidt_coefficients(state: BipartiteState) -> np.ndarray:
    """Squared Schmidt coefficients (descending)."""
    s = np.linalg.svd(state.matrix(), compute_uv=False)
    return s**2


def expectation(op, state: PureState) -> complex:
    mat = getattr(op, "entries", op)
    return complex(np.vdot(state.amplitudes, mat @ state.amplitudes))


def occupations(state: PureState) -> dict[str, float]:
    """Mean photon number, phonon number and excited-state population."""
    p = np.abs(state.tensor()) ** 2
    fd, vd, _ = p.shape
    return {
        "n_field": float(np.sum(p.sum(axis=(1, 2)) * np.arange(fd))),
        "n_vib": float(np.sum(p.sum(axis=(0, 2)) * np.arange(vd))),
        "p_excited": float(p[:, :, 1].sum()),
    }


def bits(nats: float) -> float:
    return nats / math.log(2)
