"""Ladder/Pauli operators on the truncated space and the Hamiltonian tiers.

Units: hbar = 1, frequencies in rad/s. ``a`` acts on the ionic vibration,
``b`` on the cavity field. Ladder operators are truncated hard at the
cutoff, so ``[a, a^dag] = 1`` fails in the top level; keep populated levels
well below it.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hilbert import FockCutoffs

HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of the ion-cavity system.

    Attributes
    ----------
    nu : float
        Trap (vibrational) angular frequency.
    omega : float
        Cavity field angular frequency.
    omega0 : float
        Electronic transition angular frequency.
    g : float
        Ion-field coupling constant. ``g = 0`` is allowed (free evolution).
    eta : float
        Lamb-Dicke parameter.
    """

    nu: float
    omega: float
    omega0: float
    g: float
    eta: float

    def __post_init__(self):
        for name in ("nu", "omega", "omega0", "eta"):
            v = float(getattr(self, name))
            if not np.isfinite(v) or v <= 0:
                raise ValueError(f"{name} must be positive and finite, got {v!r}")
            object.__setattr__(self, name, v)
        g = float(self.g)
        if not np.isfinite(g) or g < 0:
            raise ValueError(f"g must be non-negative and finite, got {g!r}")
        object.__setattr__(self, "g", g)

    @property
    def detuning(self) -> float:
        """delta = omega0 - omega."""
        return self.omega0 - self.omega

    @property
    def eta_g(self) -> float:
        return self.eta * self.g

    @classmethod
    def for_sideband(cls, sideband: str, *, eta: float, g: float, nu: float, omega0: float):
        """Parameters tuned to the red (delta = nu) or blue (delta = -nu) sideband."""
        if sideband == "red":
            omega = omega0 - nu
        elif sideband == "blue":
            omega = omega0 + nu
        else:
            raise ValueError(f"sideband must be 'red' or 'blue', got {sideband!r}")
        return cls(nu=nu, omega=omega, omega0=omega0, g=g, eta=eta)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense operator on field x vibration x qubit."""

    cutoffs: FockCutoffs
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.complex128)
        n = self.cutoffs.total_dim
        if arr.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} matrix, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def dag(self) -> "OperatorMatrix":
        return OperatorMatrix(self.cutoffs, self.entries.conj().T)

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T), initial=0.0))

    def is_hermitian(self, rtol: float = HERMITIAN_TOL) -> bool:
        scale = max(float(np.max(np.abs(self.entries), initial=0.0)), 1.0)
        return self.hermiticity_error() <= rtol * scale

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._same(other)
        return OperatorMatrix(self.cutoffs, self.entries + other.entries)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._same(other)
        return OperatorMatrix(self.cutoffs, self.entries - other.entries)

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            self._same(other)
            return OperatorMatrix(self.cutoffs, self.entries @ other.entries)
        return self.entries @ np.asarray(other)

    def __mul__(self, scalar) -> "OperatorMatrix":
        return OperatorMatrix(self.cutoffs, complex(scalar) * self.entries)

    __rmul__ = __mul__

    def element(self, bra: tuple, ket: tuple) -> complex:
        """<bra|O|ket> for Fock labels ``(n_f, m_v, q)``."""
        return complex(self.entries[self.cutoffs.index(*bra), self.cutoffs.index(*ket)])

    def _same(self, other):
        if self.cutoffs != other.cutoffs:
            raise ValueError(f"mismatched cutoffs: {self.cutoffs} vs {other.cutoffs}")


def _annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1)


_SIGMA = {
    "plus": np.array([[0.0, 0.0], [1.0, 0.0]]),  # |e><g| with g=0, e=1
    "minus": np.array([[0.0, 1.0], [0.0, 0.0]]),
    "z": np.array([[-1.0, 0.0], [0.0, 1.0]]),
}


def _embed(cutoffs: FockCutoffs, field_op=None, vib_op=None, qubit_op=None) -> OperatorMatrix:
    f = np.eye(cutoffs.field_dim) if field_op is None else field_op
    v = np.eye(cutoffs.vib_dim) if vib_op is None else vib_op
    q = np.eye(2) if qubit_op is None else qubit_op
    return OperatorMatrix(cutoffs, np.kron(np.kron(f, v), q))


def vib_annihilator(cutoffs: FockCutoffs) -> OperatorMatrix:
    """Vibrational annihilation operator ``a``."""
    return _embed(cutoffs, vib_op=_annihilation(cutoffs.vib_dim))


def field_annihilator(cutoffs: FockCutoffs) -> OperatorMatrix:
    """Cavity-field annihilation operator ``b``."""
    return _embed(cutoffs, field_op=_annihilation(cutoffs.field_dim))


def pauli(cutoffs: FockCutoffs, which: str) -> OperatorMatrix:
    """sigma_+ (``'plus'``, |g> -> |e>), sigma_- (``'minus'``) or sigma_z (``'z'``)."""
    try:
        return _embed(cutoffs, qubit_op=_SIGMA[which])
    except KeyError:
        raise ValueError(f"which must be one of {sorted(_SIGMA)}, got {which!r}") from None


def number_operators(cutoffs: FockCutoffs) -> dict[str, OperatorMatrix]:
    """Diagonal observables: photon number, phonon number, excited projector."""
    return {
        "n_field": _embed(cutoffs, field_op=np.diag(np.arange(cutoffs.field_dim, dtype=float))),
        "n_vib": _embed(cutoffs, vib_op=np.diag(np.arange(cutoffs.vib_dim, dtype=float))),
        "p_excited": _embed(cutoffs, qubit_op=np.diag([0.0, 1.0])),
    }


def operator_sine(x: OperatorMatrix | np.ndarray):
    """sin(X) of a Hermitian X by spectral calculus.

    Returns the same type as the argument.
    """
    mat = x.entries if isinstance(x, OperatorMatrix) else np.asarray(x, dtype=np.complex128)
    scale = max(float(np.max(np.abs(mat), initial=0.0)), 1.0)
    if np.max(np.abs(mat - mat.conj().T), initial=0.0) > HERMITIAN_TOL * scale:
        raise ValueError("operator_sine requires a Hermitian argument")
    w, v = np.linalg.eigh(mat)
    out = (v * np.sin(w)) @ v.conj().T
    out = 0.5 * (out + out.conj().T)
    if isinstance(x, OperatorMatrix):
        return OperatorMatrix(x.cutoffs, out)
    return out


def free_hamiltonian(params: SystemParams, cutoffs: FockCutoffs) -> OperatorMatrix:
    """H0 = nu a^dag a + omega b^dag b + (omega0/2) sigma_z (diagonal)."""
    return OperatorMatrix(cutoffs, np.diag(free_energies(params, cutoffs)))


def free_energies(params: SystemParams, cutoffs: FockCutoffs) -> np.ndarray:
    """Diagonal of the free Hamiltonian in the flattened basis order."""
    n = np.arange(cutoffs.field_dim, dtype=float)[:, None, None]
    m = np.arange(cutoffs.vib_dim, dtype=float)[None, :, None]
    q = np.array([-0.5, 0.5])[None, None, :]
    return (params.omega * n + params.nu * m + params.omega0 * q).reshape(-1)


def _vib_sine_block(params: SystemParams, vib_dim: int) -> np.ndarray:
    a = _annihilation(vib_dim)
    return operator_sine(params.eta * (a + a.T))


def full_hamiltonian(params: SystemParams, cutoffs: FockCutoffs) -> OperatorMatrix:
    """H0 + g (sigma_+ + sigma_-)(b^dag + b) sin(eta (a^dag + a))."""
    b = _annihilation(cutoffs.field_dim)
    sx = _SIGMA["plus"] + _SIGMA["minus"]
    interaction = np.kron(np.kron(b + b.T, _vib_sine_block(params, cutoffs.vib_dim)), sx)
    return OperatorMatrix(
        cutoffs, np.diag(free_energies(params, cutoffs)) + params.g * interaction
    )


def lamb_dicke_hamiltonian(params: SystemParams, cutoffs: FockCutoffs) -> OperatorMatrix:
    """H0 + eta g (sigma_+ + sigma_-)(b^dag + b)(a^dag + a)."""
    return OperatorMatrix(
        cutoffs,
        np.diag(free_energies(params, cutoffs)) + lamb_dicke_interaction(params, cutoffs).entries,
    )


def lamb_dicke_interaction(params: SystemParams, cutoffs: FockCutoffs) -> OperatorMatrix:
    a = _annihilation(cutoffs.vib_dim)
    b = _annihilation(cutoffs.field_dim)
    sx = _SIGMA["plus"] + _SIGMA["minus"]
    return OperatorMatrix(cutoffs, params.eta_g * np.kron(np.kron(b + b.T, a + a.T), sx))


def sideband_pairings(params: SystemParams, cutoffs: FockCutoffs) -> dict[str, OperatorMatrix]:
    """The four Hermitian two-operator pairings of the Lamb-Dicke interaction.

    ``red`` and ``blue`` are the resonant sideband terms; ``two_phonon_up``
    (sigma_- a^dag b + h.c.) and ``counter`` (sigma_- a b + h.c.) are the
    remaining rotating pieces. Their sum is :func:`lamb_dicke_interaction`.
    """
    a = _annihilation(cutoffs.vib_dim)
    b = _annihilation(cutoffs.field_dim)
    sp, sm = _SIGMA["plus"], _SIGMA["minus"]
    k = params.eta_g

    def pair(bf, av, s):
        term = np.kron(np.kron(bf, av), s)
        return OperatorMatrix(cutoffs, k * (term + term.conj().T))

    return {
        "red": pair(b.T, a.T, sm),  # sigma_- a^dag b^dag + h.c.
        "blue": pair(b.T, a, sm),  # sigma_- a b^dag + h.c.
        "two_phonon_up": pair(b, a.T, sm),  # sigma_- a^dag b + h.c.
        "counter": pair(b, a, sm),  # sigma_- a b + h.c.
    }


def red_rwa_hamiltonian(params: SystemParams, cutoffs: FockCutoffs) -> OperatorMatrix:
    """Red-sideband interaction eta g (sigma_- a^dag b^dag + sigma_+ a b)."""
    return sideband_pairings(params, cutoffs)["red"]


def blue_rwa_hamiltonian(params: SystemParams, cutoffs: FockCutoffs) -> OperatorMatrix:
    """Blue-sideband interaction eta g (sigma_- a b^dag + sigma_+ a^dag b)."""
    return sideband_pairings(params, cutoffs)["blue"]
