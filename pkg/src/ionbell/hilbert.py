"""Pure states of the composite system field x vibration x two-level ion.

Basis ordering is fixed throughout the package::

    index(n_f, m_v, q) = (n_f * vib_dim + m_v) * 2 + q,    q = 0 -> |g>, q = 1 -> |e>

Field-major flattening, qubit fastest. Bipartite (field x vibration) states
drop the qubit factor: ``index(n_f, m_v) = n_f * vib_dim + m_v``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

NORM_TOL = 1e-12

QUBIT_LABELS = {"g": 0, "e": 1}


def qubit_index(q) -> int:
    """Map ``'g'``/``'e'`` (or 0/1) to the qubit index."""
    if isinstance(q, str):
        try:
            return QUBIT_LABELS[q]
        except KeyError:
            raise ValueError(f"qubit label must be 'g' or 'e', got {q!r}") from None
    if q in (0, 1):
        return int(q)
    raise ValueError(f"qubit label must be 'g' or 'e', got {q!r}")


@dataclass(frozen=True)
class FockCutoffs:
    """Number of retained Fock levels for the field and the vibration."""

    field_dim: int
    vib_dim: int

    def __post_init__(self):
        for name in ("field_dim", "vib_dim"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    @property
    def total_dim(self) -> int:
        return self.field_dim * self.vib_dim * 2

    @property
    def pair_dim(self) -> int:
        return self.field_dim * self.vib_dim

    def index(self, n_f: int, m_v: int, q=0) -> int:
        self.check(n_f, m_v)
        return (n_f * self.vib_dim + m_v) * 2 + qubit_index(q)

    def pair_index(self, n_f: int, m_v: int) -> int:
        self.check(n_f, m_v)
        return n_f * self.vib_dim + m_v

    def labels(self, i: int) -> tuple[int, int, int]:
        """Inverse of :meth:`index`: ``(n_f, m_v, q)``."""
        if not 0 <= i < self.total_dim:
            raise ValueError(f"index {i} outside 0..{self.total_dim - 1}")
        pair, q = divmod(i, 2)
        n_f, m_v = divmod(pair, self.vib_dim)
        return n_f, m_v, q

    def check(self, n_f: int, m_v: int) -> None:
        if not 0 <= n_f < self.field_dim:
            raise ValueError(
                f"field occupation {n_f} outside 0..{self.field_dim - 1} (field_dim={self.field_dim})"
            )
        if not 0 <= m_v < self.vib_dim:
            raise ValueError(
                f"vibrational occupation {m_v} outside 0..{self.vib_dim - 1} (vib_dim={self.vib_dim})"
            )


def describe_basis(cutoffs: FockCutoffs, i: int) -> str:
    n_f, m_v, q = cutoffs.labels(i)
    return f"|{n_f}>_f|{m_v}>_v|{'ge'[q]}>"


def _frozen(amplitudes, size: int) -> np.ndarray:
    arr = np.array(amplitudes, dtype=np.complex128).reshape(-1)
    if arr.size != size:
        raise ValueError(f"expected {size} amplitudes, got {arr.size}")
    arr.setflags(write=False)
    return arr


def _check_norm(arr: np.ndarray) -> None:
    norm2 = float(np.vdot(arr, arr).real)
    if abs(norm2 - 1.0) > NORM_TOL:
        raise ValueError(f"state not normalized: <psi|psi> = {norm2!r}")


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over field x vibration x qubit.

    The amplitude array is read-only; operations return new states.
    """

    cutoffs: FockCutoffs
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = _frozen(self.amplitudes, self.cutoffs.total_dim)
        _check_norm(arr)
        object.__setattr__(self, "amplitudes", arr)

    @classmethod
    def from_vector(cls, cutoffs: FockCutoffs, vector) -> "PureState":
        """Normalize ``vector`` and wrap it."""
        vec = np.asarray(vector, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(cutoffs, vec / norm)

    def amplitude(self, n_f: int, m_v: int, q) -> complex:
        return complex(self.amplitudes[self.cutoffs.index(n_f, m_v, q)])

    def tensor(self) -> np.ndarray:
        """View the amplitudes as an array of shape (field_dim, vib_dim, 2)."""
        return self.amplitudes.reshape(self.cutoffs.field_dim, self.cutoffs.vib_dim, 2)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def to_dict(self) -> dict:
        return _to_dict(self.cutoffs, self.amplitudes)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc: dict) -> "PureState":
        cutoffs, amps = _from_dict(doc)
        return cls(cutoffs, amps)

    @classmethod
    def from_json(cls, text: str) -> "PureState":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Normalized field x vibration state (the qubit has been measured out)."""

    cutoffs: FockCutoffs
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = _frozen(self.amplitudes, self.cutoffs.pair_dim)
        _check_norm(arr)
        object.__setattr__(self, "amplitudes", arr)

    @classmethod
    def from_vector(cls, cutoffs: FockCutoffs, vector) -> "BipartiteState":
        vec = np.asarray(vector, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(cutoffs, vec / norm)

    def amplitude(self, n_f: int, m_v: int) -> complex:
        return complex(self.amplitudes[self.cutoffs.pair_index(n_f, m_v)])

    def matrix(self) -> np.ndarray:
        """Amplitudes as a (field_dim, vib_dim) coefficient matrix."""
        return self.amplitudes.reshape(self.cutoffs.field_dim, self.cutoffs.vib_dim)

    def to_dict(self) -> dict:
        return _to_dict(self.cutoffs, self.amplitudes)

    @classmethod
    def from_dict(cls, doc: dict) -> "BipartiteState":
        cutoffs, amps = _from_dict(doc)
        return cls(cutoffs, amps)


def _to_dict(cutoffs: FockCutoffs, amps: np.ndarray) -> dict:
    return {
        "field_dim": cutoffs.field_dim,
        "vib_dim": cutoffs.vib_dim,
        "amplitudes": [[float(a.real), float(a.imag)] for a in amps],
    }


def _from_dict(doc: dict):
    try:
        cutoffs = FockCutoffs(doc["field_dim"], doc["vib_dim"])
        pairs = np.asarray(doc["amplitudes"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed state document: {exc}") from exc
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        raise ValueError("amplitudes must be a list of [re, im] pairs")
    return cutoffs, pairs[:, 0] + 1j * pairs[:, 1]


def basis_state(cutoffs: FockCutoffs, n_f: int, m_v: int, q) -> PureState:
    """Fock product state |n_f>_f |m_v>_v |q>."""
    vec = np.zeros(cutoffs.total_dim, dtype=np.complex128)
    vec[cutoffs.index(n_f, m_v, q)] = 1.0
    return PureState(cutoffs, vec)


def superpose(terms: Iterable[tuple[complex, PureState]]) -> PureState:
    """Normalized linear combination ``sum_i c_i |psi_i>``."""
    terms = list(terms)
    if not terms:
        raise ValueError("superpose needs at least one term")
    cutoffs = terms[0][1].cutoffs
    vec = np.zeros(cutoffs.total_dim, dtype=np.complex128)
    for coeff, state in terms:
        if state.cutoffs != cutoffs:
            raise ValueError(f"mismatched cutoffs: {state.cutoffs} vs {cutoffs}")
        vec += complex(coeff) * state.amplitudes
    if np.linalg.norm(vec) < NORM_TOL:
        raise ValueError("superposition has zero norm")
    return PureState.from_vector(cutoffs, vec)


def inner_product(a, b) -> complex:
    """<a|b>, conjugate-linear in ``a``. Works for pure and bipartite states."""
    if a.cutoffs != b.cutoffs:
        raise ValueError(f"mismatched cutoffs: {a.cutoffs} vs {b.cutoffs}")
    if type(a) is not type(b):
        raise TypeError(f"cannot take overlap of {type(a).__name__} with {type(b).__name__}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def bipartite_from_pairs(
    cutoffs: FockCutoffs, terms: Sequence[tuple[complex, int, int]]
) -> BipartiteState:
    """Build a normalized field x vibration state from ``(coeff, n_f, m_v)`` terms."""
    vec = np.zeros(cutoffs.pair_dim, dtype=np.complex128)
    for coeff, n_f, m_v in terms:
        vec[cutoffs.pair_index(n_f, m_v)] += coeff
    return BipartiteState.from_vector(cutoffs, vec)
