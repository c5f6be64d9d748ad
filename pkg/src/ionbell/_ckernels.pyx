# cython: language_level=3
"""Compiled kernels; see ``_pykernels`` for the reference numpy versions."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, sin, cos

cnp.import_array()

ctypedef double complex cplx

cdef double LEAK_AMP = 1e-14


def sideband_propagate(const cplx[::1] amps, Py_ssize_t field_dim, Py_ssize_t vib_dim,
                       double rate_t, bint blue):
    """Apply the red (blue) sideband propagator block by block.

    Returns ``(out, bad)`` where ``bad`` is the flattened index of a populated
    basis state whose partner falls outside the truncation, or -1.
    """
    cdef Py_ssize_t n_tot = field_dim * vib_dim * 2
    if amps.shape[0] != n_tot:
        raise ValueError("amplitude vector has wrong length")
    out_arr = np.array(amps, dtype=np.complex128)
    cdef cplx[::1] out = out_arr
    cdef Py_ssize_t n, m, ie, ig, n2, m2
    cdef double root, c, s
    cdef cplx ae, ag
    cdef Py_ssize_t bad = -1
    for n in range(field_dim):
        for m in range(vib_dim):
            ie = (n * vib_dim + m) * 2 + 1
            n2 = n + 1
            if blue:
                if m == 0:
                    continue
                m2 = m - 1
                root = sqrt(<double>((n + 1) * m))
            else:
                m2 = m + 1
                root = sqrt(<double>((n + 1) * (m + 1)))
            if n2 >= field_dim or m2 >= vib_dim:
                if abs(amps[ie]) > LEAK_AMP and (bad < 0 or ie < bad):
                    bad = ie
                continue
            ig = (n2 * vib_dim + m2) * 2
            c = cos(root * rate_t)
            s = sin(root * rate_t)
            ae = amps[ie]
            ag = amps[ig]
            out[ie] = c * ae - 1j * s * ag
            out[ig] = c * ag - 1j * s * ae
    # blue only: |n, vib_dim-1, g> with n >= 1 would couple above the vibrational cutoff
    if blue:
        m = vib_dim - 1
        for n in range(1, field_dim):
            ig = (n * vib_dim + m) * 2
            if abs(amps[ig]) > LEAK_AMP and (bad < 0 or ig < bad):
                bad = ig
    return out_arr, bad


def apply_phases(const cplx[::1] amps, const double[::1] energies, double t):
    """Multiply each amplitude by exp(+i E t)."""
    cdef Py_ssize_t i, n_tot = amps.shape[0]
    if energies.shape[0] != n_tot:
        raise ValueError("energy vector has wrong length")
    out_arr = np.empty(n_tot, dtype=np.complex128)
    cdef cplx[::1] out = out_arr
    cdef double ph
    for i in range(n_tot):
        ph = energies[i] * t
        out[i] = amps[i] * (cos(ph) + 1j * sin(ph))
    return out_arr
