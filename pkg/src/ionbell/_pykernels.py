"""Pure-numpy versions of the compiled kernels (same signatures and results)."""
import numpy as np

LEAK_AMP = 1e-14


def _pair_indices(field_dim, vib_dim, blue):
    n, m = np.meshgrid(np.arange(field_dim), np.arange(vib_dim), indexing="ij")
    n, m = n.ravel(), m.ravel()
    if blue:
        n2, m2 = n + 1, m - 1
        root = np.sqrt((n + 1.0) * m)
        coupled = m >= 1
    else:
        n2, m2 = n + 1, m + 1
        root = np.sqrt((n + 1.0) * (m + 1.0))
        coupled = np.ones_like(n, dtype=bool)
    inside = (n2 < field_dim) & (m2 >= 0) & (m2 < vib_dim)
    ie = (n * vib_dim + m) * 2 + 1
    ig = (n2 * vib_dim + m2) * 2
    return ie, ig, root, coupled, inside


def sideband_propagate(amps, field_dim, vib_dim, rate_t, blue):
    amps = np.asarray(amps, dtype=np.complex128)
    if amps.shape[0] != field_dim * vib_dim * 2:
        raise ValueError("amplitude vector has wrong length")
    ie, ig, root, coupled, inside = _pair_indices(field_dim, vib_dim, bool(blue))
    out = amps.copy()
    ok = coupled & inside
    ie_ok, ig_ok = ie[ok], ig[ok]
    c = np.cos(root[ok] * rate_t)
    s = np.sin(root[ok] * rate_t)
    ae, ag = amps[ie_ok], amps[ig_ok]
    out[ie_ok] = c * ae - 1j * s * ag
    out[ig_ok] = c * ag - 1j * s * ae

    suspects = list(ie[coupled & ~inside])
    if blue:
        m = vib_dim - 1
        suspects += [(n * vib_dim + m) * 2 for n in range(1, field_dim)]
    bad = -1
    for i in sorted(suspects):
        if abs(amps[i]) > LEAK_AMP:
            bad = int(i)
            break
    return out, bad


def apply_phases(amps, energies, t):
    return np.asarray(amps, dtype=np.complex128) * np.exp(1j * np.asarray(energies) * t)
