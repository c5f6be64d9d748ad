import os

import numpy as np
import pytest

from ionbell import _kernels, _pykernels

ck = pytest.importorskip("ionbell._ckernels")


@pytest.mark.parametrize("blue", [False, True])
@pytest.mark.parametrize("dims", [(1, 1), (2, 3), (5, 4), (7, 7)])
def test_backends_agree(blue, dims, rng):
    fd, vd = dims
    n = fd * vd * 2
    for _ in range(5):
        amps = rng.normal(size=n) + 1j * rng.normal(size=n)
        out_c, bad_c = ck.sideband_propagate(amps, fd, vd, 0.731, blue)
        out_p, bad_p = _pykernels.sideband_propagate(amps, fd, vd, 0.731, blue)
        assert bad_c == bad_p
        np.testing.assert_allclose(out_c, out_p, atol=1e-15, rtol=0)


def test_phases_agree(rng):
    amps = rng.normal(size=40) + 1j * rng.normal(size=40)
    energies = rng.normal(size=40) * 1e3
    np.testing.assert_allclose(
        ck.apply_phases(amps, energies, 0.37), _pykernels.apply_phases(amps, energies, 0.37), atol=1e-12
    )


def test_wrong_length_rejected():
    for impl in (ck, _pykernels):
        with pytest.raises(ValueError):
            impl.sideband_propagate(np.zeros(5, complex), 2, 2, 1.0, False)


def test_backend_selection():
    forced = os.environ.get("IONBELL_PURE_PYTHON", "") not in ("", "0")
    assert _kernels.BACKEND == ("python" if forced else "cython")
