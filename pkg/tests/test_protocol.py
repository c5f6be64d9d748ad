import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from ionbell.analysis import entanglement_entropy, fidelity
from ionbell.hilbert import FockCutoffs, basis_state, bipartite_from_pairs, superpose
from ionbell.operators import SystemParams, red_rwa_hamiltonian
from ionbell.propagation import numeric_propagate
from ionbell.protocol import (
    BELL_NAMES,
    PostSelectionError,
    ProtocolConfig,
    bell_target,
    bell_time,
    evolve_protocol,
    measure_qubit,
    outcome_probability,
    prepare_initial,
    run_bell_protocol,
)

C = FockCutoffs(8, 8)
RED = SystemParams.for_sideband("red", eta=0.1, g=10.0, nu=500.0, omega0=1e4)
BLUE = SystemParams.for_sideband("blue", eta=0.1, g=10.0, nu=500.0, omega0=1e4)


def cfg(sideband="red", n=0, m=0, theta=math.pi / 4, phi=0.0, k=0):
    return ProtocolConfig(sideband, n, m, theta, phi, k, C, RED if sideband == "red" else BLUE)


def test_config_validation():
    with pytest.raises(ValueError, match="theta"):
        cfg(theta=2.0)
    with pytest.raises(ValueError, match="phi"):
        cfg(phi=-math.pi)
    with pytest.raises(ValueError, match="field_dim"):
        cfg(n=7)
    with pytest.raises(ValueError, match="sideband"):
        cfg(sideband="green")
    with pytest.raises(ValueError, match="omega0 - omega"):
        ProtocolConfig("blue", 0, 1, 0.5, 0.0, 0, C, RED)


def test_prepare_initial_examples():
    r = 1 / math.sqrt(2)
    psi = prepare_initial(cfg())
    assert psi.amplitude(0, 0, "e") == pytest.approx(r) and psi.amplitude(0, 0, "g") == pytest.approx(r)
    assert np.count_nonzero(psi.amplitudes) == 2
    psi = prepare_initial(cfg(theta=0.0, n=2, m=3))
    assert psi.amplitude(2, 3, "e") == 1 and np.count_nonzero(psi.amplitudes) == 1
    psi = prepare_initial(cfg(theta=math.pi / 2))
    assert abs(psi.amplitude(0, 0, "g")) == pytest.approx(1) and np.count_nonzero(psi.amplitudes) == 1
    psi = prepare_initial(cfg(phi=math.pi / 2))
    assert psi.amplitude(0, 0, "g") == pytest.approx(1j * r)


def test_bell_time_examples():
    eg = RED.eta_g
    assert bell_time(RED, 0, 0) == pytest.approx(math.pi / (2 * eg))
    assert bell_time(RED, 1, 0) == pytest.approx(5 * math.pi / (2 * eg))
    with pytest.raises(ValueError):
        bell_time(SystemParams(nu=1, omega=1, omega0=2, g=0, eta=0.1), 0)


def test_bell_time_general_m_against_numeric_maximum():
    # first maximum over t of |<1, m+1, g|U(t)|0, m, e>| from the numeric propagator
    m = 3
    psi0 = basis_state(C, 0, m, "e")
    H = red_rwa_hamiltonian(RED, C)

    def neg_amp(t):
        return -abs(numeric_propagate(H, psi0, t).amplitude(1, m + 1, "g"))

    grid = np.linspace(0, 1.2, 241)
    t_grid = grid[np.argmin([neg_amp(t) for t in grid])]
    res = minimize_scalar(neg_amp, bounds=(t_grid - 0.01, t_grid + 0.01), method="bounded",
                          options={"xatol": 1e-10})
    assert res.x == pytest.approx(math.pi / (4 * RED.eta_g), abs=1e-6)
    assert bell_time(RED, 0, 3) == pytest.approx(math.pi / (4 * RED.eta_g), abs=1e-15)


def test_evolve_vacuum_red_bell():
    for phi in (0.0, 1.1, -math.pi / 2):
        psi = evolve_protocol(cfg(phi=phi))
        r = 1 / math.sqrt(2)
        assert abs(psi.amplitude(0, 0, "e")) < 1e-15
        assert psi.amplitude(0, 0, "g") == pytest.approx(np.exp(1j * phi) * r, abs=1e-15)
        assert psi.amplitude(1, 1, "g") == pytest.approx(-1j * r, abs=1e-15)


def test_evolve_blue_bell():
    r = 1 / math.sqrt(2)
    psi = evolve_protocol(cfg("blue", n=0, m=1, phi=0.4))
    assert psi.amplitude(0, 1, "g") == pytest.approx(np.exp(0.4j) * r, abs=1e-15)
    assert psi.amplitude(1, 0, "g") == pytest.approx(-1j * r, abs=1e-15)
    assert abs(psi.amplitude(0, 1, "e")) < 1e-15


@pytest.mark.parametrize("n,m", [(0, 0), (1, 2), (3, 1), (2, 2)])
def test_evolve_red_general_closed_form(n, m):
    theta, phi, t = 0.6, -1.2, 0.83
    psi = evolve_protocol(cfg(n=n, m=m, theta=theta, phi=phi), t)
    eg = RED.eta_g
    up, down = math.sqrt((n + 1) * (m + 1)), math.sqrt(n * m)
    expected = {
        (n, m, "e"): math.cos(theta) * math.cos(eg * up * t),
        (n, m, "g"): np.exp(1j * phi) * math.sin(theta) * math.cos(eg * down * t),
        (n + 1, m + 1, "g"): -1j * math.cos(theta) * math.sin(eg * up * t),
    }
    if n and m:
        expected[(n - 1, m - 1, "e")] = -1j * np.exp(1j * phi) * math.sin(theta) * math.sin(eg * down * t)
    for labels, amp in expected.items():
        assert abs(psi.amplitude(*labels) - amp) < 1e-12
    rest = np.delete(psi.amplitudes, [C.index(*lab) for lab in expected])
    assert np.max(np.abs(rest)) == 0


def test_evolve_numeric_matches_analytic():
    for c in (cfg(n=1, m=2, phi=0.3), cfg("blue", n=2, m=1, theta=0.3)):
        a = evolve_protocol(c, 0.7)
        b = evolve_protocol(c, 0.7, method="numeric")
        assert np.linalg.norm(a.amplitudes - b.amplitudes) < 1e-10
    with pytest.raises(ValueError):
        evolve_protocol(cfg(), -1.0)
    with pytest.raises(ValueError):
        evolve_protocol(cfg(), 1.0, method="euler")


def test_measure_qubit_examples():
    psi = evolve_protocol(cfg(phi=0.5))
    rec = measure_qubit(psi, "g")
    assert rec.outcome == "g" and rec.probability == pytest.approx(1, abs=1e-12)
    expected = bipartite_from_pairs(C, [(np.exp(0.5j), 0, 0), (-1j, 1, 1)])
    assert fidelity(rec.post_state, expected) == pytest.approx(1, abs=1e-12)
    # exact phases, not just overlap
    np.testing.assert_allclose(rec.post_state.amplitudes, expected.amplitudes, atol=1e-15)
    with pytest.raises(PostSelectionError):
        measure_qubit(psi, "e")

    c = FockCutoffs(2, 2)
    half = superpose([(1, basis_state(c, 0, 0, "g")), (1, basis_state(c, 0, 0, "e"))])
    rec = measure_qubit(half, "g")
    assert rec.probability == pytest.approx(0.5)
    assert rec.post_state.amplitude(0, 0) == pytest.approx(1)


def test_outcome_probabilities_sum_to_one():
    psi = evolve_protocol(cfg(n=1, m=1, theta=0.4), 0.3)
    assert outcome_probability(psi, "g") + outcome_probability(psi, "e") == pytest.approx(1, abs=1e-12)


def test_bell_targets():
    r = 1 / math.sqrt(2)
    phi_plus = bell_target("phi_plus")
    assert phi_plus.amplitude(0, 0) == pytest.approx(r) and phi_plus.amplitude(1, 1) == pytest.approx(r)
    psi_minus = bell_target("psi_minus")
    assert psi_minus.amplitude(0, 1) == pytest.approx(r) and psi_minus.amplitude(1, 0) == pytest.approx(-r)
    gram = np.array([[abs(np.vdot(bell_target(a).amplitudes, bell_target(b).amplitudes)) for b in BELL_NAMES]
                     for a in BELL_NAMES])
    np.testing.assert_allclose(gram, np.eye(4), atol=1e-15)
    embedded = bell_target("phi_minus", C)
    assert embedded.amplitude(1, 1) == pytest.approx(-r)
    with pytest.raises(ValueError):
        bell_target("ghz")


@pytest.mark.parametrize(
    "sideband,m,phi,expected",
    [
        ("red", 0, -math.pi / 2, "phi_plus"),
        ("red", 0, math.pi / 2, "phi_minus"),
        ("blue", 1, -math.pi / 2, "psi_plus"),
        ("blue", 1, math.pi / 2, "psi_minus"),
    ],
)
def test_run_bell_protocol(sideband, m, phi, expected):
    rec, rep = run_bell_protocol(cfg(sideband, m=m, phi=phi))
    assert rep.best == expected
    assert rep.fidelity == pytest.approx(1, abs=1e-12)
    assert rec.probability == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_general_m_red_state(m):
    phi = 0.9
    rec, rep = run_bell_protocol(cfg(m=m, phi=phi))
    expected = bipartite_from_pairs(C, [(np.exp(1j * phi), 0, m), (-1j, 1, m + 1)])
    assert fidelity(rec.post_state, expected) == pytest.approx(1, abs=1e-12)
    assert rep.predicted_fidelity == pytest.approx(1, abs=1e-12)
    assert rep.time == pytest.approx(math.pi / (2 * RED.eta_g * math.sqrt(m + 1)))


def test_phase_transferred_at_every_tk():
    reference = None
    for k in range(4):
        for phi in (0.0, math.pi / 4, math.pi / 2):
            rec, _ = run_bell_protocol(cfg(phi=phi, k=k))
            assert rec.probability == pytest.approx(1, abs=1e-10)
            amp00 = rec.post_state.amplitude(0, 0)
            amp11 = rec.post_state.amplitude(1, 1)
            # strip the phi phase off |0,0>; what is left must not depend on phi
            stripped = (amp00 * np.exp(-1j * phi), amp11)
            if reference is None:
                reference = stripped
            np.testing.assert_allclose(stripped, reference, atol=1e-12)


def test_fidelity_phase_invariance(rng):
    rec, _ = run_bell_protocol(cfg(phi=-math.pi / 2))
    target = bell_target("phi_plus", C)
    base = fidelity(rec.post_state, target)
    for alpha in rng.uniform(-math.pi, math.pi, 10):
        rotated = type(target)(C, np.exp(1j * alpha) * target.amplitudes)
        assert fidelity(rec.post_state, rotated) == pytest.approx(base, abs=1e-14)
        rotated = type(target)(C, np.exp(1j * alpha) * rec.post_state.amplitudes)
        assert fidelity(rotated, target) == pytest.approx(base, abs=1e-14)


@pytest.mark.parametrize("theta", [0.2, 0.5, 1.0, 1.3])
def test_unbalanced_theta_partially_entangled(theta):
    rec, _ = run_bell_protocol(cfg(theta=theta))
    s = entanglement_entropy(rec.post_state)
    assert 0 < s < math.log(2)


def test_numeric_route_gives_same_record():
    for c in (cfg(phi=0.2), cfg("blue", m=1, phi=-0.7), cfg(m=2, theta=0.5)):
        a, _ = run_bell_protocol(c)
        b, _ = run_bell_protocol(c, method="numeric")
        assert a.outcome == b.outcome
        assert abs(a.probability - b.probability) < 1e-10
        assert np.linalg.norm(a.post_state.amplitudes - b.post_state.amplitudes) < 1e-10
