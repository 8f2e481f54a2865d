"""Resonant lifting of real controls and recovery of the reduced dynamics."""

import cmath
import math

import numpy as np
import pytest

from qoct import (
    ComplexState,
    ConsistencyError,
    LevelSpec,
    SOURCE,
    interaction_picture,
    lift_controls,
    min_time_law,
    simulate_complex,
)
from qoct.min_energy import EnergyExtremal, extremal_control, transfer_time
from qoct.integrator import integrate
from qoct.time_optimal import law_state

SPEC = LevelSpec(-1.0, 0.3, 0.7, 0.0, 0.0)
PSI0 = ComplexState(np.array([1.0 + 0.0j, 0.0j, 0.0j]))


def law_pulses(law, spec):
    fn, switches = law.as_control()
    f1, f2 = lift_controls(lambda t: fn(t)[0], lambda t: fn(t)[1], spec)
    return f1, f2, switches


def test_lifted_pulse_phases():
    spec = LevelSpec(0.0, 0.0, 0.5, 0.0, 0.0)
    f1, _ = lift_controls(lambda t: 1.0, lambda t: 0.0, spec)
    for t in (0.0, 0.7, 2.0):
        assert abs(f1(t) - 1.0) < 1e-15
    spec = LevelSpec(0.0, 1.0, 1.0, math.pi / 2.0, 0.0)
    f1, _ = lift_controls(lambda t: 1.0, lambda t: 0.0, spec)
    assert abs(f1(math.pi) - cmath.exp(1j * 1.5 * math.pi)) < 1e-14


def test_lifted_pulse_modulus_matches_amplitude():
    spec = LevelSpec(-0.4, 0.9, 1.3, 0.8, -0.2)
    u1 = lambda t: math.cos(3 * t) * 0.7
    u2 = lambda t: math.sin(2 * t)
    f1, f2 = lift_controls(u1, u2, spec)
    for t in np.linspace(0, 3, 20):
        assert abs(abs(f1(t)) - abs(u1(t))) < 1e-14
        assert abs(abs(f2(t)) - abs(u2(t))) < 1e-14


def test_free_evolution_keeps_populations():
    zero = lambda t: 0.0 + 0.0j
    start = ComplexState(np.array([0.6 + 0.0j, 0.48j, 0.64 + 0.0j]))
    traj = simulate_complex(start, zero, zero, SPEC, 1.0, 3.0, 1e-3, record_every=100)
    pops0 = start.populations()
    for s in traj.samples:
        assert np.max(np.abs(np.abs(s.state) ** 2 - pops0)) < 1e-10


def test_min_time_transfer_survives_the_lift():
    law = min_time_law(1.0)
    f1, f2, switches = law_pulses(law, SPEC)
    traj = simulate_complex(
        PSI0, f1, f2, SPEC, 1.0, law.total_duration, 1e-3, switch_times=switches
    )
    assert abs(traj.endpoint[2]) ** 2 >= 1.0 - 1e-6


def test_energy_transfer_survives_the_lift():
    alpha, m3 = 2.0, 0.09159664366351113
    ctrl = extremal_control(EnergyExtremal(alpha, m3))
    f1, f2 = lift_controls(lambda t: ctrl(t)[0], lambda t: ctrl(t)[1], SPEC)
    T = transfer_time(alpha, m3)
    traj = simulate_complex(PSI0, f1, f2, SPEC, alpha, T, 1e-3)
    assert abs(traj.endpoint[2]) ** 2 >= 1.0 - 1e-5


def test_interaction_picture_recovers_bang_trajectory():
    law = min_time_law(0.5)
    f1, f2, switches = law_pulses(law, SPEC)
    traj = simulate_complex(
        PSI0, f1, f2, SPEC, 0.5, law.total_duration, 1e-3,
        switch_times=switches, record_every=20,
    )
    real = interaction_picture(traj, SPEC)
    for s in real.samples:
        assert np.max(np.abs(s.state - law_state(SOURCE, law, s.t))) < 1e-6


def test_interaction_picture_recovers_energy_trajectory():
    m3 = 1.0 / math.sqrt(3.0)
    ctrl = extremal_control(EnergyExtremal(1.0, m3))
    T = transfer_time(1.0, m3)
    f1, f2 = lift_controls(lambda t: ctrl(t)[0], lambda t: ctrl(t)[1], SPEC)
    traj = simulate_complex(PSI0, f1, f2, SPEC, 1.0, T, 1e-3, record_every=20)
    real = interaction_picture(traj, SPEC)
    ref = integrate(SOURCE, ctrl, 1.0, T, 1e-3, record_every=20)
    assert np.allclose(real.times(), ref.times())
    assert np.max(np.abs(real.states() - ref.states())) < 1e-6


def test_populations_independent_of_phases():
    rng = np.random.default_rng(8)
    law = min_time_law(1.0)
    ref = None
    for _ in range(10):
        spec = LevelSpec(
            -1.0, 0.3, 0.7,
            float(rng.uniform(-math.pi, math.pi)),
            float(rng.uniform(-math.pi, math.pi)),
        )
        f1, f2, switches = law_pulses(law, spec)
        traj = simulate_complex(
            PSI0, f1, f2, spec, 1.0, law.total_duration, 2e-3,
            switch_times=switches, record_every=50,
        )
        pops = np.abs(traj.states()) ** 2
        if ref is None:
            ref = pops
        else:
            assert np.max(np.abs(pops - ref)) < 1e-6


def test_random_energy_triples():
    rng = np.random.default_rng(15)
    law = min_time_law(2.0)
    for _ in range(5):
        energies = rng.uniform(-2.0, 2.0, size=3)
        spec = LevelSpec(*(float(e) for e in energies), 0.1, -0.4)
        f1, f2, switches = law_pulses(law, spec)
        traj = simulate_complex(
            PSI0, f1, f2, spec, 2.0, law.total_duration, 1e-3, switch_times=switches
        )
        assert abs(traj.endpoint[2]) ** 2 >= 1.0 - 1e-6


def test_norm_conserved():
    law = min_time_law(0.5)
    f1, f2, switches = law_pulses(law, SPEC)
    traj = simulate_complex(
        PSI0, f1, f2, SPEC, 0.5, law.total_duration, 1e-4,
        switch_times=switches, record_every=200,
    )
    for s in traj.samples:
        assert abs(float(np.sum(np.abs(s.state) ** 2)) - 1.0) < 1e-9


def test_wrong_phases_raise_consistency_error():
    spec = LevelSpec(-1.0, 0.3, 0.7, 0.9, -0.7)
    law = min_time_law(1.0)
    f1, f2, switches = law_pulses(law, spec)
    traj = simulate_complex(
        PSI0, f1, f2, spec, 1.0, law.total_duration, 1e-3,
        switch_times=switches, record_every=50,
    )
    with pytest.raises(ConsistencyError):
        interaction_picture(traj, SPEC)  # phases do not match the drive
