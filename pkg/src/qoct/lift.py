"""Lift real optimal controls to resonant complex laser pulses and simulate
the original three-level dynamics with drift.

Each real control is modulated at exactly the energy gap it couples, with an
arbitrary phase.  Simulating the resulting complex system and undoing the
interaction-picture and phase transformations must reproduce the reduced real
trajectory; population histories agree regardless of the chosen phases.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .errors import ConsistencyError, DomainError
from .integrator import Trajectory, TrajectorySample


@dataclass(frozen=True)
class LevelSpec:
    """Level energies (hbar = 1) and the two laser phases in [-pi, pi]."""

    e1: float
    e2: float
    e3: float
    xi1: float = 0.0
    xi2: float = 0.0


@dataclass(frozen=True)
class ComplexState:
    """A normalized complex 3-vector of level amplitudes."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", a)
        if a.shape != (3,):
            raise DomainError("complex state must have three amplitudes")
        n = float(np.sum(np.abs(a) ** 2))
        if abs(n - 1.0) > 1e-10:
            raise DomainError(f"complex state norm^2 = {n!r} is not 1 within 1e-10")

    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def lift_controls(u1, u2, spec: LevelSpec):
    """Resonant complex pulses from real control signals.

    Args:
        u1, u2: callables t -> real control value.
        spec: level energies and phases.

    Returns:
        (F1, F2): callables t -> complex pulse, with |Fj(t)| = |uj(t)|.
    """
    w1 = spec.e2 - spec.e1
    w2 = spec.e3 - spec.e2

    def f1(t):
        return u1(t) * cmath.exp(1j * (w1 * t + spec.xi1))

    def f2(t):
        return u2(t) * cmath.exp(1j * (w2 * t + spec.xi2))

    return f1, f2


def _schrodinger_rhs(a1, a2, a3, e1, e2, e3, f1, f2, alpha):
    # i * da/dt = H a  with couplings f1 and alpha*f2 on the off-diagonals
    d1 = -1j * (e1 * a1 + f1 * a2)
    d2 = -1j * (f1.conjugate() * a1 + e2 * a2 + alpha * f2 * a3)
    d3 = -1j * (alpha * f2.conjugate() * a2 + e3 * a3)
    return d1, d2, d3


def simulate_complex(
    psi0: ComplexState,
    f1,
    f2,
    spec: LevelSpec,
    alpha: float,
    T: float,
    h: float,
    switch_times=(),
    record_every: int = 1,
) -> Trajectory:
    """RK4 integration of the driven three-level Schroedinger equation.

    The norm is rescaled to one after every step; steps never straddle a
    control switching time passed in ``switch_times``.

    Returns:
        Trajectory of complex state samples; the final population of level
        three is ``abs(traj.endpoint[2])**2``.
    """
    if h <= 0.0 or T < 0.0:
        raise DomainError("simulate_complex requires h > 0 and T >= 0")
    e1, e2, e3 = spec.e1, spec.e2, spec.e3

    a1, a2, a3 = (complex(z) for z in psi0.amplitudes)
    out = [TrajectorySample(0.0, np.array([a1, a2, a3]), abs(f1(0.0)), abs(f2(0.0)))]
    if T == 0.0:
        return Trajectory(tuple(out))

    cuts = sorted({0.0, T, *(s for s in switch_times if 0.0 < s < T)})
    for t0, t1 in zip(cuts[:-1], cuts[1:]):
        n = max(1, math.ceil((t1 - t0) / h - 1e-12))
        hh = (t1 - t0) / n
        delta = max((t1 - t0) * 1e-10, 8.0 * np.finfo(float).eps * abs(t1))
        cut = t1 - delta
        t = t0
        for i in range(n):
            ta = t if t < cut else cut
            tm = t + 0.5 * hh
            tm = tm if tm < cut else cut
            tb = t + hh
            tb = tb if tb < cut else cut
            fa1, fa2 = f1(ta), f2(ta)
            fm1, fm2 = f1(tm), f2(tm)
            fb1, fb2 = f1(tb), f2(tb)

            k1 = _schrodinger_rhs(a1, a2, a3, e1, e2, e3, fa1, fa2, alpha)
            k2 = _schrodinger_rhs(
                a1 + 0.5 * hh * k1[0],
                a2 + 0.5 * hh * k1[1],
                a3 + 0.5 * hh * k1[2],
                e1, e2, e3, fm1, fm2, alpha,
            )
            k3 = _schrodinger_rhs(
                a1 + 0.5 * hh * k2[0],
                a2 + 0.5 * hh * k2[1],
                a3 + 0.5 * hh * k2[2],
                e1, e2, e3, fm1, fm2, alpha,
            )
            k4 = _schrodinger_rhs(
                a1 + hh * k3[0],
                a2 + hh * k3[1],
                a3 + hh * k3[2],
                e1, e2, e3, fb1, fb2, alpha,
            )
            a1 = a1 + hh / 6.0 * (k1[0] + 2.0 * (k2[0] + k3[0]) + k4[0])
            a2 = a2 + hh / 6.0 * (k1[1] + 2.0 * (k2[1] + k3[1]) + k4[1])
            a3 = a3 + hh / 6.0 * (k1[2] + 2.0 * (k2[2] + k3[2]) + k4[2])
            norm = math.sqrt(abs(a1) ** 2 + abs(a2) ** 2 + abs(a3) ** 2)
            a1, a2, a3 = a1 / norm, a2 / norm, a3 / norm
            t = t0 + (i + 1) * hh
            if (i + 1) % record_every == 0 or i == n - 1:
                out.append(
                    TrajectorySample(
                        min(t, t1), np.array([a1, a2, a3]), abs(f1(ta)), abs(f2(ta))
                    )
                )
    return Trajectory(tuple(out))


def interaction_picture(traj: Trajectory, spec: LevelSpec) -> Trajectory:
    """Undo the free evolution and the phase transformation, recover reals.

    Applies the inverse interaction-picture rotation and the constant phase
    matrix built from the spec phases; for a real initial state driven by the
    matching resonant pulses the result is real up to integration error.

    Raises:
        ConsistencyError: when imaginary residues exceed 1e-4 (wrong phases
            or off-resonant drive).
    """
    v_inv = np.array(
        [
            1.0,
            cmath.exp(1j * (math.pi / 2.0 + spec.xi1)),
            cmath.exp(1j * (math.pi + spec.xi1 + spec.xi2)),
        ]
    )
    energies = np.array([spec.e1, spec.e2, spec.e3])
    out = []
    worst = 0.0
    for s in traj.samples:
        u_inv = np.exp(1j * energies * s.t)
        chi = v_inv * (u_inv * np.asarray(s.state, dtype=complex))
        worst = max(worst, float(np.max(np.abs(chi.imag))))
        real = chi.real / float(np.linalg.norm(chi.real))
        out.append(TrajectorySample(s.t, real, s.u1, s.u2, s.monitors))
    if worst > 1e-4:
        raise ConsistencyError(
            f"imaginary residue {worst:.3e} after undoing the resonant phases"
        )
    return Trajectory(tuple(out))
