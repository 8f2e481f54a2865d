"""Fixed-step RK4 propagation on the sphere with event location.

This is the independent cross-check path: everything it produces can be
compared against the exact rotation composition of constant-control arcs.
States are renormalized to the sphere after every step; a large correction
means a step straddled a control discontinuity, which is reported instead of
silently degrading the order.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import tolerances as tol
from .errors import DomainError, HorizonError, StepError
from .so3 import StateS2


class ExitFace(enum.Enum):
    """Which part of the octant boundary a trajectory crossed first."""

    PSI1 = "psi1"
    PSI2 = "psi2"
    TARGET = "target"


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    state: np.ndarray
    u1: float
    u2: float
    monitors: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Trajectory:
    """Time-stamped state samples with the control values that produced them."""

    samples: tuple[TrajectorySample, ...]

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        ts = self.times()
        if len(ts) == 0:
            raise DomainError("trajectory must hold at least one sample")
        if np.any(np.diff(ts) <= 0.0):
            raise DomainError("sample times must be strictly increasing")
        norms = np.array(
            [float(np.sum(np.abs(s.state) ** 2)) for s in self.samples]
        )
        if np.max(np.abs(norms - 1.0)) > 1e-10:
            raise DomainError("a state sample is off the unit sphere beyond 1e-10")

    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    def states(self) -> np.ndarray:
        return np.array([s.state for s in self.samples])

    @property
    def endpoint(self) -> np.ndarray:
        return self.samples[-1].state

    @property
    def duration(self) -> float:
        return self.samples[-1].t - self.samples[0].t


def _rhs(x: float, y: float, z: float, u1: float, au2: float):
    # psi' = u1*F1(psi) + u2*F2(psi) with the alpha weight folded into au2
    return (-u1 * y, u1 * x - au2 * z, au2 * y)


def _rk4_step(state, t, h, control, alpha):
    """One renormalized RK4 step from (t, state); control is t -> (u1, u2)."""
    x, y, z = state
    u1a, u2a = control(t)
    u1b, u2b = control(t + 0.5 * h)
    u1c, u2c = control(t + h)
    aa, ab, ac = alpha * u2a, alpha * u2b, alpha * u2c

    k1 = _rhs(x, y, z, u1a, aa)
    k2 = _rhs(
        x + 0.5 * h * k1[0], y + 0.5 * h * k1[1], z + 0.5 * h * k1[2], u1b, ab
    )
    k3 = _rhs(
        x + 0.5 * h * k2[0], y + 0.5 * h * k2[1], z + 0.5 * h * k2[2], u1b, ab
    )
    k4 = _rhs(x + h * k3[0], y + h * k3[1], z + h * k3[2], u1c, ac)

    nx = x + h / 6.0 * (k1[0] + 2.0 * (k2[0] + k3[0]) + k4[0])
    ny = y + h / 6.0 * (k1[1] + 2.0 * (k2[1] + k3[1]) + k4[1])
    nz = z + h / 6.0 * (k1[2] + 2.0 * (k2[2] + k3[2]) + k4[2])

    norm = math.sqrt(nx * nx + ny * ny + nz * nz)
    if abs(norm - 1.0) > tol.RENORM_LIMIT:
        raise StepError(
            f"renormalization correction {abs(norm - 1.0):.3e} at t={t + h:.6g}; "
            "align steps with the control switching times"
        )
    return (nx / norm, ny / norm, nz / norm)


def _subintervals(T: float, switch_times) -> list[tuple[float, float]]:
    cuts = sorted({0.0, T, *(s for s in switch_times if 0.0 < s < T)})
    return [(cuts[i], cuts[i + 1]) for i in range(len(cuts) - 1)]


def integrate(
    psi0: StateS2,
    control,
    alpha: float,
    T: float,
    h: float,
    switch_times=(),
    record_every: int = 1,
    monitors=None,
) -> Trajectory:
    """Propagate psi' = u1*F1 + u2*F2 with RK4 and per-step renormalization.

    Args:
        psi0: initial unit state.
        control: callable t -> (u1, u2); piecewise smooth.
        alpha: nonisotropy factor (> 0).
        T: final time (>= 0).
        h: nominal step; each subinterval between switch times uses the
            largest uniform step not exceeding h.
        switch_times: interior discontinuity times; steps never straddle one.
        record_every: thin the stored samples (boundaries always kept).
        monitors: optional dict name -> fn(t, state_tuple, u1, u2).

    Returns:
        Trajectory sampled on the step grid.
    """
    if h <= 0.0 or T < 0.0:
        raise DomainError("integrate requires h > 0 and T >= 0")
    if alpha <= 0.0:
        raise DomainError("nonisotropy factor must be positive")

    monitors = monitors or {}

    def sample(t, state):
        u1, u2 = control(t)
        mon = {name: fn(t, state, u1, u2) for name, fn in monitors.items()}
        return TrajectorySample(t, np.array(state), u1, u2, mon)

    state = psi0.as_tuple()
    out = [sample(0.0, state)]
    if T == 0.0:
        return Trajectory(tuple(out))

    for t0, t1 in _subintervals(T, switch_times):
        n = max(1, math.ceil((t1 - t0) / h - 1e-12))
        hh = (t1 - t0) / n
        # stage times at the right endpoint are nudged strictly inside the
        # subinterval so piecewise-constant controls are read on the left
        # side of the switch; the nudge is far below the step error
        delta = max((t1 - t0) * 1e-10, 8.0 * np.finfo(float).eps * abs(t1))
        cutoff = t1 - delta

        def seg_control(t, _c=control, _cut=cutoff):
            return _c(t if t < _cut else _cut)

        t = t0
        for i in range(n):
            state = _rk4_step(state, t, hh, seg_control, alpha)
            t = t0 + (i + 1) * hh
            if (i + 1) % record_every == 0 or i == n - 1:
                out.append(sample(min(t, t1), state))

    return Trajectory(tuple(out))


def first_exit(
    psi0: StateS2,
    control,
    alpha: float,
    horizon: float,
    h: float,
) -> tuple[ExitFace, float, np.ndarray]:
    """Locate the first crossing of the faces psi1 = 0 or psi2 = 0.

    The crossing is detected by a strict sign change between consecutive
    steps and then bisected in time to a width of 1e-11.  Starting exactly on
    a face (psi2 = 0 at the source) does not count as a crossing.

    Returns:
        (face, exit time, state at the exit time).
    """
    if h <= 0.0 or horizon <= 0.0:
        raise DomainError("first_exit requires h > 0 and horizon > 0")

    def advance(state, t, dt):
        # split long spans so single-step accuracy never degrades
        n = max(1, math.ceil(dt / h - 1e-12))
        dd = dt / n
        for i in range(n):
            state = _rk4_step(state, t + i * dd, dd, control, alpha)
        return state

    state = psi0.as_tuple()
    t = 0.0
    n = math.ceil(horizon / h)
    hh = horizon / n
    # last sample at which each watched component was strictly positive
    last_pos: list[tuple[float, tuple] | None] = [None, None]
    if state[0] > 0.0:
        last_pos[0] = (0.0, state)
    if state[1] > 0.0:
        last_pos[1] = (0.0, state)
    for _ in range(n):
        state = advance(state, t, hh)
        t += hh
        crossings = []
        for idx, face in ((0, ExitFace.PSI1), (1, ExitFace.PSI2)):
            if state[idx] > 0.0:
                last_pos[idx] = (t, state)
            elif state[idx] < -tol.EXIT_DEAD_BAND and last_pos[idx] is not None:
                lo_t, lo_state = last_pos[idx]
                hi_t = t
                while hi_t - lo_t > tol.EXIT_TIME_BISECT:
                    mid_t = 0.5 * (lo_t + hi_t)
                    mid_state = advance(lo_state, lo_t, mid_t - lo_t)
                    if mid_state[idx] > 0.0:
                        lo_t, lo_state = mid_t, mid_state
                    else:
                        hi_t = mid_t
                crossings.append((0.5 * (lo_t + hi_t), face, lo_state))
        if crossings:
            t_exit, face, exit_state = min(crossings, key=lambda c: c[0])
            return face, t_exit, np.array(exit_state)
    raise HorizonError(f"no boundary crossing within horizon {horizon:.6g}")
