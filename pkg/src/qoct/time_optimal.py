"""Complete minimum-time synthesis for the reduced sphere dynamics.

Optimal trajectories from the source (1,0,0) are finite concatenations of at
most three circle arcs: bang arcs with controls in {-1,0,+1}^2 and singular
arcs that run with one control equal to zero along the octant boundary.  The
closed-form law reaching the target (0,0,1) depends on whether the
nonisotropy factor is below, at, or above one, and the full family of optimal
trajectories covers the positive octant.

Everything here is propagated exactly through rotation composition; the RK4
integrator is only used elsewhere as an independent cross-check.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .errors import DomainError, NoSolutionError, SingularLocusError
from .integrator import Trajectory, TrajectorySample
from .so3 import SOURCE, SkewGenerator, StateS2, generator, rodrigues_exp


@dataclass(frozen=True)
class Segment:
    """A constant-control arc: controls in [-1,1]^2 held for a duration."""

    u1: float
    u2: float
    duration: float

    def __post_init__(self):
        if max(abs(self.u1), abs(self.u2)) > 1.0 + 1e-12:
            raise DomainError("segment controls must lie in [-1, 1]")
        if self.duration < 0.0 or not math.isfinite(self.duration):
            raise DomainError("segment duration must be finite and >= 0")


@dataclass(frozen=True)
class ControlLaw:
    """An ordered, finite concatenation of constant-control segments."""

    segments: tuple[Segment, ...]
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if self.alpha <= 0.0 or not math.isfinite(self.alpha):
            raise DomainError("nonisotropy factor must be positive and finite")

    @property
    def total_duration(self) -> float:
        return sum(s.duration for s in self.segments)

    def switch_times(self) -> tuple[float, ...]:
        """Cumulative times at which a new segment begins (interior only)."""
        out = []
        acc = 0.0
        for seg in self.segments[:-1]:
            acc += seg.duration
            out.append(acc)
        return tuple(out)

    def control(self, t: float) -> tuple[float, float]:
        """Control values at time t; each segment owns [start, end)."""
        starts = [0.0]
        for seg in self.segments[:-1]:
            starts.append(starts[-1] + seg.duration)
        idx = max(0, bisect_right(starts, t) - 1)
        seg = self.segments[idx] if self.segments else Segment(0.0, 0.0, 0.0)
        return seg.u1, seg.u2

    def as_control(self):
        """(callable t -> (u1, u2), interior switch times) for the integrator."""
        return self.control, self.switch_times()


@dataclass(frozen=True)
class SwitchingState:
    """Values of the two switching functions and the commutator pairing.

    Along a double-bang arc (|u1| = |u2| = 1) the weighted quadratic form
    below is a constant of motion of the switching dynamics.
    """

    phi1: float
    phi2: float
    phi3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.phi1, self.phi2, self.phi3])

    @classmethod
    def from_array(cls, arr) -> "SwitchingState":
        return cls(float(arr[0]), float(arr[1]), float(arr[2]))

    def quadratic_invariant(self, alpha: float) -> float:
        return alpha * alpha * self.phi1**2 + self.phi2**2 + self.phi3**2

    def evolve(self, u1: float, u2: float, alpha: float, t: float) -> "SwitchingState":
        """Propagate along a constant-control arc."""
        return SwitchingState.from_array(
            switching_propagator(u1, u2, alpha, t) @ self.as_array()
        )


def delta_a(psi: StateS2, alpha: float) -> float:
    """Determinant pairing of the two control fields: alpha * psi2."""
    return alpha * psi.psi2


def delta_b1(psi: StateS2, alpha: float) -> float:
    """Pairing of the first field with the commutator field: alpha * psi1."""
    return alpha * psi.psi1


def delta_b2(psi: StateS2, alpha: float) -> float:
    """Pairing of the second field with the commutator field: -alpha^2 * psi3."""
    return -alpha * alpha * psi.psi3


def f1(psi: StateS2) -> float:
    """Switching-direction ratio for the first control: -psi1/psi2.

    Negative throughout the open octant, which is why the first control can
    only switch from +1 to -1 there.
    """
    if abs(psi.psi2) < tol.SINGULAR_LOCUS:
        raise SingularLocusError("psi2 = 0: switching ratios are undefined here")
    return -psi.psi1 / psi.psi2


def f2(psi: StateS2, alpha: float) -> float:
    """Switching-direction ratio for the second control: alpha * psi3/psi2."""
    if abs(psi.psi2) < tol.SINGULAR_LOCUS:
        raise SingularLocusError("psi2 = 0: switching ratios are undefined here")
    return alpha * psi.psi3 / psi.psi2


def switching_propagator(u1: float, u2: float, alpha: float, t: float) -> np.ndarray:
    """Closed-form propagator of the switching functions along a bang arc.

    Maps (phi1, phi2, phi3)(0) to their values at time t under the linear
    system phi1' = -u2*phi3, phi2' = u1*phi3, phi3' = alpha^2*u2*phi1 - u1*phi2
    with constant controls.

    Raises:
        DomainError: for the degenerate input u1 = u2 = 0.
    """
    w2 = u1 * u1 + alpha * alpha * u2 * u2
    if w2 <= 0.0:
        raise DomainError("switching propagator undefined for zero controls")
    w = math.sqrt(w2)
    c = math.cos(w * t)
    s = math.sin(w * t)
    a2 = alpha * alpha
    return np.array(
        [
            [
                (u1 * u1 + a2 * u2 * u2 * c) / w2,
                u1 * u2 * (1.0 - c) / w2,
                -u2 * s / w,
            ],
            [
                a2 * u1 * u2 * (1.0 - c) / w2,
                (a2 * u2 * u2 + u1 * u1 * c) / w2,
                u1 * s / w,
            ],
            [a2 * u2 * s / w, -u1 * s / w, c],
        ]
    )


def t_alpha(alpha: float) -> float:
    """Duration for which the double-bang arc (+1,+1) from the source stays
    extremal."""
    if alpha <= 0.0:
        raise DomainError("nonisotropy factor must be positive")
    if alpha <= 1.0:
        return math.acos(-alpha * alpha) / math.sqrt(1.0 + alpha * alpha)
    return math.acos(-1.0 / (alpha * alpha)) / math.sqrt(1.0 + alpha * alpha)


def _is_isotropic(alpha: float) -> bool:
    return abs(alpha - 1.0) <= tol.ALPHA_ONE_REL


def min_time_law(alpha: float) -> ControlLaw:
    """The minimum-time control law from the source to the target.

    Below one: a double bang (+1,+1) up to the octant boundary, then a
    singular arc (0,+1) along the psi1 = 0 circle into the target.  At one: a
    single double bang.  Above one: a singular arc (+1,0) along the equator,
    then the double bang.
    """
    if alpha <= 0.0:
        raise DomainError("nonisotropy factor must be positive")
    if _is_isotropic(alpha):
        return ControlLaw((Segment(1.0, 1.0, math.pi / math.sqrt(2.0)),), alpha)
    if alpha < 1.0:
        return ControlLaw(
            (
                Segment(1.0, 1.0, t_alpha(alpha)),
                Segment(0.0, 1.0, math.acos(alpha) / alpha),
            ),
            alpha,
        )
    return ControlLaw(
        (
            Segment(1.0, 0.0, math.acos(1.0 / alpha)),
            Segment(1.0, 1.0, t_alpha(alpha)),
        ),
        alpha,
    )


def law_state(psi0: StateS2, law: ControlLaw, t: float) -> np.ndarray:
    """Exact state at time t under a law (full arcs composed, last one partial)."""
    state = psi0.as_array()
    remaining = t
    for seg in law.segments:
        if remaining <= 0.0:
            break
        step = min(seg.duration, remaining)
        if step > 0.0:
            state = rodrigues_exp(generator(seg.u1, seg.u2, law.alpha), step).apply_array(state)
        remaining -= step
    return state


def propagate_law(psi0: StateS2, law: ControlLaw, max_step: float | None = None) -> Trajectory:
    """Exact propagation of a control law by rotation composition.

    Args:
        psi0: initial unit state.
        law: segments to apply in order.
        max_step: when given, each segment is sampled on a uniform grid with
            spacing at most this; otherwise only segment endpoints appear.

    Returns:
        Trajectory whose endpoint is exact up to rotation arithmetic.
    """
    samples = [TrajectorySample(0.0, psi0.as_array(), *law.control(0.0))]
    state = psi0.as_array()
    t = 0.0
    for seg in law.segments:
        if seg.duration <= 0.0:
            continue
        g = generator(seg.u1, seg.u2, law.alpha)
        if max_step is None:
            n = 1
        else:
            n = max(1, math.ceil(seg.duration / max_step))
        dt = seg.duration / n
        r = rodrigues_exp(g, dt)
        for _ in range(n):
            state = r.apply_array(state)
            t += dt
            samples.append(TrajectorySample(t, state, seg.u1, seg.u2))
    return Trajectory(tuple(samples))


# ---------------------------------------------------------------------------
# synthesis: reaching an arbitrary octant target
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Family:
    """One parameterized family of the synthesis.

    A law of the family is prefix + (first control held for the parameter a)
    + mid + (final control held until the target is met).
    """

    prefix: tuple[Segment, ...]
    first: tuple[float, float]
    a_lo: float
    a_hi: float
    mid: tuple[Segment, ...]
    final: tuple[float, float]


def _families(alpha: float) -> list[_Family]:
    ta = t_alpha(alpha)
    if alpha <= 1.0 or _is_isotropic(alpha):
        fams = [
            _Family((), (1.0, 0.0), 0.0, math.pi / 2.0, (), (1.0, 1.0)),
            _Family((), (1.0, 1.0), 0.0, ta, (), (-1.0, 1.0)),
        ]
        if not _is_isotropic(alpha) and alpha < 1.0:
            fams.append(
                _Family(
                    (Segment(1.0, 1.0, ta),),
                    (0.0, 1.0),
                    0.0,
                    math.acos(alpha) / alpha,
                    (),
                    (-1.0, 1.0),
                )
            )
        return fams
    ac = math.acos(1.0 / alpha)
    # the first family's range includes a < arccos(1/alpha): truncations of
    # the three-arc extremals end on such (1,0)+(1,1) prefixes
    return [
        _Family((), (1.0, 0.0), 0.0, math.pi / 2.0, (), (1.0, 1.0)),
        _Family((), (1.0, 0.0), 0.0, ac, (Segment(1.0, 1.0, ta),), (-1.0, 1.0)),
        _Family((), (1.0, 1.0), 0.0, ta, (), (-1.0, 1.0)),
    ]


def _state_after(segments, alpha: float, start: np.ndarray) -> np.ndarray:
    state = start
    for seg in segments:
        if seg.duration > 0.0:
            state = rodrigues_exp(generator(seg.u1, seg.u2, alpha), seg.duration).apply_array(state)
    return state


def _arc_angle_to(p: np.ndarray, target: np.ndarray, g: SkewGenerator) -> float | None:
    """Forward rotation angle in [0, 2*pi) taking p to the target about g's axis.

    None when the target does not lie on the circle through p (different
    cone angle or radius mismatch beyond tolerance).
    """
    n = g.axis() / g.rate
    pn = float(p @ n)
    tn = float(target @ n)
    v1 = p - pn * n
    v2 = target - tn * n
    r1 = float(np.linalg.norm(v1))
    r2 = float(np.linalg.norm(v2))
    if abs(pn - tn) > 1e-9 or abs(r1 - r2) > 1e-9:
        return None
    if r1 < 1e-12:
        return 0.0
    ang = math.atan2(float(n @ np.cross(v1, v2)), float(v1 @ v2))
    if ang < 0.0:
        ang += 2.0 * math.pi
    if ang > 2.0 * math.pi - 1e-9:
        ang = 0.0
    return ang


def _trim(segments) -> tuple[Segment, ...]:
    return tuple(s for s in segments if s.duration > 1e-12)


def _octant_clean(law: ControlLaw, samples: int = 200) -> bool:
    traj = propagate_law(SOURCE, law, max_step=max(law.total_duration / samples, 1e-9))
    return bool(np.min(traj.states()) >= -tol.SYNTHESIS_ACCEPT)


def _family_candidates(fam: _Family, alpha: float, target: np.ndarray):
    """All laws of one family whose final arc passes through the target."""
    g_first = generator(*fam.first, alpha)
    g_final = generator(*fam.final, alpha)
    n_final = g_final.axis() / g_final.rate
    base = _state_after(fam.prefix, alpha, SOURCE.as_array())
    level = float(target @ n_final)

    def miss(a: float) -> float:
        p = rodrigues_exp(g_first, a).apply_array(base)
        p = _state_after(fam.mid, alpha, p)
        return float(p @ n_final) - level

    grid = np.linspace(fam.a_lo, fam.a_hi, 257)
    vals = [miss(a) for a in grid]
    roots = []
    snap = 1e-13
    for i in range(len(grid) - 1):
        va, vb = vals[i], vals[i + 1]
        if abs(va) <= snap:
            roots.append(grid[i])
        elif va * vb < 0.0:
            lo, hi = grid[i], grid[i + 1]
            flo = va
            while hi - lo > tol.BRACKET_MIN:
                mid = 0.5 * (lo + hi)
                fm = miss(mid)
                if fm == 0.0:
                    lo = hi = mid
                    break
                if (flo < 0.0) == (fm < 0.0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            roots.append(0.5 * (lo + hi))
    if abs(vals[-1]) <= snap:
        roots.append(grid[-1])

    for a in roots:
        p = rodrigues_exp(g_first, a).apply_array(base)
        p = _state_after(fam.mid, alpha, p)
        ang = _arc_angle_to(p, target, g_final)
        if ang is None:
            continue
        dur = ang / g_final.rate
        law = ControlLaw(
            _trim(
                fam.prefix
                + (Segment(fam.first[0], fam.first[1], a),)
                + fam.mid
                + (Segment(fam.final[0], fam.final[1], dur),)
            ),
            alpha,
        )
        endpoint = _state_after(law.segments, alpha, SOURCE.as_array())
        if float(np.linalg.norm(endpoint - target)) > tol.SYNTHESIS_ACCEPT:
            continue
        if not _octant_clean(law):
            continue
        yield law


def synthesis_law(
    alpha: float,
    target: StateS2,
    reject_psi1_boundary: bool = False,
) -> ControlLaw:
    """The unique time-optimal law from the source to an octant target.

    The law is selected from the parameterized synthesis families by
    root-finding on the first switching time; the conserved cone angle of the
    final arc supplies the scalar equation.  Targets on the psi2 = 0 boundary
    are not part of the synthesis except for the source and target corners.

    Args:
        alpha: nonisotropy factor.
        target: desired endpoint in the closed positive octant.
        reject_psi1_boundary: when True, targets on the psi1 = 0 boundary
            below the double-bang exit height are refused instead of being
            reached through the singular family.

    Raises:
        NoSolutionError: when no family produces the target.
    """
    if alpha <= 0.0:
        raise DomainError("nonisotropy factor must be positive")
    if not target.in_octant():
        raise DomainError("target must lie in the closed positive octant")
    tgt = target.as_array()

    if float(np.linalg.norm(tgt - np.array([0.0, 0.0, 1.0]))) < 1e-12:
        return min_time_law(alpha)
    if float(np.linalg.norm(tgt - np.array([1.0, 0.0, 0.0]))) < 1e-12:
        return ControlLaw((), alpha)
    if abs(target.psi2) < tol.SINGULAR_LOCUS:
        raise NoSolutionError(
            "targets on the psi2 = 0 boundary are outside the synthesis "
            "(only the corners (1,0,0) and (0,0,1) are reachable there)"
        )
    if (
        reject_psi1_boundary
        and abs(target.psi1) < 1e-9
        and target.psi3 < min(alpha, 1.0)
    ):
        raise NoSolutionError("target sits on the psi1 = 0 boundary (rejected by flag)")

    best = None
    for fam in _families(alpha):
        for law in _family_candidates(fam, alpha, tgt):
            if best is None or law.total_duration < best.total_duration - 1e-12:
                best = law
    if best is None:
        raise NoSolutionError(
            f"no synthesis family reaches target {target.as_tuple()} at alpha={alpha}"
        )
    return best
