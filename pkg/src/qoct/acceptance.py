"""Acceptance criteria for the two syntheses, runnable as one suite.

Each criterion is an independent check with a pinned tolerance.  The CLI
``verify`` subcommand prints one pass/fail line per criterion; the pytest
gate asserts them individually.  ``fast`` mode shrinks sample counts (never
tolerances) for a quick smoke run.
"""

from __future__ import annotations

import math
import os
import tempfile
import time
from dataclasses import dataclass

import numpy as np

from .elliptic import complete_k, jacobi
from .integrator import integrate
from .lift import ComplexState, LevelSpec, lift_controls, simulate_complex
from .min_energy import (
    EnergyExtremal,
    classify,
    controls_at,
    extremal_control,
    m3_bounds,
    solve_m3,
    transfer_endpoint,
    transfer_time,
)
from .oracle import Splitmix64, bisect_root, quadrature, sample_search_min_time
from .so3 import SOURCE, StateS2
from .time_optimal import (
    ControlLaw,
    law_state,
    min_time_law,
    propagate_law,
    switching_propagator,
    synthesis_law,
)

TARGET_VEC = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class CriterionResult:
    name: str
    ok: bool
    detail: str


_M3_CACHE: dict[tuple[float, float], float] = {}


def solved_m3(alpha: float, tol: float = 1e-8) -> float:
    key = (alpha, tol)
    if key not in _M3_CACHE:
        _M3_CACHE[key] = solve_m3(alpha, tol)
    return _M3_CACHE[key]


def _first_v1_zero(alpha: float, m3: float) -> float:
    """Independent location of the first zero of v1 by scan plus bisection."""
    e = EnergyExtremal(alpha, m3)

    def v1(t):
        return controls_at(e, t).v1

    hi = 0.05
    while v1(hi) > 0.0:
        hi *= 1.25
        if hi > 1e4:
            raise RuntimeError("no v1 zero found")
    lo = hi / 1.25 if hi > 0.05 else 0.0
    return bisect_root(v1, lo, hi, 1e-12)


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------


def criterion_01(fast: bool) -> tuple[bool, str]:
    """Isotropic minimum time: duration pi/sqrt(2), exact transfer."""
    law = min_time_law(1.0)
    d_err = abs(law.total_duration - math.pi / math.sqrt(2.0))
    miss = float(np.linalg.norm(propagate_law(SOURCE, law).endpoint - TARGET_VEC))
    ok = d_err <= 1e-12 and miss <= 1e-10
    return ok, f"duration err {d_err:.2e} (tol 1e-12), endpoint miss {miss:.2e} (tol 1e-10)"


def criterion_02(fast: bool) -> tuple[bool, str]:
    """Nonisotropic minimum time: endpoints and stated intermediate points."""
    worst_end = worst_mid = 0.0
    for alpha in (0.1, 0.25, 0.5, 2.0, 4.0, 10.0):
        law = min_time_law(alpha)
        end = propagate_law(SOURCE, law).endpoint
        worst_end = max(worst_end, float(np.linalg.norm(end - TARGET_VEC)))
        mid = law_state(SOURCE, law, law.segments[0].duration)
        if alpha < 1.0:
            ref = np.array([0.0, math.sqrt(1.0 - alpha * alpha), alpha])
        else:
            ref = np.array(
                [1.0 / alpha, math.sqrt(1.0 - 1.0 / (alpha * alpha)), 0.0]
            )
        worst_mid = max(worst_mid, float(np.linalg.norm(mid - ref)))
    ok = worst_end <= 1e-10 and worst_mid <= 1e-10
    return ok, f"worst endpoint {worst_end:.2e}, worst intermediate {worst_mid:.2e} (tol 1e-10)"


def criterion_03(fast: bool) -> tuple[bool, str]:
    """Inversion symmetry of the transfer times in the nonisotropy factor."""
    rng = Splitmix64(31415)
    n = 10 if fast else 50
    worst_t = 0.0
    for _ in range(n):
        alpha = rng.uniform(0.02, 0.999)
        t_a = min_time_law(alpha).total_duration
        t_inv = min_time_law(1.0 / alpha).total_duration
        worst_t = max(worst_t, abs(t_inv - alpha * t_a))
    worst_e = 0.0
    alphas = (0.5,) if fast else (0.2, 0.5, 0.8)
    for alpha in alphas:
        t_a = transfer_time(alpha, solved_m3(alpha))
        t_inv = transfer_time(1.0 / alpha, solved_m3(1.0 / alpha))
        worst_e = max(worst_e, abs(t_inv - alpha * t_a))
    ok = worst_t <= 1e-12 and worst_e <= 1e-6
    return ok, (
        f"bounded-control worst {worst_t:.2e} over {n} draws (tol 1e-12); "
        f"energy worst {worst_e:.2e} (tol 1e-6)"
    )


def criterion_04(fast: bool) -> tuple[bool, str]:
    """Isotropic minimum energy: shooting parameter and transfer time."""
    m3 = solve_m3(1.0, 1e-10)
    m_err = abs(m3 - 1.0 / math.sqrt(3.0))
    t_err = abs(
        transfer_time(1.0, 1.0 / math.sqrt(3.0)) - math.sqrt(3.0) * math.pi / 2.0
    )
    ok = m_err <= 1e-8 and t_err <= 1e-10
    return ok, f"m3(0) err {m_err:.2e} (tol 1e-8), transfer err {t_err:.2e} (tol 1e-10)"


def criterion_05(fast: bool) -> tuple[bool, str]:
    """Nonisotropic minimum energy: dichotomy, bounds, endpoint, first zero."""
    alphas = (0.5, 2.0) if fast else (0.2, 0.5, 2.0, 5.0)
    worst_miss = worst_zero = 0.0
    inside = True
    for alpha in alphas:
        m3 = solved_m3(alpha)
        lo, hi = m3_bounds(alpha)
        inside = inside and (lo < m3 < hi)
        miss = float(np.linalg.norm(transfer_endpoint(alpha, m3) - TARGET_VEC))
        worst_miss = max(worst_miss, miss)
        worst_zero = max(
            worst_zero, abs(transfer_time(alpha, m3) - _first_v1_zero(alpha, m3))
        )
    ok = inside and worst_miss <= 1e-6 and worst_zero <= 1e-7
    return ok, (
        f"strictly inside bounds: {inside}; worst endpoint miss {worst_miss:.2e} "
        f"(tol 1e-6); transfer vs v1-zero {worst_zero:.2e} (tol 1e-7)"
    )


def criterion_06(fast: bool) -> tuple[bool, str]:
    """Conservation of the arclength and second integrals along extremals."""
    rng = Splitmix64(2718)
    n_ext = 6 if fast else 20
    n_grid = 300 if fast else 1000
    worst_k1 = worst_k2 = 0.0
    count = 0
    while count < n_ext:
        alpha = math.exp(rng.uniform(math.log(0.25), math.log(4.0)))
        if abs(alpha - 1.0) < 0.05:
            continue
        m3_0 = rng.uniform(0.05, 2.5)
        count += 1
        e = EnergyExtremal(alpha, m3_0)
        ts = np.linspace(0.0, 5.0, n_grid)
        k2_ref = None
        for t in ts:
            s = controls_at(e, float(t))
            k1 = 0.5 * (s.v1 * s.v1 + s.v2 * s.v2 / (alpha * alpha))
            worst_k1 = max(worst_k1, abs(k1 - 0.5))
            k2 = 0.5 * (
                s.v1 * s.v1 - alpha * alpha * s.m3 * s.m3 / (1.0 - alpha * alpha)
            )
            if k2_ref is None:
                k2_ref = k2
            worst_k2 = max(worst_k2, abs(k2 - k2_ref))
    ok = worst_k1 <= 1e-10 and worst_k2 <= 1e-9
    return ok, (
        f"{n_ext} extremals x {n_grid} samples: K1 dev {worst_k1:.2e} (tol 1e-10), "
        f"K2 dev {worst_k2:.2e} (tol 1e-9)"
    )


def _adjoint_ode_residual(e: EnergyExtremal, t: float, h: float = 1e-6) -> float:
    a = e.alpha
    sp = controls_at(e, t + h)
    sm = controls_at(e, t - h)
    s0 = controls_at(e, t)
    dv1 = (sp.v1 - sm.v1) / (2.0 * h)
    dv2 = (sp.v2 - sm.v2) / (2.0 * h)
    dm3 = (sp.m3 - sm.m3) / (2.0 * h)
    r1 = dv1 + s0.m3 * s0.v2
    r2 = dv2 - a * a * s0.m3 * s0.v1
    r3 = dm3 + (1.0 - a * a) / (a * a) * s0.v1 * s0.v2
    return max(abs(r1), abs(r2), abs(r3))


def criterion_07(fast: bool) -> tuple[bool, str]:
    """Closed forms satisfy their ODEs under central finite differences."""
    cases = [
        (0.7, 0.0),  # zero
        (0.6, 0.7),  # sub-critical
        (0.6, math.sqrt(1.0 - 0.36) / 0.6),  # critical
        (0.6, 2.0),  # super-critical
        (2.0, 0.4),  # above one
    ]
    regimes = {classify(a, m).value for a, m in cases}
    worst = 0.0
    for a, m in cases:
        e = EnergyExtremal(a, m)
        for t in np.linspace(0.05, 3.0, 40):
            worst = max(worst, _adjoint_ode_residual(e, float(t)))

    rng = Splitmix64(5150)
    worst_sw = 0.0
    h = 1e-6
    for _ in range(40):
        u1 = (-1.0, 0.0, 1.0)[rng.below(3)]
        u2 = (-1.0, 0.0, 1.0)[rng.below(3)]
        if u1 == 0.0 and u2 == 0.0:
            u1 = 1.0
        alpha = math.exp(rng.uniform(math.log(0.3), math.log(3.0)))
        t = rng.uniform(0.0, 3.0)
        phi0 = np.array([rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)])
        dphi = (
            switching_propagator(u1, u2, alpha, t + h)
            - switching_propagator(u1, u2, alpha, t - h)
        ) @ phi0 / (2.0 * h)
        phi = switching_propagator(u1, u2, alpha, t) @ phi0
        rhs = np.array(
            [
                -u2 * phi[2],
                u1 * phi[2],
                alpha * alpha * u2 * phi[0] - u1 * phi[1],
            ]
        )
        worst_sw = max(worst_sw, float(np.max(np.abs(dphi - rhs))))
    ok = len(regimes) == 5 and worst <= 1e-6 and worst_sw <= 1e-6
    return ok, (
        f"all five regimes covered: {len(regimes) == 5}; control ODE residual "
        f"{worst:.2e}, switching ODE residual {worst_sw:.2e} (tol 1e-6)"
    )


def criterion_08(fast: bool) -> tuple[bool, str]:
    """Elliptic function identities, quadrature cross-check, degenerate forms."""
    rng = Splitmix64(1618)
    n = 2000 if fast else 10**4
    worst_id = 0.0
    for _ in range(n):
        u = rng.uniform(-10.0, 10.0)
        k = rng.uniform(0.0, 0.999)
        j = jacobi(u, k)
        worst_id = max(
            worst_id,
            abs(j.sn * j.sn + j.cn * j.cn - 1.0),
            abs(j.dn * j.dn + k * k * j.sn * j.sn - 1.0),
        )
    worst_q = 0.0
    for k in np.arange(0.1, 0.95, 0.1):
        ref = quadrature(
            lambda s, _k=float(k): 1.0 / math.sqrt(1.0 - _k * _k * math.sin(s) ** 2),
            0.0,
            math.pi / 2.0,
            1e-12,
        )
        worst_q = max(worst_q, abs(complete_k(float(k)) - ref))
    j0 = jacobi(0.8, 0.0)
    j1 = jacobi(0.8, 1.0)
    worst_d = max(
        abs(j0.sn - math.sin(0.8)),
        abs(j0.cn - math.cos(0.8)),
        abs(j0.dn - 1.0),
        abs(j1.sn - math.tanh(0.8)),
        abs(j1.cn - 1.0 / math.cosh(0.8)),
        abs(j1.dn - 1.0 / math.cosh(0.8)),
    )
    ok = worst_id <= 1e-11 and worst_q <= 1e-10 and worst_d == 0.0
    return ok, (
        f"{n} identity samples, worst {worst_id:.2e} (tol 1e-11); K vs quadrature "
        f"{worst_q:.2e} (tol 1e-10); degenerate forms exact: {worst_d == 0.0}"
    )


def _law_respects_switching_rules(law: ControlLaw) -> bool:
    seen_minus_u1 = False
    seen_plus_u2 = False
    for seg in law.segments:
        if seg.u1 == 1.0 and seen_minus_u1:
            return False
        if seg.u1 == -1.0:
            seen_minus_u1 = True
        if seg.u2 == -1.0 and seen_plus_u2:
            return False
        if seg.u2 == 1.0:
            seen_plus_u2 = True
    return True


def _singular_loci_ok(law: ControlLaw, tol: float = 1e-9) -> bool:
    t0 = 0.0
    for seg in law.segments:
        if seg.duration <= 0.0:
            t0 += seg.duration
            continue
        if seg.u1 == 0.0 or seg.u2 == 0.0:
            idx = 0 if seg.u1 == 0.0 else 2
            for f in np.linspace(0.0, 1.0, 25):
                state = law_state(SOURCE, law, t0 + f * seg.duration)
                if abs(state[idx]) > tol:
                    return False
        t0 += seg.duration
    return True


def criterion_09(fast: bool) -> tuple[bool, str]:
    """Switching direction rules and singular arcs pinned to their loci."""
    laws = []
    for alpha in np.geomspace(0.1, 10.0, 7 if fast else 11):
        laws.append(min_time_law(float(alpha)))
    rng = Splitmix64(11235)
    per_alpha = 4 if fast else 10
    for alpha in (0.5, 1.0, 2.0):
        made = 0
        while made < per_alpha:
            v = np.array([rng.uniform(0, 1), rng.uniform(0.05, 1), rng.uniform(0, 1)])
            v /= np.linalg.norm(v)
            if v[1] < 0.05:
                continue
            laws.append(synthesis_law(alpha, StateS2.from_array(v)))
            made += 1
    rules = all(_law_respects_switching_rules(law) for law in laws)
    loci = all(_singular_loci_ok(law) for law in laws)
    ok = rules and loci
    return ok, (
        f"{len(laws)} emitted laws: direction rules {rules}, "
        f"singular loci within 1e-9: {loci}"
    )


def criterion_10(fast: bool) -> tuple[bool, str]:
    """Random pulse search never beats the closed-form minimum time."""
    n = 1500 if fast else 10**4
    t_start = time.time()
    worst_margin = math.inf
    for alpha in (0.5, 1.0, 2.0):
        best, _ = sample_search_min_time(alpha, n, 5, seed=20240817)
        worst_margin = min(
            worst_margin, best - min_time_law(alpha).total_duration
        )
    elapsed = time.time() - t_start
    ok = worst_margin >= -5e-3 and elapsed < 60.0
    return ok, (
        f"{n} candidates per factor, worst margin {worst_margin:+.2e} "
        f"(floor -5e-3), elapsed {elapsed:.1f}s (< 60s)"
    )


def _lift_case(alpha: float, mode: str, h: float = 1e-3):
    spec = LevelSpec(-1.0, 0.3, 0.7, 0.0, 0.0)
    if mode == "time":
        law = min_time_law(alpha)
        fn, switches = law.as_control()
        T = law.total_duration
        u1 = lambda t: fn(t)[0]
        u2 = lambda t: fn(t)[1]
        real_state = lambda t: law_state(SOURCE, law, t)
    else:
        m3 = solved_m3(alpha)
        e = EnergyExtremal(alpha, m3)
        ctrl = extremal_control(e)
        T = transfer_time(alpha, m3)
        switches = ()
        u1 = lambda t: ctrl(t)[0]
        u2 = lambda t: ctrl(t)[1]
        ref = integrate(SOURCE, ctrl, alpha, T, h, record_every=1)
        ref_t = ref.times()
        ref_s = ref.states()

        def real_state(t):
            i = int(np.argmin(np.abs(ref_t - t)))
            return ref_s[i]

    f1, f2 = lift_controls(u1, u2, spec)
    traj = simulate_complex(
        ComplexState(np.array([1.0 + 0.0j, 0.0j, 0.0j])),
        f1,
        f2,
        spec,
        alpha,
        T,
        h,
        switch_times=switches,
        record_every=25,
    )
    pop_final = float(np.abs(traj.endpoint[2]) ** 2)
    worst = 0.0
    for s in traj.samples:
        pops = np.abs(np.asarray(s.state)) ** 2
        worst = max(worst, float(np.max(np.abs(pops - real_state(s.t) ** 2))))
    return pop_final, worst


def criterion_11(fast: bool) -> tuple[bool, str]:
    """Resonant lift reproduces the transfer and the reduced populations."""
    alphas = (1.0,) if fast else (0.5, 1.0, 2.0)
    worst_pop = 1.0
    worst_match = 0.0
    for alpha in alphas:
        for mode in ("time", "energy"):
            pop, match = _lift_case(alpha, mode)
            worst_pop = min(worst_pop, pop)
            worst_match = max(worst_match, match)
    ok = worst_pop >= 1.0 - 1e-5 and worst_match <= 1e-5
    return ok, (
        f"final population >= {worst_pop:.9f} (floor 1-1e-5); worst population "
        f"mismatch {worst_match:.2e} (tol 1e-5)"
    )


def _continuity_ok(values: np.ndarray) -> bool:
    if not np.all(np.isfinite(values)):
        return False
    d = np.diff(values)
    for i in range(1, len(d) - 1):
        local = 0.5 * (abs(d[i - 1]) + abs(d[i + 1]))
        if abs(d[i]) > 10.0 * local + 1e-9 * (1.0 + abs(values[i])):
            return False
    return True


def criterion_12(fast: bool) -> tuple[bool, str]:
    """Emitted figure data: continuous parameter sweep, octant-clean synthesis."""
    from . import cli

    n_alpha = 7 if fast else 21
    n_traj = 4 if fast else 10
    with tempfile.TemporaryDirectory() as tmp:
        sweep_path = os.path.join(tmp, "sweep.csv")
        rc = cli.main(
            [
                "sweep-alpha",
                "--from", "0.1",
                "--to", "10",
                "--n", str(n_alpha),
                "--out", sweep_path,
            ]
        )
        data = np.genfromtxt(sweep_path, delimiter=",", skip_header=2)
        cont = (
            rc == 0
            and _continuity_ok(data[:, 1])
            and _continuity_ok(data[:, 2])
            and bool(np.all(data[:, 1] > 0))
            and bool(np.all(data[:, 2] > 0))
        )
        min_comp = math.inf
        for mode in ("time", "energy"):
            for alpha in ("0.5", "2"):
                path = os.path.join(tmp, f"synt-{mode}-{alpha}.csv")
                rc2 = cli.main(
                    [
                        "sweep-synthesis",
                        "--alpha", alpha,
                        "--mode", mode,
                        "--n", str(n_traj),
                        "--samples", "60",
                        "--out", path,
                    ]
                )
                tab = np.genfromtxt(path, delimiter=",", skip_header=2)
                if rc2 != 0 or not np.all(np.isfinite(tab)):
                    min_comp = -math.inf
                    break
                min_comp = min(min_comp, float(np.min(tab[:, 1:4])))
    ok = cont and min_comp >= -1e-9
    return ok, (
        f"sweep continuity {cont}; synthesis trajectories min component "
        f"{min_comp:.2e} (floor -1e-9)"
    )


_CRITERIA = [
    ("A01-min-time-isotropic", criterion_01),
    ("A02-min-time-nonisotropic", criterion_02),
    ("A03-inversion-symmetry", criterion_03),
    ("A04-min-energy-isotropic", criterion_04),
    ("A05-min-energy-nonisotropic", criterion_05),
    ("A06-conserved-integrals", criterion_06),
    ("A07-closed-form-ode-residuals", criterion_07),
    ("A08-elliptic-suite", criterion_08),
    ("A09-switching-rules", criterion_09),
    ("A10-brute-force-certificate", criterion_10),
    ("A11-resonant-lift", criterion_11),
    ("A12-figure-data", criterion_12),
]


def run_all(fast: bool = False) -> list[CriterionResult]:
    out = []
    for name, fn in _CRITERIA:
        try:
            ok, detail = fn(fast)
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        out.append(CriterionResult(name, ok, detail))
    return out
