"""Command-line interface: compute laws, solve the dichotomy, emit plot data.

All floating-point output is printed with 17 significant digits so files
round-trip exactly and identical flags produce byte-identical output.
Exit codes: 0 on success, 2 on a domain error, 3 on verification failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys

import numpy as np

from . import acceptance, min_energy, time_optimal
from .errors import QoctError
from .integrator import first_exit, integrate
from .lift import ComplexState, LevelSpec, lift_controls, simulate_complex
from .min_energy import (
    EnergyExtremal,
    classify,
    extremal_control,
    m3_bounds,
    solve_m3,
    transfer_time,
)
from .oracle import sample_search_min_time
from .so3 import SOURCE, StateS2, generator, rodrigues_exp
from .time_optimal import min_time_law, propagate_law, synthesis_law

SCHEMA_COMMENT = "# schema=qoct-v1"


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _to_json(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f'{pad}  "{k}": {_to_json(v, indent + 1)}' for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[" + ", ".join(_to_json(v, indent) for v in obj) + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, float):
        return _fmt(obj)
    if isinstance(obj, int):
        return str(obj)
    return '"' + str(obj).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _write(text: str, out_path: str | None):
    if out_path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")


def _csv(header: list[str], rows) -> str:
    lines = [SCHEMA_COMMENT, ",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _law_json(law) -> dict:
    return {
        "law": [
            {"u1": s.u1, "u2": s.u2, "duration": s.duration} for s in law.segments
        ],
        "total_time": law.total_duration,
        "endpoint": [float(v) for v in propagate_law(SOURCE, law).endpoint],
    }


def _parse_triple(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise QoctError(f"expected three comma-separated values, got {text!r}")
    return tuple(float(p) for p in parts)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_min_time(args) -> int:
    _require_alpha(args.alpha)
    if args.target is None:
        law = min_time_law(args.alpha)
    else:
        x, y, z = _parse_triple(args.target)
        law = synthesis_law(args.alpha, StateS2(x, y, z))
    _write(_to_json(_law_json(law)), args.out)
    return 0


def _cmd_min_energy(args) -> int:
    _require_alpha(args.alpha)
    m3 = solve_m3(args.alpha, args.tol)
    lo, hi = m3_bounds(args.alpha)
    doc = {
        "m3_0": m3,
        "transfer_time": transfer_time(args.alpha, m3),
        "bounds": [lo, hi],
        "regime": classify(args.alpha, m3).value,
    }
    _write(_to_json(doc), args.out)
    return 0


def _time_sweep_rows(alpha: float, n: int, samples: int):
    """Sample the time synthesis: laws across the families, run to octant exit."""
    fams = time_optimal._families(alpha)
    if alpha > 1.0:
        # the first family is only extremal-to-exit past the switching curve;
        # shorter equator prefixes belong to the three-arc family
        fams[0] = dataclasses.replace(fams[0], a_lo=math.acos(1.0 / alpha))
    spans = [(f, f.a_hi - f.a_lo) for f in fams if f.a_hi > f.a_lo]
    total = sum(s for _, s in spans)
    rows = []
    for i in range(n):
        p = (i + 0.5) / n * total
        offset = 0.0
        for fam, span in spans:
            if p <= span or (fam, span) == spans[-1]:
                a = fam.a_lo + min(p, span)
                break
            p -= span
            offset += span
        param = offset + (a - fam.a_lo)
        segs = list(fam.prefix) + [time_optimal.Segment(*fam.first, a)] + list(fam.mid)
        law0 = time_optimal.ControlLaw(tuple(segs), alpha)
        start = propagate_law(SOURCE, law0).endpoint
        # run the final arc to the octant exit
        fn_dur = _arc_exit_time(start, fam.final, alpha)
        segs.append(time_optimal.Segment(*fam.final, fn_dur))
        law = time_optimal.ControlLaw(tuple(s for s in segs if s.duration > 1e-12), alpha)
        traj = propagate_law(SOURCE, law, max_step=max(law.total_duration / samples, 1e-9))
        for s in traj.samples:
            rows.append((s.t, s.state[0], s.state[1], s.state[2], s.u1, s.u2, param))
    return rows


def _arc_exit_time(start, control, alpha: float) -> float:
    """First time a coordinate of the arc from ``start`` crosses zero downward."""
    g = generator(*control, alpha)
    period = 2.0 * math.pi / g.rate
    n_scan = 720
    prev = np.asarray(start, dtype=float)
    prev_t = 0.0
    for i in range(1, n_scan + 1):
        t = period * i / n_scan
        state = rodrigues_exp(g, t).apply_array(np.asarray(start, dtype=float))
        hit = None
        for idx in range(3):
            if prev[idx] > 1e-12 and state[idx] < -1e-12:
                hit = idx
                break
        if hit is not None:
            lo, hi = prev_t, t
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                if rodrigues_exp(g, mid).apply_array(np.asarray(start, float))[hit] > 0.0:
                    lo = mid
                else:
                    hi = mid
            return 0.5 * (lo + hi)
        prev, prev_t = state, t
    return period


def _energy_sweep_rows(alpha: float, n: int, samples: int, h: float = 2e-3):
    """Sample the energy synthesis: extremals over a spread of m3(0) values."""
    m3_star = solve_m3(alpha, 1e-7)
    values = []
    for i in range(n):
        frac = (i + 0.5) / n
        values.append(m3_star * math.exp(3.0 * (2.0 * frac - 1.0)))
    rows = []
    for m3 in values:
        e = EnergyExtremal(alpha, m3)
        ctrl = extremal_control(e)
        _, t_exit, _ = first_exit(SOURCE, ctrl, alpha, min_energy._horizon(e), h)
        traj = integrate(
            SOURCE,
            ctrl,
            alpha,
            t_exit,
            h,
            record_every=max(1, math.ceil(t_exit / h / samples)),
        )
        for s in traj.samples:
            rows.append((s.t, s.state[0], s.state[1], s.state[2], s.u1, s.u2, m3))
    return rows


def _cmd_sweep_synthesis(args) -> int:
    _require_alpha(args.alpha)
    if args.n < 1:
        raise QoctError("need --n >= 1")
    if args.mode == "time":
        rows = _time_sweep_rows(args.alpha, args.n, args.samples)
    else:
        rows = _energy_sweep_rows(args.alpha, args.n, args.samples)
    _write(_csv(["t", "psi1", "psi2", "psi3", "u1", "u2", "param"], rows), args.out)
    return 0


def _cmd_sweep_alpha(args) -> int:
    if args.start <= 0 or args.stop <= 0 or args.n < 2:
        raise QoctError("need positive --from/--to and --n >= 2")
    rows = []
    for i in range(args.n):
        frac = i / (args.n - 1)
        alpha = args.start * (args.stop / args.start) ** frac
        m3 = solve_m3(alpha, args.tol)
        rows.append((alpha, m3, transfer_time(alpha, m3)))
    _write(_csv(["alpha", "m3_0", "transfer_time"], rows), args.out)
    return 0


def _cmd_lift(args) -> int:
    _require_alpha(args.alpha)
    e1, e2, e3 = _parse_triple(args.energies)
    x1, x2 = (float(p) for p in args.phases.split(","))
    spec = LevelSpec(e1, e2, e3, x1, x2)
    if args.mode == "time":
        law = min_time_law(args.alpha)
        fn, switches = law.as_control()
        T = law.total_duration
        u1 = lambda t: fn(t)[0]
        u2 = lambda t: fn(t)[1]
    else:
        m3 = solve_m3(args.alpha, args.tol)
        ctrl = extremal_control(EnergyExtremal(args.alpha, m3))
        T = transfer_time(args.alpha, m3)
        switches = ()
        u1 = lambda t: ctrl(t)[0]
        u2 = lambda t: ctrl(t)[1]
    f1, f2 = lift_controls(u1, u2, spec)
    psi0 = ComplexState(np.array([1.0 + 0.0j, 0.0j, 0.0j]))
    traj = simulate_complex(
        psi0, f1, f2, spec, args.alpha, T, args.h, switch_times=switches,
        record_every=max(1, math.ceil(T / args.h / 400)),
    )
    final_population = float(np.abs(traj.endpoint[2]) ** 2)
    traj_file = None
    if args.trajectory_out is not None:
        rows = [
            (s.t, *(float(p) for p in np.abs(np.asarray(s.state)) ** 2))
            for s in traj.samples
        ]
        _write(_csv(["t", "pop1", "pop2", "pop3"], rows), args.trajectory_out)
        traj_file = args.trajectory_out
    doc = {"final_population": final_population, "trajectory_file": traj_file}
    _write(_to_json(doc), args.out)
    return 0


def _cmd_oracle(args) -> int:
    _require_alpha(args.alpha)
    best_time, _ = sample_search_min_time(
        args.alpha, args.n, args.max_segments, args.seed
    )
    closed = min_time_law(args.alpha).total_duration
    doc = {
        "best_time": best_time,
        "closed_form_time": closed,
        "margin": best_time - closed,
    }
    _write(_to_json(doc), args.out)
    return 0


def _cmd_verify(args) -> int:
    results = acceptance.run_all(fast=args.fast)
    width = max(len(r.name) for r in results)
    lines = []
    n_fail = 0
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        if not r.ok:
            n_fail += 1
        lines.append(f"{r.name:<{width}}  {status}  {r.detail}")
    lines.append(f"{n_fail} of {len(results)} criteria failed" if n_fail else
                 f"all {len(results)} criteria passed")
    _write("\n".join(lines) + "\n", args.out)
    return 3 if n_fail else 0


def _require_alpha(alpha: float):
    if alpha is None or alpha <= 0.0 or not math.isfinite(alpha):
        raise QoctError("the nonisotropy factor --alpha must be positive")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qoct",
        description=(
            "Minimum-time and minimum-energy population transfer for a "
            "nonisotropic three-level system reduced to the positive octant "
            "of the sphere."
        ),
    )
    sub = p.add_subparsers(dest="command", required=True)

    mt = sub.add_parser(
        "min-time",
        help="closed-form minimum-time law (optionally to an arbitrary target)",
        description=(
            "Targets on the psi2 = 0 boundary are outside the synthesis "
            "except the corners (1,0,0) and (0,0,1)."
        ),
    )
    mt.add_argument("--alpha", type=float, required=True)
    mt.add_argument("--target", type=str, default=None, help="x,y,z on the octant")
    mt.add_argument("--out", type=str, default=None)
    mt.set_defaults(fn=_cmd_min_time)

    me = sub.add_parser("min-energy", help="dichotomy for the shooting parameter")
    me.add_argument("--alpha", type=float, required=True)
    me.add_argument("--tol", type=float, default=1e-8)
    me.add_argument("--out", type=str, default=None)
    me.set_defaults(fn=_cmd_min_energy)

    ss = sub.add_parser(
        "sweep-synthesis", help="CSV of extremal trajectories filling the octant"
    )
    ss.add_argument("--alpha", type=float, required=True)
    ss.add_argument("--mode", choices=("time", "energy"), required=True)
    ss.add_argument("--n", type=int, required=True, help="number of trajectories")
    ss.add_argument("--samples", type=int, default=120, help="samples per trajectory")
    ss.add_argument("--out", type=str, default=None)
    ss.set_defaults(fn=_cmd_sweep_synthesis)

    sa = sub.add_parser(
        "sweep-alpha", help="CSV of (alpha, m3_0, transfer_time) on a log grid"
    )
    sa.add_argument("--from", dest="start", type=float, required=True)
    sa.add_argument("--to", dest="stop", type=float, required=True)
    sa.add_argument("--n", type=int, required=True)
    sa.add_argument("--tol", type=float, default=1e-8)
    sa.add_argument("--out", type=str, default=None)
    sa.set_defaults(fn=_cmd_sweep_alpha)

    lf = sub.add_parser(
        "lift", help="simulate the complex three-level system with lifted pulses"
    )
    lf.add_argument("--alpha", type=float, required=True)
    lf.add_argument("--mode", choices=("time", "energy"), required=True)
    lf.add_argument("--energies", type=str, required=True, help="E1,E2,E3")
    lf.add_argument("--phases", type=str, default="0,0", help="xi1,xi2")
    lf.add_argument("--tol", type=float, default=1e-8)
    lf.add_argument("--h", type=float, default=1e-3)
    lf.add_argument("--trajectory-out", type=str, default=None)
    lf.add_argument("--out", type=str, default=None)
    lf.set_defaults(fn=_cmd_lift)

    orc = sub.add_parser("oracle", help="random-pulse search optimality certificate")
    orc.add_argument("--alpha", type=float, required=True)
    orc.add_argument("--n", type=int, required=True)
    orc.add_argument("--seed", type=int, required=True)
    orc.add_argument("--max-segments", type=int, default=5)
    orc.add_argument("--out", type=str, default=None)
    orc.set_defaults(fn=_cmd_oracle)

    vf = sub.add_parser("verify", help="run the acceptance suite")
    vf.add_argument("--fast", action="store_true", help="reduced sample sizes")
    vf.add_argument("--out", type=str, default=None)
    vf.set_defaults(fn=_cmd_verify)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except QoctError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
