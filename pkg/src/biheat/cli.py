"""Command-line front end.

Commands: kernel table|mass, evolve, tychonoff eval|scan, step analyze|speed,
verify --suite NAME.  Global flags: --out, --seed, --threads, --config, and
the --emit-csv/--emit-json/--emit-svg toggles.  A flat key=value config file
(# comments) can preset any flag of the invoked command; explicit flags win.
Exit codes: 0 success / all checks pass, 1 failed check, 2 usage error,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .errors import ParameterError, QuadratureError, SamplingError

_ENV_OUT = "BIHEAT_OUT"

#: allowed keys per (command, subcommand) with their types; used both for
#: config-file merging and for rejecting unknown keys
_GLOBAL_KEYS = {
    "out": str,
    "seed": int,
    "threads": int,
    "emit_csv": bool,
    "emit_json": bool,
    "emit_svg": bool,
}


def _parse_times(text: str):
    try:
        vals = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ParameterError(f"times: expected comma-separated reals, got {text!r}")
    if not vals:
        raise ParameterError("times: empty list")
    return vals


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biheat",
        description="Fourth-order heat flow: kernel, evolution, flat series, "
        "step example, and inequality verification.",
    )

    def add_globals(p):
        p.add_argument("--out", type=str, default=None, help="output directory")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--config", type=str, default=None, help="key=value preset file")
        p.add_argument("--emit-csv", action="store_true", dest="emit_csv")
        p.add_argument("--emit-json", action="store_true", dest="emit_json")
        p.add_argument("--emit-svg", action="store_true", dest="emit_svg")

    sub = parser.add_subparsers(dest="command", required=True)

    kernel = sub.add_parser("kernel", help="heat kernel profile")
    ksub = kernel.add_subparsers(dest="subcommand", required=True)
    ktab = ksub.add_parser("table", help="tabulate f and derivatives")
    ktab.add_argument("--y-max", type=float, default=30.0, dest="y_max")
    ktab.add_argument("--nodes", type=int, default=4001)
    add_globals(ktab)
    kmass = ksub.add_parser("mass", help="kernel mass check")
    add_globals(kmass)

    evolve = sub.add_parser("evolve", help="spectral evolution of seeded data")
    evolve.add_argument("--L", type=float, default=10.0)
    evolve.add_argument("--N", type=int, default=512)
    evolve.add_argument("--band", type=int, default=None)
    evolve.add_argument("--times", type=str, default="0.1,0.5,1.0")
    add_globals(evolve)

    tych = sub.add_parser("tychonoff", help="flat series solution")
    tsub = tych.add_subparsers(dest="subcommand", required=True)
    teval = tsub.add_parser("eval", help="evaluate u(x1, t)")
    teval.add_argument("--x", type=float, default=1.0)
    teval.add_argument("--t", type=float, default=1.0)
    teval.add_argument("--J", type=int, default=40)
    teval.add_argument("--M", type=int, default=1024)
    add_globals(teval)
    tscan = tsub.add_parser("scan", help="growth-monitor scan along x1")
    tscan.add_argument("--t", type=float, default=0.5)
    tscan.add_argument("--x-min", type=float, default=0.5, dest="x_min")
    tscan.add_argument("--x-max", type=float, default=3.0, dest="x_max")
    tscan.add_argument("--count", type=int, default=6)
    add_globals(tscan)

    step = sub.add_parser("step", help="self-similar step-data solution")
    ssub = step.add_subparsers(dest="subcommand", required=True)
    sana = ssub.add_parser("analyze", help="blow-up and overshoot constants")
    add_globals(sana)
    sspd = ssub.add_parser("speed", help="non-integrable speed table")
    sspd.add_argument("--times", type=str, default="0.1,1.0,10.0")
    add_globals(sspd)

    verify = sub.add_parser("verify", help="run verification suites")
    verify.add_argument(
        "--suite",
        type=str,
        default="all",
        choices=[
            "lm1",
            "interp1",
            "interp2",
            "cy1",
            "cy2",
            "growth",
            "theorem1",
            "uniqueness",
            "all",
        ],
    )
    add_globals(verify)

    return parser


def _command_keys(args) -> dict:
    keys = dict(_GLOBAL_KEYS)
    cmd = args.command
    subcmd = getattr(args, "subcommand", None)
    extra = {
        ("kernel", "table"): {"y_max": float, "nodes": int},
        ("kernel", "mass"): {},
        ("evolve", None): {"L": float, "N": int, "band": int, "times": str},
        ("tychonoff", "eval"): {"x": float, "t": float, "J": int, "M": int},
        ("tychonoff", "scan"): {
            "t": float,
            "x_min": float,
            "x_max": float,
            "count": int,
        },
        ("step", "analyze"): {},
        ("step", "speed"): {"times": str},
        ("verify", None): {"suite": str},
    }[(cmd, subcmd)]
    keys.update(extra)
    return keys


def _apply_config(args, argv) -> None:
    """Merge the flat key=value config file; explicit flags keep precedence."""
    if args.config is None:
        return
    keys = _command_keys(args)
    explicit = set()
    for tok in argv:
        if tok.startswith("--"):
            explicit.add(tok[2:].split("=")[0].replace("-", "_"))
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ParameterError(f"config: cannot read {args.config}: {exc}")
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(
                f"config line {lineno}: expected key=value, got {line!r}"
            )
        key, value = (tok.strip() for tok in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in keys:
            raise ParameterError(f"config line {lineno}: unknown key {key!r}")
        if key in explicit:
            continue
        typ = keys[key]
        try:
            if typ is bool:
                if value not in ("true", "false"):
                    raise ValueError
                parsed = value == "true"
            else:
                parsed = typ(value)
        except ValueError:
            raise ParameterError(
                f"config line {lineno}: cannot parse {value!r} as {typ.__name__} "
                f"for key {key!r}"
            )
        setattr(args, key, parsed)


def _resolve_out(args) -> str:
    if args.out is not None:
        return args.out
    return os.environ.get(_ENV_OUT, "out")


# ---------------------------------------------------------------------------
# command implementations


def _run_kernel_table(args, session):
    from .kernel import build_profile, profile_mass

    profile = build_profile(y_max=args.y_max, node_count=args.nodes)
    session.write_json(
        "kernel_table.json",
        {
            "y_max": profile.y_max,
            "nodes": profile.node_count,
            "f_at_0": float(profile.tables[0][(profile.node_count - 1) // 2]),
            "mass": profile_mass(profile),
        },
    )
    if args.emit_csv:
        rows = zip(profile.grid, *profile.tables)
        session.write_csv(
            "kernel_table.csv", ["y", "f", "f1", "f2", "f3", "f4"], rows
        )
    if args.emit_svg:
        session.write_line_plot(
            "kernel_table.svg",
            profile.grid,
            {"f": profile.tables[0], "f'": profile.tables[1]},
            xlabel="y",
            ylabel="profile",
            title="fourth-order heat kernel profile",
        )
    return 0


def _run_kernel_mass(args, session):
    from .kernel import profile_mass

    mass = profile_mass()
    session.write_json("kernel_mass.json", {"mass": mass, "deviation": mass - 1.0})
    return 0


def _run_evolve(args, session):
    from .harness import random_band_limited
    from .spectral import make_grid, run_trajectory, write_field_csv

    times = _parse_times(args.times)
    if any(t < 0 for t in times) or sorted(times) != times:
        raise ParameterError(f"times: must be nonnegative increasing, got {times}")
    grid = make_grid(1, args.L, args.N)
    u0 = random_band_limited(grid, args.seed, band_limit=args.band)
    traj = run_trajectory(u0, np.asarray(times))
    summary = []
    for t, snap in zip(traj.times, traj.snapshots):
        summary.append(
            {
                "t": float(t),
                "sup": float(np.max(np.abs(snap.values))),
                "l2_sq": float(grid.spacing * (snap.values**2).sum()),
            }
        )
    session.write_json(
        "evolve.json",
        {
            "L": args.L,
            "N": args.N,
            "band": args.band if args.band is not None else args.N // 8,
            "seed": args.seed,
            "snapshots": summary,
        },
    )
    if args.emit_csv:
        for t, snap in zip(traj.times, traj.snapshots):
            name = f"field_t{float(t)!r}.csv"
            write_field_csv(snap, session.directory / name)
            session.files.append(name)
    if args.emit_svg:
        session.write_line_plot(
            "evolve.svg",
            grid.axis(),
            {f"t={float(t)!r}": snap.values for t, snap in zip(traj.times, traj.snapshots)},
            xlabel="x",
            ylabel="u",
            title="spectral evolution",
        )
    return 0


def _run_tychonoff_eval(args, session):
    from .tychonoff import TychonoffParams, eval_u

    params = TychonoffParams(J=args.J, M=args.M)
    sv = eval_u(args.x, args.t, params)
    session.write_json(
        "tychonoff_eval.json",
        {
            "x": args.x,
            "t": args.t,
            "value": sv.value,
            "tail_bound": sv.tail_bound,
            "terms_used": sv.terms_used,
            "warning": sv.warning,
        },
    )
    return 0


def _run_tychonoff_scan(args, session):
    from .tychonoff import hypothesis_violation_scan

    if args.count < 2 or args.x_max <= args.x_min:
        raise ParameterError(
            f"scan: need count >= 2 and x_max > x_min, got "
            f"count={args.count}, x_min={args.x_min}, x_max={args.x_max}"
        )
    xs = np.linspace(args.x_min, args.x_max, args.count)
    rows = hypothesis_violation_scan(args.t, xs)
    session.write_json("tychonoff_scan.json", {"t": args.t, "rows": rows})
    if args.emit_csv:
        session.write_csv(
            "tychonoff_scan.csv",
            ["x1", "monitor", "value", "tail_bound", "terms_used"],
            [
                (r["x1"], r["monitor"], r["value"], r["tail_bound"], r["terms_used"])
                for r in rows
            ],
        )
    if args.emit_svg:
        session.write_line_plot(
            "tychonoff_scan.svg",
            [r["x1"] for r in rows],
            {"t u_xx^2": [r["monitor"] for r in rows]},
            xlabel="x1",
            ylabel="monitor",
            title="growth-hypothesis violation",
            logy=True,
        )
    return 0


def _run_step_analyze(args, session):
    from .stepexample import analyze

    a = analyze()
    session.write_json(
        "step_analyze.json",
        {
            "k0_star": a.k0_star,
            "xi_star": a.xi_star,
            "k1_star": a.k1_star,
            "overshoot": a.overshoot,
        },
    )
    if args.emit_csv:
        from .kernel import step_profile_F

        xi = np.linspace(-10.0, 10.0, 801)
        session.write_csv(
            "step_profile.csv",
            ["xi", "F", "f", "f1", "f3"],
            zip(
                xi,
                step_profile_F(xi),
                a.profile.evaluate(xi, 0),
                a.profile.evaluate(xi, 1),
                a.profile.evaluate(xi, 3),
            ),
        )
    if args.emit_svg:
        from .kernel import step_profile_F

        xi = np.linspace(-10.0, 10.0, 801)
        session.write_line_plot(
            "step_profile.svg",
            xi,
            {"F": step_profile_F(xi), "f'": a.profile.evaluate(xi, 1)},
            xlabel="xi",
            ylabel="profile",
            title="self-similar step profile",
        )
    return 0


def _run_step_speed(args, session):
    from .stepexample import nonintegrable_speed_report

    times = _parse_times(args.times)
    rows = nonintegrable_speed_report(times)
    session.write_json("step_speed.json", {"rows": rows})
    if args.emit_csv:
        session.write_csv(
            "step_speed.csv",
            ["t", "max_bilap", "t_max_bilap"],
            [(r["t"], r["max_bilap"], r["t_max_bilap"]) for r in rows],
        )
    if args.emit_svg:
        session.write_line_plot(
            "step_speed.svg",
            [r["t"] for r in rows],
            {"max |u_xxxx|": [r["max_bilap"] for r in rows]},
            xlabel="t",
            ylabel="speed",
            title="non-integrable interface speed",
            logx=True,
            logy=True,
        )
    return 0


def _run_verify(args, session):
    from .harness import run_suite

    reports = run_suite(args.suite, args.seed)
    dicts = [r.as_dict() for r in reports]
    n_fail = sum(1 for d in dicts if not d["pass"])
    session.write_json(
        f"verify_{args.suite}.json",
        {
            "suite": args.suite,
            "seed": args.seed,
            "total": len(dicts),
            "failed": n_fail,
            "reports": dicts,
        },
    )
    if args.emit_csv:
        session.write_csv(
            f"verify_{args.suite}.csv",
            ["name", "seed", "lhs", "rhs", "margin", "tolerance", "pass"],
            [
                (
                    d["name"],
                    d["seed"],
                    d["lhs"],
                    d["rhs"],
                    d["margin"],
                    d["tolerance"],
                    d["pass"],
                )
                for d in dicts
            ],
        )
    return 0 if n_fail == 0 else 1


_DISPATCH = {
    ("kernel", "table"): _run_kernel_table,
    ("kernel", "mass"): _run_kernel_mass,
    ("evolve", None): _run_evolve,
    ("tychonoff", "eval"): _run_tychonoff_eval,
    ("tychonoff", "scan"): _run_tychonoff_scan,
    ("step", "analyze"): _run_step_analyze,
    ("step", "speed"): _run_step_speed,
    ("verify", None): _run_verify,
}


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0

    from .reporting import OutputSession

    try:
        _apply_config(args, argv)
        if args.threads < 1:
            raise ParameterError(f"threads: must be >= 1, got {args.threads}")
    except ParameterError as exc:
        print(f"biheat: {exc}", file=sys.stderr)
        return 2

    try:
        session = OutputSession(_resolve_out(args))
    except OSError as exc:
        print(f"biheat: {exc}", file=sys.stderr)
        return 3

    handler = _DISPATCH[(args.command, getattr(args, "subcommand", None))]
    params_echo = {
        k: v
        for k, v in vars(args).items()
        if k not in ("command", "subcommand", "config") and v is not None
    }
    params_echo["out"] = str(session.directory)
    try:
        code = handler(args, session)
        session.finalize(
            args.command
            + ("" if getattr(args, "subcommand", None) is None else f" {args.subcommand}"),
            params_echo,
        )
    except (ParameterError, SamplingError, QuadratureError) as exc:
        print(f"biheat: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"biheat: {exc}", file=sys.stderr)
        return 3
    return code


if __name__ == "__main__":
    sys.exit(main())
