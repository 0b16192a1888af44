"""Command-line entry point: generation, simulation, norms, experiments.

Runs are driven by a JSON config file; any key can be overridden on the
command line with `--set dotted.path=value` (values parsed as JSON when
possible).  Exit codes: 0 success, 2 config validation, 3 blow-up,
4 I/O errors.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import acceptance, experiments, lp
from .experiments import PROFILES, Profile, dump_json, write_csv
from .families import FamilyParams, FamilyParamsError, SupportError, make_family
from .fieldio import MhdfError, read_field, write_field
from .solver import BlowUpError, CflError, SolveConfig, solve
from .spectral import Grid, GridError

EXIT_CONFIG = 2
EXIT_BLOWUP = 3
EXIT_IO = 4

DEFAULT_CONFIG = {
    "grid": {"d": 2, "N": 256, "M": 8.0},
    "family": {"n": 8, "omega": 1, "delta": 0.25, "s": 2.0},
    "solve": {"dt": 2e-3, "t_end": 1.0, "cfl": 0.5, "record_every": 25,
              "s": 2.0, "magnetic_rhs": "full", "snapshot_every": 0},
    "input": {"u0": "u0.mhdf", "b0": "b0.mhdf"},
    "experiment": {"name": "nonuniform", "profile": "verify"},
    "output_dir": "out",
    "seed": 0x5EED,
}


class ConfigError(ValueError):
    pass


def _merge(base, override):
    out = dict(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], val)
        else:
            out[key] = val
    return out


def _apply_set(config, assignments):
    for item in assignments:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        path, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = config
        keys = path.split(".")
        for k in keys[:-1]:
            node = node.setdefault(k, {})
            if not isinstance(node, dict):
                raise ConfigError(f"--set path {path!r} crosses a non-object")
        node[keys[-1]] = value
    return config


def load_config(path, assignments=()):
    config = dict(DEFAULT_CONFIG)
    if path is not None:
        try:
            with open(path) as fh:
                user = json.load(fh)
        except OSError as exc:
            raise MhdfError(f"{path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
        if not isinstance(user, dict):
            raise ConfigError(f"{path}: config root must be an object")
        config = _merge(config, user)
    return _apply_set(config, assignments)


def validate_config(config, need=("grid", "family", "solve")):
    """Check every module precondition; aggregate all violations."""
    errors = []
    grid = None
    if "grid" in need:
        g = config["grid"]
        try:
            grid = Grid(int(g["d"]), int(g["N"]), float(g["M"]))
        except (GridError, KeyError, TypeError, ValueError) as exc:
            errors.append(f"grid: {exc}")
    params = None
    if "family" in need:
        f = config["family"]
        try:
            params = FamilyParams(d=int(config["grid"]["d"]), n=int(f["n"]),
                                  omega=int(f["omega"]), delta=float(f["delta"]),
                                  s=float(f["s"]))
            if grid is not None:
                params.validate_on_grid(grid)
        except (FamilyParamsError, SupportError, KeyError, TypeError, ValueError) as exc:
            errors.append(f"family: {exc}")
    solve_cfg = None
    if "solve" in need:
        sv = config["solve"]
        try:
            solve_cfg = SolveConfig(
                dt=float(sv["dt"]), t_end=float(sv["t_end"]), cfl=float(sv["cfl"]),
                record_every=int(sv["record_every"]), s=float(sv["s"]),
                magnetic_rhs=str(sv["magnetic_rhs"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            errors.append(f"solve: {exc}")
    if "experiment" in need:
        name = config.get("experiment", {}).get("name")
        if name not in ("asymptotics", "residuals", "duhamel", "nonuniform",
                        "continuity", "gronwall"):
            errors.append(f"experiment: unknown name {name!r}")
        prof = config.get("experiment", {}).get("profile", "verify")
        if prof not in PROFILES:
            errors.append(f"experiment: unknown profile {prof!r}")
    if errors:
        raise ConfigError("invalid config: " + "; ".join(errors))
    return grid, params, solve_cfg


def _outdir(config):
    path = config["output_dir"]
    os.makedirs(path, exist_ok=True)
    return path


def cmd_generate(args):
    config = load_config(args.config, args.set or ())
    grid, params, _ = validate_config(config, need=("grid", "family"))
    out = _outdir(config)
    fam = make_family(params, grid)
    u0_path = os.path.join(out, "u0.mhdf")
    b0_path = os.path.join(out, "b0.mhdf")
    write_field(u0_path, fam.u0)
    write_field(b0_path, fam.b0)
    sidecar = {
        "grid": {"d": grid.d, "N": grid.npts, "M": grid.period_scale},
        "family": {"n": params.n, "omega": params.omega,
                   "delta": params.delta, "s": params.s},
        "files": {"u0": "u0.mhdf", "b0": "b0.mhdf"},
    }
    dump_json(sidecar, os.path.join(out, "family.json"))
    print(f"wrote {u0_path}, {b0_path}")
    return 0


def cmd_simulate(args):
    config = load_config(args.config, args.set or ())
    _, _, solve_cfg = validate_config(config, need=("solve",))
    out = _outdir(config)
    _, u0 = read_field(config["input"]["u0"])
    _, b0 = read_field(config["input"]["b0"])
    snapshot_every = int(config["solve"].get("snapshot_every", 0))
    traj = solve(u0, b0, solve_cfg, snapshot_every=snapshot_every)
    csv_path = os.path.join(out, "trajectory.csv")
    traj.write_csv(csv_path)
    for i, (t, state) in enumerate(traj.states):
        write_field(os.path.join(out, f"state_{i:04d}_u.mhdf"), state.u)
        write_field(os.path.join(out, f"state_{i:04d}_b.mhdf"), state.b)
    if traj.blowup is not None:
        dump_json({"blowup": traj.blowup}, os.path.join(out, "blowup.json"))
        print(f"blow-up at t = {traj.blowup['t']:g}; partial series in {csv_path}",
              file=sys.stderr)
        return EXIT_BLOWUP
    from .solver import wellposedness_monitor

    c_fit, horizon = wellposedness_monitor(traj.series)
    dump_json({"wellposedness_bound": {"C_fit": c_fit, "horizon": horizon}},
              os.path.join(out, "monitor.json"))
    print(f"wrote {csv_path} (bound monitor: C_fit={c_fit:g}, horizon={horizon:g})")
    return 0


def cmd_norm(args):
    _, fld = read_field(args.field)
    if args.kind == "hs":
        report = lp.NormReport(kind="Hs", s=args.s, value=lp.sobolev_norm(fld, args.s))
    elif args.kind == "l2":
        report = lp.NormReport(kind="L2", s=0.0, value=lp.sobolev_norm(fld, 0.0))
    elif args.kind == "linf":
        report = lp.NormReport(kind="Linf", s=0.0, value=lp.linf_norm(fld))
    else:
        grid = fld.grid if hasattr(fld, "grid") else fld.components[0].grid
        bank = lp.build_filter_bank(grid)
        report = lp.besov_norm(fld, args.s, args.r, bank)
    print(json.dumps(report.as_dict(), sort_keys=True))
    return 0


_EXPERIMENT_CSV = {
    "asymptotics": ("n,alpha,plain,cos_scaled,sin_scaled".split(","),
                    lambda rows: [(r["n"], r["alpha"], r["plain"], r["cos_scaled"],
                                   r["sin_scaled"]) for r in rows]),
    "residuals": ("n,t,E_norm,F_norm".split(","),
                  lambda rows: [(r["n"], r["t"], r["E_norm"], r["F_norm"]) for r in rows]),
    "duhamel": ("n,t,drift".split(","),
                lambda rows: [(r["n"], r["t"], r["drift"]) for r in rows]),
    "nonuniform": ("n,t,D,sin_t,bound_sum".split(","),
                   lambda rows: [(r["n"], r["t"], r["D"], r["sin_t"], r["bound_sum"])
                                 for r in rows]),
    "continuity": ("level,eps,data_dist,sol_dist".split(","),
                   lambda rows: [(r["level"], r["eps"], r["data_dist"], r["sol_dist"])
                                 for r in rows]),
    "gronwall": ("n,t,lhs,rhs,A_int".split(","),
                 lambda rows: [(r["n"], r["t"], r["lhs"], r["rhs"], r["A_int"])
                               for r in rows]),
}


def cmd_experiment(args):
    config = load_config(args.config, args.set or ())
    config["experiment"]["name"] = args.name
    validate_config(config, need=("experiment",))
    out = _outdir(config)
    name = args.name
    prof = PROFILES[config["experiment"].get("profile", "verify")]
    seed = int(config.get("seed", 0x5EED))
    cache = {}
    if name == "asymptotics":
        report = exp = experiments.exp_asymptotics(
            config["experiment"].get("n_list", [32, 64, 128, 256]),
            prof.delta, prof.s,
            config["experiment"].get("alpha_list", [0.0, 1.0]))
        rows = report["rows"]
    elif name == "residuals":
        report = experiments.exp_residuals(prof, seed=seed, cache=cache)
        rows = report["rows"]
    elif name == "duhamel":
        report = experiments.exp_duhamel_drift(prof, cache=cache)
        rows = report["rows"]
    elif name == "nonuniform":
        report, rows = experiments.exp_nonuniform(prof)
    elif name == "continuity":
        report, rows = experiments.exp_continuity(prof, seed=seed)
    else:
        report, rows = experiments.exp_difference_gronwall(prof)
    header, extract = _EXPERIMENT_CSV[name]
    write_csv(os.path.join(out, f"{name}.csv"), header, extract(rows))
    report.pop("rows", None)
    dump_json(report, os.path.join(out, f"{name}.json"))
    print(f"wrote {out}/{name}.csv and {out}/{name}.json")
    checks = report.get("checks", {})
    flat_ok = all(v if isinstance(v, bool) else True for v in checks.values())
    return 0 if flat_ok else 1


def cmd_verify(args):
    config = load_config(args.config, args.set or ())
    profile = config.get("verify", {}).get("profile", args.profile)
    results, reports = acceptance.run_acceptance(profile)
    out = _outdir(config)
    summary = {
        "profile": profile,
        "criteria": [
            {"criterion": r.criterion, "passed": r.passed,
             "subchecks": r.subchecks, "seconds": r.seconds}
            for r in results
        ],
    }
    dump_json(summary, os.path.join(out, "verify.json"))
    for name, rep in reports.items():
        rep.pop("rows", None)
        dump_json(rep, os.path.join(out, f"verify_{name}.json"))
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 0 if not failed else 1


CONFIG_HELP = """\
config keys (JSON file and/or --set dotted overrides):
  grid.d                dimension, 1|2|3 (families need 2|3)      [2]
  grid.N                points per axis, even, >= 8               [256]
  grid.M                period scale; domain is [0, 2*pi*M)^d     [8.0]
  family.n              oscillation index (n*M must be integer)   [8]
  family.omega          phase sign, +1|-1                         [1]
  family.delta          envelope exponent, in (0, 1/3)            [0.25]
  family.s              regularity, > d/2                         [2.0]
  solve.dt              time step                                 [0.002]
  solve.t_end           horizon                                   [1.0]
  solve.cfl             advective safety factor in (0, 1]         [0.5]
  solve.record_every    steps between recorded samples            [25]
  solve.s               regularity for the recorded norms         [2.0]
  solve.magnetic_rhs    'full' | 'low_only' (reduced labeling)    [full]
  solve.snapshot_every  state snapshots per recorded samples      [0]
  input.u0 / input.b0   MHDF1 files for `simulate`
  experiment.name       asymptotics|residuals|duhamel|nonuniform|continuity|gronwall
  experiment.profile    'verify' (N<=512, n<=16) | 'full'         [verify]
  output_dir            where CSV/JSON/MHDF1 outputs land         [out]
  seed                  counter-based RNG seed                    [0x5EED]
exit codes: 0 ok, 2 invalid config, 3 blow-up, 4 I/O error
"""


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mhdlab",
        description="Spectral laboratory for the non-resistive MHD system: "
                    "data generation, time integration, dyadic norms, and "
                    "the well-posedness experiments.",
        epilog=CONFIG_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON config file (defaults applied first)")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config key via dotted path")

    p = sub.add_parser("generate", help="write family initial data as MHDF1")
    add_common(p)
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("simulate", help="integrate MHDF1 data; write series CSV")
    add_common(p)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("norm", help="print a norm report for an MHDF1 field")
    p.add_argument("field")
    p.add_argument("--s", type=float, default=2.0)
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--kind", choices=("hs", "besov", "linf", "l2"), default="hs")
    p.set_defaults(fn=cmd_norm)

    p = sub.add_parser("experiment", help="run one named experiment")
    p.add_argument("name", choices=sorted(_EXPERIMENT_CSV))
    add_common(p)
    p.set_defaults(fn=cmd_experiment)

    p = sub.add_parser("verify", help="run the acceptance battery")
    add_common(p)
    p.add_argument("--profile", choices=sorted(PROFILES), default="verify")
    p.set_defaults(fn=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FamilyParamsError, SupportError, GridError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CflError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BlowUpError as exc:
        print(f"blow-up: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except MhdfError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
