#!/usr/bin/env python3
"""Measure and lock the fit-once constants into the packaged snapshot file.

Usage:
    python tools/lock_snapshots.py [--profiles verify full] [--static]

Locked values are regression anchors: later runs assert stability against
them (10-20% bands), never equality with theory.  Run this once per release
on the reference configuration.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SNAPSHOT_PATH = os.path.join(ROOT, "src", "mhdlab", "data", "snapshots.json")

from mhdlab import lp  # noqa: E402
from mhdlab.experiments import (  # noqa: E402
    PROFILES,
    besov2_weight,
    exp_continuity,
    exp_difference_gronwall,
    exp_nonuniform,
)
from mhdlab.families import FamilyParams, b_high  # noqa: E402
from mhdlab.lp import build_filter_bank, chi_profile, phi_profile  # noqa: E402
from mhdlab.spectral import Grid  # noqa: E402


def measure_static():
    bank = build_filter_bank(Grid(2, 256, 8.0))
    lo, hi = bank.squared_multiplier_range()
    besov_equiv = {}
    for s in (0.0, 1.0, 2.0, 3.5):
        w = besov2_weight(bank, s)
        hs = (1.0 + bank.grid.k_sq) ** s
        ratio = np.sqrt(w / hs)
        besov_equiv[format(s, "g")] = [float(ratio.min()), float(ratio.max())]
    g = Grid(2, 512, 8.0)
    linf_c = max(
        lp.linf_norm(b_high(FamilyParams(d=2, n=n, omega=1), 0.0, g)) * n
        for n in (4, 8, 16)
    )
    return {
        "chi_at_1": float(chi_profile(1.0)),
        "phi_at_1": float(phi_profile(1.0)),
        "almost_orth_range": [lo, hi],
        "besov_equiv": besov_equiv,
        "linf_high_C": linf_c,
    }


def measure_profile(name):
    profile = PROFILES[name]
    out = {}
    print(f"[{name}] nonuniform ...", flush=True)
    rep, _ = exp_nonuniform(profile)
    out["nonuniform"] = {
        "c0": {k: v["sin_ratio"] for k, v in rep["per_n"].items()},
        "data_norm_max": rep["checks"]["data_norm_max"],
        "D0_slope": rep["checks"]["D0_slope"],
    }
    print(f"[{name}] gronwall ...", flush=True)
    rep, _ = exp_difference_gronwall(profile)
    out["gronwall"] = {"C": {k: v["C_fit"] for k, v in rep["per_n"].items()}}
    print(f"[{name}] continuity ...", flush=True)
    rep, _ = exp_continuity(profile)
    out["continuity"] = {"contraction": rep["checks"]["contraction_ratio"],
                         "mollify_C": rep["checks"]["mollify_C"]}
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--profiles", nargs="*", default=["verify"],
                    choices=sorted(PROFILES))
    ap.add_argument("--static", action="store_true",
                    help="refresh the static (grid-canonical) constants")
    args = ap.parse_args()

    if os.path.exists(SNAPSHOT_PATH):
        with open(SNAPSHOT_PATH) as fh:
            data = json.load(fh)
    else:
        data = {}
    if args.static or "static" not in data:
        print("measuring static constants ...", flush=True)
        data["static"] = measure_static()
    for name in args.profiles:
        data[name] = measure_profile(name)
    os.makedirs(os.path.dirname(SNAPSHOT_PATH), exist_ok=True)
    with open(SNAPSHOT_PATH, "w") as fh:
        json.dump(data, fh, sort_keys=True, indent=2)
        fh.write("\n")
    print(f"wrote {SNAPSHOT_PATH}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
