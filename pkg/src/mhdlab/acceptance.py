"""End-to-end acceptance battery shared by `mhdlab verify` and the tests.

Each criterion returns a CheckResult with named sub-checks; the battery
prints one PASS/FAIL line per criterion.  Three sub-checks are structurally
out of reach at desk scale with the mandated parameters (see the repo notes
and README): the plain scaling-limit 5% band, the high-field rate window
when the n = 4 point is included, and the sub-10% drift of the overlap
constant between consecutive n.  They are asserted exactly as stated and
reported honestly.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import lp
from .experiments import (
    PROFILES,
    besov2_weight,
    exp_asymptotics,
    exp_continuity,
    exp_difference_gronwall,
    exp_duhamel_drift,
    exp_nonuniform,
    exp_residuals,
    fit_loglog,
    random_divfree,
    rng_for,
)
from .families import FamilyParams, b_high, b_low0, phi
from .solver import SolveConfig, Stepper, solve
from .spectral import Field, Grid, VecField

# Continuous-quadrature oracle values for the plateau bump phi(x/4) on R^d,
# computed by adaptive quadrature of the closed forms (direct Fourier
# transform route cross-checked against derivative moments; both in
# tests/test_lp.py).  Keys: (dimension, s).
BUMP_ORACLE = {
    (1, 0.0): 2.371248829434271,
    (1, 1.0): 2.6946412734329392,
    (1, 2.0): 3.9980976518711806,
    (2, 0.0): 5.622821011093401,
    (2, 1.0): 7.073861789478235,
    (2, 2.0): 12.389952095009505,
}


@dataclass
class CheckResult:
    criterion: str
    passed: bool
    subchecks: dict
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        bad = [k for k, v in self.subchecks.items() if not v]
        extra = "" if self.passed else f"  [failing: {', '.join(bad)}]"
        return f"{status}  {self.criterion}  ({self.seconds:.1f}s){extra}"


def _result(criterion, subchecks, details=None, t0=None):
    return CheckResult(
        criterion=criterion,
        passed=all(subchecks.values()),
        subchecks=subchecks,
        details=details or {},
        seconds=0.0 if t0 is None else time.perf_counter() - t0,
    )


# -- criterion 1 ------------------------------------------------------------

def criterion_partition():
    t0 = time.perf_counter()
    defects = {}
    for grid in (Grid(2, 256, 8.0), Grid(1, 512, 3.0), Grid(3, 32, 4.0)):
        bank = lp.build_filter_bank(grid)
        defects[f"d{grid.d}_N{grid.npts}"] = bank.partition_defect()
    subchecks = {k: v <= 1e-12 for k, v in defects.items()}
    return _result("1 partition of unity", subchecks, {"defects": defects}, t0)


# -- criterion 2 ------------------------------------------------------------

def criterion_norm_oracle():
    t0 = time.perf_counter()
    subchecks = {}
    details = {}

    g1 = Grid(1, 256, 1.0)
    f = Field.from_samples(g1, np.sin(3.0 * g1.x1d))
    for s in (0.0, 1.0, 2.0):
        got = lp.sobolev_norm(f, s)
        want = math.sqrt(10.0**s * math.pi)
        subchecks[f"mode_1d_s{s:g}"] = abs(got - want) / want <= 1e-10
    g2 = Grid(2, 64, 1.0)
    x1 = g2.meshgrid()[0]
    f2 = Field.from_samples(g2, np.sin(3.0 * x1))
    got = lp.sobolev_norm(f2, 1.0)
    want = math.sqrt(2.0 * math.pi**2 * 10.0)
    subchecks["mode_2d_s1"] = abs(got - want) / want <= 1e-10

    # bump against the continuous-quadrature oracle
    for d, npts, s in ((1, 512, 0.0), (1, 512, 1.0), (2, 512, 1.0),
                       (1, 1024, 2.0), (2, 1024, 2.0)):
        grid = Grid(d, npts, 8.0)
        mid = math.pi * 8.0
        if d == 1:
            fb = Field.from_samples(grid, phi((grid.x1d - mid) / 4.0))
        else:
            xx, yy = grid.meshgrid()
            fb = Field.from_samples(grid, phi((xx - mid) / 4.0) * phi((yy - mid) / 4.0))
        got = lp.sobolev_norm(fb, s)
        want = BUMP_ORACLE[(d, s)]
        rel = abs(got - want) / want
        details[f"bump_{d}d_N{npts}_s{s:g}"] = rel
        subchecks[f"bump_{d}d_N{npts}_s{s:g}"] = rel <= 1e-6
    return _result("2 norm oracle", subchecks, details, t0)


# -- criterion 3 ------------------------------------------------------------

def criterion_asymptotics():
    t0 = time.perf_counter()
    report = exp_asymptotics([32, 64, 128, 256], 0.25, 2.0, [0.0])
    checks = report["checks"]
    subchecks = {
        "sin_within_5pct": checks["sin_within_5pct"],
        "cos_within_5pct": checks["cos_within_5pct"],
        "plain_within_5pct": checks["plain_within_5pct"],
        "errors_monotone": all(checks["errors_monotone"].values()),
    }
    return _result("3 scaling-limit asymptotics", subchecks,
                   {"errors_by_n": report["errors_by_n"]}, t0)


# -- criterion 4 ------------------------------------------------------------

def criterion_solver(npts=256):
    t0 = time.perf_counter()
    subchecks = {}
    details = {}
    grid = Grid(2, npts, 1.0)
    x2 = grid.meshgrid()[1]

    # exact heat decay of a stationary-advection shear
    u0 = VecField.from_samples(grid, np.sin(x2), np.zeros(grid.shape))
    traj = solve(u0, VecField.zeros(grid), SolveConfig(dt=0.01, t_end=0.5))
    got = traj.series["Hs_u"][-1] / traj.series["Hs_u"][0]
    details["heat_decay_err"] = abs(got - math.exp(-0.5))
    subchecks["heat_decay_exact"] = details["heat_decay_err"] <= 1e-12

    # order of accuracy: successive dt halvings on generic data
    rng = rng_for(0x5EED, 7)
    u = random_divfree(grid, 6, rng)
    b = random_divfree(grid, 6, rng)
    u = u * (0.5 / lp.linf_norm(u))
    b = b * (0.5 / lp.linf_norm(b))
    finals = []
    for dt in (4e-3, 2e-3, 1e-3):
        st = Stepper(u, b, SolveConfig(dt=dt, t_end=0.32, s=2.0))
        while st.steps_taken < int(round(0.32 / dt)):
            st.step()
        finals.append([np.array(c) for c in st.uh])
    e01 = math.sqrt(sum(float(np.sum(np.abs(a - c) ** 2)) for a, c in zip(finals[0], finals[1])))
    e12 = math.sqrt(sum(float(np.sum(np.abs(a - c) ** 2)) for a, c in zip(finals[1], finals[2])))
    ratio = e01 / e12
    details["order_ratio"] = ratio
    subchecks["order_ratio_in_band"] = 3.5 <= ratio <= 4.5

    # energy balance and divergence maintenance
    traj = solve(u, b, SolveConfig(dt=1e-3, t_end=0.5, record_every=100))
    e0 = traj.series["energy"][0]
    defect = abs(traj.series["energy"][-1] + traj.series["dissipation_int"][-1] - e0)
    details["energy_defect_rel"] = defect / e0
    subchecks["energy_balance"] = defect <= 1e-6 * e0
    st = Stepper(u, b, SolveConfig(dt=1e-3, t_end=0.5))
    worst = 0.0
    for k in range(500):
        st.step()
        if (k + 1) % 100 == 0:
            worst = max(worst, *st.divergence_defects())
    details["max_div_defect"] = worst
    subchecks["div_defects"] = worst <= 1e-9
    return _result("4 solver order and conservation", subchecks, details, t0)


# -- criterion 5 ------------------------------------------------------------

def criterion_family_rates(n_list=(4, 8, 16, 32), npts_2d=1024, npts_3d=128):
    t0 = time.perf_counter()
    s, delta = 2.0, 0.25
    g2 = Grid(2, npts_2d, 8.0)
    high, low = [], []
    for n in n_list:
        p = FamilyParams(d=2, n=int(n), omega=1, delta=delta, s=s)
        high.append(lp.sobolev_norm(b_high(p, 0.0, g2), s - 1.0))
        low.append(lp.sobolev_norm(b_low0(p, g2), s + 1.0))
    fit_high = fit_loglog(list(n_list), high)
    fit_low = fit_loglog(list(n_list), low)
    g3 = Grid(3, npts_3d, 8.0)
    low3 = []
    for n in n_list:
        p = FamilyParams(d=3, n=int(n), omega=1, delta=delta, s=s)
        low3.append(lp.sobolev_norm(b_low0(p, g3), s + 1.0))
    fit_low3 = fit_loglog(list(n_list), low3)
    details = {
        "high_slope": fit_high.slope, "low_slope": fit_low.slope,
        "low3_slope": fit_low3.slope,
        "high_slope_tail": fit_loglog(list(n_list)[1:], high[1:]).slope
        if len(n_list) > 3 else None,
    }
    subchecks = {
        "high_Hsm1_slope": abs(fit_high.slope + 1.0) <= 0.15,
        "low_Hsp1_slope": abs(fit_low.slope + (1.0 - delta)) <= 0.15,
        "low3_Hsp1_slope": abs(fit_low3.slope + (1.0 - 1.5 * delta)) <= 0.2,
    }
    return _result("5 data-family rates", subchecks, details, t0)


# -- criteria 6..9 ----------------------------------------------------------

def criterion_residuals(profile, cache=None):
    t0 = time.perf_counter()
    rep = exp_residuals(profile, cache=cache)
    subchecks = {
        "E_slope_leq": rep["checks"]["E_slope_ok"],
        "F_slope_leq": rep["checks"]["F_slope_ok"],
        "r2_geq_0.9": rep["checks"]["r2_ok"],
    }
    det = {k: {w: rep["fits"][k][w]["slope"] for w in ("E", "F")} for k in rep["fits"]}
    return _result("6 residual decay", subchecks, det, t0), rep


def criterion_nonuniform(profile):
    t0 = time.perf_counter()
    rep, rows = exp_nonuniform(profile)
    c = rep["checks"]
    subchecks = {
        "D0_slope_band": c["D0_slope_ok"],
        "sin_ratio_positive": c["sin_ratio_positive"],
        "c0_stability_10pct": c["c0_stable_ok"],
    }
    if "c0_vs_locked_ok" in c:
        subchecks["c0_vs_locked"] = c["c0_vs_locked_ok"]
    if "data_norm_bounded_ok" in c:
        subchecks["data_norms_bounded"] = c["data_norm_bounded_ok"]
    det = {"D0_slope": c["D0_slope"], "c0_stability": c["c0_stability"],
           "sin_ratio": {k: v["sin_ratio"] for k, v in rep["per_n"].items()}}
    return _result("7 non-uniform dependence", subchecks, det, t0), rep, rows


def criterion_continuity(profile):
    t0 = time.perf_counter()
    rep, rows = exp_continuity(profile)
    c = rep["checks"]
    subchecks = {
        "control_leq_1e8": c["control_leq_1e8"],
        "sol_dist_decreasing": c["sol_dist_decreasing"],
        "contraction_leq_0.25": c["contraction_leq_025"],
    }
    if "contraction_vs_locked_ok" in c:
        subchecks["contraction_vs_locked"] = c["contraction_vs_locked_ok"]
    det = {"contraction": c["contraction_ratio"], "sol_dist": rep["sol_dist"]}
    return _result("8 continuous dependence", subchecks, det, t0), rep, rows


def criterion_gronwall(profile):
    t0 = time.perf_counter()
    rep, rows = exp_difference_gronwall(profile)
    c = rep["checks"]
    subchecks = {"C_stable_20pct": c["C_stable_ok"]}
    if "locked_envelope_ok" in c:
        subchecks["locked_envelope_holds"] = c["locked_envelope_ok"]
    det = {"C_fits": c["C_fits"], "C_stability": c["C_stability"]}
    return _result("9 difference-energy envelope", subchecks, det, t0), rep, rows


def run_acceptance(profile_name="verify", printer=print):
    """Run every criterion; returns (results, reports)."""
    profile = PROFILES[profile_name]
    cache = {}
    results = []
    reports = {}

    for fn in (criterion_partition, criterion_norm_oracle, criterion_asymptotics,
               criterion_solver):
        res = fn()
        results.append(res)
        printer(res.line())

    if profile_name == "verify":
        res = criterion_family_rates(n_list=(4, 8, 16), npts_2d=512, npts_3d=96)
    else:
        res = criterion_family_rates()
    results.append(res)
    printer(res.line())

    res, rep = criterion_residuals(profile, cache=cache)
    results.append(res)
    reports["residuals"] = rep
    printer(res.line())

    res, rep, _ = criterion_nonuniform(profile)
    results.append(res)
    reports["nonuniform"] = rep
    printer(res.line())

    res, rep, _ = criterion_continuity(profile)
    results.append(res)
    reports["continuity"] = rep
    printer(res.line())

    res, rep, _ = criterion_gronwall(profile)
    results.append(res)
    reports["gronwall"] = rep
    printer(res.line())

    return results, reports
