"""Time integration of the 2D non-resistive system on the torus.

Velocity diffusion is applied through the exact per-mode integrating factor
exp(-|k|^2 dt); the projected nonlinear terms and the magnetic transport are
advanced with Heun's explicit trapezoidal rule, all products dealiased by the
2/3 rule.  In 2D the projected momentum force reduces to the rotational form

    P(-(u.grad)u + (b.grad)b) = P(w_u * (u2, -u1) - w_b * (b2, -b1)),

with w the scalar curls, and the induction right side is the perpendicular
curl of u1 b2 - u2 b1, which keeps the magnetic field divergence-free to
roundoff.  Real pairs ride through packed complex transforms, so one
right-side evaluation costs 3 inverse plus 3 forward transforms.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .spectral import (
    Field,
    VecField,
    dealias_vec,
    divergence,
    fftn,
    gradient,
    ifftn,
    inv_laplacian,
    leray_project,
)

_EPS_SPEED = 1e-12


class CflError(RuntimeError):
    def __init__(self, dt, admissible):
        super().__init__(
            f"dt = {dt:g} violates the advective CFL bound; "
            f"largest admissible dt = {admissible:g}"
        )
        self.admissible = admissible


class BlowUpError(RuntimeError):
    def __init__(self, t, diagnostics):
        super().__init__(f"solution lost finiteness at t = {t:g}: {diagnostics}")
        self.t = t
        self.diagnostics = diagnostics


@dataclass
class SolveConfig:
    dt: float
    t_end: float
    cfl: float = 0.5
    record_every: int = 1
    s: float = 2.0
    magnetic_rhs: str = "full"

    def __post_init__(self):
        errs = []
        if not self.dt > 0:
            errs.append(f"dt must be positive, got {self.dt}")
        if not 0.0 < self.cfl <= 1.0:
            errs.append(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.t_end < 0:
            errs.append(f"t_end must be nonnegative, got {self.t_end}")
        if self.record_every < 1:
            errs.append(f"record_every must be >= 1, got {self.record_every}")
        if self.magnetic_rhs not in ("full", "low_only"):
            errs.append(f"magnetic_rhs must be 'full' or 'low_only', got {self.magnetic_rhs}")
        if errs:
            raise ValueError("; ".join(errs))


@dataclass
class MhdState:
    u: VecField
    b: VecField
    t: float


SERIES_COLUMNS = (
    "t", "Hs_u", "Hs_b", "Hsm1_u", "Hsm1_b",
    "grad_u_Hs_sq_int", "energy", "dissipation_int",
)


@dataclass
class Trajectory:
    config: SolveConfig
    series: dict
    states: list = field(default_factory=list)
    blowup: dict | None = None

    @property
    def completed(self):
        return self.blowup is None

    def write_csv(self, path):
        cols = [np.asarray(self.series[c]) for c in SERIES_COLUMNS]
        with open(path, "w") as fh:
            fh.write(",".join(SERIES_COLUMNS) + "\n")
            for row in zip(*cols):
                fh.write(",".join(format(v, ".17g") for v in row) + "\n")


def read_series_csv(path):
    data = np.genfromtxt(path, delimiter=",", names=True)
    if data.shape == ():
        data = data.reshape(1)
    return {name: np.asarray(data[name], dtype=np.float64)
            for name in data.dtype.names}


class Stepper:
    """Advances one (u, b) pair; experiments drive several in lockstep."""

    def __init__(self, u0, b0, config):
        grid = u0.grid
        if grid.d != 2:
            raise ValueError("time integration is implemented for d = 2 only")
        if b0.grid != grid:
            raise ValueError("u0 and b0 live on different grids")
        self.grid = grid
        self.config = config
        self.t = 0.0
        self.steps_taken = 0

        n = grid.npts
        self._nsq = float(n) ** grid.d
        self.k1 = grid.axis_wavenumbers(0)
        self.k2 = grid.axis_wavenumbers(1)
        ksq = grid.k_sq
        self.inv_ksq = np.where(ksq == 0.0, 0.0, 1.0 / np.where(ksq == 0.0, 1.0, ksq))
        self.mask = grid.dealias_mask.astype(np.float64)
        self.decay = np.exp(-ksq * config.dt)
        self._zu = np.empty(grid.shape, dtype=np.complex128)
        self._zb = np.empty(grid.shape, dtype=np.complex128)
        self._zw = np.empty(grid.shape, dtype=np.complex128)

        # raw spectral state (fftn of samples, unnormalized)
        self.uh = [np.array(fftn(c.samples), dtype=np.complex128) for c in u0.components]
        self.bh = [np.array(fftn(c.samples), dtype=np.complex128) for c in b0.components]
        self._project(self.uh)

        # norm weights (unnormalized-spectrum calibration)
        self._vol_factor = grid.volume / self._nsq**2
        s = config.s
        self._w_hs = (1.0 + ksq) ** s
        self._w_hsm1 = (1.0 + ksq) ** (s - 1.0)
        self._w_grad = ksq
        self._w_grad_hs = ksq * self._w_hs
        self._ones = np.ones_like(ksq)

        self._last_vmax = None
        self.dissipation_int = 0.0
        self.grad_u_hs_sq_int = 0.0
        self._grad_pair = None  # cached (||grad u||_L2^2, ||grad u||_Hs^2)

        # Per-step dissipation quadrature that is exact for pure decay: model
        # u(tau) = exp(-|k|^2 tau) A + (tau/dt) B on [0, dt] with
        # A = u(t), B = u(t+dt) - decay*u(t), and integrate |k|^2 |u|^2
        # mode by mode in closed form.  A plain trapezoid carries a k^4 error
        # factor that wrecks the energy balance at production resolutions.
        dt = config.dt
        x = ksq * dt
        with np.errstate(divide="ignore", invalid="ignore"):
            j0 = np.where(x > 0.0, -np.expm1(-2.0 * x) / (2.0 * ksq), dt)
            small = x < 1e-3
            h_small = 0.5 - x / 3.0 + x * x / 8.0
            h_big = np.where(
                x > 0.0, (1.0 - (1.0 + x) * np.exp(-x)) / np.where(x > 0.0, x * x, 1.0), 0.5
            )
            j1 = dt * dt * np.where(small, h_small, h_big)
        self._diss_w_a = ksq * j0                      # multiplies |A|^2
        self._diss_w_ab = ksq * j1 * (2.0 / dt)        # multiplies Re(conj(A) B)
        self._diss_w_b = ksq * (dt / 3.0)              # multiplies |B|^2

    # -- spectral helpers ---------------------------------------------------

    def _project(self, pair):
        _kernels.leray_2d(pair[0], pair[1], self.k1, self.k2, self.inv_ksq)

    def _weighted_sq(self, arrs, w):
        total = 0.0
        for a in arrs:
            total += _kernels.weighted_sumsq(a, w)
        return self._vol_factor * total

    def norm_hs(self, which="u", weight=None):
        arrs = self.uh if which == "u" else self.bh
        return math.sqrt(self._weighted_sq(arrs, self._w_hs if weight is None else weight))

    def energy(self):
        return 0.5 * (self._weighted_sq(self.uh, self._ones)
                      + self._weighted_sq(self.bh, self._ones))

    def record_row(self):
        return {
            "t": self.t,
            "Hs_u": math.sqrt(self._weighted_sq(self.uh, self._w_hs)),
            "Hs_b": math.sqrt(self._weighted_sq(self.bh, self._w_hs)),
            "Hsm1_u": math.sqrt(self._weighted_sq(self.uh, self._w_hsm1)),
            "Hsm1_b": math.sqrt(self._weighted_sq(self.bh, self._w_hsm1)),
            "grad_u_Hs_sq_int": self.grad_u_hs_sq_int,
            "energy": self.energy(),
            "dissipation_int": self.dissipation_int,
        }

    def state(self):
        u = VecField([Field.from_coefficients(self.grid, c / self._nsq) for c in self.uh])
        b = VecField([Field.from_coefficients(self.grid, c / self._nsq) for c in self.bh])
        return MhdState(u=u, b=b, t=self.t)

    # -- dynamics -----------------------------------------------------------

    def _rhs(self, uh, bh):
        """Right side (momentum force projected, induction curl); raw layout.

        Real pairs ride through joint complex inverse transforms: the packed
        field u1 + i.u2 inverts to the physical pair in one pass, so one
        evaluation costs 3 inverse and 3 forward transforms.
        """
        _kernels.pack_curl_2d(uh[0], uh[1], bh[0], bh[1], self.k1, self.k2,
                              self._zu, self._zb, self._zw)
        zu = ifftn(self._zu)
        zb = ifftn(self._zb)
        zw = ifftn(self._zw)

        f1 = np.empty(self.grid.shape)
        f2 = np.empty(self.grid.shape)
        psi = np.empty(self.grid.shape)
        vmax = _kernels.rot_products_2d(zu, zb, zw, f1, f2, psi)
        vmax = max(vmax, _EPS_SPEED)

        f1h = fftn(f1)
        f2h = fftn(f2)
        psih = fftn(psi)
        g1h = np.empty_like(f1h)
        g2h = np.empty_like(f1h)
        _kernels.project_mask_curl_2d(f1h, f2h, psih, self.k1, self.k2,
                                      self.inv_ksq, self.mask, g1h, g2h)
        return (f1h, f2h, g1h, g2h), vmax

    def cfl_limit(self, vmax):
        return self.config.cfl * self.grid.spacing / vmax

    def step(self):
        """One Heun step with exact diffusion factor on the velocity."""
        dt = self.config.dt
        uh, bh = self.uh, self.bh

        (f1a, f2a, g1a, g2a), vmax = self._rhs(uh, bh)
        self._last_vmax = vmax
        admissible = self.cfl_limit(vmax)
        if dt > admissible:
            raise CflError(dt, admissible)

        if self._grad_pair is None:
            self._grad_pair = (0.0, self._weighted_sq(uh, self._w_grad_hs))
        grad_hs_now = self._grad_pair[1]

        # predictor at t + dt
        up = [np.empty_like(uh[0]), np.empty_like(uh[1])]
        bp = [np.empty_like(bh[0]), np.empty_like(bh[1])]
        _kernels.heun_stage(up[0], self.decay, uh[0], dt, f1a)
        _kernels.heun_stage(up[1], self.decay, uh[1], dt, f2a)
        np.multiply(g1a, dt, out=bp[0])
        bp[0] += bh[0]
        np.multiply(g2a, dt, out=bp[1])
        bp[1] += bh[1]

        (f1b, f2b, g1b, g2b), _ = self._rhs(up, bp)

        # corrector
        h2 = dt / 2.0
        _kernels.heun_combine(up[0], self.decay, uh[0], h2, f1a, f1b)
        _kernels.heun_combine(up[1], self.decay, uh[1], h2, f2a, f2b)
        bnew = [np.empty_like(bh[0]), np.empty_like(bh[1])]
        bsum = _kernels.axpby_sum(bnew[0], bh[0], h2, g1a, g1b)
        bsum += _kernels.axpby_sum(bnew[1], bh[1], h2, g2a, g2b)

        self._project(up)

        # dissipation increment (exact-decay quadrature, see __init__)
        inc = _kernels.dissipation_increment(
            uh[0], uh[1], up[0], up[1], self.decay,
            self._diss_w_a, self._diss_w_ab, self._diss_w_b,
        )
        self.dissipation_int += self._vol_factor * inc

        self.uh = up
        self.bh = bnew
        self.t += dt
        self.steps_taken += 1

        # trapezoidal running integral of the H^s gradient budget (diagnostic)
        grad_hs_next = self._weighted_sq(self.uh, self._w_grad_hs)
        self.grad_u_hs_sq_int += h2 * (grad_hs_now + grad_hs_next)
        self._grad_pair = (0.0, grad_hs_next)

        if not (math.isfinite(grad_hs_next) and math.isfinite(bsum)):
            diag = {"t": self.t, "last_vmax": self._last_vmax,
                    "steps_taken": self.steps_taken}
            raise BlowUpError(self.t, diag)

    def divergence_defects(self):
        st = self.state()
        out = []
        for v in (st.u, st.b):
            denom = v.l2_norm()
            out.append(0.0 if denom == 0.0 else divergence(v).l2_norm() / denom)
        return tuple(out)


def _n_steps(config):
    n = int(round(config.t_end / config.dt))
    if abs(n * config.dt - config.t_end) > 1e-9 * max(1.0, config.t_end):
        n = int(math.ceil(config.t_end / config.dt - 1e-12))
    return n


def solve(u0, b0, config, snapshot_every=0):
    """Integrate to t_end; returns a Trajectory with the recorded series.

    snapshot_every: if positive, store the full state every that many
    recorded samples (sample 0 included).
    """
    stepper = Stepper(u0, b0, config)
    rows = [stepper.record_row()]
    states = []
    if snapshot_every:
        states.append((0.0, stepper.state()))
    nsteps = _n_steps(config)
    blowup = None
    try:
        for i in range(1, nsteps + 1):
            stepper.step()
            if i % config.record_every == 0 or i == nsteps:
                rows.append(stepper.record_row())
                k = len(rows) - 1
                if snapshot_every and k % snapshot_every == 0:
                    states.append((stepper.t, stepper.state()))
    except BlowUpError as exc:
        blowup = {"t": exc.t, "diagnostics": exc.diagnostics}
    series = {c: np.array([r[c] for r in rows]) for c in SERIES_COLUMNS}
    return Trajectory(config=config, series=series, states=states, blowup=blowup)


# ---------------------------------------------------------------------------
# reference-form right side and pressure recovery (diagnostics/tests)
# ---------------------------------------------------------------------------

def _advect(v, w):
    """(v . grad) w with physical-space products, dealiased."""
    grid = v.grid
    comps = []
    for wc in w.components:
        grads = gradient(wc)
        acc = np.zeros(grid.shape)
        for vc, gc in zip(v.components, grads.components):
            acc += vc.samples * gc.samples
        comps.append(Field.from_samples(grid, acc))
    return dealias_vec(VecField(comps))


def momentum_force(state):
    """Convective-form F = -(u.grad)u + (b.grad)b, dealiased."""
    return _advect(state.b, state.b) - _advect(state.u, state.u)


def rhs(state, config=None):
    """Instantaneous right side (du, db) as fields (diffusion excluded)."""
    du = leray_project(momentum_force(state))
    db = _advect(state.b, state.u) - _advect(state.u, state.b)
    return du, db


def recover_pressure(state):
    """Mean-zero pressure making the unprojected and projected force agree:
    grad P + leray(F) = F for the convective-form force F."""
    f = momentum_force(state)
    return inv_laplacian(divergence(f))


def wellposedness_monitor(series):
    """Fit the smallest constant in the rational local-existence bound.

    The bound reads X(t) <= X(0) / (1 - C t X(0)) with
    X(t) = ||u(t)||_{H^s}^2 + ||b(t)||_{H^s}^2.  The constant is
    existential, so it is fitted (never asserted): returns (C, horizon)
    where horizon is the time up to which the fitted bound stays finite.
    Monitoring only; a decaying solution fits C = 0.
    """
    t = np.asarray(series["t"])
    x = np.asarray(series["Hs_u"]) ** 2 + np.asarray(series["Hs_b"]) ** 2
    x0 = x[0]
    if x0 == 0.0:
        return 0.0, math.inf
    c_fit = 0.0
    for ti, xi in zip(t[1:], x[1:]):
        if xi > x0 and ti > 0:
            c_fit = max(c_fit, (1.0 - x0 / xi) / (ti * x0))
    horizon = math.inf if c_fit == 0.0 else 1.0 / (c_fit * x0)
    return c_fit, horizon
