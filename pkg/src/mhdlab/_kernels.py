"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The stepper's non-FFT time goes into a handful of fused elementwise passes
over full-size grid arrays; they live here so the solver stays readable.
Pairs of real fields travel through single complex transforms (real part is
one field, imaginary part the other), which halves the inverse-transform
count per right-side evaluation.  Set ``MHDLAB_NUMBA=0`` to force the numpy
fallback (the benchmark compares both).
"""

import os

import numpy as np

_FLAG = os.environ.get("MHDLAB_NUMBA", "1").strip().lower()
_WANT_NUMBA = _FLAG not in ("0", "false", "no", "off")

if _WANT_NUMBA:
    try:
        import numba

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        HAVE_NUMBA = False
else:
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA


# ---------------------------------------------------------------------------
# numpy reference implementations
# ---------------------------------------------------------------------------

def _weighted_sumsq_np(c, w):
    """sum(w * |c|^2) over complex c and real w."""
    return float(np.sum(w * (c.real * c.real + c.imag * c.imag)))


def _weighted_cross_np(a, b, w):
    """sum(w * Re(conj(a) * b))."""
    return float(np.sum(w * (a.real * b.real + a.imag * b.imag)))


def _pack_curl_2d_np(u0, u1, b0, b1, k1, k2, zu, zb, zw):
    """Pack (u, b) spectral pairs and both scalar curls for joint inverses.

    zu = u0 + i u1, zb = b0 + i b1, zw = curl(u) + i curl(b) with
    curl(v) = i (k1 v2 - k2 v1).
    """
    np.multiply(u1, 1j, out=zu)
    zu += u0
    np.multiply(b1, 1j, out=zb)
    zb += b0
    cu = 1j * (k1 * u1 - k2 * u0)
    cb = k1 * b1 - k2 * b0
    np.subtract(cu, cb, out=zw)


def _rot_products_2d_np(zu, zb, zw, f1, f2, psi):
    """Physical-space products of the rotational-form right side.

    Inputs are packed physical pairs (real part / imaginary part); outputs
    are the two momentum force components (up to a pure gradient) and the
    scalar whose perpendicular curl is the induction right side.  Returns
    the max pointwise speed for the CFL check.
    """
    pu1, pu2 = zu.real, zu.imag
    pb1, pb2 = zb.real, zb.imag
    wu, wb = zw.real, zw.imag
    np.multiply(wu, pu2, out=f1)
    f1 -= wb * pb2
    np.multiply(wb, pb1, out=f2)
    f2 -= wu * pu1
    np.multiply(pu1, pb2, out=psi)
    psi -= pu2 * pb1
    vmax = max(np.abs(pu1).max(), np.abs(pu2).max(),
               np.abs(pb1).max(), np.abs(pb2).max())
    return float(vmax)


def _project_mask_curl_2d_np(f1h, f2h, psih, k1, k2, inv_ksq, mask, g1h, g2h):
    """Dealias all three spectra, project the force, curl the scalar."""
    f1h *= mask
    f2h *= mask
    psih *= mask
    div = (k1 * f1h + k2 * f2h) * inv_ksq
    f1h -= k1 * div
    f2h -= k2 * div
    np.multiply(psih, 1j * k2, out=g1h)
    np.multiply(psih, -1j * k1, out=g2h)


def _leray_2d_np(c1, c2, k1, k2, inv_ksq):
    div = (k1 * c1 + k2 * c2) * inv_ksq
    c1 -= k1 * div
    c2 -= k2 * div


def _heun_stage_np(out, decay, state, h, slope):
    """out = decay * (state + h*slope)."""
    np.multiply(state + h * slope, decay, out=out)


def _heun_combine_np(out, decay, state, h2, slope0, slope1):
    """out = decay*(state + h2*slope0) + h2*slope1."""
    np.multiply(state + h2 * slope0, decay, out=out)
    out += h2 * slope1


def _axpby_sum_np(out, x, h2, s0, s1):
    """out = x + h2*(s0 + s1); returns sum(out) for finiteness checks."""
    np.multiply(s0 + s1, h2, out=out)
    out += x
    total = complex(np.sum(out))
    return total.real + total.imag


def _dissipation_increment_np(a0_old, a1_old, a0_new, a1_new, decay, wa, wab, wb):
    """Closed-form per-step integral of |k|^2 |u|^2 for the decay+linear model."""
    acc = 0.0
    for old, new in ((a0_old, a0_new), (a1_old, a1_new)):
        bdev = new - decay * old
        acc += _weighted_sumsq_np(old, wa)
        acc += _weighted_cross_np(old, bdev, wab)
        acc += _weighted_sumsq_np(bdev, wb)
    return acc


_NP_IMPLS = {
    "weighted_sumsq": _weighted_sumsq_np,
    "weighted_cross": _weighted_cross_np,
    "pack_curl_2d": _pack_curl_2d_np,
    "rot_products_2d": _rot_products_2d_np,
    "project_mask_curl_2d": _project_mask_curl_2d_np,
    "leray_2d": _leray_2d_np,
    "heun_stage": _heun_stage_np,
    "heun_combine": _heun_combine_np,
    "axpby_sum": _axpby_sum_np,
    "dissipation_increment": _dissipation_increment_np,
}


# ---------------------------------------------------------------------------
# numba implementations (compiled lazily, cached on disk)
# ---------------------------------------------------------------------------

if HAVE_NUMBA:
    _jit = numba.njit(cache=True, fastmath=False)

    @_jit
    def _weighted_sumsq_nb(c, w):
        acc = 0.0
        cf = c.reshape(-1)
        wf = w.reshape(-1)
        for i in range(cf.size):
            v = cf[i]
            acc += wf[i] * (v.real * v.real + v.imag * v.imag)
        return acc

    @_jit
    def _weighted_cross_nb(a, b, w):
        acc = 0.0
        af = a.reshape(-1)
        bf = b.reshape(-1)
        wf = w.reshape(-1)
        for i in range(af.size):
            va = af[i]
            vb = bf[i]
            acc += wf[i] * (va.real * vb.real + va.imag * vb.imag)
        return acc

    @_jit
    def _pack_curl_2d_nb(u0, u1, b0, b1, k1, k2, zu, zb, zw):
        n, m = u0.shape
        for i in range(n):
            ki = k1[i, 0]
            for j in range(m):
                kj = k2[0, j]
                a0 = u0[i, j]
                a1 = u1[i, j]
                c0 = b0[i, j]
                c1 = b1[i, j]
                zu[i, j] = a0 + 1j * a1
                zb[i, j] = c0 + 1j * c1
                zw[i, j] = 1j * (ki * a1 - kj * a0) - (ki * c1 - kj * c0)

    @_jit
    def _rot_products_2d_nb(zu, zb, zw, f1, f2, psi):
        n, m = zu.shape
        vmax = 0.0
        for i in range(n):
            for j in range(m):
                u = zu[i, j]
                b = zb[i, j]
                w = zw[i, j]
                u1 = u.real
                u2 = u.imag
                b1 = b.real
                b2 = b.imag
                f1[i, j] = w.real * u2 - w.imag * b2
                f2[i, j] = w.imag * b1 - w.real * u1
                psi[i, j] = u1 * b2 - u2 * b1
                m1 = abs(u1)
                m2 = abs(u2)
                m3 = abs(b1)
                m4 = abs(b2)
                if m2 > m1:
                    m1 = m2
                if m4 > m3:
                    m3 = m4
                if m3 > m1:
                    m1 = m3
                if m1 > vmax:
                    vmax = m1
        return vmax

    @_jit
    def _project_mask_curl_2d_nb(f1h, f2h, psih, k1, k2, inv_ksq, mask, g1h, g2h):
        n, m = f1h.shape
        for i in range(n):
            ki = k1[i, 0]
            for j in range(m):
                kj = k2[0, j]
                mk = mask[i, j]
                a = f1h[i, j] * mk
                b = f2h[i, j] * mk
                p = psih[i, j] * mk
                div = (ki * a + kj * b) * inv_ksq[i, j]
                f1h[i, j] = a - ki * div
                f2h[i, j] = b - kj * div
                psih[i, j] = p
                g1h[i, j] = 1j * kj * p
                g2h[i, j] = -1j * ki * p

    @_jit
    def _leray_2d_nb(c1, c2, k1, k2, inv_ksq):
        n, m = c1.shape
        for i in range(n):
            ki = k1[i, 0]
            for j in range(m):
                kj = k2[0, j]
                div = (ki * c1[i, j] + kj * c2[i, j]) * inv_ksq[i, j]
                c1[i, j] = c1[i, j] - ki * div
                c2[i, j] = c2[i, j] - kj * div

    @_jit
    def _heun_stage_nb(out, decay, state, h, slope):
        of = out.reshape(-1)
        df = decay.reshape(-1)
        sf = state.reshape(-1)
        pf = slope.reshape(-1)
        for i in range(of.size):
            of[i] = df[i] * (sf[i] + h * pf[i])

    @_jit
    def _heun_combine_nb(out, decay, state, h2, slope0, slope1):
        of = out.reshape(-1)
        df = decay.reshape(-1)
        sf = state.reshape(-1)
        p0 = slope0.reshape(-1)
        p1 = slope1.reshape(-1)
        for i in range(of.size):
            of[i] = df[i] * (sf[i] + h2 * p0[i]) + h2 * p1[i]

    @_jit
    def _axpby_sum_nb(out, x, h2, s0, s1):
        of = out.reshape(-1)
        xf = x.reshape(-1)
        a = s0.reshape(-1)
        b = s1.reshape(-1)
        racc = 0.0
        iacc = 0.0
        for i in range(of.size):
            v = xf[i] + h2 * (a[i] + b[i])
            of[i] = v
            racc += v.real
            iacc += v.imag
        return racc + iacc

    @_jit
    def _dissipation_increment_nb(a0_old, a1_old, a0_new, a1_new, decay, wa, wab, wb):
        acc = 0.0
        df = decay.reshape(-1)
        waf = wa.reshape(-1)
        wabf = wab.reshape(-1)
        wbf = wb.reshape(-1)
        for old, new in ((a0_old.reshape(-1), a0_new.reshape(-1)),
                         (a1_old.reshape(-1), a1_new.reshape(-1))):
            for i in range(old.size):
                o = old[i]
                bdev = new[i] - df[i] * o
                acc += waf[i] * (o.real * o.real + o.imag * o.imag)
                acc += wabf[i] * (o.real * bdev.real + o.imag * bdev.imag)
                acc += wbf[i] * (bdev.real * bdev.real + bdev.imag * bdev.imag)
        return acc

    _NB_IMPLS = {
        "weighted_sumsq": _weighted_sumsq_nb,
        "weighted_cross": _weighted_cross_nb,
        "pack_curl_2d": _pack_curl_2d_nb,
        "rot_products_2d": _rot_products_2d_nb,
        "project_mask_curl_2d": _project_mask_curl_2d_nb,
        "leray_2d": _leray_2d_nb,
        "heun_stage": _heun_stage_nb,
        "heun_combine": _heun_combine_nb,
        "axpby_sum": _axpby_sum_nb,
        "dissipation_increment": _dissipation_increment_nb,
    }
else:
    _NB_IMPLS = {}


def get_impl(name, numba_ok=None):
    """Return the selected implementation of a named kernel."""
    use = USE_NUMBA if numba_ok is None else (numba_ok and HAVE_NUMBA)
    if use and name in _NB_IMPLS:
        return _NB_IMPLS[name]
    return _NP_IMPLS[name]


weighted_sumsq = get_impl("weighted_sumsq")
weighted_cross = get_impl("weighted_cross")
pack_curl_2d = get_impl("pack_curl_2d")
rot_products_2d = get_impl("rot_products_2d")
project_mask_curl_2d = get_impl("project_mask_curl_2d")
leray_2d = get_impl("leray_2d")
heun_stage = get_impl("heun_stage")
heun_combine = get_impl("heun_combine")
axpby_sum = get_impl("axpby_sum")
dissipation_increment = get_impl("dissipation_increment")
