"""The C-infinity transition step shared by the ring filters and the bumps.

step(t) = e(t) / (e(t) + e(1-t)) with e(t) = exp(-1/t) for t > 0, else 0.
It is exactly 0 for t <= 0, exactly 1 for t >= 1, and all derivatives vanish
at both ends, so pieces glued from it are smooth.  First and second
derivatives are provided in closed form.
"""

import numpy as np


def _e(t):
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def step(t):
    t = np.asarray(t, dtype=np.float64)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    out = np.zeros_like(t)
    out[t >= 1.0] = 1.0
    mid = (t > 0.0) & (t < 1.0)
    tm = t[mid]
    a = np.exp(-1.0 / tm)
    b = np.exp(-1.0 / (1.0 - tm))
    out[mid] = a / (a + b)
    return out[0] if scalar else out


def step_d1(t):
    t = np.asarray(t, dtype=np.float64)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    out = np.zeros_like(t)
    mid = (t > 0.0) & (t < 1.0)
    tm = t[mid]
    a = np.exp(-1.0 / tm)
    b = np.exp(-1.0 / (1.0 - tm))
    da = a / tm**2
    db = -b / (1.0 - tm) ** 2
    out[mid] = (da * b - a * db) / (a + b) ** 2
    return out[0] if scalar else out


def step_d2(t):
    t = np.asarray(t, dtype=np.float64)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    out = np.zeros_like(t)
    mid = (t > 0.0) & (t < 1.0)
    tm = t[mid]
    a = np.exp(-1.0 / tm)
    b = np.exp(-1.0 / (1.0 - tm))
    da = a / tm**2
    db = -b / (1.0 - tm) ** 2
    dda = a * (1.0 - 2.0 * tm) / tm**4
    ddb = b * (2.0 * tm - 1.0) / (1.0 - tm) ** 4
    s = a + b
    num = (dda * b - a * ddb) * s - 2.0 * (da * b - a * db) * (da + db)
    out[mid] = num / s**3
    return out[0] if scalar else out
