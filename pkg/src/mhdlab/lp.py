"""Dyadic frequency decomposition and the norms built on it.

A filter bank tabulates a radial low-pass chi and ring filters
phi(2^{-j} xi) = chi(xi / 2^{j+1}) - chi(xi / 2^j) on the grid wavenumbers.
chi is 1 on |xi| <= 1, supported in |xi| <= 4/3; the rings are supported in
2^j * [3/4, 8/3] and telescope to a partition of unity, which makes the
block decomposition exact on the grid.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from .smoothstep import step
from .spectral import Field, VecField


def chi_profile(r):
    """Radial low-pass profile: 1 on [0,1], 0 beyond 4/3, smooth between."""
    return step(4.0 - 3.0 * np.asarray(r, dtype=np.float64))


def phi_profile(r):
    """Ring profile phi(r) = chi(r/2) - chi(r); supported in (1, 8/3)."""
    r = np.asarray(r, dtype=np.float64)
    return chi_profile(r / 2.0) - chi_profile(r)


class LPFilterBank:
    """Tabulated dyadic multipliers for one grid."""

    def __init__(self, grid):
        self.grid = grid
        kabs = np.sqrt(grid.k_sq)
        self.k_max = float(kabs.max())
        self.j_max = max(0, math.ceil(math.log2(self.k_max * 4.0 / 3.0)))
        self.chi_table = chi_profile(kabs)
        self.phi_tables = [
            phi_profile(kabs / 2.0**j) for j in range(self.j_max + 1)
        ]
        self._lowpass_tables = None
        self._sq_tables = {}

    def block_table(self, j):
        if j < -1:
            raise ValueError(f"block index must be >= -1, got {j}")
        if j == -1:
            return self.chi_table
        if j > self.j_max:
            return None  # identically zero on this grid
        return self.phi_tables[j]

    def block_table_sq(self, j):
        if j not in self._sq_tables:
            t = self.block_table(j)
            self._sq_tables[j] = None if t is None else t * t
        return self._sq_tables[j]

    def lowpass_table(self, j):
        """Cumulative table for S_j = sum of blocks j' < j."""
        if j < -1:
            raise ValueError(f"low-pass index must be >= -1, got {j}")
        if self._lowpass_tables is None:
            tables = [np.zeros(self.grid.shape)]  # S_{-1} = 0
            acc = np.array(self.chi_table)
            tables.append(np.array(acc))  # S_0 = chi cap
            for t in self.phi_tables:
                acc = acc + t
                tables.append(np.array(acc))
            self._lowpass_tables = tables
        idx = min(j + 1, len(self._lowpass_tables) - 1)
        return self._lowpass_tables[idx]

    def partition_defect(self):
        """max over grid modes of |chi + sum_j phi_j - 1|."""
        total = np.array(self.chi_table)
        for t in self.phi_tables:
            total += t
        return float(np.abs(total - 1.0).max())

    def squared_multiplier_range(self):
        """Exact range of chi^2 + sum_j phi_j^2 over the grid (block energy)."""
        total = self.chi_table**2
        for t in self.phi_tables:
            total = total + t**2
        return float(total.min()), float(total.max())


def build_filter_bank(grid):
    return LPFilterBank(grid)


@dataclass
class NormReport:
    kind: str
    s: float
    value: float
    r: float | None = None
    per_block: list = field(default_factory=list)

    def as_dict(self):
        d = {"kind": self.kind, "s": self.s, "value": self.value}
        if self.r is not None:
            d["r"] = self.r
        if self.per_block:
            d["per_block"] = [[int(j), v] for j, v in self.per_block]
        return d


def _component_list(f):
    if isinstance(f, VecField):
        return list(f.components)
    return [f]


def lp_block(f, j, bank):
    """Frequency block Delta_j of a scalar field."""
    if bank.grid != f.grid:
        raise ValueError("filter bank built on a different grid")
    table = bank.block_table(j)
    if table is None:
        return Field.zeros(f.grid)
    return Field.from_coefficients(f.grid, table * f.coefficients)


def lowpass(f, j, bank):
    """Cumulative low-pass S_j f (all blocks strictly below j)."""
    if bank.grid != f.grid:
        raise ValueError("filter bank built on a different grid")
    return Field.from_coefficients(f.grid, bank.lowpass_table(j) * f.coefficients)


def highpass(f, j, bank):
    """(Id - S_j) f, the tail the low-pass drops."""
    if bank.grid != f.grid:
        raise ValueError("filter bank built on a different grid")
    table = 1.0 - bank.lowpass_table(j)
    return Field.from_coefficients(f.grid, table * f.coefficients)


@lru_cache(maxsize=64)
def _hs_weight(grid, s):
    return (1.0 + grid.k_sq) ** s


def sobolev_norm(f, s):
    """H^s norm: (|domain| * sum_k (1+|k|^2)^s |c_k|^2)^(1/2)."""
    comps = _component_list(f)
    grid = comps[0].grid
    w = _hs_weight(grid, float(s))
    total = 0.0
    for comp in comps:
        total += _kernels.weighted_sumsq(comp.coefficients, w)
    return float(np.sqrt(grid.volume * total))


def l2_norm(f):
    return sobolev_norm(f, 0.0)


def linf_norm(f):
    """Max of |samples| over the grid (componentwise for vector fields)."""
    comps = _component_list(f)
    return float(max(np.abs(c.samples).max() for c in comps))


def besov_norm(f, s, r, bank):
    """Dyadic-block norm: ell^r over j of 2^{js} ||Delta_j f||_{L2}.

    Only the p = 2 block size is offered; r may be any value in [1, inf].
    Returns a NormReport with the per-block values populated.
    """
    if not r >= 1:
        raise ValueError(f"ell^r exponent must satisfy r >= 1, got {r}")
    comps = _component_list(f)
    grid = comps[0].grid
    if bank.grid != grid:
        raise ValueError("filter bank built on a different grid")
    per_block = []
    for j in range(-1, bank.j_max + 1):
        tsq = bank.block_table_sq(j)
        total = 0.0
        for comp in comps:
            total += _kernels.weighted_sumsq(comp.coefficients, tsq)
        block_l2 = math.sqrt(grid.volume * total)
        per_block.append((j, 2.0 ** (j * s) * block_l2))
    vals = np.array([v for _, v in per_block])
    if math.isinf(r):
        value = float(vals.max()) if vals.size else 0.0
    else:
        value = float(np.sum(vals**r) ** (1.0 / r))
    return NormReport(kind="Besov", s=float(s), value=value, r=float(r),
                      per_block=per_block)
