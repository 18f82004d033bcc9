"""Discrete symmetric-decreasing and two-function rearrangements.

Both rearrangements are realized as sorting: cell values are ranked by
magnitude and reassigned along a fixed ordering of cells by distance from
the origin. This makes equimeasurability, monotone-map commutation and
p-norm additivity exact by construction; only the gradient and
Hardy-Littlewood inequalities remain numerical.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import grid as g
from .errors import CapacityError, GridMismatchError
from .grid import Field, GridSpec


@dataclass(frozen=True)
class RearrangeOrder:
    """Cells sorted by (distance of cell center from origin, lexicographic index)."""

    grid: GridSpec
    cell_ranking: np.ndarray

    @staticmethod
    def for_grid(spec: GridSpec) -> "RearrangeOrder":
        return _order_for_grid(spec)


@lru_cache(maxsize=32)
def _order_for_grid(spec: GridSpec) -> RearrangeOrder:
    dist = np.zeros(spec.shape)
    for x in spec.coords():
        dist = dist + x**2
    flat = dist.ravel()
    ranking = np.lexsort((np.arange(flat.size), flat))
    ranking.flags.writeable = False
    return RearrangeOrder(grid=spec, cell_ranking=ranking)


def _assign_sorted(spec: GridSpec, sorted_desc: np.ndarray) -> Field:
    order = RearrangeOrder.for_grid(spec)
    out = np.zeros(spec.size)
    out[order.cell_ranking] = sorted_desc
    return Field(spec, out.reshape(spec.shape))


def schwarz(u: Field) -> Field:
    """Symmetric-decreasing rearrangement of |u| onto the cell ranking."""
    vals = np.sort(np.abs(u.values.ravel()))[::-1]
    return _assign_sorted(u.grid, vals)


def merge_rearrange(u: Field, v: Field) -> Field:
    """Two-function rearrangement merging the value multisets of |u| and |v|.

    For every threshold t the number of output cells above t equals the
    count of cells of |u| above t plus that of |v| (discrete layer-cake).
    """
    if u.grid != v.grid:
        raise GridMismatchError("merge_rearrange requires matching grids")
    merged = np.concatenate([np.abs(u.values.ravel()), np.abs(v.values.ravel())])
    nnz = int(np.count_nonzero(merged))
    size = u.grid.size
    if nnz > size:
        raise CapacityError(
            f"combined support of {nnz} cells exceeds grid capacity {size}"
        )
    vals = np.sort(merged)[::-1][:size]
    return _assign_sorted(u.grid, vals)


@dataclass(frozen=True)
class RearrangeReport:
    """Margins for the discrete analogs of the rearrangement properties."""

    nonincreasing_ok: bool
    monotone_map_max_err: float
    pnorm_additivity_rel_err: dict
    gradient_lhs: float
    gradient_rhs: float
    gradient_ok: bool
    hardy_littlewood_lhs: float
    hardy_littlewood_rhs: float
    hardy_littlewood_ok: bool
    resolution_warning: bool

    CSV_HEADER = (
        "nonincreasing_ok,monotone_map_max_err,pnorm_rel_err_max,"
        "gradient_lhs,gradient_rhs,gradient_ok,hl_lhs,hl_rhs,hl_ok,resolution_warning"
    )

    def csv_row(self) -> str:
        pmax = max(self.pnorm_additivity_rel_err.values())
        vals = (
            self.monotone_map_max_err, pmax, self.gradient_lhs, self.gradient_rhs,
        )
        return (
            f"{int(self.nonincreasing_ok)},"
            + ",".join(format(v, ".17g") for v in vals[:2])
            + ","
            + ",".join(format(v, ".17g") for v in vals[2:])
            + f",{int(self.gradient_ok)},"
            + format(self.hardy_littlewood_lhs, ".17g")
            + ","
            + format(self.hardy_littlewood_rhs, ".17g")
            + f",{int(self.hardy_littlewood_ok)},{int(self.resolution_warning)}"
        )


def spectral_tail_fraction(u: Field, keep: float = 0.5) -> float:
    """Fraction of spectral power above `keep` of the Nyquist radius."""
    hat = np.abs(np.fft.fftn(u.values)) ** 2
    k2 = u.grid.k_squared()
    kmax2 = np.max(k2)
    total = float(np.sum(hat))
    if total == 0:
        return 0.0
    return float(np.sum(hat[k2 > (keep**2) * kmax2]) / total)


def check_rearrangement_properties(
    u: Field,
    v: Field,
    gamma: float = 1.5,
    gradient_tol: float = 1e-2,
    hl_slack: float = 1e-10,
) -> RearrangeReport:
    """Discrete analogs of the five defining rearrangement properties.

    Inputs should be real, nonnegative and spectrally resolved; the report
    carries a resolution warning (not an error) otherwise.
    """
    order = RearrangeOrder.for_grid(u.grid)
    s = merge_rearrange(u, v)

    # (i) non-increasing along the ranking -- exact by construction
    along = s.values.ravel()[order.cell_ranking]
    nonincreasing_ok = bool(np.all(np.diff(along) <= 0))

    # (ii) commutation with the monotone map t -> t^gamma
    phi_then = merge_rearrange(
        Field(u.grid, np.abs(u.values) ** gamma), Field(v.grid, np.abs(v.values) ** gamma)
    )
    then_phi = Field(u.grid, np.abs(s.values) ** gamma)
    denom = max(float(np.max(np.abs(then_phi.values))), 1e-300)
    monotone_err = float(np.max(np.abs(phi_then.values - then_phi.values))) / denom

    # (iii) p-norm additivity
    pnorm_err = {}
    for p in (2.0, 3.0, 4.0):
        left = g.lp_norm(s, p) ** p
        right = g.lp_norm(u, p) ** p + g.lp_norm(v, p) ** p
        pnorm_err[p] = abs(left - right) / max(right, 1e-300)

    # (iv) gradient inequality with discretization slack
    lhs = g.grad_norm_sq(s)
    rhs = g.grad_norm_sq(u) + g.grad_norm_sq(v)
    gradient_ok = lhs <= rhs * (1 + gradient_tol)

    # (v) paired Hardy-Littlewood with (u, v) against themselves
    hl_lhs = g.integrate(
        u.grid, np.abs(u.values) ** 2 + np.abs(v.values) ** 2
    )
    hl_rhs = g.integrate(u.grid, np.abs(s.values) ** 2)
    hl_ok = hl_lhs <= hl_rhs * (1 + hl_slack)

    warn = spectral_tail_fraction(u) > 1e-8 or spectral_tail_fraction(v) > 1e-8
    return RearrangeReport(
        nonincreasing_ok=nonincreasing_ok,
        monotone_map_max_err=monotone_err,
        pnorm_additivity_rel_err=pnorm_err,
        gradient_lhs=lhs,
        gradient_rhs=rhs,
        gradient_ok=gradient_ok,
        hardy_littlewood_lhs=hl_lhs,
        hardy_littlewood_rhs=hl_rhs,
        hardy_littlewood_ok=hl_ok,
        resolution_warning=warn,
    )


def hardy_littlewood_paired(u1: Field, v1: Field, u2: Field, v2: Field) -> tuple:
    """Both sides of int(u1 u2 + v1 v2) <= int {u1,v1}* {u2,v2}* for nonnegative inputs."""
    lhs = g.integrate(
        u1.grid,
        np.abs(u1.values) * np.abs(u2.values) + np.abs(v1.values) * np.abs(v2.values),
    )
    s1 = merge_rearrange(u1, v1)
    s2 = merge_rearrange(u2, v2)
    rhs = g.integrate(u1.grid, s1.values.real * s2.values.real)
    return lhs, rhs
