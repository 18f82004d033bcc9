"""Ground-state energy surface over the two prescribed masses.

Fills a table of minima m(a1, a2) on a product mass grid (zero masses
solved with the absent component removed) and checks negativity, weak
subadditivity, monotonicity and an interpolation-based continuity proxy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import minimizer as mz
from .errors import ConfigError
from .grid import GridSpec, Pair
from .minimizer import GroundState, SolverConfig
from .model import ModelParams


@dataclass
class MassPoint:
    a1: float
    a2: float
    energy: float
    lambda1: float
    lambda2: float
    residual: float
    converged: bool


@dataclass
class MassGrid:
    a1_values: list
    a2_values: list
    entries: dict = field(default_factory=dict)  # (i, j) -> MassPoint

    CSV_HEADER = "a1,a2,energy,lambda1,lambda2,residual,converged"

    def point(self, i: int, j: int) -> MassPoint:
        return self.entries[(i, j)]

    def csv_rows(self):
        for i, a1 in enumerate(self.a1_values):
            for j, a2 in enumerate(self.a2_values):
                p = self.entries[(i, j)]
                yield (
                    ",".join(
                        format(v, ".17g")
                        for v in (p.a1, p.a2, p.energy, p.lambda1, p.lambda2, p.residual)
                    )
                    + f",{int(p.converged)}"
                )


def _difference_closed(values) -> bool:
    vals = np.asarray(values, dtype=float)
    if vals[0] != 0:
        return False
    sorted_ok = np.all(np.diff(vals) > 0)
    pool = set(np.round(vals, 12))
    diffs_ok = all(
        round(a - b, 12) in pool for a in vals for b in vals if a >= b
    )
    return bool(sorted_ok and diffs_ok)


def scan(
    params_template: ModelParams,
    spec: GridSpec,
    a1_values,
    a2_values,
    cfg: SolverConfig | None = None,
    warm_start: bool = True,
) -> MassGrid:
    """Solve the constrained minimization at every product mass point."""
    for vals in (a1_values, a2_values):
        v = np.asarray(vals, dtype=float)
        if np.any(v < 0) or np.any(np.diff(v) <= 0):
            raise ConfigError("mass lists must be nonnegative and strictly ascending")
    cfg = cfg or SolverConfig()
    table = MassGrid(a1_values=list(a1_values), a2_values=list(a2_values))
    prev_row_states: dict = {}
    for i, a1 in enumerate(table.a1_values):
        prev_state: Pair | None = None
        for j, a2 in enumerate(table.a2_values):
            if a1 == 0 and a2 == 0:
                table.entries[(i, j)] = MassPoint(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, True)
                continue
            params = params_template.with_masses(a1, a2)
            initial = None
            if warm_start:
                cand = prev_state if prev_state is not None else prev_row_states.get(j)
                if cand is not None and _compatible_start(cand, a1, a2):
                    initial = _rescaled_start(cand, a1, a2)
            gs = mz.solve(params, spec, cfg, initial=initial)
            lam1 = gs.lambda1 if a1 > 0 else 0.0
            lam2 = gs.lambda2 if a2 > 0 else 0.0
            table.entries[(i, j)] = MassPoint(
                a1, a2, gs.energy, lam1, lam2, gs.residual, gs.converged
            )
            prev_state = gs.state
            prev_row_states[j] = gs.state
    return table


def _compatible_start(state: Pair, a1: float, a2: float) -> bool:
    # a warm start is only usable when its zero/nonzero pattern matches
    return (state.first.is_zero()) == (a1 == 0) and (state.second.is_zero()) == (a2 == 0)


def _rescaled_start(state: Pair, a1: float, a2: float) -> Pair:
    from . import grid as g

    comps = []
    for f, a in ((state.first, a1), (state.second, a2)):
        comps.append(f if a == 0 else g.scale_to_mass(f, a))
    return Pair(*comps)


@dataclass
class CheckReport:
    name: str
    passed: bool
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)


def check_negativity(table: MassGrid, floor: float = -1e-10) -> CheckReport:
    """Every converged minimum with positive total mass must be negative."""
    violations = []
    for (i, j), p in table.entries.items():
        if p.a1 + p.a2 == 0 or not p.converged:
            continue
        if not p.energy < floor:
            violations.append(((i, j), p.energy))
    return CheckReport("negativity", not violations, violations)


def check_subadditivity(
    table: MassGrid, tol_solver: float = 1e-8, strict_margin: float = 1e-4
) -> CheckReport:
    """Weak subadditivity over all admissible splittings, strict gaps reported."""
    if not (_difference_closed(table.a1_values) and _difference_closed(table.a2_values)):
        raise ConfigError("mass grid must include 0 and be closed under differences")
    idx1 = {round(a, 12): i for i, a in enumerate(table.a1_values)}
    idx2 = {round(a, 12): j for j, a in enumerate(table.a2_values)}
    violations = []
    strict_gaps = []
    for (i, j), p in table.entries.items():
        if not p.converged:
            continue
        for (bi, bj), q in table.entries.items():
            b1, b2 = q.a1, q.a2
            if b1 > p.a1 or b2 > p.a2 or not q.converged:
                continue
            ci = idx1[round(p.a1 - b1, 12)]
            cj = idx2[round(p.a2 - b2, 12)]
            r = table.entries[(ci, cj)]
            if not r.converged:
                continue
            bound = q.energy + r.energy
            if p.energy > bound + 2 * tol_solver:
                violations.append(((i, j), (bi, bj), p.energy - bound))
            proper = (b1 + b2 > 0) and ((b1, b2) != (p.a1, p.a2))
            if proper and bound - p.energy > strict_margin:
                strict_gaps.append(((i, j), (bi, bj), bound - p.energy))
    return CheckReport(
        "subadditivity",
        not violations,
        violations,
        details={"strict_gaps": strict_gaps},
    )


def check_monotonicity(table: MassGrid, tol_solver: float = 1e-8) -> CheckReport:
    """m must be non-increasing in each mass, strict decreases confirmed."""
    violations = []
    confirmed = 0
    inconclusive = 0
    n1, n2 = len(table.a1_values), len(table.a2_values)
    for i in range(n1):
        for j in range(n2):
            p = table.entries[(i, j)]
            if not p.converged:
                continue
            for (ni, nj) in ((i + 1, j), (i, j + 1)):
                if ni >= n1 or nj >= n2:
                    continue
                q = table.entries[(ni, nj)]
                if not q.converged:
                    continue
                if q.energy > p.energy + 2 * tol_solver:
                    violations.append(((i, j), (ni, nj), q.energy - p.energy))
                elif p.energy - q.energy > 2 * tol_solver:
                    confirmed += 1
                else:
                    inconclusive += 1
    return CheckReport(
        "monotonicity",
        not violations,
        violations,
        details={"strict_confirmed": confirmed, "inconclusive": inconclusive},
    )


def check_continuity(table: MassGrid) -> CheckReport:
    """Midpoint-vs-interpolation discrepancy along rows and columns (diagnostic)."""
    discrepancies = []
    for axis, values in ((0, table.a1_values), (1, table.a2_values)):
        for t in range(len(values) - 2):
            triplets = []
            if axis == 0:
                for j in range(len(table.a2_values)):
                    triplets.append((table.entries[(t, j)], table.entries[(t + 1, j)], table.entries[(t + 2, j)]))
            else:
                for i in range(len(table.a1_values)):
                    triplets.append((table.entries[(i, t)], table.entries[(i, t + 1)], table.entries[(i, t + 2)]))
            for lo, mid, hi in triplets:
                if not (lo.converged and mid.converged and hi.converged):
                    continue
                interp = 0.5 * (lo.energy + hi.energy)
                discrepancies.append(abs(mid.energy - interp))
    if not discrepancies:
        return CheckReport("continuity", True, details={"max_discrepancy": 0.0})
    spacing = max(
        np.max(np.diff(table.a1_values)) if len(table.a1_values) > 1 else 0.0,
        np.max(np.diff(table.a2_values)) if len(table.a2_values) > 1 else 0.0,
    )
    c_est = max(discrepancies) / spacing if spacing > 0 else 0.0
    return CheckReport(
        "continuity",
        True,
        details={"max_discrepancy": max(discrepancies), "modulus_estimate": c_est},
    )
