"""Energy functional, constrained gradient, multipliers and interpolation certificates.

The energy of a two-component state (u1, u2) is

    J = 1/2 int |grad u1|^2 + |grad u2|^2
        - int (mu1/p1)|u1|^p1 + (mu2/p2)|u2|^p2 + beta |u1|^r1 |u2|^r2.

Admissible parameters: beta > 0, mu_i > 0, r_i > 1, 2 < p_i < 2 + 4/N and
r1 + r2 < 2 + 4/N (the mass-subcritical regime where J is coercive on the
constraint set of prescribed component masses).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import grid as g
from .errors import EnergyOverflowError, WraparoundError, ZeroMassError
from .grid import Field, Pair


@dataclass(frozen=True)
class ModelParams:
    dim: int
    mu1: float
    mu2: float
    p1: float
    p2: float
    r1: float
    r2: float
    beta: float
    a1: float
    a2: float
    allow_zero_mass: bool = False

    def __post_init__(self):
        n = self.dim
        if n not in (1, 2, 3):
            raise ValueError(f"dim must be in {{1,2,3}}, got {n}")
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        pc = 2 + 4.0 / n
        for i, (mu, p, r) in enumerate(((self.mu1, self.p1, self.r1), (self.mu2, self.p2, self.r2)), 1):
            if not mu > 0:
                raise ValueError(f"mu{i} must be positive, got {mu}")
            if not 2 < p < pc:
                raise ValueError(f"p{i} must satisfy 2 < p < {pc}, got {p}")
            if not r > 1:
                raise ValueError(f"r{i} must exceed 1, got {r}")
        if not self.r1 + self.r2 < pc:
            raise ValueError(f"r1 + r2 must be below {pc}, got {self.r1 + self.r2}")
        for i, a in enumerate((self.a1, self.a2), 1):
            if a < 0 or (a == 0 and not self.allow_zero_mass):
                raise ValueError(f"a{i} must be positive, got {a}")
        if self.allow_zero_mass and self.a1 == 0 and self.a2 == 0:
            raise ValueError("at least one prescribed mass must be positive")

    def with_masses(self, a1: float, a2: float) -> "ModelParams":
        """Same interaction parameters with new masses; zero masses allowed."""
        return replace(self, a1=a1, a2=a2, allow_zero_mass=(a1 == 0 or a2 == 0))

    @property
    def active(self) -> tuple:
        """Which components carry positive prescribed mass."""
        return (self.a1 > 0, self.a2 > 0)

    @property
    def critical_exponent(self) -> float:
        return 2 + 4.0 / self.dim


@dataclass(frozen=True)
class EnergyBreakdown:
    kinetic: float
    self1: float
    self2: float
    coupling: float
    total: float


def _check_term(name: str, value: float) -> float:
    if not np.isfinite(value):
        raise EnergyOverflowError(f"energy term '{name}' is non-finite")
    return value


def odd_power(u: np.ndarray, exponent: float) -> np.ndarray:
    """Pointwise |u|^(e-1) * u/|u|, with value 0 where u vanishes.

    Continuous for exponent > 1 even though not Lipschitz for e < 2.
    """
    amp = np.abs(u)
    with np.errstate(divide="ignore", invalid="ignore"):
        factor = np.where(amp > 0, amp ** (exponent - 2.0), 0.0)
    return factor * u


def coupling_density(params: ModelParams, state: Pair) -> np.ndarray:
    return np.abs(state.first.values) ** params.r1 * np.abs(state.second.values) ** params.r2


def energy(params: ModelParams, state: Pair) -> EnergyBreakdown:
    """All four terms of J by quadrature."""
    gr = state.grid
    kinetic = _check_term(
        "kinetic", 0.5 * (g.grad_norm_sq(state.first) + g.grad_norm_sq(state.second))
    )
    self1 = _check_term(
        "self1",
        params.mu1 / params.p1 * g.integrate(gr, np.abs(state.first.values) ** params.p1),
    )
    self2 = _check_term(
        "self2",
        params.mu2 / params.p2 * g.integrate(gr, np.abs(state.second.values) ** params.p2),
    )
    coupling = _check_term(
        "coupling", params.beta * g.integrate(gr, coupling_density(params, state))
    )
    total = _check_term("total", kinetic - self1 - self2 - coupling)
    return EnergyBreakdown(kinetic, self1, self2, coupling, total)


def nonlinearity(params: ModelParams, state: Pair) -> tuple:
    """The two nonlinear force densities of the stationary system.

    Component i receives mu_i |u_i|^(p_i-2) u_i + r_i beta |u_i|^(r_i-2) u_i |u_j|^(r_j).
    """
    u1, u2 = state.first.values, state.second.values
    m1, m2 = np.abs(u1), np.abs(u2)
    f1 = params.mu1 * odd_power(u1, params.p1) + params.r1 * params.beta * odd_power(
        u1, params.r1
    ) * m2**params.r2
    f2 = params.mu2 * odd_power(u2, params.p2) + params.r2 * params.beta * m1**params.r1 * odd_power(
        u2, params.r2
    )
    return f1, f2


def constrained_gradient(params: ModelParams, state: Pair) -> Pair:
    """Unconstrained L2 gradient of J: g_i = -lap u_i - nonlinearity_i."""
    f1, f2 = nonlinearity(params, state)
    g1 = g.laplacian(state.first).values
    g2 = g.laplacian(state.second).values
    out1 = -g1 - f1
    out2 = -g2 - f2
    if not (np.all(np.isfinite(out1)) and np.all(np.isfinite(out2))):
        raise EnergyOverflowError("gradient evaluation overflowed")
    return Pair(Field(state.grid, out1), Field(state.grid, out2))


def multipliers(params: ModelParams, state: Pair) -> tuple:
    """Lagrange multipliers from pairing the stationary system with (u1, u2)."""
    gr = state.grid
    m1 = g.mass(state.first)
    m2 = g.mass(state.second)
    if m1 <= 0 or m2 <= 0:
        raise ZeroMassError("multipliers need positive mass in both components")
    cp = g.integrate(gr, coupling_density(params, state))
    lam1 = (
        g.grad_norm_sq(state.first)
        - params.mu1 * g.integrate(gr, np.abs(state.first.values) ** params.p1)
        - params.r1 * params.beta * cp
    ) / m1
    lam2 = (
        g.grad_norm_sq(state.second)
        - params.mu2 * g.integrate(gr, np.abs(state.second.values) ** params.p2)
        - params.r2 * params.beta * cp
    ) / m2
    return lam1, lam2


def single_multiplier(params: ModelParams, state: Pair, component: int) -> float:
    """Multiplier of one component, for single-component (zero-mass) runs."""
    f = state.first if component == 1 else state.second
    mu = params.mu1 if component == 1 else params.mu2
    p = params.p1 if component == 1 else params.p2
    r = params.r1 if component == 1 else params.r2
    m = g.mass(f)
    if m <= 0:
        raise ZeroMassError(f"component {component} has zero mass")
    cp = g.integrate(state.grid, coupling_density(params, state))
    return (
        g.grad_norm_sq(f)
        - mu * g.integrate(state.grid, np.abs(f.values) ** p)
        - r * params.beta * cp
    ) / m


# --- Gagliardo-Nirenberg certificate -------------------------------------


@dataclass(frozen=True)
class GNCertificate:
    """Measured sides of the interpolation bounds and the coercivity exponents."""

    lhs1: float  # int |u1|^p1
    rhs_base1: float  # ||grad u1||_2 ^ (N(p1-2)/2)
    lhs2: float
    rhs_base2: float
    coupling_lhs: float  # int |u1|^r1 |u2|^r2
    coupling_rhs_base: float
    q: float
    q_conj: float
    exponent1: float  # N(p1-2)/2
    exponent2: float
    coupling_exponent: float  # N(r1 q - 2)/(2q) + N(r2 q' - 2)/(2q')
    coercive: bool

    CSV_HEADER = "lhs1,rhs_base1,lhs2,rhs_base2,coupling_lhs,coupling_rhs_base,q,q_conj,exponent1,exponent2,coupling_exponent,coercive"

    def csv_row(self) -> str:
        vals = [
            self.lhs1, self.rhs_base1, self.lhs2, self.rhs_base2,
            self.coupling_lhs, self.coupling_rhs_base, self.q, self.q_conj,
            self.exponent1, self.exponent2, self.coupling_exponent,
        ]
        return ",".join(format(v, ".17g") for v in vals) + f",{int(self.coercive)}"


def _q_admissible(params: ModelParams, q: float) -> bool:
    if q <= 1:
        return False
    qc = q / (q - 1)
    if not (params.r1 * q > 2 and params.r2 * qc > 2):
        return False
    if params.dim == 3:
        # 2* = 6 when N = 3; no upper Lebesgue restriction for N in {1,2}
        if params.r1 * q > 6 or params.r2 * qc > 6:
            return False
    return True


def choose_q(params: ModelParams, tol: float = 1e-12) -> float:
    """Midpoint of the admissible Hoelder-exponent interval, found by bisection.

    Admissibility: q > 1 with r1*q > 2, r2*q' > 2 (and both at most 2* for N=3).
    A valid q always exists in the admissible parameter regime.
    """
    # scan for one admissible point, then bisect towards each boundary
    qs = np.linspace(1.0 + 1e-9, 64.0, 20001)
    mask = np.array([_q_admissible(params, q) for q in qs])
    if not mask.any():
        raise AssertionError("no admissible Hoelder exponent; parameter validation is broken")
    idx = np.where(mask)[0]
    q_in_lo, q_in_hi = qs[idx[0]], qs[idx[-1]]

    def bisect(lo, hi, want_hi_admissible):
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if _q_admissible(params, mid) == want_hi_admissible:
                hi = mid
            else:
                lo = mid
            if hi - lo < tol:
                break
        return 0.5 * (lo + hi)

    lo_edge = q_in_lo if idx[0] == 0 else bisect(qs[idx[0] - 1], q_in_lo, True)
    if idx[-1] == len(qs) - 1:
        hi_edge = q_in_hi  # interval unbounded above within scan range
    else:
        hi_edge = bisect(q_in_hi, qs[idx[-1] + 1], False)
    return 0.5 * (lo_edge + hi_edge)


def gn_certificate(params: ModelParams, state: Pair, mass_tol: float = 1e-8) -> GNCertificate:
    """Measured Gagliardo-Nirenberg sides plus the subcriticality exponents."""
    for f, a, name in ((state.first, params.a1, "a1"), (state.second, params.a2, "a2")):
        m = g.mass(f)
        if abs(m - a) > mass_tol * max(1.0, a):
            raise ValueError(f"state mass {m} does not match prescribed {name}={a}")
    n = params.dim
    q = choose_q(params)
    qc = q / (q - 1)
    grad1 = np.sqrt(g.grad_norm_sq(state.first))
    grad2 = np.sqrt(g.grad_norm_sq(state.second))
    e1 = n * (params.p1 - 2) / 2
    e2 = n * (params.p2 - 2) / 2
    ec = n * (params.r1 * q - 2) / (2 * q) + n * (params.r2 * qc - 2) / (2 * qc)
    cert = GNCertificate(
        lhs1=g.integrate(state.grid, np.abs(state.first.values) ** params.p1),
        rhs_base1=grad1**e1,
        lhs2=g.integrate(state.grid, np.abs(state.second.values) ** params.p2),
        rhs_base2=grad2**e2,
        coupling_lhs=g.integrate(state.grid, coupling_density(params, state)),
        coupling_rhs_base=grad1 ** (n * (params.r1 * q - 2) / (2 * q))
        * grad2 ** (n * (params.r2 * qc - 2) / (2 * qc)),
        q=q,
        q_conj=qc,
        exponent1=e1,
        exponent2=e2,
        coupling_exponent=ec,
        coercive=(e1 < 2 and e2 < 2 and ec < 2),
    )
    assert cert.coercive, "subcriticality exponents must stay below 2 under valid parameters"
    return cert


# --- energy-splitting diagnostic -----------------------------------------


@dataclass(frozen=True)
class SplittingReport:
    separation: int
    energy_defect: float
    coupling_defect: float

    CSV_HEADER = "separation,energy_defect,coupling_defect"

    def csv_row(self) -> str:
        return f"{self.separation}," + ",".join(
            format(v, ".17g") for v in (self.energy_defect, self.coupling_defect)
        )


def splitting_test(params: ModelParams, u: Pair, w: Pair, separation: int) -> SplittingReport:
    """Energy additivity defect of a far-separated superposition.

    Forms s = u + translate(w, separation * e1) and measures
    |J(s) - J(u) - J(w)| together with the coupling-integral defect.
    Both decay with the separation for concentrated bumps.
    """
    n = u.grid.points_per_dim
    if abs(separation) > n // 2:
        raise WraparoundError(f"separation {separation} exceeds half the box ({n // 2} cells)")
    shift = [separation] + [0] * (u.grid.dim - 1)
    wt = g.translate_pair(w, shift)
    s = Pair(
        Field(u.grid, u.first.values + wt.first.values),
        Field(u.grid, u.second.values + wt.second.values),
    )
    ju = energy(params, u).total
    jw = energy(params, w).total
    js = energy(params, s).total
    cp_s = g.integrate(s.grid, coupling_density(params, s))
    cp_u = g.integrate(u.grid, coupling_density(params, u))
    cp_w = g.integrate(w.grid, coupling_density(params, w))
    return SplittingReport(
        separation=separation,
        energy_defect=abs(js - ju - jw),
        coupling_defect=abs(cp_s - cp_u - cp_w),
    )
