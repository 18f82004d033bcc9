"""Strang-splitting time integration and the orbital stability experiment.

The evolution is the Hamiltonian flow of the energy functional:

    i dPsi_i/dt = -lap Psi_i - mu_i |Psi_i|^(p_i-2) Psi_i
                  - r_i beta |Psi_i|^(r_i-2) Psi_i |Psi_j|^(r_j),

so that standing waves e^{-i lambda_i t} u_i built from constrained
minimizers are exact solutions and the energy is a conserved quantity.
Each nonlinear substep is an exact pointwise phase rotation (all moduli
are invariant during it); the linear substep is a spectral multiplier.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import align
from . import grid as g
from . import model as mdl
from .errors import BlowupError
from .grid import Field, Pair
from .minimizer import GroundState
from .model import ModelParams


@dataclass
class EvolveConfig:
    dt: float = 0.002
    t_final: float = 20.0
    record_every: int = 50
    perturbation_size: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.t_final < self.dt:
            raise ValueError("t_final must be at least one step")
        if self.record_every < 1:
            raise ValueError("record_every must be at least 1")
        if self.perturbation_size < 0:
            raise ValueError("perturbation size must be nonnegative")


@dataclass
class StabilityTrace:
    times: list = field(default_factory=list)
    orbit_distance: list = field(default_factory=list)
    mass1: list = field(default_factory=list)
    mass2: list = field(default_factory=list)
    energy: list = field(default_factory=list)
    completed: bool = True
    final_state: Pair | None = None

    CSV_HEADER = "t,mass1,mass2,energy,orbit_distance"

    @property
    def sup_distance(self) -> float:
        return max(self.orbit_distance) if self.orbit_distance else 0.0

    def csv_rows(self):
        for t, m1, m2, e, d in zip(
            self.times, self.mass1, self.mass2, self.energy, self.orbit_distance
        ):
            yield ",".join(format(v, ".17g") for v in (t, m1, m2, e, d))


def _rotation_rates(params: ModelParams, state: Pair) -> tuple:
    """Nonlinear phase-rotation rate densities for the two components."""
    m1 = np.abs(state.first.values)
    m2 = np.abs(state.second.values)
    with np.errstate(divide="ignore", invalid="ignore"):
        c1 = np.where(m1 > 0, m1 ** (params.r1 - 2.0), 0.0)
        c2 = np.where(m2 > 0, m2 ** (params.r2 - 2.0), 0.0)
    v1 = params.mu1 * m1 ** (params.p1 - 2.0) + params.r1 * params.beta * c1 * m2**params.r2
    v2 = params.mu2 * m2 ** (params.p2 - 2.0) + params.r2 * params.beta * m1**params.r1 * c2
    return v1, v2


def _nonlinear_half(params: ModelParams, state: Pair, dt: float) -> Pair:
    v1, v2 = _rotation_rates(params, state)
    return Pair(
        Field(state.grid, state.first.values * np.exp(1j * (dt / 2) * v1)),
        Field(state.grid, state.second.values * np.exp(1j * (dt / 2) * v2)),
    )


def strang_step(params: ModelParams, state: Pair, dt: float) -> Pair:
    """Second-order step: nonlinear half, spectral linear full, nonlinear half."""
    state = _nonlinear_half(params, state, dt)
    phase = np.exp(-1j * dt * state.grid.k_squared())
    state = Pair(
        Field(state.grid, np.fft.ifftn(phase * np.fft.fftn(state.first.values))),
        Field(state.grid, np.fft.ifftn(phase * np.fft.fftn(state.second.values))),
    )
    state = _nonlinear_half(params, state, dt)
    if not (
        np.all(np.isfinite(state.first.values)) and np.all(np.isfinite(state.second.values))
    ):
        raise BlowupError("non-finite values during time step")
    return state


def run(
    params: ModelParams,
    initial: Pair,
    cfg: EvolveConfig,
    observer=None,
) -> StabilityTrace:
    """Integrate to t_final, recording conserved quantities at sampling times.

    The observer, when given, is called as observer(t, state) at each
    recorded time and its return value is stored as the orbit distance
    (zero otherwise).
    """
    trace = StabilityTrace()
    state = initial
    steps = int(round(cfg.t_final / cfg.dt))

    def record(t, state):
        trace.times.append(t)
        trace.mass1.append(g.mass(state.first))
        trace.mass2.append(g.mass(state.second))
        trace.energy.append(mdl.energy(params, state).total)
        trace.orbit_distance.append(observer(t, state) if observer else 0.0)

    record(0.0, state)
    try:
        for s in range(1, steps + 1):
            state = strang_step(params, state, cfg.dt)
            if s % cfg.record_every == 0 or s == steps:
                record(s * cfg.dt, state)
    except BlowupError as err:
        trace.completed = False
        err.t = trace.times[-1] if trace.times else 0.0
        err.trace = trace
        raise
    trace.final_state = state
    return trace


def orbit_distance(reference, state: Pair) -> float:
    """Translation- and phase-minimized H1 distance to the reference minimizer.

    The infimum over the full set of minimizers is approximated from above
    by the symmetry orbit of this single reference.
    """
    ref = reference.state if isinstance(reference, GroundState) else reference
    return align.aligned_distance(ref, state)


def perturbed_initial(
    params: ModelParams, reference: Pair, delta: float, seed: int
) -> Pair:
    """Reference plus a seeded smooth field of H1 size delta per component,
    rescaled back onto the constraint set."""
    spec = reference.grid
    rng = np.random.default_rng(seed)
    comps = []
    k2 = spec.k_squared()
    kc2 = (6 * 2 * np.pi / spec.extent) ** 2
    for f, a in ((reference.first, params.a1), (reference.second, params.a2)):
        if a == 0 or delta == 0:
            comps.append(f)
            continue
        noise = rng.standard_normal(spec.shape) + 1j * rng.standard_normal(spec.shape)
        smooth = np.fft.ifftn(np.fft.fftn(noise) * np.exp(-k2 / kc2))
        pert = Field(spec, smooth)
        size = np.sqrt(g.h1_norm_sq(pert))
        pert = Field(spec, pert.values * (delta / size))
        comps.append(g.scale_to_mass(Field(spec, f.values + pert.values), a))
    return Pair(*comps)


def stability_experiment(
    params: ModelParams, reference: GroundState, cfg: EvolveConfig
) -> StabilityTrace:
    """Perturb the minimizer, evolve, and track the distance to its orbit."""
    if not reference.converged:
        raise ValueError("stability experiment needs a converged reference")
    initial = perturbed_initial(
        params, reference.state, cfg.perturbation_size, cfg.seed
    )

    def observer(t, state):
        return orbit_distance(reference, state)

    try:
        return run(params, initial, cfg, observer=observer)
    except BlowupError as err:
        return err.trace
