import numpy as np
import pytest

from nlslab import grid as g
from nlslab import minimizer as mz
from nlslab import model as mdl
from nlslab.grid import Field, GridSpec, Pair


def soliton_field(spec: GridSpec, mu: float, a: float) -> Field:
    """Closed-form 1D soliton A sech(Bx) for p=4: A^2 = 2B^2/mu, B = mu*a/4."""
    assert spec.dim == 1
    B = mu * a / 4
    A = np.sqrt(2 * B**2 / mu)
    x = spec.axis_coords()
    return Field(spec, (A / np.cosh(B * x)).astype(complex))


def gaussian_field(spec: GridSpec, width: float = 1.0, center=None, amp: float = 1.0) -> Field:
    r2 = np.zeros(spec.shape)
    for d, x in enumerate(spec.coords()):
        c = 0.0 if center is None else center[d]
        r2 = r2 + (x - c) ** 2
    return Field(spec, (amp * np.exp(-r2 / (2 * width**2))).astype(complex))


def truncate_tail(f: Field, rel: float = 1e-16) -> Field:
    """Zero out entries below rel * max|f| so smooth bumps get compact support."""
    amp = np.abs(f.values)
    cut = rel * float(np.max(amp))
    return Field(f.grid, np.where(amp >= cut, f.values, 0.0))


def compact_random_field(spec: GridSpec, rng, frac: float = 0.25) -> Field:
    """Smooth random bump supported on a central box of the grid (exact zeros outside)."""
    n = spec.points_per_dim
    vals = np.zeros(spec.shape)
    lo = int(n * (0.5 - frac / 2))
    hi = int(n * (0.5 + frac / 2))
    inner = tuple(slice(lo, hi) for _ in range(spec.dim))
    m = hi - lo
    bump = rng.random((m,) * spec.dim)
    window = np.hanning(m)
    for ax in range(spec.dim):
        shape = [1] * spec.dim
        shape[ax] = m
        bump = bump * window.reshape(shape)
    vals[inner] = bump
    return Field(spec, vals)


@pytest.fixture(scope="session")
def bench_grid():
    """1D benchmark box: domain [-32, 32), 512 points."""
    return GridSpec(dim=1, extent=64.0, points_per_dim=512)


@pytest.fixture(scope="session")
def bench_params():
    """Symmetric 1D benchmark: mu=1, p=4, r=2, beta=1, unit masses."""
    return mdl.ModelParams(
        dim=1, mu1=1.0, mu2=1.0, p1=4.0, p2=4.0, r1=2.0, r2=2.0, beta=1.0, a1=1.0, a2=1.0
    )


@pytest.fixture(scope="session")
def single_params(bench_params):
    """Single-component benchmark: second mass removed."""
    return bench_params.with_masses(1.0, 0.0)


@pytest.fixture(scope="session")
def bench_ground(bench_params, bench_grid):
    gs = mz.solve(bench_params, bench_grid)
    assert gs.converged
    return gs


@pytest.fixture(scope="session")
def single_ground(single_params, bench_grid):
    gs = mz.solve(single_params, bench_grid)
    assert gs.converged
    return gs


def random_state(spec: GridSpec, rng, masses=(1.0, 1.0)) -> Pair:
    """Random smooth pair at prescribed masses (low-pass filtered noise)."""
    comps = []
    k2 = spec.k_squared()
    kc2 = (6 * 2 * np.pi / spec.extent) ** 2
    for a in masses:
        noise = rng.standard_normal(spec.shape) + 1j * rng.standard_normal(spec.shape)
        smooth = np.fft.ifftn(np.fft.fftn(noise) * np.exp(-k2 / kc2))
        comps.append(g.scale_to_mass(Field(spec, smooth), a))
    return Pair(*comps)
