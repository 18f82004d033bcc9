import numpy as np
import pytest

from nlslab import grid as g
from nlslab import model as mdl
from nlslab.errors import WraparoundError, ZeroMassError
from nlslab.grid import Field, GridSpec, Pair

from conftest import gaussian_field, random_state, soliton_field


class TestModelParams:
    def test_valid_benchmark(self, bench_params):
        assert bench_params.critical_exponent == 6.0

    @pytest.mark.parametrize(
        "kw",
        [
            {"beta": 0.0},
            {"beta": -1.0},
            {"mu1": 0.0},
            {"p1": 2.0},
            {"p1": 6.0},  # p = 2 + 4/N excluded for N=1
            {"r1": 1.0},
            {"r1": 3.5, "r2": 2.6},  # r1 + r2 >= 6
            {"a1": -1.0},
            {"a1": 0.0},
        ],
    )
    def test_h0_rejections(self, kw):
        base = dict(dim=1, mu1=1.0, mu2=1.0, p1=4.0, p2=4.0, r1=2.0, r2=2.0, beta=1.0, a1=1.0, a2=1.0)
        base.update(kw)
        with pytest.raises(ValueError):
            mdl.ModelParams(**base)

    def test_zero_mass_flag(self, bench_params):
        p = bench_params.with_masses(1.0, 0.0)
        assert p.active == (True, False)
        with pytest.raises(ValueError):
            bench_params.with_masses(0.0, 0.0)

    def test_dim_dependent_bound(self):
        # p = 3.5 is fine in 1D but supercritical in 3D (2 + 4/3)
        mdl.ModelParams(dim=1, mu1=1, mu2=1, p1=3.5, p2=3.5, r1=1.5, r2=1.5, beta=1, a1=1, a2=1)
        with pytest.raises(ValueError):
            mdl.ModelParams(dim=3, mu1=1, mu2=1, p1=3.5, p2=3.5, r1=1.5, r2=1.5, beta=1, a1=1, a2=1)


class TestEnergy:
    def test_zero_pair(self, bench_params, bench_grid):
        eb = mdl.energy(bench_params, Pair.zero(bench_grid))
        assert eb.kinetic == eb.self1 == eb.self2 == eb.coupling == eb.total == 0.0

    def test_soliton_energy(self, single_params, bench_grid):
        # closed-form sech soliton: J = -mu^2 a^3 / 96
        u1 = soliton_field(bench_grid, mu=1.0, a=1.0)
        eb = mdl.energy(single_params, Pair(u1, Field.zero(bench_grid)))
        assert eb.total == pytest.approx(-1.0 / 96.0, abs=1e-6)

    def test_coupling_collapses_to_p4(self, bench_params, bench_grid):
        phi = gaussian_field(bench_grid, width=1.5)
        eb = mdl.energy(bench_params, Pair(phi, phi))
        assert eb.coupling == pytest.approx(
            bench_params.beta * g.lp_norm(phi, 4.0) ** 4, rel=1e-12
        )

    def test_breakdown_consistency(self, bench_params, bench_grid):
        rng = np.random.default_rng(0)
        state = random_state(bench_grid, rng)
        eb = mdl.energy(bench_params, state)
        assert eb.total == pytest.approx(eb.kinetic - eb.self1 - eb.self2 - eb.coupling, rel=1e-14)
        assert eb.kinetic >= 0 and eb.self1 >= 0 and eb.self2 >= 0 and eb.coupling >= 0

    def test_phase_invariance(self, bench_params, bench_grid):
        rng = np.random.default_rng(1)
        state = random_state(bench_grid, rng)
        for theta1, theta2 in ((0.4, -1.1), (2.2, 0.0)):
            rotated = Pair(
                Field(bench_grid, np.exp(1j * theta1) * state.first.values),
                Field(bench_grid, np.exp(1j * theta2) * state.second.values),
            )
            assert mdl.energy(bench_params, rotated).total == pytest.approx(
                mdl.energy(bench_params, state).total, rel=1e-14
            )

    def test_translation_invariance(self, bench_params, bench_grid):
        rng = np.random.default_rng(2)
        state = random_state(bench_grid, rng)
        moved = g.translate_pair(state, [37])
        assert mdl.energy(bench_params, moved).total == pytest.approx(
            mdl.energy(bench_params, state).total, rel=1e-12
        )

    def test_coercivity_along_dilation(self, bench_params, bench_grid):
        # mass-preserving dilation u_t(x) = t^(1/2) u(t x): kinetic grows as t^2
        def dilated(t):
            fine = gaussian_field(bench_grid, width=2.0 / t, amp=np.sqrt(t))
            return g.scale_to_mass(fine, 1.0)

        j1 = mdl.energy(bench_params, Pair(dilated(1), dilated(1))).total
        j8 = mdl.energy(bench_params, Pair(dilated(8), dilated(8))).total
        assert j8 > j1


class TestConstrainedGradient:
    def test_zero_pair(self, bench_params, bench_grid):
        out = mdl.constrained_gradient(bench_params, Pair.zero(bench_grid))
        assert not np.any(out.first.values)
        assert not np.any(out.second.values)

    def test_soliton_is_critical(self, single_params):
        # box large enough that the periodization kink of sech is negligible
        spec = GridSpec(dim=1, extent=128.0, points_per_dim=1024)
        u1 = soliton_field(spec, mu=1.0, a=1.0)
        state = Pair(u1, Field.zero(spec))
        grad = mdl.constrained_gradient(single_params, state)
        # gradient should equal lambda * u with lambda = -1/16
        defect = grad.first.values + (1.0 / 16.0) * u1.values
        norm = np.sqrt(np.sum(np.abs(defect) ** 2) * spec.cell_volume)
        assert norm < 1e-5 * np.sqrt(g.mass(u1))

    def test_directional_derivative(self, bench_params, bench_grid):
        rng = np.random.default_rng(3)
        eps = 1e-5
        for _ in range(5):
            state = random_state(bench_grid, rng)
            h = random_state(bench_grid, rng, masses=(0.1, 0.1))
            grad = mdl.constrained_gradient(bench_params, state)
            inner = (
                np.sum(
                    (grad.first.values * np.conj(h.first.values)).real
                    + (grad.second.values * np.conj(h.second.values)).real
                )
                * bench_grid.cell_volume
            )

            def shifted(s):
                return Pair(
                    Field(bench_grid, state.first.values + s * h.first.values),
                    Field(bench_grid, state.second.values + s * h.second.values),
                )

            fd = (
                mdl.energy(bench_params, shifted(eps)).total
                - mdl.energy(bench_params, shifted(-eps)).total
            ) / (2 * eps)
            assert fd == pytest.approx(inner, rel=1e-6)

    def test_fd_plateau_order(self, bench_params, bench_grid):
        # central differences show the expected O(eps^2) improvement
        rng = np.random.default_rng(4)
        state = random_state(bench_grid, rng)
        h = random_state(bench_grid, rng, masses=(0.05, 0.05))
        grad = mdl.constrained_gradient(bench_params, state)
        inner = (
            np.sum(
                (grad.first.values * np.conj(h.first.values)).real
                + (grad.second.values * np.conj(h.second.values)).real
            )
            * bench_grid.cell_volume
        )

        def fd(eps):
            def shifted(s):
                return Pair(
                    Field(bench_grid, state.first.values + s * h.first.values),
                    Field(bench_grid, state.second.values + s * h.second.values),
                )

            return (
                mdl.energy(bench_params, shifted(eps)).total
                - mdl.energy(bench_params, shifted(-eps)).total
            ) / (2 * eps)

        errs = [abs(fd(e) - inner) for e in (1e-3, 1e-4)]
        assert errs[1] < errs[0]


class TestMultipliers:
    def test_soliton_multiplier(self, single_params, bench_grid):
        u1 = soliton_field(bench_grid, mu=1.0, a=1.0)
        state = Pair(u1, Field.zero(bench_grid))
        lam = mdl.single_multiplier(single_params, state, 1)
        assert lam == pytest.approx(-1.0 / 16.0, abs=1e-5)

    def test_phase_rotation_invariance(self, bench_params, bench_grid):
        rng = np.random.default_rng(5)
        state = random_state(bench_grid, rng)
        l1, l2 = mdl.multipliers(bench_params, state)
        rotated = Pair(
            Field(bench_grid, np.exp(1.3j) * state.first.values),
            Field(bench_grid, np.exp(-0.7j) * state.second.values),
        )
        r1, r2 = mdl.multipliers(bench_params, rotated)
        assert r1 == pytest.approx(l1, rel=1e-13)
        assert r2 == pytest.approx(l2, rel=1e-13)

    def test_zero_mass_guard(self, bench_params, bench_grid):
        state = Pair(gaussian_field(bench_grid), Field.zero(bench_grid))
        with pytest.raises(ZeroMassError):
            mdl.multipliers(bench_params, state)

    def test_ground_state_consistency(self, bench_params, bench_ground):
        l1, l2 = mdl.multipliers(bench_params, bench_ground.state)
        assert l1 == pytest.approx(bench_ground.lambda1, abs=1e-10)
        assert l2 == pytest.approx(bench_ground.lambda2, abs=1e-10)


class TestGNCertificate:
    def test_exponents_1d_p4(self, bench_params, bench_ground):
        cert = mdl.gn_certificate(bench_params, bench_ground.state)
        assert cert.exponent1 == pytest.approx(1.0)
        assert cert.exponent2 == pytest.approx(1.0)
        # coupling exponent is q-independent: N (r1 + r2 - 2) / 2
        assert cert.coupling_exponent == pytest.approx(1.0, abs=1e-9)
        assert cert.coercive

    def test_q_is_admissible(self, bench_params):
        q = mdl.choose_q(bench_params)
        qc = q / (q - 1)
        assert bench_params.r1 * q > 2
        assert bench_params.r2 * qc > 2

    def test_q_bounded_interval(self):
        # r2 < 2 bounds q from above by 2/(2 - r2)
        params = mdl.ModelParams(
            dim=1, mu1=1, mu2=1, p1=4, p2=4, r1=2.0, r2=1.5, beta=1, a1=1, a2=1
        )
        q = mdl.choose_q(params)
        assert 2 / params.r1 < q < 2 / (2 - params.r2)

    def test_inequality_ratio_report(self, bench_params, bench_grid):
        # measured interpolation ratios stay bounded over random states
        rng = np.random.default_rng(6)
        ratios = []
        for _ in range(20):
            state = random_state(bench_grid, rng)
            cert = mdl.gn_certificate(bench_params, state)
            ratios.append(cert.lhs1 / max(cert.rhs_base1, 1e-300))
        assert max(ratios) < 10 * np.median(ratios) + 1.0

    def test_mass_mismatch_rejected(self, bench_params, bench_grid):
        state = Pair(gaussian_field(bench_grid), gaussian_field(bench_grid))
        with pytest.raises(ValueError):
            mdl.gn_certificate(bench_params, state)


@pytest.fixture(scope="module")
def wide_grid():
    return GridSpec(dim=1, extent=128.0, points_per_dim=1024)


class TestSplitting:
    def concentrated(self, spec, a=1.0, width=1.0):
        bump = gaussian_field(spec, width=width)
        f = g.scale_to_mass(bump, a)
        return Pair(f, f)

    def test_zero_w(self, bench_params, wide_grid):
        u = self.concentrated(wide_grid)
        rep = mdl.splitting_test(bench_params, u, Pair.zero(wide_grid), wide_grid.points_per_dim // 4)
        assert rep.energy_defect == pytest.approx(0.0, abs=1e-13)
        assert rep.coupling_defect == pytest.approx(0.0, abs=1e-14)

    def test_defect_decays(self, bench_params, wide_grid):
        # bumps wide enough that the near-separation defect is measurable
        u = self.concentrated(wide_grid, width=2.0)
        w = self.concentrated(wide_grid, a=0.8, width=2.0)
        n = wide_grid.points_per_dim
        near = mdl.splitting_test(bench_params, u, w, n // 8)
        far = mdl.splitting_test(bench_params, u, w, n // 4)
        assert far.energy_defect < near.energy_defect
        assert far.coupling_defect < near.coupling_defect

    def test_defect_small_at_quarter(self, bench_params, wide_grid):
        u = self.concentrated(wide_grid)
        w = self.concentrated(wide_grid, a=0.8)
        rep = mdl.splitting_test(bench_params, u, w, wide_grid.points_per_dim // 4)
        assert rep.energy_defect < 1e-8
        assert rep.coupling_defect < 1e-8

    def test_wraparound_guard(self, bench_params, wide_grid):
        u = self.concentrated(wide_grid)
        with pytest.raises(WraparoundError):
            mdl.splitting_test(bench_params, u, u, wide_grid.points_per_dim // 2 + 1)
