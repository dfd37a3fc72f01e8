"""
Prox Tests
Univariate closed forms, isotonic block merging and the sorted prox reduction
"""

import numpy as np
import pytest
from scipy.optimize import isotonic_regression, minimize

from plse.exceptions import DimensionMismatchError, PenaltyDomainError, UnsortedInputError
from plse.penalties import L1Penalty, MCPPenalty, PenaltySpec, SCADPenalty, SpikeSlabPenalty
from plse.services.prox_service import (
    iso_prox,
    iso_prox_mcp,
    prox_univariate,
    sorted_prox,
    sorted_prox_objective,
)

FAMILIES = [
    L1Penalty(),
    MCPPenalty(kappa_bar=1.0 / 3.0),
    SCADPenalty(kappa_bar=0.5),
    SpikeSlabPenalty(lambda_hi=2.0, lambda_lo=0.5, r_n=2.0, weight_hi=0.3),
]


def random_monotone(rng, p, scale=3.0):
    return np.sort(np.abs(rng.normal(scale=scale, size=p)))[::-1]


def random_levels(rng, p):
    return np.sort(rng.uniform(0.1, 2.0, size=p))[::-1]


def iso_objective(b, x, levels, family, step, kappa):
    return float(np.sum(0.5 * (x - b) ** 2 + step * family.convexified_value(b, levels, kappa)))


class TestProxUnivariate:
    """Closed forms and the 1-D convex solve"""

    def test_zero_input(self):
        """x = 0 maps to 0 for every family"""
        for family in FAMILIES:
            assert prox_univariate(0.0, family, 1.0, 1.0, family.kappa_bar) == 0.0

    def test_mcp_examples(self):
        """min{(|x| - t lambda)_+, |x|/(1 + t kappa)}"""
        mcp = MCPPenalty(kappa_bar=1.0 / 3.0)
        assert prox_univariate(1.5, mcp, 1.0, 1.0, 1.0 / 3.0) == pytest.approx(0.5, abs=1e-12)
        assert prox_univariate(6.0, mcp, 1.0, 1.0, 1.0 / 3.0) == pytest.approx(4.5, abs=1e-12)
        assert prox_univariate(-6.0, mcp, 1.0, 1.0, 1.0 / 3.0) == pytest.approx(-4.5, abs=1e-12)

    def test_non_convex_subproblem_rejected(self):
        """convexify_kappa below kappa_bar is a domain error"""
        with pytest.raises(PenaltyDomainError):
            prox_univariate(1.0, MCPPenalty(kappa_bar=0.5), 1.0, 1.0, 0.1)

    def test_scad_pieces(self):
        """Flat, decaying and free pieces of the SCAD prox with lambda = 1, kappa = 1/2, t = 1"""
        scad = SCADPenalty(kappa_bar=0.5)
        assert prox_univariate(0.8, scad, 1.0, 1.0, 0.5) == 0.0
        assert prox_univariate(2.5, scad, 1.0, 1.0, 0.5) == pytest.approx(1.0, abs=1e-12)
        assert prox_univariate(3.5, scad, 1.0, 1.0, 0.5) == pytest.approx(2.0, abs=1e-12)
        assert prox_univariate(-6.0, scad, 1.0, 1.0, 0.5) == pytest.approx(-4.0, abs=1e-12)

    @pytest.mark.parametrize("family", FAMILIES[2:], ids=lambda f: f.kind.value)
    def test_vector_coordinates_match_scalar_solve(self, family, rng):
        """iso_prox on a monotone input with no merging equals the coordinate-wise prox"""
        for _ in range(100):
            x = random_monotone(rng, 8)
            lam = rng.uniform(0.1, 2.0)
            levels = np.full(8, lam)
            step = rng.uniform(0.2, 2.0)
            expected = [prox_univariate(value, family, lam, step, family.kappa_bar) for value in x]
            assert np.allclose(iso_prox(x, levels, family, step, family.kappa_bar), expected, atol=1e-10)

    @pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.kind.value)
    def test_matches_grid_oracle(self, family, rng, grid_oracle):
        """Agrees with grid search plus refinement"""
        for _ in range(200):
            x = rng.normal(scale=3.0)
            lam = rng.uniform(0.0, 2.0)
            step = rng.uniform(0.1, 2.0)
            kappa = family.kappa_bar + rng.uniform(0.0, 0.5)

            def objective(b):
                return 0.5 * (x - b) ** 2 + step * np.asarray(family.convexified_value(b, np.full(np.shape(b), lam), kappa))

            expected = grid_oracle(objective, -abs(x) - 1.0, abs(x) + 1.0)
            assert prox_univariate(x, family, lam, step, kappa) == pytest.approx(expected, abs=1e-4)


class TestIsoProx:
    """Isotonic proximal mapping"""

    def test_monotone_solution_unchanged(self):
        """Per-coordinate soft thresholds already non-increasing"""
        x = np.array([5.0, 3.0, 2.0])
        b = iso_prox(x, np.array([1.0, 1.0, 1.0]), L1Penalty(), 1.0, 0.0)
        assert np.allclose(b, [4.0, 2.0, 1.0])

    def test_l1_example(self):
        """x = (3, 1) with levels (2, 1) gives (1, 0)"""
        b = iso_prox(np.array([3.0, 1.0]), np.array([2.0, 1.0]), L1Penalty(), 1.0, 0.0)
        assert np.allclose(b, [1.0, 0.0])

    def test_unsorted_input_rejected(self):
        with pytest.raises(UnsortedInputError):
            iso_prox(np.array([1.0, 3.0]), np.array([2.0, 1.0]), L1Penalty(), 1.0, 0.0)
        with pytest.raises(UnsortedInputError):
            iso_prox_mcp(np.array([3.0, 1.0]), np.array([1.0, 2.0]), 1.0, 0.5)

    @pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.kind.value)
    def test_output_monotone_and_nonnegative(self, family, rng):
        """b_1 >= ... >= b_p >= 0 exactly"""
        for _ in range(200):
            p = int(rng.integers(1, 12))
            b = iso_prox(random_monotone(rng, p), random_levels(rng, p), family, rng.uniform(0.2, 2.0), family.kappa_bar)
            assert np.all(np.diff(b) <= 0)
            assert np.all(b >= 0)

    @pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.kind.value)
    def test_beats_naive_clipping(self, family, rng):
        """Objective no worse than clipping the per-coordinate solution to monotone"""
        for _ in range(200):
            p = int(rng.integers(2, 10))
            x, levels, step = random_monotone(rng, p), random_levels(rng, p), rng.uniform(0.2, 2.0)
            kappa = family.kappa_bar
            separate = np.array([prox_univariate(v, family, lam, step, kappa) for v, lam in zip(x, levels)])
            clipped = np.minimum.accumulate(separate)
            b = iso_prox(x, levels, family, step, kappa)
            assert iso_objective(b, x, levels, family, step, kappa) <= iso_objective(
                clipped, x, levels, family, step, kappa
            ) + 1e-12


class TestIsoProxMCP:
    """Block values from the MCP fixed-point equation"""

    def test_single_block_example(self):
        """x = (4, 4), t = 1, kappa = 1/3, lambda = 1 gives b = 3"""
        b = iso_prox_mcp(np.array([4.0, 4.0]), np.array([1.0, 1.0]), 1.0, 1.0 / 3.0)
        assert np.allclose(b, [3.0, 3.0], atol=1e-12)

    def test_zero_concavity_is_slope_prox(self, rng):
        """kappa = 0: isotonic fit of x - t lambda, clipped at zero"""
        for _ in range(200):
            p = int(rng.integers(1, 15))
            x, levels, step = random_monotone(rng, p), random_levels(rng, p), rng.uniform(0.2, 2.0)
            expected = np.maximum(isotonic_regression(x - step * levels, increasing=False).x, 0.0)
            assert np.allclose(iso_prox_mcp(x, levels, step, 0.0), expected, atol=1e-10)

    def test_matches_generic_merging(self, rng):
        """Fixed-point block values agree with the generic block solve"""
        for _ in range(300):
            p = int(rng.integers(1, 12))
            kappa = rng.uniform(0.0, 1.0)
            x, levels, step = random_monotone(rng, p), random_levels(rng, p), rng.uniform(0.2, 2.0)
            generic = iso_prox(x, levels, MCPPenalty(kappa_bar=kappa), step, kappa)
            assert np.allclose(iso_prox_mcp(x, levels, step, kappa), generic, atol=1e-8)

    def test_blocks_satisfy_fixed_point(self, rng):
        """Each positive block solves b = sum(x - t lambda I) / sum(1 + t kappa - t kappa I)"""
        checked = 0
        for _ in range(300):
            p = int(rng.integers(2, 12))
            kappa = rng.uniform(0.05, 1.0)
            x, levels, step = random_monotone(rng, p, scale=1.0), random_levels(rng, p), rng.uniform(0.2, 2.0)
            b = iso_prox_mcp(x, levels, step, kappa)
            start = 0
            for end in range(1, p + 1):
                if end < p and b[end] == b[start]:
                    continue
                value = b[start]
                if value > 0:
                    inside = levels[start:end] > kappa * value
                    numer = np.sum(x[start:end] - step * levels[start:end] * inside)
                    denom = np.sum(1.0 + step * kappa - step * kappa * inside)
                    assert abs(value * denom - numer) <= 1e-10
                    checked += 1
                start = end
        assert checked > 0

    def test_matches_grid_dynamic_program(self, rng):
        """p = 5 against a monotone dynamic program over a 1e-3 grid"""
        for _ in range(20):
            kappa = rng.uniform(0.1, 1.0)
            family = MCPPenalty(kappa_bar=kappa)
            x, levels, step = random_monotone(rng, 5), random_levels(rng, 5), rng.uniform(0.2, 2.0)
            grid = np.arange(0.0, x[0] + 2e-3, 1e-3)
            cost = np.array(
                [
                    0.5 * (x[j] - grid) ** 2 + step * family.convexified_value(grid, np.full(grid.size, levels[j]), kappa)
                    for j in range(5)
                ]
            )
            # value[j, g]: best cost of ranks 1..j+1 with b_{j+1} = grid[g] and b_1 >= ... >= b_{j+1}
            value = cost.copy()
            for j in range(1, 5):
                value[j] += np.minimum.accumulate(value[j - 1][::-1])[::-1]
            index = [int(np.argmin(value[4]))]
            for j in range(3, -1, -1):
                index.append(index[-1] + int(np.argmin(value[j][index[-1]:])))
            expected = grid[index[::-1]]

            b = iso_prox_mcp(x, levels, step, kappa)
            assert np.allclose(b, expected, atol=5e-3)
            gap = iso_objective(b, x, levels, family, step, kappa) - iso_objective(expected, x, levels, family, step, kappa)
            assert gap <= 1e-12


class TestSortedProx:
    """Sign and sort reduction"""

    def test_l1_example(self):
        """x = (3, -1) with levels (2, 1) gives (1, 0)"""
        spec = PenaltySpec(family=L1Penalty(), levels=[2.0, 1.0])
        b = sorted_prox(np.array([3.0, -1.0]), spec, 1.0)
        assert np.allclose(b, [1.0, 0.0])
        assert not np.signbit(b[1])

    def test_constant_l1_is_soft_threshold(self, rng):
        x = rng.normal(scale=2.0, size=20)
        spec = PenaltySpec(family=L1Penalty(), levels=np.full(20, 0.8))
        expected = np.sign(x) * np.maximum(np.abs(x) - 0.4, 0.0)
        assert np.allclose(sorted_prox(x, spec, 0.5), expected, atol=1e-14)

    def test_zero_vector(self):
        spec = PenaltySpec(family=MCPPenalty(kappa_bar=0.5), levels=[2.0, 1.0, 0.5])
        assert np.array_equal(sorted_prox(np.zeros(3), spec, 1.0), np.zeros(3))

    def test_dimension_mismatch(self):
        spec = PenaltySpec(family=L1Penalty(), levels=[2.0, 1.0])
        with pytest.raises(DimensionMismatchError):
            sorted_prox(np.zeros(3), spec, 1.0)

    @pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.kind.value)
    def test_sign_and_order_preserved(self, family, rng):
        """sgn(b_j) = sgn(x_j) where b_j != 0 and |x_j| > |x_k| implies |b_j| >= |b_k|"""
        for _ in range(2500):
            p = int(rng.integers(1, 10))
            x = rng.normal(scale=2.0, size=p)
            spec = PenaltySpec(family=family, levels=random_levels(rng, p))
            b = sorted_prox(x, spec, rng.uniform(0.2, 2.0))
            nonzero = b != 0
            assert np.array_equal(np.sign(b[nonzero]), np.sign(x[nonzero]))
            bigger = np.abs(x)[:, None] > np.abs(x)[None, :]
            assert np.all((np.abs(b)[:, None] >= np.abs(b)[None, :])[bigger])

    @pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.kind.value)
    def test_sorted_output_equals_iso_prox(self, family, rng):
        """Sorting |prox(x)| gives iso_prox of the sorted |x|"""
        for _ in range(2500):
            p = int(rng.integers(1, 10))
            x = rng.normal(scale=2.0, size=p)
            levels = random_levels(rng, p)
            step = rng.uniform(0.2, 2.0)
            spec = PenaltySpec(family=family, levels=levels)
            b = sorted_prox(x, spec, step)
            iso = iso_prox(np.sort(np.abs(x))[::-1], levels, family, step, family.kappa_bar)
            assert np.allclose(np.sort(np.abs(b))[::-1], iso, atol=1e-10)

    def test_permutation_equivariance(self, rng):
        x = rng.normal(scale=2.0, size=7)
        spec = PenaltySpec(family=MCPPenalty(kappa_bar=0.4), levels=random_levels(rng, 7))
        order = rng.permutation(7)
        assert np.allclose(sorted_prox(x[order], spec, 0.7), sorted_prox(x, spec, 0.7)[order], atol=1e-14)

    @pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.kind.value)
    def test_nonexpansive(self, family, rng):
        """||prox(x) - prox(z)|| <= ||x - z||"""
        p = 6
        spec = PenaltySpec(family=family, levels=random_levels(rng, p))
        for _ in range(300):
            x, z = rng.normal(scale=2.0, size=p), rng.normal(scale=2.0, size=p)
            gap = np.linalg.norm(sorted_prox(x, spec, 1.0) - sorted_prox(z, spec, 1.0))
            assert gap <= np.linalg.norm(x - z) + 1e-12

    @pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.kind.value)
    def test_matches_two_dimensional_brute_force(self, family, rng):
        """
        p = 2 against a refined grid over the monotone cone

        The cone b_1 >= b_2 >= 0 is parametrized as b_2 = u, b_1 = u + v with
        u, v >= 0, so both faces lie on every grid.
        """
        for _ in range(10):
            x = rng.normal(scale=2.0, size=2)
            levels = random_levels(rng, 2)
            step = rng.uniform(0.3, 1.5)
            spec = PenaltySpec(family=family, levels=levels)
            kappa = spec.kappa_bar
            target = np.sort(np.abs(x))[::-1]

            def objective(u, v):
                high, low = u + v, u
                penalty = spec.rank_value(high, levels[0]) + spec.rank_value(low, levels[1])
                return 0.5 * ((high - target[0]) ** 2 + (low - target[1]) ** 2) + step * (
                    penalty + 0.5 * kappa * (high ** 2 + low ** 2)
                )

            width = 0.5 * (target[0] + 0.1)
            center = np.array([width, width])
            while width > 1e-7:
                axes = [np.linspace(max(0.0, c - width), c + width, 201) for c in center]
                gu, gv = np.meshgrid(*axes, indexing="ij")
                index = np.unravel_index(np.argmin(objective(gu, gv)), gu.shape)
                center = np.array([gu[index], gv[index]])
                width /= 10.0

            b = sorted_prox(x, spec, step)
            expected = np.array([center[0] + center[1], center[0]])
            assert np.allclose(np.sort(np.abs(b))[::-1], expected, atol=1e-4)

    @pytest.mark.parametrize("p", [2, 3, 4, 5])
    @pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.kind.value)
    def test_matches_constrained_minimization(self, family, p, rng):
        """
        Against L-BFGS-B over the monotone cone, 50 instances per (family, p)

        The cone b_1 >= ... >= b_p >= 0 is parametrized by nonnegative
        increments v with b_j = v_j + ... + v_p, so only bounds remain.
        """
        for _ in range(50):
            x = rng.normal(scale=2.0, size=p)
            levels = random_levels(rng, p)
            step = rng.uniform(0.3, 1.5)
            spec = PenaltySpec(family=family, levels=levels)
            kappa = spec.kappa_bar
            target = np.sort(np.abs(x))[::-1]

            def objective(v):
                b = np.cumsum(v[::-1])[::-1]
                value = 0.5 * np.sum((b - target) ** 2) + step * (
                    np.sum(spec.rank_value(b, levels)) + 0.5 * kappa * np.sum(b * b)
                )
                slope = b - target + step * (spec.rank_derivative(b, levels) + kappa * b)
                return value, np.cumsum(slope)

            start = np.append(-np.diff(target), target[-1])
            found = minimize(
                objective,
                start,
                jac=True,
                method="L-BFGS-B",
                bounds=[(0.0, None)] * p,
                options={"ftol": 1e-15, "gtol": 1e-12, "maxiter": 10000},
            )
            expected = np.cumsum(found.x[::-1])[::-1]

            b = sorted_prox(x, spec, step)
            assert np.allclose(np.sort(np.abs(b))[::-1], expected, atol=1e-4)
            assert sorted_prox_objective(b, x, spec, step) <= found.fun + 1e-9

    def test_objective_helper(self):
        """||b - x||^2/2 + t {Pen(b) + kappa ||b||^2/2}"""
        spec = PenaltySpec(family=MCPPenalty(kappa_bar=0.5), levels=[1.0, 1.0])
        b, x = np.array([1.0, 0.0]), np.array([2.0, 0.0])
        assert sorted_prox_objective(b, x, spec, 1.0) == pytest.approx(0.5 + 0.75 + 0.25)
