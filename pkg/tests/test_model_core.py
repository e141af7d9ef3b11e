import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigraph import (
    InvalidParamsError,
    ModelParams,
    RegimeViolationError,
    UnachievableError,
    b_vector,
    beta,
    beta_from_b1,
    cross_moment_ratio,
    cross_moment_ratio_values,
    diagnostics,
    edge_prob,
    exact_quantities,
    expected_isolated,
    expected_isolated_from_b,
    group_edge_prob,
    no_overlap_ratio,
    pairwise_edge_prob,
    ring_sizes_for,
    solve_k1,
)
from rigraph import exact
from rigraph.model_core import AdvisoryBounds
from rigraph.oracle import enumerate_pair_prob

from conftest import small_params


# ---------------------------------------------------------------- params

class TestModelParams:
    def test_renormalizes_within_tolerance(self):
        p = ModelParams(n=2, a=(0.5, 0.5 + 4e-10), K=(1, 1), P=3)
        assert math.isclose(sum(p.a), 1.0, abs_tol=1e-15)

    def test_rejects_bad_sum(self):
        with pytest.raises(InvalidParamsError):
            ModelParams(n=2, a=(0.4, 0.4), K=(1, 1), P=3)

    def test_rejects_nonpositive_weights(self):
        with pytest.raises(InvalidParamsError):
            ModelParams(n=2, a=(1.2, -0.2), K=(1, 1), P=3)

    def test_rejects_decreasing_K_instead_of_sorting(self):
        with pytest.raises(InvalidParamsError):
            ModelParams(n=2, a=(0.5, 0.5), K=(2, 1), P=3)

    def test_rejects_K_outside_pool(self):
        with pytest.raises(InvalidParamsError):
            ModelParams(n=2, a=(1.0,), K=(4,), P=3)
        with pytest.raises(InvalidParamsError):
            ModelParams(n=2, a=(1.0,), K=(0,), P=3)

    def test_rejects_length_mismatch(self):
        with pytest.raises(InvalidParamsError):
            ModelParams(n=2, a=(0.5, 0.5), K=(1,), P=3)

    def test_fingerprint_distinguishes(self):
        p1 = ModelParams(n=2, a=(0.5, 0.5), K=(1, 2), P=5)
        p2 = ModelParams(n=2, a=(0.5, 0.5), K=(1, 2), P=6)
        assert p1.fingerprint() == ModelParams(n=2, a=(0.5, 0.5), K=(1, 2), P=5).fingerprint()
        assert p1.fingerprint() != p2.fingerprint()


# ---------------------------------------------------------------- no_overlap_ratio

class TestNoOverlapRatio:
    def test_worked_value(self):
        # 30 of the C(5,2)^2 = 100 ordered subset pairs are disjoint
        assert no_overlap_ratio(5, 2, 2) == pytest.approx(0.3, abs=1e-12)
        assert 1 - enumerate_pair_prob(5, 2, 2) == Fraction(3, 10)

    def test_empty_set_never_intersects(self):
        assert no_overlap_ratio(5, 0, 3) == 1.0
        assert no_overlap_ratio(5, 3, 0) == 1.0

    def test_zero_when_no_room(self):
        assert no_overlap_ratio(4, 3, 2) == 0.0

    def test_rejects_oversized_arguments(self):
        with pytest.raises(InvalidParamsError):
            no_overlap_ratio(4, 5, 1)
        with pytest.raises(InvalidParamsError):
            no_overlap_ratio(4, 1, 5)
        with pytest.raises(InvalidParamsError):
            no_overlap_ratio(4, -1, 2)

    def test_exhaustive_against_exact_rationals(self):
        # every 0 <= Ki, Kj <= P <= 60, float vs arbitrary precision
        for P in range(1, 61):
            for Ki in range(P + 1):
                for Kj in range(P + 1):
                    got = no_overlap_ratio(P, Ki, Kj)
                    want = exact.no_overlap_ratio(P, Ki, Kj)
                    if want == 0:
                        assert got == 0.0
                    else:
                        assert abs(got - float(want)) <= 1e-12 * float(want)
                    # symmetry is exact in floating point by construction
                    assert got == no_overlap_ratio(P, Kj, Ki)


# ---------------------------------------------------------------- edge probabilities

WORKED = ModelParams(n=2, a=(0.5, 0.5), K=(1, 2), P=5)


class TestEdgeProbabilities:
    def test_pairwise_worked_values(self):
        p22 = ModelParams(n=2, a=(0.5, 0.5), K=(2, 2), P=5)
        assert pairwise_edge_prob(p22, 1, 2) == pytest.approx(0.7, abs=1e-12)
        assert float(enumerate_pair_prob(5, 2, 2)) == pytest.approx(0.7, abs=1e-15)
        assert pairwise_edge_prob(WORKED, 1, 1) == pytest.approx(0.2, abs=1e-12)
        assert float(enumerate_pair_prob(5, 1, 1)) == pytest.approx(0.2, abs=1e-15)

    def test_full_ring_always_intersects(self):
        p = ModelParams(n=2, a=(0.5, 0.5), K=(1, 5), P=5)
        assert pairwise_edge_prob(p, 1, 2) == 1.0
        assert pairwise_edge_prob(p, 2, 2) == 1.0

    def test_index_bounds(self):
        with pytest.raises(InvalidParamsError):
            pairwise_edge_prob(WORKED, 0, 1)
        with pytest.raises(InvalidParamsError):
            group_edge_prob(WORKED, 3)

    def test_group_edge_prob_worked_values(self):
        # b_1 = 0.5*0.2 + 0.5*0.4, b_2 = 0.5*0.4 + 0.5*0.7, with the p_ij
        # cross-checked against the subset-pair enumeration oracle
        assert float(enumerate_pair_prob(5, 1, 2)) == pytest.approx(0.4, abs=1e-15)
        assert float(enumerate_pair_prob(5, 2, 2)) == pytest.approx(0.7, abs=1e-15)
        assert group_edge_prob(WORKED, 1) == pytest.approx(0.3, abs=1e-12)
        assert group_edge_prob(WORKED, 2) == pytest.approx(0.55, abs=1e-12)

    def test_single_group_b_equals_p11(self):
        p = ModelParams(n=4, a=(1.0,), K=(2,), P=6)
        assert group_edge_prob(p, 1) == pytest.approx(pairwise_edge_prob(p, 1, 1), abs=1e-15)

    def test_edge_prob_worked_value(self):
        assert edge_prob(WORKED) == pytest.approx(0.425, abs=1e-12)

    def test_edge_prob_single_group(self):
        p = ModelParams(n=4, a=(1.0,), K=(2,), P=6)
        assert edge_prob(p) == pytest.approx(pairwise_edge_prob(p, 1, 1), abs=1e-15)

    @given(small_params())
    @settings(max_examples=60, deadline=None)
    def test_edge_prob_identity(self, params):
        mix = math.fsum(ai * group_edge_prob(params, i + 1) for i, ai in enumerate(params.a))
        assert abs(edge_prob(params) - mix) <= 1e-12

    @given(small_params())
    @settings(max_examples=60, deadline=None)
    def test_p_matrix_symmetric_and_b_monotone(self, params):
        m = params.m
        for i in range(1, m + 1):
            for j in range(1, m + 1):
                assert pairwise_edge_prob(params, i, j) == pairwise_edge_prob(params, j, i)
        b = b_vector(params)
        assert all(b[i] <= b[i + 1] + 1e-15 for i in range(m - 1))

    @given(small_params(), st.data())
    @settings(max_examples=60, deadline=None)
    def test_p_monotone_under_ring_growth(self, params, data):
        # growing one ring (keeping the vector valid) never lowers any p_ij
        j = data.draw(st.integers(0, params.m - 1))
        K = list(params.K)
        upper = params.P if j == params.m - 1 else K[j + 1]
        if K[j] + 1 > upper:
            return
        K[j] += 1
        bigger = ModelParams(n=params.n, a=params.a, K=tuple(K), P=params.P)
        for r in range(1, params.m + 1):
            for c in range(1, params.m + 1):
                assert pairwise_edge_prob(bigger, r, c) >= pairwise_edge_prob(params, r, c) - 1e-15


# ---------------------------------------------------------------- beta

class TestBeta:
    def test_zero_at_critical_point(self):
        n = 50
        assert beta_from_b1(n, math.log(n) / n) == pytest.approx(0.0, abs=1e-12)

    def test_worked_value_high_precision(self):
        import mpmath

        want = float(mpmath.mpf(10) * mpmath.mpf("0.3") - mpmath.log(10))
        assert beta_from_b1(10, 0.3) == pytest.approx(want, abs=1e-9)
        assert beta_from_b1(10, 0.3) == pytest.approx(0.697415, abs=1e-6)

    def test_empty_edge_limit(self):
        assert beta_from_b1(100, 0.0) == -math.log(100)

    def test_rejects_small_n(self):
        with pytest.raises(InvalidParamsError):
            beta_from_b1(1, 0.5)
        with pytest.raises(InvalidParamsError):
            beta(ModelParams(n=1, a=(1.0,), K=(1,), P=2))

    def test_params_level_matches_b1(self):
        p = ModelParams(n=20, a=(0.5, 0.5), K=(2, 3), P=30)
        assert beta(p) == pytest.approx(20 * b_vector(p)[0] - math.log(20), abs=1e-14)

    def test_strictly_increasing_in_b1(self):
        assert beta_from_b1(30, 0.2) < beta_from_b1(30, 0.20001)


# ---------------------------------------------------------------- isolation moments

class TestExpectedIsolated:
    def test_worked_instance_matches_exact_path(self):
        p = ModelParams(n=3, a=(0.5, 0.5), K=(1, 2), P=5)
        e_j, e_i = expected_isolated(p)
        # exact rational: 3*(0.5*(1-0.3)^2 + 0.5*(1-0.55)^2) = 831/800
        want_j, want_i = exact.expected_isolated(p)
        assert want_j == Fraction(831, 800)
        assert e_j == pytest.approx(float(want_j), abs=1e-12)
        assert e_i == pytest.approx(float(want_i), abs=1e-12)

    def test_zero_when_edges_certain(self):
        p = ModelParams(n=5, a=(1.0,), K=(4,), P=4)
        e_j, e_i = expected_isolated(p)
        assert e_j == 0.0 and e_i == 0.0

    @given(small_params())
    @settings(max_examples=60, deadline=None)
    def test_group1_part_never_exceeds_total(self, params):
        e_j, e_i = expected_isolated(params)
        assert 0.0 <= e_i <= e_j + 1e-15
        assert e_j <= params.n

    def test_convergence_toward_a1_at_fixed_beta(self):
        # along b_1 = ln(n)/n the group-1 moment approaches a_1 monotonically
        a1 = 0.5
        diffs = []
        for n in (10**3, 10**4, 10**5, 10**6):
            b1 = math.log(n) / n
            _, e_i = expected_isolated_from_b(n, (a1, a1), (b1, b1))
            diffs.append(abs(e_i - a1))
        assert all(diffs[i + 1] < diffs[i] for i in range(len(diffs) - 1))


# ---------------------------------------------------------------- cross moment

class TestCrossMomentRatio:
    def test_zero_ring_gives_unit_ratio(self):
        assert cross_moment_ratio_values(5, 10, (1.0,), (0,)) == pytest.approx(1.0, abs=1e-15)

    def test_power_one_at_n3(self):
        p = ModelParams(n=3, a=(0.5, 0.5), K=(2, 3), P=12)
        base = float(exact.cross_moment_base(p))
        assert cross_moment_ratio(p) == pytest.approx(base, rel=1e-12)

    def test_regime_violation(self):
        p = ModelParams(n=5, a=(1.0,), K=(3,), P=5)
        with pytest.raises(RegimeViolationError):
            cross_moment_ratio(p)

    def test_rejects_small_n(self):
        with pytest.raises(InvalidParamsError):
            cross_moment_ratio(ModelParams(n=2, a=(1.0,), K=(1,), P=4))

    @given(small_params(min_n=3))
    @settings(max_examples=40, deadline=None)
    def test_matches_exact_base_power(self, params):
        if 2 * params.K[0] > params.P:
            with pytest.raises(RegimeViolationError):
                cross_moment_ratio(params)
            return
        base = exact.cross_moment_base(params)
        if base == 0:
            assert cross_moment_ratio(params) == 0.0
        else:
            want = float(base) ** (params.n - 2)
            assert cross_moment_ratio(params) == pytest.approx(want, rel=1e-9)


# ---------------------------------------------------------------- solve_k1

class TestSolveK1:
    def test_boundary_returns_full_pool(self):
        # P=2 keeps b_1 strictly below 1 until K=P, so only the full pool
        # reaches the top deviation
        n, P, a = 50, 2, (1.0,)
        top = beta(ModelParams(n=n, a=a, K=(P,), P=P))
        assert solve_k1(n, P, a, (1.0,), top) == (P,)

    def test_unachievable(self):
        n, P, a = 50, 6, (1.0,)
        top = beta(ModelParams(n=n, a=a, K=(P,), P=P))
        with pytest.raises(UnachievableError):
            solve_k1(n, P, a, (1.0,), top + 1.0)

    @pytest.mark.parametrize("target", [-3.0, -1.0, 0.0, 1.5, 4.0])
    def test_linear_scan_oracle_small_pool(self, target):
        n, P, a, ratios = 120, 60, (0.6, 0.4), (1.0, 1.5)

        def beta_at(k1):
            return beta(ModelParams(n=n, a=a, K=ring_sizes_for(k1, ratios, P), P=P))

        want = next((k1 for k1 in range(1, P + 1) if beta_at(k1) >= target), None)
        if want is None:
            with pytest.raises(UnachievableError):
                solve_k1(n, P, a, ratios, target)
        else:
            assert solve_k1(n, P, a, ratios, target) == ring_sizes_for(want, ratios, P)

    def test_critical_threshold_instance(self):
        # smallest K with b_1(K-1) < ln(1000)/1000 <= b_1(K)
        n, P = 1000, 10000
        K = solve_k1(n, P, (1.0,), (1.0,), 0.0)
        crit = math.log(n) / n

        def b1(k):
            return b_vector(ModelParams(n=n, a=(1.0,), K=(k,), P=P))[0]

        assert b1(K[0]) >= crit
        assert b1(K[0] - 1) < crit

    def test_monotone_in_target(self):
        n, P, a, ratios = 200, 100, (1.0,), (1.0,)
        ks = [solve_k1(n, P, a, ratios, t)[0] for t in (-5.0, -1.0, 0.0, 2.0)]
        assert ks == sorted(ks)

    def test_ratio_validation(self):
        with pytest.raises(InvalidParamsError):
            solve_k1(10, 20, (0.5, 0.5), (2.0, 1.0), 0.0)  # first ratio must be 1
        with pytest.raises(InvalidParamsError):
            solve_k1(10, 20, (0.5, 0.5), (1.0, 0.5), 0.0)  # decreasing
        with pytest.raises(InvalidParamsError):
            solve_k1(10, 20, (0.5, 0.5), (1.0,), 0.0)  # length mismatch
        with pytest.raises(InvalidParamsError):
            solve_k1(10, 20, (0.5, 0.5), (1.0, 2.0), math.inf)

    def test_ring_sizes_round_half_up(self):
        assert ring_sizes_for(3, (1.0, 1.5), 100) == (3, 5)  # 4.5 rounds up
        assert ring_sizes_for(2, (1.0, 2.0), 3) == (2, 3)  # clamped to P


# ---------------------------------------------------------------- diagnostics

class TestDiagnostics:
    def test_clean_instance_has_no_flags(self):
        # P = 2n, small ring, near-critical deviation: inside every default bound
        n = 200
        d = diagnostics(ModelParams(n=n, a=(1.0,), K=(3,), P=2 * n))
        assert d.flags == ()
        assert d.p_over_n == 2.0

    def test_each_flag_triggers(self):
        small_pool = diagnostics(ModelParams(n=100, a=(1.0,), K=(1,), P=50))
        assert "pool_growth" in small_pool.flags
        big_ring = diagnostics(ModelParams(n=10, a=(1.0,), K=(10,), P=100))
        assert "ring_size" in big_ring.flags
        assert "beta_drift" in big_ring.flags  # K=10, P=100 is far supercritical

    def test_bounds_are_configuration(self):
        loose = AdvisoryBounds(min_pool_per_vertex=0.0, max_ring_sq_per_pool=10.0, max_beta_drift=1e9)
        d = diagnostics(ModelParams(n=10, a=(1.0,), K=(10,), P=100), bounds=loose)
        assert d.flags == ()

    def test_yagan_c_relation(self):
        p = ModelParams(n=400, a=(0.5, 0.5), K=(2, 4), P=800)
        d = diagnostics(p)
        assert d.yagan_c == pytest.approx(400 * b_vector(p)[0] / math.log(400), rel=1e-14)
        assert d.beta_over_ln_n == pytest.approx(beta(p) / math.log(400), rel=1e-12)


# ---------------------------------------------------------------- exact_quantities

class TestExactQuantities:
    def test_worked_instance(self):
        q = exact_quantities(WORKED)
        assert q.edge_prob == pytest.approx(0.425, abs=1e-12)
        assert q.b == pytest.approx((0.3, 0.55), abs=1e-12)
        assert q.p[0][1] == q.p[1][0]
        assert q.cross_moment_ratio is None  # n=2 < 3
        assert q.expected_isolated == pytest.approx(2 * (1 - 0.425), abs=1e-12)

    def test_cross_moment_included_when_defined(self):
        p = ModelParams(n=10, a=(0.5, 0.5), K=(2, 3), P=20)
        q = exact_quantities(p)
        assert q.cross_moment_ratio == pytest.approx(cross_moment_ratio(p), rel=1e-15)

    @given(small_params())
    @settings(max_examples=30, deadline=None)
    def test_probability_ranges(self, params):
        q = exact_quantities(params)
        for row in q.p:
            for v in row:
                assert 0.0 <= v <= 1.0
        assert all(0.0 <= bi <= 1.0 for bi in q.b)
        assert 0.0 <= q.edge_prob <= 1.0
