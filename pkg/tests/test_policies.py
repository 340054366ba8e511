import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uclbandit.environment import grid_graph, line_graph, shortest_paths
from uclbandit.inference import DiagonalBelief
from uclbandit.normal_quantile import DomainError
from uclbandit.policies import (
    SQRT_2PIE,
    BlockUCL,
    GraphicalBlockUCL,
    UclConfig,
    block_schedule,
    blocks_in_frame,
    boltzmann_probabilities,
    choose_deterministic,
    choose_stochastic,
    choose_ucb1,
    plan_goal_block,
    sample_weighted,
    softmax_weights,
    ucl_value,
    ucl_values,
)

CFG = UclConfig()


def belief(n=3, s2=1.0, s02=math.inf, mu0=0.0):
    return DiagonalBelief(np.full(n, mu0), s2, s02)


class TestConfig:
    def test_defaults(self):
        assert CFG.K == SQRT_2PIE
        assert CFG.alpha(1) == pytest.approx(1 / SQRT_2PIE)

    def test_exponent_two(self):
        assert UclConfig(credibility_exponent=2).alpha(3) == pytest.approx(1 / (SQRT_2PIE * 9))

    @pytest.mark.parametrize("kw", [{"K": 0.0}, {"credibility_exponent": 3}, {"temperature": -1.0},
                                    {"temperature": "hot"}])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            UclConfig(**kw)

    def test_alpha_guard(self):
        with pytest.raises(DomainError):
            UclConfig(K=0.5).alpha(1)


class TestUclValue:
    def test_unsampled_uninformative_is_inf(self):
        assert ucl_value(belief(), 0, 5, CFG) == math.inf

    def test_zero_std(self):
        b = belief(2)
        b.mean[:] = [3.0, 4.0]
        b.var[:] = 0.0
        for t in (1, 10, 1000):
            np.testing.assert_array_equal(ucl_values(b, t, CFG), [3.0, 4.0])

    def test_t1_example(self):
        b = belief(1)
        b.update(0, 10.0)
        assert ucl_value(b, 0, 1, CFG) == pytest.approx(10.6999773509978507, rel=1e-15)

    def test_t_below_one(self):
        with pytest.raises(DomainError):
            ucl_values(belief(), 0, CFG)

    @settings(max_examples=50)
    @given(st.integers(1, 10**6), st.floats(-50, 50), st.floats(0.1, 10))
    def test_exponent_two_dominates(self, t, m, s):
        b = belief(1, s2=s * s)
        b.update(0, m)
        assert ucl_value(b, 0, t, UclConfig(credibility_exponent=2)) >= ucl_value(b, 0, t, CFG)


class TestDeterministic:
    def test_all_unsampled_first_arm(self):
        assert choose_deterministic(belief(4), 1, CFG) == 0

    def test_unsampled_beats_sampled(self):
        b = belief(3)
        b.update(0, -5.0)
        assert choose_deterministic(b, 2, CFG) == 1

    def test_equal_means_larger_uncertainty_wins(self):
        b = DiagonalBelief(np.zeros(3), 1.0, 1.0)
        b.var[:] = [0.5, 1.0, 2.0]
        assert choose_deterministic(b, 5, CFG) == 2

    @given(st.lists(st.floats(-10, 10), min_size=2, max_size=30), st.floats(-1e3, 1e3))
    def test_shift_covariance(self, rewards, c):
        a, b = DiagonalBelief(np.zeros(3), 1.0, 4.0), DiagonalBelief(np.full(3, c), 1.0, 4.0)
        for t, r in enumerate(rewards, 1):
            i = choose_deterministic(a, t, CFG)
            j = choose_deterministic(b, t, CFG)
            assert i == j
            a.update(i, r)
            b.update(j, r + c)


class TestSoftmax:
    def test_symmetric(self):
        np.testing.assert_allclose(boltzmann_probabilities([1.0, 1.0], 5, 2.0), [0.5, 0.5])

    def test_t1_uniform(self):
        np.testing.assert_allclose(boltzmann_probabilities([1.0, 5.0, 2.0], 1, "cooling"), [1 / 3] * 3)

    def test_infinite_support(self):
        w = softmax_weights([1.0, math.inf, 3.0, math.inf], 7, "cooling")
        assert w == [0.0, 1.0, 0.0, 1.0]

    def test_zero_gap_is_argmax(self):
        w = softmax_weights([2.0, 5.0, 5.0, 1.0], 9, "cooling")
        assert w == [0.0, 1.0, 0.0, 0.0]

    def test_cooling_temperature(self):
        q = [0.0, 1.0, 3.0]
        t = 10
        temp = 1.0 / (2 * math.log(t))
        expected = np.exp((np.array(q) - 3.0) / temp)
        np.testing.assert_allclose(softmax_weights(q, t, "cooling"), expected)

    @given(st.lists(st.floats(-20, 20), min_size=2, max_size=8, unique=True))
    def test_small_temperature_recovers_argmax(self, q):
        p = boltzmann_probabilities(q, 3, 1e-4)
        if sorted(q)[-1] - sorted(q)[-2] > 0.1:
            assert int(np.argmax(p)) == int(np.argmax(q))
            assert p.max() > 1 - 1e-9

    def test_sampling_inverse_cdf(self):
        w = [1.0, 0.0, 3.0]
        assert sample_weighted(w, 0.0) == 0
        assert sample_weighted(w, 0.2499) == 0
        assert sample_weighted(w, 0.25) == 2
        assert sample_weighted(w, 0.999999) == 2

    def test_rng_path(self):
        b = belief(3)
        rng = np.random.default_rng(0)
        picks = {choose_stochastic(b, 1, CFG, rng) for _ in range(200)}
        assert picks == {0, 1, 2}


class TestUcb1:
    def test_sweep(self):
        b = belief(4)
        for t in range(1, 5):
            assert choose_ucb1(b, t) == t - 1
            b.update(t - 1, 0.0)

    def test_equal_counts_argmax_mean(self):
        b = belief(3)
        for i, r in enumerate([1.0, 4.0, 2.0]):
            b.update(i, r)
        assert choose_ucb1(b, 10) == 1

    def test_exploration_example(self):
        b = belief(2)
        for _ in range(100):
            b.update(0, 1.0)
        b.update(1, 0.0)
        bonus = math.sqrt(2 * math.log(101))
        assert bonus == pytest.approx(3.038, abs=1e-3)
        assert choose_ucb1(b, 101) == 1


def brute_schedule(T):
    """(k, r, start, length) for every t, built frame by frame."""
    out = {}
    k = 1
    while (1 << (k - 1)) <= T:
        lo, hi = 1 << (k - 1), (1 << k) - 1
        starts = list(range(lo, hi + 1, k))
        for r, s in enumerate(starts, 1):
            length = min(k, hi - s + 1)
            for t in range(s, s + length):
                out[t] = (k, r, s, length)
        k += 1
    return out


class TestBlockSchedule:
    def test_examples(self):
        s = block_schedule(1)
        assert (s.frame, s.block, s.start, s.length) == (1, 1, 1, 1)
        s = block_schedule(7)
        assert (s.frame, s.block, s.start, s.length) == (3, 2, 7, 1)

    @pytest.mark.parametrize("k", range(1, 15))
    def test_frame_start(self, k):
        s = block_schedule(2 ** (k - 1))
        assert (s.frame, s.block, s.start, s.length) == (k, 1, 2 ** (k - 1), min(k, 2 ** (k - 1)))

    def test_against_brute_force(self):
        bf = brute_schedule(5000)
        for t in range(1, 5001):
            s = block_schedule(t)
            assert (s.frame, s.block, s.start, s.length) == bf[t]

    def test_block_counts(self):
        for k in range(1, 16):
            lo = 1 << (k - 1)
            full, rem = divmod(lo, k)
            assert blocks_in_frame(k) == full + (rem > 0)
            starts = {block_schedule(t).start for t in range(lo, 2 * lo)}
            assert len(starts) == blocks_in_frame(k)

    def test_decision_points(self):
        ell = 12
        decisions = {block_schedule(t).start for t in range(1, 2**ell)}
        assert len(decisions) == sum(blocks_in_frame(k) for k in range(1, ell + 1))


class TestBlockPolicy:
    def test_commits_within_block(self):
        b = belief(3)
        pol = BlockUCL(b, CFG)
        arms = []
        for t in range(1, 8):
            a = pol.select(t)
            arms.append(a)
            pol.observe(a, -100.0 if t == 4 else 0.0)
        assert arms[3] == arms[4] == arms[5]  # t = 4, 5, 6 form block (3, 1)

    def test_no_switch_mid_block(self):
        rng = np.random.default_rng(5)
        means = rng.normal(0, 1, 6)
        pol = BlockUCL(belief(6), CFG)
        arms = []
        for t in range(1, 600):
            a = pol.select(t)
            pol.observe(a, means[a] + rng.normal())
            arms.append(a)
        for t in range(2, 600):
            if arms[t - 1] != arms[t - 2]:
                assert block_schedule(t).start == t


class TestGraphical:
    def test_line_walk(self):
        paths = shortest_paths(line_graph(3))
        b = belief(3)
        b.update(0, 0.0)
        b.update(1, 0.0)
        goal, steps = plan_goal_block(b, 3, CFG, paths, current_arm=0, block_length=2)
        assert goal == 2
        assert steps == [1, 2, 2]

    def test_adjacent_goal_no_transients(self):
        paths = shortest_paths(line_graph(3))
        b = belief(3)
        b.update(0, 0.0)
        goal, steps = plan_goal_block(b, 2, CFG, paths, current_arm=0, block_length=1)
        assert goal == 1 and steps == [1]

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.sampled_from(["line", "grid"]))
    def test_emitted_sequence_is_walk(self, seed, kind):
        g = line_graph(10) if kind == "line" else grid_graph(3, 3)
        rng = np.random.default_rng(seed)
        means = rng.normal(0, 2, g.n)
        pol = GraphicalBlockUCL(belief(g.n, s02=50.0), CFG, shortest_paths(g))
        prev = 0
        goals = 0
        for t in range(1, 300):
            a = pol.select(t)
            assert a == prev or g.has_edge(prev, a)
            pol.observe(a, means[a] + rng.normal())
            goals += pol.last_was_goal
            prev = a
        assert goals == pol.goals_done

    def test_goal_counter_drives_schedule(self):
        # on a complete graph there are no transients: identical to block UCL
        from uclbandit.environment import complete_graph

        rng = np.random.default_rng(3)
        means = rng.normal(0, 1, 5)
        noise = rng.normal(0, 1, 200)
        g = GraphicalBlockUCL(belief(5), CFG, shortest_paths(complete_graph(5)))
        blk = BlockUCL(belief(5), CFG)
        for t in range(1, 201):
            a, c = g.select(t), blk.select(t)
            assert a == c
            g.observe(a, means[a] + noise[t - 1])
            blk.observe(c, means[c] + noise[t - 1])
