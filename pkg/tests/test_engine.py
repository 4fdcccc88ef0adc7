import copy
import csv

import numpy as np
import pytest

from ach.engine import (init_population, is_homogeneous, run_population,
                        run_to_absorption, step)
from ach.perceptron import cost, generate_random_mapping, generate_teacher_mapping
from ach.topology import Graph, square_lattice
from oracles import check_population_coherent, rescan_active


def _rng(*key):
    return np.random.default_rng(np.random.SeedSequence(list(key)))


def single_node_graph():
    return Graph(1, np.empty((1, 0), dtype=np.int32), "test", {})


def two_triangle_graph():
    adj = np.array([[1, 2], [0, 2], [0, 1],
                    [4, 5], [3, 5], [3, 4]], dtype=np.int32)
    return Graph(6, adj, "test", {})


class TestInitPopulation:
    def test_active_set_matches_full_rescan(self):
        g = square_lattice(5)
        m, _ = generate_teacher_mapping(11, 22, _rng(1))
        pop = init_population(g, m, _rng(2))
        assert np.array_equal(pop.active_agents(),
                              rescan_active(pop.strings, g.adjacency))
        check_population_coherent(pop)

    def test_identical_strings_absorbed(self):
        g = square_lattice(3)
        m, _ = generate_teacher_mapping(3, 6, _rng(3))
        s = np.tile(np.int8([1, -1, 1]), (9, 1))
        pop = init_population(g, m, strings=s)
        assert pop.acount == 0 and pop.is_absorbed

    def test_single_node_is_absorbed(self):
        m, _ = generate_teacher_mapping(3, 6, _rng(4))
        pop = init_population(single_node_graph(), m, _rng(5))
        assert pop.is_absorbed

    def test_deterministic_given_seed(self):
        g = square_lattice(4)
        m, _ = generate_teacher_mapping(5, 10, _rng(6))
        a = init_population(g, m, _rng(7))
        b = init_population(g, m, _rng(7))
        assert np.array_equal(a.strings, b.strings)

    def test_bad_preset_strings_rejected(self):
        g = square_lattice(3)
        m, _ = generate_teacher_mapping(3, 6, _rng(8))
        with pytest.raises(ValueError):
            init_population(g, m, strings=np.zeros((9, 3), dtype=np.int8))
        with pytest.raises(ValueError):
            init_population(g, m, strings=np.ones((4, 3), dtype=np.int8))
        with pytest.raises(ValueError):
            init_population(g, m)  # neither rng nor strings


class TestStepSemantics:
    def setup_method(self):
        self.g = square_lattice(3)
        self.m, _ = generate_teacher_mapping(5, 10, _rng(10))

    def test_step_on_absorbed_is_error(self):
        s = np.tile(np.int8([1, 1, -1, 1, -1]), (9, 1))
        pop = init_population(self.g, self.m, strings=s)
        with pytest.raises(RuntimeError):
            step(pop, _rng(11))

    def test_event_properties_over_many_steps(self):
        """Every event obeys the interaction rule; checked against snapshots."""
        rng = _rng(12)
        pop = init_population(self.g, self.m, _rng(13))
        increase_seen = equal_cost_interaction = 0
        for _ in range(400):
            if pop.is_absorbed:
                pop = init_population(self.g, self.m, rng)
                continue
            before_strings = pop.strings.copy()
            before_costs = pop.costs.copy()
            acount_before = pop.acount
            ev = step(pop, rng)
            assert ev.time_increment == pytest.approx(9 / acount_before)
            assert before_costs[ev.target] >= 0
            d_before = int((before_strings[ev.target]
                            != before_strings[ev.neighbor]).sum())
            if not ev.interacted:
                # no-interaction events change nothing but the clock
                assert np.array_equal(pop.strings, before_strings)
                assert ev.flipped_index is None
                assert (d_before == 0
                        or before_costs[ev.target] < before_costs[ev.neighbor])
            else:
                # interactions need a differing pair with cost(t) >= cost(n),
                # flip exactly one differing entry to the neighbor's value
                assert d_before > 0
                assert before_costs[ev.target] >= before_costs[ev.neighbor]
                k = ev.flipped_index
                assert before_strings[ev.target, k] != before_strings[ev.neighbor, k]
                assert pop.strings[ev.target, k] == pop.strings[ev.neighbor, k]
                d_after = int((pop.strings[ev.target]
                               != pop.strings[ev.neighbor]).sum())
                assert d_after == d_before - 1
                if before_costs[ev.target] == before_costs[ev.neighbor]:
                    equal_cost_interaction += 1
                if pop.costs[ev.target] > before_costs[ev.target]:
                    increase_seen += 1
            check_population_coherent(pop)
        # ties do interact, and interactions may raise the target's cost
        assert equal_cost_interaction > 0
        assert increase_seen > 0

    def test_kernel_replays_python_steps(self):
        """Same generator -> the jit loop and step() produce identical runs."""
        for f, seed in ((3, 0), (3, 1), (11, 2), (5, 3)):
            m, _ = generate_teacher_mapping(f, 2 * f, _rng(20, seed))
            g = square_lattice(5 if f < 11 else 4)
            pop_a = init_population(g, m, _rng(21, seed))
            pop_b = copy.deepcopy(pop_a)
            rng_a = _rng(22, seed)
            rng_b = _rng(22, seed)
            run_population(pop_a, rng_a, max_events=10**7)
            while not pop_b.is_absorbed and pop_b.events < 10**7:
                step(pop_b, rng_b)
            assert pop_a.events == pop_b.events
            assert pop_a.interactions == pop_b.interactions
            assert pop_a.clock == pytest.approx(pop_b.clock, rel=1e-12)
            assert np.array_equal(pop_a.strings, pop_b.strings)
            assert pop_a.min_cost_seen == pop_b.min_cost_seen


class TestRunToAbsorption:
    def test_absorbed_runs_are_homogeneous(self):
        g = square_lattice(4)
        for seed in range(8):
            m, _ = generate_teacher_mapping(7, 14, _rng(30, seed))
            res = run_to_absorption(g, m, 0, _rng(31, seed))
            assert res.absorbed
            pop = init_population(g, m, strings=np.tile(res.final_string,
                                                        (16, 1)))
            assert pop.is_absorbed  # consensus state is genuinely frozen
            assert res.final_cost == cost(res.final_string, m)
            assert res.success == (res.final_cost == 0)
            assert res.min_cost_seen <= res.final_cost
            assert res.relaxation_time >= res.event_count  # n/acount >= 1

    def test_homogeneous_initial_condition(self):
        g = square_lattice(3)
        m, _ = generate_teacher_mapping(3, 6, _rng(32))
        s = np.tile(np.int8([-1, 1, 1]), (9, 1))
        pop = init_population(g, m, strings=s)
        res = run_population(pop, _rng(33))
        assert pop.is_absorbed and pop.clock == 0.0 and pop.events == 0

    def test_single_agent(self):
        m, _ = generate_teacher_mapping(3, 6, _rng(34))
        res = run_to_absorption(single_node_graph(), m, 0, _rng(35))
        assert res.absorbed and res.relaxation_time == 0.0
        assert res.success == (res.final_cost == 0)

    def test_cost_cache_exact_after_kernel_run(self):
        g = square_lattice(5)
        m, _ = generate_teacher_mapping(11, 22, _rng(36))
        pop = init_population(g, m, _rng(37))
        run_population(pop, _rng(38))
        check_population_coherent(pop)

    def test_max_events_cap_reports_non_absorbed(self):
        g = square_lattice(5)
        m, _ = generate_teacher_mapping(11, 22, _rng(39))
        res = run_to_absorption(g, m, 0, _rng(40), max_events=10)
        assert not res.absorbed
        assert not res.success
        assert res.event_count == 10

    def test_f1_exact_success_probability(self):
        # F=1, teacher mapping: agents are right or wrong; wrong agents always
        # copy, right agents never adopt wrong, so the only failing initial
        # condition is all-wrong: P_m = 1 - 2^(-N) exactly.
        g = square_lattice(3)
        m, _ = generate_teacher_mapping(1, 2, _rng(41))
        runs = 4000
        wins = 0
        rng = _rng(42)
        for _ in range(runs):
            res = run_to_absorption(g, m, 0, rng)
            wins += res.success
            if not res.success:
                assert res.final_cost == m.m  # failed = all-wrong consensus
        p_exact = 1 - 2.0 ** (-9)
        sigma = np.sqrt(p_exact * (1 - p_exact) / runs)
        assert abs(wins / runs - p_exact) < 4 * sigma


class TestTraceAndModes:
    def test_trace_matches_untraced_run(self, tmp_path):
        g = square_lattice(4)
        m, _ = generate_teacher_mapping(5, 10, _rng(50))
        path = tmp_path / "trace.csv"
        res_t = run_to_absorption(g, m, 0, _rng(51), trace=str(path))
        res_k = run_to_absorption(g, m, 0, _rng(51))
        assert res_t.final_cost == res_k.final_cost
        assert res_t.relaxation_time == pytest.approx(res_k.relaxation_time,
                                                      rel=1e-12)
        assert res_t.event_count == res_k.event_count
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == res_t.event_count
        clocks = [float(r["clock"]) for r in rows]
        assert all(b > a for a, b in zip(clocks, clocks[1:]))
        assert clocks[-1] == pytest.approx(res_t.relaxation_time, rel=1e-12)
        flips = sum(r["interacted"] == "1" for r in rows)
        assert flips == res_t.interaction_count

    def test_uniform_selection_mode_smokes(self):
        g = square_lattice(3)
        m, _ = generate_teacher_mapping(3, 6, _rng(52))
        res = run_to_absorption(g, m, 0, _rng(53), uniform_selection=True)
        assert res.absorbed
        # the naive clock counts whole-population attempts one by one
        assert res.relaxation_time == pytest.approx(res.event_count)


class TestUniformEquivalence:
    def test_same_absorbing_distribution_as_active_list_mode(self):
        """Drawing targets from the whole population (no-op on inactive picks)
        must leave the distribution over consensus strings unchanged; only the
        clock bookkeeping differs.  Chi-square homogeneity on 2^F outcomes."""
        from scipy.stats import chi2_contingency

        g = square_lattice(3)
        m, _ = generate_teacher_mapping(3, 6, _rng(70))
        runs = 3000
        counts = np.zeros((2, 8), dtype=np.int64)
        for mode, uniform in enumerate((False, True)):
            for i in range(runs):
                res = run_to_absorption(g, m, 0, _rng(71, mode, i),
                                        uniform_selection=uniform)
                bits = (res.final_string > 0).astype(int)
                counts[mode, bits[0] * 4 + bits[1] * 2 + bits[2]] += 1
        table = counts[:, counts.sum(axis=0) > 0]
        _, p, _, _ = chi2_contingency(table)
        assert p > 0.01


class TestHomogeneity:
    def test_two_strings_differ_one_bit(self):
        g = square_lattice(3)
        m, _ = generate_teacher_mapping(3, 6, _rng(60))
        s = np.tile(np.int8([1, 1, 1]), (9, 1))
        s[4, 0] = -1
        pop = init_population(g, m, strings=s)
        assert not is_homogeneous(pop)

    def test_checkerboard(self):
        g = square_lattice(4)
        m, _ = generate_teacher_mapping(3, 6, _rng(61))
        a, b = np.int8([1, 1, 1]), np.int8([-1, -1, -1])
        s = np.empty((16, 3), dtype=np.int8)
        for i in range(16):
            s[i] = a if (i // 4 + i % 4) % 2 == 0 else b
        pop = init_population(g, m, strings=s)
        assert not is_homogeneous(pop)
        assert pop.acount == 16

    def test_per_component_consensus_counts_as_homogeneous(self):
        g = two_triangle_graph()
        m, _ = generate_teacher_mapping(3, 6, _rng(62))
        s = np.vstack([np.tile(np.int8([1, 1, 1]), (3, 1)),
                       np.tile(np.int8([-1, 1, -1]), (3, 1))])
        pop = init_population(g, m, strings=s)
        assert pop.is_absorbed
        assert is_homogeneous(pop)

    def test_disconnected_run_reports_best_component(self):
        g = two_triangle_graph()
        m, _ = generate_teacher_mapping(5, 10, _rng(63))
        for seed in range(10):
            res = run_to_absorption(g, m, 0, _rng(64, seed))
            assert res.absorbed
            # final cost is the best component's consensus cost
            assert res.final_cost == cost(res.final_string, m)
