"""The two benchmark families and the random-system generator."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from snpsim import (
    Format,
    HaltReason,
    InvalidInstance,
    RegexKind,
    SeededRandom,
    SimOptions,
    SortInstance,
    SubsetSumInstance,
    build_sparse,
    gen_random,
    gen_sort,
    gen_subset_sum,
    simulate,
    sort_result,
    subset_sum_accepted,
)
from snpsim.generators import SUBSET_SUM_STEP_BOUND


class TestSortFamily:
    def test_smallest_instance(self):
        stats = gen_sort(SortInstance(1)).stats()
        assert (stats.q, stats.m) == (3, 2)

    def test_table_sized_instance(self):
        stats = gen_sort(SortInstance(3)).stats()
        assert (stats.q, stats.m, stats.max_out_degree) == (9, 12, 3)

    def test_hundred(self):
        stats = gen_sort(SortInstance(100)).stats()
        assert (stats.q, stats.m, stats.max_out_degree) == (300, 10100, 100)

    def test_invalid_instances(self):
        with pytest.raises(InvalidInstance):
            SortInstance(0)
        with pytest.raises(InvalidInstance):
            SortInstance(2, (4, 4))
        with pytest.raises(InvalidInstance):
            SortInstance(2, (0, 1))
        with pytest.raises(InvalidInstance):
            SortInstance(3, (1, 2))

    def test_worst_case_default(self):
        assert SortInstance(4).values == (4, 3, 2, 1)

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.integers(min_value=1, max_value=60), min_size=1,
                    max_size=12, unique=True))
    def test_outputs_decode_to_ascending_values(self, values):
        instance = SortInstance(len(values), tuple(values))
        system = gen_sort(instance)
        trace = simulate(system, Format.COMPRESSED,
                         SimOptions(max_steps=max(values) + 5))
        assert trace.halt_reason is HaltReason.NO_APPLICABLE_RULES
        assert sort_result(trace, len(values)) == sorted(values)

    def test_output_totals_nondecreasing_per_step(self):
        system = gen_sort(SortInstance(3))
        trace = simulate(system, Format.SPARSE, SimOptions(max_steps=20))
        for config in trace.configs:
            outputs = list(config[6:9])
            assert outputs == sorted(outputs)


class TestSubsetSumFamily:
    def test_statistics_formulas(self):
        rng = random.Random(7)
        for _ in range(25):
            n = rng.randint(1, 50)
            values = tuple(rng.randint(0, 50) for _ in range(n))
            target = sum(v for v in values if rng.random() < 0.2)
            system = gen_subset_sum(SubsetSumInstance(values, target))
            stats = system.stats()
            total = sum(values)
            assert stats.q == total + 2 * n + 2
            assert stats.m == total + 4 * n + 2
            assert stats.max_out_degree == n

    def test_empty_instance(self):
        system = gen_subset_sum(SubsetSumInstance((), 0))
        stats = system.stats()
        assert (stats.q, stats.m, stats.max_out_degree) == (2, 2, 0)
        trace = simulate(system, Format.ORACLE, SimOptions(max_steps=5))
        assert subset_sum_accepted(trace, system)  # the empty subset sums to 0

    def test_target_above_total_rejected(self):
        with pytest.raises(InvalidInstance):
            SubsetSumInstance((1, 2), 4)

    def test_tiny_instance_paths(self):
        instance = SubsetSumInstance((1, 2), 3)
        # independent enumeration of the four take/skip paths
        sums = {a * 1 + b * 2 for a in (0, 1) for b in (0, 1)}
        assert instance.target in sums
        system = gen_subset_sum(instance)
        accepted = rejected = 0
        for seed in range(200):
            trace = simulate(system, Format.ELL,
                             SimOptions(max_steps=SUBSET_SUM_STEP_BOUND,
                                        selection=SeededRandom(seed)))
            assert trace.halt_reason is HaltReason.NO_APPLICABLE_RULES
            if subset_sum_accepted(trace, system):
                accepted += 1
            else:
                rejected += 1
        assert accepted > 0  # the take-take path exists
        assert rejected > 0  # and so do non-accepting ones

    def test_accepts_only_exact_sums(self):
        # target reachable only by taking everything
        system = gen_subset_sum(SubsetSumInstance((2, 3), 5))
        outcomes = set()
        for seed in range(64):
            trace = simulate(system, Format.COMPRESSED,
                             SimOptions(max_steps=SUBSET_SUM_STEP_BOUND,
                                        selection=SeededRandom(seed)))
            final_adder = int(trace.configs[-1][system.output_neuron])
            outcomes.add(final_adder)
            if subset_sum_accepted(trace, system):
                assert final_adder == 0
        # non-accepting finals are 1 + (taken sum) + n for taken sums 0, 2, 3
        assert outcomes <= {0, 3, 5, 6}
        assert 0 in outcomes

    def test_zero_valued_numbers_keep_formulas(self):
        system = gen_subset_sum(SubsetSumInstance((0, 0, 5), 5))
        stats = system.stats()
        assert stats.q == 5 + 6 + 2
        assert stats.m == 5 + 12 + 2
        assert stats.max_out_degree == 3

    def test_random_regime_constructor(self):
        a = SubsetSumInstance.random(10, seed=3)
        b = SubsetSumInstance.random(10, seed=3)
        assert a == b
        assert len(a.values) == 10
        assert all(0 <= v <= 50 for v in a.values)
        assert 0 <= a.target <= sum(a.values)


class TestRandomGenerator:
    def test_deterministic(self):
        a = gen_random(30, 4, 6, 15, 2, seed=42)
        b = gen_random(30, 4, 6, 15, 2, seed=42)
        assert a == b

    def test_every_sample_validates(self):
        for seed in range(100):
            system = gen_random(50, 4, 8, 20, 3, seed)
            assert system.is_validated
            assert system.neuron_count >= 1

    def test_bounds_respected(self):
        for seed in range(50):
            system = gen_random(50, 4, 8, 20, 3, seed)
            stats = system.stats()
            assert 1 <= stats.q <= 50
            assert stats.max_out_degree <= 8
            per_neuron = [0] * stats.q
            for rule in system.rules:
                per_neuron[rule.neuron] += 1
                assert 1 <= rule.consumed <= 20
                assert rule.delay <= 3
            assert max(per_neuron, default=0) <= 4

    def test_rule_mix_covers_all_branches(self):
        kinds = set()
        forgetting = exact_firing = 0
        for seed in range(30):
            for rule in gen_random(50, 4, 8, 20, 3, seed).rules:
                kinds.add((rule.regex.kind, rule.is_forgetting))
                forgetting += rule.is_forgetting
                exact_firing += (rule.regex.kind is RegexKind.EXACTLY
                                 and not rule.is_forgetting)
        assert forgetting > 0 and exact_firing > 0
        assert (RegexKind.AT_LEAST, False) in kinds

    def test_invalid_bounds(self):
        with pytest.raises(InvalidInstance):
            gen_random(0, 4, 8, 20, 3, 0)
        with pytest.raises(InvalidInstance):
            gen_random(10, 4, 8, 20, -1, 0)


class TestFamiliesSatisfyMatrixInvariants:
    def test_row_sums_for_both_families(self):
        for system in (gen_sort(SortInstance(6)),
                       gen_subset_sum(SubsetSumInstance((1, 2, 3), 4))):
            matrix = build_sparse(system)
            degrees = system.out_degrees()
            for ri, rule in enumerate(system.rules):
                expected = -rule.consumed + rule.produced * degrees[rule.neuron]
                assert matrix.data[ri].sum() == expected
