from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from ulmkit.construct import (
    ConstructionState,
    PElement,
    PredicateTable,
    cantor_pair,
    cantor_unpair,
    decode_elem,
    decode_triple,
    nth_unit_fraction,
    run_construction,
)
from ulmkit.ordinal import nat
from ulmkit.pgroup import BoundExceeded
from ulmkit.ulm import invariants_of


class TestCoding:
    @given(st.integers(0, 10_000), st.integers(0, 10_000))
    def test_pair_unpair_roundtrip(self, a, b):
        assert cantor_unpair(cantor_pair(a, b)) == (a, b)

    @given(st.integers(0, 200_000))
    def test_unpair_pair_roundtrip(self, z):
        a, b = cantor_unpair(z)
        assert cantor_pair(a, b) == z

    def test_triple_decoding(self):
        e = cantor_pair(3, cantor_pair(1, 4))
        assert decode_triple(e) == (3, 1, 4)

    def test_fraction_enumeration_base2(self):
        got = [nth_unit_fraction(n, 2) for n in range(5)]
        assert got == [(1, 1), (2, 1), (2, 3), (3, 1), (3, 3)]

    def test_fraction_enumeration_base3(self):
        got = [nth_unit_fraction(n, 3) for n in range(8)]
        assert got == [(1, 1), (1, 2), (2, 1), (2, 2), (2, 4), (2, 5), (2, 7), (2, 8)]

    def test_fraction_enumeration_injective(self):
        seen = {nth_unit_fraction(n, 2) for n in range(200)}
        assert len(seen) == 200

    def test_decode_zero(self):
        assert decode_elem(0, 2).is_zero

    def test_decode_pinned_codes(self):
        # these codes anchor the closure/audit tests below
        assert decode_elem(1, 2) == PElement(2, ((0, 1, 1),))
        assert decode_elem(3, 2) == PElement(2, ((1, 1, 1),))
        assert decode_elem(6, 2) == PElement(2, ((0, 1, 2),))
        assert decode_elem(15, 2) == PElement(2, ((1, 1, 2),))

    @given(st.integers(0, 5000))
    def test_decode_is_total_and_valid(self, m):
        x = decode_elem(m, 2)
        assert isinstance(x, PElement)

    def test_decoding_reaches_multi_part_elements(self):
        assert any(len(decode_elem(m, 2).parts) >= 2 for m in range(300))


class TestPElement:
    def test_addition_within_a_slot(self):
        half = PElement(2, ((0, 1, 1),))
        quarter = PElement(2, ((0, 1, 2),))
        assert (half + half).is_zero
        assert quarter + quarter == half
        assert quarter + half == PElement(2, ((0, 3, 2),))

    def test_addition_across_slots(self):
        a = PElement(2, ((0, 1, 1),))
        b = PElement(2, ((1, 1, 2),))
        assert a + b == PElement(2, ((0, 1, 1), (1, 1, 2)))

    def test_negation(self):
        q = PElement(2, ((0, 1, 2),))
        assert -q == PElement(2, ((0, 3, 2),))
        assert (q + -q).is_zero

    def test_times_p_and_order(self):
        x = PElement(2, ((0, 3, 3),))  # 3/8
        assert x.order() == 8
        assert x.times_p() == PElement(2, ((0, 3, 2),))
        assert x.times_p().times_p() == PElement(2, ((0, 1, 1),))
        assert x.times_p().times_p().times_p().is_zero

    def test_validation(self):
        with pytest.raises(ValueError):
            PElement(2, ((0, 2, 2),))  # 2/4 is not reduced
        with pytest.raises(ValueError):
            PElement(2, ((0, 5, 2),))  # 5/4 is not a fraction mod 1
        with pytest.raises(ValueError):
            PElement(2, ((1, 1, 1), (0, 1, 1)))  # unsorted slots
        with pytest.raises(ValueError):
            PElement(2, ((0, 1, 1), (0, 1, 2)))  # duplicate slot


class TestPredicateTable:
    def test_reads_cells_and_flags(self):
        t = PredicateTable(4, {(0, 3), (2, 1)}, {1})
        assert t.R(0, 3) and t.R(2, 1)
        assert not t.R(0, 2)
        assert t.R(1, 100) and not t.R(0, 100)

    def test_classification(self):
        t = PredicateTable(4, set(), {1})
        assert t.in_S(0) and not t.in_S(1)

    def test_rejects_cells_beyond_bound(self):
        with pytest.raises(ValueError):
            PredicateTable(4, {(0, 4)}, set())


ALL_FALSE = PredicateTable(4, set(), set())


class TestGrowthDynamics:
    def test_all_false_rows_grow_every_invariant(self):
        run = run_construction(ALL_FALSE, 8, window=8)
        assert run.state.estimates(8) == [7, 6, 5, 4, 3, 2, 1, 0]
        assert [h[0] for h in run.history] == list(range(8))

    def test_finitely_true_row_is_treated_then_grows_again(self):
        table = PredicateTable(4, {(0, 3)}, set())
        run = run_construction(table, 10)
        st_ = run.state
        # three chains piled up before the witness, all pushed to depth 2
        assert st_.Y[0] == {3}
        assert st_.T[0] == {1}
        assert len(st_.Xt[0]) == 3
        # growth resumed afterwards: stages 5..9 added fresh depth-1 chains
        assert st_.estimates(2)[0] == 5
        # the treated batch joined row 1's own depth-2 chains
        assert st_.estimates(2)[1] == 8 + 3

    def test_cofinally_true_row_stays_put(self):
        table = PredicateTable(
            4, {(0, y) for y in range(4)}, {0}
        )
        run = run_construction(table, 10)
        assert all(h[0] == 0 for h in run.history)
        assert run.state.X[0] == set()
        assert not table.in_S(0)

    def test_runs_are_deterministic(self):
        t = PredicateTable(4, {(0, 3), (1, 2)}, {1})
        assert run_construction(t, 12).history == run_construction(t, 12).history


class TestClosureAndAudit:
    def test_listed_sums_get_adjoined(self):
        # requirement 29 watches the pair (1/4 at slot 0, 1/2 at slot 0);
        # treating row 0 at stage 3 pushes slot 0 to depth 2, and the
        # sum 3/4 must then appear among the adjoined extras
        assert cantor_unpair(29) == (6, 1)
        table = PredicateTable(4, {(0, 2)}, set())
        run = run_construction(table, 35)
        target = PElement(2, ((0, 3, 2),))
        assert target in run.state.extras
        assert run.state.contains(target)

    def test_audit_records_true_and_false_sums(self):
        run = run_construction(ALL_FALSE, 8)
        D = run.state.D
        assert D[("sum", 1, 1, 0)] is True  # 1/2 + 1/2 = 0
        assert D[("sum", 1, 0, 0)] is False  # 1/2 + 0 != 0

    def test_unlisted_elements_are_not_audited(self):
        run = run_construction(ALL_FALSE, 3)
        # code 6 is 1/4 at slot 0, but slot 0 only reaches depth 1
        assert not run.state.contains(decode_elem(6, 2))
        assert all(6 not in key[1:] for key in run.state.D)


class TestReadingTheGroup:
    def test_tree_matches_estimates(self):
        run = run_construction(ALL_FALSE, 3)
        tree = run.state.as_group_tree()
        profile = invariants_of(tree)
        est = run.state.estimates(3)
        assert est == [2, 1, 0]
        assert [profile.value_at(nat(e)) for e in range(3)] == est

    def test_tree_bound_is_enforced(self):
        run = run_construction(ALL_FALSE, 12)
        with pytest.raises(BoundExceeded):
            run.state.as_group_tree(bound=2**10)
