from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ulmkit.ordinal import INFINITY, nat
from ulmkit.pgroup import BoundExceeded, GroupTree, generated_iso


def chain(p: int, n: int) -> GroupTree:
    """Z_{p^n} as a chain r - c1 - ... - cn."""
    parent = {"r": None}
    prev = "r"
    for i in range(1, n + 1):
        parent[f"c{i}"] = prev
        prev = f"c{i}"
    return GroupTree(p, parent)


def star(p: int, k: int) -> GroupTree:
    """(Z_p)^k as k leaves under the root."""
    parent = {"r": None}
    for i in range(k):
        parent[f"l{i}"] = "r"
    return GroupTree(p, parent)


MIXED = {"r": None, "a": "r", "b": "a", "c": "r"}  # Z_{p^2} + Z_p


class TestValidation:
    def test_rejects_composite_p(self):
        with pytest.raises(ValueError):
            GroupTree(4, {"r": None})

    def test_rejects_rootless_and_multiroot(self):
        with pytest.raises(ValueError):
            GroupTree(2, {"a": "b", "b": "a"})
        with pytest.raises(ValueError):
            GroupTree(2, {"a": None, "b": None})

    def test_rejects_unknown_parent(self):
        with pytest.raises(ValueError):
            GroupTree(2, {"r": None, "a": "ghost"})

    def test_rejects_cycle(self):
        with pytest.raises(ValueError):
            GroupTree(2, {"r": None, "a": "b", "b": "a"})


class TestNormalForm:
    def test_chain_is_cyclic(self):
        t = chain(2, 3)
        g = t.node("c3")
        assert t.order_of(g) == 8
        acc = t.zero()
        seen = set()
        for _ in range(8):
            acc = acc + g
            seen.add(acc)
        assert len(seen) == 8
        assert acc == t.zero() or len(seen) == 8

    def test_p_times_node_is_parent(self):
        t = chain(3, 2)
        assert t.node("c2").times_p() == t.node("c1")
        assert t.node("c1").times_p() == t.zero()
        assert 3 * t.node("c2") == t.node("c1")

    def test_carry_cascade(self):
        t = chain(2, 2)
        # c2 + c2 = c1, c2+c2+c2+c2 = 0
        assert t.element({"c2": 2}) == t.node("c1")
        assert t.element({"c2": 4}) == t.zero()
        assert t.element({"c2": 2, "c1": 1}) == t.zero()

    def test_negative_coefficients(self):
        t = chain(5, 2)
        x = t.node("c2")
        assert x + (-x) == t.zero()
        assert -t.zero() == t.zero()
        # -1 = 24 mod 25 and 24 = 4*5 + 4
        assert t.element({"c2": -1}) == t.element({"c2": 4, "c1": 4})

    def test_size_and_count(self):
        t = GroupTree(2, MIXED)
        assert t.size == 8
        assert len(list(t.elements())) == 8
        assert len(set(t.elements())) == 8

    @given(st.integers(0, 3**4 - 1), st.integers(0, 3**4 - 1))
    def test_group_laws_sampled(self, i, j):
        t = GroupTree(3, {"r": None, "a": "r", "b": "a", "c": "r", "d": "c"})
        xs = list(t.elements())
        x, y = xs[i % len(xs)], xs[j % len(xs)]
        assert x + y == y + x
        assert (x + y) - y == x

    def test_associativity_exhaustive_small(self):
        t = GroupTree(2, MIXED)
        xs = list(t.elements())
        for x, y, z in itertools.product(xs, repeat=3):
            assert (x + y) + z == x + (y + z)


class TestOrdersHeights:
    def test_orders_mixed(self):
        t = GroupTree(2, MIXED)
        assert t.node("b").order() == 4
        assert t.node("a").order() == 2
        assert t.node("c").order() == 2
        assert t.zero().order() == 1

    def test_height_rule_matches_chain_exhaustively(self):
        shapes = [
            {"r": None, "a": "r"},
            MIXED,
            {"r": None, "a": "r", "b": "a", "c": "b"},
            {"r": None, "a": "r", "b": "a", "c": "a", "d": "r"},
            {"r": None, "a": "r", "b": "r", "c": "a", "d": "b", "e": "d"},
        ]
        for p in (2, 3):
            for shape in shapes:
                t = GroupTree(p, shape)
                for x in t.elements():
                    assert t.height_of(x) == t.height_of_by_chain(x), (
                        p,
                        shape,
                        x,
                    )

    def test_height_of_zero(self):
        t = chain(2, 1)
        assert t.height_of(t.zero()) is INFINITY

    def test_length(self):
        assert chain(2, 4).length() == 4
        assert star(3, 2).length() == 1
        assert GroupTree(2, {"r": None}).length() == 0

    def test_pk_chain_shrinks_to_zero(self):
        t = GroupTree(2, MIXED)
        sizes = [len(layer) for layer in t.pk_chain()]
        assert sizes == [8, 2, 1]
        assert t.pk_subgroup(5) == frozenset({t.zero()})


class TestSubspaces:
    def test_socle_dims(self):
        t = GroupTree(2, MIXED)  # Z_4 + Z_2: socle = Z_2 x Z_2
        assert len(t.socle()) == 4
        _, d0 = t.p_beta_space(0)
        _, d1 = t.p_beta_space(1)
        _, d2 = t.p_beta_space(2)
        assert (d0, d1, d2) == (2, 1, 0)

    def test_p_beta_basis_spans(self):
        t = star(3, 3)
        basis, dim = t.p_beta_space(0)
        assert dim == 3
        assert len(t.subgroup(basis)) == 27

    def test_subgroup_closure(self):
        t = GroupTree(2, MIXED)
        sub = t.subgroup([t.node("b")])
        assert len(sub) == 4
        assert t.node("a") in sub

    def test_bound_exceeded_is_loud(self):
        t = star(3, 11)
        with pytest.raises(BoundExceeded):
            list(t.elements())


class TestGeneratedIso:
    def test_matching_chains(self):
        t1, t2 = chain(2, 3), chain(2, 3)
        f = generated_iso(t1, [t1.node("c3")], t2, [t2.node("c3")])
        assert f is not None
        assert len(f) == 8
        assert f[t1.node("c1")] == t2.node("c1")

    def test_order_mismatch_fails(self):
        t1, t2 = chain(2, 2), chain(2, 1)
        assert generated_iso(t1, [t1.node("c2")], t2, [t2.node("c1")]) is None

    def test_non_injective_fails(self):
        t = GroupTree(2, MIXED)
        # a and c both have order 2 but (a, c) -> (a, a) collapses a-c
        assert (
            generated_iso(t, [t.node("a"), t.node("c")], t, [t.node("a"), t.node("a")])
            is None
        )

    def test_automorphism_of_star(self):
        t = star(2, 2)
        x, y = t.node("l0"), t.node("l1")
        f = generated_iso(t, [x, y], t, [y, x])
        assert f is not None
        assert f[x + y] == x + y

    def test_empty_tuples(self):
        t = chain(2, 1)
        f = generated_iso(t, [], t, [])
        assert f == {t.zero(): t.zero()}

    def test_cross_prime_rejected_by_orders(self):
        t1, t2 = chain(2, 1), chain(3, 1)
        assert generated_iso(t1, [t1.node("c1")], t2, [t2.node("c1")]) is None
