"""Finite abelian p-groups presented by rooted trees.

A rooted tree T with prime label p presents the group G(T) generated by the
nodes, subject to p*v = parent(v) for every node and root = 0. Every element
has a unique normal form as a sum of non-root nodes with coefficients in
1..p-1, so |G(T)| = p^(number of non-root nodes) and a chain of n nodes under
the root presents Z_{p^n}.

Heights: h(x) is the largest k with x in p^k G(T), h(0) = infinity. For tree
groups p^k G(T) is spanned by the nodes whose subtree depth (rank) is >= k,
and that span is closed under the carry rewrites, so

    h(sum c_v v) = min over the support of rank(v).

``height_of`` uses this rule; ``height_of_by_chain`` recomputes the chain
membership directly and the test suite checks they agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional

from .ordinal import INFINITY, HeightValue, nat

DEFAULT_BOUND = 3**10


class BoundExceeded(RuntimeError):
    """An enumeration would exceed its element budget."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(n**0.5) + 1):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class GroupElement:
    tree: "GroupTree"
    coeffs: tuple[tuple[str, int], ...]  # sorted by node id, values in 1..p-1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.coeffs)

    def coeff(self, v: str) -> int:
        for node, c in self.coeffs:
            if node == v:
                return c
        return 0

    def __add__(self, other: "GroupElement") -> "GroupElement":
        if other.tree is not self.tree:
            raise ValueError("elements live in different trees")
        raw = dict(self.coeffs)
        for v, c in other.coeffs:
            raw[v] = raw.get(v, 0) + c
        return self.tree.element(raw)

    def __neg__(self) -> "GroupElement":
        return self.tree.element({v: -c for v, c in self.coeffs})

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __rmul__(self, k: int) -> "GroupElement":
        return self.tree.element({v: k * c for v, c in self.coeffs})

    def times_p(self) -> "GroupElement":
        return self.tree.times_p(self)

    def order(self) -> int:
        return self.tree.order_of(self)

    def height(self) -> HeightValue:
        return self.tree.height_of(self)

    def sort_key(self) -> tuple[int, ...]:
        return self.tree.coeff_vector(self)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        return "+".join(v if c == 1 else f"{c}*{v}" for v, c in self.coeffs)

    __repr__ = __str__


class GroupTree:
    def __init__(self, p: int, parent: Mapping[str, Optional[str]]):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.parent: dict[str, Optional[str]] = dict(parent)
        roots = [v for v, u in self.parent.items() if u is None]
        if len(roots) != 1:
            raise ValueError(f"need exactly one root, got {roots}")
        self.root = roots[0]
        for v, u in self.parent.items():
            if u is not None and u not in self.parent:
                raise ValueError(f"parent {u!r} of {v!r} is not a node")
        self.nodes: tuple[str, ...] = tuple(sorted(self.parent))
        self._depth: dict[str, int] = {}
        for v in self.nodes:
            trail = []
            w: Optional[str] = v
            while w is not None and w not in self._depth:
                if w in trail:
                    raise ValueError(f"parent cycle through {w!r}")
                trail.append(w)
                w = self.parent[w]
            base = -1 if w is None else self._depth[w]
            for i, u in enumerate(reversed(trail)):
                self._depth[u] = base + i + 1
        self.nonroot: tuple[str, ...] = tuple(
            v for v in self.nodes if v != self.root
        )
        children: dict[str, list[str]] = {v: [] for v in self.nodes}
        for v, u in self.parent.items():
            if u is not None:
                children[u].append(v)
        self.children: dict[str, tuple[str, ...]] = {
            v: tuple(sorted(cs)) for v, cs in children.items()
        }
        self._rank: dict[str, int] = {}
        for v in sorted(self.nodes, key=lambda u: -self._depth[u]):
            cs = self.children[v]
            self._rank[v] = 1 + max(self._rank[c] for c in cs) if cs else 0
        self.size: int = p ** len(self.nonroot)
        self._zero = GroupElement(self, ())

    # -- basic structure ---------------------------------------------------

    def depth(self, v: str) -> int:
        return self._depth[v]

    def rank(self, v: str) -> int:
        """Longest descending chain below v (0 for leaves)."""
        return self._rank[v]

    def length(self) -> int:
        """Least n with p^n G = 0."""
        return max((self._rank[v] + 1 for v in self.nonroot), default=0)

    # -- elements ----------------------------------------------------------

    def zero(self) -> GroupElement:
        return self._zero

    def node(self, v: str) -> GroupElement:
        if v == self.root:
            return self._zero
        if v not in self.parent:
            raise KeyError(v)
        return GroupElement(self, ((v, 1),))

    def element(self, raw: Mapping[str, int]) -> GroupElement:
        """Normalize an integer combination of nodes (carries run upward)."""
        p = self.p
        acc = {v: int(c) for v, c in raw.items() if c}
        for v in acc:
            if v not in self.parent:
                raise KeyError(v)
        # deepest first, so a carry lands on a node not yet processed
        for v in sorted(self.nodes, key=lambda u: -self._depth[u]):
            c = acc.get(v, 0)
            if not c:
                continue
            q, r = divmod(c, p)
            acc[v] = r
            if q:
                u = self.parent[v]
                if u is not None:
                    acc[u] = acc.get(u, 0) + q
        acc.pop(self.root, None)
        return GroupElement(
            self, tuple(sorted((v, c) for v, c in acc.items() if c))
        )

    def coeff_vector(self, x: GroupElement) -> tuple[int, ...]:
        got = dict(x.coeffs)
        return tuple(got.get(v, 0) for v in self.nonroot)

    def from_coeff_vector(self, vec: Iterable[int]) -> GroupElement:
        return self.element(dict(zip(self.nonroot, vec)))

    def elements(self, bound: int = DEFAULT_BOUND) -> Iterator[GroupElement]:
        """All elements, in coefficient-vector lex order."""
        if self.size > bound:
            raise BoundExceeded(f"|G| = {self.size} exceeds bound {bound}")
        for vec in itertools.product(range(self.p), repeat=len(self.nonroot)):
            yield GroupElement(
                self,
                tuple(
                    (v, c) for v, c in zip(self.nonroot, vec) if c
                ),
            )

    # -- operations ---------------------------------------------------------

    def times_p(self, x: GroupElement) -> GroupElement:
        raw: dict[str, int] = {}
        for v, c in x.coeffs:
            u = self.parent[v]
            if u is not None:
                raw[u] = raw.get(u, 0) + c
        return self.element(raw)

    def order_of(self, x: GroupElement) -> int:
        k = 0
        while not x.is_zero:
            x = self.times_p(x)
            k += 1
        return self.p**k

    def height_of(self, x: GroupElement) -> HeightValue:
        if x.is_zero:
            return INFINITY
        return nat(min(self._rank[v] for v, _ in x.coeffs))

    def height_of_by_chain(
        self, x: GroupElement, bound: int = DEFAULT_BOUND
    ) -> HeightValue:
        if x.is_zero:
            return INFINITY
        chain = self.pk_chain(bound)
        k = 0
        while k + 1 < len(chain) and x in chain[k + 1]:
            k += 1
        return nat(k)

    def pk_chain(self, bound: int = DEFAULT_BOUND) -> list[frozenset[GroupElement]]:
        """[G, pG, p^2 G, ...] down to {0} (inclusive)."""
        cached = getattr(self, "_chain", None)
        if cached is not None:
            return cached
        layer = frozenset(self.elements(bound))
        chain = [layer]
        while len(layer) > 1:
            layer = frozenset(self.times_p(x) for x in layer)
            chain.append(layer)
        self._chain = chain
        return chain

    def pk_subgroup(self, k: int, bound: int = DEFAULT_BOUND) -> frozenset[GroupElement]:
        chain = self.pk_chain(bound)
        return chain[k] if k < len(chain) else chain[-1]

    def socle(self, bound: int = DEFAULT_BOUND) -> list[GroupElement]:
        """Elements of order dividing p, in lex order."""
        return [x for x in self.elements(bound) if x.times_p().is_zero]

    def p_beta_space(
        self, beta: int, bound: int = DEFAULT_BOUND
    ) -> tuple[list[GroupElement], int]:
        """GF(p) basis and dimension of {x : px = 0, h(x) >= beta}."""
        space = [
            x
            for x in self.socle(bound)
            if x.is_zero or self.height_of(x) >= nat(beta)
        ]
        basis: list[GroupElement] = []
        span = {self._zero}
        for x in space:
            if x in span:
                continue
            basis.append(x)
            span = {
                s + (k * x) for s in span for k in range(self.p)
            }
        return basis, len(basis)

    def subgroup(
        self, gens: Iterable[GroupElement], bound: int = DEFAULT_BOUND
    ) -> frozenset[GroupElement]:
        gens = list(gens)
        closure = {self._zero}
        frontier = [self._zero]
        while frontier:
            fresh = []
            for x in frontier:
                for g in gens:
                    y = x + g
                    if y not in closure:
                        if len(closure) >= bound:
                            raise BoundExceeded(f"subgroup exceeds {bound}")
                        closure.add(y)
                        fresh.append(y)
            frontier = fresh
        return frozenset(closure)

    def __str__(self) -> str:
        return f"GroupTree(p={self.p}, nodes={len(self.nodes)})"

    __repr__ = __str__


def generated_iso(A, abar, B, bbar, bound: int = DEFAULT_BOUND):
    """Try to extend abar[i] -> bbar[i] to an isomorphism <abar> -> <bbar>.

    A and B only need ``zero()`` plus element ``+``; tree groups and
    fragments both qualify. Returns the full mapping dict (zero included)
    or None. The extension, when it exists, is unique, so this doubles as
    a membership-respecting closure of the correspondence.
    """
    abar, bbar = tuple(abar), tuple(bbar)
    if len(abar) != len(bbar):
        raise ValueError("tuples must have equal length")
    mapping = {A.zero(): B.zero()}
    frontier = [A.zero()]
    while frontier:
        fresh = []
        for x in frontier:
            u = mapping[x]
            for g, h in zip(abar, bbar):
                x2 = x + g
                u2 = u + h
                seen = mapping.get(x2)
                if seen is None:
                    if len(mapping) >= bound:
                        raise BoundExceeded(f"generated subgroup exceeds {bound}")
                    mapping[x2] = u2
                    fresh.append(x2)
                elif seen != u2:
                    return None
        frontier = fresh
    if len(set(mapping.values())) != len(mapping):
        return None
    return mapping
