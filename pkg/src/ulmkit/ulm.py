"""Ulm invariants: concrete computation and symbolic profiles.

For a tree group, u_beta(G) is the GF(p) dimension of P_beta / P_{beta+1}
where P_beta = {x : px = 0, h(x) >= beta}; only finite beta occur.

Infinitely generated groups are described symbolically by a Profile: an
ordinal length plus an ordered list of first-match rule clauses assigning a
value (a natural number or omega) to each beta below the length, optionally
filtered by the parity of beta's finite part. All profile predicates here
(totality, equality, interval comparison, socle mass) are decided exactly by
segmentation: between two adjacent clause boundaries the assigned value can
only depend on that parity, so the two ordinals a and a+1 decide the whole
segment.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .ordinal import OMEGA, Ordinal, nat
from .pgroup import DEFAULT_BOUND, GroupTree


class _OmegaValue:
    """Invariant value omega (countably infinite dimension)."""

    _instance = None
    __slots__ = ()

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("ulmkit-omega-value")

    def __str__(self):
        return "w"

    __repr__ = __str__


OMEGA_VALUE = _OmegaValue()

UValue = Union[int, _OmegaValue]


def value_ge(a: UValue, b: UValue) -> bool:
    if a is OMEGA_VALUE:
        return True
    if b is OMEGA_VALUE:
        return False
    return a >= b


def _value_sum(parts: Iterable[UValue]) -> UValue:
    total = 0
    for v in parts:
        if v is OMEGA_VALUE:
            return OMEGA_VALUE
        total += v
    return total


# -- profiles ---------------------------------------------------------------


@dataclass(frozen=True)
class Clause:
    lo: Ordinal
    hi: Ordinal
    parity: str = "any"  # any | even | odd (parity of the finite part)
    value: UValue = 0

    def __post_init__(self):
        if isinstance(self.lo, int):
            object.__setattr__(self, "lo", nat(self.lo))
        if isinstance(self.hi, int):
            object.__setattr__(self, "hi", nat(self.hi))
        if self.parity not in ("any", "even", "odd"):
            raise ValueError(f"bad parity {self.parity!r}")
        if self.value is not OMEGA_VALUE and (
            not isinstance(self.value, int) or self.value < 0
        ):
            raise ValueError(f"bad invariant value {self.value!r}")
        if not self.lo < self.hi:
            raise ValueError(f"empty clause interval [{self.lo}, {self.hi})")

    def matches(self, beta: Ordinal) -> bool:
        if not (self.lo <= beta < self.hi):
            return False
        if self.parity == "any":
            return True
        want = 0 if self.parity == "even" else 1
        return beta.finite_part % 2 == want


@dataclass(frozen=True)
class Profile:
    """Total invariant function on [0, length), first matching clause wins."""

    length: Ordinal
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if not isinstance(self.clauses, tuple):
            object.__setattr__(self, "clauses", tuple(self.clauses))
        for a, b in self._segments(nat(0), self.length):
            for rep in _segment_reps(a, b):
                if not any(cl.matches(rep) for cl in self.clauses):
                    raise ValueError(
                        f"profile not total: no clause covers {rep}"
                    )

    def value_at(self, beta: Ordinal) -> UValue:
        """Invariant at beta; ordinals at or beyond the length give 0."""
        if not beta < self.length:
            return 0
        for cl in self.clauses:
            if cl.matches(beta):
                return cl.value
        raise AssertionError("validated profile missed a point")

    def boundaries(self) -> list[Ordinal]:
        pts = {self.length}
        for cl in self.clauses:
            pts.add(cl.lo)
            pts.add(cl.hi)
        return sorted(pts)

    def _segments(self, lo: Ordinal, hi: Ordinal):
        pts = sorted(
            {p for p in self.boundaries() if lo < p < hi} | {lo, hi}
        )
        return zip(pts, pts[1:])

    @property
    def limit_infinite(self) -> bool:
        """True when the invariant is omega at every limit below the length."""
        for a, b in self._segments(nat(0), self.length):
            rep = _limit_rep(a, b)
            if rep is not None and self.value_at(rep) is not OMEGA_VALUE:
                return False
        return True

    def __str__(self) -> str:
        rows = ", ".join(
            f"[{c.lo},{c.hi}){'' if c.parity == 'any' else ':' + c.parity}"
            f"={c.value}"
            for c in self.clauses
        )
        return f"Profile(len={self.length}; {rows})"


def _segment_reps(a: Ordinal, b: Ordinal) -> list[Ordinal]:
    """One ordinal per parity class present in [a, b)."""
    reps = [a]
    nxt = a + 1
    if nxt < b:
        reps.append(nxt)
    return reps


def _limit_rep(a: Ordinal, b: Ordinal) -> Optional[Ordinal]:
    """Some limit ordinal in [a, b), or None; one decides the whole segment."""
    if a.is_limit and not a.is_zero:
        return a
    cand = a.limit_part + OMEGA
    return cand if cand < b else None


def _count_parity(a: Ordinal, b: Ordinal, parity: int) -> UValue:
    """How many ordinals in [a, b) have finite part congruent to parity."""
    if b.limit_part > a.limit_part:
        return OMEGA_VALUE
    fa, fb = a.finite_part, b.finite_part
    lo = fa + (parity - fa) % 2
    return max(0, (fb - lo + 1) // 2)


def _joint_segments(
    profiles: Sequence[Profile], lo: Ordinal, hi: Ordinal
):
    pts: set[Ordinal] = {lo, hi}
    for p in profiles:
        pts.update(x for x in p.boundaries() if lo < x < hi)
    ordered = sorted(pts)
    return zip(ordered, ordered[1:])


def profiles_agree_on(
    P: Profile, Q: Profile, lo: Ordinal, hi: Ordinal, mode: str = "eq"
) -> bool:
    """Compare invariants pointwise on [lo, hi): mode 'eq' or 'ge' (P >= Q)."""
    if not lo < hi:
        return True
    for a, b in _joint_segments((P, Q), lo, hi):
        for rep in _segment_reps(a, b):
            vp, vq = P.value_at(rep), Q.value_at(rep)
            if mode == "eq":
                if vp != vq:
                    return False
            elif mode == "ge":
                if not value_ge(vp, vq):
                    return False
            else:
                raise ValueError(f"bad mode {mode!r}")
    return True


def ulm_equal(P: Profile, Q: Profile) -> bool:
    """Extensional equality of the invariant functions (0 beyond length)."""
    hi = max(P.length, Q.length)
    if hi.is_zero:
        return True
    return profiles_agree_on(P, Q, nat(0), hi, "eq")


def socle_mass_above(P: Profile, theta: Ordinal) -> UValue:
    """Total socle dimension at heights >= theta: sum of u_beta, beta >= theta."""
    if not theta < P.length:
        return 0
    parts: list[UValue] = []
    for a, b in _joint_segments((P,), theta, P.length):
        for rep in _segment_reps(a, b):
            v = P.value_at(rep)
            if v == 0:
                continue
            cnt = _count_parity(a, b, rep.finite_part % 2)
            if cnt == 0:
                continue
            if cnt is OMEGA_VALUE or v is OMEGA_VALUE:
                return OMEGA_VALUE
            parts.append(v * cnt)
    return _value_sum(parts)


def socle_infinite_above(P: Profile, theta: Ordinal) -> bool:
    return socle_mass_above(P, theta) is OMEGA_VALUE


def band_split_index(P: Profile, thr: Ordinal) -> Optional[int]:
    """Classify the socle sizes P_{thr+k} over finite k.

    Returns None when P_{thr+k} is infinite for every k; otherwise the
    largest k with P_{thr+k} infinite (so P_{thr+k+1} is finite), or -1 when
    already P_thr is finite.
    """
    offsets = {0}
    for pt in P.boundaries():
        if thr <= pt < thr + OMEGA and pt.limit_part == thr.limit_part:
            offsets.add(pt.finite_part - thr.finite_part)
    ceiling = max(offsets) + 1
    if socle_infinite_above(P, thr + ceiling):
        return None
    k = None
    for j in range(ceiling + 1):
        if socle_infinite_above(P, thr + j):
            k = j
    return k if k is not None else -1


# -- invariants of explicit trees -------------------------------------------


_invariants_cache: dict = {}


def invariants_of(tree: GroupTree, bound: int = DEFAULT_BOUND) -> Profile:
    cached = _invariants_cache.get((tree, bound))
    if cached is not None:
        return cached
    length = tree.length()
    dims = [tree.p_beta_space(n, bound)[1] for n in range(length + 1)]
    clauses = tuple(
        Clause(nat(n), nat(n + 1), "any", dims[n] - dims[n + 1])
        for n in range(length)
    )
    profile = Profile(nat(length), clauses)
    _invariants_cache[(tree, bound)] = profile
    return profile


def holds_B(tree: GroupTree, n: int, beta: int, bound: int = DEFAULT_BOUND) -> bool:
    """Test for n independent order-p elements of height >= beta.

    Deliberately avoids the invariant machinery: memberships come from the
    literal p^k G chain and independence over G_{beta+1} is checked on all
    nontrivial combinations. Greedy extension is complete here because
    linear independence over a subspace is a matroid.
    """
    if n == 0:
        return True
    chain = tree.pk_chain(bound)
    G_beta = chain[beta] if beta < len(chain) else chain[-1]
    G_next = chain[beta + 1] if beta + 1 < len(chain) else chain[-1]
    P_beta = [x for x in G_beta if x.times_p().is_zero and not x.is_zero]
    picked: list = []
    for x in P_beta:
        ok = True
        for combo in itertools.product(range(tree.p), repeat=len(picked)):
            for b in range(1, tree.p):
                cand = b * x
                for coef, y in zip(combo, picked):
                    cand = cand + coef * y
                if cand in G_next:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            picked.append(x)
            if len(picked) >= n:
                return True
    return False


# -- profile constructors ----------------------------------------------------


def make_G_hat(alpha: Ordinal, seq, i: int) -> Profile:
    """Invariant profile of the i-th comparison group over limit alpha.

    i = 0: omega everywhere below alpha. i >= 1: omega below the i-th term
    of the cofinal sequence, omega at even slots up to alpha, 0 at the
    remaining odd slots.
    """
    if not alpha.is_limit:
        raise ValueError("alpha must be a limit ordinal")
    if i == 0:
        return Profile(alpha, (Clause(nat(0), alpha, "any", OMEGA_VALUE),))
    cut = seq.at(i)
    return Profile(
        alpha,
        (
            Clause(nat(0), cut, "any", OMEGA_VALUE),
            Clause(nat(0), alpha, "even", OMEGA_VALUE),
            Clause(nat(0), alpha, "any", 0),
        ),
    )


def profile_omega_shift(P: Profile) -> Profile:
    """Invariants of Z_{p^inf-free prefix}: omega on [0, w), then P shifted by w.

    Models gluing a length-w part with all invariants omega below a copy of
    P living on [w, w + len(P)); finite parts are unchanged so clause
    parities carry over.
    """
    shifted = tuple(
        Clause(OMEGA + cl.lo, OMEGA + cl.hi, cl.parity, cl.value)
        for cl in P.clauses
    )
    head = Clause(nat(0), OMEGA, "any", OMEGA_VALUE)
    return Profile(OMEGA + P.length, (head,) + shifted)


@dataclass(frozen=True)
class RealizedProfile:
    tree: GroupTree
    truncated: bool
    counts: tuple[tuple[int, int], ...]  # (n, number of Z_{p^{n+1}} summands)


def realize_finite_profile(
    P: Profile, p: int, budget: int = 3
) -> RealizedProfile:
    """Build a tree group with the profile's invariants.

    Omega values are truncated to ``budget`` summands and flagged. Only
    finite-length profiles can be realized by a finite tree.
    """
    if not P.length.is_finite:
        raise ValueError(f"profile length {P.length} is not finite")
    parent: dict[str, Optional[str]] = {"r": None}
    truncated = False
    counts = []
    for n in range(P.length.as_int()):
        v = P.value_at(nat(n))
        if v is OMEGA_VALUE:
            k, truncated = budget, True
        else:
            k = v
        counts.append((n, k))
        for j in range(k):
            prev = "r"
            for d in range(n + 1):
                node = f"u{n}x{j}d{d}"
                parent[node] = prev
                prev = node
    return RealizedProfile(GroupTree(p, parent), truncated, tuple(counts))
