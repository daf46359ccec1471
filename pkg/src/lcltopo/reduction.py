"""Round reduction for ring colouring: the set-family functor, the gluing map
from (t-1)-round views to families of t-round views, and the tower / log*
arithmetic behind the resulting lower bound.

Nothing here materialises a family complex; the facet condition is only
evaluated on the triples a reduction actually touches.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import total_ordering
from itertools import product
from typing import Dict, Iterable, Mapping, Optional

from .complex import Complex, Vertex, is_simplex
from .errors import IdRangeExhausted, IncompleteTable, LclError, VerificationFailed
from .protocol import INCREASING, IdMode, build_protocol_complex, enumerate_views
from .search import AlgorithmTable
from .task import builtin_task
from .values import UNIT, RingView, value_key


def phi_facet_ok(K: Complex, fam_left, fam_mid, fam_right) -> bool:
    """Facet test for the family complex over ``K`` (ring names -1, 0, 1).

    For each adjacent pair (left, right) of families: some member S of the
    left family is such that every member S' of the right family holds a
    value v' adjacent in ``K`` to every value of S.
    """
    cache: Dict[tuple, bool] = {}

    def edge(na, v, nb, w):
        key = (na, v, nb, w)
        if key not in cache:
            cache[key] = is_simplex(K, [Vertex(na, v), Vertex(nb, w)])
        return cache[key]

    for (na, A), (nb, B) in (((-1, fam_left), (0, fam_mid)), ((0, fam_mid), (1, fam_right))):
        if not any(all(any(all(edge(na, v, nb, w) for v in S) for w in S2) for S2 in B) for S in A):
            return False
    return True


def phi_apply_map(table: Mapping, fam) -> frozenset:
    """Apply a value map member-wise to a set family."""
    out = set()
    for S in fam:
        image = set()
        for v in S:
            try:
                image.add(table[v])
            except KeyError:
                raise IncompleteTable(v) from None
        out.add(frozenset(image))
    return frozenset(out)


def f_of_view(w: RingView, R: int, lo: int = 1, strict: bool = False) -> frozenset:
    """Family {W^b : b > max id} with W^b = {a.w.b : a < min id}, a and b in [lo, R].

    ``w`` must carry strictly increasing IDs and only unit labels.
    """
    if w.ids is None:
        raise LclError(f"view {w} carries no IDs")
    if any(a >= b for a, b in zip(w.ids, w.ids[1:])):
        raise LclError(f"view {w} does not have increasing IDs")
    if any(a != UNIT for a in w.labels):
        raise LclError("gluing map is defined for inputless (unit-labelled) views only")
    first, last = w.ids[0], w.ids[-1]
    bs = range(last + 1, R + 1)
    as_ = range(lo, first)
    if strict and (not bs or not as_):
        raise IdRangeExhausted(f"no room below {first} or above {last} in [{lo}, {R}]")
    labels = (UNIT,) + w.labels + (UNIT,)
    return frozenset(frozenset(RingView(labels, (a,) + w.ids + (b,)) for a in as_) for b in bs)


def encode_set(S: Iterable[str], k: int) -> int:
    mask = 0
    for c in S:
        i = int(c)
        if not 1 <= i <= k:
            raise LclError(f"colour {c} outside [1, {k}]")
        mask |= 1 << (i - 1)
    return mask


def encode_family(fam, k: int) -> int:
    """Colour code in [1, 2^(2^k)] of a family of subsets of {1..k}."""
    mask = 0
    for S in fam:
        mask |= 1 << encode_set(S, k)
    return mask + 1


def decode_color(code: int, k: int) -> frozenset:
    mask = code - 1
    if not 0 <= mask < 1 << (1 << k):
        raise LclError(f"colour code {code} outside [1, 2^(2^{k})]")
    fam = []
    for s in range(1 << k):
        if mask >> s & 1:
            fam.append(frozenset(str(i + 1) for i in range(k) if s >> i & 1))
    return frozenset(fam)


def coloring_task(k: int):
    return builtin_task(f"coloring:{k}")


def _first_bad_coloring(table: Mapping, P: Complex):
    for f in P.facets:
        left, mid, right = (table[v.value] for v in f)
        if mid == left or mid == right:
            return f, tuple(Vertex(v.name, table[v.value]) for v in f)
    return None


def reduce_once(delta_t, t: int, R: int, k: Optional[int] = None, verify_input: bool = True) -> AlgorithmTable:
    """Derive a (t-1)-round 2^(2^k)-colouring from a t-round k-colouring.

    ``delta_t`` maps increasing-ID views of radius t over [R] to colours
    1..k.  The derived table covers the views whose IDs lie in the interior
    {2, ..., R-1}: the gluing map needs one spare ID on each side for every
    edge it relies on.  It is checked on every facet of the (t-1)-round
    complex over that interior before being returned.
    """
    if t < 1:
        raise LclError("round reduction needs t >= 1")
    entries = delta_t.entries if isinstance(delta_t, AlgorithmTable) else dict(delta_t)
    if k is None and isinstance(delta_t, AlgorithmTable) and delta_t.task.startswith("coloring:"):
        k = int(delta_t.task.split(":", 1)[1])
    if k is None:
        k = max(int(c) for c in entries.values())
    task = coloring_task(k)
    if verify_input:
        P_t = build_protocol_complex(task, t, IdMode(INCREASING, R))
        for v in P_t.values():
            if v not in entries:
                raise IncompleteTable(v)
        bad = _first_bad_coloring(entries, P_t)
        if bad is not None:
            raise VerificationFailed(*bad)
    interior = range(2, R)
    reduced = {}
    for w in enumerate_views(task, t - 1, IdMode(INCREASING, R), id_universe=interior):
        reduced[w] = str(encode_family(phi_apply_map(entries, f_of_view(w, R - 1, lo=2)), k))
    P_prev = build_protocol_complex(task, t - 1, IdMode(INCREASING, R), id_universe=interior)
    bad = _first_bad_coloring(reduced, P_prev)
    if bad is not None:
        raise VerificationFailed(*bad)
    return AlgorithmTable(reduced, t - 1, IdMode(INCREASING, R), f"coloring:{2 ** (2 ** k)}")


def f_simplicial_violation(t: int, R: int):
    """Check the gluing map on every facet of the increasing (t-1)-round
    complex over {2..R+1} against the t-round complex over [R+2].

    Returns ``None`` or the first facet whose image fails the family facet test.
    """
    task = coloring_task(1)  # labels are irrelevant: views carry IDs only
    inner = range(2, R + 2)
    K = build_protocol_complex(task, t, IdMode(INCREASING, R + 2))
    P = build_protocol_complex(task, t - 1, IdMode(INCREASING, R + 2), id_universe=inner)
    for f in P.facets:
        fams = [f_of_view(v.value, R + 1, lo=2) for v in f]
        if not phi_facet_ok(K, *fams):
            return f
    return None


def all_families(k: int):
    return [decode_color(c, k) for c in range(1, (1 << (1 << k)) + 1)]


def phi_output_violation(k: int, samples: Optional[int] = None, seed: int = 0):
    """Look for a facet of the family complex over O_k whose colour codes are
    not a proper colouring star.  Exhaustive unless ``samples`` is given."""
    O = build_output_complex_k(k)
    fams = all_families(k)
    if samples is None:
        triples = product(fams, repeat=3)
    else:
        rng = random.Random(seed)
        triples = ((rng.choice(fams), rng.choice(fams), rng.choice(fams)) for _ in range(samples))
    checked = ok = 0
    for triple in triples:
        checked += 1
        if phi_facet_ok(O, *triple):
            ok += 1
            a, b, c = (encode_family(x, k) for x in triple)
            if b == a or b == c:
                return triple, checked, ok
    return None, checked, ok


def build_output_complex_k(k: int) -> Complex:
    from .task import build_output_complex

    return build_output_complex(coloring_task(k))


@total_ordering
@dataclass(frozen=True)
class Tower:
    """Symbolic 2^2^...^2 of the given height, for heights too big to expand."""

    height: int

    def __lt__(self, other):
        if isinstance(other, Tower):
            return self.height < other.height
        return False  # exceeds every int that fits in memory

    def __eq__(self, other):
        return isinstance(other, Tower) and other.height == self.height

    def __hash__(self):
        return hash(("tower", self.height))

    def __str__(self):
        return f"2^^{self.height}"


MAX_EXPANDED_HEIGHT = 5


def tower(h: int):
    """Tower of twos of height h: tower(0) = 1, tower(h) = 2 ** tower(h - 1)."""
    if h < 0:
        raise LclError("tower height must be non-negative")
    if h > MAX_EXPANDED_HEIGHT:
        return Tower(h)
    x = 1
    for _ in range(h):
        x = 2 ** x
    return x


def log_star(n) -> int:
    """Least h with tower(h) >= n."""
    if isinstance(n, Tower):
        return n.height
    h = 0
    while h <= MAX_EXPANDED_HEIGHT:
        if tower(h) >= n:
            return h
        h += 1
    return MAX_EXPANDED_HEIGHT + 1


def linial_bound(n) -> int:
    """ceil(log*(n) / 2) - 1 rounds are necessary to 3-colour C_n."""
    if not isinstance(n, Tower) and n < 3:
        raise LclError("the bound is stated for n >= 3")
    h = log_star(n)
    return -(-h // 2) - 1
