"""Radius-t views on rings and the local protocol complexes built from them.

Rings are modelled as long rings: a facet is three consecutive views whose
union is a window of 2t+3 distinct positions, so windows never wrap.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Iterable, List, Optional, Sequence, Tuple

from .complex import Complex, Facet, Vertex, make_complex
from .errors import EmptyComplex, LclError, NoIds, RadiusMismatch, UnsupportedDegree
from .task import LclTask, build_input_complex
from .values import IdLabel, RingView, value_key

NONE = "none"
ARBITRARY = "arbitrary"
INCREASING = "increasing"


@dataclass(frozen=True)
class IdMode:
    kind: str = NONE
    R: Optional[int] = None

    def __post_init__(self):
        if self.kind not in (NONE, ARBITRARY, INCREASING):
            raise LclError(f"unknown id mode {self.kind!r}")
        if self.kind != NONE and (self.R is None or self.R < 1):
            raise LclError(f"id mode {self.kind} needs a positive R")

    @property
    def has_ids(self) -> bool:
        return self.kind != NONE

    def __str__(self):
        return self.kind if self.kind == NONE else f"{self.kind}:{self.R}"

    @classmethod
    def parse(cls, text: str, R: Optional[int] = None) -> "IdMode":
        kind, _, r = text.partition(":")
        if r:
            R = int(r)
        return cls(kind, R if kind != NONE else None)


def view_bound(d: int, k: int) -> int:
    """Number of nodes in a radius-k ball of a d-regular tree."""
    if d == 2:
        return 1 + 2 * k
    return 1 + d * ((d - 1) ** k - 1) // (d - 2)


def default_R(t: int, d: int = 2) -> int:
    return view_bound(d, t + 1)


def _check_mode(mode: IdMode, length: int, universe) -> None:
    if mode.has_ids and len(universe) < length:
        raise LclError(f"{mode} cannot label {length} positions with distinct IDs")


def _universe(mode: IdMode, id_universe) -> Sequence[int]:
    if id_universe is not None:
        return tuple(id_universe)
    return tuple(range(1, mode.R + 1)) if mode.has_ids else ()


def _id_sequences(mode: IdMode, length: int, universe):
    if mode.kind == ARBITRARY:
        return permutations(universe, length)
    if mode.kind == INCREASING:
        return combinations(universe, length)
    return [None]


def label_windows(task: LclTask, length: int) -> List[Tuple[str, ...]]:
    """All promise-satisfying label windows of the given length, built by
    extending prefixes (the promise is closed under taking sub-windows)."""
    tail = max([3] + [len(p) for p in task.forbidden])
    windows = [(a,) for a in task.in_labels]
    for _ in range(length - 1):
        windows = [w + (a,) for w in windows for a in task.in_labels if task.window_ok((w + (a,))[-tail:])]
    return windows


def _check_ring(task: LclTask, t: int) -> None:
    if t >= 1 and task.degree != 2:
        raise UnsupportedDegree(f"protocol complexes for t >= 1 are only built for rings (degree 2), got degree {task.degree}")


def enumerate_views(task: LclTask, t: int, mode: IdMode = IdMode(), id_universe=None) -> List[RingView]:
    """All radius-t views satisfying the promise, in canonical order."""
    _check_ring(task, t)
    length = 2 * t + 1
    universe = _universe(mode, id_universe)
    _check_mode(mode, length, universe)
    views = []
    for labels in label_windows(task, length):
        for ids in _id_sequences(mode, length, universe):
            views.append(RingView(labels, None if ids is None else tuple(ids)))
    views.sort(key=value_key)
    return views


def _window_valid(task: LclTask, view: RingView, mode: IdMode) -> bool:
    if not task.window_ok(view.labels):
        return False
    if view.ids is not None:
        if len(set(view.ids)) != len(view.ids):
            return False
        if mode.kind == INCREASING and any(a >= b for a, b in zip(view.ids, view.ids[1:])):
            return False
    return True


def compatible(w_left: RingView, w_mid: RingView, w_right: RingView, task: LclTask, mode: IdMode = IdMode()):
    """Merged window of three mutually compatible views, or ``False``."""
    if not (w_left.radius == w_mid.radius == w_right.radius):
        raise RadiusMismatch(f"radii {w_left.radius}, {w_mid.radius}, {w_right.radius}")
    if not (w_left.has_ids == w_mid.has_ids == w_right.has_ids):
        raise RadiusMismatch("views disagree on carrying IDs")
    sl, sm, sr = w_left.states(), w_mid.states(), w_right.states()
    if sl[1:] != sm[:-1] or sm[1:] != sr[:-1]:
        return False
    merged = RingView.from_states(sl + sm[-1:] + sr[-1:])
    return merged if _window_valid(task, merged, mode) else False


def merged_window(facet: Facet) -> RingView:
    """The 2t+3 window a protocol-complex facet was built from."""
    left, mid, right = (v.value for v in facet)
    return RingView.from_states(left.states() + mid.states()[-1:] + right.states()[-1:])


def split_window(window: RingView) -> Tuple[RingView, RingView, RingView]:
    states = window.states()
    n = len(states) - 2
    return tuple(RingView.from_states(states[i:i + n]) for i in range(3))


def build_protocol_complex(task: LclTask, t: int, mode: IdMode = IdMode(), id_universe=None) -> Complex:
    """P^(t) for rings; for t = 0 and any degree, the ID-decorated input complex
    with radius-0 views as values."""
    _check_ring(task, t)
    universe = _universe(mode, id_universe)
    if task.degree != 2:
        return _star_protocol_complex(task, mode, universe)
    length = 2 * t + 3
    _check_mode(mode, length, universe)
    facets = []
    names = task.names
    for labels in label_windows(task, length):
        for ids in _id_sequences(mode, length, universe):
            window = RingView(labels, None if ids is None else tuple(ids))
            facets.append(list(zip(names, split_window(window))))
    if not facets:
        raise EmptyComplex(f"no admissible {length}-window for task {task.name}")
    return make_complex(2, facets)


def _star_protocol_complex(task: LclTask, mode: IdMode, universe) -> Complex:
    if mode.kind == INCREASING:
        raise UnsupportedDegree("increasing IDs are only defined along a ring")
    names = task.names
    _check_mode(mode, len(names), universe)
    facets = []
    for f in build_input_complex(task).facets:
        for ids in _id_sequences(mode, len(names), universe):
            if ids is None:
                facets.append([(v.name, RingView((v.value,))) for v in f])
            else:
                facets.append([(v.name, RingView((v.value,), (i,))) for v, i in zip(f, ids)])
    if not facets:
        raise EmptyComplex("no input facet")
    return make_complex(task.degree, facets)


def build_id_input_complex(task: LclTask, mode: IdMode = IdMode(), id_universe=None) -> Complex:
    """I_{d,X}: input facets with IDs attached as :class:`IdLabel` values."""
    if not mode.has_ids:
        return build_input_complex(task)
    P0 = build_protocol_complex(task, 0, mode, id_universe)
    facets = [[(v.name, IdLabel(v.value.ids[0], v.value.labels[0])) for v in f] for f in P0.facets]
    return make_complex(task.degree, facets)


def pi(v) -> Vertex:
    """Strip IDs from a vertex value, keeping the name."""
    name, value = v
    if isinstance(value, IdLabel):
        return Vertex(name, value.label)
    if isinstance(value, RingView):
        return Vertex(name, value.strip_ids())
    raise NoIds(f"vertex {name}:{value} carries no IDs")


def _state_of(value):
    if isinstance(value, IdLabel):
        return (value.id, value.label)
    if isinstance(value, RingView):
        if value.radius != 0:
            raise LclError(f"input facets carry single states, got view {value}")
        return value.states()[0]
    return value


_XI_CACHE: dict = {}


def _xi_index(P: Complex, t: int):
    key = (id(P), t)
    hit = _XI_CACHE.get(key)
    if hit is not None and hit[0] is P:
        return hit[1]
    index: dict = {}
    for f in P.facets:
        index.setdefault(tuple(merged_window(f).states()[t:t + 3]), []).append(f)
    if len(_XI_CACHE) >= 8:
        _XI_CACHE.clear()
    _XI_CACHE[key] = (P, index)
    return index


def xi(F: Iterable, t: int, P: Complex) -> Tuple[Facet, ...]:
    """Facets of ``P`` whose central three states are those of input facet ``F``."""
    target = tuple(_state_of(v[1]) for v in sorted(F, key=lambda v: v[0]))
    return tuple(_xi_index(P, t).get(target, ()))


def canonicalize_ids(w: RingView) -> RingView:
    """Replace IDs by their ranks 1..len within the view."""
    if w.ids is None:
        raise NoIds(f"view {w} carries no IDs")
    order = sorted(w.ids)
    rank = {x: i + 1 for i, x in enumerate(order)}
    return RingView(w.labels, tuple(rank[x] for x in w.ids))
