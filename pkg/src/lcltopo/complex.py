"""Chromatic simplicial complexes stored by their facets.

A vertex is a ``(name, value)`` pair where ``name`` is a process index.  A
facet holds exactly one vertex per process name and is kept as a tuple
sorted by name, so name-preservation of a map is a matter of construction.
Lower-dimensional simplices are never stored; :func:`is_simplex` answers
subset queries against the facets.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Tuple

from .errors import IncompleteTable, MalformedFacet, MixedValueTags
from .values import value_from_json, value_key, value_str, value_tag, value_to_json


class Vertex(NamedTuple):
    name: int
    value: object

    def __str__(self):
        return f"{self.name}:{value_str(self.value)}"


Facet = Tuple[Vertex, ...]


def default_names(degree: int) -> Tuple[int, ...]:
    """Process names for a star of the given degree; rings use -1, 0, 1."""
    if degree == 2:
        return (-1, 0, 1)
    return tuple(range(degree + 1))


def vertex_key(v: Vertex):
    return (v.name, value_key(v.value))


def facet_key(f: Facet):
    return tuple(vertex_key(v) for v in f)


def _as_facet(raw, names, degree) -> Facet:
    if isinstance(raw, Mapping):
        items = list(raw.items())
    else:
        items = [tuple(v) for v in raw]
    if len(items) != degree + 1:
        raise MalformedFacet(f"facet {raw!r} has {len(items)} vertices, expected {degree + 1}")
    seen = set()
    out = []
    for name, value in items:
        if name not in names:
            raise MalformedFacet(f"unknown process name {name!r} in facet {raw!r}")
        if name in seen:
            raise MalformedFacet(f"duplicate process name {name!r} in facet {raw!r}")
        seen.add(name)
        out.append(Vertex(name, value))
    out.sort(key=lambda v: v.name)
    return tuple(out)


@dataclass(frozen=True)
class Complex:
    degree: int
    names: Tuple[int, ...]
    facets: Tuple[Facet, ...]
    _index: Dict[Vertex, frozenset] = field(default=None, repr=False, compare=False, hash=False)

    @property
    def vertices(self) -> Tuple[Vertex, ...]:
        return tuple(sorted(self._index, key=vertex_key))

    @property
    def facet_set(self) -> frozenset:
        return frozenset(self.facets)

    def values(self) -> list:
        """Distinct vertex values, in canonical order."""
        return sorted({v.value for v in self._index}, key=value_key)

    def facets_containing(self, v: Vertex) -> frozenset:
        return self._index.get(v, frozenset())

    def __contains__(self, facet) -> bool:
        return tuple(sorted(facet, key=lambda v: v.name)) in self.facet_set

    def __len__(self):
        return len(self.facets)


def make_complex(degree: int, facets: Iterable, names: Optional[Iterable[int]] = None) -> Complex:
    """Validate, deduplicate and canonically order a facet list."""
    names = tuple(sorted(names)) if names is not None else default_names(degree)
    if len(names) < degree + 1:
        raise MalformedFacet(f"{len(names)} names cannot carry facets of degree {degree}")
    built = {_as_facet(f, names, degree) for f in facets}
    if not built:
        raise MalformedFacet("a complex needs at least one facet")
    tags = {value_tag(v.value) for f in built for v in f}
    if len(tags) > 1:
        raise MixedValueTags(f"values of several kinds in one complex: {sorted(tags)}")
    ordered = tuple(sorted(built, key=facet_key))
    index: Dict[Vertex, set] = {}
    for i, f in enumerate(ordered):
        for v in f:
            index.setdefault(v, set()).add(i)
    frozen = {v: frozenset(s) for v, s in index.items()}
    return Complex(degree, names, ordered, frozen)


def is_simplex(K: Complex, vs: Iterable) -> bool:
    vs = [Vertex(*v) for v in vs]
    if not vs:
        return False
    common = None
    for v in vs:
        hits = K.facets_containing(v)
        common = hits if common is None else common & hits
        if not common:
            return False
    return True


class Violation(NamedTuple):
    facet: Facet
    image: Facet


def apply_table(table: Mapping, facet: Facet) -> Facet:
    out = []
    for v in facet:
        try:
            out.append(Vertex(v.name, table[v.value]))
        except KeyError:
            raise IncompleteTable(v.value) from None
    return tuple(out)


def verify_simplicial(table: Mapping, src: Complex, dst: Complex) -> Optional[Violation]:
    """Return ``None`` if the name-preserving map induced by ``table`` sends
    every facet of ``src`` to a facet of ``dst``; otherwise the first
    offending facet (in canonical order) and its image."""
    for value in src.values():
        if value not in table:
            raise IncompleteTable(value)
    targets = dst.facet_set
    for f in src.facets:
        image = apply_table(table, f)
        if image not in targets:
            return Violation(f, image)
    return None


def one_skeleton(K: Complex) -> Complex:
    edges = set()
    for f in K.facets:
        edges.update(combinations(f, 2))
    return make_complex(1, edges, names=K.names)


def connected_components(K: Complex) -> List[Tuple[Facet, ...]]:
    """Blocks of facets linked by chains of shared vertices, in canonical order."""
    parent = list(range(len(K.facets)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for hits in K._index.values():
        it = iter(hits)
        first = find(next(it))
        for j in it:
            r = find(j)
            if r != first:
                parent[max(r, first)] = min(r, first)
                first = min(r, first)
    blocks: Dict[int, list] = {}
    for i, f in enumerate(K.facets):
        blocks.setdefault(find(i), []).append(f)
    return [tuple(b) for _, b in sorted(blocks.items())]


class ComponentSignature(NamedTuple):
    vertices: int
    facets: int
    degrees: Tuple[int, ...]


def component_signature(K: Complex, block) -> ComponentSignature:
    counts: Dict[Vertex, int] = {}
    for f in block:
        for v in f:
            counts[v] = counts.get(v, 0) + 1
    return ComponentSignature(len(counts), len(block), tuple(sorted(counts.values())))


def complex_to_json(K: Complex) -> dict:
    doc = {
        "degree": K.degree,
        "facets": [[[v.name, value_to_json(v.value)] for v in f] for f in K.facets],
    }
    if K.names != default_names(K.degree):
        doc["names"] = list(K.names)
    return doc


def complex_from_json(doc: dict) -> Complex:
    facets = [[(int(n), value_from_json(x)) for n, x in f] for f in doc["facets"]]
    return make_complex(int(doc["degree"]), facets, names=doc.get("names"))


def dumps(K: Complex) -> str:
    return json.dumps(complex_to_json(K), ensure_ascii=False, separators=(",", ":")) + "\n"


def to_dot(K: Complex, graph_name: str = "skeleton") -> str:
    """DOT text of the 1-skeleton; vertex ids are ``"name:value"``."""
    skel = K if K.degree == 1 else one_skeleton(K)
    lines = [f"graph {graph_name} {{"]
    for v in skel.vertices:
        lines.append(f'  "{v}";')
    for a, b in skel.facets:
        lines.append(f'  "{a}" -- "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
