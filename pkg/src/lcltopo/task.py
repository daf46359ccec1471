"""LCL tasks: label alphabets, good stars, the input/output relation, and the
input and output complexes they induce."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import FrozenSet, Iterable, NamedTuple, Optional, Sequence, Tuple

from .complex import Complex, Facet, Vertex, default_names, make_complex
from .errors import EmptyComplex, SemanticError, TaskSyntaxError
from .values import UNIT, label_key


class Star(NamedTuple):
    center: str
    leaves: Tuple[str, ...]  # sorted, so equal multisets compare equal

    @classmethod
    def of(cls, center, leaves) -> "Star":
        return cls(center, tuple(sorted(leaves, key=label_key)))

    def to_json(self):
        return {"center": self.center, "leaves": list(self.leaves)}


@dataclass(frozen=True)
class Unconstrained:
    pass


@dataclass(frozen=True)
class PerNode:
    relation: FrozenSet[Tuple[str, str]]


@dataclass(frozen=True)
class ExplicitPairs:
    pairs: FrozenSet[Tuple[Star, Star]]


@dataclass(frozen=True)
class LclTask:
    name: str
    degree: int
    in_labels: Tuple[str, ...]
    in_stars: FrozenSet[Star]
    out_labels: Tuple[str, ...]
    out_stars: FrozenSet[Star]
    delta: object = field(default_factory=Unconstrained)
    # label patterns that never occur in an input ring; pattern symbols are
    # variables bound injectively to labels
    forbidden: Tuple[Tuple[str, ...], ...] = ()

    @property
    def names(self):
        return default_names(self.degree)

    def window_ok(self, labels: Sequence[str]) -> bool:
        """Input promise on a contiguous (non-wrapping) ring window."""
        if any(a not in self.in_labels for a in labels):
            return False
        for i in range(1, len(labels) - 1):
            if Star.of(labels[i], (labels[i - 1], labels[i + 1])) not in self.in_stars:
                return False
        return not any(matches_pattern(labels, p) for p in self.forbidden)


def matches_pattern(labels: Sequence[str], pattern: Sequence[str]) -> bool:
    """True if some contiguous window of ``labels`` instantiates ``pattern``."""
    k = len(pattern)
    for start in range(len(labels) - k + 1):
        binding = {}
        used = set()
        for sym, lab in zip(pattern, labels[start:start + k]):
            if sym in binding:
                if binding[sym] != lab:
                    break
            elif lab in used:
                break
            else:
                binding[sym] = lab
                used.add(lab)
        else:
            return True
    return False


def all_stars(labels: Iterable[str], d: int) -> FrozenSet[Star]:
    labels = list(labels)
    return frozenset(Star.of(c, ls) for c in labels for ls in product(labels, repeat=d))


def proper_stars(labels: Iterable[str], d: int) -> FrozenSet[Star]:
    return frozenset(s for s in all_stars(labels, d) if s.center not in s.leaves)


def mis_stars(d: int) -> FrozenSet[Star]:
    stars = set()
    for s in all_stars(("0", "1"), d):
        if s.center == "1" and "1" not in s.leaves:
            stars.add(s)
        elif s.center == "0" and "1" in s.leaves:
            stars.add(s)
    return frozenset(stars)


def _sorted_labels(labels) -> Tuple[str, ...]:
    return tuple(sorted(set(labels), key=label_key))


def builtin_task(name: str, degree: int = 2) -> LclTask:
    """Expand one of the builtin task names."""
    three = ("1", "2", "3")
    if name == "mis":
        return LclTask(name, degree, (UNIT,), all_stars((UNIT,), degree), ("0", "1"), mis_stars(degree))
    if name.startswith("coloring:"):
        k = int(name.split(":", 1)[1])
        if k < 1:
            raise SemanticError("coloring needs at least one color")
        colors = tuple(str(c) for c in range(1, k + 1))
        return LclTask(name, degree, (UNIT,), all_stars((UNIT,), degree), colors, proper_stars(colors, degree))
    if name == "3col-to-mis":
        return LclTask(name, degree, three, proper_stars(three, degree), ("0", "1"), mis_stars(degree))
    if name == "3col-no-xyzyx":
        if degree != 2:
            raise SemanticError("3col-no-xyzyx is a ring task")
        return LclTask(name, 2, three, proper_stars(three, 2), ("0", "1"), mis_stars(2),
                       forbidden=(("x", "y", "z", "y", "x"),))
    raise SemanticError(f"unknown builtin task {name!r}")


BUILTINS = ("mis", "coloring:k", "3col-to-mis", "3col-no-xyzyx")


def _stars_from_doc(spec, labels, d, side):
    if spec == "all":
        return all_stars(labels, d)
    if spec == "proper":
        return proper_stars(labels, d)
    if spec == "mis":
        return mis_stars(d)
    if not isinstance(spec, list):
        raise SemanticError(f"{side}_stars must be a list, 'all' or 'proper'")
    stars = set()
    for entry in spec:
        try:
            center, leaves = str(entry["center"]), [str(x) for x in entry["leaves"]]
        except (TypeError, KeyError):
            raise SemanticError(f"bad star entry {entry!r} in {side}_stars") from None
        if len(leaves) != d:
            raise SemanticError(f"star {entry!r} has {len(leaves)} leaves, degree is {d}")
        for a in [center, *leaves]:
            if a not in labels:
                raise SemanticError(f"label {a!r} used in {side}_stars but not declared")
        stars.add(Star.of(center, leaves))
    return frozenset(stars)


def _delta_from_doc(spec, in_labels, out_labels):
    if spec is None or spec == "unconstrained":
        return Unconstrained()
    if isinstance(spec, dict) and "per_node" in spec:
        rel = set()
        for pair in spec["per_node"]:
            a, b = (str(x) for x in pair)
            if a not in in_labels or b not in out_labels:
                raise SemanticError(f"per_node pair {pair!r} uses undeclared labels")
            rel.add((a, b))
        missing = [a for a in in_labels if not any(p[0] == a for p in rel)]
        if missing:
            raise SemanticError(f"per_node relation allows no output for inputs {missing}")
        return PerNode(frozenset(rel))
    if isinstance(spec, dict) and "pairs" in spec:
        pairs = set()
        for entry in spec["pairs"]:
            try:
                s_in, s_out = entry
                pairs.add((Star.of(str(s_in["center"]), [str(x) for x in s_in["leaves"]]),
                           Star.of(str(s_out["center"]), [str(x) for x in s_out["leaves"]])))
            except (TypeError, KeyError, ValueError):
                raise SemanticError(f"bad delta pair {entry!r}") from None
        return ExplicitPairs(frozenset(pairs))
    raise SemanticError(f"unrecognized delta {spec!r}")


def task_from_doc(doc: dict) -> LclTask:
    if not isinstance(doc, dict):
        raise SemanticError("task document must be a JSON object")
    degree = doc.get("degree", 2)
    if not isinstance(degree, int) or degree < 1:
        raise SemanticError(f"degree must be a positive integer, got {degree!r}")
    if "builtin" in doc:
        return builtin_task(str(doc["builtin"]), degree)
    if "out_labels" not in doc:
        raise SemanticError("missing out_labels")
    if "out_stars" not in doc:
        raise SemanticError("missing out_stars")
    if "in_labels" in doc:
        in_labels = _sorted_labels(str(x) for x in doc["in_labels"])
        in_stars = _stars_from_doc(doc.get("in_stars", "all"), in_labels, degree, "in")
    else:
        in_labels = (UNIT,)
        in_stars = all_stars(in_labels, degree)
    out_labels = _sorted_labels(str(x) for x in doc["out_labels"])
    if not in_labels or not out_labels:
        raise SemanticError("label sets must be nonempty")
    out_stars = _stars_from_doc(doc["out_stars"], out_labels, degree, "out")
    if not in_stars:
        raise SemanticError("empty in_stars")
    if not out_stars:
        raise SemanticError("empty out_stars")
    forbidden = tuple(tuple(str(s) for s in p) for p in doc.get("forbidden_patterns", ()))
    return LclTask(str(doc.get("name", "task")), degree, in_labels, in_stars, out_labels, out_stars,
                   _delta_from_doc(doc.get("delta"), in_labels, out_labels), forbidden)


def parse_task(text: str) -> LclTask:
    """Parse a JSON task document (see docs/formats.md)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise TaskSyntaxError(e.msg, e.lineno, e.colno) from None
    return task_from_doc(doc)


def task_to_doc(task: LclTask) -> dict:
    def stars(ss):
        return [s.to_json() for s in sorted(ss, key=lambda s: (label_key(s.center), [label_key(x) for x in s.leaves]))]

    doc = {
        "name": task.name,
        "degree": task.degree,
        "in_labels": list(task.in_labels),
        "in_stars": stars(task.in_stars),
        "out_labels": list(task.out_labels),
        "out_stars": stars(task.out_stars),
    }
    d = task.delta
    if isinstance(d, PerNode):
        doc["delta"] = {"per_node": [list(p) for p in sorted(d.relation, key=lambda p: (label_key(p[0]), label_key(p[1])))]}
    elif isinstance(d, ExplicitPairs):
        doc["delta"] = {"pairs": [[a.to_json(), b.to_json()] for a, b in sorted(d.pairs)]}
    else:
        doc["delta"] = "unconstrained"
    if task.forbidden:
        doc["forbidden_patterns"] = [list(p) for p in task.forbidden]
    return doc


def induced_star(labels_by_name: dict) -> Star:
    return Star.of(labels_by_name[0], [a for n, a in labels_by_name.items() if n != 0])


def _labelled_complex(task: LclTask, labels, stars) -> Complex:
    names = task.names
    facets = []
    for combo in product(labels, repeat=len(names)):
        assignment = dict(zip(names, combo))
        if induced_star(assignment) in stars:
            facets.append(list(assignment.items()))
    if not facets:
        raise EmptyComplex("no labelled star qualifies")
    return make_complex(task.degree, facets)


def build_input_complex(task: LclTask) -> Complex:
    return _labelled_complex(task, task.in_labels, task.in_stars)


def build_output_complex(task: LclTask) -> Complex:
    return _labelled_complex(task, task.out_labels, task.out_stars)


def good_star(task: LclTask, side: str, star: Star) -> bool:
    stars = task.in_stars if side == "in" else task.out_stars
    return Star.of(star.center, star.leaves) in stars


def delta_allows(task: LclTask, in_facet: Facet, out_facet: Facet) -> bool:
    d = task.delta
    if isinstance(d, Unconstrained):
        return True
    xs = {v.name: v.value for v in in_facet}
    ys = {v.name: v.value for v in out_facet}
    if isinstance(d, PerNode):
        return all((xs[n], ys[n]) in d.relation for n in xs)
    return (induced_star(xs), induced_star(ys)) in d.pairs


def allowed_outputs(task: LclTask, in_labels: Tuple[str, ...], output: Optional[Complex] = None) -> FrozenSet[Tuple[str, ...]]:
    """Output label tuples (ordered by name) legal for an input label tuple."""
    output = output or build_output_complex(task)
    in_facet = tuple(Vertex(n, a) for n, a in zip(task.names, in_labels))
    return frozenset(tuple(v.value for v in f) for f in output.facets if delta_allows(task, in_facet, f))
