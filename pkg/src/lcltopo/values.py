"""Vertex payloads: labels, ID-decorated labels, ring views and set families.

Every value is hashable and immutable.  The four kinds are told apart by
Python type:

* ``str`` -- a plain label,
* :class:`IdLabel` -- an ``(id, label)`` pair,
* :class:`RingView` -- a radius-t window of a ring,
* ``frozenset`` of ``frozenset`` -- a set family.

:func:`value_key` gives the deterministic total order used for iteration
everywhere in the package.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple, Union

from .errors import LclError, NoIds

UNIT = "⊥"

TAG_LABEL = "label"
TAG_IDLABEL = "idlabel"
TAG_VIEW = "view"
TAG_FAMILY = "family"


def label_key(label: str):
    # numeric labels sort numerically so that "10" follows "9"
    if label.isdigit():
        return (0, int(label), label)
    return (1, 0, label)


class IdLabel(NamedTuple):
    id: int
    label: str

    def __str__(self):
        return f"({self.id}:{self.label})"


@dataclass(frozen=True)
class RingView:
    """Labels (and optionally IDs) of 2t+1 consecutive ring nodes, left to right."""

    labels: Tuple[str, ...]
    ids: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if len(self.labels) % 2 != 1:
            raise LclError(f"view length must be odd, got {len(self.labels)}")
        if self.ids is not None and len(self.ids) != len(self.labels):
            raise LclError("ids and labels differ in length")

    @property
    def radius(self) -> int:
        return (len(self.labels) - 1) // 2

    @property
    def has_ids(self) -> bool:
        return self.ids is not None

    @property
    def center(self) -> str:
        return self.labels[self.radius]

    def states(self):
        if self.ids is None:
            return self.labels
        return tuple(zip(self.ids, self.labels))

    @classmethod
    def from_states(cls, states) -> "RingView":
        states = tuple(states)
        if states and isinstance(states[0], tuple):
            return cls(tuple(s[1] for s in states), tuple(int(s[0]) for s in states))
        return cls(tuple(states))

    def strip_ids(self) -> "RingView":
        if self.ids is None:
            raise NoIds(f"view {self} carries no IDs")
        return RingView(self.labels)

    def __str__(self):
        if self.ids is None:
            return "|".join(self.labels)
        return "|".join(f"({i}:{a})" for i, a in zip(self.ids, self.labels))

    @classmethod
    def parse(cls, text: str) -> "RingView":
        parts = text.split("|")
        if parts[0].startswith("("):
            ids, labels = [], []
            for p in parts:
                if not (p.startswith("(") and p.endswith(")") and ":" in p):
                    raise LclError(f"bad view state {p!r} in {text!r}")
                i, a = p[1:-1].split(":", 1)
                ids.append(int(i))
                labels.append(a)
            return cls(tuple(labels), tuple(ids))
        return cls(tuple(parts))


SetFamily = frozenset
Value = Union[str, IdLabel, RingView, frozenset]


def value_tag(v) -> str:
    if isinstance(v, str):
        return TAG_LABEL
    if isinstance(v, IdLabel):
        return TAG_IDLABEL
    if isinstance(v, RingView):
        return TAG_VIEW
    if isinstance(v, frozenset):
        return TAG_FAMILY
    raise LclError(f"unsupported value {v!r}")


def value_key(v):
    """Total order key; comparable across values of the same tag."""
    if isinstance(v, str):
        return (0, label_key(v))
    if isinstance(v, IdLabel):
        return (1, v.id, label_key(v.label))
    if isinstance(v, RingView):
        return (2, tuple(label_key(a) for a in v.labels), v.ids or ())
    if isinstance(v, frozenset):
        members = sorted(tuple(sorted(value_key(x) for x in s)) for s in v)
        return (3, tuple(members))
    raise LclError(f"unsupported value {v!r}")


def family(*members) -> frozenset:
    """Convenience constructor: ``family({1, 2}, {3})``."""
    return frozenset(frozenset(m) for m in members)


def value_str(v) -> str:
    if isinstance(v, frozenset):
        inner = []
        for s in sorted(v, key=lambda s: tuple(sorted(value_key(x) for x in s))):
            inner.append("{" + ",".join(value_str(x) for x in sorted(s, key=value_key)) + "}")
        return "{" + ",".join(inner) + "}"
    return str(v)


def value_to_json(v):
    if isinstance(v, str):
        return v
    if isinstance(v, IdLabel):
        return {"id": v.id, "label": v.label}
    if isinstance(v, RingView):
        return {"view": str(v)}
    if isinstance(v, frozenset):
        members = sorted(v, key=lambda s: tuple(sorted(value_key(x) for x in s)))
        return {"family": [[value_to_json(x) for x in sorted(s, key=value_key)] for s in members]}
    raise LclError(f"unsupported value {v!r}")


def value_from_json(obj):
    if isinstance(obj, str):
        return obj
    if isinstance(obj, dict):
        if "view" in obj:
            return RingView.parse(obj["view"])
        if "family" in obj:
            return frozenset(frozenset(value_from_json(x) for x in s) for s in obj["family"])
        if "id" in obj and "label" in obj:
            return IdLabel(int(obj["id"]), str(obj["label"]))
    raise LclError(f"cannot decode value {obj!r}")
