"""Synchronous LOCAL-model execution of view tables on concrete rings.

A t-round algorithm is its table: node i outputs ``table(view_i)``, where
``view_i`` is the cyclic window of radius t centred on i.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import combinations, islice, permutations
from math import comb, perm
from typing import Iterator, List, Optional, Sequence, Tuple

from .complex import Vertex
from .errors import InfeasiblePromise, LclError, MissingView
from .protocol import ARBITRARY, INCREASING, NONE, IdMode, enumerate_views
from .search import AlgorithmTable
from .task import LclTask, Star, builtin_task, delta_allows, matches_pattern
from .values import RingView

EXHAUSTIVE_LIMIT = 10 ** 6


@dataclass(frozen=True)
class RingInstance:
    n: int
    labels: Tuple[str, ...]
    ids: Optional[Tuple[int, ...]] = None
    id_discipline: str = NONE

    def to_json(self) -> dict:
        doc = {"n": self.n, "labels": list(self.labels)}
        if self.ids is not None:
            doc["ids"] = list(self.ids)
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "RingInstance":
        labels = tuple(str(a) for a in doc["labels"])
        n = int(doc.get("n", len(labels)))
        if n != len(labels):
            raise LclError(f"instance declares n={n} but has {len(labels)} labels")
        ids = doc.get("ids")
        if ids is not None:
            ids = tuple(int(x) for x in ids)
            if len(ids) != n or len(set(ids)) != n:
                raise LclError("instance ids must be n distinct integers")
        return cls(n, labels, ids, ARBITRARY if ids is not None else NONE)

    def view(self, i: int, t: int) -> RingView:
        idx = [(i + k) % self.n for k in range(-t, t + 1)]
        labels = tuple(self.labels[j] for j in idx)
        ids = None if self.ids is None else tuple(self.ids[j] for j in idx)
        return RingView(labels, ids)


def cyclic_ok(task: LclTask, labels: Sequence[str]) -> bool:
    n = len(labels)
    for i in range(n):
        if Star.of(labels[i], (labels[i - 1], labels[(i + 1) % n])) not in task.in_stars:
            return False
    for p in task.forbidden:
        doubled = list(labels) + list(labels[:len(p) - 1])
        if matches_pattern(doubled, p):
            return False
    return True


def _labelings(task: LclTask, n: int) -> Iterator[Tuple[str, ...]]:
    tail = max([3] + [len(p) for p in task.forbidden])
    stack = [(a,) for a in reversed(task.in_labels)]
    while stack:
        w = stack.pop()
        if len(w) == n:
            if cyclic_ok(task, w):
                yield w
            continue
        for a in reversed(task.in_labels):
            nxt = w + (a,)
            if task.window_ok(nxt[-tail:]):
                stack.append(nxt)


def _id_assignments(discipline: str, n: int, pool: int):
    if discipline == ARBITRARY:
        return permutations(range(1, pool + 1), n)
    if discipline == INCREASING:
        return combinations(range(1, pool + 1), n)
    return [None]


def _id_count(discipline: str, n: int, pool: int) -> int:
    if discipline == ARBITRARY:
        return perm(pool, n)
    if discipline == INCREASING:
        return comb(pool, n)
    return 1


def labelings(task: LclTask, n: int) -> List[Tuple[str, ...]]:
    if n < 3:
        raise LclError("rings need n >= 3")
    out = list(_labelings(task, n))
    if not out:
        raise InfeasiblePromise(f"no labelling of C_{n} satisfies the input promise of {task.name}")
    return out


def enumerate_instances(task: LclTask, n: int, id_discipline: str = NONE,
                        id_pool_size: Optional[int] = None) -> Iterator[RingInstance]:
    """All admissible labelled (and ID-assigned) rings C_n, in deterministic order."""
    if id_discipline != NONE:
        if id_pool_size is None or id_pool_size < n:
            raise LclError(f"id pool of size {id_pool_size} cannot label {n} nodes")
    labs = labelings(task, n)

    def gen():
        for labels in labs:
            for ids in _id_assignments(id_discipline, n, id_pool_size or 0):
                yield RingInstance(n, labels, None if ids is None else tuple(ids), id_discipline)

    return gen()


@dataclass
class RunReport:
    outputs: Tuple[str, ...]
    violations: List[Tuple[int, Star]] = field(default_factory=list)

    @property
    def legal(self) -> bool:
        return not self.violations


def _lookup(table, view):
    if isinstance(table, AlgorithmTable):
        return table.lookup(view)
    try:
        return table[view]
    except KeyError:
        raise MissingView(view) from None


def run(table, inst: RingInstance, task: LclTask, t: Optional[int] = None) -> RunReport:
    """Execute ``table`` on ``inst`` and check every output star."""
    if t is None:
        if not isinstance(table, AlgorithmTable):
            raise LclError("pass t explicitly for plain dict tables")
        t = table.rounds
    # a view must not wrap onto itself
    if inst.n < 2 * t + 1:
        raise LclError(f"ring of {inst.n} nodes is too small for a {t}-round table (need n >= {2 * t + 1})")
    outputs = []
    for i in range(inst.n):
        view = inst.view(i, t)
        try:
            outputs.append(_lookup(table, view))
        except MissingView as e:
            raise MissingView(e.view, i) from None
    n = inst.n
    violations = []
    for i in range(n):
        left, right = (i - 1) % n, (i + 1) % n
        star = Star.of(outputs[i], (outputs[left], outputs[right]))
        ok = star in task.out_stars
        if ok:
            fin = (Vertex(-1, inst.labels[left]), Vertex(0, inst.labels[i]), Vertex(1, inst.labels[right]))
            fout = (Vertex(-1, outputs[left]), Vertex(0, outputs[i]), Vertex(1, outputs[right]))
            ok = delta_allows(task, fin, fout)
        if not ok:
            violations.append((i, star))
    return RunReport(tuple(outputs), violations)


def reference_linial_table() -> AlgorithmTable:
    """Two recolouring passes (colour 3, then colour 2) reducing a proper
    3-colouring to an MIS; output 1 iff the final colour is 1."""
    task = builtin_task("3col-to-mis")
    entries = {}
    for v in enumerate_views(task, 2):
        c = list(v.labels)
        after3 = list(c)
        for j in (1, 2, 3):
            if c[j] == "3" and c[j - 1] != "1" and c[j + 1] != "1":
                after3[j] = "1"
        final = after3[2]
        if after3[2] == "2" and after3[1] != "1" and after3[3] != "1":
            final = "1"
        entries[v] = "1" if final == "1" else "0"
    return AlgorithmTable(entries, 2, IdMode(), task.name)


@dataclass
class ValidationReport:
    runs: int = 0
    legal: int = 0
    exhaustive: bool = True
    per_n: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.runs > 0 and self.runs == self.legal

    def summary(self) -> str:
        mode = "exhaustive" if self.exhaustive else "sampled"
        return f"{'PASS' if self.passed else 'FAIL'} {self.legal}/{self.runs} legal ({mode})"

    def to_json(self) -> dict:
        return {"passed": self.passed, "runs": self.runs, "legal": self.legal,
                "exhaustive": self.exhaustive, "per_n": {str(k): v for k, v in self.per_n.items()},
                "violations": self.violations[:10]}


def cross_validate(table: AlgorithmTable, task: LclTask, n_range, trials: int = 1000, seed: int = 0,
                   id_discipline: Optional[str] = None, id_pool_size: Optional[int] = None) -> ValidationReport:
    """Run ``table`` on every admissible ring for each n (or on a seeded sample
    when a size has more than a million instances) and tally legality."""
    if id_discipline is None:
        id_discipline = table.id_mode.kind
    if id_discipline != NONE and id_pool_size is None:
        id_pool_size = table.id_mode.R
    report = ValidationReport()
    rng = random.Random(seed)
    for n in n_range:
        pool = id_pool_size if id_discipline != NONE else 0
        labs = labelings(task, n)
        total = len(labs) * _id_count(id_discipline, n, pool)
        if total <= EXHAUSTIVE_LIMIT:
            instances = enumerate_instances(task, n, id_discipline, id_pool_size)
        else:
            report.exhaustive = False
            instances = islice(_sample(labs, id_discipline, n, pool, rng), trials)
        runs = legal = 0
        for inst in instances:
            rep = run(table, inst, task)
            runs += 1
            if rep.legal:
                legal += 1
            elif len(report.violations) < 10:
                report.violations.append({**inst.to_json(), "outputs": list(rep.outputs),
                                          "bad_positions": [p for p, _ in rep.violations]})
        report.per_n[n] = {"runs": runs, "legal": legal}
        report.runs += runs
        report.legal += legal
    return report


def _sample(labs, discipline, n, pool, rng):
    while True:
        labels = rng.choice(labs)
        if discipline == ARBITRARY:
            ids = tuple(rng.sample(range(1, pool + 1), n))
        elif discipline == INCREASING:
            ids = tuple(sorted(rng.sample(range(1, pool + 1), n)))
        else:
            ids = None
        yield RingInstance(n, labels, ids, discipline)


def load_instance(text: str) -> RingInstance:
    return RingInstance.from_json(json.loads(text))
