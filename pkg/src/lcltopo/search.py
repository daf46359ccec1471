"""Search for name-preserving, name-independent simplicial maps P^(t) -> O_d.

The variables are view values, never vertices, so every assignment is
name-independent by construction.  Each facet of the protocol complex
becomes one table constraint: the output labels of its three views must
form a facet of the output complex that the task relation allows for the
facet's central input labels.
"""
from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

from .complex import Complex, Vertex, apply_table, verify_simplicial
from .errors import LclError, TooLarge
from .protocol import (IdMode, build_protocol_complex, canonicalize_ids, enumerate_views,
                       merged_window)
from .task import LclTask, allowed_outputs, build_output_complex, delta_allows
from .values import RingView, label_key, value_key

log = logging.getLogger(__name__)

SAT = "sat"
UNSAT = "unsat"
UNKNOWN = "unknown"

DEFAULT_MAX_NODES = 2_000_000
BRUTE_FORCE_LIMIT = 10 ** 7


def central_labels(facet, t: int) -> Tuple[str, ...]:
    """Input labels of the facet's own star, IDs dropped."""
    if t == 0:
        return tuple(v.value.labels[0] for v in facet)
    return merged_window(facet).labels[t:t + 3]


@dataclass
class Problem:
    variables: List[RingView]
    domain: Tuple[str, ...]
    constraints: List[Tuple[Tuple[int, ...], frozenset]]
    n_facets: int


def build_problem(task: LclTask, t: int, mode: IdMode = IdMode(), *, skeleton: bool = False,
                  id_universe=None) -> Problem:
    P = build_protocol_complex(task, t, mode, id_universe)
    O = build_output_complex(task)
    views = enumerate_views(task, t, mode, id_universe)
    index = {v: i for i, v in enumerate(views)}
    allowed_cache: Dict[Tuple[str, ...], frozenset] = {}
    seen = set()
    constraints = []
    for f in P.facets:
        centre = central_labels(f, t)
        if centre not in allowed_cache:
            allowed_cache[centre] = allowed_outputs(task, centre, O)
        allowed = allowed_cache[centre]
        scope = tuple(index[v.value] for v in f)
        if skeleton:
            for i, j in combinations(range(len(scope)), 2):
                pair = frozenset((a[i], a[j]) for a in allowed)
                key = ((scope[i], scope[j]), pair)
                if key not in seen:
                    seen.add(key)
                    constraints.append(key)
        else:
            key = (scope, allowed)
            if key not in seen:
                seen.add(key)
                constraints.append(key)
    return Problem(views, task.out_labels, constraints, len(P.facets))


def _components(n: int, constraints) -> List[List[int]]:
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for scope, _ in constraints:
        roots = sorted({find(s) for s in scope})
        for r in roots[1:]:
            parent[r] = roots[0]
    groups: Dict[int, List[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


@dataclass
class ComponentStats:
    variables: int
    constraints: int
    nodes: int
    verdict: str
    exhausted: bool

    def to_json(self):
        return {"variables": self.variables, "constraints": self.constraints, "nodes": self.nodes,
                "verdict": self.verdict, "exhausted": self.exhausted}


def _solve_component(order: List[int], cons, domain, max_nodes):
    """Depth-first search with forward checking; returns (assignment|None, stats)."""
    by_var: Dict[int, list] = {v: [] for v in order}
    for c in cons:
        for v in set(c[0]):
            by_var[v].append(c)
    doms = {v: list(domain) for v in order}
    assign: Dict[int, str] = {}
    trail: List[Tuple[int, list]] = []
    n = len(order)
    choice = [0] * (n + 1)
    marks = [0] * n
    nodes = 0

    def propagate(var) -> bool:
        for scope, allowed in by_var[var]:
            free = {s for s in scope if s not in assign}
            if not free:
                if tuple(assign[s] for s in scope) not in allowed:
                    return False
            elif len(free) == 1:
                (u,) = free
                keep = [x for x in doms[u] if tuple(x if s == u else assign[s] for s in scope) in allowed]
                if len(keep) != len(doms[u]):
                    trail.append((u, doms[u]))
                    doms[u] = keep
                    if not keep:
                        return False
        return True

    pos = 0
    while 0 <= pos < n:
        var = order[pos]
        if var in assign:
            while len(trail) > marks[pos]:
                u, old = trail.pop()
                doms[u] = old
            del assign[var]
        if choice[pos] >= len(doms[var]):
            choice[pos] = 0
            pos -= 1
            continue
        if nodes >= max_nodes:
            stats = ComponentStats(n, len(cons), nodes, UNKNOWN, False)
            return None, stats
        val = doms[var][choice[pos]]
        choice[pos] += 1
        nodes += 1
        marks[pos] = len(trail)
        assign[var] = val
        if propagate(var):
            pos += 1
            if pos < n:
                choice[pos] = 0
    if pos < 0:
        return None, ComponentStats(n, len(cons), nodes, UNSAT, True)
    return dict(assign), ComponentStats(n, len(cons), nodes, SAT, False)


@dataclass
class SolveResult:
    verdict: str
    witness: Optional[Dict[RingView, str]]
    stats: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        doc = {"verdict": self.verdict}
        if self.witness is not None:
            doc["witness"] = {str(v): a for v, a in sorted(self.witness.items(), key=lambda kv: value_key(kv[0]))}
        doc["stats"] = self.stats
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False, indent=1) + "\n"


def _run(task, t, mode, skeleton, max_nodes, threads, id_universe) -> SolveResult:
    prob = build_problem(task, t, mode, skeleton=skeleton, id_universe=id_universe)
    comps = _components(len(prob.variables), prob.constraints)
    cons_of = {}
    comp_of = {}
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
    for c in prob.constraints:
        cons_of.setdefault(comp_of[c[0][0]], []).append(c)

    def work(ci):
        return _solve_component(comps[ci], cons_of.get(ci, []), prob.domain, max_nodes)

    if threads is not None and threads <= 1:
        results = [work(ci) for ci in range(len(comps))]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, range(len(comps))))

    verdicts = [s.verdict for _, s in results]
    if UNSAT in verdicts:
        verdict = UNSAT
    elif UNKNOWN in verdicts:
        verdict = UNKNOWN
    else:
        verdict = SAT
    stats = {
        "task": task.name,
        "rounds": t,
        "ids": str(mode),
        "skeleton": skeleton,
        "views": len(prob.variables),
        "facets": prob.n_facets,
        "constraints": len(prob.constraints),
        "nodes": sum(s.nodes for _, s in results),
        "components": [s.to_json() for _, s in results],
    }
    witness = None
    if verdict == SAT:
        witness = {}
        for assignment, _ in results:
            for v, a in assignment.items():
                witness[prob.variables[v]] = a
    elif verdict == UNSAT:
        failed = [i for i, (_, s) in enumerate(results) if s.verdict == UNSAT]
        stats["failed_component"] = min(failed, key=lambda i: (results[i][1].variables, i))
    log.info("solve %s t=%d ids=%s skeleton=%s -> %s", task.name, t, mode, skeleton, verdict)
    return SolveResult(verdict, witness, stats)


def solve(task: LclTask, t: int, mode: IdMode = IdMode(), *, max_nodes: int = DEFAULT_MAX_NODES,
          threads: Optional[int] = None, id_universe=None) -> SolveResult:
    """Decide whether ``task`` admits a t-round map in the given ID mode.

    Components of the constraint graph are searched independently; the
    witness is the lexicographically first assignment in canonical view and
    label order.  Hitting ``max_nodes`` in any component yields ``unknown``
    unless another component is already unsatisfiable.
    """
    return _run(task, t, mode, False, max_nodes, threads, id_universe)


def solve_skeleton(task: LclTask, t: int, mode: IdMode = IdMode(), *, max_nodes: int = DEFAULT_MAX_NODES,
                   threads: Optional[int] = None, id_universe=None) -> SolveResult:
    """Relaxation of :func:`solve` that only constrains 1-skeleton edges."""
    return _run(task, t, mode, True, max_nodes, threads, id_universe)


def brute_force_solve(task: LclTask, t: int, mode: IdMode = IdMode(), limit: int = BRUTE_FORCE_LIMIT,
                      id_universe=None) -> SolveResult:
    """Reference oracle: try every total assignment in lexicographic order."""
    views = enumerate_views(task, t, mode, id_universe)
    labels = task.out_labels
    total = len(labels) ** len(views)
    if total > limit:
        raise TooLarge(f"{total} assignments exceed the limit of {limit}")
    P = build_protocol_complex(task, t, mode, id_universe)
    O = build_output_complex(task)
    targets = O.facet_set
    pos = {v: i for i, v in enumerate(views)}
    rows = []
    for f in P.facets:
        in_facet = tuple(Vertex(n, a) for n, a in zip(task.names, central_labels(f, t)))
        rows.append((tuple(pos[v.value] for v in f), in_facet))
    names = task.names
    checked = 0
    for combo in product(labels, repeat=len(views)):
        checked += 1
        for idx, in_facet in rows:
            image = tuple(Vertex(n, combo[i]) for n, i in zip(names, idx))
            if image not in targets or not delta_allows(task, in_facet, image):
                break
        else:
            return SolveResult(SAT, dict(zip(views, combo)), {"assignments": checked, "views": len(views)})
    return SolveResult(UNSAT, None, {"assignments": checked, "views": len(views)})


def check_witness(task: LclTask, t: int, mode: IdMode, witness, id_universe=None):
    """Return ``None`` if ``witness`` is simplicial and respects the task relation
    on every protocol facet, else the first violating ``(facet, image)``."""
    P = build_protocol_complex(task, t, mode, id_universe)
    O = build_output_complex(task)
    bad = verify_simplicial(witness, P, O)
    if bad is not None:
        return bad
    for f in P.facets:
        in_facet = tuple(Vertex(n, a) for n, a in zip(task.names, central_labels(f, t)))
        image = apply_table(witness, f)
        if not delta_allows(task, in_facet, image):
            return f, image
    return None


@dataclass
class AlgorithmTable:
    """A t-round algorithm as an explicit function from views to outputs."""

    entries: Dict[RingView, str]
    rounds: int
    id_mode: IdMode = IdMode()
    task: str = ""
    canonical: Optional[Dict[RingView, str]] = None

    def lookup(self, view: RingView) -> str:
        from .errors import MissingView

        if view in self.entries:
            return self.entries[view]
        if self.canonical is not None and view.ids is not None:
            key = canonicalize_ids(view)
            if key in self.canonical:
                return self.canonical[key]
        raise MissingView(view)

    def as_map(self) -> Dict[RingView, str]:
        return dict(self.entries)

    def to_json(self) -> dict:
        def ordered(d):
            return {str(v): a for v, a in sorted(d.items(), key=lambda kv: value_key(kv[0]))}

        doc = {"task": self.task, "rounds": self.rounds, "ids": str(self.id_mode),
               "entries": ordered(self.entries)}
        if self.canonical is not None:
            doc["canonical"] = ordered(self.canonical)
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False, indent=1) + "\n"

    @classmethod
    def from_json(cls, doc: dict) -> "AlgorithmTable":
        try:
            entries = {RingView.parse(k): str(a) for k, a in doc["entries"].items()}
            canonical = doc.get("canonical")
            if canonical is not None:
                canonical = {RingView.parse(k): str(a) for k, a in canonical.items()}
            return cls(entries, int(doc["rounds"]), IdMode.parse(doc.get("ids", "none")),
                       doc.get("task", ""), canonical)
        except (KeyError, TypeError, ValueError) as e:
            raise LclError(f"malformed algorithm table: {e}") from None


def order_invariant_table(entries: Dict[RingView, str]) -> Optional[Dict[RingView, str]]:
    """Rank-pattern table if ``entries`` only depends on relative ID order."""
    canonical: Dict[RingView, str] = {}
    for v, a in entries.items():
        if v.ids is None:
            return None
        key = canonicalize_ids(v)
        if canonical.setdefault(key, a) != a:
            return None
    return canonical


def extract_algorithm(result: SolveResult, task: LclTask, t: int, mode: IdMode = IdMode()) -> AlgorithmTable:
    if result.verdict != SAT or result.witness is None:
        raise LclError(f"cannot extract an algorithm from a {result.verdict} result")
    entries = dict(sorted(result.witness.items(), key=lambda kv: value_key(kv[0])))
    canonical = order_invariant_table(entries) if mode.has_ids else None
    return AlgorithmTable(entries, t, mode, task.name, canonical)


def lift_table(table: Dict[RingView, str], task: LclTask, t: int, mode: IdMode = IdMode(),
               id_universe=None) -> Dict[RingView, str]:
    """Turn a t-round table into a (t+1)-round one that ignores the outer states."""
    out = {}
    for v in enumerate_views(task, t + 1, mode, id_universe):
        inner = RingView.from_states(v.states()[1:-1])
        out[v] = table[inner]
    return out
