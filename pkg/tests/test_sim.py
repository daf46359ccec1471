"""LOCAL-model simulation of view tables on concrete rings."""
import json
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import lcltopo.sim as sim
from lcltopo.errors import InfeasiblePromise, LclError, MissingView
from lcltopo.protocol import IdMode, enumerate_views
from lcltopo.search import AlgorithmTable, extract_algorithm, solve
from lcltopo.sim import (RingInstance, cross_validate, enumerate_instances, labelings, load_instance,
                         reference_linial_table, run)
from lcltopo.task import builtin_task, task_from_doc

T = builtin_task("3col-to-mis")
XYZ = builtin_task("3col-no-xyzyx")


# -- oracles ---------------------------------------------------------------

def naive_colourings(n):
    return [c for c in product("123", repeat=n) if all(c[i] != c[(i + 1) % n] for i in range(n))]


def naive_is_mis(outs):
    n = len(outs)
    for i in range(n):
        left, right = outs[i - 1], outs[(i + 1) % n]
        if outs[i] == "1" and "1" in (left, right):
            return False
        if outs[i] == "0" and "1" not in (left, right):
            return False
    return True


def naive_run(entries, labels, t):
    n = len(labels)
    outs = []
    for i in range(n):
        window = tuple(labels[(i + k) % n] for k in range(-t, t + 1))
        outs.append(entries[sim.RingView(window)])
    return outs


# -- instances -------------------------------------------------------------

@pytest.mark.parametrize("n", range(3, 11))
def test_labelings_match_brute_force(n):
    assert sorted(labelings(T, n)) == sorted(naive_colourings(n))


def test_proper_colouring_counts():
    assert [len(labelings(T, n)) for n in range(3, 13)] == [2 ** n + 2 * (-1) ** n for n in range(3, 13)]


def test_xyzyx_free_rings():
    for n in range(5, 10):
        for labels in labelings(XYZ, n):
            doubled = labels + labels[:4]
            for i in range(n):
                w = doubled[i:i + 5]
                assert not (w[0] == w[4] and w[1] == w[3] and len(set(w[:3])) == 3)


def test_infeasible_promise():
    task = task_from_doc({"in_labels": ["a", "b"], "in_stars": "proper", "out_labels": ["0"], "out_stars": "all"})
    with pytest.raises(InfeasiblePromise):
        labelings(task, 5)  # odd rings cannot be properly 2-coloured


def test_instances_with_ids():
    insts = list(enumerate_instances(T, 3, "arbitrary", 3))
    assert len(insts) == 6 * 6
    assert all(sorted(i.ids) == [1, 2, 3] for i in insts)
    inc = list(enumerate_instances(T, 3, "increasing", 4))
    assert len(inc) == 6 * 4
    assert all(list(i.ids) == sorted(i.ids) for i in inc)


def test_instance_json_round_trip():
    inst = RingInstance(5, ("1", "2", "1", "2", "3"), (4, 1, 5, 2, 3), "arbitrary")
    again = load_instance(json.dumps(inst.to_json()))
    assert again.labels == inst.labels and again.ids == inst.ids


def test_instance_validation():
    with pytest.raises(LclError):
        load_instance(json.dumps({"n": 4, "labels": ["1", "2", "1"]}))
    with pytest.raises(LclError):
        load_instance(json.dumps({"labels": ["1", "2", "3"], "ids": [1, 1, 2]}))


# -- execution -------------------------------------------------------------

def test_linial_table_is_a_solver_witness():
    from lcltopo.search import check_witness
    assert check_witness(T, 2, IdMode(), reference_linial_table().entries) is None


@pytest.mark.parametrize("n", range(5, 10))
def test_linial_table_matches_naive_execution(n):
    table = reference_linial_table()
    for labels in naive_colourings(n):
        outs = naive_run(table.entries, labels, 2)
        assert naive_is_mis(outs)
        rep = run(table, RingInstance(n, labels), T)
        assert list(rep.outputs) == outs
        assert rep.legal


@settings(max_examples=60, deadline=None)
@given(st.integers(7, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n - 1), st.integers(0, 2 ** 20))))
def test_locality(args):
    """A node's view and output ignore labels more than t hops away."""
    n, i, seed = args
    import random
    rng = random.Random(seed)
    cols = naive_colourings(n)
    labels = list(rng.choice(cols))
    table = reference_linial_table()
    before = run(table, RingInstance(n, tuple(labels)), T).outputs[i]
    far = [j for j in range(n) if min((j - i) % n, (i - j) % n) > 2]
    for j in far:
        for c in "123":
            trial = list(labels)
            trial[j] = c
            if all(trial[k] != trial[(k + 1) % n] for k in range(n)):
                inst = RingInstance(n, tuple(trial))
                assert inst.view(i, 2) == RingInstance(n, tuple(labels)).view(i, 2)
                assert run(table, inst, T).outputs[i] == before


def test_one_round_rule_breaks_on_forbidden_pattern():
    table = extract_algorithm(solve(XYZ, 1), XYZ, 1)
    inst = RingInstance(6, ("1", "2", "3", "2", "1", "3"))
    rep = run(table, inst, T)
    assert not rep.legal
    assert 2 in [p for p, _ in rep.violations]


def test_missing_view_reports_position():
    table = AlgorithmTable({}, 1, IdMode(), "3col-to-mis")
    with pytest.raises(MissingView) as e:
        run(table, RingInstance(3, ("1", "2", "3")), T)
    assert e.value.position == 0


def test_ring_too_small():
    with pytest.raises(LclError):
        run(reference_linial_table(), RingInstance(4, ("1", "2", "1", "2")), T)


def test_id_table_on_id_rings():
    mode = IdMode("arbitrary", 3)
    table = extract_algorithm(solve(T, 0, mode), T, 0, mode)
    rep = cross_validate(table, T, [3])
    assert rep.passed and rep.runs == 36


# -- cross validation ------------------------------------------------------

def test_cross_validate_linial_small():
    rep = cross_validate(reference_linial_table(), T, range(5, 9))
    assert rep.passed
    assert rep.exhaustive
    assert rep.runs == sum(2 ** n + 2 * (-1) ** n for n in range(5, 9))
    assert rep.summary().startswith("PASS")


def test_cross_validate_flags_corruption():
    table = reference_linial_table()
    bad = AlgorithmTable({v: "1" for v in table.entries}, 2, IdMode(), table.task)
    rep = cross_validate(bad, T, [5, 6])
    assert not rep.passed
    assert rep.legal == 0
    assert rep.violations and len(rep.violations) <= 10
    assert rep.summary().startswith("FAIL")


def test_sampling_is_seeded(monkeypatch):
    monkeypatch.setattr(sim, "EXHAUSTIVE_LIMIT", 10)
    a = cross_validate(reference_linial_table(), T, [5, 6], trials=25, seed=7)
    b = cross_validate(reference_linial_table(), T, [5, 6], trials=25, seed=7)
    assert not a.exhaustive
    assert a.runs == 50 and a.passed
    assert a.to_json() == b.to_json()
