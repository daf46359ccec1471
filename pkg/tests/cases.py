"""Shared task/round/ID-mode combinations on which the brute-force oracle is feasible."""
from lcltopo.protocol import IdMode
from lcltopo.task import builtin_task, task_from_doc

TWO_COL_RELAY = {
    "name": "relay-2col",
    "in_labels": ["a", "b"], "in_stars": "proper",
    "out_labels": ["1", "2"], "out_stars": "proper",
    "delta": {"per_node": [["a", "1"], ["b", "2"]]},
}

LIST_COL = {
    "name": "list-3col",
    "in_labels": ["x", "y"], "in_stars": "all",
    "out_labels": ["1", "2", "3"], "out_stars": "proper",
    "delta": {"per_node": [["x", "1"], ["x", "2"], ["y", "2"], ["y", "3"]]},
}

# only the centre may output 1 when it sees input "s"; an ExplicitPairs relation
MARKED_MIS = {
    "name": "marked-mis",
    "in_labels": ["s", "u"], "in_stars": "all",
    "out_labels": ["0", "1"], "out_stars": "mis",
    "delta": {"pairs": [[{"center": c, "leaves": list(l)}, {"center": o, "leaves": list(ol)}]
                        for c in "su" for l in ("ss", "su", "uu")
                        for o, ol in (("1", "00"), ("0", "01"), ("0", "11"))
                        if o == "0" or c == "s"]},
}


def task_of(name):
    if name == "relay-2col":
        return task_from_doc(TWO_COL_RELAY)
    if name == "list-3col":
        return task_from_doc(LIST_COL)
    if name == "marked-mis":
        return task_from_doc(MARKED_MIS)
    return builtin_task(name)


# (task, t, ids, R)
ORACLE_MATRIX = [
    ("3col-to-mis", 0, "none", None),
    ("3col-to-mis", 1, "none", None),
    ("3col-to-mis", 0, "arbitrary", 3),
    ("3col-to-mis", 0, "arbitrary", 4),
    ("3col-to-mis", 0, "increasing", 3),
    ("3col-to-mis", 0, "increasing", 4),
    ("3col-no-xyzyx", 1, "none", None),
    ("coloring:3", 0, "none", None),
    ("coloring:3", 0, "arbitrary", 3),
    ("coloring:3", 1, "increasing", 5),
    ("mis", 0, "none", None),
    ("mis", 0, "arbitrary", 3),
    ("mis", 1, "increasing", 6),
    ("coloring:2", 1, "increasing", 5),
    ("coloring:2", 1, "none", None),
    ("relay-2col", 0, "none", None),
    ("list-3col", 0, "none", None),
    ("list-3col", 1, "none", None),
    ("marked-mis", 0, "none", None),
    ("marked-mis", 1, "none", None),
]


def combo(entry):
    name, t, ids, R = entry
    return task_of(name), t, IdMode(ids, R)


def combo_id(entry):
    name, t, ids, R = entry
    return f"{name}-t{t}-{ids}{R or ''}"
