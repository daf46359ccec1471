"""Set-family functor, gluing map, colour codes, round reduction and the
tower / log* arithmetic."""
import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcltopo.errors import IdRangeExhausted, IncompleteTable, LclError, VerificationFailed
from lcltopo.protocol import IdMode, build_protocol_complex, enumerate_views
from lcltopo.reduction import (Tower, all_families, build_output_complex_k, decode_color, encode_family,
                               f_of_view, f_simplicial_violation, linial_bound, log_star, phi_apply_map,
                               phi_facet_ok, phi_output_violation, reduce_once, tower)
from lcltopo.search import SAT, AlgorithmTable, extract_algorithm, solve
from lcltopo.sim import reference_linial_table
from lcltopo.task import build_output_complex, builtin_task
from lcltopo.values import UNIT, RingView, family

O2 = build_output_complex_k(2)
COL3 = builtin_task("coloring:3")


def idview(*ids):
    return RingView((UNIT,) * len(ids), tuple(ids))


def naive_phi_facet_ok(K, fams):
    """Direct transcription of the alternating quantifier chain."""
    edges = set()
    for f in K.facets:
        for a, b in ((0, 1), (1, 2)):
            edges.add((f[a], f[b]))
    for i in (0, 1):
        left, right = fams[i], fams[i + 1]
        na, nb = K.names[i], K.names[i + 1]
        ok = False
        for S in left:
            if all(any(all(((na, v), (nb, w)) in edges for v in S) for w in S2) for S2 in right):
                ok = True
        if not ok:
            return False
    return True


# -- phi_facet_ok ----------------------------------------------------------

def test_alternating_singletons_form_a_facet():
    assert phi_facet_ok(O2, family({"1"}), family({"2"}), family({"1"}))


def test_empty_member_in_middle_fails():
    assert not phi_facet_ok(O2, family({"1"}), family(set()), family({"1"}))


def test_equal_neighbouring_families_never_form_a_facet():
    fams = all_families(2)
    for F in fams:
        if not F:
            continue
        for G in fams:
            assert not phi_facet_ok(O2, F, F, G)


def test_phi_facet_ok_matches_naive_quantifiers():
    fams = all_families(2)
    rng = random.Random(3)
    for _ in range(3000):
        triple = tuple(rng.choice(fams) for _ in range(3))
        assert phi_facet_ok(O2, *triple) == naive_phi_facet_ok(O2, triple)


# -- phi_apply_map ---------------------------------------------------------

def test_constant_map_collapses():
    assert phi_apply_map({"a": "c", "b": "c", "c": "c"}, family({"a", "b"}, {"c"})) == family({"c"})


def test_identity_map_is_identity():
    fam = family({"a", "b"}, {"c"}, set())
    assert phi_apply_map({x: x for x in "abc"}, fam) == fam


def test_linial_table_on_two_views():
    table = reference_linial_table().entries
    ones = [v for v, a in table.items() if a == "1"][:2]
    assert phi_apply_map(table, family(set(ones))) == family({"1"})


def test_incomplete_table():
    with pytest.raises(IncompleteTable):
        phi_apply_map({"a": "1"}, family({"a", "b"}))


@settings(max_examples=100)
@given(st.dictionaries(st.sampled_from("abcd"), st.sampled_from("xyz"), min_size=4, max_size=4),
       st.dictionaries(st.sampled_from("xyz"), st.sampled_from("01"), min_size=3, max_size=3),
       st.sets(st.frozensets(st.sampled_from("abcd"), max_size=3), max_size=4))
def test_functoriality(g, h, members):
    fam = frozenset(members)
    composed = {k: h[v] for k, v in g.items()}
    assert phi_apply_map(composed, fam) == phi_apply_map(h, phi_apply_map(g, fam))


def test_simplicial_maps_preserve_family_facets():
    # 2-colouring -> MIS: colour 1 joins the set, colour 2 does not
    table = {"1": "1", "2": "0"}
    M2 = build_output_complex(builtin_task("mis"))
    fams = all_families(2)
    for triple in product(fams, repeat=3):
        if phi_facet_ok(O2, *triple):
            assert phi_facet_ok(M2, *(phi_apply_map(table, F) for F in triple))


def test_view_map_preserves_family_facets():
    task = builtin_task("3col-to-mis")
    table = reference_linial_table().entries
    P = build_protocol_complex(task, 2)
    M2 = build_output_complex(task)
    pool = list(table)
    rng = random.Random(11)
    for f in P.facets:
        views = [v.value for v in f]
        # every member holds the facet's own view, and the singleton is a member,
        # so the quantifier chain is satisfied by construction
        fams = [frozenset([frozenset({views[i]})] +
                          [frozenset({views[i], *rng.sample(pool, 2)}) for _ in range(2)]) for i in range(3)]
        assert phi_facet_ok(P, *fams)
        assert phi_facet_ok(M2, *(phi_apply_map(table, F) for F in fams))


# -- gluing map ------------------------------------------------------------

def test_gluing_map_single_extension():
    assert f_of_view(idview(2, 3, 4), 5) == family({idview(1, 2, 3, 4, 5)})


def test_gluing_map_no_room_below():
    assert f_of_view(idview(1, 2, 3), 4) == family(set())


def test_gluing_map_two_upper_ends():
    fam = f_of_view(idview(2, 3, 4), 6)
    assert fam == family({idview(1, 2, 3, 4, 5)}, {idview(1, 2, 3, 4, 6)})


def test_gluing_map_strict_flags_exhaustion():
    with pytest.raises(IdRangeExhausted):
        f_of_view(idview(1, 2, 3), 4, strict=True)
    with pytest.raises(IdRangeExhausted):
        f_of_view(idview(2, 3, 4), 4, strict=True)
    assert f_of_view(idview(2, 3, 4), 5, strict=True)


def test_gluing_map_rejects_unsorted_or_labelled_views():
    with pytest.raises(LclError):
        f_of_view(idview(3, 2, 4), 6)
    with pytest.raises(LclError):
        f_of_view(RingView(("1", "2", "1"), (1, 2, 3)), 6)
    with pytest.raises(LclError):
        f_of_view(RingView(("1",)), 6)


@pytest.mark.parametrize("t,R", [(1, R) for R in range(3, 8)] + [(2, R) for R in range(5, 8)])
def test_gluing_map_is_simplicial(t, R):
    assert f_simplicial_violation(t, R) is None


# -- colour codes ----------------------------------------------------------

@pytest.mark.parametrize("k", [1, 2, 3])
def test_colour_code_bijection(k):
    n = 2 ** (2 ** k)
    fams = all_families(k)
    assert len(set(fams)) == n
    for code in range(1, n + 1):
        assert encode_family(decode_color(code, k), k) == code


def test_colour_code_examples():
    assert encode_family(family(), 2) == 1
    assert encode_family(family(set()), 2) == 2
    assert encode_family(family({"1"}), 2) == 3
    with pytest.raises(LclError):
        decode_color(17, 2)


def test_family_complex_over_two_colours_lands_in_sixteen_colours():
    bad, checked, ok = phi_output_violation(2)
    assert bad is None
    assert checked == 16 ** 3
    assert ok > 0


def test_family_complex_over_three_colours_sampled():
    bad, checked, ok = phi_output_violation(3, samples=10_000, seed=0)
    assert bad is None
    assert checked == 10_000 and ok > 0


# -- reduction -------------------------------------------------------------

def one_round_three_colouring(R):
    mode = IdMode("increasing", R)
    r = solve(COL3, 1, mode)
    assert r.verdict == SAT
    return extract_algorithm(r, COL3, 1, mode)


@pytest.mark.parametrize("R", [5, 6, 7])
def test_reduce_solver_witness(R):
    reduced = reduce_once(one_round_three_colouring(R), 1, R)
    assert reduced.rounds == 0
    assert reduced.task == "coloring:256"
    # the palette size is irrelevant to the complex; views carry the unit label only
    P0 = build_protocol_complex(COL3, 0, IdMode("increasing", R), id_universe=range(2, R))
    codes = reduced.entries
    assert set(codes) == {v.value for f in P0.facets for v in f}
    for f in P0.facets:
        a, b, c = (int(codes[v.value]) for v in f)
        assert 1 <= min(a, b, c) and max(a, b, c) <= 256
        assert b != a and b != c


def test_palette_follows_the_task_not_the_colours_used():
    delta = one_round_three_colouring(5)
    assert reduce_once(delta, 1, 5).task == "coloring:256"
    assert reduce_once(dict(delta.entries), 1, 5, k=3).task == "coloring:256"


def test_reduce_codes_are_family_images():
    R = 6
    delta = one_round_three_colouring(R)
    reduced = reduce_once(delta, 1, R)
    for w, code in reduced.entries.items():
        fam = phi_apply_map(delta.entries, f_of_view(w, R - 1, lo=2))
        assert decode_color(int(code), 3) == fam


def test_reduce_rejects_constant_table():
    views = enumerate_views(COL3, 1, IdMode("increasing", 6))
    const = AlgorithmTable({v: "1" for v in views}, 1, IdMode("increasing", 6), "coloring:3")
    with pytest.raises(VerificationFailed):
        reduce_once(const, 1, 6, k=3)


def test_reduce_catches_bad_output_even_without_input_check():
    views = enumerate_views(COL3, 1, IdMode("increasing", 7))
    const = {v: "1" for v in views}
    with pytest.raises(VerificationFailed):
        reduce_once(const, 1, 7, k=3, verify_input=False)


def test_reduce_needs_rounds():
    with pytest.raises(LclError):
        reduce_once({}, 0, 5, k=3)


# -- tower and log* --------------------------------------------------------

def test_tower_values():
    assert [tower(h) for h in range(5)] == [1, 2, 4, 16, 65536]
    assert tower(5) == 2 ** 65536
    assert isinstance(tower(6), Tower)
    assert tower(6) > tower(5) and tower(7) > tower(6)


@pytest.mark.parametrize("h", range(0, 6))
def test_log_star_inverts_tower(h):
    assert log_star(tower(h)) == h


def test_log_star_between_towers():
    assert log_star(17) == 4
    assert log_star(65537) == 5
    assert log_star(tower(9)) == 9


@pytest.mark.parametrize("n,b", [(3, 0), (4, 0), (5, 1), (16, 1), (17, 1), (65536, 1), (65537, 2)])
def test_linial_bound(n, b):
    assert linial_bound(n) == b


def test_linial_bound_big():
    assert linial_bound(tower(5)) == 2
    assert linial_bound(tower(8)) == 3
    with pytest.raises(LclError):
        linial_bound(2)
