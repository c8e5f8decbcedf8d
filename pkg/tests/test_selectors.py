from itertools import combinations, permutations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permsel.errors import BudgetExceededError
from permsel.selectors import (
    Instance,
    Selector,
    isolates,
    isolates_permutation,
    isolation_trace,
    iter_subsets,
    lis_length,
    load_selector,
    save_selector,
    selector_from_text,
    selector_to_text,
    verify_kq_permutation_selector,
    verify_kq_selector,
    verify_permutation_selector,
    verify_strong,
)


def sel(n, *sets):
    return Selector(n, tuple(frozenset(s) for s in sets))


def singleton_selector(n, passes=1):
    return Selector(n, tuple(frozenset({x}) for _ in range(passes) for x in range(n)))


# ---------------------------------------------------------------------------
# isolation primitives
# ---------------------------------------------------------------------------

def test_isolates_singleton_intersection():
    assert isolates({2, 5}, {5, 7}) == 5


def test_isolates_wide_intersection():
    assert isolates({2, 5}, {2, 5, 9}) is None


def test_isolates_empty_set():
    assert isolates(set(), {0}) is None


def test_isolation_trace_basic():
    s = sel(2, {0}, {1}, {0})
    assert isolation_trace(s, {0, 1}).events == ((0, 0), (1, 1), (2, 0))


def test_isolation_trace_skips_wide_sets():
    assert isolation_trace(sel(2, {0, 1}), {0, 1}).events == ()


def test_isolation_trace_skips_empty_intersections():
    s = sel(2, {0}, {0, 1}, {1})
    assert isolation_trace(s, {1}).events == ((1, 1), (2, 1))


def test_isolates_permutation_true_and_false():
    s = sel(2, {0}, {1}, {0})
    assert isolates_permutation(s, Instance({0, 1}, (1, 0)))
    assert not isolates_permutation(sel(2, {0}, {1}), Instance({0, 1}, (1, 0)))


@pytest.mark.parametrize("n,k", [(3, 2), (4, 3), (6, 3)])
def test_singleton_passes_isolate_everything(n, k):
    s = singleton_selector(n, passes=k)
    for x_tuple in combinations(range(n), k):
        for order in permutations(x_tuple):
            assert isolates_permutation(s, Instance(frozenset(x_tuple), order))


# ---------------------------------------------------------------------------
# greedy matching vs exhaustive index-tuple oracle
# ---------------------------------------------------------------------------

def contains_by_index_tuples(trace_labels, order):
    """Oracle: search all increasing index tuples instead of greedy scanning."""
    k = len(order)
    for idxs in combinations(range(len(trace_labels)), k):
        if all(trace_labels[i] == x for i, x in zip(idxs, order)):
            return True
    return False


def test_greedy_matches_exhaustive_oracle_exhaustively_small():
    # All selectors of length 3 over N=2 against all instances with k <= 2.
    subsets = [frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})]
    instances = [Instance(frozenset(t), order)
                 for k in (1, 2)
                 for t in combinations(range(2), k)
                 for order in permutations(t)]
    for sets in product(subsets, repeat=3):
        s = Selector(2, sets)
        for inst in instances:
            labels = isolation_trace(s, inst.subset).labels()
            assert isolates_permutation(s, inst) == contains_by_index_tuples(labels, inst.order)


# ---------------------------------------------------------------------------
# verifiers
# ---------------------------------------------------------------------------

def test_verify_strong_singletons_ok():
    s = singleton_selector(5)
    assert verify_strong(s, 3, "exact").ok
    assert verify_strong(s, 3, "up_to").ok


def test_verify_strong_counterexample_is_smallest():
    v = verify_strong(sel(2, {0, 1}), 2, "exact")
    assert not v.ok and v.x_set == (0, 1) and v.element == 0
    assert v.format() == "FAIL X={0,1} x=0"


def test_verify_strong_derived_example():
    assert verify_strong(sel(3, {0}, {1}, {2}, {0, 1}), 2, "exact").ok


def test_verify_strong_rejects_large_k():
    with pytest.raises(ValueError):
        verify_strong(singleton_selector(3), 4)


def test_verify_permutation_three_sets_two_labels():
    assert verify_permutation_selector(sel(2, {0}, {1}, {0}), 2, "exact").ok


def test_no_length_two_selector_is_a_two_permutation_selector():
    subsets = [frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})]
    for sets in product(subsets, repeat=2):
        assert not verify_permutation_selector(Selector(2, sets), 2, "exact").ok


def test_verify_permutation_counterexample_order():
    v = verify_permutation_selector(sel(2, {0}, {1}), 2, "exact")
    assert not v.ok and v.x_set == (0, 1) and v.order == (1, 0)
    assert v.instance() == Instance({0, 1}, (1, 0))


def test_verify_kq_each_pair_has_one_isolated():
    assert verify_kq_selector(sel(3, {0}, {2}), 2, 1, "exact").ok


def test_verify_kq_no_singleton_intersection():
    v = verify_kq_selector(sel(3, {0, 1, 2}), 2, 1, "exact")
    assert not v.ok and v.x_set == (0, 1)


def test_verify_kq_equals_strong_at_q_eq_k():
    s = singleton_selector(4)
    for mode in ("exact", "up_to"):
        assert verify_kq_selector(s, 3, 3, mode).ok == verify_strong(s, 3, mode).ok


def test_kq_permutation_lis_examples():
    s = sel(2, {1}, {0})
    assert verify_kq_permutation_selector(s, 2, 1, "exact").ok
    v = verify_kq_permutation_selector(s, 2, 2, "exact")
    assert not v.ok and v.x_set == (0, 1) and v.order == (0, 1)


def test_kq_permutation_rejects_bad_q():
    with pytest.raises(ValueError):
        verify_kq_permutation_selector(singleton_selector(3), 2, 3)


def test_budget_refusal():
    with pytest.raises(BudgetExceededError):
        verify_permutation_selector(singleton_selector(12), 8, "exact", budget=1000)


# ---------------------------------------------------------------------------
# lis
# ---------------------------------------------------------------------------

def lis_by_enumeration(seq):
    best = 0
    for r in range(len(seq) + 1):
        for idxs in combinations(range(len(seq)), r):
            vals = [seq[i] for i in idxs]
            if all(a < b for a, b in zip(vals, vals[1:])):
                best = max(best, r)
    return best


@pytest.mark.parametrize("seq,expect", [((2, 1), 1), ((1, 2, 3), 3), ((3, 1, 2, 5, 4), 3), ((), 0)])
def test_lis_known_values(seq, expect):
    assert lis_length(seq) == expect


@given(st.lists(st.integers(0, 6), max_size=9))
@settings(max_examples=200, deadline=None)
def test_lis_matches_enumeration(seq):
    assert lis_length(seq) == lis_by_enumeration(seq)


# ---------------------------------------------------------------------------
# structural invariants
# ---------------------------------------------------------------------------

@given(st.integers(0, 3), st.data())
@settings(max_examples=60, deadline=None)
def test_appending_sets_preserves_ok(k_extra, data):
    n = 3
    m = data.draw(st.integers(2, 5))
    sets = [frozenset(data.draw(st.sets(st.integers(0, n - 1)))) for _ in range(m)]
    s = Selector(n, tuple(sets))
    extra = frozenset(data.draw(st.sets(st.integers(0, n - 1))))
    grown = s.append(extra)
    for k in (1, 2):
        for mode in ("exact", "up_to"):
            if verify_permutation_selector(s, k, mode).ok:
                assert verify_permutation_selector(grown, k, mode).ok
            if verify_strong(s, k, mode).ok:
                assert verify_strong(grown, k, mode).ok


def test_prefix_of_isolated_order_is_isolated():
    s = singleton_selector(4, passes=3)
    inst = Instance({0, 2, 3}, (3, 0, 2))
    assert isolates_permutation(s, inst)
    for cut in (1, 2):
        prefix = inst.order[:cut]
        assert isolates_permutation(s, Instance(frozenset(prefix), prefix))


def test_permutation_ok_implies_strong_ok():
    s = sel(3, {0}, {1}, {2}, {0}, {1}, {2})
    for k in (1, 2):
        if verify_permutation_selector(s, k, "exact").ok:
            assert verify_strong(s, k, "exact").ok


def test_iter_subsets_order_and_sizes():
    assert list(iter_subsets(3, 2, "up_to")) == [(0,), (0, 1), (0, 2), (1,), (1, 2), (2,)]
    assert list(iter_subsets(3, 2, "exact")) == [(0, 1), (0, 2), (1, 2)]


# ---------------------------------------------------------------------------
# types and text format
# ---------------------------------------------------------------------------

def test_selector_rejects_out_of_range_labels():
    with pytest.raises(ValueError):
        Selector(2, (frozenset({2}),))


def test_instance_requires_permutation_of_subset():
    with pytest.raises(ValueError):
        Instance({0, 1}, (0, 0))
    with pytest.raises(ValueError):
        Instance({0, 1}, (0,))


def test_text_round_trip(tmp_path):
    s = sel(5, {0, 3}, set(), {1, 2, 4})
    text = selector_to_text(s, 2)
    assert text == "5 2 3\n0 3\n\n1 2 4\n"
    back, k = selector_from_text(text)
    assert back == s and k == 2
    path = tmp_path / "sel.txt"
    save_selector(path, s, 2)
    assert load_selector(path) == (s, 2)


def test_text_parse_errors():
    with pytest.raises(ValueError):
        selector_from_text("")
    with pytest.raises(ValueError):
        selector_from_text("3 1\n0\n")
    with pytest.raises(ValueError):
        selector_from_text("3 1 2\n0\n")
