import itertools
from collections import deque

import pytest
from hypothesis import given, settings, strategies as st

from locdec.errors import GraphError
from locdec.graph import (LabelledGraph, ball, canonical_key, dumps, loads, strip_identifiers, to_dot,
                          view_from_parts)
from locdec.labels import Bits, decode, encode


def path(labels, ids=None):
    return LabelledGraph(tuple(labels), frozenset((i, i + 1) for i in range(len(labels) - 1)), ids)


def cycle(n, labels=None):
    labels = labels or (0,) * n
    return LabelledGraph(tuple(labels), frozenset((i, (i + 1) % n) for i in range(n)))


def bfs(n, edges, src):
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    dist = {src: 0}
    q = deque([src])
    while q:
        u = q.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


@st.composite
def connected_graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    edges = set()
    for v in range(1, n):
        edges.add((draw(st.integers(0, v - 1)), v))
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=2 * n))
    edges |= {(min(u, v), max(u, v)) for u, v in extra if u != v}
    labels = tuple(draw(st.lists(st.integers(0, 2), min_size=n, max_size=n)))
    return LabelledGraph(labels, frozenset(edges))


# -- invariants --------------------------------------------------------------------------

def test_rejects_loops_duplicates_and_disconnection():
    with pytest.raises(GraphError):
        LabelledGraph((0, 0), frozenset({(0, 0)}))
    with pytest.raises(GraphError):
        LabelledGraph((0, 0), frozenset())
    with pytest.raises(GraphError):
        path((0, 0), ids=(3, 3))
    with pytest.raises(GraphError):
        LabelledGraph((0,), frozenset(), oracle=(1, 2))


def test_parallel_edges_collapse():
    g = LabelledGraph((0, 1), frozenset({(0, 1), (1, 0)}))
    assert len(g.edges) == 1


# -- ball -----------------------------------------------------------------------------------

def test_zero_radius_ball_is_the_node():
    g = path((5, 6, 7))
    v = ball(g, 1, 0)
    assert len(v) == 1 and v.labels == (6,)


def test_path_ball_radius_one_is_whole_path():
    v = ball(path(("a", "b", "c")), 1, 1)
    assert len(v) == 3 and v.labels[0] == "b"


def test_five_cycle_radius_two_is_whole_cycle():
    v = ball(cycle(5), 0, 2)
    assert len(v) == 5 and len(list(v.edges())) == 5


def test_invalid_node_index():
    with pytest.raises((GraphError, IndexError)):
        ball(path((0, 1)), 7, 1)


def test_oblivious_ball_hides_ids():
    g = path((0, 1, 0), ids=(7, 3, 9))
    assert ball(g, 0, 1).ids[0] == 7
    assert ball(g, 0, 1, oblivious=True).ids is None


@settings(max_examples=60, deadline=None)
@given(connected_graphs(), st.integers(0, 3), st.data())
def test_ball_matches_bfs(g, r, data):
    v = data.draw(st.integers(0, g.n - 1))
    view = ball(g, v, r)
    dist = bfs(g.n, g.edges, v)
    expect = {u for u, d in dist.items() if d <= r}
    assert set(view.origin) == expect
    for i, u in enumerate(view.origin):
        assert view.dist[i] == dist[u]
    # induced: every source edge inside the ball is present
    inside = {(a, b) for a, b in g.edges if a in expect and b in expect}
    got = {tuple(sorted((view.origin[a], view.origin[b]))) for a, b in view.edges()}
    assert got == inside


@settings(max_examples=40, deadline=None)
@given(connected_graphs(), st.integers(1, 3), st.data())
def test_subview_is_smaller_ball(g, r, data):
    v = data.draw(st.integers(0, g.n - 1))
    small = data.draw(st.integers(0, r))
    assert canonical_key(ball(g, v, r).subview(small)) == canonical_key(ball(g, v, small))


# -- canonical keys ----------------------------------------------------------------------------

def test_key_invariant_under_index_permutation():
    a = view_from_parts(("r", "x", "y"), [(0, 1), (1, 2)], root=0)
    b = view_from_parts(("y", "x", "r"), [(2, 1), (1, 0)], root=2)
    assert canonical_key(a) == canonical_key(b)


def test_path_and_star_differ():
    p = view_from_parts((0, 0, 0, 0), [(0, 1), (1, 2), (2, 3)], root=1, radius=2)
    s = view_from_parts((0, 0, 0, 0), [(0, 1), (0, 2), (0, 3)], root=0, radius=2)
    assert canonical_key(p) != canonical_key(s)


def test_label_change_changes_key():
    a = view_from_parts((0, 1, 0), [(0, 1), (1, 2)], root=1)
    b = view_from_parts((0, 1, 1), [(0, 1), (1, 2)], root=1)
    assert canonical_key(a) != canonical_key(b)


def test_root_is_distinguished():
    a = view_from_parts((0, 0, 0), [(0, 1), (1, 2)], root=0, radius=2)
    b = view_from_parts((0, 0, 0), [(0, 1), (1, 2)], root=1, radius=2)
    assert canonical_key(a) != canonical_key(b)


def test_strip_identifiers():
    g = path((0, 1), ids=(7, 3))
    v = ball(g, 0, 1)
    s = strip_identifiers(v)
    assert s.ids is None and s.labels == v.labels
    assert strip_identifiers(s) is s
    other = ball(path((0, 1), ids=(1, 2)), 0, 1)
    assert canonical_key(strip_identifiers(other)) == canonical_key(s)


def brute_iso(g1, r1, g2, r2):
    if g1.n != g2.n or len(g1.edges) != len(g2.edges):
        return False
    for perm in itertools.permutations(range(g2.n)):
        if perm[r1] != r2:
            continue
        if any(g1.labels[v] != g2.labels[perm[v]] for v in range(g1.n)):
            continue
        if {tuple(sorted((perm[u], perm[v]))) for u, v in g1.edges} == set(g2.edges):
            return True
    return False


@settings(max_examples=80, deadline=None)
@given(connected_graphs(max_n=6), connected_graphs(max_n=6))
def test_key_equality_matches_brute_force_isomorphism(g1, g2):
    k1 = canonical_key(ball(g1, 0, g1.n))
    k2 = canonical_key(ball(g2, 0, g2.n))
    assert (k1 == k2) == brute_iso(g1, 0, g2, 0)


@settings(max_examples=50, deadline=None)
@given(connected_graphs(max_n=7), st.randoms(use_true_random=False))
def test_key_invariant_under_random_relabelling(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    inv = [0] * g.n
    for i, p in enumerate(perm):
        inv[p] = i
    h = LabelledGraph(tuple(g.labels[inv[i]] for i in range(g.n)),
                      frozenset((perm[u], perm[v]) for u, v in g.edges))
    assert canonical_key(ball(g, 0, 2)) == canonical_key(ball(h, perm[0], 2))


# -- serialisation -------------------------------------------------------------------------------

def test_json_round_trip_with_structured_labels():
    g = LabelledGraph(((3, 1), Bits("0110"), "x"), frozenset({(0, 1), (1, 2)}), ids=(4, 5, 6),
                      oracle=(1, 2, 2))
    h = loads(dumps(g))
    assert h == g


@given(st.recursive(st.integers(0, 10 ** 6) | st.text("ab", max_size=4),
                    lambda inner: st.lists(inner, max_size=3).map(tuple), max_leaves=8))
def test_label_encoding_round_trips(value):
    assert decode(encode(value)) == value


def test_dot_export_mentions_every_node():
    dot = to_dot(path(("a", "b")))
    assert dot.startswith("graph") and "n0 -- n1" in dot and "n1 [" in dot
