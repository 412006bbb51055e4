import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from locdec.constructions import ConstructionParams, build_instance, mutate
from locdec.graph import LabelledGraph
from locdec.languages import (LANGUAGES, lang_2col, lang_J_thm2, lang_L1_thm3, lang_L2_thm3,
                              lang_L_lemma1, lang_parity, language, tag_matches)
from locdec.oracles import SHIPPED_STRATEGIES, SortedById, assign, const_n_oracle
from locdec.runtime import run
from locdec.turing import M_ONE, M_ZERO, m_count


def perm_ids(g, seed=0):
    ids = list(range(1, g.n + 1))
    random.Random(seed).shuffle(ids)
    return g.with_ids(ids)


def graph(labels, edges):
    return LabelledGraph(tuple(labels), frozenset(edges))


def test_registered_tags_match_flags():
    for name in LANGUAGES:
        lang = language(name)
        for tag, alg in lang.deciders.items():
            assert tag_matches(tag, alg), (name, tag)
    with pytest.raises(KeyError):
        language("planarity")


# -- 2-colouring and parity ----------------------------------------------------------------------

def test_two_colouring_examples():
    lang = lang_2col()
    alg = lang.decider("LDO")
    path = graph((0, 1, 0), [(0, 1), (1, 2)])
    edge = graph((1, 1), [(0, 1)])
    triangle = graph((0, 1, 0), [(0, 1), (1, 2), (0, 2)])
    assert lang.membership(path) and run(alg, path).accepted
    assert not lang.membership(edge) and not run(alg, edge).accepted
    assert not lang.membership(triangle) and not run(alg, triangle).accepted


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 10), st.integers(0, 10 ** 6))
def test_parity_matches_node_count(n, seed):
    rng = random.Random(seed)
    edges = {(rng.randrange(v), v) for v in range(1, n)}
    g = graph((0,) * n, edges)
    lang = lang_parity()
    g = assign(const_n_oracle(), g, SortedById())
    assert lang.membership(g) == (n % 2 == 0)
    assert run(lang.decider("LDO^f"), g).accepted == (n % 2 == 0)


def test_parity_three_path_rejected_everywhere():
    g = assign(const_n_oracle(), graph((0, 0, 0), [(0, 1), (1, 2)]), SortedById())
    assert run(lang_parity().decider("LDO^f"), g).no_nodes == [0, 1, 2]


# -- identifier language ----------------------------------------------------------------------------

@pytest.mark.parametrize("m,member", [(M_ZERO, True), (M_ONE, False), (m_count(3), True)])
def test_lemma1_language(m, member):
    lang = lang_L_lemma1()
    g = build_instance("G", m, ConstructionParams(r=1, N=3)).graph
    assert lang.membership(g) == member
    for seed in range(3):
        assert run(lang.decider("LD"), perm_ids(g, seed)).accepted == member


def test_lemma1_rejects_corruption():
    lang = lang_L_lemma1()
    inst = build_instance("G", M_ZERO, ConstructionParams(r=1, N=3))
    bad = mutate(inst, "nonconsecutive_tail")
    assert not lang.membership(bad)
    assert not run(lang.decider("LD"), perm_ids(bad)).accepted


# -- oracle languages -------------------------------------------------------------------------------

@pytest.mark.parametrize("m,ell,member", [(M_ZERO, 0, True), (M_ZERO, 1, False), (M_ONE, 1, True)])
def test_thm2_language(m, ell, member):
    lang = lang_J_thm2()
    inst = build_instance("J", m, ConstructionParams(r=1, ell=ell))
    assert lang.membership(inst.graph) == member
    for strat in SHIPPED_STRATEGIES:
        verdict = run(lang.decider("LDO^f"), assign(lang.oracle, inst.graph, strat))
        assert verdict.accepted == member
        if not member:
            assert inst.pivot in verdict.no_nodes


@pytest.mark.parametrize("m,member", [(M_ZERO, True), (M_ONE, False)])
def test_l2_language_all_placements(m, member):
    lang = lang_L2_thm3()
    g = build_instance("H", m, ConstructionParams(r=1)).graph
    assert lang.membership(g) == member
    alg = lang.decider("LDO^f")
    base = assign(lang.oracle, g, SortedById())
    bits = base.oracle[-1]
    # the only distinguishable placements are the positions of the bit string
    holders = random.Random(0).sample(range(g.n), min(g.n, 12)) + [0]
    for v in holders:
        placed = [0] * g.n
        placed[v] = bits
        assert run(alg, g.with_oracle(placed)).accepted == member


@pytest.mark.parametrize("n,member", [(1, True), (2, False), (3, True), (4, True), (6, False)])
def test_l1_language(n, member):
    lang = lang_L1_thm3()
    inst = build_instance("P", n=n)
    assert lang.membership(inst.graph) == member
    alg = lang.decider("LDO^f")
    for strat in SHIPPED_STRATEGIES:
        assert run(alg, assign(lang.oracle, inst.graph, strat)).accepted == member


def test_l1_perturbed_distance_rejected():
    lang = lang_L1_thm3()
    bad = mutate(build_instance("P", n=5), "path_distance")
    assert not lang.membership(bad)
    assert not run(lang.decider("LDO^f"), assign(lang.oracle, bad, SortedById())).accepted


def test_ld_decider_agrees_on_all_small_permutations():
    lang = lang_2col()
    g = graph((0, 1, 0, 1), [(0, 1), (1, 2), (2, 3)])
    for ids in itertools.permutations(range(1, 5)):
        assert run(lang.decider("LDO"), g.with_ids(ids)).accepted
