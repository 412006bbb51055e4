"""Identifier elimination over large oracles, neighbourhood collections and
the sequential separator procedures."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Iterable

from . import config
from .constructions import (ConstructionParams, TableauLabel, _add_fragments, _add_grid, _add_tail,
                            _Builder, _windows, build_fragments, simulate_prefix)
from .errors import CapabilityError, CapExceeded
from .graph import CanonicalKey, LabelledGraph, PartialIds, View, ball, canonical_key
from .labels import order_key
from .oracles import ScalarOracle, invert
from .runtime import LocalAlgorithm, constant
from .turing import Halted, TuringMachine, run_bounded


# -- identifier elimination ----------------------------------------------------------

def id_bound(oracle: ScalarOracle, view: View) -> int:
    """g*: the largest g(l_u) over the nodes of ``view``."""
    if view.oracle is None:
        raise CapabilityError("the view carries no oracle labels")
    return max(invert(oracle, x) for x in view.oracle)


def compile_ld_to_ldof(alg: LocalAlgorithm, oracle: ScalarOracle, pass_oracle: bool = False,
                       cap: int | None = None, radius: int | None = None) -> LocalAlgorithm:
    """Turn an identifier-using decider into an identifier-oblivious one that
    reads the labels of a large oracle.

    At each node: compute g* over the radius-r ball, try injective
    identifier assignments from ``1..g*`` on that ball and answer no iff one
    of them makes ``alg`` answer no.  If ``alg`` declares ``id_candidates``
    only those assignments are tried; otherwise all of them.  The declared
    radius is 2r by default; only the inner radius-r ball is used.
    """
    if oracle.index_bound is None:
        raise CapabilityError(f"oracle {oracle.name!r} is not declared large; it cannot be inverted")
    r = alg.radius
    outer = 2 * r if radius is None else radius
    if outer < r:
        raise ValueError("the compiled radius cannot be below the decider's radius")
    cap = config.enum_cap() if cap is None else cap
    stats = {"decisions": 0, "assignments": 0}

    def assignments(inner_core, bound: int) -> Iterable[Any]:
        m = len(inner_core)
        if alg.id_candidates is not None:
            for fixed in alg.id_candidates(View(inner_core), bound):
                if PartialIds.feasible(m, fixed, bound):
                    yield PartialIds(m, fixed, bound)
            return
        count = math.perm(bound, m) if bound >= m else 0
        if count > cap:
            raise CapExceeded(f"{count} identifier assignments exceed the cap of {cap}", count)
        yield from itertools.permutations(range(1, bound + 1), m)

    def decide(view: View) -> bool:
        inner = view.subview(r)
        bound = id_bound(oracle, inner)
        core = inner.core if pass_oracle else inner.core.without_oracle()
        stats["decisions"] += 1
        tried = 0
        for ids in assignments(core, bound):
            tried += 1
            if tried > cap:
                raise CapExceeded(f"more than {cap} identifier assignments", tried)
            if not alg.decide(View(core, ids)):
                stats["assignments"] += tried
                return False
        stats["assignments"] += tried
        return True

    compiled = LocalAlgorithm(f"compiled({alg.name},{oracle.name})", outer, decide,
                              oblivious=True, uses_oracle=True)
    object.__setattr__(compiled, "stats", stats)
    return compiled


def rank_assignment(graph: LabelledGraph) -> tuple[int, ...]:
    """Ranks 1..n by oracle label, ties broken by node index."""
    order = sorted(range(graph.n), key=lambda v: (order_key(graph.oracle[v]), v))
    ranks = [0] * graph.n
    for k, v in enumerate(order, start=1):
        ranks[v] = k
    return tuple(ranks)


def rank_assignment_enumerated(graph: LabelledGraph, oracle: ScalarOracle, r: int) -> bool:
    """At every node, the rank assignment restricted to the radius-r ball is
    one of the assignments the compiler enumerates (values within 1..g*)."""
    ranks = rank_assignment(graph)
    for v in range(graph.n):
        view = ball(graph, v, r, oblivious=True)
        bound = id_bound(oracle, view)
        if any(ranks[u] > bound for u in view.origin):
            return False
    return True


# -- neighbourhood collections -------------------------------------------------------

@dataclass
class NeighborhoodCollection:
    machine: TuringMachine
    r: int
    views: dict[CanonicalKey, View] = field(default_factory=dict)
    complete: bool = True
    considered: int = 0
    notes: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.views)

    def __contains__(self, key: CanonicalKey) -> bool:
        return key in self.views


class _Collector:
    def __init__(self, coll: NeighborhoodCollection, cap: int):
        self.coll = coll
        self.cap = cap

    def add_graph(self, graph: LabelledGraph, roots: Iterable[int], i0: Any) -> None:
        g = graph.with_oracle([i0] * graph.n)
        for v in roots:
            self.coll.considered += 1
            if self.coll.considered > self.cap:
                raise CapExceeded(f"neighbourhood collection exceeded the cap of {self.cap}",
                                  self.coll.considered)
            view = ball(g, v, self.coll.r, oblivious=True)
            self.coll.views.setdefault(canonical_key(view), view)


def _full_assembly(m: TuringMachine, r: int, rows, fragments, tail: int) -> LabelledGraph:
    b = _Builder()
    _add_grid(b, m, r, rows)
    _add_fragments(b, m, r, 0, fragments)
    _add_tail(b, m, r, 1, tail, 0)
    return b.graph()


def _strip_views(col: _Collector, m: TuringMachine, r: int, fragments, i0: Any) -> None:
    """Views rooted in rows 0..r when M runs longer than 2r + 2 steps.

    Rows 0..2r are computed exactly; the right border sits at an unknown
    column s >= 2r + 3, so every s up to the point where the visible part
    becomes periodic is tried.
    """
    for s in range(2 * r + 3, 4 * r + 4):
        rows, _ = simulate_prefix(m, 2 * r, s + 1)
        b = _Builder()
        idx = _add_grid(b, m, r, rows, bottom=False)
        first = s == 2 * r + 3
        if first:
            _add_fragments(b, m, r, 0, fragments)
            _add_tail(b, m, r, 1, 2 * r, 0)
        roots = [idx[i][j] for i in range(r + 1) for j in range(s + 1)]
        if first:
            roots += range(len(rows) * (s + 1), len(b.labels))
        col.add_graph(b.graph(), roots, i0)


def _deep_views(col: _Collector, m: TuringMachine, r: int, i0: Any, cap: int) -> None:
    """Views rooted below row r, assembled from syntactic (2r+1)-windows."""
    size = 2 * r + 1
    windows = _windows(m, size, size, cap)
    for left_border in (False, True):
        for rows in sorted(windows[left_border], key=lambda x: tuple((c.symbol, c.state or "") for row in x for c in row)):
            if left_border:
                horizontal = [("left", d) for d in range(r + 1)]
            else:
                horizontal = [(None, None)] + [("right", d) for d in range(r + 1)]
            vertical = [None] + list(range(r + 1))
            last = rows[-1]
            halts_last = any(c.head and m.is_halting(c.state) for c in last)
            for db in vertical:
                if db is None and halts_last:
                    continue
                if db is not None and any(c.head and not m.is_halting(c.state) for c in last):
                    continue
                top_row, root_i = (0, r) if db is None else (r - db, 2 * r - db)
                for side, d in horizontal:
                    if side == "left":
                        c0, c1, root_j = 0, d + r, d
                    elif side == "right":
                        c0, c1, root_j = r - d, 2 * r, 2 * r - d
                    else:
                        c0, c1, root_j = 0, 2 * r, r
                    sub = tuple(tuple(row[c0:c1 + 1]) for row in rows[top_row:])
                    col_offsets = [d % 3] if side == "left" else range(3)
                    for a in range(3):
                        for bj in col_offsets:
                            b = _Builder()
                            # origin chosen so the root gets coordinates (a, bj)
                            origin = (a - (root_i - top_row), bj - (root_j - c0))
                            idx = _add_grid(b, m, r, sub, top=False, bottom=db is not None,
                                            left=side == "left", right=side == "right",
                                            origin=origin)
                            col.add_graph(b.graph(), [idx[root_i - top_row][root_j - c0]], i0)


def enumerate_Q(m: TuringMachine, r: int, cap: int | None = None, i0: Any = 0) -> NeighborhoodCollection:
    """Every radius-r view that can occur in G(M, r, 2r) under the constant
    oracle label ``i0``, computed without assuming that M halts.

    M is simulated for at most 2r + 2 steps.  If it halts by then the whole
    instance is known; otherwise the top rows come from the simulation, the
    fragment collection, spine and tail are syntactic, and views further down
    the table are assembled from every syntactically consistent window.
    """
    cap = config.q_cap() if cap is None else cap
    coll = NeighborhoodCollection(m, r)
    col = _Collector(coll, cap)
    params = ConstructionParams(r=r, cap=cap)
    try:
        fragments = build_fragments(m, params)
        steps = 2 * r + 2
        rows, halted = simulate_prefix(m, steps, steps + 1)
        if halted:
            s = len(rows) - 1
            table = [row[:s + 1] for row in rows]
            g = _full_assembly(m, r, table, fragments, 2 * r)
            col.add_graph(g, range(g.n), i0)
        else:
            _strip_views(col, m, r, fragments, i0)
            _deep_views(col, m, r, i0, cap)
    except CapExceeded as exc:
        coll.complete = False
        coll.notes.append(str(exc))
    return coll


# -- separators ------------------------------------------------------------------------

@dataclass
class SeparatorOutcome:
    bit: int
    halted: bool = True
    transcript: list[tuple[str, bool]] = field(default_factory=list)
    complete: bool = True
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "bit": self.bit,
            "halted": self.halted,
            "complete": self.complete,
            "warnings": list(self.warnings),
            "transcript": [{"view": k, "output": "yes" if out else "no"} for k, out in self.transcript],
        }


def _fit(alg: LocalAlgorithm, view: View) -> View:
    if alg.radius > view.radius:
        raise ValueError(f"decider radius {alg.radius} exceeds the view radius {view.radius}")
    view = view.subview(alg.radius)
    return view if alg.uses_oracle else view.without_oracle()


def separator_B_lemma1(alg: LocalAlgorithm, m: TuringMachine, r: int, i0: Any = 0,
                       cap: int | None = None) -> SeparatorOutcome:
    """Bit 1 iff ``alg`` answers no on some view of the collection Q."""
    if not alg.oblivious:
        raise ValueError("the collection views carry no identifiers; the decider must be oblivious")
    coll = enumerate_Q(m, r, cap, i0)
    out = SeparatorOutcome(0, complete=coll.complete, warnings=list(coll.notes))
    if not coll.complete:
        out.warnings.append("neighbourhood collection is incomplete (cap hit)")
    for key, view in coll.views.items():
        answer = bool(alg.decide(_fit(alg, view)))
        out.transcript.append((key.digest(), answer))
        if not answer:
            out.bit = 1
    return out


def partial_J(m: TuringMachine, r: int, ell: int = 1) -> tuple[LabelledGraph, int]:
    """J(M, r, l) up to distance 2r from the pivot, from at most 2r steps of M.

    Returns the induced ball as a graph (pivot first) and the pivot index.
    """
    rows, halted = simulate_prefix(m, 2 * r, 2 * r + 1)
    if halted:
        s = len(rows) - 1
        table = [row[:s + 1] for row in rows]
        borders = dict(bottom=True, right=True)
    else:
        table = rows
        borders = dict(bottom=False, right=False)
    fragments = build_fragments(m, ConstructionParams(r=r))
    b = _Builder()
    _add_grid(b, m, r, table, pivot_bit=ell, **borders)
    _add_fragments(b, m, r, 0, fragments, limit=2 * r + 1)
    whole = b.graph()
    order = list(whole.distances_from(0, 2 * r))
    pos = {u: i for i, u in enumerate(order)}
    edges = frozenset((pos[u], pos[v]) for u, v in whole.edges if u in pos and v in pos)
    return LabelledGraph(tuple(whole.labels[u] for u in order), edges), 0


def separator_B_thm2(alg: LocalAlgorithm, m: TuringMachine, r: int) -> SeparatorOutcome:
    """Bit 0 iff ``alg`` answers no at some node within distance r of the pivot
    of the partial J(M, r, 1) with identifiers 1..m in breadth-first order."""
    if alg.uses_oracle:
        raise ValueError("the separator runs identifier-based deciders without oracle labels")
    g, pivot = partial_J(m, r, 1)
    g = g.with_ids(range(1, g.n + 1))
    dist = g.distances_from(pivot, r)
    out = SeparatorOutcome(1)
    for v in sorted(dist):
        view = ball(g, v, alg.radius, oblivious=alg.oblivious, with_oracle=False)
        answer = bool(alg.decide(view))
        out.transcript.append((canonical_key(view).digest(), answer))
        if not answer:
            out.bit = 0
    return out


# -- sample deciders for the separators --------------------------------------------------

def halt_detector(r: int, output: int = 1) -> LocalAlgorithm:
    """Oblivious: no iff the view shows a cell in the halt state for ``output``."""

    def decide(view: View) -> bool:
        for lab in view.labels:
            if isinstance(lab, TableauLabel) and lab.cell is not None and lab.cell.head:
                m = lab.machine
                if lab.cell.state == (m.halt1 if output else m.halt0):
                    return False
        return True

    return LocalAlgorithm(f"halt{output}-detector", r, decide, oblivious=True, uses_oracle=True)


def pivot_stub(r: int) -> LocalAlgorithm:
    """Identifier-based: the pivot runs M for 2r steps and says no if M halted
    with an output other than its pivot bit."""

    def decide(view: View) -> bool:
        me = view.labels[0]
        if not (isinstance(me, TableauLabel) and me.pivot and me.pivot_bit in (0, 1)):
            return True
        res = run_bounded(me.machine, 2 * r)
        return not (isinstance(res, Halted) and res.output != me.pivot_bit)

    return LocalAlgorithm("pivot-stub", r, decide, oblivious=False)


def separator_decider(name: str, r: int) -> LocalAlgorithm:
    if name == "constant-yes":
        return constant(True, r)
    if name == "constant-no":
        return constant(False, r)
    if name in ("halt1-detector", "halt0-detector"):
        return halt_detector(r, int(name[4]))
    if name == "pivot-stub":
        return pivot_stub(r)
    raise KeyError(f"unknown decider {name!r}; choose from constant-yes, constant-no, "
                   "halt1-detector, halt0-detector, pivot-stub")
