"""Labelled graphs, radius-r views and exact canonical keys for views.

A :class:`LabelledGraph` is immutable.  Views are split in two parts: a
:class:`ViewCore` holding everything except identifiers (structure, input
labels, oracle labels) and a lightweight :class:`View` that pairs a core with
an identifier sequence.  Cores are cached per graph and shared between
variants that differ only in identifiers, which lets identifier-oblivious
computations be memoised on the core.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Mapping, Sequence

from .errors import GraphError
from .labels import decode, encode


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class LabelledGraph:
    """Simple connected graph with input labels, optional ids and oracle labels.

    ``labels[v]`` is the input label x(v); ``ids`` and ``oracle`` are either
    ``None`` or tuples with one entry per node.
    """

    labels: tuple
    edges: frozenset
    ids: tuple | None = None
    oracle: tuple | None = None
    # caches; _struct is shared by every variant, _plain (oracle-free cores) by
    # id and oracle variants, _cores only by id variants
    _struct: dict = field(default_factory=dict, repr=False, compare=False)
    _cores: dict = field(default_factory=dict, repr=False, compare=False)
    _plain: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.labels)
        if n == 0:
            raise GraphError("graph must have at least one node")
        if not isinstance(self.labels, tuple):
            object.__setattr__(self, "labels", tuple(self.labels))
        edges = set()
        for e in self.edges:
            u, v = e
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {e} references a missing node")
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            edges.add(_norm_edge(u, v))
        object.__setattr__(self, "edges", frozenset(edges))
        if self.ids is not None:
            ids = tuple(self.ids)
            if len(ids) != n:
                raise GraphError("identifier list length differs from node count")
            if any(isinstance(i, bool) or not isinstance(i, int) or i < 0 for i in ids):
                raise GraphError("identifiers must be naturals")
            if len(set(ids)) != n:
                raise GraphError("identifiers must be pairwise distinct")
            object.__setattr__(self, "ids", ids)
        if self.oracle is not None:
            oracle = tuple(self.oracle)
            if len(oracle) != n or any(x is None for x in oracle):
                raise GraphError("every node needs exactly one oracle label")
            object.__setattr__(self, "oracle", oracle)
        if "adj" not in self._struct:
            adj: list[list[int]] = [[] for _ in range(n)]
            for u, v in self.edges:
                adj[u].append(v)
                adj[v].append(u)
            self._struct["adj"] = tuple(tuple(sorted(a)) for a in adj)
            if len(self.distances_from(0)) != n:
                raise GraphError("graph is not connected")

    # -- basic accessors -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def adj(self) -> tuple[tuple[int, ...], ...]:
        return self._struct["adj"]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def distances_from(self, v: int, limit: int | None = None) -> dict[int, int]:
        """Breadth-first distances from ``v`` (optionally only up to ``limit``)."""
        adj = self._struct["adj"]
        dist = {v: 0}
        queue = deque([v])
        while queue:
            u = queue.popleft()
            d = dist[u]
            if limit is not None and d >= limit:
                continue
            for w in adj[u]:
                if w not in dist:
                    dist[w] = d + 1
                    queue.append(w)
        return dist

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabelledGraph):
            return NotImplemented
        return (self.labels == other.labels and self.edges == other.edges
                and self.ids == other.ids and self.oracle == other.oracle)

    def __hash__(self) -> int:
        return hash((self.labels, self.edges, self.ids, self.oracle))

    # -- variants --------------------------------------------------------

    def with_ids(self, ids: Sequence[int] | None) -> LabelledGraph:
        return LabelledGraph(self.labels, self.edges, None if ids is None else tuple(ids),
                             self.oracle, self._struct, self._cores, self._plain)

    def without_ids(self) -> LabelledGraph:
        return self.with_ids(None)

    def with_oracle(self, oracle: Sequence[Any] | None) -> LabelledGraph:
        return LabelledGraph(self.labels, self.edges, self.ids,
                             None if oracle is None else tuple(oracle), self._struct, {}, self._plain)

    def with_labels(self, labels: Sequence[Any]) -> LabelledGraph:
        if len(labels) != self.n:
            raise GraphError("label list length differs from node count")
        return LabelledGraph(tuple(labels), self.edges, self.ids, self.oracle, self._struct, {})

    def relabel(self, changes: Mapping[int, Any]) -> LabelledGraph:
        labels = list(self.labels)
        for v, x in changes.items():
            labels[v] = x
        return self.with_labels(labels)

    # -- views -----------------------------------------------------------

    def _ball_nodes(self, v: int, r: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        key = ("ball", v, r)
        hit = self._struct.get(key)
        if hit is None:
            dist = self.distances_from(v, r)
            # BFS insertion order keeps the root first and distances sorted
            order = tuple(dist)
            hit = (order, tuple(dist[u] for u in order))
            self._struct[key] = hit
        return hit

    def core(self, v: int, r: int, with_oracle: bool) -> ViewCore:
        if not 0 <= v < self.n:
            raise GraphError(f"node index {v} out of range for a graph of {self.n} nodes")
        if r < 0:
            raise GraphError("radius must be a natural")
        if with_oracle and self.oracle is None:
            with_oracle = False
        cache = self._cores if with_oracle else self._plain
        key = (v, r)
        hit = cache.get(key)
        if hit is None:
            order, dists = self._ball_nodes(v, r)
            pos = {u: i for i, u in enumerate(order)}
            adj = self.adj
            local_adj = tuple(tuple(sorted(pos[w] for w in adj[u] if w in pos)) for u in order)
            hit = ViewCore(
                radius=r,
                adj=local_adj,
                dist=dists,
                labels=tuple(self.labels[u] for u in order),
                oracle=tuple(self.oracle[u] for u in order) if with_oracle else None,
                origin=order,
            )
            if with_oracle:
                hit.memo["_no_oracle"] = self.core(v, r, False)
            cache[key] = hit
        return hit


class ViewCore:
    """Identifier-free part of a view.  Node 0 is the root.

    Equality is by identity; use :func:`canonical_key` to compare content.
    ``memo`` is scratch space for computations that depend on the core only.
    """

    __slots__ = ("radius", "adj", "dist", "labels", "oracle", "origin", "memo")

    def __init__(self, radius: int, adj: tuple, dist: tuple, labels: tuple,
                 oracle: tuple | None, origin: tuple):
        self.radius = radius
        self.adj = adj
        self.dist = dist
        self.labels = labels
        self.oracle = oracle
        self.origin = origin
        self.memo: dict = {}

    def __len__(self) -> int:
        return len(self.labels)

    def without_oracle(self) -> ViewCore:
        if self.oracle is None:
            return self
        hit = self.memo.get("_no_oracle")
        if hit is None:
            hit = ViewCore(self.radius, self.adj, self.dist, self.labels, None, self.origin)
            self.memo["_no_oracle"] = hit
        return hit


class _GraphIds(Sequence):
    """Identifiers of a view, read lazily from the source graph."""

    __slots__ = ("_origin", "_ids")

    def __init__(self, origin: tuple, ids: tuple):
        self._origin = origin
        self._ids = ids

    def __len__(self) -> int:
        return len(self._origin)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self._ids[u] for u in self._origin[i]]
        return self._ids[self._origin[i]]


class PartialIds(Sequence):
    """An injective assignment fixed on some view nodes, completed lazily.

    Nodes outside ``fixed`` receive the smallest values of ``1..bound`` not
    used by ``fixed``, in view order.  The completion is only materialised
    when such a node is actually read.
    """

    __slots__ = ("_n", "_fixed", "_bound", "_full")

    def __init__(self, n: int, fixed: Mapping[int, int], bound: int):
        self._n = n
        self._fixed = dict(fixed)
        self._bound = bound
        self._full: list[int] | None = None

    @staticmethod
    def feasible(n: int, fixed: Mapping[int, int], bound: int) -> bool:
        values = list(fixed.values())
        return (len(set(values)) == len(values) and all(1 <= x <= bound for x in values)
                and n <= bound)

    def _complete(self) -> list[int]:
        if self._full is None:
            used = set(self._fixed.values())
            free = (x for x in range(1, self._bound + 1) if x not in used)
            self._full = [self._fixed[u] if u in self._fixed else next(free) for u in range(self._n)]
        return self._full

    def __len__(self) -> int:
        return self._n

    def __getitem__(self, i):
        if isinstance(i, int) and i in self._fixed:
            return self._fixed[i]
        return self._complete()[i]


class View:
    """A rooted radius-r ball: an id-free core plus optional identifiers.

    The root is always local node 0; ``origin[i]`` is the source-graph index
    of local node ``i`` (bookkeeping only, no semantics attach to it).
    """

    __slots__ = ("core", "ids")

    def __init__(self, core: ViewCore, ids: Sequence[int] | None = None):
        if ids is not None and len(ids) != len(core):
            raise GraphError("identifier sequence does not match the view size")
        self.core = core
        self.ids = ids

    root = 0

    @property
    def radius(self) -> int:
        return self.core.radius

    @property
    def adj(self) -> tuple:
        return self.core.adj

    @property
    def dist(self) -> tuple:
        return self.core.dist

    @property
    def labels(self) -> tuple:
        return self.core.labels

    @property
    def oracle(self) -> tuple | None:
        return self.core.oracle

    @property
    def origin(self) -> tuple:
        return self.core.origin

    @property
    def oblivious(self) -> bool:
        return self.ids is None

    def __len__(self) -> int:
        return len(self.core)

    def nodes(self) -> range:
        return range(len(self.core))

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, nbrs in enumerate(self.core.adj):
            for w in nbrs:
                if u < w:
                    yield (u, w)

    def with_ids(self, ids: Sequence[int]) -> View:
        return View(self.core, ids)

    def without_oracle(self) -> View:
        return View(self.core.without_oracle(), self.ids)

    def subview(self, r: int) -> View:
        """The radius-r ball around the same root, as an induced sub-view."""
        if r > self.radius:
            raise GraphError("cannot grow a view")
        if r == self.radius:
            return self
        memo = self.core.memo
        hit = memo.get(("_sub", r))
        if hit is None:
            keep = [u for u in self.nodes() if self.dist[u] <= r]
            pos = {u: i for i, u in enumerate(keep)}
            core = ViewCore(
                radius=r,
                adj=tuple(tuple(sorted(pos[w] for w in self.adj[u] if w in pos)) for u in keep),
                dist=tuple(self.dist[u] for u in keep),
                labels=tuple(self.labels[u] for u in keep),
                oracle=None if self.oracle is None else tuple(self.oracle[u] for u in keep),
                origin=tuple(self.origin[u] for u in keep),
            )
            hit = memo[("_sub", r)] = core
        # BFS order puts the radius-r ball first, so ids are a prefix
        return View(hit, None if self.ids is None else tuple(self.ids[u] for u in range(len(hit))))

    def __repr__(self) -> str:
        return (f"View(size={len(self)}, radius={self.radius}, "
                f"ids={'no' if self.ids is None else 'yes'}, "
                f"oracle={'no' if self.oracle is None else 'yes'})")


def ball(graph: LabelledGraph, v: int, r: int, oblivious: bool = False,
         with_oracle: bool = True) -> View:
    """Induced radius-r ball around ``v``; identifiers stripped when ``oblivious``."""
    core = graph.core(v, r, with_oracle)
    if oblivious or graph.ids is None:
        return View(core, None)
    return View(core, _GraphIds(core.origin, graph.ids))


def strip_identifiers(view: View) -> View:
    return view if view.ids is None else View(view.core, None)


def view_from_parts(labels: Sequence[Any], edges: Iterable[tuple[int, int]], root: int = 0,
                    ids: Sequence[int] | None = None, oracle: Sequence[Any] | None = None,
                    radius: int | None = None) -> View:
    """Build a view directly (tests, hand-made views); the ball is the whole graph."""
    g = LabelledGraph(tuple(labels), frozenset(edges), None if ids is None else tuple(ids),
                      None if oracle is None else tuple(oracle))
    r = max(g.distances_from(root).values()) if radius is None else radius
    return ball(g, root, r)


# -- canonical keys -------------------------------------------------------

def _node_data(view: View) -> list[tuple]:
    oracle = view.oracle
    ids = view.ids
    out = []
    for u in view.nodes():
        out.append((
            view.dist[u],
            encode(view.labels[u]),
            "" if oracle is None else encode(oracle[u]),
            -1 if ids is None else ids[u],
        ))
    return out


def _ranks(sigs: list) -> list[int]:
    order = sorted(set(sigs))
    rank = {s: i for i, s in enumerate(order)}
    return [rank[s] for s in sigs]


def _refine(colors: list[int], adj: tuple) -> list[int]:
    """Colour refinement to the coarsest equitable partition (ranks stay canonical)."""
    k = len(set(colors))
    while True:
        sigs = [(colors[u], tuple(sorted(colors[w] for w in adj[u]))) for u in range(len(colors))]
        new = _ranks(sigs)
        k2 = len(set(new))
        if k2 == k:
            return new
        colors, k = new, k2


def _certificate(colors: list[int], data: list[tuple], adj: tuple) -> tuple:
    order = sorted(range(len(colors)), key=colors.__getitem__)
    pos = {u: i for i, u in enumerate(order)}
    edges = sorted(_norm_edge(pos[u], pos[w]) for u in order for w in adj[u] if u < w)
    return (tuple(data[u] for u in order), tuple(edges))


def _search(colors: list[int], data: list[tuple], adj: tuple) -> tuple:
    n = len(colors)
    if len(set(colors)) == n:
        return _certificate(colors, data, adj)
    cells: dict[int, list[int]] = {}
    for u, c in enumerate(colors):
        cells.setdefault(c, []).append(u)
    target_color = min(c for c, members in cells.items() if len(members) > 1)
    cell = cells[target_color]
    # twins (same neighbourhood apart from each other) are swapped by an
    # automorphism, so one representative per twin class suffices
    reps: list[int] = []
    for u in cell:
        nbrs = frozenset(adj[u])
        if not any(frozenset(adj[w]) - {u} == nbrs - {w} for w in reps):
            reps.append(u)
    best = None
    for u in reps:
        forced = [2 * c + (1 if (c == target_color and w != u) else 0) for w, c in enumerate(colors)]
        cert = _search(_refine(_ranks(forced), adj), data, adj)
        if best is None or cert < best:
            best = cert
    return best


@dataclass(frozen=True)
class CanonicalKey:
    """Isomorphism-invariant fingerprint of a view (root and labels preserved)."""

    radius: int
    certificate: tuple

    def digest(self) -> str:
        import hashlib
        return hashlib.blake2b(repr(self.certificate).encode(), digest_size=12).hexdigest()


def canonical_key(view: View) -> CanonicalKey:
    """Exact canonical form: equal keys iff a root-, label- and id-preserving
    isomorphism exists between the two views."""
    memo_key = ("_canonical", view.ids is None)
    if view.ids is None and memo_key in view.core.memo:
        return view.core.memo[memo_key]
    data = _node_data(view)
    # root is distinguished by distance 0
    colors = _refine(_ranks(data), view.adj)
    key = CanonicalKey(view.radius, _search(colors, data, view.adj))
    if view.ids is None:
        view.core.memo[memo_key] = key
    return key


def anchored_isomorphic(g: LabelledGraph, g_root: int, h: LabelledGraph, h_root: int) -> bool:
    """Label-preserving isomorphism test mapping ``g_root`` to ``h_root``.

    Exact when ``h`` is locally injective (the neighbours of every node carry
    pairwise distinct labels), which holds for every construction we build;
    the matching is then forced and found in linear time.
    """
    if g.n != h.n or len(g.edges) != len(h.edges):
        return False
    if g.labels[g_root] != h.labels[h_root]:
        return False
    mapping = {g_root: h_root}
    used = {h_root}
    queue = deque([g_root])
    while queue:
        x = queue.popleft()
        y = mapping[x]
        gx = g.neighbors(x)
        hy = h.neighbors(y)
        if len(gx) != len(hy):
            return False
        by_label: dict[Any, int] = {}
        for w in hy:
            lab = h.labels[w]
            if lab in by_label:
                raise GraphError("anchored_isomorphic needs a locally injective reference graph")
            by_label[lab] = w
        for u in gx:
            w = by_label.get(g.labels[u])
            if w is None:
                return False
            if u in mapping:
                if mapping[u] != w:
                    return False
            else:
                if w in used:
                    return False
                mapping[u] = w
                used.add(w)
                queue.append(u)
    return len(mapping) == g.n


# -- serialisation ------------------------------------------------------------

def graph_to_json(graph: LabelledGraph) -> dict:
    nodes = []
    for v in range(graph.n):
        nodes.append({
            "label": encode(graph.labels[v]),
            "id": None if graph.ids is None else graph.ids[v],
            "oracle": None if graph.oracle is None else encode(graph.oracle[v]),
        })
    return {"nodes": nodes, "edges": sorted([list(e) for e in graph.edges])}


def graph_from_json(payload: Mapping) -> LabelledGraph:
    try:
        nodes = payload["nodes"]
        edges = payload["edges"]
    except (KeyError, TypeError):
        raise GraphError("graph JSON needs 'nodes' and 'edges'") from None
    labels = tuple(decode(node["label"]) for node in nodes)
    raw_ids = [node.get("id") for node in nodes]
    raw_oracle = [node.get("oracle") for node in nodes]
    if any(i is not None for i in raw_ids) and any(i is None for i in raw_ids):
        raise GraphError("identifiers must be given for all nodes or for none")
    if any(x is not None for x in raw_oracle) and any(x is None for x in raw_oracle):
        raise GraphError("oracle labels must be given for all nodes or for none")
    ids = tuple(raw_ids) if raw_ids and raw_ids[0] is not None else None
    oracle = tuple(decode(x) for x in raw_oracle) if raw_oracle and raw_oracle[0] is not None else None
    return LabelledGraph(labels, frozenset(tuple(e) for e in edges), ids, oracle)


def dumps(graph: LabelledGraph) -> str:
    return json.dumps(graph_to_json(graph))


def loads(text: str) -> LabelledGraph:
    return graph_from_json(json.loads(text))


def to_dot(graph: LabelledGraph, name: str = "G", describe=repr) -> str:
    """Graphviz rendering; presentational only (JSON is the contract)."""
    lines = [f"graph {name} {{", "  node [shape=box, fontsize=9];"]
    for v in range(graph.n):
        parts = [describe(graph.labels[v])]
        if graph.ids is not None:
            parts.append(f"id={graph.ids[v]}")
        if graph.oracle is not None:
            parts.append(f"oracle={graph.oracle[v]!r}")
        text = "\\n".join(parts).replace('"', '\\"')
        lines.append(f'  n{v} [label="{text}"];')
    for u, v in sorted(graph.edges):
        lines.append(f"  n{u} -- n{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
