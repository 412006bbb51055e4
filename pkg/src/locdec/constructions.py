"""Tableau gadgets H(M,r), G(M,r,N), J(M,r,l), the tail S(a,b), the path P(n),
fragment collections, and their identifier-oblivious local checkers.

Layout of a tableau instance (node indices in this order):

* the execution-table grid, row-major; node (0, 0) is the pivot;
* the fragment collection: fragment k hangs off spoke node k, and the spokes
  form a path (the *spine*) pivot - spoke 0 - spoke 1 - ... whose node k is
  also adjacent to the top-left corner of fragment k;
* for G, the tail s_1 ... s_N with s_1 adjacent to the pivot.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable

from . import config
from .errors import BudgetExceeded, CapExceeded, GraphError, LocdecError
from .graph import LabelledGraph, View, anchored_isomorphic
from .labels import register_record
from .runtime import LocalAlgorithm
from .turing import (BLANK, MOVES, SYMBOLS, Cell, Configuration, TuringMachine, config_row,
                     execution_table, initial_configuration, next_cell, step,
                     M_LOOP, M_ZERO)

ROLES = ("grid", "fragment_grid", "tail", "spoke")
FAMILIES = ("H", "G", "J", "P")
NO_BORDERS = (False, False, False, False)


@dataclass(frozen=True)
class TableauLabel:
    """x(v) = (M, r, x'(v)); everything after ``r`` is the local part x'."""

    machine: TuringMachine
    r: int
    role: str
    coords: tuple | None = None             # (i mod 3, j mod 3) for grid roles
    cell: Cell | None = None
    pivot: bool = False
    borders: tuple = NO_BORDERS             # top, bottom, left, right
    tail_index: int | None = None
    fragment: int | None = None
    pivot_bit: int | None = None

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")

    @property
    def top(self) -> bool:
        return self.borders[0]

    @property
    def bottom(self) -> bool:
        return self.borders[1]

    @property
    def left(self) -> bool:
        return self.borders[2]

    @property
    def right(self) -> bool:
        return self.borders[3]

    def describe(self) -> str:
        if self.role == "tail":
            return f"tail {self.tail_index}"
        if self.role == "spoke":
            return f"spoke {self.fragment}"
        head = f"/{self.cell.state}" if self.cell and self.cell.head else ""
        tag = "P" if self.pivot else ("F%d" % self.fragment if self.role == "fragment_grid" else "T")
        bit = f" l={self.pivot_bit}" if self.pivot_bit is not None else ""
        return f"{tag} {self.coords} {self.cell.symbol if self.cell else '?'}{head}{bit}"


def _label_from_fields(f: tuple) -> TableauLabel:
    if len(f) != 10:
        raise ValueError("a tableau label has 10 fields")
    return TableauLabel(*f)


register_record(
    3, TableauLabel,
    lambda x: (x.machine, x.r, x.role, x.coords, x.cell, x.pivot, x.borders,
               x.tail_index, x.fragment, x.pivot_bit),
    _label_from_fields,
)


def describe(label) -> str:
    """Short human-readable rendering used for DOT output."""
    if isinstance(label, TableauLabel):
        return label.describe()
    return repr(label)


@dataclass(frozen=True)
class ConstructionParams:
    r: int = 1
    N: int = 1
    ell: int | None = None
    fragment_dims: tuple[int, int] | None = None   # (width, height)
    cap: int | None = None
    budget: int = config.DEFAULT_BUDGET

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r must be at least 1")
        if self.N < 1:
            raise ValueError("N must be at least 1")
        if self.ell not in (None, 0, 1):
            raise ValueError("pivot bit must be 0 or 1")
        if self.fragment_dims is not None and min(self.fragment_dims) < 1:
            raise ValueError("fragment dimensions must be positive")

    @property
    def dims(self) -> tuple[int, int]:
        return self.fragment_dims or default_fragment_dims(self.r)

    @property
    def fragment_cap(self) -> int:
        return self.cap if self.cap is not None else config.fragment_cap()


def default_fragment_dims(r: int) -> tuple[int, int]:
    return (2 * r + 2, 2 * r + 2)


# -- fragments ----------------------------------------------------------------

@dataclass(frozen=True)
class Fragment:
    rows: tuple[tuple[Cell, ...], ...]

    @property
    def height(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return len(self.rows[0])

    def cell(self, i: int, j: int) -> Cell:
        return self.rows[i][j]

    def states(self) -> set[str]:
        return {c.state for row in self.rows for c in row if c.head}


def _cell_key(rows) -> tuple:
    return tuple((c.symbol, c.state or "") for row in rows for c in row)


def _enumerate_windows(m: TuringMachine, w: int, h: int, left_border: bool,
                       cap: int, counter: list[int]) -> set:
    """Content matrices of every syntactically consistent w x h window.

    ``left_border`` selects windows whose first column is tape cell 0 (a left
    move there stays put and nothing enters from the left).
    """
    syn = m.syntax
    table = m.table
    enter_left = sorted(syn.right_targets) if not left_border else []
    enter_right = sorted(syn.left_targets)
    out: set = set()

    def grow(rows: list) -> None:
        if len(rows) == h:
            counter[0] += 1
            if counter[0] > cap:
                raise CapExceeded(
                    f"fragment enumeration for {m.label()} ({w}x{h}) exceeded the cap of {cap} "
                    f"candidates ({len(out)} distinct fragments so far)", counter[0])
            out.add(tuple(rows))
            return
        row = rows[-1]
        head = next((j for j, c in enumerate(row) if c.head), None)
        if head is not None:
            c = row[head]
            if m.is_halting(c.state):
                return  # a halting row is always the last row of a table
            q2, b, mv = table[(c.state, c.symbol)]
            new = [Cell(x.symbol) for x in row]
            new[head] = Cell(b)
            nj = head + MOVES[mv]
            if nj < 0 and left_border:
                nj = 0
            if 0 <= nj < w:
                new[nj] = Cell(new[nj].symbol, q2)
            grow(rows + [tuple(new)])
            return
        grow(rows + [row])
        for q in enter_left:
            grow(rows + [(Cell(row[0].symbol, q),) + row[1:]])
        for q in enter_right:
            grow(rows + [row[:-1] + (Cell(row[-1].symbol, q),)])

    symbols = sorted(syn.symbols)
    states = sorted(syn.states)
    for syms in itertools.product(symbols, repeat=w):
        plain = tuple(Cell(a) for a in syms)
        grow([plain])
        for j in range(w):
            for q in states:
                grow([plain[:j] + (Cell(syms[j], q),) + plain[j + 1:]])
    return out


@lru_cache(maxsize=64)
def _windows(m: TuringMachine, w: int, h: int, cap: int) -> dict[bool, frozenset]:
    counter = [0]
    return {lb: frozenset(_enumerate_windows(m, w, h, lb, cap, counter)) for lb in (False, True)}


@lru_cache(maxsize=64)
def _fragments(m: TuringMachine, w: int, h: int, cap: int) -> tuple[Fragment, ...]:
    both = _windows(m, w, h, cap)
    rows = set(both[False]) | set(both[True])
    return tuple(Fragment(x) for x in sorted(rows, key=_cell_key))


def build_fragments(m: TuringMachine, params: ConstructionParams | None = None) -> list[Fragment]:
    """Every w x h window consistent with some execution table of ``m``.

    Does not require ``m`` to halt.  Deduplicated by content (all fragment
    nodes of a window carry the same fragment id, so equal content is the
    same labelled fragment up to that id) and sorted deterministically.
    """
    params = params or ConstructionParams()
    w, h = params.dims
    return list(_fragments(m, w, h, params.fragment_cap))


@lru_cache(maxsize=64)
def fragment_count(m: TuringMachine, r: int) -> int:
    """Size of the default fragment collection that the checker expects."""
    w, h = default_fragment_dims(r)
    return len(_fragments(m, w, h, config.fragment_cap()))


# -- assembly -------------------------------------------------------------------

@dataclass
class _Builder:
    labels: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    layout: dict = field(default_factory=dict)

    def add(self, label, where=None) -> int:
        self.labels.append(label)
        v = len(self.labels) - 1
        if where is not None:
            self.layout[where] = v
        return v

    def link(self, u: int, v: int) -> None:
        self.edges.append((u, v))

    def graph(self) -> LabelledGraph:
        return LabelledGraph(tuple(self.labels), frozenset(self.edges))


def _add_grid(b: _Builder, m: TuringMachine, r: int, rows, *, kind: str = "grid",
              fragment: int | None = None, top: bool = True, bottom: bool = True,
              left: bool = True, right: bool = True, origin: tuple[int, int] = (0, 0),
              pivot_bit: int | None = None) -> list[list[int]]:
    """Add a 4-neighbour grid; ``origin`` is the absolute (row, col) of cell (0, 0)."""
    h, w = len(rows), len(rows[0])
    idx = [[0] * w for _ in range(h)]
    for i in range(h):
        for j in range(w):
            borders = (top and i == 0, bottom and i == h - 1, left and j == 0, right and j == w - 1)
            is_pivot = kind == "grid" and borders[0] and borders[2]
            lab = TableauLabel(m, r, kind, ((origin[0] + i) % 3, (origin[1] + j) % 3), rows[i][j],
                               is_pivot, borders, None, fragment, pivot_bit if is_pivot else None)
            where = ("grid", i, j) if kind == "grid" else ("frag", fragment, i, j)
            idx[i][j] = b.add(lab, where)
            if i:
                b.link(idx[i - 1][j], idx[i][j])
            if j:
                b.link(idx[i][j - 1], idx[i][j])
    return idx


def _add_fragments(b: _Builder, m: TuringMachine, r: int, pivot: int,
                   fragments, limit: int | None = None) -> None:
    prev = pivot
    count = len(fragments) if limit is None else min(limit, len(fragments))
    for k in range(count):
        spoke = b.add(TableauLabel(m, r, "spoke", fragment=k), ("spoke", k))
        b.link(prev, spoke)
        idx = _add_grid(b, m, r, fragments[k].rows, kind="fragment_grid", fragment=k)
        b.link(spoke, idx[0][0])
        prev = spoke


def _add_tail(b: _Builder, m: TuringMachine | None, r: int, a: int, bnd: int,
              attach: int | None) -> None:
    prev = attach
    for i in range(a, bnd + 1):
        lab = i if m is None else TableauLabel(m, r, "tail", tail_index=i)
        v = b.add(lab, ("tail", i))
        if prev is not None:
            b.link(prev, v)
        prev = v


@dataclass(frozen=True, eq=False)
class Instance:
    """A built construction together with where each part lives."""

    family: str
    graph: LabelledGraph
    machine: TuringMachine | None
    params: ConstructionParams
    layout: dict

    @property
    def pivot(self) -> int:
        return self.layout.get(("grid", 0, 0), 0)

    def node(self, *where) -> int:
        return self.layout[tuple(where)]


@lru_cache(maxsize=64)
def _tableau(family: str, m: TuringMachine, params: ConstructionParams) -> Instance:
    table = execution_table(m, params.budget)  # raises BudgetExceeded on timeout
    fragments = build_fragments(m, params)
    b = _Builder()
    ell = params.ell if family == "J" else None
    if family == "J" and ell is None:
        raise LocdecError("J needs a pivot bit l in {0, 1}")
    _add_grid(b, m, params.r, table.rows, pivot_bit=ell)
    _add_fragments(b, m, params.r, 0, fragments)
    if family == "G":
        _add_tail(b, m, params.r, 1, params.N, 0)
    return Instance(family, b.graph(), m, params, b.layout)


def build_instance(family: str, m: TuringMachine | None = None,
                   params: ConstructionParams | None = None, n: int | None = None) -> Instance:
    params = params or ConstructionParams()
    if family == "P":
        if n is None:
            raise ValueError("P needs n")
        return _path_instance(n)
    if family not in ("H", "G", "J"):
        raise ValueError(f"unknown family {family!r}")
    if family != "G":
        params = replace(params, N=1)
    if family != "J":
        params = replace(params, ell=None)
    return _tableau(family, m, params)


def build_H(m: TuringMachine, params: ConstructionParams | None = None) -> LabelledGraph:
    return build_instance("H", m, params).graph


def build_G(m: TuringMachine, params: ConstructionParams | None = None) -> LabelledGraph:
    return build_instance("G", m, params).graph


def build_J(m: TuringMachine, params: ConstructionParams | None = None) -> LabelledGraph:
    return build_instance("J", m, params).graph


def build_tail(a: int, b: int, machine: TuringMachine | None = None, r: int = 1) -> LabelledGraph:
    """The path S(a, b); node s_i carries value i (inside a tableau label if
    ``machine`` is given)."""
    if a < 1 or a > b:
        raise ValueError(f"need 1 <= a <= b, got a={a}, b={b}")
    builder = _Builder()
    _add_tail(builder, machine, r, a, b, None)
    return builder.graph()


@lru_cache(maxsize=256)
def _path_instance(n: int) -> Instance:
    if n < 1:
        raise ValueError("P(n) needs n >= 1")
    labels = tuple((n, d) for d in range(n))
    edges = frozenset((d, d + 1) for d in range(n - 1))
    return Instance("P", LabelledGraph(labels, edges), None, ConstructionParams(),
                    {("path", d): d for d in range(n)})


def build_P(n: int) -> LabelledGraph:
    """Path on n nodes; node at distance d from the end v_0 is labelled (n, d)."""
    return _path_instance(n).graph


# -- local checker ----------------------------------------------------------------

_DIRS = ("up", "down", "left", "right")


def _valid_label(lab, m: TuringMachine, r: int) -> bool:
    if not isinstance(lab, TableauLabel):
        return False
    if not (lab.machine is m or lab.machine == m) or lab.r != r:
        return False
    if not (isinstance(lab.borders, tuple) and len(lab.borders) == 4
            and all(isinstance(x, bool) for x in lab.borders)):
        return False
    if lab.role in ("grid", "fragment_grid"):
        if not (isinstance(lab.coords, tuple) and len(lab.coords) == 2
                and all(isinstance(x, int) and not isinstance(x, bool) and 0 <= x < 3 for x in lab.coords)):
            return False
        c = lab.cell
        if not isinstance(c, Cell) or c.symbol not in SYMBOLS:
            return False
        if c.state is not None and c.state not in m.states:
            return False
        if lab.tail_index is not None:
            return False
        if lab.role == "grid":
            return lab.fragment is None
        return isinstance(lab.fragment, int) and not lab.pivot and lab.pivot_bit is None
    if lab.coords is not None or lab.cell is not None or lab.pivot or lab.pivot_bit is not None:
        return False
    if lab.borders != NO_BORDERS:
        return False
    if lab.role == "tail":
        return isinstance(lab.tail_index, int) and lab.tail_index >= 1 and lab.fragment is None
    return isinstance(lab.fragment, int) and lab.tail_index is None


def _same_sheet(a: TableauLabel, b: TableauLabel) -> bool:
    return a.role == b.role and a.fragment == b.fragment


def _grid_neighbours(view: View, u: int) -> dict[str, int] | None:
    """Direction -> neighbour in the same sheet, or None if ambiguous/foreign."""
    labels = view.labels
    me = labels[u]
    a, b = me.coords
    dirs = {((a - 1) % 3, b): "up", ((a + 1) % 3, b): "down",
            (a, (b - 1) % 3): "left", (a, (b + 1) % 3): "right"}
    out: dict[str, int] = {}
    for w in view.adj[u]:
        lab = labels[w]
        if not isinstance(lab, TableauLabel) or lab.role not in ("grid", "fragment_grid"):
            continue
        if not _same_sheet(me, lab) or lab.coords is None:
            return None
        d = dirs.get(lab.coords)
        if d is None or d in out:
            return None
        out[d] = w
    return out


def _halting(m: TuringMachine, c: Cell) -> bool:
    return c.head and m.is_halting(c.state)


def _allowed_below(m: TuringMachine, me: TableauLabel, left: Cell | None, right: Cell | None,
                   fragment: bool) -> set[Cell] | None:
    """Cells that may sit below ``me``; None means the window is inconsistent."""
    up = me.cell
    for c in (left, up, right):
        if c is not None and _halting(m, c):
            return None
    if not fragment:
        if up.head and me.right and m.table[(up.state, up.symbol)][2] == "R":
            return None  # the head would leave the table
        return {next_cell(m, left, up, right, at_left_border=me.left)}
    at_edge = left is None
    allowed = {next_cell(m, left, up, right, at_left_border=False)}
    if at_edge:
        allowed.add(next_cell(m, left, up, right, at_left_border=True))
    syn = m.syntax
    for base in list(allowed):
        if base.head:
            continue
        if left is None:
            allowed.update(Cell(base.symbol, q) for q in syn.right_targets)
        if right is None:
            allowed.update(Cell(base.symbol, q) for q in syn.left_targets)
    return allowed


def _check_sheet_node(view: View, family: str) -> bool:
    labels = view.labels
    me: TableauLabel = labels[0]
    m = me.machine
    nb = _grid_neighbours(view, 0)
    if nb is None:
        return False
    for d, flag in zip(("up", "down", "left", "right"), me.borders):
        if (d in nb) == flag:
            return False
    for d in ("left", "right"):
        if d in nb:
            other = labels[nb[d]]
            if other.top != me.top or other.bottom != me.bottom:
                return False
    for d in ("up", "down"):
        if d in nb:
            other = labels[nb[d]]
            if other.left != me.left or other.right != me.right:
                return False
    # grid squares close up: the up-neighbour's right neighbour is the right-neighbour's up one
    for d1, d2 in (("up", "right"), ("right", "down"), ("down", "left"), ("left", "up")):
        if d1 in nb and d2 in nb:
            x = _grid_neighbours(view, nb[d1])
            y = _grid_neighbours(view, nb[d2])
            if x is None or y is None or d2 not in x or d1 not in y or x[d2] != y[d1]:
                return False

    is_fragment = me.role == "fragment_grid"
    corner = me.top and me.left
    if me.pivot != (corner and not is_fragment):
        return False
    count = fragment_count(m, me.r)
    if is_fragment and not 0 <= me.fragment < count:
        return False

    # neighbours outside the sheet
    sheet_nodes = set(nb.values())
    extras = [labels[w] for w in view.adj[0] if w not in sheet_nodes]
    if me.pivot:
        spokes = [x for x in extras if x.role == "spoke"]
        tails = [x for x in extras if x.role == "tail"]
        if len(spokes) + len(tails) != len(extras):
            return False
        if count and (len(spokes) != 1 or spokes[0].fragment != 0):
            return False
        if not count and spokes:
            return False
        if family == "G":
            if len(tails) != 1 or tails[0].tail_index != 1:
                return False
        elif tails:
            return False
        if family == "J":
            if me.pivot_bit not in (0, 1):
                return False
        elif me.pivot_bit is not None:
            return False
    else:
        if me.pivot_bit is not None:
            return False
        if is_fragment and corner:
            if len(extras) != 1 or extras[0].role != "spoke" or extras[0].fragment != me.fragment:
                return False
        elif extras:
            return False

    cell = me.cell
    if not is_fragment and me.top:
        if cell.symbol != BLANK:
            return False
        if me.pivot != (cell.head and cell.state == m.start):
            return False
        if cell.head and not me.pivot:
            return False
    if _halting(m, cell) and not me.bottom:
        return False
    if not is_fragment and me.bottom and cell.head and not _halting(m, cell):
        return False
    if not me.bottom:
        left = labels[nb["left"]].cell if "left" in nb else None
        right = labels[nb["right"]].cell if "right" in nb else None
        allowed = _allowed_below(m, me, left, right, is_fragment)
        if allowed is None or labels[nb["down"]].cell not in allowed:
            return False
    return True


def _check_spoke(view: View) -> bool:
    labels = view.labels
    me: TableauLabel = labels[0]
    k = me.fragment
    count = fragment_count(me.machine, me.r)
    if not 0 <= k < count:
        return False
    pred = succ = corner = 0
    for w in view.adj[0]:
        lab = labels[w]
        if lab.role == "spoke":
            if lab.fragment == k - 1:
                pred += 1
            elif lab.fragment == k + 1:
                succ += 1
            else:
                return False
        elif lab.role == "grid":
            if not (lab.pivot and k == 0):
                return False
            pred += 1
        elif lab.role == "fragment_grid":
            if lab.fragment != k or not (lab.top and lab.left):
                return False
            corner += 1
        else:
            return False
    return pred == 1 and corner == 1 and succ == (1 if k < count - 1 else 0)


def _check_tail(view: View, family: str) -> bool:
    if family != "G":
        return False
    labels = view.labels
    i = labels[0].tail_index
    pred = succ = 0
    for w in view.adj[0]:
        lab = labels[w]
        if lab.role == "tail" and lab.tail_index == i - 1:
            pred += 1
        elif lab.role == "tail" and lab.tail_index == i + 1:
            succ += 1
        elif lab.role == "grid" and lab.pivot and i == 1:
            pred += 1
        else:
            return False
    return pred == 1 and succ <= 1


def _check_tableau(view: View, family: str) -> bool:
    labels = view.labels
    me = labels[0]
    if not isinstance(me, TableauLabel) or me.r < 1:
        return False
    m, r = me.machine, me.r
    dist = view.dist
    for u, lab in enumerate(labels):
        if dist[u] <= 1:
            if not _valid_label(lab, m, r):
                return False
        elif not isinstance(lab, TableauLabel) or not (lab.machine is m or lab.machine == m) or lab.r != r:
            return False
    if me.role in ("grid", "fragment_grid"):
        return _check_sheet_node(view, family)
    if me.role == "spoke":
        return _check_spoke(view)
    return _check_tail(view, family)


def _check_path(view: View) -> bool:
    me = view.labels[0]
    if not (isinstance(me, tuple) and len(me) == 2
            and all(isinstance(x, int) and not isinstance(x, bool) for x in me)):
        return False
    n, d = me
    if n < 1 or not 0 <= d < n:
        return False
    want = set()
    if d > 0:
        want.add((n, d - 1))
    if d < n - 1:
        want.add((n, d + 1))
    seen = [view.labels[w] for w in view.adj[0]]
    return len(seen) == len(want) and set(seen) == want


@lru_cache(maxsize=None)
def checker(family: str) -> LocalAlgorithm:
    """Identifier-oblivious radius-2 structural checker for a family."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if family == "P":
        return LocalAlgorithm("checker-P", 2, _check_path, oblivious=True)
    return LocalAlgorithm(f"checker-{family}", 2, lambda view: _check_tableau(view, family),
                          oblivious=True)


# -- centralised recognition -------------------------------------------------------

@dataclass(frozen=True)
class Recognized:
    family: str
    machine: TuringMachine | None
    params: ConstructionParams
    n: int | None = None


def recognize(graph: LabelledGraph, family: str, budget: int = config.DEFAULT_BUDGET) -> Recognized | None:
    """Centrally decide whether ``graph`` is exactly an instance of ``family``.

    The parameters are read off the labels, the instance is rebuilt from
    scratch and compared by a label-preserving isomorphism anchored at the
    pivot (or at the path end).  Returns None for anything else, including
    machines that do not halt within ``budget``.
    """
    if family == "P":
        ends = [v for v, lab in enumerate(graph.labels)
                if isinstance(lab, tuple) and len(lab) == 2 and lab[1] == 0]
        if len(ends) != 1 or graph.labels[ends[0]][0] != graph.n:
            return None
        if anchored_isomorphic(graph, ends[0], build_P(graph.n), 0):
            return Recognized("P", None, ConstructionParams(), graph.n)
        return None
    if family not in ("H", "G", "J"):
        raise ValueError(f"unknown family {family!r}")
    pivots = [v for v, lab in enumerate(graph.labels) if isinstance(lab, TableauLabel) and lab.pivot]
    if len(pivots) != 1:
        return None
    lab = graph.labels[pivots[0]]
    if not isinstance(lab.machine, TuringMachine) or not isinstance(lab.r, int) or lab.r < 1:
        return None
    tail = sum(1 for x in graph.labels if isinstance(x, TableauLabel) and x.role == "tail")
    if family == "G" and tail < 1:
        return None
    if family == "J" and lab.pivot_bit not in (0, 1):
        return None
    params = ConstructionParams(r=lab.r, N=max(tail, 1), ell=lab.pivot_bit if family == "J" else None,
                                budget=budget)
    try:
        ref = build_instance(family, lab.machine, params)
    except (BudgetExceeded, CapExceeded):
        return None
    if ref.graph.n != graph.n:
        return None
    try:
        same = anchored_isomorphic(graph, pivots[0], ref.graph, ref.pivot)
    except GraphError:
        return None
    return Recognized(family, lab.machine, params) if same else None


# -- corruption catalog ------------------------------------------------------------

@dataclass(frozen=True)
class Mutation:
    name: str
    family: str
    apply: Callable[[Instance], LabelledGraph]
    doc: str = ""


def _relabel(inst: Instance, v: int, **changes) -> LabelledGraph:
    return inst.graph.relabel({v: replace(inst.graph.labels[v], **changes)})


def _rewire(inst: Instance, drop: list, add: list) -> LabelledGraph:
    g = inst.graph
    edges = set(g.edges) - {tuple(sorted(e)) for e in drop}
    edges |= {tuple(sorted(e)) for e in add}
    return LabelledGraph(g.labels, frozenset(edges))


def _other_symbol(a: str) -> str:
    return "1" if a != "1" else "0"


def _bottom_right(inst: Instance) -> tuple[int, int]:
    last = max(key[1] for key in inst.layout if key[0] == "grid")
    return last, last


def _wrong_symbol(inst: Instance) -> LabelledGraph:
    i, j = _bottom_right(inst)
    v = inst.node("grid", i, j)
    c = inst.graph.labels[v].cell
    return _relabel(inst, v, cell=Cell(_other_symbol(c.symbol), c.state))


def _wrong_coords(inst: Instance) -> LabelledGraph:
    v = inst.node("grid", 1, 1)
    a, b = inst.graph.labels[v].coords
    return _relabel(inst, v, coords=((a + 1) % 3, (b + 1) % 3))


def _two_pivots(inst: Instance) -> LabelledGraph:
    return _relabel(inst, inst.node("grid", 0, 1), pivot=True)


def _zero_pivots(inst: Instance) -> LabelledGraph:
    return _relabel(inst, inst.pivot, pivot=False)


def _broken_window(inst: Instance) -> LabelledGraph:
    m = inst.machine
    j = next(j for j in range(inst.graph.n) if ("grid", 1, j) in inst.layout
             and inst.graph.labels[inst.node("grid", 1, j)].cell.head)
    v = inst.node("grid", 1, j)
    c = inst.graph.labels[v].cell
    other = next(q for q in m.states if q != c.state)
    return _relabel(inst, v, cell=Cell(c.symbol, other))


def _mixed_machine(inst: Instance) -> LabelledGraph:
    v = inst.node("grid", 1, 1)
    other = M_LOOP if inst.machine != M_LOOP else M_ZERO
    return _relabel(inst, v, machine=other)


def _mixed_r(inst: Instance) -> LabelledGraph:
    v = inst.node("grid", 1, 1)
    return _relabel(inst, v, r=inst.graph.labels[v].r + 1)


def _dangling_fragment(inst: Instance) -> LabelledGraph:
    k = max(key[1] for key in inst.layout if key[0] == "spoke")
    spoke = inst.node("spoke", k)
    pred = inst.node("spoke", k - 1) if k else inst.pivot
    return _rewire(inst, [(pred, spoke)], [(spoke, inst.node("grid", 1, 0))])


def _fragment_symbol(inst: Instance) -> LabelledGraph:
    g = inst.graph
    for key in sorted(k for k in inst.layout if k[0] == "frag"):
        _, f, i, j = key
        if i == 0:
            continue
        above = g.labels[inst.node("frag", f, i - 1, j)].cell
        here = g.labels[inst.node("frag", f, i, j)].cell
        left = inst.layout.get(("frag", f, i - 1, j - 1))
        right = inst.layout.get(("frag", f, i - 1, j + 1))
        if above.head or here.head or left is None or right is None:
            continue
        if g.labels[left].cell.head or g.labels[right].cell.head:
            continue
        return _relabel(inst, inst.node("frag", f, i, j), cell=Cell(_other_symbol(here.symbol)))
    raise LocdecError("no fragment cell suitable for a symbol flip")


def _detached_tail(inst: Instance) -> LabelledGraph:
    s1 = inst.node("tail", 1)
    return _rewire(inst, [(inst.pivot, s1)], [(s1, inst.node("grid", 1, 0))])


def _duplicated_tail(inst: Instance) -> LabelledGraph:
    g = inst.graph
    tail = sorted((k[1], v) for k, v in inst.layout.items() if k[0] == "tail")
    labels = list(g.labels)
    edges = set(g.edges)
    prev = inst.pivot
    for _, v in tail:
        labels.append(g.labels[v])
        new = len(labels) - 1
        edges.add((prev, new))
        prev = new
    return LabelledGraph(tuple(labels), frozenset(edges))


def _nonconsecutive_tail(inst: Instance) -> LabelledGraph:
    i = 2 if ("tail", 2) in inst.layout else 1
    v = inst.node("tail", i)
    return _relabel(inst, v, tail_index=i + 2)


def _bit_off_pivot(inst: Instance) -> LabelledGraph:
    return _relabel(inst, inst.node("grid", 0, 1), pivot_bit=0)


def _bit_missing(inst: Instance) -> LabelledGraph:
    return _relabel(inst, inst.pivot, pivot_bit=None)


def _path_distance(inst: Instance) -> LabelledGraph:
    g = inst.graph
    v = 1 if g.n > 1 else 0
    n, d = g.labels[v]
    return g.relabel({v: (n, d + 2)})


def _path_size(inst: Instance) -> LabelledGraph:
    g = inst.graph
    n, d = g.labels[0]
    return g.relabel({0: (n + 1, d)})


MUTATIONS: dict[str, Mutation] = {mu.name: mu for mu in [
    Mutation("wrong_symbol", "H", _wrong_symbol, "flip the tape symbol of the bottom-right table cell"),
    Mutation("wrong_coords", "H", _wrong_coords, "shift the mod-3 coordinates of table cell (1, 1)"),
    Mutation("two_pivots", "H", _two_pivots, "mark table cell (0, 1) as a second pivot"),
    Mutation("zero_pivots", "H", _zero_pivots, "clear the pivot flag"),
    Mutation("broken_window", "H", _broken_window, "change the head state in table row 1"),
    Mutation("mixed_machine", "H", _mixed_machine, "give one node a different machine"),
    Mutation("mixed_r", "H", _mixed_r, "give one node a different r"),
    Mutation("dangling_fragment", "H", _dangling_fragment, "hang the last spoke off a table cell"),
    Mutation("fragment_symbol", "H", _fragment_symbol, "flip a symbol inside a fragment"),
    Mutation("detached_tail", "G", _detached_tail, "attach s_1 to a table cell instead of the pivot"),
    Mutation("duplicated_tail", "G", _duplicated_tail, "attach a second copy of the tail to the pivot"),
    Mutation("nonconsecutive_tail", "G", _nonconsecutive_tail, "skip a tail index"),
    Mutation("pivot_bit_off_pivot", "J", _bit_off_pivot, "put a pivot bit on a non-pivot node"),
    Mutation("pivot_bit_missing", "J", _bit_missing, "remove the pivot bit"),
    Mutation("path_distance", "P", _path_distance, "perturb one distance label"),
    Mutation("path_size", "P", _path_size, "perturb one size label"),
]}


def mutations_for(family: str) -> list[Mutation]:
    """Mutations applicable to ``family`` (H mutations also apply to G and J)."""
    if family == "P":
        return [mu for mu in MUTATIONS.values() if mu.family == "P"]
    return [mu for mu in MUTATIONS.values() if mu.family in ("H", family)]


def mutate(inst: Instance, name: str) -> LabelledGraph:
    mu = MUTATIONS[name]
    if mu not in mutations_for(inst.family):
        raise ValueError(f"mutation {name!r} does not apply to family {inst.family}")
    return mu.apply(inst)


# -- partial tables (no halting required) -------------------------------------------

def simulate_prefix(m: TuringMachine, steps: int, width: int) -> tuple[list[tuple[Cell, ...]], bool]:
    """Rows 0..k of the table for at most ``steps`` steps, ``width`` columns.

    Returns the rows and whether the machine halted (the last row is then the
    halting row).
    """
    config: Configuration = initial_configuration(m)
    rows = [config_row(config, width)]
    for _ in range(steps):
        if m.is_halting(config.state):
            break
        config = step(m, config)
        rows.append(config_row(config, width))
    return rows, m.is_halting(config.state)
