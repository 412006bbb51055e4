"""Running a local decider at every node and folding the outputs."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import ConfigurationError, ImpurityError
from .graph import LabelledGraph, View, ball

# bound -> iterable of partial id maps {local node: id}; see LocalAlgorithm
IdCandidates = Callable[[View, int], Iterable[Mapping[int, int]]]


@dataclass(frozen=True, eq=False)
class LocalAlgorithm:
    """A constant-radius decider ``View -> bool`` (True means *yes*).

    ``id_candidates`` is an optional declared capability of identifier-using
    deciders.  Given the id-free view and a bound ``g``, it yields partial
    identifier maps such that every injective assignment of ``1..g`` to the
    view produces the same output as the completion of one of the yielded
    maps.  The simulation compiler uses it to avoid enumerating every
    assignment; without it the compiler enumerates them all.
    """

    name: str
    radius: int
    decide: Callable[[View], bool]
    oblivious: bool = False
    uses_oracle: bool = False
    id_candidates: IdCandidates | None = None

    def __repr__(self) -> str:
        flags = ("oblivious" if self.oblivious else "ids") + (", oracle" if self.uses_oracle else "")
        return f"LocalAlgorithm({self.name!r}, r={self.radius}, {flags})"


def evaluate(alg: LocalAlgorithm, view: View) -> bool:
    """One decision; memoised on the view core for oblivious deciders."""
    if alg.oblivious:
        # deciders blind to oracle labels share results across oracle variants
        core = view.core if alg.uses_oracle else view.core.without_oracle()
        memo = core.memo
        hit = memo.get(alg)
        if hit is None:
            hit = alg.decide(View(core, None))
            if not isinstance(hit, bool):
                raise TypeError(f"{alg.name} returned {hit!r}, expected a bool")
            memo[alg] = hit
        return hit
    out = alg.decide(view)
    if not isinstance(out, bool):
        raise TypeError(f"{alg.name} returned {out!r}, expected a bool")
    return out


@dataclass(frozen=True)
class Verdict:
    per_node: tuple[bool, ...]

    @property
    def accepted(self) -> bool:
        return all(self.per_node)

    @property
    def no_nodes(self) -> list[int]:
        return [v for v, ok in enumerate(self.per_node) if not ok]

    def to_json(self) -> dict:
        return {"accepted": self.accepted, "no_nodes": self.no_nodes}


def _check_config(alg: LocalAlgorithm, graph: LabelledGraph) -> None:
    if not alg.oblivious and graph.ids is None:
        raise ConfigurationError(f"{alg.name} uses identifiers but the graph has none")
    if alg.uses_oracle and graph.oracle is None:
        raise ConfigurationError(f"{alg.name} reads oracle labels but the graph has none")


def run(alg: LocalAlgorithm, graph: LabelledGraph, debug: bool = False) -> Verdict:
    """Evaluate ``alg`` on the radius-r ball of every node.

    With ``debug`` set every node is decided twice, bypassing memoisation,
    and an :class:`ImpurityError` is raised if the two outputs differ.
    """
    _check_config(alg, graph)
    out = []
    for v in range(graph.n):
        view = ball(graph, v, alg.radius, oblivious=alg.oblivious, with_oracle=alg.uses_oracle)
        res = evaluate(alg, view)
        if debug:
            again = alg.decide(view)
            if again != res:
                raise ImpurityError(f"{alg.name} is not deterministic at node {v}")
        out.append(res)
    return Verdict(tuple(out))


def decide_all(alg: LocalAlgorithm, graph: LabelledGraph) -> tuple[bool, ...]:
    """Per-node outputs with identifiers visible even if ``alg`` is oblivious."""
    out = []
    for v in range(graph.n):
        view = ball(graph, v, alg.radius, oblivious=False, with_oracle=alg.uses_oracle)
        out.append(alg.decide(view))
    return tuple(out)


def random_id_assignments(n: int, trials: int, seed: int) -> Iterator[tuple[int, ...]]:
    """Distinct-identifier assignments: 1..n first, then alternating shuffled
    disjoint blocks and random samples from a growing range."""
    rng = random.Random(seed)
    for t in range(trials):
        if t == 0:
            yield tuple(range(1, n + 1))
        elif t % 2:
            block = list(range(t * n + 1, (t + 1) * n + 1))
            rng.shuffle(block)
            yield tuple(block)
        else:
            yield tuple(rng.sample(range(1, 4 * n * t + 1), n))


def check_oblivious(alg: LocalAlgorithm, graph: LabelledGraph, trials: int = 20, seed: int = 0) -> bool:
    """True iff per-node outputs agree across ``trials`` identifier assignments."""
    if alg.uses_oracle and graph.oracle is None:
        raise ConfigurationError(f"{alg.name} reads oracle labels but the graph has none")
    reference = None
    for ids in random_id_assignments(graph.n, trials, seed):
        outputs = decide_all(alg, graph.with_ids(ids))
        if reference is None:
            reference = outputs
        elif outputs != reference:
            return False
    return True


def all_id_assignments(n: int, pool: Sequence[int]) -> Iterator[tuple[int, ...]]:
    return itertools.permutations(pool, n)


def check_oblivious_exhaustive(alg: LocalAlgorithm, graph: LabelledGraph,
                               pool: Sequence[int] | None = None) -> bool:
    """Every injective assignment from ``pool`` (default ``1..n+2``)."""
    pool = range(1, graph.n + 3) if pool is None else pool
    reference = None
    for ids in all_id_assignments(graph.n, pool):
        outputs = decide_all(alg, graph.with_ids(ids))
        if reference is None:
            reference = outputs
        elif outputs != reference:
            return False
    return True


def constant(answer: bool = True, radius: int = 0, name: str | None = None) -> LocalAlgorithm:
    return LocalAlgorithm(name or ("constant-yes" if answer else "constant-no"), radius,
                          lambda view: answer, oblivious=True)


def widen(alg: LocalAlgorithm, radius: int) -> LocalAlgorithm:
    """Same decider run on a larger ball; the extra ring is ignored."""
    if radius < alg.radius:
        raise ValueError("can only widen")

    def decide(view: View) -> bool:
        return alg.decide(view.subview(alg.radius))

    return LocalAlgorithm(f"{alg.name}@r{radius}", radius, decide, alg.oblivious, alg.uses_oracle)
