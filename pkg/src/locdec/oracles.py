"""Scalar oracles, adversarial label assignment and the large/small test."""

from __future__ import annotations

import random
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Iterable, Union

from .errors import CapabilityError, InfeasibleStrategyError, LocdecError
from .graph import LabelledGraph
from .labels import Bits, numeric, order_key
from .turing import EncodingEnumeration, REFERENCE_ENUMERATION, halting_bits


@dataclass(frozen=True, eq=False)
class ScalarOracle:
    """n -> sorted list of n labels.

    ``index_bound`` is present exactly for oracles declared large: for a
    label value l it returns k such that every index i > k has
    f_i^(n) > l for every n.  When ``knows_exact_n`` is false the oracle only
    sees ``size_bound(n) >= n`` and the adversary picks n of its labels.
    """

    name: str
    labels_for: Callable[[int], tuple]
    index_bound: Callable[[int], int] | None = None
    knows_exact_n: bool = True
    size_bound: Callable[[int], int] | None = None

    @property
    def declared_large(self) -> bool:
        return self.index_bound is not None

    def __repr__(self) -> str:
        kind = "large" if self.declared_large else "small"
        return f"ScalarOracle({self.name!r}, {kind})"


def labels(oracle: ScalarOracle, n: int) -> tuple:
    """The list f(n), validated: length n, non-decreasing."""
    if n < 1:
        raise ValueError("oracles are defined for n >= 1")
    out = tuple(oracle.labels_for(n))
    if len(out) != n:
        raise LocdecError(f"oracle {oracle.name} returned {len(out)} labels for n={n}")
    keys = [order_key(x) for x in out]
    if any(a > b for a, b in zip(keys, keys[1:])):
        raise LocdecError(f"oracle {oracle.name} returned an unsorted list for n={n}")
    return out


def kth(oracle: ScalarOracle, n: int, k: int) -> Any:
    """f_k^(n), the k-th smallest label (1-based)."""
    return labels(oracle, n)[k - 1]


def invert(oracle: ScalarOracle, label: Any) -> int:
    """g(l): an upper bound on the rank of any node holding ``label``."""
    if oracle.index_bound is None:
        raise CapabilityError(f"oracle {oracle.name!r} is not declared large; it cannot be inverted")
    return oracle.index_bound(numeric(label))


@dataclass(frozen=True)
class LargenessWitness:
    c: int
    k: int
    window: int


@lru_cache(maxsize=4096)
def _numeric_labels(oracle: ScalarOracle, n: int) -> tuple[int, ...]:
    return tuple(numeric(x) for x in labels(oracle, n))


def largeness_witness(oracle: ScalarOracle, c: int, n_max: int) -> LargenessWitness | None:
    """Smallest k <= n_max with f_k^(n) >= c for every n in [k, n_max].

    The tail condition is also checked at n = k + 1, so k = n_max is never
    accepted on the strength of a single network size.
    """
    if c < 1 or n_max < 1:
        raise ValueError("c and n_max must be positive")
    for k in range(1, n_max + 1):
        if all(_numeric_labels(oracle, n)[k - 1] >= c for n in range(k, max(n_max, k + 1) + 1)):
            return LargenessWitness(c, k, n_max)
    return None


# -- adversary strategies ----------------------------------------------------------

@dataclass(frozen=True)
class SortedById:
    """Order-preserving: the node with the i-th smallest id gets f_i."""


@dataclass(frozen=True)
class RandomPlacement:
    seed: int = 0


@dataclass(frozen=True)
class ConstantOnSet:
    """Every node of ``nodes`` receives ``value``; the rest go elsewhere."""

    nodes: frozenset
    value: Any


AdversaryStrategy = Union[SortedById, RandomPlacement, ConstantOnSet]

SHIPPED_STRATEGIES: tuple[AdversaryStrategy, ...] = (
    SortedById(), RandomPlacement(0), RandomPlacement(1), RandomPlacement(2),
)


def _node_order(graph: LabelledGraph) -> list[int]:
    if graph.ids is None:
        return list(range(graph.n))
    return sorted(range(graph.n), key=lambda v: graph.ids[v])


def assign(oracle: ScalarOracle, graph: LabelledGraph, strategy: AdversaryStrategy) -> LabelledGraph:
    """Attach oracle labels to ``graph``; the labels form exactly the chosen multiset."""
    n = graph.n
    if oracle.knows_exact_n:
        pool = list(labels(oracle, n))
    else:
        big_n = oracle.size_bound(n) if oracle.size_bound else n
        if big_n < n:
            raise LocdecError(f"size bound {big_n} is below n={n}")
        pool = list(labels(oracle, big_n))
    order = _node_order(graph)
    out: list[Any] = [None] * n

    if isinstance(strategy, ConstantOnSet):
        target = sorted(strategy.nodes)
        if any(not 0 <= v < n for v in target):
            raise InfeasibleStrategyError("target set contains nodes outside the graph")
        have = sum(1 for x in pool if x == strategy.value)
        if have < len(target):
            raise InfeasibleStrategyError(
                f"strategy needs {len(target)} copies of {strategy.value!r}; f provides {have}")
        for v in target:
            pool.remove(strategy.value)
            out[v] = strategy.value
        rest = [v for v in order if v not in strategy.nodes]
        for v, x in zip(rest, pool):
            out[v] = x
    elif isinstance(strategy, RandomPlacement):
        rng = random.Random(strategy.seed)
        chosen = pool if len(pool) == n else sorted(rng.sample(pool, n), key=order_key)
        chosen = list(chosen)
        rng.shuffle(chosen)
        out = chosen
    elif isinstance(strategy, SortedById):
        for v, x in zip(order, pool):
            out[v] = x
    else:
        raise TypeError(f"unknown adversary strategy {strategy!r}")
    return graph.with_oracle(out)


def same_multiset(a: Iterable[Any], b: Iterable[Any]) -> bool:
    return Counter(a) == Counter(b)


# -- built-in oracles ------------------------------------------------------------

def identity_oracle() -> ScalarOracle:
    return ScalarOracle("identity", lambda n: tuple(range(1, n + 1)), index_bound=lambda l: l)


def const_n_oracle() -> ScalarOracle:
    return ScalarOracle("const-n", lambda n: (n,) * n, index_bound=lambda l: l)


def leader_oracle() -> ScalarOracle:
    return ScalarOracle("leader", lambda n: (0,) * (n - 1) + (1,))


def zeros_then_pow2_oracle() -> ScalarOracle:
    return ScalarOracle("zeros-then-pow2", lambda n: (0,) * (n - 1) + (2 ** n,))


def upper_bound_oracle(factor: int = 2) -> ScalarOracle:
    """Every node receives the same N = factor * n >= n."""
    if factor < 1:
        raise ValueError("factor must be at least 1")
    return ScalarOracle("upper-bound", lambda big_n: (big_n,) * big_n, index_bound=lambda l: l,
                        knows_exact_n=False, size_bound=lambda n: factor * n)


def halting_bit_oracle(budget: int, enumeration=None) -> ScalarOracle:
    """(0, ..., 0, b_n): bit i of b_n says whether machine i halts within ``budget`` steps."""
    enumeration = EncodingEnumeration() if enumeration is None else enumeration

    @lru_cache(maxsize=1024)
    def labels_for(n: int) -> tuple:
        return (0,) * (n - 1) + (halting_bits(enumeration, n, budget),)

    oracle = ScalarOracle(f"halting-bits({budget})", labels_for)
    object.__setattr__(oracle, "budget", budget)
    object.__setattr__(oracle, "enumeration", enumeration)
    return oracle


def oracle_from_name(name: str, enumeration=None) -> ScalarOracle:
    """Registry: identity, const-n, leader, zeros-then-pow2, upper-bound, halting-bits(B)."""
    simple = {
        "identity": identity_oracle,
        "const-n": const_n_oracle,
        "leader": leader_oracle,
        "zeros-then-pow2": zeros_then_pow2_oracle,
        "upper-bound": upper_bound_oracle,
    }
    if name in simple:
        return simple[name]()
    m = re.fullmatch(r"halting-bits(?:\((\d+)\)|:(\d+))?", name)
    if m:
        budget = int(m.group(1) or m.group(2) or 10_000)
        return halting_bit_oracle(budget, REFERENCE_ENUMERATION if enumeration == "reference" else enumeration)
    raise LocdecError(f"unknown oracle {name!r}")


ORACLE_NAMES = ("identity", "const-n", "leader", "zeros-then-pow2", "upper-bound", "halting-bits(B)")


def holds_bits(label: Any) -> bool:
    return isinstance(label, Bits)
