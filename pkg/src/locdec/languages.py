"""Decision languages: a centralised membership predicate plus local deciders."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from . import config
from .constructions import checker, recognize
from .graph import LabelledGraph, View
from .labels import Bits, numeric
from .oracles import ScalarOracle, const_n_oracle, halting_bit_oracle, upper_bound_oracle
from .runtime import LocalAlgorithm, evaluate
from .turing import Halted, REFERENCE_ENUMERATION, run_bounded

CLASS_TAGS = ("LDO", "LD", "LDO^f", "LD^f")


@dataclass(frozen=True, eq=False)
class Language:
    name: str
    membership: Callable[[LabelledGraph], bool]
    deciders: dict[str, LocalAlgorithm] = field(default_factory=dict)
    oracle: ScalarOracle | None = None

    def decider(self, tag: str) -> LocalAlgorithm:
        for key, alg in self.deciders.items():
            if key == tag or key.split("(")[0] == tag:
                return alg
        raise KeyError(f"{self.name} has no {tag} decider")

    def __repr__(self) -> str:
        return f"Language({self.name!r}, deciders={sorted(self.deciders)})"


def tag_matches(tag: str, alg: LocalAlgorithm) -> bool:
    """LDO-tagged iff oblivious, f-tagged iff the decider reads oracle labels."""
    base = tag.split("(")[0]
    if base not in CLASS_TAGS:
        return False
    return alg.oblivious == base.startswith("LDO") and alg.uses_oracle == base.endswith("^f")


# -- 2-colouring -------------------------------------------------------------------

def _is_colour(x) -> bool:
    return x in (0, 1) and not isinstance(x, bool)


def _two_col_member(g: LabelledGraph) -> bool:
    if not all(_is_colour(x) for x in g.labels):
        return False
    return all(g.labels[u] != g.labels[v] for u, v in g.edges)


def _two_col_decide(view: View) -> bool:
    me = view.labels[0]
    if not _is_colour(me):
        return False
    return all(view.labels[w] != me for w in view.adj[0])


def lang_2col() -> Language:
    alg = LocalAlgorithm("2col", 1, _two_col_decide, oblivious=True)
    return Language("2col", _two_col_member, {"LDO": alg})


# -- parity --------------------------------------------------------------------------

def lang_parity(oracle: ScalarOracle | None = None) -> Language:
    oracle = oracle or const_n_oracle()

    def decide(view: View) -> bool:
        return numeric(view.oracle[0]) % 2 == 0

    alg = LocalAlgorithm("parity", 0, decide, oblivious=True, uses_oracle=True)
    return Language("parity", lambda g: g.n % 2 == 0, {f"LDO^f({oracle.name})": alg}, oracle)


# -- G(M, r, N) with M outputting 0 ------------------------------------------------------

def _halts_with(m, budget: int, output: int) -> bool:
    res = run_bounded(m, budget)
    return isinstance(res, Halted) and res.output == output


def _halted_other_than(m, steps: int, output: int) -> bool:
    if steps < 1:
        return False
    res = run_bounded(m, steps)
    return isinstance(res, Halted) and res.output != output


def lang_L_lemma1(budget: int = config.DEFAULT_BUDGET) -> Language:
    structure = checker("G")

    def member(g: LabelledGraph) -> bool:
        rec = recognize(g, "G", budget)
        return rec is not None and _halts_with(rec.machine, budget, 0)

    def decide(view: View) -> bool:
        if not evaluate(structure, view):
            return False
        # simulate M for id(v) steps; a halt with output other than 0 is a no
        m = view.labels[0].machine
        return not _halted_other_than(m, min(view.ids[0], budget), 0)

    def candidates(view: View, bound: int):
        # the output only depends on id(root), monotonically: ids 1 and bound cover every case
        yield {0: bound}
        if bound > 1:
            yield {0: 1}

    alg = LocalAlgorithm("L-lemma1", 2, decide, oblivious=False, id_candidates=candidates)
    return Language("L-lemma1", member, {"LD": alg})


# -- J(M, r, l) with M outputting l ----------------------------------------------------------

def lang_J_thm2(oracle: ScalarOracle | None = None, budget: int = config.DEFAULT_BUDGET) -> Language:
    oracle = oracle or upper_bound_oracle()
    structure = checker("J")

    def member(g: LabelledGraph) -> bool:
        rec = recognize(g, "J", budget)
        return rec is not None and _halts_with(rec.machine, budget, rec.params.ell)

    def decide(view: View) -> bool:
        if not evaluate(structure, view):
            return False
        me = view.labels[0]
        if not me.pivot:
            return True
        # the oracle label N >= n >= s bounds the running time
        steps = min(numeric(view.oracle[0]), budget)
        return steps >= 1 and _halts_with(me.machine, steps, me.pivot_bit)

    alg = LocalAlgorithm("J-thm2", 2, decide, oblivious=True, uses_oracle=True)
    return Language("J-thm2", member, {f"LDO^f({oracle.name})": alg}, oracle)


# -- halting-bit languages ---------------------------------------------------------------

def lang_L2_thm3(oracle: ScalarOracle | None = None, budget: int = config.DEFAULT_BUDGET) -> Language:
    oracle = oracle or halting_bit_oracle(budget, REFERENCE_ENUMERATION)
    structure = checker("H")

    def member(g: LabelledGraph) -> bool:
        rec = recognize(g, "H", budget)
        return rec is not None and _halts_with(rec.machine, budget, 0)

    def decide(view: View) -> bool:
        if not evaluate(structure, view):
            return False
        label = view.oracle[0]
        if not isinstance(label, Bits):
            return True
        # the long label has length n >= s, enough to run M to completion
        return _halts_with(view.labels[0].machine, max(len(label), 1), 0)

    alg = LocalAlgorithm("L2-thm3", 2, decide, oblivious=True, uses_oracle=True)
    return Language("L2-thm3", member, {f"LDO^f({oracle.name})": alg}, oracle)


def lang_L1_thm3(oracle: ScalarOracle | None = None, budget: int = config.DEFAULT_BUDGET) -> Language:
    oracle = oracle or halting_bit_oracle(budget, REFERENCE_ENUMERATION)
    enumeration = getattr(oracle, "enumeration", REFERENCE_ENUMERATION)
    bit_budget = getattr(oracle, "budget", budget)
    structure = checker("P")

    def member(g: LabelledGraph) -> bool:
        rec = recognize(g, "P")
        return rec is not None and _halts_any(enumeration(rec.n), bit_budget)

    def decide(view: View) -> bool:
        if not evaluate(structure, view):
            return False
        label = view.oracle[0]
        if not isinstance(label, Bits):
            return True
        n = view.labels[0][0]
        # bit index and path size must agree
        return len(label) == n and label[n - 1] == "1"

    alg = LocalAlgorithm("L1-thm3", 2, decide, oblivious=True, uses_oracle=True)
    return Language("L1-thm3", member, {f"LDO^f({oracle.name})": alg}, oracle)


def _halts_any(m, budget: int) -> bool:
    return isinstance(run_bounded(m, budget), Halted)


LANGUAGES: dict[str, Callable[[], Language]] = {
    "2col": lang_2col,
    "parity": lang_parity,
    "L-lemma1": lang_L_lemma1,
    "J-thm2": lang_J_thm2,
    "L2-thm3": lang_L2_thm3,
    "L1-thm3": lang_L1_thm3,
}


def language(name: str) -> Language:
    try:
        return LANGUAGES[name]()
    except KeyError:
        raise KeyError(f"unknown language {name!r}; choose from {sorted(LANGUAGES)}") from None

