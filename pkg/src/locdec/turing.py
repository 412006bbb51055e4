"""Single-tape Turing machines on the empty tape and their execution tables.

Conventions: tape alphabet ``{"0", "1", "_"}`` (``"_"`` is blank); the tape
is one-way infinite and a left move at cell 0 stays put; a machine outputs
0 or 1 by entering its ``halt0`` or ``halt1`` state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Union

from .errors import BudgetExceeded, LabelDecodeError, LocdecError
from .labels import Bits, decode, encode, nat_to_bits, register_record

BLANK = "_"
SYMBOLS = ("0", "1", BLANK)
MOVES = {"L": -1, "R": 1, "S": 0}


class MachineError(LocdecError, ValueError):
    pass


@dataclass(frozen=True)
class TuringMachine:
    states: tuple[str, ...]
    start: str
    halt0: str
    halt1: str
    # sorted (state, read, next_state, write, move) rows
    delta: tuple[tuple[str, str, str, str, str], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "delta", tuple(sorted(tuple(row) for row in self.delta)))
        states = set(self.states)
        if len(states) != len(self.states):
            raise MachineError("duplicate state names")
        for s in (self.start, self.halt0, self.halt1):
            if s not in states:
                raise MachineError(f"state {s!r} not declared")
        if self.halt0 == self.halt1:
            raise MachineError("halt0 and halt1 must differ")
        if self.start in (self.halt0, self.halt1):
            raise MachineError("start state cannot be a halting state")
        seen = set()
        for row in self.delta:
            if len(row) != 5:
                raise MachineError(f"transition {row!r} must have 5 fields")
            q, a, q2, b, m = row
            if q not in states or q2 not in states:
                raise MachineError(f"transition {row!r} uses an undeclared state")
            if a not in SYMBOLS or b not in SYMBOLS or m not in MOVES:
                raise MachineError(f"transition {row!r} has a bad symbol or move")
            if q in (self.halt0, self.halt1):
                raise MachineError(f"halting state {q!r} has an outgoing transition")
            if (q, a) in seen:
                raise MachineError(f"transition for {(q, a)!r} given twice")
            seen.add((q, a))
        for q in self.states:
            if q in (self.halt0, self.halt1):
                continue
            for a in SYMBOLS:
                if (q, a) not in seen:
                    raise MachineError(f"no transition for state {q!r} reading {a!r}")

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.states, self.start, self.halt0, self.halt1, self.delta))

    @cached_property
    def table(self) -> dict[tuple[str, str], tuple[str, str, str]]:
        return {(q, a): (q2, b, m) for q, a, q2, b, m in self.delta}

    def is_halting(self, state: str) -> bool:
        return state == self.halt0 or state == self.halt1

    def output_of(self, state: str) -> int:
        return 0 if state == self.halt0 else 1

    @cached_property
    def syntax(self) -> MachineSyntax:
        return MachineSyntax.of(self)

    def label(self) -> str:
        return self.name or f"TM[{len(self.states)} states]"

    def __repr__(self) -> str:
        return f"TuringMachine({self.label()})"

    # -- encodings ---------------------------------------------------------

    def encoding(self) -> str:
        """Canonical bit-string form (the label codec applied to the machine)."""
        return encode(self)

    @classmethod
    def from_encoding(cls, bits: str) -> TuringMachine:
        value = decode(bits)
        if not isinstance(value, TuringMachine):
            raise LabelDecodeError("bit string does not encode a Turing machine")
        return value

    def to_json(self) -> dict:
        return {
            "states": list(self.states),
            "start": self.start,
            "halt0": self.halt0,
            "halt1": self.halt1,
            "delta": [list(row) for row in self.delta],
            **({"name": self.name} if self.name else {}),
        }

    @classmethod
    def from_json(cls, payload: Mapping) -> TuringMachine:
        try:
            return cls(
                states=tuple(payload["states"]),
                start=payload["start"],
                halt0=payload["halt0"],
                halt1=payload["halt1"],
                delta=tuple(tuple(row) for row in payload["delta"]),
                name=payload.get("name", ""),
            )
        except (KeyError, TypeError) as exc:
            raise MachineError(f"malformed machine JSON: {exc}") from None


register_record(
    1, TuringMachine,
    lambda m: (m.states, m.start, m.halt0, m.halt1, m.delta),
    lambda f: TuringMachine(f[0], f[1], f[2], f[3], f[4]),
)


@dataclass(frozen=True)
class MachineSyntax:
    """Syntactic over-approximation of what can appear in any execution table.

    A transition can fire only from a reachable state reading a reachable
    symbol; both sets are closed under firing transitions.
    """

    states: frozenset
    symbols: frozenset
    live: frozenset            # reachable non-halting states
    right_targets: frozenset   # states entered by an R move
    left_targets: frozenset    # states entered by an L move

    @classmethod
    def of(cls, m: TuringMachine) -> MachineSyntax:
        states, symbols = {m.start}, {BLANK}
        changed = True
        while changed:
            changed = False
            for q, a, q2, b, _ in m.delta:
                if q in states and a in symbols:
                    if q2 not in states:
                        states.add(q2)
                        changed = True
                    if b not in symbols:
                        symbols.add(b)
                        changed = True
        fired = [row for row in m.delta if row[0] in states and row[1] in symbols]
        return cls(
            states=frozenset(states),
            symbols=frozenset(symbols),
            live=frozenset(q for q in states if not m.is_halting(q)),
            right_targets=frozenset(q2 for _, _, q2, _, mv in fired if mv == "R"),
            left_targets=frozenset(q2 for _, _, q2, _, mv in fired if mv == "L"),
        )


@dataclass(frozen=True)
class Configuration:
    tape: tuple[str, ...] = ()  # cells 0..len-1; everything beyond is blank
    head: int = 0
    state: str = ""

    def read(self, pos: int | None = None) -> str:
        pos = self.head if pos is None else pos
        return self.tape[pos] if pos < len(self.tape) else BLANK

    def cells(self, width: int) -> tuple[str, ...]:
        return tuple(self.read(j) for j in range(width))


def initial_configuration(m: TuringMachine) -> Configuration:
    return Configuration((), 0, m.start)


def step(m: TuringMachine, config: Configuration) -> Configuration:
    if m.is_halting(config.state):
        raise MachineError("cannot step a halted configuration")
    q2, b, mv = m.table[(config.state, config.read())]
    tape = list(config.tape)
    if config.head >= len(tape):
        tape.extend(BLANK for _ in range(config.head + 1 - len(tape)))
    tape[config.head] = b
    while tape and tape[-1] == BLANK:
        tape.pop()
    head = max(0, config.head + MOVES[mv])
    return Configuration(tuple(tape), head, q2)


@dataclass(frozen=True)
class Halted:
    output: int
    steps: int


@dataclass(frozen=True)
class Timeout:
    budget: int


RunResult = Union[Halted, Timeout]


@lru_cache(maxsize=4096)
def run_bounded(m: TuringMachine, budget: int) -> RunResult:
    """Run ``m`` from the empty tape for at most ``budget`` steps."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    config = initial_configuration(m)
    for s in range(1, budget + 1):
        config = step(m, config)
        if m.is_halting(config.state):
            return Halted(m.output_of(config.state), s)
    return Timeout(budget)


def halts_with(m: TuringMachine, budget: int, output: int | None = None) -> bool:
    res = run_bounded(m, budget)
    return isinstance(res, Halted) and (output is None or res.output == output)


# -- execution tables ---------------------------------------------------------

@dataclass(frozen=True)
class Cell:
    """Tableau cell: tape symbol plus the machine state when the head is here."""

    symbol: str
    state: str | None = None

    @property
    def head(self) -> bool:
        return self.state is not None

    def __repr__(self) -> str:
        return f"{self.symbol}/{self.state}" if self.state else self.symbol


register_record(2, Cell, lambda c: (c.symbol, c.state), lambda f: Cell(f[0], f[1]))


def config_row(config: Configuration, width: int) -> tuple[Cell, ...]:
    return tuple(Cell(config.read(j), config.state if j == config.head else None)
                 for j in range(width))


@dataclass(frozen=True)
class ExecutionTable:
    machine: TuringMachine
    steps: int
    rows: tuple[tuple[Cell, ...], ...]

    @property
    def size(self) -> int:
        return self.steps + 1

    def cell(self, i: int, j: int) -> Cell:
        return self.rows[i][j]

    def output(self) -> int:
        last = self.rows[-1]
        state = next(c.state for c in last if c.head)
        return self.machine.output_of(state)


@lru_cache(maxsize=256)
def execution_table(m: TuringMachine, budget: int) -> ExecutionTable:
    """The (s+1) x (s+1) table of the run on the empty tape.

    Raises :class:`BudgetExceeded` when ``m`` does not halt within ``budget``.
    """
    res = run_bounded(m, budget)
    if isinstance(res, Timeout):
        raise BudgetExceeded(f"{m.label()} does not halt within {budget} steps", budget)
    s = res.steps
    config = initial_configuration(m)
    rows = [config_row(config, s + 1)]
    for _ in range(s):
        config = step(m, config)
        rows.append(config_row(config, s + 1))
    return ExecutionTable(m, s, tuple(rows))


def next_cell(m: TuringMachine, left: Cell | None, up: Cell, right: Cell | None,
              at_left_border: bool) -> Cell:
    """Cell (i+1, j) from cells (i, j-1), (i, j), (i, j+1) of a full table row.

    ``left``/``right`` are ``None`` outside the table.  The caller guarantees
    that no cell in the window holds a halting state.
    """
    symbol = up.symbol
    state = None
    if up.head:
        q2, b, mv = m.table[(up.state, up.symbol)]
        symbol = b
        if mv == "S" or (mv == "L" and at_left_border):
            state = q2
    if left is not None and left.head:
        q2, _, mv = m.table[(left.state, left.symbol)]
        if mv == "R":
            state = q2
    if right is not None and right.head:
        q2, _, mv = m.table[(right.state, right.symbol)]
        if mv == "L":
            state = q2
    return Cell(symbol, state)


# -- reference machines -------------------------------------------------------

def _machine(name: str, states: Iterable[str], start: str, rules: Mapping[tuple[str, str], tuple[str, str, str]],
             halt0: str = "h0", halt1: str = "h1") -> TuringMachine:
    states = tuple(states) + (halt0, halt1)
    return TuringMachine(states, start, halt0, halt1,
                         tuple((q, a, *v) for (q, a), v in rules.items()), name=name)


def _keep(sym: str, default: str) -> str:
    return default if sym == BLANK else sym


M_ZERO = _machine("M_ZERO", ["s"], "s", {("s", a): ("h0", "0", "S") for a in SYMBOLS})

# writes 1, steps right, writes 1, steps back left, halts with 1 reading the 1
M_ONE = _machine("M_ONE", ["s", "a", "b"], "s", {
    **{("s", a): ("a", _keep(a, "1"), "R") for a in SYMBOLS},
    **{("a", a): ("b", _keep(a, "1"), "L") for a in SYMBOLS},
    **{("b", a): ("h1", a, "S") for a in SYMBOLS},
})

M_LOOP = _machine("M_LOOP", ["s"], "s", {("s", a): ("s", a, "R") for a in SYMBOLS})


@lru_cache(maxsize=None)
def m_count(k: int) -> TuringMachine:
    """Writes 1 and moves right k-1 times, then halts with 0: exactly k steps."""
    if k < 1:
        raise ValueError("k must be at least 1")
    states = [f"q{i}" for i in range(k)]
    rules = {}
    for i in range(k - 1):
        for a in SYMBOLS:
            rules[(f"q{i}", a)] = (f"q{i + 1}", _keep(a, "1"), "R")
    for a in SYMBOLS:
        rules[(f"q{k - 1}", a)] = ("h0", _keep(a, "1"), "S")
    return _machine(f"M_COUNT_{k}", states, "q0", rules)


REFERENCE_MACHINES = {"M_ZERO": M_ZERO, "M_ONE": M_ONE, "M_LOOP": M_LOOP}


def reference_machine(name: str) -> TuringMachine:
    if name in REFERENCE_MACHINES:
        return REFERENCE_MACHINES[name]
    if name.startswith("M_COUNT_"):
        try:
            return m_count(int(name[len("M_COUNT_"):]))
        except ValueError:
            pass
    raise MachineError(f"unknown reference machine {name!r}")


def load_machine(spec: str) -> TuringMachine:
    """A reference machine name or a path to a machine JSON file."""
    if spec.startswith("M_"):
        return reference_machine(spec)
    with open(spec, encoding="utf-8") as fh:
        return TuringMachine.from_json(json.load(fh))


# -- machine enumerations -------------------------------------------------------

class EncodingEnumeration:
    """Machine i is the canonical encoding read from the natural i.

    Naturals whose bit string is not a valid machine encoding map to M_LOOP.
    """

    name = "encoding"

    def __call__(self, i: int) -> TuringMachine:
        try:
            return TuringMachine.from_encoding(nat_to_bits(i))
        except (LocdecError, ValueError, TypeError, IndexError):
            return M_LOOP

    def index_of(self, m: TuringMachine) -> int:
        return int("1" + m.encoding(), 2)


class CyclicEnumeration:
    """Fixture enumeration: machine i is ``machines[(i - 1) % len(machines)]``."""

    def __init__(self, machines: Iterable[TuringMachine]):
        self.machines = tuple(machines)
        if not self.machines:
            raise ValueError("need at least one machine")
        self.name = "cyclic(" + ",".join(m.label() for m in self.machines) + ")"

    def __call__(self, i: int) -> TuringMachine:
        if i < 1:
            raise ValueError("machine indices start at 1")
        return self.machines[(i - 1) % len(self.machines)]


REFERENCE_ENUMERATION = CyclicEnumeration([M_ZERO, M_LOOP, M_ONE, m_count(3)])


def halting_bits(enumeration, n: int, budget: int) -> Bits:
    """b_n: bit i (1-based) is 1 iff machine i halts within ``budget`` steps."""
    return Bits("".join("1" if halts_with(enumeration(i), budget) else "0" for i in range(1, n + 1)))
