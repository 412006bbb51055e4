"""Command-line front end: ``locdec build|check|oracle|compile|separate|corpus``.

Exit codes: 0 accepted / success, 1 rejected / disagreement, 2 operational error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Sequence

from . import config
from .constructions import ConstructionParams, build_instance, checker, describe, mutate, mutations_for
from .errors import LocdecError
from .graph import LabelledGraph, dumps, loads, to_dot
from .languages import LANGUAGES, language
from .oracles import (RandomPlacement, SHIPPED_STRATEGIES, SortedById, assign, invert, labels,
                      largeness_witness, oracle_from_name)
from .reductions import compile_ld_to_ldof, separator_B_lemma1, separator_B_thm2, separator_decider
from .runtime import run
from .turing import load_machine

EXIT_ACCEPT, EXIT_REJECT, EXIT_ERROR = 0, 1, 2


def _emit(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _strategy(name: str, seed: int):
    if name == "sorted":
        return SortedById()
    if name == "random":
        return RandomPlacement(seed)
    raise LocdecError(f"unknown strategy {name!r}")


def _with_ids(graph: LabelledGraph, regime: str, seed: int, id_max: int | None) -> LabelledGraph:
    if graph.ids is not None:
        return graph
    if regime == "perm":
        return graph.with_ids(range(1, graph.n + 1))
    top = id_max if id_max is not None else 4 * graph.n
    if top < graph.n:
        raise LocdecError(f"--id-max {top} is smaller than n={graph.n}")
    return graph.with_ids(random.Random(seed).sample(range(1, top + 1), graph.n))


def _read_graph(path: str) -> LabelledGraph:
    return loads(Path(path).read_text(encoding="utf-8"))


# -- build ---------------------------------------------------------------------------

def cmd_build(args) -> int:
    if args.kind == "P":
        if args.n is None:
            raise LocdecError("build P needs --n")
        inst = build_instance("P", n=args.n)
    else:
        if args.machine is None:
            raise LocdecError(f"build {args.kind} needs --machine")
        params = ConstructionParams(r=args.r, N=args.N, ell=args.ell, budget=args.budget)
        inst = build_instance(args.kind, load_machine(args.machine), params)
    graph = inst.graph
    if args.mutate:
        graph = mutate(inst, args.mutate)
    text = dumps(graph)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        print(text)
    if args.dot:
        Path(args.dot).write_text(to_dot(graph, describe=describe), encoding="utf-8")
    print(json.dumps({"kind": args.kind, "nodes": graph.n, "edges": len(graph.edges)}), file=sys.stderr)
    return EXIT_ACCEPT


# -- check ------------------------------------------------------------------------------

def _decider_for(args):
    if args.checker:
        return checker(args.checker), None
    lang = language(args.language)
    tag = args.tag or next(iter(lang.deciders))
    return lang.decider(tag), lang


def cmd_check(args) -> int:
    graph = _read_graph(args.instance)
    alg, lang = _decider_for(args)
    cfg = {"decider": alg.name, "ids": args.ids, "seed": args.seed}
    if args.oracle:
        oracle = oracle_from_name(args.oracle, enumeration="reference")
        graph = assign(oracle, graph, _strategy(args.strategy, args.seed))
        cfg.update(oracle=oracle.name, strategy=args.strategy)
    if not alg.oblivious:
        graph = _with_ids(graph, args.ids, args.seed, args.id_max)
    verdict = run(alg, graph)
    _emit({**verdict.to_json(), "config": cfg})
    return EXIT_ACCEPT if verdict.accepted else EXIT_REJECT


# -- oracle -------------------------------------------------------------------------------

def cmd_oracle(args) -> int:
    oracle = oracle_from_name(args.name, enumeration="reference")
    if args.classify:
        c, n_max = args.classify
        w = largeness_witness(oracle, c, n_max)
        _emit({"oracle": oracle.name, "c": c, "n_max": n_max, "k": None if w is None else w.k,
               "large_on_window": w is not None})
    elif args.dump is not None:
        _emit({"oracle": oracle.name, "n": args.dump, "labels": [str(x) for x in labels(oracle, args.dump)]})
    elif args.invert is not None:
        _emit({"oracle": oracle.name, "label": args.invert, "g": invert(oracle, args.invert)})
    else:
        raise LocdecError("choose one of --classify, --dump, --invert")
    return EXIT_ACCEPT


# -- compile ------------------------------------------------------------------------------

def cmd_compile(args) -> int:
    lang = language(args.language)
    source = lang.decider("LD")
    oracle = oracle_from_name(args.oracle)
    compiled = compile_ld_to_ldof(source, oracle, cap=config.enum_cap())
    strategies = SHIPPED_STRATEGIES if args.strategy == "all" else (_strategy(args.strategy, args.seed),)
    rows = []
    agree = True
    for path in args.instances:
        graph = _read_graph(path).without_ids().with_oracle(None)
        member = lang.membership(graph)
        ids_graph = graph.with_ids(range(1, graph.n + 1))
        for strat in strategies:
            before = dict(compiled.stats)
            verdict = run(compiled, assign(oracle, ids_graph, strat))
            ok = verdict.accepted == member
            agree &= ok
            rows.append({
                "instance": path, "strategy": repr(strat), "member": member,
                "accepted": verdict.accepted, "agree": ok,
                "decisions": compiled.stats["decisions"] - before["decisions"],
                "assignments": compiled.stats["assignments"] - before["assignments"],
            })
    total = len(rows)
    _emit({"language": lang.name, "oracle": oracle.name, "instances": rows,
           "agreement": sum(r["agree"] for r in rows) / total if total else 1.0})
    return EXIT_ACCEPT if agree else EXIT_REJECT


# -- separate ------------------------------------------------------------------------------

def cmd_separate(args) -> int:
    m = load_machine(args.machine)
    alg = separator_decider(args.decider, args.r)
    if args.which == "lemma1":
        outcome = separator_B_lemma1(alg, m, args.r, args.i0)
    else:
        outcome = separator_B_thm2(alg, m, args.r)
    payload = outcome.to_json()
    if args.transcript:
        Path(args.transcript).write_text(json.dumps(payload, indent=2), encoding="utf-8")
    _emit({"which": args.which, "machine": m.label(), "r": args.r, "decider": alg.name,
           "bit": outcome.bit, "halted": outcome.halted, "complete": outcome.complete,
           "views": len(outcome.transcript)})
    return EXIT_ACCEPT


# -- corpus --------------------------------------------------------------------------------

GOLDEN = [
    # (file stem, family, machine, r, N, ell, n, mutation, language)
    ("G_M_ZERO_r1_N3", "G", "M_ZERO", 1, 3, None, None, None, "L-lemma1"),
    ("G_M_ONE_r1_N2", "G", "M_ONE", 1, 2, None, None, None, "L-lemma1"),
    ("G_M_COUNT_3_r1_N2", "G", "M_COUNT_3", 1, 2, None, None, None, "L-lemma1"),
    ("G_M_ZERO_r1_N3_duplicated_tail", "G", "M_ZERO", 1, 3, None, None, "duplicated_tail", "L-lemma1"),
    ("G_M_ZERO_r1_N3_wrong_symbol", "G", "M_ZERO", 1, 3, None, None, "wrong_symbol", "L-lemma1"),
    ("J_M_ZERO_r1_l0", "J", "M_ZERO", 1, 1, 0, None, None, "J-thm2"),
    ("J_M_ZERO_r1_l1", "J", "M_ZERO", 1, 1, 1, None, None, "J-thm2"),
    ("J_M_ONE_r1_l1", "J", "M_ONE", 1, 1, 1, None, None, "J-thm2"),
    ("J_M_ZERO_r1_l0_pivot_bit_missing", "J", "M_ZERO", 1, 1, 0, None, "pivot_bit_missing", "J-thm2"),
    ("H_M_ZERO_r1", "H", "M_ZERO", 1, 1, None, None, None, "L2-thm3"),
    ("H_M_ONE_r1", "H", "M_ONE", 1, 1, None, None, None, "L2-thm3"),
    ("H_M_ZERO_r1_two_pivots", "H", "M_ZERO", 1, 1, None, None, "two_pivots", "L2-thm3"),
    ("P_1", "P", None, 1, 1, None, 1, None, "L1-thm3"),
    ("P_2", "P", None, 1, 1, None, 2, None, "L1-thm3"),
    ("P_3", "P", None, 1, 1, None, 3, None, "L1-thm3"),
    ("P_5", "P", None, 1, 1, None, 5, None, "L1-thm3"),
    ("P_5_path_distance", "P", None, 1, 1, None, 5, "path_distance", "L1-thm3"),
]

LANGUAGE_ORACLE = {"L-lemma1": None, "J-thm2": "upper-bound", "L2-thm3": "halting-bits",
                   "L1-thm3": "halting-bits"}


def golden_instance(entry) -> LabelledGraph:
    _, family, machine, r, N, ell, n, mutation, _ = entry
    if family == "P":
        inst = build_instance("P", n=n)
    else:
        inst = build_instance(family, load_machine(machine), ConstructionParams(r=r, N=N, ell=ell))
    return mutate(inst, mutation) if mutation else inst.graph


def cmd_corpus(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = []
    for entry in GOLDEN:
        stem, lang_name = entry[0], entry[-1]
        graph = golden_instance(entry)
        (out / f"{stem}.json").write_text(dumps(graph), encoding="utf-8")
        manifest.append({"file": f"{stem}.json", "language": lang_name,
                         "oracle": LANGUAGE_ORACLE[lang_name],
                         "member": language(lang_name).membership(graph)})
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2), encoding="utf-8")
    _emit({"written": len(manifest), "directory": str(out)})
    return EXIT_ACCEPT


# -- parser ----------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="locdec", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build an H, G, J or P instance")
    b.add_argument("kind", choices=["H", "G", "J", "P"])
    b.add_argument("--machine", help="reference machine name (M_ZERO, M_ONE, M_COUNT_k, M_LOOP) or JSON file")
    b.add_argument("--r", type=int, default=1)
    b.add_argument("--N", type=int, default=1, help="tail length for G")
    b.add_argument("--ell", type=int, choices=[0, 1], help="pivot bit for J")
    b.add_argument("--n", type=int, help="path size for P")
    b.add_argument("--budget", type=int, default=config.DEFAULT_BUDGET)
    b.add_argument("--mutate", choices=sorted({mu.name for f in "HGJP" for mu in mutations_for(f)}))
    b.add_argument("-o", "--output")
    b.add_argument("--dot")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check", help="run a decider on an instance")
    c.add_argument("instance")
    who = c.add_mutually_exclusive_group(required=True)
    who.add_argument("--language", choices=sorted(LANGUAGES))
    who.add_argument("--checker", choices=["H", "G", "J", "P"])
    c.add_argument("--tag", help="decider class tag, e.g. LD or LDO^f")
    c.add_argument("--oracle", help="assign labels of this oracle before running")
    c.add_argument("--strategy", choices=["sorted", "random"], default="sorted")
    c.add_argument("--ids", choices=["perm", "random"], default="perm")
    c.add_argument("--id-max", type=int)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_check)

    o = sub.add_parser("oracle", help="inspect a scalar oracle")
    o.add_argument("name")
    mode = o.add_mutually_exclusive_group(required=True)
    mode.add_argument("--classify", type=int, nargs=2, metavar=("C", "N_MAX"))
    mode.add_argument("--dump", type=int, metavar="N")
    mode.add_argument("--invert", type=int, metavar="LABEL")
    o.set_defaults(func=cmd_oracle)

    k = sub.add_parser("compile", help="compare a compiled decider with membership")
    k.add_argument("--language", default="L-lemma1", choices=sorted(LANGUAGES))
    k.add_argument("--oracle", default="identity")
    k.add_argument("--strategy", choices=["all", "sorted", "random"], default="all")
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("instances", nargs="+")
    k.set_defaults(func=cmd_compile)

    s = sub.add_parser("separate", help="run a separator procedure")
    s.add_argument("which", choices=["lemma1", "thm2"])
    s.add_argument("--machine", required=True)
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--decider", default="constant-yes")
    s.add_argument("--i0", type=int, default=0)
    s.add_argument("--transcript")
    s.set_defaults(func=cmd_separate)

    g = sub.add_parser("corpus", help="regenerate the golden instances and their manifest")
    g.add_argument("--out", default="corpus")
    g.set_defaults(func=cmd_corpus)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (LocdecError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
