"""The ``hornlab`` command line.

Every command prints one JSON report on stdout and a short summary on
stderr.  Exit codes: 0 positive answer or success, 1 negative answer,
2 usage or input error, 3 budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Sequence

from . import __version__, khs
from .analysis import INF, chromatic_number, connected_components, girth, is_hyperforest
from .core import Hypergraph, KStructure, to_hypergraph, to_kstructure
from .efgame import (
    G,
    H,
    Exhaustive,
    GameState,
    RandomPlays,
    Scripted,
    build_instance,
    check_conditions,
    duplicator_move,
    play,
    spoiler_moves_from_lines,
)
from .errors import BudgetExhausted, CapExceeded, HasLoop, HornlabError, NoFreshCopy
from .generators import (
    SearchBudget,
    complete_hypergraph,
    density_checks,
    density_witness,
    edgeless,
    high_chromatic_sparse,
    nfa_witness,
    random_hyperforest,
    single_edge,
    sparse_incomparability,
)
from .hom import Budget, colourable, hom_enumerate, hom_exists
from .membership import member
from .polymorphism import classify, cyclic_polymorphism

SCHEMA = "hornlab-report-1"
EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(HornlabError):
    pass


def _jsonable(x):
    if isinstance(x, float) and x == INF:
        return None
    return x


# ---------------------------------------------------------------- loading


def _load_raw(path: str):
    try:
        return khs.load(path)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror or exc}") from None


def _as_kstructure(s, k: int | None) -> KStructure:
    if isinstance(s, KStructure):
        if k is not None and k != s.k:
            raise UsageError(f"structure has arity {s.k}, --k asked for {k}")
        return s
    return to_kstructure(s, k if k is not None else max(2, s.max_edge_size))


def _load_all(paths: Sequence[str], k: int | None) -> list[KStructure]:
    raws = [_load_raw(p) for p in paths]
    if k is None:
        arities = {r.k for r in raws if isinstance(r, KStructure)}
        if len(arities) > 1:
            raise UsageError(f"inputs have different arities {sorted(arities)}")
        if arities:
            k = arities.pop()
        else:
            k = max(2, *(r.max_edge_size for r in raws))
    return [_as_kstructure(r, k) for r in raws]


def _as_hypergraph(s) -> Hypergraph:
    if isinstance(s, Hypergraph):
        return s
    if s.set_closed:
        return to_hypergraph(s)
    return Hypergraph(s.universe, s.underlying_sets)


def _hom_budget(args) -> Budget:
    nodes = args.budget if args.budget is not None else Budget().max_nodes
    return Budget(max_nodes=nodes, max_seconds=args.timeout)


def _search_budget(args) -> SearchBudget:
    kw = {"seed": args.seed, "max_seconds": args.timeout}
    if args.budget is not None:
        kw["max_candidates"] = args.budget
    return SearchBudget(**kw)


def _write_out(args, payload) -> None:
    if not args.out:
        return
    with open(args.out, "w", encoding="utf-8") as fh:
        if isinstance(payload, (Hypergraph, KStructure)):
            fh.write(khs.dumps(payload))
        else:
            json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------- commands


def cmd_analyze(args):
    raw = _load_raw(args.file)
    h = _as_hypergraph(raw)
    try:
        chi = chromatic_number(h, cap=args.cap)
    except (HasLoop, CapExceeded):
        chi = None
    if isinstance(raw, KStructure):
        uniform, loop_free = raw.uniform, raw.loop_free
    else:
        sizes = {len(e) for e in h.edges}
        uniform, loop_free = len(sizes) <= 1, h.loop_free
    comps = connected_components(h)
    result = {
        "vertices": len(h.vertices),
        "edges": len(h.edges),
        "girth": _jsonable(girth(h, min_length=args.min_length)),
        "hyperforest": is_hyperforest(h),
        "chromatic": chi,
        "uniform": uniform,
        "loop_free": loop_free,
        "components": [[h.vertices[v] for v in c] for c in comps],
    }
    return EXIT_YES, result, f"girth {result['girth']}, chromatic {chi}, {len(comps)} component(s)"


def cmd_hom(args):
    src, tgt = _load_all([args.source, args.target], args.k)
    budget = _hom_budget(args)
    if args.enumerate is not None:
        hs = hom_enumerate(src, tgt, cap=args.enumerate, budget=budget)
        result = {"hom": bool(hs.homs), "count": len(hs), "complete": hs.complete, "maps": [h.as_dict() for h in hs]}
        summary = f"{len(hs)} homomorphism(s){'' if hs.complete else ' (truncated)'}"
        return (EXIT_YES if hs.homs else EXIT_NO), result, summary
    h = hom_exists(src, tgt, budget)
    result = {"hom": h is not None}
    if h is not None:
        result["map"] = h.as_dict()
    return (EXIT_YES if h else EXIT_NO), result, "homomorphism found" if h else "no homomorphism"


def cmd_colour(args):
    s = _load_all([args.file], args.k)[0]
    if not s.loop_free:
        raise HasLoop("a structure with a constant tuple has no proper colouring")
    c = colourable(s, args.colours, _hom_budget(args))
    result = {"colourable": c is not None, "colours": args.colours}
    if c is not None:
        result["colouring"] = {x: int(c(x)) for x in s.universe}
    return (EXIT_YES if c else EXIT_NO), result, f"{args.colours}-colourable: {c is not None}"


def cmd_member(args):
    s, *templates = _load_all([args.file, *args.template], args.k)
    cert = member(s, templates, _hom_budget(args))
    result = {"member": cert.member, "certificate_valid": cert.validate()}
    if not cert.member:
        result["failed"] = cert.failed
        result["witness"] = None if cert.witness is None else list(cert.witness)
    if args.certificate:
        with open(args.certificate, "w", encoding="utf-8") as fh:
            json.dump(cert.to_json(), fh, indent=2)
            fh.write("\n")
    summary = "member" if cert.member else f"not a member ({cert.failed})"
    return (EXIT_YES if cert.member else EXIT_NO), result, summary


def cmd_classify(args):
    s = _load_all([args.file], args.k)[0]
    c = classify(s, _hom_budget(args))
    result = {**c.to_json(), "evidence_valid": c.validate(s)}
    return EXIT_YES, result, f"{c.verdict} ({c.reason})"


def cmd_polymorphism(args):
    s = _load_all([args.file], args.k)[0]
    t = cyclic_polymorphism(s, args.arity, _hom_budget(args), idempotent=args.idempotent)
    result = {"found": t is not None, "arity": args.arity, "idempotent": args.idempotent}
    if t is not None:
        result["table"] = t.to_json()["table"]
        result["validated"] = t.is_cyclic() and t.is_polymorphism()
    return (EXIT_YES if t else EXIT_NO), result, f"cyclic polymorphism of arity {args.arity}: {t is not None}"


def _structure_result(s) -> dict:
    return {"structure": khs.to_json(s)}


def cmd_generate(args):
    kind = args.kind
    if kind == "complete":
        s = complete_hypergraph(args.n, args.k or 2)
    elif kind == "edge":
        s = single_edge(args.size)
    elif kind == "edgeless":
        s = edgeless(args.n)
    elif kind == "forest":
        s = random_hyperforest(args.k or 3, args.edges, seed=args.seed)
    elif kind == "sparse":
        s = high_chromatic_sparse(
            args.k or 3, args.girth_above, args.not_colourable, _search_budget(args),
            strict=not args.non_strict, use_fixture=args.fixture,
        )
    elif kind == "incomparability":
        h1, h2 = _load_all(args.inputs, args.k)
        s = sparse_incomparability(h1, h2, args.ell, _search_budget(args), strict=not args.non_strict)
    elif kind == "density":
        g1, g2 = _load_all(args.inputs, args.k)
        s = density_witness(g1, g2, _search_budget(args))
        result = {**_structure_result(s), "checks": density_checks(g1, g2, s, _hom_budget(args))}
        _write_out(args, s)
        return EXIT_YES, result, f"density witness with {len(s)} elements"
    elif kind == "nfa":
        (m,) = _load_all(args.inputs, args.k)
        rep = nfa_witness(m, args.n, _search_budget(args), use_fixture=args.fixture)
        result = {**_structure_result(rep.witness), "report": rep.to_json()}
        _write_out(args, rep.witness)
        return (EXIT_YES if rep.ok else EXIT_NO), result, f"nfa witness ok: {rep.ok}"
    else:  # argparse restricts the choices
        raise UsageError(f"unknown generator {kind!r}")
    _write_out(args, s)
    return EXIT_YES, _structure_result(s), f"generated {kind}"


def cmd_convert(args):
    raw = _load_raw(args.file)
    if args.to == "kstructure":
        if isinstance(raw, KStructure):
            out = _as_kstructure(raw, args.k)
        else:
            if args.k is None:
                raise UsageError("--k is required when converting to a kstructure")
            out = to_kstructure(raw, args.k)
    else:
        out = raw if isinstance(raw, Hypergraph) else to_hypergraph(raw)
    _write_out(args, out)
    return EXIT_YES, _structure_result(out), f"converted to {args.to}"


def _interactive_moves(inst, state_out: list) -> list[tuple[str, str]]:
    """Read Spoiler moves from stdin, answering each one on stderr."""
    state = GameState(inst)
    moves = []
    err = sys.stderr
    err.write(f"{inst.rounds} round(s). Enter moves as 'G <element>' or 'H <element>'.\n")
    lines = iter(sys.stdin)
    while state.round < inst.rounds:
        err.write(f"round {state.round + 1}> ")
        err.flush()
        line = next(lines, None)
        if line is None:
            break
        parsed = list(spoiler_moves_from_lines([line]))
        if not parsed:
            continue
        side, name = parsed[0]
        if side not in (G, H) or name not in inst.side(side).structure.index:
            err.write("  not a valid move\n")
            continue
        try:
            reply = duplicator_move(state, side, inst.element(side, name))
        except NoFreshCopy as exc:
            err.write(f"  Duplicator has no reply: {exc}\n")
            moves.append((side, name))
            break
        moves.append((side, name))
        other = H if side == G else G
        err.write(f"  Duplicator: {inst.name(other, reply)}\n")
        for problem in check_conditions(state):
            err.write(f"  violation: {problem}\n")
    state_out.append(state)
    return moves


def cmd_efgame(args):
    (base,) = _load_all([args.base], args.k)
    inst = build_instance(base, args.rounds, args.radius, strict=not args.non_strict)
    if args.spoiler == "exhaustive":
        policy = Exhaustive()
    elif args.spoiler == "random":
        policy = RandomPlays(seed=args.seed, trials=args.trials)
    elif args.spoiler == "scripted":
        try:
            moves = json.loads(args.moves or "[]")
            policy = Scripted(tuple((str(a), str(b)) for a, b in moves))
        except (ValueError, TypeError) as exc:
            raise UsageError(f"--moves must be a JSON list of [side, element] pairs: {exc}") from None
    else:
        moves = _interactive_moves(inst, [])
        policy = Scripted(tuple(moves))
        # record the session so that --replay re-runs it without a terminal
        args._argv_override = _replace_spoiler(args._argv, json.dumps([list(m) for m in moves]))
    rep = play(inst, policy, keep_transcripts=args.keep_transcripts)
    result = rep.to_json()
    return (EXIT_YES if rep.ok else EXIT_NO), result, f"{rep.plays} play(s), {rep.violation_count} violation(s)"


def _replace_spoiler(argv: list[str], moves_json: str) -> list[str]:
    out, skip = [], False
    for i, a in enumerate(argv):
        if skip:
            skip = False
            continue
        if a == "--spoiler":
            skip = True
            continue
        if a.startswith("--spoiler="):
            continue
        out.append(a)
    return out + ["--spoiler", "scripted", "--moves", moves_json]


# ---------------------------------------------------------------- parser


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="RNG seed for randomized commands (default 0)")
    p.add_argument(
        "--budget", type=int, default=None,
        help="search budget: node cap for homomorphism searches, candidate cap for witness generators",
    )
    p.add_argument("--timeout", type=float, default=60.0, help="wall-clock cap in seconds")
    p.add_argument("--out", help="also write the output here: a khs-1 structure for generate/convert, the report otherwise")
    p.add_argument("--jobs", type=int, default=1, help="worker cap; work currently runs in one process")
    p.add_argument("--k", type=int, default=None, help="arity used when reading hypergraph inputs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hornlab", description="Finite hypergraph homomorphism and model theory toolkit.")
    parser.add_argument("--version", action="version", version=f"hornlab {__version__}")
    parser.add_argument("--replay", metavar="REPORT", help="re-run the command recorded in a JSON report")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("analyze", help="girth, hyperforest test, chromatic number, components")
    p.add_argument("file")
    p.add_argument("--min-length", type=int, choices=(1, 2), default=2, help="shortest cycle length that counts")
    p.add_argument("--cap", type=int, default=8, help="largest chromatic number tried")
    _common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("hom", help="decide or enumerate homomorphisms")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--enumerate", type=int, metavar="N", help="list up to N homomorphisms")
    p.add_argument("--deterministic", action="store_true", help="canonical first witness (always on)")
    _common(p)
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("colour", aliases=["color"], help="n-colourability")
    p.add_argument("file")
    p.add_argument("--colours", "-n", type=int, required=True)
    _common(p)
    p.set_defaults(func=cmd_colour)

    p = sub.add_parser("member", help="membership in the class generated by the templates")
    p.add_argument("file")
    p.add_argument("--template", action="append", required=True)
    p.add_argument("--certificate", help="write the full certificate here")
    _common(p)
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("classify", help="tractable / NP-complete verdict with evidence")
    p.add_argument("file")
    _common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("polymorphism", help="search for a cyclic polymorphism")
    p.add_argument("file")
    p.add_argument("--arity", "-p", type=int, required=True)
    p.add_argument("--idempotent", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_polymorphism)

    p = sub.add_parser("generate", help="standard structures and verified witnesses")
    p.add_argument(
        "kind", choices=("complete", "edge", "edgeless", "forest", "sparse", "incomparability", "density", "nfa")
    )
    p.add_argument("inputs", nargs="*", help="input structures for incomparability, density and nfa")
    p.add_argument("--n", type=int, default=3, help="vertex count (complete, edgeless) or radius (nfa)")
    p.add_argument("--size", type=int, default=3, help="edge size for 'edge'")
    p.add_argument("--edges", type=int, default=3, help="edge count for 'forest'")
    p.add_argument("--girth-above", type=int, default=2)
    p.add_argument("--not-colourable", type=int, default=2)
    p.add_argument("--ell", type=int, default=2, help="girth threshold for 'incomparability'")
    p.add_argument("--non-strict", action="store_true", help="accept girth equal to the threshold")
    p.add_argument("--fixture", action="store_true", help="let the Fano plane answer when it qualifies")
    _common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("efgame", help="play the ball-copy Ehrenfeucht-Fraisse game")
    p.add_argument("--base", required=True)
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--spoiler", choices=("exhaustive", "random", "stdin", "scripted"), default="exhaustive")
    p.add_argument("--trials", type=int, default=10**4, help="plays for --spoiler random")
    p.add_argument("--moves", help="JSON list of [side, element] for --spoiler scripted")
    p.add_argument("--non-strict", action="store_true", help="allow radius <= 2^(rounds+1)")
    p.add_argument("--keep-transcripts", type=int, default=0, help="store this many full transcripts")
    _common(p)
    p.set_defaults(func=cmd_efgame)

    p = sub.add_parser("convert", help="hypergraph <-> k-structure")
    p.add_argument("file")
    p.add_argument("--to", choices=("kstructure", "hypergraph"), required=True)
    _common(p)
    p.set_defaults(func=cmd_convert)
    return parser


def _command_spec(args, argv: list[str]) -> dict:
    return {
        "name": args.command,
        "argv": argv,
        "seed": getattr(args, "seed", 0),
        "budget": getattr(args, "budget", None),
    }


def _emit(report: dict, summary: str | None) -> None:
    sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")
    if summary:
        sys.stderr.write(summary + "\n")


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.replay:
        try:
            with open(args.replay, encoding="utf-8") as fh:
                old = json.load(fh)
            if old.get("schema") != SCHEMA:
                raise ValueError(f"not a {SCHEMA} report")
            replay_argv = list(old["command"]["argv"])
        except (OSError, ValueError, KeyError, TypeError) as exc:
            _emit({"schema": SCHEMA, "version": __version__, "error": {"type": "UsageError", "message": str(exc)}},
                  f"error: cannot replay {args.replay}: {exc}")
            return EXIT_USAGE
        return run(replay_argv)
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    args._argv = argv
    args._argv_override = None
    head = {"schema": SCHEMA, "version": __version__}
    func: Callable = args.func
    try:
        code, result, summary = func(args)
    except BudgetExhausted as exc:
        code, result, summary = EXIT_BUDGET, {"budget_exhausted": True, "message": str(exc)}, f"budget exhausted: {exc}"
    except (HornlabError, ValueError) as exc:
        code = EXIT_USAGE
        result = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        summary = f"error: {type(exc).__name__}: {exc}"
    report = {**head, "command": _command_spec(args, args._argv_override or argv), **result}
    if args.out and args.command not in ("generate", "convert") and code != EXIT_USAGE:
        _write_out(args, report)
    _emit(report, summary)
    return code


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))
