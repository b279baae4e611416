"""Command-line entry point: ``rmc <command> ...``.

Exit status is 0 on success, 1 when a check fails or a run has no
solutions, and 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import __version__
from .machine import Budget, big_eval, explore, machine_equiv, trace
from .memory import EMPTY_MEMORY, Memory, parse_memory
from .parsing import ArityError, ParseError, parse_term, parse_values, print_term
from .rewrite import normalize
from .semantics import DenotationBounds, compare_denotation_machine, denote
from .syntax import DEFAULT_LOC, canonicalize, dual, locations, term_symbols, value_symbols
from .types import RmcTypeError, check_type, parse_type, principal_type


class UsageError(Exception):
    pass


def _read_term(args, attr: str = "term"):
    src = getattr(args, attr)
    if not args.expr:
        p = Path(src)
        if not p.exists():
            raise UsageError(f"no such file: {src} (use -e to pass a term inline)")
        src = p.read_text()
    return parse_term(src)


def _budget(args) -> Budget:
    return Budget(
        max_steps_per_path=args.fuel,
        max_solutions=args.max_solutions,
        max_star_unfold=args.star_unfold,
        max_states=args.max_states,
    )


def _memory(text: str | None) -> Memory:
    return EMPTY_MEMORY if text is None else parse_memory(text)


def _line(mem, s) -> str:
    return f"{mem}  |  {s}" if len(s) else str(mem)


def _emit_results(res, args, out) -> int:
    canon = res.canonical()
    if args.json:
        data = sorted(
            (
                {
                    "memory": {loc: [str(v) for v in stack] for loc, stack in m.items_sorted()},
                    "substitution": {k: str(v) for k, v in sorted(s.items())},
                }
                for m, s in canon
            ),
            key=lambda d: json.dumps(d, sort_keys=True),
        )
        print(json.dumps(data, sort_keys=True), file=out)
    else:
        for line in sorted(_line(m, s) for m, s in canon):
            print(line, file=out)
    if not res.exhausted:
        print("rmc: search stopped at the budget; results may be incomplete", file=sys.stderr)
    return 0 if canon else 1


def cmd_run(args, out) -> int:
    m = _read_term(args)
    res = explore(_memory(args.mem), m, _budget(args), strategy=args.strategy, dedup=args.dedup)
    return _emit_results(res, args, out)


def cmd_eval(args, out) -> int:
    m = _read_term(args)
    return _emit_results(big_eval(_memory(args.mem), m, _budget(args)), args, out)


def cmd_trace(args, out) -> int:
    m = _read_term(args)
    lines = trace(_memory(args.mem), m, _budget(args))
    for line in lines:
        print(line, file=out)
    return 0 if lines and lines[-1] == "success" else 1


def cmd_normalize(args, out) -> int:
    m = _read_term(args)
    steps: list = []
    nf, done = normalize(m, fuel=args.fuel, trace=steps)
    if args.steps:
        for r in steps:
            print(f"# {r.rule.name} at {list(r.position)}", file=out)
    print(print_term(nf), file=out)
    if not done:
        print("# fuel exhausted before a normal form was reached", file=out)
        return 1
    return 0


def cmd_typecheck(args, out) -> int:
    m = _read_term(args)
    if args.type:
        ok = check_type(m, parse_type(args.type))
        print("ok" if ok else "does not have that type", file=out)
        return 0 if ok else 1
    try:
        t = principal_type(m)
    except RmcTypeError as e:
        print(f"untypable: {e}", file=out)
        return 1
    print(str(t), file=out)
    return 0


def cmd_dual(args, out) -> int:
    print(print_term(canonicalize(dual(_read_term(args)))), file=out)
    return 0


def cmd_equiv(args, out) -> int:
    a = _read_term(args, "left")
    b = _read_term(args, "right")
    if args.mem:
        mems = [parse_memory(t) for t in args.mem]
    else:
        from .gen import random_memories

        locs = sorted(locations(a) | locations(b)) or [DEFAULT_LOC]
        rng = random.Random(args.seed)
        mems = random_memories(rng, args.samples, locs=locs, max_depth=3)
    v = machine_equiv(a, b, mems, _budget(args), mode="refines" if args.refines else "equiv")
    print(str(v), file=out)
    return 0 if v.ok else 1


def cmd_denote(args, out) -> int:
    m = _read_term(args)
    bounds = DenotationBounds(args.depth, args.unfold)
    inputs = parse_values(_untuple(args.inputs)) if args.inputs is not None else None
    sig = _signature(args.sig, m, inputs or ())
    if inputs is not None:
        outs = denote(m, {}, inputs, bounds, sig)
        for o in sorted(outs, key=lambda t: [str(v) for v in t]):
            print(str(Memory({DEFAULT_LOC: o})), file=out)
        return 0 if outs else 1
    v = compare_denotation_machine(m, bounds, Budget(max_star_unfold=args.unfold), signature=sig)
    print(str(v), file=out)
    return 0 if v.ok else 1


def _untuple(text: str) -> str:
    """Drop one pair of parentheses wrapping the whole text, as in ``(c, f(c))``."""
    text = text.strip()
    if not text.startswith("("):
        return text
    depth = 0
    for i, ch in enumerate(text):
        depth += {"(": 1, ")": -1}.get(ch, 0)
        if depth == 0:
            return text[1:-1] if i == len(text) - 1 else text
    return text


def _signature(text: str | None, m, inputs=()) -> list:
    """``c/0, f/1`` style; by default the symbols of the term and inputs, plus ``c`` if there is no constant."""
    if text:
        out = []
        for part in filter(None, (p.strip() for p in text.split(","))):
            name, _, n = part.partition("/")
            if not n.strip().isdigit():
                raise UsageError(f"bad signature entry {part!r} in --sig")
            out.append((name.strip(), int(n)))
        return out
    sig = dict(term_symbols(m))
    for v in inputs:
        value_symbols(v, sig)
    if not any(n == 0 for n in sig.values()):
        sig["c"] = 0
    return sorted(sig.items(), key=lambda kv: (kv[1], kv[0]))


def _split_header(text: str, keys: tuple) -> tuple[dict, str]:
    header, body = {}, []
    for line in text.splitlines():
        k, sep, v = line.partition(":")
        if sep and k.strip() in keys:
            header[k.strip()] = v.strip()
        else:
            body.append(line)
    return header, "\n".join(body)


def _assignments(text: str) -> dict:
    out = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        k, _, v = part.partition("=")
        v = v.strip()
        out[k.strip()] = {"tt": True, "ff": False}.get(v, None) if v in ("tt", "ff") else int(v)
    return out


def encode_source(kind: str, text: str) -> tuple:
    """Compile source text to a term and an initial memory."""
    if kind == "regex":
        from .frontends.regex import encode_regex, parse_regex

        return encode_regex(parse_regex(text.strip())), EMPTY_MEMORY
    if kind == "prolog":
        from .frontends.prolog import encode_prolog, parse_prolog

        prog = parse_prolog(text)
        if prog.query is None:
            raise UsageError("a Prolog source needs a '?- goal.' query")
        return encode_prolog(prog.query, prog), Memory({DEFAULT_LOC: [prog.query]})
    if kind == "gcl":
        from .frontends.gcl import cells_to_memory, encode_gcl, parse_gcl

        header, body = _split_header(text, ("cells",))
        return encode_gcl(parse_gcl(body), strict_loops=True), cells_to_memory(_assignments(header.get("cells", "")))
    if kind == "turing":
        from .frontends.turing import encode_turing, initial_memory, parse_turing

        header, body = _split_header(text, ("tape", "head"))
        tm = parse_turing(body)
        return encode_turing(tm), initial_memory(tm, header.get("tape", ""), int(header.get("head", "0")))
    if kind == "inet":
        from .frontends.inet import config_to_memory, encode_inet, parse_inet

        system, config = parse_inet(text)
        return encode_inet(system), config_to_memory(config) if config else EMPTY_MEMORY
    if kind == "petri":
        from .frontends.petri import encode_petri, marking, parse_petri, state_to_memory

        header, body = _split_header(text, ("initial",))
        start = {k: int(v) for k, v in _assignments(header.get("initial", "")).items()}
        return encode_petri(parse_petri(body)), state_to_memory(marking(start))
    raise UsageError(f"unknown source kind {kind!r}")


def cmd_encode(args, out) -> int:
    src = Path(args.source)
    if not src.exists():
        raise UsageError(f"no such file: {args.source}")
    term, mem = encode_source(args.kind, src.read_text())
    if args.output:
        base = Path(args.output)
        base.with_suffix(".rmc").write_text(print_term(term) + "\n")
        base.with_suffix(".mem").write_text(str(mem) + "\n")
        print(f"wrote {base.with_suffix('.rmc')} and {base.with_suffix('.mem')}", file=out)
    else:
        print(print_term(term), file=out)
        print(f"# memory: {mem}", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rmc", description="Relational machine toolkit")
    p.add_argument("--version", action="version", version=f"rmc {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, term_args=("term",)):
        for name in term_args:
            sp.add_argument(name, help="term file (or inline text with -e)")
        sp.add_argument("-e", "--expr", action="store_true", help="treat term arguments as inline text")
        sp.add_argument("--fuel", type=int, default=10_000, help="max steps per path")
        sp.add_argument("--max-solutions", type=int, default=100)
        sp.add_argument("--star-unfold", type=int, default=32)
        sp.add_argument("--max-states", type=int, default=200_000)
        sp.add_argument("--seed", type=int, default=0)

    for name, fn, helptext in (
        ("run", cmd_run, "enumerate results with the small-step machine"),
        ("eval", cmd_eval, "big-step evaluation"),
        ("trace", cmd_trace, "print the transitions of one successful run"),
    ):
        sp = sub.add_parser(name, help=helptext)
        common(sp)
        sp.add_argument("--mem", help="initial memory, e.g. '_: [e,d,c]; a: [x]'")
        if name != "trace":
            sp.add_argument("--json", action="store_true")
        if name == "run":
            sp.add_argument("--strategy", choices=("bfs", "iddfs"), default="bfs")
            sp.add_argument("--dedup", action="store_true", help="expand each state once")
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("normalize", help="reduce to normal form")
    common(sp)
    sp.add_argument("--steps", action="store_true", help="list the contracted redexes")
    sp.set_defaults(fn=cmd_normalize)

    sp = sub.add_parser("typecheck", help="infer or check a simple type")
    common(sp)
    sp.add_argument("--type", help="check against a type such as '2 > 1'")
    sp.set_defaults(fn=cmd_typecheck)

    sp = sub.add_parser("dual", help="print the converse term")
    common(sp)
    sp.set_defaults(fn=cmd_dual)

    sp = sub.add_parser("equiv", help="compare two terms on memories")
    common(sp, ("left", "right"))
    sp.add_argument("--mem", action="append", help="memory to test on (repeatable)")
    sp.add_argument("--samples", type=int, default=20, help="random memories when --mem is absent")
    sp.add_argument("--refines", action="store_true", help="check containment instead of equality")
    sp.set_defaults(fn=cmd_equiv)

    sp = sub.add_parser("denote", help="bounded relational semantics")
    common(sp)
    sp.add_argument("--depth", type=int, default=3, help="value height bound")
    sp.add_argument("--unfold", "--star", type=int, default=3, help="star unfolding bound")
    sp.add_argument("--sig", help="signature for the value universe, e.g. 'c/0, f/1'")
    sp.add_argument("--inputs", "--input", help="input stack, e.g. 'c, f(c)'; omit to compare with the machine")
    sp.set_defaults(fn=cmd_denote)

    sp = sub.add_parser("encode", help="compile a source program")
    sp.add_argument("kind", choices=("regex", "prolog", "gcl", "turing", "inet", "petri"))
    sp.add_argument("source")
    sp.add_argument("-o", "--output", help="write OUTPUT.rmc and OUTPUT.mem")
    sp.set_defaults(fn=cmd_encode)
    return p


def run_command(argv, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.fn(args, out)
    except (UsageError, ParseError, ArityError, ValueError) as e:
        print(f"rmc: error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
