"""Command-line front end.

Exit codes: 0 valid / true / found, 1 invalid / false / not found,
2 usage or format error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .deep import check_deep, deep_to_seq, dump_derivation, read_derivation, seq_to_deep
from .formula import ParseError, parse_formula, parse_sequent, print_formula, print_sequent
from .logics import load_logic, print_logic
from .normalize import NormalizationError, eliminate_conjunction, eliminate_top
from .rewrite import (
    RewriteError, check_rewrite_derivation, deep_to_rewrite, format_word,
    load_system, logic_of, parse_rewrite_derivation, print_rewrite_derivation,
    reachable, rewrite_to_deep,
)
from .search import bounded_forward_search
from .semantics import SEMANTIC_LOGICS, decide, eval_formula, fixture_model, parse_model, truth_set, _world
from .sequent import InvalidProof, check_sequent_proof, dump_proof, load_proof


class UsageError(Exception):
    pass


def _emit(args, ok: bool, text: str = "", **extra) -> int:
    if args.json:
        payload = {"command": args.command, "result": ok, **extra}
        if text:
            payload["output"] = text
        print(json.dumps(payload))
    elif text:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return 0 if ok else 1


def _logic_for(ref, path: Path | None, declared):
    ref = ref or declared
    if not ref:
        raise UsageError("no logic given; use --logic or a 'logic:' header")
    base = path.parent if (path is not None and ref == declared) else None
    return load_logic(ref, base), ref


# --- commands ----------------------------------------------------------------

def cmd_parse(args):
    text = args.text
    out = print_sequent(parse_sequent(text)) if "|-" in text else print_formula(parse_formula(text))
    return _emit(args, True, out)


def cmd_decide(args):
    s = parse_sequent(args.sequent)
    result = decide(args.logic, s)
    return _emit(args, result, "true" if result else "false")


def cmd_search(args):
    logic = load_logic(args.logic)
    s = parse_sequent(args.sequent)
    found, d = bounded_forward_search(logic, s, args.size, args.steps)
    if not found:
        return _emit(args, False, "not found")
    return _emit(args, True, dump_derivation(d, args.logic), steps=len(d))


def cmd_check_seq(args):
    path = Path(args.file)
    proof, declared = load_proof(path.read_text(encoding="utf-8"))
    logic, _ = _logic_for(args.logic, path, declared)
    v = check_sequent_proof(proof, logic)
    return _emit(args, v.valid, str(v), where=list(v.where) if v.where is not None else None)


def cmd_check_deep(args):
    path = Path(args.file)
    d, logic, ref = read_derivation(path)
    if args.logic:
        logic = load_logic(args.logic)
    if logic is None:
        raise UsageError("no logic given; use --logic or a 'logic:' header")
    v = check_deep(d, logic)
    return _emit(args, v.valid, str(v), where=v.where)


def cmd_normalize(args):
    d, logic, ref = read_derivation(Path(args.file))
    if logic is None:
        raise UsageError("derivation file has no 'logic:' header")
    d = eliminate_top(d, logic)
    if args.top_only:
        return _emit(args, True, dump_derivation(d, ref))
    return _emit(args, True, dump_derivation(eliminate_conjunction(d, logic), ref))


def cmd_seq2deep(args):
    path = Path(args.file)
    proof, declared = load_proof(path.read_text(encoding="utf-8"))
    logic, ref = _logic_for(args.logic, path, declared)
    return _emit(args, True, dump_derivation(seq_to_deep(proof, logic), ref))


def cmd_deep2seq(args):
    d, logic, ref = read_derivation(Path(args.file))
    if args.logic:
        logic, ref = load_logic(args.logic), args.logic
    if logic is None:
        raise UsageError("no logic given; use --logic or a 'logic:' header")
    return _emit(args, True, dump_proof(deep_to_seq(d, logic), ref))


def cmd_thue(args):
    system = load_system(args.system)
    if args.action == "search":
        found, d = reachable(system, args.start, args.goal, args.max_len, args.max_steps)
        if not found:
            return _emit(args, False, "not found")
        return _emit(args, True, print_rewrite_derivation(d), steps=len(d),
                     words=[format_word(w) for w in d.words])
    if args.action == "to-logic":
        return _emit(args, True, print_logic(logic_of(system)))
    text = Path(args.file).read_text(encoding="utf-8")
    if args.action == "check":
        try:
            d = parse_rewrite_derivation(text, system)
        except RewriteError as e:
            return _emit(args, False, f"invalid: {e}")
        v = check_rewrite_derivation(d, system)
        return _emit(args, v.valid, str(v))
    if args.action == "to-proof":
        d = parse_rewrite_derivation(text, system)
        return _emit(args, True, dump_derivation(rewrite_to_deep(d, system), f"thue:{args.system}"))
    d, _, _ = read_derivation(Path(args.file))
    return _emit(args, True, print_rewrite_derivation(deep_to_rewrite(d, system)))


def cmd_model(args):
    expected = 1 if args.fixture else 2
    if len(args.items) != expected:
        raise UsageError("give a model file and a formula, or --fixture and a formula")
    if args.fixture:
        model = fixture_model()
    else:
        model = parse_model(Path(args.items[0]).read_text(encoding="utf-8"))
    f = parse_formula(args.items[-1])
    if args.action == "eval":
        result = eval_formula(model, _world(args.world), f)
        return _emit(args, result, "true" if result else "false")
    worlds = sorted(truth_set(model, f), key=str)
    return _emit(args, True, "{" + ", ".join(str(w) for w in worlds) + "}", worlds=worlds)


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    p = argparse.ArgumentParser(prog="posmodal", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", parents=[common], help="echo a normalized formula or sequent")
    s.add_argument("text")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("decide", parents=[common], help="semantic decision for K+, K4+, S4+")
    s.add_argument("--logic", required=True, choices=sorted(SEMANTIC_LOGICS))
    s.add_argument("sequent")
    s.set_defaults(func=cmd_decide)

    s = sub.add_parser("search", parents=[common], help="bounded forward derivation search")
    s.add_argument("--logic", required=True, help="builtin name, logic file, or thue:<system file>")
    s.add_argument("--size", type=int, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("sequent")
    s.set_defaults(func=cmd_search)

    for name, func, helptext in (
        ("check-seq", cmd_check_seq, "check a sequent proof file"),
        ("seq2deep", cmd_seq2deep, "translate a sequent proof to a derivation"),
    ):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("file")
        s.add_argument("--logic")
        s.set_defaults(func=func)

    for name, func, helptext in (
        ("check-deep", cmd_check_deep, "check a derivation file"),
        ("deep2seq", cmd_deep2seq, "translate a derivation to a sequent proof"),
    ):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("file")
        s.add_argument("--logic")
        s.set_defaults(func=func)

    s = sub.add_parser("normalize", parents=[common], help="remove TopI, then conjunction steps")
    s.add_argument("file")
    s.add_argument("--top-only", action="store_true", help="stop after removing TopI steps")
    s.set_defaults(func=cmd_normalize)

    thue = sub.add_parser("thue", help="semi-Thue systems").add_subparsers(dest="action", required=True)
    for name, helptext in (
        ("search", "bounded breadth-first reachability"),
        ("check", "check a rewrite derivation file"),
        ("to-logic", "print the logic of the system"),
        ("to-proof", "translate a rewrite derivation to a deep derivation"),
        ("from-proof", "normalize a deep derivation and read off a rewrite derivation"),
    ):
        s = thue.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--system", required=True)
        if name == "search":
            s.add_argument("--from", dest="start", required=True)
            s.add_argument("--to", dest="goal", required=True)
            s.add_argument("--max-len", type=int, required=True)
            s.add_argument("--max-steps", type=int, required=True)
        elif name != "to-logic":
            s.add_argument("file")
        s.set_defaults(func=cmd_thue, file=None)

    model = sub.add_parser("model", help="Kripke model evaluation").add_subparsers(dest="action", required=True)
    for name, helptext in (("eval", "truth of a formula at a world"),
                           ("truth-set", "worlds where a formula is true")):
        s = model.add_parser(name, parents=[common], help=helptext)
        s.add_argument("items", nargs="+", metavar="[MODEL_FILE] FORMULA")
        s.add_argument("--fixture", action="store_true", help="use the two-world counterexample model")
        if name == "eval":
            s.add_argument("--world", required=True)
        s.set_defaults(func=cmd_model)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    if extra:
        # Positionals given after options land here; only model subcommands take them.
        if args.command != "model" or any(x.startswith("-") for x in extra):
            parser.error(f"unrecognized arguments: {' '.join(extra)}")
        args.items += extra
    try:
        return args.func(args)
    except (UsageError, ParseError, ValueError, KeyError, OSError, InvalidProof,
            NormalizationError, RewriteError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        print(f"posmodal {args.command}: {msg}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
