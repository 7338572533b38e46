"""Command-line front end: ``sentsimp simplify | validate-rules | bench``.

Exit codes: 0 success, 1 fatal (bad rules, unreadable input), 2 when any
sentence produced an error record.
"""
from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

from .bench import DEFAULT_SIZES, format_report, run_bench
from .dsl import DslSemanticError, DslSyntaxError, check_rules, default_ruleset, load_ruleset_file
from .simplifier import EngineOptions, simplify_batch
from .tree import MalformedTree, detokenize, read_trees, serialize, yield_tokens

EXIT_OK, EXIT_FATAL, EXIT_ERRORS = 0, 1, 2


class _Fatal(Exception):
    pass


def _fail(message: str) -> int:
    print(f"sentsimp: {message}", file=sys.stderr)
    return EXIT_FATAL


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _int_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}") from None
    if len(values) < 2 or min(values) < 2:
        raise argparse.ArgumentTypeError("need at least two sizes, each >= 2")
    return values


def _record(idx: int, out) -> dict:
    return {
        "id": idx,
        "sentence": out.sentence,
        "tree": serialize(out.tree),
        "provenance": [{"rule": rule, "path": list(path)} for rule, path in out.provenance],
        "tokenCount": out.token_count,
        "isBase": out.is_base,
    }


def _collapse(outputs: list) -> list:
    seen, kept = set(), []
    for out in outputs:
        if out.sentence not in seen:
            seen.add(out.sentence)
            kept.append(out)
    return kept


class _Writer:
    def __init__(self, fmt: str, stream):
        self.fmt = fmt
        self.stream = stream
        self.blocks = 0

    def item(self, idx: int, tree, outputs: list, echo: bool):
        w = self.stream.write
        if self.fmt == "jsonl":
            if echo:
                w(json.dumps({"id": idx, "input": serialize(tree),
                              "sentence": detokenize(yield_tokens(tree))}) + "\n")
            for out in outputs:
                w(json.dumps(_record(idx, out)) + "\n")
            return
        if self.blocks:
            w("\n")
        self.blocks += 1
        if echo:
            w("> " + (serialize(tree) if self.fmt == "trees" else detokenize(yield_tokens(tree))) + "\n")
        for out in outputs:
            w((serialize(out.tree) if self.fmt == "trees" else out.sentence) + "\n")

    def error(self, idx: int, message: str, kind: str):
        if self.fmt == "jsonl":
            self.stream.write(json.dumps({"id": idx, "error": message, "kind": kind}) + "\n")
        print(f"sentsimp: sentence {idx}: {kind}: {message}", file=sys.stderr)


def _load_rules(path: str):
    try:
        return load_ruleset_file(path)
    except FileNotFoundError:
        raise _Fatal(f"rules file not found: {path}") from None
    except (DslSyntaxError, DslSemanticError, OSError) as exc:
        raise _Fatal(f"cannot load {path}: {exc}") from None


def cmd_simplify(args) -> int:
    rules = _load_rules(args.rules)
    opts = EngineOptions(
        np_replace=args.np_replace,
        emit_original=not args.no_base,
        rule_tag_filter=frozenset(args.tags.split(",")) if args.tags else None,
        max_generated=args.max_generated,
        max_steps=args.max_steps,
    )
    try:
        if args.input and args.input != "-":
            with open(args.input, encoding="utf-8") as fh:
                items = list(read_trees(fh, args.input_format))
        else:
            items = list(read_trees(sys.stdin, args.input_format))
    except (OSError, UnicodeDecodeError) as exc:
        return _fail(f"cannot read input: {exc}")

    writer = _Writer(args.format, sys.stdout)
    per_sentence, fired, times = [], Counter(), []
    tokens_in, had_errors = 0, False
    for idx, (item, result) in enumerate(zip(items, simplify_batch(items, rules, opts, jobs=args.jobs))):
        tree = None if isinstance(item, MalformedTree) else item
        outputs = _collapse(result.outputs) if args.collapse_duplicates else result.outputs
        if tree is not None:
            tokens_in += tree.n_tokens
            writer.item(idx, tree, outputs, args.echo_input)
        if result.error is not None:
            had_errors = True
            writer.error(idx, result.error, result.error_kind)
        per_sentence.append(len(outputs))
        fired.update(result.fire_counts)
        times.append(result.elapsed)
    sys.stdout.flush()

    if args.stats:
        stats = {
            "sentencesIn": len(items),
            "outputsTotal": sum(per_sentence),
            "outputsPerSentence": {str(k): v for k, v in sorted(Counter(per_sentence).items())},
            "ruleFireCounts": dict(sorted(fired.items())),
            "tokensIn": tokens_in,
            "rulesLoaded": len(rules),
            "wallTimePerSentence": times,
        }
        try:
            Path(args.stats).write_text(json.dumps(stats, indent=2) + "\n", encoding="utf-8")
        except OSError as exc:
            return _fail(f"cannot write stats: {exc}")
    return EXIT_ERRORS if had_errors else EXIT_OK


def cmd_validate_rules(args) -> int:
    try:
        text = Path(args.rules).read_text(encoding="utf-8")
    except OSError as exc:
        return _fail(f"cannot read {args.rules}: {exc}")
    try:
        reports = check_rules(text)
    except DslSyntaxError as exc:
        return _fail(str(exc))
    if not reports:
        return _fail(f"{args.rules}: no rules")
    for rep in reports:
        status = "OK" if rep.ok else "FAIL"
        tags = ",".join(sorted(rep.tags)) or "-"
        print(f"{status:4} {rep.name}  mode={rep.mode}  tags={tags}  shrinking={rep.shrinking}")
        for problem in rep.problems:
            print(f"     {problem}")
    n_ok = sum(r.ok for r in reports)
    print(f"{n_ok}/{len(reports)} rules OK")
    return EXIT_OK if n_ok == len(reports) else EXIT_FATAL


def cmd_bench(args) -> int:
    rules = _load_rules(args.rules) if args.rules else default_ruleset()
    report = run_bench(rules, sizes=args.sizes, seed=args.seed, repeats=args.repeats)
    print(format_report(report))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sentsimp", description="Syntactic sentence simplification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simplify", help="simplify parse trees")
    p.add_argument("input", nargs="?", help="tree file (default: standard input)")
    p.add_argument("--rules", required=True)
    p.add_argument("--format", choices=("sentences", "trees", "jsonl"), default="jsonl")
    p.add_argument("--np-replace", action="store_true", help="reduce base NPs to determinative + head")
    p.add_argument("--echo-input", action="store_true", help="also print each raw input")
    p.add_argument("--no-base", action="store_true", help="omit the base sentence(s)")
    p.add_argument("--tags", help="only run rules with one of these comma-separated tags")
    p.add_argument("--max-generated", type=_positive, default=512)
    p.add_argument("--max-steps", type=_positive, default=10000)
    p.add_argument("--stats", metavar="PATH", help="write run statistics as JSON")
    p.add_argument("--collapse-duplicates", action="store_true",
                   help="drop outputs whose sentence text repeats an earlier one")
    p.add_argument("--input-format", choices=("auto", "lines", "blocks"), default="auto")
    p.add_argument("--jobs", type=_positive, default=1)
    p.set_defaults(func=cmd_simplify)

    p = sub.add_parser("validate-rules", help="check a rules file")
    p.add_argument("rules")
    p.set_defaults(func=cmd_validate_rules)

    p = sub.add_parser("bench", help="time the engine on synthetic trees")
    p.add_argument("--sizes", type=_int_list, default=list(DEFAULT_SIZES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=_positive, default=5)
    p.add_argument("--rules", help="rules file (default: shipped set)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Fatal as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
