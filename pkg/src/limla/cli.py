"""Command-line surface: check, run, bench, fuzz.

Exit codes are a stable contract: 0 accept/ok, 1 reject (or fuzz found
divergences), 2 usage/format/validation error, 3 step budget exceeded.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import bench as benchmod
from .difftest import DiffStats, compare_run, random_words, words_upto
from .fmt import FormatError, parse_machine, serialize_machine
from .linear import run_linear
from .model import COUNTED, DLimit, RANKED, validate_automaton
from .naive import run_naive
from .outcome import BudgetExceeded, write_trace
from .rng import SplitMix64
from .zoo import GenParams, random_automaton

EXIT_ACCEPT = 0
EXIT_REJECT = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

_EXHAUSTIVE_CAP = 10
_EXTRA_FUZZ_WORDS = 16


def _load(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fp:
            text = fp.read()
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return None
    try:
        return parse_machine(text)
    except FormatError as e:
        print(f"error: {path}: {e}", file=sys.stderr)
        return None


def _load_valid(path: str):
    aut = _load(path)
    if aut is None:
        return None
    report = validate_automaton(aut)
    if not report.ok:
        for v in report.violations:
            print(f"error: {path}: {v}", file=sys.stderr)
        return None
    return aut


def cmd_check(args) -> int:
    aut = _load(args.file)
    if aut is None:
        return EXIT_USAGE
    report = validate_automaton(aut)
    if report.ok:
        print("ok")
        return EXIT_ACCEPT
    for v in report.violations:
        print(str(v))
    return EXIT_USAGE


def _parse_word(args, aut) -> tuple | None:
    if args.input is not None and args.input_tokens is not None:
        print("error: give either --input or --input-tokens, not both", file=sys.stderr)
        return None
    if args.input_tokens is not None:
        toks = tuple(t for t in args.input_tokens.split(",") if t)
    elif args.input is not None:
        if "," in args.input:
            toks = tuple(t for t in args.input.split(",") if t)
        else:
            toks = tuple(args.input)
    else:
        toks = ()
    allowed = set(aut.input_alphabet)
    for t in toks:
        if t not in allowed:
            print(f"error: symbol {t!r} is not in the input alphabet", file=sys.stderr)
            return None
    return toks


def cmd_run(args) -> int:
    aut = _load_valid(args.file)
    if aut is None:
        return EXIT_USAGE
    word = _parse_word(args, aut)
    if word is None:
        return EXIT_USAGE
    runner = run_naive if args.engine == "naive" else run_linear
    kwargs = {"trace": bool(args.trace), "max_steps": args.max_steps}
    if args.engine == "linear":
        kwargs["shadow"] = args.shadow
    try:
        out = runner(aut, word, **kwargs)
    except BudgetExceeded as e:
        print(f"budget exceeded after {e.steps} steps", file=sys.stderr)
        return EXIT_BUDGET
    if args.trace:
        write_trace(aut, out, args.engine, args.trace)
    print(out.verdict)
    print(f"steps {out.steps}")
    return EXIT_ACCEPT if out.accepted else EXIT_REJECT


def cmd_bench(args) -> int:
    aut = _load_valid(args.file)
    if aut is None:
        return EXIT_USAGE
    gen = args.gen
    seed = 0
    if gen.startswith("random:"):
        try:
            seed = int(gen.split(":", 1)[1])
        except ValueError:
            print(f"error: bad generator {gen!r}", file=sys.stderr)
            return EXIT_USAGE
        gen = "random"
    if gen not in benchmod.GENERATORS:
        print(f"error: unknown generator {args.gen!r}", file=sys.stderr)
        return EXIT_USAGE
    try:
        lengths = [int(t) for t in args.lengths.split(",") if t]
    except ValueError:
        print(f"error: bad lengths {args.lengths!r}", file=sys.stderr)
        return EXIT_USAGE
    engines = ("naive", "linear") if args.engine == "both" else (args.engine,)
    machine_id = os.path.splitext(os.path.basename(args.file))[0]
    try:
        rows = benchmod.run_bench(aut, machine_id, engines, lengths, gen, seed)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    benchmod.write_csv(rows, args.out if args.out else sys.stdout)
    return EXIT_ACCEPT


def _dump_reproducer(outdir: str, aut, div) -> None:
    os.makedirs(outdir, exist_ok=True)
    with open(os.path.join(outdir, "machine.limla"), "w", encoding="utf-8") as fp:
        fp.write(serialize_machine(aut))
    with open(os.path.join(outdir, "word.txt"), "w", encoding="utf-8") as fp:
        fp.write(",".join(div.word) + "\n")
    if div.naive is not None and div.naive.trace is not None:
        write_trace(aut, div.naive, "naive", os.path.join(outdir, "naive.trace.jsonl"))
    if div.linear is not None and div.linear.trace is not None:
        write_trace(aut, div.linear, "linear", os.path.join(outdir, "linear.trace.jsonl"))
    with open(os.path.join(outdir, "diff.txt"), "w", encoding="utf-8") as fp:
        fp.write(f"kind: {div.kind}\n")
        fp.write(f"word: {','.join(div.word)}\n")
        fp.write(f"detail: {div.detail}\n")
        if div.naive is not None:
            fp.write(f"naive verdict: {div.naive.verdict} steps: {div.naive.steps}\n")
        if div.linear is not None:
            fp.write(f"linear verdict: {div.linear.verdict} steps: {div.linear.steps}\n")


def cmd_fuzz(args) -> int:
    if min(args.states, args.machines, args.alphabet_size) < 1 or args.d < 0 or args.maxlen < 0:
        print("error: fuzz parameters must be positive", file=sys.stderr)
        return EXIT_USAGE
    master = SplitMix64(args.seed)
    seeds = [master.next_u64() for _ in range(args.machines)]
    stats = DiffStats()
    divergences = 0
    for idx, mseed in enumerate(seeds):
        params = GenParams(
            state_count=args.states, seed=mseed,
            mode=RANKED if args.mode == "ranked" else COUNTED,
            dlimit=DLimit.const(args.d),
            input_alphabet_size=args.alphabet_size,
        )
        aut = random_automaton(params)
        cap = min(args.maxlen, _EXHAUSTIVE_CAP)
        words = list(words_upto(aut.input_alphabet, cap))
        words += random_words(aut.input_alphabet, _EXTRA_FUZZ_WORDS,
                              cap + 1, cap + 10, mseed)
        for word in words:
            div = compare_run(aut, word, shadow=True, stats=stats)
            if div is not None:
                divergences += 1
                outdir = os.path.join(args.out_dir, f"case_{idx:04d}")
                _dump_reproducer(outdir, aut, div)
                print(f"divergence: machine {idx} word {','.join(word) or '<empty>'} "
                      f"({div.kind}: {div.detail}) -> {outdir}")
                break
    extra = stats.bound_violations or stats.scan_violations or stats.edge_violations
    print(f"fuzz: {args.machines} machines, {stats.runs} runs, "
          f"{divergences} divergences"
          + ("" if not extra else ", instrumentation bounds violated"))
    return EXIT_ACCEPT if divergences == 0 and not extra else EXIT_REJECT


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="limla",
        description="Rewrite-limited automata: validate, run, benchmark and fuzz.",
    )
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("check", help="validate a machine file")
    c.add_argument("file")
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("run", help="run a machine on one word")
    r.add_argument("file")
    r.add_argument("--input", help="word, one character per symbol (or comma separated)")
    r.add_argument("--input-tokens", help="word as comma-separated tokens")
    r.add_argument("--engine", choices=("naive", "linear"), default="linear")
    r.add_argument("--trace", metavar="PATH", help="write a JSON-lines trace")
    r.add_argument("--shadow", action="store_true",
                   help="linear engine: verify every segment map against a brute-force walk")
    r.add_argument("--max-steps", type=int, default=None)
    r.set_defaults(func=cmd_run)

    b = sub.add_parser("bench", help="step-count scaling benchmark")
    b.add_argument("file")
    b.add_argument("--gen", default="anbn",
                   help="word generator: anbn | unary | random:SEED")
    b.add_argument("--lengths", default="64,128,256")
    b.add_argument("--engine", choices=("both", "naive", "linear"), default="both")
    b.add_argument("--out", metavar="CSV", default=None)
    b.set_defaults(func=cmd_bench)

    f = sub.add_parser("fuzz", help="differential fuzzing of the two engines")
    f.add_argument("--states", type=int, default=4)
    f.add_argument("--d", type=int, default=2)
    f.add_argument("--mode", choices=("ranked", "counted"), default="ranked")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--machines", type=int, default=200)
    f.add_argument("--maxlen", type=int, default=10)
    f.add_argument("--alphabet-size", type=int, default=2)
    f.add_argument("--out-dir", default="fuzz-failures")
    f.set_defaults(func=cmd_fuzz)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
