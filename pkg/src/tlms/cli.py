"""Command-line interface: ``tlms <command> --input FILE``.

Exit status is 0 for an affirmative or valid verdict, 1 for a negative or
obstructed one, and 2 for unusable input.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import ratmat
from .errors import ObstructionError, TlmsError
from .generate import DEFAULT_SEED, rank2_corpus
from .kaneyama import KaneyamaData, validate_kaneyama
from .multisection import (
    canonical_separation,
    check_separable,
    dual,
    is_indecomposable_dim2,
    product_c,
    union_c,
    validate,
)
from .rank2 import (
    brute_force_solver,
    check_slope_condition,
    construct_kaneyama_rank2,
    moduli_dim_bound,
    triangularity_sequence,
)
from .textformat import document_for, emit, parse
from .wallcross import WallFactor, WallFactorSet, build_semiflat_cocycle, compose_loop

COMMANDS = (
    "validate", "separable", "indecomposable", "slope-condition", "solve", "verify-kaneyama",
    "compose-loop", "bound", "union", "product", "dual", "separate", "generate",
)


class UsageError(Exception):
    pass


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    return parse(text)


def _need_ms(doc, path):
    if doc.ms is None:
        raise UsageError(f"{path}: missing [multisection] section")
    return doc.ms


def _seq(ms) -> str:
    return "[" + ", ".join(str(t) for t in triangularity_sequence(ms)) + "]"


def cmd_validate(docs, out, args):
    diags = validate(docs[0].ms)
    if not diags:
        print("valid", file=out)
        return 0
    for d in diags:
        print(d, file=out)
    return 1


def cmd_separable(docs, out, args):
    ms = docs[0].ms
    one, two = check_separable(ms, 1), check_separable(ms, 2)
    print(f"1-separable: {_yes(one)}", file=out)
    print(f"2-separable: {_yes(two)}", file=out)
    return 0 if one and two else 1


def cmd_indecomposable(docs, out, args):
    flag = is_indecomposable_dim2(docs[0].ms)
    print(f"indecomposable: {_yes(flag)}", file=out)
    return 0 if flag else 1


def cmd_slope_condition(docs, out, args):
    ms = docs[0].ms
    flag = check_slope_condition(ms)
    print(f"sequence: {_seq(ms)}", file=out)
    print(f"slope condition: {'satisfied' if flag else 'violated'}", file=out)
    return 0 if flag else 1


def _solve_one(ms, out):
    report = brute_force_solver(ms)
    flag = check_slope_condition(ms)
    print(f"sequence: {_seq(ms)}", file=out)
    print(f"slope condition: {'satisfied' if flag else 'violated'}", file=out)
    print(f"brute force: {'solvable' if report.solvable else 'unsolvable'}", file=out)
    if flag:
        g = construct_kaneyama_rank2(ms)
        k = ms.fan.k
        print("kaneyama (normalized labels):", file=out)
        for i in range(k):
            j = (i + 1) % k
            print(f"g {i} {j} = {ratmat.fmt(g[(i, j)])}", file=out)
    if report.solvable:
        sol = " ".join(ratmat.fmt_rat(x) for x in report.solution) if report.solution else "none on grid"
        print(f"grid solution: {sol}", file=out)
        print(f"free parameters: {report.free_parameter_count}", file=out)
    else:
        print(f"defect: {ratmat.fmt(report.defect)}", file=out)
    if flag != report.solvable:
        print("checker and brute force disagree", file=out)
        return 1
    return 0 if flag else 1


def cmd_solve(docs, out, args):
    return _solve_one(docs[0].ms, out)


def cmd_verify_kaneyama(docs, out, args):
    doc = docs[0]
    if doc.kaneyama is None:
        raise UsageError("missing [kaneyama] section")
    g = KaneyamaData.complete(doc.ms, doc.kaneyama)
    diags = validate_kaneyama(doc.ms, g)
    if not diags:
        print("valid", file=out)
        return 0
    for d in diags:
        print(d, file=out)
    return 1


def cmd_compose_loop(docs, out, args):
    doc = docs[0]
    if doc.walls is None:
        raise UsageError("missing [walls] section")
    ls, _ = build_semiflat_cocycle(doc.ms)
    ws = WallFactorSet(tuple(WallFactor(j, w, n) for j, w, n in doc.walls))
    loop = compose_loop(doc.ms, ls, ws)
    ok = ratmat.is_identity(loop)
    print(f"loop = {ratmat.fmt(loop)}", file=out)
    print(f"consistent: {_yes(ok)}", file=out)
    return 0 if ok else 1


def cmd_bound(docs, out, args):
    general, rank2 = moduli_dim_bound(docs[0].ms)
    print(f"general: {general}, rank2: {'n/a' if rank2 is None else rank2}", file=out)
    return 0


def _emit(ms, out):
    out.write(emit(document_for(ms)))
    return 0


def cmd_union(docs, out, args):
    if len(docs) != 2:
        raise UsageError("union needs two --input files")
    return _emit(union_c(docs[0].ms, docs[1].ms), out)


def cmd_product(docs, out, args):
    if len(docs) != 2:
        raise UsageError("product needs two --input files")
    return _emit(product_c(docs[0].ms, docs[1].ms), out)


def cmd_dual(docs, out, args):
    return _emit(dual(docs[0].ms), out)


def cmd_separate(docs, out, args):
    return _emit(canonical_separation(docs[0].ms)[0], out)


HANDLERS = {
    "validate": cmd_validate,
    "separable": cmd_separable,
    "indecomposable": cmd_indecomposable,
    "slope-condition": cmd_slope_condition,
    "solve": cmd_solve,
    "verify-kaneyama": cmd_verify_kaneyama,
    "compose-loop": cmd_compose_loop,
    "bound": cmd_bound,
    "union": cmd_union,
    "product": cmd_product,
    "dual": cmd_dual,
    "separate": cmd_separate,
}


def cmd_generate(args, out):
    if not args.corpus:
        raise UsageError("generate needs --corpus DIR")
    target = Path(args.corpus)
    target.mkdir(parents=True, exist_ok=True)
    for n, ms in enumerate(rank2_corpus(seed=args.seed, count=args.count)):
        name = target / f"rank2_{args.seed}_{n:04d}.tlms"
        name.write_text(emit(document_for(ms)), encoding="utf-8")
    print(f"wrote {args.count} instances to {target}", file=out)
    return 0


def run_corpus(command, directory, out):
    """Run a verdict command over every ``*.tlms`` file in a directory, in name order."""
    files = sorted(Path(directory).glob("*.tlms"))
    if not files:
        raise UsageError(f"no .tlms files in {directory}")
    worst = 0
    for f in files:
        doc = _load(str(f))
        _need_ms(doc, f)
        buf = _Sink()
        code = HANDLERS[command]([doc], buf, None)
        print(f"{f.name}: {'ok' if code == 0 else 'negative'}", file=out)
        worst = max(worst, code)
    return worst


class _Sink:
    def write(self, _):
        pass

    def flush(self):
        pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tlms", description="Tropical Lagrangian multi-sections and Kaneyama data.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", action="append", default=[], metavar="FILE", help="input document (repeatable)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for generate")
    p.add_argument("--count", type=int, default=500, help="number of instances for generate")
    p.add_argument("--corpus", metavar="DIR", help="corpus directory (generate writes, other commands read)")
    p.add_argument("--format", choices=["text"], default="text")
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        if args.command == "generate":
            return cmd_generate(args, out)
        if args.corpus and not args.input:
            return run_corpus(args.command, args.corpus, out)
        if not args.input:
            raise UsageError("--input FILE is required")
        docs = [_load(p) for p in args.input]
        for d, path in zip(docs, args.input):
            _need_ms(d, path)
        return HANDLERS[args.command](docs, out, args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ObstructionError as e:
        print(f"obstructed: {e}", file=out)
        return 1
    except TlmsError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
