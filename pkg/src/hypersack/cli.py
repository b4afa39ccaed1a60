"""``hypersack`` command line.

Exit codes: 0 yes / success, 1 no / disagreement, 2 error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .automata.nfa import NotAcyclic, acyclic_membership, grid_nfa, load_nfa
from .automata.parikh import parikh_from_json, parikh_image, runs_in_box
from .corpus import read_corpus, random_instances, shipped_corpus_dir, write_corpus
from .groups import DirectProductZ, GroupSpec, parse_group
from .knapsack.expression import parse_expression
from .knapsack.solver import BoundRequired, decide, solve, solve_system, solver_for, supports_solve
from .oracle import brute_solve, verify
from .semilinear import enumerate_box, format_vector, to_text

YES, NO, ERROR = 0, 1, 2
DEFAULT_SEED = 20261016


@dataclass
class RunReport:
    answer: bool | str
    witness: dict | None = None
    magnitude: int | None = None
    timings: dict = field(default_factory=dict)
    cases: dict = field(default_factory=dict)
    recursion_depth: int = 0

    def __post_init__(self):
        if self.witness is not None and self.answer is False:
            raise ValueError("a negative answer carries no witness")

    def lines(self) -> list[str]:
        out = [f"answer: {'yes' if self.answer is True else 'no' if self.answer is False else self.answer}"]
        if self.witness is not None:
            out.append("witness: " + (", ".join(f"{k}={v}" for k, v in sorted(self.witness.items())) or "(none)"))
        if self.magnitude is not None:
            out.append(f"magnitude: {self.magnitude}")
        if self.timings:
            out.append("timings: " + ", ".join(f"{k}={v:.3f}s" for k, v in self.timings.items()))
        if self.cases:
            out.append("cases: " + ", ".join(f"{k}:{v}" for k, v in sorted(self.cases.items())))
        if self.recursion_depth:
            out.append(f"recursion depth: {self.recursion_depth}")
        return out


def load_group(text: str) -> GroupSpec:
    """Tables given by relative path are looked up in the working directory, then in the shipped data."""
    try:
        return parse_group(text, Path.cwd())
    except FileNotFoundError:
        return parse_group(text, shipped_corpus_dir())


def _stats_source(spec: GroupSpec):
    while isinstance(spec, DirectProductZ):
        spec = spec.inner
    return solver_for(spec) if spec.hyperbolic else None


def _report_stats(spec: GroupSpec, report: RunReport):
    s = _stats_source(spec)
    if s is None:
        return
    report.cases = dict(s.stats.cases)
    report.recursion_depth = s.stats.max_recursion
    report.timings.update(s.stats.timings)


# -- commands ---------------------------------------------------------------------

def cmd_decide(args) -> int:
    spec = load_group(args.group)
    E = parse_expression(args.expression, spec)
    t0 = time.perf_counter()
    d = decide(spec, E, route=args.route, bound=args.bound)
    rep = RunReport(d.answer, d.witness, d.magnitude)
    _report_stats(spec, rep)
    rep.timings["total"] = time.perf_counter() - t0
    print(f"route: {d.route}" + (f" (bound {d.bound})" if d.bound is not None else ""))
    print("\n".join(rep.lines()))
    return YES if d.answer else NO


def cmd_solve(args) -> int:
    spec = load_group(args.group)
    E = parse_expression(args.expression, spec)
    t0 = time.perf_counter()
    S = solve(spec, E)
    rep = RunReport(str(args.output) if args.output else "semilinear set", S.smallest_offset(), S.magnitude)
    _report_stats(spec, rep)
    rep.timings["total"] = time.perf_counter() - t0
    if rep.witness is not None and not verify(spec, E, rep.witness):
        raise AssertionError(f"solver produced a non-solution {rep.witness}")
    text = to_text(S)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    print("\n".join("# " + ln for ln in rep.lines()))
    if args.box is not None:
        pts = sorted(enumerate_box(S, args.box))
        print(f"# {len(pts)} points in box {args.box}")
        for v in pts:
            print(format_vector(S.variables, v))
    return YES if not S.is_empty() else NO


def cmd_system(args) -> int:
    spec = load_group(args.group)
    exprs = [parse_expression(t, spec, allow_repeats=True) for t in args.expressions]
    ok, wit = solve_system(spec, exprs)
    if ok and not all(verify(spec, E, wit) for E in exprs):
        raise AssertionError(f"system witness {wit} fails substitution")
    print("\n".join(RunReport(ok, wit).lines()))
    return YES if ok else NO


def cmd_oracle(args) -> int:
    spec = load_group(args.group)
    E = parse_expression(args.expression, spec)
    sols = brute_solve(spec, E, args.box)
    names = sorted(sols[0]) if sols else []
    print(f"# {len(sols)} solutions in box {args.box}")
    for nu in sols:
        print(",".join(f"{x}={nu[x]}" for x in names) or "(empty valuation)")
    return YES if sols else NO


def cmd_nfa_member(args) -> int:
    spec = load_group(args.group)
    A = load_nfa(args.nfa, spec)
    t0 = time.perf_counter()
    res = acyclic_membership(spec, A)
    dt = time.perf_counter() - t0
    print(f"answer: {'yes' if res.accepted else 'no'}")
    if res.accepted:
        print("witness word: " + (spec.format_word(res.witness) or "(empty)"))
    print(f"states: {len(A.states)}, time: {dt:.3f}s")
    return YES if res.accepted else NO


def cmd_parikh(args) -> int:
    A = parikh_from_json(Path(args.nfa).read_text())
    names = tuple(args.variables.split(",")) if args.variables else tuple(f"x{i + 1}" for i in range(A.dim))
    S = parikh_image(A, names)
    sys.stdout.write(to_text(S))
    print(f"# magnitude {S.magnitude}")
    if args.box is not None:
        pts = sorted(enumerate_box(S, args.box))
        print(f"# {len(pts)} points in box {args.box}")
        if args.check:
            # runs_in_box uses the automaton's coordinate order; the set uses sorted names
            order = [names.index(x) for x in S.variables]
            truth = {tuple(v[i] for i in order) for v in runs_in_box(A, args.box)}
            print(f"# path search agrees: {truth == set(pts)}")
            if truth != set(pts):
                return NO
        for v in pts:
            print(format_vector(S.variables, v))
    return YES


# -- bench --------------------------------------------------------------------------

def _bench_one(item) -> dict:
    inst, box = item
    row = {"name": inst.name, "group": inst.group_text, "expr": inst.expr_text}
    try:
        spec = inst.group()
        E = inst.expression(spec)
        row["depth"], row["size"] = E.depth, E.size
        truth = brute_solve(spec, E, box)
        row["oracle"] = len(truth)
        if supports_solve(spec):
            t0 = time.perf_counter()
            S = solve(spec, E)
            row["t_solve"] = time.perf_counter() - t0
            row["magnitude"] = S.magnitude
            names = S.variables
            row["agree"] = enumerate_box(S, box) == {tuple(nu[x] for x in names) for nu in truth}
            da = decide(spec, E, route="a")
            t0 = time.perf_counter()
            db = decide(spec, E, route="b", bound=S.magnitude + 1)
            row["t_grid"] = time.perf_counter() - t0
            row["routes"] = da.answer == db.answer
            wits = [w for w in (da.witness, db.witness) if w is not None]
            row["witness_ok"] = all(verify(spec, E, w) for w in wits)
        else:
            t0 = time.perf_counter()
            db = decide(spec, E, route="b", bound=box)
            row["t_grid"] = time.perf_counter() - t0
            row["agree"] = db.answer == bool(truth)
            row["routes"] = True
            row["witness_ok"] = db.witness is None or verify(spec, E, db.witness)
    except Exception as exc:  # reported as a failing row
        row["error"] = f"{type(exc).__name__}: {exc}"
    row["ok"] = "error" not in row and row["agree"] and row["routes"] and row["witness_ok"]
    return row


def membership_benchmark(states: int = 1000) -> tuple[int, float, bool]:
    """Grid automaton over F2 with about ``states`` states; returns (states, seconds, answer)."""
    spec = parse_group("F2")
    E = parse_expression("a^x b^y [a^-1]^z [b^-1]^w", spec)
    p = max(1, states // (E.depth + 1) - 1)
    A = grid_nfa(E, p)
    t0 = time.perf_counter()
    res = acyclic_membership(spec, A)
    return len(A.states), time.perf_counter() - t0, res.accepted


def cmd_bench(args) -> int:
    if args.generate is not None:
        out = Path(args.corpus)
        write_corpus(out, random_instances(args.seed, args.generate))
        print(f"wrote {args.generate} instances to {out} (seed {args.seed})")
        return YES
    corpus = read_corpus(args.corpus or shipped_corpus_dir())
    items = [(inst, args.box) for inst in corpus]
    t0 = time.perf_counter()
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_bench_one, items))
    else:
        rows = [_bench_one(it) for it in items]
    total = time.perf_counter() - t0
    hdr = f"{'instance':<16} {'d':>1} {'|E|':>3} {'oracle':>6} {'mag':>5} {'solve_s':>8} {'grid_s':>7} {'agree':>5} {'routes':>6}"
    print(hdr)
    for r in rows:
        if "error" in r:
            print(f"{r['name']:<16} ERROR {r['error']}")
            continue
        mag = r.get("magnitude", "-")
        ts = f"{r['t_solve']:.3f}" if "t_solve" in r else "-"
        print(f"{r['name']:<16} {r['depth']:>1} {r['size']:>3} {r['oracle']:>6} {mag!s:>5} {ts:>8} "
              f"{r['t_grid']:>7.3f} {r['agree']!s:>5} {r['routes']!s:>6}")
    n, dt, ans = membership_benchmark(args.membership_states)
    print(f"membership benchmark: {n} states, {dt:.3f}s, answer {'yes' if ans else 'no'}")
    bad = [r["name"] for r in rows if not r["ok"]]
    print(f"{len(rows) - len(bad)}/{len(rows)} instances agree with the oracle; corpus time {total:.1f}s")
    if args.json:
        Path(args.json).write_text(json.dumps({"rows": rows, "membership": [n, dt, ans], "total": total}, indent=1))
    return YES if not bad else NO


# -- entry point ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hypersack", description="Knapsack equations over hyperbolic groups.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="is the equation solvable?")
    p.add_argument("group")
    p.add_argument("expression")
    p.add_argument("--route", choices=["a", "b", "auto"], default="auto",
                   help="a: semilinear solve, b: bounded grid automaton")
    p.add_argument("--bound", type=int, help="exponent bound for route b")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("solve", help="semilinear solution set")
    p.add_argument("group")
    p.add_argument("expression")
    p.add_argument("-o", "--output", type=Path, help="write the set here instead of stdout")
    p.add_argument("--box", type=int, help="also list the solutions with all exponents <= BOX")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("system", help="common solution of several equations (variables may repeat)")
    p.add_argument("group")
    p.add_argument("expressions", nargs="+")
    p.set_defaults(func=cmd_system)

    p = sub.add_parser("oracle", help="exhaustive search in a box")
    p.add_argument("group")
    p.add_argument("expression")
    p.add_argument("--box", type=int, default=8)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("nfa-member", help="does an acyclic automaton accept a word equal to 1?")
    p.add_argument("group")
    p.add_argument("nfa", type=Path)
    p.set_defaults(func=cmd_nfa_member)

    p = sub.add_parser("parikh", help="semilinear image of a counting automaton")
    p.add_argument("nfa", type=Path)
    p.add_argument("--variables", help="comma-separated names, one per coordinate")
    p.add_argument("--box", type=int)
    p.add_argument("--check", action="store_true", help="compare the box with an exhaustive run search")
    p.set_defaults(func=cmd_parikh)

    p = sub.add_parser("bench", help="run a corpus against the oracle")
    p.add_argument("corpus", nargs="?", help="corpus file or directory (default: shipped corpus)")
    p.add_argument("--box", type=int, default=8)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--generate", type=int, metavar="N", help="write N seeded random instances to CORPUS and exit")
    p.add_argument("--membership-states", type=int, default=1000)
    p.add_argument("--json", help="also dump the rows as JSON")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "bench" and args.generate is not None and not args.corpus:
        print("error: --generate needs a CORPUS path", file=sys.stderr)
        return ERROR
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, BoundRequired, NotAcyclic, RuntimeError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
