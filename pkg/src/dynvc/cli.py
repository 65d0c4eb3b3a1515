"""Command-line driver: ``python -m dynvc run | check | gen | bench``.

Stats are JSON lines, one object per line, with a ``"record"`` field of
``"update"``, ``"summary"``, ``"check"``, ``"audit"`` or ``"bench"``.

Exit codes::

    0  ok
    2  trace could not be parsed
    3  trace could not be replayed (duplicate insert, missing delete)
    4  an oracle invariant failed
    5  an accounting (lemma) check failed
    6  the per-update move budget was exhausted
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
import time

from .accounting import Auditor, audit_conservation, check_two_hop_rate_drop
from .engine import DynamicGraph, GraphError, MoveBudgetExceeded
from .numerics import parse_eps
from .oracle import verify_all
from .tracegen import (TraceParseError, ReplayError, gen_random, gen_sliding_window,
                       gen_star_churn, read_trace, serialize_trace)

EXIT_OK, EXIT_PARSE, EXIT_REPLAY, EXIT_INVARIANT, EXIT_ACCOUNTING, EXIT_BUDGET = 0, 2, 3, 4, 5, 6


@contextlib.contextmanager
def _open_out(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _emit(out, record: dict) -> None:
    out.write(json.dumps(record, sort_keys=True) + "\n")


def _load(args):
    """Read the trace, or return an exit code on a parse/replay error."""
    try:
        trace = read_trace(args.trace, strict=args.strict)
    except ReplayError as exc:
        print(f"replay error: {exc}", file=sys.stderr)
        return None, EXIT_REPLAY
    except TraceParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return None, EXIT_PARSE
    except OSError as exc:
        print(f"cannot read trace: {exc}", file=sys.stderr)
        return None, EXIT_PARSE
    if args.eps is not None:
        trace.eps = parse_eps(args.eps)
    return trace, None


def _check_schedule(spec: str):
    """Map ``off|final|every|K`` to a predicate on the 1-based update index."""
    if spec == "off":
        return lambda i, last: False
    if spec == "final":
        return lambda i, last: last
    if spec == "every":
        return lambda i, last: True
    k = int(spec)
    if k < 1:
        raise argparse.ArgumentTypeError("--check K needs K >= 1")
    return lambda i, last: last or i % k == 0


class RunCounters:
    def __init__(self):
        self.work = 0
        self.touches = 0
        self.up = 0
        self.down = 0

    def add(self, report) -> None:
        self.work += report.work
        self.touches += report.touches
        self.up += report.up_moves
        self.down += report.down_moves


def _stats_record(kind, index, ev, counters, graph, elapsed_ns, timing, extra=None) -> dict:
    rec = {
        "record": kind,
        "update": index,
        "work": counters.work,
        "up_moves": counters.up,
        "down_moves": counters.down,
        "touches": counters.touches,
        "cover": graph.cover_size(),
        "matching": float(graph.matching_size()),
    }
    if ev is not None:
        rec.update(op=ev.op, u=ev.u, v=ev.v)
    if timing:
        rec["wall_ns"] = elapsed_ns
    if extra:
        rec.update(extra)
    return rec


def _replay_loop(args, trace, graph, out, *, check_at, auditor=None):
    """Shared replay loop for ``run`` and ``check``; returns an exit code."""
    counters = RunCounters()
    status = EXIT_OK
    timing = not args.no_timing
    tau = len(trace.events)
    done = 0
    start = time.perf_counter_ns()
    for i, ev in enumerate(trace.events, start=1):
        try:
            report = graph.insert_edge(ev.u, ev.v) if ev.is_insert else graph.delete_edge(ev.u, ev.v)
        except MoveBudgetExceeded as exc:
            print(f"update {i}: {exc}", file=sys.stderr)
            return EXIT_BUDGET
        except GraphError as exc:
            print(f"replay error at update {i} ({ev}): {exc}", file=sys.stderr)
            return EXIT_REPLAY
        except (AssertionError, KeyError, AttributeError) as exc:
            # only reachable when cached state is already inconsistent
            print(f"engine state corrupted at update {i} ({ev}): {exc!r}", file=sys.stderr)
            return EXIT_INVARIANT
        counters.add(report)
        done = i
        if check_at(i, i == tau):
            rep = verify_all(graph)
            if not rep.ok:
                for c in rep.failures():
                    _emit(out, {"record": "check", "update": i, "check": c.name,
                                "ok": False, "witness": c.witness})
                print(f"update {i}: {rep}", file=sys.stderr)
                status = EXIT_INVARIANT
                break
        if auditor is not None and auditor.failures and status == EXIT_OK:
            status = EXIT_ACCOUNTING
        if not args.summary_only:
            extra = None
            if auditor is not None:
                extra = {"absorbed_energy": str(auditor.absorbed_energy),
                         "released_energy": str(auditor.released_energy)}
            _emit(out, _stats_record("update", i, ev, counters, graph,
                                     time.perf_counter_ns() - start, timing, extra))
    if tau == 0 and check_at(0, True):
        rep = verify_all(graph)
        if not rep.ok:
            status = EXIT_INVARIANT
    extra = {"updates": tau, "status": status}
    if auditor is not None:
        extra.update(absorbed_energy=str(auditor.absorbed_energy),
                     released_energy=str(auditor.released_energy))
    _emit(out, _stats_record("summary", done, None, counters, graph,
                             time.perf_counter_ns() - start, timing, extra))
    return status


def _make_graph(args, trace, exact):
    graph = DynamicGraph(trace.n, trace.eps, exact=exact, order=args.order,
                         budget=args.budget, recompute_every=args.recompute_every)
    graph._fault = getattr(args, "fault", None)
    return graph


def cmd_run(args) -> int:
    trace, err = _load(args)
    if err is not None:
        return err
    try:
        check_at = _check_schedule(args.check)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        print(f"bad --check value: {exc}", file=sys.stderr)
        return EXIT_PARSE
    graph = _make_graph(args, trace, exact=args.mode == "exact")
    with _open_out(args.stats) as out:
        return _replay_loop(args, trace, graph, out, check_at=check_at)


def cmd_check(args) -> int:
    """Exact replay with the accounting ledger attached and every oracle check per update."""
    trace, err = _load(args)
    if err is not None:
        return err
    graph = _make_graph(args, trace, exact=True)
    auditor = Auditor(graph)
    with _open_out(args.stats) as out:
        status = _replay_loop(args, trace, graph, out, check_at=lambda i, last: True,
                              auditor=auditor)
        for event, outcome in auditor.failures[:20]:
            _emit(out, {"record": "audit", "check": outcome.name, "ok": False,
                        "event": event.kind, "nodes": list(event.nodes),
                        "level": event.level,
                        "detail": json.loads(json.dumps(outcome.detail, default=str))})
        if status in (EXIT_OK, EXIT_ACCOUNTING, EXIT_INVARIANT):
            cons = audit_conservation(graph, auditor)
            rate_bad = check_two_hop_rate_drop(graph.eps, graph.L)
            _emit(out, {"record": "audit", **cons.as_record(),
                        "events": auditor.events, "checks_run": auditor.checks_run,
                        "failures": len(auditor.failures), "rate_drop_ok": not rate_bad})
            if (not cons.balanced or not cons.work_covered or rate_bad) and status == EXIT_OK:
                status = EXIT_ACCOUNTING
    return status


def cmd_gen(args) -> int:
    eps = args.eps or "1/10"
    if args.model == "random":
        trace = gen_random(args.n, args.tau, args.p_delete, args.seed, eps=eps)
    elif args.model == "window":
        trace = gen_sliding_window(args.n, args.tau, args.window, args.seed, eps=eps)
    else:
        trace = gen_star_churn(args.n, args.rounds, eps=eps)
    text = serialize_trace(trace)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return EXIT_OK


def bench_cell(n: int, eps, tau: int, p_delete: float, seed: int, order: str = "fifo") -> dict:
    """One benchmark cell: float mode, checks off."""
    eps = parse_eps(eps)
    trace = gen_random(n, tau, p_delete, seed, eps=eps)
    graph = DynamicGraph(n, eps, exact=False, order=order)
    counters = RunCounters()
    start = time.perf_counter_ns()
    for ev in trace.events:
        report = graph.insert_edge(ev.u, ev.v) if ev.is_insert else graph.delete_edge(ev.u, ev.v)
        counters.add(report)
    elapsed = time.perf_counter_ns() - start
    per = (lambda x: x / tau) if tau else (lambda x: 0.0)
    return {
        "record": "bench", "n": n, "eps": f"{eps.numerator}/{eps.denominator}", "tau": tau,
        "seed": seed, "p_delete": p_delete,
        "work": counters.work, "touches": counters.touches,
        "work_per_update": per(counters.work),
        "touches_per_update": per(counters.touches),
        "work_eps2_per_update": per(counters.work) * float(eps) ** 2,
        "ns_per_update": per(elapsed),
    }


def cmd_bench(args) -> int:
    ns = [int(x) for x in args.n.split(",")]
    epss = [parse_eps(x) for x in (args.eps or "1/5").split(",")]
    rows = []
    with _open_out(args.stats) as out:
        for n in ns:
            for eps in epss:
                tau = args.tau if args.tau is not None else args.tau_factor * n
                row = bench_cell(n, eps, tau, args.p_delete, args.seed, args.order)
                if args.no_timing:
                    del row["ns_per_update"]
                rows.append(row)
                _emit(out, row)
    if args.stats not in (None, "-"):
        print(f"{'n':>8} {'eps':>6} {'tau':>9} {'work/tau':>9} {'touch/tau':>10} "
              f"{'eps^2*work/tau':>15}")
        for r in rows:
            print(f"{r['n']:>8} {r['eps']:>6} {r['tau']:>9} {r['work_per_update']:>9.3f} "
                  f"{r['touches_per_update']:>10.3f} {r['work_eps2_per_update']:>15.4f}")
    return EXIT_OK


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dynvc", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def replay_options(p, with_mode: bool):
        p.add_argument("--trace", required=True, help="trace file (dvc-trace v1)")
        p.add_argument("--eps", help="override the trace's eps (p/q or decimal)")
        if with_mode:
            p.add_argument("--mode", choices=["float", "exact"], default="float")
            p.add_argument("--check", default="off",
                           help="oracle checks: off, final, every, or K (every K updates)")
        p.add_argument("--stats", help="JSON-lines output file (default: stdout)")
        p.add_argument("--seed", type=int, default=0, help="unused by replay; recorded for symmetry")
        p.add_argument("--recompute-every", type=_positive, default=None,
                       help="recompute all weights from levels every K updates")
        p.add_argument("--budget", type=_positive, default=None,
                       help="maximum moves per update before giving up (exit 6)")
        p.add_argument("--order", choices=["fifo", "lifo"], default="fifo")
        p.add_argument("--strict", action="store_true",
                       help="validate replayability while parsing")
        p.add_argument("--summary-only", action="store_true", help="emit only the summary record")
        p.add_argument("--no-timing", action="store_true", help="omit wall-clock fields")
        p.add_argument("--fault", help=argparse.SUPPRESS)

    p_run = sub.add_parser("run", help="replay a trace and emit stats")
    replay_options(p_run, with_mode=True)
    p_run.set_defaults(func=cmd_run)

    p_check = sub.add_parser("check", help="exact replay with every oracle and lemma check")
    replay_options(p_check, with_mode=False)
    p_check.set_defaults(func=cmd_check)

    p_gen = sub.add_parser("gen", help="generate a trace")
    p_gen.add_argument("model", choices=["random", "window", "star"])
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--tau", type=int, default=100)
    p_gen.add_argument("--p-delete", type=float, default=0.3)
    p_gen.add_argument("--window", type=_positive, default=10)
    p_gen.add_argument("--rounds", type=_positive, default=1)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--eps", help="eps recorded in the header (default 1/10)")
    p_gen.add_argument("-o", "--out", help="output file (default: stdout)")
    p_gen.set_defaults(func=cmd_gen)

    p_bench = sub.add_parser("bench", help="amortized-work benchmark on random traces")
    p_bench.add_argument("--n", default="1000,10000", help="comma-separated node counts")
    p_bench.add_argument("--eps", default="1/5", help="comma-separated eps values")
    p_bench.add_argument("--tau-factor", type=int, default=10, help="tau = factor * n")
    p_bench.add_argument("--tau", type=int, default=None, help="fixed tau (overrides factor)")
    p_bench.add_argument("--p-delete", type=float, default=0.3)
    p_bench.add_argument("--seed", type=int, default=1)
    p_bench.add_argument("--order", choices=["fifo", "lifo"], default="fifo")
    p_bench.add_argument("--mode", choices=["float"], default="float")
    p_bench.add_argument("--stats", help="JSON-lines output (default: stdout)")
    p_bench.add_argument("--no-timing", action="store_true")
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
