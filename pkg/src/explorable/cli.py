"""Command-line front end.

Exit codes: 0 when the expected outcome occurred (explored, verified,
refuted, ...), 2 when a cap made the run inconclusive, 1 otherwise.
"""
from __future__ import annotations

import argparse
import json
import logging
import shlex
import sys
from pathlib import Path

from .config import get_config, set_config
from .errors import ExplorableError, ResourceCapError
from .families import get_family
from .graph import from_json, to_dot, to_json
from .runtime import Status, is_full_exploration, run, write_trace
from .views import node_views_equal, unfold_view

OK, FAIL, INCONCLUSIVE = 0, 1, 2


def _load_graph(path: str):
    return from_json(Path(path).read_text())


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(a) -> int:
    g = get_family(a.family).member(a.i)
    text = to_dot(g) if a.format == "dot" else to_json(g) + "\n"
    _emit(text, a.out)
    return OK


def cmd_view(a) -> int:
    g = _load_graph(a.graph)
    print(unfold_view(g, a.node, a.k).to_text())
    return OK


def cmd_view_eq(a) -> int:
    k2 = a.k if a.k2 is None else a.k2
    if k2 != a.k:
        raise ExplorableError(f"view depths differ: {a.k} vs {k2}")
    g, h = _load_graph(a.graph), _load_graph(a.graph2)
    same = node_views_equal(g, a.node, h, a.node2, a.k)
    print("yes" if same else "no")
    return OK


def _outcome(t, g) -> int:
    if is_full_exploration(t, g):
        return OK
    return INCONCLUSIVE if t.status is Status.STEP_LIMIT else FAIL


def cmd_run(a) -> int:
    from .registry import resolve_agent

    g = _load_graph(a.graph)
    agent, hooks = resolve_agent(a.agent)
    t = run(agent, g, a.start, get_config().step_limit, hooks)
    if a.trace:
        write_trace(t, a.trace)
    print(
        json.dumps(
            {
                "status": t.status.value,
                "steps": len(t.steps),
                "visited": len(t.visited),
                "n": g.n,
                "explored": is_full_exploration(t, g),
                "fault": t.fault,
            },
            sort_keys=True,
        )
    )
    return _outcome(t, g)


def cmd_explo(a) -> int:
    from .registry import resolve_agent

    fam = get_family(a.family)
    g = fam.member(a.host_i)
    starts = range(g.n) if a.all_starts else [a.start]
    prefix = "universal-oracle:" if a.universal else "explo:"
    codes = []
    for s in starts:
        agent, hooks = resolve_agent(prefix + fam.name)
        t = run(agent, g, s, get_config().step_limit, hooks)
        code = _outcome(t, g)
        print(f"start={s} status={t.status.value} steps={len(t.steps)} visited={len(t.visited)}/{g.n}")
        codes.append(code)
    if FAIL in codes:
        return FAIL
    return INCONCLUSIVE if INCONCLUSIVE in codes else OK


def cmd_uxs(a) -> int:
    from .uxs import get_uxs, load_uxs, save_uxs, search_uxs, uncovered

    if a.uxs_cmd == "search":
        seq = get_uxs(a.n) if get_config().use_disk_cache and not a.fresh else search_uxs(a.n)
        if a.out:
            save_uxs(seq, a.out)
        else:
            sys.stdout.write(seq.to_text())
        print(f"N={a.n} length={len(seq)} verified", file=sys.stderr)
        return OK
    seq = load_uxs(a.file)
    n = a.n if a.n is not None else seq.bound
    bad = uncovered(seq.offsets, n)
    print(f"N={n} length={len(seq)} uncovered_pairs={bad}")
    return OK if bad == 0 else FAIL


def cmd_refute(a) -> int:
    from .refuter import SubprocessCandidate, refute, resolve_candidate

    if a.candidate_cmd:
        cand = SubprocessCandidate(shlex.split(a.candidate_cmd))
    elif a.candidate:
        cand = resolve_candidate(a.candidate)
    else:
        raise ExplorableError("give --candidate or --candidate-cmd")
    rep = refute(cand, a.mode, a.cap)
    if a.report:
        prefix = a.report[:-5] if a.report.endswith(".json") else a.report
        rep.write(a.report, trace_prefix=prefix)
    print(json.dumps(rep.to_dict(), sort_keys=True))
    return {"refuted": OK, "survived-cap": INCONCLUSIVE}.get(rep.verdict, FAIL)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="explorable", description=__doc__.splitlines()[0])
    p.add_argument("--cache-dir", help="directory for enumeration, UXS and witness caches")
    p.add_argument("--seedless", action="store_true", help="reserved; every run is deterministic")
    p.add_argument("--limit", type=int, help="step limit for agent runs")
    p.add_argument("--no-disk-cache", action="store_true")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("gen", help="write the i-th member of a family")
    s.add_argument("--family", required=True)
    s.add_argument("--i", type=int, required=True)
    s.add_argument("--format", choices=("json", "dot"), default="json")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_gen)

    s = sub.add_parser("view", help="print a truncated view")
    s.add_argument("--graph", required=True)
    s.add_argument("--node", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(fn=cmd_view)

    s = sub.add_parser("view-eq", help="compare two truncated views")
    s.add_argument("--graph", required=True)
    s.add_argument("--node", type=int, required=True)
    s.add_argument("--graph2", required=True)
    s.add_argument("--node2", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--k2", type=int)
    s.set_defaults(fn=cmd_view_eq)

    s = sub.add_parser("run", help="run a named agent on a graph file")
    s.add_argument("--graph", required=True)
    s.add_argument("--start", type=int, default=0)
    s.add_argument("--agent", required=True)
    s.add_argument("--limit", type=int, dest="run_limit")
    s.add_argument("--trace")
    s.set_defaults(fn=cmd_run)

    s = sub.add_parser("explo", help="run Explo (or the universal agent) on a family member")
    s.add_argument("--family", required=True)
    s.add_argument("--host-i", type=int, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--start", type=int, default=0)
    g.add_argument("--all-starts", action="store_true")
    s.add_argument("--universal", action="store_true", help="use the oracle-driven universal agent")
    s.set_defaults(fn=cmd_explo)

    s = sub.add_parser("uxs", help="search or verify universal exploration sequences")
    us = s.add_subparsers(dest="uxs_cmd", required=True)
    t = us.add_parser("search")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--out")
    t.add_argument("--fresh", action="store_true", help="ignore the cache")
    t.set_defaults(fn=cmd_uxs)
    t = us.add_parser("verify")
    t.add_argument("--file", required=True)
    t.add_argument("--n", type=int)
    t.set_defaults(fn=cmd_uxs)

    s = sub.add_parser("refute", help="run the adversary against a candidate universal agent")
    s.add_argument("--candidate", help="naive:B=<B>, membership, explo:<family>")
    s.add_argument("--candidate-cmd", help="external candidate command (JSON-lines protocol)")
    s.add_argument("--mode", choices=("enum", "decision"), default="enum")
    s.add_argument("--cap", type=int, default=100_000)
    s.add_argument("--report")
    s.set_defaults(fn=cmd_refute)
    return p


def main(argv: list[str] | None = None) -> int:
    a = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    changes = {}
    if a.cache_dir:
        changes["cache_dir"] = Path(a.cache_dir)
    limit = getattr(a, "run_limit", None) or a.limit
    if limit:
        changes["step_limit"] = limit
    if a.no_disk_cache:
        changes["use_disk_cache"] = False
    try:
        if changes:
            set_config(**changes)
        return a.fn(a)
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INCONCLUSIVE
    except (ExplorableError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
