"""Command line verification report.

Runs the named check suites on exact rational arithmetic and renders the
results as text or JSON.

Exit codes:
  0  every executed check passed
  1  at least one check failed
  2  configuration error (bad flag value, unknown suite)
"""

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

from .verify import Verifier

SUITE_ORDER: Tuple[str, ...] = (
    "algebra_relations",
    "classical_fischer",
    "table_ker",
    "l_fischer",
    "symplectic_fischer_k1",
    "kernel_families",
    "branching_table",
    "multiplicity",
    "dim_identity",
    "s0_branching",
)

# which range argument each suite consumes
_RANGE_ARG: Dict[str, str] = {
    "algebra_relations": "",
    "classical_fischer": "a_max",
    "table_ker": "a_max",
    "l_fischer": "a_max",
    "symplectic_fischer_k1": "a_max",
    "kernel_families": "a_max",
    "branching_table": "t_max",
    "multiplicity": "t_max",
    "dim_identity": "a_max",
    "s0_branching": "d_max",
}


def run_suite(name: str, m: int, a_max: int, t_max: int,
              ver: Optional[Verifier] = None) -> List[Dict[str, object]]:
    """Execute one suite and return its check rows as dicts."""
    if ver is None:
        ver = Verifier(m)
    kind = _RANGE_ARG[name]
    method = getattr(ver, name)
    if kind == "":
        rows = method()
    elif kind == "a_max":
        rows = method(a_max)
    elif kind == "t_max":
        rows = method(t_max)
    else:
        rows = method(a_max + 2)
    return [r.as_dict() for r in rows]


def _worker(task: Tuple[str, int, int, int]) -> Tuple[str, float, List[Dict[str, object]]]:
    name, m, a_max, t_max = task
    t0 = time.perf_counter()
    checks = run_suite(name, m, a_max, t_max)
    return name, time.perf_counter() - t0, checks


def build_report(m: int, a_max: int, t_max: int, suites: Sequence[str],
                 jobs: int = 1) -> Dict[str, object]:
    suite_blocks: List[Dict[str, object]] = []
    if jobs > 1 and len(suites) > 1:
        tasks = [(name, m, a_max, t_max) for name in suites]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_worker, tasks))
    else:
        ver = Verifier(m)
        results = []
        for name in suites:
            t0 = time.perf_counter()
            checks = run_suite(name, m, a_max, t_max, ver=ver)
            results.append((name, time.perf_counter() - t0, checks))
    n_pass = n_fail = 0
    for name, elapsed, checks in results:
        for c in checks:
            if c["pass"]:
                n_pass += 1
            else:
                n_fail += 1
        suite_blocks.append({"name": name, "elapsed_s": round(elapsed, 3),
                             "checks": checks})
    return {
        "version": "1",
        "config": {"m": m, "a_max": a_max, "t_max": t_max,
                   "suites": list(suites)},
        "suites": suite_blocks,
        "summary": {"pass": n_pass, "fail": n_fail},
    }


def _fmt_params(params: Dict[str, object]) -> str:
    return " ".join(f"{k}={v}" for k, v in params.items())


def _render_rows(lines: List[str], checks: List[Dict[str, object]]) -> None:
    table = []
    for c in checks:
        status = "ok" if c["pass"] else "FAIL"
        table.append((status, c["name"], _fmt_params(c["params"]),
                      str(c["expected"]), str(c["actual"])))
    if not table:
        lines.append("  (no checks)")
        return
    widths = [max(len(row[i]) for row in table) for i in range(5)]
    for row in table:
        lines.append("  " + "  ".join(row[i].ljust(widths[i]) for i in range(5)).rstrip())
    for c in checks:
        if not c["pass"] and c.get("witness"):
            lines.append(f"    witness[{c['name']}]: {c['witness']}")


def _compact_table_ker(lines: List[str], checks: List[Dict[str, object]]) -> None:
    """One line per degree: kernel dimension against the closed formula."""
    by_a: Dict[int, List[Dict[str, object]]] = {}
    for c in checks:
        by_a.setdefault(int(c["params"]["a"]), []).append(c)
    for a in sorted(by_a):
        group = by_a[a]
        ok = all(c["pass"] for c in group)
        dim_row = next((c for c in group if c["name"] == "kernel_L_dim"), None)
        dim = dim_row["actual"] if dim_row else "?"
        status = "ok" if ok else "FAIL"
        lines.append(f"  a={a:<2d} dim ker L = {dim:>5}  checks={len(group)}  {status}")
    _render_failures(lines, checks)


def _compact_branching(lines: List[str], checks: List[Dict[str, object]]) -> None:
    """One line per level: total dimension and its component split."""
    by_t: Dict[int, List[Dict[str, object]]] = {}
    for c in checks:
        by_t.setdefault(int(c["params"]["t"]), []).append(c)
    for t in sorted(by_t):
        group = by_t[t]
        ok = all(c["pass"] for c in group)
        total = next((c["actual"] for c in group
                      if c["name"] == "lws_dim_vs_five_row_table"), "?")
        comps = [f"{c['params']['weight']}:{c['actual']}" for c in group
                 if c["name"] == "component_dim"]
        status = "ok" if ok else "FAIL"
        lines.append(f"  t={t:<3d} dim={total:>5}  " + " + ".join(comps) + f"  {status}")
    _render_failures(lines, checks)


def _render_failures(lines: List[str], checks: List[Dict[str, object]]) -> None:
    for c in checks:
        if not c["pass"]:
            lines.append(f"    FAIL {c['name']} {_fmt_params(c['params'])} "
                         f"expected {c['expected']} actual {c['actual']}")
            if c.get("witness"):
                lines.append(f"      witness: {c['witness']}")


def render_text(report: Dict[str, object]) -> str:
    cfg = report["config"]
    lines = [f"verification report  m={cfg['m']} a_max={cfg['a_max']} t_max={cfg['t_max']}"]
    for block in report["suites"]:
        checks = block["checks"]
        n_fail = sum(1 for c in checks if not c["pass"])
        lines.append("")
        lines.append(f"== {block['name']} ({len(checks)} checks, {n_fail} failed, "
                     f"{block['elapsed_s']}s) ==")
        if block["name"] == "table_ker":
            _compact_table_ker(lines, checks)
        elif block["name"] == "branching_table":
            _compact_branching(lines, checks)
        else:
            _render_rows(lines, checks)
    summary = report["summary"]
    lines.append("")
    lines.append(f"summary: {summary['pass']} passed, {summary['fail']} failed")
    lines.append("")
    return "\n".join(lines)


def render_json(report: Dict[str, object]) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sympdirac",
        description="Exact verification report for the symplectic Dirac "
                    "operator decompositions.",
    )
    parser.add_argument("--m", type=int, default=6,
                        help="number of base variables per series (default 6)")
    parser.add_argument("--a-max", type=int, default=4, dest="a_max",
                        help="largest harmonic degree for degree-indexed suites")
    parser.add_argument("--t-max", type=int, default=4, dest="t_max",
                        help="largest level for level-indexed suites")
    parser.add_argument("--suite", action="append", choices=SUITE_ORDER,
                        metavar="NAME",
                        help="suite to run (repeatable; default all); one of: "
                             + ", ".join(SUITE_ORDER))
    parser.add_argument("--format", choices=("text", "json"), default="text",
                        help="output format (default text)")
    parser.add_argument("--out", default=None,
                        help="write the report to this file instead of stdout")
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker processes for suite-level parallelism")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.m < 6:
        parser.error("m must be >= 6 (stable range)")
    if args.a_max < 0:
        parser.error("a-max must be >= 0")
    if args.t_max < 0:
        parser.error("t-max must be >= 0")
    if args.jobs < 1:
        parser.error("jobs must be >= 1")
    suites = args.suite if args.suite else list(SUITE_ORDER)
    # preserve canonical order, drop duplicates
    ordered = [s for s in SUITE_ORDER if s in suites]
    report = build_report(args.m, args.a_max, args.t_max, ordered, jobs=args.jobs)
    text = render_json(report) if args.format == "json" else render_text(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["summary"]["fail"] == 0 else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
