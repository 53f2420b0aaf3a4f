"""Command-line front end: ``sierpinski-eip <subcommand> [flags]``.

Exit status is 0 on success, 1 when a verification finds a counterexample,
2 on invalid input and 3 when a search would exceed its budget.  Reports are
written with sorted keys and ``elapsed_ms`` set to 0 unless ``--timing`` is
given, so a fixed command line always produces the same bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .eip import (
    OMEGA,
    DecoratedContext,
    ProfileTable,
    cut_size,
    eta_inverse,
    lambda_at,
    lex_profile,
    unary_weights,
)
from .errors import BudgetExceeded, ParameterError
from .graphs import SIERPINSKI, Graph, sierpinski_graph
from .oracle import (
    BUDGET_EXCEEDED,
    COUNTEREXAMPLE,
    SearchBudget,
    VerificationReport,
    default_jobs,
    enumerate_cases,
    exact_profile,
    exact_profile_ideals,
    lex_decorated_profile,
    named_graph,
    nested_solutions_exists,
    rajasingh_report,
    stab_order_for,
    subadditivity_suite,
    theorem2_report,
    verify_conjecture,
)
from .posets import count_ideals, derived_network, enumerate_ideals

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

CLAIMS = ("conjecture1", "conjecture2", "subadditivity", "nested", "theorem2", "cases")
FORMATS = ("csv", "json", "dot")
DEFAULT_FORMAT = {"profile": "csv", "boundary": "csv", "solve": "csv", "verify": "json", "poset": "json", "limit": "csv"}
ALLOWED_FORMATS = {
    "profile": ("csv", "json"),
    "boundary": ("csv", "json"),
    "solve": ("csv", "json"),
    "verify": ("json",),
    "poset": ("json", "dot", "csv"),
    "limit": ("csv", "json"),
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Validated command line; every subcommand reads only from here."""

    subcommand: str
    n: int | None = None
    m: int | None = None
    s: int | None = None
    t: int | None = None
    ell: int | None = None
    ell_range: tuple[int, int] | None = None
    fmt: str = "csv"
    jobs: int = 1
    budget_subsets: int = 1 << 27
    budget_ideals: int = 10**6
    out: str | None = None
    graph: str | None = None
    claim: str | None = None
    sets: str | None = None
    method: str = "auto"
    what: str = "components"
    levels: list[int] = field(default_factory=list)
    at: str | None = None
    eta_inverse: str | None = None
    timing: bool = False

    @property
    def budget(self) -> SearchBudget:
        return SearchBudget(self.budget_subsets, self.budget_ideals, self.jobs)

    @property
    def ctx(self) -> DecoratedContext | None:
        if self.s is None and self.t is None:
            return None
        return DecoratedContext(self.s or 0, self.t or 0, self.m)


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise UsageError(f"--range expects LO:HI, got {text!r}") from None


def _parse_levels(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise UsageError(f"--levels expects comma-separated integers, got {text!r}") from None


def build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(subcommand=args.command)
    for name in ("n", "m", "s", "t", "ell", "out", "graph", "claim", "method", "what", "at", "timing"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    cfg.sets = getattr(args, "set", None)
    cfg.eta_inverse = getattr(args, "eta_inverse", None)
    cfg.fmt = args.format or DEFAULT_FORMAT[args.command]
    if cfg.fmt not in ALLOWED_FORMATS[args.command]:
        raise UsageError(f"{args.command} does not produce {cfg.fmt}")
    cfg.jobs = args.jobs if args.jobs is not None else default_jobs()
    if args.budget_subsets is not None:
        cfg.budget_subsets = args.budget_subsets
    if args.budget_ideals is not None:
        cfg.budget_ideals = args.budget_ideals
    if args.range is not None:
        cfg.ell_range = _parse_range(args.range)
    if getattr(args, "levels", None):
        cfg.levels = _parse_levels(args.levels)
    validate(cfg)
    return cfg


def validate(cfg: RunConfig) -> None:
    """Reject inconsistent flags before any computation starts."""
    if cfg.jobs < 1 or cfg.budget_subsets < 1 or cfg.budget_ideals < 1:
        raise UsageError("--jobs and budgets must be positive")
    for name in ("n", "m"):
        v = getattr(cfg, name)
        if v is not None and v < 1:
            raise UsageError(f"--{name} must be positive")
    if (cfg.s is not None or cfg.t is not None) and cfg.m is None:
        raise UsageError("--s/--t need --m")
    needs_nm = {"profile", "poset"}
    if cfg.subcommand in needs_nm and cfg.graph is None and (cfg.n is None or cfg.m is None):
        raise UsageError(f"{cfg.subcommand} needs --n and --m (or --graph)")
    if cfg.subcommand in ("boundary", "solve") and cfg.graph is None and (cfg.n is None or cfg.m is None):
        raise UsageError(f"{cfg.subcommand} needs --graph or both --n and --m")
    if cfg.subcommand == "boundary" and cfg.sets is None and cfg.ell is None:
        raise UsageError("boundary needs --set or --ell")
    if cfg.subcommand == "verify":
        if cfg.claim is None:
            raise UsageError("verify needs --claim")
        if cfg.claim in ("conjecture1", "conjecture2") and (cfg.n is None or cfg.m is None):
            raise UsageError(f"{cfg.claim} needs --n and --m")
        if cfg.claim == "nested" and cfg.graph is None and (cfg.n is None or cfg.m is None):
            raise UsageError("nested needs --graph or --n/--m")
        if cfg.claim == "theorem2" and cfg.graph is None and (cfg.n is None or cfg.m is None):
            raise UsageError("theorem2 needs --graph or --n/--m")
        if cfg.claim == "cases" and cfg.m is None:
            raise UsageError("cases needs --m")
    if cfg.subcommand == "limit":
        given = [x is not None for x in (cfg.ell, cfg.at, cfg.eta_inverse)]
        if sum(given) != 1:
            raise UsageError("limit needs exactly one of --ell (with --n), --at or --eta-inverse")
        if cfg.ell is not None and cfg.n is None:
            raise UsageError("limit --ell needs --n")
    if cfg.ell_range is not None and cfg.ell_range[0] > cfg.ell_range[1]:
        raise UsageError("--range needs LO <= HI")


# --- helpers -----------------------------------------------------------------


def _graph(cfg: RunConfig) -> Graph:
    if cfg.graph is not None:
        g = named_graph(cfg.graph)
        if cfg.ctx is not None and (g.family != SIERPINSKI or g.m != cfg.m):
            raise UsageError("--s/--t apply to S(n,m) graphs with the same m")
        return g
    return sierpinski_graph(cfg.n, cfg.m)


def parse_set(text: str, graph: Graph) -> int:
    """Comma-separated vertex labels, or ``lex:<l>`` for the first l vertices in index order."""
    text = text.strip()
    if text.startswith("lex:"):
        try:
            ell = int(text[4:])
        except ValueError:
            raise UsageError(f"bad lex size in {text!r}") from None
        if not 0 <= ell <= graph.num_vertices:
            raise UsageError(f"lex size {ell} outside [0, {graph.num_vertices}]")
        return (1 << ell) - 1
    if not text:
        return 0
    index = {lab: i for i, lab in enumerate(graph.labels)}
    mask = 0
    for item in text.split(","):
        item = item.strip().lower()
        if item not in index:
            raise UsageError(f"{item!r} is not a vertex label of the graph")
        mask |= 1 << index[item]
    return mask


def _rows_in_range(cfg: RunConfig, size: int) -> range:
    lo, hi = cfg.ell_range if cfg.ell_range else (0, size)
    if lo < 0 or hi > size:
        raise UsageError(f"--range must lie within [0, {size}]")
    return range(lo, hi + 1)


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _report_dict(rep: VerificationReport, timing: bool) -> dict:
    d = rep.to_dict()
    if not timing:
        d["elapsed_ms"] = 0
    return d


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


# --- subcommands ---------------------------------------------------------------


def cmd_profile(cfg: RunConfig) -> tuple[str, int]:
    if cfg.graph is not None:
        raise UsageError("profile works on S(n,m); use solve for other graphs")
    if cfg.ctx is not None:
        table = ProfileTable(cfg.n, cfg.m, lex_decorated_profile(cfg.n, cfg.m, cfg.ctx), label="lex decorated")
    else:
        table = lex_profile(cfg.n, cfg.m)
    rows = _rows_in_range(cfg, table.size)
    parts = table.theta0 is not None
    if cfg.fmt == "csv":
        header = ["ell", "theta", "theta0", "theta1"] if parts else ["ell", "theta"]
        body = [[x, table.values[x]] + ([table.theta0[x], table.theta1[x]] if parts else []) for x in rows]
        return _csv([header] + body), EXIT_OK
    out = {
        "n": cfg.n,
        "m": cfg.m,
        "s": cfg.s,
        "t": cfg.t,
        "rows": [
            {"ell": x, "theta": table.values[x], **({"theta0": table.theta0[x], "theta1": table.theta1[x]} if parts else {})}
            for x in rows
        ],
    }
    return _dump(out), EXIT_OK


def cmd_boundary(cfg: RunConfig) -> tuple[str, int]:
    g = _graph(cfg)
    mask = parse_set(cfg.sets if cfg.sets is not None else f"lex:{cfg.ell}", g)
    value = cut_size(mask, g.nbr_masks)
    if cfg.ctx is not None:
        unary, const = unary_weights(g.n, g.m, cfg.ctx)
        value += const + sum(unary[v] for v in range(g.num_vertices) if mask >> v & 1)
    labels = g.mask_labels(mask)
    if cfg.fmt == "csv":
        return _csv([["set", "cardinality", "boundary"], [" ".join(labels), len(labels), value]]), EXIT_OK
    return _dump({"graph": g.family, "n": g.n, "m": g.m, "s": cfg.s, "t": cfg.t, "set": labels, "cardinality": len(labels), "boundary": value}), EXIT_OK


def cmd_solve(cfg: RunConfig) -> tuple[str, int]:
    g = _graph(cfg)
    method = cfg.method
    if method == "auto":
        method = "subsets" if g.num_vertices <= 63 and (1 << g.num_vertices) <= cfg.budget_subsets else "ideals"
    if method == "subsets":
        table = exact_profile(g, cfg.ctx, cfg.budget)
    elif method == "ideals":
        table = exact_profile_ideals(g, None, cfg.ctx, cfg.budget)
    else:
        raise UsageError(f"unknown method {method!r}")
    rows = _rows_in_range(cfg, table.size)
    if cfg.fmt == "csv":
        body = [[x, table.values[x], " ".join(g.mask_labels(table.witnesses[x]))] for x in rows]
        return _csv([["ell", "min_boundary", "witness"]] + body), EXIT_OK
    out = {
        "graph": g.family,
        "n": g.n,
        "m": g.m,
        "s": cfg.s,
        "t": cfg.t,
        "method": method,
        "rows": [{"ell": x, "min_boundary": table.values[x], "witness": g.mask_labels(table.witnesses[x])} for x in rows],
    }
    return _dump(out), EXIT_OK


def _verify_reports(cfg: RunConfig) -> tuple[list[VerificationReport], dict]:
    extra: dict = {}
    claim = cfg.claim
    if claim == "conjecture1":
        return [verify_conjecture(cfg.n, cfg.m, budget=cfg.budget, method=cfg.method)], extra
    if claim == "conjecture2":
        if cfg.s is not None or cfg.t is not None:
            ctxs = [cfg.ctx]
        else:
            ctxs = DecoratedContext.all_pairs(cfg.m)
        return [verify_conjecture(cfg.n, cfg.m, c.s, c.t, cfg.budget, method=cfg.method) for c in ctxs], extra
    if claim == "subadditivity":
        n_strong = cfg.n if cfg.n is not None else 6
        return subadditivity_suite(n_strong, min(n_strong, 5)), extra
    if claim == "nested":
        g = _graph(cfg)
        res = nested_solutions_exists(g, cfg.budget)
        scope = {"graph": cfg.graph or f"S({cfg.n},{cfg.m})", "vertices": g.num_vertices}
        if res.exists:
            details = {"profile": res.profile, "chain": [g.mask_labels(c) for c in res.chain]}
            rep = VerificationReport("nested", scope, "verified", None, details=details)
        else:
            rep = VerificationReport("nested", scope, COUNTEREXAMPLE, res.certificate, details={"profile": res.profile})
        return [rep], extra
    if claim == "theorem2":
        g = _graph(cfg)
        name = cfg.graph or f"S({g.n},{g.m})"
        if g.family == SIERPINSKI:
            table = exact_profile(g, None, cfg.budget) if (1 << g.num_vertices) <= cfg.budget_subsets else exact_profile_ideals(g, None, None, cfg.budget)
            return [theorem2_report(table.values, g.n, g.m, name)], extra
        if g.m == 3:
            table = exact_profile(g, None, cfg.budget)
            return [rajasingh_report(table.values, g.n)], extra
        raise UsageError("theorem2 applies to S(n,m) and SG_n")
    if claim == "cases":
        levels = cfg.levels or [2]
        grid = enumerate_cases(cfg.m, levels, cfg.budget)
        reports = []
        for c in grid.cases:
            scope = {"m": cfg.m, "levels": levels, "ideal_index": c.ideal_index, "s": c.s, "t": c.t}
            status = COUNTEREXAMPLE if c.max_delta is not None and c.max_delta > 0 else "verified"
            witness = {"set": c.witness, "delta": c.max_delta} if status == COUNTEREXAMPLE else None
            details = {"ideal": c.ideal, "sets": c.sets, "merged": c.merged, "max_delta": c.max_delta, "dual": list(c.dual)}
            reports.append(VerificationReport("cases", scope, status, witness, details=details))
        extra = {"raw_cases": grid.raw_count, "self_dual": grid.self_dual, "orbits": grid.orbits, "flags": grid.flags}
        return reports, extra
    raise UsageError(f"unknown claim {claim!r}")


def cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    reports, extra = _verify_reports(cfg)
    statuses = {r.status for r in reports}
    if COUNTEREXAMPLE in statuses:
        status, code = COUNTEREXAMPLE, EXIT_COUNTEREXAMPLE
    elif BUDGET_EXCEEDED in statuses:
        status, code = BUDGET_EXCEEDED, EXIT_BUDGET
    else:
        status, code = "verified", EXIT_OK
    out = {"claim": cfg.claim, "status": status, "summary": extra, "reports": [_report_dict(r, cfg.timing) for r in reports]}
    return _dump(out), code


def cmd_poset(cfg: RunConfig) -> tuple[str, int]:
    g = _graph(cfg)
    order = stab_order_for(g)
    what = cfg.what
    if what == "components":
        if cfg.fmt == "dot":
            return order.hasse_dot(), EXIT_OK
        inv = order.inventory()
        if cfg.fmt == "csv":
            body = [[c["index"], c["size"], c["minimum"], " ".join(c["elements"])] for c in inv]
            return _csv([["index", "size", "minimum", "elements"]] + body), EXIT_OK
        return _dump({"family": order.family, "n": order.n, "m": order.m, "components": inv}), EXIT_OK
    if what == "ideals":
        if cfg.fmt == "dot":
            raise UsageError("ideals are exported as json or csv")
        total = count_ideals(order, cap=cfg.budget_ideals)
        ideals = enumerate_ideals(order, cap=cfg.budget_ideals)
        rows = [{"size": i.size, "boundary": cut_size(i.mask, g.nbr_masks), "members": g.mask_labels(i.mask)} for i in ideals]
        if cfg.fmt == "csv":
            body = [[r["size"], r["boundary"], " ".join(r["members"])] for r in rows]
            return _csv([["size", "boundary", "members"]] + body), EXIT_OK
        return _dump({"family": order.family, "n": order.n, "m": order.m, "count": total, "ideals": rows}), EXIT_OK
    if what == "network":
        net = derived_network(order, g, cap=cfg.budget_ideals)
        if cfg.fmt == "dot":
            return net.to_dot(), EXIT_OK
        if cfg.fmt == "csv":
            raise UsageError("the derived network is exported as json or dot")
        cost, path = net.min_weight_path()
        chain = net.nested_chain()
        out = {
            "family": order.family,
            "n": order.n,
            "m": order.m,
            "nodes": [{"members": g.mask_labels(mk), "weight": w} for mk, w in zip(net.nodes, net.weights)],
            "arcs": [list(a) for a in net.arcs],
            "min_weight_path": {"weight": cost, "nodes": path},
            "nested_chain": chain,
        }
        return _dump(out), EXIT_OK
    raise UsageError(f"unknown poset export {what!r}")


def cmd_limit(cfg: RunConfig) -> tuple[str, int]:
    try:
        if cfg.eta_inverse is not None:
            arg = Fraction(cfg.eta_inverse)
            coords = [_frac(c) for c in eta_inverse(arg)]
            if cfg.fmt == "csv":
                return ",".join(coords) + "\n", EXIT_OK
            return _dump({"function": "eta_inverse", "argument": _frac(arg), "value": coords}), EXIT_OK
        if cfg.at is not None:
            arg = Fraction(cfg.at)
        else:
            arg = Fraction(cfg.ell, 3**cfg.n)
    except (ValueError, ZeroDivisionError):
        raise UsageError("limit arguments must be exact rationals p/q") from None
    val = lambda_at(arg)
    shown = "omega" if val is OMEGA else str(val)
    if cfg.fmt == "csv":
        return _csv([["a", "lambda"], [_frac(arg), shown]]), EXIT_OK
    return _dump({"function": "lambda", "argument": _frac(arg), "value": shown}), EXIT_OK


COMMANDS = {
    "profile": cmd_profile,
    "boundary": cmd_boundary,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "poset": cmd_poset,
    "limit": cmd_limit,
}


def run(cfg: RunConfig) -> tuple[str, int]:
    """Execute a validated config; returns (output text, exit status)."""
    return COMMANDS[cfg.subcommand](cfg)


# --- argument parsing ---------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="word length / depth")
    common.add_argument("--m", type=int, help="alphabet size")
    common.add_argument("--s", type=int, help="decoration: number of I corners")
    common.add_argument("--t", type=int, help="decoration: number of J corners")
    common.add_argument("--format", choices=FORMATS, help="output format (default depends on subcommand)")
    common.add_argument("--jobs", type=int, help="worker threads (default $SIERPINSKI_EIP_JOBS or CPU count)")
    common.add_argument("--budget-subsets", type=int, help="max subsets enumerated (default 2^27)")
    common.add_argument("--budget-ideals", type=int, help="max ideals enumerated (default 10^6)")
    common.add_argument("--range", help="restrict rows to LO:HI (inclusive)")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--graph", help="named graph: S(n,m), S[n,m], SGn, Kn, Qn, H(n,m)")
    common.add_argument("--timing", action="store_true", help="keep wall-clock times in reports")

    parser = argparse.ArgumentParser(prog="sierpinski-eip", description="Exact edge-isoperimetric computations on S(n,m).")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("profile", parents=[common], help="Lex-segment boundary table")
    p = sub.add_parser("boundary", parents=[common], help="boundary of one set")
    p.add_argument("--set", help="comma-separated vertex labels or lex:<l>")
    p.add_argument("--ell", type=int, help="shorthand for --set lex:<l>")
    p = sub.add_parser("solve", parents=[common], help="exact minimum boundary for every size")
    p.add_argument("--method", choices=("auto", "subsets", "ideals"), default="auto")
    p = sub.add_parser("verify", parents=[common], help="run a named claim suite")
    p.add_argument("--claim", choices=CLAIMS, required=True)
    p.add_argument("--method", choices=("auto", "subsets", "ideals"), default="auto")
    p.add_argument("--levels", help="case grid: comma-separated n values (default 2)")
    p = sub.add_parser("poset", parents=[common], help="stabilization order exports")
    p.add_argument("--what", choices=("components", "ideals", "network"), default="components")
    p = sub.add_parser("limit", parents=[common], help="continuous limit values")
    p.add_argument("--ell", type=int, help="lambda(l / 3^n), with --n")
    p.add_argument("--at", help="lambda(a) for a rational a = p/q")
    p.add_argument("--eta-inverse", dest="eta_inverse", help="eta^-1(a) for a rational a = p/q")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = build_config(args)
        text, code = run(cfg)
    except (UsageError, ParameterError) as exc:
        print(f"sierpinski-eip: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"sierpinski-eip: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code
