"""Command-line front end.

Every command builds a report with ``command``, ``params``, ``result`` (a
list of flat rows) and ``provenance``; timing, worker count and cache
statistics ride along in separate fields. Exit codes: 0 ok, 2 usage,
3 missing or corrupt cache, 4 domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import arith, classnum, divisibility, olson, tcm
from .config import RunConfig
from .errors import CacheFormatError, CacheIntegrityError, DependencyError, DomainError

EXIT_OK, EXIT_USAGE, EXIT_DEPENDENCY, EXIT_DOMAIN = 0, 2, 3, 4


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    params: dict
    result: list[dict]
    provenance: list[str]
    timing: float = 0.0
    workers: int = 1
    cache: dict = field(default_factory=dict)
    sources: list[str] = field(default_factory=list)
    format: str = "table"

    def payload(self) -> dict:
        """The deterministic part of the report."""
        return {"command": self.command, "params": self.params,
                "result": self.result, "provenance": self.provenance}

    def to_json(self) -> str:
        d = self.payload()
        d.update(timing=round(self.timing, 6), workers=self.workers, cache=self.cache,
                 sources=self.sources)
        return json.dumps(d, indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        if self.result:
            w = csv.DictWriter(buf, fieldnames=list(self.result[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(self.result)
        return buf.getvalue()

    def to_table(self) -> str:
        head = f"# {self.command} {' '.join(f'{k}={v}' for k, v in self.params.items())}"
        lines = [head, f"# provenance: {', '.join(self.provenance) or 'none'}"]
        if not self.result:
            return "\n".join(lines + ["(no rows)"]) + "\n"
        cols = list(self.result[0])
        cells = [[_fmt(r[c]) for c in cols] for r in self.result]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        lines.append("  ".join(c.rjust(w) for c, w in zip(cols, widths)))
        lines += ["  ".join(x.rjust(w) for x, w in zip(row, widths)) for row in cells]
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _int(text: str) -> int:
    """Integers, also written as 10^6 or 1e6."""
    t = text.strip().replace("_", "")
    try:
        if "^" in t:
            b, e = t.split("^")
            return int(b) ** int(e)
        if "e" in t.lower() and not t.lower().startswith("-"):
            m, e = t.lower().split("e")
            return int(m) * 10 ** int(e)
        return int(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"), default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    common.add_argument("--cache-dir", default=argparse.SUPPRESS)
    common.add_argument("--no-cache", action="store_true", default=argparse.SUPPRESS,
                        help="never read or write the class-number cache")
    common.add_argument("--offline", action="store_true", default=argparse.SUPPRESS,
                        help="fail instead of computing class numbers missing from the cache")
    common.add_argument("--unconditional-only", action="store_true", default=argparse.SUPPRESS,
                        help="refuse the conditional bsgs class-number path")
    common.add_argument("--method", choices=classnum.METHODS, default=argparse.SUPPRESS)
    common.add_argument("--progress", action="store_true", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="cmtorsion", parents=[common],
                                description="Olson degrees, class numbers and CM torsion bounds.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def add(parent, name, *args, **kw):
        return parent.add_parser(name, parents=[common], *args, **kw)

    cn = add(sub, "classnum", help="h(D), or a sweep table with 'sweep L'")
    cn.add_argument("args", nargs="+")

    ol = add(sub, "olson").add_subparsers(dest="sub", required=True)
    add(ol, "count").add_argument("N", type=_int)
    add(ol, "check").add_argument("d", type=_int)
    g = add(ol, "generators")
    g.add_argument("X", type=_int)
    g.add_argument("--primitive", action="store_true")
    add(ol, "density").add_argument("N", type=_int)

    pp = add(sub, "primepower").add_subparsers(dest="sub", required=True)
    c = add(pp, "check")
    c.add_argument("p", type=_int)
    c.add_argument("n", type=_int)
    s = add(pp, "scan")
    s.add_argument("B", type=_int)
    s.add_argument("--no-skip-even", action="store_true")

    add(sub, "lambda").add_argument("n", type=_int)
    f = add(sub, "feasible")
    f.add_argument("d", type=_int)
    f.add_argument("--max-order", type=_int, required=True)

    t = add(sub, "tcm").add_subparsers(dest="sub", required=True)
    add(t, "lb").add_argument("d", type=_int)

    st = add(sub, "stats").add_subparsers(dest="sub", required=True)
    add(st, "tauprime").add_argument("y", type=_int)
    ds = add(st, "density-shifted")
    ds.add_argument("x", type=_int)
    ds.add_argument("B", type=_int)

    ex = add(sub, "experiment").add_subparsers(dest="sub", required=True)
    av = add(ex, "avg")
    av.add_argument("x", type=_int)
    av.add_argument("--odd", action="store_true")
    return p


# cached tables come only from unconditional sweeps, so fresh and cached
# tables carry one label in the payload; the exact source goes to ``sources``
TABLE_PROVENANCE = "unconditional-table"

_DEFAULTS = dict(format="table", threads=1, cache_dir=None, no_cache=False, offline=False,
                 unconditional_only=False, method="auto", progress=False)


class Context:
    def __init__(self, ns: argparse.Namespace):
        self.ns = ns
        try:
            self.config = RunConfig(ns.threads, ns.cache_dir, not ns.no_cache, ns.offline,
                                    ns.method, ns.unconditional_only)
        except DomainError as e:
            raise UsageError(str(e)) from None
        self.pool = ThreadPoolExecutor(ns.threads) if ns.threads > 1 else None
        self.source = self.config.table_source(self.pool, self._progress("sweep"))
        self.provenance: set[str] = set()

    def table(self, L: int):
        """A complete table; payload provenance does not depend on cache state."""
        t = self.source.table(L)
        self.provenance.add("bsgs" if t.provenance == "bsgs" else TABLE_PROVENANCE)
        return t

    def _progress(self, what: str):
        if not (self.ns.progress or sys.stderr.isatty()):
            return None

        def report(done, total):
            print(f"\r{what}: {done}/{total}", end="" if done < total else "\n", file=sys.stderr)
        return report

    def close(self):
        if self.pool is not None:
            self.pool.shutdown()


def _verdict_row(v: olson.OlsonVerdict) -> dict:
    w = v.witness
    return {"d": v.degree, "olson": v.olson, "g": w.g if w else None,
            "ell": w.witness_prime if w else None, "h": w.witness_h if w else None}


def _classnum(ctx: Context, args: list[str]) -> tuple[dict, list[dict]]:
    ns = ctx.ns
    if args[0] == "sweep":
        if len(args) != 2:
            raise UsageError("usage: classnum sweep L")
        L = _int(args[1])
        table = ctx.table(L)
        return {"L": L}, [{"ell": e, "h": h} for e, h in table.entries]
    if len(args) != 1:
        raise UsageError("usage: classnum D | classnum sweep L")
    D = _int(args[0])
    h, used = classnum.compute_class_number(D, ns.method)
    ctx.provenance.add(used)
    return {"D": D}, [{"D": D, "h": h, "w": classnum.unit_count(D), "method": used}]


def dispatch(ctx: Context) -> tuple[str, dict, list[dict]]:
    ns = ctx.ns
    cmd = ns.cmd if not getattr(ns, "sub", None) else f"{ns.cmd} {ns.sub}"
    pool = ctx.pool

    if ns.cmd == "classnum":
        if ns.args[0] == "sweep":
            cmd = "classnum sweep"
        params, rows = _classnum(ctx, ns.args)
        return cmd, params, rows

    if ns.cmd == "olson":
        if ns.sub in ("count", "density"):
            N = ns.N
            if N < 1:
                raise DomainError(f"N must be >= 1, got {N}")
            gens = olson.generators(max(N, 2), primitive=True, table=ctx.table(2 * max(N, 2) + 1))
            n = olson.count_olson(N, gens=gens, executor=pool)
            if ns.sub == "count":
                return cmd, {"N": N}, [{"N": N, "count": n}]
            frac = n / N
            return cmd, {"N": N}, [{"N": N, "count": n, "density": f"{n}/{N}", "value": frac}]
        if ns.sub == "check":
            ctx.provenance.add("rootcount-bounded")
            return cmd, {"d": ns.d}, [_verdict_row(olson.is_olson(ns.d))]
        gens = olson.generators(ns.X, ns.primitive, table=ctx.table(2 * ns.X + 1))
        return cmd, {"X": ns.X, "primitive": ns.primitive}, [
            {"g": e.g, "ell": e.witness_prime, "h": e.witness_h} for e in gens.entries]

    if ns.cmd == "primepower":
        ctx.provenance.add("rootcount-bounded")
        if ns.sub == "check":
            v = olson.is_prime_power_olson(ns.p, ns.n)
            row = {"p": ns.p, "n": ns.n, **_verdict_row(v)}
            return cmd, {"p": ns.p, "n": ns.n}, [row]
        hits = olson.prime_power_scan(ns.B, skip_even=not ns.no_skip_even, executor=pool,
                                      progress=ctx._progress("scan"))
        return cmd, {"B": ns.B}, [vars(h) for h in hits]

    if ns.cmd == "lambda":
        ls = divisibility.lambda_set(ns.n)
        return cmd, {"n": ns.n}, [{"n": ns.n, "lambda": x} for x in ls.elements]

    if ns.cmd == "feasible":
        ns_ = divisibility.feasible_orders(ns.d, ns.max_order)
        return cmd, {"d": ns.d, "max_order": ns.max_order}, [{"n": n} for n in ns_]

    if ns.cmd == "tcm":
        ctx.provenance.add("rootcount-bounded")
        cert = tcm.tcm_lower_bound(ns.d)
        return cmd, {"d": ns.d}, [
            {"d": ns.d, "lower_bound": cert.lower_bound, "source": w.source, "base": w.base,
             "value": w.value, "details": w.details} for w in cert.witnesses]

    if ns.cmd == "stats":
        if ns.sub == "tauprime":
            total = arith.tau_prime_sum(ns.y)
            mean = total / ns.y
            z2 = math.pi**2 / 6
            return cmd, {"y": ns.y}, [{"y": ns.y, "sum": total, "mean": mean,
                                       "zeta2": z2, "abs_error": abs(mean - z2)}]
        fr = arith.shifted_prime_divisor_density(ns.x, ns.B)
        return cmd, {"x": ns.x, "B": ns.B}, [{"x": ns.x, "B": ns.B, "count": int(fr * ns.x),
                                              "fraction": float(fr)}]

    if ns.cmd == "experiment":
        s = tcm.avg_experiment(ns.x, ns.odd, table=ctx.table(2 * ns.x + 1))
        return cmd, {"x": ns.x, "odd": ns.odd}, [
            {"checkpoint": c, "mean": m, "total": s.total, "slope": s.slope}
            for c, m in zip(s.checkpoints, s.means)]

    raise UsageError(f"unknown command {cmd}")


def run(argv: list[str]) -> RunReport:
    """Parse and execute; raises on usage, dependency or domain errors."""
    parser = build_parser()
    ns = parser.parse_args(argv)  # exits with status 2 on bad usage
    for k, v in _DEFAULTS.items():
        if not hasattr(ns, k):
            setattr(ns, k, v)
    ctx = Context(ns)
    t0 = time.perf_counter()
    try:
        cmd, params, rows = dispatch(ctx)
    finally:
        ctx.close()
    prov = sorted(ctx.provenance)
    if ns.unconditional_only and "bsgs" in prov:
        raise UsageError("conditional class numbers were used under --unconditional-only")
    return RunReport(cmd, params, rows, prov, time.perf_counter() - t0, ns.threads,
                     {"hits": ctx.source.hits, "misses": ctx.source.misses,
                      "dir": None if ctx.source.cache_dir is None else str(ctx.source.cache_dir)},
                     sorted(ctx.source.provenance), ns.format)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        report = run(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DependencyError, CacheFormatError, CacheIntegrityError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DEPENDENCY
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    out = {"json": report.to_json, "csv": report.to_csv}.get(report.format, report.to_table)()
    sys.stdout.write(out if out.endswith("\n") or not out else out + "\n")
    return EXIT_OK


def entry() -> None:
    sys.exit(main())
