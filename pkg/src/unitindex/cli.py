"""Command-line front end.

Each subcommand writes one result (csv, json or text) to ``--out`` or stdout,
plus a JSON manifest next to it (``<out>.manifest.json``; stderr when
writing to stdout).

Exit codes: 0 success, 1 usage error, 2 internal consistency error,
3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone

from . import __version__
from .arith import factor, squarefree_range
from .f2comb import verify_identities
from .families import CSV_HEADER, FamilyTag, census
from .fourrank import FourRankConsistencyError, fourrank_fk, fourrank_fk_special, fourrank_oracle
from .pell import TorsionExceptionError, unit_index_witness, solve_norm_equation
from .stats import (
    ConstantMethod,
    estimate_constant,
    moment_survey,
    rank_distribution,
    sd_band_check,
)

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class Result:
    """What a subcommand produced, in all three output formats."""

    json: dict
    csv_header: list[str] | None = None
    csv_rows: list[list] = field(default_factory=list)
    text: str = ""
    failed: bool = False


def _positive(value: str) -> int:
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def _residue(value: str) -> tuple[int, int]:
    try:
        r, m = (int(x) for x in value.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected R:M, got {value!r}")
    return r, m


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--jobs", type=_positive, default=1, help="worker processes")
    common.add_argument("--format", choices=["csv", "json", "text"], default="text")
    common.add_argument("--out", help="result file (default: stdout)")

    parser = _Parser(prog="unitindex", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("qindex", parents=[common], help="Hasse unit index of Q(sqrt(d), i)")
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("fourrank", parents=[common], help="4-rank of Cl+(8d)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--method", choices=["fk", "special", "oracle"], default="fk")

    p = sub.add_parser("census", parents=[common], help="members of D2, D-2 or SD up to X")
    p.add_argument("--max", type=_positive, required=True, dest="X")
    p.add_argument("--family", choices=["d2", "dm2", "sd"], required=True)
    p.add_argument("--mod", type=_residue, help="keep n = 2d with d = R mod M")

    p = sub.add_parser("moments", parents=[common], help="S(X, k; 3, 4) against N(k, 2) A(X; 3, 4)")
    p.add_argument("--max", type=_positive, required=True, dest="X")
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("distribution", parents=[common], help="4-rank histogram of the restricted family")
    p.add_argument("--max", type=_positive, required=True, dest="X")
    p.add_argument("--rmax", type=int, default=6)

    p = sub.add_parser("constants", parents=[common], help="estimate C_2 or C_-2")
    p.add_argument("--family", choices=["d2", "dm2"], required=True)
    p.add_argument("--max", type=_positive, required=True, dest="X")
    p.add_argument("--method", choices=["count", "euler"], default="count")

    p = sub.add_parser("band", parents=[common], help="|SD(X)| against the main-theorem band")
    p.add_argument("--max", type=_positive, required=True, dest="X")

    v = sub.add_parser("verify", help="exact verification runs")
    vsub = v.add_subparsers(dest="target", required=True, parser_class=_Parser)
    p = vsub.add_parser("props", parents=[common], help="solvability of x^2 - 2d y^2 = +-2 and SD in D2 u D-2")
    p.add_argument("--max", type=_positive, required=True, dest="X")
    p = vsub.add_parser("combinatorics", parents=[common], help="main-term identities over F_2^{2k}")
    p.add_argument("--kmax", type=int, required=True)
    p = vsub.add_parser("fourrank", parents=[common], help="divisor-sum formulas against the form oracle")
    p.add_argument("--max", type=_positive, required=True, dest="X")
    return parser


# Subcommands. Each validates its parameters, then returns a Result.


def cmd_qindex(a) -> Result:
    if a.d < 2:
        raise UsageError("--d must be a squarefree integer > 3")
    try:
        w = unit_index_witness(a.d)
    except TorsionExceptionError as e:
        raise UsageError(str(e))
    except ValueError as e:
        raise UsageError(str(e))
    q = 2 if w else 1
    data = {"d": a.d, "Q": q, "witness": None if w is None else {"x": w.x, "y": w.y, "N": w.N}}
    text = f"d={a.d} Q={q}" + (f" witness x={w.x} y={w.y} ({w.x}^2 - {a.d}*{w.y}^2 = {w.N})" if w else "")
    rows = [[a.d, q, w.x if w else "", w.y if w else "", w.N if w else ""]]
    return Result(data, ["d", "Q", "x", "y", "N"], rows, text)


def _odd_squarefree(d: int):
    if d < 1 or d % 2 == 0:
        raise UsageError("--d must be an odd squarefree positive integer")
    f = factor(d)
    if not f.is_squarefree:
        raise UsageError("--d must be an odd squarefree positive integer")
    return f


def cmd_fourrank(a) -> Result:
    f = _odd_squarefree(a.d)
    fn = {"fk": fourrank_fk, "special": fourrank_fk_special, "oracle": fourrank_oracle}[a.method]
    try:
        rep = fn(f)
    except FourRankConsistencyError:
        raise
    except ValueError as e:
        raise UsageError(str(e))
    data = {"d": f.value, "discriminant": 8 * f.value, "method": rep.method.name, "power": rep.power, "rank": rep.rank}
    text = f"d={f.value} disc={8 * f.value} method={rep.method.name} 2^rk4={rep.power} rk4={rep.rank}"
    return Result(data, list(data), [list(data.values())], text)


def cmd_census(a) -> Result:
    tag = FamilyTag(a.family)
    try:
        res = census(a.X, {tag}, a.mod, jobs=a.jobs)
    except ValueError as e:
        raise UsageError(str(e))
    rows = [r.csv_row() for r in res.records if tag in r.memberships]
    data = {
        "X": a.X,
        "family": tag.name,
        "residue_filter": None if a.mod is None else list(a.mod),
        "count": res.counts[tag],
        "notes": res.notes,
        "members": [r[0] for r in rows],
    }
    text = f"X={a.X} family={tag.name} count={res.counts[tag]}" + "".join(f"\nnote: {n}" for n in res.notes)
    return Result(data, CSV_HEADER, rows, text)


def cmd_moments(a) -> Result:
    try:
        rep = moment_survey(a.X, a.k, jobs=a.jobs)
    except ValueError as e:
        raise UsageError(str(e))
    data = rep.to_json()
    text = (
        f"X={rep.X} k={rep.k} S={rep.S_value} A={rep.A_value} "
        f"ratio={float(rep.ratio)!r} predicted={rep.predicted}"
    )
    return Result(data, list(data), [list(data.values())], text)


def cmd_distribution(a) -> Result:
    try:
        rep = rank_distribution(a.X, a.rmax, jobs=a.jobs)
    except ValueError as e:
        raise UsageError(str(e))
    rows = rep.csv_rows()
    text = "\n".join([f"X={rep.X} total={rep.total}"] + [f"r={r} count={c} predicted={p!r}" for r, c, p in rows])
    return Result(rep.to_json(), ["r", "count", "predicted_probability"], rows, text)


def cmd_constants(a) -> Result:
    try:
        est = estimate_constant(FamilyTag(a.family), a.X, ConstantMethod(a.method), jobs=a.jobs)
    except ValueError as e:
        raise UsageError(str(e))
    data = est.to_json()
    text = f"family={est.family.name} X={est.X} method={est.method.name} estimate={est.estimate!r}"
    return Result(data, list(data), [list(data.values())], text)


def cmd_band(a) -> Result:
    try:
        rep = sd_band_check(a.X, jobs=a.jobs)
    except ValueError as e:
        raise UsageError(str(e))
    data = rep.to_json()
    header = [k for k in data if k != "notes"]
    text = "\n".join([f"{k}={data[k]!r}" for k in header] + [f"note: {n}" for n in rep.notes])
    return Result(data, header, [[data[k] for k in header]], text)


def _verify_props(a) -> Result:
    rows = []
    failures = 0
    for f in squarefree_range(1, a.X):
        d = f.value
        if d % 2:
            if all(p % 8 in (1, 7) for p in f.primes) and fourrank_fk(f).rank == 0:
                ok = solve_norm_equation(2 * d, 2) is not None
                rows.append(["prop_plus2", d, int(ok)])
                failures += not ok
            if all(p % 8 in (1, 3) for p in f.primes) and fourrank_fk(f).rank == 0:
                ok = solve_norm_equation(2 * d, -2) is not None
                rows.append(["prop_minus2", d, int(ok)])
                failures += not ok
        if d > 3 and d % 4 != 1 and unit_index_witness(d, local_check=False):
            odd = [p for p in f.primes if p != 2]
            ok = all(p % 8 in (1, 7) for p in odd) or all(p % 8 in (1, 3) for p in odd)
            rows.append(["sd_in_d2_or_dm2", d, int(ok)])
            failures += not ok
    summary = {}
    for name, _, ok in rows:
        checked, bad = summary.get(name, (0, 0))
        summary[name] = (checked + 1, bad + (not ok))
    data = {
        "X": a.X,
        "checks": {k: {"checked": c, "counterexamples": b} for k, (c, b) in sorted(summary.items())},
        "counterexamples": [[n, d] for n, d, ok in rows if not ok],
        "passed": failures == 0,
    }
    text = "\n".join(
        f"{k:<18} checked={c:<8} counterexamples={b:<4} {'PASS' if b == 0 else 'FAIL'}"
        for k, (c, b) in sorted(summary.items())
    )
    return Result(data, ["check", "d", "holds"], rows, text, failed=failures > 0)


def _verify_combinatorics(a) -> Result:
    if not 1 <= a.kmax <= 3:
        raise UsageError("--kmax must be between 1 and 3")
    checks = verify_identities(a.kmax)
    rows = [[c.name, c.k, c.lhs, c.rhs, "pass" if c.passed else "fail"] for c in checks]
    data = {
        "kmax": a.kmax,
        "checks": [{"name": c.name, "k": c.k, "lhs": c.lhs, "rhs": c.rhs, "passed": c.passed} for c in checks],
        "passed": all(c.passed for c in checks),
    }
    text = "\n".join(f"{n:<28} k={k} lhs={l:<8} rhs={r:<8} {s.upper()}" for n, k, l, r, s in rows)
    return Result(data, ["identity", "k", "lhs", "rhs", "status"], rows, text, failed=not data["passed"])


def _verify_fourrank(a) -> Result:
    if a.X > 125000:
        raise UsageError("--max is limited to 125000 (oracle discriminant bound 10^6)")
    rows = []
    for f in squarefree_range(1, a.X):
        if f.value % 2 == 0:
            continue
        fk = fourrank_fk(f).rank
        oracle = fourrank_oracle(f).rank
        agree = fk == oracle
        if all(p % 8 in (1, 7) for p in f.primes):
            agree = agree and fourrank_fk_special(f).rank == fk
        rows.append([f.value, f.omega, fk, oracle, int(agree)])
    bad = [r[0] for r in rows if not r[4]]
    data = {"X": a.X, "checked": len(rows), "mismatches": bad, "passed": not bad}
    text = f"checked={len(rows)} mismatches={len(bad)} {'PASS' if not bad else 'FAIL'}"
    return Result(data, ["d", "omega", "rank_fk", "rank_oracle", "agree"], rows, text, failed=bool(bad))


def cmd_verify(a) -> Result:
    return {"props": _verify_props, "combinatorics": _verify_combinatorics, "fourrank": _verify_fourrank}[a.target](a)


COMMANDS = {
    "qindex": cmd_qindex,
    "fourrank": cmd_fourrank,
    "census": cmd_census,
    "moments": cmd_moments,
    "distribution": cmd_distribution,
    "constants": cmd_constants,
    "band": cmd_band,
    "verify": cmd_verify,
}


def render(result: Result, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result.json, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(result.csv_header)
        w.writerows([repr(x) if isinstance(x, float) else x for x in row] for row in result.csv_rows)
        return buf.getvalue()
    return result.text + "\n"


def _parameters(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in ("format", "out"):
            continue
        out[k] = list(v) if isinstance(v, tuple) else v
    return out


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    started = datetime.now(timezone.utc)
    t0 = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        result = COMMANDS[args.command](args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FourRankConsistencyError as e:
        print(f"internal consistency error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    payload = render(result, args.format)
    manifest = {
        "version": __version__,
        "command": ["unitindex", *argv],
        "parameters": _parameters(args),
        "started_at": started.isoformat(),
        "elapsed_seconds": time.perf_counter() - t0,
    }
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(payload)
        with open(args.out + ".manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        sys.stdout.write(payload)
        print(json.dumps(manifest, sort_keys=True), file=sys.stderr)
    return EXIT_VERIFY if result.failed else EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
