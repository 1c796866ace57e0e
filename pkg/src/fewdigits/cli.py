"""Command-line front end.

Every subcommand prints a JSON envelope (command, config, result, content
hash) by default; table commands can print CSV instead.

    fewdigits enumerate --base 2 -k 3 --count 10
    fewdigits solve --base 2 --primes 3,5 --mmax 20
    fewdigits certify --base 2 --primes 3,5
    fewdigits threshold --n 1e100 --eps 0.1
    fewdigits check42 --mmax 30 --expect-clean-above 10

Exit status: 0 on success, 2 on usage or domain errors, 3 when ``check42``
finds a violation above ``--expect-clean-above``.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from dataclasses import asdict, dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction

from . import arithmetic, effective_bounds, lfl_bounds, sparse_digits, sunit_solver
from .rigorous import DEFAULT_PRECISION, MAX_PRECISION, MIN_PRECISION

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FINDING = 3

ENV_PRECISION = "FEWDIGITS_PRECISION"
ENV_WORKERS = "FEWDIGITS_WORKERS"

COMMANDS = (
    "enumerate", "spart", "pfactor", "radical", "smooth", "bound",
    "certify", "threshold", "solve", "check42", "trend", "ptable",
)  # fmt: skip

CSV_COLUMNS = {
    "enumerate": ["j", "value", "terms"],
    "enumerate_three_term": ["j", "value", "witnesses"],
    "solve": ["u", "m", "n", "d3", "d2", "d1", "r"],
    "check42": ["m", "n", "u", "s_part", "cap"],
    "trend": ["j", "u", "s_part", "cofactor", "below"],
    "ptable": ["j", "u", "gpf", "gpf_status", "threshold", "exceeds", "witnesses"],
}


@dataclass(frozen=True)
class RunConfig:
    precision: int = DEFAULT_PRECISION
    trial_ceiling: int = 10**6
    second_stage: bool = False
    workers: int = 1
    format: str = "json"
    seed: int = 0

    def __post_init__(self):
        if not MIN_PRECISION <= self.precision <= MAX_PRECISION:
            raise ValueError(f"precision must lie in [{MIN_PRECISION}, {MAX_PRECISION}]")
        if self.workers < 1:
            raise ValueError("worker count must be >= 1")
        if self.format not in ("json", "csv", "text"):
            raise ValueError(f"unknown format {self.format!r}")

    @property
    def effort(self) -> arithmetic.FactorEffort:
        return arithmetic.FactorEffort(self.trial_ceiling, self.second_stage)


def parse_int(text: str) -> int:
    """Integer from decimal text, ``1e100`` shorthand or ``2^64``."""
    text = text.strip().replace("_", "")
    if "^" in text:
        base, exp = text.split("^", 1)
        return parse_int(base) ** parse_int(exp)
    try:
        d = Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if d != d.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(d)


def parse_int_list(text: str) -> list[int]:
    return [parse_int(t) for t in text.split(",") if t.strip()]


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def content_hash(payload) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def envelope(command: list[str], config: RunConfig, result) -> dict:
    return {
        "command": command,
        "config": asdict(config),
        "result": result,
        "hash": content_hash(result),
    }


# -- handlers: each returns (payload, table name or None, exit code) -----------


def _enumerate(args, cfg):
    if args.three_term:
        a, c = args.three_term
        stream = sparse_digits.enumerate_three_term(a, c, count=args.count, ceiling=args.ceiling)
        rows = [dict(j=j, **tv.to_dict()) for j, tv in enumerate(stream, start=1)]
        return {"a": a, "c": c, "values": rows}, "enumerate_three_term", EXIT_OK
    if args.base is None or args.k is None:
        raise ValueError("--base and -k are required unless --three-term is given")
    if args.count is None and args.ceiling is None:
        raise ValueError("give --count or --ceiling")
    stream = sparse_digits.enumerate_sparse(args.base, args.k, count=args.count, ceiling=args.ceiling)
    rows = [dict(j=j, **su.to_dict()) for j, su in enumerate(stream, start=1)]
    return {"base": args.base, "k": args.k, "values": rows}, "enumerate", EXIT_OK


def _spart(args, cfg):
    return arithmetic.s_part(args.n, args.primes).to_dict(), None, EXIT_OK


def _pfactor(args, cfg):
    p, status = arithmetic.greatest_prime_factor(args.n, cfg.effort)
    factors, rest = arithmetic.factorize(args.n, cfg.effort)
    payload = {
        "n": str(args.n),
        "gpf": str(p),
        "status": status,
        "factors": [[str(q), e] for q, e in sorted(factors.items())],
        "unfactored": str(rest),
    }
    return payload, None, EXIT_OK


def _radical(args, cfg):
    q, status = arithmetic.radical(args.n, cfg.effort)
    return {"n": str(args.n), "radical": str(q), "status": status}, None, EXIT_OK


def _smooth(args, cfg):
    verdict = arithmetic.is_smooth(args.n, args.bound, cfg.effort)
    word = {True: "true", False: "false", None: "unknown"}[verdict]
    return {"n": str(args.n), "bound": str(args.bound), "smooth": word}, None, EXIT_OK


def _read_json(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _bound(args, cfg):
    data = _read_json(args.instance)
    inst = lfl_bounds.LinearFormInstance.from_dict(data)
    if args.kind == "matveev":
        ev = lfl_bounds.matveev_bound(inst, cfg.precision)
    else:
        p = args.p if args.p is not None else int(data["p"])
        delta = args.delta if args.delta is not None else Fraction(data.get("delta", "1/2"))
        B = data.get("B") if args.B is None else args.B
        B_n = data.get("B_n") if args.B_n is None else args.B_n
        ev = lfl_bounds.yu_bound(
            p,
            inst,
            None if B is None else Fraction(str(B)),
            None if B_n is None else Fraction(str(B_n)),
            delta,
            cfg.precision,
        )
    return {"instance": inst.to_dict(), "evaluation": ev.to_dict()}, None, EXIT_OK


def _certify(args, cfg):
    cert = effective_bounds.three_digit_certificate(args.base, args.primes, args.cofactor_cap, cfg.precision)
    return cert.to_dict(), None, EXIT_OK


def _threshold(args, cfg):
    enc = effective_bounds.smooth_threshold_enclosure(args.n, args.eps, cfg.precision)
    payload = {"n": str(args.n), "eps": str(args.eps), "value": enc.mid(), "enclosure": enc.to_dict()}
    return payload, None, EXIT_OK


def _solve(args, cfg):
    recs = sunit_solver.solve_three_digit(
        args.base,
        args.primes,
        args.mmax,
        workers=cfg.workers,
        include_two_digit=not args.three_only,
        strategy=args.strategy,
        residue_power=args.residue_power,
    )
    payload = {
        "base": args.base,
        "primes": sorted(args.primes),
        "m_max": args.mmax,
        "solutions": [r.to_dict() for r in recs],
    }
    return payload, "solve", EXIT_OK


def _check42(args, cfg):
    found = sunit_solver.check_problem42(args.mmax)
    code = EXIT_OK
    if args.expect_clean_above is not None and any(v.m > args.expect_clean_above for v in found):
        code = EXIT_FINDING
    payload = {"m_max": args.mmax, "primes": [3, 5], "violations": [v.to_dict() for v in found]}
    return payload, "check42", code


def _trend(args, cfg):
    rows = sunit_solver.verify_spart_trend(args.base, args.k, args.primes, args.count, args.eps)
    payload = {
        "base": args.base,
        "k": args.k,
        "primes": sorted(args.primes),
        "eps": str(args.eps),
        "rows": [r.to_dict() for r in rows],
    }
    return payload, "trend", EXIT_OK


def _ptable(args, cfg):
    rows = sunit_solver.p_table(args.source, tuple(args.params), args.count, cfg.effort, args.eps, args.start)
    payload = {
        "source": args.source,
        "params": list(args.params),
        "eps": str(args.eps),
        "rows": [r.to_dict() for r in rows],
    }
    return payload, "ptable", EXIT_OK


HANDLERS = {
    "enumerate": _enumerate,
    "spart": _spart,
    "pfactor": _pfactor,
    "radical": _radical,
    "smooth": _smooth,
    "bound": _bound,
    "certify": _certify,
    "threshold": _threshold,
    "solve": _solve,
    "check42": _check42,
    "trend": _trend,
    "ptable": _ptable,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None, help="working precision in bits (64..4096)")
    common.add_argument("--trial-ceiling", type=parse_int, default=10**6)
    common.add_argument("--second-stage", action="store_true", help="enable Pollard-Brent after trial division")
    common.add_argument("--workers", type=int, default=None)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="fewdigits", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("enumerate", parents=[common], help="integers with few nonzero digits, increasing")
    p.add_argument("--base", type=int)
    p.add_argument("-k", type=int)
    p.add_argument("--count", type=int)
    p.add_argument("--ceiling", type=parse_int)
    p.add_argument("--three-term", type=parse_int_list, metavar="A,C", help="values a^m + c^n + 1 instead")

    for name, help_ in (("spart", "S-part and cofactor"),):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--n", type=parse_int, required=True)
        p.add_argument("--primes", type=parse_int_list, required=True)
    for name, help_ in (("pfactor", "greatest prime factor"), ("radical", "greatest square-free divisor")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--n", type=parse_int, required=True)
    p = sub.add_parser("smooth", parents=[common], help="B-smoothness test")
    p.add_argument("--n", type=parse_int, required=True)
    p.add_argument("--bound", type=parse_int, required=True)

    p = sub.add_parser("bound", parents=[common], help="linear-forms-in-logarithms bound for a JSON instance")
    p.add_argument("kind", choices=("matveev", "yu"))
    p.add_argument("--instance", required=True, help="JSON file, or - for stdin")
    p.add_argument("--p", type=int)
    p.add_argument("--delta", type=parse_fraction)
    p.add_argument("--B", type=parse_fraction)
    p.add_argument("--B-n", dest="B_n", type=parse_fraction)

    p = sub.add_parser("certify", parents=[common], help="exponent cap m0 for three-digit S-units")
    p.add_argument("--base", type=int, required=True)
    p.add_argument("--primes", type=parse_int_list, required=True)
    p.add_argument("--cofactor-cap", type=parse_int, default=None)

    p = sub.add_parser("threshold", parents=[common], help="iterated-logarithm smoothness threshold")
    p.add_argument("--n", type=parse_int, required=True)
    p.add_argument("--eps", type=parse_fraction, required=True)

    p = sub.add_parser("solve", parents=[common], help="exhaustive three-digit S-unit search")
    p.add_argument("--base", type=int, required=True)
    p.add_argument("--primes", type=parse_int_list, required=True)
    p.add_argument("--mmax", type=int, required=True)
    p.add_argument("--three-only", action="store_true", help="drop two-digit (d2 = 0) solutions")
    p.add_argument("--strategy", choices=("auto", "patterns", "units"), default="auto")
    p.add_argument("--residue-power", type=int, default=10)

    p = sub.add_parser("check42", parents=[common], help="[2^m + 2^n + 1]_{3,5} > 2^(3m/4) violations")
    p.add_argument("--mmax", type=int, required=True)
    p.add_argument("--expect-clean-above", type=int, default=None)

    p = sub.add_parser("trend", parents=[common], help="S-parts along the sparse-digit sequence")
    p.add_argument("--base", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--primes", type=parse_int_list, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--eps", type=parse_fraction, required=True)

    p = sub.add_parser("ptable", parents=[common], help="greatest prime factors against the threshold")
    p.add_argument("--source", choices=("sparse", "three_term"), required=True)
    p.add_argument("--params", type=parse_int_list, required=True, help="b,k or a,c")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--start", type=int, default=1)
    p.add_argument("--eps", type=parse_fraction, default=Fraction(1, 10))
    return parser


def _config(args) -> RunConfig:
    precision = args.precision or int(os.environ.get(ENV_PRECISION, DEFAULT_PRECISION))
    workers = args.workers or int(os.environ.get(ENV_WORKERS, 1))
    return RunConfig(precision, args.trial_ceiling, args.second_stage, workers, args.format, args.seed)


def _csv_cell(v):
    if isinstance(v, list):
        return json.dumps(v, separators=(",", ":"))
    if v is None:
        return ""
    return v


def _table_rows(payload: dict) -> list[dict]:
    for key in ("values", "solutions", "violations", "rows"):
        if key in payload:
            return payload[key]
    return [payload]


def render(env: dict, table: str | None, fmt: str) -> str:
    result = env["result"]
    if fmt == "json":
        return json.dumps(env, indent=2, sort_keys=True)
    rows = _table_rows(result)
    if fmt == "csv":
        cols = CSV_COLUMNS.get(table) or (sorted(rows[0]) if rows else [])
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for row in rows:
            w.writerow([_csv_cell(row.get(c)) for c in cols])
        return buf.getvalue().rstrip("\n")
    lines = [f"# {' '.join(env['command'])}"]
    for row in rows:
        lines.append("  ".join(f"{k}={_csv_cell(v)}" for k, v in row.items()))
    return "\n".join(lines)


def run_command(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = _config(args)
        payload, table, code = HANDLERS[args.command](args, cfg)
    except (ValueError, OverflowError, OSError, json.JSONDecodeError) as exc:
        print(f"fewdigits {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(render(envelope(argv, cfg, payload), table, cfg.format), file=out)
    return code


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
