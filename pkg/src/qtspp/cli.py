"""Command-line interface.

Exit codes follow one contract everywhere: 0 means verified/true/validated,
1 means mismatch/false/refuted, 2 means usage or data errors. ``--json``
switches the machine-readable output; verdicts are identical in both modes.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import guess as guess_mod
from . import okada, ore, tspp
from .qcomb import orbit_product
from .qfield import PrimePoint, RatFunc
from .guess import AnsatzStructure, DEFAULT_SEED

_IDENTITY_FLAGS = {"1": "one", "2": "two", "2p": "two_prime", "3": "three", "3p": "three_prime"}


@dataclass
class RunConfig:
    """Validated flag combinations, checked before any computation runs."""

    command: str
    subcommand: str
    as_json: bool = False
    seed: int = DEFAULT_SEED
    primes: list[int] = field(default_factory=list)
    cap_enum: int = tspp.DEFAULT_ENUMERATION_CAP
    cap_n: int = okada.DEFAULT_N_CAP

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        cfg = cls(
            command=args.command,
            subcommand=args.subcommand,
            as_json=getattr(args, "json", False),
            seed=getattr(args, "seed", DEFAULT_SEED),
            primes=list(getattr(args, "prime", []) or []),
            cap_enum=getattr(args, "cap_enum", tspp.DEFAULT_ENUMERATION_CAP),
            cap_n=getattr(args, "cap_n", okada.DEFAULT_N_CAP) or okada.DEFAULT_N_CAP,
        )
        n = getattr(args, "n", None)
        if n is not None and (cfg.command, cfg.subcommand) != ("ore", "apply") and n < 0:
            raise ValueError("--n must be nonnegative")
        if getattr(args, "i", None) is not None and getattr(args, "which", None) not in ("2", "2p"):
            raise ValueError("--i only applies to --which 2 or 2p")
        for p in cfg.primes:
            if p < 3:
                raise ValueError(f"--prime {p} is not a usable odd prime")
        return cfg


def _emit(payload: dict, as_json: bool, text_lines: list[str]):
    if as_json:
        print(json.dumps(payload, indent=2))
    else:
        for line in text_lines:
            print(line)


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


# -- tspp -------------------------------------------------------------------


def _cmd_tspp_verify(args) -> int:
    gp = tspp.generating_polynomial(args.n, cap=args.cap_enum)
    rhs = orbit_product(args.n)
    match = gp == rhs
    count = gp.eval_int(q=1)
    payload = {"n": args.n, "count": count, "poly": gp.to_json(), "matches_product": match}
    _emit(
        payload,
        args.json,
        [
            f"n = {args.n}: {count} totally symmetric plane partitions",
            f"orbit generating polynomial: {gp}",
            f"product formula:             {rhs}",
            f"match: {match}",
        ],
    )
    return 0 if match else 1


# -- okada ------------------------------------------------------------------


def _cmd_okada_det(args) -> int:
    report = okada.verify_determinant(args.n, cap=args.cap_n)
    payload = {
        "n": args.n,
        "det": report.lhs.to_json(),
        "expected": report.rhs.to_json(),
        "verified": report.verified,
    }
    _emit(
        payload,
        args.json,
        [
            f"det (Okada matrix, n={args.n}) = {report.lhs}",
            f"squared orbit product         = {report.rhs}",
            f"verified: {report.verified}",
        ],
    )
    return 0 if report.verified else 1


def _cmd_okada_cofactors(args) -> int:
    c = okada.solve_cofactors(args.n, cap=args.cap_n)
    payload = c.to_json()
    _emit(
        payload,
        args.json,
        [f"c[{j}] = {c[j]}" for j in range(1, args.n + 1)],
    )
    return 0


def _report_payload(rep: okada.IdentityReport) -> dict:
    return {
        "n": rep.n,
        "identity": rep.identity,
        "i": rep.i,
        "verified": rep.verified,
        "lhs": rep.lhs.to_json(),
        "rhs": rep.rhs.to_json(),
    }


def _cmd_okada_identities(args) -> int:
    n = args.n
    if args.which is None:
        reports = okada.identity_reports(n, cap=args.cap_n)
    else:
        label = _IDENTITY_FLAGS[args.which]
        cof = okada.solve_cofactors(n, cap=args.cap_n)
        if label in ("two", "two_prime"):
            rows = [args.i] if args.i is not None else list(range(1, n))
            if not rows:
                raise ValueError(f"identity {args.which} needs n >= 2")
            reports = [okada.check_identity(n, label, i=i, cofactors=cof, cap=args.cap_n) for i in rows]
        else:
            reports = [okada.check_identity(n, label, cofactors=cof, cap=args.cap_n)]
    ok = all(r.verified for r in reports)
    payload = {"n": n, "verified": ok, "reports": [_report_payload(r) for r in reports]}
    lines = [
        f"identity {r.identity}" + (f" (i={r.i})" if r.i is not None else "") + f": {'ok' if r.verified else 'FAILED'}"
        for r in reports
    ] + [f"all verified: {ok}"]
    _emit(payload, args.json, lines)
    return 0 if ok else 1


# -- ore --------------------------------------------------------------------


def _load_table(path: str) -> ore.SequenceTable:
    return ore.SequenceTable.from_json(_load_json(path))


def _cmd_ore_apply(args) -> int:
    op = ore.OreOperator.from_json(_load_json(args.op))
    table = _load_table(args.table)
    value = ore.apply(op, table, (args.n, args.j))
    if isinstance(value, RatFunc):
        payload = {"n": args.n, "j": args.j, "value": value.to_json()}
        _emit(payload, args.json, [f"value at (n={args.n}, j={args.j}): {value}"])
    else:
        payload = {"n": args.n, "j": args.j, "value": value, "prime": table.prime_point.p}
        _emit(payload, args.json, [f"value at (n={args.n}, j={args.j}) mod {table.prime_point.p}: {value}"])
    return 0


def _cmd_ore_annihilates(args) -> int:
    op = ore.OreOperator.from_json(_load_json(args.op))
    table = _load_table(args.table)
    result = ore.annihilates(op, table, min_points=args.min_points)
    _emit({"annihilates": result}, args.json, [f"annihilates: {result}"])
    return 0 if result else 1


def _cmd_ore_divide(args) -> int:
    a = ore.OreOperator.from_json(_load_json(args.a))
    b = ore.OreOperator.from_json(_load_json(args.b))
    q, r = ore.right_divide(a, b)
    payload = {"quotient": q.to_json(), "remainder": r.to_json(), "remainder_zero": r.is_zero}
    _emit(payload, args.json, [f"quotient:  {q}", f"remainder: {r}"])
    return 0 if r.is_zero else 1


def _cmd_ore_leftmul(args) -> int:
    a = ore.OreOperator.from_json(_load_json(args.a))
    b = ore.OreOperator.from_json(_load_json(args.b))
    result = ore.is_left_multiple(a, b)
    _emit({"left_multiple": result}, args.json, [f"left multiple: {result}"])
    return 0 if result else 1


def _cmd_ore_telescope(args) -> int:
    cert = ore.TelescopingCertificate.from_json(_load_json(args.cert))
    summand = ore.SummandTable.from_json(_load_json(args.summand))
    result = ore.verify_telescoping(cert, summand, (args.from_j, args.to_j))
    _emit({"verified": result}, args.json, [f"telescoping certificate verified: {result}"])
    return 0 if result else 1


# -- guess ------------------------------------------------------------------


def _cmd_guess_run(args) -> int:
    table = _load_table(args.table)
    structure = AnsatzStructure.from_json(_load_json(args.stencil))
    report = guess_mod.guess_operators(
        table,
        structure,
        oversample=args.oversample,
        holdout=args.holdout,
        primes=args.prime or None,
        seed=args.seed,
        exact=args.exact,
        max_candidates=args.max_candidates,
    )
    lines = [
        f"status: {report.status}",
        f"operators: {len(report.operators)}",
        f"training points: {report.training_points}, holdout: {report.validation_points}",
        f"primes: {report.primes_used}",
    ] + [f"  {op}" for op in report.operators]
    _emit(report.to_json(), args.json, lines)
    return 0 if report.status == "validated" else 1


def _cmd_guess_escalate(args) -> int:
    table = _load_table(args.table)
    report = guess_mod.escalate(
        table,
        max_total_shift=args.max_shift,
        max_degree=args.max_degree,
        budget_seconds=args.budget_seconds,
        diagonal=args.diagonal,
        oversample=args.oversample,
        holdout=args.holdout,
        seed=args.seed,
        exact=args.exact,
    )
    if report is None:
        _emit({"status": "exhausted"}, args.json, ["no structure validated within the budget"])
        return 1
    lines = [
        f"validated structure: stencil={list(report.structure.stencil)} degrees={list(report.structure.degrees)}",
        f"operators: {len(report.operators)}",
    ] + [f"  {op}" for op in report.operators]
    _emit(report.to_json(), args.json, lines)
    return 0


def _cmd_guess_table(args) -> int:
    prime_point = None
    mode = "exact"
    if args.mod:
        import random as _random

        mode = "mod"
        rng = _random.Random(args.seed)
        if args.prime:
            prime_point = PrimePoint.random(rng, p=args.prime[0])
        else:
            prime_point = PrimePoint.random(rng, bits=args.prime_bits)
    table = guess_mod.build_table(
        range(args.from_n, args.to_n + 1),
        args.source,
        mode=mode,
        prime_point=prime_point,
        cap=args.cap_n,
        flat=args.flat,
    )
    data = table.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(data, fh)
        print(f"wrote {len(table)} points to {args.out}")
    else:
        print(json.dumps(data, indent=2))
    return 0


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qtspp",
        description="Exact desk-scale toolkit for the q-enumeration of totally "
        "symmetric plane partitions: enumeration vs. product formula, Okada "
        "determinants and cofactor identities, shift-operator utilities, and "
        "recurrence guessing.",
    )
    top = parser.add_subparsers(dest="command", required=True)

    p_tspp = top.add_parser("tspp", help="enumeration against the product formula")
    tspp_sub = p_tspp.add_subparsers(dest="subcommand", required=True)
    p = tspp_sub.add_parser("verify", help="enumerate TSPPs and compare with the product formula")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--cap-enum", type=int, default=tspp.DEFAULT_ENUMERATION_CAP)
    p.set_defaults(func=_cmd_tspp_verify)

    p_okada = top.add_parser("okada", help="determinant and cofactor identities")
    okada_sub = p_okada.add_subparsers(dest="subcommand", required=True)
    p = okada_sub.add_parser("det", help="verify det == squared orbit product")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--cap-n", type=int, default=okada.DEFAULT_N_CAP)
    p.set_defaults(func=_cmd_okada_det)
    p = okada_sub.add_parser("cofactors", help="solve the bordered cofactor system")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--cap-n", type=int, default=okada.DEFAULT_N_CAP)
    p.set_defaults(func=_cmd_okada_cofactors)
    p = okada_sub.add_parser("identities", help="check the cofactor identities")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--which", choices=sorted(_IDENTITY_FLAGS), default=None)
    p.add_argument("--i", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--cap-n", type=int, default=okada.DEFAULT_N_CAP)
    p.set_defaults(func=_cmd_okada_identities)

    p_ore = top.add_parser("ore", help="shift-operator utilities")
    ore_sub = p_ore.add_subparsers(dest="subcommand", required=True)
    p = ore_sub.add_parser("apply", help="apply an operator to a table at a point")
    p.add_argument("--op", required=True)
    p.add_argument("--table", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_ore_apply)
    p = ore_sub.add_parser("annihilates", help="does the operator annihilate the table?")
    p.add_argument("--op", required=True)
    p.add_argument("--table", required=True)
    p.add_argument("--min-points", type=int, default=ore.DEFAULT_MIN_POINTS)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_ore_annihilates)
    p = ore_sub.add_parser("divide", help="skew right division A = Q*B + R")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_ore_divide)
    p = ore_sub.add_parser("leftmul", help="is A a left multiple of B?")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_ore_leftmul)
    p = ore_sub.add_parser("telescope", help="verify a telescoping certificate")
    p.add_argument("--cert", required=True)
    p.add_argument("--summand", required=True)
    p.add_argument("--from", dest="from_j", type=int, required=True)
    p.add_argument("--to", dest="to_j", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_ore_telescope)

    p_guess = top.add_parser("guess", help="recurrence guessing")
    guess_sub = p_guess.add_subparsers(dest="subcommand", required=True)
    p = guess_sub.add_parser("run", help="fit operators of a given structure to a table")
    p.add_argument("--table", required=True)
    p.add_argument("--stencil", required=True)
    p.add_argument("--oversample", type=int, default=guess_mod.DEFAULT_OVERSAMPLE)
    p.add_argument("--holdout", type=int, default=guess_mod.DEFAULT_HOLDOUT)
    p.add_argument("--prime", type=int, action="append", default=[])
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--max-candidates", type=int, default=guess_mod.DEFAULT_MAX_CANDIDATES)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_guess_run)
    p = guess_sub.add_parser("escalate", help="try structures of increasing size within a budget")
    p.add_argument("--table", required=True)
    p.add_argument("--max-shift", type=int, default=4)
    p.add_argument("--max-degree", type=int, default=6)
    p.add_argument("--budget-seconds", type=float, default=60.0)
    p.add_argument("--diagonal", action="store_true")
    p.add_argument("--oversample", type=int, default=guess_mod.DEFAULT_OVERSAMPLE)
    p.add_argument("--holdout", type=int, default=guess_mod.DEFAULT_HOLDOUT)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_guess_escalate)
    p = guess_sub.add_parser("table", help="build a cofactor/diagonal table file")
    p.add_argument("--source", choices=["cofactors", "diagonal"], required=True)
    p.add_argument("--from", dest="from_n", type=int, required=True)
    p.add_argument("--to", dest="to_n", type=int, required=True)
    p.add_argument("--mod", action="store_true")
    p.add_argument("--prime", type=int, action="append", default=[])
    p.add_argument("--prime-bits", type=int, default=guess_mod.DEFAULT_GUESS_PRIME_BITS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--cap-n", type=int, default=None)
    p.add_argument("--flat", action="store_true", help="key diagonal values as (n, 0) instead of (n, n)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_guess_table)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        RunConfig.from_args(args)
        return args.func(args)
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
