"""Command-line front end.

    helpcore verify A7
    helpcore verify J1 --orders 30
    helpcore solve A6 --order 6 --no-blocks
    helpcore multiplicities A6 --char 2 --order 6 --dist "[[1],[1,0],[-2,2,1]]"
    helpcore block A7 --leaf 2 --prime 3 --dist "[[1],[0,1],[2,-1,1,-1]]" --xi 1
    helpcore export-system A7 --order 12 --powers "[[1],[0,1],[2,-1],[0,0,0,1]]"
    helpcore validate path/to/table.json

Tables are bundled names, paths, or '-' for standard input.  Exit status of
`verify`/`solve`: 0 when every order has no units or only trivial ones, 2 when
critical distributions remain, 1 on errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .blocks import block_inequality, block_post_filter, evaluate_block
from .constraints import CharRef, build_extended_system, build_system, multiplicities
from .ctbl import CharacterTable, lint, load_table
from .filters import Justification, PadicHypothesis, kp_classify, padic_post_filter
from .solver import SolverOptions, solve_extended, verify_zc
from .units import Distribution, Status, Verdict

log = logging.getLogger("helpcore")

EXIT_OK, EXIT_ERROR, EXIT_CRITICAL = 0, 1, 2


@dataclass
class RunConfig:
    table: str
    orders: list[int] | None = None
    congruences: bool = True
    brauer: bool = True
    blocks: bool = True
    padic: list[str] = field(default_factory=list)  # "p:anchor[:justification]"
    kp: bool = True
    extended: int | None = None
    format: str = "human"
    cap: int = 20000

    def options(self) -> SolverOptions:
        return SolverOptions(congruences=self.congruences, brauer=self.brauer, cap=self.cap)


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# argument helpers


def parse_padic(table: CharacterTable, arg: str) -> PadicHypothesis:
    """'p:anchor[:justification]' with anchor a class name list joined by '/' or 'any'."""
    parts = arg.split(":")
    if len(parts) not in (2, 3):
        raise UsageError(f"--padic expects p:anchor[:justification], got {arg!r}")
    try:
        p = int(parts[0])
    except ValueError:
        raise UsageError(f"--padic: {parts[0]!r} is not a prime") from None
    if parts[1] == "any":
        anchors = None
    else:
        try:
            anchors = tuple(table.class_index(nm) for nm in parts[1].split("/"))
        except KeyError as exc:
            raise UsageError(f"--padic: unknown class {exc}") from None
    just = Justification.USER_ASSERTED
    if len(parts) == 3:
        names = {"kernel": Justification.NORMAL_P_SUBGROUP_KERNEL, "user": Justification.USER_ASSERTED}
        names.update({j.value: j for j in Justification})
        if parts[2] not in names:
            raise UsageError(f"--padic: justification must be one of {sorted(names)}")
        just = names[parts[2]]
    hyp = PadicHypothesis(p, anchors, just)
    try:
        hyp.check(table)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return hyp


def parse_nested(text: str):
    try:
        value = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"cannot parse distribution {text!r}: {exc}") from None
    if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
        raise UsageError("a distribution is a list of integer lists, e.g. [[1],[0,1],[2,-1,1,-1]]")
    return value


def parse_dist(table: CharacterTable, order: int, text: str) -> Distribution:
    try:
        return Distribution.from_nested(table, order, parse_nested(text))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _q(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# verify / solve


def run_verify(cfg: RunConfig, table: CharacterTable, progress=None) -> list[Verdict]:
    filters = []
    if cfg.blocks:
        filters.append(block_post_filter)
    hyps = [parse_padic(table, s) for s in cfg.padic]
    if hyps:
        filters.append(padic_post_filter(*hyps))
    verdicts = verify_zc(table, cfg.orders, cfg.options(), filters, progress)
    if not cfg.kp:
        for v in verdicts:
            v.kp = {}
    else:
        for v in verdicts:
            v.kp = kp_classify(table, v.critical)
    return verdicts


def overall(verdicts: list[Verdict]) -> tuple[int, str]:
    if any(v.status is Status.ERROR for v in verdicts):
        return EXIT_ERROR, "errors"
    crit = [v.order for v in verdicts if v.status is Status.CRITICAL]
    if crit:
        return EXIT_CRITICAL, "critical distributions remain at orders " + ", ".join(map(str, crit))
    return EXIT_OK, "ZC1 verified"


def killed_by(reason: str) -> str:
    if reason.startswith("block inequality"):
        return "block_inequality"
    if reason.startswith("p-adic"):
        return "padic_filter"
    return "other"


def verdict_json(table: CharacterTable, v: Verdict) -> dict:
    # no timings here, so the structured report is identical across runs
    return {
        "order": v.order,
        "status": v.status.value,
        "critical": [d.to_nested(table) for d in v.critical],
        "trivial": [d.to_nested(table) for d in v.trivial],
        "removed": [
            {"distribution": d.to_nested(table), "killed_by": killed_by(why), "reason": why} for d, why in v.removed
        ],
        "kp": [{"distribution": d.to_nested(table), "holds": ok} for d, ok in v.kp.items()],
        "message": v.message,
    }


def report_json(cfg: RunConfig, table: CharacterTable, verdicts: list[Verdict]) -> dict:
    code, summary = overall(verdicts)
    return {
        "group": table.group_name,
        "group_order": table.group_order,
        "options": {
            "congruences": cfg.congruences,
            "brauer": cfg.brauer,
            "blocks": cfg.blocks,
            "padic": list(cfg.padic),
            "kp": cfg.kp,
        },
        "orders": [verdict_json(table, v) for v in verdicts],
        "verdict": summary,
        "exit_code": code,
    }


def format_verdict(table: CharacterTable, v: Verdict) -> list[str]:
    head = f"order {v.order:>3}: {v.status.value}"
    if v.status is Status.ALL_TRIVIAL:
        head += f" ({len(v.trivial)} distribution{'s' if len(v.trivial) != 1 else ''})"
    elif v.status is Status.CRITICAL:
        head += f" ({len(v.critical)}, plus {len(v.trivial)} trivial)"
    elif v.status is Status.ERROR:
        head += f": {v.message}"
    lines = [f"{head}  [{v.seconds:.2f}s]"]
    for d in v.critical:
        kp = ""
        if d in v.kp:
            kp = "  KP holds" if v.kp[d] else "  KP fails"
        lines.append(f"    critical {d.format(table)}{kp}")
    for d, why in v.removed:
        lines.append(f"    removed  {d.format(table)}: {why}")
    return lines


def describe_setup(cfg: RunConfig, table: CharacterTable) -> str:
    bits = [f"{table.group_name} (order {table.group_order}, exponent {table.exponent})"]
    if cfg.brauer and table.brauer:
        bits.append("Brauer mod " + ",".join(map(str, sorted(table.brauer))))
    bits.append("congruences " + ("on" if cfg.congruences else "off"))
    bits.append(f"blocks {'on' if cfg.blocks else 'off'} ({len(table.blocks)} records)")
    if cfg.padic:
        bits.append("p-adic " + " ".join(cfg.padic))
    return "; ".join(bits)


def cmd_verify(cfg: RunConfig, out=sys.stdout) -> int:
    table = load_table(cfg.table)
    if cfg.orders:
        bad = [n for n in cfg.orders if table.exponent % n]
        if bad:
            raise UsageError(
                f"orders {bad} do not divide the exponent {table.exponent}; units of V(ZG) have orders dividing it"
            )
    human = cfg.format == "human"
    if human:
        print(describe_setup(cfg, table), file=out)

    def progress(v):
        if human:
            for line in format_verdict(table, v):
                print(line, file=out)
            out.flush()

    verdicts = run_verify(cfg, table, progress)
    code, summary = overall(verdicts)
    if human:
        print(summary, file=out)
    else:
        json.dump(report_json(cfg, table, verdicts), out, indent=1)
        print(file=out)
    return code


def cmd_solve_extended(cfg: RunConfig, order: int, out=sys.stdout) -> int:
    table = load_table(cfg.table)
    sols = solve_extended(table, order, cfg.extended, options=cfg.options())
    if cfg.format == "human":
        print(f"{table.group_name}, order {order}, coefficients in Z[zeta_{cfg.extended}]: {len(sols)} solutions", file=out)
        for s in sols:
            tag = "  (non-rational)" if s.nonrational() else ""
            body = ", ".join(f"{nm}={v}" for nm, v in zip(s.variables, s.values) if v)
            print(f"    {body}{tag}", file=out)
    else:
        json.dump(
            {
                "group": table.group_name,
                "order": order,
                "conductor": cfg.extended,
                "solutions": [{"variables": list(s.variables), "values": list(s.values), "nonrational": s.nonrational()} for s in sols],
            },
            out,
            indent=1,
        )
        print(file=out)
    return EXIT_OK if not sols or not any(s.nonrational() for s in sols) else EXIT_CRITICAL


# ---------------------------------------------------------------------------
# spot checks


def _char_ref(table: CharacterTable, index: int, prime: int | None) -> CharRef:
    if prime is None:
        count = len(table.irreducibles)
    elif prime in table.brauer:
        count = len(table.brauer[prime].irreducibles)
    else:
        raise UsageError(f"no {prime}-Brauer table for {table.group_name}")
    if not 1 <= index <= count:
        raise UsageError(f"character index must be in 1..{count}")
    return CharRef(index - 1, prime)


def cmd_multiplicities(table: CharacterTable, ref: CharRef, dist: Distribution, fmt: str, out=sys.stdout) -> int:
    n = dist.order
    mu = multiplicities(table, ref, dist)
    bad = [ell for ell, x in enumerate(mu) if x.denominator != 1 or x < 0]
    if fmt == "json":
        json.dump(
            {
                "character": ref.label(),
                "distribution": dist.to_nested(table),
                "multiplicities": [_q(x) for x in mu],
                "violations": bad,
            },
            out,
        )
        print(file=out)
    else:
        print(f"{ref.label()} on u of order {n}, {dist.format(table)}", file=out)
        for ell, x in enumerate(mu):
            flag = "  <- not a non-negative integer" if ell in bad else ""
            print(f"    mu(z{n}^{ell}) = {_q(x)}{flag}", file=out)
        spectrum = [f"z{n}^{ell}" if ell else "1" for ell, x in enumerate(mu) if x > 0 for _ in range(int(x))]
        if not bad:
            print(f"    eigenvalues: {', '.join(spectrum)}", file=out)
    return EXIT_OK if not bad else EXIT_CRITICAL


def _find_block(table: CharacterTable, number: int | None, leaf: int | None, prime: int | None):
    if number is not None:
        if not 1 <= number <= len(table.blocks):
            raise UsageError(f"block number must be in 1..{len(table.blocks)}")
        return table.blocks[number - 1]
    cands = [b for b in table.blocks if (leaf is None or b.characters[0] == leaf - 1) and (prime is None or b.prime == prime)]
    if len(cands) != 1:
        raise UsageError(f"{len(cands)} block records match; give --block N (see `helpcore block {table.group_name} --list`)")
    return cands[0]


def cmd_block(table: CharacterTable, block, dist: Distribution, xi, zeta, fmt: str, out=sys.stdout) -> int:
    if xi is None:
        rows = [(inst.xi, inst.zeta, inst.value) for inst in evaluate_block(table, block, dist)]
    else:
        rows = [(xi, zeta, block_inequality(table, block, dist, xi, zeta))]
    worst = min(v for _, _, v in rows)
    verdict = "contradiction" if worst < 0 else "consistent"
    if fmt == "json":
        json.dump(
            {
                "block": block.label,
                "distribution": dist.to_nested(table),
                "values": [{"xi": k, "zeta": j, "value": _q(v)} for k, j, v in rows],
                "verdict": verdict,
            },
            out,
        )
        print(file=out)
    else:
        m = dist.order // block.prime
        print(f"{block.label} on u of order {dist.order}, {dist.format(table)}", file=out)
        for k, j, v in rows:
            print(f"    xi = z{m}^{k}, zeta = z{block.prime}^{j}: {_q(v)}", file=out)
        print(verdict, file=out)
    return EXIT_CRITICAL if worst < 0 else EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def _add_common(p):
    p.add_argument("table", help="bundled table name, path to a table file, or '-' for stdin")
    p.add_argument("--format", choices=["human", "json"], default="human")


def _add_filters(p):
    p.add_argument("--no-congruences", action="store_true", help="drop the power-congruence constraints")
    p.add_argument("--no-brauer", action="store_true", help="use ordinary characters only")
    p.add_argument("--no-blocks", action="store_true", help="skip the defect-1 block inequalities")
    p.add_argument("--padic", action="append", default=[], metavar="P:ANCHOR[:JUST]", help="p-part hypothesis; ANCHOR is a class name, names joined by '/', or 'any'; JUST is kernel or user")
    p.add_argument("--no-kp", action="store_true", help="skip the (KP) annotation")
    p.add_argument("--cap", type=int, default=20000, help="projection size before switching to LP bounds")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="helpcore", description="Exact HeLP computations for torsion units of integral group rings.")
    ap.add_argument("--version", action="version", version=f"helpcore {__version__}")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run HeLP over all (or the given) orders")
    _add_common(p)
    _add_filters(p)
    p.add_argument("--orders", type=lambda s: [int(x) for x in s.split(",")], help="comma-separated orders (their divisors are solved too)")

    p = sub.add_parser("solve", help="solve a single order")
    _add_common(p)
    _add_filters(p)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--extended", type=int, metavar="M", help="partial augmentations of u in the integers of Q(zeta_M)")

    p = sub.add_parser("multiplicities", help="eigenvalue multiplicities of a character on a distribution")
    _add_common(p)
    p.add_argument("--char", type=int, required=True, help="1-based character number")
    p.add_argument("--prime", type=int, help="use the p-Brauer character instead")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--dist", required=True, help="nested distribution, e.g. [[1],[0,1],[2,-1,1,-1]]")

    p = sub.add_parser("block", help="evaluate a block inequality")
    _add_common(p)
    p.add_argument("--list", action="store_true", help="list the table's block records")
    p.add_argument("--block", type=int, help="1-based block record number")
    p.add_argument("--leaf", type=int, help="select the record by its leaf character (1-based)")
    p.add_argument("--prime", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--dist")
    p.add_argument("--xi", type=int, help="xi = z_m^XI (default: all)")
    p.add_argument("--zeta", type=int, default=1, help="zeta = z_p^ZETA")

    p = sub.add_parser("export-system", help="print a constraint system as text")
    _add_common(p)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--powers", default="[]", help="nested vectors of the proper powers (the distribution without its last vector)")
    p.add_argument("--no-congruences", action="store_true")
    p.add_argument("--no-brauer", action="store_true")
    p.add_argument("--extended", type=int, metavar="M")

    p = sub.add_parser("validate", help="check a table file")
    _add_common(p)
    return ap


def _config(args, orders=None) -> RunConfig:
    return RunConfig(
        table=args.table,
        orders=orders,
        congruences=not args.no_congruences,
        brauer=not args.no_brauer,
        blocks=not args.no_blocks,
        padic=list(args.padic),
        kp=not args.no_kp,
        extended=getattr(args, "extended", None),
        format=args.format,
        cap=args.cap,
    )


def dispatch(args, out=sys.stdout) -> int:
    cmd = args.command
    if cmd == "verify":
        return cmd_verify(_config(args, args.orders), out)
    if cmd == "solve":
        if args.extended:
            return cmd_solve_extended(_config(args), args.order, out)
        return cmd_verify(_config(args, [args.order]), out)
    if cmd == "validate":
        table = load_table(args.table, check=False)
        issues = lint(table)
        if args.format == "json":
            json.dump({"group": table.group_name, "issues": issues}, out)
            print(file=out)
        else:
            for msg in issues:
                print(msg, file=out)
            print(f"{table.group_name}: {'valid' if not issues else f'{len(issues)} problems'}", file=out)
        return EXIT_OK if not issues else EXIT_ERROR
    table = load_table(args.table)
    if cmd == "multiplicities":
        ref = _char_ref(table, args.char, args.prime)
        return cmd_multiplicities(table, ref, parse_dist(table, args.order, args.dist), args.format, out)
    if cmd == "block":
        if args.list:
            for i, b in enumerate(table.blocks, 1):
                print(f"{i:>3}: {b.label}; characters {[c + 1 for c in b.characters]} signs {list(b.signs)}; "
                      f"exceptional {[c + 1 for c in b.exceptional]} (sign {b.exceptional_sign}, t={b.multiplicity})", file=out)
            return EXIT_OK
        if args.order is None or args.dist is None:
            raise UsageError("block needs --order and --dist (or --list)")
        block = _find_block(table, args.block, args.leaf, args.prime)
        return cmd_block(table, block, parse_dist(table, args.order, args.dist), args.xi, args.zeta, args.format, out)
    if cmd == "export-system":
        try:
            powers = Distribution.powers_from_nested(table, args.order, parse_nested(args.powers))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if args.extended:
            system = build_extended_system(table, args.order, args.extended, powers)
        else:
            chars = None if not args.no_brauer else [CharRef(i) for i in range(len(table.irreducibles))]
            system = build_system(table, args.order, powers, chars, congruences=not args.no_congruences)
        out.write(system.export())
        return EXIT_OK
    raise UsageError(f"unknown command {cmd}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        return dispatch(args, sys.stdout)
    except (UsageError, FileNotFoundError, ValueError, KeyError) as exc:
        print(f"helpcore: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
