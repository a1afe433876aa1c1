"""``n2char`` command line: characters, decompositions, Gram blocks and the bundled verification.

Exit codes: 0 success, 1 failed verification or decomposition, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, TextIO

from . import embeddings as emb
from .errors import CentralChargeMismatch, DecompositionFailure, N2CharError
from .nsmodules import ModuleLabel, character_C, conformal_weight
from .qseries import QSeries, format_fraction, pretty_fraction
from .shapovalov import (
    DEFAULT_LEVEL_CAP,
    format_monomial,
    gram_block,
    isometry_check,
    pbw_monomials,
    quotient_graded_dim,
)

GRAMMAR = """\
n2char chi --d <int> --r <int> --order <rat> [--format F]
n2char product --factors <int,int,...> --order <rat> [--format F]
n2char decompose --target <int> --factors <list> --order <rat> [--format F]
n2char embeddings --max <int> [--format F]
n2char gram --d <int> --level <rat> --charge <int> [--format F]
n2char dims --d <int> --max-level <rat> [--format F]
n2char verify --case <e6|e8|all> [--order <rat>] [--with-gram] [--format F]
F is one of table, csv, json"""

# lowest expansion degree each reference case needs
_MIN_DEGREE = {"e6": Fraction(1), "e8": Fraction(7)}
_CROSS_CHECK_DS = (3, 4, 5, 12, 30)
_CROSS_CHECK_LEVEL = Fraction(3)
_ISOMETRY_LEVEL = Fraction(5, 2)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty factor list")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="n2char", description="Exact N=2 minimal-model characters and embeddings.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def add(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("--format", choices=("table", "csv", "json"), default="table")
        return p

    p = add("chi", "character of C_r for M_d")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--order", type=_rational, required=True)

    p = add("product", "vacuum character of a tensor product of minimal models")
    p.add_argument("--factors", type=_int_list, required=True)
    p.add_argument("--order", type=_rational, required=True)

    p = add("decompose", "decompose a tensor product into modules of M_target")
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--factors", type=_int_list, required=True)
    p.add_argument("--order", type=_rational, required=True)

    p = add("embeddings", "enumerate diagonal conformal embeddings")
    p.add_argument("--max", type=int, required=True, dest="d_max")

    p = add("gram", "Shapovalov Gram block of the universal vacuum module at c_d")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--level", type=_rational, required=True)
    p.add_argument("--charge", type=int, required=True)

    p = add("dims", "graded dimensions of M_d from Gram radicals vs. the character")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--max-level", type=_rational, required=True, dest="max_level")

    p = add("verify", "reproduce the reference tables and decompositions")
    p.add_argument("--case", choices=("e6", "e8", "all"), required=True)
    p.add_argument("--order", type=_rational, default=None,
                   help="expansion degree, inclusive (default: 1 for e6 and 7 for e8)")
    p.add_argument("--with-gram", action="store_true", dest="with_gram")
    return parser


def _validate(args: argparse.Namespace) -> None:
    def need(cond: bool, flag: str, msg: str) -> None:
        if not cond:
            raise UsageError(f"{flag}: {msg}")

    verb = args.verb
    if verb == "chi":
        need(args.d >= 2, "--d", "must be at least 2")
        need(1 <= args.r <= args.d - 1, "--r", f"must lie in 1..{args.d - 1}")
        need(args.r % 2 == 1, "--r", "must be odd (NS sector with p=0)")
    if verb in ("product", "decompose"):
        need(all(d >= 2 for d in args.factors), "--factors", "every factor must be at least 2")
    if verb == "decompose":
        need(args.target >= 2, "--target", "must be at least 2")
    if verb == "embeddings":
        need(args.d_max >= 2, "--max", "must be at least 2")
    if verb in ("gram", "dims"):
        need(args.d >= 2, "--d", "must be at least 2")
        level = args.level if verb == "gram" else args.max_level
        flag = "--level" if verb == "gram" else "--max-level"
        need(level >= 0 and (2 * level).denominator == 1, flag, "must be a nonnegative multiple of 1/2")
        need(level <= DEFAULT_LEVEL_CAP, flag, f"must not exceed {pretty_fraction(DEFAULT_LEVEL_CAP)}")
    if verb == "verify" and args.order is not None:
        cases = ("e6", "e8") if args.case == "all" else (args.case,)
        needed = max(_MIN_DEGREE[c] for c in cases)
        need(args.order >= needed, "--order", f"case {args.case} needs degree at least {pretty_fraction(needed)}")


@dataclass
class Report:
    """What a command produced: one renderer per output format, plus the exit code."""

    table: str
    rows: list[list[str]]
    data: object
    exit_code: int = 0
    header: list[str] = field(default_factory=list)

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.data, indent=2) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(self.header)
            writer.writerows(self.rows)
            return buf.getvalue()
        return self.table


def _format_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)] if rows else [len(h) for h in header]
    lines = ["  ".join(str(h).rjust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(str(x).rjust(w) for x, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def _series_report(series: QSeries, title: str) -> Report:
    header = ["exponent", "coefficient"]
    rows = [[pretty_fraction(e), pretty_fraction(c)] for e, c in series.items()]
    table = f"{title}  (exact below q^{pretty_fraction(series.order)})\n"
    table += _format_table(header, rows) if rows else "(zero series)\n"
    return Report(table, rows, series.to_json(), header=header)


def _cmd_chi(args) -> Report:
    series = character_C(args.d, args.r, args.order)
    return _series_report(series, f"character of {ModuleLabel(args.d, 0, args.r)}")


def _cmd_product(args) -> Report:
    series = emb.product_character(args.factors, args.order)
    return _series_report(series, "vacuum character of " + " (x) ".join(f"M_{d}" for d in args.factors))


def _decomposition_report(dec: emb.Decomposition) -> Report:
    header = ["r", "conformal_weight", "multiplicity"]
    rows = [[str(label.r), pretty_fraction(conformal_weight(label)), str(m)]
            for label, m in sorted(dec.multiplicities.items())]
    factors = " (x) ".join(f"M_{d}" for d in dec.factors)
    table = f"{factors} as an M_{dec.target_d}-module, exact below q^{pretty_fraction(dec.verified_order)}\n"
    table += _format_table(header, rows)
    table += f"= {dec}\n"
    return Report(table, rows, dec.to_json(), header=header)


def _cmd_decompose(args) -> Report:
    try:
        dec = emb.decompose(args.target, args.factors, args.order)
    except (CentralChargeMismatch, DecompositionFailure) as exc:
        kind = type(exc).__name__
        data = {"error": kind, "message": str(exc)}
        return Report(f"{kind}: {exc}\n", [[kind, str(exc)]], data, exit_code=1, header=["error", "message"])
    return _decomposition_report(dec)


def _cmd_embeddings(args) -> Report:
    cases = emb.enumerate_diagonal_embeddings(args.d_max)
    header = ["d1", "d2", "d3", "c_d1"]
    rows = [[str(e.d1), str(e.d2), str(e.d3), pretty_fraction(emb.central_charge(e.d1))] for e in cases]
    data = [{"d1": e.d1, "d2": e.d2, "d3": e.d3} for e in cases]
    table = f"diagonal embeddings M_d1 -> M_d2 (x) M_d3 with all indices in [3, {args.d_max}]\n"
    return Report(table + _format_table(header, rows), rows, data, header=header)


def _cmd_gram(args) -> Report:
    c = emb.central_charge(args.d)
    block = gram_block(args.level, args.charge, c)
    names = [format_monomial(b) or "1" for b in block.basis]
    header = ["basis"] + names
    rows = [[name] + [pretty_fraction(x) for x in row] for name, row in zip(names, block.matrix)]
    table = (f"Gram block at level {pretty_fraction(block.level)}, charge {block.charge}, "
             f"c = {pretty_fraction(c)}: size {block.size}, rank {block.rank()}\n")
    table += _format_table(header, rows) if rows else "(empty basis)\n"
    return Report(table, rows, block.to_json(), header=header)


def _dims_rows(d: int, max_level: Fraction) -> tuple[list[list[str]], list[dict], bool]:
    chi = emb.vacuum_character(d, max_level + Fraction(1, 2))
    rows, data, ok = [], [], True
    level = Fraction(0)
    while level <= max_level:
        pbw = len(pbw_monomials(level))
        dim = quotient_graded_dim(d, level)
        coeff = chi.coeff(level)
        agree = coeff == dim
        ok &= agree
        rows.append([pretty_fraction(level), str(pbw), str(pbw - dim), str(dim), pretty_fraction(coeff),
                     "yes" if agree else "NO"])
        data.append({"level": format_fraction(level), "pbw": pbw, "radical": pbw - dim,
                     "quotient": dim, "character": format_fraction(coeff), "agree": agree})
        level += Fraction(1, 2)
    return rows, data, ok


def _cmd_dims(args) -> Report:
    rows, data, ok = _dims_rows(args.d, args.max_level)
    header = ["level", "pbw", "radical", "quotient", "character", "agree"]
    table = f"graded dimensions of M_{args.d} (c = {pretty_fraction(emb.central_charge(args.d))})\n"
    table += _format_table(header, rows)
    return Report(table, rows, {"d": args.d, "levels": data, "agree": ok}, exit_code=0 if ok else 1, header=header)


def _cmd_verify(args) -> Report:
    cases = ("e6", "e8") if args.case == "all" else (args.case,)
    checks: list[tuple[str, bool, str]] = []
    blocks: list[str] = []
    tables_json = []

    for tc in emb.verify_table(cases):
        header = ["conformal weight"] + [pretty_fraction(w) for w in tc.weights]
        rows = [[f"dim in {tc.row_name(k)}"] + [str(x) for x in tc.computed[k]] for k in tc.expected]
        blocks.append(f"[{tc.case}] graded dimensions (expanded through degree {pretty_fraction(max(tc.weights))})\n"
                      + _format_table(header, rows))
        for key, w, want, got in tc.mismatches:
            blocks.append(f"  mismatch: {tc.row_name(key)} at weight {pretty_fraction(w)}: expected {want}, got {got}\n")
        checks.append((f"{tc.case} table", not tc.mismatches, f"{len(tc.mismatches)} mismatching entries"))
        checks.append((f"{tc.case} module rows add up to the product row", tc.columns_add_up, ""))
        tables_json.append(tc.to_json())

        degree = args.order if args.order is not None else _MIN_DEGREE[tc.case]
        order = Fraction(int(degree) + 1)
        ref = emb.REFERENCE_TABLES[tc.case]
        expected = {r: 1 for r in ref["rows"] if r != 0}
        try:
            dec = emb.decompose(ref["target_d"], ref["factors"], order)
            got = {label.r: m for label, m in dec.multiplicities.items() if m}
            checks.append((f"{tc.case} decomposition below q^{pretty_fraction(order)}", got == expected, str(dec)))
        except N2CharError as exc:
            checks.append((f"{tc.case} decomposition below q^{pretty_fraction(order)}", False, str(exc)))

    found = [(e.d1, e.d2, e.d3) for e in emb.enumerate_diagonal_embeddings(10000)]
    checks.append(("embedding enumeration up to d=10000", found == list(emb.REFERENCE_EMBEDDINGS),
                   ", ".join(map(str, found))))

    if args.with_gram:
        for d in _CROSS_CHECK_DS:
            _, _, ok = _dims_rows(d, _CROSS_CHECK_LEVEL)
            checks.append((f"Gram radical vs character, d={d}, levels <= 3", ok, ""))
        for case in cases:
            ref = emb.REFERENCE_TABLES[case]
            ec = emb.EmbeddingCase(ref["target_d"], *ref["factors"])
            rep = isometry_check(ec, _ISOMETRY_LEVEL)
            detail = f"{rep.pairs_checked} pairs" if rep.passed else f"counterexample {rep.counterexample}"
            checks.append((f"isometry ({ec.d1},{ec.d2},{ec.d3}) up to level 5/2", rep.passed, detail))

    ok = all(passed for _, passed, _ in checks)
    verdict = "VERIFIED" if ok else "MISMATCH"
    lines = [f"{'PASS' if passed else 'FAIL'}  {name}" + (f"  ({detail})" if detail else "")
             for name, passed, detail in checks]
    table = "\n".join(blocks) + "\n" + "\n".join(lines) + "\n" + verdict + "\n"
    rows = [[name, "pass" if passed else "fail", detail] for name, passed, detail in checks]
    data = {
        "tables": tables_json,
        "checks": [{"name": n, "passed": p, "detail": dt} for n, p, dt in checks],
        "verdict": verdict,
    }
    return Report(table, rows, data, exit_code=0 if ok else 1, header=["check", "result", "detail"])


_COMMANDS: dict[str, Callable[[argparse.Namespace], Report]] = {
    "chi": _cmd_chi,
    "product": _cmd_product,
    "decompose": _cmd_decompose,
    "embeddings": _cmd_embeddings,
    "gram": _cmd_gram,
    "dims": _cmd_dims,
    "verify": _cmd_verify,
}


def run(argv: Sequence[str], stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        _validate(args)
    except UsageError as exc:
        stderr.write(f"usage error: {exc}\n\n{GRAMMAR}\n")
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    report = _COMMANDS[args.verb](args)
    stdout.write(report.render(args.format))
    return report.exit_code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
