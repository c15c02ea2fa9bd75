"""``dsc`` command line: analyze, rees, construct, clifford, bell, semilattices.

Exit status is 0 on success, 1 for domain, contract or cap errors and 2 for
unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .clifford import chi_bound_report, enumerate_kernels
from .corpus import CORPUS_MAX_ORDER, semigroup_corpus
from .constructor import construct, realize, verify_certificate
from .errors import ContractError, DomainError, ParseError, SizeCapError, ValidationError
from .groups import FiniteGroup
from .io import (
    format_certificate,
    format_fraction,
    load_certificate,
    load_clifford,
    load_rees,
    load_table_file,
    parse_fraction,
    write_certificate,
)
from .rees import (
    MATERIALIZE_CAP,
    SymbolicCyclicReesSpec,
    chi_rees,
    enumerate_linked_triples,
    materialize,
    to_concrete,
    triple_census,
)
from .relations import BinaryRelation, bell, enumerate_partitions
from .semigroup import (
    BRUTE_FORCE_CAP,
    DscReport,
    dsc_coefficient,
    enumerate_congruences,
    enumerate_diagonal_subsemigroups,
    semigroup_from_table,
)


class _Output:
    """Collects ``key=value`` fields for ``--report`` alongside stdout."""

    def __init__(self):
        self.fields: list[tuple[str, str]] = []

    def line(self, text: str = ""):
        print(text)

    def record(self, key: str, value):
        if isinstance(value, Fraction):
            value = format_fraction(value)
        self.fields.append((key, str(value)))

    def write_report(self, path: Optional[str]):
        if path:
            with open(path, "w") as fh:
                fh.writelines(f"{k}={v}\n" for k, v in self.fields)


def _relation_text(rel: BinaryRelation) -> str:
    return " ".join(f"{x},{y}" for x, y in rel.pairs())


def _dsc_line(out: _Output, report: DscReport, prefix: str = ""):
    out.record(prefix + "congruences", report.congruence_count)
    out.record(prefix + "diagonal", report.diagonal_count)
    out.record(prefix + "chi", report.chi)
    out.line(f"{prefix}congruences={report.congruence_count} {prefix}diagonal={report.diagonal_count} "
             f"{prefix}chi={format_fraction(report.chi)}")


def cmd_analyze(args, out: _Output) -> int:
    obj = load_table_file(args.path)
    S = semigroup_from_table(obj.table) if isinstance(obj, FiniteGroup) else obj
    congs = diags = 0
    for rel in enumerate_congruences(S, args.cap):
        congs += 1
        if args.list:
            out.line(f"congruence {_relation_text(rel)}")
    for rel in enumerate_diagonal_subsemigroups(S, args.cap):
        diags += 1
        if args.list:
            out.line(f"diagonal {_relation_text(rel)}")
    out.record("order", S.order)
    _dsc_line(out, DscReport.from_counts(congs, diags))
    return 0


def _subgroup_text(sub) -> str:
    if isinstance(sub, range):
        return f"p^{sub.start}" if len(sub) == 1 else f"p^{sub.start}..p^{sub.stop - 1}"
    return "{" + ",".join(map(str, sorted(sub.elements))) + "}"


def cmd_rees(args, out: _Output) -> int:
    spec = load_rees(args.path)
    census = triple_census(spec)
    for row in census.rows:
        out.line(
            f"N={_subgroup_text(row.subgroup)} mult={row.multiplicity} "
            f"sigma={list(row.sigma.block_sizes)} tau={list(row.tau.block_sizes)} "
            f"e={row.e_I * row.e_L} r={row.r_I * row.r_L}"
        )
    report = chi_rees(spec)
    out.record("rows", len(census.rows))
    _dsc_line(out, report)
    if args.list:
        concrete = to_concrete(spec) if isinstance(spec, SymbolicCyclicReesSpec) else spec
        for t in enumerate_linked_triples(concrete, "reflexive"):
            out.line(f"triple kind={t.kind} N={_subgroup_text(t.N)} "
                     f"S={_relation_text(t.S_rel)} T={_relation_text(t.T_rel)}")
    if args.brute_force:
        concrete = to_concrete(spec, MATERIALIZE_CAP) if isinstance(spec, SymbolicCyclicReesSpec) else spec
        S = materialize(concrete, MATERIALIZE_CAP)
        brute = dsc_coefficient(S, args.cap)
        agree = brute == report
        _dsc_line(out, brute, prefix="brute_")
        out.record("agree", "yes" if agree else "no")
        out.line(f"brute-force {'agrees' if agree else 'DISAGREES'}")
        if not agree:
            return 1
    return 0


def _print_checks(out: _Output, report) -> int:
    for c in report.checks:
        out.record(f"check_{c.name}", "pass" if c.passed else "fail")
        out.line(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}")
    out.record("verified", "yes" if report.ok else "no")
    return 0 if report.ok else 1


def cmd_construct(args, out: _Output) -> int:
    if args.verify_only:
        cert = load_certificate(args.verify_only)
        return _print_checks(out, verify_certificate(cert))
    if args.alpha is None:
        raise ParseError("construct needs --alpha (or --verify-only <file>)")
    alpha = parse_fraction(args.alpha)
    if (args.a is None) != (args.b is None):
        raise ParseError("--a and --b must be given together")
    if alpha == 1:
        out.record("alpha", alpha)
        out.line("alpha=1/1: every finite group has chi=1/1; the trivial group realizes it")
        return 0
    if args.a is None:
        cert = realize(alpha)
    else:
        cert = construct(alpha, args.a, args.b)
    report = verify_certificate(cert)
    if args.out:
        write_certificate(cert, args.out)
        for key in ("a", "b", "c", "d", "k", "r", "p"):
            out.record(key, getattr(cert, key))
        out.record("chi", cert.chi)
        out.line(f"a={cert.a} b={cert.b} c={cert.c} d={cert.d} k={cert.k} r={cert.r} p={cert.p} "
                 f"chi={format_fraction(cert.chi)}")
        status = _print_checks(out, report)
        out.line(f"certificate written to {args.out}")
        return status
    sys.stdout.write(format_certificate(cert))
    if not report.ok:
        print("verification failed", file=sys.stderr)
        return 1
    return 0


def cmd_clifford(args, out: _Output) -> int:
    system = load_clifford(args.path)
    rep = chi_bound_report(system, args.cap)
    out.record("chi_S", rep.chi_S.chi)
    out.record("chi_Y", rep.chi_Y.chi)
    out.record("K", rep.kernels)
    out.record("bound", rep.status)
    out.record("cong_Y", rep.chi_Y.congruence_count)
    out.record("diag_Y", rep.chi_Y.diagonal_count)
    out.record("cong_S", rep.chi_S.congruence_count)
    out.record("diag_S", rep.chi_S.diagonal_count)
    out.record("pair_lower_bound", "holds" if rep.pair_lower_bound_holds else "fails")
    out.line(f"chi_S={format_fraction(rep.chi_S.chi)} chi_Y={format_fraction(rep.chi_Y.chi)} "
             f"K={rep.kernels} bound={rep.status}")
    out.line(f"cong_S={rep.chi_S.congruence_count} diag_S={rep.chi_S.diagonal_count} "
             f"cong_Y={rep.chi_Y.congruence_count} diag_Y={rep.chi_Y.diagonal_count} "
             f"K*diag_Y={rep.pair_lower_bound} "
             f"pair_lower_bound={'holds' if rep.pair_lower_bound_holds else 'fails'}")
    if args.list:
        for k in enumerate_kernels(system):
            out.line("kernel " + " ".join(_subgroup_text(N) for N in k.subgroups))
    return 0 if rep.status != "violated" and rep.pair_lower_bound_holds else 1


def cmd_bell(args, out: _Output) -> int:
    if args.n < 0:
        raise DomainError("n must be nonnegative")
    value = bell(args.n, cap=max(args.cap, args.n))
    out.record("n", args.n)
    out.record("bell", value)
    out.line(f"B({args.n})={value}")
    if args.list:
        for part in enumerate_partitions(args.n, cap=max(args.cap, args.n)):
            out.line(" | ".join(",".join(map(str, b)) for b in part.blocks))
    return 0


def cmd_semilattices(args, out: _Output) -> int:
    """Tabulate chi(Y) over all semilattices of small order (exploratory, no claim)."""
    if not 1 <= args.max_order <= CORPUS_MAX_ORDER:
        raise DomainError(f"--max-order must lie in 1..{CORPUS_MAX_ORDER}")
    corpus = semigroup_corpus()
    for n in range(1, args.max_order + 1):
        values = sorted(
            dsc_coefficient(semigroup_from_table(t), args.cap).chi
            for t in corpus[n]
            if all(t[x][x] == x for x in range(n)) and all(t[x][y] == t[y][x] for x in range(n) for y in range(n))
        )
        out.record(f"count_{n}", len(values))
        out.line(f"order={n} semilattices={len(values)} chi=" + ",".join(format_fraction(v) for v in values))
    return 0


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--brute-force", action="store_true", help="cross-check by brute-force enumeration")
    shared.add_argument("--list", action="store_true", help="also print the enumerated objects")
    shared.add_argument("--report", metavar="PATH", help="write key=value results to PATH")
    shared.add_argument("--cap", type=int, default=BRUTE_FORCE_CAP,
                        help=f"brute-force order cap (default {BRUTE_FORCE_CAP})")

    parser = argparse.ArgumentParser(prog="dsc", description="Count congruences and diagonal subsemigroups.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[shared], help="brute-force chi of a group or semigroup file")
    p.add_argument("path")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("rees", parents=[shared], help="linked-triple census of a Rees spec file")
    p.add_argument("path")
    p.set_defaults(func=cmd_rees)

    p = sub.add_parser("construct", parents=[shared], help="build or re-check a certificate for chi = alpha")
    p.add_argument("--alpha", help="target rational beta/gamma in (0, 1]")
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--out", metavar="PATH", help="certificate destination (default: stdout)")
    p.add_argument("--verify-only", metavar="PATH", help="verify an existing certificate file")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("clifford", parents=[shared], help="chi(S) <= chi(Y) report for a Clifford file")
    p.add_argument("path")
    p.set_defaults(func=cmd_clifford)

    p = sub.add_parser("bell", parents=[shared], help="Bell number B(n)")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_bell)

    p = sub.add_parser("semilattices", parents=[shared], help="tabulate chi(Y) for small semilattices")
    p.add_argument("--max-order", type=int, default=4)
    p.set_defaults(func=cmd_semilattices)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Output()
    try:
        status = args.func(args, out)
    except (ParseError, ValidationError) as exc:
        print(f"dsc: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"dsc: error: {exc}", file=sys.stderr)
        return 2
    except SizeCapError as exc:
        print(f"dsc: {exc}", file=sys.stderr)
        return 1
    except (DomainError, ContractError) as exc:
        print(f"dsc: error: {exc}", file=sys.stderr)
        return 1
    try:
        out.write_report(args.report)
    except OSError as exc:
        print(f"dsc: error: cannot write report: {exc}", file=sys.stderr)
        return 2
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
