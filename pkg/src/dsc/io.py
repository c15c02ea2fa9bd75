"""Text file formats for groups, semigroups, Rees specs, Clifford systems and certificates.

Blank lines and ``#`` comments are ignored everywhere except inside
certificates, which are written and read verbatim.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Union

import gmpy2

from .clifford import CliffordSystem, validate_system
from .constructor import ConstructionCertificate
from .errors import ParseError
from .groups import FiniteGroup, SymbolicCyclicGroup, group_from_table
from .rees import ReesSpec, SymbolicCyclicReesSpec
from .semigroup import FiniteSemigroup, semigroup_from_table

CERTIFICATE_HEADER = "dsc-certificate v1"
CERTIFICATE_KEYS = ("alpha", "a", "b", "c", "d", "k", "r", "p", "chi", "entries")


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str) -> Fraction:
    """Parse ``beta/gamma`` (or a bare integer) exactly; floats are rejected."""
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ParseError(f"malformed rational {text!r}; expected beta/gamma") from None
    if d == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(n, d)


def _big_int(token: str) -> int:
    # Goes through gmpy2 so multi-million digit values dodge the int/str limit.
    if not token or not token.lstrip("-").isdigit():
        raise ParseError(f"expected an integer, got {token[:40]!r}")
    return int(gmpy2.mpz(token))


def _big_str(x: int) -> str:
    return gmpy2.mpz(x).digits(10)


class _Lines:
    def __init__(self, text: str, source: str):
        self.source = source
        self.items = []
        for no, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if line:
                self.items.append((no, line.split()))
        self.pos = 0

    def error(self, msg: str, no: int | None = None) -> ParseError:
        if no is None:
            no = self.items[self.pos - 1][0] if self.pos else 1
        return ParseError(f"{self.source}:{no}: {msg}")

    def next(self, what: str) -> tuple[int, list[str]]:
        if self.pos >= len(self.items):
            raise self.error(f"unexpected end of file, expected {what}")
        item = self.items[self.pos]
        self.pos += 1
        return item

    def header(self, keyword: str, nargs: int) -> list[str]:
        no, toks = self.next(f"'{keyword}' line")
        if toks[0] != keyword or len(toks) != nargs + 1:
            raise self.error(f"expected '{keyword}' with {nargs} argument(s), got {' '.join(toks)!r}", no)
        return toks[1:]

    def ints(self, toks: list[str], count: int, no: int) -> list[int]:
        if len(toks) != count:
            raise self.error(f"expected {count} entries, got {len(toks)}", no)
        try:
            return [_big_int(t) for t in toks]
        except ParseError as exc:
            raise self.error(str(exc), no) from None

    def positive(self, tok: str, what: str) -> int:
        try:
            v = int(tok)
        except ValueError:
            raise self.error(f"{what} must be an integer, got {tok!r}") from None
        if v < 1:
            raise self.error(f"{what} must be positive")
        return v

    def table(self, n: int) -> list[list[int]]:
        rows = []
        for _ in range(n):
            no, toks = self.next("table row")
            row = self.ints(toks, n, no)
            if any(not 0 <= v < n for v in row):
                raise self.error(f"table entries must lie in 0..{n - 1}", no)
            rows.append(row)
        return rows

    def done(self):
        if self.pos < len(self.items):
            raise self.error("trailing content", self.items[self.pos][0])


def _group_block(lines: _Lines) -> FiniteGroup:
    (n,) = lines.header("group", 1)
    return group_from_table(lines.table(lines.positive(n, "group order")))


def _read(path) -> tuple[str, str]:
    p = Path(path)
    try:
        return p.read_text(), str(p)
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {p}: {exc}") from None


# -- groups and semigroups ---------------------------------------------------------


def parse_group(text: str, source: str = "<group>") -> FiniteGroup:
    lines = _Lines(text, source)
    G = _group_block(lines)
    lines.done()
    return G


def parse_table_file(text: str, source: str = "<table>") -> Union[FiniteGroup, FiniteSemigroup]:
    """A ``group`` or ``semigroup`` file; groups are checked for the group axioms."""
    lines = _Lines(text, source)
    if lines.items and lines.items[0][1][0] == "group":
        out = _group_block(lines)
    else:
        (n,) = lines.header("semigroup", 1)
        out = semigroup_from_table(lines.table(lines.positive(n, "semigroup order")))
    lines.done()
    return out


def format_table(keyword: str, table) -> str:
    rows = [f"{keyword} {len(table)}"] + [" ".join(map(str, row)) for row in table]
    return "\n".join(rows) + "\n"


def format_group(G: FiniteGroup) -> str:
    return format_table("group", G.table)


def format_semigroup(S: FiniteSemigroup) -> str:
    return format_table("semigroup", S.table)


# -- Rees specs --------------------------------------------------------------------


def parse_rees(text: str, source: str = "<rees>") -> Union[ReesSpec, SymbolicCyclicReesSpec]:
    lines = _Lines(text, source)
    a_tok, b_tok = lines.header("rees", 2)
    a, b = lines.positive(a_tok, "a"), lines.positive(b_tok, "b")
    no, toks = lines.next("group line")
    if toks[:2] == ["group", "inline"] and len(toks) == 2:
        group = _group_block(lines)
        symbolic = None
    elif toks[:2] == ["group", "cyclic"] and len(toks) == 4:
        p = lines.positive(toks[2], "p")
        try:
            k = int(toks[3])
        except ValueError:
            raise lines.error(f"k must be an integer, got {toks[3]!r}", no) from None
        try:
            symbolic = SymbolicCyclicGroup(p, k)
        except Exception as exc:
            raise lines.error(str(exc), no) from None
    else:
        raise lines.error("expected 'group inline' or 'group cyclic <p> <k>'", no)
    P = []
    for _ in range(b):
        no, toks = lines.next("sandwich matrix row")
        P.append(lines.ints(toks, a, no))
    lines.done()
    try:
        if symbolic is not None:
            return SymbolicCyclicReesSpec(symbolic, a, b, P)
        return ReesSpec(group, a, b, P)
    except Exception as exc:
        raise lines.error(str(exc)) from None


def format_rees(spec: Union[ReesSpec, SymbolicCyclicReesSpec]) -> str:
    out = [f"rees {spec.a} {spec.b}"]
    if isinstance(spec, SymbolicCyclicReesSpec):
        out.append(f"group cyclic {spec.group.p} {spec.group.k}")
    else:
        out.append("group inline")
        out.append(format_group(spec.group).rstrip("\n"))
    out += [" ".join(_big_str(x) for x in row) for row in spec.P]
    return "\n".join(out) + "\n"


# -- Clifford systems ------------------------------------------------------------


def parse_clifford(text: str, source: str = "<clifford>") -> CliffordSystem:
    lines = _Lines(text, source)
    (n_tok,) = lines.header("clifford", 1)
    n = lines.positive(n_tok, "semilattice size")
    meet = lines.table(n)
    groups: dict[int, FiniteGroup] = {}
    homs: dict[tuple[int, int], list[int]] = {}
    while lines.pos < len(lines.items):
        no, toks = lines.next("node or hom")
        try:
            args = [int(t) for t in toks[1:]]
        except ValueError:
            raise lines.error(f"bad indices in {' '.join(toks)!r}", no) from None
        if toks[0] == "node" and len(args) == 1:
            (alpha,) = args
            if not 0 <= alpha < n or alpha in groups:
                raise lines.error(f"invalid or repeated node {alpha}", no)
            groups[alpha] = _group_block(lines)
        elif toks[0] == "hom" and len(args) == 2:
            key = (args[0], args[1])
            if key in homs:
                raise lines.error(f"repeated hom {key}", no)
            mno, mtoks = lines.next("hom index map")
            homs[key] = lines.ints(mtoks, len(mtoks), mno)
        else:
            raise lines.error(f"expected 'node <a>' or 'hom <a> <b>', got {' '.join(toks)!r}", no)
    missing = [a for a in range(n) if a not in groups]
    if missing:
        raise lines.error(f"no group given for node(s) {missing}")
    for (alpha, beta), mapping in homs.items():
        if not (0 <= alpha < n and 0 <= beta < n):
            raise lines.error(f"hom {alpha} {beta} refers to a missing node")
    return validate_system(meet, [groups[a] for a in range(n)], homs)


def format_clifford(sys: CliffordSystem) -> str:
    out = [format_table("clifford", sys.meet).rstrip("\n")]
    for alpha, G in enumerate(sys.groups):
        out += [f"node {alpha}", format_group(G).rstrip("\n")]
    for (alpha, beta), mapping in sorted(sys.homs.items()):
        if alpha != beta:
            out += [f"hom {alpha} {beta}", " ".join(map(str, mapping))]
    return "\n".join(out) + "\n"


# -- certificates -------------------------------------------------------------------


def format_certificate(cert: ConstructionCertificate) -> str:
    out = [CERTIFICATE_HEADER, f"alpha = {format_fraction(cert.alpha)}"]
    out += [f"{key} = {getattr(cert, key)}" for key in ("a", "b", "c", "d", "k", "r", "p")]
    out.append(f"chi = {format_fraction(cert.chi)}")
    out.append("entries = " + ",".join(_big_str(x) for x in cert.entries))
    return "\n".join(out) + "\n"


def parse_certificate(text: str, source: str = "<certificate>") -> ConstructionCertificate:
    lines = text.splitlines()
    if not lines or lines[0].strip() != CERTIFICATE_HEADER:
        raise ParseError(f"{source}:1: missing '{CERTIFICATE_HEADER}' header")
    values: dict[str, str] = {}
    for no, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or key not in CERTIFICATE_KEYS:
            raise ParseError(f"{source}:{no}: expected 'key = value' with key in {', '.join(CERTIFICATE_KEYS)}")
        if key in values:
            raise ParseError(f"{source}:{no}: repeated key {key}")
        values[key] = value.strip()
    missing = [k for k in CERTIFICATE_KEYS if k not in values]
    if missing:
        raise ParseError(f"{source}: missing key(s) {', '.join(missing)}")
    try:
        ints = {k: _big_int(values[k]) for k in ("a", "b", "c", "d", "k", "r", "p")}
        entries = tuple(_big_int(t.strip()) for t in values["entries"].split(","))
    except ParseError as exc:
        raise ParseError(f"{source}: {exc}") from None
    return ConstructionCertificate(
        alpha=parse_fraction(values["alpha"]),
        entries=entries,
        chi=parse_fraction(values["chi"]),
        **ints,
    )


# -- file helpers -------------------------------------------------------------------


def load_table_file(path):
    text, src = _read(path)
    return parse_table_file(text, src)


def load_rees(path):
    text, src = _read(path)
    return parse_rees(text, src)


def load_clifford(path):
    text, src = _read(path)
    return parse_clifford(text, src)


def load_certificate(path) -> ConstructionCertificate:
    text, src = _read(path)
    return parse_certificate(text, src)


def write_certificate(cert: ConstructionCertificate, path):
    Path(path).write_text(format_certificate(cert))
