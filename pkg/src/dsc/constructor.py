"""Certified Rees matrix semigroups over Z_{p^k} with a prescribed DSC coefficient.

For alpha = beta/gamma at or above the a x b rectangular-band bound, take
c = gamma - beta, d = beta 2^(a^2-a) 2^(b^2-b) - gamma B(a) B(b), k = c + d - 1,
r = c - 1, a prime p > 2^(ab+1), and the sandwich matrix with entries
p^r 2^s (s = 0..ab-1, row-major).  Every extract with distinct rows and
distinct columns then has p-adic valuation exactly r, which makes r + 1 chain
members fully linked and the remaining k - r linked only through diagonals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import gmpy2

from .errors import ContractError, DomainError
from .groups import FiniteGroup, SymbolicCyclicGroup, cyclic_group
from .primes import is_prime, smallest_prime_above
from .rees import (
    MATERIALIZE_CAP,
    SymbolicCyclicReesSpec,
    chi_rees,
    materialize,
    rectangular_band_bound,
    to_concrete,
)
from .relations import bell, reflexive_count
from .semigroup import BRUTE_FORCE_CAP, dsc_coefficient

__all__ = [
    "ConstructionCertificate",
    "VerificationReport",
    "choose_dimensions",
    "construct",
    "chi_certificate",
    "verify_certificate",
    "realize",
    "smallest_prime_above",
]


@dataclass(frozen=True)
class ConstructionCertificate:
    alpha: Fraction
    a: int
    b: int
    c: int
    d: int
    k: int
    r: int
    p: int
    entries: tuple[int, ...] = field(repr=False)
    chi: Fraction

    def sandwich_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Entries laid out row-major: row l (Lambda), column i (I)."""
        a = self.a
        return tuple(tuple(self.entries[lam * a:(lam + 1) * a]) for lam in range(self.b))

    def spec(self) -> SymbolicCyclicReesSpec:
        return SymbolicCyclicReesSpec(SymbolicCyclicGroup(self.p, self.k), self.a, self.b, self.sandwich_matrix())


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def add(self, name: str, passed: bool, detail: str = ""):
        self.checks.append(Check(name, bool(passed), detail))


def _as_fraction(alpha) -> Fraction:
    if isinstance(alpha, float):
        raise ContractError("alpha must be an exact rational, not a float")
    return Fraction(alpha)


def choose_dimensions(alpha) -> tuple[int, int]:
    """Smallest (a, b), by a + b then a, with a, b >= 2 and band bound <= alpha."""
    alpha = _as_fraction(alpha)
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1); got {alpha} (alpha = 1 is realized by any finite group)")
    total = 4
    while True:
        for a in range(2, total - 1):
            b = total - a
            if rectangular_band_bound(a, b) <= alpha:
                return a, b
        total += 1


def construct(alpha, a: int, b: int) -> ConstructionCertificate:
    alpha = _as_fraction(alpha)
    if a < 2 or b < 2:
        raise DomainError("the construction needs a, b >= 2")
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1); got {alpha}")
    beta, gamma = alpha.numerator, alpha.denominator
    c = gamma - beta
    d = beta * reflexive_count(a) * reflexive_count(b) - gamma * bell(a) * bell(b)
    if d < 0:
        raise DomainError(
            f"alpha = {alpha} is below the {a}x{b} lower bound "
            f"B(a)B(b)/(2^(a^2-a) 2^(b^2-b)) = {rectangular_band_bound(a, b)}"
        )
    k = c + d - 1
    r = c - 1
    p = smallest_prime_above(1 << (a * b + 1))
    base = gmpy2.mpz(p) ** r
    entries = tuple(int(base << s) for s in range(a * b))
    cert = ConstructionCertificate(alpha, a, b, c, d, k, r, p, entries, Fraction(0))
    chi = chi_certificate(cert)
    if chi != alpha:  # pragma: no cover - arithmetic identity
        raise RuntimeError(f"construction produced chi = {chi}, expected {alpha}")
    return ConstructionCertificate(alpha, a, b, c, d, k, r, p, entries, chi)


def chi_certificate(cert: ConstructionCertificate) -> Fraction:
    fully = (cert.r + 1)
    rest = cert.k - cert.r
    num = fully * bell(cert.a) * bell(cert.b) + rest
    den = fully * reflexive_count(cert.a) * reflexive_count(cert.b) + rest
    return Fraction(num, den)


def _check_extracts(cert: ConstructionCertificate, report: VerificationReport):
    p, r = gmpy2.mpz(cert.p), cert.r
    pr = p ** r
    P = [[gmpy2.mpz(x) for x in row] for row in cert.sandwich_matrix()]
    checked = 0
    for lam in range(cert.b):
        for mu in range(cert.b):
            if lam == mu:
                continue
            for i in range(cert.a):
                for j in range(cert.a):
                    if i == j:
                        continue
                    q = P[lam][i] - P[mu][i] + P[mu][j] - P[lam][j]
                    if not gmpy2.is_divisible(q, pr):
                        report.add("extracts", False, f"p^r does not divide q at (l,m,i,j)={(lam, mu, i, j)}")
                        return
                    if gmpy2.is_divisible(gmpy2.divexact(q, pr), p):
                        report.add("extracts", False, f"p^(r+1) divides q at (l,m,i,j)={(lam, mu, i, j)}")
                        return
                    checked += 1
    report.add("extracts", True, f"{checked} extracts have p-adic valuation exactly r")


def verify_certificate(
    cert: ConstructionCertificate,
    materialize_cap: int = MATERIALIZE_CAP,
    brute_cap: int = BRUTE_FORCE_CAP,
) -> VerificationReport:
    report = VerificationReport()
    a, b, p, r, k = cert.a, cert.b, cert.p, cert.r, cert.k
    bound = 1 << (a * b + 1)

    prime = is_prime(p)
    report.add("prime", prime and p > bound,
               f"p = {p}, prime = {prime}, required p > 2^{a * b + 1} = {bound}")

    if len(cert.entries) != a * b:
        report.add("entries", False, f"{len(cert.entries)} entries, expected {a * b}")
    elif len(set(cert.entries)) != len(cert.entries):
        dup = next(x for x in cert.entries if cert.entries.count(x) > 1)
        report.add("entries", False, f"duplicate entry {dup}")
    else:
        base = gmpy2.mpz(p) ** r if r >= 0 else None
        bad = next((s for s, x in enumerate(cert.entries) if base is None or x != base << s), None)
        report.add("entries", bad is None,
                   "entries are p^r 2^s, s = 0..ab-1" if bad is None else f"entry {bad} is not p^r 2^{bad}")

    if a < 2 or b < 2 or r < 0:
        report.add("extracts", False, "needs a, b >= 2 and r >= 0")
    else:
        _check_extracts(cert, report)

    beta, gamma = cert.alpha.numerator, cert.alpha.denominator
    want_c = gamma - beta
    want_d = beta * reflexive_count(a) * reflexive_count(b) - gamma * bell(a) * bell(b)
    problems = []
    if cert.c != want_c:
        problems.append(f"c = {cert.c}, expected {want_c}")
    if cert.d != want_d:
        problems.append(f"d = {cert.d}, expected {want_d}")
    if cert.d < 0:
        problems.append("d < 0")
    if cert.k != cert.c + cert.d - 1:
        problems.append(f"k = {cert.k}, expected c + d - 1 = {cert.c + cert.d - 1}")
    if cert.r != cert.c - 1:
        problems.append(f"r = {cert.r}, expected c - 1 = {cert.c - 1}")
    if not 0 <= cert.r <= cert.k:
        problems.append("r outside [0, k]")
    report.add("arithmetic", not problems, "; ".join(problems) or "c, d, k, r consistent with alpha")

    chi = chi_certificate(cert)
    report.add("chi", chi == cert.alpha and cert.chi == cert.alpha,
               f"formula gives {chi}, certificate states {cert.chi}, alpha = {cert.alpha}")

    if prime and k >= 0 and r >= 0:
        census = chi_rees(cert.spec()).chi
        report.add("census", census == chi, f"symbolic census gives {census}")
        if k.bit_length() <= 16 and a * b * p ** k <= materialize_cap:
            concrete = to_concrete(cert.spec(), materialize_cap)
            exact = chi_rees(concrete)
            report.add("concrete-census", exact.chi == chi, f"census over Z_{p}^{k} table gives {exact.chi}")
            if concrete.order <= brute_cap:
                brute = dsc_coefficient(materialize(concrete, materialize_cap), brute_cap)
                report.add("brute-force", brute == exact,
                           f"brute force gives {brute.congruence_count}/{brute.diagonal_count}")
    return report


def realize(alpha) -> Union[FiniteGroup, ConstructionCertificate]:
    """A finite semigroup with DSC coefficient alpha: any group for 1, else a certificate."""
    alpha = _as_fraction(alpha)
    if alpha == 1:
        return cyclic_group(1)
    a, b = choose_dimensions(alpha)
    return construct(alpha, a, b)
