"""Trial-division factorization, Euler's totient and the unit-pair count psi."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod

from .errors import ResourceLimitError, ValidationError

MAX_FACTOR = 10 ** 9


@dataclass(frozen=True)
class FactoredInt:
    value: int
    factors: tuple  # ((p, e), ...) with p strictly increasing

    def __post_init__(self):
        if prod(p ** e for p, e in self.factors) != self.value:
            raise ValidationError("factorization does not multiply back")
        ps = [p for p, _ in self.factors]
        if ps != sorted(set(ps)):
            raise ValidationError("primes must be strictly increasing")

    @property
    def primes(self) -> tuple:
        return tuple(p for p, _ in self.factors)


def factorize(n: int) -> FactoredInt:
    if n < 1:
        raise ValidationError(f"cannot factor {n}")
    if n > MAX_FACTOR:
        raise ResourceLimitError(f"{n} exceeds the trial-division guard {MAX_FACTOR}")
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return FactoredInt(n, tuple(out))


def euler_phi(n: int) -> int:
    f = factorize(n)
    return prod(p ** (e - 1) * (p - 1) for p, e in f.factors)


def psi(n: int) -> int:
    """``#{a mod n : a and a - 1 both units}`` = ``prod p^(e-1) (p - 2)``."""
    f = factorize(n)
    return prod(p ** (e - 1) * (p - 2) for p, e in f.factors)


def phi_bruteforce(n: int) -> int:
    return sum(1 for a in range(n) if gcd(a, n) == 1)


def psi_bruteforce(n: int) -> int:
    return sum(1 for a in range(n) if gcd(a, n) == 1 and gcd(a - 1, n) == 1)


def prime_ratio_product(n: int) -> Fraction:
    """``prod_{p | n} (p - 2)/(p - 1)``."""
    return prod((Fraction(p - 2, p - 1) for p in factorize(n).primes), start=Fraction(1))


def two_adic_split(d: int) -> tuple:
    """``(k, r)`` with ``d = 2^k * r`` and ``r`` odd."""
    if d < 1:
        raise ValidationError("d must be positive")
    k = (d & -d).bit_length() - 1
    return k, d >> k


def unit_group_generators(n: int) -> list:
    """A small generating set of ``(Z/nZ)^x``, chosen greedily from 2 upward."""
    if n <= 2:
        return []
    units = [a for a in range(2, n) if gcd(a, n) == 1]
    gens = []
    span = {1}
    for a in units:
        if a in span:
            continue
        gens.append(a)
        # close the span under multiplication by the new generator set
        frontier = list(span)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = x * g % n
                if y not in span:
                    span.add(y)
                    frontier.append(y)
    return gens


def count_linear_solutions(alpha: int, beta: int, n: int) -> int:
    """Number of ``x mod n`` with ``alpha x = beta (mod n)``."""
    if n < 1:
        raise ValidationError("modulus must be >= 1")
    g = gcd(alpha % n, n)
    return 0 if beta % g else g
