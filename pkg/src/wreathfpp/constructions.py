"""Explicit families of ``G_Q^P`` with closed-form fixed-point proportions.

Construction 1 takes ``Q`` = translations and ``P`` = affine maps of
``Z/dZ``; its proportion is ``psi(d)/phi(d) = prod_{p|d} (p-2)/(p-1)``, which
is also the proportion of the iterated Galois group of ``x^d + 1``.

Construction 2 takes ``Q = C_2^n x C_r`` (``d = 2^n r``, ``r`` odd) acting on
itself by translation and ``P = Q x| Aut(Q)``; its proportion is the
``GL_n(F_2)`` ratio from :func:`~wreathfpp.gf2.gl_counts` times the odd-prime
product for ``r``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .charpoly import frac_str, profile, to_decimal
from .errors import NotTransitiveError, ValidationError
from .gf2 import MAX_SCAN_N, BitMatrix, gl_counts
from .numtheory import (
    count_linear_solutions,
    euler_phi,
    prime_ratio_product,
    psi,
    two_adic_split,
    unit_group_generators,
)
from .permgroup import (
    DEFAULT_NORMALIZER_CAP,
    Perm,
    PermSet,
    cosets,
    format_perm,
    generate,
    is_normal,
    is_subset,
    is_transitive,
    normalizer_in_sym,
)

__all__ = [
    "affine_group",
    "fpp_construction1",
    "fpp_construction2",
    "count_linear_solutions",
    "realize_construction2",
    "table1",
    "search_unifix",
    "builtin_candidates",
    "search_builtin",
    "UnifixReport",
]

MAX_REALIZE_DEGREE = 16


def _perm_from_map(d: int, fn) -> Perm:
    """Permutation of points ``1..d`` from a map on indices ``0..d-1``."""
    return Perm._raw(tuple(fn(i) for i in range(d)))


def affine_group(d: int) -> tuple:
    """Generators of ``Q = {x -> x + b}`` and ``P = {x -> a x + b}`` on ``Z/dZ``.

    Point ``x`` in ``1..d`` stands for the residue ``x mod d``.
    """
    if d < 3:
        raise ValidationError("affine construction needs d >= 3")

    def affine(a: int, b: int) -> Perm:
        # index i is point i + 1, i.e. residue (i + 1) % d; residue 0 is point d
        return _perm_from_map(d, lambda i: ((a * (i + 1) + b) % d - 1) % d)

    shift = affine(1, 1)
    qgens = [shift]
    pgens = [shift] + [affine(a, 0) for a in unit_group_generators(d)]
    return qgens, pgens


def fpp_construction1(d: int) -> Fraction:
    """``psi(d) / phi(d)``: share of units ``a`` with ``a - 1`` also a unit."""
    if d < 3:
        raise ValidationError("construction 1 needs d >= 3")
    return Fraction(psi(d), euler_phi(d))


def fpp_construction2(d: int) -> Fraction:
    if d < 3:
        raise ValidationError("construction 2 needs d >= 3")
    n, r = two_adic_split(d)
    if n > MAX_SCAN_N:
        raise ValidationError(
            f"d = {d} has 2-adic valuation {n} > {MAX_SCAN_N}, beyond the GL_n(F2) table")
    if n == 0:
        ratio = Fraction(1)
    else:
        order, good = gl_counts(n)
        ratio = Fraction(good, order)
    odd = prime_ratio_product(r) if r > 1 else Fraction(1)
    return ratio * odd


def table1(max_n: int = 5, workers: int = 1) -> list:
    rows = []
    for n in range(1, max_n + 1):
        order, good = gl_counts(n, workers=workers)
        q = Fraction(good, order)
        rows.append({
            "n": n,
            "gl_order": order,
            "good_count": good,
            "ratio": frac_str(q),
            "decimal": to_decimal(q, 4),
        })
    return rows


def _transvections(n: int) -> list:
    out = []
    for i in range(n):
        for j in range(n):
            if i != j:
                rows = [1 << k for k in range(n)]
                rows[i] |= 1 << j
                out.append(BitMatrix(n, tuple(rows)))
    return out


def realize_construction2(d: int) -> tuple:
    """Permutation generators of ``Q = C_2^n x C_r`` and ``P = Q x| Aut(Q)`` on ``d`` points.

    Point index ``x * r + z`` (plus one) stands for the element ``(x, z)``,
    with ``x`` in ``F_2^n`` packed as an int and ``z`` in ``Z/rZ``. ``Q`` acts
    by translation, ``GL_n(F_2)`` (generated by transvections) on ``x`` and
    ``(Z/rZ)^x`` on ``z``.
    """
    if not 3 <= d <= MAX_REALIZE_DEGREE:
        raise ValidationError(f"realize_construction2 supports 3 <= d <= {MAX_REALIZE_DEGREE}")
    n, r = two_adic_split(d)

    def point(x: int, z: int) -> int:
        return x * r + z

    def from_map(fn) -> Perm:
        return _perm_from_map(d, lambda i: point(*fn(i // r, i % r)))

    qgens = [from_map(lambda x, z, b=1 << k: (x ^ b, z)) for k in range(n)]
    if r > 1:
        qgens.append(from_map(lambda x, z: (x, (z + 1) % r)))
    pgens = list(qgens)
    pgens += [from_map(lambda x, z, A=A: (A.apply(x), z)) for A in _transvections(n)]
    pgens += [from_map(lambda x, z, a=a: (x, a * z % r)) for a in unit_group_generators(r)]
    return qgens, pgens


@dataclass(frozen=True)
class UnifixReport:
    d: int
    q_order: int
    p_order: int
    p_source: str
    cosets: list                      # [(representative, unifix)]
    found: bool
    label: str = ""
    limitation: str = field(default=(
        "checks only the supplied Q (or built-in cyclic/dihedral/regular candidates); "
        "not a census of all transitive groups"))

    def to_record(self) -> dict:
        return {
            "d": self.d,
            "label": self.label,
            "q_order": self.q_order,
            "p_order": self.p_order,
            "p_source": self.p_source,
            "index": len(self.cosets),
            "found": self.found,
            "cosets": [{"rep": format_perm(rep), "unifix": u} for rep, u in self.cosets],
            "limitation": self.limitation,
        }


def search_unifix(d: int, Qgens, Pgens=None, normalizer_cap: int = DEFAULT_NORMALIZER_CAP,
                  label: str = "") -> UnifixReport:
    """Look for a coset of ``P/Q`` whose every element fixes exactly one point.

    Without ``Pgens``, ``P`` is the normalizer of ``Q`` in ``Sym(d)``, the
    largest group in which ``Q`` is normal.
    """
    Q = Qgens if isinstance(Qgens, PermSet) else generate(list(Qgens), degree=d)
    if not is_transitive(Q):
        raise NotTransitiveError("search_unifix needs a transitive Q")
    if Pgens is None:
        P = normalizer_in_sym(Q, cap=normalizer_cap)
        source = "normalizer"
    else:
        P = Pgens if isinstance(Pgens, PermSet) else generate(list(Pgens), degree=d)
        source = "supplied"
        if not is_subset(Q, P) or not is_normal(Q, P):
            raise ValidationError("Q must be normal in the supplied P")
    rows = []
    for A in cosets(Q, P):
        prof = profile(A)
        rows.append((A.representative, prof.counts[1] == prof.total))
    return UnifixReport(d, len(Q), len(P), source, rows, any(u for _, u in rows), label)


def _cycle(d: int) -> Perm:
    return _perm_from_map(d, lambda i: (i + 1) % d)


def _reflection(d: int) -> Perm:
    return _perm_from_map(d, lambda i: (-i) % d)


def regular_action(G: PermSet) -> list:
    """Generators of ``G`` acting on its own elements by left multiplication."""
    elems = G.sorted()
    index = {g: i for i, g in enumerate(elems)}
    m = len(elems)
    return [_perm_from_map(m, lambda i, g=g: index[g * elems[i]]) for g in G.gens()]


def builtin_candidates(d: int) -> dict:
    """Transitive ``Q`` candidates of degree ``d <= 8``, keyed by label."""
    if not 3 <= d <= 8:
        raise ValidationError("built-in candidates cover 3 <= d <= 8")
    out = {f"C{d}": [_cycle(d)], f"D{d}": [_cycle(d), _reflection(d)]}
    n, _ = two_adic_split(d)
    if n >= 2:
        out[f"C2^{n}xC{d >> n}-regular"] = realize_construction2(d)[0]
    if d % 2 == 0 and d >= 6:
        half = d // 2
        dih = generate([_cycle(half), _reflection(half)], degree=half)
        out[f"D{half}-regular"] = regular_action(dih)
    return out


def search_builtin(d: int, normalizer_cap: int = DEFAULT_NORMALIZER_CAP) -> list:
    return [search_unifix(d, gens, None, normalizer_cap, label=name)
            for name, gens in builtin_candidates(d).items()]
