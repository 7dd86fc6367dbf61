"""Ground truth on truncated trees.

Three independent routes to the proportion ``p_n`` of level-``n`` truncations
that fix a vertex at depth ``n``:

* :func:`enumerate_count` walks every portrait with labels in ``S`` and
  applies it to every vertex level by level. It never touches the
  characteristic polynomial.
* :func:`recurrence_p` iterates ``p_{k+1} = f_S(p_k)`` in exact rationals,
  and :func:`fpp_sequence` runs the integer recurrence for ``(sigma_k, f_k)``.
* :func:`monte_carlo_p` samples uniform portraits.

Vertex addresses are dot-separated 1-based digit strings; the root is ``""``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from statistics import NormalDist
from typing import Iterable, Iterator

import numpy as np

from .charpoly import char_polynomial, frac_str, profile
from .errors import ResourceLimitError, ValidationError
from .permgroup import Perm, PermSet, cosets, fixed_point_count, is_normal

DEFAULT_LIMIT = 2_000_000
DEFAULT_MAX_BITS = 4_000_000

__all__ = [
    "TruncatedAutomorphism",
    "FppSequence",
    "MonteCarloEstimate",
    "GqpCount",
    "parse_address",
    "format_address",
    "internal_vertices",
    "apply_automorphism",
    "compose",
    "sigma_sequence",
    "recurrence_p",
    "fpp_sequence",
    "recurrence_enclosure",
    "iter_portraits",
    "enumerate_count",
    "enumerate_count_naive",
    "enumerate_count_gqp",
    "monte_carlo_p",
    "oracle_report",
]


def parse_address(v: str | Iterable[int]) -> tuple:
    if isinstance(v, str):
        s = v.replace("·", ".").strip()
        if not s:
            return ()
        try:
            return tuple(int(x) for x in s.split("."))
        except ValueError:
            raise ValidationError(f"malformed vertex address {v!r}") from None
    return tuple(int(x) for x in v)


def format_address(v: Iterable[int]) -> str:
    return ".".join(str(x) for x in v)


def internal_vertices(d: int, depth: int) -> Iterator[tuple]:
    """Vertices on levels ``0..depth-1`` in breadth-first, lexicographic order."""
    for k in range(depth):
        yield from product(range(1, d + 1), repeat=k)


def _num_internal(d: int, n: int) -> int:
    return n if d == 1 else (d ** n - 1) // (d - 1)


@dataclass(frozen=True)
class TruncatedAutomorphism:
    """An element of ``Aut(T^n)`` given by its portrait.

    ``portrait`` maps each internal vertex address (tuple of 1-based digits)
    to the permutation the automorphism applies to that vertex's children.
    """

    d: int
    depth: int
    portrait: dict

    def __post_init__(self):
        expected = _num_internal(self.d, self.depth)
        if len(self.portrait) != expected:
            raise ValidationError(
                f"portrait has {len(self.portrait)} labels, expected {expected}")
        for v, s in self.portrait.items():
            if len(v) >= self.depth or any(not 1 <= x <= self.d for x in v):
                raise ValidationError(f"vertex {format_address(v)!r} is not internal")
            if s.degree != self.d:
                raise ValidationError("portrait label has wrong degree")

    @classmethod
    def from_labels(cls, d: int, depth: int, labels: dict | None = None) -> "TruncatedAutomorphism":
        """Build a portrait, defaulting unlisted vertices to the identity."""
        e = Perm.identity(d)
        portrait = {v: e for v in internal_vertices(d, depth)}
        for v, s in (labels or {}).items():
            key = parse_address(v)
            if key not in portrait:
                raise ValidationError(f"vertex {v!r} is not internal at depth {depth}")
            portrait[key] = s
        return cls(d, depth, portrait)

    def __call__(self, v):
        return apply_automorphism(self, v)


def apply_automorphism(a: TruncatedAutomorphism, v: str | Iterable[int]) -> str:
    """Image of vertex ``v`` using ``g(x w) = g(x) g|_x(w)``.

    The label consulted at each step is the one at the *source* prefix.
    """
    addr = parse_address(v)
    if len(addr) > a.depth or any(not 1 <= x <= a.d for x in addr):
        raise ValidationError(f"address {format_address(addr)!r} out of range")
    out = []
    for k, x in enumerate(addr):
        out.append(a.portrait[addr[:k]](x))
    return format_address(out)


def compose(a: TruncatedAutomorphism, b: TruncatedAutomorphism) -> TruncatedAutomorphism:
    """Portrait of ``a * b`` (apply ``b`` first): ``(ab)|_v = a|_{b(v)} b|_v``."""
    if (a.d, a.depth) != (b.d, b.depth):
        raise ValidationError("shape mismatch")
    portrait = {}
    for v, s in b.portrait.items():
        bv = parse_address(apply_automorphism(b, v))
        portrait[v] = a.portrait[bv] * s
    return TruncatedAutomorphism(a.d, a.depth, portrait)


def _as_list(S) -> list:
    if isinstance(S, PermSet):
        return S.sorted()
    if hasattr(S, "elements") and isinstance(S.elements, PermSet):
        return S.elements.sorted()
    return sorted(dict.fromkeys(S))


def sigma_sequence(S, n: int) -> list:
    """``sigma_k = (#S)^((d^k - 1)/(d - 1))`` for ``k = 0..n``."""
    if n < 0:
        raise ValidationError("n must be >= 0")
    elems = _as_list(S)
    m, d = len(elems), elems[0].degree
    return [m ** _num_internal(d, k) for k in range(n + 1)]


@dataclass(frozen=True)
class FppSequence:
    sigma: list
    f: list | None
    p: list

    def __post_init__(self):
        for k in range(1, len(self.p)):
            if self.p[k] > self.p[k - 1]:
                raise ValidationError("p sequence must be nonincreasing")
        if self.f is not None:
            for s, f, p in zip(self.sigma, self.f, self.p):
                if Fraction(f, s) != p:
                    raise ValidationError("p_k != f_k / sigma_k")


def _check_bits(S, n: int, max_bits: int) -> None:
    elems = _as_list(S)
    m, d = len(elems), elems[0].degree
    bits = _num_internal(d, n) * math.log2(max(m, 2))
    if bits > max_bits:
        raise ResourceLimitError(
            f"exact level-{n} values need about {bits:.3g} bits (limit {max_bits}); "
            "use recurrence_enclosure", required=int(bits))


def recurrence_p(S, n: int, max_bits: int = DEFAULT_MAX_BITS) -> list:
    """Exact ``[p_0, ..., p_n]`` with ``p_0 = 1`` and ``p_{k+1} = f_S(p_k)``."""
    if n < 0:
        raise ValidationError("n must be >= 0")
    _check_bits(S, n, max_bits)
    f = char_polynomial(profile(_as_list(S)))
    p = [Fraction(1)]
    for _ in range(n):
        p.append(f(p[-1]))
    return p


def fpp_sequence(S, n: int, max_bits: int = DEFAULT_MAX_BITS) -> FppSequence:
    """Integer recurrence for the counts alongside ``p``.

    ``f_{k+1} = sum_{j>=1} D(j) sigma_k^(d-j) (sigma_k^j - (sigma_k - f_k)^j)``
    and ``sigma_{k+1} = sigma_k^d * #S``.
    """
    if n < 0:
        raise ValidationError("n must be >= 0")
    _check_bits(S, n, max_bits)
    elems = _as_list(S)
    prof = profile(elems)
    d, m = prof.d, prof.total
    sigma, f = [1], [1]
    for _ in range(n):
        s, c = sigma[-1], f[-1]
        nxt = sum(prof.counts[j] * s ** (d - j) * (s ** j - (s - c) ** j)
                  for j in range(1, d + 1))
        sigma.append(s ** d * m)
        f.append(nxt)
    p = [Fraction(c, s) for c, s in zip(f, sigma)]
    return FppSequence(sigma, f, p)


def _round_down(q: Fraction, bits: int) -> Fraction:
    return Fraction(math.floor(q * (1 << bits)), 1 << bits)


def _round_up(q: Fraction, bits: int) -> Fraction:
    return Fraction(math.ceil(q * (1 << bits)), 1 << bits)


def recurrence_enclosure(S, n: int, bits: int = 128) -> list:
    """Rigorous dyadic enclosures ``[(lo_k, hi_k)]`` of ``p_0..p_n``.

    ``f_S`` is nondecreasing on ``[0, 1]``, so pushing the endpoints through
    ``f_S`` and rounding outward keeps ``p_k`` inside. Works for ``n`` far
    beyond what exact rationals can reach.
    """
    if n < 0:
        raise ValidationError("n must be >= 0")
    f = char_polynomial(profile(_as_list(S)))
    lo = hi = Fraction(1)
    out = [(lo, hi)]
    for _ in range(n):
        lo = max(_round_down(f(lo), bits), Fraction(0))
        hi = min(_round_up(f(hi), bits), Fraction(1))
        out.append((lo, hi))
    return out


def iter_portraits(S, n: int) -> Iterator[TruncatedAutomorphism]:
    """Every element of ``pi_n(W_S)``, in mixed-radix counter order.

    The root label varies fastest.
    """
    elems = _as_list(S)
    d = elems[0].degree
    verts = list(internal_vertices(d, n))
    for labels in product(elems, repeat=len(verts)):
        # product varies the last position fastest; reverse so the root does
        yield TruncatedAutomorphism(d, n, dict(zip(verts, reversed(labels))))


def _fixes_some_leaf(a: TruncatedAutomorphism) -> bool:
    leaves = product(range(1, a.d + 1), repeat=a.depth)
    return any(apply_automorphism(a, v) == format_address(v) for v in leaves)


def enumerate_count_naive(S, n: int, limit: int = 20_000) -> tuple:
    """Slow reference walk over :class:`TruncatedAutomorphism` objects."""
    sigma = sigma_sequence(S, n)[-1]
    if sigma > limit:
        raise ResourceLimitError(f"sigma_{n} = {sigma} exceeds limit {limit}", required=sigma)
    count = sum(1 for a in iter_portraits(S, n) if _fixes_some_leaf(a))
    return sigma, count


def enumerate_count(S, n: int, limit: int = DEFAULT_LIMIT, chunk_cells: int = 1 << 22) -> tuple:
    """Brute-force ``(sigma_n, f_n)`` over all portraits with labels in ``S``.

    Portraits are indexed by a mixed-radix counter (one digit per internal
    vertex, root least significant) and processed in chunks, so memory is
    independent of ``sigma_n``. For each portrait, the image of every vertex
    is computed level by level and compared with the vertex itself.
    """
    if n < 0:
        raise ValidationError("n must be >= 0")
    elems = _as_list(S)
    if not elems:
        raise ValidationError("empty set")
    d, m = elems[0].degree, len(elems)
    sigma = sigma_sequence(elems, n)[-1]
    if sigma > limit:
        raise ResourceLimitError(f"sigma_{n} = {sigma} exceeds limit {limit}", required=sigma)
    if n == 0:
        return 1, 1

    table = np.array([p._img for p in elems], dtype=np.int64)  # table[s, x] = s(x), 0-based
    nverts = _num_internal(d, n)
    offsets = [_num_internal(d, k) for k in range(n)]
    chunk = max(1, min(sigma, chunk_cells // (d ** n)))
    fixing = 0
    for start in range(0, sigma, chunk):
        counter = np.arange(start, min(start + chunk, sigma), dtype=np.int64)
        labels = np.empty((counter.size, nverts), dtype=np.int64)
        rest = counter.copy()
        for j in range(nverts):
            labels[:, j] = rest % m
            rest //= m
        # ok[:, v] is True iff the portrait maps level-k vertex v to itself
        ok = np.ones((counter.size, 1), dtype=bool)
        for k in range(n):
            lab = labels[:, offsets[k]:offsets[k] + d ** k]          # (c, d^k)
            img = table[lab]                                          # (c, d^k, d)
            child_fixed = img == np.arange(d)                         # (c, d^k, d)
            ok = (ok[:, :, None] & child_fixed).reshape(counter.size, d ** (k + 1))
        fixing += int(ok.any(axis=1).sum())
    return sigma, fixing


@dataclass(frozen=True)
class GqpCount:
    size: int
    fixing_count: int
    per_coset: list          # [(representative, sigma_n, f_n)]

    @property
    def proportion(self) -> Fraction:
        return Fraction(self.fixing_count, self.size)


def enumerate_count_gqp(Q: PermSet, P: PermSet, n: int, limit: int = DEFAULT_LIMIT) -> GqpCount:
    """Brute-force counts for ``pi_n(G_Q^P)`` as the disjoint union over cosets."""
    if not is_normal(Q, P):
        raise ValidationError("Q is not normal in P")
    per = []
    for A in cosets(Q, P):
        s, f = enumerate_count(A.elements, n, limit)
        per.append((A.representative, s, f))
    size = sum(s for _, s, _ in per)
    expected = len(per) * sigma_sequence(Q, n)[-1]
    if size != expected:
        raise ValidationError("coset sizes do not add up to [P:Q] * sigma_n(Q)")
    return GqpCount(size, sum(f for _, _, f in per), per)


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    halfwidth: float
    stderr: float
    hits: int
    trials: int


_Z99 = NormalDist().inv_cdf(0.995)


def monte_carlo_p(S, n: int, trials: int, seed: int, confidence_z: float = _Z99) -> MonteCarloEstimate:
    """Estimate ``p_n`` from ``trials`` Haar-uniform elements of ``pi_n(W_S)``.

    Labels are i.i.d. uniform on ``S``. Only labels on paths that stay fixed
    are drawn; the others cannot affect whether a depth-``n`` vertex is
    fixed, so the estimate has the same law as full portrait sampling.
    The half-width is the 99% normal approximation.
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    if n < 0:
        raise ValidationError("n must be >= 0")
    elems = _as_list(S)
    fixed = [tuple(x for x in range(1, p.degree + 1) if p(x) == x) for p in elems]
    counts = [len(f) for f in fixed]
    m = len(elems)
    rng = np.random.default_rng(seed)
    buf = rng.integers(0, m, size=4096)
    pos = 0

    hits = 0
    for _ in range(trials):
        if n == 0:
            hits += 1
            continue
        stack = [0]  # depths of vertices still on a fixed path
        found = False
        while stack and not found:
            depth = stack.pop()
            if pos == buf.size:
                buf = rng.integers(0, m, size=4096)
                pos = 0
            s = int(buf[pos])
            pos += 1
            c = counts[s]
            if c == 0:
                continue
            if depth + 1 == n:
                found = True
            else:
                stack.extend([depth + 1] * c)
        hits += found
    est = hits / trials
    se = math.sqrt(est * (1 - est) / trials)
    return MonteCarloEstimate(est, confidence_z * se, se, hits, trials)


def oracle_report(S, n: int, limit: int = DEFAULT_LIMIT) -> dict:
    """Enumeration versus recurrence at level ``n`` as a flat record."""
    elems = _as_list(S)
    sigma, f = enumerate_count(elems, n, limit)
    p_rec = recurrence_p(elems, n)[-1]
    p_enum = Fraction(f, sigma)
    return {
        "d": elems[0].degree,
        "set_size": len(elems),
        "n": n,
        "sigma_n": str(sigma),
        "f_n": f,
        "p_n": frac_str(p_enum),
        "p_recurrence": frac_str(p_rec),
        "matches_recurrence": p_enum == p_rec,
    }
