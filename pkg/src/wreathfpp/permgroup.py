"""Permutations of {1,...,d}, closures, cosets and structural predicates.

Points are 1-based at every public boundary (parsing, printing, ``Perm.images``,
``Perm.__call__``) and 0-based inside ``Perm._img``. Composition follows the
left-action convention ``(g * h)(x) == g(h(x))``.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Iterator, Sequence

from .errors import NotSubgroupError, ParseError, ResourceLimitError, ValidationError

DEFAULT_GENERATE_CAP = math.factorial(10)
DEFAULT_NORMALIZER_CAP = math.factorial(8)

__all__ = [
    "Perm",
    "PermSet",
    "Coset",
    "parse_perm",
    "parse_perm_list",
    "format_perm",
    "fixed_point_count",
    "identity",
    "generate",
    "perm_set",
    "symmetric_group",
    "alternating_group",
    "orbit",
    "orbits",
    "is_transitive",
    "is_subset",
    "is_normal",
    "cosets",
    "commutator_subgroup",
    "normalizer_in_sym",
    "global_fixed_point",
    "conjugate_set",
    "all_subgroups",
    "subgroup_classes",
    "are_conjugate",
]


class Perm:
    """An immutable permutation of ``{1, ..., d}``.

    Parameters
    ----------
    images : sequence of int
        ``images[i - 1]`` is the image of point ``i`` (1-based).
    """

    __slots__ = ("_img", "_hash")

    def __init__(self, images: Sequence[int]):
        img = tuple(int(x) - 1 for x in images)
        d = len(img)
        if d < 1:
            raise ValidationError("a permutation needs degree >= 1")
        if sorted(img) != list(range(d)):
            raise ValidationError(f"images {list(images)} are not a bijection of 1..{d}")
        self._img = img
        self._hash = hash(img)

    @classmethod
    def _raw(cls, img: tuple) -> "Perm":
        # trusted 0-based constructor, no validation
        p = object.__new__(cls)
        p._img = img
        p._hash = hash(img)
        return p

    @classmethod
    def identity(cls, d: int) -> "Perm":
        if d < 1:
            raise ValidationError("degree must be >= 1")
        return cls._raw(tuple(range(d)))

    @property
    def degree(self) -> int:
        return len(self._img)

    @property
    def images(self) -> tuple:
        return tuple(x + 1 for x in self._img)

    def __call__(self, x: int) -> int:
        return self._img[x - 1] + 1

    def __mul__(self, other: "Perm") -> "Perm":
        if not isinstance(other, Perm):
            return NotImplemented
        if len(other._img) != len(self._img):
            raise ValidationError("cannot compose permutations of different degree")
        a = self._img
        return Perm._raw(tuple(a[j] for j in other._img))

    def inverse(self) -> "Perm":
        inv = [0] * len(self._img)
        for i, j in enumerate(self._img):
            inv[j] = i
        return Perm._raw(tuple(inv))

    def __pow__(self, k: int) -> "Perm":
        if k < 0:
            return self.inverse() ** (-k)
        result = Perm.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate_by(self, g: "Perm") -> "Perm":
        """Return ``g * self * g^-1``."""
        return g * self * g.inverse()

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self._img))

    def fixed_points(self) -> tuple:
        return tuple(i + 1 for i, j in enumerate(self._img) if i == j)

    def cycles(self) -> list:
        """Nontrivial cycles, each starting at its smallest point, sorted."""
        seen = set()
        out = []
        for start in range(len(self._img)):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self._img[start]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self._img[j]
            if len(cyc) > 1:
                out.append(tuple(x + 1 for x in cyc))
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if self.cycles() else 1

    def __eq__(self, other):
        return isinstance(other, Perm) and self._img == other._img

    def __lt__(self, other: "Perm") -> bool:
        return self._img < other._img

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Perm({format_perm(self)!r}, d={self.degree})"

    def __str__(self):
        return format_perm(self)


def identity(d: int) -> Perm:
    return Perm.identity(d)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_perm(text: str, d: int) -> Perm:
    """Parse cycle notation such as ``"(1,2)(3,4)"`` into a degree-``d`` Perm.

    Cycles are composed as functions, right to left, so ``"(1,2)(2,3)"``
    first applies ``(2,3)``. ``"()"`` is the identity.
    """
    if not isinstance(d, int) or d < 1:
        raise ValidationError(f"degree must be a positive integer, got {d!r}")
    s = re.sub(r"\s+", "", text)
    if s == "()":
        return Perm.identity(d)
    if not s:
        raise ParseError("empty permutation string")
    pos = 0
    cycles = []
    for m in _CYCLE_RE.finditer(s):
        if m.start() != pos:
            raise ParseError(f"unexpected text {s[pos:m.start()]!r} in {text!r}")
        pos = m.end()
        body = m.group(1)
        parts = body.split(",")
        if len(parts) < 2 or any(not p.isdigit() for p in parts):
            raise ParseError(f"malformed cycle ({body}) in {text!r}")
        pts = [int(p) for p in parts]
        for p in pts:
            if not 1 <= p <= d:
                raise ParseError(f"point {p} out of range 1..{d} in {text!r}")
        if len(set(pts)) != len(pts):
            raise ParseError(f"repeated point in cycle ({body})")
        cycles.append(pts)
    if pos != len(s):
        raise ParseError(f"unexpected text {s[pos:]!r} in {text!r}")

    result = Perm.identity(d)
    for pts in cycles:
        img = list(range(d))
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a - 1] = b - 1
        result = result * Perm._raw(tuple(img))
    return result


def parse_perm_list(text: str, d: int) -> list:
    """Parse a comma- or space-separated list of cycle-notation permutations.

    ``"(1,2,3),(2,3)"`` gives two permutations; commas inside a cycle are not
    separators.
    """
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ParseError("empty permutation list")
    items = []
    depth = 0
    cur = []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parentheses in {text!r}")
        if ch in ",;" and depth == 0:
            if cur:
                items.append("".join(cur))
            cur = []
            continue
        cur.append(ch)
    if depth != 0:
        raise ParseError(f"unbalanced parentheses in {text!r}")
    if cur:
        items.append("".join(cur))
    return [parse_perm(item, d) for item in items]


def format_perm(p: Perm) -> str:
    cyc = p.cycles()
    if not cyc:
        return "()"
    return "".join("(" + ",".join(map(str, c)) + ")" for c in cyc)


def fixed_point_count(p: Perm) -> int:
    return sum(1 for i, j in enumerate(p._img) if i == j)


@dataclass(frozen=True)
class PermSet:
    """A finite set of same-degree permutations.

    ``is_group`` is only ever set by constructors that verified closure.
    ``generators`` is a (possibly redundant) generating set when known.
    """

    degree: int
    elements: frozenset
    is_group: bool = False
    generators: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if any(p.degree != self.degree for p in self.elements):
            raise ValidationError("all elements must share the set's degree")

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[Perm]:
        return iter(self.sorted())

    def __contains__(self, p) -> bool:
        return p in self.elements

    def sorted(self) -> list:
        return sorted(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def gens(self) -> tuple:
        """Generators if recorded, else all elements."""
        return self.generators if self.generators else tuple(self.sorted())

    def __repr__(self):
        kind = "group" if self.is_group else "set"
        return f"PermSet({kind}, d={self.degree}, order={len(self.elements)})"


@dataclass(frozen=True)
class Coset:
    """The left coset ``representative * subgroup``."""

    representative: Perm
    subgroup: PermSet
    elements: PermSet

    def __len__(self):
        return len(self.elements)


def perm_set(elements: Iterable[Perm], degree: int | None = None) -> PermSet:
    """Wrap explicit elements (deduplicated) as a non-group set."""
    elems = frozenset(elements)
    if degree is None:
        if not elems:
            raise ValidationError("cannot infer the degree of an empty set")
        degree = next(iter(elems)).degree
    return PermSet(degree, elems, is_group=False)


def generate(generators: Sequence[Perm], cap: int = DEFAULT_GENERATE_CAP,
             degree: int | None = None) -> PermSet:
    """Closure of ``generators`` under composition (and hence inverse).

    Breadth-first; raises :class:`ResourceLimitError` as soon as more than
    ``cap`` elements have been found instead of returning a truncated set.
    """
    gens = list(generators)
    if degree is None:
        if not gens:
            raise ValidationError("degree is required when there are no generators")
        degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise ValidationError("generators must share one degree")
    if cap < 1:
        raise ValidationError("cap must be >= 1")
    gens = [g for g in dict.fromkeys(gens) if not g.is_identity()]
    e = Perm.identity(degree)
    seen = {e}
    queue = deque([e])
    gimgs = [g._img for g in gens]
    while queue:
        x = queue.popleft()
        xi = x._img
        for gi in gimgs:
            y = Perm._raw(tuple(gi[j] for j in xi))
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise ResourceLimitError(
                        f"group closure exceeds cap of {cap} elements", required=None)
                queue.append(y)
    return PermSet(degree, frozenset(seen), is_group=True, generators=tuple(gens))


def symmetric_group(d: int) -> PermSet:
    if d == 1:
        return generate([], degree=1)
    gens = [parse_perm(f"({','.join(map(str, range(1, d + 1)))})", d)]
    if d > 2:
        gens.insert(0, parse_perm("(1,2)", d))
    return generate(gens, cap=math.factorial(d))


def alternating_group(d: int) -> PermSet:
    if d < 3:
        return generate([], degree=d)
    gens = [parse_perm(f"(1,2,{k})", d) for k in range(3, d + 1)]
    return generate(gens, cap=math.factorial(d))


def orbit(S: PermSet | Iterable[Perm], x: int) -> frozenset:
    """Orbit of point ``x`` under the group generated by ``S``."""
    gens = S.gens() if isinstance(S, PermSet) else tuple(S)
    seen = {x}
    stack = [x]
    while stack:
        y = stack.pop()
        for g in gens:
            z = g(y)
            if z not in seen:
                seen.add(z)
                stack.append(z)
    return frozenset(seen)


def orbits(S: PermSet, points: Iterable[int] | None = None) -> list:
    pts = list(range(1, S.degree + 1)) if points is None else list(points)
    remaining = set(pts)
    out = []
    for x in pts:
        if x in remaining:
            o = orbit(S, x)
            out.append(o)
            remaining -= o
    return out


def is_transitive(S: PermSet) -> bool:
    if not S.elements:
        raise ValidationError("transitivity of an empty set is undefined")
    return len(orbit(S, 1)) == S.degree


def is_subset(Q: PermSet, P: PermSet) -> bool:
    return Q.degree == P.degree and Q.elements <= P.elements


def is_normal(Q: PermSet, P: PermSet) -> bool:
    """True iff ``g Q g^-1 == Q`` for every generator ``g`` of ``P``."""
    if not is_subset(Q, P):
        raise NotSubgroupError("Q is not contained in P")
    qgens = Q.gens()
    for g in P.gens():
        ginv = g.inverse()
        for q in qgens:
            if g * q * ginv not in Q.elements:
                return False
    return True


def cosets(Q: PermSet, P: PermSet) -> list:
    """Left cosets ``rep * Q`` partitioning ``P``.

    Each representative is the lexicographically smallest element of its
    coset and cosets are sorted by representative, so the identity coset
    comes first.
    """
    if not (Q.is_group and P.is_group):
        raise ValidationError("cosets need two groups")
    if not is_subset(Q, P):
        raise NotSubgroupError("Q is not a subgroup of P")
    remaining = set(P.elements)
    out = []
    qlist = Q.sorted()
    for g in P.sorted():
        if g not in remaining:
            continue
        elems = frozenset(g * h for h in qlist)
        remaining -= elems
        out.append(Coset(g, Q, PermSet(P.degree, elems, is_group=g in Q.elements)))
    return out


def commutator(a: Perm, b: Perm) -> Perm:
    """``[a, b] = a^-1 b^-1 a b``."""
    return a.inverse() * b.inverse() * a * b


def commutator_subgroup(Q: PermSet) -> PermSet:
    """Derived subgroup, as the normal closure of generator commutators."""
    if not Q.is_group:
        raise ValidationError("commutator subgroup needs a group")
    gens = Q.gens()
    comms = {commutator(a, b) for a in gens for b in gens}
    comms.discard(Perm.identity(Q.degree))
    N = generate(sorted(comms), degree=Q.degree, cap=max(len(Q), 1))
    while True:
        extra = []
        for g in gens:
            ginv = g.inverse()
            for n in N.gens():
                c = g * n * ginv
                if c not in N.elements:
                    extra.append(c)
        if not extra:
            return N
        N = generate(list(N.gens()) + extra, degree=Q.degree, cap=max(len(Q), 1))


def normalizer_in_sym(Q: PermSet, cap: int = DEFAULT_NORMALIZER_CAP) -> PermSet:
    """``N_{Sym(d)}(Q)`` by scanning all of ``Sym(d)``."""
    d = Q.degree
    total = math.factorial(d)
    if total > cap:
        raise ResourceLimitError(
            f"normalizer scan needs {total} = {d}! elements, cap is {cap}", required=total)
    qgens = [q._img for q in Q.gens()]
    qelems = {q._img for q in Q.elements}
    found = []
    for img in permutations(range(d)):
        inv = [0] * d
        for i, j in enumerate(img):
            inv[j] = i
        ok = True
        for q in qgens:
            # g q g^-1
            c = tuple(img[q[inv[x]]] for x in range(d))
            if c not in qelems:
                ok = False
                break
        if ok:
            found.append(Perm._raw(tuple(img)))
    elems = frozenset(found)
    return PermSet(d, elems, is_group=True, generators=_small_generating_set(found, d))


def _small_generating_set(elements: Sequence[Perm], d: int) -> tuple:
    target = len(set(elements))
    gens = []
    current = {Perm.identity(d)}
    for g in sorted(elements):
        if len(current) == target:
            break
        if g not in current:
            gens.append(g)
            current = generate(gens, degree=d, cap=target).elements
    return tuple(gens)


def global_fixed_point(Q: PermSet) -> int | None:
    """Smallest point fixed by every element of ``Q``, or ``None``."""
    if not Q.elements:
        raise ValidationError("empty set")
    gens = Q.gens()
    for x in range(1, Q.degree + 1):
        if all(g(x) == x for g in gens):
            return x
    return None


def conjugate_set(S: PermSet, g: Perm) -> PermSet:
    """``{g s g^-1 : s in S}``, preserving the group flag."""
    if g.degree != S.degree:
        raise ValidationError("degree mismatch")
    ginv = g.inverse()
    elems = frozenset(g * s * ginv for s in S.elements)
    gens = tuple(g * s * ginv for s in S.generators)
    return PermSet(S.degree, elems, is_group=S.is_group, generators=gens)


def all_subgroups(d: int, max_degree: int = 5) -> list:
    """Every subgroup of ``Sym(d)``, built as iterated joins of cyclic subgroups.

    Exhaustive for any ``d`` but only practical for ``d <= 5``.
    """
    if d > max_degree:
        raise ResourceLimitError(
            f"subgroup enumeration of Sym({d}) is beyond desk scale (max {max_degree})")
    sym = symmetric_group(d)
    # one generator per cyclic subgroup
    cyclic_gens = {}
    for g in sym.sorted():
        key = generate([g], degree=d).elements
        cyclic_gens.setdefault(key, g)
    trivial = generate([], degree=d)
    found = {trivial.elements: trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for H in frontier:
            for C, g in cyclic_gens.items():
                if C <= H.elements:
                    continue
                K = generate(list(H.generators) + [g], degree=d, cap=math.factorial(d))
                if K.elements not in found:
                    found[K.elements] = K
                    nxt.append(K)
        frontier = nxt
    return sorted(found.values(), key=lambda H: (len(H), sorted(H.elements)))


def _conjugacy_key(H: PermSet, sym: Sequence[Perm]) -> tuple:
    return min(tuple(sorted(g * h * g.inverse() for h in H.elements)) for g in sym)


def are_conjugate(H: PermSet, K: PermSet) -> bool:
    if H.degree != K.degree or len(H) != len(K):
        return False
    for g in symmetric_group(H.degree).sorted():
        if conjugate_set(H, g).elements == K.elements:
            return True
    return False


def subgroup_classes(d: int) -> list:
    """One representative per conjugacy class of subgroups of ``Sym(d)``.

    Representatives are the first subgroup met in ``all_subgroups`` order.
    """
    sym = symmetric_group(d).sorted()
    classes = {}
    for H in all_subgroups(d):
        classes.setdefault(_conjugacy_key(H, sym), H)
    return list(classes.values())
