"""Coset-constrained tree groups ``G_Q^P``.

``G_Q^P`` consists of the tree automorphisms whose portrait labels all lie in
``P`` and pairwise differ by an element of the normal subgroup ``Q``; that is,
all labels come from one coset of ``P/Q``. Its fixed-point proportion is the
mean, over the cosets ``A``, of the proportion for the iterated wreath set
``W_A``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .charpoly import (
    DEFAULT_DIGITS,
    DEFAULT_PRECISION,
    FppValue,
    coset_average_fixed,
    fpp_of_set,
    frac_str,
    mean_fpp,
    profile,
)
from .errors import (
    DegreeTooSmallError,
    NotNormalError,
    NotSubgroupError,
    TrivialSubgroupError,
    ValidationError,
)
from .permgroup import (
    Coset,
    Perm,
    PermSet,
    commutator_subgroup,
    cosets,
    format_perm,
    generate,
    global_fixed_point,
    is_normal,
    is_subset,
    is_transitive,
    parse_perm_list,
)

TFG = "TFG"
NOT_TFG = "NotTFG"
UNKNOWN = "Unknown"


@dataclass(frozen=True)
class GqpSpec:
    d: int
    Q: PermSet
    P: PermSet
    cosets: tuple

    @property
    def index(self) -> int:
        return len(self.cosets)


def _as_perms(gens, d: int) -> list:
    if isinstance(gens, str):
        return parse_perm_list(gens, d)
    if isinstance(gens, PermSet):
        return list(gens.gens())
    out = []
    for g in gens:
        out.extend(parse_perm_list(g, d) if isinstance(g, str) else [g])
    return out


def validate_gqp(d: int, Qgens, Pgens) -> GqpSpec:
    """Close both generator lists and check ``1 != Q``, ``Q <= P``, ``Q`` normal, ``d >= 3``.

    Generators may be :class:`Perm` objects, cycle strings, or comma-separated
    lists of cycle strings. ``Q``'s generators are added to ``P``'s only if
    they are already inside ``P``; a ``Q`` escaping ``P`` is an error.
    """
    if d < 3:
        raise DegreeTooSmallError(
            f"d = {d} < 3: for d = 2 the only choice is Q = P = Sym(2), whose "
            "group is the full automorphism group with fixed-point proportion 0")
    Q = generate(_as_perms(Qgens, d), degree=d)
    P = generate(_as_perms(Pgens, d), degree=d)
    if len(Q) == 1:
        raise TrivialSubgroupError("Q must be a nontrivial subgroup")
    if not is_subset(Q, P):
        raise NotSubgroupError("Q is not a subgroup of P")
    if not is_normal(Q, P):
        raise NotNormalError("Q is not normal in P")
    cs = tuple(cosets(Q, P))
    if len(cs) * len(Q) != len(P):
        raise ValidationError("coset enumeration does not cover P")
    return GqpSpec(d, Q, P, cs)


def fpp_gqp(spec: GqpSpec, precision: int = DEFAULT_PRECISION,
            digits: int = DEFAULT_DIGITS) -> FppValue:
    """Mean of the per-coset proportions, exact whenever every summand is."""
    return mean_fpp([fpp_of_set(A, precision, digits) for A in spec.cosets], precision, digits)


def level_transitive(spec: GqpSpec) -> bool:
    return is_transitive(spec.Q)


def martingale(spec: GqpSpec) -> bool:
    # same criterion as level-transitivity: Q transitive on {1..d}
    return is_transitive(spec.Q)


@dataclass(frozen=True)
class HausdorffDimension:
    q_order: int
    sym_order: int
    approx: float

    def to_record(self) -> dict:
        return {"log_num": self.q_order, "log_den": self.sym_order, "approx": self.approx}


def hausdorff_dimension(spec: GqpSpec) -> HausdorffDimension:
    """``log|Q| / log(d!)``."""
    q, s = len(spec.Q), math.factorial(spec.d)
    return HausdorffDimension(q, s, math.log(q) / math.log(s))


@dataclass(frozen=True)
class TfgStatus:
    status: str
    reason: str | None = None

    def __str__(self):
        return self.status if self.reason is None else f"{self.status}({self.reason})"


def tfg_status(spec: GqpSpec) -> TfgStatus:
    """Topological finite generation, as far as the known criteria decide it.

    Not finitely generated if ``Q`` is not perfect or fixes a common point;
    finitely generated if ``Q`` is transitive and perfect; otherwise unknown.
    """
    Q = spec.Q
    if commutator_subgroup(Q).elements != Q.elements:
        return TfgStatus(NOT_TFG, "commutator")
    if global_fixed_point(Q) is not None:
        return TfgStatus(NOT_TFG, "global_fixed_point")
    if is_transitive(Q):
        return TfgStatus(TFG)
    return TfgStatus(UNKNOWN, "non-transitive perfect Q without a global fixed point")


@dataclass(frozen=True)
class CosetRecord:
    representative: Perm
    size: int
    avg_fixed_exact: Fraction
    derangement_free: bool
    unifix: bool
    fpp: FppValue

    def to_record(self) -> dict:
        return {
            "rep": format_perm(self.representative),
            "size": self.size,
            "avg_fixed_exact": frac_str(self.avg_fixed_exact),
            "derangement_free": self.derangement_free,
            "unifix": self.unifix,
            "fpp": self.fpp.to_record(),
        }


def classify_coset(A: Coset, precision: int = DEFAULT_PRECISION,
                   digits: int = DEFAULT_DIGITS) -> CosetRecord:
    prof = profile(A)
    return CosetRecord(
        representative=A.representative,
        size=len(A),
        avg_fixed_exact=coset_average_fixed(A),
        derangement_free=prof.counts[0] == 0,
        unifix=prof.counts[1] == prof.total,
        fpp=fpp_of_set(A, precision, digits),
    )


def classify_cosets(spec: GqpSpec, precision: int = DEFAULT_PRECISION,
                    digits: int = DEFAULT_DIGITS) -> list:
    return [classify_coset(A, precision, digits) for A in spec.cosets]


@dataclass(frozen=True)
class GqpReport:
    d: int
    q_order: int
    p_order: int
    fpp: FppValue
    level_transitive: bool
    martingale: bool
    hausdorff: HausdorffDimension
    tfg: TfgStatus
    index: int
    coset_records: Sequence[CosetRecord]

    def to_record(self) -> dict:
        return {
            "d": self.d,
            "q_order": self.q_order,
            "p_order": self.p_order,
            "fpp": self.fpp.to_record(),
            "level_transitive": self.level_transitive,
            "martingale": self.martingale,
            "hausdorff": self.hausdorff.to_record(),
            "tfg": {"status": self.tfg.status, "reason": self.tfg.reason},
            "index": self.index,
            "coset_records": [c.to_record() for c in self.coset_records],
        }


def gqp_report(spec: GqpSpec, precision: int = DEFAULT_PRECISION,
               digits: int = DEFAULT_DIGITS) -> GqpReport:
    records = classify_cosets(spec, precision, digits)
    fpp = mean_fpp([r.fpp for r in records], precision, digits)
    return GqpReport(
        d=spec.d,
        q_order=len(spec.Q),
        p_order=len(spec.P),
        fpp=fpp,
        level_transitive=level_transitive(spec),
        martingale=martingale(spec),
        hausdorff=hausdorff_dimension(spec),
        tfg=tfg_status(spec),
        index=spec.index,
        coset_records=records,
    )
