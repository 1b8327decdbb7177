"""Fuzzy constraint sets built from positive/negative instance pairs.

Each pair (u positive, v negative) yields one constraint set: the fuzzy set
of literals that separate u from v.  A literal separates fully (grade 1)
when both cells are certain and disagree the right way, at grade
(1/2)^(p+q) when one side of the disagreement is Unknown, and at grade
(1/2)^(p+q+1) when both cells are Unknown.  p and q are the class sizes at
build time; they are deliberately baked into the sets so later erasures do
not shift the grades.

Grades are stored as six bit masks (full/half/quarter, per literal sign).
All arithmetic on top of them is exact: grade values and cardinalities are
integers scaled by 2^(p+q+1), and relevances are Fractions of those.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import EmptyConstraintError
from .formula import Literal
from .trits import Dataset, Instance


@dataclass(frozen=True)
class ConstraintSet:
    """Fuzzy set of separating literals for one (positive, negative) pair.

    Bit k of ``pos_*`` grades literal ``x(k+1)``, bit k of ``neg_*`` grades
    ``~x(k+1)``.  The two quarter masks start out equal (both signs separate
    a doubly-Unknown cell) but are tracked apart so one sign can be
    discarded without the other.
    """

    n: int
    exponent: int
    positive_index: int
    negative_index: int
    pos_full: int
    pos_half: int
    pos_quarter: int
    neg_full: int
    neg_half: int
    neg_quarter: int

    @property
    def scale(self) -> int:
        """Denominator that turns every grade into an integer."""
        return 1 << (self.exponent + 1)

    def scaled_membership(self, lit: Literal) -> int:
        """Grade of ``lit`` times ``scale``: 0, 1, 2, or ``scale``."""
        bit = 1 << (lit.var - 1)
        if lit.neg:
            full, half, quarter = self.neg_full, self.neg_half, self.neg_quarter
        else:
            full, half, quarter = self.pos_full, self.pos_half, self.pos_quarter
        if full & bit:
            return self.scale
        if half & bit:
            return 2
        if quarter & bit:
            return 1
        return 0

    def membership(self, lit: Literal) -> Fraction:
        return Fraction(self.scaled_membership(lit), self.scale)

    def contains(self, lit: Literal) -> bool:
        return self.scaled_membership(lit) != 0

    @property
    def scaled_cardinality(self) -> int:
        return (
            self.scale * ((self.pos_full | self.neg_full << self.n).bit_count())
            + 2 * ((self.pos_half | self.neg_half << self.n).bit_count())
            + (self.pos_quarter | self.neg_quarter << self.n).bit_count()
        )

    @property
    def cardinality(self) -> Fraction:
        return Fraction(self.scaled_cardinality, self.scale)

    @property
    def is_empty(self) -> bool:
        return not (
            self.pos_full | self.pos_half | self.pos_quarter
            | self.neg_full | self.neg_half | self.neg_quarter
        )

    @property
    def memberships(self) -> dict[Literal, Fraction]:
        """Every literal with a nonzero grade, mapped to its exact grade."""
        out = {}
        for var in range(1, self.n + 1):
            for neg in (False, True):
                lit = Literal(neg, var)
                scaled = self.scaled_membership(lit)
                if scaled:
                    out[lit] = Fraction(scaled, self.scale)
        return out

    def discard(self, lit: Literal) -> "ConstraintSet":
        """Copy with ``lit`` removed (the opposite sign is untouched)."""
        bit = 1 << (lit.var - 1)
        if lit.neg:
            return replace(
                self,
                neg_full=self.neg_full & ~bit,
                neg_half=self.neg_half & ~bit,
                neg_quarter=self.neg_quarter & ~bit,
            )
        return replace(
            self,
            pos_full=self.pos_full & ~bit,
            pos_half=self.pos_half & ~bit,
            pos_quarter=self.pos_quarter & ~bit,
        )


@dataclass(frozen=True)
class ConstraintGroup:
    """All surviving constraint sets that share one positive instance."""

    positive_index: int
    sets: tuple[ConstraintSet, ...]


def build_membership(
    u: Instance,
    v: Instance,
    p: int,
    q: int,
    origin: tuple[int, int] = (0, 0),
) -> ConstraintSet:
    """Grade every literal against the pair (u positive, v negative)."""
    if u.n != v.n:
        raise ValueError("instances of unequal width")
    both_unknown = u.unknowns & v.unknowns
    return ConstraintSet(
        n=u.n,
        exponent=p + q,
        positive_index=origin[0],
        negative_index=origin[1],
        pos_full=u.ones & v.zeros,
        pos_half=(u.ones & v.unknowns) | (u.unknowns & v.zeros),
        pos_quarter=both_unknown,
        neg_full=u.zeros & v.ones,
        neg_half=(u.zeros & v.unknowns) | (u.unknowns & v.ones),
        neg_quarter=both_unknown,
    )


def build_constraints(dataset: Dataset, threads: int = 1) -> list[ConstraintGroup]:
    """One group per positive instance, one set per negative instance."""
    p, q = dataset.p, dataset.q

    def group(i: int) -> ConstraintGroup:
        u = dataset.positives[i - 1]
        sets = tuple(
            build_membership(u, v, p, q, origin=(i, j))
            for j, v in enumerate(dataset.negatives, start=1)
        )
        return ConstraintGroup(i, sets)

    indices = range(1, p + 1)
    if threads > 1 and p > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(group, indices))
    return [group(i) for i in indices]


def fuzzy_cardinality(cs: ConstraintSet) -> Fraction:
    return cs.cardinality


def relevance_ij(cs: ConstraintSet, lit: Literal) -> Fraction:
    """Grade of ``lit`` divided by the set's cardinality."""
    card = cs.scaled_cardinality
    if card == 0:
        raise EmptyConstraintError(
            f"constraint set ({cs.positive_index}, {cs.negative_index}) is empty"
        )
    return Fraction(cs.scaled_membership(lit), card)


def relevance_i(group: ConstraintGroup, lit: Literal, q: int) -> Fraction:
    """Mean of ``relevance_ij`` over the group, against the frozen ``q``.

    Erased sets simply no longer appear in ``group.sets``; the divisor stays
    the original negative-class size.
    """
    if q < 1:
        raise ValueError("q must be positive")
    total = sum((relevance_ij(cs, lit) for cs in group.sets), Fraction(0))
    return total / q


def total_relevance(groups: list[ConstraintGroup], lit: Literal, p: int, q: int) -> Fraction:
    """Mean of ``relevance_i`` over all groups, against the frozen ``p``."""
    if p < 1:
        raise ValueError("p must be positive")
    total = sum((relevance_i(g, lit, q) for g in groups), Fraction(0))
    return total / p
