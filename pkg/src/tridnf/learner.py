"""Greedy learner: builds a DNF formula one term at a time.

Each outer iteration starts with preprocessing of the current working set
(uncertainty reduction, dedupe, consistency check), freezes p and q, grades
every literal against all surviving (positive, negative) constraint sets,
repeatedly picks the literal of maximal total relevance, and erases what
the pick resolves.  A finished term removes every positive it can still
cover and forces each surviving negative to commit one Unknown cell
against the term.

Relevance comparisons are exact.  The hot path avoids building full
rational scores: sets are bucketed by scaled cardinality, each literal
gets an integer lower bound sum(floor(num << 64 / card)) whose error is
below one unit per bucket, and only literals whose upper bound reaches the
best lower bound are re-scored with Fractions.  The winner (ties broken
by literal code: x1..xn then ~x1..~xn) is provably the same literal exact
arithmetic would pick.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import ConsistencyAbort, IterationLimitError
from .formula import DnfFormula, Literal, Term
from .trits import (
    Dataset,
    Instance,
    Trit,
    check_self_consistency,
    delete_repetitions,
    reduce_uncertainty,
)


@dataclass(frozen=True)
class LearnerConfig:
    """Knobs for learn().

    ``dedupe``: duplicate-row removal mode, "exact" (ternary duplicates) or
    "certain" (fully-certain duplicates only).  ``trace``: collect the
    per-event text log.  ``max_iterations``: safety cap on outer
    iterations, default p+1.  ``threads``: fan-out for constraint-set
    construction; never changes any output.  ``reduce`` and
    ``update_negatives`` exist to reproduce degraded behavior in tests;
    production callers leave them True.
    """

    dedupe: str = "exact"
    trace: bool = False
    max_iterations: int | None = None
    threads: int = 1
    reduce: bool = True
    update_negatives: bool = True


@dataclass(frozen=True)
class LearnResult:
    """Formula plus the final working data the formula was checked against.

    ``dataset`` holds the erased positives (in erasure order) and the
    negatives in their final, possibly updated, state.  ``trace`` is empty
    unless the config asked for one.
    """

    formula: DnfFormula
    dataset: Dataset
    trace: tuple[str, ...]
    iterations: int


def _abort(trace: list[str] | None, reason: str, **details) -> None:
    if trace is not None:
        trace.append(f"ABORT {reason}")
        details["trace"] = tuple(trace)
    raise ConsistencyAbort(reason, **details)


class _LiveSet:
    """Mutable constraint set: six grade masks plus scaled cardinality."""

    __slots__ = (
        "i", "j",
        "pos_full", "pos_half", "pos_quarter",
        "neg_full", "neg_half", "neg_quarter",
        "card",
    )

    def __init__(self, i, j, pos_full, pos_half, pos_quarter, neg_full, neg_half, neg_quarter):
        self.i = i
        self.j = j
        self.pos_full = pos_full
        self.pos_half = pos_half
        self.pos_quarter = pos_quarter
        self.neg_full = neg_full
        self.neg_half = neg_half
        self.neg_quarter = neg_quarter
        self.card = 0


def _pair_masks(u: Instance, v: Instance, full: int) -> tuple[int, int, int, int, int, int]:
    u_unk = ~u.known_bits & full
    v_unk = ~v.known_bits & full
    u_one, u_zero = u.value_bits, u.known_bits & ~u.value_bits
    v_one, v_zero = v.value_bits, v.known_bits & ~v.value_bits
    both = u_unk & v_unk
    return (
        u_one & v_zero,
        (u_one & v_unk) | (u_unk & v_zero),
        both,
        u_zero & v_one,
        (u_zero & v_unk) | (u_unk & v_one),
        both,
    )


class _TermEngine:
    """Scoring and erasure state for building one term.

    Rebuilt from the working dataset at the start of every outer
    iteration; p, q, and the grade scale 2^(p+q+1) are frozen here and do
    not drift as sets are erased mid-term.
    """

    def __init__(self, positives, negatives, threads: int, trace: list[str] | None):
        self.n = positives[0].n
        p, q = len(positives), len(negatives)
        self.norm = p * q
        self.scale = 1 << (p + q + 1)
        self.trace = trace
        self.groups: dict[int, dict[int, _LiveSet]] = {}
        self.buckets: dict[int, dict[int, int]] = {}
        self.bucket_sets: dict[int, int] = {}
        self.total = 0
        full = (1 << self.n) - 1

        def row(i: int) -> list[tuple[int, int, int, int, int, int]]:
            u = positives[i - 1]
            return [_pair_masks(u, v, full) for v in negatives]

        indices = range(1, p + 1)
        if threads > 1 and p > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                rows = list(pool.map(row, indices))
        else:
            rows = [row(i) for i in indices]

        for i, masks_row in enumerate(rows, start=1):
            if not masks_row:
                continue
            group: dict[int, _LiveSet] = {}
            for j, masks in enumerate(masks_row, start=1):
                s = _LiveSet(i, j, *masks)
                s.card = self._card(s)
                if s.card == 0:
                    _abort(trace, "empty-constraint-set", pairs=((i, j),))
                group[j] = s
                self._bucket_add(s)
            self.groups[i] = group
            self.total += len(group)

    def _card(self, s: _LiveSet) -> int:
        return (
            self.scale * (s.pos_full.bit_count() + s.neg_full.bit_count())
            + 2 * (s.pos_half.bit_count() + s.neg_half.bit_count())
            + s.pos_quarter.bit_count() + s.neg_quarter.bit_count()
        )

    def _scaled(self, s: _LiveSet, code: int) -> int:
        if code < self.n:
            bit = 1 << code
            if s.pos_full & bit:
                return self.scale
            if s.pos_half & bit:
                return 2
            if s.pos_quarter & bit:
                return 1
        else:
            bit = 1 << (code - self.n)
            if s.neg_full & bit:
                return self.scale
            if s.neg_half & bit:
                return 2
            if s.neg_quarter & bit:
                return 1
        return 0

    def _memberships(self, s: _LiveSet):
        n, scale = self.n, self.scale
        for mask, base, value in (
            (s.pos_full, 0, scale),
            (s.pos_half, 0, 2),
            (s.pos_quarter, 0, 1),
            (s.neg_full, n, scale),
            (s.neg_half, n, 2),
            (s.neg_quarter, n, 1),
        ):
            while mask:
                low = mask & -mask
                yield base + low.bit_length() - 1, value
                mask ^= low

    def _bucket_add(self, s: _LiveSet) -> None:
        bucket = self.buckets.setdefault(s.card, {})
        for code, value in self._memberships(s):
            bucket[code] = bucket.get(code, 0) + value
        self.bucket_sets[s.card] = self.bucket_sets.get(s.card, 0) + 1

    def _bucket_remove(self, s: _LiveSet) -> None:
        bucket = self.buckets[s.card]
        for code, value in self._memberships(s):
            left = bucket[code] - value
            if left:
                bucket[code] = left
            else:
                del bucket[code]
        left = self.bucket_sets[s.card] - 1
        if left:
            self.bucket_sets[s.card] = left
        else:
            del self.bucket_sets[s.card]
            del self.buckets[s.card]

    def _discard(self, s: _LiveSet, code: int) -> None:
        if code < self.n:
            bit = ~(1 << code)
            s.pos_full &= bit
            s.pos_half &= bit
            s.pos_quarter &= bit
        else:
            bit = ~(1 << (code - self.n))
            s.neg_full &= bit
            s.neg_half &= bit
            s.neg_quarter &= bit

    def _render(self, code: int) -> str:
        return f"x{code + 1}" if code < self.n else f"~x{code - self.n + 1}"

    def select(self, banned: set[int]) -> int:
        """Literal code of maximal total relevance; exact, first-max ties.

        Scores differ from true relevances only by the constant positive
        factor 1/(p*q), which cannot move the argmax; the exact factor is
        applied to the traced value.
        """
        lower: dict[int, int] = {}
        slack: dict[int, int] = {}
        for card, codemap in self.buckets.items():
            for code, num in codemap.items():
                if code in banned:
                    continue
                lower[code] = lower.get(code, 0) + ((num << 64) // card)
                slack[code] = slack.get(code, 0) + 1
        if not lower:
            _abort(self.trace, "no-candidate")
        best_lower = max(lower.values())
        # every floor lost < 1 unit, so true score < lower + slack
        cluster = [c for c, lo in lower.items() if lo + slack[c] > best_lower]
        if len(cluster) == 1 and self.trace is None:
            return cluster[0]
        exact = {c: Fraction(0) for c in cluster}
        for card, codemap in self.buckets.items():
            for c in cluster:
                num = codemap.get(c)
                if num:
                    exact[c] += Fraction(num, card)
        best = max(exact.values())
        code = min(c for c in cluster if exact[c] == best)
        if self.trace is not None:
            self.trace.append(f"SELECT {self._render(code)} R={best / self.norm}")
        return code

    def apply(self, code: int) -> None:
        """Erasures for a just-selected literal, against a pre-pick snapshot.

        Groups where the literal occurs nowhere leave the term's scope;
        in the rest, sets holding the literal are satisfied and erased,
        and the complement literal is struck from the sets that remain.
        """
        comp = code + self.n if code < self.n else code - self.n
        erase_groups: list[int] = []
        erase_sets: list[tuple[int, int]] = []
        shrink: list[tuple[int, int]] = []
        for i, sets in self.groups.items():
            has_code: list[int] = []
            has_comp: list[int] = []
            for j, s in sets.items():
                if self._scaled(s, code):
                    has_code.append(j)
                elif self._scaled(s, comp):
                    has_comp.append(j)
            if not has_code:
                erase_groups.append(i)
            else:
                erase_sets += [(i, j) for j in has_code]
                shrink += [(i, j) for j in has_comp]

        for i in erase_groups:
            if self.trace is not None:
                self.trace.append(f"ERASE_GROUP {i}")
            group = self.groups.pop(i)
            for s in group.values():
                self._bucket_remove(s)
            self.total -= len(group)
        for i, j in erase_sets:
            if self.trace is not None:
                self.trace.append(f"ERASE_SET {i} {j}")
            s = self.groups[i].pop(j)
            self._bucket_remove(s)
            self.total -= 1
            if not self.groups[i]:
                del self.groups[i]
        for i, j in shrink:
            s = self.groups[i][j]
            self._bucket_remove(s)
            self._discard(s, comp)
            s.card = self._card(s)
            if s.card == 0:
                _abort(self.trace, "empty-constraint-set", pairs=((i, j),))
            self._bucket_add(s)


def _term_from_codes(n: int, codes: list[int]) -> Term:
    return Term(tuple(
        Literal(False, c + 1) if c < n else Literal(True, c - n + 1)
        for c in codes
    ))


def _lowest_unknown_on(inst: Instance, term: Term) -> int | None:
    """0-based coordinate of the lowest Unknown cell among the term's variables."""
    mask = inst.unknowns & (term.pos_mask | term.neg_mask)
    if not mask:
        return None
    return (mask & -mask).bit_length() - 1


def learn(dataset: Dataset, config: LearnerConfig | None = None) -> LearnResult:
    """Learn a DNF formula consistent with the dataset.

    Raises ConsistencyAbort when the data is (or becomes, after negative
    updates) self-contradictory, and IterationLimitError past the
    configured outer-iteration cap.
    """
    cfg = config or LearnerConfig()
    if cfg.dedupe not in ("exact", "certain"):
        raise ValueError(f"unknown dedupe mode {cfg.dedupe!r}")
    trace: list[str] | None = [] if cfg.trace else None

    n = dataset.n
    full = (1 << n) - 1
    # default ids come from input position and then travel with the row
    # through reductions, dedupes, and updates
    positives = [
        inst if inst.id else replace(inst, id=f"u{k}")
        for k, inst in enumerate(dataset.positives, start=1)
    ]
    negatives = [
        inst if inst.id else replace(inst, id=f"v{k}")
        for k, inst in enumerate(dataset.negatives, start=1)
    ]

    limit = cfg.max_iterations if cfg.max_iterations is not None else len(positives) + 1
    terms: list[Term] = []
    erased: list[Instance] = []
    iterations = 0

    while positives:
        iterations += 1
        if iterations > limit:
            if trace is not None:
                trace.append("ABORT iteration-limit")
            raise IterationLimitError(f"exceeded {limit} outer iterations")

        work = Dataset(n, tuple(positives), tuple(negatives))
        if cfg.reduce:
            work = reduce_uncertainty(work)
        work = delete_repetitions(work, cfg.dedupe)
        report = check_self_consistency(work)
        if not report.ok:
            _abort(trace, "inconsistent-data", pairs=report.violations)
        positives = list(work.positives)
        negatives = list(work.negatives)

        engine = _TermEngine(positives, negatives, cfg.threads, trace)
        codes: list[int] = []
        banned: set[int] = set()
        while engine.total:
            code = engine.select(banned)
            codes.append(code)
            banned.add(code + n if code < n else code - n)
            engine.apply(code)
        term = _term_from_codes(n, codes)
        terms.append(term)
        if trace is not None:
            trace.append(f"TERM {term.render()}")

        kept: list[Instance] = []
        for inst in positives:
            if term.possibly_satisfied_by(inst):
                erased.append(inst)
                if trace is not None:
                    trace.append(f"POS_ERASED {inst.id}")
            else:
                kept.append(inst)
        assert len(kept) < len(positives), "completed term erased no positive instance"
        positives = kept

        if cfg.update_negatives:
            for j, inst in enumerate(negatives):
                if not term.possibly_satisfied_by(inst):
                    continue
                k = _lowest_unknown_on(inst, term)
                if k is None:
                    # every cell on the term's variables is certain and
                    # agrees: the term is certainly true on a negative
                    _abort(
                        trace, "unfalsifiable-negative",
                        instance_id=inst.id, term=term.render(),
                    )
                value = Trit.TRUE if (term.neg_mask >> k) & 1 else Trit.FALSE
                v = inst.with_cell(k, value)
                negatives[j] = v
                if trace is not None:
                    trace.append(f"NEG_UPDATE {inst.id} {k + 1} {int(value is Trit.TRUE)}")
                # only this updated row can newly collide with a positive:
                # erasure removes rows and never edits them
                if v.known_bits == full:
                    violations = tuple(
                        (i, j + 1)
                        for i, u in enumerate(positives, start=1)
                        if u.known_bits == full and u.value_bits == v.value_bits
                    )
                    if violations:
                        _abort(trace, "inconsistent-data", pairs=violations)

    formula = DnfFormula(n, tuple(terms))
    final = Dataset(n, tuple(erased), tuple(negatives))
    return LearnResult(formula, final, tuple(trace) if trace is not None else (), iterations)
