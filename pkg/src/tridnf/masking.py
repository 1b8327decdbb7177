"""Deterministic blanking of dataset cells.

A mask is planned first and applied second, so the same plan can be stored,
inspected, and replayed.  Cells are addressed by (row, column): row is the
0-based position in positives-then-negatives order, column the 0-based
variable coordinate.  Row positions are used instead of instance ids because
ids may repeat (the bundled animal data contains two frogs).

Randomness comes from SplitMix64, chosen because it is tiny, fast, and
specified exactly (see README), so plans reproduce across platforms and
implementations.  Selection without replacement is a partial Fisher-Yates
shuffle over the candidate cells in row-major order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CellOutOfRangeError, FractionOutOfRangeError
from .formula import DnfFormula
from .trits import Dataset, Instance, Trit

MASK64 = (1 << 64) - 1

RANDOM = "random"
TRUSTWORTHY = "trustworthy"


class SplitMix64:
    """SplitMix64 pseudo-random generator (64-bit state, 64-bit output)."""

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform-ish value in [0, bound) by simple reduction."""
        return self.next_u64() % bound


@dataclass(frozen=True)
class MaskPlan:
    """A resolved set of cells to blank, plus how it was derived.

    ``requested`` is the rounded cell budget; ``len(cells)`` may fall short
    of it in trustworthy mode when few irrelevant cells exist, in which case
    ``shortfall`` records the gap.
    """

    mode: str
    fraction: Fraction
    seed: int
    cells: tuple[tuple[int, int], ...]
    requested: int
    shortfall: int = 0


def _coerce_fraction(fraction) -> Fraction:
    value = Fraction(fraction)
    if not 0 <= value <= Fraction(1, 2):
        raise FractionOutOfRangeError(
            f"mask fraction must be in [0, 1/2], got {fraction!r}"
        )
    return value


def make_mask(
    dataset: Dataset,
    mode: str,
    fraction,
    seed: int,
    truth: DnfFormula | None = None,
) -> MaskPlan:
    """Plan a blanking of round(fraction * cell count) cells.

    Random mode draws from every cell; trustworthy mode draws only from
    columns whose variable does not occur in ``truth``, capping at the
    available candidates.  Same arguments, same plan.
    """
    if mode not in (RANDOM, TRUSTWORTHY):
        raise ValueError(f"mode must be '{RANDOM}' or '{TRUSTWORTHY}', got {mode!r}")
    value = _coerce_fraction(fraction)
    rows = dataset.p + dataset.q
    total = rows * dataset.n
    requested = round(value * total)

    if mode == TRUSTWORTHY:
        if truth is None:
            raise ValueError("trustworthy masking requires a reference formula")
        relevant = set(truth.vars_used)
        columns = [col for col in range(dataset.n) if col + 1 not in relevant]
    else:
        columns = list(range(dataset.n))
    candidates = [(row, col) for row in range(rows) for col in columns]

    count = min(requested, len(candidates))
    rng = SplitMix64(seed)
    for i in range(count):
        j = i + rng.below(len(candidates) - i)
        candidates[i], candidates[j] = candidates[j], candidates[i]
    chosen = tuple(sorted(candidates[:count]))
    return MaskPlan(
        mode=mode,
        fraction=value,
        seed=seed,
        cells=chosen,
        requested=requested,
        shortfall=requested - count,
    )


def apply_mask(dataset: Dataset, plan: MaskPlan) -> Dataset:
    """Blank the plan's cells.  Idempotent; everything else is untouched."""
    rows: list[Instance] = list(dataset.instances())
    for row, col in plan.cells:
        if not 0 <= row < len(rows):
            raise CellOutOfRangeError(f"row {row} outside 0..{len(rows) - 1}")
        if not 0 <= col < dataset.n:
            raise CellOutOfRangeError(f"column {col} outside 0..{dataset.n - 1}")
        rows[row] = rows[row].with_cell(col, Trit.UNKNOWN)
    positives = tuple(rows[: dataset.p])
    negatives = tuple(rows[dataset.p :])
    return Dataset(n=dataset.n, positives=positives, negatives=negatives)
