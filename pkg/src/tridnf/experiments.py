"""End-to-end experiment runner: encode, mask, learn, evaluate, tabulate.

Each run is one (positive type, mode, fraction, seed) cell: the full data is
encoded one-vs-rest, a mask plan is drawn and applied, a formula is learned
from the masked data, and its errors are counted against the unmasked data.
Aborted runs stay in the table marked ABORT and are excluded from the mean
error statistics.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .datasets import DEFAULT_LEGS_ORDER, ZooRecord, encode_zoo
from .errors import ConsistencyAbort
from .formula import DnfFormula
from .learner import LearnerConfig, learn
from .masking import TRUSTWORTHY, apply_mask, make_mask
from .trits import Dataset


@dataclass(frozen=True)
class EvalReport:
    """Misclassification count of a formula on a complete dataset."""

    errors: int
    size: int

    @property
    def rate(self) -> Fraction:
        return Fraction(self.errors, self.size)


def evaluate(formula: DnfFormula, complete: Dataset) -> EvalReport:
    """Count instances whose label the formula gets wrong.

    ``complete`` must have no Unknown cells, so evaluation is plain
    two-valued.
    """
    if complete.unknown_count:
        raise ValueError("evaluation requires a complete dataset")
    wrong = sum(
        1 for inst in complete.positives if not formula.evaluate(inst.value_bits)
    )
    wrong += sum(1 for inst in complete.negatives if formula.evaluate(inst.value_bits))
    return EvalReport(errors=wrong, size=complete.p + complete.q)


@dataclass(frozen=True)
class RunResult:
    """One experiment cell.  ``errors`` and ``formula`` are None when the
    learner aborted; ``abort_reason`` says why."""

    positive_type: int
    mode: str
    fraction: Fraction
    seed: int
    formula: DnfFormula | None
    errors: int | None
    size: int
    abort_reason: str = ""
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.abort_reason == ""

    @property
    def rate(self) -> Fraction | None:
        if self.errors is None:
            return None
        return Fraction(self.errors, self.size)


@dataclass(frozen=True)
class SummaryRow:
    """Aggregate over all types and seeds for one (mode, fraction)."""

    mode: str
    fraction: Fraction
    runs: int
    aborted: int
    aen: Fraction | None
    rate: Fraction | None


@dataclass(frozen=True)
class ExperimentReport:
    runs: tuple[RunResult, ...]
    references: tuple[tuple[int, DnfFormula], ...] = ()

    def reference_for(self, positive_type: int) -> DnfFormula | None:
        for kind, formula in self.references:
            if kind == positive_type:
                return formula
        return None

    def summary(self) -> list[SummaryRow]:
        groups: dict[tuple[str, Fraction], list[RunResult]] = {}
        for run in self.runs:
            groups.setdefault((run.mode, run.fraction), []).append(run)
        rows: list[SummaryRow] = []
        for mode, fraction in sorted(groups):
            members = groups[(mode, fraction)]
            done = [run for run in members if run.ok]
            aen = rate = None
            if done:
                aen = sum((Fraction(run.errors) for run in done), Fraction(0))
                aen /= len(done)
                rate = sum((run.rate for run in done), Fraction(0)) / len(done)
            rows.append(
                SummaryRow(
                    mode=mode,
                    fraction=fraction,
                    runs=len(members),
                    aborted=len(members) - len(done),
                    aen=aen,
                    rate=rate,
                )
            )
        return rows

    def render_summary(self) -> str:
        out = [
            "Summary per mode and fraction over all types and seeds",
            "(AEN = mean error count, R = mean error rate; aborted runs excluded):",
            f"  {'mode':<12} {'missing':>8} {'runs':>5} {'aborts':>7} {'AEN':>7} {'R':>7}",
        ]
        for row in self.summary():
            aen = f"{float(row.aen):.2f}" if row.aen is not None else "-"
            rate = f"{float(row.rate):.3f}" if row.rate is not None else "-"
            out.append(
                f"  {row.mode:<12} {_percent(row.fraction):>8} {row.runs:>5}"
                f" {row.aborted:>7} {aen:>7} {rate:>7}"
            )
        return "\n".join(out)

    def render_text(self) -> str:
        out: list[str] = []
        aborted = sum(1 for run in self.runs if not run.ok)
        total = sum(run.seconds for run in self.runs)
        out.append("Masked-data learning report")
        out.append(f"runs {len(self.runs)}, aborted {aborted}, learning time {total:.2f}s")
        out.append("")
        out.append(self.render_summary())
        for kind in sorted({run.positive_type for run in self.runs}):
            out.append("")
            reference = self.reference_for(kind)
            title = f"Type {kind}"
            if reference is not None:
                title += f" (reference formula: {reference.render()})"
            out.append(title)
            out.append(f"  {'mode':<12} {'missing':>8} {'seed':>6} {'E':>5}  formula")
            for run in self.runs:
                if run.positive_type != kind:
                    continue
                if run.ok:
                    errors = str(run.errors)
                    detail = run.formula.render()
                else:
                    errors = "ABORT"
                    detail = run.abort_reason
                out.append(
                    f"  {run.mode:<12} {_percent(run.fraction):>8} {run.seed:>6}"
                    f" {errors:>5}  {detail}"
                )
        out.append("")
        return "\n".join(out)

    def csv_rows(self) -> list[list[str]]:
        rows = [
            ["type", "mode", "fraction", "seed", "errors", "rate", "abort", "seconds", "formula"]
        ]
        for run in self.runs:
            rows.append(
                [
                    str(run.positive_type),
                    run.mode,
                    str(run.fraction),
                    str(run.seed),
                    "" if run.errors is None else str(run.errors),
                    "" if run.rate is None else str(run.rate),
                    run.abort_reason,
                    f"{run.seconds:.4f}",
                    run.formula.render() if run.formula is not None else "",
                ]
            )
        return rows


def _percent(fraction: Fraction) -> str:
    return f"{float(fraction) * 100:g}%"


def run_experiment(
    records: list[ZooRecord],
    types: Sequence[int],
    fractions: Sequence,
    modes: Sequence[str],
    seeds: Sequence[int],
    legs_order: tuple[int, ...] = DEFAULT_LEGS_ORDER,
    threads: int = 1,
) -> ExperimentReport:
    """Run the full (type, mode, fraction, seed) grid.

    Trustworthy masking needs a reference formula per type; it is learned
    once from the unmasked encoding and reported alongside the table.
    """
    kinds = sorted(set(types))
    fracs = sorted({Fraction(f) for f in fractions})
    mode_list = list(dict.fromkeys(modes))
    config = LearnerConfig(threads=threads)
    runs: list[RunResult] = []
    references: list[tuple[int, DnfFormula]] = []
    for kind in kinds:
        complete = encode_zoo(records, kind, legs_order)
        truth: DnfFormula | None = None
        if TRUSTWORTHY in mode_list:
            truth = learn(complete, config).formula
            references.append((kind, truth))
        for mode in mode_list:
            for fraction in fracs:
                for seed in seeds:
                    plan = make_mask(
                        complete,
                        mode,
                        fraction,
                        seed,
                        truth if mode == TRUSTWORTHY else None,
                    )
                    masked = apply_mask(complete, plan)
                    start = time.perf_counter()
                    try:
                        result = learn(masked, config)
                    except ConsistencyAbort as abort:
                        runs.append(
                            RunResult(
                                positive_type=kind,
                                mode=mode,
                                fraction=fraction,
                                seed=seed,
                                formula=None,
                                errors=None,
                                size=complete.p + complete.q,
                                abort_reason=abort.reason,
                                seconds=time.perf_counter() - start,
                            )
                        )
                        continue
                    report = evaluate(result.formula, complete)
                    runs.append(
                        RunResult(
                            positive_type=kind,
                            mode=mode,
                            fraction=fraction,
                            seed=seed,
                            formula=result.formula,
                            errors=report.errors,
                            size=report.size,
                            seconds=time.perf_counter() - start,
                        )
                    )
    return ExperimentReport(runs=tuple(runs), references=tuple(references))
