"""Error counting and the sweep runner's aggregation contract."""

from dataclasses import replace
from fractions import Fraction

import pytest

from tridnf import Dataset, evaluate, parse_formula, run_experiment
from tridnf.masking import RANDOM, TRUSTWORTHY


def test_evaluate_counts_both_error_kinds():
    f = parse_formula("x1", n=2)
    d = Dataset.from_texts(["10", "01"], ["11", "00"])
    report = evaluate(f, d)
    # '01' fails the formula, '11' passes it
    assert report.errors == 2
    assert report.size == 4
    assert report.rate == Fraction(1, 2)


def test_evaluate_published_spot_checks(zoo_datasets):
    d1 = zoo_datasets[1]
    report = evaluate(parse_formula("~x3 ~x11 | x16 x19", n=20), d1)
    assert report.errors == 1
    assert evaluate(parse_formula("FALSE", n=20), d1).errors == d1.p
    assert evaluate(parse_formula("TRUE", n=20), d1).errors == d1.q


def test_evaluate_requires_certain_data():
    f = parse_formula("x1", n=2)
    with pytest.raises(ValueError):
        evaluate(f, Dataset.from_texts(["1?"], ["00"]))


def test_run_experiment_grid_and_summary(zoo_records):
    report = run_experiment(
        zoo_records,
        types=(1, 4),
        fractions=(Fraction(1, 10), Fraction(3, 10)),
        modes=(RANDOM, TRUSTWORTHY),
        seeds=(0, 1),
    )
    assert len(report.runs) == 2 * 2 * 2 * 2
    assert all(run.ok for run in report.runs)

    # summary means must equal recomputation from the raw runs
    for row in report.summary():
        mine = [
            run for run in report.runs
            if run.ok and run.mode == row.mode and run.fraction == row.fraction
        ]
        assert row.runs == len(mine) + row.aborted == len(mine)
        aen = sum(Fraction(r.errors) for r in mine) / len(mine)
        rate = sum(r.rate for r in mine) / len(mine)
        assert row.aen == aen
        assert row.rate == rate

    # reference formulas are cached per type for the trustworthy runs
    assert report.reference_for(1).render() == "x4"
    assert report.reference_for(4).render() == "x12 x3"


def test_run_experiment_rows_are_deterministic(zoo_records):
    kw = dict(
        types=(3,),
        fractions=(Fraction(1, 5),),
        modes=(RANDOM,),
        seeds=(5,),
    )
    def timeless(report):
        return [replace(run, seconds=0.0) for run in report.runs]

    a = run_experiment(zoo_records, **kw)
    b = run_experiment(zoo_records, **kw)
    assert timeless(a) == timeless(b)
    assert timeless(run_experiment(zoo_records, threads=4, **kw)) == timeless(a)


def test_report_renderings(zoo_records):
    report = run_experiment(
        zoo_records,
        types=(2,),
        fractions=(Fraction(1, 10),),
        modes=(RANDOM,),
        seeds=(0,),
    )
    text = report.render_text()
    assert "mode" in text and "random" in text
    rows = report.csv_rows()
    assert rows[0] == [
        "type", "mode", "fraction", "seed", "errors", "rate",
        "abort", "seconds", "formula",
    ]
    assert len(rows) == 2
    assert rows[1][0] == "2"

    summary = report.render_summary()
    assert "10%" in summary


def test_run_experiment_normalizes_selections(zoo_records):
    report = run_experiment(
        zoo_records,
        types=(4, 1, 4),
        fractions=(Fraction(1, 5), Fraction(1, 10), Fraction(1, 5)),
        modes=(RANDOM, RANDOM),
        seeds=(0,),
    )
    kinds = sorted({run.positive_type for run in report.runs})
    fracs = sorted({run.fraction for run in report.runs})
    assert kinds == [1, 4]
    assert fracs == [Fraction(1, 10), Fraction(1, 5)]
    assert len(report.runs) == 4
