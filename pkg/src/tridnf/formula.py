"""DNF formulas: literals, terms, parsing, rendering, and evaluation.

Text grammar: ``~`` negates, a space conjoins, ``|`` separates terms, and
variables are ``x1`` .. ``xn``.  The constants ``TRUE`` and ``FALSE`` stand
alone as whole formulas (an always-true term would otherwise have no
literals to print).  Literal order inside a term and term order inside a
formula are significant and survive a parse/render round trip.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable

from .errors import ParseError
from .trits import Instance


class TernaryTruth(Enum):
    """Outcome of evaluating under a partially-unknown assignment."""

    FALSE = "0"
    UNKNOWN = "?"
    TRUE = "1"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, order=True)
class Literal:
    """A variable or its negation; ``var`` is 1-based."""

    neg: bool
    var: int

    def __post_init__(self):
        if self.var < 1:
            raise ValueError(f"variable index must be positive, got {self.var}")

    def render(self) -> str:
        return f"~x{self.var}" if self.neg else f"x{self.var}"

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Term:
    """A conjunction of literals, kept in insertion order."""

    literals: tuple[Literal, ...]

    @cached_property
    def pos_mask(self) -> int:
        mask = 0
        for lit in self.literals:
            if not lit.neg:
                mask |= 1 << (lit.var - 1)
        return mask

    @cached_property
    def neg_mask(self) -> int:
        mask = 0
        for lit in self.literals:
            if lit.neg:
                mask |= 1 << (lit.var - 1)
        return mask

    def evaluate(self, bits: int) -> bool:
        """Truth under a fully-certain assignment packed as an int."""
        return not (self.pos_mask & ~bits) and not (self.neg_mask & bits)

    def certainly_true(self, inst: Instance) -> bool:
        """Every required cell is certain and agrees."""
        return not (self.pos_mask & ~inst.ones) and not (self.neg_mask & ~inst.zeros)

    def certainly_false(self, inst: Instance) -> bool:
        """Some certain cell contradicts a literal."""
        return bool((self.pos_mask & inst.zeros) | (self.neg_mask & inst.ones))

    def possibly_satisfied_by(self, inst: Instance) -> bool:
        return not self.certainly_false(inst)

    def render(self) -> str:
        if not self.literals:
            return "TRUE"
        return " ".join(lit.render() for lit in self.literals)

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class DnfFormula:
    """A disjunction of terms over variables ``x1`` .. ``xn``."""

    n: int
    terms: tuple[Term, ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("variable count cannot be negative")
        for term in self.terms:
            for lit in term.literals:
                if lit.var > self.n:
                    raise ValueError(f"literal {lit} exceeds variable count {self.n}")

    def evaluate(self, bits: int) -> bool:
        return any(term.evaluate(bits) for term in self.terms)

    def eval_ternary(self, inst: Instance) -> TernaryTruth:
        """Strong three-valued evaluation.

        TRUE if some term holds on the certain cells alone, FALSE if every
        term is contradicted by a certain cell, UNKNOWN otherwise.
        """
        if any(term.certainly_true(inst) for term in self.terms):
            return TernaryTruth.TRUE
        if all(term.certainly_false(inst) for term in self.terms):
            return TernaryTruth.FALSE
        return TernaryTruth.UNKNOWN

    @property
    def vars_used(self) -> tuple[int, ...]:
        return tuple(sorted({lit.var for term in self.terms for lit in term.literals}))

    @property
    def literal_count(self) -> int:
        return sum(len(term.literals) for term in self.terms)

    def is_tautology(self) -> bool:
        """Syntactic check only: an empty term, or ``xk`` alongside ``~xk``.

        A deeper semantic check belongs to the exhaustive tooling; the
        learner only ever creates these two shapes of vacuous formula.
        """
        singles = set()
        for term in self.terms:
            if not term.literals:
                return True
            if len(term.literals) == 1:
                singles.add(term.literals[0])
        return any(Literal(not lit.neg, lit.var) in singles for lit in singles)

    def render(self) -> str:
        if not self.terms:
            return "FALSE"
        return " | ".join(term.render() for term in self.terms)

    def __str__(self) -> str:
        return self.render()

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "terms": [
                [{"var": lit.var, "neg": lit.neg} for lit in term.literals]
                for term in self.terms
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, data) -> "DnfFormula":
        if not isinstance(data, dict):
            raise ParseError("formula JSON must be an object")
        n = data.get("n")
        terms = data.get("terms")
        if not isinstance(n, int) or isinstance(n, bool):
            raise ParseError("formula JSON needs an integer 'n'")
        if not isinstance(terms, list):
            raise ParseError("formula JSON needs a 'terms' list")
        built = []
        for term in terms:
            if not isinstance(term, list):
                raise ParseError("each term must be a list of literals")
            lits = []
            for lit in term:
                if not isinstance(lit, dict):
                    raise ParseError("each literal must be an object")
                var = lit.get("var")
                neg = lit.get("neg")
                if not isinstance(var, int) or isinstance(var, bool) or var < 1:
                    raise ParseError("literal 'var' must be a positive integer")
                if not isinstance(neg, bool):
                    raise ParseError("literal 'neg' must be a boolean")
                lits.append(Literal(neg, var))
            built.append(Term(tuple(lits)))
        try:
            return cls(n, tuple(built))
        except ValueError as exc:
            raise ParseError(str(exc)) from exc

    @classmethod
    def from_json(cls, text: str) -> "DnfFormula":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"not valid JSON: {exc.msg}", where=exc.pos) from exc
        return cls.from_json_dict(data)


_TOKEN = re.compile(r"[^\s|]+|\|")
_LITERAL = re.compile(r"(~?)x([0-9]+)\Z")


def parse_formula(text: str, n: int | None = None) -> DnfFormula:
    """Parse the text grammar; infer ``n`` from the largest variable if absent."""
    tokens = [(m.group(), m.start()) for m in _TOKEN.finditer(text)]
    if not tokens:
        raise ParseError("empty formula", where=0)

    if any(tok in ("TRUE", "FALSE") for tok, _ in tokens):
        if len(tokens) != 1:
            tok, pos = next(t for t in tokens if t[0] in ("TRUE", "FALSE"))
            raise ParseError(f"{tok} must stand alone", where=pos)
        tok = tokens[0][0]
        width = n if n is not None else 0
        terms = (Term(()),) if tok == "TRUE" else ()
        return DnfFormula(width, terms)

    groups: list[list[tuple[str, int]]] = [[]]
    for tok, pos in tokens:
        if tok == "|":
            if not groups[-1]:
                raise ParseError("empty term before '|'", where=pos)
            groups.append([])
        else:
            groups[-1].append((tok, pos))
    if not groups[-1]:
        raise ParseError("empty term at end of formula", where=len(text))

    terms = []
    max_var = 0
    for group in groups:
        lits = []
        for tok, pos in group:
            m = _LITERAL.match(tok)
            if not m or tok in ("x0", "~x0") or m.group(2).startswith("0"):
                raise ParseError(f"not a literal: {tok!r}", where=pos)
            var = int(m.group(2))
            if n is not None and var > n:
                raise ParseError(f"variable x{var} exceeds declared width {n}", where=pos)
            max_var = max(max_var, var)
            lits.append(Literal(bool(m.group(1)), var))
        terms.append(Term(tuple(lits)))

    return DnfFormula(n if n is not None else max_var, tuple(terms))


def formula_from_codes(n: int, term_codes: Iterable[Iterable[int]]) -> DnfFormula:
    """Build from internal literal codes: ``k-1`` for ``xk``, ``n+k-1`` for ``~xk``."""
    terms = []
    for codes in term_codes:
        lits = []
        for code in codes:
            if code < n:
                lits.append(Literal(False, code + 1))
            else:
                lits.append(Literal(True, code - n + 1))
        terms.append(Term(tuple(lits)))
    return DnfFormula(n, tuple(terms))
