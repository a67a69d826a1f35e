"""Reduction theories, program identity theories and their epistemic liftings."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .lam import church, encode_list, encode_pair, reducts
from .syntax import (
    Agent,
    Eq,
    Formula,
    K,
    Pred,
    SymbolTable,
    Term,
    Trust,
    Var,
    format_formula,
    format_term,
    fresh_var,
    occurs_in,
    parse_formula,
    parse_term,
    term_occurrences,
    vars_of_formula,
    vars_of_term,
)

STEP = "step"
STAR = "star"


class MassError(ValueError):
    """Outgoing probabilities of a source term do not sum to 1."""


@dataclass(frozen=True)
class Theory:
    label: str
    formulas: tuple
    exhausted: bool = False

    def __contains__(self, a: Formula) -> bool:
        return a in self._set

    def __len__(self) -> int:
        return len(self.formulas)

    def __iter__(self):
        return iter(self.formulas)

    @property
    def _set(self) -> frozenset:
        s = self.__dict__.get("_cached_set")
        if s is None:
            s = frozenset(self.formulas)
            object.__setattr__(self, "_cached_set", s)
        return s


def make_theory(label: str, formulas: Iterable[Formula], exhausted: bool = False) -> Theory:
    seen = {}
    for a in formulas:
        seen.setdefault(a, None)
    return Theory(label, tuple(seen), exhausted)


# ---------------------------------------------------------------------------
# Deterministic reduction


def sigma_step(seeds: Iterable[Term], fuel: int) -> Theory:
    """step(u, v) for every u within fuel reductions of a seed and every one-step reduct v."""
    frontier = list(dict.fromkeys(seeds))
    visited = set(frontier)
    facts = []
    for _ in range(fuel):
        nxt = []
        for u in frontier:
            for v in reducts(u):
                facts.append(Pred(STEP, (u, v)))
                if v not in visited:
                    visited.add(v)
                    nxt.append(v)
        frontier = nxt
        if not frontier:
            break
    exhausted = any(reducts(u) for u in frontier)
    return make_theory("step", facts, exhausted)


def _pairs(theory: Iterable[Formula], symbol: str):
    for a in theory:
        if isinstance(a, Pred) and a.symbol == symbol and a.arity == 2:
            yield a.args


def sigma_star(step_facts: Iterable[Formula], universe: Iterable[Term] = ()) -> Theory:
    """Reflexive-transitive closure of the step facts (star facts in the input are kept)."""
    edges: dict = {}
    nodes = list(dict.fromkeys(universe))
    for sym in (STEP, STAR):
        for u, v in _pairs(step_facts, sym):
            edges.setdefault(u, set()).add(v)
            nodes.extend((u, v))
    nodes = list(dict.fromkeys(nodes))
    pos = {t: i for i, t in enumerate(nodes)}
    facts = []
    for u in nodes:
        seen = {u}
        order = [u]
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for y in sorted(edges.get(x, ()), key=pos.__getitem__):
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    queue.append(y)
        facts.extend(Pred(STAR, (u, v)) for v in order)
    return make_theory("star", facts)


def sigma_lambda_eq(step_facts: Iterable[Formula], use_star: bool = False) -> Theory:
    """t = s whenever both t |-> s and s |-> t are present (star facts with use_star)."""
    sym = STAR if use_star else STEP
    pairs = list(_pairs(step_facts, sym))
    have = set(pairs)
    return make_theory("lambda-eq", (Eq(u, v) for u, v in pairs if (v, u) in have))


# ---------------------------------------------------------------------------
# Probabilistic identity


@dataclass(frozen=True)
class ProbFact:
    source: Term
    probability: Fraction
    target: Term

    def __post_init__(self):
        p = Fraction(self.probability)
        if not 0 < p <= 1:
            raise ValueError(f"probability {p} outside (0,1]")
        object.__setattr__(self, "probability", p)


ProbDist = tuple  # tuple of (Fraction, Term)


def mass(d: ProbDist) -> Fraction:
    return sum((p for p, _ in d), Fraction(0))


def format_dist(d: ProbDist, symtab: SymbolTable | None = None) -> str:
    return "(" + ",".join(f"({p},{format_term(t, symtab)})" for p, t in d) + ")"


@dataclass
class ProbTheory:
    """Result of the probabilistic identity closure.

    identities are (lhs, rhs, rule) triples over structured distributions;
    theory holds the same identities as formulas over lambda-encoded lists.
    """

    identities: list
    theory: Theory
    encoder: "DistEncoder"
    exhausted: bool = False

    def chain(self, start: ProbDist, goal: ProbDist) -> list | None:
        """Shortest identity chain start = d1 = ... = goal, following identities left to right."""
        nxt: dict = {}
        for lhs, rhs, _ in self.identities:
            nxt.setdefault(lhs, []).append(rhs)
        prev = {start: None}
        queue = deque([start])
        while queue:
            d = queue.popleft()
            if d == goal:
                out = [d]
                while prev[out[-1]] is not None:
                    out.append(prev[out[-1]])
                return out[::-1]
            for e in nxt.get(d, ()):
                if e not in prev:
                    prev[e] = d
                    queue.append(e)
        return None

    def contains(self, lhs: ProbDist, rhs: ProbDist) -> bool:
        return any(a == lhs and b == rhs for a, b, _ in self.identities)


class DistEncoder:
    """Encodes rationals, pairs and distribution lists as closed-binder lambda terms.

    Binder variables are chosen once, fresh for the given vocabulary, so the
    encodings never capture and print legibly.
    """

    def __init__(self, vocabulary: Iterable[Term] = ()):
        avoid = set()
        for t in vocabulary:
            avoid |= vars_of_term(t)
        f = fresh_var(avoid)
        x = fresh_var(avoid | {f})
        self.f, self.x = f, x
        self.avoid = frozenset(avoid | {f, x})

    def rational(self, p: Fraction) -> Term:
        p = Fraction(p)
        return encode_pair(church(p.numerator, self.f, self.x), church(p.denominator, self.f, self.x), self.avoid)

    def entry(self, p: Fraction, t: Term) -> Term:
        return encode_pair(self.rational(p), t, self.avoid)

    def dist(self, d: ProbDist) -> Term:
        return encode_list([self.entry(p, t) for p, t in d], self.avoid)

    def identity(self, lhs: ProbDist, rhs: ProbDist) -> Eq:
        return Eq(self.dist(lhs), self.dist(rhs))


def _group_facts(facts: Sequence[ProbFact]) -> dict:
    table: dict = {}
    for f in facts:
        table.setdefault(f.source, []).append((f.probability, f.target))
    for src, outs in table.items():
        total = sum((p for p, _ in outs), Fraction(0))
        if total != 1:
            raise MassError(f"outgoing probabilities of {src} sum to {total}, not 1")
    return table


def sigma_prob_eq(facts: Sequence[ProbFact], max_depth: int, encoder: DistEncoder | None = None) -> ProbTheory:
    """Closure of the four probabilistic identity rules, breadth first up to max_depth rounds.

    Round 1 emits the root translations; each later round applies expansion,
    adjacent swap and adjacent collapse to every right-hand side produced so far.
    """
    table = _group_facts(facts)
    if encoder is None:
        vocab = [f.source for f in facts] + [f.target for f in facts]
        encoder = DistEncoder(vocab)
    identities = []
    seen_ids = set()

    def emit(lhs, rhs, rule, out):
        key = (lhs, rhs)
        if key not in seen_ids:
            seen_ids.add(key)
            identities.append((lhs, rhs, rule))
            out.append(rhs)

    frontier: list = []
    if max_depth >= 1:
        for src, outs in table.items():
            emit(((Fraction(1), src),), tuple(outs), "translate", frontier)
    expanded = set()
    for _ in range(max_depth - 1):
        nxt: list = []
        for d in frontier:
            if d in expanded:
                continue
            expanded.add(d)
            for i, (p, t) in enumerate(d):
                if t in table:
                    new = d[:i] + tuple((p * q, s) for q, s in table[t]) + d[i + 1:]
                    emit(d, new, "expand", nxt)
            for i in range(len(d) - 1):
                emit(d, d[:i] + (d[i + 1], d[i]) + d[i + 2:], "swap", nxt)
                if d[i][1] == d[i + 1][1]:
                    emit(d, d[:i] + ((d[i][0] + d[i + 1][0], d[i][1]),) + d[i + 2:], "collapse", nxt)
        frontier = nxt
    exhausted = any(d not in expanded for d in frontier)
    theory = make_theory("prob-eq", (encoder.identity(l, r) for l, r, _ in identities), exhausted)
    return ProbTheory(identities, theory, encoder, exhausted)


def reduct_distribution(term: Term, facts: Sequence[ProbFact]) -> dict:
    """Distribution over terminal outcomes of term, by direct recursion (no rewriting)."""
    table = _group_facts(facts)

    def go(t, seen):
        if t not in table:
            return {t: Fraction(1)}
        if t in seen:
            raise ValueError(f"cyclic behaviour at {t}")
        out: dict = {}
        for p, s in table[t]:
            for o, q in go(s, seen | {t}).items():
                out[o] = out.get(o, Fraction(0)) + p * q
        return out

    return go(term, frozenset())


# ---------------------------------------------------------------------------
# Liftings


def leftmost_term(a: Formula) -> Term:
    for t in term_occurrences(a):
        return t
    raise ValueError("formula has no term occurrence")


def lift_K(theory: Iterable[Formula], a: Agent) -> Theory:
    return make_theory("K", (K(a, f) for f in theory))


def lift_T(theory: Iterable[Formula], a: Agent, chooser: Callable[[Formula], Term] | None = None) -> Theory:
    chooser = chooser or leftmost_term
    out = []
    for f in theory:
        t = chooser(f)
        if not occurs_in(t, f):
            raise ValueError("chosen trust subject does not occur in the formula")
        out.append(Trust(a, t, f))
    return make_theory("T", out)


# ---------------------------------------------------------------------------
# File formats

_BEHAVIOUR = re.compile(r"^(?P<src>.*?)\|>\s*(?P<num>\d+)(?:\s*/\s*(?P<den>\d+))?\s+(?P<dst>.+)$")


def parse_behaviour(text: str, symtab: SymbolTable) -> list[ProbFact]:
    """Lines ``t |>p u`` with p written n/d or n; ``;;`` starts a comment."""
    facts = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split(";;", 1)[0].strip()
        if not line:
            continue
        m = _BEHAVIOUR.match(line)
        if not m:
            raise ValueError(f"line {lineno}: expected 't |>p u'")
        den = int(m.group("den") or 1)
        if den == 0:
            raise ValueError(f"line {lineno}: zero denominator")
        try:
            src = parse_term(m.group("src").strip(), symtab)
            dst = parse_term(m.group("dst").strip(), symtab)
            facts.append(ProbFact(src, Fraction(int(m.group("num")), den), dst))
        except ValueError as e:
            raise ValueError(f"line {lineno}: {e}") from None
    return facts


def parse_theory(text: str, symtab: SymbolTable) -> list[Formula]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split(";;", 1)[0].strip()
        if line:
            try:
                out.append(parse_formula(line, symtab))
            except ValueError as e:
                raise ValueError(f"line {lineno}: {e}") from None
    return out


def format_theory(theory: Iterable[Formula], symtab: SymbolTable) -> str:
    return "".join(format_formula(a, symtab) + "\n" for a in theory)
