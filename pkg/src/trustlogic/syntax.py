"""Terms, formulas, surface syntax and the two formula substitutions."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping


# ---------------------------------------------------------------------------
# Abstract syntax


class _Hashed:
    """Mixin caching the structural hash; terms and formulas are hashed a lot."""

    __slots__ = ()

    def __hash__(self) -> int:
        h = self._h
        if h == 0:
            h = hash((type(self).__name__,) + self._key()) or 1
            object.__setattr__(self, "_h", h)
        return h


@dataclass(frozen=True, eq=True)
class Var(_Hashed):
    index: int
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def _key(self):
        return (self.index,)

    __hash__ = _Hashed.__hash__


@dataclass(frozen=True, eq=True)
class App(_Hashed):
    fn: "Term"
    arg: "Term"
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def _key(self):
        return (self.fn, self.arg)

    __hash__ = _Hashed.__hash__


@dataclass(frozen=True, eq=True)
class Lam(_Hashed):
    binder: Var
    body: "Term"
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def _key(self):
        return (self.binder, self.body)

    __hash__ = _Hashed.__hash__


@dataclass(frozen=True, eq=True)
class Bang(_Hashed):
    inner: "Term"
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def _key(self):
        return (self.inner,)

    __hash__ = _Hashed.__hash__


Term = Var | App | Lam | Bang


@dataclass(frozen=True)
class Agent:
    index: int


@dataclass(frozen=True, eq=True)
class Bot(_Hashed):
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def _key(self):
        return ()

    __hash__ = _Hashed.__hash__


@dataclass(frozen=True, eq=True)
class Eq(_Hashed):
    lhs: Term
    rhs: Term
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def _key(self):
        return (self.lhs, self.rhs)

    __hash__ = _Hashed.__hash__


@dataclass(frozen=True, eq=True)
class Pred(_Hashed):
    symbol: str
    args: tuple
    _h: int = field(default=0, init=False, repr=False, compare=False)

    @property
    def arity(self) -> int:
        return len(self.args)

    def _key(self):
        return (self.symbol, self.args)

    __hash__ = _Hashed.__hash__


@dataclass(frozen=True, eq=True)
class Imp(_Hashed):
    left: "Formula"
    right: "Formula"
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def _key(self):
        return (self.left, self.right)

    __hash__ = _Hashed.__hash__


@dataclass(frozen=True, eq=True)
class And(_Hashed):
    left: "Formula"
    right: "Formula"
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def _key(self):
        return (self.left, self.right)

    __hash__ = _Hashed.__hash__


@dataclass(frozen=True, eq=True)
class Forall(_Hashed):
    var: Var
    body: "Formula"
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def _key(self):
        return (self.var, self.body)

    __hash__ = _Hashed.__hash__


@dataclass(frozen=True, eq=True)
class K(_Hashed):
    agent: Agent
    body: "Formula"
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def _key(self):
        return (self.agent, self.body)

    __hash__ = _Hashed.__hash__


@dataclass(frozen=True, eq=True)
class Just(_Hashed):
    evidence: Term
    body: "Formula"
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def _key(self):
        return (self.evidence, self.body)

    __hash__ = _Hashed.__hash__


@dataclass(frozen=True, eq=True)
class Trust(_Hashed):
    agent: Agent
    subject: Term
    body: "Formula"
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def _key(self):
        return (self.agent, self.subject, self.body)

    __hash__ = _Hashed.__hash__


Formula = Bot | Eq | Pred | Imp | And | Forall | K | Just | Trust

BOT = Bot()


def Not(a: Formula) -> Imp:
    return Imp(a, BOT)


def Exists(x: Var, a: Formula) -> Imp:
    return Not(Forall(x, Not(a)))


def is_term(obj) -> bool:
    return isinstance(obj, (Var, App, Lam, Bang))


# ---------------------------------------------------------------------------
# Symbol table


class ArityError(ValueError):
    pass


class SymbolTable:
    """Interns variable and agent names to indices and records predicate arities.

    A name of the canonical shape ``x<n>`` (``a<n>`` for agents) takes index n
    when that index is still free, so printed output parses back to the same
    indices.
    """

    def __init__(self):
        self.predicates: dict[str, int] = {}
        self._var_ids: dict[str, int] = {}
        self._var_names: dict[int, str] = {}
        self._agent_ids: dict[str, int] = {}
        self._agent_names: dict[int, str] = {}

    # predicates
    def register_pred(self, name: str, arity: int) -> None:
        known = self.predicates.get(name)
        if known is None:
            self.predicates[name] = arity
        elif known != arity:
            raise ArityError(f"predicate {name} used with arity {arity}, declared {known}")

    # generic interning shared by variables and agents
    @staticmethod
    def _intern(name, ids, names, prefix):
        if name in ids:
            return ids[name]
        m = re.fullmatch(prefix + r"(\d+)", name)
        if m and int(m.group(1)) not in names:
            idx = int(m.group(1))
        else:
            idx = 0
            while idx in names or f"{prefix}{idx}" in ids:
                idx += 1
        ids[name] = idx
        names[idx] = name
        return idx

    @staticmethod
    def _name(idx, ids, names, prefix):
        if idx in names:
            return names[idx]
        name = f"{prefix}{idx}"
        k = 0
        while name in ids:
            k += 1
            name = f"{prefix}{idx}_{k}"
        ids[name] = idx
        names[idx] = name
        return name

    def var(self, name: str) -> Var:
        return Var(self._intern(name, self._var_ids, self._var_names, "x"))

    def snapshot(self):
        return dict(self._var_ids), dict(self._var_names)

    def restore(self, snap) -> None:
        self._var_ids, self._var_names = dict(snap[0]), dict(snap[1])

    def agent(self, name: str) -> Agent:
        return Agent(self._intern(name, self._agent_ids, self._agent_names, "a"))

    def var_name(self, v: Var) -> str:
        return self._name(v.index, self._var_ids, self._var_names, "x")

    def agent_name(self, a: Agent) -> str:
        return self._name(a.index, self._agent_ids, self._agent_names, "a")

    def vars(self, names: str) -> list[Var]:
        """Convenience: ``st.vars("s t u")``."""
        return [self.var(n) for n in names.split()]


# ---------------------------------------------------------------------------
# Variables, occurrences and freshness


def free_vars_term(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t,))
    if isinstance(t, App):
        return free_vars_term(t.fn) | free_vars_term(t.arg)
    if isinstance(t, Lam):
        return free_vars_term(t.body) - {t.binder}
    return free_vars_term(t.inner)


def vars_of_term(t: Term) -> set:
    """Every variable symbol appearing in t, binders included."""
    out = set()
    stack = [t]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            out.add(t)
        elif isinstance(t, App):
            stack.append(t.fn)
            stack.append(t.arg)
        elif isinstance(t, Lam):
            out.add(t.binder)
            stack.append(t.body)
        else:
            stack.append(t.inner)
    return out


def term_size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    if isinstance(t, App):
        return 1 + term_size(t.fn) + term_size(t.arg)
    if isinstance(t, Lam):
        return 1 + term_size(t.body)
    return 1 + term_size(t.inner)


def free_vars_formula(a: Formula) -> frozenset:
    """Variables occurring as a whole Pred argument or Eq side, outside a matching binder."""
    if isinstance(a, Bot):
        return frozenset()
    if isinstance(a, Eq):
        return frozenset(t for t in (a.lhs, a.rhs) if isinstance(t, Var))
    if isinstance(a, Pred):
        return frozenset(t for t in a.args if isinstance(t, Var))
    if isinstance(a, (Imp, And)):
        return free_vars_formula(a.left) | free_vars_formula(a.right)
    if isinstance(a, Forall):
        return free_vars_formula(a.body) - {a.var}
    return free_vars_formula(a.body)


def term_occurrences(a: Formula) -> Iterator[Term]:
    """Terms occurring in a (Pred arguments and Eq sides), with repetition."""
    if isinstance(a, Eq):
        yield a.lhs
        yield a.rhs
    elif isinstance(a, Pred):
        yield from a.args
    elif isinstance(a, (Imp, And)):
        yield from term_occurrences(a.left)
        yield from term_occurrences(a.right)
    elif isinstance(a, (Forall, K, Just, Trust)):
        yield from term_occurrences(a.body)


def occurs_in(t: Term, a: Formula) -> bool:
    return any(u == t for u in term_occurrences(a))


def all_terms(a: Formula) -> Iterator[Term]:
    """Every top-level term position: arguments, evidence terms and trust subjects."""
    if isinstance(a, Eq):
        yield a.lhs
        yield a.rhs
    elif isinstance(a, Pred):
        yield from a.args
    elif isinstance(a, (Imp, And)):
        yield from all_terms(a.left)
        yield from all_terms(a.right)
    elif isinstance(a, Forall):
        yield from all_terms(a.body)
    elif isinstance(a, K):
        yield from all_terms(a.body)
    elif isinstance(a, Just):
        yield a.evidence
        yield from all_terms(a.body)
    elif isinstance(a, Trust):
        yield a.subject
        yield from all_terms(a.body)


def vars_of_formula(a: Formula) -> set:
    """Every variable symbol anywhere in a, including binders and evidence terms."""
    out = set()
    for t in all_terms(a):
        out |= vars_of_term(t)
    stack = [a]
    while stack:
        b = stack.pop()
        if isinstance(b, Forall):
            out.add(b.var)
            stack.append(b.body)
        elif isinstance(b, (Imp, And)):
            stack.append(b.left)
            stack.append(b.right)
        elif isinstance(b, (K, Just, Trust)):
            stack.append(b.body)
    return out


def agents_of(a: Formula) -> set:
    out = set()
    stack = [a]
    while stack:
        b = stack.pop()
        if isinstance(b, (K, Trust)):
            out.add(b.agent)
        if isinstance(b, (Imp, And)):
            stack.extend((b.left, b.right))
        elif isinstance(b, (Forall, K, Just, Trust)):
            stack.append(b.body)
    return out


def predicates_of(a: Formula) -> dict:
    out = {}
    stack = [a]
    while stack:
        b = stack.pop()
        if isinstance(b, Pred):
            out[b.symbol] = b.arity
        elif isinstance(b, (Imp, And)):
            stack.extend((b.left, b.right))
        elif isinstance(b, (Forall, K, Just, Trust)):
            stack.append(b.body)
    return out


def fresh_var(avoid: Iterable[Var]) -> Var:
    taken = {v.index for v in avoid}
    i = 0
    while i in taken:
        i += 1
    return Var(i)


# ---------------------------------------------------------------------------
# Formula substitutions


def _replace(t: Term, u: Term, v: Var) -> Term:
    return u if t == v else t


def subst_quant(a: Formula, u: Term, v: Var) -> Formula:
    """Quantifier instantiating substitution A[u/v]; permutes under K, Just and Trust."""
    return _subst(a, u, v, opaque=False)


def subst_ident(a: Formula, u: Term, v: Var) -> Formula:
    """Substitution of identicals A(u/v); stops at K, Just and Trust."""
    return _subst(a, u, v, opaque=True)


def _subst(a: Formula, u: Term, v: Var, opaque: bool) -> Formula:
    if isinstance(a, Bot):
        return a
    if isinstance(a, Eq):
        return Eq(_replace(a.lhs, u, v), _replace(a.rhs, u, v))
    if isinstance(a, Pred):
        return Pred(a.symbol, tuple(_replace(t, u, v) for t in a.args))
    if isinstance(a, Imp):
        return Imp(_subst(a.left, u, v, opaque), _subst(a.right, u, v, opaque))
    if isinstance(a, And):
        return And(_subst(a.left, u, v, opaque), _subst(a.right, u, v, opaque))
    if isinstance(a, Forall):
        y = a.var
        if v == y:
            return a
        body = _subst(a.body, u, v, opaque)
        if y != u or body == a.body:
            return a if body == a.body else Forall(y, body)
        z = fresh_var(vars_of_formula(a) | vars_of_term(u) | {v})
        return Forall(z, _subst(_subst(a.body, z, y, opaque), u, v, opaque))
    if opaque:
        return a
    if isinstance(a, K):
        return K(a.agent, _subst(a.body, u, v, opaque))
    if isinstance(a, Just):
        return Just(a.evidence, _subst(a.body, u, v, opaque))
    if isinstance(a, Trust):
        return Trust(a.agent, _replace(a.subject, u, v), _subst(a.body, u, v, opaque))
    raise TypeError(f"not a formula: {a!r}")


def subst_quant_many(a: Formula, mapping: Mapping[Var, Term]) -> Formula:
    """Simultaneous A[t1/x1 ... tn/xn], renaming a binder that clashes with some ti."""
    if not mapping:
        return a
    if isinstance(a, Bot):
        return a
    if isinstance(a, Eq):
        return Eq(mapping.get(a.lhs, a.lhs), mapping.get(a.rhs, a.rhs))
    if isinstance(a, Pred):
        return Pred(a.symbol, tuple(mapping.get(t, t) for t in a.args))
    if isinstance(a, Imp):
        return Imp(subst_quant_many(a.left, mapping), subst_quant_many(a.right, mapping))
    if isinstance(a, And):
        return And(subst_quant_many(a.left, mapping), subst_quant_many(a.right, mapping))
    if isinstance(a, Forall):
        y = a.var
        inner = {k: t for k, t in mapping.items() if k != y}
        if not inner:
            return a
        if y in inner.values() and subst_quant_many(a.body, inner) != a.body:
            avoid = vars_of_formula(a) | set(inner)
            for t in inner.values():
                avoid |= vars_of_term(t)
            z = fresh_var(avoid)
            return Forall(z, subst_quant_many(subst_quant(a.body, z, y), inner))
        return Forall(y, subst_quant_many(a.body, inner))
    if isinstance(a, K):
        return K(a.agent, subst_quant_many(a.body, mapping))
    if isinstance(a, Just):
        return Just(a.evidence, subst_quant_many(a.body, mapping))
    if isinstance(a, Trust):
        return Trust(a.agent, mapping.get(a.subject, a.subject), subst_quant_many(a.body, mapping))
    raise TypeError(f"not a formula: {a!r}")


def subst_lint(a: Formula, u: Term, v: Var) -> list[str]:
    """Warn where [u/v] would put a compound u under a binder for one of its variables.

    The renaming clause only fires when u is exactly the bound variable, so
    such a substitution captures.
    """
    if isinstance(u, Var):
        return []
    uvars = free_vars_term(u)
    found = []

    def walk(b, bound):
        if isinstance(b, Forall):
            if b.var == v:
                return
            walk(b.body, bound | {b.var})
        elif isinstance(b, (Imp, And)):
            walk(b.left, bound)
            walk(b.right, bound)
        elif isinstance(b, (K, Just, Trust)):
            walk(b.body, bound)
        elif isinstance(b, (Eq, Pred)):
            if any(t == v for t in term_occurrences(b)):
                for y in sorted(bound & uvars, key=lambda x: x.index):
                    found.append(f"x{y.index} in the substituted term is captured by a quantifier")

    walk(a, frozenset())
    return sorted(set(found))


def check_trust_subjects(a: Formula) -> None:
    """Raise ValueError if some Trust subject does not occur in its body."""
    stack = [a]
    while stack:
        b = stack.pop()
        if isinstance(b, Trust) and not occurs_in(b.subject, b.body):
            raise ValueError("trust subject does not occur in its body")
        if isinstance(b, (Imp, And)):
            stack.extend((b.left, b.right))
        elif isinstance(b, (Forall, K, Just, Trust)):
            stack.append(b.body)


# ---------------------------------------------------------------------------
# Parsing


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.pos = pos
        self.line = line
        self.column = col


_TOKEN = re.compile(
    r"\s+|;;[^\n]*|(?P<tok>->|[A-Za-z_][A-Za-z0-9_']*|[()\[\],.:=&~!\\])"
)

_TERM_START = {"(", "!", "\\"}
_KEYWORDS = {"bot", "forall", "exists"}


def _tokenize(text: str) -> list[tuple[str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        if m.group("tok"):
            toks.append((m.group("tok"), pos))
        pos = m.end()
    toks.append(("<eof>", len(text)))
    return toks


def _is_ident(tok: str) -> bool:
    return bool(re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok))


class _Parser:
    def __init__(self, text: str, symtab: SymbolTable):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.st = symtab

    def peek(self, k: int = 0) -> str:
        return self.toks[min(self.i + k, len(self.toks) - 1)][0]

    def error(self, msg: str):
        raise ParseError(msg, self.text, self.toks[self.i][1])

    def expect(self, tok: str):
        if self.peek() != tok:
            self.error(f"expected {tok!r}, found {self.peek()!r}")
        self.i += 1

    def ident(self) -> str:
        tok = self.peek()
        if not _is_ident(tok) or tok in _KEYWORDS:
            self.error(f"expected identifier, found {tok!r}")
        self.i += 1
        return tok

    def at_end(self):
        if self.peek() != "<eof>":
            self.error(f"unexpected {self.peek()!r}")

    # terms
    def starts_term(self) -> bool:
        tok = self.peek()
        return tok in _TERM_START or (_is_ident(tok) and tok not in _KEYWORDS)

    def term(self) -> Term:
        if self.peek() == "\\":
            return self.lam()
        t = self.prefix()
        while True:
            if self.peek() == "\\":
                return App(t, self.lam())
            if not self.starts_term():
                return t
            t = App(t, self.prefix())

    def lam(self) -> Term:
        self.expect("\\")
        binders = [self.st.var(self.ident())]
        while self.peek() != ".":
            binders.append(self.st.var(self.ident()))
        self.expect(".")
        body = self.term()
        for b in reversed(binders):
            body = Lam(b, body)
        return body

    def prefix(self) -> Term:
        tok = self.peek()
        if tok == "!":
            self.i += 1
            return Bang(self.prefix())
        if tok == "(":
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        return self.st.var(self.ident())

    # formulas
    def formula(self) -> Formula:
        left = self.conj()
        if self.peek() == "->":
            self.i += 1
            return Imp(left, self.formula())
        return left

    def conj(self) -> Formula:
        a = self.unary()
        while self.peek() == "&":
            self.i += 1
            a = And(a, self.unary())
        return a

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.i += 1
            return Not(self.unary())
        if tok in ("forall", "exists"):
            self.i += 1
            x = self.st.var(self.ident())
            self.expect(".")
            body = self.unary()
            return Forall(x, body) if tok == "forall" else Exists(x, body)
        if tok == "K" and self.peek(1) == "[":
            self.i += 2
            a = self.st.agent(self.ident())
            self.expect("]")
            return K(a, self.unary())
        if tok == "T" and self.peek(1) == "[":
            start = self.toks[self.i][1]
            self.i += 2
            a = self.st.agent(self.ident())
            self.expect(",")
            t = self.term()
            self.expect("]")
            body = self.unary()
            if not occurs_in(t, body):
                raise ParseError("trust subject does not occur in its body", self.text, start)
            return Trust(a, t, body)
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok == "bot":
            self.i += 1
            return BOT
        save = self.i
        if _is_ident(tok) and tok not in _KEYWORDS and self.peek(1) == "(":
            start = self.toks[self.i][1]
            self.i += 2
            args = []
            if self.peek() != ")":
                args.append(self.term())
                while self.peek() == ",":
                    self.i += 1
                    args.append(self.term())
            self.expect(")")
            if self.peek() not in ("=", ":"):
                try:
                    self.st.register_pred(tok, len(args))
                except ArityError as e:
                    raise ParseError(str(e), self.text, start) from None
                return Pred(tok, tuple(args))
            self.i = save
        if tok == "(":
            snap = self.st.snapshot()
            try:
                t = self.term()
                if self.peek() in ("=", ":"):
                    return self.after_term(t)
            except ParseError:
                pass
            self.st.restore(snap)
            self.i = save + 1
            a = self.formula()
            self.expect(")")
            return a
        if self.starts_term():
            return self.after_term(self.term())
        self.error(f"unexpected {tok!r}")

    def after_term(self, t: Term) -> Formula:
        if self.peek() == "=":
            self.i += 1
            return Eq(t, self.term())
        if self.peek() == ":":
            self.i += 1
            return Just(t, self.unary())
        self.error(f"expected '=' or ':' after term, found {self.peek()!r}")


def parse_formula(text: str, symtab: SymbolTable | None = None) -> Formula:
    p = _Parser(text, symtab if symtab is not None else SymbolTable())
    a = p.formula()
    p.at_end()
    return a


def parse_term(text: str, symtab: SymbolTable | None = None) -> Term:
    p = _Parser(text, symtab if symtab is not None else SymbolTable())
    t = p.term()
    p.at_end()
    return t


# ---------------------------------------------------------------------------
# Printing


def format_term(t: Term, symtab: SymbolTable | None = None) -> str:
    st = symtab if symtab is not None else SymbolTable()

    def go(t, ctx):
        # ctx: 0 top, 1 function position, 2 argument position
        if isinstance(t, Var):
            return st.var_name(t)
        if isinstance(t, Bang):
            return "!" + go(t.inner, 3)
        if isinstance(t, Lam):
            s = f"\\{st.var_name(t.binder)}. {go(t.body, 0)}"
            return f"({s})" if ctx else s
        s = f"{go(t.fn, 1)} {go(t.arg, 2)}"
        return f"({s})" if ctx >= 2 else s

    return go(t, 0)


def _fmt_in_formula(t: Term, st: SymbolTable) -> str:
    # Wrap lambdas so their maximal body cannot swallow a following token.
    s = format_term(t, st)
    return f"({s})" if isinstance(t, Lam) else s


def format_formula(a: Formula, symtab: SymbolTable | None = None) -> str:
    st = symtab if symtab is not None else SymbolTable()

    def go(a, prec):
        # prec: 0 implication level, 1 conjunction level, 2 unary operand
        if isinstance(a, Bot):
            return "bot"
        if isinstance(a, Eq):
            return f"{_fmt_in_formula(a.lhs, st)} = {_fmt_in_formula(a.rhs, st)}"
        if isinstance(a, Pred):
            return f"{a.symbol}(" + ", ".join(format_term(t, st) for t in a.args) + ")"
        if isinstance(a, Imp):
            ex = _as_exists(a)
            if ex is not None:
                x, body = ex
                return f"exists {st.var_name(x)}. {go(body, 2)}"
            if a.right == BOT:
                return "~" + go(a.left, 2)
            s = f"{go(a.left, 1)} -> {go(a.right, 0)}"
            return f"({s})" if prec > 0 else s
        if isinstance(a, And):
            s = f"{go(a.left, 1)} & {go(a.right, 2)}"
            return f"({s})" if prec > 1 else s
        if isinstance(a, Forall):
            return f"forall {st.var_name(a.var)}. {go(a.body, 2)}"
        if isinstance(a, K):
            return f"K[{st.agent_name(a.agent)}] {go(a.body, 2)}"
        if isinstance(a, Just):
            return f"{_fmt_in_formula(a.evidence, st)} : {go(a.body, 2)}"
        if isinstance(a, Trust):
            return f"T[{st.agent_name(a.agent)}, {format_term(a.subject, st)}] {go(a.body, 2)}"
        raise TypeError(f"not a formula: {a!r}")

    return go(a, 0)


def _as_exists(a: Imp):
    if a.right == BOT and isinstance(a.left, Forall):
        inner = a.left.body
        if isinstance(inner, Imp) and inner.right == BOT:
            return a.left.var, inner.left
    return None
