"""Pure lambda-calculus: substitution, redexes, bounded reduction and encodings."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

from .syntax import App, Bang, Lam, Term, Var, free_vars_term, fresh_var, vars_of_term


class FuelExhausted(Exception):
    """A bounded search stopped with unexplored terms left on its frontier."""


Path = tuple  # child indices: App 0=fn 1=arg, Lam 0=body, Bang 0=inner


def term_subst(t: Term, s: Term, x: Var) -> Term:
    """Capture-avoiding t^{s/x}."""
    fv_s = free_vars_term(s)
    return _tsubst(t, s, x, fv_s)


def _tsubst(t, s, x, fv_s):
    if isinstance(t, Var):
        return s if t == x else t
    if isinstance(t, App):
        return App(_tsubst(t.fn, s, x, fv_s), _tsubst(t.arg, s, x, fv_s))
    if isinstance(t, Bang):
        return Bang(_tsubst(t.inner, s, x, fv_s))
    y = t.binder
    if y == x or x not in free_vars_term(t.body):
        return t
    if y in fv_s:
        z = fresh_var(fv_s | vars_of_term(t) | {x})
        body = _tsubst(t.body, z, y, frozenset((z,)))
        return Lam(z, _tsubst(body, s, x, fv_s))
    return Lam(y, _tsubst(t.body, s, x, fv_s))


def is_redex(t: Term) -> bool:
    return isinstance(t, App) and isinstance(t.fn, Lam)


def subterm(t: Term, path: Sequence[int]) -> Term:
    for i in path:
        if isinstance(t, App):
            t = t.fn if i == 0 else t.arg
        elif isinstance(t, Lam):
            t = t.body
        elif isinstance(t, Bang):
            t = t.inner
        else:
            raise IndexError("path leaves the term")
    return t


def redexes(t: Term) -> list[Path]:
    """Paths of all redexes, leftmost-outermost first (pre-order, function before argument)."""
    out = []

    def walk(t, path):
        if is_redex(t):
            out.append(path)
        if isinstance(t, App):
            walk(t.fn, path + (0,))
            walk(t.arg, path + (1,))
        elif isinstance(t, Lam):
            walk(t.body, path + (0,))
        elif isinstance(t, Bang):
            walk(t.inner, path + (0,))

    walk(t, ())
    return out


def contract(t: Term) -> Term:
    if not is_redex(t):
        raise ValueError("not a redex")
    return term_subst(t.fn.body, t.arg, t.fn.binder)


def step(t: Term, path: Sequence[int]) -> Term:
    """Contract the redex at path."""
    if not path:
        return contract(t)
    i, rest = path[0], path[1:]
    if isinstance(t, App):
        if i == 0:
            return App(step(t.fn, rest), t.arg)
        return App(t.fn, step(t.arg, rest))
    if isinstance(t, Lam):
        return Lam(t.binder, step(t.body, rest))
    if isinstance(t, Bang):
        return Bang(step(t.inner, rest))
    raise ValueError("path does not address a redex")


def reducts(t: Term) -> list[Term]:
    """One-step reducts in redex order, duplicates removed."""
    seen = []
    for p in redexes(t):
        r = step(t, p)
        if r not in seen:
            seen.append(r)
    return seen


def reduces_to(t: Term, u: Term, fuel: int, max_nodes: int = 100_000) -> bool:
    """Breadth-first search for a reduction path t ->* u of length at most fuel.

    Returns False when the reachable set is exhausted; raises FuelExhausted
    when unexplored reducts remain at the cutoff.
    """
    if t == u:
        return True
    visited = {t}
    frontier = [t]
    for _ in range(fuel):
        nxt = []
        for r in frontier:
            for s in reducts(r):
                if s == u:
                    return True
                if s not in visited:
                    visited.add(s)
                    nxt.append(s)
        if not nxt:
            return False
        if len(visited) > max_nodes:
            raise FuelExhausted(f"more than {max_nodes} terms explored")
        frontier = nxt
    if any(s not in visited for r in frontier for s in reducts(r)):
        raise FuelExhausted(f"no path within {fuel} steps and the search is incomplete")
    return False


def normal_order_trace(t: Term, fuel: int) -> tuple[list[Term], bool]:
    """Leftmost-outermost reduction sequence; the flag says a normal form was reached."""
    trace = [t]
    for _ in range(fuel):
        rs = redexes(trace[-1])
        if not rs:
            return trace, True
        trace.append(step(trace[-1], rs[0]))
    return trace, not redexes(trace[-1])


# ---------------------------------------------------------------------------
# Alpha-equivalence and confluence


def alpha_key(t: Term, env: tuple = ()):
    """Nameless representation; equal keys iff the terms are alpha-equivalent."""
    if isinstance(t, Var):
        for depth, b in enumerate(reversed(env)):
            if b == t:
                return ("b", depth)
        return ("f", t.index)
    if isinstance(t, App):
        return ("@", alpha_key(t.fn, env), alpha_key(t.arg, env))
    if isinstance(t, Lam):
        return ("l", alpha_key(t.body, env + (t.binder,)))
    return ("!", alpha_key(t.inner, env))


def joinable(a: Term, b: Term, fuel: int, max_nodes: int = 5000) -> bool:
    """Do a and b have a common reduct (up to alpha) within fuel steps each?

    Raises FuelExhausted when the bound is hit before a decision.
    """
    seen = [{alpha_key(a): 0}, {alpha_key(b): 0}]
    frontiers = [[a], [b]]
    if alpha_key(a) == alpha_key(b):
        return True
    cut = False
    for depth in range(1, fuel + 1):
        progressed = False
        for side in (0, 1):
            nxt = []
            for r in frontiers[side]:
                for s in reducts(r):
                    k = alpha_key(s)
                    if k in seen[1 - side]:
                        return True
                    if k not in seen[side]:
                        seen[side][k] = depth
                        nxt.append(s)
            frontiers[side] = nxt
            progressed = progressed or bool(nxt)
            if len(seen[side]) > max_nodes:
                cut = True
        if cut or not progressed:
            break
    if cut or any(frontiers):
        raise FuelExhausted("join search cut off")
    return False


def local_confluence(t: Term, fuel: int = 50, max_nodes: int = 5000) -> str:
    """'ok' when every pair of one-step reducts joins, 'fail' on a definite
    non-join and 'fuel' when some pair could not be decided."""
    rs = reducts(t)
    undecided = False
    for i in range(len(rs)):
        for j in range(i + 1, len(rs)):
            try:
                if not joinable(rs[i], rs[j], fuel, max_nodes):
                    return "fail"
            except FuelExhausted:
                undecided = True
    return "fuel" if undecided else "ok"


# ---------------------------------------------------------------------------
# Encodings


def _fresh_binders(n: int, avoid: Iterable[Var]) -> list[Var]:
    taken = set(avoid)
    out = []
    for _ in range(n):
        v = fresh_var(taken)
        taken.add(v)
        out.append(v)
    return out


def pair_operator(avoid: Iterable[Var] = ()) -> Term:
    """The pairing function \\x.\\y.\\z. z x y."""
    x, y, z = _fresh_binders(3, avoid)
    return Lam(x, Lam(y, Lam(z, App(App(z, x), y))))


def projection(i: int, avoid: Iterable[Var] = ()) -> Term:
    """\\z1.\\z2.z1 for i=1 and \\z1.\\z2.z2 for i=2."""
    z1, z2 = _fresh_binders(2, avoid)
    return Lam(z1, Lam(z2, z1 if i == 1 else z2))


def encode_pair(t: Term, s: Term, avoid: Iterable[Var] = ()) -> Term:
    """The normal form \\z. z t s of the pairing function applied to t and s."""
    z = fresh_var(vars_of_term(t) | vars_of_term(s) | set(avoid))
    return Lam(z, App(App(z, t), s))


def nil(avoid: Iterable[Var] = ()) -> Term:
    x, y = _fresh_binders(2, avoid)
    return Lam(x, Lam(y, y))


def encode_list(items: Sequence[Term], avoid: Iterable[Var] = ()) -> Term:
    """Right-nested pairs ending in nil."""
    avoid = set(avoid)
    out = nil(avoid)
    for t in reversed(items):
        out = encode_pair(t, out, avoid)
    return out


def church(n: int, f: Var = Var(0), x: Var = Var(1)) -> Term:
    body: Term = x
    for _ in range(n):
        body = App(f, body)
    return Lam(f, Lam(x, body))
