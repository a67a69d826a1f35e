"""Command-line front end: trustlogic check|eval|validate|reduce|theory|corpus|fuzz."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import acceptance, lam
from .corpus import build_corpus
from .fuzz import soundness_fuzz
from .proof import ProofFormatError, check, desugar_trust, dump_derivation, format_sequent, load_derivations
from .semantics import (
    DepthExhausted,
    ModelFormatError,
    UnknownAgent,
    UnknownState,
    UnknownTerm,
    eval_formula,
    load_model,
    validate_model,
)
from .syntax import ParseError, SymbolTable, format_formula, format_term, parse_term
from .theory import MassError, format_dist, lift_K, lift_T, parse_behaviour, parse_theory, sigma_prob_eq

OK, FAILED, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


def _positive(text: str) -> int:
    n = int(text)
    if n <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def _natural(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must not be negative")
    return n


def _read(path: str) -> str:
    try:
        text = Path(path).read_text() if path != "-" else sys.stdin.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    if not text.strip():
        raise InputError(f"{path} is empty")
    return text


class Out:
    """Writes text lines or `id status detail` records."""

    def __init__(self, fmt: str):
        self.fmt = fmt

    def line(self, text: str):
        if self.fmt == "text":
            print(text)

    def record(self, case_id: str, status: str, detail: str = ""):
        if self.fmt == "records":
            print(f"{case_id} {status} {detail}".rstrip())


# ---------------------------------------------------------------------------
# commands


def cmd_check(args, out: Out) -> int:
    st = SymbolTable()
    try:
        derivations = load_derivations(_read(args.proof), st)
        hyps = set(parse_theory(_read(args.hyps), st)) if args.hyps else None
    except (ProofFormatError, ParseError, ValueError) as e:
        raise InputError(str(e)) from None
    status = OK
    for i, d in enumerate(derivations):
        rid = f"derivation-{i}"
        report = check(d)
        seq = format_sequent(d.conclusion, st)
        if not report.ok:
            print(f"{rid}: {report.describe()}", file=sys.stderr)
            out.line(f"{rid}: FAILED {report.kind}")
            out.record(rid, "fail", report.kind)
            status = FAILED
            continue
        if hyps is not None:
            extra = [a for a in d.conclusion.context if a not in hyps]
            if extra:
                msg = "context not among hypotheses: " + ", ".join(format_formula(a, st) for a in extra)
                print(f"{rid}: {msg}", file=sys.stderr)
                out.line(f"{rid}: FAILED {msg}")
                out.record(rid, "fail", "hypotheses")
                status = FAILED
                continue
        out.line(f"{rid}: ok  {seq}")
        out.record(rid, "ok", seq)
        if args.desugar:
            res = desugar_trust(d)
            for note in res.notes:
                out.line(f"  note: {note}")
            out.line(f"  desugared ({res.report.describe()}):")
            out.line(dump_derivation(res.derivation, st, 1))
    return status


def _load_model(path):
    st = SymbolTable()
    try:
        return load_model(_read(path), st), st
    except (ModelFormatError, ParseError, ValueError) as e:
        raise InputError(str(e)) from None


def cmd_eval(args, out: Out) -> int:
    m, st = _load_model(args.model)
    try:
        from .syntax import parse_formula

        a = parse_formula(args.formula, st)
        value = eval_formula(m, args.state, None, a, args.depth)
    except (ParseError, UnknownTerm, UnknownAgent, UnknownState, DepthExhausted) as e:
        raise InputError(f"{type(e).__name__}: {e}") from None
    out.line("true" if value else "false")
    out.record("eval", "true" if value else "false", args.state)
    return OK if value else FAILED


def cmd_validate(args, out: Out) -> int:
    m, st = _load_model(args.model)
    report = validate_model(m)
    for v in report:
        out.line(f"{v.code}: {v.message}")
        out.record(v.code, "violation", v.message)
    if not report:
        out.line("valid")
        out.record("model", "valid")
    return OK if not report else FAILED


def cmd_reduce(args, out: Out) -> int:
    st = SymbolTable()
    try:
        t = parse_term(args.term, st)
    except ParseError as e:
        raise InputError(str(e)) from None
    trace, done = lam.normal_order_trace(t, args.fuel)
    for i, u in enumerate(trace):
        out.line(f"{i}: {format_term(u, st)}")
        out.record(f"step-{i}", "term", format_term(u, st))
    steps = len(trace) - 1
    if done:
        out.line(f"normal form after {steps} step(s)")
        out.record("result", "normal", str(steps))
        return OK
    out.line(f"FuelExhausted: no normal form within {args.fuel} step(s)")
    out.record("result", "fuel-exhausted", str(steps))
    return FAILED


def cmd_theory(args, out: Out) -> int:
    st = SymbolTable()
    try:
        facts = parse_behaviour(_read(args.behaviour), st)
        closure = sigma_prob_eq(facts, args.depth)
    except (MassError, ValueError) as e:
        raise InputError(f"{type(e).__name__}: {e}") from None
    if args.structured:
        for lhs, rhs, rule in closure.identities:
            print(f"{format_dist(lhs, st)} = {format_dist(rhs, st)} ;; {rule}")
    else:
        theory = closure.theory.formulas
        if args.lift:
            agent = st.agent(args.agent)
            theory = (lift_K if args.lift == "K" else lift_T)(theory, agent).formulas
        for a in theory:
            print(format_formula(a, st))
    if closure.exhausted:
        print(f";; closure cut at depth {args.depth}; further identities exist", file=sys.stderr)
    return OK


def cmd_corpus(args, out: Out) -> int:
    if args.list:
        for name in acceptance.CASES:
            print(name)
        return OK
    selected = args.case or None
    unknown = [c for c in selected or () if c not in acceptance.CASES]
    if unknown:
        raise InputError(f"unknown case(s): {', '.join(unknown)}")
    results = acceptance.run_cases(selected, models=args.models, seed=args.seed)
    for r in results:
        out.line(f"{'PASS' if r.ok else 'FAIL'} {r.case_id}: {r.detail}")
        out.record(r.case_id, "pass" if r.ok else "fail", r.detail)
    return OK if all(r.ok for r in results) else FAILED


def cmd_fuzz(args, out: Out) -> int:
    corpus = build_corpus()
    report = soundness_fuzz(corpus, args.models, args.seed, args.depth)
    for name, bad in report.per_entry.items():
        out.line(f"{name}: {bad} violation(s)")
        out.record(name, "pass" if not bad else "fail", str(bad))
    for v in report.violations[:20]:
        print(f"violation: {v.entry} model-seed={v.model_seed} state={v.state}", file=sys.stderr)
    out.line(
        f"{report.models} models, {report.sequents_checked} sequent checks, {report.premises_met} with context "
        f"verified, {len(report.violations)} violations, {report.depth_errors} depth errors"
    )
    return OK if report.ok else FAILED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trustlogic", description="Proof checker and model checker for trust with justifications.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "records"), default="text")
    common.add_argument("--fuel", type=_natural, default=100)
    common.add_argument("--depth", type=_positive, default=6)
    common.add_argument("--models", type=_positive, default=200)
    common.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="check derivations in a proof file")
    c.add_argument("proof")
    c.add_argument("--hyps", help="file of hypotheses, one formula per line")
    c.add_argument("--desugar", action="store_true", help="also print the trust-free version")
    c.set_defaults(fn=cmd_check)

    e = sub.add_parser("eval", parents=[common], help="evaluate a formula at a state of a model")
    e.add_argument("model")
    e.add_argument("formula")
    e.add_argument("--state", required=True)
    e.set_defaults(fn=cmd_eval)

    v = sub.add_parser("validate", parents=[common], help="list violated model conditions")
    v.add_argument("model")
    v.set_defaults(fn=cmd_validate)

    r = sub.add_parser("reduce", parents=[common], help="normal-order reduction trace")
    r.add_argument("term")
    r.set_defaults(fn=cmd_reduce)

    t = sub.add_parser("theory", parents=[common], help="probabilistic identity theory from behaviour facts")
    t.add_argument("behaviour")
    t.add_argument("--structured", action="store_true", help="print distributions instead of encoded terms")
    t.add_argument("--lift", choices=("K", "T"))
    t.add_argument("--agent", default="a")
    t.set_defaults(fn=cmd_theory)

    k = sub.add_parser("corpus", parents=[common], help="run the built-in acceptance cases")
    k.add_argument("--case", action="append", help="run only this case (repeatable)")
    k.add_argument("--list", action="store_true")
    k.set_defaults(fn=cmd_corpus)

    f = sub.add_parser("fuzz", parents=[common], help="soundness fuzzing of the derivation corpus")
    f.set_defaults(fn=cmd_fuzz)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args, Out(args.format))
    except InputError as e:
        print(f"trustlogic: {e}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
