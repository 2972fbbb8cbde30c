"""Command line front end.

Exit codes follow one convention across subcommands: 0 for a positive
verdict (satisfied, entailed, colouring found, isomorphic, equal growth,
embedded), 1 for a checked negative verdict, 2 for an honest "could not
decide within budget", 3 for usage, parse and precondition errors.
Timing goes to stderr so stdout stays bit-identical between runs.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .algebra import (
    BudgetExceeded, FiniteAlgebra, Witness, dumps_algebra, load_algebra,
    satisfies,
)
from .axioms import run_suite
from .dominance import (
    FragmentError, compare, is_reduced, numeric_probe, pretty_ordinal,
    reduce_term, to_ordinal, tree_embed,
)
from .free_quotient import (
    TruncationError, bound_text, decide_entailment, refute_via_truncation,
)
from .hsemiring import build_bh, check_lemma2, check_lemma3, tau_law
from .hypergraphs import (
    all_homs, corpus, corpus_names, find_hom, girth, is_robustly_satisfiable,
    load_hypergraph,
)
from .models import (
    algebra_B, algebra_B_minus, algebra_S7_0, prop1_sweep, valid_on_nat,
)
from .terms import (
    EvalBudgetError, ParseError, SignatureError, Var, eval_alg, eval_nat,
    parse, parse_equation, print_term, size, variables, weight,
)

__all__ = ["main"]

_MODEL_MAKERS = {
    "B": algebra_B,
    "Bminus": algebra_B_minus,
    "S7_0": algebra_S7_0,
}


class _UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; the convention here reserves 2 for
    # budget outcomes, so route usage problems through exit 3 instead.
    def error(self, message):
        raise _UsageError(message)


def _resolve_model(ref: str) -> FiniteAlgebra:
    """``B`` / ``Bminus`` / ``S7_0``, optionally ``:op-op-...`` for a
    reduct, or ``@path`` for an algebra file."""
    if ref.startswith("@"):
        return load_algebra(ref[1:])
    name, sep, sig = ref.partition(":")
    maker = _MODEL_MAKERS.get(name)
    if maker is None:
        raise _UsageError(
            f"unknown model {name!r} (have {sorted(_MODEL_MAKERS)}, "
            f"'nat' where supported, or @file)")
    alg = maker()
    if sep:
        from .terms import parse_signature
        alg = alg.reduct(parse_signature(sig), name=ref)
    return alg


def _resolve_hypergraph(ref: str):
    if ref.startswith("@"):
        return load_hypergraph(ref[1:]), ref[1:]
    if ref not in corpus_names():
        raise _UsageError(
            f"unknown hypergraph {ref!r} (corpus: {corpus_names()}, "
            f"or @file)")
    return corpus(ref), ref


def _parse_assignment(text: str | None) -> dict[int, int]:
    out: dict[int, int] = {}
    if not text:
        return out
    for piece in text.split(","):
        name, sep, value = piece.partition("=")
        if not sep:
            raise _UsageError(f"bad assignment piece {piece!r}; want x=3")
        v = parse(name.strip())
        if not isinstance(v, Var):
            raise _UsageError(f"{name.strip()!r} is not a variable")
        out[v.index] = int(value.strip())
    return out


def _witness_json(w: Witness | None):
    if w is None:
        return None
    return {"assignment": {f"x{i}": v for i, v in w.assignment.items()},
            "lhs": w.lhs_value, "rhs": w.rhs_value}


def _assert_model_witness(alg: FiniteAlgebra, eq, w: Witness) -> None:
    # Re-derive the witness before showing it; a mismatch is a bug.
    ids = {i: alg.element_id(n) for i, n in w.assignment.items()}
    lv = alg.elements[eval_alg(eq.lhs, alg, ids)]
    rv = alg.elements[eval_alg(eq.rhs, alg, ids)]
    if lv == rv or (lv, rv) != (w.lhs_value, w.rhs_value):
        raise RuntimeError(f"witness failed revalidation: {w}")


# ---------------------------------------------------------------------------
# Subcommand handlers: each returns (exit code, stdout lines, json payload)


def _cmd_parse(args):
    t = parse(args.term)
    text = print_term(t)
    return 0, [text], {
        "term": text, "size": size(t),
        "variables": sorted(f"x{i}" for i in variables(t))}


def _cmd_eval_nat(args):
    t = parse(args.term)
    asg = _parse_assignment(args.at)
    value = eval_nat(t, asg, max_bits=args.max_bits)
    return 0, [str(value)], {"term": print_term(t), "value": value}


def _cmd_check(args):
    eq = parse_equation(args.eq)
    if args.model == "nat":
        verdict = valid_on_nat(eq)
        if verdict.ok:
            lines = [f"valid on sampled naturals "
                     f"(checked={verdict.checked}, "
                     f"skipped={verdict.skipped})"]
            return 0, lines, {"equation": str(eq), "ok": True,
                              "checked": verdict.checked,
                              "skipped": verdict.skipped}
        asg, lv, rv = verdict.witness
        if (eval_nat(eq.lhs, asg), eval_nat(eq.rhs, asg)) != (lv, rv):
            raise RuntimeError("witness failed revalidation")
        wtext = ", ".join(f"x{i} = {v}" for i, v in sorted(asg.items()))
        return 1, ["refuted over the naturals",
                   f"witness: {wtext}; lhs = {lv}, rhs = {rv}"], {
            "equation": str(eq), "ok": False,
            "witness": {"assignment":
                        {f"x{i}": v for i, v in asg.items()},
                        "lhs": lv, "rhs": rv}}
    alg = _resolve_model(args.model)
    verdict = satisfies(alg, eq, budget=args.budget, jobs=args.jobs)
    if verdict.ok:
        return 0, [f"satisfied in {alg.name}"], {
            "model": alg.name, "equation": str(eq), "ok": True}
    _assert_model_witness(alg, eq, verdict.witness)
    return 1, [f"refuted in {alg.name}",
               f"witness: {verdict.witness}"], {
        "model": alg.name, "equation": str(eq), "ok": False,
        "witness": _witness_json(verdict.witness)}


def _cmd_axioms(args):
    target = "nat" if args.model == "nat" else _resolve_model(args.model)
    results = run_suite(target, group=args.group, trials=args.trials)
    lines = [str(r) for r in results]
    bad = [r for r in results if not r.ok]
    lines.append(f"{len(results) - len(bad)}/{len(results)} hold")
    payload = {
        "model": args.model,
        "results": [{"id": r.axiom.id, "ok": r.ok, "detail": r.detail}
                    for r in results],
        "ok": not bad}
    return (0 if not bad else 1), lines, payload


def _cmd_girth(args):
    h, name = _resolve_hypergraph(args.hypergraph)
    g = girth(h)
    text = "infinity" if g is None else str(g)
    return 0, [f"girth: {text}"], {"hypergraph": name, "girth": g}


def _cmd_hom(args):
    h, name = _resolve_hypergraph(args.hypergraph)
    if args.all:
        homs = all_homs(h)
        lines = [f"{len(homs)} colourings"]
        lines += ["  " + " ".join(f"{v}={c[v]}" for v in sorted(c))
                  for c in homs]
        payload = {"hypergraph": name, "count": len(homs),
                   "colourings": [{str(v): c[v] for v in sorted(c)}
                                  for c in homs]}
        return (0 if homs else 1), lines, payload
    hom = find_hom(h)
    if hom is None:
        return 1, ["no colouring"], {"hypergraph": name, "colouring": None}
    text = " ".join(f"{v}={hom[v]}" for v in sorted(hom))
    return 0, [f"colouring: {text}"], {
        "hypergraph": name,
        "colouring": {str(v): hom[v] for v in sorted(hom)}}


def _cmd_robust(args):
    h, name = _resolve_hypergraph(args.hypergraph)
    ok, pin = is_robustly_satisfiable(h)
    if ok:
        return 0, ["robustly satisfiable"], {"hypergraph": name, "ok": True}
    u, v, vu, vv = pin
    return 1, [f"not robust: pin {u}={vu}, {v}={vv} has no extension"], {
        "hypergraph": name, "ok": False,
        "pin": {"u": u, "v": v, "val_u": vu, "val_v": vv}}


def _cmd_tau(args):
    h, name = _resolve_hypergraph(args.hypergraph)
    law = tau_law(h)
    return 0, [str(law)], {"hypergraph": name, "tau": str(law)}


def _cmd_build_bh(args):
    h, name = _resolve_hypergraph(args.hypergraph)
    alg = build_bh(h, name=f"B_{name}")
    text = dumps_algebra(alg)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
        lines = [f"wrote {args.out}: {len(alg)} elements"]
    else:
        lines = [text.rstrip("\n")]
    return 0, lines, {"hypergraph": name, "elements": len(alg),
                      "out": args.out}


def _cmd_lemma2(args):
    h, name = _resolve_hypergraph(args.hypergraph)
    report = check_lemma2(h, name=name)
    law = tau_law(h)
    lines = [f"tau: {law}",
             f"satisfied in B: {report.satisfied}"]
    if report.witness is not None:
        lines.append(f"witness: {report.witness}")
    lines.append(
        "colouring: " + ("none" if report.hom is None else " ".join(
            f"{v}={report.hom[v]}" for v in sorted(report.hom))))
    if report.hom_assignment_refutes is not None:
        lines.append(
            f"colouring refutes as assignment: "
            f"{report.hom_assignment_refutes}")
    lines.append(f"agree: {report.agree}")
    payload = {
        "hypergraph": name, "tau": str(law),
        "satisfied": report.satisfied,
        "witness": _witness_json(report.witness),
        "colouring": None if report.hom is None else
        {str(v): report.hom[v] for v in sorted(report.hom)},
        "hom_assignment_refutes": report.hom_assignment_refutes,
        "agree": report.agree}
    return (0 if report.agree else 1), lines, payload


def _cmd_lemma3(args):
    h, name = _resolve_hypergraph(args.hypergraph)
    report = check_lemma3(h, name=name)
    lines = [f"colourings: {report.hom_count}",
             f"closure size: {report.closure_size}",
             f"ideal size: {report.ideal_size}",
             f"quotient size: {report.quotient_size}",
             f"target size: {report.target_size}",
             f"congruence: {report.congruence_ok}",
             f"isomorphic: {report.isomorphic}"]
    lines += [f"violation: {v}" for v in report.violations]
    payload = {
        "hypergraph": name, "colourings": report.hom_count,
        "closure_size": report.closure_size,
        "ideal_size": report.ideal_size,
        "quotient_size": report.quotient_size,
        "target_size": report.target_size,
        "congruence": report.congruence_ok,
        "isomorphic": report.isomorphic,
        "violations": report.violations,
        "ok": report.ok}
    return (0 if report.ok else 1), lines, payload


def _cmd_free_quotient(args):
    eq = parse_equation(args.eq)
    lines = [f"equation: {eq}",
             f"variables: {len(eq.variables())}",
             f"weights: lhs {weight(eq.lhs)}, rhs {weight(eq.rhs)}",
             f"bound: {bound_text(eq)}"]
    refutation = refute_via_truncation(eq)
    if refutation is None:
        lines.append("derivable: both sides share a normal form")
        return 0, lines, {"equation": str(eq), "derivable": True,
                          "bound": bound_text(eq)}
    _assert_model_witness(refutation.model, eq, refutation.witness)
    lines += [f"refuted in {refutation.model.name} "
              f"({len(refutation.model)} elements)",
              f"witness: {refutation.witness}"]
    payload = {
        "equation": str(eq), "derivable": False,
        "m": refutation.m, "K": refutation.K,
        "model": refutation.model.name,
        "model_size": len(refutation.model),
        "bound": refutation.bound,
        "witness": _witness_json(refutation.witness)}
    return 1, lines, payload


def _cmd_entail(args):
    sigma = []
    if args.sigma:
        with open(args.sigma, encoding="utf-8") as f:
            for raw in f:
                line = raw.strip()
                if line and not line.startswith("#"):
                    sigma.append(parse_equation(line))
    eq = parse_equation(args.eq)
    result = decide_entailment(sigma, eq, max_size=args.max_size,
                               budget=args.budget)
    lines = [f"status: {result.status}", f"reason: {result.reason}"]
    payload = {"equation": str(eq), "premises": len(sigma),
               "status": result.status, "reason": result.reason,
               "searched_to": result.searched_to, "bound": result.bound}
    if result.status == "not-entailed":
        _assert_model_witness(result.model, eq, result.witness)
        lines += [f"countermodel: {len(result.model)} elements",
                  f"witness: {result.witness}"]
        payload["model_size"] = len(result.model)
        payload["witness"] = _witness_json(result.witness)
        if args.dump_model:
            lines.append(dumps_algebra(result.model).rstrip("\n"))
        code = 1
    elif result.status == "entailed":
        code = 0
    else:
        code = 2
    return code, lines, payload


def _cmd_dominance(args):
    s, t = parse(args.lhs), parse(args.rhs)
    os_, ot = to_ordinal(s, args.box), to_ordinal(t, args.box)
    verdict = compare(s, t, args.box)
    lines = [f"lhs ordinal: {pretty_ordinal(os_)}",
             f"rhs ordinal: {pretty_ordinal(ot)}",
             f"compare: {verdict}"]
    payload = {"lhs": print_term(s), "rhs": print_term(t),
               "box": args.box,
               "lhs_ordinal": pretty_ordinal(os_),
               "rhs_ordinal": pretty_ordinal(ot),
               "compare": verdict}
    probe = numeric_probe(s, t)
    extra = "" if probe.crossover is None \
        else f", stable from x={probe.crossover}"
    lines.append(f"probe: {probe.verdict} over {len(probe.points)} "
                 f"points{extra}")
    payload["probe"] = {
        "verdict": probe.verdict, "crossover": probe.crossover,
        "points": [list(p) for p in probe.points],
        "truncated": probe.truncated}
    return (0 if verdict == "equal" else 1), lines, payload


def _cmd_embed(args):
    s, t = reduce_term(parse(args.lhs)), reduce_term(parse(args.rhs))
    ok = tree_embed(s, t)
    lines = [f"reduced lhs: {print_term(s)}",
             f"reduced rhs: {print_term(t)}",
             f"embedded: {ok}"]
    return (0 if ok else 1), lines, {
        "lhs": print_term(s), "rhs": print_term(t), "embedded": ok}


def _cmd_sweep_prop1(args):
    report = prop1_sweep(max_nodes=args.max_nodes, var_count=args.vars,
                         random_points=args.points, seed=args.seed)
    lines = [f"terms: {report.terms}",
             f"dropped: {report.dropped_terms}",
             f"pairs checked: {report.pairs_checked}",
             f"disagreements: {len(report.disagreements)}"]
    for s, t, w in report.disagreements:
        lines.append(f"  {s} vs {t}: {w}")
    payload = {"max_nodes": report.max_nodes, "terms": report.terms,
               "dropped": report.dropped_terms,
               "pairs_checked": report.pairs_checked,
               "disagreements": [[s, t, w]
                                 for s, t, w in report.disagreements],
               "ok": report.ok}
    return (0 if report.ok else 1), lines, payload


# ---------------------------------------------------------------------------


def _build_parser() -> _Parser:
    top = _Parser(prog="combalg",
                  description="Finite models and growth orders for a "
                              "combinatorial term algebra.")
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="machine-readable output on stdout")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common],
                       help="parse a term and print its canonical form")
    p.add_argument("term")
    p.set_defaults(fn=_cmd_parse)

    p = sub.add_parser("eval-nat", parents=[common],
                       help="evaluate a term over the naturals")
    p.add_argument("term")
    p.add_argument("--at", help="assignment, e.g. x=3,y=4")
    p.add_argument("--max-bits", type=int, default=2_000_000)
    p.set_defaults(fn=_cmd_eval_nat)

    p = sub.add_parser("check", parents=[common],
                       help="check an equation in a model or over nat")
    p.add_argument("--model", required=True,
                   help="B | Bminus | S7_0 | name:ops | @file | nat")
    p.add_argument("--eq", required=True)
    p.add_argument("--budget", type=int, default=10 ** 8)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("axioms", parents=[common],
                       help="run the identity suite against a model")
    p.add_argument("--model", default="nat")
    p.add_argument("--group")
    p.add_argument("--trials", type=int, default=20,
                   help="random spikes for the naturals oracle")
    p.set_defaults(fn=_cmd_axioms)

    for cmd, fn, extra in [
            ("girth", _cmd_girth, "the least cycle length, or infinity"),
            ("hom", _cmd_hom, "least colouring into the two-value "
                              "template, one marked vertex per edge"),
            ("robust", _cmd_robust,
             "do all two-vertex pins extend to colourings"),
            ("tau", _cmd_tau, "the edge-sum detection equation"),
            ("lemma2", _cmd_lemma2,
             "detection equation vs colouring existence"),
            ("lemma3", _cmd_lemma3,
             "rebuild the edge algebra inside a power and compare")]:
        p = sub.add_parser(cmd, parents=[common], help=extra)
        p.add_argument("hypergraph", help="corpus name or @file")
        if cmd == "hom":
            p.add_argument("--all", action="store_true")
        p.set_defaults(fn=fn)

    p = sub.add_parser("build-bh", parents=[common],
                       help="emit the edge algebra of a sparse hypergraph")
    p.add_argument("hypergraph")
    p.add_argument("--out", help="write to this file instead of stdout")
    p.set_defaults(fn=_cmd_build_bh)

    p = sub.add_parser("free-quotient", parents=[common],
                       help="decide derivability from the 13 rules by "
                            "truncated normal forms")
    p.add_argument("--eq", required=True)
    p.set_defaults(fn=_cmd_free_quotient)

    p = sub.add_parser("entail", parents=[common],
                       help="finite countermodel search for entailment")
    p.add_argument("--eq", required=True)
    p.add_argument("--sigma", help="file of premise equations, one per "
                                   "line, # comments")
    p.add_argument("--max-size", type=int, default=3)
    p.add_argument("--budget", type=int, default=10 ** 8)
    p.add_argument("--dump-model", action="store_true")
    p.set_defaults(fn=_cmd_entail)

    p = sub.add_parser("dominance", parents=[common],
                       help="compare eventual growth via ordinals")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--box", choices=("fact", "exp2"), default="fact")
    p.set_defaults(fn=_cmd_dominance)

    p = sub.add_parser("embed", parents=[common],
                       help="homeomorphic embedding of reduced terms")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.set_defaults(fn=_cmd_embed)

    p = sub.add_parser("sweep-prop1", parents=[common],
                       help="sample-agreeing term pairs vs the five-"
                            "element model")
    p.add_argument("--max-nodes", type=int, default=4)
    p.add_argument("--vars", type=int, default=1)
    p.add_argument("--points", type=int, default=4)
    p.add_argument("--seed", type=int, default=2025)
    p.set_defaults(fn=_cmd_sweep_prop1)

    return top


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    started = time.perf_counter()
    try:
        args = parser.parse_args(argv)
        code, lines, payload = args.fn(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (BudgetExceeded, EvalBudgetError, TruncationError) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return 2
    except (ParseError, SignatureError, ValueError, KeyError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    finally:
        elapsed = (time.perf_counter() - started) * 1000.0
        print(f"elapsed_ms={elapsed:.3f}", file=sys.stderr)
    if getattr(args, "json", False):
        payload = dict(payload)
        payload["exit"] = code
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    else:
        for line in lines:
            print(line)
    return code


if __name__ == "__main__":
    sys.exit(main())
