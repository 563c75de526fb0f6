"""Command-line interface: ``glp <command> ...``.

Exit codes: 0 yes / no countermodel, 1 no / countermodel found, 3 search
budget exhausted, 64 usage error, 65 bad input data (model or proof file).
"""
from __future__ import annotations

import argparse
import json
import os
import shlex
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import arith, engine, proofs, unify, worms
from .semantics import KripkeModel, ModelError, find_root, is_j_frame, truth_set
from .syntax import FormulaError, parse, parse_subst, to_str

EXIT_YES, EXIT_NO, EXIT_RESOURCE, EXIT_USAGE, EXIT_DATA = 0, 1, 3, 64, 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ------------------------------------------------------------------ helpers


def _cfg(args) -> engine.EngineConfig:
    return engine.EngineConfig(max_worlds=args.max_worlds, max_modality=args.modalities,
                               budget=args.budget)


def _formula(args, text: str):
    return parse(text, args.modalities)


def _verdict_json(v: engine.Verdict) -> dict:
    if v.is_invalid:
        return {"verdict": "invalid", "refuted_at": v.refuted_at,
                "countermodel": v.countermodel.to_json(), "nodes": v.nodes}
    return {"verdict": "no-countermodel", "cap": v.cap, "cap_reached": v.cap_reached,
            "nodes": v.nodes}


def _verdict_text(v: engine.Verdict) -> str:
    if v.is_invalid:
        m = v.countermodel
        return f"invalid: countermodel with {len(m.worlds)} worlds refutes it at {v.refuted_at}\n{m.dumps()}"
    note = "" if v.cap_reached else " (search closed below the cap)"
    return f"no countermodel with at most {v.cap} worlds{note}"


def _write_countermodel(path: str, v: engine.Verdict) -> None:
    if not v.is_invalid:
        return
    text = v.countermodel.to_dot(v.refuted_at) if path.endswith(".dot") else v.countermodel.dumps() + "\n"
    Path(path).write_text(text)


# ----------------------------------------------------------------- commands


def cmd_decide(args):
    f = _formula(args, args.formula)
    v = engine.decide(args.logic.upper(), f, _cfg(args))
    if args.countermodel:
        _write_countermodel(args.countermodel, v)
    out = {"formula": to_str(f), "logic": args.logic, **_verdict_json(v), "cap": args.max_worlds}
    return (EXIT_NO if v.is_invalid else EXIT_YES), out, _verdict_text(v)


def cmd_model_check(args):
    try:
        model = KripkeModel.loads(Path(args.model).read_text())
    except (OSError, ValueError) as e:
        return EXIT_DATA, {"error": str(e)}, f"error: {e}"
    report = is_j_frame(model)
    root = find_root(model)
    out = {"j_frame": report.ok, "violations": [{"condition": c, "witness": list(w)} for c, w in report.violations],
           "root": root}
    lines = [f"J-frame: {'yes' if report.ok else 'no'}", f"root: {root}"]
    lines += [f"  condition {c} fails at {', '.join(w)}" for c, w in report.violations]
    if not report.ok or root is None:
        return EXIT_DATA, out, "\n".join(lines)
    code = EXIT_YES
    if args.formula:
        f = _formula(args, args.formula)
        ts = truth_set(model, f)
        out.update(formula=to_str(f), true_at=sorted(ts), holds_at_root=root in ts)
        lines.append(f"{to_str(f)} holds at: {', '.join(sorted(ts)) or '(nowhere)'}")
        code = EXIT_YES if root in ts else EXIT_NO
    return code, out, "\n".join(lines)


def cmd_proof_check(args):
    try:
        pr = proofs.proof_from_json(Path(args.file).read_text())
    except (OSError, ValueError) as e:
        return EXIT_DATA, {"error": str(e)}, f"error: {e}"
    res = proofs.check_proof(pr)
    out = {"ok": res.ok, "lines": len(pr.lines), "conclusion": to_str(pr.lines[-1].formula) if pr.lines else None,
           "errors": [{"line": i, "message": m} for i, m in res.errors]}
    text = f"proof checks ({len(pr.lines)} lines)" if res.ok else str(res)
    return (EXIT_YES if res.ok else EXIT_NO), out, text


_REDUCERS = {"m": engine.m_formula, "mplus": engine.m_plus, "h": engine.h_formula, "r": engine.r_formula}


def cmd_reduce(args):
    if args.kind in _REDUCERS:
        if not args.formula:
            raise UsageError(f"reduce {args.kind} needs --formula")
        g = _REDUCERS[args.kind](_formula(args, args.formula))
    else:
        if args.k is None:
            raise UsageError(f"reduce {args.kind} needs --k")
        g = unify.QFamily(args.kind, args.k).formula()
    return EXIT_YES, {"kind": args.kind, "formula": to_str(g)}, to_str(g)


def cmd_unify_check(args):
    f = _formula(args, args.formula)
    sigma = parse_subst(args.subst, args.modalities)
    v = unify.is_unifier(sigma, f, args.logic.upper(), _cfg(args))
    out = {"formula": to_str(f), "substitution": str(sigma), "unifier": not v.is_invalid, **_verdict_json(v)}
    text = ("unifier (cap-bounded): " if not v.is_invalid else "not a unifier: ") + _verdict_text(v)
    return (EXIT_NO if v.is_invalid else EXIT_YES), out, text


def cmd_unify_search(args):
    f = _formula(args, args.formula)
    ans = unify.search_ground_unifier(f, args.size_bound, _cfg(args))
    if isinstance(ans, unify.Unifiable):
        out = {"answer": "unifiable", "witness": str(ans.witness),
               "bindings": {f"p{i}": to_str(g) for i, g in ans.witness.items()}}
        return EXIT_YES, out, f"unifiable: {ans.witness or 'identity'}"
    if isinstance(ans, unify.NotUnifiable):
        return EXIT_NO, {"answer": "not-unifiable", "reason": ans.reason}, f"not unifiable: {ans.reason}"
    return EXIT_RESOURCE, {"answer": "unknown", "reason": ans.bounds_exhausted}, f"unknown: {ans.bounds_exhausted}"


def cmd_qchain(args):
    fam = unify.QFamily(args.family, args.k)
    f = fam.formula()
    v = unify.is_unifier(fam.substitution(), parse("[1]p0"), "GLP", _cfg(args))
    out = {"family": args.family, "k": args.k, "formula": to_str(f), "unifies_box1": not v.is_invalid,
           **_verdict_json(v)}
    text = f"{to_str(f)}\nunifier of [1]p0: {'yes (cap-bounded)' if not v.is_invalid else 'no'}"
    return (EXIT_NO if v.is_invalid else EXIT_YES), out, text


def _arith_out(ans: arith.ArithAnswer, extra: dict) -> tuple[int, dict, str]:
    out = {**extra, "answer": "yes" if ans.yes else "no", **_verdict_json(ans.basis)}
    label = "yes" if ans.yes else "no"
    if ans.cap_bounded:
        label += " (cap-bounded)"
    return (EXIT_YES if ans.yes else EXIT_NO), out, label


def cmd_admissible(args):
    prem = tuple(_formula(args, s) for s in args.premises.split(";") if s.strip())
    rule = arith.InferenceRule(prem, _formula(args, args.conclusion))
    ans = arith.is_arith_admissible(rule, _cfg(args))
    return _arith_out(ans, {"rule": str(rule)})


def cmd_arith_unifiable(args):
    f = _formula(args, args.formula)
    ans = arith.arith_unifiable(f, _cfg(args), cross_check=args.cross_check)
    return _arith_out(ans, {"formula": to_str(f)})


def cmd_worm_normalize(args):
    f = _formula(args, args.formula)
    r = worms.normalize_dia0(f, args.bound, _cfg(args))
    if isinstance(r, worms.NormalFormUnknown):
        return EXIT_RESOURCE, {"answer": "unknown", "bound": r.bound}, f"unknown within length {r.bound}"
    shown = "F" if r.is_bottom else str(r.worm)
    return EXIT_YES, {"answer": "bottom" if r.is_bottom else "worm", "normal_form": shown}, f"<0>({to_str(f)}) = {shown}"


def cmd_batch(args):
    path = Path(args.file)
    try:
        lines = [l for l in path.read_text().splitlines() if l.strip() and not l.lstrip().startswith("#")]
    except OSError as e:
        return EXIT_DATA, {"error": str(e)}, f"error: {e}"

    def one(line: str):
        code, out, _ = run(shlex.split(line) + ["--json"] if "--json" not in line else shlex.split(line))
        return {"query": line, "exit": code, "result": out}

    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        results = list(pool.map(one, lines))
    code = max((r["exit"] for r in results), default=EXIT_YES)
    text = "\n".join(json.dumps(r) for r in results)
    return code, {"results": results}, text


# ------------------------------------------------------------------- parser


def _common(p: argparse.ArgumentParser) -> None:
    env = os.environ.get("GLP_MAX_WORLDS")
    try:
        default_cap = int(env) if env else 8
    except ValueError:
        default_cap = 8
    p.add_argument("--max-worlds", type=int, default=default_cap, help="countermodel size cap (env GLP_MAX_WORLDS)")
    p.add_argument("--modalities", type=int, default=4, help="number of modalities [0]..[n-1]")
    p.add_argument("--budget", type=int, default=2_000_000, help="search nodes per engine query")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="glp", description="Derivability, countermodels and unification for GLP and J.")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decide", help="decide derivability")
    p.add_argument("--logic", choices=["gl", "j", "glp", "glps"], default="glp")
    p.add_argument("--formula", required=True)
    p.add_argument("--countermodel", help="write a countermodel to this .json or .dot file")
    _common(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("model", help="model utilities")
    msub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = msub.add_parser("check", help="validate a model file and evaluate a formula")
    q.add_argument("model")
    q.add_argument("--formula")
    _common(q)
    q.set_defaults(func=cmd_model_check)

    p = sub.add_parser("proof", help="proof utilities")
    psub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = psub.add_parser("check", help="check a Hilbert proof file")
    q.add_argument("file")
    _common(q)
    q.set_defaults(func=cmd_proof_check)

    p = sub.add_parser("reduce", help="print a reduction formula or a Q-family member")
    p.add_argument("kind", choices=[*_REDUCERS, *unify.QKINDS])
    p.add_argument("--formula")
    p.add_argument("--k", type=int)
    _common(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("unify", help="unifiers")
    usub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = usub.add_parser("check", help="is a substitution a unifier")
    q.add_argument("--formula", required=True)
    q.add_argument("--subst", required=True)
    q.add_argument("--logic", choices=["gl", "j", "glp", "glps"], default="glp")
    _common(q)
    q.set_defaults(func=cmd_unify_check)
    q = usub.add_parser("search", help="search for a variable-free unifier")
    q.add_argument("--formula", required=True)
    q.add_argument("--size-bound", type=int, default=7)
    _common(q)
    q.set_defaults(func=cmd_unify_search)
    q = usub.add_parser("qchain", help="show a Q-family member and check it unifies [1]p0")
    q.add_argument("--family", choices=list(unify.QKINDS), required=True)
    q.add_argument("--k", type=int, required=True)
    _common(q)
    q.set_defaults(func=cmd_qchain)

    p = sub.add_parser("admissible", help="arithmetical admissibility of a rule")
    p.add_argument("--premises", required=True, help="';'-separated formulas")
    p.add_argument("--conclusion", required=True)
    _common(p)
    p.set_defaults(func=cmd_admissible)

    p = sub.add_parser("arith-unifiable", help="arithmetical unifiability")
    p.add_argument("--formula", required=True)
    p.add_argument("--cross-check", action="store_true", help="also run the GLPS test and require agreement")
    _common(p)
    p.set_defaults(func=cmd_arith_unifiable)

    p = sub.add_parser("worm", help="closed-fragment utilities")
    wsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = wsub.add_parser("normalize", help="write <0>f as F or a worm")
    q.add_argument("--formula", required=True)
    q.add_argument("--bound", type=int, default=6)
    _common(q)
    q.set_defaults(func=cmd_worm_normalize)

    p = sub.add_parser("batch", help="run one query per line of a file")
    p.add_argument("file")
    p.add_argument("--jobs", type=int, default=4)
    _common(p)
    p.set_defaults(func=cmd_batch)
    return top


def run(argv: list[str]) -> tuple[int, dict, str]:
    """Execute a command line; returns exit code, JSON payload and human text."""
    try:
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as e:  # --help
            return int(e.code or 0), {}, ""
        if args.max_worlds < 1 or args.modalities < 1:
            raise UsageError("--max-worlds and --modalities must be positive")
        return args.func(args)
    except UsageError as e:
        return EXIT_USAGE, {"error": f"usage: {e}"}, f"usage error: {e}"
    except (FormulaError, ValueError) as e:
        if isinstance(e, (ModelError, proofs.ProofError)):
            return EXIT_DATA, {"error": str(e)}, f"error: {e}"
        return EXIT_USAGE, {"error": str(e)}, f"usage error: {e}"
    except engine.ResourceLimitExceeded as e:
        return EXIT_RESOURCE, {"error": f"resource limit: {e}"}, f"resource limit: {e}"


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    code, out, text = run(argv)
    as_json = "--json" in argv
    stream = sys.stdout if code in (EXIT_YES, EXIT_NO) or as_json else sys.stderr
    if text or out:
        print(json.dumps(out) if as_json else text, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
