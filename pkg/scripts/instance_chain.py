"""Run the finite chain of GLP instances behind the [1]p unification results.

Prints one row per query with its verdict, certificate size and time.
"""
from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from glp.engine import EngineConfig, decide_glp, deduces
from glp.proofs import box_refl_chain_proof, check_proof, reflection_under_box_proof, q_k
from glp.syntax import BOT, Box, Iff, Implies, Var, dia_power, parse, to_str
from glp.unify import q_big, q_chain_witness


@dataclass(frozen=True)
class ChainConfig:
    max_k: int = 3
    max_worlds: int = 8


def rows(cfg: ChainConfig):
    p = Var(0)
    yield "[1]([0]q -> q)", parse("[1]([0]p1 -> p1)"), True
    for k in range(1, cfg.max_k + 1):
        yield f"[1]<0>^{k}T", Box(1, dia_power(0, k)), True
        yield f"[1]Q^{k}", Box(1, q_big(k)), True
        yield f"[1](Q_{k} -> p)", Box(1, Implies(q_k(k), p)), True
    for n in range(1, cfg.max_k):
        yield f"Q^{n} <-> (Q_{n + 1} -> p)", Iff(q_big(n), Implies(q_k(n + 1), p)), True
    for psi in (p, BOT, parse("[0]p0"), parse("<0>T")):
        yield f"([0]psi -> psi) -> <0><0>T, psi = {to_str(psi)}", Implies(Implies(Box(0, psi), psi), dia_power(0, 2)), False
    yield "[1][0]F", parse("[1][0]F"), False


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-k", type=int, default=3)
    ap.add_argument("--max-worlds", type=int, default=8)
    args = ap.parse_args()
    cfg = ChainConfig(args.max_k, args.max_worlds)
    engine = EngineConfig(max_worlds=cfg.max_worlds)

    print(f"{'query':48} {'expect':>9} {'verdict':>15} {'worlds':>6} {'ms':>8}")
    bad = 0
    for name, f, provable in rows(cfg):
        t = time.perf_counter()
        v = decide_glp(f, engine)
        ms = 1000 * (time.perf_counter() - t)
        got = "no-cmodel" if not v.is_invalid else "invalid"
        size = len(v.countermodel.worlds) if v.is_invalid else "-"
        bad += (not v.is_invalid) != provable
        print(f"{name:48} {'theorem' if provable else 'refuted':>9} {got:>15} {size:>6} {ms:8.1f}")

    prem = parse("([0]p1 -> p1) -> p0")
    print("deduction Q^1(p) <-> p from ([0]q -> q) -> p in GL:",
          "no countermodel" if deduces([prem], Iff(q_big(1), Var(0)), "GL", engine) else "refuted")
    for i in range(1, cfg.max_k):
        _, v = q_chain_witness(i, i + 1, engine)
        print(f"Q^{i} <= Q^{i + 1}: witness p -> Q^{i}(p) verified ({v.nodes} nodes)")
    proofs = [reflection_under_box_proof(1)] + [box_refl_chain_proof(k) for k in range(1, cfg.max_k + 1)]
    for pr in proofs:
        print(f"proof of {to_str(pr.conclusion)}: {len(pr.lines)} lines, {check_proof(pr)}")
    print("mismatches:", bad)


if __name__ == "__main__":
    main()
