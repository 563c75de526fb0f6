"""Compare choices of n in the unifiability test <n>T -> ~[0]f against the
GLPS test (GLPS does not prove ~[0]f).

n = (largest modality in f) + 1 matches the GLPS test on every formula;
n = (largest modality in f) does not.
"""
from __future__ import annotations

import argparse

from glp.arith import arith_unifiable, arith_unifiable_glps
from glp.corpus import CorpusConfig, formula_corpus
from glp.syntax import max_modality, to_str


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    corpus = formula_corpus(CorpusConfig(size=args.size, depth=3, seed=args.seed))
    off_lang = off_top = 0
    for f in corpus:
        top = max_modality(f)
        glps = arith_unifiable_glps(f).yes
        lang = arith_unifiable(f).yes
        low = arith_unifiable(f, n=0 if top is None else top).yes
        off_lang += lang != glps
        if low != glps:
            off_top += 1
            print(f"  n = max modality disagrees: {to_str(f)}  (GLPS test: {'yes' if glps else 'no'})")
    print(f"{len(corpus)} formulas")
    print(f"n = max modality + 1: {off_lang} disagreements")
    print(f"n = max modality:     {off_top} disagreements")


if __name__ == "__main__":
    main()
