"""Time the countermodel search over a random corpus at several caps."""
from __future__ import annotations

import argparse
import statistics
import time
from dataclasses import dataclass

from glp.corpus import CorpusConfig, formula_corpus
from glp.engine import EngineConfig, decide_glp


@dataclass(frozen=True)
class BenchConfig:
    corpus: CorpusConfig = CorpusConfig(size=200, depth=4, seed=0)
    caps: tuple[int, ...] = (2, 4, 6, 8)


def run(cfg: BenchConfig) -> None:
    formulas = formula_corpus(cfg.corpus)
    print(f"{len(formulas)} formulas, depth <= {cfg.corpus.depth}, {cfg.corpus.n_modalities} modalities")
    print(f"{'cap':>4} {'invalid':>8} {'mean ms':>9} {'max ms':>8} {'max nodes':>10}")
    for cap in cfg.caps:
        engine = EngineConfig(max_worlds=cap)
        times, nodes, invalid = [], [], 0
        for f in formulas:
            t = time.perf_counter()
            v = decide_glp(f, engine)
            times.append(1000 * (time.perf_counter() - t))
            nodes.append(v.nodes)
            invalid += v.is_invalid
        print(f"{cap:4d} {invalid:8d} {statistics.mean(times):9.2f} {max(times):8.1f} {max(nodes):10d}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=200)
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--caps", type=int, nargs="+", default=[2, 4, 6, 8])
    args = ap.parse_args()
    run(BenchConfig(CorpusConfig(size=args.size, depth=args.depth, seed=args.seed), tuple(args.caps)))


if __name__ == "__main__":
    main()
