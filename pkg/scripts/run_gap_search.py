"""Search the complete binary OR-AND tree of height 3 for distributions where
no depth-first algorithm is optimal, and report how common they are.

    python scripts/run_gap_search.py --trials 2000 --seed 1 --out gaps/
"""
import argparse
import os
from collections import Counter
from dataclasses import dataclass
from typing import Optional

from andortree.experiments import gap_search
from andortree.treefile import format_decision_tree, format_tree


@dataclass(frozen=True)
class GapConfig:
    trials: int = 2000
    seed: int = 1
    denom: int = 16
    out: Optional[str] = None


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=GapConfig.trials)
    ap.add_argument("--seed", type=int, default=GapConfig.seed)
    ap.add_argument("--denom", type=int, default=GapConfig.denom)
    ap.add_argument("--out")
    cfg = GapConfig(**vars(ap.parse_args()))

    report = gap_search(cfg.trials, cfg.seed, denom=cfg.denom)
    n = len(report.witnesses)
    print(f"trials: {report.trials_run}")
    print(f"witnesses: {n} ({100 * n / max(report.trials_run, 1):.1f}%)")
    print(f"unconfirmed: {len(report.unconfirmed)}")
    if not n:
        return 1

    gaps = sorted(w.gap for w in report.witnesses)
    print(f"gap min/median/max: {float(gaps[0]):.5f} / {float(gaps[n // 2]):.5f} / {float(gaps[-1]):.5f}")
    first = Counter(len(w.first_probes) for w in report.witnesses)
    print("optimal first probes per witness: " + ", ".join(f"{k}:{v}" for k, v in sorted(first.items())))

    best = max(report.witnesses, key=lambda w: w.gap)
    print("largest gap:")
    print(f"  tree: {format_tree(best.dist)}")
    print(f"  optimal: {best.optimal.cost}  depth-first: {best.depth_first.cost}  gap: {best.gap}")

    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        for k, w in enumerate(report.witnesses):
            base = os.path.join(cfg.out, f"witness-{k}")
            with open(base + ".tree", "w") as fh:
                fh.write(format_tree(w.dist) + "\n")
            with open(base + ".optimal.dt", "w") as fh:
                fh.write(format_decision_tree(w.optimal.strategy) + "\n")
        print(f"wrote {n} witnesses to {cfg.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
