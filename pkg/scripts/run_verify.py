"""Random check that SOLVE_d matches both optima on height-2 instances.

    python scripts/run_verify.py --trials 1000 --seed 42
"""
import argparse
from dataclasses import dataclass

from andortree.experiments import InstanceBounds, verify_theorem


@dataclass(frozen=True)
class VerifyConfig:
    trials: int = 1000
    seed: int = 42
    max_leaves: int = 10
    denom: int = 16


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=VerifyConfig.trials)
    ap.add_argument("--seed", type=int, default=VerifyConfig.seed)
    ap.add_argument("--max-leaves", type=int, default=VerifyConfig.max_leaves)
    ap.add_argument("--denom", type=int, default=VerifyConfig.denom)
    cfg = VerifyConfig(**vars(ap.parse_args()))

    report = verify_theorem(cfg.trials, cfg.seed, InstanceBounds(max_leaves=cfg.max_leaves, denom=cfg.denom))
    print(report.format(), end="")
    print(f"elapsed: {report.elapsed:.2f}s")
    for f in report.failures[:5]:
        print(f)
    return 0 if report.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
