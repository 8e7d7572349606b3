"""Tabulate cost(A) - cost(B) against 1 - p_Y on random scenarios.

A probes a multi-leaf gate out of SOLVE_d order; B is the same probes with
that leaf moved after Y.
"""
import argparse

from andortree.experiments import case_cost_identity, random_case_scenarios
from andortree.tree import format_path


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=3)
    args = ap.parse_args()

    print(f"{'probe':>6} {'|Y|':>4} {'cost(A)':>20} {'cost(B)':>20} {'A-B':>10} {'1-p_Y':>10}  ok")
    bad = 0
    for scn in random_case_scenarios(args.count, args.seed):
        r = case_cost_identity(scn)
        bad += not r.holds
        print(
            f"{format_path(scn.probe):>6} {len(scn.y):>4} {str(r.cost_a):>20} {str(r.cost_b):>20} "
            f"{str(r.difference):>10} {str(1 - r.p_y):>10}  {'yes' if r.holds else 'NO'}"
        )
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
