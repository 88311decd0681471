#!/usr/bin/env python3
"""Measure the forest algorithm against the copy-count oracle.

Random pair instances, three costs per trial: the forest algorithm with
its 9x charge bound, the one-pair-at-a-time baseline, and (for small
edge counts) the exact optimum over copy vectors.  Aggregate ratios go
in trailing comment lines, matching the CLI report convention.

Deterministic for a fixed --seed.  CSV to stdout or --out.
"""

import argparse
import csv
import io
import sys
from dataclasses import dataclass
from fractions import Fraction

from capnet.multicopy import baseline_independent_pairs, run
from capnet.oracle import MULTICOPY_EDGE_LIMIT, exact_optimum_multicopy, gen_random
from capnet.util import derive_seed, format_rational

COLUMNS = (
    "trial", "n", "m", "pairs", "forest_cost", "ell_total", "charge_bound",
    "baseline_cost", "oracle_cost", "ratio_oracle", "ratio_baseline",
)


@dataclass(frozen=True)
class RatioConfig:
    trials: int = 40
    n: int = 7
    m: int = 11
    pairs: int = 3
    demand_cap: int = 3
    seed: int = 2024
    oracle: bool = True


def sweep(config):
    rows, oracle_ratios = [], []
    for t in range(config.trials):
        instance = gen_random(
            "pairs", config.n, config.m, derive_seed(config.seed, t),
            pairs=config.pairs, demand_cap=config.demand_cap,
        )
        solution = run(instance)
        baseline = baseline_independent_pairs(instance)
        row = {
            "trial": t,
            "n": instance.n,
            "m": instance.m,
            "pairs": len(instance.requirements.pairs),
            "forest_cost": format_rational(solution.cost),
            "ell_total": format_rational(solution.ell_total),
            "charge_bound": format_rational(solution.charge_bound),
            "baseline_cost": format_rational(baseline.cost),
            "oracle_cost": "",
            "ratio_oracle": "",
            "ratio_baseline": (
                format_rational(Fraction(solution.cost) / baseline.cost)
                if baseline.cost else ""
            ),
        }
        if config.oracle and instance.m <= MULTICOPY_EDGE_LIMIT:
            best = exact_optimum_multicopy(instance)
            row["oracle_cost"] = format_rational(best.cost)
            if best.cost:
                ratio = Fraction(solution.cost) / best.cost
                row["ratio_oracle"] = format_rational(ratio)
                oracle_ratios.append(ratio)
        rows.append(row)
    return rows, oracle_ratios


def render(rows, oracle_ratios):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    if oracle_ratios:
        mean = sum(oracle_ratios, Fraction(0)) / len(oracle_ratios)
        buf.write(f"# aggregate mean_ratio={format_rational(mean)}\n")
        buf.write(f"# aggregate max_ratio={format_rational(max(oracle_ratios))}\n")
    return buf.getvalue()


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=RatioConfig.trials)
    parser.add_argument("--n", type=int, default=RatioConfig.n)
    parser.add_argument("--m", type=int, default=RatioConfig.m)
    parser.add_argument("--pairs", type=int, default=RatioConfig.pairs)
    parser.add_argument("--demand-cap", type=int, default=RatioConfig.demand_cap)
    parser.add_argument("--seed", type=int, default=RatioConfig.seed)
    parser.add_argument("--no-oracle", action="store_true")
    parser.add_argument("--out", default=None)
    args = parser.parse_args(argv)
    config = RatioConfig(
        trials=args.trials, n=args.n, m=args.m, pairs=args.pairs,
        demand_cap=args.demand_cap, seed=args.seed, oracle=not args.no_oracle,
    )
    text = render(*sweep(config))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
