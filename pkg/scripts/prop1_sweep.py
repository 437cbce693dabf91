"""Sweep random (J, w) pairs and tabulate how often each induction condition holds.

Also confirms that the four conditions agree and that both constructions of the
induced structure coincide on every admissible pair.

    python3 scripts/prop1_sweep.py --samples 2000 --seed 3
"""

from __future__ import annotations

import argparse
import json
import random
import time
from collections import Counter
from dataclasses import asdict, dataclass, fields

from gck.induction import LinearSubmanifold, prop1_conditions, theorem_main_verdict
from gck.sampling import random_gcs, random_subspace


@dataclass
class Config:
    samples: int = 1000
    seed: int = 0
    dims: str = "2,4,6"
    out: str = ""


def parse_config() -> Config:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in fields(Config):
        ap.add_argument(f"--{f.name}", type=type(f.default), default=f.default)
    return Config(**vars(ap.parse_args()))


def sweep(cfg: Config) -> dict:
    rng = random.Random(cfg.seed)
    dims = [int(d) for d in cfg.dims.split(",")]
    table: Counter = Counter()
    disagreements = []
    paths_bad = 0
    start = time.perf_counter()
    for i in range(cfg.samples):
        n = dims[i % len(dims)]
        J = random_gcs(rng, n)
        w = LinearSubmanifold(n, random_subspace(rng, n))
        c = prop1_conditions(J, w)
        table[(n, w.k, c.values[0])] += 1
        if not c.agree:
            disagreements.append({"sample": i, "values": list(c.values)})
        if c.values[0]:
            paths_bad += not theorem_main_verdict(J, w).paths_agree
    rows = [
        {"n": n, "k": k, "holds": holds, "count": count}
        for (n, k, holds), count in sorted(table.items())
    ]
    return {
        "config": asdict(cfg),
        "rows": rows,
        "disagreements": disagreements,
        "path_mismatches": paths_bad,
        "seconds": round(time.perf_counter() - start, 2),
    }


def main() -> None:
    cfg = parse_config()
    res = sweep(cfg)
    print(f"{'n':>3} {'k':>3} {'holds':>6} {'count':>6}")
    for r in res["rows"]:
        print(f"{r['n']:>3} {r['k']:>3} {str(r['holds']):>6} {r['count']:>6}")
    print(f"disagreements: {len(res['disagreements'])}, path mismatches: {res['path_mismatches']}, {res['seconds']}s")
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            json.dump(res, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
