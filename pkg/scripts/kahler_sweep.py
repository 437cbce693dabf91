"""Induced generalized Kahler pairs on random subspaces of transported flat Kahler pairs.

Each sample moves the standard pair on R^4 by GL(V) and a B-field, draws a
subspace, and records which of the lemma conditions hold, whether the subspace
is admissible for both structures, and whether the induced pair is Kahler.

    python3 scripts/kahler_sweep.py --samples 300 --seed 1
"""

from __future__ import annotations

import argparse
import json
import random
from collections import Counter
from dataclasses import asdict, dataclass, fields

from gck.induction import LinearSubmanifold, theorem_main_verdict
from gck.kahler import commute_decomposition, induced_pair, lalg_conditions, metric_check, mixed_condition_trivial
from gck.sampling import random_kahler_pair, random_subspace


@dataclass
class Config:
    samples: int = 200
    seed: int = 0
    n: int = 4
    out: str = ""


def parse_config() -> Config:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in fields(Config):
        ap.add_argument(f"--{f.name}", type=type(f.default), default=f.default)
    return Config(**vars(ap.parse_args()))


def sweep(cfg: Config) -> dict:
    rng = random.Random(cfg.seed)
    outcome: Counter = Counter()
    problems = []
    for i in range(cfg.samples):
        J1, J2 = random_kahler_pair(rng, cfg.n)
        w = LinearSubmanifold(cfg.n, random_subspace(rng, cfg.n))
        conds = lalg_conditions(J1, J2, w)
        both = theorem_main_verdict(J1, w).admissible and theorem_main_verdict(J2, w).admissible
        if len(set(conds)) != 1 or conds[0] != both or not mixed_condition_trivial(J1, J2, w):
            problems.append({"sample": i, "conditions": list(conds), "admissible": both})
        if both:
            _, _, pair = induced_pair(J1, J2, w)
            commute, spans, split = commute_decomposition(pair.J1, pair.J2)
            kahler = commute and spans and metric_check(pair.J1, pair.J2).holds
            outcome[(w.k, "admissible", split.dims() if kahler else "not kahler")] += 1
        else:
            outcome[(w.k, "inadmissible", None)] += 1
    rows = [{"k": k, "status": s, "induced_dims": d, "count": c} for (k, s, d), c in sorted(outcome.items(), key=str)]
    return {"config": asdict(cfg), "rows": rows, "problems": problems}


def main() -> None:
    cfg = parse_config()
    res = sweep(cfg)
    for r in res["rows"]:
        dims = "" if r["induced_dims"] is None else f"  induced pieces {r['induced_dims']}"
        print(f"k={r['k']} {r['status']:>12}: {r['count']}{dims}")
    print(f"problems: {len(res['problems'])}")
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            json.dump(res, fh, indent=2, sort_keys=True, default=str)


if __name__ == "__main__":
    main()
