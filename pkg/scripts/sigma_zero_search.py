"""Search holomorphic Poisson structures for complex submanifolds and compare sigma' = 0 tests.

For every admissible sample the direct computation is compared with the closed-form
criterion and with the shorter printed variant; divergences of the latter are
listed with their dimensions.

    python3 scripts/sigma_zero_search.py --samples 500
"""

from __future__ import annotations

import argparse
import json
import random
from collections import Counter
from dataclasses import asdict, dataclass, fields

from gck.gcs import split
from gck.induction import LinearSubmanifold, hol_poisson_sigma_zero, theorem_main_verdict
from gck.linalg import Subspace, matvec
from gck.sampling import random_complex, random_holomorphic_poisson


@dataclass
class Config:
    samples: int = 400
    seed: int = 0
    complex_share: float = 0.2  # fraction of samples with pi = 0
    out: str = ""


def parse_config() -> Config:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in fields(Config):
        ap.add_argument(f"--{f.name}", type=type(f.default), default=f.default)
    return Config(**vars(ap.parse_args()))


def complex_subspace(rng: random.Random, n: int, phi) -> LinearSubmanifold:
    vs = []
    for _ in range(rng.randint(1, n // 2)):
        v = [rng.randint(-2, 2) for _ in range(n)]
        vs += [v, matvec(phi, v)]
    return LinearSubmanifold(n, Subspace.span(vs, n))


def search(cfg: Config) -> dict:
    rng = random.Random(cfg.seed)
    seen: Counter = Counter()
    mismatches = []
    divergent: Counter = Counter()
    for i in range(cfg.samples):
        n = rng.choice([4, 6])
        pi_zero = rng.random() < cfg.complex_share
        J = random_complex(rng, n) if pi_zero else random_holomorphic_poisson(rng, n)
        w = complex_subspace(rng, n, [list(r) for r in split(J).phi])
        if not theorem_main_verdict(J, w).admissible:
            seen["inadmissible"] += 1
            continue
        r = hol_poisson_sigma_zero(J, w)
        seen["admissible"] += 1
        if not r.direct == r.criterion125 == r.criterion_sum:
            mismatches.append({"sample": i, "n": n, "k": w.k, "direct": r.direct, "closed_form": r.criterion125})
        if r.diverges_123:
            divergent[(n, w.k, pi_zero)] += 1
    return {
        "config": asdict(cfg),
        "counts": dict(seen),
        "mismatches": mismatches,
        "printed_variant_divergences": [
            {"n": n, "k": k, "pi_zero": z, "count": c} for (n, k, z), c in sorted(divergent.items())
        ],
    }


def main() -> None:
    cfg = parse_config()
    res = search(cfg)
    print(f"samples: {res['counts']}")
    print(f"direct vs closed form mismatches: {len(res['mismatches'])}")
    print("printed variant diverges on:")
    for row in res["printed_variant_divergences"]:
        print(f"  n={row['n']} k={row['k']} pi_zero={row['pi_zero']}: {row['count']}")
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            json.dump(res, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
