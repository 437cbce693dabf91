"""Family verdicts: pointwise verdicts conjoined with a smoothness policy.

A submanifold is given by a polynomial (or rational) map ``h`` from a patch
with coordinates u1..uk into the ambient patch. "Smooth" means

* the rank of ``TN + pi#(TN°)`` is the same at every sample point, and
* the induced structure solved symbolically over Q(u1..uk) has no pole at
  any sample point.

When both hold the symbolic J' is compared with the pointwise J' at every
sample, and optionally tested for integrability against ``h^* Omega``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .courant import FieldGCS, IntegrabilityReport, StandardCourantModel, integrability
from .forms import FormField, jacobian, pullback
from .gcs import GCStructure, split, validate_gcs
from .induction import (
    ConditionsFailed,
    InducedStructure,
    LinearSubmanifold,
    NoWitness,
    Verdict,
    induced_via_formulas,
    theorem_main_verdict,
)
from .linalg import annihilator, apply, rank, transpose
from .ratfun import PoleError, compose, evaluate, lift

__all__ = ["FamilyVerdict", "family_verdict", "NotSmooth"]


class NotSmooth(ValueError):
    pass


@dataclass
class FamilyVerdict:
    admissible: bool
    conditions: dict
    pointwise: list = field(default_factory=list)  # (u, Verdict)
    ranks: list = field(default_factory=list)
    symbolic: InducedStructure | None = None
    poles: list = field(default_factory=list)
    agrees_with_pointwise: bool | None = None
    integrability: IntegrabilityReport | None = None
    notes: list = field(default_factory=list)


def _pulled_model(images, omega: FormField | None, k: int) -> StandardCourantModel:
    if omega is None or omega.is_zero() or k < 3:
        return StandardCourantModel.untwisted(k)
    return StandardCourantModel(k, pullback(images, omega, k))


def family_verdict(
    J: FieldGCS,
    images: Sequence,
    k: int,
    samples: Sequence[Sequence],
    omega: FormField | None = None,
    check_integrability: bool = True,
) -> FamilyVerdict:
    if not samples:
        raise ValueError("need at least one sample point")
    n = J.n
    images = [lift(k, c) for c in images]
    if len(images) != n:
        raise ValueError(f"the embedding needs {n} components")
    jac = jacobian(images, k)
    notes = []

    pointwise: list[tuple[tuple, Verdict]] = []
    ranks = []
    pd_all = phi_all = True
    for u in samples:
        u = tuple(u)
        p = [evaluate(c, u) for c in images]
        Jp = J.at(p)
        frame = [[evaluate(jac[i][a], u) for i in range(n)] for a in range(k)]
        if rank(frame) != k:
            raise NotSmooth(f"h is not an immersion at u = {tuple(str(x) for x in u)}")
        sub = LinearSubmanifold.from_frame(frame, n)
        v = theorem_main_verdict(Jp, sub)
        pointwise.append((u, v))
        pd_all &= v.conditions["poisson_dirac"]
        phi_all &= v.conditions["phi_range"]
        pi = [list(r) for r in split(Jp).pi_sharp]
        ranks.append((sub.w + apply(pi, annihilator(sub.w))).dim)

    constant_rank = len(set(ranks)) == 1
    if not constant_rank:
        notes.append(f"rank of TN + pi#(TN°) varies over samples: {ranks}")

    symbolic = None
    poles = []
    if pd_all and phi_all:
        Jh = validate_gcs([[compose(x, images, k) for x in r] for r in J.structure.J])
        sub_sym = LinearSubmanifold.from_frame(transpose(jac), n)
        try:
            symbolic = induced_via_formulas(Jh, sub_sym)
        except (ConditionsFailed, NoWitness) as exc:
            notes.append(f"no symbolic solution: {exc}")
        if symbolic is not None:
            entries = [x for r in symbolic.J_prime.J for x in r]
            for u, _ in pointwise:
                try:
                    for x in entries:
                        evaluate(x, u)
                except PoleError as exc:
                    poles.append(u)
                    notes.append(str(exc))

    smooth = constant_rank and symbolic is not None and not poles
    conditions = {"poisson_dirac": pd_all, "phi_range": phi_all, "smooth": smooth}
    out = FamilyVerdict(all(conditions.values()), conditions, pointwise, ranks, symbolic, poles, notes=notes)
    if out.admissible:
        out.agrees_with_pointwise = all(
            _evaluated(symbolic.J_prime, u) == v.induced.J_prime for u, v in pointwise
        )
        if check_integrability:
            Jn = FieldGCS(k, symbolic.J_prime)
            out.integrability = integrability(Jn, _pulled_model(images, omega, k))
    return out


def _evaluated(J: GCStructure, u) -> GCStructure:
    return validate_gcs([[evaluate(x, u) for x in r] for r in J.J])
