"""Command-line surface: ``gck <command> --scenario FILE``.

Every command produces a report with a list of checks. A check is either a
``query`` (the answer is information, e.g. whether a submanifold is
admissible) or an ``assert`` (an identity that must hold; failing it means a
bug). Exit codes: 0 when every assert passes, 1 when one fails, 2 on input
errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from .courant import (
    FieldGCS,
    StandardCourantModel,
    axioms_check,
    characteristic_checks,
    hamiltonian,
    integrability,
    jacobi_check,
    poisson_bracket,
)
from .dirac import DiracStructure, is_maximal_isotropic, pull_back
from .forms import Section
from .gcs import eigenbundles, split, square_identities, validate_gcs
from .induction import (
    NotCompatible,
    NotInvolution,
    PreconditionError,
    induced_via_quotient,
    involution_check,
    hol_poisson_sigma_zero,
    prop1_conditions,
    theorem_main_verdict,
)
from .kahler import (
    NotAdmissible,
    commute_decomposition,
    directness_check,
    induced_pair,
    lalg_conditions,
    metric_check,
)
from .linalg import intersect
from .manifold import NotSmooth, family_verdict
from .ratfun import PoleError, coords, evaluate, lift
from .scenario import Scenario, ScenarioError, load_scenario
from .serialize import dump_matrix, dump_scalar, dump_spinor, dump_splitting, dump_subspace
from .spinor import (
    NotPure,
    is_pure,
    mukai,
    null_space,
    projectively_equal,
    spinor_from_dirac,
    spinor_submanifold_check,
    transverse_by_intersection,
    transverse_test,
)

__all__ = ["main", "run", "Report", "InputError", "COMMANDS"]


class InputError(ValueError):
    """The scenario does not carry what the command needs."""


@dataclass
class Report:
    command: str
    scenario: Scenario
    seed: int
    result: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    def check(self, name: str, role: str, ok: bool, witness: Any = None) -> bool:
        entry = {"name": name, "role": role, "pass": bool(ok)}
        if witness is not None and not ok:
            entry["witness"] = witness
        self.checks.append(entry)
        return bool(ok)

    @property
    def failed(self) -> bool:
        return any(c["role"] == "assert" and not c["pass"] for c in self.checks)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "scenario": {"name": self.scenario.name, "kind": self.scenario.kind, "n": self.scenario.n},
            "seed": self.seed,
            "status": "fail" if self.failed else "pass",
            "checks": self.checks,
            "result": self.result,
        }


# ---------------------------------------------------------------------------
# serialization helpers


def _vec(v) -> list:
    return [dump_scalar(x) for x in v]


def _section(s: Section) -> dict:
    return {"x": _vec(s.x), "xi": _vec(s.xi)}


def _induced(ind) -> dict:
    return {
        "J_prime": dump_matrix(ind.J_prime.J),
        "phi": dump_matrix(ind.phi_prime),
        "pi_sharp": dump_matrix(ind.pi_prime),
        "sigma_flat": dump_matrix(ind.sigma_prime),
    }


def _verdict(v) -> dict:
    out = {"admissible": v.admissible, "conditions": dict(v.conditions)}
    if v.failure_witness is not None:
        out["failure_witness"] = _vec(v.failure_witness)
    if v.induced is not None:
        out["induced"] = _induced(v.induced)
    return out


# ---------------------------------------------------------------------------
# scenario accessors


def _pointwise(sc: Scenario, what: str = "structure"):
    s = getattr(sc, what)
    if s is None:
        raise InputError(f"scenario has no {what.replace('_', ' ')}")
    if isinstance(s, FieldGCS):
        raise InputError("this command needs kind = 'pointwise'")
    return s


def _sub(sc: Scenario):
    if sc.submanifold is None:
        raise InputError("scenario has no linear submanifold (submanifold.basis)")
    return sc.submanifold


# ---------------------------------------------------------------------------
# commands


def cmd_validate(rep: Report) -> None:
    sc = rep.scenario
    if sc.structure is None:
        raise InputError("scenario has no structure")
    if sc.field_kind:
        J = sc.structure
        rep.result["J"] = dump_matrix(J.matrix)
        rep.result["constant"] = J.is_constant()
        for i, p in enumerate(sc.sample_points):
            try:
                J.at([evaluate(c, p) for c in sc.embedding] if sc.embedding is not None else p)
                rep.check(f"valid at sample {i + 1}", "assert", True)
            except PoleError as exc:
                rep.check(f"valid at sample {i + 1}", "query", False, str(exc))
        return
    J = sc.structure
    rep.result["J"] = dump_matrix(J.J)
    ids = square_identities(split(J))
    rep.check("square identities", "assert", ids.all_hold)


def cmd_split(rep: Report) -> None:
    sc = rep.scenario
    if sc.structure is None:
        raise InputError("scenario has no structure")
    J = sc.structure.structure if sc.field_kind else sc.structure
    s = split(J)
    rep.result["splitting"] = dump_splitting(s)
    ids = square_identities(s)
    rep.check("phi^2 + pi sigma = -1", "assert", ids.phi_squared, dump_matrix(ids.residuals["phi_squared"]))
    rep.check("phi pi = pi phi^T", "assert", ids.phi_pi, dump_matrix(ids.residuals["phi_pi"]))
    rep.check("phi^T sigma = sigma phi", "assert", ids.phi_sigma, dump_matrix(ids.residuals["phi_sigma"]))
    rep.check("reassembles to J", "assert", s.assemble() == J.matrix)


def cmd_eigenbundles(rep: Report) -> None:
    J = _pointwise(rep.scenario)
    Lp, Lm = eigenbundles(J)
    rep.result["L_plus"] = dump_subspace(Lp.space)
    rep.result["L_minus"] = dump_subspace(Lm.space)
    rep.check("L+ maximal isotropic", "assert", is_maximal_isotropic(Lp.space))
    rep.check("L- is the conjugate of L+", "assert", Lm.space == Lp.space.conjugate())
    rep.check("L+ and L- meet trivially", "assert", intersect(Lp.space, Lm.space).is_zero())
    ch = characteristic_checks(J)
    rep.result["characteristic"] = dump_subspace(ch.pi_image)
    rep.check("characteristic descriptions agree", "assert", ch.pi_image == ch.rho_j_ker == ch.eigen_intersection)
    rep.check("Poisson block formula", "assert", ch.pi_formula)
    rep.check("bialgebroid bivector", "assert", ch.bialgebroid)


def _family(rep: Report):
    sc = rep.scenario
    if sc.embedding is None:
        raise InputError("field scenarios need a submanifold")
    if not sc.sample_points:
        raise InputError("field scenarios need sample_points")
    try:
        fv = family_verdict(sc.structure, sc.embedding, sc.embedding_dim, sc.sample_points, sc.twist)
    except NotSmooth as exc:
        raise InputError(str(exc)) from None
    except (PoleError, ValueError) as exc:
        raise InputError(str(exc)) from None
    rep.result["admissible"] = fv.admissible
    rep.result["conditions"] = dict(fv.conditions)
    rep.result["ranks"] = fv.ranks
    rep.result["notes"] = list(fv.notes)
    rep.result["samples"] = [
        {"u": _vec(u), **_verdict(v)} for u, v in fv.pointwise
    ]
    rep.check("admissible", "query", fv.admissible)
    if fv.symbolic is not None:
        rep.result["induced"] = _induced(fv.symbolic)
    if fv.admissible:
        rep.check("symbolic J' matches pointwise J'", "assert", fv.agrees_with_pointwise)
        if fv.integrability is not None:
            ig = fv.integrability
            rep.result["induced_integrable"] = ig.integrable
            witness = None
            if ig.counterexample:
                witness = {"pair": list(ig.counterexample[:2]), "defect": _section(ig.counterexample[2])}
            ambient = integrability(sc.structure, sc.model()).integrable
            rep.check("induced structure integrable", "assert" if ambient else "query", ig.integrable, witness)
    return fv


def cmd_verdict(rep: Report) -> None:
    sc = rep.scenario
    if sc.field_kind:
        _family(rep)
        return
    J, sub = _pointwise(sc), _sub(sc)
    v = theorem_main_verdict(J, sub)
    rep.result.update(_verdict(v))
    rep.check("admissible", "query", v.admissible, _vec(v.failure_witness) if v.failure_witness else None)
    conds = prop1_conditions(J, sub)
    rep.result["induction_conditions"] = list(conds.values)
    rep.check("induction conditions agree", "assert", conds.agree)
    rep.check("induction conditions match verdict", "assert", conds.values[0] == v.admissible)
    if v.admissible:
        rep.check("quotient and formula paths agree", "assert", v.paths_agree)


def cmd_induce(rep: Report) -> None:
    sc = rep.scenario
    if sc.field_kind:
        _family(rep)
        return
    J, sub = _pointwise(sc), _sub(sc)
    v = theorem_main_verdict(J, sub)
    rep.result.update(_verdict(v))
    rep.check("admissible", "query", v.admissible, _vec(v.failure_witness) if v.failure_witness else None)
    if v.admissible:
        q = induced_via_quotient(J, sub)
        rep.result["via_quotient"] = _induced(q)
        rep.check("quotient and formula paths agree", "assert", q.J_prime == v.induced.J_prime)
        try:
            validate_gcs(v.induced.J_prime.J)
            ok = True
        except ValueError:
            ok = False
        rep.check("induced J' is generalized complex", "assert", ok)


def cmd_involution(rep: Report) -> None:
    sc = rep.scenario
    J = _pointwise(sc)
    if sc.involution is None:
        raise InputError("scenario has no involution")
    try:
        v = involution_check(sc.involution, J)
    except NotInvolution as exc:
        raise InputError(str(exc)) from None
    except NotCompatible as exc:
        rep.result["compatible"] = False
        rep.check("involution compatible with J", "query", False, str(exc))
        return
    rep.result["compatible"] = True
    rep.result["fixed_locus"] = dump_subspace(v.submanifold.w)
    rep.result.update(_verdict(v))
    rep.check("involution compatible with J", "query", True)
    rep.check("fixed locus admissible", "assert", v.admissible, _vec(v.failure_witness) if v.failure_witness else None)


def cmd_sigma_zero(rep: Report) -> None:
    sc = rep.scenario
    J, sub = _pointwise(sc), _sub(sc)
    try:
        r = hol_poisson_sigma_zero(J, sub)
    except PreconditionError as exc:
        raise InputError(str(exc)) from None
    rep.result.update(
        direct=r.direct,
        criterion_125=r.criterion125,
        criterion_sum=r.criterion_sum,
        criterion_123=r.criterion123,
        diverges_from_123=r.diverges_123,
    )
    rep.check("sigma' = 0", "query", r.direct)
    rep.check("closed-form criterion agrees with direct", "assert", r.direct == r.criterion125)
    rep.check("intermediate criterion agrees with direct", "assert", r.direct == r.criterion_sum)
    rep.check("printed simplification agrees with direct", "query", not r.diverges_123)


def _field(sc: Scenario, which: str = "structure") -> FieldGCS:
    try:
        return sc.field_structure(which)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_integrability(rep: Report) -> None:
    sc = rep.scenario
    J = _field(sc)
    r = integrability(J, sc.model())
    rep.result["integrable"] = r.integrable
    rep.result["checked_pairs"] = r.checked_pairs
    witness = None
    if r.counterexample:
        witness = {"pair": list(r.counterexample[:2]), "defect": _section(r.counterexample[2])}
        rep.result["counterexample"] = witness
    rep.check("integrable", "query", r.integrable, witness)


def cmd_jacobi(rep: Report) -> None:
    sc = rep.scenario
    J = _field(sc)
    n = sc.n
    fs = list(sc.functions) or list(coords(n))[:3]
    while len(fs) < 3:
        fs.append(lift(n, 0))
    f, g, h = fs[:3]
    rep.result["brackets"] = {
        "f,g": dump_scalar(poisson_bracket(J, f, g)),
        "g,h": dump_scalar(poisson_bracket(J, g, h)),
        "h,f": dump_scalar(poisson_bracket(J, h, f)),
    }
    rep.result["hamiltonian_f"] = _vec(hamiltonian(J, f))
    jac = jacobi_check(J, f, g, h)
    rep.result["jacobiator"] = dump_scalar(jac)
    integrable = integrability(J, StandardCourantModel.untwisted(n)).integrable
    rep.result["integrable"] = integrable
    rep.check("Jacobi identity", "assert" if integrable else "query", not jac, dump_scalar(jac))


def _random_poly(rng: random.Random, n: int):
    x = coords(n)
    f = lift(n, rng.randint(-2, 2))
    for i in range(n):
        f = f + rng.randint(-2, 2) * x[i]
        for j in range(i, n):
            c = rng.randint(-1, 1)
            if c:
                f = f + c * x[i] * x[j]
    return f


def cmd_axioms(rep: Report) -> None:
    sc = rep.scenario
    n = sc.n
    rng = random.Random(rep.seed)
    secs = list(sc.sections)
    while len(secs) < 3:
        secs.append(Section.make(n, [_random_poly(rng, n) for _ in range(n)], [_random_poly(rng, n) for _ in range(n)]))
    fns = list(sc.functions)
    while len(fns) < 2:
        fns.append(_random_poly(rng, n))
    r = axioms_check(sc.model(), secs[0], secs[1], secs[2], fns[0], fns[1])
    for name in sorted(r.results):
        res = r.residuals.get(name)
        if isinstance(res, Section):
            res = _section(res)
        elif isinstance(res, tuple):
            res = _vec(res)
        elif res is not None:
            res = dump_scalar(res)
        rep.check(f"axiom {name}", "assert", r.results[name], res)


def _spinor_for(sc: Scenario):
    if sc.spinor is not None:
        return sc.spinor, False
    J = _pointwise(sc)
    return spinor_from_dirac(eigenbundles(J)[0]), True


def cmd_spinor(rep: Report) -> None:
    sc = rep.scenario
    mu, derived = _spinor_for(sc)
    rep.result["spinor"] = dump_spinor(mu)
    pure = is_pure(mu)
    rep.result["pure"] = pure
    rep.check("pure", "assert" if derived else "query", pure)
    if not pure:
        return
    L = null_space(mu)
    rep.result["null_space"] = dump_subspace(L)
    rep.check("null space maximal isotropic", "assert", is_maximal_isotropic(L))
    back = spinor_from_dirac(DiracStructure(mu.n, L))
    rep.check("spinor from null space matches up to scale", "assert", projectively_equal(back, mu))
    if derived:
        rep.check("null space is the +i eigenbundle", "assert", L == eigenbundles(sc.structure)[0].space)


def cmd_mukai(rep: Report) -> None:
    sc = rep.scenario
    mu, derived = _spinor_for(sc)
    try:
        t1 = transverse_test(mu)
    except NotPure as exc:
        raise InputError(str(exc)) from None
    t2 = transverse_by_intersection(mu)
    rep.result["mukai"] = dump_scalar(mukai(mu, mu.conjugate()))
    rep.result["transverse"] = t1
    rep.check("transverse", "assert" if derived else "query", t1)
    rep.check("Mukai test agrees with L and conj(L) meeting trivially", "assert", t1 == t2)


def cmd_pullback_spinor(rep: Report) -> None:
    sc = rep.scenario
    sub = _sub(sc)
    mu, derived = _spinor_for(sc)
    if not is_pure(mu):
        raise InputError("the spinor is not pure")
    h = sub.inclusion()
    chk = spinor_submanifold_check(h, mu)
    rep.result.update(
        line=dump_spinor(chk.line),
        mukai=dump_scalar(chk.mukai_value),
        literal=dump_spinor(chk.literal),
        literal_zero=chk.literal_zero,
        holds=chk.holds,
    )
    rep.check("pulled-back line is generalized complex", "query", chk.holds)
    pulled = pull_back(h, DiracStructure(mu.n, null_space(mu))).space
    if not chk.literal_zero:
        rep.check("literal pullback has the pulled-back null space", "assert", null_space(chk.literal) == pulled)
    if derived and sc.structure is not None:
        v = theorem_main_verdict(sc.structure, sub)
        rep.result["verdict_admissible"] = v.admissible
        rep.check("spinor check agrees with verdict", "assert", chk.holds == v.admissible)


def cmd_kahler(rep: Report) -> None:
    sc = rep.scenario
    J1 = _pointwise(sc)
    J2 = _pointwise(sc, "second")
    commute, spans, four = commute_decomposition(J1, J2)
    rep.result.update(commute=commute, eigen_pieces_span=spans, piece_dims=list(four.dims()))
    rep.check("commute", "query", commute)
    rep.check("commutator test agrees with eigenspace decomposition", "assert", commute == spans)
    if not commute:
        return
    m = metric_check(J1, J2)
    rep.result["metric_symmetric"] = m.symmetric
    rep.result["metric_positive"] = m.positive
    rep.check("metric symmetric", "assert", m.symmetric)
    rep.check("metric positive definite", "query", m.positive, _vec(m.witness) if m.witness else None)
    if sc.submanifold is None or not m.holds:
        return
    sub = sc.submanifold
    conds = lalg_conditions(J1, J2, sub)
    rep.result["submanifold_conditions"] = list(conds)
    rep.check("submanifold conditions agree", "assert", len(set(conds)) == 1)
    try:
        a, b, _ = induced_pair(J1, J2, sub)
    except NotAdmissible as exc:
        rep.check("admissible for both", "query", False, str(exc))
        return
    except ValueError as exc:
        rep.check("induced pair is Kahler", "assert", False, str(exc))
        return
    rep.result["induced_J1"] = dump_matrix(a.J_prime.J)
    rep.result["induced_J2"] = dump_matrix(b.J_prime.J)
    rep.check("admissible for both", "query", True)
    rep.check("induced pair is Kahler", "assert", True)
    rep.check("induced pieces are direct and match pullbacks", "assert", directness_check(J1, J2, sub))


COMMANDS: dict[str, Callable[[Report], None]] = {
    "validate": cmd_validate,
    "split": cmd_split,
    "eigenbundles": cmd_eigenbundles,
    "induce": cmd_induce,
    "verdict": cmd_verdict,
    "involution": cmd_involution,
    "sigma-zero": cmd_sigma_zero,
    "integrability": cmd_integrability,
    "jacobi": cmd_jacobi,
    "axioms": cmd_axioms,
    "spinor": cmd_spinor,
    "mukai": cmd_mukai,
    "pullback-spinor": cmd_pullback_spinor,
    "kahler": cmd_kahler,
}


def run(command: str, scenario: Scenario, seed: int = 0) -> Report:
    if command not in COMMANDS:
        raise InputError(f"unknown command {command!r}")
    rep = Report(command, scenario, seed)
    COMMANDS[command](rep)
    return rep


# ---------------------------------------------------------------------------
# entry point


def _text(payload: dict) -> str:
    lines = [f"{payload['command']}: {payload['status'].upper()}"]
    sc = payload["scenario"]
    if sc["name"]:
        lines.append(f"scenario: {sc['name']} ({sc['kind']}, n = {sc['n']})")
    for c in payload["checks"]:
        mark = "PASS" if c["pass"] else ("FAIL" if c["role"] == "assert" else "no")
        line = f"  [{mark}] {c['name']} ({c['role']})"
        if "witness" in c:
            line += f"  witness: {json.dumps(c['witness'], sort_keys=True)}"
        lines.append(line)
    for k in sorted(payload["result"]):
        lines.append(f"  {k}: {json.dumps(payload['result'][k], sort_keys=True)}")
    if "timing_ms" in payload:
        lines.append(f"  timing_ms: {payload['timing_ms']}")
    return "\n".join(lines)


def _error(kind: str, exc: Exception, as_json: bool, path: str | None = None, detail=None) -> int:
    payload = {"error": kind, "message": str(exc)}
    if path:
        payload["path"] = path
    if detail is not None:
        payload["detail"] = detail
    if as_json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(f"error ({kind}): {exc}", file=sys.stderr)
    return 2


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="gck", description="Exact checks for generalized complex structures.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--scenario", required=True, help="path to a JSON scenario")
    ap.add_argument("--seed", type=int, default=0, help="seed for generated test data (default 0)")
    fmt = ap.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text")
    ap.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte-identity)")
    args = ap.parse_args(argv)
    as_json = args.fmt != "text"
    if args.seed < 0 or args.seed >= 2**64:
        return _error("InputError", ValueError("seed must be an unsigned 64-bit integer"), as_json)

    start = time.perf_counter()
    try:
        sc = load_scenario(args.scenario)
    except OSError as exc:
        return _error("InputError", exc, as_json)
    except ScenarioError as exc:
        return _error(type(exc).__name__, exc, as_json, exc.path, exc.detail)
    try:
        rep = run(args.command, sc, args.seed)
    except InputError as exc:
        return _error("InputError", exc, as_json)

    payload = rep.to_json()
    if args.timing:
        payload["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
    if as_json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(_text(payload))
    return 1 if rep.failed else 0


if __name__ == "__main__":
    sys.exit(main())
