"""Induced generalized complex structures on linear submanifolds.

Everything here is pointwise: ``w`` is the tangent space TN inside V, the
inclusion ``h`` is the subspace inclusion, and covectors restrict by
``h^* xi = (xi(b_1), ..., xi(b_k))`` on the echelon basis ``b`` of ``w``.
Vectors of N are written in that basis too, so the induced structure is a
``2k x 2k`` matrix.

``B = TN + V*`` and ``B_perp = TN°`` (covectors killing TN).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .dirac import pull_back
from .gcs import GCStructure, eigenbundles, from_dirac, split, validate_gcs, GCSError
from .linalg import (
    Subspace,
    annihilator,
    apply,
    identity,
    intersect,
    inverse,
    kernel,
    matmul,
    matvec,
    msub,
    preimage,
    solve,
    transpose,
    zeros,
)
from .scalars import as_scalar

__all__ = [
    "LinearSubmanifold",
    "InducedStructure",
    "Verdict",
    "Prop1Conditions",
    "SigmaZeroReport",
    "ConditionsFailed",
    "NoWitness",
    "NotInvolution",
    "NotCompatible",
    "PreconditionError",
    "b_spaces",
    "prop1_conditions",
    "lemma2_conditions",
    "induced_via_quotient",
    "induced_via_formulas",
    "theorem_main_verdict",
    "involution_check",
    "hol_poisson_sigma_zero",
    "pr_phi",
]


class ConditionsFailed(ValueError):
    pass


class NoWitness(ValueError):
    pass


class NotInvolution(ValueError):
    pass


class NotCompatible(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class LinearSubmanifold:
    """TN at a point, optionally with an explicit frame (the columns of dh).

    Without a frame the echelon basis of ``w`` is used. Vectors and covectors
    of N are written in the frame and its dual basis.
    """

    ambient_n: int
    w: Subspace
    frame: tuple[tuple, ...] | None = None

    def __post_init__(self):
        if self.w.ambient_dim != self.ambient_n:
            raise ValueError("tangent space lives in the wrong ambient dimension")
        if self.frame is not None:
            if len(self.frame) != self.w.dim or Subspace.span(self.frame, self.ambient_n) != self.w:
                raise ValueError("frame is not a basis of the tangent space")

    @classmethod
    def from_basis(cls, rows, n: int) -> "LinearSubmanifold":
        return cls(n, Subspace.span(rows, n))

    @classmethod
    def from_frame(cls, rows, n: int) -> "LinearSubmanifold":
        rows = tuple(tuple(as_scalar(x) for x in r) for r in rows)
        return cls(n, Subspace.span(rows, n), rows)

    @property
    def k(self) -> int:
        return self.w.dim

    @property
    def basis(self) -> tuple[tuple, ...]:
        return self.frame if self.frame is not None else self.w.basis

    def inclusion(self) -> list[list]:
        """``h``: n x k matrix whose columns are the frame of TN."""
        return transpose([list(b) for b in self.basis]) if self.k else [[] for _ in range(self.ambient_n)]

    def restrict(self, xi: Sequence) -> list:
        """``h^* xi``."""
        return [sum((a * b for a, b in zip(xi, row)), as_scalar(0)) for row in self.basis]

    def coords(self, x: Sequence) -> list:
        c = self.w.coordinates(x)
        if c is None:
            raise ValueError("vector is not tangent to the submanifold")
        if self.frame is None:
            return c
        return solve(self._frame_in_echelon_t(), c)

    def _frame_in_echelon_t(self):
        # column a holds the echelon coordinates of frame vector a
        return transpose([self.w.coordinates(f) for f in self.frame])

    def s_matrix(self) -> list[list]:
        """Matrix of ``s: B -> TN + T*N``, valid on B (reads echelon pivots of the vector part)."""
        n, k = self.ambient_n, self.k
        m = zeros(2 * k, 2 * n)
        pick = zeros(k, n)
        for a, p in enumerate(self.w.pivots):
            pick[a][p] = as_scalar(1)
        if self.frame is not None:
            pick = matmul(inverse(self._frame_in_echelon_t()), pick)
        for a in range(k):
            m[a][:n] = pick[a]
        for a, row in enumerate(self.basis):
            for i, x in enumerate(row):
                m[k + a][n + i] = x
        return m


def _lift_vectors(vs, n):
    return [list(v) + [as_scalar(0)] * n for v in vs]


def _lift_covectors(xs, n):
    return [[as_scalar(0)] * n + list(x) for x in xs]


def b_spaces(sub: LinearSubmanifold) -> tuple[Subspace, Subspace]:
    n = sub.ambient_n
    B = Subspace.span(_lift_vectors(sub.w.basis, n) + _lift_covectors(identity(n), n), 2 * n)
    Bperp = Subspace.span(_lift_covectors(annihilator(sub.w).basis, n), 2 * n)
    return B, Bperp


@dataclass(frozen=True)
class Prop1Conditions:
    eigenbundle: bool  # L'_+ is the +i eigenspace of an orthogonal J' with J'^2 = -1
    decomposition: bool  # B = B cap JB + B_perp
    containment: bool  # JB subset B + J B_perp
    kernel: bool  # J B_perp cap B subset B_perp

    @property
    def values(self) -> tuple[bool, bool, bool, bool]:
        return (self.eigenbundle, self.decomposition, self.containment, self.kernel)

    @property
    def agree(self) -> bool:
        return len(set(self.values)) == 1


def prop1_conditions(J: GCStructure, sub: LinearSubmanifold) -> Prop1Conditions:
    B, Bperp = b_spaces(sub)
    m = J.matrix
    JB = apply(m, B)
    JBperp = apply(m, Bperp)
    c2 = B == (intersect(B, JB) + Bperp)
    c3 = JB.issubset(B + JBperp)
    c4 = intersect(JBperp, B).issubset(Bperp)

    h = sub.inclusion()
    Lp, Lm = eigenbundles(J)
    Lp1 = pull_back(h, Lp)
    Lm1 = pull_back(h, Lm)
    c1 = intersect(Lp1.space, Lm1.space).is_zero()
    if c1:
        # realise J' explicitly; its -i eigenspace must be the pulled-back L_-
        try:
            Jp = from_dirac(Lp1)
        except GCSError:
            c1 = False
        else:
            c1 = eigenbundles(Jp)[1] == Lm1
    return Prop1Conditions(c1, c2, c3, c4)


def _pi_image_of_annihilator(s, sub: LinearSubmanifold) -> Subspace:
    ann = annihilator(sub.w)
    return apply([list(r) for r in s.pi_sharp], ann)


def lemma2_conditions(s, sub: LinearSubmanifold) -> tuple[bool, bool]:
    """``(TN cap pi#(TN°) = 0, phi(TN) subset TN + pi#(TN°))`` for a Splitting ``s``."""
    pann = _pi_image_of_annihilator(s, sub)
    first = intersect(sub.w, pann).is_zero()
    phi_tn = apply([list(r) for r in s.phi], sub.w)
    second = phi_tn.issubset(sub.w + pann)
    return first, second


@dataclass(frozen=True)
class InducedStructure:
    J_prime: GCStructure
    phi_prime: tuple[tuple, ...]
    pi_prime: tuple[tuple, ...]
    sigma_prime: tuple[tuple, ...]
    witnesses: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_matrix(cls, m, witnesses=None) -> "InducedStructure":
        Jp = validate_gcs(m)
        s = split(Jp)
        return cls(Jp, s.phi, s.pi_sharp, s.sigma_flat, witnesses or {})


def induced_via_quotient(J: GCStructure, sub: LinearSubmanifold) -> InducedStructure:
    """J' from the square ``s o J = J' o s`` on ``B cap JB``."""
    n, k = sub.ambient_n, sub.k
    B, Bperp = b_spaces(sub)
    m = J.matrix
    C = intersect(B, apply(m, B))
    if B != C + Bperp:
        raise ConditionsFailed("B != B cap JB + B_perp")
    ker = intersect(Bperp, apply(m, B))
    if not apply(m, ker).issubset(ker):
        raise ConditionsFailed("kernel of s restricted to B cap JB is not J-stable")
    smat = sub.s_matrix()
    images = [matvec(smat, c) for c in C.basis]
    cols = []
    preimages = []
    for t in range(2 * k):
        e = [as_scalar(0)] * (2 * k)
        e[t] = as_scalar(1)
        a = solve(transpose(images), e)
        if a is None:
            raise ConditionsFailed("s(B cap JB) does not span TN + T*N")
        c = [as_scalar(0)] * (2 * n)
        for coef, vec in zip(a, C.basis):
            if coef:
                c = [x + coef * y for x, y in zip(c, vec)]
        preimages.append(c)
        cols.append(matvec(smat, matvec(m, c)))
    return InducedStructure.from_matrix(transpose(cols), {"preimages": preimages})


def pr_phi(s, sub: LinearSubmanifold, x: Sequence) -> list:
    """``pr(phi X)``: TN-component of phi X in TN (+) pi#(TN°)."""
    phi = [list(r) for r in s.phi]
    pann = _pi_image_of_annihilator(s, sub)
    cols = [list(b) for b in sub.w.basis] + [list(b) for b in pann.basis]
    c = solve(transpose(cols), matvec(phi, x)) if cols else None
    if c is None:
        raise ConditionsFailed("phi X is not in TN + pi#(TN°)")
    out = [as_scalar(0)] * sub.ambient_n
    for coef, b in zip(c[: sub.k], sub.w.basis):
        if coef:
            out = [o + coef * y for o, y in zip(out, b)]
    return out


def induced_via_formulas(J: GCStructure, sub: LinearSubmanifold) -> InducedStructure:
    """J' blockwise from witnesses ``zeta`` (for vectors) and ``eta`` (for covectors)."""
    s = split(J)
    first, second = lemma2_conditions(s, sub)
    if not (first and second):
        raise ConditionsFailed(f"TN cap pi#(TN°) = 0: {first}, phi(TN) in TN + pi#(TN°): {second}")
    n, k = sub.ambient_n, sub.k
    phi = [list(r) for r in s.phi]
    phit = transpose(phi)
    pi = [list(r) for r in s.pi_sharp]
    sig = [list(r) for r in s.sigma_flat]
    ann = [list(a) for a in annihilator(sub.w).basis]
    pann = [matvec(pi, a) for a in ann]
    wb = [list(b) for b in sub.basis]

    phi_p = zeros(k, k)
    sig_p = zeros(k, k)
    zetas = []
    for j, x in enumerate(wb):
        # phi X + sum b_l pi# a_l = sum c_m w_m
        cols = pann + [[-y for y in v] for v in wb]
        rhs = [-y for y in matvec(phi, x)]
        sol = solve(transpose(cols), rhs) if cols else ([] if not any(rhs) else None)
        if sol is None:
            raise NoWitness(f"no zeta for basis vector {j}")
        zeta = [as_scalar(0)] * n
        for b_l, a in zip(sol[: len(ann)], ann):
            if b_l:
                zeta = [z + b_l * y for z, y in zip(zeta, a)]
        zetas.append(zeta)
        top = [p + q for p, q in zip(matvec(phi, x), matvec(pi, zeta))]
        col_phi = sub.coords(top)
        col_sig = sub.restrict([p - q for p, q in zip(matvec(sig, x), matvec(phit, zeta))])
        for i in range(k):
            phi_p[i][j] = col_phi[i]
            sig_p[i][j] = col_sig[i]

    pi_p = zeros(k, k)
    br = zeros(k, k)
    etas = []
    constraint = matmul(ann, pi) if ann else []
    for j in range(k):
        e = [as_scalar(0)] * k
        e[j] = as_scalar(1)
        system = wb + constraint
        rhs = e + [as_scalar(0)] * len(constraint)
        eta = solve(system, rhs) if system else []
        if eta is None:
            raise NoWitness(f"no eta for dual basis covector {j}")
        etas.append(eta)
        col_pi = sub.coords(matvec(pi, eta))
        col_br = [-y for y in sub.restrict(matvec(phit, eta))]
        for i in range(k):
            pi_p[i][j] = col_pi[i]
            br[i][j] = col_br[i]

    m = [phi_p[i] + pi_p[i] for i in range(k)] + [sig_p[i] + br[i] for i in range(k)]
    return InducedStructure.from_matrix(m, {"zeta": zetas, "eta": etas})


@dataclass
class Verdict:
    admissible: bool
    conditions: dict
    failure_witness: list | None = None
    submanifold: LinearSubmanifold | None = None
    induced: InducedStructure | None = None
    paths_agree: bool | None = None
    notes: list = field(default_factory=list)


SMOOTH_NOTE = "smoothness is vacuous at a single point; family verdicts use the constant-rank + symbolic-solve policy"


def theorem_main_verdict(J: GCStructure, sub: LinearSubmanifold) -> Verdict:
    s = split(J)
    n = sub.ambient_n
    pann = _pi_image_of_annihilator(s, sub)
    meet = intersect(sub.w, pann)
    poisson_dirac = meet.is_zero()
    phi = [list(r) for r in s.phi]
    target = sub.w + pann
    bad = [b for b in sub.w.basis if not target.contains(matvec(phi, b))]
    phi_range = not bad
    conditions = {"poisson_dirac": poisson_dirac, "phi_range": phi_range, "smooth": True}
    witness = None
    if not poisson_dirac:
        witness = list(meet.basis[0]) + [as_scalar(0)] * n
    elif bad:
        witness = list(bad[0]) + [as_scalar(0)] * n
    verdict = Verdict(all(conditions.values()), conditions, witness, sub, notes=[SMOOTH_NOTE])
    if verdict.admissible:
        a = induced_via_formulas(J, sub)
        b = induced_via_quotient(J, sub)
        verdict.induced = a
        verdict.paths_agree = a.J_prime == b.J_prime
    return verdict


def involution_check(psi, J: GCStructure) -> Verdict:
    """Fixed locus of an involution Psi whose lift diag(Psi, Psi^T) commutes with J."""
    psi = [[as_scalar(x) for x in r] for r in psi]
    n = len(psi)
    if n != J.n:
        raise ValueError("involution and structure have different dimensions")
    if matmul(psi, psi) != identity(n):
        raise NotInvolution("Psi^2 != id")
    lift = [r + [as_scalar(0)] * n for r in psi] + [[as_scalar(0)] * n + r for r in transpose(psi)]
    m = J.matrix
    comm = msub(matmul(lift, m), matmul(m, lift))
    if any(x for r in comm for x in r):
        raise NotCompatible("Psi lift does not commute with J")
    fixed = kernel(msub(psi, identity(n)), n)
    return theorem_main_verdict(J, LinearSubmanifold(n, fixed))


@dataclass(frozen=True)
class SigmaZeroReport:
    direct: bool
    criterion125: bool
    criterion123: bool
    criterion_sum: bool  # phi(TN) in TN + pi#(A°), the step before the last simplification

    @property
    def diverges_123(self) -> bool:
        return self.direct != self.criterion123


def hol_poisson_sigma_zero(J: GCStructure, sub: LinearSubmanifold) -> SigmaZeroReport:
    """Compare sigma' = 0 computed directly with the two closed-form criteria."""
    s = split(J)
    if any(x for r in s.sigma_flat for x in r):
        raise PreconditionError("sigma block of J is not zero")
    verdict = theorem_main_verdict(J, sub)
    if not verdict.admissible:
        raise PreconditionError(f"submanifold is not admissible: {verdict.conditions}")
    direct = not any(x for r in verdict.induced.sigma_prime for x in r)

    n = sub.ambient_n
    phi = [list(r) for r in s.phi]
    pi = [list(r) for r in s.pi_sharp]
    pann = _pi_image_of_annihilator(s, sub)
    ann = annihilator(sub.w)
    # A = pr_2(phi(TN)): the pi#(TN°) components of phi X
    comps = []
    cols = [list(b) for b in sub.w.basis] + [list(b) for b in pann.basis]
    for b in sub.w.basis:
        c = solve(transpose(cols), matvec(phi, b))
        part = [as_scalar(0)] * n
        for coef, v in zip(c[sub.k:], pann.basis):
            if coef:
                part = [p + coef * y for p, y in zip(part, v)]
        comps.append(part)
    A = Subspace.span(comps, n)
    left = intersect(ann, preimage(pi, A, n))
    right = preimage(transpose(phi), ann, n)
    crit125 = left.issubset(right)
    pia = apply(pi, annihilator(A))
    phi_tn = apply(phi, sub.w)
    crit123 = phi_tn.issubset(pia)
    crit_sum = phi_tn.issubset(sub.w + pia)
    return SigmaZeroReport(direct, crit125, crit123, crit_sum)
