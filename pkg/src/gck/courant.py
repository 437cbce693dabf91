"""The standard (twisted) Courant algebroid on a coordinate patch.

Anchor is the projection to vectors, the pairing is ``(xi(Y) + eta(X)) / 2``
and ``D f = df``. Field-level generalized complex structures are
:class:`~gck.gcs.GCStructure` objects whose entries are rational functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import gcs as _gcs
from .forms import (
    FormField,
    Section,
    apply_vector,
    d,
    interior,
    jacobian,
    lie,
    lie_bracket,
    pullback,
)
from .gcs import GCStructure, eigenbundles, split
from .linalg import Subspace, apply, image, kernel, matmul, matvec, rank, solve, transpose
from .ratfun import compose, evaluate, lift, ratfield
from .scalars import I, is_real, mpq

__all__ = [
    "NonClosedTwist",
    "NotTwistedImmersion",
    "StandardCourantModel",
    "FieldGCS",
    "pairing",
    "courant",
    "twisted_courant",
    "axioms_check",
    "AxiomReport",
    "integrability",
    "nijenhuis",
    "IntegrabilityReport",
    "poisson_bracket",
    "jacobi_check",
    "hamiltonian",
    "characteristic_checks",
    "CharacteristicReport",
    "phi_related_bracket",
    "RelatedReport",
    "frame",
]

HALF = mpq(1, 2)


class NonClosedTwist(ValueError):
    def __init__(self, message, d_omega=None):
        super().__init__(message)
        self.d_omega = d_omega


class NotTwistedImmersion(ValueError):
    pass


@dataclass(frozen=True)
class StandardCourantModel:
    n: int
    omega: FormField

    def __post_init__(self):
        if self.omega.n != self.n or self.omega.degree != 3:
            raise ValueError("the twist must be a 3-form on the patch")
        if not getattr(self, "_skip_check", False) and not self.omega.is_zero():
            dom = d(self.omega)
            if not dom.is_zero():
                idx, c = dom.terms[0]
                name = "dx" + "^dx".join(str(i + 1) for i in idx)
                raise NonClosedTwist(f"d(Omega) has coefficient {c} on {name}", dom)

    @classmethod
    def untwisted(cls, n: int) -> "StandardCourantModel":
        return cls(n, FormField.zero(n, 3) if n >= 3 else FormField(n, 3, ()))

    @classmethod
    def unchecked(cls, n: int, omega: FormField) -> "StandardCourantModel":
        """Bypass the closedness invariant (negative controls only)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "_skip_check", True)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "omega", omega)
        return obj

    def D(self, f) -> Section:
        return Section.make(self.n, xi=_grad(self.n, f))

    def anchor(self, a: Section) -> tuple:
        return a.x

    def bracket(self, a: Section, b: Section) -> Section:
        return twisted_courant(a, b, self)

    def pairing(self, a: Section, b: Section):
        return pairing(a, b)


def _grad(n, f):
    f = lift(n, f)
    return tuple(f.diff(g) for g in ratfield(n).gens)


def frame(n: int) -> list[tuple[str, Section]]:
    """The coordinate frame ``{d_i, dx_j}`` as labelled sections."""
    out = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        out.append((f"d/dx{i + 1}", Section.make(n, x=e)))
    for i in range(n):
        e = [0] * n
        e[i] = 1
        out.append((f"dx{i + 1}", Section.make(n, xi=e)))
    return out


def pairing(a: Section, b: Section):
    acc = ratfield(a.n)(0)
    for x, y, xi, eta in zip(a.x, b.x, a.xi, b.xi):
        acc = acc + xi * y + eta * x
    return acc * HALF


def _eval1(xi: Sequence, x: Sequence):
    acc = ratfield(len(x))(0)
    for a, b in zip(xi, x):
        acc = acc + a * b
    return acc


def courant(a: Section, b: Section) -> Section:
    """``[X,Y] + L_X eta - L_Y xi + d(xi(Y) - eta(X)) / 2``."""
    n = a.n
    vec = lie_bracket(a.x, b.x)
    cov = lie(a.x, b.covector()) - lie(b.x, a.covector())
    exact = d(FormField.function(n, (_eval1(a.xi, b.x) - _eval1(b.xi, a.x)) * HALF))
    cov = cov + exact
    return Section(vec, cov.components())


def twisted_courant(a: Section, b: Section, model: StandardCourantModel) -> Section:
    """Courant bracket plus ``iota_Y iota_X Omega``."""
    base = courant(a, b)
    if model.omega.is_zero():
        return base
    extra = interior(b.x, interior(a.x, model.omega)).components()
    return Section(base.x, tuple(u + v for u, v in zip(base.xi, extra)))


# ---------------------------------------------------------------------------
# axioms


@dataclass
class AxiomReport:
    results: dict
    residuals: dict = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(self.results.values())


def _section_residual(s: Section):
    return None if s.is_zero() else s


def axioms_check(model: StandardCourantModel, a: Section, b: Section, c: Section, f, g) -> AxiomReport:
    n = model.n
    f, g = lift(n, f), lift(n, g)
    br = model.bracket
    ip = pairing
    D = model.D
    res: dict = {}

    res["c1"] = ip(D(f), a) - HALF * apply_vector(a.x, f)
    r2 = tuple(u - v for u, v in zip(br(a, b).x, lie_bracket(a.x, b.x)))
    res["c2"] = None if not any(r2) else r2
    jac = br(br(a, b), c) + br(br(b, c), a) + br(br(c, a), b)
    t = (ip(br(a, b), c) + ip(br(b, c), a) + ip(br(c, a), b)) * mpq(1, 3)
    res["c3"] = _section_residual(jac - D(t))
    lhs = br(a, b.scale(f))
    rhs = br(a, b).scale(f) + b.scale(apply_vector(a.x, f)) - D(f).scale(ip(a, b))
    res["c4"] = _section_residual(lhs - rhs)
    res["c5"] = ip(D(f), D(g))
    r6 = (
        apply_vector(a.x, ip(b, c))
        - ip(br(a, b) + D(ip(a, b)), c)
        - ip(b, br(a, c) + D(ip(a, c)))
    )
    res["c6"] = r6
    res["c7"] = _section_residual(br(D(f), a) + D(ip(D(f), a)))
    results = {k: v is None or (not isinstance(v, Section) and not v) for k, v in res.items()}
    return AxiomReport(results, {k: v for k, v in res.items() if not results[k]})


# ---------------------------------------------------------------------------
# field-level generalized complex structures


@dataclass(frozen=True)
class FieldGCS:
    """A J(x) with rational-function entries; J^2 = -1 and orthogonality hold identically."""

    n: int
    structure: GCStructure

    @classmethod
    def from_matrix(cls, m) -> "FieldGCS":
        n = len(m) // 2
        return cls(n, _gcs.validate_gcs([[lift(n, x) for x in r] for r in m]))

    @classmethod
    def from_symplectic(cls, omega: FormField) -> "FieldGCS":
        if omega.degree != 2:
            raise ValueError("need a 2-form")
        n = omega.n
        flat = [[omega.coeff((a, b)) for a in range(n)] for b in range(n)]
        return cls(n, _gcs.from_symplectic(flat))

    @classmethod
    def from_complex(cls, j) -> "FieldGCS":
        n = len(j)
        return cls(n, _gcs.from_complex([[lift(n, x) for x in r] for r in j]))

    @classmethod
    def from_holomorphic_poisson(cls, j, pi_sharp) -> "FieldGCS":
        n = len(j)
        return cls(n, _gcs.from_holomorphic_poisson([[lift(n, x) for x in r] for r in j], [[lift(n, x) for x in r] for r in pi_sharp]))

    @property
    def matrix(self) -> list[list]:
        return self.structure.matrix

    def apply(self, s: Section) -> Section:
        return Section.from_list(matvec(self.structure.J, s.as_list()))

    def at(self, point: Sequence) -> GCStructure:
        return _gcs.validate_gcs([[evaluate(x, point) for x in r] for r in self.structure.J])

    def is_constant(self) -> bool:
        return all(not lift(self.n, x).diff(g) for r in self.structure.J for x in r for g in ratfield(self.n).gens)


def nijenhuis(J: FieldGCS, model: StandardCourantModel, x: Section, y: Section) -> Section:
    """``[Jx,Jy] - [x,y] - J([Jx,y] + [x,Jy])`` for the twisted bracket."""
    br = model.bracket
    jx, jy = J.apply(x), J.apply(y)
    return br(jx, jy) - br(x, y) - J.apply(br(jx, y) + br(x, jy))


@dataclass
class IntegrabilityReport:
    integrable: bool
    counterexample: tuple | None = None  # (label_x, label_y, defect)
    checked_pairs: int = 0


def integrability(J: FieldGCS, model: StandardCourantModel) -> IntegrabilityReport:
    """Vanishing of the Nijenhuis expression on all pairs of frame sections.

    The expression is tensorial in both slots (see tests), so the frame suffices.
    """
    fr = frame(J.n)
    count = 0
    for i in range(len(fr)):
        for j in range(i + 1, len(fr)):
            count += 1
            defect = nijenhuis(J, model, fr[i][1], fr[j][1])
            if not defect.is_zero():
                return IntegrabilityReport(False, (fr[i][0], fr[j][0], defect), count)
    return IntegrabilityReport(True, None, count)


def poisson_bracket(J: FieldGCS, f, g):
    """``{f, g} = 2 <J df, dg>``."""
    df = Section.make(J.n, xi=_grad(J.n, f))
    dg = Section.make(J.n, xi=_grad(J.n, g))
    return 2 * pairing(J.apply(df), dg)


def jacobi_check(J: FieldGCS, f, g, h):
    pb = lambda u, v: poisson_bracket(J, u, v)  # noqa: E731
    return pb(f, pb(g, h)) + pb(g, pb(h, f)) + pb(h, pb(f, g))


def hamiltonian(J: FieldGCS, f) -> tuple:
    """``X_f = rho J D f``."""
    return J.apply(Section.make(J.n, xi=_grad(J.n, f))).x


# ---------------------------------------------------------------------------
# characteristic distribution at a point


@dataclass
class CharacteristicReport:
    pi_image: Subspace
    rho_j_ker: Subspace
    eigen_intersection: Subspace
    pi_formula: bool  # Pi# = rho J Xi^-1 rho^* / 2 equals the pi block
    bialgebroid: bool  # both bialgebroid compositions equal i pi#, and the result is real

    @property
    def all_hold(self) -> bool:
        return (
            self.pi_image == self.rho_j_ker == self.eigen_intersection
            and self.pi_formula
            and self.bialgebroid
        )


def _pair_vec(u, v):
    n = len(u) // 2
    acc = 0
    for i in range(n):
        acc = acc + u[n + i] * v[i] + v[n + i] * u[i]
    return acc * HALF


def _dual_partner(target_basis, test_basis, n, alpha):
    """The m in span(target_basis) with <m, l> = alpha(rho l) for every l in test_basis."""
    gram = [[_pair_vec(t, l) for t in target_basis] for l in test_basis]
    rhs = [sum((a * x for a, x in zip(alpha, l[:n])), mpq(0)) for l in test_basis]
    c = solve(gram, rhs)
    out = [mpq(0)] * (2 * n)
    for coef, t in zip(c, target_basis):
        out = [o + coef * x for o, x in zip(out, t)]
    return out


def characteristic_checks(J: GCStructure) -> CharacteristicReport:
    n = J.n
    s = split(J)
    pi = [list(r) for r in s.pi_sharp]
    pi_image = image(pi, n)

    ker_rho = Subspace.span([[0] * n + [1 if i == j else 0 for j in range(n)] for i in range(n)], 2 * n)
    # (ker rho)^perp for the pairing; equals ker rho in the standard model
    gram_rows = [[_pair_vec(k, e) for e in _unit_vectors(2 * n)] for k in ker_rho.basis]
    perp = kernel(gram_rows, 2 * n)
    rho = [r[:] for r in _unit_vectors(2 * n)[:n]]
    rho_j_ker = apply(rho, apply(J.matrix, perp))

    Lp, Lm = eigenbundles(J)
    eig = apply(rho, Lp.space) & apply(rho, Lm.space)

    xi_inv = [[2 * x for x in r] for r in _swap(n)]
    formula = matmul(matmul(matmul(rho, J.matrix), xi_inv), transpose(rho))
    pi_formula = [[x * HALF for x in r] for r in formula] == pi

    bial = True
    for i in range(n):
        alpha = [mpq(1) if j == i else mpq(0) for j in range(n)]
        m = _dual_partner(Lm.basis, Lp.basis, n, alpha)
        mp = _dual_partner(Lp.basis, Lm.basis, n, alpha)
        first = [x / I for x in m[:n]]
        second = [-x / I for x in mp[:n]]
        target = [r[i] for r in pi]
        if not (first == second == target and all(is_real(x) for x in first)):
            bial = False
            break
    return CharacteristicReport(pi_image, rho_j_ker, eig, pi_formula, bial)


def _unit_vectors(m):
    return [[mpq(1) if i == j else mpq(0) for j in range(m)] for i in range(m)]


def _swap(n):
    return [[mpq(1) if (j == i + n or i == j + n) else mpq(0) for j in range(2 * n)] for i in range(2 * n)]


# ---------------------------------------------------------------------------
# h-related sections


@dataclass
class RelatedReport:
    inputs_related: bool
    brackets_related: bool
    bracket_n: Section | None = None
    bracket_m: Section | None = None

    @property
    def holds(self) -> bool:
        return (not self.inputs_related) or self.brackets_related


def _related(images, jac, k, sN: Section, sM: Section) -> bool:
    xm = [compose(c, images, k) for c in sM.x]
    xim = [compose(c, images, k) for c in sM.xi]
    push = matvec(jac, list(sN.x))
    pulled = matvec(transpose(jac), xim)
    return push == xm and pulled == list(sN.xi)


def phi_related_bracket(images, sN1, sN2, sM1, sM2, omega: FormField, upsilon: FormField) -> RelatedReport:
    """Check that h-related inputs have h-related twisted brackets."""
    k = upsilon.n
    m = omega.n
    if len(images) != m:
        raise ValueError("the map needs one component per target coordinate")
    images = [lift(k, c) for c in images]
    jac = jacobian(images, k)
    if rank(jac) != k:
        raise NotTwistedImmersion("dh is not injective")
    if pullback(images, omega, k) != upsilon:
        raise NotTwistedImmersion("Upsilon != h^* Omega")
    inputs = _related(images, jac, k, sN1, sM1) and _related(images, jac, k, sN2, sM2)
    bn = twisted_courant(sN1, sN2, StandardCourantModel(k, upsilon))
    bm = twisted_courant(sM1, sM2, StandardCourantModel(m, omega))
    return RelatedReport(inputs, _related(images, jac, k, bn, bm), bn, bm)
