"""Linear Dirac structures on V + V*.

Coordinates: an element ``X + xi`` of V + V* is a single list of length 2n,
vector part first. Covectors are written in the dual of the standard basis.

Two-forms on a carrier subspace are stored as *flat* matrices in the
carrier's echelon basis ``r_1..r_k``::

    flat[b][a] = eps(r_a, r_b)        # column a is iota_{r_a} eps

so for ``omega = e^1 ^ e^2`` on R^2 the flat matrix is ``[[0, -1], [1, 0]]``.
The same layout is used for ``theta`` on a subspace of V*.

Graph conventions:

* ``L(R, eps)   = {X + xi : X in R, xi|_R = iota_X eps}``
* ``L(S, theta) = {X + xi : xi in S, theta(xi, eta) = -eta(X) for eta in S}``
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .linalg import (
    Subspace,
    annihilator,
    apply,
    block,
    identity,
    is_skew,
    preimage,
    solve,
    transpose,
    zeros,
)
from .scalars import as_scalar, mpq

__all__ = [
    "pairing",
    "DiracStructure",
    "GraphData",
    "NotIsotropic",
    "dirac_from_form",
    "dirac_from_bivector",
    "graph_data",
    "is_isotropic",
    "is_maximal_isotropic",
    "pull_back",
    "pull_back_via_graph",
    "push_forward",
    "push_forward_via_graph",
    "pairing_matrix",
]

HALF = mpq(1, 2)


class NotIsotropic(ValueError):
    pass


def pairing(u: Sequence, v: Sequence):
    """<X+xi, Y+eta> = (xi(Y) + eta(X)) / 2."""
    if len(u) != len(v) or len(u) % 2:
        raise ValueError("pairing needs two vectors of the same even length")
    n = len(u) // 2
    acc = as_scalar(0)
    for i in range(n):
        acc = acc + u[n + i] * v[i] + v[n + i] * u[i]
    return acc * HALF


def pairing_matrix(n: int) -> list[list]:
    """Gram matrix of the pairing on V + V*: ``[[0, I/2], [I/2, 0]]``."""
    z = zeros(n, n)
    h = [[HALF if i == j else as_scalar(0) for j in range(n)] for i in range(n)]
    return block([[z, h], [h, z]])


def is_isotropic(s: Subspace) -> bool:
    b = s.basis
    return all(not pairing(b[i], b[j]) for i in range(len(b)) for j in range(i, len(b)))


def is_maximal_isotropic(s: Subspace) -> bool:
    if s.ambient_dim % 2:
        return False
    return s.dim == s.ambient_dim // 2 and is_isotropic(s)


@dataclass(frozen=True)
class DiracStructure:
    """A maximal isotropic subspace of V + V* (possibly complexified)."""

    n: int
    space: Subspace

    def __post_init__(self):
        if self.space.ambient_dim != 2 * self.n:
            raise ValueError(f"space lives in dimension {self.space.ambient_dim}, expected {2 * self.n}")
        if self.space.dim != self.n:
            raise NotIsotropic(f"dimension {self.space.dim} != n = {self.n}")
        if not is_isotropic(self.space):
            raise NotIsotropic("pairing does not vanish on the subspace")

    @classmethod
    def from_vectors(cls, vectors, n: int) -> "DiracStructure":
        return cls(n, Subspace.span(vectors, 2 * n))

    @classmethod
    def tangent(cls, n: int) -> "DiracStructure":
        return cls.from_vectors([e + [0] * n for e in identity(n)], n)

    @classmethod
    def cotangent(cls, n: int) -> "DiracStructure":
        return cls.from_vectors([[0] * n + e for e in identity(n)], n)

    def conjugate(self) -> "DiracStructure":
        return DiracStructure(self.n, self.space.conjugate())

    @property
    def basis(self):
        return self.space.basis


@dataclass(frozen=True)
class GraphData:
    """Carrier subspace plus a skew form on it (flat matrix in the carrier's echelon basis)."""

    carrier: Subspace
    form: tuple[tuple, ...]
    side: str = "vector"  # "vector": (R, eps) with R in V; "covector": (S, theta) with S in V*

    def __post_init__(self):
        k = self.carrier.dim
        if len(self.form) != k or any(len(r) != k for r in self.form):
            raise ValueError(f"form must be {k}x{k} on a {k}-dimensional carrier")
        if not is_skew(self.form):
            raise ValueError("form is not skew-symmetric")


def _as_form(m, k: int) -> tuple[tuple, ...]:
    if m is None:
        m = zeros(k, k)
    return tuple(tuple(as_scalar(x) for x in row) for row in m)


def dirac_from_form(r: Subspace, eps=None) -> DiracStructure:
    """``L(R, eps)``; ``eps`` is the flat matrix of a skew form on ``r``."""
    data = GraphData(r, _as_form(eps, r.dim), "vector")
    n = r.ambient_dim
    piv = r.pivots
    vecs = []
    for a, ra in enumerate(r.basis):
        xi = [as_scalar(0)] * n
        # xi(r_b) = eps(r_a, r_b); the echelon basis has r_b[p_c] = delta_bc
        for b, p in enumerate(piv):
            xi[p] = data.form[b][a]
        vecs.append(list(ra) + xi)
    for ann in annihilator(r).basis:
        vecs.append([as_scalar(0)] * n + list(ann))
    return DiracStructure.from_vectors(vecs, n)


def dirac_from_bivector(s: Subspace, theta=None) -> DiracStructure:
    """``L(S, theta)``; ``theta`` is the flat matrix of a skew form on ``s`` (a subspace of V*)."""
    data = GraphData(s, _as_form(theta, s.dim), "covector")
    n = s.ambient_dim
    piv = s.pivots
    vecs = []
    for a, sa in enumerate(s.basis):
        x = [as_scalar(0)] * n
        # s_b(X) = -theta(s_a, s_b)
        for b, p in enumerate(piv):
            x[p] = -data.form[b][a]
        vecs.append(x + list(sa))
    for ann in annihilator(s).basis:
        vecs.append(list(ann) + [as_scalar(0)] * n)
    return DiracStructure.from_vectors(vecs, n)


def graph_data(L: DiracStructure) -> tuple[GraphData, GraphData]:
    """Return ``(q1(L), eps)`` and ``(q2(L), theta)``."""
    n = L.n
    xs = [list(b[:n]) for b in L.basis]
    xis = [list(b[n:]) for b in L.basis]

    R = Subspace.span(xs, n)
    eps = zeros(R.dim, R.dim)
    lifts = []
    for ra in R.basis:
        c = solve(transpose(xs), ra)
        lifts.append(_combine(c, xis, n))
    for a, xi_a in enumerate(lifts):
        for b, rb in enumerate(R.basis):
            eps[b][a] = _eval(xi_a, rb)

    S = Subspace.span(xis, n)
    theta = zeros(S.dim, S.dim)
    lifts = []
    for sa in S.basis:
        c = solve(transpose(xis), sa)
        lifts.append(_combine(c, xs, n))
    for a, x_a in enumerate(lifts):
        for b, sb in enumerate(S.basis):
            theta[b][a] = -_eval(sb, x_a)

    return GraphData(R, _as_form(eps, R.dim), "vector"), GraphData(S, _as_form(theta, S.dim), "covector")


def _combine(coeffs, vecs, n):
    out = [as_scalar(0)] * n
    for c, v in zip(coeffs, vecs):
        if c:
            out = [o + c * x for o, x in zip(out, v)]
    return out


def _eval(xi, x):
    acc = as_scalar(0)
    for a, b in zip(xi, x):
        if a and b:
            acc = acc + a * b
    return acc


def _pull_form(phi, source: Subspace, target: Subspace, form) -> list[list]:
    """Flat matrix of ``phi^* form`` on ``source`` (phi maps source into target)."""
    coords = [target.coordinates(_matvec(phi, p)) for p in source.basis]
    k = source.dim
    out = zeros(k, k)
    for i in range(k):
        for j in range(k):
            # (phi^*eps)(p_i, p_j) = eps(phi p_i, phi p_j) = sum c_i[a] c_j[b] flat[b][a]
            acc = as_scalar(0)
            for a, ca in enumerate(coords[i]):
                if not ca:
                    continue
                for b, cb in enumerate(coords[j]):
                    if cb and form[b][a]:
                        acc = acc + ca * cb * form[b][a]
            out[j][i] = acc
    return out


def _matvec(m, v):
    return [_eval(row, v) for row in m]


def pull_back(phi, L: DiracStructure) -> DiracStructure:
    """``B_phi(L) = {X + phi^* xi : phi X + xi in L}`` for ``phi: V -> W``.

    ``phi`` is a dim(W) x dim(V) matrix and ``L`` lives on W.
    """
    m, n = len(phi), len(phi[0]) if phi else 0
    if m != L.n:
        raise ValueError(f"phi has codomain {m}, Dirac structure lives on dimension {L.n}")
    into = block([[phi, zeros(m, m)], [zeros(m, n), identity(m)]])
    pairs = preimage(into, L.space, n + m)
    out = block([[identity(n), zeros(n, m)], [zeros(n, n), transpose(phi)]])
    return DiracStructure(n, apply(out, pairs))


def pull_back_via_graph(phi, L: DiracStructure) -> DiracStructure:
    """Same as :func:`pull_back`, computed as ``L(phi^-1 R, phi^* eps)``."""
    (R, eps, _), _ = (_unpack(g) for g in graph_data(L))
    source = preimage(phi, R, len(phi[0]))
    return dirac_from_form(source, _pull_form(phi, source, R, eps))


def push_forward(phi, L: DiracStructure) -> DiracStructure:
    """``F_phi(L) = {phi X + xi : X + phi^* xi in L}`` for ``phi: V -> W``, ``L`` on V."""
    m, n = len(phi), len(phi[0]) if phi else 0
    if n != L.n:
        raise ValueError(f"phi has domain {n}, Dirac structure lives on dimension {L.n}")
    into = block([[identity(n), zeros(n, m)], [zeros(n, n), transpose(phi)]])
    pairs = preimage(into, L.space, n + m)
    out = block([[phi, zeros(m, m)], [zeros(m, n), identity(m)]])
    return DiracStructure(m, apply(out, pairs))


def push_forward_via_graph(phi, L: DiracStructure) -> DiracStructure:
    """Same as :func:`push_forward`, computed as ``L((phi^*)^-1 S, phi_* theta)``."""
    _, (S, theta, _) = (_unpack(g) for g in graph_data(L))
    phit = transpose(phi)
    source = preimage(phit, S, len(phi))
    return dirac_from_bivector(source, _pull_form(phit, source, S, theta))


def _unpack(g: GraphData):
    return g.carrier, g.form, g.side
