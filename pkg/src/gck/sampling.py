"""Seeded random generators for the test corpora.

Valid generalized complex structures are produced by conjugating canonical
ones (symplectic, complex, holomorphic Poisson, and direct sums of these) by
maps that preserve the pairing: ``diag(A, A^-T)``, B-field shears and
beta shears. Validity then holds by construction and is re-checked anyway.
"""

from __future__ import annotations

import random

from .dirac import DiracStructure, dirac_from_form
from .gcs import (
    GCStructure,
    b_shear,
    beta_shear,
    conjugate_by,
    direct_sum,
    from_complex,
    from_holomorphic_poisson,
    from_symplectic,
    gl_action,
    validate_gcs,
)
from .linalg import (
    Subspace,
    block,
    identity,
    inverse,
    kernel,
    matmul,
    msub,
    transpose,
    zeros,
)
from .scalars import GaussQ, mpq

__all__ = [
    "random_matrix",
    "random_unimodular",
    "random_skew",
    "random_subspace",
    "random_dirac",
    "standard_j",
    "standard_omega_flat",
    "random_symplectic",
    "random_complex",
    "random_holomorphic_poisson",
    "random_gcs",
    "standard_kahler_pair",
    "random_kahler_pair",
    "random_compatible_involution",
    "holomorphic_poisson_space",
]


def _q(x):
    return mpq(x)


def random_matrix(rng: random.Random, r: int, c: int, lo: int = -2, hi: int = 2) -> list[list]:
    return [[_q(rng.randint(lo, hi)) for _ in range(c)] for _ in range(r)]


def random_unimodular(rng: random.Random, n: int, spread: int = 1) -> list[list]:
    """Random integer matrix with determinant +-1 (so its inverse stays integral)."""
    lower = identity(n)
    upper = identity(n)
    for i in range(n):
        for j in range(i):
            lower[i][j] = _q(rng.randint(-spread, spread))
            upper[j][i] = _q(rng.randint(-spread, spread))
    perm = list(range(n))
    rng.shuffle(perm)
    p = [[_q(1) if perm[i] == j else _q(0) for j in range(n)] for i in range(n)]
    return matmul(p, matmul(lower, upper))


def random_skew(rng: random.Random, n: int, lo: int = -2, hi: int = 2) -> list[list]:
    out = zeros(n, n)
    for i in range(n):
        for j in range(i + 1, n):
            c = _q(rng.randint(lo, hi))
            out[i][j] = c
            out[j][i] = -c
    return out


def _random_entry(rng, complex_, lo, hi):
    if complex_:
        return GaussQ(rng.randint(lo, hi), rng.randint(lo, hi))
    return _q(rng.randint(lo, hi))


def random_subspace(rng: random.Random, n: int, k: int | None = None, complex_: bool = False) -> Subspace:
    """A random subspace of dimension exactly ``k`` (uniform in 0..n when k is None)."""
    if k is None:
        k = rng.randint(0, n)
    while True:
        vecs = [[_random_entry(rng, complex_, -2, 2) for _ in range(n)] for _ in range(k)]
        s = Subspace.span(vecs, n)
        if s.dim == k:
            return s


def random_dirac(rng: random.Random, n: int, complex_: bool = False) -> DiracStructure:
    """``L(R, eps)`` with random R (random dimension) and random skew eps."""
    r = random_subspace(rng, n, complex_=complex_)
    k = r.dim
    eps = zeros(k, k)
    for i in range(k):
        for j in range(i + 1, k):
            c = _random_entry(rng, complex_, -2, 2)
            eps[i][j] = c
            eps[j][i] = -c
    return dirac_from_form(r, eps)


def standard_j(n: int) -> list[list]:
    """Block rotation with j e_{2k} = e_{2k+1} (0-based); ``n`` even."""
    j = zeros(n, n)
    for k in range(0, n, 2):
        j[k + 1][k] = _q(1)
        j[k][k + 1] = _q(-1)
    return j


def standard_omega_flat(n: int) -> list[list]:
    """Flat matrix of ``sum e^{2k} ^ e^{2k+1}``; ``n`` even."""
    return standard_j(n)


def random_symplectic(rng: random.Random, n: int) -> GCStructure:
    a = random_unimodular(rng, n)
    w = matmul(matmul(transpose(a), standard_omega_flat(n)), a)
    return from_symplectic(w)


def random_complex(rng: random.Random, n: int) -> GCStructure:
    a = random_unimodular(rng, n)
    return from_complex(matmul(matmul(a, standard_j(n)), inverse(a)))


def holomorphic_poisson_space(j) -> Subspace:
    """All skew ``pi#`` with ``j pi# = pi# j^T``, as a subspace of flattened n x n matrices."""
    n = len(j)
    unknowns = [(a, b) for a in range(n) for b in range(a + 1, n)]
    eqs = []

    def mat_of(idx):
        m = zeros(n, n)
        a, b = unknowns[idx]
        m[a][b] = _q(1)
        m[b][a] = _q(-1)
        return m

    basis_mats = [mat_of(i) for i in range(len(unknowns))]
    residuals = [msub(matmul(j, m), matmul(m, transpose(j))) for m in basis_mats]
    for r in range(n):
        for c in range(n):
            eqs.append([res[r][c] for res in residuals])
    coeffs = kernel(eqs, len(unknowns))
    flat = []
    for row in coeffs.basis:
        m = zeros(n, n)
        for c, bm in zip(row, basis_mats):
            if c:
                m = [[x + c * y for x, y in zip(r1, r2)] for r1, r2 in zip(m, bm)]
        flat.append([x for r in m for x in r])
    return Subspace.span(flat, n * n)


def random_holomorphic_poisson(rng: random.Random, n: int, j=None) -> GCStructure:
    if j is None:
        j = standard_j(n)
    space = holomorphic_poisson_space(j)
    coeffs = [rng.randint(-2, 2) for _ in space.basis]
    flat = [sum((_q(c) * row[i] for c, row in zip(coeffs, space.basis)), _q(0)) for i in range(n * n)]
    pi = [flat[i * n:(i + 1) * n] for i in range(n)]
    return from_holomorphic_poisson(j, pi)


def _random_base(rng: random.Random, n: int) -> GCStructure:
    kind = rng.choice(["symplectic", "complex", "holomorphic_poisson", "sum"] if n >= 4 else ["symplectic", "complex"])
    if kind == "symplectic":
        return random_symplectic(rng, n)
    if kind == "complex":
        return random_complex(rng, n)
    if kind == "holomorphic_poisson":
        return random_holomorphic_poisson(rng, n)
    first = 2 * rng.randint(1, n // 2 - 1)
    return direct_sum(_random_base(rng, first), _random_base(rng, n - first))


def random_gcs(rng: random.Random, n: int, shears: bool = True) -> GCStructure:
    """A random valid J on V + V* with dim V = n (n even)."""
    if n % 2:
        raise ValueError("generalized complex structures need even dim V")
    J = _random_base(rng, n)
    J = conjugate_by(gl_action(random_unimodular(rng, n)), J)
    if shears:
        if rng.random() < 0.6:
            J = conjugate_by(b_shear(random_skew(rng, n, -1, 1)), J)
        if rng.random() < 0.3:
            J = conjugate_by(beta_shear(random_skew(rng, n, -1, 1)), J)
    return J


def standard_kahler_pair(n: int) -> tuple[GCStructure, GCStructure]:
    """``(J_j, J_omega)`` for flat Kahler R^n with ``omega_flat = -j``, giving G = J_j J_omega positive."""
    w = standard_omega_flat(n)
    j = [[-x for x in r] for r in w]
    return from_complex(j), from_symplectic(w)


def random_kahler_pair(rng: random.Random, n: int) -> tuple[GCStructure, GCStructure]:
    j1, j2 = standard_kahler_pair(n)
    g = gl_action(random_unimodular(rng, n))
    if rng.random() < 0.8:
        g = matmul(b_shear(random_skew(rng, n, -1, 1)), g)
    return conjugate_by(g, j1), conjugate_by(g, j2)


def random_compatible_involution(rng: random.Random, n: int) -> tuple[list[list], GCStructure]:
    """A pair (Psi, J) with Psi^2 = id and diag(Psi, Psi^T) commuting with J.

    Built as J_+ (+) J_- on the +-1 eigenspaces of Psi, then transported by
    a random diag(A, A^-T) and an eigenspace-preserving B-shear.
    """
    plus = 2 * rng.randint(0, n // 2)
    minus = n - plus
    parts = []
    if plus:
        parts.append(random_gcs(rng, plus))
    if minus:
        parts.append(random_gcs(rng, minus))
    J = parts[0] if len(parts) == 1 else direct_sum(parts[0], parts[1])
    d = zeros(n, n)
    for i in range(n):
        d[i][i] = _q(1) if i < plus else _q(-1)
    bp = random_skew(rng, plus, -1, 1) if plus else []
    bm = random_skew(rng, minus, -1, 1) if minus else []
    bfield = block([[bp if plus else [], zeros(plus, minus)], [zeros(minus, plus), bm if minus else []]]) if plus and minus else (bp or bm)
    J = conjugate_by(b_shear(bfield), J)
    a = random_unimodular(rng, n)
    J = conjugate_by(gl_action(a), J)
    psi = matmul(matmul(a, d), inverse(a))
    return psi, validate_gcs(J.matrix)
