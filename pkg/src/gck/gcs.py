"""Pointwise generalized complex structures and their block splitting.

``J`` acts on columns ``(X; xi)`` and is split as::

    J = [[phi,     pi_sharp],
         [sigma_flat, -phi^T]]

with ``pi_sharp: V* -> V`` (``pi(a, b) = b(pi_sharp a)``) and
``sigma_flat X = iota_X sigma``. For ``omega = e^1 ^ e^2`` the flat matrix is
``[[0, -1], [1, 0]]`` so that ``omega_flat e1 = e^2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .dirac import DiracStructure, pairing, pairing_matrix
from .linalg import (
    block,
    identity,
    image,
    inverse,
    is_skew,
    is_zero_matrix,
    kernel,
    madd,
    matmul,
    matvec,
    mneg,
    mscale,
    msub,
    transpose,
    zeros,
)
from .scalars import I, as_scalar, canon, conj, is_real

__all__ = [
    "GCSError",
    "NotComplex",
    "NotOrthogonal",
    "DegenerateForm",
    "NotAlmostComplex",
    "IncompatiblePair",
    "GCStructure",
    "Splitting",
    "SquareIdentities",
    "validate_gcs",
    "split",
    "square_identities",
    "eigenbundles",
    "from_symplectic",
    "from_complex",
    "from_holomorphic_poisson",
    "from_dirac",
    "pointwise_poisson",
    "gl_action",
    "b_shear",
    "beta_shear",
    "conjugate_by",
    "flat_from_terms",
    "sharp_from_terms",
    "direct_sum",
]


class GCSError(ValueError):
    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class NotComplex(GCSError):
    """J^2 != -id."""


class NotOrthogonal(GCSError):
    """J does not preserve the pairing."""


class DegenerateForm(GCSError):
    pass


class NotAlmostComplex(GCSError):
    pass


class IncompatiblePair(GCSError):
    pass


def _square_check(m) -> None:
    rows = len(m)
    if rows % 2 or any(len(r) != rows for r in m):
        raise ValueError(f"J must be a square matrix of even size, got {rows} rows")


@dataclass(frozen=True)
class GCStructure:
    """A 2n x 2n matrix with J^2 = -id preserving the pairing. Checked on construction."""

    n: int
    J: tuple[tuple, ...]

    def __post_init__(self):
        m = [list(r) for r in self.J]
        _square_check(m)
        if len(m) != 2 * self.n:
            raise ValueError(f"J has size {len(m)}, expected {2 * self.n}")
        sq = madd(matmul(m, m), identity(len(m)))
        if not is_zero_matrix(sq):
            raise NotComplex("J^2 != -id", residual=sq)
        p = pairing_matrix(self.n)
        res = msub(matmul(matmul(transpose(m), p), m), p)
        if not is_zero_matrix(res):
            raise NotOrthogonal("J does not preserve the pairing (J^T P J != P)", residual=res)

    @property
    def matrix(self) -> list[list]:
        return [list(r) for r in self.J]

    def apply(self, v: Sequence) -> list:
        return matvec(self.J, v)


def validate_gcs(J) -> GCStructure:
    m = [[as_scalar(x) for x in r] for r in J]
    _square_check(m)
    return GCStructure(len(m) // 2, tuple(tuple(r) for r in m))


@dataclass(frozen=True)
class SquareIdentities:
    phi_squared: bool  # phi^2 + pi# sigma_flat = -id
    phi_pi: bool  # phi pi# = pi# phi^T
    phi_sigma: bool  # phi^T sigma_flat = sigma_flat phi
    residuals: dict

    @property
    def all_hold(self) -> bool:
        return self.phi_squared and self.phi_pi and self.phi_sigma


@dataclass(frozen=True)
class Splitting:
    phi: tuple[tuple, ...]
    pi_sharp: tuple[tuple, ...]
    sigma_flat: tuple[tuple, ...]

    @property
    def n(self) -> int:
        return len(self.phi)

    def assemble(self) -> list[list]:
        phi = [list(r) for r in self.phi]
        return block([[phi, [list(r) for r in self.pi_sharp]], [[list(r) for r in self.sigma_flat], mneg(transpose(phi))]])


def split(J: GCStructure) -> Splitting:
    n = J.n
    m = J.J
    phi = tuple(tuple(r[:n]) for r in m[:n])
    pi = tuple(tuple(r[n:]) for r in m[:n])
    sigma = tuple(tuple(r[:n]) for r in m[n:])
    br = [list(r[n:]) for r in m[n:]]
    # orthogonality forces this; fail loudly if a caller bypassed validation
    if br != mneg(transpose([list(r) for r in phi])):
        raise NotOrthogonal("bottom-right block is not -phi^T")
    return Splitting(phi, pi, sigma)


def square_identities(s: Splitting) -> SquareIdentities:
    phi = [list(r) for r in s.phi]
    pi = [list(r) for r in s.pi_sharp]
    sig = [list(r) for r in s.sigma_flat]
    n = len(phi)
    r1 = madd(madd(matmul(phi, phi), matmul(pi, sig)), identity(n))
    r2 = msub(matmul(phi, pi), matmul(pi, transpose(phi)))
    r3 = msub(matmul(transpose(phi), sig), matmul(sig, phi))
    return SquareIdentities(
        is_zero_matrix(r1),
        is_zero_matrix(r2),
        is_zero_matrix(r3),
        {"phi_squared": r1, "phi_pi": r2, "phi_sigma": r3},
    )


def eigenbundles(J: GCStructure) -> tuple[DiracStructure, DiracStructure]:
    """The +i and -i eigenspaces of J in (V + V*) tensor C."""
    m = J.matrix
    size = 2 * J.n
    plus = kernel(msub(m, mscale(I, identity(size))), size)
    minus = kernel(madd(m, mscale(I, identity(size))), size)
    return DiracStructure(J.n, plus), DiracStructure(J.n, minus)


def eigenbundle_images(J: GCStructure):
    """``(id - iJ) / 2`` and ``(id + iJ) / 2`` images; equal to :func:`eigenbundles` as subspaces."""
    m = J.matrix
    size = 2 * J.n
    p = msub(identity(size), mscale(I, m))
    q = madd(identity(size), mscale(I, m))
    return image(p, size), image(q, size)


def from_symplectic(omega_flat) -> GCStructure:
    w = [[as_scalar(x) for x in r] for r in omega_flat]
    if not is_skew(w):
        raise ValueError("omega_flat is not skew-symmetric")
    try:
        winv = inverse(w)
    except ValueError:
        raise DegenerateForm("symplectic form is degenerate") from None
    n = len(w)
    return validate_gcs(block([[zeros(n, n), mneg(winv)], [w, zeros(n, n)]]))


def from_complex(j) -> GCStructure:
    j = [[as_scalar(x) for x in r] for r in j]
    n = len(j)
    sq = madd(matmul(j, j), identity(n))
    if not is_zero_matrix(sq):
        raise NotAlmostComplex("j^2 != -id", residual=sq)
    return validate_gcs(block([[j, zeros(n, n)], [zeros(n, n), mneg(transpose(j))]]))


def from_holomorphic_poisson(j, pi_sharp) -> GCStructure:
    j = [[as_scalar(x) for x in r] for r in j]
    pi = [[as_scalar(x) for x in r] for r in pi_sharp]
    n = len(j)
    sq = madd(matmul(j, j), identity(n))
    if not is_zero_matrix(sq):
        raise NotAlmostComplex("j^2 != -id", residual=sq)
    if not is_skew(pi):
        raise ValueError("pi_sharp is not skew-symmetric")
    res = msub(matmul(j, pi), matmul(pi, transpose(j)))
    if not is_zero_matrix(res):
        raise IncompatiblePair("j pi# != pi# j^T", residual=res)
    return validate_gcs(block([[j, pi], [zeros(n, n), mneg(transpose(j))]]))


def from_dirac(L: DiracStructure) -> GCStructure:
    """The real J with +i eigenspace L; needs L and its conjugate to be transverse."""
    n = L.n
    cols = [list(b) for b in L.basis] + [[conj(x) for x in b] for b in L.basis]
    t = transpose(cols)
    try:
        tinv = inverse(t)
    except ValueError:
        raise GCSError("L meets its conjugate: no generalized complex structure") from None
    d = zeros(2 * n, 2 * n)
    for i in range(n):
        d[i][i] = I
        d[n + i][n + i] = -I
    m = matmul(matmul(t, d), tinv)
    if not all(is_real(x) for r in m for x in r):
        raise GCSError("reconstructed J is not real")
    return validate_gcs([[canon(x) for x in r] for r in m])


def pointwise_poisson(J: GCStructure, df: Sequence, dg: Sequence):
    """{f, g} = 2 <J df, dg> with df, dg covectors at the point."""
    n = J.n
    a = [as_scalar(0)] * n + list(df)
    b = [as_scalar(0)] * n + list(dg)
    return 2 * pairing(J.apply(a), b)


# ---------------------------------------------------------------------------
# pairing-preserving maps and small builders


def gl_action(a) -> list[list]:
    """``diag(A, A^{-T})``: the action of GL(V) on V + V*."""
    a = [[as_scalar(x) for x in r] for r in a]
    return block([[a, zeros(len(a), len(a))], [zeros(len(a), len(a)), transpose(inverse(a))]])


def b_shear(b) -> list[list]:
    """``[[I, 0], [B, I]]`` with B skew (a B-field transform)."""
    n = len(b)
    return block([[identity(n), zeros(n, n)], [[[as_scalar(x) for x in r] for r in b], identity(n)]])


def beta_shear(beta) -> list[list]:
    """``[[I, beta], [0, I]]`` with beta skew."""
    n = len(beta)
    return block([[identity(n), [[as_scalar(x) for x in r] for r in beta]], [zeros(n, n), identity(n)]])


def conjugate_by(g, J: GCStructure) -> GCStructure:
    return validate_gcs(matmul(matmul(g, J.matrix), inverse(g)))


def flat_from_terms(n: int, terms) -> list[list]:
    """Flat matrix of ``sum c * e^i ^ e^j`` given ``[(i, j, c), ...]`` (0-based)."""
    out = zeros(n, n)
    for i, j, c in terms:
        c = as_scalar(c)
        # (e^i ^ e^j)(e_i, e_j) = 1, and flat[b][a] = form(e_a, e_b)
        out[j][i] = out[j][i] + c
        out[i][j] = out[i][j] - c
    return out


def sharp_from_terms(n: int, terms) -> list[list]:
    """``pi_sharp`` of ``sum c * d_i ^ d_j`` given ``[(i, j, c), ...]`` (0-based)."""
    # pi(e^i, e^j) = e^j(pi# e^i) = c, so column i has +c in row j
    return flat_from_terms(n, terms)


def direct_sum(a: GCStructure, b: GCStructure) -> GCStructure:
    """J_a + J_b on (V_a + V_b) + (V_a + V_b)*, coordinates ordered (V_a, V_b, V_a*, V_b*)."""
    sa, sb = split(a), split(b)
    na, nb = a.n, b.n

    def diag(x, y):
        x = [list(r) for r in x]
        y = [list(r) for r in y]
        return block([[x, zeros(na, nb)], [zeros(nb, na), y]])

    return validate_gcs(
        Splitting(
            tuple(map(tuple, diag(sa.phi, sb.phi))),
            tuple(map(tuple, diag(sa.pi_sharp, sb.pi_sharp))),
            tuple(map(tuple, diag(sa.sigma_flat, sb.sigma_flat))),
        ).assemble()
    )
