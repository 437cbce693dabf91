"""Exact linear algebra and the subspace lattice.

Matrices are plain row-major lists of lists. Vectors are sequences. Entries are
any exact field elements (see :mod:`gck.scalars`); Python ints are promoted to
``mpq`` on entry so that division stays exact.

A :class:`Subspace` stores its basis in reduced row-echelon form, which makes
subspace equality plain data equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .scalars import as_scalar, canon, conj

__all__ = [
    "Subspace",
    "rref",
    "rank",
    "kernel",
    "image",
    "subspace_sum",
    "intersect",
    "annihilator",
    "preimage",
    "apply",
    "solve",
    "inverse",
    "det",
    "matmul",
    "matvec",
    "transpose",
    "identity",
    "zeros",
    "madd",
    "msub",
    "mscale",
    "mneg",
    "block",
    "is_zero_matrix",
    "is_skew",
    "mconj",
]


# ---------------------------------------------------------------------------
# small matrix helpers


def zeros(r: int, c: int) -> list[list]:
    return [[as_scalar(0)] * c for _ in range(r)]


def identity(n: int) -> list[list]:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = as_scalar(1)
    return out


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)] if m else []


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    if not bt:
        return [[] for _ in a]
    out = []
    for row in a:
        out.append([_dot(row, col) for col in bt])
    return out


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [_dot(row, v) for row in a]


def _dot(u, v):
    acc = as_scalar(0)
    for x, y in zip(u, v):
        if x and y:
            acc = acc + x * y
    return acc


def madd(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def msub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mscale(c, a):
    return [[c * x for x in row] for row in a]


def mneg(a):
    return [[-x for x in row] for row in a]


def mconj(a):
    return [[conj(x) for x in row] for row in a]


def block(rows_of_blocks: Sequence[Sequence[Sequence[Sequence]]]) -> list[list]:
    """Assemble a block matrix from a grid of equally-sized-per-row blocks."""
    out = []
    for brow in rows_of_blocks:
        height = len(brow[0])
        for i in range(height):
            line = []
            for blk in brow:
                line.extend(blk[i])
            out.append(line)
    return out


def is_zero_matrix(m) -> bool:
    return all(not x for row in m for x in row)


def is_skew(m) -> bool:
    n = len(m)
    return all(m[i][j] == -m[j][i] for i in range(n) for j in range(i, n))


# ---------------------------------------------------------------------------
# echelon forms


def rref(m: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list], list[int]]:
    """Reduced row-echelon form of ``m`` (same shape, zero rows last) and its pivot columns."""
    red, piv = _rref(m, ncols)
    width = ncols if ncols is not None else (len(m[0]) if m else 0)
    return red + zeros(len(m) - len(red), width), piv


def _rref(m: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list], list[int]]:
    # zero rows dropped
    rows = [[as_scalar(x) for x in r] for r in m]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][c]
        if lead != 1:
            inv = 1 / lead
            rows[r] = [x * inv if x else x for x in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    rows[i] = [a - f * b if b else a for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return [[canon(x) for x in row] for row in rows[:r]], pivots


def rank(m: Sequence[Sequence]) -> int:
    return len(_rref(m)[1])


def solve(a: Sequence[Sequence], b: Sequence) -> list | None:
    """A particular solution of ``a x = b``, or None when inconsistent.

    Free variables are set to zero, so the answer is the echelon-canonical
    particular solution.
    """
    nvars = len(a[0]) if a else 0
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    red, piv = _rref(aug, nvars + 1)
    if piv and piv[-1] == nvars:
        return None
    x = [as_scalar(0)] * nvars
    for row, p in zip(red, piv):
        x[p] = row[nvars]
    return x


def inverse(a: Sequence[Sequence]) -> list[list]:
    n = len(a)
    aug = [list(row) + e for row, e in zip(a, identity(n))]
    red, piv = _rref(aug, n)
    if piv != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def det(a: Sequence[Sequence]):
    """Determinant by exact elimination."""
    n = len(a)
    if n == 0:
        return as_scalar(1)
    rows = [[as_scalar(x) for x in r] for r in a]
    out = as_scalar(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return as_scalar(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            out = -out
        lead = rows[c][c]
        out = out * lead
        for i in range(c + 1, n):
            f = rows[i][c]
            if f:
                q = f / lead
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[c])]
    return canon(out)


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of F^ambient_dim with an RREF basis (rows)."""

    ambient_dim: int
    basis: tuple[tuple, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        vecs = [list(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise ValueError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        red, _ = _rref(vecs, ambient_dim)
        return cls(ambient_dim, tuple(tuple(r) for r in red))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, tuple(tuple(r) for r in _rref(identity(n), n)[0]))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> list[int]:
        out = []
        for row in self.basis:
            out.append(next(i for i, x in enumerate(row) if x))
        return out

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def coordinates(self, v: Sequence) -> list | None:
        """Coefficients of ``v`` in the echelon basis, or None if ``v`` is outside."""
        v = [as_scalar(x) for x in v]
        coeffs = [v[p] for p in self.pivots]
        rest = list(v)
        for c, row in zip(coeffs, self.basis):
            if c:
                rest = [a - c * b if b else a for a, b in zip(rest, row)]
        if any(rest):
            return None
        return coeffs

    def issubset(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        return all(other.contains(b) for b in self.basis)

    def __le__(self, other: "Subspace") -> bool:
        return self.issubset(other)

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def annihilator(self) -> "Subspace":
        return annihilator(self)

    def conjugate(self) -> "Subspace":
        # conjugating an RREF matrix entrywise keeps it in RREF
        return Subspace(self.ambient_dim, tuple(tuple(canon(conj(x)) for x in row) for row in self.basis))

    def is_real(self) -> bool:
        return self == self.conjugate()

    def matrix(self) -> list[list]:
        return [list(r) for r in self.basis]

    def __repr__(self) -> str:
        rows = ", ".join("(" + ", ".join(str(x) for x in r) + ")" for r in self.basis)
        return f"Subspace(n={self.ambient_dim}, [{rows}])"


def _check_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(f"ambient dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}")


def kernel(m: Sequence[Sequence], ncols: int | None = None) -> Subspace:
    """Null space ``{x : m x = 0}``."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    red, piv = _rref(m, ncols)
    free = [c for c in range(ncols) if c not in set(piv)]
    vecs = []
    for f in free:
        v = [as_scalar(0)] * ncols
        v[f] = as_scalar(1)
        for row, p in zip(red, piv):
            v[p] = -row[f]
        vecs.append(v)
    return Subspace.span(vecs, ncols)


def image(m: Sequence[Sequence], nrows: int | None = None) -> Subspace:
    """Column space of ``m``."""
    if nrows is None:
        nrows = len(m)
    return Subspace.span(transpose(m), nrows)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    return Subspace.span(list(a.basis) + list(b.basis), a.ambient_dim)


def annihilator(s: Subspace) -> Subspace:
    """``{xi : xi(x) = 0 for all x in s}`` in dual coordinates (bilinear, no conjugation)."""
    if s.is_zero():
        return Subspace.full(s.ambient_dim)
    return kernel(s.basis, s.ambient_dim)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    if a.is_zero() or b.is_zero():
        return Subspace.zero(a.ambient_dim)
    return annihilator(subspace_sum(annihilator(a), annihilator(b)))


def preimage(m: Sequence[Sequence], s: Subspace, ncols: int | None = None) -> Subspace:
    """``{x : m x in s}`` for ``m`` mapping F^ncols -> F^(s.ambient_dim)."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    if len(m) != s.ambient_dim:
        raise ValueError(f"map codomain {len(m)} does not match subspace ambient {s.ambient_dim}")
    ann = annihilator(s)
    if ann.is_zero():
        return Subspace.full(ncols)
    return kernel(matmul(ann.basis, m), ncols)


def apply(m: Sequence[Sequence], s: Subspace) -> Subspace:
    """Image of the subspace ``s`` under ``m``."""
    if m and len(m[0]) != s.ambient_dim:
        raise ValueError("map domain does not match subspace ambient")
    return Subspace.span([matvec(m, b) for b in s.basis], len(m))
