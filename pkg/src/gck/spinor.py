"""Spinors: forms in the complexified exterior algebra of V*, with Clifford action.

A spinor on V (dim n <= 6) is a tuple of 2^n coefficients indexed by bitmasks:
bit i set means e^{i+1} is a factor, with factors in increasing order. The
Clifford action is ``(X + xi) . mu = iota_X mu + xi ^ mu``.

Normal form: ``pure_from_data(c, R, eps) = c det(R°) ^ exp(eps~)`` has null
space ``L(R, -eps)``; :func:`spinor_from_dirac` accounts for that sign so that
``null_space(spinor_from_dirac(L)) == L``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import factorial
from typing import Mapping, Sequence

from .dirac import DiracStructure, GraphData, graph_data, pull_back
from .linalg import Subspace, annihilator, det, intersect, is_skew, kernel, transpose
from .scalars import as_scalar, canon, conj, mpq

__all__ = [
    "MAX_N",
    "Spinor",
    "ZeroSpinor",
    "NotPure",
    "ZeroPullback",
    "PureSpinorData",
    "clifford_act",
    "null_space",
    "is_pure",
    "pure_from_data",
    "spinor_from_dirac",
    "projectively_equal",
    "mukai",
    "transverse_test",
    "transverse_by_intersection",
    "restrict_spinor",
    "pullback_spinor",
    "pullback_spinor_line",
    "spinor_submanifold_check",
    "SubmanifoldSpinorCheck",
    "wedge",
    "two_form",
    "exp_form",
]

MAX_N = 6


class ZeroSpinor(ValueError):
    pass


class NotPure(ValueError):
    pass


class ZeroPullback(ValueError):
    def __init__(self, message, dirac=None):
        super().__init__(message)
        self.dirac = dirac


def _popcount(m: int) -> int:
    return bin(m).count("1")


def _wedge_sign(a: int, b: int) -> int:
    """Sign of e^A ^ e^B relative to e^(A u B) (0 when A and B overlap)."""
    if a & b:
        return 0
    swaps = 0
    bb = b
    while bb:
        low = bb & -bb
        # elements of A above this element of B have to move past it
        swaps += _popcount(a & ~((low << 1) - 1))
        bb ^= low
    return -1 if swaps % 2 else 1


@dataclass(frozen=True)
class Spinor:
    n: int
    coeffs: tuple

    def __post_init__(self):
        if not 0 <= self.n <= MAX_N:
            raise ValueError(f"spinors are supported for n <= {MAX_N}")
        if len(self.coeffs) != 1 << self.n:
            raise ValueError(f"need {1 << self.n} coefficients for n = {self.n}")

    @classmethod
    def make(cls, n: int, coeffs: Sequence) -> "Spinor":
        return cls(n, tuple(canon(as_scalar(c)) for c in coeffs))

    @classmethod
    def zero(cls, n: int) -> "Spinor":
        return cls.make(n, [0] * (1 << n))

    @classmethod
    def one(cls, n: int) -> "Spinor":
        return cls.from_terms(n, {(): 1})

    @classmethod
    def from_terms(cls, n: int, terms: Mapping) -> "Spinor":
        """From ``{(i, j, ...): c}`` with 0-based indices in any order."""
        out = [mpq(0)] * (1 << n)
        for idx, c in terms.items():
            mask, sign = 0, 1
            for i in idx:
                if not 0 <= i < n:
                    raise ValueError(f"index {i} out of range for n = {n}")
                s = _wedge_sign(mask, 1 << i)
                if not s:
                    mask = None
                    break
                sign *= s
                mask |= 1 << i
            if mask is not None:
                out[mask] = out[mask] + sign * as_scalar(c)
        return cls.make(n, out)

    def terms(self) -> dict:
        return {tuple(i for i in range(self.n) if m >> i & 1): c for m, c in enumerate(self.coeffs) if c}

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, o: "Spinor") -> "Spinor":
        return Spinor.make(self.n, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    def __sub__(self, o: "Spinor") -> "Spinor":
        return Spinor.make(self.n, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def scale(self, c) -> "Spinor":
        c = as_scalar(c)
        return Spinor.make(self.n, [c * a for a in self.coeffs])

    def conjugate(self) -> "Spinor":
        return Spinor.make(self.n, [conj(a) for a in self.coeffs])

    def top(self):
        return self.coeffs[-1]

    def __repr__(self) -> str:
        parts = []
        for idx, c in self.terms().items():
            name = "^".join(f"e{i + 1}" for i in idx) or "1"
            parts.append(f"({c})*{name}")
        return " + ".join(parts) if parts else "0"


def wedge(a: Spinor, b: Spinor) -> Spinor:
    n = a.n
    out = [mpq(0)] * (1 << n)
    for ma, ca in enumerate(a.coeffs):
        if not ca:
            continue
        for mb, cb in enumerate(b.coeffs):
            if cb:
                s = _wedge_sign(ma, mb)
                if s:
                    out[ma | mb] = out[ma | mb] + s * ca * cb
    return Spinor.make(n, out)


def two_form(flat) -> Spinor:
    """Spinor of the 2-form with flat matrix ``flat[b][a] = eps(e_a, e_b)``."""
    n = len(flat)
    return Spinor.from_terms(n, {(a, b): flat[b][a] for a in range(n) for b in range(a + 1, n) if flat[b][a]})


def exp_form(eps: Spinor) -> Spinor:
    """``exp`` of a 2-form spinor (the series stops at degree n)."""
    out = Spinor.one(eps.n)
    power = Spinor.one(eps.n)
    for k in range(1, eps.n // 2 + 1):
        power = wedge(power, eps)
        out = out + power.scale(mpq(1, factorial(k)))
    return out


def clifford_act(v: Sequence, mu: Spinor) -> Spinor:
    """``(X + xi) . mu = iota_X mu + xi ^ mu``; ``v`` has length 2n."""
    n = mu.n
    if len(v) != 2 * n:
        raise ValueError(f"need a vector of length {2 * n}")
    out = [mpq(0)] * (1 << n)
    for m, c in enumerate(mu.coeffs):
        if not c:
            continue
        for i in range(n):
            bit = 1 << i
            x, xi = v[i], v[n + i]
            if x and m & bit:
                # move e^i to the front, then contract
                sign = -1 if _popcount(m & (bit - 1)) % 2 else 1
                out[m ^ bit] = out[m ^ bit] + sign * x * c
            if xi and not m & bit:
                sign = -1 if _popcount(m & (bit - 1)) % 2 else 1
                out[m | bit] = out[m | bit] + sign * xi * c
    return Spinor.make(n, out)


def _action_matrix(mu: Spinor) -> list[list]:
    n = mu.n
    cols = []
    for k in range(2 * n):
        e = [0] * (2 * n)
        e[k] = 1
        cols.append(list(clifford_act(e, mu).coeffs))
    return transpose(cols)


def null_space(mu: Spinor) -> Subspace:
    if mu.is_zero():
        raise ZeroSpinor("the zero spinor has no null space")
    return kernel(_action_matrix(mu), 2 * mu.n)


def is_pure(mu: Spinor) -> bool:
    return null_space(mu).dim == mu.n


@dataclass(frozen=True)
class PureSpinorData:
    c: object
    R: Subspace
    eps: tuple

    def __post_init__(self):
        if not self.c:
            raise ValueError("c must be nonzero")
        GraphData(self.R, tuple(tuple(r) for r in self.eps), "vector")


def _det_annihilator(R: Subspace) -> Spinor:
    n = R.ambient_dim
    out = Spinor.one(n)
    for theta in annihilator(R).basis:
        out = wedge(out, Spinor.from_terms(n, {(i,): x for i, x in enumerate(theta) if x}))
    return out


def default_extension(R: Subspace, eps) -> list[list]:
    """Extend eps by zero: eps~ = sum eps(r_a, r_b) e^{p_a} ^ e^{p_b} over echelon pivots."""
    n = R.ambient_dim
    piv = R.pivots
    flat = [[mpq(0)] * n for _ in range(n)]
    for a, pa in enumerate(piv):
        for b, pb in enumerate(piv):
            flat[pb][pa] = as_scalar(eps[b][a])
    return flat


def _restricted(R: Subspace, flat) -> list[list]:
    k = R.dim
    out = [[mpq(0)] * k for _ in range(k)]
    for a, ra in enumerate(R.basis):
        for b, rb in enumerate(R.basis):
            acc = mpq(0)
            for i, x in enumerate(ra):
                if x:
                    for j, y in enumerate(rb):
                        if y and flat[j][i]:
                            acc = acc + x * y * flat[j][i]
            out[b][a] = canon(acc)
    return out


def pure_from_data(data: PureSpinorData, extension=None) -> Spinor:
    """``c det(R°) ^ exp(eps~)``; any skew extension of eps to V gives the same spinor."""
    R = data.R
    if extension is None:
        extension = default_extension(R, data.eps)
    else:
        extension = [[as_scalar(x) for x in r] for r in extension]
        if not is_skew(extension):
            raise ValueError("extension is not skew")
        if _restricted(R, extension) != [[canon(as_scalar(x)) for x in r] for r in data.eps]:
            raise ValueError("extension does not restrict to eps on R")
    body = wedge(_det_annihilator(R), exp_form(two_form(extension)))
    return body.scale(data.c)


def spinor_from_dirac(L: DiracStructure) -> Spinor:
    (R, eps, _), _ = ((g.carrier, g.form, g.side) for g in graph_data(L))
    neg = [[-x for x in r] for r in eps]
    return pure_from_data(PureSpinorData(mpq(1), R, tuple(tuple(r) for r in neg)))


def projectively_equal(a: Spinor, b: Spinor) -> bool:
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    k = next(i for i, c in enumerate(a.coeffs) if c)
    if not b.coeffs[k]:
        return False
    ratio = b.coeffs[k] / a.coeffs[k]
    return all(canon(ratio * x) == canon(y) for x, y in zip(a.coeffs, b.coeffs))


def _reverse_sign(k: int) -> int:
    return -1 if (k * (k - 1) // 2) % 2 else 1


def mukai(mu: Spinor, nu: Spinor):
    """Top coefficient of ``alpha(mu) ^ nu``, alpha = (-1)^{k(k-1)/2} on degree k."""
    if mu.n != nu.n:
        raise ValueError("spinors live on different spaces")
    alpha = Spinor.make(mu.n, [_reverse_sign(_popcount(m)) * c for m, c in enumerate(mu.coeffs)])
    return wedge(alpha, nu).top()


def transverse_test(mu: Spinor) -> bool:
    """``<mu, conj mu> != 0``."""
    if not is_pure(mu):
        raise NotPure("transversality is tested on pure spinors only")
    return bool(mukai(mu, mu.conjugate()))


def transverse_by_intersection(mu: Spinor) -> bool:
    L = null_space(mu)
    return intersect(L, L.conjugate()).is_zero()


def restrict_spinor(h, mu: Spinor) -> Spinor:
    """``h^* mu`` for an n x k matrix h (columns span W)."""
    n = mu.n
    if len(h) != n:
        raise ValueError("inclusion has the wrong number of rows")
    k = len(h[0]) if h else 0
    out = [mpq(0)] * (1 << k)
    for m, c in enumerate(mu.coeffs):
        if not c:
            continue
        rows = [i for i in range(n) if m >> i & 1]
        if len(rows) > k:
            continue
        for cols in combinations(range(k), len(rows)):
            minor = det([[h[i][j] for j in cols] for i in rows])
            if minor:
                mask = sum(1 << j for j in cols)
                out[mask] = out[mask] + c * minor
    return Spinor.make(k, out)


def pullback_spinor(h, mu: Spinor) -> Spinor:
    """Literal restriction; raises ZeroPullback (carrying the Dirac pull-back) when it vanishes."""
    out = restrict_spinor(h, mu)
    if out.is_zero():
        L = DiracStructure(mu.n, null_space(mu))
        raise ZeroPullback("h^* mu = 0", pull_back(h, L))
    return out


def pullback_spinor_line(h, mu: Spinor) -> Spinor:
    """Generator of the pulled-back spinor line, ``c det((h^-1 R)°) ^ exp(h^* eps)``.

    Coincides with :func:`restrict_spinor` up to scale whenever that is nonzero.
    """
    L = DiracStructure(mu.n, null_space(mu))
    return spinor_from_dirac(pull_back(h, L))


@dataclass
class SubmanifoldSpinorCheck:
    holds: bool
    line: Spinor
    mukai_value: object
    literal: Spinor
    literal_zero: bool


def spinor_submanifold_check(h, mu: Spinor) -> SubmanifoldSpinorCheck:
    """Pulled-back spinor line is pure and Mukai-transverse."""
    if not is_pure(mu):
        raise NotPure("need a pure spinor")
    line = pullback_spinor_line(h, mu)
    value = mukai(line, line.conjugate())
    literal = restrict_spinor(h, mu)
    holds = is_pure(line) and bool(value)
    return SubmanifoldSpinorCheck(holds, line, value, literal, literal.is_zero())
