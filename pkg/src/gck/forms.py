"""Differential forms, vector fields and sections on a coordinate patch.

Coefficients live in Q(x1..xn). A k-form is a dict from strictly increasing
0-based index tuples to nonzero coefficients. Vector fields and 1-form
components are plain length-n tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from .ratfun import compose, lift, ratfield

__all__ = [
    "DegreeError",
    "FormField",
    "Section",
    "vector_field",
    "apply_vector",
    "lie_bracket",
    "d",
    "wedge",
    "interior",
    "lie",
    "pullback",
    "jacobian",
]


class DegreeError(ValueError):
    pass


def _sort_sign(idx):
    """Sign of the permutation sorting ``idx``, or 0 on a repeated index."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


@dataclass(frozen=True)
class FormField:
    n: int
    degree: int
    terms: tuple  # sorted ((indices, coeff), ...), zero coefficients dropped

    @classmethod
    def make(cls, n: int, degree: int, coeffs: Mapping) -> "FormField":
        if degree < 0 or degree > n:
            raise DegreeError(f"no {degree}-forms on an {n}-dimensional patch")
        acc: dict = {}
        for idx, c in coeffs.items():
            idx = tuple(idx)
            if len(idx) != degree or any(not 0 <= i < n for i in idx):
                raise ValueError(f"bad index tuple {idx} for a {degree}-form in dimension {n}")
            sign, key = _sort_sign(idx)
            if sign:
                acc[key] = acc.get(key, ratfield(n)(0)) + sign * lift(n, c)
        return cls(n, degree, tuple(sorted((k, v) for k, v in acc.items() if v)))

    @classmethod
    def zero(cls, n: int, degree: int) -> "FormField":
        return cls.make(n, degree, {})

    @classmethod
    def function(cls, n: int, f) -> "FormField":
        return cls.make(n, 0, {(): f})

    @classmethod
    def dx(cls, n: int, i: int) -> "FormField":
        return cls.make(n, 1, {(i,): 1})

    @classmethod
    def one_form(cls, comps: Sequence) -> "FormField":
        n = len(comps)
        return cls.make(n, 1, {(i,): c for i, c in enumerate(comps)})

    def coeff(self, idx) -> object:
        sign, key = _sort_sign(idx)
        K = ratfield(self.n)
        if not sign:
            return K(0)
        return sign * dict(self.terms).get(key, K(0))

    def components(self) -> tuple:
        """Components of a 1-form as a length-n tuple (or the value of a 0-form)."""
        if self.degree == 0:
            return (self.coeff(()),)
        if self.degree != 1:
            raise DegreeError("components() is for 0- and 1-forms")
        return tuple(self.coeff((i,)) for i in range(self.n))

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "FormField") -> "FormField":
        _same(self, other)
        acc = dict(self.terms)
        for k, v in other.terms:
            acc[k] = acc.get(k, 0) + v
        return FormField.make(self.n, self.degree, acc)

    def __neg__(self) -> "FormField":
        return FormField(self.n, self.degree, tuple((k, -v) for k, v in self.terms))

    def __sub__(self, other: "FormField") -> "FormField":
        return self + (-other)

    def scale(self, f) -> "FormField":
        f = lift(self.n, f)
        return FormField.make(self.n, self.degree, {k: f * v for k, v in self.terms})

    def __repr__(self) -> str:
        if not self.terms:
            return f"0 ({self.degree}-form)"
        parts = []
        for k, v in self.terms:
            basis = "^".join(f"dx{i + 1}" for i in k) or "1"
            parts.append(f"({v})*{basis}")
        return " + ".join(parts)


def _same(a: FormField, b: FormField) -> None:
    if a.n != b.n or a.degree != b.degree:
        raise DegreeError(f"cannot add a {a.degree}-form on R^{a.n} to a {b.degree}-form on R^{b.n}")


def vector_field(n: int, comps: Sequence) -> tuple:
    if len(comps) != n:
        raise ValueError(f"vector field needs {n} components")
    return tuple(lift(n, c) for c in comps)


def apply_vector(x: Sequence, f):
    """``X(f) = sum X^i d_i f``."""
    n = len(x)
    f = lift(n, f)
    gens = ratfield(n).gens
    out = ratfield(n)(0)
    for xi, g in zip(x, gens):
        if xi:
            out = out + xi * f.diff(g)
    return out


def lie_bracket(x: Sequence, y: Sequence) -> tuple:
    return tuple(apply_vector(x, yi) - apply_vector(y, xi) for xi, yi in zip(x, y))


def d(form) -> FormField:
    """Exterior derivative of a form (wrap functions with ``FormField.function``)."""
    if not isinstance(form, FormField):
        raise TypeError("d expects a FormField; wrap functions with FormField.function")
    n = form.n
    if form.degree == n:
        # top forms are closed; the zero (n+1)-form is kept only as a placeholder
        return FormField(n, n + 1, ())
    gens = ratfield(n).gens
    acc: dict = {}
    for idx, c in form.terms:
        for i, g in enumerate(gens):
            dc = c.diff(g)
            if dc:
                key = (i,) + idx
                acc[key] = acc.get(key, 0) + dc
    return FormField.make(n, form.degree + 1, acc)


def wedge(a: FormField, b: FormField) -> FormField:
    if a.n != b.n:
        raise DegreeError("forms live on different patches")
    if a.degree + b.degree > a.n:
        raise DegreeError(f"degree {a.degree + b.degree} exceeds dimension {a.n}")
    acc: dict = {}
    for ia, ca in a.terms:
        for ib, cb in b.terms:
            sign, key = _sort_sign(ia + ib)
            if sign:
                acc[key] = acc.get(key, 0) + sign * ca * cb
    return FormField.make(a.n, a.degree + b.degree, acc)


def interior(x: Sequence, form: FormField) -> FormField:
    """``iota_X form``; the interior of a 0-form is 0 by convention."""
    n = form.n
    x = vector_field(n, x)
    if form.degree == 0:
        return FormField.zero(n, 0)
    acc: dict = {}
    for idx, c in form.terms:
        for m, i in enumerate(idx):
            if x[i]:
                key = idx[:m] + idx[m + 1:]
                term = (-1) ** m * x[i] * c
                acc[key] = acc.get(key, 0) + term
    return FormField.make(n, form.degree - 1, acc)


def lie(x: Sequence, form: FormField) -> FormField:
    """Lie derivative by the coordinate rule ``L_X dx^i = dX^i`` plus Leibniz (no Cartan)."""
    n = form.n
    x = vector_field(n, x)
    gens = ratfield(n).gens
    dx = [[xi.diff(g) for g in gens] for xi in x]  # dx[i][j] = d_j X^i
    acc: dict = {}
    for idx, c in form.terms:
        xc = apply_vector(x, c)
        if xc:
            acc[idx] = acc.get(idx, 0) + xc
        for m, i in enumerate(idx):
            for j in range(n):
                if dx[i][j]:
                    key = idx[:m] + (j,) + idx[m + 1:]
                    sign, skey = _sort_sign(key)
                    if sign:
                        acc[skey] = acc.get(skey, 0) + sign * c * dx[i][j]
    return FormField.make(n, form.degree, acc)


def jacobian(images: Sequence, source_n: int) -> list[list]:
    """``dh`` as a target_n x source_n matrix of rational functions."""
    gens = ratfield(source_n).gens
    return [[lift(source_n, h).diff(g) for g in gens] for h in images]


def pullback(images: Sequence, form: FormField, source_n: int) -> FormField:
    """``h^* form`` for ``h = images`` (components in Q(y1..y_source_n))."""
    if len(images) != form.n:
        raise ValueError("map must have one component per target coordinate")
    k = form.degree
    if k > source_n:
        return FormField(source_n, k, ())
    jac = jacobian(images, source_n)
    acc: dict = {}
    for idx, c in form.terms:
        cc = compose(c, images, source_n)
        for cols in combinations(range(source_n), k):
            minor = _det([[jac[i][j] for j in cols] for i in idx], source_n)
            if minor:
                acc[cols] = acc.get(cols, 0) + cc * minor
    return FormField.make(source_n, k, acc)


def _det(m, n):
    k = len(m)
    if k == 0:
        return ratfield(n)(1)
    if k == 1:
        return m[0][0]
    out = ratfield(n)(0)
    for j in range(k):
        if m[0][j]:
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            out = out + (-1) ** j * m[0][j] * _det(minor, n)
    return out


@dataclass(frozen=True)
class Section:
    """``X + xi`` with rational-function components."""

    x: tuple
    xi: tuple

    @classmethod
    def make(cls, n: int, x=None, xi=None) -> "Section":
        z = [0] * n
        return cls(vector_field(n, x if x is not None else z), vector_field(n, xi if xi is not None else z))

    @property
    def n(self) -> int:
        return len(self.x)

    def covector(self) -> FormField:
        return FormField.one_form(self.xi)

    def __add__(self, o: "Section") -> "Section":
        return Section(tuple(a + b for a, b in zip(self.x, o.x)), tuple(a + b for a, b in zip(self.xi, o.xi)))

    def __sub__(self, o: "Section") -> "Section":
        return Section(tuple(a - b for a, b in zip(self.x, o.x)), tuple(a - b for a, b in zip(self.xi, o.xi)))

    def __neg__(self) -> "Section":
        return Section(tuple(-a for a in self.x), tuple(-a for a in self.xi))

    def scale(self, f) -> "Section":
        f = lift(self.n, f)
        return Section(tuple(f * a for a in self.x), tuple(f * a for a in self.xi))

    def as_list(self) -> list:
        return list(self.x) + list(self.xi)

    @classmethod
    def from_list(cls, v: Sequence) -> "Section":
        n = len(v) // 2
        return cls(tuple(lift(n, c) for c in v[:n]), tuple(lift(n, c) for c in v[n:]))

    def is_zero(self) -> bool:
        return not any(self.x) and not any(self.xi)
