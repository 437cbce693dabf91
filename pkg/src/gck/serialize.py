"""Lossless JSON encodings.

Rationals are ``"p/q"`` strings, complex numbers ``{"re": .., "im": ..}``,
rational functions are expression strings in x1..xn, and form or spinor
indices are 1-based.
"""

from __future__ import annotations

from typing import Any

from .gcs import GCStructure, Splitting, validate_gcs
from .forms import FormField
from .linalg import Subspace
from .ratfun import is_ratfun, parse_ratfun, to_str
from .scalars import GaussQ, canon, mpq, parse_rational
from .spinor import Spinor

__all__ = [
    "dump_scalar",
    "load_scalar",
    "dump_matrix",
    "load_matrix",
    "dump_subspace",
    "load_subspace",
    "dump_spinor",
    "load_spinor",
    "dump_splitting",
    "load_splitting",
    "dump_form",
    "load_form",
    "dump_gcs",
    "load_gcs",
]

def dump_scalar(x) -> Any:
    if is_ratfun(x):
        if not (x.numer.is_ground and x.denom.is_ground):
            return to_str(x)
        x = parse_rational(to_str(x))
    x = canon(x)
    if isinstance(x, GaussQ):
        return {"re": dump_scalar(x.re), "im": dump_scalar(x.im)}
    x = mpq(x)
    return f"{x.numerator}/{x.denominator}"


def load_scalar(obj, n_vars: int | None = None):
    """Inverse of :func:`dump_scalar`; expression strings need ``n_vars``."""
    if isinstance(obj, dict):
        if set(obj) != {"re", "im"}:
            raise ValueError(f"complex scalars need exactly 're' and 'im', got {sorted(obj)}")
        return canon(GaussQ(load_scalar(obj["re"]), load_scalar(obj["im"])))
    if isinstance(obj, bool) or isinstance(obj, float):
        raise ValueError(f"{obj!r} is not an exact scalar")
    if isinstance(obj, int):
        return mpq(obj)
    if isinstance(obj, str):
        try:
            return parse_rational(obj)
        except (ValueError, TypeError):
            if n_vars is None:
                raise ValueError(f"{obj!r} is not a rational number") from None
            return parse_ratfun(obj, n_vars)
    raise ValueError(f"cannot read a scalar from {obj!r}")


def dump_matrix(m) -> list:
    return [[dump_scalar(x) for x in row] for row in m]


def load_matrix(obj, n_vars: int | None = None) -> list[list]:
    if not isinstance(obj, list) or any(not isinstance(r, list) for r in obj):
        raise ValueError("a matrix is a list of rows")
    widths = {len(r) for r in obj}
    if len(widths) > 1:
        raise ValueError(f"ragged matrix with row lengths {sorted(widths)}")
    return [[load_scalar(x, n_vars) for x in r] for r in obj]


def dump_subspace(s: Subspace) -> dict:
    return {"ambient_dim": s.ambient_dim, "basis": dump_matrix(s.basis)}


def load_subspace(obj) -> Subspace:
    return Subspace.span(load_matrix(obj["basis"]), int(obj["ambient_dim"]))


def dump_spinor(mu: Spinor) -> dict:
    terms = [{"indices": [i + 1 for i in idx], "coeff": dump_scalar(c)} for idx, c in mu.terms().items()]
    return {"n": mu.n, "terms": terms}


def load_spinor(obj) -> Spinor:
    n = int(obj["n"])
    terms = {}
    for t in obj["terms"]:
        idx = tuple(int(i) - 1 for i in t["indices"])
        terms[idx] = terms.get(idx, mpq(0)) + load_scalar(t["coeff"])
    return Spinor.from_terms(n, terms)


def dump_splitting(s: Splitting) -> dict:
    return {"phi": dump_matrix(s.phi), "pi_sharp": dump_matrix(s.pi_sharp), "sigma_flat": dump_matrix(s.sigma_flat)}


def load_splitting(obj) -> Splitting:
    conv = lambda key: tuple(tuple(r) for r in load_matrix(obj[key]))  # noqa: E731
    return Splitting(conv("phi"), conv("pi_sharp"), conv("sigma_flat"))


def dump_form(f: FormField) -> list:
    return [{"indices": [i + 1 for i in idx], "coeff": dump_scalar(c)} for idx, c in f.terms]


def load_form(obj, n: int, degree: int) -> FormField:
    coeffs: dict = {}
    for t in obj:
        idx = tuple(int(i) - 1 for i in t["indices"])
        if len(idx) != degree:
            raise ValueError(f"expected {degree} indices, got {t['indices']}")
        c = load_scalar(t["coeff"], n)
        # repeated index tuples accumulate
        coeffs[idx] = coeffs[idx] + c if idx in coeffs else c
    return FormField.make(n, degree, coeffs)


def dump_gcs(J: GCStructure) -> list:
    return dump_matrix(J.J)


def load_gcs(obj) -> GCStructure:
    return validate_gcs(load_matrix(obj))
