"""JSON scenarios: parsing and validation.

A scenario names a dimension, a structure, and whatever extra data a command
needs. See ``scenarios/`` for examples. Every error carries the JSON path of
the offending value.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Any

from .courant import FieldGCS, NonClosedTwist, StandardCourantModel
from .forms import FormField, Section
from .gcs import (
    GCSError,
    flat_from_terms,
    from_complex,
    from_holomorphic_poisson,
    from_symplectic,
    sharp_from_terms,
    validate_gcs,
)
from .induction import LinearSubmanifold
from .linalg import Subspace
from .ratfun import coords, lift
from .serialize import dump_matrix, load_matrix, load_scalar, load_spinor
from .spinor import MAX_N, Spinor

__all__ = [
    "ScenarioError",
    "ScenarioSyntaxError",
    "DimensionMismatch",
    "InvariantViolation",
    "Scenario",
    "parse_scenario",
    "load_scenario",
    "max_n",
]


class ScenarioError(ValueError):
    def __init__(self, message: str, path: str = "$", detail: Any = None):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.detail = detail


class ScenarioSyntaxError(ScenarioError):
    pass


class DimensionMismatch(ScenarioError):
    pass


class InvariantViolation(ScenarioError):
    pass


def max_n() -> int:
    raw = os.environ.get("GCK_MAX_N", str(MAX_N))
    try:
        return int(raw)
    except ValueError:
        raise ScenarioSyntaxError(f"GCK_MAX_N must be an integer, got {raw!r}", "$env.GCK_MAX_N") from None


@dataclass
class Scenario:
    kind: str
    n: int
    structure: Any  # GCStructure (pointwise), FieldGCS (field) or None
    name: str = ""
    twist: FormField | None = None
    submanifold: LinearSubmanifold | None = None
    embedding: list | None = None  # field kind: images in Q(u1..uk)
    embedding_dim: int | None = None
    second: Any = None
    involution: list | None = None
    sample_points: list = field(default_factory=list)
    spinor: Spinor | None = None
    sections: list = field(default_factory=list)
    functions: list = field(default_factory=list)

    @property
    def field_kind(self) -> bool:
        return self.kind == "field"

    def model(self) -> StandardCourantModel:
        if self.twist is None:
            return StandardCourantModel.untwisted(self.n)
        return StandardCourantModel(self.n, self.twist)

    def field_structure(self, which: str = "structure") -> FieldGCS:
        s = getattr(self, which)
        if s is None:
            raise ValueError(f"scenario has no {which}")
        return s if isinstance(s, FieldGCS) else FieldGCS.from_matrix(s.matrix)


def _need(obj: dict, key: str, path: str):
    if key not in obj:
        raise ScenarioSyntaxError(f"missing key {key!r}", path)
    return obj[key]


def _matrix(obj, path: str, rows: int, cols: int, n_vars: int | None):
    try:
        m = load_matrix(obj, n_vars)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ScenarioSyntaxError(str(exc), path) from None
    if len(m) != rows or any(len(r) != cols for r in m):
        got = f"{len(m)}x{len(m[0]) if m else 0}"
        raise DimensionMismatch(f"expected a {rows}x{cols} matrix, got {got}", path)
    return m


def _terms(obj, path: str, n: int, degree: int, n_vars: int | None):
    if not isinstance(obj, list):
        raise ScenarioSyntaxError("form terms are a list of {indices, coeff}", path)
    out = []
    for i, t in enumerate(obj):
        p = f"{path}[{i}]"
        if not isinstance(t, dict):
            raise ScenarioSyntaxError("expected {indices, coeff}", p)
        idx = _need(t, "indices", p)
        if not isinstance(idx, list) or len(idx) != degree or any(type(k) is not int for k in idx):
            raise ScenarioSyntaxError(f"need {degree} integer indices", f"{p}.indices")
        if any(not 1 <= k <= n for k in idx):
            raise DimensionMismatch(f"indices must lie in 1..{n}", f"{p}.indices")
        try:
            c = load_scalar(_need(t, "coeff", p), n_vars)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise ScenarioSyntaxError(str(exc), f"{p}.coeff") from None
        out.append((tuple(k - 1 for k in idx), c))
    return out


def _structure(obj, path: str, n: int, field_kind: bool):
    if not isinstance(obj, dict):
        raise ScenarioSyntaxError("structure must be an object", path)
    kind = _need(obj, "type", path)
    nv = n if field_kind else None
    try:
        if kind == "symplectic":
            if "omega" in obj:
                terms = _terms(obj["omega"], f"{path}.omega", n, 2, nv)
                if field_kind:
                    return FieldGCS.from_symplectic(FormField.make(n, 2, dict(_acc(terms))))
                return from_symplectic(flat_from_terms(n, [(i, j, c) for (i, j), c in terms]))
            flat = _matrix(_need(obj, "omega_flat", path), f"{path}.omega_flat", n, n, nv)
            if field_kind:
                return FieldGCS(n, from_symplectic([[lift(n, x) for x in r] for r in flat]))
            return from_symplectic(flat)
        if kind == "complex":
            j = _matrix(_need(obj, "j", path), f"{path}.j", n, n, nv)
            return FieldGCS.from_complex(j) if field_kind else from_complex(j)
        if kind == "holomorphic_poisson":
            j = _matrix(_need(obj, "j", path), f"{path}.j", n, n, nv)
            if "pi_terms" in obj:
                terms = _terms(obj["pi_terms"], f"{path}.pi_terms", n, 2, nv)
                pi = sharp_from_terms(n, [(i, k, c) for (i, k), c in terms])
            else:
                pi = _matrix(_need(obj, "pi", path), f"{path}.pi", n, n, nv)
            return FieldGCS.from_holomorphic_poisson(j, pi) if field_kind else from_holomorphic_poisson(j, pi)
        if kind == "raw":
            m = _matrix(_need(obj, "J", path), f"{path}.J", 2 * n, 2 * n, nv)
            return FieldGCS.from_matrix(m) if field_kind else validate_gcs(m)
    except GCSError as exc:
        residual = dump_matrix(exc.residual) if exc.residual is not None else None
        raise InvariantViolation(str(exc), path, residual) from None
    except ValueError as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise InvariantViolation(str(exc), path) from None
    raise ScenarioSyntaxError(f"unknown structure type {kind!r}", f"{path}.type")


def _acc(terms):
    acc: dict = {}
    for idx, c in terms:
        acc[idx] = acc[idx] + c if idx in acc else c
    return acc.items()


def parse_scenario(text: str) -> Scenario:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioSyntaxError(f"invalid JSON: {exc.msg} (line {exc.lineno})") from None
    if not isinstance(obj, dict):
        raise ScenarioSyntaxError("scenario must be a JSON object")
    kind = obj.get("kind", "pointwise")
    if kind not in ("pointwise", "field"):
        raise ScenarioSyntaxError(f"kind must be 'pointwise' or 'field', got {kind!r}", "$.kind")
    n = _need(obj, "n", "$")
    if type(n) is not int or n < 1:
        raise ScenarioSyntaxError("n must be a positive integer", "$.n")
    if n > max_n():
        raise DimensionMismatch(f"n = {n} exceeds the cap GCK_MAX_N = {max_n()}", "$.n")
    field_kind = kind == "field"
    structure = None
    if "structure" in obj:
        structure = _structure(obj["structure"], "$.structure", n, field_kind)
    sc = Scenario(kind, n, structure)
    sc.name = str(obj.get("name", ""))

    if "twist" in obj:
        if n < 3:
            raise DimensionMismatch("a twist 3-form needs n >= 3", "$.twist")
        terms = _terms(obj["twist"], "$.twist", n, 3, n)
        omega = FormField.make(n, 3, dict(_acc(terms)))
        try:
            StandardCourantModel(n, omega)
        except NonClosedTwist as exc:
            raise InvariantViolation(str(exc), "$.twist", str(exc.d_omega)) from None
        sc.twist = omega

    if "second_structure" in obj:
        sc.second = _structure(obj["second_structure"], "$.second_structure", n, field_kind)

    if "sample_points" in obj:
        pts = obj["sample_points"]
        if not isinstance(pts, list):
            raise ScenarioSyntaxError("sample_points is a list of coordinate lists", "$.sample_points")
        sc.sample_points = [_point(p, f"$.sample_points[{i}]") for i, p in enumerate(pts)]

    if "submanifold" in obj:
        _submanifold(sc, obj["submanifold"], "$.submanifold")

    if sc.sample_points:
        dim = sc.embedding_dim if sc.embedding is not None else n
        for i, pt in enumerate(sc.sample_points):
            if len(pt) != dim:
                raise DimensionMismatch(f"sample points need {dim} coordinates", f"$.sample_points[{i}]")

    if "involution" in obj:
        sc.involution = _matrix(obj["involution"], "$.involution", n, n, None)

    if "spinor" in obj:
        try:
            mu = load_spinor(obj["spinor"])
        except (KeyError, ValueError, TypeError) as exc:
            raise ScenarioSyntaxError(str(exc), "$.spinor") from None
        if mu.n != n:
            raise DimensionMismatch(f"spinor has n = {mu.n}", "$.spinor.n")
        sc.spinor = mu

    for i, s in enumerate(obj.get("sections", [])):
        p = f"$.sections[{i}]"
        x = [load_scalar(c, n) for c in s.get("x", [0] * n)]
        xi = [load_scalar(c, n) for c in s.get("xi", [0] * n)]
        if len(x) != n or len(xi) != n:
            raise DimensionMismatch(f"sections need {n} components in x and xi", p)
        sc.sections.append(Section.make(n, x, xi))
    sc.functions = [lift(n, load_scalar(f, n)) for f in obj.get("functions", [])]
    return sc


def _point(p, path):
    if not isinstance(p, list):
        raise ScenarioSyntaxError("a point is a list of rationals", path)
    try:
        return tuple(load_scalar(x) for x in p)
    except (ValueError, TypeError) as exc:
        raise ScenarioSyntaxError(str(exc), path) from None


def _submanifold(sc: Scenario, obj, path: str) -> None:
    n = sc.n
    if not isinstance(obj, dict):
        raise ScenarioSyntaxError("submanifold must be an object", path)
    if "basis" in obj:
        rows = obj["basis"]
        m = _matrix(rows, f"{path}.basis", len(rows) if isinstance(rows, list) else 0, n, None)
        w = Subspace.span(m, n)
        if w.dim != len(m):
            raise InvariantViolation("basis vectors are linearly dependent", f"{path}.basis")
        sc.submanifold = LinearSubmanifold(n, w)
        if sc.field_kind:
            k = len(m)
            u = coords(k) if k else ()
            sc.embedding = [sum((u[a] * m[a][i] for a in range(k)), lift(k, 0)) for i in range(n)] if k else None
            sc.embedding_dim = k
        return
    if "embedding" in obj:
        if not sc.field_kind:
            raise ScenarioSyntaxError("embeddings need kind = 'field'", f"{path}.embedding")
        k = _need(obj, "dim", path)
        if type(k) is not int or not 1 <= k <= n:
            raise DimensionMismatch(f"dim must be an integer in 1..{n}", f"{path}.dim")
        images = obj["embedding"]
        if not isinstance(images, list) or len(images) != n:
            raise DimensionMismatch(f"embedding needs {n} components", f"{path}.embedding")
        try:
            sc.embedding = [lift(k, load_scalar(c, k)) for c in images]
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise ScenarioSyntaxError(str(exc), f"{path}.embedding") from None
        sc.embedding_dim = k
        return
    raise ScenarioSyntaxError("submanifold needs 'basis' or 'embedding'", path)


def load_scenario(path: str) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())
