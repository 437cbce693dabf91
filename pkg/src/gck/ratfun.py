"""Rational functions in coordinates x1..xn over Q.

Elements are sympy fraction-field elements (``sympy.polys.fields``), which
keep numerator and denominator gcd-reduced. This module adds a small parser
for the scenario grammar, exact evaluation with pole detection, and
substitution along polynomial maps.
"""

from __future__ import annotations

import ast
from functools import lru_cache
from typing import Sequence

from sympy import QQ
from sympy.polys.fields import FracElement, field

from .scalars import as_scalar, mpq

__all__ = [
    "PoleError",
    "ratfield",
    "coords",
    "const",
    "parse_ratfun",
    "to_str",
    "evaluate",
    "compose",
    "is_ratfun",
    "lift",
]


class PoleError(ArithmeticError):
    """A denominator vanished at the requested point."""


@lru_cache(maxsize=None)
def ratfield(n: int):
    """The field Q(x1, ..., xn)."""
    if n < 1:
        raise ValueError("need at least one coordinate")
    names = ",".join(f"x{i + 1}" for i in range(n))
    return field(names, QQ)[0]


def coords(n: int) -> tuple:
    return ratfield(n).gens


def const(n: int, c):
    return ratfield(n)(as_scalar(c))


def is_ratfun(x) -> bool:
    return isinstance(x, FracElement)


def lift(n: int, x):
    """Promote a rational (or an element of the same field) into Q(x1..xn)."""
    K = ratfield(n)
    if isinstance(x, FracElement):
        if x.field is not K:
            raise ValueError("rational function lives in a different coordinate field")
        return x
    return K(as_scalar(x))


_BINOPS = {ast.Add: "add", ast.Sub: "sub", ast.Mult: "mul", ast.Div: "div", ast.Pow: "pow"}


def parse_ratfun(text: str, n: int):
    """Parse integers, x1..xn, + - * / ^ and parentheses into Q(x1..xn)."""
    if not isinstance(text, str):
        if isinstance(text, (int, mpq().__class__)):
            return const(n, text)
        raise ValueError(f"expected an expression string, got {type(text).__name__}")
    if "**" in text:
        raise ValueError("use ^ for powers")
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse {text!r}: {exc.msg}") from None
    K = ratfield(n)
    gens = K.gens

    def walk(node):
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return K(node.value)
        if isinstance(node, ast.Name):
            name = node.id
            if name.startswith("x") and name[1:].isdigit():
                i = int(name[1:])
                if 1 <= i <= n:
                    return gens[i - 1]
            raise ValueError(f"unknown variable {name!r} (have x1..x{n})")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            op = _BINOPS[type(node.op)]
            if op == "pow":
                exp = node.right
                sign = 1
                if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                    sign, exp = -1, exp.operand
                if not (isinstance(exp, ast.Constant) and type(exp.value) is int):
                    raise ValueError("exponents must be integer literals")
                return walk(node.left) ** (sign * exp.value)
            a, b = walk(node.left), walk(node.right)
            if op == "add":
                return a + b
            if op == "sub":
                return a - b
            if op == "mul":
                return a * b
            if not b:
                raise ZeroDivisionError(f"division by zero in {text!r}")
            return a / b
        raise ValueError(f"unsupported syntax in {text!r}")

    return walk(tree.body)


def to_str(f) -> str:
    """Inverse of :func:`parse_ratfun`."""
    if not isinstance(f, FracElement):
        return str(as_scalar(f))
    return str(f).replace("**", "^")


def evaluate(f, point: Sequence):
    """Exact value of ``f`` at a rational point; raises PoleError on a vanishing denominator."""
    if not isinstance(f, FracElement):
        return as_scalar(f)
    pt = [as_scalar(p) for p in point]
    if len(pt) != f.field.ring.ngens:
        raise ValueError(f"need a point with {f.field.ring.ngens} coordinates, got {len(pt)}")
    den = f.denom(*pt) if pt else f.denom
    if not den:
        raise PoleError(f"{to_str(f)} has a pole at {tuple(str(p) for p in pt)}")
    return mpq(f.numer(*pt)) / mpq(den)


def _subst_poly(p, images, target):
    out = target(0)
    for monom, c in p.terms():
        term = target(c)
        for img, e in zip(images, monom):
            if e:
                term = term * img**e
        out = out + term
    return out


def compose(f, images: Sequence, target_n: int):
    """``f(images)`` where ``images[i]`` in Q(y1..y_target_n) replaces x_{i+1}."""
    K = ratfield(target_n)
    if not isinstance(f, FracElement):
        return K(as_scalar(f))
    images = [lift(target_n, g) for g in images]
    if len(images) != len(f.field.gens):
        raise ValueError("need one image per source coordinate")
    den = _subst_poly(f.denom, images, K)
    if not den:
        raise PoleError(f"denominator of {to_str(f)} vanishes identically along the map")
    return _subst_poly(f.numer, images, K) / den
