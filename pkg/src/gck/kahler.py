"""Generalized Kahler pairs and their behaviour on submanifolds."""

from __future__ import annotations

from dataclasses import dataclass

from .dirac import pairing_matrix, pull_back
from .gcs import GCStructure, eigenbundles
from .induction import (
    LinearSubmanifold,
    b_spaces,
    induced_via_formulas,
    theorem_main_verdict,
)
from .linalg import (
    Subspace,
    apply,
    intersect,
    is_zero_matrix,
    matmul,
    msub,
    solve,
    transpose,
)
from .scalars import mpq

__all__ = [
    "NotCommuting",
    "NotAdmissible",
    "KahlerPair",
    "FourSplit",
    "MetricResult",
    "commute_decomposition",
    "metric_check",
    "lalg_conditions",
    "induced_pair",
    "directness_check",
    "positive_definite",
    "mixed_condition_trivial",
]


class NotCommuting(ValueError):
    pass


class NotAdmissible(ValueError):
    pass


@dataclass(frozen=True)
class FourSplit:
    pp: Subspace
    pm: Subspace
    mp: Subspace
    mm: Subspace

    def pieces(self) -> tuple[Subspace, Subspace, Subspace, Subspace]:
        return (self.pp, self.pm, self.mp, self.mm)

    def dims(self) -> tuple[int, int, int, int]:
        return tuple(p.dim for p in self.pieces())

    def spans(self) -> bool:
        total = self.pp + self.pm + self.mp + self.mm
        return total.is_full()


def _four(J1: GCStructure, J2: GCStructure) -> FourSplit:
    p1, m1 = eigenbundles(J1)
    p2, m2 = eigenbundles(J2)
    return FourSplit(
        intersect(p1.space, p2.space),
        intersect(p1.space, m2.space),
        intersect(m1.space, p2.space),
        intersect(m1.space, m2.space),
    )


def commute_decomposition(J1: GCStructure, J2: GCStructure) -> tuple[bool, bool, FourSplit]:
    """``(commutator vanishes, four intersections span, split)``; the two booleans agree."""
    if J1.n != J2.n:
        raise ValueError("structures live on different spaces")
    a, b = J1.matrix, J2.matrix
    commute = is_zero_matrix(msub(matmul(a, b), matmul(b, a)))
    split = _four(J1, J2)
    return commute, split.spans(), split


@dataclass(frozen=True)
class MetricResult:
    symmetric: bool
    positive: bool
    witness: list | None  # x with <x, G x> <= 0 when not positive

    @property
    def holds(self) -> bool:
        return self.symmetric and self.positive


def positive_definite(a) -> tuple[bool, list | None]:
    """Exact test by symmetric elimination; returns a witness x with x^T a x <= 0 on failure."""
    m = len(a)
    work = [list(r) for r in a]
    for k in range(m):
        piv = work[k][k]
        if piv <= 0:
            # x = (-A11^-1 b, 1, 0...) gives x^T a x = the Schur pivot
            a11 = [r[:k] for r in a[:k]]
            b = [a[i][k] for i in range(k)]
            head = solve(a11, [-x for x in b]) if k else []
            return False, list(head) + [mpq(1)] + [mpq(0)] * (m - k - 1)
        for i in range(k + 1, m):
            f = work[i][k] / piv
            if f:
                work[i] = [x - f * y for x, y in zip(work[i], work[k])]
    return True, None


def metric_check(J1: GCStructure, J2: GCStructure) -> MetricResult:
    commute, _, _ = commute_decomposition(J1, J2)
    if not commute:
        raise NotCommuting("J1 and J2 do not commute")
    g = matmul(J1.matrix, J2.matrix)
    gram = matmul(pairing_matrix(J1.n), g)
    symmetric = gram == transpose(gram)
    ok, witness = positive_definite(gram)
    return MetricResult(symmetric, ok, witness)


@dataclass(frozen=True)
class KahlerPair:
    J1: GCStructure
    J2: GCStructure

    def __post_init__(self):
        res = metric_check(self.J1, self.J2)
        if not res.holds:
            raise ValueError(f"metric is not positive definite (witness {res.witness})")


def lalg_conditions(J1: GCStructure, J2: GCStructure, sub: LinearSubmanifold) -> tuple[bool, bool, bool, bool]:
    k = sub.k
    B, Bperp = b_spaces(sub)
    a, b = J1.matrix, J2.matrix
    ab = matmul(a, b)
    s = sub.s_matrix()
    full_n = Subspace.full(2 * k)

    split = _four(J1, J2)
    pieces = [apply(s, intersect(p, B)) for p in split.pieces()]
    c1 = (pieces[0] + pieces[1] + pieces[2] + pieces[3]) == full_n

    core = intersect(intersect(B, apply(a, B)), intersect(apply(b, B), apply(ab, B)))
    c2 = apply(s, core) == full_n
    c3 = B == core + Bperp
    c4 = (
        intersect(apply(a, Bperp), B).issubset(Bperp)
        and intersect(apply(b, Bperp), B).issubset(Bperp)
        and intersect(B, apply(ab, Bperp)).issubset(Bperp)
    )
    return c1, c2, c3, c4


def _admissible_both(J1, J2, sub):
    v1 = theorem_main_verdict(J1, sub)
    v2 = theorem_main_verdict(J2, sub)
    if not (v1.admissible and v2.admissible):
        raise NotAdmissible(f"submanifold admissible for J1: {v1.admissible}, for J2: {v2.admissible}")


def induced_pair(J1: GCStructure, J2: GCStructure, sub: LinearSubmanifold):
    """Induced structures and the induced pair; the pair is checked to be Kahler."""
    _admissible_both(J1, J2, sub)
    a = induced_via_formulas(J1, sub)
    b = induced_via_formulas(J2, sub)
    return a, b, KahlerPair(a.J_prime, b.J_prime)


def mixed_condition_trivial(J1: GCStructure, J2: GCStructure, sub: LinearSubmanifold) -> bool:
    """``B cap J1 J2 B_perp = 0``, which makes the third containment automatic."""
    B, Bperp = b_spaces(sub)
    return intersect(B, apply(matmul(J1.matrix, J2.matrix), Bperp)).is_zero()


def directness_check(J1: GCStructure, J2: GCStructure, sub: LinearSubmanifold) -> bool:
    """The four pushed-down pieces form a direct sum and equal the F-intersections."""
    _admissible_both(J1, J2, sub)
    B, _ = b_spaces(sub)
    s = sub.s_matrix()
    h = sub.inclusion()
    pieces = [apply(s, intersect(p, B)) for p in _four(J1, J2).pieces()]
    direct = sum(p.dim for p in pieces) == 2 * sub.k
    p1, m1 = (pull_back(h, L).space for L in eigenbundles(J1))
    p2, m2 = (pull_back(h, L).space for L in eigenbundles(J2))
    expected = [intersect(p1, p2), intersect(p1, m2), intersect(m1, p2), intersect(m1, m2)]
    return direct and pieces == expected
