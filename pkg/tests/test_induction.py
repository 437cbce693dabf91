import itertools
import random

import pytest
from hypothesis import given, strategies as st

from gck.gcs import from_complex, from_holomorphic_poisson, from_symplectic, sharp_from_terms, split, square_identities
from gck.induction import (
    ConditionsFailed,
    LinearSubmanifold,
    NotCompatible,
    NotInvolution,
    PreconditionError,
    b_spaces,
    hol_poisson_sigma_zero,
    induced_via_formulas,
    induced_via_quotient,
    involution_check,
    lemma2_conditions,
    prop1_conditions,
    theorem_main_verdict,
)
from gck.linalg import Subspace, annihilator, apply, intersect, kernel, matmul, matvec, transpose
from gck.sampling import (
    random_compatible_involution,
    random_gcs,
    random_holomorphic_poisson,
    random_subspace,
    standard_j,
    standard_omega_flat,
)

seeds = st.integers(0, 2**32 - 1)
dims = st.sampled_from([2, 4, 6])
W4 = standard_omega_flat(4)  # e^1^e^2 + e^3^e^4
J_SYMP4 = from_symplectic(W4)
J_CPLX4 = from_complex(standard_j(4))


def sub(*rows, n=4):
    return LinearSubmanifold.from_basis([list(r) for r in rows], n)


def unit(i, n):
    return [1 if j == i else 0 for j in range(n)]


def test_b_spaces_examples():
    B, Bp = b_spaces(sub([1, 0], n=2))
    assert B == Subspace.span([[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], 4)
    assert Bp == Subspace.span([[0, 0, 0, 1]], 4)
    B, Bp = b_spaces(LinearSubmanifold(3, Subspace.full(3)))
    assert B.is_full() and Bp.is_zero()
    B, Bp = b_spaces(LinearSubmanifold(3, Subspace.zero(3)))
    assert B == Bp == Subspace.span([[0, 0, 0] + unit(i, 3) for i in range(3)], 6)


def test_prop1_examples():
    assert prop1_conditions(J_SYMP4, sub([1, 0, 0, 0], [0, 1, 0, 0])).values == (True,) * 4
    assert prop1_conditions(from_symplectic(standard_omega_flat(2)), sub([1, 0], n=2)).values == (False,) * 4
    assert prop1_conditions(J_CPLX4, sub([1, 0, 0, 0], [0, 1, 0, 0])).values == (True,) * 4
    assert prop1_conditions(J_CPLX4, sub([1, 1, 0, 0], [-1, 1, 0, 0])).values == (True,) * 4


def test_lemma2_examples():
    s = split(J_SYMP4)
    assert lemma2_conditions(s, sub([1, 0, 0, 0], [0, 1, 0, 0])) == (True, True)
    assert lemma2_conditions(s, sub([1, 0, 0, 0], [0, 0, 1, 0]))[0] is False
    sc = split(J_CPLX4)
    assert lemma2_conditions(sc, sub([1, 0, 0, 0], [0, 0, 1, 0])) == (True, False)
    assert lemma2_conditions(sc, sub([0, 0, 1, 0], [0, 0, 0, 1])) == (True, True)


def test_induced_examples():
    plane = sub([1, 0, 0, 0], [0, 1, 0, 0])
    expected = from_symplectic(standard_omega_flat(2))
    assert induced_via_quotient(J_SYMP4, plane).J_prime == expected
    assert induced_via_formulas(J_SYMP4, plane).J_prime == expected
    cplx = induced_via_formulas(J_CPLX4, plane)
    assert cplx.J_prime == from_complex(standard_j(2))
    assert all(not any(z) for z in cplx.witnesses["zeta"])
    assert not any(x for r in cplx.sigma_prime for x in r)
    full = LinearSubmanifold(4, Subspace.full(4))
    assert induced_via_quotient(J_SYMP4, full).J_prime == J_SYMP4
    assert induced_via_formulas(J_CPLX4, full).J_prime == J_CPLX4


def test_induced_holomorphic_poisson_line():
    pi = sharp_from_terms(6, [(0, 3, 1), (1, 2, 1)])
    J = from_holomorphic_poisson(standard_j(6), pi)
    line = LinearSubmanifold.from_basis([unit(4, 6), unit(5, 6)], 6)
    a, b = induced_via_formulas(J, line), induced_via_quotient(J, line)
    assert a.J_prime == b.J_prime == from_complex(standard_j(2))


def test_induced_requires_conditions():
    with pytest.raises(ConditionsFailed):
        induced_via_formulas(J_SYMP4, sub([1, 0, 0, 0], [0, 0, 1, 0]))
    with pytest.raises(ConditionsFailed):
        induced_via_quotient(J_SYMP4, sub([1, 0, 0, 0], [0, 0, 1, 0]))


def test_verdict_lagrangian_witness():
    w = sub([1, 0, 0, 0], [0, 0, 1, 0])
    v = theorem_main_verdict(J_SYMP4, w)
    assert not v.admissible and not v.conditions["poisson_dirac"]
    x = v.failure_witness[:4]
    pann = apply([list(r) for r in split(J_SYMP4).pi_sharp], annihilator(w.w))
    assert any(x) and w.w.contains(x) and pann.contains(x)


def _coordinate_subspaces(n):
    for k in range(n + 1):
        for idx in itertools.combinations(range(n), k):
            yield LinearSubmanifold.from_basis([unit(i, n) for i in idx], n)


@pytest.mark.parametrize("w", list(_coordinate_subspaces(4)), ids=lambda w: str(w.w.pivots))
def test_example_criteria_on_coordinate_subspaces(w):
    j = standard_j(4)
    v = theorem_main_verdict(from_complex(j), w)
    assert v.admissible == apply(j, w.w).issubset(w.w)
    h = w.inclusion()
    restricted = matmul(matmul(transpose(h), W4), h) if w.k else []
    nondegenerate = kernel(restricted, w.k).is_zero() if w.k else True
    assert theorem_main_verdict(J_SYMP4, w).admissible == nondegenerate


def test_involution_examples():
    v = involution_check([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]], J_SYMP4)
    assert v.admissible and v.submanifold.w == Subspace.span([unit(0, 4), unit(1, 4)], 4)
    v = involution_check([unit(i, 4) for i in range(4)], J_SYMP4)
    assert v.induced.J_prime == J_SYMP4
    with pytest.raises(NotCompatible):
        involution_check([[1, 0], [0, -1]], from_symplectic(standard_omega_flat(2)))
    with pytest.raises(NotInvolution):
        involution_check([[1, 1], [0, 1]], from_symplectic(standard_omega_flat(2)))


def test_sigma_zero_examples():
    plane = sub([1, 0, 0, 0], [0, 1, 0, 0])
    r = hol_poisson_sigma_zero(J_CPLX4, plane)
    assert r.direct and r.criterion125
    # the printed simplification demands phi(TN) = 0 here
    assert r.diverges_123
    with pytest.raises(PreconditionError):
        hol_poisson_sigma_zero(J_SYMP4, plane)
    with pytest.raises(PreconditionError):
        hol_poisson_sigma_zero(J_CPLX4, sub([1, 0, 0, 0], [0, 0, 1, 0]))


def test_sigma_zero_holomorphic_poisson_line():
    # on C^2 a nonzero constant pi makes every complex line fail the Poisson-Dirac test,
    # so the line sits in C^3 along the kernel direction of pi
    pi = sharp_from_terms(6, [(0, 3, 1), (1, 2, 1)])
    J = from_holomorphic_poisson(standard_j(6), pi)
    line = LinearSubmanifold.from_basis([unit(4, 6), unit(5, 6)], 6)
    r = hol_poisson_sigma_zero(J, line)
    assert r.direct and r.criterion125
    c2 = from_holomorphic_poisson(standard_j(4), sharp_from_terms(4, [(0, 2, 1), (1, 3, -1)]))
    assert not theorem_main_verdict(c2, sub([1, 0, 0, 0], [0, 1, 0, 0])).admissible


def _corpus(seed, n):
    r = random.Random(seed)
    return random_gcs(r, n), LinearSubmanifold(n, random_subspace(r, n))


@given(seeds, dims)
def test_prop1_conditions_agree(seed, n):
    J, w = _corpus(seed, n)
    c = prop1_conditions(J, w)
    assert c.agree
    assert all(lemma2_conditions(split(J), w)) == c.kernel
    assert theorem_main_verdict(J, w).admissible == c.eigenbundle


@given(seeds, dims)
def test_paths_agree_and_induced_is_valid(seed, n):
    J, w = _corpus(seed, n)
    v = theorem_main_verdict(J, w)
    if v.admissible:
        assert v.paths_agree
        assert square_identities(split(v.induced.J_prime)).all_hold


@given(seeds, dims)
def test_witness_choice_does_not_matter(seed, n):
    J, w = _corpus(seed, n)
    if not theorem_main_verdict(J, w).admissible:
        return
    s = split(J)
    phit = transpose([list(r) for r in s.phi])
    pi = [list(r) for r in s.pi_sharp]
    # zeta and eta are defined up to TN° cap ker pi#; h^* phi^T kills that freedom
    free = intersect(annihilator(w.w), kernel(pi, n))
    for kappa in free.basis:
        assert not any(w.restrict(matvec(phit, kappa)))
    # quotient path: preimages are defined up to B_perp cap JB, which s o J kills
    B, Bp = b_spaces(w)
    ker = intersect(Bp, apply(J.matrix, B))
    smat = w.s_matrix()
    for k in ker.basis:
        assert not any(matvec(smat, J.apply(k)))


@given(seeds, dims)
def test_compatible_involutions_have_admissible_fixed_loci(seed, n):
    psi, J = random_compatible_involution(random.Random(seed), n)
    assert involution_check(psi, J).admissible


@given(seeds, st.sampled_from([4, 6]))
def test_sigma_zero_direct_matches_closed_form(seed, n):
    r = random.Random(seed)
    J = random_holomorphic_poisson(r, n)
    w = LinearSubmanifold(n, random_subspace(r, n))
    if not theorem_main_verdict(J, w).admissible:
        return
    rep = hol_poisson_sigma_zero(J, w)
    assert rep.direct == rep.criterion125 == rep.criterion_sum
