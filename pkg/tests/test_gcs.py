import random

import pytest
from hypothesis import given, strategies as st

from gck.dirac import is_maximal_isotropic
from gck.gcs import (
    DegenerateForm,
    IncompatiblePair,
    NotAlmostComplex,
    NotComplex,
    NotOrthogonal,
    Splitting,
    eigenbundle_images,
    eigenbundles,
    from_complex,
    from_dirac,
    from_holomorphic_poisson,
    from_symplectic,
    pointwise_poisson,
    sharp_from_terms,
    split,
    square_identities,
    validate_gcs,
)
from gck.linalg import Subspace, identity, intersect, matvec
from gck.sampling import random_gcs, random_holomorphic_poisson, standard_j
from gck.scalars import GaussQ, mpq

seeds = st.integers(0, 2**32 - 1)
dims = st.sampled_from([2, 4, 6])
I = GaussQ(0, 1)
OMEGA = [[0, -1], [1, 0]]  # e^1 ^ e^2
ROT = [[0, -1], [1, 0]]  # j e1 = e2


def test_validate_examples():
    validate_gcs(from_symplectic(OMEGA).matrix)
    validate_gcs(from_complex(ROT).matrix)
    with pytest.raises(NotComplex):
        validate_gcs(identity(2))


def test_validate_rejects_non_orthogonal():
    # squares to -1 but mixes V and V* with the wrong symmetry
    J = [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]]
    with pytest.raises(NotOrthogonal):
        validate_gcs(J)


def test_split_symplectic_r2():
    s = split(from_symplectic(OMEGA))
    assert not any(x for r in s.phi for x in r)
    pi = [list(r) for r in s.pi_sharp]
    assert matvec(pi, [1, 0]) == [0, 1]
    assert matvec(pi, [0, 1]) == [-1, 0]
    sig = [list(r) for r in s.sigma_flat]
    assert matvec(sig, [1, 0]) == [0, 1]
    assert matvec(sig, [0, 1]) == [-1, 0]


def test_split_complex_has_no_off_diagonal_blocks():
    s = split(from_complex(standard_j(4)))
    assert not any(x for r in s.pi_sharp for x in r)
    assert not any(x for r in s.sigma_flat for x in r)


def test_square_identities_examples():
    assert square_identities(split(from_symplectic(OMEGA))).all_hold
    assert square_identities(split(from_complex(ROT))).all_hold
    s = split(from_symplectic(OMEGA))
    doubled = Splitting(s.phi, tuple(tuple(2 * x for x in r) for r in s.pi_sharp), s.sigma_flat)
    ids = square_identities(doubled)
    assert not ids.phi_squared and ids.phi_pi and ids.phi_sigma


def test_eigenbundles_complex_r2():
    plus, minus = eigenbundles(from_complex(ROT))
    assert plus.space == Subspace.span([[1, -I, 0, 0], [0, 0, 1, -I]], 4)
    assert minus.space == plus.space.conjugate()


def test_eigenbundles_symplectic_r2():
    plus, _ = eigenbundles(from_symplectic(OMEGA))
    assert plus.space == Subspace.span([[1, 0, 0, -I], [0, 1, I, 0]], 4)


def test_constructor_errors():
    with pytest.raises(DegenerateForm):
        from_symplectic([[0, 0], [0, 0]])
    with pytest.raises(NotAlmostComplex):
        from_complex(identity(2))
    with pytest.raises(IncompatiblePair):
        # on R^2 every nonzero bivector anticommutes with j
        from_holomorphic_poisson(ROT, [[0, 1], [-1, 0]])


def test_holomorphic_poisson_examples():
    assert from_holomorphic_poisson(ROT, [[0, 0], [0, 0]]) == from_complex(ROT)
    # real part of d/dz1 ^ d/dz2 (times 4) on R^4 = C^2 with coordinates (x1, y1, x2, y2)
    pi = sharp_from_terms(4, [(0, 2, 1), (1, 3, -1)])
    J = from_holomorphic_poisson(standard_j(4), pi)
    assert square_identities(split(J)).all_hold


def test_pointwise_poisson_examples():
    Js = from_symplectic(OMEGA)
    assert pointwise_poisson(Js, [1, 0], [0, 1]) == 1
    assert pointwise_poisson(Js, [1, 2], [1, 2]) == 0
    assert pointwise_poisson(from_complex(ROT), [1, 3], [2, -1]) == 0


@given(seeds, dims)
def test_square_identities_on_corpus(seed, n):
    J = random_gcs(random.Random(seed), n)
    assert square_identities(split(J)).all_hold
    assert split(J).assemble() == J.matrix


@given(seeds, dims)
def test_eigenbundles_decompose(seed, n):
    J = random_gcs(random.Random(seed), n)
    plus, minus = eigenbundles(J)
    assert is_maximal_isotropic(plus.space) and is_maximal_isotropic(minus.space)
    assert intersect(plus.space, minus.space).is_zero()
    assert (plus.space + minus.space).is_full()
    assert minus.space == plus.space.conjugate()
    assert (plus.space, minus.space) == eigenbundle_images(J)


@given(seeds, dims)
def test_from_dirac_inverts_eigenbundles(seed, n):
    J = random_gcs(random.Random(seed), n)
    assert from_dirac(eigenbundles(J)[0]) == J


@given(seeds, dims)
def test_pointwise_poisson_matches_pi_block(seed, n):
    r = random.Random(seed)
    J = random_gcs(r, n)
    pi = [list(x) for x in split(J).pi_sharp]
    df = [mpq(r.randint(-3, 3)) for _ in range(n)]
    dg = [mpq(r.randint(-3, 3)) for _ in range(n)]
    value = pointwise_poisson(J, df, dg)
    assert value == -pointwise_poisson(J, dg, df)
    assert value == sum(a * b for a, b in zip(dg, matvec(pi, df)))


@given(seeds, st.sampled_from([2, 4, 6]))
def test_holomorphic_poisson_corpus_is_valid(seed, n):
    J = random_holomorphic_poisson(random.Random(seed), n)
    assert not any(x for r in split(J).sigma_flat for x in r)
