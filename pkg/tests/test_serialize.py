import json
import random

import pytest
from hypothesis import given, strategies as st

from gck.dirac import DiracStructure
from gck.forms import FormField
from gck.gcs import split
from gck.ratfun import coords, lift
from gck.sampling import random_dirac, random_gcs, random_subspace
from gck.scalars import GaussQ, I, mpq
from gck.serialize import (
    dump_form,
    dump_gcs,
    dump_matrix,
    dump_scalar,
    dump_spinor,
    dump_splitting,
    dump_subspace,
    load_form,
    load_gcs,
    load_matrix,
    load_scalar,
    load_spinor,
    load_splitting,
    load_subspace,
)
from gck.spinor import spinor_from_dirac


def through_json(obj):
    return json.loads(json.dumps(obj))


def test_scalar_encodings():
    assert dump_scalar(mpq(0)) == "0/1"
    assert dump_scalar(mpq(-1)) == "-1/1"
    assert dump_scalar(mpq(3, 6)) == "1/2"
    assert dump_scalar(GaussQ(mpq(1, 2), mpq(-1))) == {"re": "1/2", "im": "-1/1"}
    # a complex number with zero imaginary part is a plain rational
    assert dump_scalar(GaussQ(mpq(2), mpq(0))) == "2/1"
    x1, x2 = coords(2)
    assert dump_scalar(lift(2, 5)) == "5/1"
    f = (x1 ** 2 + 1) / x2
    assert lift(2, load_scalar(dump_scalar(f), 2)) == f


@pytest.mark.parametrize("bad", [1.5, True, None, {"re": "1/1"}, "x1"])
def test_scalar_rejects(bad):
    with pytest.raises(ValueError):
        load_scalar(bad)


def test_matrix_rejects_ragged():
    with pytest.raises(ValueError, match="ragged"):
        load_matrix([["1/1", "0/1"], ["1/1"]])


@given(st.integers(0, 10 ** 6), st.integers(1, 4), st.booleans())
def test_subspace_round_trip(seed, n, complex_):
    s = random_subspace(random.Random(seed), 2 * n, complex_=complex_)
    assert load_subspace(through_json(dump_subspace(s))) == s


@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_spinor_round_trip(seed, n):
    mu = spinor_from_dirac(random_dirac(random.Random(seed), n, complex_=True)).scale(1 + 2 * I)
    assert load_spinor(through_json(dump_spinor(mu))) == mu


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 4, 6]))
def test_splitting_and_gcs_round_trip(seed, n):
    J = random_gcs(random.Random(seed), n)
    s = split(J)
    assert load_splitting(through_json(dump_splitting(s))) == s
    assert load_gcs(through_json(dump_gcs(J))) == J


def test_form_round_trip():
    x = coords(3)
    w = FormField.make(3, 2, {(0, 1): x[0] ** 2 - mpq(1, 3), (1, 2): 1 / (1 + x[2])})
    assert load_form(through_json(dump_form(w)), 3, 2) == w
    assert dump_form(w)[0]["indices"] == [1, 2]


def test_dirac_space_round_trip():
    L = DiracStructure.cotangent(3)
    assert load_subspace(dump_subspace(L.space)) == L.space
    assert load_matrix(dump_matrix([[mpq(1, 2), I]])) == [[mpq(1, 2), I]]
