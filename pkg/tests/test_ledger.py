import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ppas import ledger
from ppas.ledger import IncidenceProfile, MukaiVector, UnclassifiedProfile

vectors = st.builds(MukaiVector, st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
profiles = st.builds(
    IncidenceProfile,
    i=st.sampled_from([1, 2]),
    n=st.integers(0, 8),
    collinear=st.booleans(),
    has_collinear_colength1=st.booleans(),
    has_collinear_len4=st.booleans(),
    has_collinear_len3=st.integers(0, 2),
    unique_len3_in_every_Z=st.booleans(),
)


def test_examples():
    for v, w in ledger.PHI_EXAMPLES:
        assert ledger.phi_ch(v) == w


def test_line_bundles():
    assert ledger.line_bundle(2).as_tuple() == (1, 2, 4)
    assert ledger.transformed_power(2).as_tuple() == (4, -2, 1)
    assert ledger.curve_line_bundle(1, 0).as_tuple() == (0, 1, -1)
    assert ledger.curve_line_bundle(2, 3).as_tuple() == (0, 2, -1)


def test_every_row_balances():
    rows = ledger.table_rows()
    assert len(rows) > 20
    for row in rows:
        assert ledger.balance_check(row, row.n, row.i), row.key


def test_row_contents():
    by_key = {r.key: r for r in ledger.table_rows()}
    assert by_key["P"].s_locus == "empty"
    assert by_key["P"].ch_r0.r == 3
    assert "rank 3" in by_key["P"].note and "R^0_2(P)" in by_key["P"].note
    assert by_key["Q"].witness_formulas == ("-p-q",)
    assert by_key["Y"].max_points == 3
    assert by_key["Z-collinear"].s_formula == "{2v - sigma}"
    assert by_key["W"].max_points == 5
    assert by_key["W-collinear"].s_locus == "empty"
    assert by_key["l1-P"].witness_formulas == ("-p",)


def test_point_bound_for_long_schemes():
    bounds = {r.n: r.max_points for r in ledger.table_rows() if r.key == "X"}
    assert bounds == {6: 3, 7: 2, 8: 2}


def test_export_is_json():
    rows = json.loads(ledger.export_tables(6))
    assert all({"key", "i", "n", "r0", "r1"} <= set(r) for r in rows)


@pytest.mark.parametrize(
    "profile",
    [
        IncidenceProfile(3, 2),
        IncidenceProfile(2, -1),
        IncidenceProfile(2, 4, has_collinear_len4=True),
        IncidenceProfile(2, 3, has_collinear_len3=1),
        IncidenceProfile(2, 5, collinear=True),
        IncidenceProfile(2, 6, unique_len3_in_every_Z=True),
    ],
)
def test_inconsistent_profiles(profile):
    with pytest.raises(UnclassifiedProfile):
        ledger.classify(profile)


@given(vectors)
def test_phi_is_an_involution(v):
    assert ledger.phi_ch(ledger.phi_ch(v)) == v


@given(vectors, vectors)
def test_phi_is_additive(v, w):
    assert ledger.phi_ch(v + w) == ledger.phi_ch(v) + ledger.phi_ch(w)
    assert (v - w) + w == v and -(-v) == v


@given(st.sampled_from([1, 2]), st.integers(0, 40))
def test_chi_of_twisted_ideal(i, n):
    v = ledger.twisted_ideal(i, n)
    assert (v.r, v.c, v.chi) == (1, i, i * i - n)


@given(profiles)
def test_classified_profiles_balance(p):
    try:
        row = ledger.classify(p)
    except UnclassifiedProfile:
        return
    assert row.i == p.i and row.n == p.n
    assert ledger.balance_check(row, p.n, p.i)
