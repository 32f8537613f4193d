import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stampbase.basis import (
    Basis,
    BasisError,
    PreconditionError,
    ReachSet,
    basis_range,
    extend_reach,
    is_p_basis,
    is_symmetric,
    residue_profile,
    symmetrize,
)

from oracles import brute_range


def elements_strategy(max_size=9, max_gap=12):
    """Random valid element tuples: 1 plus strictly positive gaps."""
    return st.lists(
        st.integers(min_value=1, max_value=max_gap), max_size=max_size - 1
    ).map(lambda gaps: tuple(_cumsum(gaps)))


def _cumsum(gaps):
    elems = [1]
    for g in gaps:
        elems.append(elems[-1] + g)
    return elems


@pytest.mark.parametrize(
    "elements, n, admissible",
    [
        ((1, 3, 4, 6, 11), 12, True),
        ((1,), 2, True),
        ((1, 2), 4, True),
        ((1, 3), 4, True),
        ((1, 2, 8), 4, False),
        ((1, 2, 3), 6, True),
        ((1, 3, 4, 7), 8, True),
        ((1, 2, 4, 5, 10, 13), 15, True),
        ((1, 3, 4, 5, 6, 10, 15), 16, True),
    ],
)
def test_range_examples(elements, n, admissible):
    result = basis_range(Basis(elements))
    assert (result.n, result.admissible) == (n, admissible)


@settings(max_examples=300)
@given(elements_strategy())
def test_range_matches_brute_force(elements):
    assert basis_range(Basis(elements)).n == brute_range(elements)


@pytest.mark.parametrize(
    "bad", [(), (2, 3), (1, 3, 3), (1, 4, 2), (1, 1)]
)
def test_invalid_elements_rejected(bad):
    with pytest.raises(BasisError):
        Basis(bad)


def test_parse_and_wire_formats():
    basis = Basis.parse("1,3,4,5,8")
    assert basis.elements == (1, 3, 4, 5, 8)
    assert basis.k == 5 and basis.tail == 8
    assert Basis.parse(basis.to_text()) == basis
    assert Basis.from_json(basis.to_json()) == basis
    assert Basis.from_json(json.loads(basis.to_json())) == basis
    with pytest.raises(BasisError):
        Basis.parse("1,2,x")
    with pytest.raises(BasisError):
        Basis.from_json('{"numbers": [1, 2]}')


@settings(max_examples=200)
@given(elements_strategy())
def test_text_round_trip(elements):
    basis = Basis(elements)
    assert Basis.parse(basis.to_text()) == basis
    assert Basis.from_json(basis.to_json()) == basis


def test_reach_set_queries():
    reach = ReachSet.of(Basis((1, 3, 4)))
    assert reach.range_n() == 8
    assert reach.contains(7) and reach.contains(8)
    assert not reach.contains(9)
    assert not reach.contains(-1)


def test_extend_reach_matches_from_scratch():
    rng = random.Random(20260815)
    for _ in range(1000):
        elems = [1]
        for _ in range(rng.randrange(1, 8)):
            elems.append(elems[-1] + rng.randrange(1, 10))
        basis = Basis(tuple(elems[:-1]))
        extended = Basis(tuple(elems))
        incremental = extend_reach(ReachSet.of(basis), basis, elems[-1])
        assert incremental == ReachSet.of(extended)


def test_extend_reach_validates_correspondence():
    basis = Basis((1, 3, 4))
    with pytest.raises(BasisError):
        extend_reach(ReachSet.of(Basis((1, 2))), basis, 9)
    with pytest.raises(BasisError):
        extend_reach(ReachSet.of(basis), basis, 4)


def test_residue_profile():
    prof = residue_profile(Basis((1, 3, 4, 5, 6, 10, 15)), 8)
    assert prof.residues == (0, 1, 3, 4, 5, 6, 2, 7)
    assert prof.complete
    assert not residue_profile(Basis((1, 2, 3)), 5).complete
    with pytest.raises(PreconditionError):
        residue_profile(Basis((1, 2)), 1)


@pytest.mark.parametrize(
    "elements, p, verdict",
    [
        ((1, 2), 3, True),
        ((1, 3, 4, 5, 6, 10, 15), 8, True),
        ((1, 3, 4, 7), 5, True),
        ((1, 2, 8), 4, False),  # 8 = 0 mod 4
        ((1, 2, 5), 4, False),  # residue 1 repeats
        ((1, 2), 4, False),  # wrong length
        ((1, 7, 9, 13), 5, False),  # residues complete but inadmissible
    ],
)
def test_is_p_basis(elements, p, verdict):
    assert is_p_basis(Basis(elements), p) is verdict


def test_symmetrize_examples():
    initial = Basis((1, 3, 4, 6, 11))
    even = symmetrize(initial, "even")
    assert even.elements == (1, 3, 4, 6, 11, 16, 18, 19, 21, 22)
    assert is_symmetric(even)
    # reflection does not inherit admissibility: the range stays at 12
    assert basis_range(even).n == basis_range(initial).n == 12
    assert not basis_range(even).admissible

    odd = symmetrize(Basis((1, 2, 4, 5, 10, 13)), "odd")
    assert odd.elements == (1, 2, 4, 5, 10, 13, 18, 19, 21, 22, 23)
    assert basis_range(odd).n == 15
    even2 = symmetrize(Basis((1, 2, 4, 5, 10, 13)), "even")
    assert even2.elements == (1, 2, 4, 5, 10, 13, 16, 21, 22, 24, 25, 26)
    assert basis_range(even2).n == 18

    assert symmetrize(Basis((1,)), "odd").elements == (1,)
    with pytest.raises(PreconditionError):
        symmetrize(initial, "both")


@settings(max_examples=300)
@given(elements_strategy(max_size=7), st.sampled_from(["even", "odd"]))
def test_symmetrize_is_symmetric(elements, parity):
    basis = symmetrize(Basis(elements), parity)
    assert is_symmetric(basis)


@settings(max_examples=300)
@given(elements_strategy(max_size=7), st.sampled_from(["even", "odd"]))
def test_admissible_symmetric_range_is_twice_top(elements, parity):
    basis = symmetrize(Basis(elements), parity)
    result = basis_range(basis)
    if result.admissible:
        assert result.n == 2 * basis.tail


def test_is_symmetric_examples():
    assert is_symmetric(Basis((1, 2, 3, 4)))
    assert is_symmetric(Basis((1,)))
    assert not is_symmetric(Basis((1, 2, 4)))
