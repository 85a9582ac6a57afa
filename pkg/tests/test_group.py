import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vilenkin.group import (
    Basis,
    BasisMismatchError,
    CapacityError,
    GroupPoint,
    InvalidBasisError,
    basis_from_json,
    build_basis,
    expand_index,
    group_add,
    group_negate,
    index_to_point,
    order,
    parse_basis,
    point_to_index,
    shift_indices,
)

radices_st = st.lists(st.integers(2, 5), min_size=1, max_size=5)


def test_scales_mixed():
    b = build_basis([2, 3, 2], 3)
    assert b.scales == (1, 2, 6, 12)
    assert b.r_sup == 3
    assert b.size == 12


def test_scales_walsh():
    b = build_basis([2, 2, 2, 2])
    assert b.scales == (1, 2, 4, 8, 16)
    assert b.r_sup == 2


def test_radix_below_two_rejected():
    with pytest.raises(InvalidBasisError):
        build_basis([2, 1, 2])


def test_capacity():
    with pytest.raises(CapacityError):
        build_basis([2] * 70)


def test_truncation_and_bad_N():
    assert build_basis([2, 3, 5], 2).radices == (2, 3)
    with pytest.raises(InvalidBasisError):
        build_basis([2, 3], 3)


@pytest.mark.parametrize("spec,radices", [
    ("dyadic:3", (2, 2, 2)),
    ("triadic:2", (3, 3)),
    ("mixed:2,3,2", (2, 3, 2)),
    ("2,5", (2, 5)),
])
def test_parse_basis(spec, radices):
    assert parse_basis(spec).radices == radices


@pytest.mark.parametrize("spec", ["dyadic:x", "mixed:", "mixed:2,1,2", "hex:3", ""])
def test_parse_basis_invalid(spec):
    with pytest.raises(InvalidBasisError):
        parse_basis(spec)


def test_json_roundtrip():
    b = parse_basis("mixed:2,3,5")
    assert basis_from_json(b.to_json()) == b
    assert parse_basis(b.spec_string()) == b


def test_add_example():
    b = build_basis([2, 3])
    x = b.point([1, 2])
    assert group_add(x, x).digits == (0, 1)


def test_negate_example():
    b = build_basis([2, 3])
    assert group_negate(b.point([1, 2])).digits == (1, 1)
    assert group_negate(b.zero()) == b.zero()


def test_add_is_not_integer_addition():
    b = build_basis([2, 2])
    x = index_to_point(1, b)
    assert (x + x).index == 0


def test_mismatched_bases():
    with pytest.raises(BasisMismatchError):
        build_basis([2, 3]).zero() + build_basis([3, 2]).zero()


def test_bad_digits():
    with pytest.raises(ValueError):
        GroupPoint((2, 0), build_basis([2, 3]))


def test_index_to_point_examples():
    b = build_basis([2, 3, 2])
    assert index_to_point(5, b).digits == (1, 2, 0)
    assert index_to_point(0, b).digits == (0, 0, 0)
    assert index_to_point(11, b).digits == (1, 2, 1)
    with pytest.raises(IndexError):
        index_to_point(12, b)


def test_expand_index_examples():
    b = build_basis([2, 3, 2])
    e = expand_index(5, b)
    assert e.digits == (1, 2, 0) and e.order == 1
    e = expand_index(0, b)
    assert e.digits == (0, 0, 0) and e.order == 0
    e = expand_index(6, b)
    assert e.digits == (0, 0, 1) and e.order == 2
    with pytest.raises(IndexError):
        expand_index(12, b)


def test_order_at_full_size():
    b = build_basis([2, 3, 2])
    assert order(12, b) == 3
    assert [b.level(n) for n in (1, 2, 5, 6, 11, 12)] == [0, 1, 1, 2, 2, 3]


def test_digit_table_matches_points():
    b = build_basis([3, 2, 4])
    for i, row in enumerate(b.digit_table):
        assert tuple(row) == index_to_point(i, b).digits


def test_cylinders():
    b = build_basis([2, 3, 2])
    x = b.point([0, 0, 1])
    assert x.in_cylinder(2) and not x.in_cylinder(3)
    assert b.zero().in_cylinder(3)


@settings(max_examples=60, deadline=None)
@given(radices_st, st.data())
def test_group_axioms(radices, data):
    b = build_basis(radices)
    idx = st.integers(0, b.size - 1)
    x, y, z = (index_to_point(data.draw(idx), b) for _ in range(3))
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert x + b.zero() == x
    assert (x + (-x)) == b.zero()
    assert -(-x) == x
    assert (x - y) + y == x
    assert point_to_index(index_to_point(x.index, b)) == x.index


@settings(max_examples=40, deadline=None)
@given(radices_st, st.data())
def test_shift_indices_matches_pointwise(radices, data):
    b = build_basis(radices)
    t = data.draw(st.integers(0, b.size - 1))
    tp = index_to_point(t, b)
    plus = shift_indices(b, t)[0]
    minus = shift_indices(b, t, sign=-1)[0]
    for x in range(b.size):
        xp = index_to_point(x, b)
        assert plus[x] == (xp + tp).index
        assert minus[x] == (xp - tp).index


@settings(max_examples=60, deadline=None)
@given(radices_st, st.data())
def test_expansion_reconstructs(radices, data):
    b = build_basis(radices)
    n = data.draw(st.integers(0, b.size - 1))
    e = expand_index(n, b)
    assert sum(d * m for d, m in zip(e.digits, b.scales)) == n
    if n:
        assert b.scales[e.order] <= n < b.scales[e.order + 1]


def test_basis_is_hashable_value():
    assert isinstance(build_basis([2, 3]), Basis)
    assert len({build_basis([2, 3]), build_basis([2, 3])}) == 1
    assert np.array_equal(build_basis([2, 3]).scale_array, [1, 2])
