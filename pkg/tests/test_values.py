import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import vetgate as vg
from vetgate import MissingKind, TypeTag
from vetgate.errors import ColumnParseError, UsageError


def test_nan_becomes_missing_of_kind_nan():
    x = vg.float_vector([1.0, math.nan, None])
    assert x.tag is TypeTag.FLOAT
    assert list(x.mask) == [MissingKind.PRESENT, MissingKind.NAN, MissingKind.ABSENT]
    assert vg.length_of(x) == 3


def test_as_value_conversions():
    assert vg.as_value(None).tag is TypeTag.NULL
    assert vg.as_value(True).tag is TypeTag.BOOL
    assert vg.as_value(3).tag is TypeTag.INT
    assert vg.as_value([1, 2.5]).tag is TypeTag.FLOAT
    assert vg.as_value(['a', None]).tag is TypeTag.STR
    assert vg.as_value([1, 'a']).tag is TypeTag.LIST
    assert vg.as_value({'a': 1}).names == ('a',)
    m = vg.as_value(np.arange(6.0).reshape(2, 3))
    assert m.tag is TypeTag.MATRIX and m.dims == (2, 3)


def test_bool_is_not_int():
    assert vg.as_value([True, False]).tag is TypeTag.BOOL
    assert vg.as_value([True, 1]).tag is TypeTag.LIST


def test_factor_levels_default_sorted():
    f = vg.factor(['b', 'a', 'b'])
    assert f.levels == ('a', 'b')
    assert f.to_python() == ['b', 'a', 'b']
    with pytest.raises(UsageError):
        vg.factor(['c'], levels=['a'])


def test_matrix_is_column_major():
    m = vg.matrix([1, 2, 3, 4, 5, 6], 2, 3)
    assert m.dims == (2, 3)
    assert m.data[2] == 3
    with pytest.raises(UsageError):
        vg.matrix([1, 2, 3], 2, 2)


def test_frame_requires_equal_lengths_and_unique_names():
    f = vg.frame({'a': vg.int_vector([1, 2]), 'b': vg.str_vector(['x', 'y'])})
    assert vg.length_of(f) == 2
    assert f.column_names == ('a', 'b')
    with pytest.raises(UsageError):
        vg.frame({'a': vg.int_vector([1]), 'b': vg.int_vector([1, 2])})
    with pytest.raises(UsageError):
        vg.frame([('a', vg.int_vector([1])), ('a', vg.int_vector([2]))])


def test_parse_column_inference():
    assert vg.parse_column(['1', '2']).tag is TypeTag.INT
    assert vg.parse_column(['1', '2.5']).tag is TypeTag.FLOAT
    assert vg.parse_column(['TRUE', 'false']).tag is TypeTag.BOOL
    assert vg.parse_column(['1', 'x']).tag is TypeTag.STR
    x = vg.parse_column(['1', 'NA', ''])
    assert x.tag is TypeTag.INT
    assert list(x.mask) == [0, 1, 1]


def test_parse_column_hint_errors():
    with pytest.raises(ColumnParseError) as info:
        vg.parse_column(['1', 'x'], TypeTag.FLOAT)
    assert info.value.index == 2
    with pytest.raises(UsageError):
        vg.parse_column(['1'], TypeTag.LIST)


def test_quoted_cells_are_text():
    x = vg.parse_column(['NA', ''], TypeTag.STR, quoted=[True, True])
    assert x.to_python() == ['NA', '']


def test_equality_and_hash():
    a = vg.float_vector([1.0, None])
    b = vg.float_vector([1.0, None])
    assert a == b and hash(a) == hash(b)
    assert a != vg.float_vector([1.0, math.nan])


_cells = {
    TypeTag.BOOL: st.booleans(),
    TypeTag.INT: st.integers(-2**63, 2**63 - 1),
    TypeTag.FLOAT: st.floats(allow_nan=False),
    # "" always reads back as missing, so it cannot round-trip
    TypeTag.STR: st.text(min_size=1).filter(lambda s: s != 'NA'),
}


_builders = {TypeTag.BOOL: vg.bool_vector, TypeTag.INT: vg.int_vector,
             TypeTag.FLOAT: vg.float_vector, TypeTag.STR: vg.str_vector}


@given(st.sampled_from(list(_cells)).flatmap(
    lambda tag: st.tuples(st.just(tag), st.lists(st.one_of(st.none(), _cells[tag]), max_size=8))))
def test_render_parse_round_trip(case):
    tag, elements = case
    x = _builders[tag](elements)
    assert vg.parse_column(vg.render_cells(x), tag) == x
