import inspect
import threading

import pytest

import vetgate as vg
from vetgate.errors import UsageError, ValidationError


def test_four_families_agree():
    assert vg.check_numeric([1.0, -1.0], lower=0) == 'Must be >= 0, but has value -1 (element 2)'
    assert vg.test_numeric([1.0], lower=0)
    assert not vg.test_numeric([-1.0], lower=0)
    x = [1.0]
    assert vg.assert_numeric(x, any_missing_ok=False, lower=0) is x
    with pytest.raises(ValidationError) as info:
        vg.assert_numeric([-1.0], lower=0, label='rate')
    assert str(info.value) == "Assertion on 'rate' failed: Must be >= 0, but has value -1 (element 1)"
    assert info.value.reason == 'Must be >= 0, but has value -1 (element 1)'


def test_camel_case_aliases():
    assert vg.assertNumeric is vg.assert_numeric
    assert vg.testCount(2.0)
    assert vg.checkString(1) == "Must be of type 'Str', not 'Int'"


def test_scalar_checks():
    assert vg.check_flag(True) is True
    assert vg.check_flag([True, False]) is not True
    assert vg.test_count(2.0) and not vg.test_count(-1) and not vg.test_count(2.5)
    assert not vg.test_count(0, positive=True)
    assert vg.test_int(3) and not vg.test_int(True)
    assert vg.test_number(1.5, lower=1, upper=2)
    assert not vg.test_number(float('inf'), finite=True)
    assert vg.test_string(None, null_ok=True)
    assert not vg.test_string(None)


def test_vector_checks():
    assert vg.test_character(['ab', 'ac'], pattern='^a')
    assert not vg.test_character(['ab', 'b'], pattern='^a')
    assert vg.test_factor(vg.factor(['a'], levels=['a', 'b']), levels=['b', 'a'])
    assert not vg.test_factor(vg.factor(['a']), levels=['a', 'b'])
    assert vg.test_integerish([1.0, 2.0])
    assert not vg.test_integerish([1.5])
    assert vg.test_logical([True, None])
    assert not vg.test_logical([True, None], any_missing_ok=False)
    assert vg.test_list([1, 'a'])
    assert not vg.test_integer([1.0])
    assert vg.test_double([1.0], len=1)


def test_names_and_sets():
    assert vg.test_names(['a', 'b'], type='unique')
    assert not vg.test_names(['a', 'a'], type='unique')
    assert vg.test_subset(['a'], ['a', 'b'])
    assert not vg.test_subset([], ['a'], empty_ok=False)
    assert vg.test_choice('b', ['a', 'b'])
    assert vg.test_set_equal([1, 2, 2], [2, 1])


def test_frames_and_matrices():
    f = vg.frame({'a': vg.int_vector([1, 2]), 'b': vg.str_vector(['x', 'y'])})
    assert vg.test_data_frame(f, types={'a': 'Int', 'b': 'Str'}, nrows=2)
    assert not vg.test_data_frame(f, required_columns=['c'])
    m = vg.matrix([1.0, 2.0, 3.0, 4.0], 2, 2)
    assert vg.test_matrix(m, mode='Float', nrows=2)
    assert vg.check_matrix([True], mode='Bool') == "Must be a Matrix, not 'Bool'"


def test_unconvertible_input_is_a_failure():
    out = vg.check_numeric(object())
    assert isinstance(out, str) and out.startswith('Must be a supported value')


def test_custom_check_factory():
    def check_even(x, strict=False):
        """Even integers only."""
        if isinstance(x, int) and x % 2 == 0:
            return True
        return f'Must be even, not {x!r}'

    assert_even = vg.make_assertion(check_even)
    test_even = vg.make_test(check_even)
    rep = vg.CollectingReporter()
    expect_even = vg.make_expectation(check_even, reporter=rep)
    assert assert_even.__name__ == 'assert_even'
    assert test_even.__name__ == 'test_even'
    assert list(inspect.signature(assert_even).parameters) == ['x', 'strict', 'label']
    assert 'reporter' in inspect.signature(expect_even).parameters
    assert assert_even(4) == 4
    with pytest.raises(ValidationError, match="'n' failed: Must be even, not 3"):
        assert_even(3, label='n')
    assert test_even(2) and not test_even(3)
    assert not expect_even(5, label='five')
    assert rep.failures[0].message == 'Must be even, not 5'
    assert rep.failures[0].source_hint == 'check_even'


def test_bad_check_return_is_usage_error():
    with pytest.raises(UsageError):
        vg.check_that(1, lambda x: False)
    with pytest.raises(UsageError):
        vg.expect_that(1, lambda x: True, reporter=None)


def test_fail_fast_reporter():
    rep = vg.FailFastReporter()
    assert vg.expect_numeric([1.0], reporter=rep)
    with pytest.raises(vg.ExpectationFailed) as info:
        vg.expect_numeric(['a'], label='v', reporter=rep)
    assert info.value.record.label == 'v'
    assert len(rep.records) == 2


def test_expectation_record_invariant():
    with pytest.raises(UsageError):
        vg.ExpectationRecord('x', True, 'message')
    with pytest.raises(UsageError):
        vg.ExpectationRecord('x', False)


def test_collecting_reporter_threads():
    rep = vg.CollectingReporter()

    def work():
        for i in range(200):
            vg.expect_count(i, reporter=rep)

    threads = [threading.Thread(target=work) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(rep.records) == 800 and not rep.failures
