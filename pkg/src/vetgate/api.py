"""The four prefix families.

For every check ``check_<what>`` there is ``assert_<what>`` (raise or
return ``x``), ``test_<what>`` (boolean) and ``expect_<what>`` (forward a
record to a reporter), plus camelCase aliases (``assertNumeric``). Custom
checks get the same treatment through :func:`make_assertion`,
:func:`make_test` and :func:`make_expectation`.

Values may be passed as :class:`~vetgate.values.Value` or as plain Python
data, which is converted with :func:`~vetgate.values.as_value`.
"""

from __future__ import annotations

import functools
import inspect
import threading
from dataclasses import dataclass
from typing import List, Optional

from . import engine
from .engine import (
    DEFAULT_TOLERANCE,
    INTEGERISH_TAGS,
    NUMERIC_TAGS,
    Bounds,
    FrameSpec,
    LengthConstraint,
    MatrixSpec,
    NamesPolicy,
    Scalar,
    ScalarKind,
    VectorSpec,
    fmt_set,
)
from .errors import UsageError, ValidationError
from .values import TypeTag, Value, as_value

__all__ = [
    'ExpectationRecord',
    'Reporter',
    'CollectingReporter',
    'FailFastReporter',
    'ExpectationFailed',
    'check_that',
    'assert_that',
    'test_that',
    'expect_that',
    'make_assertion',
    'make_test',
    'make_expectation',
]


# -- expectations -----------------------------------------------------------

@dataclass(frozen=True)
class ExpectationRecord:
    label: str
    passed: bool
    message: Optional[str] = None
    source_hint: Optional[str] = None

    def __post_init__(self):
        if self.passed != (self.message is None):
            raise UsageError('an expectation has a message iff it failed')


class Reporter:
    """Receives expectation records in invocation order."""

    def report(self, record):
        raise NotImplementedError


class CollectingReporter(Reporter):
    """Appends every record to :attr:`records`; safe for concurrent use."""

    def __init__(self):
        self.records: List[ExpectationRecord] = []
        self._lock = threading.Lock()

    def report(self, record):
        with self._lock:
            self.records.append(record)

    @property
    def failures(self):
        return [r for r in self.records if not r.passed]


class ExpectationFailed(AssertionError):

    def __init__(self, record):
        super().__init__(f"Expectation on '{record.label}' failed: {record.message}")
        self.record = record


class FailFastReporter(CollectingReporter):
    """Records like :class:`CollectingReporter` and raises on the first failure."""

    def report(self, record):
        super().report(record)
        if not record.passed:
            raise ExpectationFailed(record)


# -- generic families -------------------------------------------------------

def _check_name(check):
    return getattr(check, '__name__', None) or type(check).__name__


def check_that(x, check, *args, **kwargs):
    outcome = check(x, *args, **kwargs)
    if outcome is True:
        return True
    if isinstance(outcome, str) and outcome:
        return outcome
    raise UsageError(
        f'check {_check_name(check)} must return True or a non-empty message, got {outcome!r}')


def assert_that(x, check, *args, label='x', **kwargs):
    outcome = check_that(x, check, *args, **kwargs)
    if outcome is not True:
        raise ValidationError(f"Assertion on '{label}' failed: {outcome}",
                              label=label, reason=outcome)
    return x


def test_that(x, check, *args, **kwargs):
    return check_that(x, check, *args, **kwargs) is True


def expect_that(x, check, *args, label='x', reporter, **kwargs):
    if reporter is None:
        raise UsageError('expectations need a reporter')
    outcome = check_that(x, check, *args, **kwargs)
    passed = outcome is True
    reporter.report(ExpectationRecord(label, passed, None if passed else outcome,
                                      _check_name(check)))
    return passed


test_that.__test__ = False


def _with_params(fn, check, *extra):
    try:
        sig = inspect.signature(check)
    except (TypeError, ValueError):
        return fn
    params = list(sig.parameters.values())
    var_kw = [p for p in params if p.kind is inspect.Parameter.VAR_KEYWORD]
    params = [p for p in params if p.kind is not inspect.Parameter.VAR_KEYWORD]
    params += [inspect.Parameter(name, inspect.Parameter.KEYWORD_ONLY, default=default)
               for name, default in extra] + var_kw
    fn.__signature__ = sig.replace(parameters=params, return_annotation=inspect.Signature.empty)
    return fn


def _rename(fn, check, prefix):
    base = _check_name(check)
    base = base[len('check_'):] if base.startswith('check_') else base
    fn.__name__ = fn.__qualname__ = f'{prefix}_{base}'
    return fn


def make_assertion(check):
    """Lift a check into an assertion ``(x, ..., label='x') -> x``."""
    def assertion(x, *args, label='x', **kwargs):
        return assert_that(x, check, *args, label=label, **kwargs)
    assertion.__doc__ = check.__doc__
    return _with_params(_rename(assertion, check, 'assert'), check, ('label', 'x'))


def make_test(check):
    """Lift a check into a predicate ``(x, ...) -> bool``."""
    def predicate(x, *args, **kwargs):
        return test_that(x, check, *args, **kwargs)
    predicate.__doc__ = check.__doc__
    predicate.__test__ = False
    return _with_params(_rename(predicate, check, 'test'), check)


def make_expectation(check, reporter=None):
    """Lift a check into an expectation ``(x, ..., label, reporter) -> bool``.

    ``reporter`` given here becomes the default for every call.
    """
    default_reporter = reporter

    def expectation(x, *args, label='x', reporter=None, **kwargs):
        return expect_that(x, check, *args, label=label,
                           reporter=reporter if reporter is not None else default_reporter,
                           **kwargs)
    expectation.__doc__ = check.__doc__
    return _with_params(_rename(expectation, check, 'expect'), check,
                        ('label', 'x'), ('reporter', default_reporter))


# -- argument plumbing ------------------------------------------------------

def _value(x):
    """Convert to a Value; unconvertible input becomes a failure message."""
    if isinstance(x, Value):
        return x, None
    try:
        return as_value(x), None
    except UsageError as exc:
        return None, f"Must be a supported value, not '{type(x).__name__}' ({exc})"


def _tags(spec):
    if isinstance(spec, (str, TypeTag)):
        spec = [spec]
    out = set()
    for item in spec:
        if isinstance(item, TypeTag):
            out.add(item)
        elif isinstance(item, str) and item.lower() == 'numeric':
            out |= NUMERIC_TAGS
        else:
            try:
                out.add(next(t for t in TypeTag if t.value.lower() == str(item).lower()))
            except StopIteration:
                raise UsageError(f'unknown type {item!r}') from None
    return frozenset(out)


def _bounds(lower, upper, finite=False):
    if lower is None and upper is None and not finite:
        return None
    bounds = Bounds(lower, True, upper, True)
    if finite:
        bounds = bounds.intersect(Bounds(None, False, None, False))
    return bounds


@functools.lru_cache(maxsize=512)
def _spec(expected, integerish=False, tolerance=DEFAULT_TOLERANCE, any_missing_ok=True,
          all_missing_ok=True, len=None, min_len=None, max_len=None, bounds=None,
          unique=False, names=None, pattern=None):
    return VectorSpec(expected, integerish=integerish, tolerance=tolerance,
                      any_missing_ok=any_missing_ok, all_missing_ok=all_missing_ok,
                      length=LengthConstraint(len, min_len, max_len), bounds=bounds,
                      unique=unique, names=NamesPolicy.coerce(names), pattern=pattern)


def _vector(x, null_ok, expected, **options):
    x, failure = _value(x)
    if failure:
        return failure
    if null_ok and x.tag is TypeTag.NULL:
        return True
    return engine.check_vector(x, _spec(expected, **options))


# -- named checks -----------------------------------------------------------

_BOOL = frozenset({TypeTag.BOOL})
_INT = frozenset({TypeTag.INT})
_FLOAT = frozenset({TypeTag.FLOAT})
_STR = frozenset({TypeTag.STR})
_FACTOR = frozenset({TypeTag.FACTOR})
_LIST = frozenset({TypeTag.LIST})


def check_logical(x, any_missing_ok=True, all_missing_ok=True, len=None, min_len=None,
                  max_len=None, names=None, null_ok=False):
    return _vector(x, null_ok, _BOOL, any_missing_ok=any_missing_ok,
                   all_missing_ok=all_missing_ok, len=len, min_len=min_len,
                   max_len=max_len, names=names)


def check_integer(x, lower=None, upper=None, any_missing_ok=True, all_missing_ok=True,
                  len=None, min_len=None, max_len=None, unique=False, names=None,
                  null_ok=False):
    return _vector(x, null_ok, _INT, any_missing_ok=any_missing_ok,
                   all_missing_ok=all_missing_ok, len=len, min_len=min_len,
                   max_len=max_len, bounds=_bounds(lower, upper), unique=unique, names=names)


def check_integerish(x, tol=DEFAULT_TOLERANCE, lower=None, upper=None, any_missing_ok=True,
                     all_missing_ok=True, len=None, min_len=None, max_len=None,
                     unique=False, names=None, null_ok=False):
    """Int values, or Bool/Float values within ``tol`` of an integer."""
    return _vector(x, null_ok, INTEGERISH_TAGS, integerish=True, tolerance=tol,
                   any_missing_ok=any_missing_ok, all_missing_ok=all_missing_ok, len=len,
                   min_len=min_len, max_len=max_len, bounds=_bounds(lower, upper),
                   unique=unique, names=names)


def check_numeric(x, lower=None, upper=None, finite=False, any_missing_ok=True,
                  all_missing_ok=True, len=None, min_len=None, max_len=None, unique=False,
                  names=None, null_ok=False):
    """Int or Float vector. Bounds are inclusive; ``finite`` rejects infinities."""
    return _vector(x, null_ok, NUMERIC_TAGS, any_missing_ok=any_missing_ok,
                   all_missing_ok=all_missing_ok, len=len, min_len=min_len,
                   max_len=max_len, bounds=_bounds(lower, upper, finite), unique=unique,
                   names=names)


def check_double(x, lower=None, upper=None, finite=False, any_missing_ok=True,
                 all_missing_ok=True, len=None, min_len=None, max_len=None, unique=False,
                 names=None, null_ok=False):
    return _vector(x, null_ok, _FLOAT, any_missing_ok=any_missing_ok,
                   all_missing_ok=all_missing_ok, len=len, min_len=min_len,
                   max_len=max_len, bounds=_bounds(lower, upper, finite), unique=unique,
                   names=names)


def check_character(x, pattern=None, any_missing_ok=True, all_missing_ok=True, len=None,
                    min_len=None, max_len=None, unique=False, names=None, null_ok=False):
    """Str vector; ``pattern`` is searched (not anchored) in every present element."""
    return _vector(x, null_ok, _STR, any_missing_ok=any_missing_ok,
                   all_missing_ok=all_missing_ok, len=len, min_len=min_len,
                   max_len=max_len, unique=unique, names=names, pattern=pattern)


def check_factor(x, levels=None, any_missing_ok=True, all_missing_ok=True, len=None,
                 min_len=None, max_len=None, unique=False, names=None, null_ok=False):
    outcome = _vector(x, null_ok, _FACTOR, any_missing_ok=any_missing_ok,
                      all_missing_ok=all_missing_ok, len=len, min_len=min_len,
                      max_len=max_len, unique=unique, names=names)
    if outcome is not True or levels is None:
        return outcome
    x = as_value(x)
    if x.tag is TypeTag.FACTOR and set(x.levels) != set(levels):
        return (f'Must have levels {fmt_set(list(levels))}, '
                f'but has levels {fmt_set(list(x.levels))}')
    return True


def check_list(x, any_missing_ok=True, all_missing_ok=True, len=None, min_len=None,
               max_len=None, unique=False, names=None, null_ok=False):
    return _vector(x, null_ok, _LIST, any_missing_ok=any_missing_ok,
                   all_missing_ok=all_missing_ok, len=len, min_len=min_len,
                   max_len=max_len, unique=unique, names=names)


def _scalar(x, kind, null_ok):
    x, failure = _value(x)
    if failure:
        return failure
    if null_ok and x.tag is TypeTag.NULL:
        return True
    return engine.check_scalar(x, kind)


def check_flag(x, na_ok=False, null_ok=False):
    """Single Bool."""
    return _scalar(x, ScalarKind(Scalar.FLAG, na_ok), null_ok)


def check_int(x, na_ok=False, lower=None, upper=None, null_ok=False):
    return _scalar(x, ScalarKind(Scalar.INT, na_ok, _bounds(lower, upper)), null_ok)


def check_count(x, na_ok=False, positive=False, null_ok=False):
    """Single non-negative integerish number (``>= 1`` with ``positive``)."""
    return _scalar(x, ScalarKind(Scalar.COUNT, na_ok, positive_required=positive), null_ok)


def check_number(x, na_ok=False, lower=None, upper=None, finite=False, null_ok=False):
    return _scalar(x, ScalarKind(Scalar.NUMBER, na_ok, _bounds(lower, upper, finite)), null_ok)


def check_string(x, na_ok=False, null_ok=False):
    return _scalar(x, ScalarKind(Scalar.STRING, na_ok), null_ok)


def check_names(x, type='named'):
    """Names given as a sequence of text (None for missing) or a Str vector."""
    if x is not None and not isinstance(x, Value):
        if isinstance(x, str):
            x = [x]
        try:
            x = list(x)
        except TypeError:
            return f"Must be a sequence of names, not '{_typename(x)}'"
        if not all(nm is None or isinstance(nm, str) for nm in x):
            return 'Must be a sequence of text names'
    return engine.check_names(x, type)


def _typename(obj):
    return obj.__class__.__name__


def _pair(x, other):
    x, failure = _value(x)
    if failure:
        return None, None, failure
    other, failure = _value(other)
    if failure:
        raise UsageError(failure)
    return x, other, None


def check_subset(x, choices, empty_ok=True):
    x, choices, failure = _pair(x, choices)
    if failure:
        return failure
    if not empty_ok and len(x) == 0:
        return 'Must not be empty, but has length 0'
    return engine.check_subset(x, choices)


def check_choice(x, choices, null_ok=False):
    x, choices, failure = _pair(x, choices)
    if failure:
        return failure
    if null_ok and x.tag is TypeTag.NULL:
        return True
    return engine.check_choice(x, choices)


def check_set_equal(x, y):
    x, y, failure = _pair(x, y)
    if failure:
        return failure
    return engine.check_set_equal(x, y)


def check_data_frame(x, types=None, required_columns=None, any_missing_ok=True,
                     nrows=None, min_rows=None, max_rows=None, ncols=None, min_cols=None,
                     max_cols=None, null_ok=False):
    """Frame check. ``types`` maps column names to allowed type(s)."""
    x, failure = _value(x)
    if failure:
        return failure
    if null_ok and x.tag is TypeTag.NULL:
        return True
    column_types = None if types is None else {k: _tags(v) for k, v in dict(types).items()}
    spec = FrameSpec(column_types, required_columns,
                     LengthConstraint(nrows, min_rows, max_rows),
                     LengthConstraint(ncols, min_cols, max_cols), any_missing_ok)
    return engine.check_frame(x, spec)


def check_matrix(x, mode=None, any_missing_ok=True, nrows=None, min_rows=None,
                 max_rows=None, ncols=None, min_cols=None, max_cols=None,
                 row_names=None, col_names=None, null_ok=False):
    """Matrix check. ``mode`` restricts the element type(s)."""
    x, failure = _value(x)
    if failure:
        return failure
    if null_ok and x.tag is TypeTag.NULL:
        return True
    spec = MatrixSpec(
        _tags(mode) if mode is not None else MatrixSpec.element_types,
        LengthConstraint(nrows, min_rows, max_rows),
        LengthConstraint(ncols, min_cols, max_cols),
        any_missing_ok, row_names, col_names)
    return engine.check_matrix(x, spec)


CHECKS = (
    check_logical, check_integer, check_integerish, check_numeric, check_double,
    check_character, check_factor, check_list, check_flag, check_int, check_count,
    check_number, check_string, check_names, check_subset, check_choice,
    check_set_equal, check_data_frame, check_matrix,
)


def _camel(name):
    head, *rest = name.split('_')
    return head + ''.join(part.capitalize() for part in rest)


def _install():
    scope = globals()
    for check in CHECKS:
        base = check.__name__[len('check_'):]
        family = {
            f'check_{base}': check,
            f'assert_{base}': make_assertion(check),
            f'test_{base}': make_test(check),
            f'expect_{base}': make_expectation(check),
        }
        for name, fn in family.items():
            scope[name] = fn
            scope[_camel(name)] = fn
            __all__.extend((name, _camel(name)))


_install()
