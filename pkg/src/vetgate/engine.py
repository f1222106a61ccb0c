"""Structured checks.

Every ``check_*`` function returns ``True`` on success or a failure
message string naming the first violated constraint. Constraints are
evaluated cheapest first: type tag, length, names, one element scan that
stops at the first violation, and uniqueness last (the only check that
needs storage proportional to the input).
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Mapping, Optional, Sequence, Union

from . import _kernels as kernels
from .errors import UsageError
from .values import ATOMIC_TAGS, VECTOR_TAGS, MissingKind, TypeTag, Value, length_of

__all__ = [
    'CheckOutcome',
    'NamesPolicy',
    'LengthConstraint',
    'Bounds',
    'VectorSpec',
    'Scalar',
    'ScalarKind',
    'FrameSpec',
    'MatrixSpec',
    'DEFAULT_TOLERANCE',
    'check_vector',
    'check_integerish',
    'check_scalar',
    'check_names',
    'check_subset',
    'check_choice',
    'check_set_equal',
    'check_frame',
    'check_matrix',
    'is_ok',
]

CheckOutcome = Union[bool, str]

DEFAULT_TOLERANCE = 1e-8

INF = math.inf

ELEMENT_TAGS = frozenset(VECTOR_TAGS | {TypeTag.LIST})
INTEGERISH_TAGS = frozenset({TypeTag.BOOL, TypeTag.INT, TypeTag.FLOAT})
NUMERIC_TAGS = frozenset({TypeTag.INT, TypeTag.FLOAT})

_TAG_ORDER = {tag: k for k, tag in enumerate(TypeTag)}


def is_ok(outcome):
    return outcome is True


# -- formatting -------------------------------------------------------------

def fmt_value(v):
    if isinstance(v, bool):
        return 'TRUE' if v else 'FALSE'
    if isinstance(v, float):
        if math.isinf(v):
            return 'Inf' if v > 0 else '-Inf'
        return f'{v:.15g}'
    if isinstance(v, str):
        return repr(v)
    if isinstance(v, Value):
        return repr(v)
    return str(v)


def fmt_set(values):
    return '{' + ','.join(fmt_value(v) for v in values) + '}'


def type_phrase(tags):
    return _type_phrase(frozenset(tags))


@lru_cache(maxsize=512)
def _type_phrase(tags):
    ordered = sorted(tags, key=_TAG_ORDER.__getitem__)
    return ' or '.join(f"'{tag.value}'" for tag in ordered)


@lru_cache(maxsize=1024)
def type_failure(expected, actual):
    return f"Must be of type {type_phrase(frozenset(expected))}, not '{actual.value}'"


def missing_failure(status, where):
    what = 'a NaN value' if status == kernels.MISSING_NAN else 'a missing value'
    return f'Must not contain missing values, but has {what} ({where})'


# -- constraint types -------------------------------------------------------

class NamesPolicy(enum.Enum):
    UNNAMED = 'unnamed'
    ANY = 'any'
    NAMED = 'named'
    UNIQUE = 'unique'
    STRICT = 'strict'

    @classmethod
    def coerce(cls, policy):
        if policy is None:
            return cls.ANY
        if isinstance(policy, cls):
            return policy
        try:
            return cls(policy)
        except ValueError:
            raise UsageError(f'unknown names policy {policy!r}') from None


def _count(value, what):
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise UsageError(f'{what} must be a non-negative integer, got {value!r}')
    return value


@dataclass(frozen=True)
class LengthConstraint:
    exact: Optional[int] = None
    min: Optional[int] = None
    max: Optional[int] = None

    def __post_init__(self):
        _count(self.exact, 'exact length')
        _count(self.min, 'minimum length')
        _count(self.max, 'maximum length')
        if self.exact is not None and (self.min is not None or self.max is not None):
            raise UsageError('exact length excludes minimum and maximum length')
        if self.min is not None and self.max is not None and self.min > self.max:
            raise UsageError(f'minimum length {self.min} exceeds maximum length {self.max}')

    @property
    def unconstrained(self):
        return self.exact is None and self.min is None and self.max is None

    def violation(self, n, noun='length'):
        if self.exact is not None:
            if n != self.exact:
                return f'Must have {noun} {self.exact}, but has {noun} {n}'
        else:
            if self.min is not None and n < self.min:
                return f'Must have {noun} >= {self.min}, but has {noun} {n}'
            if self.max is not None and n > self.max:
                return f'Must have {noun} <= {self.max}, but has {noun} {n}'
        return None


def length_constraint(len=None, min_len=None, max_len=None):
    return LengthConstraint(exact=len, min=min_len, max=max_len)


def _number(value, what):
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise UsageError(f'{what} must be a number, got {value!r}')
    value = float(value)
    if math.isnan(value):
        raise UsageError(f'{what} must not be NaN')
    return value


@dataclass(frozen=True)
class Bounds:
    """Interval on numeric elements.

    An absent endpoint stands for infinity, so ``Bounds(0.0)`` is
    ``[0, Inf]`` and admits ``Inf`` while an absent open endpoint only
    admits finite values on that side.
    """
    lower: Optional[float] = None
    lower_closed: bool = True
    upper: Optional[float] = None
    upper_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'lower', _number(self.lower, 'lower bound'))
        object.__setattr__(self, 'upper', _number(self.upper, 'upper bound'))
        if self.lower is not None and self.upper is not None and self.lower > self.upper:
            raise UsageError(f'lower bound {self.lower} exceeds upper bound {self.upper}')

    def scan_args(self):
        lower = -INF if self.lower is None else self.lower
        upper = INF if self.upper is None else self.upper
        return lower, not self.lower_closed, upper, not self.upper_closed

    @property
    def trivial(self):
        lower, lower_strict, upper, upper_strict = self.scan_args()
        return lower == -INF and not lower_strict and upper == INF and not upper_strict

    def lower_failure(self, v, where):
        lower, strict, _, _ = self.scan_args()
        op = '>' if strict else '>='
        return f'Must be {op} {fmt_value(lower)}, but has value {fmt_value(v)} ({where})'

    def upper_failure(self, v, where):
        _, _, upper, strict = self.scan_args()
        op = '<' if strict else '<='
        return f'Must be {op} {fmt_value(upper)}, but has value {fmt_value(v)} ({where})'

    def contains(self, v):
        lower, lower_strict, upper, upper_strict = self.scan_args()
        above = v > lower if lower_strict else v >= lower
        below = v < upper if upper_strict else v <= upper
        return above and below

    def intersect(self, other):
        if other is None:
            return self
        a_lo, a_ls, a_hi, a_us = self.scan_args()
        b_lo, b_ls, b_hi, b_us = other.scan_args()
        if a_lo != b_lo:
            lo, ls = (a_lo, a_ls) if a_lo > b_lo else (b_lo, b_ls)
        else:
            lo, ls = a_lo, a_ls or b_ls
        if a_hi != b_hi:
            hi, us = (a_hi, a_us) if a_hi < b_hi else (b_hi, b_us)
        else:
            hi, us = a_hi, a_us or b_us
        return Bounds(None if lo == -INF and ls else lo, not ls,
                      None if hi == INF and us else hi, not us)


def _tag_set(tags, allowed, what):
    if isinstance(tags, TypeTag):
        tags = {tags}
    tags = frozenset(tags)
    if not tags:
        raise UsageError(f'{what} must not be empty')
    bad = tags - allowed
    if bad:
        raise UsageError(f'{what} may not contain {type_phrase(bad)}')
    return tags


@dataclass(frozen=True)
class VectorSpec:
    expected: frozenset
    integerish: bool = False
    tolerance: float = DEFAULT_TOLERANCE
    any_missing_ok: bool = True
    all_missing_ok: bool = True
    length: LengthConstraint = LengthConstraint()
    bounds: Optional[Bounds] = None
    unique: bool = False
    names: NamesPolicy = NamesPolicy.ANY
    pattern: Optional[str] = None
    _regex: Optional[re.Pattern] = field(default=None, init=False, repr=False, compare=False)
    _scan_args: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        expected = _tag_set(self.expected, ELEMENT_TAGS, 'expected types')
        object.__setattr__(self, 'expected', expected)
        object.__setattr__(self, 'names', NamesPolicy.coerce(self.names))
        if not self.tolerance > 0:
            raise UsageError(f'tolerance must be positive, got {self.tolerance!r}')
        if self.integerish and not expected <= INTEGERISH_TAGS:
            raise UsageError('integerish requires Bool, Int or Float expected types')
        if self.bounds is not None and not (expected <= NUMERIC_TAGS or self.integerish):
            raise UsageError(
                f'bounds require numeric or integerish expected types, not {type_phrase(expected)}')
        if self.pattern is not None:
            if not expected <= {TypeTag.STR, TypeTag.FACTOR}:
                raise UsageError('pattern requires Str or Factor expected types')
            try:
                object.__setattr__(self, '_regex', re.compile(self.pattern))
            except re.error as exc:
                raise UsageError(f'invalid pattern {self.pattern!r}: {exc}') from None
        lower, lower_strict, upper, upper_strict = (
            self.bounds.scan_args() if self.bounds is not None else (-INF, False, INF, False))
        object.__setattr__(self, '_scan_args', (
            self.any_missing_ok, lower, lower_strict, upper, upper_strict,
            self.integerish, self.tolerance))


def vector_spec(expected, **options):
    return VectorSpec(expected=expected, **options)


class Scalar(enum.Enum):
    FLAG = 'flag'
    INT = 'int'
    COUNT = 'count'
    NUMBER = 'number'
    STRING = 'string'


@dataclass(frozen=True)
class ScalarKind:
    scalar: Scalar
    na_ok: bool = False
    bounds: Optional[Bounds] = None
    positive_required: bool = False

    def __post_init__(self):
        scalar = Scalar(self.scalar)
        object.__setattr__(self, 'scalar', scalar)
        if self.bounds is not None and scalar not in (Scalar.INT, Scalar.COUNT, Scalar.NUMBER):
            raise UsageError(f'bounds are not supported for {scalar.value} scalars')
        if self.positive_required and scalar is not Scalar.COUNT:
            raise UsageError('positive_required applies to count scalars only')


@dataclass(frozen=True)
class FrameSpec:
    column_types: Optional[Mapping] = None
    required_columns: Optional[Sequence[str]] = None
    nrows: LengthConstraint = LengthConstraint()
    ncols: LengthConstraint = LengthConstraint()
    any_missing_ok: bool = True

    def __post_init__(self):
        if self.required_columns is not None:
            req = tuple(self.required_columns)
            if len(set(req)) != len(req):
                raise UsageError('required columns must be distinct')
            object.__setattr__(self, 'required_columns', req)
        if self.column_types is not None:
            types = tuple((name, _tag_set(tags, VECTOR_TAGS, f'types of column {name!r}'))
                          for name, tags in dict(self.column_types).items())
            object.__setattr__(self, 'column_types', types)


@dataclass(frozen=True)
class MatrixSpec:
    element_types: frozenset = ATOMIC_TAGS
    nrows: LengthConstraint = LengthConstraint()
    ncols: LengthConstraint = LengthConstraint()
    any_missing_ok: bool = True
    row_names: NamesPolicy = NamesPolicy.ANY
    col_names: NamesPolicy = NamesPolicy.ANY

    def __post_init__(self):
        object.__setattr__(self, 'element_types',
                           _tag_set(self.element_types, ATOMIC_TAGS, 'element types'))
        object.__setattr__(self, 'row_names', NamesPolicy.coerce(self.row_names))
        object.__setattr__(self, 'col_names', NamesPolicy.coerce(self.col_names))


# -- names ------------------------------------------------------------------

_IDENTIFIER = re.compile(r'[A-Za-z.][A-Za-z0-9._]*')

RESERVED_WORDS = frozenset({
    'if', 'else', 'repeat', 'while', 'function', 'for', 'in', 'next', 'break',
    'TRUE', 'FALSE', 'NULL', 'Inf', 'NaN', 'NA', 'NA_integer_', 'NA_real_',
    'NA_character_', 'NA_complex_',
})


def is_syntactic_name(name):
    return bool(_IDENTIFIER.fullmatch(name)) and name not in RESERVED_WORDS


def _names_failure(names, policy, noun='names'):
    if policy is NamesPolicy.ANY:
        return None
    if policy is NamesPolicy.UNNAMED:
        return None if names is None else f'Must have no {noun}, but has {noun}'
    if names is None:
        return f'Must have {noun}, but has no {noun}'
    for i, nm in enumerate(names):
        if nm is None:
            return f'Must have {noun}, but has a missing name (element {i + 1})'
        if nm == '':
            return f'Must have {noun}, but has an empty name (element {i + 1})'
    if policy is NamesPolicy.NAMED:
        return None
    seen = set()
    for i, nm in enumerate(names):
        if nm in seen:
            return f'Must have unique {noun}, but has duplicated name {nm!r} (element {i + 1})'
        seen.add(nm)
    if policy is NamesPolicy.STRICT:
        for i, nm in enumerate(names):
            if not is_syntactic_name(nm):
                return (f'Must have syntactically valid {noun}, '
                        f'but has name {nm!r} (element {i + 1})')
    return None


def check_names(names, policy=NamesPolicy.ANY):
    policy = NamesPolicy.coerce(policy)
    if isinstance(names, Value):
        if names.tag is TypeTag.NULL:
            names = None
        elif names.tag is TypeTag.STR:
            names = tuple(names.to_python())
        else:
            return type_failure(frozenset({TypeTag.STR}), names.tag)
    elif names is not None:
        names = tuple(names)
        for nm in names:
            if nm is not None and not isinstance(nm, str):
                raise UsageError(f'names must be text or None, got {nm!r}')
    return _names_failure(names, policy) or True


# -- vectors ----------------------------------------------------------------

def _element_failure(x, spec):
    """Single pass over the elements; returns a message or None."""
    tag = x.tag
    mask = x.mask
    if spec._regex is not None:
        return _scan_text(x, spec)
    need_values = spec.bounds is not None or (spec.integerish and tag is TypeTag.FLOAT)
    if need_values:
        args = spec._scan_args
        if tag is not TypeTag.FLOAT:
            args = args[:5] + (False,) + args[6:]
        status, i, seen_present = kernels.numeric(x.data, mask, *args)
    elif not spec.any_missing_ok or not spec.all_missing_ok:
        status, i, seen_present = kernels.missing(
            mask, spec.any_missing_ok, not spec.all_missing_ok)
    else:
        return None
    if status == kernels.OK:
        if not spec.all_missing_ok and not seen_present and i > 0:
            return f'Must not have all elements missing, but all {i} are missing'
        return None
    where = f'element {i + 1}'
    if status == kernels.MISSING or status == kernels.MISSING_NAN:
        return missing_failure(status, where)
    v = _element(x, i)
    if status == kernels.NOT_INTEGERISH:
        return f'Must be integerish, but has value {fmt_value(v)} ({where})'
    if status == kernels.BELOW:
        return spec.bounds.lower_failure(v, where)
    return spec.bounds.upper_failure(v, where)


def _element(x, i):
    v = x.data[i]
    if x.tag is TypeTag.BOOL:
        return bool(v)
    if x.tag is TypeTag.INT:
        return int(v)
    return float(v)


def _scan_text(x, spec):
    mask = x.mask
    data = x.data
    search = spec._regex.search
    levels = x.levels if x.tag is TypeTag.FACTOR else None
    any_missing_ok = spec.any_missing_ok
    seen_present = False
    n = len(mask)
    for i in range(n):
        m = mask[i]
        if m:
            if not any_missing_ok:
                status = kernels.MISSING_NAN if m == MissingKind.NAN else kernels.MISSING
                return missing_failure(status, f'element {i + 1}')
            continue
        seen_present = True
        text = data[i] if levels is None else levels[data[i]]
        if search(text) is None:
            return (f'Must match pattern {spec.pattern!r}, '
                    f'but has value {text!r} (element {i + 1})')
    if not spec.all_missing_ok and not seen_present and n > 0:
        return f'Must not have all elements missing, but all {n} are missing'
    return None


def _hashable_elements(x):
    if x.tag is TypeTag.LIST:
        return [item._key() for item in x.items]
    if x.tag is TypeTag.STR:
        return x.data
    return x.data.tolist()


def _unique_failure(x):
    seen = set()
    add = seen.add
    mask = x.mask.tolist()
    for i, v in enumerate(_hashable_elements(x)):
        if mask[i]:
            continue
        if v in seen:
            shown = x.levels[v] if x.tag is TypeTag.FACTOR else v
            if x.tag is TypeTag.LIST:
                shown = x.items[i]
            return f'Must be unique, but has duplicated value {fmt_value(shown)} (element {i + 1})'
        add(v)
    return None


def check_vector(x, spec):
    """Check a vector value against a :class:`VectorSpec`."""
    tag = x.tag
    if tag not in spec.expected:
        return type_failure(spec.expected, tag)
    failure = spec.length.violation(len(x.mask))
    if failure:
        return failure
    if spec.names is not NamesPolicy.ANY:
        failure = _names_failure(x.names, spec.names)
        if failure:
            return failure
    failure = _element_failure(x, spec)
    if failure:
        return failure
    if spec.unique:
        failure = _unique_failure(x)
        if failure:
            return failure
    return True


def check_integerish(x, tolerance=DEFAULT_TOLERANCE, spec=None):
    """Int values pass; Bool and Float values must lie within ``tolerance`` of an integer."""
    if not tolerance > 0:
        raise UsageError(f'tolerance must be positive, got {tolerance!r}')
    if spec is None:
        spec = VectorSpec(INTEGERISH_TAGS, integerish=True, tolerance=tolerance)
    else:
        spec = replace(spec, expected=spec.expected & INTEGERISH_TAGS or INTEGERISH_TAGS,
                       integerish=True, tolerance=tolerance)
    return check_vector(x, spec)


# -- scalars ----------------------------------------------------------------

_SCALAR_TYPES = {
    Scalar.FLAG: frozenset({TypeTag.BOOL}),
    Scalar.INT: NUMERIC_TAGS,
    Scalar.COUNT: NUMERIC_TAGS,
    Scalar.NUMBER: NUMERIC_TAGS,
    Scalar.STRING: frozenset({TypeTag.STR}),
}


@lru_cache(maxsize=256)
def _scalar_spec(kind):
    bounds = kind.bounds
    if kind.scalar is Scalar.COUNT:
        floor = Bounds(1.0 if kind.positive_required else 0.0)
        bounds = floor.intersect(bounds)
    return VectorSpec(
        _SCALAR_TYPES[kind.scalar],
        integerish=kind.scalar in (Scalar.INT, Scalar.COUNT),
        any_missing_ok=kind.na_ok,
        length=LengthConstraint(exact=1),
        bounds=bounds,
    )


def check_scalar(x, kind):
    return check_vector(x, _scalar_spec(kind))


# -- sets -------------------------------------------------------------------

def _family(tag):
    if tag in NUMERIC_TAGS:
        return 'numeric'
    if tag in (TypeTag.STR, TypeTag.FACTOR):
        return 'text'
    return tag


def _present_values(x):
    if x.tag is TypeTag.NULL:
        return []
    values = x.to_python()
    return [v for v in values if v is not None]


def _require_vector(v, what):
    if v.tag not in VECTOR_TAGS:
        raise UsageError(f'{what} must be an atomic vector or factor, not {v.tag}')


def _compatible(x, reference):
    if x.tag not in VECTOR_TAGS or _family(x.tag) != _family(reference.tag):
        return type_failure(frozenset({reference.tag}), x.tag)
    return None


def _distinct(values):
    return list(dict.fromkeys(values))


def check_subset(x, choices):
    _require_vector(choices, 'choices')
    if length_of(x) == 0:
        return True
    failure = _compatible(x, choices)
    if failure:
        return failure
    allowed = set(_present_values(choices))
    mask = x.mask.tolist()
    for i, v in enumerate(x.to_python()):
        if mask[i]:
            continue
        if v not in allowed:
            return (f'Must be a subset of {fmt_set(_distinct(_present_values(choices)))}, '
                    f'but has additional element {fmt_value(v)} (element {i + 1})')
    return True


def check_choice(x, choices):
    _require_vector(choices, 'choices')
    failure = _compatible(x, choices) if x.tag is not TypeTag.NULL else None
    if failure:
        return failure
    n = length_of(x)
    if n != 1:
        return f'Must have length 1, but has length {n}'
    shown = fmt_set(_distinct(_present_values(choices)))
    if x.mask[0]:
        return f'Must be element of set {shown}, but is missing'
    v = x.to_python()[0]
    if v not in set(_present_values(choices)):
        return f'Must be element of set {shown}, but is {fmt_value(v)}'
    return True


def check_set_equal(x, y):
    _require_vector(y, 'comparison set')
    if length_of(x) == 0 and x.tag is TypeTag.NULL:
        x_values = []
    else:
        failure = _compatible(x, y)
        if failure:
            return failure
        x_values = _present_values(x)
    y_values = _distinct(_present_values(y))
    x_set = set(x_values)
    y_set = set(y_values)
    for v in y_values:
        if v not in x_set:
            return f'Must be equal to set {fmt_set(y_values)}, but is missing element {fmt_value(v)}'
    for v in _distinct(x_values):
        if v not in y_set:
            return f'Must be equal to set {fmt_set(y_values)}, but has extra element {fmt_value(v)}'
    return True


# -- compound ---------------------------------------------------------------

def check_frame(x, spec):
    if x.tag is not TypeTag.FRAME:
        return f"Must be a Frame, not '{x.tag}'"
    failure = (spec.ncols.violation(len(x.columns), 'column count')
               or spec.nrows.violation(length_of(x), 'row count'))
    if failure:
        return failure
    present = dict(x.columns)
    for name in spec.required_columns or ():
        if name not in present:
            return f'Must have column {name!r}, but has columns {fmt_set(x.column_names)}'
    for name, tags in spec.column_types or ():
        col = present.get(name)
        if col is not None and col.tag not in tags:
            return (f'Must have column {name!r} of type {type_phrase(tags)}, '
                    f"but it has type '{col.tag}'")
    if not spec.any_missing_ok:
        for name, col in x.columns:
            status, i, _ = kernels.missing(col.mask, False, False)
            if status != kernels.OK:
                return missing_failure(status, f'column {name!r}, row {i + 1}')
    return True


def check_matrix(x, spec):
    if x.tag is not TypeTag.MATRIX:
        return f"Must be a Matrix, not '{x.tag}'"
    if x.elem_tag not in spec.element_types:
        return (f'Must have elements of type {type_phrase(spec.element_types)}, '
                f"not '{x.elem_tag}'")
    nrows, ncols = x.dims
    failure = (spec.nrows.violation(nrows, 'row count')
               or spec.ncols.violation(ncols, 'column count')
               or _names_failure(x.row_names, spec.row_names, 'row names')
               or _names_failure(x.col_names, spec.col_names, 'column names'))
    if failure:
        return failure
    if not spec.any_missing_ok:
        status, i, _ = kernels.missing(x.mask, False, False)
        if status != kernels.OK:
            row, col = i % nrows + 1, i // nrows + 1
            return missing_failure(status, f'element {i + 1}, row {row}, column {col}')
    return True
