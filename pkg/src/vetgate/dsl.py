r"""Compact rule strings.

A rule has up to three parts, written without whitespace::

    rule    = class [ length ] [ range ] ;
    class   = "b" | "i" | "n" | "d" | "s" | "f" | "l" | "a" | "v" | "x" | "0"
            | "B" | "I" | "N" | "D" | "S" | "F" | "L" | "A" | "V" | "X" ;
    length  = "?" | "+" | [ "==" | "<" | "<=" | ">" | ">=" ] digits ;
    range   = ( "[" | "(" ) [ number ] "," [ number ] ( "]" | ")" ) ;
    number  = [ "-" ] ( digits [ "." { digit } ] | "." digits ) [ exponent ]
            | [ "-" ] "Inf" ;
    exponent = ( "e" | "E" ) [ "+" | "-" ] digits ;

A lowercase class letter permits missing elements, uppercase forbids
them. ``"N+[0,]"`` reads: numeric, no missing values, length at least
one, every element ``>= 0``.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from . import _kernels as kernels
from .engine import (
    Bounds,
    LengthConstraint,
    VectorSpec,
    fmt_value,
    missing_failure,
)
from .errors import RuleParseError, UsageError, ValidationError
from .values import TypeTag, as_value

__all__ = [
    'ClassCode',
    'LengthCode',
    'Rule',
    'parse_rule',
    'render_rule',
    'eval_rule',
    'qtest',
    'qcheck',
    'qassert',
    'qexpect',
    'rule_to_spec',
]


class ClassCode(enum.Enum):
    BOOL = 'b'
    INT = 'i'
    NUMERIC = 'n'
    DOUBLE = 'd'
    STR = 's'
    FACTOR = 'f'
    LIST = 'l'
    ATOMIC = 'a'
    ATOMIC_VECTOR = 'v'
    INTEGERISH = 'x'
    NULL = '0'


_VECTOR_TAGS = frozenset({TypeTag.BOOL, TypeTag.INT, TypeTag.FLOAT, TypeTag.STR, TypeTag.FACTOR})

CODE_TAGS = {
    ClassCode.BOOL: frozenset({TypeTag.BOOL}),
    ClassCode.INT: frozenset({TypeTag.INT}),
    ClassCode.NUMERIC: frozenset({TypeTag.INT, TypeTag.FLOAT}),
    ClassCode.DOUBLE: frozenset({TypeTag.FLOAT}),
    ClassCode.STR: frozenset({TypeTag.STR}),
    ClassCode.FACTOR: frozenset({TypeTag.FACTOR}),
    ClassCode.LIST: frozenset({TypeTag.LIST}),
    ClassCode.ATOMIC: _VECTOR_TAGS | {TypeTag.MATRIX},
    ClassCode.ATOMIC_VECTOR: _VECTOR_TAGS,
    ClassCode.INTEGERISH: frozenset({TypeTag.BOOL, TypeTag.INT, TypeTag.FLOAT}),
    ClassCode.NULL: frozenset({TypeTag.NULL}),
}

_CODE_NAMES = {
    ClassCode.BOOL: "'Bool'",
    ClassCode.INT: "'Int'",
    ClassCode.NUMERIC: "'Int' or 'Float'",
    ClassCode.DOUBLE: "'Float'",
    ClassCode.STR: "'Str'",
    ClassCode.FACTOR: "'Factor'",
    ClassCode.LIST: "'List'",
    ClassCode.ATOMIC: "'atomic'",
    ClassCode.ATOMIC_VECTOR: "'atomic vector'",
    ClassCode.INTEGERISH: "'integerish'",
    ClassCode.NULL: "'Null'",
}

RANGE_CODES = frozenset({ClassCode.INT, ClassCode.NUMERIC, ClassCode.DOUBLE, ClassCode.INTEGERISH})

_CODE_ORDER = {code: k for k, code in enumerate(ClassCode)}

_NUMERIC_ELEMENT_TAGS = frozenset({TypeTag.BOOL, TypeTag.INT, TypeTag.FLOAT})

_COMPARATORS = ('==', '<', '<=', '>', '>=')


@dataclass(frozen=True)
class LengthCode:
    """``op`` is ``'any'``, ``'?'``, ``'+'`` or a comparator applied to ``n``."""
    op: str = 'any'
    n: Optional[int] = None

    def __post_init__(self):
        if self.op in ('any', '?', '+'):
            if self.n is not None:
                raise UsageError(f'length code {self.op!r} takes no count')
        elif self.op in _COMPARATORS:
            if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 0:
                raise UsageError(f'length comparator needs a non-negative count, got {self.n!r}')
        else:
            raise UsageError(f'unknown length operator {self.op!r}')

    def accepts(self, n):
        op = self.op
        if op == 'any':
            return True
        if op == '?':
            return n <= 1
        if op == '+':
            return n >= 1
        k = self.n
        if op == '==':
            return n == k
        if op == '<':
            return n < k
        if op == '<=':
            return n <= k
        if op == '>':
            return n > k
        return n >= k

    def describe(self):
        if self.op == '?':
            return 'length <= 1'
        if self.op == '+':
            return 'length >= 1'
        if self.op == '==':
            return f'length {self.n}'
        return f'length {self.op} {self.n}'

    def render(self):
        if self.op == 'any':
            return ''
        if self.op in ('?', '+'):
            return self.op
        if self.op == '==':
            return str(self.n)
        return f'{self.op}{self.n}'

    def to_constraint(self):
        """Equivalent :class:`LengthConstraint`, or None when none exists."""
        op, k = self.op, self.n
        if op == 'any':
            return LengthConstraint()
        if op == '?':
            return LengthConstraint(max=1)
        if op == '+':
            return LengthConstraint(min=1)
        if op == '==':
            return LengthConstraint(exact=k)
        if op == '<':
            return LengthConstraint(max=k - 1) if k > 0 else None
        if op == '<=':
            return LengthConstraint(max=k)
        if op == '>':
            return LengthConstraint(min=k + 1)
        return LengthConstraint(min=k)


ANY_LENGTH = LengthCode()


@dataclass(frozen=True)
class Rule:
    class_codes: frozenset
    missing_ok: bool = True
    length: LengthCode = ANY_LENGTH
    range: Optional[Bounds] = None
    _accepted: frozenset = field(default=frozenset(), init=False, repr=False, compare=False)
    _integerish: bool = field(default=False, init=False, repr=False, compare=False)
    _scan_args: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        codes = self.class_codes
        if isinstance(codes, ClassCode):
            codes = {codes}
        codes = frozenset(ClassCode(c) for c in codes)
        if not codes:
            raise UsageError('a rule needs at least one class code')
        if self.range is not None and not codes <= RANGE_CODES:
            raise UsageError('a range requires class codes i, n, d or x')
        object.__setattr__(self, 'class_codes', codes)
        accepted = frozenset().union(*(CODE_TAGS[c] for c in codes))
        object.__setattr__(self, '_accepted', accepted)
        float_codes = {c for c in codes if TypeTag.FLOAT in CODE_TAGS[c]}
        object.__setattr__(self, '_integerish', float_codes == {ClassCode.INTEGERISH})
        bounds = self.range if self.range is not None else Bounds()
        object.__setattr__(self, '_scan_args', (self.missing_ok,) + bounds.scan_args())

    def __str__(self):
        return render_rule(self)


# -- parsing ----------------------------------------------------------------

_NUMBER_RE = re.compile(
    rb'-?(?:Inf|(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?)')
_DIGITS_RE = re.compile(rb'[0-9]+')

_END = 'end of rule'


def _found(src, pos):
    if pos >= len(src):
        return _END
    b = src[pos]
    if 0x21 <= b < 0x7f:
        return chr(b)
    return f'\\x{b:02x}'


class _Parser:

    def __init__(self, src, text):
        self.src = src
        self.text = text
        self.pos = 0

    def fail(self, expected, pos=None):
        pos = self.pos if pos is None else pos
        raise RuleParseError(pos, expected, _found(self.src, pos), rule=self.text)

    def peek(self):
        return self.src[self.pos:self.pos + 1]

    def parse(self):
        codes, missing_ok = self.parse_class()
        length = self.parse_length()
        range_ = None
        if self.peek() in (b'[', b'('):
            if not codes <= RANGE_CODES:
                self.fail(f'{_END} (a range requires class i, n, d or x)')
            range_ = self.parse_range()
        if self.pos < len(self.src):
            self.fail(_END if range_ is not None else f'length, range or {_END}')
        return Rule(codes, missing_ok, length, range_)

    def parse_class(self):
        c = self.peek()
        try:
            letter = c.decode('ascii')
            code = ClassCode(letter.lower())
        except (UnicodeDecodeError, ValueError):
            self.fail('class code')
        if letter != '0' and not letter.isalpha():
            self.fail('class code')
        self.pos += 1
        return frozenset({code}), not letter.isupper()

    def parse_length(self):
        c = self.peek()
        if c in (b'?', b'+'):
            self.pos += 1
            return LengthCode(c.decode())
        op = '=='
        for cand in ('<=', '>=', '==', '<', '>'):
            if self.src.startswith(cand.encode(), self.pos):
                op = cand
                self.pos += len(cand)
                break
        else:
            if c == b'=':
                self.fail("'=='")
            if not c.isdigit():
                return ANY_LENGTH
        m = _DIGITS_RE.match(self.src, self.pos)
        if m is None:
            self.fail('length count')
        self.pos = m.end()
        return LengthCode(op, int(m.group()))

    def parse_endpoint(self):
        m = _NUMBER_RE.match(self.src, self.pos)
        if m is None:
            return None
        self.pos = m.end()
        text = m.group().decode('ascii')
        return float(text.replace('Inf', 'inf'))

    def parse_range(self):
        lower_closed = self.peek() == b'['
        self.pos += 1
        lower = self.parse_endpoint()
        if self.peek() != b',':
            self.fail("',' or lower endpoint" if lower is None else "','")
        self.pos += 1
        upper_pos = self.pos
        upper = self.parse_endpoint()
        c = self.peek()
        if c not in (b']', b')'):
            self.fail("']', ')' or upper endpoint" if upper is None else "']' or ')'")
        if lower is not None and upper is not None and lower > upper:
            self.fail('upper endpoint >= lower endpoint', upper_pos)
        self.pos += 1
        return Bounds(lower, lower_closed, upper, c == b']')


def parse_rule(rule):
    """Parse a rule string (or bytes) into a :class:`Rule`.

    Raises :class:`RuleParseError` with a 0-based byte offset on malformed
    input.
    """
    if isinstance(rule, str):
        src = rule.encode('utf-8', 'surrogatepass')
    elif isinstance(rule, (bytes, bytearray)):
        src = bytes(rule)
    else:
        raise UsageError(f'rule must be text, got {type(rule).__name__}')
    return _Parser(src, rule).parse()


@lru_cache(maxsize=1024)
def _cached_rule(rule):
    return parse_rule(rule)


def compile_rule(rule):
    if isinstance(rule, Rule):
        return rule
    if isinstance(rule, str):
        return _cached_rule(rule)
    return parse_rule(rule)


def _render_endpoint(v):
    if v is None:
        return ''
    if math.isinf(v):
        return 'Inf' if v > 0 else '-Inf'
    return repr(v)


def render_rule(rule):
    if len(rule.class_codes) != 1:
        raise UsageError('only single-class rules have a text form')
    (code,) = rule.class_codes
    letter = code.value if rule.missing_ok else code.value.upper()
    out = letter + rule.length.render()
    b = rule.range
    if b is not None:
        out += ('[' if b.lower_closed else '(') + _render_endpoint(b.lower) + ','
        out += _render_endpoint(b.upper) + (']' if b.upper_closed else ')')
    return out


# -- evaluation -------------------------------------------------------------

@lru_cache(maxsize=512)
def _class_failure(codes, tag):
    return f"Must be of type {_class_phrase(codes)}, not '{tag.value}'"


def _class_phrase(codes):
    ordered = sorted(codes, key=_CODE_ORDER.__getitem__)
    return ' or '.join(_CODE_NAMES[c] for c in ordered)


def eval_rule(x, rule):
    """Evaluate a compiled rule; ``True`` or the first failure message."""
    tag = x.tag
    if tag not in rule._accepted:
        return _class_failure(rule.class_codes, tag)
    if tag is TypeTag.NULL:
        n = 0
    else:
        n = len(x.mask)
    if not rule.length.accepts(n):
        return f'Must have {rule.length.describe()}, but has length {n}'
    if tag is TypeTag.NULL:
        return True
    integerish = rule._integerish and tag is TypeTag.FLOAT
    if rule.range is not None and tag in _NUMERIC_ELEMENT_TAGS:
        status, i, _ = kernels.numeric(
            x.data, x.mask, *rule._scan_args, integerish, 1e-8)
    elif integerish:
        status, i, _ = kernels.numeric(
            x.data, x.mask, *rule._scan_args, True, 1e-8)
    elif not rule.missing_ok:
        status, i, _ = kernels.missing(x.mask, False, False)
    else:
        return True
    if status == kernels.OK:
        return True
    where = f'element {i + 1}'
    if status == kernels.MISSING or status == kernels.MISSING_NAN:
        return missing_failure(status, where)
    v = x.data[i]
    v = bool(v) if tag is TypeTag.BOOL else (int(v) if tag is TypeTag.INT else float(v))
    bounds = rule.range if rule.range is not None else Bounds()
    if status == kernels.NOT_INTEGERISH:
        return f'Must be integerish, but has value {fmt_value(v)} ({where})'
    if status == kernels.BELOW:
        return bounds.lower_failure(v, where)
    return bounds.upper_failure(v, where)


def qcheck(x, rule):
    return eval_rule(as_value(x), compile_rule(rule))


def qtest(x, rule):
    return eval_rule(as_value(x), compile_rule(rule)) is True


qtest.__test__ = False


def qassert(x, rule, label='x'):
    """Return ``x`` unchanged if it satisfies ``rule``, else raise ValidationError."""
    outcome = eval_rule(as_value(x), compile_rule(rule))
    if outcome is not True:
        raise ValidationError(f"Assertion on '{label}' failed: {outcome}",
                              label=label, reason=outcome)
    return x


def qexpect(x, rule, label='x', *, reporter):
    from .api import ExpectationRecord
    compiled = compile_rule(rule)
    outcome = eval_rule(as_value(x), compiled)
    passed = outcome is True
    hint = rule if isinstance(rule, str) else 'qexpect'
    reporter.report(ExpectationRecord(label, passed, None if passed else outcome, hint))
    return passed


def rule_to_spec(rule):
    """Structured spec with the same acceptance set, or None if there is none.

    Codes ``a``, ``v`` and ``0`` and multi-code rules have no spec form.
    """
    rule = compile_rule(rule)
    if len(rule.class_codes) != 1:
        return None
    (code,) = rule.class_codes
    if code in (ClassCode.ATOMIC, ClassCode.ATOMIC_VECTOR, ClassCode.NULL):
        return None
    length = rule.length.to_constraint()
    if length is None:
        return None
    return VectorSpec(
        CODE_TAGS[code],
        integerish=code is ClassCode.INTEGERISH,
        any_missing_ok=rule.missing_ok,
        length=length,
        bounds=rule.range,
    )
